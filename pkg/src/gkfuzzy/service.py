"""HTTP scoring service with candidate persistence.

One evaluation path shared with the CLI: responses from ``POST
/api/evaluate`` are rendered by :func:`gkfuzzy.gk.render_report_json`, so
they are byte-identical to ``gkfuzzy score --format json`` for the same
rule base.

Candidates live in an append-only line-delimited JSON file with tombstone
lines for deletions; replaying the file on startup reconstructs the exact
visible state. All writes go through a single lock; evaluations read an
immutable rule-base snapshot that ``PUT /api/rulebase`` swaps atomically.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .gk import (
    ProfileError,
    QualityLevel,
    classify_term,
    evaluation_report,
    generate_gk_rulebase,
    profile_from_mapping,
    render_report_json,
)
from .inference import InputMismatchError, InputRangeError, RuleBase, evaluate
from .ruledsl import RuleBaseSyntaxError, format_rulebase, parse_rulebase

DEFAULT_PORT = 8000
DEFAULT_STORE = "candidates.jsonl"
PORT_ENV = "GKFUZZY_PORT"
STORE_ENV = "GKFUZZY_STORE"
CORS_ENV = "GKFUZZY_CORS_ORIGIN"

_VERSION_PREFIX = "# version "


class StoreCorruptedError(RuntimeError):
    """The store file has an unreadable line before the final one."""


class CandidateStore:
    """Append-only JSONL record store with tombstones.

    Every mutation is one complete line, flushed before it is acknowledged.
    A torn final line (crash mid-write) is discarded on open; damage
    anywhere else raises :class:`StoreCorruptedError`.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._index: dict[str, dict] = {}
        self._replay()
        self._fh = open(self.path, "a", encoding="utf-8")

    def _replay(self) -> None:
        if not self.path.exists():
            self.path.touch()
            return
        raw = self.path.read_bytes()
        keep = len(raw)
        lines = raw.split(b"\n")
        trailing = lines.pop() if lines and lines[-1] != b"" else None
        if trailing is not None:
            # final line was not newline-terminated; keep it only if complete
            try:
                entry = json.loads(trailing.decode("utf-8"))
                self._apply(entry)
            except (ValueError, KeyError):
                keep = len(raw) - len(trailing)
            else:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write("\n")
                keep = -1  # already repaired
        for i, line in enumerate(lines):
            if line == b"":
                continue
            try:
                entry = json.loads(line.decode("utf-8"))
                self._apply(entry)
            except (ValueError, KeyError) as exc:
                raise StoreCorruptedError(
                    f"{self.path}: unreadable record on line {i + 1}: {exc}"
                ) from exc
        if keep >= 0 and keep < len(raw):
            with open(self.path, "r+b") as fh:
                fh.truncate(keep)

    def _apply(self, entry: Mapping) -> None:
        op = entry["op"]
        cid = entry["id"]
        if op == "put":
            record = dict(entry)
            record.pop("op")
            self._index.pop(cid, None)
            self._index[cid] = record
        elif op == "delete":
            self._index.pop(cid, None)
        else:
            raise KeyError(f"unknown op {op!r}")

    def _append(self, entry: dict) -> None:
        self._fh.write(json.dumps(entry) + "\n")
        self._fh.flush()

    def put(self, record: dict) -> None:
        with self._lock:
            self._append({"op": "put", **record})
            self._index.pop(record["id"], None)
            self._index[record["id"]] = dict(record)

    def delete(self, cid: str) -> bool:
        with self._lock:
            if cid not in self._index:
                return False
            self._append({"op": "delete", "id": cid})
            self._index.pop(cid)
            return True

    def get(self, cid: str) -> dict | None:
        rec = self._index.get(cid)
        return dict(rec) if rec is not None else None

    def records(self) -> list[dict]:
        """All live records in insertion order."""
        return [dict(r) for r in self._index.values()]

    def __contains__(self, cid: str) -> bool:
        return cid in self._index

    def __len__(self) -> int:
        return len(self._index)

    def close(self) -> None:
        self._fh.close()


@dataclass(frozen=True)
class EngineSnapshot:
    """Immutable pairing of a rule base with its version and canonical text."""

    rulebase: RuleBase
    version: int
    canonical: str


def _sidecar_path(store_path: str | Path) -> Path:
    return Path(f"{store_path}.rulebase.frb")


def _load_snapshot(store_path: str | Path, rulebase: RuleBase | None) -> EngineSnapshot:
    if rulebase is not None:
        return EngineSnapshot(rulebase, 1, format_rulebase(rulebase))
    sidecar = _sidecar_path(store_path)
    if sidecar.exists():
        text = sidecar.read_text(encoding="utf-8")
        version = 1
        first = text.splitlines()[0] if text else ""
        if first.startswith(_VERSION_PREFIX):
            try:
                version = int(first[len(_VERSION_PREFIX):].strip())
            except ValueError:
                version = 1
        restored = parse_rulebase(text)
        return EngineSnapshot(restored, version, format_rulebase(restored))
    rb = generate_gk_rulebase()
    return EngineSnapshot(rb, 1, format_rulebase(rb))


def _persist_snapshot(store_path: str | Path, snapshot: EngineSnapshot) -> None:
    sidecar = _sidecar_path(store_path)
    tmp = sidecar.with_suffix(".tmp")
    tmp.write_text(
        f"{_VERSION_PREFIX}{snapshot.version}\n{snapshot.canonical}", encoding="utf-8"
    )
    os.replace(tmp, sidecar)


def _score_fields(rulebase: RuleBase, profile: Mapping[str, float]) -> tuple[float, str]:
    trace = evaluate(rulebase, dict(profile))
    label = classify_term(rulebase.output_variable, trace.crisp_output)
    try:
        display = QualityLevel.from_label(label).display
    except KeyError:
        display = label
    return trace.crisp_output, display


def create_app(
    store_path: str | Path | None = None,
    rulebase: RuleBase | None = None,
    cors_origin: str | None = None,
) -> FastAPI:
    """Build the scoring service around a candidate store file."""
    store_path = Path(store_path or os.environ.get(STORE_ENV, DEFAULT_STORE))
    cors_origin = cors_origin or os.environ.get(CORS_ENV, "*")

    app = FastAPI(title="goalkeeper scoring service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    store = CandidateStore(store_path)
    swap_lock = threading.Lock()
    app.state.store = store
    app.state.engine = _load_snapshot(store_path, rulebase)

    def record_payload(rec: dict, snapshot: EngineSnapshot) -> dict:
        """Record as served; stale cached scores are recomputed on read."""
        score_full = rec["score_full"]
        level = rec["level"]
        version = rec["rulebase_version"]
        if version != snapshot.version:
            score_full, level = _score_fields(snapshot.rulebase, rec["profile"])
            version = snapshot.version
        return {
            "id": rec["id"],
            "name": rec["name"],
            "profile": rec["profile"],
            "created_at": rec["created_at"],
            "score": round(score_full, 1),
            "score_full": score_full,
            "level": level,
            "rulebase_version": version,
        }

    async def read_json(request: Request) -> tuple[object | None, Response | None]:
        body = await request.body()
        try:
            return json.loads(body), None
        except ValueError:
            return None, JSONResponse({"error": "malformed JSON body"}, status_code=422)

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "rulebase_version": app.state.engine.version,
            "candidates": len(store),
        }

    @app.post("/api/evaluate")
    async def evaluate_profile(request: Request) -> Response:
        data, err = await read_json(request)
        if err is not None:
            return err
        if not isinstance(data, dict):
            return JSONResponse({"error": "profile must be a JSON object"}, status_code=400)
        snapshot: EngineSnapshot = app.state.engine
        try:
            profile = profile_from_mapping(data)
            payload = evaluation_report(snapshot.rulebase, profile.as_inputs())
        except ProfileError as exc:
            return JSONResponse(
                {"errors": [{"field": f, "message": m} for f, m in exc.errors]},
                status_code=400,
            )
        except (InputRangeError, InputMismatchError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return Response(render_report_json(payload), media_type="application/json")

    @app.post("/api/candidates")
    async def create_candidate(request: Request) -> Response:
        data, err = await read_json(request)
        if err is not None:
            return err
        if not isinstance(data, dict) or not isinstance(data.get("profile"), dict):
            return JSONResponse(
                {"error": "body must be an object with a 'profile' object"}, status_code=400
            )
        snapshot: EngineSnapshot = app.state.engine
        try:
            profile = profile_from_mapping(data["profile"])
            score_full, level = _score_fields(snapshot.rulebase, profile.as_inputs())
        except ProfileError as exc:
            return JSONResponse(
                {"errors": [{"field": f, "message": m} for f, m in exc.errors]},
                status_code=400,
            )
        except (InputRangeError, InputMismatchError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        cid = str(data.get("id") or uuid.uuid4().hex)
        if cid in store:
            return JSONResponse({"error": f"candidate {cid!r} already exists"}, status_code=409)
        record = {
            "id": cid,
            "name": str(data.get("name", "")),
            "profile": profile.as_dict(),
            "created_at": datetime.now(timezone.utc).isoformat(),
            "score_full": score_full,
            "level": level,
            "rulebase_version": snapshot.version,
        }
        store.put(record)
        return JSONResponse(record_payload(record, snapshot), status_code=201)

    @app.get("/api/candidates")
    def list_candidates() -> JSONResponse:
        snapshot: EngineSnapshot = app.state.engine
        payloads = [record_payload(rec, snapshot) for rec in store.records()]
        order = sorted(range(len(payloads)), key=lambda i: -payloads[i]["score_full"])
        ranked = []
        for pos, i in enumerate(order):
            item = payloads[i]
            prev_tie = pos > 0 and payloads[order[pos - 1]]["score_full"] == item["score_full"]
            next_tie = (
                pos + 1 < len(order)
                and payloads[order[pos + 1]]["score_full"] == item["score_full"]
            )
            ranked.append({**item, "rank": pos + 1, "tied": prev_tie or next_tie})
        return JSONResponse(ranked)

    @app.get("/api/candidates/{cid}")
    def get_candidate(cid: str) -> JSONResponse:
        rec = store.get(cid)
        if rec is None:
            return JSONResponse({"error": f"no candidate {cid!r}"}, status_code=404)
        return JSONResponse(record_payload(rec, app.state.engine))

    @app.delete("/api/candidates/{cid}")
    def delete_candidate(cid: str) -> JSONResponse:
        if not store.delete(cid):
            return JSONResponse({"error": f"no candidate {cid!r}"}, status_code=404)
        return JSONResponse({"deleted": cid})

    @app.get("/api/rulebase")
    def get_rulebase() -> PlainTextResponse:
        snapshot: EngineSnapshot = app.state.engine
        return PlainTextResponse(
            snapshot.canonical,
            headers={"X-Rulebase-Version": str(snapshot.version)},
        )

    @app.put("/api/rulebase")
    async def put_rulebase(request: Request) -> JSONResponse:
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            rb = parse_rulebase(text)
        except RuleBaseSyntaxError as exc:
            d = exc.diagnostic
            return JSONResponse(
                {
                    "error": {
                        "code": d.code,
                        "message": d.message,
                        "line": d.line,
                        "column": d.column,
                    }
                },
                status_code=400,
            )
        with swap_lock:
            snapshot = EngineSnapshot(
                rb, app.state.engine.version + 1, format_rulebase(rb)
            )
            _persist_snapshot(store_path, snapshot)
            app.state.engine = snapshot
        return JSONResponse({"version": snapshot.version})

    return app
