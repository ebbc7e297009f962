"""Command-line front end: score, compare, gen-rules, serve.

Exit codes: 0 success, 1 environment problem (unreadable file, busy port),
2 invalid input (bad profile values, malformed CSV, parse errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import socket
import sys
from collections import Counter
from pathlib import Path

from .gk import (
    ATTRIBUTES,
    ProfileError,
    QualityLevel,
    evaluation_report,
    generate_gk_rulebase,
    profile_from_mapping,
    rank_candidates,
    render_report_json,
)
from .inference import InputMismatchError, InputRangeError, RuleBase
from .ruledsl import RuleBaseSyntaxError, format_rulebase, parse_rulebase
from .service import DEFAULT_PORT, DEFAULT_STORE, PORT_ENV, STORE_ENV, create_app

PROFILE_FLAGS = (
    ("--exit", "exit_from_goal"),
    ("--flex", "flexibility"),
    ("--overhead", "overhead_dominance"),
    ("--connect", "establishing_connection"),
    ("--courage", "courage"),
    ("--lead", "leadership"),
    ("--battles", "person_battles"),
    ("--height", "height_cm"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkfuzzy",
        description="Goalkeeper quality scoring on a fuzzy rule base.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score a single profile")
    for flag, field in PROFILE_FLAGS:
        p_score.add_argument(flag, dest=field, metavar="VALUE",
                             help=f"{field}: number or linguistic label")
    p_score.add_argument("--profile", metavar="FILE", help="profile JSON file instead of flags")
    p_score.add_argument("--rulebase", metavar="FILE", help="custom .frb rule base")
    p_score.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p_score.add_argument("--explain", action="store_true", help="show strongest rules and degrees")
    p_score.add_argument("--top", type=int, default=3, help="rules to show with --explain")
    p_score.set_defaults(func=cmd_score)

    p_cmp = sub.add_parser("compare", help="rank candidates from a CSV file")
    p_cmp.add_argument("csv_path", metavar="CSV", help="columns: name plus the profile fields")
    p_cmp.add_argument("--rulebase", metavar="FILE")
    p_cmp.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p_cmp.set_defaults(func=cmd_compare)

    p_gen = sub.add_parser("gen-rules", help="write the generated rule base as canonical .frb")
    p_gen.add_argument("out_path", metavar="OUT", help="output file, or - for stdout")
    p_gen.add_argument("--summary", action="store_true", help="print per-level rule counts")
    p_gen.set_defaults(func=cmd_gen_rules)

    p_srv = sub.add_parser("serve", help="run the HTTP scoring service")
    p_srv.add_argument("--port", type=int, default=int(os.environ.get(PORT_ENV, DEFAULT_PORT)))
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--store", default=os.environ.get(STORE_ENV, DEFAULT_STORE))
    p_srv.add_argument("--rulebase", metavar="FILE")
    p_srv.set_defaults(func=cmd_serve)

    return parser


def _load_rulebase(path: str | None) -> RuleBase | int:
    """Parse a .frb file, or generate the default base when no path given."""
    if path is None:
        return generate_gk_rulebase()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"gkfuzzy: cannot read rule base: {exc}", file=sys.stderr)
        return 1
    try:
        return parse_rulebase(text)
    except RuleBaseSyntaxError as exc:
        print(f"gkfuzzy: {path}: {exc}", file=sys.stderr)
        return 2


def cmd_score(args: argparse.Namespace) -> int:
    rb = _load_rulebase(args.rulebase)
    if isinstance(rb, int):
        return rb

    if args.profile:
        try:
            data = json.loads(Path(args.profile).read_text(encoding="utf-8"))
        except OSError as exc:
            print(f"gkfuzzy: cannot read profile: {exc}", file=sys.stderr)
            return 1
        except ValueError as exc:
            print(f"gkfuzzy: {args.profile}: invalid JSON: {exc}", file=sys.stderr)
            return 2
    else:
        data = {field: getattr(args, field) for _, field in PROFILE_FLAGS}
        missing = [flag for flag, field in PROFILE_FLAGS if data[field] is None]
        if missing:
            print(f"usage: {build_parser().prog} score [flags]", file=sys.stderr)
            print(
                f"gkfuzzy: missing required flags: {' '.join(missing)} "
                "(or use --profile FILE)",
                file=sys.stderr,
            )
            return 2

    try:
        profile = profile_from_mapping(data)
        payload = evaluation_report(rb, profile.as_inputs())
    except ProfileError as exc:
        for fld, msg in exc.errors:
            print(f"gkfuzzy: {fld}: {msg}", file=sys.stderr)
        return 2
    except (InputRangeError, InputMismatchError) as exc:
        print(f"gkfuzzy: {exc}", file=sys.stderr)
        return 2

    if args.format == "json":
        sys.stdout.write(render_report_json(payload))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["score", "score_full", "level"])
        writer.writerow([f"{payload['score']:.1f}", repr(payload["score_full"]), payload["level"]])
    else:
        print(f"score: {payload['score']:.1f}")
        print(f"level: {payload['level']}")
        if args.explain:
            print("strongest rules:")
            shown = payload["top_rules"][: max(1, args.top)]
            for act in shown:
                print(f"  [{act['index']}] strength {act['strength']:.4f}: {act['rule']}")
            print("attribute degrees:")
            for attr, table in payload["degrees"].items():
                degs = ", ".join(f"{term}={deg:.4f}" for term, deg in table.items())
                print(f"  {attr}: {degs}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    rb = _load_rulebase(args.rulebase)
    if isinstance(rb, int):
        return rb
    try:
        text = Path(args.csv_path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"gkfuzzy: cannot read CSV: {exc}", file=sys.stderr)
        return 1

    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    needed = ["name", *ATTRIBUTES]
    missing_cols = [c for c in needed if c not in header]
    if missing_cols:
        print(f"gkfuzzy: CSV is missing columns: {', '.join(missing_cols)}", file=sys.stderr)
        return 2

    candidates = []
    bad = False
    for lineno, row in enumerate(reader, start=2):
        try:
            profile = profile_from_mapping(row)
        except ProfileError as exc:
            bad = True
            for fld, msg in exc.errors:
                print(f"gkfuzzy: row {lineno} ({row.get('name', '?')}): {fld}: {msg}",
                      file=sys.stderr)
            continue
        candidates.append((row["name"], profile))
    if bad:
        return 2
    if not candidates:
        print("gkfuzzy: CSV contains no candidate rows", file=sys.stderr)
        return 2

    ranked = rank_candidates(candidates, rb)
    rows = [
        {
            "rank": r.rank,
            "name": r.candidate_id,
            "score": round(r.scored.score, 1),
            "score_full": r.scored.score,
            "level": r.scored.level.display,
            "tied": r.tied,
        }
        for r in ranked
    ]
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["rank", "name", "score", "score_full", "level", "tied"])
        for row in rows:
            writer.writerow([
                row["rank"], row["name"], f"{row['score']:.1f}",
                repr(row["score_full"]), row["level"], row["tied"],
            ])
    else:
        name_w = max(4, *(len(r["name"]) for r in rows))
        level_w = max(5, *(len(r["level"]) for r in rows))
        print(f"{'rank':<5} {'name':<{name_w}} {'score':>6} {'level':<{level_w}} tie")
        for row in rows:
            tie = "tied" if row["tied"] else ""
            print(
                f"{row['rank']:<5} {row['name']:<{name_w}} {row['score']:>6.1f} "
                f"{row['level']:<{level_w}} {tie}".rstrip()
            )
    return 0


def cmd_gen_rules(args: argparse.Namespace) -> int:
    rb = generate_gk_rulebase()
    text = format_rulebase(rb)
    if args.out_path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(args.out_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"gkfuzzy: cannot write {args.out_path}: {exc}", file=sys.stderr)
            return 1
    if args.summary:
        counts = Counter(rule.consequent[1] for rule in rb.rules)
        for level in reversed(QualityLevel):
            print(f"{level.display} {counts[level.label]}")
        print(f"{len(rb.rules)} rules")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    rulebase = None
    if args.rulebase:
        loaded = _load_rulebase(args.rulebase)
        if isinstance(loaded, int):
            return loaded
        rulebase = loaded

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"gkfuzzy: cannot listen on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    import uvicorn

    app = create_app(store_path=args.store, rulebase=rulebase)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
