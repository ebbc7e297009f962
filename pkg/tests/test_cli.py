from __future__ import annotations

import json
import os
import signal
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from gkfuzzy import parse_rulebase
from gkfuzzy.cli import main
from gkfuzzy.service import CandidateStore, create_app
from oracles import TABLE3

GK1_FLAGS = [
    "--exit", "7", "--flex", "4", "--overhead", "7", "--connect", "8",
    "--courage", "7", "--lead", "9", "--battles", "4", "--height", "187",
]
GK2_FLAGS = [
    "--exit", "6", "--flex", "7", "--overhead", "5", "--connect", "8",
    "--courage", "8", "--lead", "9", "--battles", "3", "--height", "198",
]

TABLE3_CSV = """name,exit_from_goal,flexibility,overhead_dominance,establishing_connection,courage,leadership,person_battles,height_cm
GK1,7,4,7,8,7,9,4,187
GK2,6,7,5,8,8,9,3,198
GK3,6,5,7,9,7,9,6,195
"""


class TestScore:
    def test_reference_profile_prints_score_and_level(self, capsys, gk_rulebase):
        assert main(["score", *GK1_FLAGS]) == 0
        out = capsys.readouterr().out
        from gkfuzzy import score_gk

        expected = score_gk(TABLE3["GK1"], gk_rulebase).score
        assert f"score: {expected:.1f}" in out
        assert "level:" in out

    def test_label_value_accepted(self, capsys):
        flags = list(GK1_FLAGS)
        flags[flags.index("--flex") + 1] = "good"
        assert main(["score", *flags]) == 0
        assert "score:" in capsys.readouterr().out

    def test_missing_flag_exits_2_with_usage(self, capsys):
        assert main(["score", "--exit", "7"]) == 2
        err = capsys.readouterr().err
        assert "usage" in err and "--flex" in err

    def test_out_of_range_exits_2(self, capsys):
        flags = list(GK1_FLAGS)
        flags[flags.index("--height") + 1] = "260"
        assert main(["score", *flags]) == 2
        assert "height_cm" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self, capsys):
        assert main(["score", "--exit", "7", "--nope", "1"]) == 2

    def test_json_matches_service_body_bytes(self, capsys, tmp_path):
        assert main(["score", *GK2_FLAGS, "--format", "json"]) == 0
        out = capsys.readouterr().out
        app = create_app(store_path=tmp_path / "c.jsonl")
        with TestClient(app) as client:
            body = client.post(
                "/api/evaluate",
                json={
                    "exit_from_goal": 6, "flexibility": 7, "overhead_dominance": 5,
                    "establishing_connection": 8, "courage": 8, "leadership": 9,
                    "person_battles": 3, "height_cm": 198,
                },
            ).content
        assert out.encode() == body

    def test_explain_output(self, capsys):
        assert main(["score", *GK1_FLAGS, "--explain", "--top", "2"]) == 0
        out = capsys.readouterr().out
        assert "strongest rules:" in out
        assert "IF " in out and "THEN quality is" in out
        assert "attribute degrees:" in out

    def test_profile_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(TABLE3["GK3"].as_dict()))
        assert main(["score", "--profile", str(path)]) == 0
        assert "score:" in capsys.readouterr().out

    def test_profile_file_invalid_json_exits_2(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("{nope")
        assert main(["score", "--profile", str(path)]) == 2

    def test_missing_profile_file_exits_1(self, capsys, tmp_path):
        assert main(["score", "--profile", str(tmp_path / "absent.json")]) == 1

    def test_csv_format(self, capsys):
        assert main(["score", *GK1_FLAGS, "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "score,score_full,level"

    def test_custom_rulebase_file(self, capsys, tmp_path):
        out_path = tmp_path / "rb.frb"
        assert main(["gen-rules", str(out_path)]) == 0
        capsys.readouterr()
        assert main(["score", *GK1_FLAGS, "--rulebase", str(out_path)]) == 0
        assert "score:" in capsys.readouterr().out


class TestCompare:
    def test_reference_csv_ranks_gk3_first(self, capsys, tmp_path):
        path = tmp_path / "gk.csv"
        path.write_text(TABLE3_CSV)
        assert main(["compare", str(path)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("rank")
        assert lines[1].split()[1] == "GK3"
        assert lines[3].split()[1] == "GK1"

    def test_single_row(self, capsys, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("\n".join(TABLE3_CSV.splitlines()[:2]) + "\n")
        assert main(["compare", str(path)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2

    def test_duplicate_rows_tie_flagged(self, capsys, tmp_path):
        rows = TABLE3_CSV.splitlines()
        path = tmp_path / "dup.csv"
        path.write_text("\n".join([rows[0], rows[1], rows[1]]) + "\n")
        assert main(["compare", str(path)]) == 0
        out = capsys.readouterr().out
        assert out.count("tied") == 2

    def test_invalid_row_exits_2_with_row_diagnostics(self, capsys, tmp_path):
        rows = TABLE3_CSV.splitlines()
        bad = rows[2].replace("198", "320")
        path = tmp_path / "bad.csv"
        path.write_text("\n".join([rows[0], rows[1], bad, rows[3]]) + "\n")
        assert main(["compare", str(path)]) == 2
        err = capsys.readouterr().err
        assert "row 3" in err and "height_cm" in err

    def test_missing_column_exits_2(self, capsys, tmp_path):
        path = tmp_path / "cols.csv"
        path.write_text("name,flexibility\nGK1,4\n")
        assert main(["compare", str(path)]) == 2
        assert "missing columns" in capsys.readouterr().err

    def test_column_order_is_free(self, capsys, tmp_path):
        header = "height_cm,name,person_battles,leadership,courage,establishing_connection,overhead_dominance,flexibility,exit_from_goal"
        row = "187,GK1,4,9,7,8,7,4,7"
        path = tmp_path / "shuffled.csv"
        path.write_text(f"{header}\n{row}\n")
        assert main(["compare", str(path)]) == 0
        assert "GK1" in capsys.readouterr().out

    def test_json_format(self, capsys, tmp_path):
        path = tmp_path / "gk.csv"
        path.write_text(TABLE3_CSV)
        assert main(["compare", str(path), "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [r["name"] for r in rows] == ["GK3", "GK2", "GK1"]

    def test_missing_file_exits_1(self, capsys, tmp_path):
        assert main(["compare", str(tmp_path / "absent.csv")]) == 1


class TestGenRules:
    def test_file_roundtrips_to_equal_model(self, capsys, tmp_path, gk_rulebase):
        path = tmp_path / "out.frb"
        assert main(["gen-rules", str(path)]) == 0
        assert parse_rulebase(path.read_text()) == gk_rulebase

    def test_summary_counts(self, capsys, tmp_path):
        path = tmp_path / "out.frb"
        assert main(["gen-rules", str(path), "--summary"]) == 0
        out = capsys.readouterr().out
        assert "Ordinary 70" in out
        assert "Excellent 1" in out
        assert "Relatively good 56" in out
        assert out.strip().endswith("256 rules")

    def test_stdout_target(self, capsys):
        assert main(["gen-rules", "-"]) == 0
        assert capsys.readouterr().out.count("rule:") == 256

    def test_unwritable_path_exits_1(self, capsys, tmp_path):
        assert main(["gen-rules", str(tmp_path / "missing" / "out.frb")]) == 1


class TestServe:
    def test_port_busy_exits_1(self, capsys):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        try:
            assert main(["serve", "--port", str(port)]) == 1
            assert "cannot listen" in capsys.readouterr().err
        finally:
            blocker.close()

    def test_serve_health_and_clean_interrupt(self, tmp_path):
        probe = socket.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
        store = tmp_path / "c.jsonl"
        proc = subprocess.Popen(
            [sys.executable, "-m", "gkfuzzy.cli", "serve", "--port", str(port),
             "--store", str(store)],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        base = f"http://127.0.0.1:{port}"
        try:
            deadline = time.time() + 20.0
            while True:
                try:
                    with urllib.request.urlopen(f"{base}/api/health", timeout=1) as r:
                        assert json.loads(r.read())["status"] == "ok"
                    break
                except OSError:
                    if time.time() > deadline:
                        raise
                    time.sleep(0.1)
            body = json.dumps(
                {"id": "x", "name": "X", "profile": TABLE3["GK1"].as_dict()}
            ).encode()
            req = urllib.request.Request(
                f"{base}/api/candidates", data=body,
                headers={"content-type": "application/json"},
            )
            with urllib.request.urlopen(req, timeout=5) as r:
                assert r.status == 201
        finally:
            proc.send_signal(signal.SIGINT)
            try:
                proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        replayed = CandidateStore(store)
        assert replayed.get("x") is not None
