import io
import json
import math
import time
from pathlib import Path

import pytest

from nondet import StateSet, gcl, wp_do, wp_if
from nondet.frontend import cli
from nondet.frontend.lang import parse_program, predicate_set, program_to_quilt

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestSuccess:
    def test_analyze_t3(self):
        result = run_json("analyze", DATA / "t3.json")
        assert result == {"dyn": ["a", "c"], "fix": ["c"], "stab": ["c"], "con": ["c"], "con_w": ["a", "c"]}

    def test_analyze_program_reports_guard_and_hang(self):
        result = run_json("analyze", DATA / "gcd.gcl")
        assert len(result["hang"]) == 14
        assert len(result["guard"]) == 56
        assert result["fix"] == sorted(
            set(result["hang"]) | {f"(x={v}, y={v})" for v in range(8)},
            key=lambda name: [int(part.split("=")[1]) for part in name.strip("()").split(", ")],
        )

    def test_runs_t3(self):
        result = run_json("runs", DATA / "t3.json", "--from", "a", "--max-len", "1")
        assert result == [
            {"states": ["a", "b"], "classification": "aborted"},
            {"states": ["a", "c"], "classification": "terminal"},
        ]

    def test_runs_on_if_program_use_alternative_map(self):
        result = run_json("runs", DATA / "max.gcl", "--from", "(x=0, y=0, m=3)", "--max-len", "2")
        # m := 0 lands on a state the alternative map leaves fixed
        assert result == [{"states": ["(x=0, y=0, m=3)", "(x=0, y=0, m=0)"], "classification": "terminal"}]

    def test_gcd_wp(self):
        start = time.perf_counter()
        result = run_json("wp", DATA / "gcd.gcl", "--post", "x == y")
        elapsed = time.perf_counter() - start
        expected = [f"(x={x}, y={y})" for x in range(8) for y in range(8) if (x > 0 and y > 0) or x == y == 0]
        assert result == expected
        assert elapsed < 1.0

    @pytest.mark.parametrize("name, post", [("max.gcl", "m >= x && m >= y"), ("gcd.gcl", "x + y < 6")])
    def test_wp_matches_library(self, name, post):
        path = DATA / name
        program = parse_program(path.read_text())
        q = program_to_quilt(program)
        a = predicate_set(program.space, post)
        lib = wp_if(q, a) if program.construct == "if" else wp_do(q, a)
        code, out, _ = run("wp", path, "--post", post)
        assert code == 0
        assert out == json.dumps(lib.names()) + "\n"

    def test_wp_and_basin_on_structure(self):
        assert run_json("wp", DATA / "t3.json", "--post", '["b", "c"]') == ["a", "c"]
        assert run_json("basin", DATA / "walk.json", "--target", '["0"]') == ["0"]
        # the hang state (2,0) is a fixed point of the quilt map; (0,2) has x = 0
        expected = [f"(x={x}, y={y})" for x in range(8) for y in range(8) if math.gcd(x, y) == 2 and x]
        assert run_json("basin", DATA / "gcd.gcl", "--target", "x == 2") == expected

    def test_check_structure(self):
        report = run_json("check", DATA / "walk.json", "--seed", "4")
        assert set(report.values()) <= {"pass", "exhaustive"}

    def test_check_program(self):
        assert run_json("check", DATA / "gcd.gcl", "--invariant", "x > 0 && y > 0")["verdict"] == "pass"
        results = run_json("check", DATA / "gcd.gcl", "--invariant", "x == 6", "--pre", "x > y && y > 0", "--post", "x > 0")
        assert [r["verdict"] for r in results] == ["hypothesis-not-met", "pass"]
        assert results[0]["witness"] == "(x=6, y=1)"

    def test_text_format(self):
        code, out, _ = run("analyze", DATA / "t3.json", "--format", "text")
        assert code == 0
        assert out.splitlines()[0] == "dyn: {a, c}"
        code, out, _ = run("runs", DATA / "t3.json", "--from", "a", "--max-len", "1", "--format", "text")
        assert out.splitlines() == ["aborted: a -> b", "terminal: a -> c"]

    def test_verbose_reports_strengthening(self):
        code, _, err = run("analyze", DATA / "stop_or_count.gcl", "--verbose")
        assert code == 0
        assert "command 2" in err and "dropping 1 states" in err

    def test_help(self):
        code, _, _ = run("--help")
        assert code == 0


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate", "x"],
            ["wp", str(DATA / "t3.json")],
            ["runs", str(DATA / "t3.json"), "--from", "a", "--max-len", "0"],
            ["runs", str(DATA / "t3.json"), "--from", "a", "--max-len", "two"],
            ["check", str(DATA / "gcd.gcl")],
            ["check", str(DATA / "gcd.gcl"), "--pre", "x > 0"],
            ["analyze", "/nonexistent/file.json"],
            ["analyze", str(DATA / "t3.json"), "--format", "yaml"],
        ],
    )
    def test_usage(self, argv):
        code, _, _ = run(*argv)
        assert code == 1

    def test_parse_errors(self, tmp_path):
        bad_program = write(tmp_path, "bad.gcl", "space { x : 0..3; }\ndo :: x > -> x := 1 od\n")
        code, _, err = run("analyze", bad_program)
        assert code == 1
        assert f"{bad_program}:2:" in err
        bad_json = write(tmp_path, "bad.json", '{"states": ["a",]}')
        assert run("analyze", bad_json)[0] == 1
        assert run("wp", DATA / "t3.json", "--post", "not json")[0] == 1
        assert run("wp", DATA / "gcd.gcl", "--post", "x ==")[0] == 1
        binary = tmp_path / "x.bin"
        binary.write_bytes(b"\xff\xfe\x00")
        assert run("analyze", binary)[0] == 1

    def test_semantic_errors(self, tmp_path):
        assert run("runs", DATA / "t3.json", "--from", "zz", "--max-len", "2")[0] == 2
        assert run("wp", DATA / "t3.json", "--post", '["a", "zz"]')[0] == 2
        assert run("wp", DATA / "gcd.gcl", "--post", "z == 1")[0] == 2
        dup = write(tmp_path, "dup.json", '{"states": ["a", "a"]}')
        assert run("analyze", dup)[0] == 2
        unknown = write(tmp_path, "unk.json", '{"states": ["a"], "delta": {"a": ["b"]}}')
        code, _, err = run("analyze", unknown)
        assert code == 2 and "'b'" in err
        twice = write(tmp_path, "twice.gcl", "space { x : 0..3; } do :: true -> x := 1, x := 2 od")
        assert run("analyze", twice)[0] == 2

    def test_invariant_violation_structure(self, monkeypatch):
        # inject a faulty second basin route; the cross-check must catch it
        monkeypatch.setattr(
            cli.dynamics, "basin_by_iterated_inverse", lambda delta, a: StateSet(delta.space, 0)
        )
        code, out, err = run("check", DATA / "t3.json")
        assert code == 3
        assert json.loads(out)["basin"] == "fail"
        assert "invariant" in err

    def test_invariant_violation_program(self, monkeypatch):
        real = gcl.if_delta

        def broken(q):
            delta = real(q)
            return type(delta)(delta.space, [m | 1 for m in delta.masks])

        monkeypatch.setattr(gcl, "if_delta", broken)
        code, out, _ = run("check", DATA / "gcd.gcl", "--pre", "x > y && y > 0", "--post", "x > 0")
        assert code == 3
        assert json.loads(out)[0]["verdict"] == "violation"
