"""CLI contract: exit codes, report fields, determinism, golden transcripts.

Golden files live in tests/golden; regenerate with
``python3 tests/test_cli.py --regen`` after reviewing the diff by hand.
"""

import json
import sys
from pathlib import Path

import pytest

from bairelogic.cli import Report, dispatch, main, report_render

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

BD2 = "<>p1 & <>p2 & <>p3 -> <>(p1 & p2) | <>(p1 & p3) | <>(p2 & p3)"

CASES = {
    "decide_s5_axiom5": (["decide", "--logic", "s5", "<>p0 -> []<>p0"], 0),
    "decide_s5_bd2": (["decide", BD2], 1),
    "decide_s5n_bd2": (["decide", "--logic", "s5n", "--n", "2", BD2], 0),
    "decide_s5u_shehtman": (["decide", "--logic", "s5u", "A([]p1 | []~p1) -> Ap1 | A~p1"], 1),
    "decide_s5u_one_cluster": (["decide", "--logic", "s5u", "--max-clusters", "1",
                                "A([]p1 | []~p1) -> Ap1 | A~p1"], 0),
    "classify_bd2": (["classify", BD2], 0),
    "parse_shehtman": (["parse", "A([]p0 | []~p0) -> Ap0 | A~p0"], 0),
    "quotient_ab": (["quotient", "--frame", "frames/ab.json", "--verify", "monadic", "--show-qmax"], 0),
    "quotient_fork": (["quotient", "--frame", "frames/fork.json", "--verify", "monadic"], 0),
    "valid_bd1_c2": (["valid", "<>p1 & <>p2 -> <>(p1 & p2)", "--frame", "frames/c2.json"], 1),
    "valid_t_quotient": (["valid", "p1 -> <>p1", "--quotient-of-frame", "frames/fork.json"], 0),
    "resolve_c2_k2": (["resolve", "--frame", "frames/c2.json", "--k", "2"], 0),
    "resolve_c2_k3": (["resolve", "--frame", "frames/c2.json", "--k", "3"], 1),
    "disconnect_two": (["disconnect", "--frame", "frames/two_c2.json", "--k", "2"], 0),
    "disconnect_c2": (["disconnect", "--frame", "frames/c2.json", "--k", "2"], 1),
    "map_check_constant": (["map-check", "--map", "maps/c2_to_c1.json"], 0),
    "map_check_one_component": (["map-check", "--map", "maps/one_component.json"], 1),
    "embed_c2_c4": (["embed", "--s5-frame", "frames/c2.json", "--space", "frames/c4.json"], 0),
    "embed_c2_c1": (["embed", "--s5-frame", "frames/c2.json", "--space", "frames/c1.json"], 1),
    "subalgebra_c4": (["subalgebra-s5n", "--frame", "frames/c4.json", "--n", "2"], 0),
    "entails_vacuous": (["entails", "bot", "--gamma", "gamma_bd1.txt", "--frame", "frames/c2.json"], 0),
    "entails_s4_premises": (["entails", "<>p1 -> []<>p1", "--gamma", "gamma_s4.txt",
                             "--frame", "frames/ab.json"], 1),
    "error_not_s4": (["valid", "p0", "--frame", "frames/not_s4.json"], 2),
    "error_syntax": (["decide", "p0 &"], 2),
    "error_unknown_command": (["frobnicate"], 2),
    "error_budget": (["valid", BD2, "--frame", "frames/c4.json", "--budget", "100"], 2),
}


def resolve_paths(argv):
    out = []
    for a in argv:
        if a.startswith(("frames/", "maps/")) or a.endswith(".txt"):
            a = str(DATA / a)
        out.append(a)
    return out


def run(argv, fmt):
    report, _ = dispatch(resolve_paths(argv) + ["--format", fmt] if argv[0] != "frobnicate"
                         else argv)
    return report, report_render(report, fmt)


@pytest.mark.parametrize("name", sorted(CASES))
def test_exit_codes_and_golden(name):
    argv, code = CASES[name]
    report, text = run(argv, "json")
    assert report.exit_code == code
    assert text + "\n" == (GOLDEN / f"{name}.json").read_text()
    _, human = run(argv, "human")
    assert human + "\n" == (GOLDEN / f"{name}.txt").read_text()


@pytest.mark.parametrize("name", sorted(CASES))
def test_report_contract(name):
    argv, _ = CASES[name]
    report, text = run(argv, "json")
    data = json.loads(text)
    assert list(data) == ["command", "status", "payload", "diagnostics"]
    assert data["status"] in ("ok", "fail", "error")
    if data["status"] == "error":
        assert data["diagnostics"]
    if data["status"] == "fail":
        payload = data["payload"]
        assert any(k in payload for k in ("countermodel", "witness", "witnesses")) or \
            None in payload.values() or payload.get("entails") is False


def test_json_is_deterministic():
    argv = resolve_paths(["embed", "--s5-frame", "frames/c2.json", "--space", "frames/c4.json",
                          "--format", "json"])
    outputs = {report_render(*dispatch(argv)) for _ in range(3)}
    assert len(outputs) == 1


def test_main_prints_and_returns_code(capsys):
    code = main(["decide", "<>p0"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.startswith("decide: fail\n")
    assert "cluster_sizes: {1}" in out


def test_missing_file_is_an_error():
    report, _ = dispatch(["quotient", "--frame", "/nonexistent/frame.json"])
    assert report.status == "error" and report.exit_code == 2


def test_no_command():
    report, _ = dispatch([])
    assert report.exit_code == 2 and report.diagnostics


def test_render_scalars():
    r = Report("x", "ok", {"flag": True, "none": None, "items": [1, 2], "nested": {"k": []}})
    assert report_render(r) == "x: ok\n  flag: true\n  none: none\n  items: {1, 2}\n  nested:\n    k: {}"


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, (argv, _) in CASES.items():
        for fmt, ext in (("json", "json"), ("human", "txt")):
            _, text = run(argv, fmt)
            (GOLDEN / f"{name}.{ext}").write_text(text + "\n")


if __name__ == "__main__" and "--regen" in sys.argv:
    regenerate()
