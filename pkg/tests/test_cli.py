"""Command-line behavior: reports, determinism, and the exit-code table."""

from __future__ import annotations

import json

import pytest

from plancut.cli import main
from plancut.families import cycle_graph, k4, with_demands
from plancut.instances import parse_instance, write_instance
from plancut.suites import SuiteResult


@pytest.fixture()
def ring_file(tmp_path):
    path = tmp_path / "ring.json"
    write_instance(with_demands(cycle_graph(4), {(1, 3): 1}), path)
    return str(path)


def test_generate_to_stdout_parses(capsys) -> None:
    assert main(["generate", "--family", "grid", "--rows", "2", "--cols", "2"]) == 0
    g = parse_instance(capsys.readouterr().out)
    assert (g.n, len(g.edges), g.num_faces) == (4, 4, 2)


def test_generate_writes_file(tmp_path, capsys) -> None:
    out = tmp_path / "w.json"
    assert main(["generate", "--family", "wheel", "--rim", "4", "--out", str(out)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "wrote" in captured.err
    assert parse_instance(out.read_text()).n == 5


def test_generate_is_byte_deterministic(capsys) -> None:
    argv = ["generate", "--family", "random", "--seed", "6"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_solve_report_and_determinism(ring_file, capsys) -> None:
    argv = ["solve", ring_file, "--samples", "10", "--seed", "1", "--oracle"]
    assert main(argv) == 0
    first = capsys.readouterr()
    assert "best sparsity: 2" in first.out
    assert "ratio: 1" in first.out
    assert "timings:" in first.err
    assert "timings:" not in first.out
    assert main(argv) == 0
    assert capsys.readouterr().out == first.out


def test_solve_report_file_matches_stdout(ring_file, tmp_path, capsys) -> None:
    report = tmp_path / "report.txt"
    assert (
        main(["solve", ring_file, "--samples", "10", "--seed", "1", "--out", str(report)])
        == 0
    )
    assert report.read_text() == capsys.readouterr().out


def test_solve_single_guess_and_lp_export(ring_file, tmp_path, capsys) -> None:
    lp = tmp_path / "model.lp"
    argv = [
        "solve", ring_file, "--samples", "10", "--single-guess",
        "--export-lp", str(lp),
    ]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "guess edge: -1" in out
    assert "best sparsity: 2" in out
    text = lp.read_text()
    assert text.startswith("\\ lifted cut model")
    assert "Minimize" in text and "Bounds" in text


def test_exit_code_missing_and_malformed(tmp_path, capsys) -> None:
    assert main(["solve", str(tmp_path / "absent.json")]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"surprise": true}')
    assert main(["solve", str(bad)]) == 3
    assert "error:" in capsys.readouterr().err


def test_exit_code_broken_embedding(tmp_path) -> None:
    disconnected = tmp_path / "disc.json"
    disconnected.write_text(
        json.dumps(
            {
                "n": 3,
                "edges": [[1, 2, 1]],
                "rotation": {"1": [0], "2": [0], "3": []},
                "demands": [],
            }
        )
    )
    assert main(["solve", str(disconnected)]) == 4

    g = k4()
    rot = {str(v): list(g.rotation_of(v)) for v in g.vertices()}
    rot["1"] = rot["1"][::-1]
    twisted = tmp_path / "twist.json"
    twisted.write_text(
        json.dumps(
            {
                "n": 4,
                "edges": [[u, v, c] for u, v, c in g.edges],
                "rotation": rot,
                "demands": [],
            }
        )
    )
    assert main(["solve", str(twisted)]) == 4


def test_exit_code_no_demand(tmp_path) -> None:
    path = tmp_path / "mute.json"
    write_instance(cycle_graph(4), path)
    assert main(["solve", str(path)]) == 5


def test_exit_code_bad_generator_params() -> None:
    assert main(["generate", "--family", "wheel", "--rim", "2"]) == 8


def test_verify_passes_and_reports(capsys, tmp_path) -> None:
    out = tmp_path / "suite.txt"
    argv = ["verify", "decoupling", "--samples", "2000", "--out", str(out)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    assert text.startswith("suite decoupling: PASS")
    assert out.read_text() == text
    main(argv)
    assert capsys.readouterr().out == text


def test_verify_failure_maps_to_exit_seven(monkeypatch, capsys) -> None:
    import plancut.suites as suites

    monkeypatch.setitem(
        suites.SUITES,
        "decoupling",
        lambda **kw: SuiteResult(
            name="decoupling", passed=False, stats={}, lines=["forced failure"]
        ),
    )
    assert main(["verify", "decoupling"]) == 7
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "error:" in captured.err


def test_unknown_subcommand_and_suite_are_usage_errors() -> None:
    with pytest.raises(SystemExit) as exc:
        main(["explode"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "horoscope"])
    assert exc.value.code == 2
