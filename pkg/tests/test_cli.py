from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.cli import EXIT_FAILED, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, main

GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["correlator", "2"], "correlator_k2.txt"),
        (["correlator", "3"], "correlator_k3.txt"),
        (["correlator", "4", "--dim", "2"], "correlator_k4_plane.txt"),
        (["correlator", "4", "--check-wick"], "correlator_k4_wick.txt"),
        (["product", "0"], "product_k0.txt"),
        (["expand", "(x1-x2)^-1"], "expand_pole.txt"),
        (["mode", "phi", "1", "phi"], "mode_phi_1_phi.txt"),
        (["verify", "identity", "--degree", "1"], "verify_identity.txt"),
        (
            ["verify", "identity", "--degree", "1", "--format", "structured"],
            "verify_identity_structured.txt",
        ),
    ],
)
def test_golden_output(capsys, argv, golden):
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_two_point_product_contains_the_pole(capsys):
    assert main(["product", "2", "--cutoff", "2"]) == EXIT_OK
    assert "(x1-x2)^-2" in capsys.readouterr().out


def test_structured_product_has_one_record_per_term(capsys):
    assert main(["product", "1", "--cutoff", "2", "--format", "structured"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["monomial=(D0 phi)\tcoefficient=x1", "monomial=phi\tcoefficient=1"]


def test_odd_propagator_fails_commutativity(capsys):
    code = main(["verify", "commutativity", "--propagator", "x^-3", "--degree", "0"])
    assert code == EXIT_FAILED
    out = capsys.readouterr().out
    assert "verdict=fails" in out
    assert out.rstrip().endswith("commutativity: 1/2 hold")


def test_associativity_in_two_dimensions_is_unsupported(capsys):
    assert main(["verify", "associativity", "--dim", "2"]) == EXIT_USAGE
    assert "d = 1" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["product", "2", "--dim", "0"],
        ["verify", "bogus"],
        ["mode", "phi +", "0", "1"],
        ["expand", "(x1-x2)^-1", "--order", "1,1"],
        ["expand", "x1^-1", "--dim", "2"],
        ["correlator", "-1"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == EXIT_USAGE


def test_unexpected_exception_has_its_own_exit_code(capsys, mocker):
    mocker.patch("src.cli.commands.correlator", side_effect=RuntimeError("boom"))
    code = main(["correlator", "2"])
    assert code == EXIT_INTERNAL
    assert code not in (EXIT_FAILED, EXIT_USAGE)
    err = capsys.readouterr().err
    assert "correlator raised an unrecoverable error:" in err
    assert "Traceback" in err
    assert "RuntimeError: boom" in err


def test_help_exits_0(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "verify" in capsys.readouterr().out


def test_config_file_overrides_flags(tmp_path, capsys):
    config = tmp_path / "config.toml"
    config.write_text("[run]\ncutoff = 2\n", encoding="utf-8")
    assert main(["expand", "(x1-x2)^-1", "--cutoff", "5", "--config", str(config)]) == EXIT_OK
    assert capsys.readouterr().out == "x1^-1 + x1^-2*x2\n"


def test_expand_respects_order(capsys):
    assert main(["expand", "(x1-x2)^-1", "--order", "2,1", "--cutoff", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "-x1*x2^-2 - x2^-1\n"


def test_verify_writes_session_log(tmp_path):
    assert main(["verify", "identity", "--degree", "0", "--log-dir", str(tmp_path)]) == EXIT_OK
    logs = list((tmp_path / "verify_logs").glob("*_verify_log.jsonl"))
    assert len(logs) == 1
    events = [json.loads(line)["event"] for line in logs[0].read_text().splitlines()]
    assert events == ["suite_start", "verdict", "suite_finish"]
