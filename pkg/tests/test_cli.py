import json

import numpy as np
import pytest

from qsvtsim import (
    EmptyCurve,
    embed_general,
    encoding_to_json,
    matrix_from_json,
    matrix_to_json,
    phase_sequence_from_json,
)
from qsvtsim.cli import curve_csv, emit_svg, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_phases_fpsearch_matches_closed_form(capsys, tmp_path):
    out_json = tmp_path / "phases.json"
    code, out, _ = run_cli(
        capsys, "phases", "--family", "fpsearch", "--args", "d=10,delta=0.5",
        "--json", str(out_json),
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["phases"]) == 20
    assert payload["phases"][0] == pytest.approx(-1.58023603, abs=1e-6)
    assert json.loads(out_json.read_text()) == payload


def test_phases_emit_response_row_count(capsys, tmp_path):
    csv = tmp_path / "curve.csv"
    code, _, _ = run_cli(
        capsys, "phases", "--family", "fpsearch", "--args", "d=4,delta=0.5",
        "--emit-response", str(csv), "--npts", "400",
    )
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "a,re,im,abs2"
    assert len(lines) == 401


def test_byte_determinism(capsys, tmp_path):
    files = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code, _, _ = run_cli(
            capsys, "phases", "--family", "poly_sign", "--args", "d=7,k=4",
            "--emit-response", str(path), "--seed", "11",
        )
        assert code == 0
        files.append(path.read_bytes())
    assert files[0] == files[1]


def test_poly_subcommand(capsys, tmp_path):
    csv = tmp_path / "poly.csv"
    code, out, _ = run_cli(
        capsys, "poly", "--family", "invert", "--args", "kappa=2,eps=0.3",
        "--csv", str(csv), "--npts", "50",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["parity"] == "odd"
    assert len(csv.read_text().splitlines()) == 51


def test_response_and_qsvt_round_trip(capsys, tmp_path):
    phases_file = tmp_path / "ph.json"
    code, out, _ = run_cli(capsys, "phases", "--family", "hamsim",
                           "--args", "t=2,eps=0.2,part=cos", "--json", str(phases_file))
    assert code == 0
    seq = phase_sequence_from_json(phases_file.read_text())

    enc_file = tmp_path / "enc.json"
    a = np.diag([0.3, 0.6]).astype(complex)
    enc_file.write_text(encoding_to_json(embed_general(a, 1.0)))
    block_file = tmp_path / "block.json"
    code, out, _ = run_cli(
        capsys, "qsvt", "--encoding", str(enc_file), "--phases", str(phases_file),
        "--emit", str(block_file),
    )
    assert code == 0
    from qsvtsim import families

    block = matrix_from_json(block_file.read_text())
    target = families.family_target("hamsim", {"t": 2.0, "eps": 0.2, "part": "cos"})
    expect = np.diag(target(np.real(np.diag(a))))
    assert np.max(np.abs(block - expect)) <= 1e-6

    csv_file = tmp_path / "resp.csv"
    svg_file = tmp_path / "resp.svg"
    code, _, _ = run_cli(
        capsys, "response", "--phases", str(phases_file), "--npts", "100",
        "--csv", str(csv_file), "--svg", str(svg_file), "--channels", "re,abs2",
    )
    assert code == 0
    assert len(csv_file.read_text().splitlines()) == 101
    svg = svg_file.read_text()
    assert svg.count("<polyline") == 2


def test_qpe_command(capsys):
    code, out, _ = run_cli(capsys, "qpe", "--phi", "0.625", "--n", "3", "--exact")
    assert code == 0
    assert out.splitlines()[0] == "theta=0.625"


def test_search_and_factor_commands(capsys):
    code, out, _ = run_cli(capsys, "search", "--n-qubits", "2", "--marked", "1",
                           "--seed", "5")
    assert code == 0
    assert json.loads(out)["algorithm"] == "search"
    code, out, _ = run_cli(capsys, "factor", "--x", "7", "--modulus", "15", "--seed", "3")
    assert code == 0
    assert out.splitlines()[0] == "order=4"


def test_hamsim_and_invert_commands(capsys, tmp_path):
    h_file = tmp_path / "h.json"
    h_file.write_text(matrix_to_json(np.diag([0.3, 0.7]).astype(complex)))
    code, out, _ = run_cli(capsys, "hamsim", "--matrix", str(h_file), "--alpha", "1.0",
                           "--t", "1.0", "--epsilon", "0.01")
    assert code == 0
    assert json.loads(out.splitlines()[0])["queries"] >= 1

    a_file = tmp_path / "a.json"
    a_file.write_text(matrix_to_json(np.diag([0.5, 1.0]).astype(complex)))
    enc_file = tmp_path / "inv.json"
    code, out, _ = run_cli(capsys, "invert", "--matrix", str(a_file), "--kappa", "2.0",
                           "--epsilon", "0.05", "--emit", str(enc_file))
    assert code == 0
    assert json.loads(out.splitlines()[0])["alpha"] == 4.0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["phases"])  # missing required --family
    assert exc.value.code == 2


def test_computation_error_exit_code(capsys, tmp_path):
    code, _, err = run_cli(capsys, "response", "--phases", str(tmp_path / "missing.json"))
    assert code == 1
    assert "error:" in err
    code, _, err = run_cli(capsys, "factor", "--x", "3", "--modulus", "9")
    assert code == 1
    assert "error:" in err


def test_output_dir_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QSVTSIM_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run_cli(
        capsys, "phases", "--family", "fpsearch", "--args", "d=3,delta=0.5",
        "--json", "out.json",
    )
    assert code == 0
    assert (tmp_path / "out.json").exists()


def test_emit_svg_validation():
    with pytest.raises(EmptyCurve):
        emit_svg([])
    svg = emit_svg([(0.0, 0.1 + 0.2j), (1.0, 0.9 + 0j)], channels=("re", "im", "abs2"))
    assert svg.count("<polyline") == 3
    assert svg == emit_svg([(0.0, 0.1 + 0.2j), (1.0, 0.9 + 0j)], channels=("re", "im", "abs2"))


def test_curve_csv_precision():
    text = curve_csv([(1 / 3, complex(2 / 3, 1 / 7))])
    row = text.splitlines()[1].split(",")
    assert row[0] == format(1 / 3, ".17g")
    assert row[1] == format(2 / 3, ".17g")


def test_seed_mandatory_in_sampled_mode(capsys):
    code, _, err = run_cli(capsys, "search", "--n-qubits", "2", "--marked", "1")
    assert code == 1 and "--seed is mandatory" in err
    code, _, _ = run_cli(capsys, "qpe", "--phi", "0.5", "--n", "2", "--exact")
    assert code == 0  # exact mode needs no seed


def test_all_family_names_reachable(capsys):
    from qsvtsim.families import FAMILY_NAMES

    small_args = {
        "fpsearch": "d=3,delta=0.5",
        "poly_sign": "d=7,k=4",
        "invert": "kappa=1.5,eps=0.4",
        "hamsim": "t=2,eps=0.2",
        "poly_thresh": "d=8,k=4",
        "poly_phase": "d=8,k=4",
        "efilter": "d=10,dlam=0.4",
        "gibbs": "d=8,beta=2",
        "relu": "d=8,delta=0.5,steepness=6",
    }
    for name in FAMILY_NAMES:
        code, out, err = run_cli(
            capsys, "phases", "--family", name, "--args", small_args[name]
        )
        assert code == 0, (name, err)
        assert json.loads(out)["phases"]


def test_svg_sign_curve_spans_band(capsys, tmp_path, family_solutions):
    from qsvtsim import response_curve

    _, seq, _ = family_solutions("poly_sign", d=19, k=10.0)
    curve = response_curve(seq, np.linspace(-1, 1, 400))
    reals = [v.real for _, v in curve]
    assert max(reals) - min(reals) >= 1.8
    svg = emit_svg(curve, channels=("re",))
    assert svg.count("<polyline") == 1
