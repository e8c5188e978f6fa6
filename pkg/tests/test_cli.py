import json

import numpy as np
import pytest

from app.main import build_parser, load_config, main


def _run(out_dir, *args):
    return main([*args, "--out", str(out_dir)])


def _json(out_dir, pattern):
    [path] = sorted(out_dir.glob(pattern))
    return json.loads(path.read_text())


def test_tableau_command(out_dir):
    code = _run(
        out_dir, "tableau", "--family", "dec", "--nodes", "eq", "--order", "2", "--mode", "explicit", "--reduce"
    )
    assert code == 0
    dump = _json(out_dir, "tableau-*[0-9].json")
    assert dump["Z"] == 2
    assert (dump["family"], dump["kind"], dump["order"], dump["mode"]) == ("dec", "equispaced", 2, "explicit")
    assert np.array(dump["A"]) == pytest.approx(np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert dump["bHat"] is None and dump["AHat"] is None
    assert [part["name"] for part in dump["parts"]] == ["tableau"]
    assert dump["parts"][0]["b"] == pytest.approx([0.5, 0.5])
    assert (out_dir / "coefficients-eq-M1.json").exists()
    meta = _json(out_dir, "tableau-*.meta.json")
    assert meta["command"] == "tableau"
    assert meta["config"]["method"]["reduce"] is True


def test_invalid_order_exits_with_configuration_code(out_dir):
    assert _run(out_dir, "tableau", "--order", "1") == 2
    assert list(out_dir.iterdir()) == []


def test_imex_tableau_dump_carries_both_parts(out_dir):
    assert _run(out_dir, "tableau", "--family", "ader", "--nodes", "glb", "--order", "3", "--mode", "imex") == 0
    dump = _json(out_dir, "tableau-*[0-9].json")
    assert (dump["family"], dump["kind"], dump["order"], dump["mode"]) == ("ader", "gauss-lobatto", 3, "imex")
    assert dump["Z"] == len(dump["A"]) == len(dump["AHat"]) == len(dump["bHat"])
    assert dump["A"] == dump["parts"][0]["A"]
    assert dump["AHat"] == dump["parts"][1]["A"]
    assert sum(dump["b"]) == pytest.approx(1.0)


def test_gauss_legendre_dec_is_rejected(out_dir):
    assert _run(out_dir, "tableau", "--family", "sdec", "--nodes", "glg") == 2


def test_real_axis_needs_single_tableau(out_dir):
    assert _run(out_dir, "stability", "--kind", "real-axis", "--mode", "imex") == 2


def test_stability_region_with_pgm(out_dir):
    code = _run(
        out_dir, "stability", "--mode", "implicit", "--resolution", "9", "--bounds", "-2", "2", "-2", "2", "--pgm"
    )
    assert code == 0
    [csv_path] = out_dir.glob("stability-region-*.csv")
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 1 + 81
    [pgm_path] = out_dir.glob("stability-region-*.pgm")
    assert pgm_path.read_bytes().startswith(b"P5\n9 9\n255\n")
    meta = _json(out_dir, "stability-region-*.meta.json")
    assert meta["result"]["kind"] == "region"


def test_vonneumann_command(out_dir):
    code = _run(
        out_dir, "vonneumann", "--plane", "ce", "--adv", "2", "--diff", "2", "--resolution", "8", "--n0", "20"
    )
    assert code == 0
    [csv_path] = out_dir.glob("vonneumann-*-CE.csv")
    assert csv_path.read_text().splitlines()[0] == "C,secondAxis,maxAbsG"
    borders = _json(out_dir, "vonneumann-*-borders.json")
    assert borders["plane"] == "CE"
    assert borders["second_axis"] == "E"
    assert borders["C0"] is not None
    assert borders["valid"] == (borders["C0_valid"] and borders["second0_valid"])


def test_vonneumann_rejects_mismatched_implicit_stencil(out_dir):
    assert _run(out_dir, "vonneumann", "--plane", "CP", "--diff", "2", "--resolution", "4", "--n0", "4") == 2


def test_dahlquist_convergence(out_dir):
    code = _run(out_dir, "convergence", "--nodes", "glb", "--orders", "2", "3", "--steps", "0.2", "0.1", "0.05")
    assert code == 0
    [csv_path] = out_dir.glob("convergence-dahlquist-*.csv")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "h,order2,order3"
    assert len(lines) == 4
    meta = _json(out_dir, "convergence-dahlquist-*.meta.json")
    assert meta["result"]["rows"]["2"][-1]["order"] == pytest.approx(2.0, abs=0.3)


def test_pde_convergence(out_dir):
    code = _run(out_dir, "convergence", "--problem", "pde", "--orders", "2", "--cells", "16", "32", "--threads", "2")
    assert code == 0
    [csv_path] = out_dir.glob("convergence-pde-*.csv")
    assert csv_path.read_text().splitlines()[0] == "N,order2"


def test_pde_convergence_records_seeded_growth(out_dir):
    code = _run(out_dir, "convergence", "--problem", "pde", "--orders", "2", "--cells", "16", "32", "--seed", "7")
    assert code == 0
    meta = _json(out_dir, "convergence-pde-*.meta.json")
    assert meta["config"]["seed"] == 7
    assert meta["result"]["seed"] == 7
    assert set(meta["result"]["growth"]) == {"2"}
    assert 0 < meta["result"]["growth"]["2"] <= 1 + 1e-8


def test_solve_command(out_dir):
    code = _run(out_dir, "solve", "--problem", "dahlquist", "--h", "0.1", "--t-end", "0.5")
    assert code == 0
    meta = _json(out_dir, "solve-*.meta.json")
    assert meta["result"]["steps"] == 5
    assert meta["result"]["error"] < 1e-2


def test_runs_are_deterministic(tmp_path):
    args = ("vonneumann", "--resolution", "6", "--n0", "10", "--threads", "3")
    assert _run(tmp_path / "a", *args) == 0
    assert _run(tmp_path / "b", *args) == 0
    [first] = (tmp_path / "a").glob("*.csv")
    [second] = (tmp_path / "b").glob("*.csv")
    assert first.read_bytes() == second.read_bytes()


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"method": {"family": "ader", "order": 3}, "vonneumann": {"plane": "CD", "adv": 3}}))
    arguments = vars(build_parser().parse_args(["vonneumann", "--config", str(path), "--order", "4", "--adv", "4"]))
    config = load_config(arguments)
    assert config.method.family == "ader"
    assert config.method.order == 4
    assert config.vonneumann.plane == "CD"
    assert config.vonneumann.adv == 4


def test_broken_config_file(tmp_path, out_dir):
    path = tmp_path / "job.json"
    path.write_text("{not json")
    assert _run(out_dir, "tableau", "--config", str(path)) == 2


def test_unknown_config_key(tmp_path, out_dir):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"method": {"colour": "red"}}))
    assert _run(out_dir, "tableau", "--config", str(path)) == 2
