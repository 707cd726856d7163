import csv
import io
import json
import math
import subprocess
import sys

import pytest

from fermi_charts.cli import parse_config, rho_grid, run

DS = {"kind": "de_sitter", "lambda": 3.0}
ADS = {"kind": "anti_de_sitter", "lambda": -3.0}
ES = {"kind": "einstein_static", "R": 1.0}
IS = {"kind": "interior_schwarzschild", "M": 0.25, "R": 1.0, "lambda": 0.0}


def invoke(tmp_path, command, config, *extra):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config))
    out, err = io.StringIO(), io.StringIO()
    code = run([command, "--config", str(path), *extra], out, err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def json_rows(text):
    doc = json.loads(text)
    return [dict(zip(doc["columns"], row)) for row in doc["rows"]]


def test_transform_de_sitter(tmp_path):
    code, out, _ = invoke(tmp_path, "transform", {"spacetime": DS, "points": [[0, math.pi / 3, 0, 0]]})
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["x"]) == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
    assert float(row["y"]) == 0.0 and float(row["t"]) == 0.0
    assert float(row["roundtrip_err"]) < 1e-14


def test_transform_to_fermi_identity(tmp_path):
    config = {"spacetime": ES, "direction": "to-fermi", "points": [[0, 0, 0, 0]]}
    code, out, _ = invoke(tmp_path, "transform", config, "--format", "json")
    assert code == 0
    (row,) = json_rows(out)
    assert [row[k] for k in ("x0", "x1", "x2", "x3")] == [0.0, 0.0, 0.0, 0.0]
    assert row["roundtrip_err"] == 0.0


def test_transform_outside_chart(tmp_path):
    code, out, err = invoke(tmp_path, "transform", {"spacetime": DS, "points": [[0, 1.6, 0, 0]]})
    assert code == 2
    assert out == ""
    assert "outside Fermi chart" in err and "1.6" in err


def test_metric_rows(tmp_path):
    code, out, _ = invoke(tmp_path, "metric", {"spacetime": DS, "points": [[0, 0.5, 0, 0]]})
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["g00"]) == pytest.approx(-0.75, rel=1e-15)
    assert float(row["g11"]) == pytest.approx(4 / 3, rel=1e-15)
    assert float(row["g01"]) == 0.0
    code, out, _ = invoke(tmp_path, "metric", {"spacetime": DS, "chart": "fermi_cartesian",
                                               "points": [[0, 0.5, 0, 0]]})
    assert float(csv_rows(out)[0]["g00"]) == pytest.approx(-math.cos(0.5) ** 2, rel=1e-14)


def test_curvature_de_sitter_grid(tmp_path):
    cfg = {"spacetime": DS, "grid": {"start": 0, "stop": 1.5, "count": 16}}
    code, out, _ = invoke(tmp_path, "curvature", cfg)
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 16
    assert float(rows[-1]["rho"]) == 1.5
    assert all(float(r["K_analytic"]) == 1.0 for r in rows)
    assert all(float(r["abs_diff"]) < 1e-6 for r in rows)


def test_curvature_einstein_and_interior(tmp_path):
    code, out, _ = invoke(tmp_path, "curvature", {"spacetime": ES})
    assert code == 0
    assert all(float(r["K_analytic"]) == 0.0 for r in csv_rows(out))
    code, out, _ = invoke(tmp_path, "curvature", {"spacetime": IS})
    assert code == 0
    rows = csv_rows(out)
    assert float(rows[0]["rho"]) == 0.0
    assert float(rows[0]["K_analytic"]) == pytest.approx(-0.44590290622280608, rel=1e-13)
    # closed chart: the last row sits on the fluid surface
    assert float(rows[-1]["rho"]) == pytest.approx(math.sqrt(2) * math.asin(1 / math.sqrt(2)), rel=1e-15)


def test_curvature_default_grid_avoids_horizon(tmp_path):
    code, out, _ = invoke(tmp_path, "curvature", {"spacetime": DS})
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 16
    assert float(rows[-1]["rho"]) == pytest.approx(0.95 * math.pi / 2, rel=1e-15)


def test_curvature_failure_exit_code(tmp_path):
    cfg = {"spacetime": DS, "grid": {"start": 1.0, "stop": 1.5, "count": 3}, "tolerances": {"curvature": 1e-14}}
    code, out, _ = invoke(tmp_path, "curvature", cfg)
    assert code == 1
    assert len(csv_rows(out)) == 3


def test_jacobi_examples(tmp_path):
    code, out, _ = invoke(tmp_path, "jacobi", {"spacetime": DS, "grid": {"stop": 1.5, "count": 31}})
    assert code == 0
    last = csv_rows(out)[-1]
    assert float(last["y"]) == pytest.approx(math.cos(1.5), abs=1e-8)
    code, out, _ = invoke(tmp_path, "jacobi", {"spacetime": ADS, "grid": {"stop": 1.0, "count": 11}})
    assert float(csv_rows(out)[-1]["y"]) == pytest.approx(1.5430806348152437, abs=1e-8)
    code, out, _ = invoke(tmp_path, "jacobi", {"spacetime": ES, "delta_t": 1.0})
    assert all(abs(float(r["y"]) - 1.0) < 1e-14 for r in csv_rows(out))


def test_jacobi_default_grid_stops_short_of_horizon(tmp_path):
    code, out, _ = invoke(tmp_path, "jacobi", {"spacetime": DS})
    assert code == 0
    rho = float(csv_rows(out)[-1]["rho"])
    assert math.pi / 2 - 1e-8 < rho < math.pi / 2


def test_horizon(tmp_path):
    code, out, _ = invoke(tmp_path, "horizon", {"spacetime": DS}, "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][0][0] == pytest.approx(math.pi / 2, abs=1e-9)
    for st in (ADS, ES):
        code, out, _ = invoke(tmp_path, "horizon", {"spacetime": st}, "--format", "json")
        assert code == 0 and json.loads(out)["rows"] == [[None]]
    code, out, _ = invoke(tmp_path, "horizon", {"spacetime": ADS})
    assert out == 'rho_h\n""\n'


def test_validate_de_sitter(tmp_path):
    code, out, _ = invoke(tmp_path, "validate", {"spacetime": DS}, "--seed", "42", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 42 and doc["passed"] is True
    checks = {r[0]: r for r in doc["rows"]}
    assert checks["exponential_map"][2] < 1e-7
    assert {"round_trip", "isometry", "worldline", "radial_geodesic", "curvature", "jacobi"} <= set(checks)


def test_validate_minkowski(tmp_path):
    code, out, _ = invoke(tmp_path, "validate", {"spacetime": {"kind": "minkowski"}})
    assert code == 0
    assert all(r["passed"] == "true" for r in csv_rows(out))


def test_validate_failure_exit_code(tmp_path):
    cfg = {"spacetime": DS, "tolerances": {"round_trip": 1e-300}, "samples": {"round_trip": 5}}
    code, _, _ = invoke(tmp_path, "validate", cfg)
    assert code == 1


@pytest.mark.parametrize("config, message", [
    ({"spacetime": {"kind": "interior_schwarzschild", "M": 0.45, "R": 1.0, "lambda": 0.0}}, ""),
    ({"spacetime": DS, "colour": "red"}, "unknown config keys"),
    ({"spacetime": {**DS, "R": 1.0}}, ""),
    ({"spacetime": DS, "grid": {"stop": 2.0}}, "outside Fermi chart"),
    ({"spacetime": DS, "grid": {"count": 0}}, "count"),
    ({"points": [[0, 0, 0, 0]]}, "spacetime"),
])
def test_usage_and_domain_errors(tmp_path, config, message):
    code, out, err = invoke(tmp_path, "curvature", config)
    assert code == 2
    assert out == ""
    assert message in err


def test_bad_arguments(tmp_path):
    assert run(["plot", "--config", "x.json"], io.StringIO(), io.StringIO()) == 2
    assert run(["horizon", "--config", str(tmp_path / "missing.json")], io.StringIO(), io.StringIO()) == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert run(["horizon", "--config", str(tmp_path / "bad.json")], io.StringIO(), io.StringIO()) == 2


def test_output_is_deterministic(tmp_path):
    first = invoke(tmp_path, "validate", {"spacetime": IS, "samples": {"round_trip": 50}}, "--seed", "9")[1]
    second = invoke(tmp_path, "validate", {"spacetime": IS, "samples": {"round_trip": 50}}, "--seed", "9")[1]
    assert first == second


@pytest.mark.parametrize("command, config", [
    ("curvature", {"spacetime": IS, "grid": {"count": 7}}),
    ("jacobi", {"spacetime": DS, "grid": {"stop": 1.2, "count": 9}, "delta_t": 0.3}),
    ("transform", {"spacetime": ADS, "points": [[1.5, 0.1, 0.2, 0.3], [0, 2, 0, 1]]}),
])
def test_csv_and_json_agree(tmp_path, command, config):
    csv_out = csv_rows(invoke(tmp_path, command, config)[1])
    json_out = json_rows(invoke(tmp_path, command, config, "--format", "json")[1])
    assert len(csv_out) == len(json_out)
    for c, j in zip(csv_out, json_out):
        assert {k: float(v) for k, v in c.items()} == j


def test_out_file(tmp_path):
    target = tmp_path / "rows.csv"
    code, out, _ = invoke(tmp_path, "horizon", {"spacetime": DS}, "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_bytes()
    assert text.startswith(b"rho_h\n") and b"\r" not in text


def test_rho_grid_clamps_open_boundary():
    cfg = parse_config({"spacetime": DS, "grid": {"start": 0.5, "stop": math.pi / 2, "count": 5}})
    grid = rho_grid(cfg)
    assert grid[0] == 0.5
    assert grid[-1] == pytest.approx(math.pi / 2 - 1e-9 * (math.pi / 2 - 0.5), abs=1e-15)


def test_module_entry_point(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"spacetime": DS}))
    proc = subprocess.run([sys.executable, "-m", "fermi_charts", "horizon", "--config", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout.splitlines()[1]) == pytest.approx(math.pi / 2, abs=1e-9)
