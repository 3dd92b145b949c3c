import csv
import io
import json
import subprocess
import sys

import pytest

from wpcount.cli import CSV_HEADER, evaluate_disputed, load_disputed, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_height_integral_point():
    code, out, _ = call("height", "-w", "2,4,6,10", "-p", "9,81,729,59049", "--check")
    data = json.loads(out)
    assert code == 0
    assert data["weighted_height"]["exact"] == "1"
    assert data["size"]["exact"] == "1"
    assert data["normalized"] == ["1", "1", "1", "1"]


def test_height_fractional_point():
    code, out, _ = call("height", "-w", "2,4,6,10", "-p", "1,1/3,1,1")
    data = json.loads(out)
    assert data["weighted_height"]["exact"] == "3^(1/4)"
    assert data["weighted_height"]["decimal"].startswith("1.316074")


def test_height_classical():
    _, out, _ = call("height", "-w", "1,1", "-p", "3,5", "--format", "plain")
    assert 'weighted_height: {"exact": "5"' in out


def test_count_csv_schema():
    code, out, _ = call("count", "-w", "1,2", "-X", "2", "--method", "direct")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == CSV_HEADER
    assert rows[1][:2] == ["2", "21"]


def test_count_both_columns_equal():
    _, out, _ = call("count", "-w", "1,1", "-X", "10", "--method", "both", "--check")
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["direct_size"] == row["fast_size"] == "128"


def test_count_ratios_approach_one():
    _, out, _ = call("count", "-w", "1,2", "-X", "100,200,400")
    ratios = [float(r["ratio_mid"]) for r in csv.DictReader(io.StringIO(out))]
    assert all(abs(r - 1) < 0.01 for r in ratios)
    assert ratios == sorted(ratios, reverse=True)


def test_count_deterministic_across_workers():
    a = call("count", "-w", "1,1,2", "-X", "1,2", "--method", "height", "--workers", "1")[1]
    b = call("count", "-w", "1,1,2", "-X", "1,2", "--method", "height", "--workers", "3")[1]
    assert a == b


def test_count_json_format():
    _, out, _ = call("count", "-w", "1,2", "-X", "3", "--format", "json")
    assert list(json.loads(out)[0]) == CSV_HEADER


def test_lift_verb():
    _, out, _ = call("lift", "-w", "2,3", "-y", "1,2", "--oracle")
    data = json.loads(out)
    assert data["liftable"] and data["lambda"] == "8" and data["witness"] == [2, 4]
    assert data["oracle_agrees"] is True


def test_lift_obstruction_json():
    _, out, _ = call("lift", "-w", "1,1,2", "-y", "1,2,1", "--check")
    obs = json.loads(out)["obstruction"]
    assert obs["type"] == "congruence" and obs["prime"] == 2
    assert obs["residues"] == [[0, 0, 2], [1, 1, 2]]


def test_fiber_and_sparsity_and_degree():
    data = json.loads(call("fiber", "-w", "1,1,2", "-y", "1,1,1", "--check")[1])
    assert data["count"] == 2
    data = json.loads(call("sparsity", "-w", "1,1,2", "-B", "10")[1])
    assert data["density"] == "528/3745"
    data = json.loads(call("degree", "-w", "2,4,6,10", "--oracle")[1])
    assert data["degree"] == 900 and data["oracle_agrees"] is True
    data = json.loads(call("veronese-degree", "-w", "1,1,2")[1])
    assert data["degree"] == 2


def test_degree_oracle_too_large_is_flagged():
    code, out, _ = call("degree", "-w", "2,4,6,10", "--oracle", "--budget", "100")
    assert code == 0
    assert json.loads(out)["oracle_agrees"] is None


def test_constants_verb():
    code, out, _ = call("constants", "-w", "1,2", "--field", "q", "--check")
    data = json.loads(out)
    assert code == 0
    assert abs(data["leading"]["constant_mid"] - 1.6638147) < 1e-6
    assert data["leading"]["exponent"] == 3
    assert set(data["leading"]) == {"constant_mid", "constant_width", "exponent", "error_exponent", "log_power"}
    _, out, _ = call("constants", "-w", "1,2", "--m", "1", "--e", "2")
    data = json.loads(out)
    assert data["sparsity_factor"] == "1"
    assert data["field_leading"] is None
    _, out, _ = call("constants", "-w", "1,1")
    assert "schanuel" in json.loads(out)["comparison"]


def test_constants_inconsistent_field():
    code, _, err = call("constants", "-w", "1,2", "--m", "2", "--r", "1", "--s", "0")
    assert code == 2 and "differs" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("height", "-w", "1,x", "-p", "1,2"),
        ("height", "-w", "2,3", "-p", "0,0"),
        ("count", "-w", "1,2"),
        ("lift", "-w", "1,2", "-y", "1,2,3"),
        ("nonsense",),
    ],
)
def test_parse_errors_exit_two(argv):
    assert call(*argv)[0] == 2


def test_budget_exit_three():
    code, out, err = call("count", "-w", "2,3", "-X", "30", "--method", "direct", "--budget", "10")
    assert code == 3 and out == "" and "budget" in err


def test_oracle_mismatch_exit_four(monkeypatch):
    import wpcount.cli as cli

    monkeypatch.setattr(cli, "orbit_count_oracle", lambda ws, budget: 7)
    assert call("degree", "-w", "1,1,2", "--check")[0] == 4


def test_disputed_values_reported_without_failing():
    code, _, err = call("degree", "-w", "1,2", "--check", "paper")
    assert code == 0
    assert err.count("DIVERGES") == 3


def test_disputed_fixtures():
    results = {r["name"]: r for r in map(evaluate_disputed, load_disputed())}
    assert results["size_of_point_with_fractional_coordinate"]["computed"] == "3"
    assert results["lift_of_1_2_over_weights_2_3"]["computed"] is True
    assert not any(r["agrees"] for r in results.values())


def test_out_file(tmp_path):
    target = tmp_path / "rows.csv"
    code, out, _ = call("count", "-w", "1,2", "-X", "5", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith(",".join(CSV_HEADER))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wpcount", "lift", "-w", "2,3", "-y", "1,2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["liftable"] is True
