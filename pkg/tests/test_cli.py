import io
import json

import pytest

from thompson_density.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, run
from thompson_density.series import SeriesTable, series_beta


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_series_csv():
    code, text = call("series", "--kind", "sigma", "--k", "2", "--n", "10")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "sigma,2,10,4"
    code, text = call("series", "--kind", "beta", "--k", "2", "--n", "40")
    assert SeriesTable.from_csv(text) == series_beta(2, 40)


def test_xi():
    code, text = call("xi", "--k", "0")
    d = json.loads(text)
    assert code == EXIT_OK and d["lo"] == d["hi"] == 1.0
    code, text = call("xi", "--k", "7200", "--tol", "1e-12")
    d = json.loads(text)
    assert 0.25 < float.fromhex(d["lo_hex"]) <= float.fromhex(d["hi_hex"]) < 0.2501


def test_limits():
    code, text = call("limits", "--k", "7200")
    d = json.loads(text)
    assert code == EXIT_OK
    assert d["bb_prime_gt_3_5004"] is True
    assert d["thm2_gt_5_0008"] is True
    for key in ("density_limit_bb", "density_limit_bb_prime", "density_limit_thm2", "p_at_xi"):
        assert d[key]["lo"] <= d[key]["hi"]


def test_limits_min_k():
    code, text = call("limits", "--k", "3", "--min-k")
    d = json.loads(text)
    assert d["bb_prime_gt_3_5"] is False
    assert d["min_k_bb_prime_gt_3_5"] > 3


def test_enumerate():
    code, text = call("enumerate", "--n", "3", "--k", "1", "--marked")
    assert code == EXIT_OK and len(text.splitlines()) == 7
    code, text = call("enumerate", "--n", "4")
    assert len(text.splitlines()) == 14


def test_graph(tmp_path):
    edges = tmp_path / "edges.txt"
    code, text = call("graph", "--n", "3", "--k", "1", "--edges", str(edges))
    d = json.loads(text)
    assert code == EXIT_OK
    assert d["density_exact"] == "12/7" and d["symmetric_property"] is True
    assert len(edges.read_text().splitlines()) == 7 * 4


def test_special_and_surgery():
    code, text = call("special", "--n", "10", "--k", "2")
    assert json.loads(text)["count"] == 4
    code, text = call("surgery", "--n", "10", "--k", "2", "--gens", "x0x1x2")
    d = json.loads(text)
    assert d["vertices_removed"] == 12 and d["gens"] == "x0x1x2"


def test_deterministic():
    assert call("graph", "--n", "6", "--k", "2") == call("graph", "--n", "6", "--k", "2")


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["series", "--kind", "nope", "--k", "1"],
        ["graph", "--n", "0", "--k", "1"],
        ["special", "--n", "5", "--k", "0"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = call(*argv)
    assert code == EXIT_USAGE


def test_guard_exit():
    code, _ = call("series", "--kind", "alpha", "--k", "25", "--n", "4")
    assert code == EXIT_GUARD


def test_value_error_exit():
    code, _ = call("xi", "--k", "2", "--tol", "-1")
    assert code == EXIT_USAGE
