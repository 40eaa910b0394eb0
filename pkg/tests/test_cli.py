import json
import math

import pytest

import ringconc.cli as cli
from ringconc.errors import DomainError, NumericalError
from ringconc.records import ResultCache, ResultRecord, cache_key, dumps


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("RINGCONC_CACHE_DIR", str(d))
    return d


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_runtime(text):
    d = json.loads(text)
    for rec in d if isinstance(d, list) else [d]:
        rec.pop("runtime_ms", None)
    return d


def test_exact_record(capsys, cache_dir):
    code, out, _ = run(capsys, "exact", "--n", "8", "--p", "3")
    assert code == 0
    rec = json.loads(out)
    assert rec["method"] == "exact"
    assert rec["c"] == pytest.approx(0.431, abs=1e-3)
    assert math.isfinite(rec["s_opt"])
    assert len(rec["amplitudes"]) == 5
    assert all(sum(a["gaps"]) == 8 and len(a["gaps"]) == 3 for a in rec["amplitudes"])


def test_ow_record(capsys, cache_dir):
    code, out, _ = run(capsys, "ow", "--n", "6", "--p", "2")
    assert code == 0
    assert json.loads(out)["c"] == pytest.approx(math.sqrt(2) / 3, abs=1e-12)


def test_infinite_s_opt_roundtrip(capsys, cache_dir):
    code, out, _ = run(capsys, "exact", "--n", "9", "--p", "2")
    rec = json.loads(out)
    assert rec["s_opt"] is None and rec["s_opt_infinite"] is True
    cached = ResultCache(cache_dir).get(cache_key("exact", 9, 2, 1, None, None))
    assert math.isinf(cached.s_opt)


def test_rerun_is_byte_identical(capsys, cache_dir):
    _, first, _ = run(capsys, "oracle", "--n", "7", "--p", "3", "--seed", "5", "--restarts", "8", "--no-cache")
    _, second, _ = run(capsys, "oracle", "--n", "7", "--p", "3", "--seed", "5", "--restarts", "8", "--no-cache")
    assert strip_runtime(first) == strip_runtime(second)
    a, b = json.loads(first), json.loads(second)
    a.pop("runtime_ms"), b.pop("runtime_ms")
    assert dumps(a) == dumps(b)


def test_cache_hit_equals_fresh(capsys, cache_dir):
    _, fresh, _ = run(capsys, "exact", "--n", "7", "--p", "3")
    assert any(cache_dir.rglob("*.json"))
    _, hit, _ = run(capsys, "exact", "--n", "7", "--p", "3")
    assert hit == fresh
    _, nocache, _ = run(capsys, "exact", "--n", "7", "--p", "3", "--no-cache")
    assert strip_runtime(nocache) == strip_runtime(fresh)


def test_cache_dir_flag_overrides_env(capsys, cache_dir, tmp_path):
    other = tmp_path / "other"
    run(capsys, "ow", "--n", "9", "--p", "3", "--cache-dir", str(other))
    assert any(other.rglob("*.json"))
    assert not cache_dir.exists()


def test_table(capsys, cache_dir):
    code, out, _ = run(capsys, "table")
    assert code == 0
    rows = {r["N"]: r for r in json.loads(out)}
    assert sorted(rows) == list(range(2, 13))
    assert rows[9]["C_exact"] == pytest.approx(4 * math.cos(math.pi / 7) / 9, abs=1e-9)
    assert rows[9]["C_exact"] == pytest.approx(0.400, abs=1e-3)
    assert rows[5]["C_closed_form"] is None
    for n, r in rows.items():
        if r["C_closed_form"] is not None:
            assert r["C_exact"] == pytest.approx(r["C_closed_form"], abs=1e-9)


def test_table_csv(capsys, cache_dir):
    code, out, _ = run(capsys, "table", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "N,p,C_exact,C_closed_form,coefficients"
    assert len(lines) == 12


def test_figures(tmp_path, cache_dir, capsys):
    out = tmp_path / "figs"
    code, _, _ = run(capsys, "figures", "--out", str(out), "--n-max", "9", "--jobs", "2")
    assert code == 0
    fig1 = (out / "fig1.csv").read_text().splitlines()
    assert fig1[0] == "N,p,C_max"
    assert len(fig1) - 1 == sum(n // 2 for n in range(2, 10))
    fig2 = (out / "fig2.csv").read_text().splitlines()
    assert fig2[0] == "N,p,C_ow,C_perturb_improved_flag,C_exact"
    row = next(line.split(",") for line in fig2 if line.startswith("5,2,"))
    assert row[3] == "1"  # (5, 2) gains from adjacent pairs
    fig3 = (out / "fig3.csv").read_text()
    assert "9,2,inf" in fig3


def test_batch_order_is_deterministic(tmp_path, cache_dir, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "figures", "--out", str(a), "--n-max", "8", "--jobs", "2", "--no-cache")
    run(capsys, "figures", "--out", str(b), "--n-max", "8", "--no-cache")
    for name in ("fig1.csv", "fig2.csv", "fig3.csv"):
        assert (a / name).read_text() == (b / name).read_text()


def test_other_commands(capsys, cache_dir):
    code, out, _ = run(capsys, "stability", "--n", "7", "--p", "2")
    rec = json.loads(out)
    assert code == 0 and rec["lhs"] < rec["rhs"] and rec["extra"]["locally_optimal"]
    code, out, _ = run(capsys, "lagrange", "--n", "10")
    assert json.loads(out)["c"] == pytest.approx(math.sqrt(2 + math.sqrt(2)) / 5, abs=1e-12)
    code, out, _ = run(capsys, "qneighbor", "--n", "8", "--q", "2")
    rec = json.loads(out)
    assert rec["c"] == pytest.approx(0.5, abs=1e-9) and rec["extra"]["subring_count"] == 2
    code, out, _ = run(capsys, "sweep", "--n", "5", "--p", "2", "--format", "csv", "--s-grid", "0.5:8:10")
    assert out.splitlines()[0] == "s,minus_e0,concurrence" and len(out.splitlines()) > 10
    code, out, _ = run(capsys, "basis-dump", "--n", "8", "--p", "2")
    assert [r["gaps"] for r in json.loads(out)] == [[1, 7], [2, 6], [3, 5], [4, 4]]
    code, out, _ = run(capsys, "oracle", "--n", "9", "--p", "2", "--q", "2", "--zero-gap", "2", "--restarts", "4")
    assert json.loads(out)["extra"]["zero_gap"] == 2


def test_out_file(tmp_path, capsys, cache_dir):
    target = tmp_path / "rec.json"
    code, out, _ = run(capsys, "ow", "--n", "7", "--p", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["n"] == 7


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["exact", "--n", "8"],
    ["exact", "--n", "x", "--p", "2"],
    ["exact", "--n", "8", "--p", "9"],
    ["exact", "--n", "8", "--p", "2", "--s-grid", "1:2"],
    ["qneighbor", "--n", "8", "--q", "8"],
    ["stability", "--n", "8", "--p", "2"],
    [],
])
def test_usage_errors(capsys, cache_dir, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_numerical_failure_exit_code(capsys, cache_dir, monkeypatch):
    def boom(**_):
        raise NumericalError("did not converge", n=8, residual=1.0)

    monkeypatch.setitem(cli.COMPUTE, "exact", boom)
    code, _, err = run(capsys, "exact", "--n", "8", "--p", "2", "--no-cache")
    assert code == 3
    diag = json.loads(err)
    assert diag["diagnostics"]["residual"] == 1.0


def test_record_invariants():
    with pytest.raises(DomainError):
        ResultRecord(n=4, p=2, method="nope", c=0.5)
    with pytest.raises(DomainError):
        ResultRecord(n=4, p=2, method="exact", c=1.5)
    with pytest.raises(DomainError):
        ResultRecord(n=4, p=2, method="stability", c=0.5)
    with pytest.raises(DomainError):
        ResultRecord(n=4, p=2, method="oracle", c=0.5)
    assert ResultRecord(n=4, p=2, method="exact", c=1 + 1e-13).c == 1.0
    rec = ResultRecord(n=4, p=2, method="exact", c=0.5000000000000001)
    again = ResultRecord.from_dict(json.loads(dumps(rec)))
    assert again == rec
