import io
import json
from collections import Counter

import numpy as np
import pytest

from stirtree.generators import growth_trace, make_rng, random_stirling
from stirtree.harness import engine
from stirtree.harness.cli import main
from stirtree.harness.experiments import (
    ConfigError,
    ExperimentConfig,
    experiment_adp,
    experiment_pmf,
    experiment_subtree,
    experiment_trapezoidal,
    sample_adp,
)
from stirtree.harness.gof import chi_square_report, pool_bins
from stirtree.harness.moments import cov_with_se, is_psd, mean_with_se, skew_kurt, var_with_se
from stirtree.harness.output import write_records
from stirtree.harness.verify import verify
from stirtree.oracles import eulerian_row, joint_pmf, pmf_L
from stirtree.statistics import adp_counts
from stirtree.structures import StirlingPermutation
from stirtree.urnsim import apply_draw, initial_state, pick_color, urn_a


def biased_stirling(n, rng):
    """Negative control: the two end gaps are four times as likely."""
    seq = [1, 1]
    for k in range(1, n):
        weights = np.ones(2 * k + 1)
        weights[[0, -1]] = 4.0
        g = int(rng.choice(2 * k + 1, p=weights / weights.sum()))
        seq[g:g] = (k + 1, k + 1)
    return StirlingPermutation(tuple(seq))


def _dump(report, fmt="json"):
    buf = io.StringIO()
    write_records(report.records(), fmt, buf)
    return buf.getvalue()


# -- engine ------------------------------------------------------------------

def test_trace_block_matches_per_replicate_streams():
    block = engine.trace_block(9, 3, 7, 20)
    assert block.shape == (19, 4)
    for j, r in enumerate(range(3, 7)):
        assert np.array_equal(block[:, j], growth_trace(20, make_rng(9, r)))


def test_urn_kernel_matches_scalar_urn_replay():
    n = 30
    got = engine.adp_urn_block(11, 0, 40, n)
    spec = urn_a()
    for r in range(40):
        s = initial_state(spec)
        for u in growth_trace(n, make_rng(11, r)):
            s = apply_draw(spec, s, pick_color(s.composition, int(u)))
        assert tuple(got[r]) == s.composition


def test_perm_kernel_matches_objects():
    got = engine.adp_perm_block(5, 0, 25, 15)
    for r in range(25):
        assert tuple(got[r]) == tuple(adp_counts(random_stirling(15, make_rng(5, r))[0]))


@pytest.mark.parametrize("n, k", [(1, 1), (2, 1), (2, 2), (12, 1), (12, 5), (12, 12), (40, 3)])
def test_subtree_kernel_matches_objects(n, k):
    fast = engine.subtree_block(21, 0, 60, n, k)
    slow = engine.subtree_objects_block(21, 0, 60, n, k)
    assert np.array_equal(fast, slow)


def test_run_replicates_independent_of_workers_and_blocks(monkeypatch):
    a = engine.run_replicates(engine.adp_urn_block, 1100, workers=1, seed=4, n=50)
    b = engine.run_replicates(engine.adp_urn_block, 1100, workers=2, seed=4, n=50)
    assert np.array_equal(a, b)
    monkeypatch.setattr(engine, "BLOCK_SIZE", 97)
    c = engine.run_replicates(engine.adp_urn_block, 1100, workers=1, seed=4, n=50)
    assert np.array_equal(a, c)


def test_urn_and_perm_modes_agree_in_distribution():
    n = 5
    for mode in ("urn", "perm"):
        rep = experiment_pmf(ExperimentConfig("pmf", n, 6000, seed=17, mode=mode))
        assert rep.passed, (mode, rep.statistic, rep.threshold)
    joint = joint_pmf(n).probs
    xyz = sample_adp(ExperimentConfig("adp", n, 6000, seed=18, mode="urn"))
    observed = Counter(tuple(int(v) for v in row) for row in xyz)
    keys = sorted(joint)
    index = {key: i for i, key in enumerate(keys)}
    rep = chi_square_report("joint", n, 18, Counter({index[k]: c for k, c in observed.items()}),
                            {index[k]: p for k, p in joint.items()})
    assert rep.passed


# -- moments -----------------------------------------------------------------

def test_moment_helpers_against_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=5000)
    y = 0.5 * x + rng.normal(size=5000)
    m, se = mean_with_se(x)
    assert m == pytest.approx(x.mean())
    assert se == pytest.approx(x.std(ddof=1) / np.sqrt(5000))
    v, _ = var_with_se(x)
    assert v == pytest.approx(x.var(ddof=1))
    c, _ = cov_with_se(x, y)
    assert c == pytest.approx(np.cov(x, y)[0, 1])
    s, k = skew_kurt(x)
    from scipy import stats
    assert s == pytest.approx(stats.skew(x))
    assert k == pytest.approx(stats.kurtosis(x))


def test_variance_se_matches_normal_theory():
    # for normal data Var(s^2) ~ 2 sigma^4 / R
    x = np.random.default_rng(1).normal(scale=2.0, size=200000)
    _, se = var_with_se(x)
    assert se == pytest.approx(np.sqrt(2 * 16 / 200000), rel=0.02)


def test_standard_errors_shrink_like_inverse_sqrt():
    small = experiment_adp(ExperimentConfig("adp", 200, 2000, seed=5))
    big = experiment_adp(ExperimentConfig("adp", 200, 8000, seed=5))
    for name in ("mean_Z", "var_Z_over_n", "cov_XY_over_n"):
        ratio = small.check(name).stderr / big.check(name).stderr
        assert ratio == pytest.approx(2.0, rel=0.15)


def test_psd():
    assert is_psd(np.array([[1.0, -0.5], [-0.5, 1.0]]))
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))


# -- experiments --------------------------------------------------------------

def test_adp_n1_is_degenerate():
    rep = experiment_adp(ExperimentConfig("adp", 1, 50, seed=3))
    assert rep.passed
    assert rep.check("mean_Z").empirical == 1.0
    assert rep.check("var_Z_over_n").empirical == 0.0


def test_adp_n2_frequencies():
    xyz = sample_adp(ExperimentConfig("adp", 2, 9000, seed=8))
    counts = Counter(tuple(int(v) for v in row) for row in xyz)
    assert set(counts) == {(1, 2, 2), (2, 1, 2), (2, 2, 1)}
    assert all(abs(c / 9000 - 1 / 3) < 0.02 for c in counts.values())


def test_adp_moderate_n_passes_and_is_psd():
    rep = experiment_adp(ExperimentConfig("adp", 300, 4000, seed=2024, histogram_bins=10))
    assert rep.passed
    assert rep.covariance_psd
    assert not rep.check("skew_Z").gating
    assert sum(h["count"] for h in rep.histogram) == 4000


def test_pmf_experiment_and_negative_control():
    good = experiment_pmf(ExperimentConfig("pmf", 3, 15000, seed=101))
    assert good.passed and good.df == 2
    bad = experiment_pmf(ExperimentConfig("pmf", 6, 6000, seed=101, mode="perm"), sampler=biased_stirling)
    assert not bad.passed
    assert bad.statistic > bad.threshold


def test_pmf_experiment_degenerate_and_cap():
    rep = experiment_pmf(ExperimentConfig("pmf", 1, 100, seed=1))
    assert rep.skipped and rep.passed and rep.notice
    with pytest.raises(ValueError):
        experiment_pmf(ExperimentConfig("pmf", 201, 10, seed=1))


def test_subtree_experiment():
    rep = experiment_subtree(ExperimentConfig("subtree", 400, 3000, seed=6, k=1))
    assert rep.check("identity_D_eq_2S_minus_1_violations").passed
    assert abs(rep.check("mean_S_over_n").z) < 4
    last = experiment_subtree(ExperimentConfig("subtree", 30, 200, seed=6, k=30))
    assert last.check("mean_S_over_n").empirical == pytest.approx(1 / 30)
    assert last.check("var_S_over_n").empirical == 0.0
    assert last.check("mean_D_over_2n").empirical == pytest.approx(1 / 60)
    with pytest.raises(ConfigError):
        experiment_subtree(ExperimentConfig("subtree", 5, 10, seed=6, k=6))


def test_subtree_modes_agree():
    a = experiment_subtree(ExperimentConfig("subtree", 40, 300, seed=12, k=2, mode="urn"))
    b = experiment_subtree(ExperimentConfig("subtree", 40, 300, seed=12, k=2, mode="perm"))
    assert a.records()[0]["empirical"] == b.records()[0]["empirical"]
    assert [c.empirical for c in a.checks] == [c.empirical for c in b.checks]


def test_trapezoidal_experiment():
    rep = experiment_trapezoidal(ExperimentConfig("trapezoidal", 3, 15000, seed=42))
    assert rep.passed
    assert {lo: obs for lo, _, obs, _ in rep.bins}.keys() == pmf_L(3).probs.keys()
    one = experiment_trapezoidal(ExperimentConfig("trapezoidal", 1, 20, seed=42))
    assert one.skipped and one.bins[0][2] == 20
    full = experiment_trapezoidal(ExperimentConfig("trapezoidal", 6, 1), exhaustive=True)
    assert full.passed and full.replicates == 10395
    assert {lo: obs for lo, _, obs, _ in full.bins} == eulerian_row(6)


def test_pool_bins_merges_sparse_tails():
    pmf = pmf_L(8).probs
    bins = pool_bins({}, pmf, 100)
    assert all(exp >= 5 for *_, exp in bins)
    assert sum(exp for *_, exp in bins) == pytest.approx(100)
    stray = pool_bins({99: 3}, pmf, 100)
    assert stray[-1] == (99, 99, 3, 0.0)


@pytest.mark.parametrize("kwargs", [
    {"experiment": "nope", "n": 3, "replicates": 1},
    {"experiment": "adp", "n": 0, "replicates": 1},
    {"experiment": "adp", "n": 3, "replicates": 0},
    {"experiment": "adp", "n": 3, "replicates": 1, "seed": -1},
    {"experiment": "adp", "n": 3, "replicates": 1, "mode": "fast"},
    {"experiment": "adp", "n": 3, "replicates": 1, "workers": 0},
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kwargs)


def test_missing_seed_is_resolved_and_reported():
    cfg = ExperimentConfig("adp", 5, 10).resolved()
    assert cfg.seed is not None
    rep = experiment_adp(ExperimentConfig("adp", 5, 10))
    assert rep.seed is not None


# -- determinism ---------------------------------------------------------------

@pytest.mark.parametrize("name, extra", [("adp", {}), ("subtree", {"k": 2}), ("pmf", {}), ("trapezoidal", {})])
def test_byte_identical_output(name, extra):
    from stirtree.harness.experiments import run_experiment
    outs = set()
    for workers in (1, 2, 1):
        cfg = ExperimentConfig(name, 20, 1500, seed=314, workers=workers, **extra)
        outs.add(_dump(run_experiment(cfg), "json") + _dump(run_experiment(cfg), "csv"))
    assert len(outs) == 1


# -- output & CLI --------------------------------------------------------------

def test_json_records_have_contract_fields():
    rep = experiment_adp(ExperimentConfig("adp", 10, 100, seed=1))
    for line in _dump(rep).splitlines():
        rec = json.loads(line)
        assert {"experiment", "n", "R", "seed", "statistic", "empirical", "oracle", "stderr"} <= rec.keys()


def test_csv_header_stable():
    rep = experiment_adp(ExperimentConfig("adp", 10, 100, seed=1))
    header = _dump(rep, "csv").splitlines()[0]
    assert header.startswith("experiment,n,R,seed,statistic,empirical,oracle,stderr")


def test_cli_generate_and_enumerate(capsys):
    assert main(["generate", "--n", "4", "--count", "3", "--seed", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert main(["generate", "--n", "4", "--count", "3", "--seed", "5"]) == 0
    assert capsys.readouterr().out.splitlines() == lines
    assert main(["generate", "--kind", "tree", "--render", "--n", "2", "--seed", "1"]) == 0
    assert capsys.readouterr().out.startswith("0(")
    assert main(["generate", "--kind", "trapezoidal", "--n", "3"]) == 0
    captured = capsys.readouterr()
    assert "seed=" in captured.err
    assert main(["enumerate", "--n", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == ["2 2 1 1", "1 2 2 1", "1 1 2 2"]
    assert main(["enumerate", "--n", "9"]) == 2


def test_cli_stats_eulerian_pmf(capsys):
    assert main(["stats", "1 2 2 1"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert (rec["ascents"], rec["descents"], rec["plateaux"]) == (2, 2, 1)
    assert rec["distances"] == "3 1"
    assert main(["stats", "2 1 1 2"]) == 2
    capsys.readouterr()
    assert main(["eulerian", "--n", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "3, 3, 6"
    assert main(["pmf", "--n", "3"]) == 0
    assert "3,2,8,8/15" in capsys.readouterr().out
    assert main(["pmf", "--n", "2", "--joint", "--format", "json"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_cli_urn(capsys, tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["urn", "--steps", "10", "--seed", "2", "--every", "5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "step,count_1,count_2,count_3"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "5", "10"]
    assert main(["urn", "--which", "two", "--steps", "3", "--seed", "2"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "0,1,2"


def test_cli_experiment_exit_codes(capsys):
    assert main(["experiment", "adp", "--n", "50", "-R", "500", "--seed", "1"]) == 0
    assert main(["experiment", "subtree", "--n", "5", "--k", "9", "-R", "10", "--seed", "1"]) == 2
    assert main(["experiment", "adp", "--n", "0", "-R", "10"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "bogus", "--n", "3"])
    assert exc.value.code == 2


def test_cli_experiment_reports_failure(capsys, monkeypatch):
    from stirtree.harness import experiments
    monkeypatch.setattr(experiments, "MEAN_VAR_BOUND", -1.0)
    assert main(["experiment", "adp", "--n", "20", "-R", "200", "--seed", "1"]) == 1


def test_cli_verify(capsys):
    assert main(["verify", "enumeration"]) == 0
    recs = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert recs and all(r["passed"] for r in recs)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


def test_verify_suites_pass():
    for suite in ("bijection", "oracles"):
        results = verify(suite)
        assert results and all(r.passed for r in results), [r for r in results if not r.passed]
    with pytest.raises(ValueError):
        verify("nope")
