import json

import pytest

from rainbow import (
    RandomModel,
    cyclic_factorization,
    drisko_instance,
    max_rainbow,
    remark_general_instance,
    theorem_bound,
    validate_instance,
)
from rainbow.core import RainbowError
from rainbow.harness import (
    Mode,
    SearchInfeasible,
    SearchJob,
    Strategy,
    TheoremViolation,
    VerifyJob,
    mutate,
    search_counterexample,
    verify_theorem,
)
from rainbow.exact import SolverConfig
from rainbow.rng import PortableRng
import rainbow.harness as harness


def _stable(report):
    return [{k: v for k, v in vars(r).items() if k != "wall_ms"} for r in report.rows]


def test_verify_random_drisko_regime():
    job = VerifyJob(k=0, model=RandomModel.square(4, 7, seed=0), trials=100,
                    mode=Mode.CROSS_CHECK_EXACT)
    report = verify_theorem(job)
    s = report.summary()
    assert s["instances"] == 100 and s["violations"] == 0
    assert s["min_constructive_size"] == 4
    assert all(r.exact_size == 4 and r.hypothesis_met for r in report.rows)
    assert [r.instance_id for r in report.rows[:2]] == ["seed=0/trial=0", "seed=0/trial=1"]


def test_verify_hypothesis_not_met():
    report = verify_theorem(VerifyJob(k=0, corpus=[drisko_instance(4)],
                                      mode=Mode.CROSS_CHECK_EXACT))
    (row,) = report.rows
    assert not row.hypothesis_met and not row.guarantee_met
    assert row.constructive_size == 3 == row.exact_size
    assert report.violations == 0
    assert report.summary()["hypothesis_not_met"] == 1


def test_verify_cyclic9():
    assert theorem_bound(9, 2) == 9
    report = verify_theorem(VerifyJob(k=2, corpus=[cyclic_factorization(9)]))
    (row,) = report.rows
    assert row.hypothesis_met and row.constructive_size >= 7


def test_verify_rejects_general():
    with pytest.raises(RainbowError):
        verify_theorem(VerifyJob(k=0, corpus=[remark_general_instance(2)]))


def test_verify_job_checks():
    with pytest.raises(ValueError):
        VerifyJob(k=0)
    with pytest.raises(ValueError):
        VerifyJob(k=4, model=RandomModel.square(4, 7))
    with pytest.raises(ValueError):
        VerifyJob(k=0, model=RandomModel.square(4, 7), trials=0)


def test_violation_aborts_with_bundle(monkeypatch):
    inst = drisko_instance(3)
    real = harness.find_rainbow

    def broken(inst, target=None, **kw):
        res = real(inst, target, **kw)
        res.met_target = False
        res.matching = type(res.matching)(frozenset(list(res.matching.entries)[:1]))
        return res

    monkeypatch.setattr(harness, "find_rainbow", broken)
    padded = inst.with_matchings(inst.matchings + (inst.matchings[0],))  # N = 5 = 2n-1
    with pytest.raises(TheoremViolation) as err:
        verify_theorem(VerifyJob(k=0, corpus=[padded]))
    bundle = err.value.bundle
    assert bundle["instance_id"] == "corpus[0]"
    assert bundle["instance"]["n"] == 3 and len(bundle["instance"]["matchings"]) == 5
    assert "trace" in bundle


def test_reports_deterministic_and_parallel_consistent():
    job = VerifyJob(k=1, model=RandomModel(5, 6, 6, 5, seed=9), trials=24)
    one = verify_theorem(job, workers=1)
    two = verify_theorem(job, workers=2)
    assert _stable(one) == _stable(two) == _stable(verify_theorem(job, workers=1))


def test_report_formats():
    report = verify_theorem(VerifyJob(k=0, model=RandomModel.square(3, 5, seed=1), trials=3))
    doc = json.loads(report.to_json())
    assert len(doc["rows"]) == 3 and doc["summary"]["violations"] == 0
    lines = report.to_csv().splitlines()
    assert lines[0].startswith("instance_id,n,N,k,hypothesis_met")
    assert len(lines) == 4


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("RAINBOW_THREADS", "3")
    assert harness.worker_count() == 3
    monkeypatch.setenv("RAINBOW_THREADS", "junk")
    assert harness.worker_count() == 1
    monkeypatch.delenv("RAINBOW_THREADS")
    assert harness.worker_count() == 1


# -- search -------------------------------------------------------------------

def test_mutate_keeps_matchings():
    inst = drisko_instance(4)
    rng = PortableRng(3)
    for _ in range(50):
        inst = mutate(inst, rng)
        assert validate_instance(inst, strict=True).ok


def test_search_below_drisko_bound_finds_witness():
    found = search_counterexample(SearchJob(3, 0, 4, Strategy.MUTATE, trials=300, seed=0))
    assert found is not None
    assert found.exact_size <= 2
    assert max_rainbow(found.instance).size == found.exact_size
    assert found.instance.N == 4


@pytest.mark.parametrize("strategy", list(Strategy))
def test_search_at_drisko_bound_finds_nothing(strategy):
    for seed in range(3):
        assert search_counterexample(SearchJob(3, 0, 5, strategy, trials=60, seed=seed)) is None


def test_search_single_class():
    assert theorem_bound(2, 1) == 1
    assert search_counterexample(SearchJob(2, 1, 1, Strategy.RANDOM, trials=20)) is None


def test_search_from_given_instance():
    start = drisko_instance(3)
    found = search_counterexample(SearchJob(3, 0, 4, Strategy.MUTATE, trials=1), initial=start)
    assert found is not None and found.instance == start and found.trial == 0


def test_search_infeasible_budget():
    with pytest.raises(SearchInfeasible):
        search_counterexample(SearchJob(6, 0, 6, Strategy.MUTATE, trials=2),
                              cfg=SolverConfig(node_budget=1), initial=cyclic_factorization(6))


def test_search_job_checks():
    with pytest.raises(ValueError):
        SearchJob(3, 3, 4)
    with pytest.raises(ValueError):
        SearchJob(3, 0, 0)
