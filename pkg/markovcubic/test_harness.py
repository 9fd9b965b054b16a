import json
import time
from fractions import Fraction

import pytest

from .harness import (
    ComparisonReport,
    ExperimentConfig,
    cmd_compare,
    cmd_factor,
    cmd_group,
    cmd_hausdorff,
    cmd_model,
)
from .groupforge import closed_form_ratio, hausdorff_limit
from .typedyn import CycleDataDist, Data, OrbitSpec, TypeDynamics, initial_data, theorem_family
from .util import ResourceLimitError, Verdict

S3_SPLIT = CycleDataDist(
    {(1, 1, 1): Fraction(1, 6), (3,): Fraction(1, 3), (2, 1): Fraction(1, 2)}
)


class FakeMultiParser:
    def __init__(self, config):
        self.config = config

    def argumentOrConfig(self, key, default=None, dependency=None):
        return self.config.get(key, default)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(prime_bound=4)
    with pytest.raises(ValueError):
        ExperimentConfig(mode="fast")
    with pytest.raises(ValueError):
        ExperimentConfig(t="1/0")
    assert ExperimentConfig(t="4/3").resolved_model() == 2
    assert ExperimentConfig().resolved_model() == 4


def test_config_from_multiparser():
    config = ExperimentConfig.from_multiparser(
        FakeMultiParser({"t": "5/8", "poly": "2z^3-3z^2+1/2", "level": "2"})
    )
    assert config.level == 2
    assert config.t == Fraction(5, 8)
    assert config.resolved_orbit_length() == 2
    assert config.resolved_model() == 3


def test_model_level_zero_and_one():
    result = cmd_model(ExperimentConfig(level=0))
    assert result.data == Data.from_text({"[n,1]": "1/2", "[s,1]": "1/2"})
    assert result.cycle_data == CycleDataDist({(1,): 1})
    assert cmd_model(ExperimentConfig(level=1)).data == initial_data(4, 1)
    assert cmd_model(ExperimentConfig(level=1)).cycle_data == S3_SPLIT


def test_model_two_is_the_sum_of_the_first_weighted_data():
    result = cmd_model(ExperimentConfig(level=2, t="4/3"))
    assert result.model_id == 2
    dynamics = TypeDynamics(OrbitSpec(1))
    families = theorem_family(1)
    total = Data()
    for datum in families[:3]:
        total = total + dynamics.propagate_to_level(datum, 2)
    assert result.data == total
    assert result.data.mass == 1


def test_model_simulation_fallback():
    config = ExperimentConfig(level=3, max_support=3, samples=2000, seed=5)
    first = cmd_model(config)
    assert first.data is None
    assert first.method.startswith("simulated")
    assert cmd_model(config).cycle_data == first.cycle_data
    with pytest.raises(ResourceLimitError):
        cmd_model(ExperimentConfig(level=3, max_support=3, mode="exact"))


@pytest.mark.parametrize("poly,t", [("-2z^3+3z^2", "3"), ("2z^3-3z^2+1/2", "1")])
def test_model_level_three_is_exact_and_quick(poly, t):
    start = time.perf_counter()
    result = cmd_model(ExperimentConfig(poly=poly, t=t, level=3))
    assert time.perf_counter() - start < 60
    assert result.method in ("exact", "exact cycle data")
    assert result.cycle_data.mass == 1
    assert all(sum(s) == 27 for s in result.cycle_data.structures())


def test_factor_chebotarev_for_plain_cubic():
    sweep = cmd_factor(ExperimentConfig(coeffs="1,0,1,1", t=0, level=1, prime_bound=10**4))
    assert sweep.skipped.get("not-squarefree") == 1
    assert sweep.primes_used > 1000
    assert sweep.distribution().tv_distance(S3_SPLIT) < 0.05


def test_factor_small_bound_and_records(tmp_path):
    records = tmp_path / "records.jsonl"
    sweep = cmd_factor(ExperimentConfig(prime_bound=10, records=str(records)))
    assert sweep.primes_used == 1
    lines = records.read_text().splitlines()
    assert json.loads(lines[0])["p"] == 7


def test_factor_workers_agree():
    single = cmd_factor(ExperimentConfig(level=2, prime_bound=400, labels=True))
    pooled = cmd_factor(ExperimentConfig(level=2, prime_bound=400, workers=2, labels=True))
    assert single.records == pooled.records
    assert single.skipped == pooled.skipped
    assert single.violations == 0


def test_factor_labels_agree_with_shapes():
    shapes = cmd_factor(ExperimentConfig(level=2, prime_bound=600))
    labelled = cmd_factor(ExperimentConfig(level=2, prime_bound=600, labels=True))
    assert all("labels" not in r for r in shapes.records)
    assert all(len(r["labels"]) == len(r["shape"]) for r in labelled.records)
    by_prime = {r["p"]: r["shape"] for r in shapes.records}
    for record in labelled.records:
        assert by_prime[record["p"]] == record["shape"]
    assert labelled.primes_used + labelled.skipped.get("orbit-collapse", 0) == shapes.primes_used
    assert labelled.to_json()["labels"] and not shapes.to_json()["labels"]


@pytest.mark.slow
def test_factor_full_bound_sweep_matches_model():
    report = cmd_compare(ExperimentConfig(level=2, prime_bound=10**5, workers=2))
    assert report.primes_used > 3000
    assert not report.empirical_flagged
    assert report.containment == Verdict.PASS
    assert not report.failed


def test_compare_model_four():
    report = cmd_compare(ExperimentConfig(level=2, prime_bound=3000))
    assert report.model_group_verdict == Verdict.PASS
    assert report.distances["model-group"] == 0
    assert report.containment == Verdict.PASS
    assert not report.failed
    assert report.to_json()["containment"] == "pass"


def test_comparison_rejects_mixed_levels():
    with pytest.raises(ValueError):
        ComparisonReport(2, S3_SPLIT, S3_SPLIT, S3_SPLIT, None, 0, {})


def test_containment_failure_is_reported():
    report = ComparisonReport(
        1,
        CycleDataDist({(3,): 1}),
        CycleDataDist({(3,): 1}),
        CycleDataDist({(2, 1): 1.0}),
        None,
        10,
        {},
    )
    assert report.containment == Verdict.FAIL
    assert report.outside_model_support == [(2, 1)]
    assert report.failed


def test_group_command():
    result = cmd_group(ExperimentConfig(level=2, model=4))
    assert not result.failed
    assert result.cycle_data == cmd_model(ExperimentConfig(level=2)).cycle_data
    with pytest.raises(ResourceLimitError):
        cmd_group(ExperimentConfig(level=10))
    with pytest.raises(ValueError):
        cmd_group(ExperimentConfig(level=1))


def test_hausdorff_table():
    table = cmd_hausdorff(12)
    assert table.rows[0]["orbit_length_1"] == pytest.approx(1.0)
    assert table.rows[0]["orbit_length_2"] is None
    # M_2 is all of Aut(T_2) at orbit length 2
    assert table.rows[1]["orbit_length_2"] == pytest.approx(1.0)
    assert abs(table.rows[-1]["orbit_length_1"] - hausdorff_limit(1)) < 0.002
    assert abs(table.rows[-1]["orbit_length_2"] - hausdorff_limit(2)) < 0.002
    assert closed_form_ratio(2, 1) == pytest.approx(
        (4 * 1.0986122886681098 + 3 * 0.6931471805599453) / (4 * 1.791759469228055)
    )
    assert len(table.limits) == 5
