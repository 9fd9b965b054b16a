from fractions import Fraction

import pytest

from .typedyn import (
    MODEL_LABELS,
    MODEL_TABLES,
    CycleDataDist,
    Data,
    OrbitSpec,
    TypeDynamics,
    TypedPartition,
    as_label,
    initial_data,
    shift_label,
    theorem_family,
)
from .util import ResourceLimitError

M1 = TypeDynamics(OrbitSpec(1))
M2 = TypeDynamics(OrbitSpec(2, 1))


def test_shift_label():
    assert shift_label("s", OrbitSpec(1)) == as_label("s")
    assert shift_label("n", OrbitSpec(1)) == as_label("n")
    orbit = OrbitSpec(2, 1)
    assert shift_label("sn", orbit) == as_label("ns")
    assert shift_label("ns", orbit) == as_label("sn")
    assert shift_label("ss", orbit) == as_label("ss")
    assert shift_label("nn", orbit) == as_label("nn")
    with pytest.raises(ValueError):
        shift_label("s", orbit)
    with pytest.raises(ValueError):
        OrbitSpec(2, 3)


def test_typed_partition_text():
    tp = TypedPartition.from_text("[s,1][n,1]^2")
    assert tp.to_text() == "[n,1]^2[s,1]"
    assert tp.level == 1
    assert tp.cycle_structure == (1, 1, 1)
    assert TypedPartition.from_text("[n,2][s,1]") == TypedPartition.from_text("[s,1][n,2]")
    with pytest.raises(ValueError):
        TypedPartition.from_text("[x,1]")
    with pytest.raises(ValueError):
        TypedPartition.from_text("[s,1]junk")


def test_step_type_length_one():
    assert M1.step_type("s", 1) == Data.from_text(
        {"[s,3]": "2/3", "[s,1]^3": "1/12", "[s,1][n,1]^2": "1/4"}
    )
    assert M1.step_type("s", 3) == Data.from_text(
        {"[s,9]": "2/3", "[s,3]^3": "1/12", "[s,3][n,3]^2": "1/4"}
    )
    assert M1.step_type("n", 1) == Data.from_text(
        {"[n,2][s,1]": "1/2", "[s,2][n,1]": "1/2"}
    )


def test_step_type_length_two():
    step = M2.step_type("ss", 1)
    assert step == Data.from_text(
        {
            "[ss,3]": "2/3",
            "[ss,1]^3": "1/48",
            "[ss,1][nn,1]^2": "1/16",
            "[ss,1][ns,1]^2": "1/16",
            "[ss,1][sn,1]^2": "1/16",
            "[nn,1][ns,1][sn,1]": "1/8",
        }
    )
    assert step.mass == 1
    assert M2.step_type("sn", 1)["[ns,3]"] == Fraction(2, 3)
    assert M2.step_type("nn", 1).mass == 1
    assert len(M2.step_type("ns", 1)) == 4


def test_step_partition():
    data = M1.step_partition(TypedPartition.from_text("[s,1]^3"))
    assert data["[s,3]^3"] == Fraction(8, 27)
    assert data.mass == 1
    assert M1.step_partition(TypedPartition.from_text("[n,1]")) == M1.step_type("n", 1)


def test_propagate():
    model4 = initial_data(4, 1)
    assert M1.propagate(model4, 0) == model4
    assert M1.propagate(Data.point("[s,3]"), 1) == Data.from_text(
        {"[s,9]": "2/3", "[s,3]^3": "1/12", "[s,3][n,3]^2": "1/4"}
    )
    deeper = M1.propagate(model4, 2)
    assert deeper.mass == 1
    assert deeper.level == 3
    for partition, _ in deeper.items():
        assert partition.size == 27
        for _, length in partition:
            while length % 2 == 0:
                length //= 2
            while length % 3 == 0:
                length //= 3
            assert length == 1


def test_propagate_weighted_data_keeps_mass():
    data = Data.point("[n,1]^2[s,1]", Fraction(1, 4))
    assert M1.propagate(data, 2).mass == Fraction(1, 4)


def test_propagate_support_cap():
    capped = TypeDynamics(OrbitSpec(1), max_support=3)
    with pytest.raises(ResourceLimitError):
        capped.propagate(initial_data(4, 1), 1)


def test_initial_data_matches_label_mixtures():
    for m, models in MODEL_LABELS.items():
        dynamics = TypeDynamics(OrbitSpec(m, 1))
        for model_id, (labels, reducible) in models.items():
            table = initial_data(model_id, m)
            assert table.mass == 1
            assert table == dynamics.model_from_labels(labels, reducible)
    assert len(MODEL_TABLES[2][5]) == 20


def test_initial_data_errors():
    with pytest.raises(ValueError):
        initial_data(5, 1)
    with pytest.raises(ValueError):
        initial_data(1, 3)


def test_restricted_step():
    assert M2.restricted_step("ss", 1) == TypedPartition.from_text("[ss,3]")
    assert M2.restricted_step("ns", 2) == TypedPartition.from_text("[ns,4][nn,2]")
    assert M2.restricted_step("sn", 1) == TypedPartition.from_text("[ns,3]")
    assert M2.restricted_step("nn", 1) == TypedPartition.from_text("[nn,2][ss,1]")
    assert M1.restricted_step("n", 1) == TypedPartition.from_text("[n,2][s,1]")
    for dynamics in (M1, M2):
        for label in dynamics.labels:
            assert dynamics.step_type(label, 1)[dynamics.restricted_step(label, 1)] > 0


def test_cycle_data_operations():
    assert CycleDataDist({(1, 1, 1): 1}).tA() == CycleDataDist({(3, 3, 3): 1})
    assert CycleDataDist({(3,): 1}).dA() == CycleDataDist({(6, 3): 1})
    mixed = CycleDataDist({(2, 1): Fraction(1, 2), (3,): Fraction(1, 2)})
    assert mixed.product(CycleDataDist({(3,): 1})) == CycleDataDist(
        {(3, 2, 1): Fraction(1, 2), (3, 3): Fraction(1, 2)}
    )
    assert initial_data(1, 1).cycle_marginal() == CycleDataDist({(1, 1, 1): 1})
    assert mixed.tv_distance(mixed) == 0


def test_simulate_chain_is_deterministic():
    data = initial_data(4, 1)
    first = M1.simulate_chain(data, 1, 2000, seed=42)
    second = M1.simulate_chain(data, 1, 2000, seed=42)
    assert first == second
    assert abs(first.mass - 1) < 1e-9


def test_simulate_chain_approaches_exact_propagation():
    data = Data.point("[s,1]")
    exact = M1.propagate(data, 2).cycle_marginal()
    sampled = M1.simulate_chain(data, 2, 50000, seed=1)
    assert sampled.tv_distance(exact) < 0.02
    at_start = M1.simulate_chain(initial_data(4, 1), 0, 50000, seed=2)
    assert at_start.tv_distance(initial_data(4, 1).cycle_marginal()) < 0.02


def test_data_json():
    data = initial_data(3, 1)
    assert Data.from_json(data.to_json()) == data
    assert data.to_json()[0]["p"].count("/") == 1


def test_theorem_families():
    families = theorem_family(1)
    assert [d.mass for d in families][:3] == [
        Fraction(1, 12),
        Fraction(2, 3),
        Fraction(1, 4),
    ]
    assert len(theorem_family(2)) == 10


@pytest.mark.parametrize("orbit_length", [1, 2])
def test_marginal_after_matches_propagation(orbit_length):
    dynamics = TypeDynamics(OrbitSpec(orbit_length, 1))
    for model_id in MODEL_TABLES[orbit_length]:
        data = initial_data(model_id, orbit_length)
        for steps in (0, 1):
            assert dynamics.marginal_after(data, steps) == dynamics.propagate(data, steps).cycle_marginal()
    with pytest.raises(ValueError):
        dynamics.marginal_at_level(initial_data(1, orbit_length), 0)


@pytest.mark.parametrize("orbit_length,level", [(1, 4), (2, 3)])
def test_every_model_keeps_mass(orbit_length, level):
    dynamics = TypeDynamics(OrbitSpec(orbit_length, 1))
    for model_id in MODEL_TABLES[orbit_length]:
        dist = dynamics.marginal_at_level(initial_data(model_id, orbit_length), level)
        assert dist.mass == 1
        assert all(sum(s) == 3**level for s in dist.structures())


def test_part_marginal_stretches():
    single = M1.part_marginal("s", 1)
    assert single == M1.step_type("s", 1).cycle_marginal()
    assert M1.partition_marginal(TypedPartition.from_text("[s,2]"), 1) == single.stretch(2)


def test_simulate_chain_error_shrinks_with_samples():
    data = initial_data(4, 1)
    exact = M1.marginal_after(data, 1)
    small = M1.simulate_chain(data, 1, 2000, seed=8).tv_distance(exact)
    large = M1.simulate_chain(data, 1, 100000, seed=8).tv_distance(exact)
    assert small < 0.08
    assert large < 0.015
