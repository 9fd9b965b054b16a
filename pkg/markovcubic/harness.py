"""
Experiments tying the model, the Markov groups and the finite-field sweeps
together. Each `cmd_*` function takes an ExperimentConfig and returns a
result object that can be rendered as JSON, CSV rows or HTML.

"""
import json
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fpfactor import (
    Cubic,
    PCFCubic,
    SkipPrime,
    catalog_entry,
    factor_shape,
    iterate_and_factor,
    orbit_collapses,
    primes_in_range,
    primes_one_mod_three,
    reduce_mod_p,
    select_model,
)
from .groupforge import (
    PRINTED_HAUSDORFF_VALUES,
    MarkovGroups,
    TheoremCheck,
    closed_form_ratio,
    cycle_data,
    hausdorff_limit,
    sampling_tolerance,
    theorem_report,
)
from .treeauto import TreeAut
from .typedyn import (
    DEFAULT_MAX_SUPPORT,
    MODEL_LABELS,
    CycleDataDist,
    Data,
    OrbitSpec,
    TypeDynamics,
    initial_data,
)
from .util import ResourceLimitError, Verdict, fraction_to_str, parse_fraction

log = logging.getLogger(__name__)

DEFAULT_POLY = "-2z^3+3z^2"
EMPIRICAL_TV_FLAG = 0.05
MAX_PRIME_BOUND = 2**63 - 1
MAX_MODEL_LEVEL = 8
MAX_GROUP_REPORT_LEVEL = 4


def _structure_text(structure: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in structure) + ")"


def _weight_text(weight) -> str:
    if isinstance(weight, Fraction):
        return fraction_to_str(weight)
    return f"{float(weight):.6f}"


def _distribution_rows(source: str, dist: CycleDataDist) -> List[dict]:
    return [
        {"source": source, "cycles": _structure_text(s), "weight": _weight_text(w)}
        for s, w in sorted(dist.items())
    ]


def _distribution_html(dist: CycleDataDist) -> str:
    rows = "".join(
        f"<tr><td>{_structure_text(s)}</td><td>{_weight_text(w)}</td></tr>"
        for s, w in sorted(dist.items())
    )
    return f"<table><tr><th>Cycles</th><th>Weight</th></tr>{rows}</table>"


@dataclass
class ExperimentConfig:
    """
    Everything an experiment needs. Missing values fall back to the
    Model 4 experiment on -2z^3+3z^2 at t = 3.
    """

    poly: Optional[str] = DEFAULT_POLY
    coeffs: Optional[str] = None
    translation: Fraction = Fraction(0)
    t: Fraction = Fraction(3)
    level: int = 1
    prime_bound: int = 10**4
    model: Optional[int] = None
    orbit_length: Optional[int] = None
    samples: int = 100000
    seed: int = 0
    max_support: int = DEFAULT_MAX_SUPPORT
    mode: str = "auto"
    workers: int = 1
    records: Optional[str] = None
    labels: bool = False
    max_level: int = 12

    def __post_init__(self):
        self.t = parse_fraction(self.t)
        self.translation = parse_fraction(self.translation)
        self.level = int(self.level)
        self.prime_bound = int(self.prime_bound)
        if self.prime_bound < 5:
            raise ValueError(f"Prime bound must be at least 5, got {self.prime_bound}")
        if self.prime_bound > MAX_PRIME_BOUND:
            raise ValueError(f"Prime bound {self.prime_bound} exceeds the 64-bit range")
        if self.level < 0:
            raise ValueError(f"Invalid level {self.level}")
        if self.mode not in ("auto", "exact", "sampled"):
            raise ValueError(f"Invalid mode {self.mode}")
        if self.samples < 1:
            raise ValueError(f"Invalid number of samples {self.samples}")
        if self.model is not None:
            self.model = int(self.model)
        self.labels = bool(self.labels)
        if self.workers < 1:
            raise ValueError(f"Invalid number of workers {self.workers}")

    @property
    def cubic(self) -> Cubic:
        if self.coeffs:
            return Cubic.from_text(self.coeffs)
        return catalog_entry(self.poly or DEFAULT_POLY, self.translation)

    def resolved_orbit_length(self) -> int:
        if self.orbit_length is not None:
            return int(self.orbit_length)
        cubic = self.cubic
        if isinstance(cubic, PCFCubic):
            return cubic.orbit_length
        return 1

    def resolved_model(self) -> int:
        """The explicit model, or the one selected from f and t."""
        if self.model is not None:
            return self.model
        cubic = self.cubic
        if not isinstance(cubic, PCFCubic):
            raise ValueError("A model must be given for a cubic without critical data")
        return select_model(cubic, self.t)

    @classmethod
    def from_multiparser(cls, multiparser) -> "ExperimentConfig":
        defaults = cls()
        values = {}
        for key in (
            "poly",
            "coeffs",
            "translation",
            "t",
            "level",
            "prime_bound",
            "model",
            "orbit_length",
            "samples",
            "seed",
            "max_support",
            "mode",
            "workers",
            "records",
            "labels",
            "max_level",
        ):
            values[key] = multiparser.argumentOrConfig(key, getattr(defaults, key))
        return cls(**values)


@dataclass
class ModelResult:
    model_id: int
    orbit_length: int
    level: int
    data: Optional[Data]
    cycle_data: CycleDataDist
    method: str

    def to_json(self) -> dict:
        return {
            "model": self.model_id,
            "orbit_length": self.orbit_length,
            "level": self.level,
            "method": self.method,
            "data": self.data.to_json() if self.data is not None else None,
            "cycle_data": self.cycle_data.to_json(),
        }

    def to_rows(self) -> List[dict]:
        return _distribution_rows("model", self.cycle_data)

    def to_html(self) -> str:
        return (
            f"<p>Model {self.model_id} (orbit length {self.orbit_length}) at level "
            f"{self.level}, {self.method}.</p>" + _distribution_html(self.cycle_data)
        )


def level_zero_data(model_id: int, orbit_length: int) -> Data:
    """Data of x - t: one fixed point, uniform over the admissible labels."""
    labels, _ = MODEL_LABELS[orbit_length][model_id]
    weight = Fraction(1, len(labels))
    data = Data()
    for label in labels:
        data = data + Data.point(f"[{label},1]", weight)
    return data


def cmd_model(config: ExperimentConfig) -> ModelResult:
    """
    Propagate the selected model to `config.level`. The typed data are
    kept while their support fits `max_support`; past that only the exact
    cycle data are computed. When even those exceed the cap, "auto" mode
    falls back to Monte Carlo simulation and "exact" mode fails.
    """
    m = config.resolved_orbit_length()
    model_id = config.resolved_model()
    if config.level > MAX_MODEL_LEVEL:
        raise ResourceLimitError(
            f"Level {config.level} exceeds the model level bound {MAX_MODEL_LEVEL}"
        )
    if config.level == 0:
        data = level_zero_data(model_id, m)
        return ModelResult(model_id, m, 0, data, data.cycle_marginal(), "exact")
    start = initial_data(model_id, m)
    dynamics = TypeDynamics(OrbitSpec(m, 1), max_support=config.max_support)
    steps = config.level - 1
    if config.mode != "sampled":
        try:
            data = dynamics.propagate(start, steps)
            return ModelResult(model_id, m, config.level, data, data.cycle_marginal(), "exact")
        except ResourceLimitError:
            log.info("Typed data at level %d exceed the support cap", config.level)
        try:
            dist = dynamics.marginal_after(start, steps)
            return ModelResult(model_id, m, config.level, None, dist, "exact cycle data")
        except ResourceLimitError:
            if config.mode == "exact":
                raise
            log.warning(
                "Exact cycle data at level %d exceed the support cap; simulating",
                config.level,
            )
    dist = dynamics.simulate_chain(start, steps, config.samples, config.seed)
    method = f"simulated n={config.samples} seed={config.seed}"
    return ModelResult(model_id, m, config.level, None, dist, method)


@dataclass
class GroupResult:
    level: int
    orbit_length: int
    checks: List[TheoremCheck]
    model_id: Optional[int] = None
    cycle_data: Optional[CycleDataDist] = None
    method: str = ""

    @property
    def failed(self) -> bool:
        return any(c.verdict == Verdict.FAIL for c in self.checks)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "orbit_length": self.orbit_length,
            "checks": [c.to_json() for c in self.checks],
            "model": self.model_id,
            "method": self.method,
            "cycle_data": self.cycle_data.to_json() if self.cycle_data else None,
        }

    def to_rows(self) -> List[dict]:
        rows = [
            {"claim": c.claim, "computed": c.computed, "expected": c.expected, "verdict": c.verdict.value}
            for c in self.checks
        ]
        if self.cycle_data is not None:
            rows += _distribution_rows("group", self.cycle_data)
        return rows

    def to_html(self) -> str:
        rows = "".join(
            f"<tr><td>{c.claim}</td><td>{c.verdict.value}</td><td>{c.method}</td></tr>"
            for c in self.checks
        )
        html = f"<table><tr><th>Claim</th><th>Verdict</th><th>Method</th></tr>{rows}</table>"
        if self.cycle_data is not None:
            html += f"<p>Cycle data of the Model {self.model_id} group:</p>"
            html += _distribution_html(self.cycle_data)
        return html


def group_cycle_data(config: ExperimentConfig, model_id: int, m: int):
    groups = MarkovGroups(config.level, m)
    group = groups.model_group(model_id)
    return cycle_data(
        [TreeAut.identity(config.level)],
        group,
        group,
        config.mode,
        config.samples,
        config.seed,
    )


def cmd_group(config: ExperimentConfig) -> GroupResult:
    """Structure checks at one level, plus the model group's cycle data."""
    m = config.resolved_orbit_length()
    if config.level > MAX_GROUP_REPORT_LEVEL:
        raise ResourceLimitError(
            f"Group reports are limited to level {MAX_GROUP_REPORT_LEVEL}, got {config.level}"
        )
    if config.level < 2:
        raise ValueError(f"Group reports need level at least 2, got {config.level}")
    checks = theorem_report(
        config.level,
        m,
        mode=config.mode,
        samples=config.samples,
        seed=config.seed,
        max_support=config.max_support,
    )
    result = GroupResult(config.level, m, checks)
    if config.model is not None:
        cd = group_cycle_data(config, config.model, m)
        result.model_id = config.model
        result.cycle_data = cd.distribution
        result.method = cd.method
    return result


def _factor_primes(
    cubic: Cubic, t: Fraction, level: int, primes: Sequence[int], labels: bool = False
) -> List[tuple]:
    """
    Worker: (p, record or None, skip reason or None, violations) per prime.
    Shapes come from distinct-degree factorization unless `labels` asks for
    the complete factorization with labels and law checks.
    """
    out = []
    for p in primes:
        try:
            red = reduce_mod_p(cubic, t, p)
            if not labels:
                shape = factor_shape(red, level)
                out.append((p, {"p": p, "n": level, "shape": list(shape)}, None, 0))
                continue
            if isinstance(cubic, PCFCubic) and orbit_collapses(cubic, p):
                raise SkipPrime("orbit-collapse", p)
            result = iterate_and_factor(red, level)
        except SkipPrime as err:
            out.append((p, None, err.reason, 0))
            continue
        out.append((p, result.to_record(), None, result.violations))
    return out


@dataclass
class FactorSweep:
    level: int
    prime_bound: int
    records: List[dict] = field(default_factory=list)
    skipped: Dict[str, int] = field(default_factory=dict)
    violations: int = 0
    labels: bool = False

    @property
    def primes_used(self) -> int:
        return len(self.records)

    @property
    def failed(self) -> bool:
        return self.violations > 0

    def shape_counts(self) -> Counter:
        return Counter(tuple(sorted(r["shape"], reverse=True)) for r in self.records)

    def distribution(self) -> CycleDataDist:
        total = self.primes_used
        if not total:
            return CycleDataDist()
        return CycleDataDist({s: c / total for s, c in self.shape_counts().items()})

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "prime_bound": self.prime_bound,
            "primes_used": self.primes_used,
            "skipped": dict(sorted(self.skipped.items())),
            "violations": self.violations,
            "labels": self.labels,
            "frequencies": self.distribution().to_json(),
        }

    def to_rows(self) -> List[dict]:
        return _distribution_rows("empirical", self.distribution())

    def to_html(self) -> str:
        skipped = ", ".join(f"{k}: {v}" for k, v in sorted(self.skipped.items())) or "none"
        return (
            f"<p>{self.primes_used} primes up to {self.prime_bound} at level {self.level}; "
            f"skipped {skipped}; "
            + (f"{self.violations} law violations.</p>" if self.labels else "shapes only.</p>")
            + _distribution_html(self.distribution())
        )


def cmd_factor(config: ExperimentConfig) -> FactorSweep:
    """
    Factor f^n - t modulo every prime up to the bound (p = 1 mod 3 for cubics
    with critical data) and tabulate the factorization shapes.
    """
    cubic = config.cubic
    if isinstance(cubic, PCFCubic):
        primes = primes_one_mod_three(5, config.prime_bound + 1)
    else:
        primes = primes_in_range(5, config.prime_bound + 1)
    chunk = max(1, math.ceil(len(primes) / (config.workers * 4)))
    chunks = [primes[i : i + chunk] for i in range(0, len(primes), chunk)]
    outcomes: List[tuple] = []
    if config.workers == 1:
        for part in chunks:
            outcomes.extend(_factor_primes(cubic, config.t, config.level, part, config.labels))
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [
                pool.submit(_factor_primes, cubic, config.t, config.level, part, config.labels)
                for part in chunks
            ]
            for future in futures:
                outcomes.extend(future.result())
    sweep = FactorSweep(config.level, config.prime_bound, labels=config.labels)
    skipped: Counter = Counter()
    outcomes.sort(key=lambda o: o[0])
    for count, (p, record, reason, violations) in enumerate(outcomes, start=1):
        if reason is not None:
            skipped[reason] += 1
            log.debug("Skipped p=%d: %s", p, reason)
        else:
            sweep.records.append(record)
            sweep.violations += violations
        if count % 1000 == 0:
            log.info("Merged %d of %d primes", count, len(outcomes))
    sweep.skipped = dict(skipped)
    if config.records:
        with open(config.records, "w") as fh:
            for record in sweep.records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
    return sweep


@dataclass
class ComparisonReport:
    """
    Model prediction, group cycle data and empirical frequencies at one
    level, with their pairwise total-variation distances.
    """

    level: int
    model: CycleDataDist
    group: CycleDataDist
    empirical: CycleDataDist
    group_samples: Optional[int]
    primes_used: int
    skipped: Dict[str, int]
    violations: int = 0

    def __post_init__(self):
        for name, dist in (("model", self.model), ("group", self.group), ("empirical", self.empirical)):
            for structure in dist.structures():
                if sum(structure) != 3**self.level:
                    raise ValueError(
                        f"The {name} distribution has a cycle structure of size "
                        f"{sum(structure)}, expected level {self.level}"
                    )

    @property
    def distances(self) -> Dict[str, float]:
        return {
            "model-group": self.model.tv_distance(self.group),
            "model-empirical": self.model.tv_distance(self.empirical),
            "group-empirical": self.group.tv_distance(self.empirical),
        }

    @property
    def outside_model_support(self) -> List[Tuple[int, ...]]:
        support = set(self.model.structures())
        return [s for s in self.empirical.structures() if s not in support]

    @property
    def containment(self) -> Verdict:
        return Verdict.FAIL if self.outside_model_support else Verdict.PASS

    @property
    def model_group_verdict(self) -> Verdict:
        if self.group_samples is None:
            return Verdict.PASS if self.model == self.group else Verdict.FAIL
        tolerance = sampling_tolerance(self.model, self.group_samples)
        return (
            Verdict.WITHIN_TOLERANCE
            if self.distances["model-group"] <= tolerance
            else Verdict.FAIL
        )

    @property
    def empirical_flagged(self) -> bool:
        return self.distances["model-empirical"] > EMPIRICAL_TV_FLAG

    @property
    def failed(self) -> bool:
        return (
            self.containment == Verdict.FAIL
            or self.model_group_verdict == Verdict.FAIL
            or self.violations > 0
        )

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "distances": self.distances,
            "model_group": self.model_group_verdict.value,
            "containment": self.containment.value,
            "outside_model_support": [list(s) for s in self.outside_model_support],
            "empirical_flagged": self.empirical_flagged,
            "primes_used": self.primes_used,
            "skipped": dict(sorted(self.skipped.items())),
            "violations": self.violations,
            "model": self.model.to_json(),
            "group": self.group.to_json(),
            "empirical": self.empirical.to_json(),
        }

    def to_rows(self) -> List[dict]:
        return (
            _distribution_rows("model", self.model)
            + _distribution_rows("group", self.group)
            + _distribution_rows("empirical", self.empirical)
        )

    def to_html(self) -> str:
        distances = "".join(
            f"<li>{k}: {v:.4f}</li>" for k, v in sorted(self.distances.items())
        )
        structures = sorted(
            set(self.model.structures()) | set(self.group.structures()) | set(self.empirical.structures())
        )
        rows = "".join(
            f"<tr><td>{_structure_text(s)}</td><td>{_weight_text(self.model[s])}</td>"
            f"<td>{_weight_text(self.group[s])}</td><td>{_weight_text(self.empirical[s])}</td></tr>"
            for s in structures
        )
        return (
            f"<p>Containment: {self.containment.value}. Model and group: "
            f"{self.model_group_verdict.value}. {self.primes_used} primes.</p>"
            f"<ul>{distances}</ul>"
            f"<table><tr><th>Cycles</th><th>Model</th><th>Group</th><th>Empirical</th></tr>{rows}</table>"
        )


def cmd_compare(config: ExperimentConfig) -> ComparisonReport:
    if config.level < 1:
        raise ValueError("Comparisons need level at least 1")
    model = cmd_model(config)
    group = group_cycle_data(config, model.model_id, model.orbit_length)
    sweep = cmd_factor(config)
    report = ComparisonReport(
        config.level,
        model.cycle_data,
        group.distribution,
        sweep.distribution(),
        None if group.exact else group.samples,
        sweep.primes_used,
        sweep.skipped,
        sweep.violations,
    )
    if report.outside_model_support:
        log.warning(
            "Observed shapes outside the model support: %s", report.outside_model_support
        )
    if report.empirical_flagged:
        log.warning(
            "Empirical frequencies are %.4f from the model",
            report.distances["model-empirical"],
        )
    return report


@dataclass
class HausdorffTable:
    rows: List[dict]
    limits: Dict[str, float]

    def to_json(self) -> dict:
        return {"rows": self.rows, "limits": self.limits}

    def to_rows(self) -> List[dict]:
        return [
            {k: "" if v is None else v for k, v in row.items()} for row in self.rows
        ]

    def to_html(self) -> str:
        body = "".join(
            f"<tr><td>{r['level']}</td><td>{r['orbit_length_1']:.6f}</td>"
            f"<td>{'' if r['orbit_length_2'] is None else format(r['orbit_length_2'], '.6f')}</td></tr>"
            for r in self.rows
        )
        limits = "".join(f"<li>{k}: {v:.6f}</li>" for k, v in self.limits.items())
        return (
            "<table><tr><th>Level</th><th>Orbit length 1</th><th>Orbit length 2</th></tr>"
            f"{body}</table><ul>{limits}</ul>"
        )


def cmd_hausdorff(max_level: int) -> HausdorffTable:
    if max_level < 1:
        raise ValueError(f"Invalid maximum level {max_level}")
    rows = [
        {
            "level": n,
            "orbit_length_1": closed_form_ratio(n, 1),
            "orbit_length_2": closed_form_ratio(n, 2),
        }
        for n in range(1, max_level + 1)
    ]
    limits = {
        "orbit length 1": hausdorff_limit(1),
        "orbit length 2": hausdorff_limit(2),
    }
    for name, value in PRINTED_HAUSDORFF_VALUES.items():
        limits[f"orbit length 2, {name}"] = value
    return HausdorffTable(rows, limits)
