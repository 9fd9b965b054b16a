"""
Typed cycle dynamics.

A label records, letter by letter, whether a factor's product over the
combined critical orbit is a square (s) or not (n). A typed partition is
the cycle data of one factorization together with the label of every
factor; the Markov model moves a typed partition one level down the tree.
All probabilities are exact `Fraction`s.

"""
import heapq
import itertools
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .treeauto import CycleStructure, cycle_type
from .util import ResourceLimitError, fraction_to_str, parse_fraction

log = logging.getLogger(__name__)

Label = Tuple[int, ...]
Part = Tuple[Label, int]
LabelLike = Union[str, Sequence[int]]

DEFAULT_MAX_SUPPORT = 10**5

_LETTERS = {"s": 1, "n": -1}


def as_label(label: LabelLike) -> Label:
    """
    Normalize a label given as text ("sn") or as a tuple of +1 (s) / -1 (n).
    """
    if isinstance(label, str):
        if not label or any(c not in _LETTERS for c in label):
            raise ValueError(f"Invalid label {label!r}")
        return tuple(_LETTERS[c] for c in label)
    label = tuple(int(c) for c in label)
    if not label or any(c not in (1, -1) for c in label):
        raise ValueError(f"Invalid label {label!r}")
    return label


def label_to_str(label: Label) -> str:
    return "".join("s" if c == 1 else "n" for c in label)


def label_product(a: Label, b: Label) -> Label:
    if len(a) != len(b):
        raise ValueError(f"Labels {a} and {b} have different lengths")
    return tuple(x * y for x, y in zip(a, b))


def all_labels(orbit_length: int) -> List[Label]:
    """Every label of the given length, in lexicographic order (n < s)."""
    return list(itertools.product((-1, 1), repeat=orbit_length))


@dataclass(frozen=True)
class OrbitSpec:
    """
    Shape of the combined critical orbit of a polynomial family.

    Arguments:
        orbit_length: Number m of distinct orbit entries before the repeat
        shift_target: 1-based index j with entry m+1 equal to entry j

    """

    orbit_length: int
    shift_target: int = 1

    def __post_init__(self):
        if self.orbit_length < 1:
            raise ValueError(f"Invalid orbit length {self.orbit_length}")
        if not 1 <= self.shift_target <= self.orbit_length:
            raise ValueError(
                f"Shift target {self.shift_target} is not in 1..{self.orbit_length}"
            )


def shift_label(label: LabelLike, orbit: OrbitSpec) -> Label:
    """
    Action of f on a label: drop the first letter and append letter j.
    """
    label = as_label(label)
    if len(label) != orbit.orbit_length:
        raise ValueError(
            f"Label {label_to_str(label)} does not have length {orbit.orbit_length}"
        )
    return label[1:] + (label[orbit.shift_target - 1],)


def _part_key(part: Part) -> Tuple[int, Label]:
    return (-part[1], part[0])


class TypedPartition:
    """
    A multiset of (label, length) parts, stored in canonical order:
    longest part first, ties broken by label with n before s.
    """

    __slots__ = ("parts",)

    _PART_PATTERN = re.compile(r"\[([ns]+),(\d+)\](?:\^(\d+))?")

    def __init__(self, parts: Iterable[Tuple[LabelLike, int]]):
        normalized = []
        for label, length in parts:
            length = int(length)
            if length < 1:
                raise ValueError(f"Invalid part length {length}")
            normalized.append((as_label(label), length))
        if len({len(label) for label, _ in normalized}) > 1:
            raise ValueError("All labels of a typed partition must share a length")
        self.parts: Tuple[Part, ...] = tuple(sorted(normalized, key=_part_key))

    @classmethod
    def from_text(cls, text: str) -> "TypedPartition":
        """
        Parse text such as "[n,1]^2[s,1]".
        """
        parts = []
        position = 0
        for match in cls._PART_PATTERN.finditer(text.replace(" ", "")):
            if match.start() != position:
                break
            label, length, repeat = match.groups()
            parts.extend([(label, int(length))] * int(repeat or 1))
            position = match.end()
        if not parts or position != len(text.replace(" ", "")):
            raise ValueError(f"Invalid typed partition {text!r}")
        return cls(parts)

    def to_text(self) -> str:
        chunks = []
        for part, group in itertools.groupby(self.parts):
            repeat = len(list(group))
            chunk = f"[{label_to_str(part[0])},{part[1]}]"
            chunks.append(chunk + (f"^{repeat}" if repeat > 1 else ""))
        return "".join(chunks)

    @property
    def size(self) -> int:
        return sum(length for _, length in self.parts)

    @property
    def level(self) -> int:
        size, level = self.size, 0
        while size % 3 == 0:
            size //= 3
            level += 1
        if size != 1:
            raise ValueError(f"{self.to_text()} does not partition a power of 3")
        return level

    @property
    def cycle_structure(self) -> CycleStructure:
        return cycle_type(length for _, length in self.parts)

    def sort_key(self) -> Tuple[Tuple[int, Label], ...]:
        return tuple(_part_key(p) for p in self.parts)

    def __iter__(self) -> Iterator[Part]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TypedPartition):
            return NotImplemented
        return self.parts == other.parts

    def __lt__(self, other: "TypedPartition") -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"TypedPartition({self.to_text()!r})"


class Data:
    """
    A (possibly weighted) distribution over typed partitions.

    Model data have total mass exactly 1; weighted data describe a subset
    of a group and carry its relative size as their mass.

    """

    def __init__(self, entries: Optional[Mapping[TypedPartition, Fraction]] = None):
        self.entries: Dict[TypedPartition, Fraction] = {}
        for partition, p in (entries or {}).items():
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"Negative probability {p} for {partition.to_text()}")
            if p:
                self.entries[partition] = p

    @classmethod
    def from_text(cls, entries: Mapping[str, Union[str, Fraction]]) -> "Data":
        data: Dict[TypedPartition, Fraction] = defaultdict(Fraction)
        for text, p in entries.items():
            data[TypedPartition.from_text(text)] += parse_fraction(p)
        return cls(data)

    @classmethod
    def point(cls, partition: Union[str, TypedPartition], weight=1) -> "Data":
        if isinstance(partition, str):
            partition = TypedPartition.from_text(partition)
        return cls({partition: Fraction(weight)})

    @property
    def mass(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    @property
    def level(self) -> int:
        if not self.entries:
            raise ValueError("Empty data has no level")
        return next(iter(self.entries)).level

    @property
    def support_size(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def partitions(self) -> List[TypedPartition]:
        return sorted(self.entries)

    def __getitem__(self, partition: Union[str, TypedPartition]) -> Fraction:
        if isinstance(partition, str):
            partition = TypedPartition.from_text(partition)
        return self.entries.get(partition, Fraction(0))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Data):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other: "Data") -> "Data":
        merged: Dict[TypedPartition, Fraction] = defaultdict(Fraction, self.entries)
        for partition, p in other.items():
            merged[partition] += p
        return Data(merged)

    def scale(self, weight) -> "Data":
        weight = Fraction(weight)
        return Data({k: p * weight for k, p in self.items()})

    def cycle_marginal(self) -> "CycleDataDist":
        marginal: Dict[CycleStructure, Fraction] = defaultdict(Fraction)
        for partition, p in self.items():
            marginal[partition.cycle_structure] += p
        return CycleDataDist(marginal)

    def to_json(self) -> List[dict]:
        return [
            {
                "partition": [[label_to_str(label), length] for label, length in k],
                "p": fraction_to_str(self.entries[k]),
            }
            for k in self.partitions()
        ]

    @classmethod
    def from_json(cls, entries: List[dict]) -> "Data":
        data: Dict[TypedPartition, Fraction] = defaultdict(Fraction)
        for entry in entries:
            data[TypedPartition(entry["partition"])] += parse_fraction(entry["p"])
        return cls(data)

    def __repr__(self) -> str:
        body = ", ".join(
            f"{k.to_text()}: {fraction_to_str(self.entries[k])}" for k in self.partitions()
        )
        return f"Data({{{body}}})"


class CycleDataDist:
    """
    Weights on cycle structures. Weights are exact when derived from data
    or from exhaustive enumeration, floats when sampled.
    """

    def __init__(self, entries: Optional[Mapping[CycleStructure, Union[Fraction, float]]] = None):
        self.entries: Dict[CycleStructure, Union[Fraction, float]] = {}
        for structure, w in (entries or {}).items():
            if w:
                self.entries[cycle_type(structure)] = (
                    self.entries.get(cycle_type(structure), 0) + w
                )

    @property
    def mass(self):
        return sum(self.entries.values(), Fraction(0))

    def items(self):
        return self.entries.items()

    def structures(self) -> List[CycleStructure]:
        return sorted(self.entries)

    def __getitem__(self, structure: Iterable[int]):
        return self.entries.get(cycle_type(structure), 0)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleDataDist):
            return NotImplemented
        return self.entries == other.entries

    def __add__(self, other: "CycleDataDist") -> "CycleDataDist":
        merged = dict(self.entries)
        for structure, w in other.items():
            merged[structure] = merged.get(structure, 0) + w
        return CycleDataDist(merged)

    def scale(self, weight) -> "CycleDataDist":
        return CycleDataDist({k: w * weight for k, w in self.items()})

    def dA(self) -> "CycleDataDist":
        """Doubling: every cycle of length k becomes a 2k-cycle and a k-cycle."""
        return CycleDataDist(
            {
                cycle_type(length for k in s for length in (2 * k, k)): w
                for s, w in self.items()
            }
        )

    def tA(self) -> "CycleDataDist":
        """Tripling: every cycle of length k becomes a 3k-cycle."""
        return CycleDataDist({tuple(3 * k for k in s): w for s, w in self.items()})

    def product(self, other: "CycleDataDist") -> "CycleDataDist":
        result: Dict[CycleStructure, Union[Fraction, float]] = defaultdict(Fraction)
        for s1, w1 in self.items():
            for s2, w2 in other.items():
                result[cycle_type(s1 + s2)] += w1 * w2
        return CycleDataDist(result)

    def stretch(self, k: int) -> "CycleDataDist":
        """Every cycle of length c becomes a cycle of length k c."""
        if k == 1:
            return self
        return CycleDataDist({tuple(k * c for c in s): w for s, w in self.items()})

    def tv_distance(self, other: "CycleDataDist") -> float:
        keys = set(self.entries) | set(other.entries)
        return 0.5 * sum(abs(float(self[k]) - float(other[k])) for k in keys)

    def to_json(self) -> List[dict]:
        return [
            {
                "cycles": list(s),
                "weight": fraction_to_str(w) if isinstance(w, Fraction) else float(w),
            }
            for s, w in sorted(self.items())
        ]

    def __repr__(self) -> str:
        return f"CycleDataDist({dict(sorted(self.items()))})"


class TypeDynamics:
    """
    The Markov model on typed partitions for one orbit shape.

    """

    def __init__(self, orbit: OrbitSpec, max_support: int = DEFAULT_MAX_SUPPORT):
        self.orbit = orbit
        self.max_support = max_support
        self.labels = all_labels(orbit.orbit_length)
        self._step_cache: Dict[Tuple[Label, int], Data] = {}
        self._partition_cache: Dict[TypedPartition, Data] = {}
        self._suffix_cache: Dict[Tuple[Part, ...], Dict[Tuple[Part, ...], Fraction]] = {}
        self._marginal_cache: Dict[Tuple[Label, int], CycleDataDist] = {}

    def _check_label(self, label: LabelLike) -> Label:
        label = as_label(label)
        if len(label) != self.orbit.orbit_length:
            raise ValueError(
                f"Label {label_to_str(label)} does not have length {self.orbit.orbit_length}"
            )
        return label

    def step_type(self, label: LabelLike, k: int) -> Data:
        """
        Transition of a single part [label, k].

        Arguments:
            label: The label of the part
            k: The length of the part

        Returns:
            Exact distribution over the typed parts replacing [label, k]

        """
        label = self._check_label(label)
        key = (label, k)
        if key in self._step_cache:
            return self._step_cache[key]
        shifted = shift_label(label, self.orbit)
        outcomes: Dict[TypedPartition, Fraction] = defaultdict(Fraction)
        if label[0] == 1:
            outcomes[TypedPartition([(shifted, 3 * k)])] += Fraction(2, 3)
            each = Fraction(1, 3 * len(self.labels) ** 2)
            for d1, d2 in itertools.product(self.labels, repeat=2):
                d3 = label_product(shifted, label_product(d1, d2))
                outcomes[TypedPartition([(d1, k), (d2, k), (d3, k)])] += each
        else:
            each = Fraction(1, len(self.labels))
            for d1 in self.labels:
                d2 = label_product(shifted, d1)
                outcomes[TypedPartition([(d1, 2 * k), (d2, k)])] += each
        data = Data(outcomes)
        self._step_cache[key] = data
        return data

    def restricted_step(self, label: LabelLike, k: int) -> TypedPartition:
        """
        The deterministic branch used to define the group generators.
        """
        label = self._check_label(label)
        shifted = shift_label(label, self.orbit)
        if label[0] == 1:
            return TypedPartition([(shifted, 3 * k)])
        return TypedPartition([(label, 2 * k), (label_product(shifted, label), k)])

    def _step_parts(self, parts: Tuple[Part, ...]) -> Dict[Tuple[Part, ...], Fraction]:
        # Parts step independently; sorted suffixes are shared between
        # partitions, so their joint outcomes are cached.
        if not parts:
            return {(): Fraction(1)}
        cached = self._suffix_cache.get(parts)
        if cached is not None:
            return cached
        head = self.step_type(*parts[0])
        tail = self._step_parts(parts[1:])
        combined: Dict[Tuple[Part, ...], Fraction] = defaultdict(Fraction)
        for child, q in head.items():
            for rest, p in tail.items():
                combined[tuple(heapq.merge(child.parts, rest, key=_part_key))] += q * p
        if len(combined) > self.max_support:
            raise ResourceLimitError(
                f"Step of {len(parts)} parts exceeds {self.max_support} typed partitions"
            )
        self._suffix_cache[parts] = combined
        return combined

    def step_partition(self, partition: TypedPartition) -> Data:
        if partition in self._partition_cache:
            return self._partition_cache[partition]
        try:
            outcomes = self._step_parts(partition.parts)
        except ResourceLimitError as err:
            raise ResourceLimitError(
                f"Step of {partition.to_text()} (size {partition.size}): {err}"
            ) from err
        data = Data({TypedPartition(parts): p for parts, p in outcomes.items()})
        self._partition_cache[partition] = data
        return data

    def propagate(self, data: Data, steps: int) -> Data:
        """
        Apply the Markov model `steps` times, exactly.

        Raises ResourceLimitError when the support exceeds `max_support`.

        """
        if steps < 0:
            raise ValueError(f"Invalid number of steps {steps}")
        current = data
        for _ in range(steps):
            level = current.level + 1
            nxt: Dict[TypedPartition, Fraction] = defaultdict(Fraction)
            for partition, p in current.items():
                for child, q in self.step_partition(partition).items():
                    nxt[child] += p * q
                if len(nxt) > self.max_support:
                    raise ResourceLimitError(
                        f"Support of level {level} data exceeds "
                        f"{self.max_support} typed partitions"
                    )
            current = Data(nxt)
            log.info(
                "Propagated to level %d: %d typed partitions",
                level,
                current.support_size,
            )
        return current

    def propagate_to_level(self, data: Data, level: int) -> Data:
        steps = level - data.level
        if steps < 0:
            raise ValueError(f"Level {data.level} data cannot be pulled back to level {level}")
        return self.propagate(data, steps)

    def part_marginal(self, label: LabelLike, steps: int) -> CycleDataDist:
        """
        Cycle data of a single [label, 1] part after `steps` steps. A part
        of length k evolves the same way with every cycle stretched by k.
        """
        label = self._check_label(label)
        key = (label, steps)
        if key in self._marginal_cache:
            return self._marginal_cache[key]
        if steps == 0:
            dist = CycleDataDist({(1,): Fraction(1)})
        else:
            acc: Dict[CycleStructure, Fraction] = defaultdict(Fraction)
            for child, q in self.step_type(label, 1).items():
                for structure, w in self.partition_marginal(child, steps - 1).items():
                    acc[structure] += q * w
            dist = CycleDataDist(acc)
        self._marginal_cache[key] = dist
        return dist

    def partition_marginal(self, partition: TypedPartition, steps: int) -> CycleDataDist:
        result = CycleDataDist({(): Fraction(1)})
        for label, k in partition:
            result = result.product(self.part_marginal(label, steps).stretch(k))
            if len(result) > self.max_support:
                raise ResourceLimitError(
                    f"Cycle data of {partition.to_text()} after {steps} steps exceeds "
                    f"{self.max_support} cycle structures"
                )
        return result

    def marginal_after(self, data: Data, steps: int) -> CycleDataDist:
        """
        Exact cycle data of `data` after `steps` steps, without forming the
        typed partitions in between. Equals propagate(data, steps).cycle_marginal().
        """
        if steps < 0:
            raise ValueError(f"Invalid number of steps {steps}")
        acc: Dict[CycleStructure, Fraction] = defaultdict(Fraction)
        for partition, p in data.items():
            for structure, w in self.partition_marginal(partition, steps).items():
                acc[structure] += p * w
        return CycleDataDist(acc)

    def marginal_at_level(self, data: Data, level: int) -> CycleDataDist:
        steps = level - data.level
        if steps < 0:
            raise ValueError(f"Level {data.level} data cannot be pulled back to level {level}")
        return self.marginal_after(data, steps)

    def _sample_children(
        self, partition: TypedPartition, count: int, rng: np.random.Generator
    ) -> Iterator[Tuple[TypedPartition, int]]:
        columns, options = [], []
        for label, k in partition:
            outcomes = self.step_type(label, k)
            children = list(outcomes.entries)
            p = np.array([float(q) for q in outcomes.entries.values()])
            columns.append(rng.choice(len(children), size=count, p=p / p.sum()))
            options.append(children)
        rows, multiplicity = np.unique(
            np.stack(columns, axis=1), axis=0, return_counts=True
        )
        for row, c in zip(rows, multiplicity):
            parts: List[Part] = []
            for children, index in zip(options, row):
                parts.extend(children[index].parts)
            yield TypedPartition(parts), int(c)

    def simulate_chain(
        self, data: Data, steps: int, samples: int, seed: Optional[int] = None
    ) -> CycleDataDist:
        """
        Monte Carlo version of `propagate`: frequencies of cycle structures
        after `steps` steps, for `samples` independent runs.
        """
        if samples < 1:
            raise ValueError(f"Invalid number of samples {samples}")
        rng = np.random.default_rng(seed)
        keys = data.partitions()
        p = np.array([float(data[k]) for k in keys])
        counts = rng.multinomial(samples, p / p.sum())
        state = {k: int(c) for k, c in zip(keys, counts) if c}
        for _ in range(steps):
            nxt: Dict[TypedPartition, int] = defaultdict(int)
            for partition in sorted(state):
                for child, c in self._sample_children(partition, state[partition], rng):
                    nxt[child] += c
            state = nxt
        frequencies: Dict[CycleStructure, float] = defaultdict(float)
        for partition, c in state.items():
            frequencies[partition.cycle_structure] += c / samples
        return CycleDataDist(frequencies)

    def model_from_labels(self, labels: Iterable[LabelLike], reducible: bool) -> Data:
        """
        Level-1 data of a model: one step from [label, 1], mixed uniformly
        over the admissible labels of x - t. When f - t is reducible the
        s-first steps are conditioned on splitting.
        """
        labels = [self._check_label(label) for label in labels]
        if not labels:
            raise ValueError("A model needs at least one admissible label")
        weight = Fraction(1, len(labels))
        mixture: Dict[TypedPartition, Fraction] = defaultdict(Fraction)
        for label in labels:
            outcomes = dict(self.step_type(label, 1).items())
            if reducible and label[0] == 1:
                outcomes.pop(TypedPartition([(shift_label(label, self.orbit), 3)]))
                total = sum(outcomes.values(), Fraction(0))
                outcomes = {k: p / total for k, p in outcomes.items()}
            for partition, p in outcomes.items():
                mixture[partition] += weight * p
        return Data(mixture)


# Admissible level-0 labels of x - t, and whether f - t is reducible.
MODEL_LABELS: Dict[int, Dict[int, Tuple[Tuple[str, ...], bool]]] = {
    1: {
        1: (("s",), True),
        2: (("s",), False),
        3: (("s", "n"), True),
        4: (("s", "n"), False),
    },
    2: {
        1: (("ss",), True),
        2: (("ss",), False),
        3: (("ss", "sn"), False),
        4: (("ss", "ns"), False),
        5: (("ss", "sn", "ns", "nn"), False),
    },
}

MODEL_TABLES: Dict[int, Dict[int, Dict[str, str]]] = {
    1: {
        1: {"[s,1]^3": "1/4", "[n,1]^2[s,1]": "3/4"},
        2: {"[s,3]": "2/3", "[s,1]^3": "1/12", "[n,1]^2[s,1]": "1/4"},
        3: {
            "[s,1]^3": "1/8",
            "[n,1]^2[s,1]": "3/8",
            "[n,2][s,1]": "1/4",
            "[s,2][n,1]": "1/4",
        },
        4: {
            "[s,3]": "1/3",
            "[s,1]^3": "1/24",
            "[n,1]^2[s,1]": "1/8",
            "[n,2][s,1]": "1/4",
            "[s,2][n,1]": "1/4",
        },
    },
    2: {
        1: {
            "[ss,1]^3": "1/16",
            "[nn,1]^2[ss,1]": "3/16",
            "[ns,1]^2[ss,1]": "3/16",
            "[sn,1]^2[ss,1]": "3/16",
            "[nn,1][ns,1][sn,1]": "3/8",
        },
        2: {
            "[ss,3]": "2/3",
            "[ss,1]^3": "1/48",
            "[nn,1]^2[ss,1]": "1/16",
            "[ns,1]^2[ss,1]": "1/16",
            "[sn,1]^2[ss,1]": "1/16",
            "[nn,1][ns,1][sn,1]": "1/8",
        },
        3: {
            "[ss,3]": "1/3",
            "[ss,1]^3": "1/96",
            "[nn,1]^2[ss,1]": "1/32",
            "[ns,1]^2[ss,1]": "1/32",
            "[sn,1]^2[ss,1]": "1/32",
            "[nn,1][ns,1][sn,1]": "1/16",
            "[ns,3]": "1/3",
            "[ns,1]^3": "1/96",
            "[ns,1][ss,1]^2": "1/32",
            "[nn,1]^2[ns,1]": "1/32",
            "[ns,1][sn,1]^2": "1/32",
            "[nn,1][sn,1][ss,1]": "1/16",
        },
        4: {
            "[ss,3]": "1/3",
            "[ss,1]^3": "1/96",
            "[nn,1]^2[ss,1]": "1/32",
            "[ns,1]^2[ss,1]": "1/32",
            "[sn,1]^2[ss,1]": "1/32",
            "[nn,1][ns,1][sn,1]": "1/16",
            "[ss,2][sn,1]": "1/8",
            "[sn,2][ss,1]": "1/8",
            "[nn,2][ns,1]": "1/8",
            "[ns,2][nn,1]": "1/8",
        },
        5: {
            "[ss,3]": "1/6",
            "[ss,1]^3": "1/192",
            "[nn,1]^2[ss,1]": "1/64",
            "[ns,1]^2[ss,1]": "1/64",
            "[sn,1]^2[ss,1]": "1/64",
            "[nn,1][ns,1][sn,1]": "1/32",
            "[ns,3]": "1/6",
            "[ns,1]^3": "1/192",
            "[ns,1][ss,1]^2": "1/64",
            "[nn,1]^2[ns,1]": "1/64",
            "[ns,1][sn,1]^2": "1/64",
            "[nn,1][ss,1][sn,1]": "1/32",
            "[ss,2][sn,1]": "1/16",
            "[sn,2][ss,1]": "1/16",
            "[nn,2][ns,1]": "1/16",
            "[ns,2][nn,1]": "1/16",
            "[ss,2][nn,1]": "1/16",
            "[nn,2][ss,1]": "1/16",
            "[sn,2][ns,1]": "1/16",
            "[ns,2][sn,1]": "1/16",
        },
    },
}

# Weighted data whose propagations describe cosets inside the model groups,
# in the order of the cycle-data identities they are checked against.
THEOREM_FAMILIES: Dict[int, List[Tuple[str, str]]] = {
    1: [
        ("[s,1]^3", "1/12"),
        ("[s,3]", "2/3"),
        ("[n,1]^2[s,1]", "1/4"),
        ("[n,1]", "1/2"),
        ("[n,2][s,1]", "1/2"),
        ("[n,1][s,2]", "1/2"),
        ("[s,1]", "1"),
    ],
    2: [
        ("[ss,1]^3", "1/48"),
        ("[ss,3]", "2/3"),
        ("[nn,1]^2[ss,1]", "1/16"),
        ("[ns,1]^2[ss,1]", "1/16"),
        ("[sn,1]^2[ss,1]", "1/16"),
        ("[ns,1][sn,1][nn,1]", "1/8"),
        ("[nn,1]", "1/4"),
        ("[ss,1]", "1/4"),
        ("[sn,1]", "1/4"),
        ("[ns,1]", "1/4"),
    ],
}


def initial_data(model_id: int, orbit_length: int) -> Data:
    """
    Level-1 data of a numbered model.

    Arguments:
        model_id: 1-4 for orbit length 1, 1-5 for orbit length 2
        orbit_length: The combined critical orbit length m

    """
    if orbit_length not in MODEL_TABLES:
        raise ValueError(f"No models for orbit length {orbit_length}")
    if model_id not in MODEL_TABLES[orbit_length]:
        raise ValueError(f"Model {model_id} does not exist for orbit length {orbit_length}")
    return Data.from_text(MODEL_TABLES[orbit_length][model_id])


def theorem_family(orbit_length: int) -> List[Data]:
    if orbit_length not in THEOREM_FAMILIES:
        raise ValueError(f"No theorem families for orbit length {orbit_length}")
    return [
        Data.point(text, parse_fraction(weight))
        for text, weight in THEOREM_FAMILIES[orbit_length]
    ]
