"""
Factorization of iterated cubics over prime fields.

A post-critically finite cubic carries its combined critical orbit as a
list of monic quadratics x^2 - S_k x + P_k whose roots are the pair
{f^k(g1), f^k(g2)}. Quadratics keep the arithmetic rational even when the
critical points are conjugate quadratic irrationals.

"""
import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol, integer_nthroot
from sympy.ntheory import legendre_symbol, primerange, sqrt_mod
from sympy.ntheory.primetest import is_square as is_integer_square
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_compose,
    gf_ddf_zassenhaus,
    gf_eval,
    gf_factor_sqf,
    gf_monic,
    gf_rem,
    gf_sqf_p,
)

from .treeauto import CycleStructure, cycle_type
from .typedyn import Label, OrbitSpec, label_product, label_to_str, shift_label
from .util import ResourceLimitError

log = logging.getLogger(__name__)

Rat = Union[int, str, Fraction]
QuadPair = Tuple[Fraction, Fraction]
GFPoly = List[int]

DEFAULT_MAX_LEVEL = 4
MAX_ORBIT_STEPS = 8


class SkipPrime(Exception):
    """
    A prime that cannot be used for a (polynomial, t, level) triple.

    `reason` is one of "bad-reduction", "degenerate", "not-squarefree" or
    "orbit-collapse".

    """

    def __init__(self, reason: str, p: Optional[int] = None):
        super().__init__(f"Skipping prime {p}: {reason}")
        self.reason = reason
        self.p = p


class Branch(enum.Enum):
    IRREDUCIBLE_OR_SPLIT = "irreducible-or-split"
    TWO_PLUS_ONE = "2+1"


def _rat(value: Rat) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"Invalid rational number {value!r}") from err


def rational_mod(value: Fraction, p: int) -> int:
    """Reduce a rational number mod p, or raise SkipPrime on a bad denominator."""
    value = Fraction(value)
    if value.denominator % p == 0:
        raise SkipPrime("bad-reduction", p)
    return value.numerator * pow(value.denominator, -1, p) % p


def is_rational_square(r: Fraction) -> bool:
    r = Fraction(r)
    if r < 0:
        return False
    return bool(is_integer_square(r.numerator * r.denominator))


def is_eisenstein_square(r: Fraction) -> bool:
    """
    Whether a rational number is a square in Q(sqrt(-3)): r = s^2 or -3 s^2.
    """
    r = Fraction(r)
    return is_rational_square(r) or is_rational_square(-3 * r)


def is_square(x: int, p: int) -> bool:
    """
    Euler's criterion for a nonzero element of F_p, p an odd prime.
    """
    x %= p
    if x == 0:
        raise ValueError(f"0 is not a unit mod {p}")
    return legendre_symbol(x, p) == 1


def quadratic_norm(g: GFPoly, pair: Tuple[int, int], p: int) -> int:
    """
    g(a) * g(b) mod p for the roots a, b of x^2 - S x + P, computed from
    the remainder c1 x + c0 of g mod the quadratic.
    """
    s, q = pair
    rem = gf_rem(g, [1, (-s) % p, q % p], p, ZZ)
    c1, c0 = ([0, 0] + list(rem))[-2:]
    return (c1 * c1 * q + c1 * c0 * s + c0 * c0) % p


class Cubic:
    """
    A rational cubic ax^3 + bx^2 + cx + d, without critical data.
    """

    def __init__(self, coeffs: Sequence[Rat], name: Optional[str] = None):
        coeffs = tuple(_rat(c) for c in coeffs)
        if len(coeffs) != 4:
            raise ValueError(f"A cubic has 4 coefficients, got {len(coeffs)}")
        if coeffs[0] == 0:
            raise ValueError("Leading coefficient of a cubic must be nonzero")
        self.coeffs = coeffs
        self.name = name or self.to_text()

    @classmethod
    def from_text(cls, text: str) -> "Cubic":
        """Parse "a,b,c,d", e.g. "1,0,1,1" for x^3+x+1."""
        return cls([c.strip() for c in text.split(",")])

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __call__(self, x: Rat) -> Fraction:
        value = Fraction(0)
        for c in self.coeffs:
            value = value * _rat(x) + c
        return value

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    def translate(self, a: Rat) -> Tuple[Fraction, ...]:
        """Coefficients of f(z + a) - a."""
        A, B, C, D = self.coeffs
        a = _rat(a)
        return (
            A,
            3 * A * a + B,
            3 * A * a * a + 2 * B * a + C,
            A * a**3 + B * a * a + C * a + D - a,
        )

    def critical_pair(self) -> QuadPair:
        """(S, P) of the monic quadratic whose roots are the critical points."""
        A, B, C, _ = self.coeffs
        return (-2 * B / (3 * A), C / (3 * A))

    def push_pair(self, pair: QuadPair) -> QuadPair:
        """Image under f of the pair of roots of x^2 - S x + P."""
        A, B, C, D = self.coeffs
        s, q = pair
        c1 = A * (s * s - q) + B * s + C
        c0 = -A * s * q - B * q + D
        return (c1 * s + 2 * c0, c1 * c1 * q + c1 * c0 * s + c0 * c0)

    def has_rational_root(self, t: Rat = 0) -> bool:
        """
        Whether f - t has a rational root, which is equivalent to f - t
        being reducible over Q(sqrt(-3)).
        """
        coeffs = list(self.coeffs[:3]) + [self.coeffs[3] - _rat(t)]
        poly = Poly(
            [Rational(c.numerator, c.denominator) for c in coeffs],
            Symbol("x"),
            domain=QQ,
        )
        _, factors = poly.factor_list()
        return any(factor.degree() == 1 for factor, _ in factors)

    def reduce_mod(self, p: int) -> Tuple[int, ...]:
        if p in (2, 3):
            raise SkipPrime("bad-reduction", p)
        coeffs = tuple(rational_mod(c, p) for c in self.coeffs)
        if coeffs[0] == 0:
            raise SkipPrime("bad-reduction", p)
        return coeffs


class PCFCubic(Cubic):
    """
    A post-critically finite cubic with its combined critical orbit.

    Arguments:
        coeffs: Rational coefficients, highest degree first
        name: Display name
        max_steps: How far to follow the orbit before giving up

    Raises ValueError when the critical orbits collide or do not become
    periodic within `max_steps`.

    """

    def __init__(
        self,
        coeffs: Sequence[Rat],
        name: Optional[str] = None,
        max_steps: int = MAX_ORBIT_STEPS,
    ):
        super().__init__(coeffs, name)
        pair = self.critical_pair()
        if pair[0] ** 2 == 4 * pair[1]:
            raise ValueError(f"{self.name} has a double critical point")
        pairs: List[QuadPair] = []
        for _ in range(max_steps):
            pair = self.push_pair(pair)
            if pair[0] ** 2 == 4 * pair[1]:
                raise ValueError(f"Critical orbits of {self.name} collide")
            if pair in pairs:
                break
            pairs.append(pair)
        else:
            raise ValueError(
                f"{self.name} is not post-critically finite within {max_steps} steps"
            )
        self.orbit_pairs: Tuple[QuadPair, ...] = tuple(pairs)
        self.orbit = OrbitSpec(len(pairs), pairs.index(pair) + 1)

    @property
    def orbit_length(self) -> int:
        return self.orbit.orbit_length

    def critical_points(self) -> Optional[Tuple[Fraction, Fraction]]:
        """The critical points if they are rational, else None."""
        s, q = self.critical_pair()
        disc = s * s - 4 * q
        if not is_rational_square(disc):
            return None
        root = Fraction(
            integer_nthroot(disc.numerator, 2)[0], integer_nthroot(disc.denominator, 2)[0]
        )
        return ((s - root) / 2, (s + root) / 2)

    def orbit_products(self, t: Rat = 0) -> List[Fraction]:
        """(f^k(g1) - t)(f^k(g2) - t) for k = 1..m."""
        t = _rat(t)
        return [t * t - s * t + q for s, q in self.orbit_pairs]


_CATALOG_LENGTH_ONE = [
    ("-2z^3+3z^2", ("-2", "3", "0", "0")),
    ("-z^3+3/2z^2+1", ("-1", "3/2", "0", "1")),
    ("4z^3-6z^2+3/2", ("4", "-6", "0", "3/2")),
    ("z^3-3/2z^2", ("1", "-3/2", "0", "0")),
]

_CATALOG_LENGTH_TWO = [
    ("2z^3-3z^2+1/2", ("2", "-3", "0", "1/2")),
    ("-1/4z^3+3/2z+2", ("-1/4", "0", "3/2", "2")),
    ("-1/28z^3-3/4z+7/2", ("-1/28", "0", "-3/4", "7/2")),
]

# Listed alongside the catalog in the literature; their critical orbits are
# infinite, so PCFCubic rejects them.
NOT_POST_CRITICALLY_FINITE = [
    ("-2z^3+3z^2+1", ("-2", "3", "0", "1")),
    ("-2z^3+3z+1/2", ("-2", "0", "3", "1/2")),
]

# Worked reduction: post-critically finite modulo 7 only.
EXAMPLE_MOD7 = Cubic(("-1", "3/2", "0", "-1"), name="-z^3+3/2z^2-1")


def catalog(a: Rat = 0) -> List[PCFCubic]:
    """
    The post-critically finite cubics with non-colliding critical orbits:
    four with orbit length one, and three families f(z + a) - a with
    orbit length two.
    """
    entries = [PCFCubic(coeffs, name) for name, coeffs in _CATALOG_LENGTH_ONE]
    for name, coeffs in _CATALOG_LENGTH_TWO:
        base = Cubic(coeffs)
        label = name if _rat(a) == 0 else f"{name} (a={a})"
        entries.append(PCFCubic(base.translate(a), label))
    return entries


def catalog_entry(name: str, a: Rat = 0) -> PCFCubic:
    for entry in catalog(a):
        if entry.name.split(" ")[0] == name:
            return entry
    raise ValueError(f"Catalog entry {name} does not exist.")


def critical_orbits_mod_p(f: Cubic, p: int) -> Dict[int, List[int]]:
    """
    Pointwise orbits of the critical points in F_p, each followed until the
    first repeated value (included). Only critical points defined over F_p
    are returned.
    """
    A, B, C, _ = f.reduce_mod(p)
    # f' = 3A x^2 + 2B x + C
    qa, qb = 3 * A % p, 2 * B % p
    disc = (qb * qb - 4 * qa * C) % p
    roots = sqrt_mod(disc, p, all_roots=True) or []
    inv = pow(2 * qa, -1, p)
    points = sorted({(-qb + r) * inv % p for r in roots})
    coeffs = list(f.reduce_mod(p))
    orbits = {}
    for gamma in points:
        orbit, x = [gamma], gamma
        while True:
            x = gf_eval(coeffs, x, p, ZZ)
            orbit.append(x)
            if orbit.count(x) > 1:
                break
        orbits[gamma] = orbit
    return orbits


def orbit_spec_mod_p(f: Cubic, p: int) -> OrbitSpec:
    """
    Combined critical orbit shape of f over F_p, from the pointwise orbits.
    """
    orbits = critical_orbits_mod_p(f, p)
    if len(orbits) != 2:
        raise ValueError(f"Critical points of {f.name} are not two distinct points mod {p}")
    g1, g2 = sorted(orbits)
    coeffs = list(f.reduce_mod(p))
    x1, x2 = g1, g2
    pairs: List[frozenset] = []
    for _ in range(p * p + 1):
        x1, x2 = gf_eval(coeffs, x1, p, ZZ), gf_eval(coeffs, x2, p, ZZ)
        if x1 == x2:
            raise ValueError(f"Critical orbits of {f.name} collide mod {p}")
        pair = frozenset((x1, x2))
        if pair in pairs:
            return OrbitSpec(len(pairs), pairs.index(pair) + 1)
        pairs.append(pair)
    raise ValueError(f"Combined critical orbit of {f.name} mod {p} did not repeat")


def orbit_collapses(f: PCFCubic, p: int) -> bool:
    """
    Whether the combined critical orbit of f changes shape mod p. Only
    decidable when both critical points are defined over F_p; otherwise
    False.
    """
    if len(critical_orbits_mod_p(f, p)) != 2:
        return False
    try:
        return orbit_spec_mod_p(f, p) != f.orbit
    except ValueError:
        return True


@dataclass(frozen=True)
class ReducedCubic:
    """
    A cubic reduced mod p together with its orbit quadratics mod p.
    """

    p: int
    coeffs: Tuple[int, ...]
    t: int
    pairs: Tuple[Tuple[int, int], ...] = ()
    orbit: Optional[OrbitSpec] = None
    degenerate: bool = False

    @property
    def has_labels(self) -> bool:
        return self.orbit is not None


def reduce_mod_p(f: Cubic, t: Rat, p: int) -> ReducedCubic:
    """
    Reduce f - t and the critical data of f mod p.

    Raises SkipPrime("bad-reduction") for p in {2, 3} or when p divides a
    denominator or the leading coefficient.

    """
    coeffs = f.reduce_mod(p)
    t_mod = rational_mod(_rat(t), p)
    if not isinstance(f, PCFCubic):
        return ReducedCubic(p, coeffs, t_mod)
    pairs = tuple((rational_mod(s, p), rational_mod(q, p)) for s, q in f.orbit_pairs)
    degenerate = any((t_mod * t_mod - s * t_mod + q) % p == 0 for s, q in pairs)
    return ReducedCubic(p, coeffs, t_mod, pairs, f.orbit, degenerate)


def factor_label(g: GFPoly, red: ReducedCubic) -> Label:
    """
    Label of an irreducible factor: letter k is s iff g(f^k(g1)) g(f^k(g2))
    is a square mod p.
    """
    letters = []
    for pair in red.pairs:
        value = quadratic_norm(g, pair, red.p)
        if value == 0:
            raise SkipPrime("degenerate", red.p)
        letters.append(1 if is_square(value, red.p) else -1)
    return tuple(letters)


def square_branch_test(g: GFPoly, red: ReducedCubic) -> Branch:
    """
    Predict how g o f factors from (-3)^deg(g) g(f(g1)) g(f(g2)).

    Arguments:
        g: A monic irreducible polynomial over F_p
        red: The reduced cubic f

    Returns:
        IRREDUCIBLE_OR_SPLIT when the test value is a square, TWO_PLUS_ONE
        otherwise

    """
    if not red.pairs:
        raise ValueError("The branch test needs critical orbit data")
    p = red.p
    value = pow(-3 % p, len(g) - 1, p) * quadratic_norm(g, red.pairs[0], p) % p
    if value == 0:
        raise SkipPrime("degenerate", p)
    return Branch.IRREDUCIBLE_OR_SPLIT if is_square(value, p) else Branch.TWO_PLUS_ONE


@dataclass
class FactorResult:
    p: int
    n: int
    shape: CycleStructure
    labels: Optional[List[Label]] = None
    factors: List[GFPoly] = field(default_factory=list)
    degree_violations: int = 0
    branch_violations: int = 0
    label_violations: int = 0

    @property
    def violations(self) -> int:
        return self.degree_violations + self.branch_violations + self.label_violations

    def typed_parts(self) -> List[Tuple[Label, int]]:
        if self.labels is None:
            raise ValueError("Factorization was computed without labels")
        return [(label, len(g) - 1) for label, g in zip(self.labels, self.factors)]

    def to_record(self) -> dict:
        record = {"p": self.p, "n": self.n, "shape": list(self.shape)}
        if self.labels is not None:
            record["labels"] = [label_to_str(label) for label in self.labels]
        return record


def _check_level(n: int, max_level: int):
    if n < 0:
        raise ValueError(f"Invalid level {n}")
    if n > max_level:
        raise ResourceLimitError(
            f"Level {n} exceeds the degree bound 3^{max_level} = {3**max_level}"
        )


def iterate_and_factor(
    red: ReducedCubic, n: int, max_level: int = DEFAULT_MAX_LEVEL
) -> FactorResult:
    """
    Factor f^n - t over F_p level by level: every irreducible factor g of
    f^k - t contributes the factors of g o f to level k + 1. Labels, the
    degree law for g o f, the square branch test and the label dependence
    relation are evaluated along the way when critical data are present.
    """
    _check_level(n, max_level)
    p, f = red.p, list(red.coeffs)
    if red.degenerate:
        raise SkipPrime("degenerate", p)
    current: List[GFPoly] = [[1, (-red.t) % p]]
    labels = [factor_label(current[0], red)] if red.has_labels else None
    result = FactorResult(p, n, ())
    for _ in range(n):
        nxt: List[GFPoly] = []
        next_labels: List[Label] = []
        for index, g in enumerate(current):
            h = gf_compose(g, f, p, ZZ)
            if not gf_sqf_p(h, p, ZZ):
                raise SkipPrime("not-squarefree", p)
            _, factors = gf_factor_sqf(h, p, ZZ)
            d = len(g) - 1
            quotients = sorted(((len(h_i) - 1) // d for h_i in factors), reverse=True)
            if any((len(h_i) - 1) % d for h_i in factors) or sum(quotients) != 3:
                result.degree_violations += 1
            if labels is not None:
                expected = square_branch_test(g, red)
                observed = (
                    Branch.TWO_PLUS_ONE
                    if quotients == [2, 1]
                    else Branch.IRREDUCIBLE_OR_SPLIT
                )
                if expected != observed:
                    result.branch_violations += 1
                child_labels = [factor_label(h_i, red) for h_i in factors]
                product = child_labels[0]
                for child in child_labels[1:]:
                    product = label_product(product, child)
                if product != shift_label(labels[index], red.orbit):
                    result.label_violations += 1
                next_labels.extend(child_labels)
            nxt.extend(factors)
        current = nxt
        labels = next_labels if labels is not None else None
    result.shape = cycle_type(len(g) - 1 for g in current)
    result.factors = current
    result.labels = labels
    if result.violations:
        log.warning("Factorization law violated at p=%d, n=%d: %s", p, n, result)
    return result


def compose_iterate(red: ReducedCubic, n: int) -> GFPoly:
    """f^n - t over F_p, highest coefficient first."""
    p, f = red.p, list(red.coeffs)
    poly = [1, 0]
    for _ in range(n):
        poly = gf_compose(poly, f, p, ZZ)
    poly = list(poly)
    poly[-1] = (poly[-1] - red.t) % p
    return poly


def factor_shape(red: ReducedCubic, n: int, max_level: int = DEFAULT_MAX_LEVEL) -> CycleStructure:
    """
    Degrees of the irreducible factors of f^n - t, from distinct-degree
    factorization only.
    """
    _check_level(n, max_level)
    if red.degenerate:
        raise SkipPrime("degenerate", red.p)
    poly = compose_iterate(red, n)
    if not gf_sqf_p(poly, red.p, ZZ):
        raise SkipPrime("not-squarefree", red.p)
    _, monic = gf_monic(poly, red.p, ZZ)
    degrees = []
    for factor, d in gf_ddf_zassenhaus(monic, red.p, ZZ):
        degrees.extend([d] * ((len(factor) - 1) // d))
    return cycle_type(degrees)


def select_model(f: PCFCubic, t: Rat = 0) -> int:
    """
    Number of the Markov model that applies to f - t over Q(sqrt(-3)).

    Raises ValueError when an orbit product vanishes or when no model
    describes the combination of square classes.

    """
    t = _rat(t)
    values = f.orbit_products(t)
    if any(v == 0 for v in values):
        raise ValueError(f"t = {t} meets the critical orbit of {f.name}")
    reducible = f.has_rational_root(t)
    square = [is_eisenstein_square(v) for v in values]
    if f.orbit_length == 1:
        if square[0]:
            return 1 if reducible else 2
        return 3 if reducible else 4
    if f.orbit_length != 2:
        raise ValueError(f"No models for orbit length {f.orbit_length}")
    if all(square):
        return 1 if reducible else 2
    if reducible:
        raise ValueError(
            f"f - {t} is reducible with a non-square orbit product: no model applies"
        )
    if square[0]:
        return 3
    if square[1]:
        return 4
    if is_eisenstein_square(values[0] * values[1]):
        raise ValueError(
            f"Orbit products of f - {t} are non-square with a square product: no model applies"
        )
    return 5


def primes_one_mod_three(lo: int, hi: int) -> List[int]:
    """Primes p in [lo, hi) with p = 1 mod 3."""
    return [int(p) for p in primerange(max(lo, 5), hi) if p % 3 == 1]


def primes_in_range(lo: int, hi: int) -> List[int]:
    return [int(p) for p in primerange(max(lo, 5), hi)]
