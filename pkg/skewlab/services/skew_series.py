"""Truncated skew power series T/j^N, where T = R[[y; tau, delta]] and j = i + yT.

A class in T/j^N is stored as coefficients a_0 .. a_{N-1} with a_k kept
modulo i^(N-k): j^N = i^N + i^(N-1) y + ... + i y^(N-1) + T y^N, so two series
agree modulo j^N exactly when their coefficients agree at those moduli.
SeriesRing wraps T/j^N as a FilteredRing with ideal j, which is what makes
iterated towers R[[y1]][[y2; tau2, delta2]]... possible.
"""

from __future__ import annotations

import itertools
import logging
from typing import Any, Dict, List, Optional, Sequence

from skewlab.exceptions import ConvergenceError, NotInvertibleError, SkewDataError, UsageError
from skewlab.models import Direction, Side
from skewlab.services.filtered_ring import (
    INFINITY,
    Element,
    FilteredRing,
    SkewData,
    render_terms,
)
from skewlab.services.skew_poly import SkewPoly, q_inverse, reorder_coefficients, theta_row

logger = logging.getLogger(__name__)


class TruncSeries:
    """An element of T/j^N (left form) or of T'/j'^N (right form)."""

    __slots__ = ("algebra", "coeffs", "side", "_hash")

    def __init__(self, algebra: "SeriesRing", coeffs: tuple, side: Side = Side.LEFT):
        self.algebra = algebra
        self.coeffs = coeffs
        self.side = side
        self._hash = hash((id(algebra), side, coeffs))

    @property
    def ring(self) -> FilteredRing:
        return self.algebra.base

    @property
    def skew(self) -> SkewData:
        return self.algebra.skew

    @property
    def precision(self) -> int:
        return self.algebra.N

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, TruncSeries) and other.algebra is self.algebra
                and other.side == self.side and other.coeffs == self.coeffs)

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return self.algebra.add(self, other)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self.algebra.sub(self, other)

    def __neg__(self) -> "TruncSeries":
        return self.algebra.neg(self)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return self.algebra.mul(self, other)

    def __pow__(self, exponent: int) -> "TruncSeries":
        return self.algebra.pow(self, exponent)

    def __str__(self) -> str:
        return self.algebra.render_truncated(self)

    def __repr__(self) -> str:
        return f"TruncSeries({self.algebra.render_truncated(self)!r}, side={self.side.value})"


class SeriesRing(FilteredRing):
    """T/j^N as a filtered ring with distinguished ideal j."""

    def __init__(self, base: FilteredRing, skew: SkewData, precision: int, var: str = "y"):
        if skew.ring is not base:
            raise UsageError(f"skew data {skew.label} lives on {skew.ring.name}, not {base.name}")
        if precision < 1:
            raise UsageError("precision must be positive")
        self.base = base
        self.skew = skew
        self.N = precision
        self.variable = var
        self.precision_cap = precision
        self.is_finite = base.is_finite
        self.name = f"{base.name}[[{var}]]/j^{precision}"
        super().__init__()
        self._zero = TruncSeries(self, (base.zero,) * precision)
        self._one = self.constant(base.one)
        self._y = self.monomial(base.one, 1)
        logger.debug("series ring %s over skew data %s", self.name, skew.label)

    # -- construction -------------------------------------------------------

    def series(self, coeffs: Sequence[Element], side: Side = Side.LEFT) -> TruncSeries:
        """Canonical class of sum a_k y^k (or sum y^k a_k), dropping terms of degree >= N."""
        base, N = self.base, self.N
        padded = list(coeffs[:N]) + [base.zero] * max(0, N - len(coeffs))
        return TruncSeries(self, tuple(base.reduce(c, N - k) for k, c in enumerate(padded)), side)

    def constant(self, a: Element) -> TruncSeries:
        return self.series((a,))

    def monomial(self, a: Element, k: int, side: Side = Side.LEFT) -> TruncSeries:
        if k >= self.N:
            return self._zero if side == Side.LEFT else TruncSeries(self, self._zero.coeffs, side)
        return self.series((self.base.zero,) * k + (a,), side)

    @property
    def y(self) -> TruncSeries:
        return self._y

    @property
    def constant_ring(self) -> FilteredRing:
        """R / i^N, where the constants of T/j^N live."""
        return self.base.quotient(self.N)

    @property
    def constant_skew(self) -> SkewData:
        return self.skew.reduced(self.constant_ring)

    # -- FilteredRing contract ---------------------------------------------

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def _check_pair(self, f: TruncSeries, g: TruncSeries) -> None:
        if f.algebra is not self or g.algebra is not self:
            if (isinstance(f, TruncSeries) and isinstance(g, TruncSeries)
                    and f.skew is g.skew and f.precision != g.precision):
                raise UsageError(f"precision mismatch: j^{f.precision} against j^{g.precision}")
            raise UsageError(f"series do not belong to {self.name}")
        if f.side != g.side:
            raise UsageError("series in different normal forms")

    def add(self, f, g):
        self._check_pair(f, g)
        base, N = self.base, self.N
        return TruncSeries(self, tuple(base.reduce(base.add(a, b), N - k)
                                       for k, (a, b) in enumerate(zip(f.coeffs, g.coeffs))), f.side)

    def neg(self, f):
        base, N = self.base, self.N
        return TruncSeries(self, tuple(base.reduce(base.neg(a), N - k) for k, a in enumerate(f.coeffs)), f.side)

    def _multiply(self, f, g):
        self._check_pair(f, g)
        if f.side != Side.LEFT:
            raise UsageError("series products are taken in left normal form")
        return TruncSeries(self, self.multiply_representatives(f.coeffs, g.coeffs))

    def multiply_representatives(self, a: Sequence[Element], b: Sequence[Element],
                                 opposite: bool = False) -> tuple:
        """c_n = sum_j sum_{i < N-j} a_i theta_{i,n-j}(b_j), reduced mod i^(N-n).

        Works on arbitrary representatives; the class of the result depends only
        on the classes of the inputs. With opposite=True the product is taken in
        the opposite ring, which is how right forms multiply.
        """
        base, N = self.base, self.N
        skew = self.skew.opposite if opposite else self.skew
        times = (lambda u, v: base.mul(v, u)) if opposite else base.mul
        zero = base.zero
        out = [zero] * N
        for j, bj in enumerate(b[:N]):
            if bj == zero:
                continue
            for i in range(N - j):
                ai = a[i] if i < len(a) else zero
                if ai == zero:
                    continue
                row = theta_row(skew, i, bj)
                for k, t in enumerate(row):
                    n = k + j
                    if n >= N:
                        break
                    if t != zero:
                        out[n] = base.add(out[n], times(ai, t))
        return tuple(base.reduce(c, N - n) for n, c in enumerate(out))

    def from_int(self, n):
        return self.constant(self.base.from_int(n))

    @property
    def ideal_generators(self):
        base = self.base
        return (self._y,) + tuple(self.constant(g) for g in base.ideal_generators if g != base.zero)

    def reduce(self, f, ell):
        limit = min(max(ell, 0), self.N)
        base = self.base
        coeffs = tuple(base.reduce(a, limit - k) if k < limit else base.zero for k, a in enumerate(f.coeffs))
        return TruncSeries(self, coeffs, f.side)

    def residue_count(self, ell):
        limit = min(max(ell, 0), self.N)
        count = 1
        for k in range(limit):
            count *= self.base.residue_count(limit - k)
        return count

    def residues(self, ell):
        limit = min(max(ell, 0), self.N)
        base = self.base
        columns = [base.residues(limit - k) for k in range(limit)]
        padding = (base.zero,) * (self.N - limit)
        return [TruncSeries(self, tuple(choice) + padding) for choice in itertools.product(*columns)]

    def _monomials(self, coefficients, degrees) -> tuple:
        seen = []
        for k in degrees:
            for b in coefficients:
                term = self.monomial(b, k)
                if term != self._zero and term not in seen:
                    seen.append(term)
        return tuple(seen)

    def additive_generators(self):
        return self._monomials(self.base.additive_generators(), range(self.N))

    def ideal_additive_generators(self):
        constants = self._monomials(self.base.ideal_additive_generators(), range(1))
        return constants + self._monomials(self.base.additive_generators(), range(1, self.N))

    def random_element(self, rng):
        return self.series([self.base.random_element(rng) for _ in range(self.N)])

    def inverse(self, f):
        return ts_inverse(f)

    def render(self, f):
        base = self.base
        pieces = [(k, base.render(a)) for k, a in enumerate(f.coeffs) if a != base.zero]
        return render_terms(pieces, self.variable, f.side)

    def render_truncated(self, f: TruncSeries) -> str:
        return f"{self.render(f)} + O(j^{self.N})"

    def sort_key(self, f):
        return tuple(self.base.sort_key(a) for a in reversed(f.coeffs))

    def is_element(self, f):
        return isinstance(f, TruncSeries) and f.algebra is self and f.side == Side.LEFT

    def generators(self):
        names = {name: self.constant(g) for name, g in self.base.generators().items()}
        names[self.variable] = self._y
        return names

    def coefficient_dump(self, f: TruncSeries) -> List[Dict[str, Any]]:
        """Machine-readable view: index, modulus exponent N-k and canonical residue."""
        return [{"index": k, "modulus_exponent": self.N - k, "residue": self.base.render(a)}
                for k, a in enumerate(f.coeffs)]


def as_filtered_ring(ring: FilteredRing, skew: SkewData, precision: int, var: str = "y") -> SeriesRing:
    return SeriesRing(ring, skew, precision, var)


def ts_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f.algebra.mul(f, g)


def j_valuation(f: TruncSeries) -> float:
    """min_k (k + v(a_k)) with v(a_k) capped at N-k; infinity for the zero class."""
    algebra = f.algebra
    base, N = algebra.base, algebra.N
    best = INFINITY
    for k, a in enumerate(f.coeffs):
        if a == base.zero:
            continue
        best = min(best, k + min(base.valuation(a), N - k))
    return best if best < N else INFINITY


def invert_one_plus(g: TruncSeries) -> TruncSeries:
    """(1 + g)^-1 = sum_{m < N} (-g)^m for g in j."""
    valuation = j_valuation(g)
    if valuation < 1:
        raise NotInvertibleError("invert_one_plus needs an element of j", valuation=valuation)
    algebra = g.algebra
    minus_g = algebra.neg(g)
    term = algebra.one
    total = algebra.one
    for _ in range(1, algebra.N):
        term = algebra.mul(term, minus_g)
        total = algebra.add(total, term)
    return total


def ts_inverse(f: TruncSeries) -> TruncSeries:
    """f^-1 = (1 + g)^-1 a0^-1 with g = a0^-1 f - 1."""
    algebra = f.algebra
    base = algebra.base
    try:
        a0_inverse = base.inverse(f.coeffs[0])
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"constant term {base.render(f.coeffs[0])} is not a unit",
                                 valuation=j_valuation(f)) from exc
    u = algebra.constant(a0_inverse)
    g = algebra.sub(algebra.mul(u, f), algebra.one)
    return algebra.mul(invert_one_plus(g), u)


def require_tau_minus_id(skew: SkewData) -> None:
    """Raise unless delta = tau - id on the additive generators of the ring."""
    if skew.delta_is_tau_minus_id:
        return
    ring = skew.ring
    for b in ring.additive_generators():
        if skew.delta(b) != ring.sub(skew.tau(b), b):
            raise SkewDataError(f"delta differs from tau - id at {ring.render(b)}")
    skew.delta_is_tau_minus_id = True


def conjugate_by_z(f: TruncSeries) -> TruncSeries:
    """(1 + y) f (1 + y)^-1, which is tau on constants and fixes y when delta = tau - id."""
    algebra = f.algebra
    require_tau_minus_id(algebra.skew)
    z = algebra.add(algebra.one, algebra.y)
    return algebra.mul(algebra.mul(z, f), invert_one_plus(algebra.y))


def convert_side_series(f: TruncSeries, direction: Direction) -> TruncSeries:
    """Move between sum a_k y^k and sum y^i b_i within T/j^N."""
    algebra = f.algebra
    if direction == Direction.RIGHT_TO_LEFT:
        if f.side != Side.RIGHT:
            raise UsageError("right-to-left conversion needs a right normal form")
        coeffs = reorder_coefficients(algebra.base, algebra.skew, f.coeffs, algebra.N)
        return algebra.series(coeffs, Side.LEFT)
    if f.side != Side.LEFT:
        raise UsageError("left-to-right conversion needs a left normal form")
    coeffs = reorder_coefficients(algebra.base, algebra.skew.opposite, f.coeffs, algebra.N)
    return algebra.series(coeffs, Side.RIGHT)


def right_form_product(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """Product of two right forms, computed natively with r y = y tau'(r) + delta'(r)."""
    algebra = f.algebra
    if f.side != Side.RIGHT or g.side != Side.RIGHT or g.algebra is not algebra:
        raise UsageError("right_form_product needs two right normal forms of one series ring")
    coeffs = algebra.multiply_representatives(g.coeffs, f.coeffs, opposite=True)
    return TruncSeries(algebra, coeffs, Side.RIGHT)


def scale_variable(f: TruncSeries, c: Element) -> TruncSeries:
    """sum a_i c^i y^i, the substitution y -> c y for a central c."""
    algebra = f.algebra
    base = algebra.base
    factor = base.one
    out = []
    for a in f.coeffs:
        out.append(base.mul(a, factor))
        factor = base.mul(factor, c)
    return algebra.series(out, f.side)


def extend_tau_series(f: TruncSeries, q: Optional[Element] = None) -> TruncSeries:
    """The automorphism of T/j^N extending tau with y -> q^-1 y."""
    algebra = f.algebra
    skew = algebra.skew
    q = skew.q if q is None else q
    if q is None:
        raise SkewDataError(f"skew data {skew.label} carries no q")
    twisted = algebra.series([skew.tau(a) for a in f.coeffs], f.side)
    return scale_variable(twisted, q_inverse(skew, q))


def series_from_poly(f: SkewPoly, algebra: SeriesRing) -> TruncSeries:
    if f.skew is not algebra.skew:
        raise UsageError("polynomial and series ring use different skew data")
    if f.side != Side.LEFT:
        raise UsageError("embedding takes left normal forms")
    return algebra.series(f.coeffs)


def jt_filtration_set(algebra: SeriesRing, ell: int) -> frozenset:
    """i^ell + i^(ell-1) y + ... + i y^(ell-1) + T y^ell inside T/j^N."""
    base, N = algebra.base, algebra.N
    columns = []
    for k in range(N):
        if k < ell:
            members = {base.reduce(a, N - k) for a in base.ideal_power(ell - k)}
            columns.append(sorted(members, key=base.sort_key))
        else:
            columns.append(base.residues(N - k))
    return frozenset(TruncSeries(algebra, tuple(choice)) for choice in itertools.product(*columns))


def limit_of_sequence(fs: Sequence[TruncSeries]) -> TruncSeries:
    """The class a Cauchy sequence stabilises to at the working precision.

    Successive differences must have non-decreasing j-valuation, and every
    coefficient sequence must settle modulo i^(N-k) by the last term.
    """
    if not fs:
        raise ConvergenceError("empty sequence", 0)
    algebra = fs[0].algebra
    previous = None
    for index in range(1, len(fs)):
        if fs[index].algebra is not algebra:
            raise UsageError("sequence mixes series rings")
        valuation = j_valuation(algebra.sub(fs[index], fs[index - 1]))
        if previous is not None and valuation < previous:
            raise ConvergenceError("valuations of successive differences decrease", index)
        previous = valuation
    base, N = algebra.base, algebra.N
    for k in range(N):
        column = [base.reduce(f.coeffs[k], N - k) for f in fs]
        if len(column) > 1 and column[-1] != column[-2]:
            raise ConvergenceError(f"coefficient {k} does not stabilise at this precision", len(fs) - 1)
    return fs[-1]
