"""Skew polynomial ring S = R[y; tau, delta] and the theta operator calculus.

Multiplication is governed by y r = tau(r) y + delta(r). Pushing r past y^i
gives y^i r = sum_k theta_{i,k}(r) y^k, where the theta maps obey

    theta_{0,0} = id
    theta_{i+1,k} = tau theta_{i,k-1} + delta theta_{i,k}

and vanish outside 0 <= k <= i. Rows of theta are memoized per element on the
SkewData instance.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Dict, List, Sequence, Tuple

from skewlab.config import get_settings
from skewlab.exceptions import NotInvertibleError, SkewDataError, UsageError
from skewlab.models import Direction, Side
from skewlab.services.filtered_ring import Element, FilteredRing, SkewData, render_terms

logger = logging.getLogger(__name__)

NEG_INFINITY = -math.inf


def theta_row(skew: SkewData, i: int, r: Element) -> Tuple[Element, ...]:
    """(theta_{i,0}(r), ..., theta_{i,i}(r))."""
    if i < 0:
        raise UsageError("theta order must be nonnegative")
    cap = get_settings().theta_max_order
    if i > cap:
        raise UsageError(f"theta order {i} exceeds the configured maximum {cap}")
    return skew.theta_rows(i, r)


def theta(skew: SkewData, i: int, k: int, r: Element) -> Element:
    if k < 0 or k > i:
        return skew.ring.zero
    return theta_row(skew, i, r)[k]


def _trim(ring: FilteredRing, coeffs: Sequence[Element]) -> Tuple[Element, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == ring.zero:
        coeffs.pop()
    return tuple(coeffs)


class SkewPoly:
    """Finite skew polynomial; left form is sum a_i y^i, right form sum y^i b_i."""

    __slots__ = ("skew", "coeffs", "side")

    def __init__(self, skew: SkewData, coeffs: Sequence[Element], side: Side = Side.LEFT):
        self.skew = skew
        self.coeffs = _trim(skew.ring, coeffs)
        self.side = side

    @property
    def ring(self) -> FilteredRing:
        return self.skew.ring

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Element:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    @classmethod
    def constant(cls, skew: SkewData, a: Element) -> "SkewPoly":
        return cls(skew, (a,))

    @classmethod
    def monomial(cls, skew: SkewData, a: Element, k: int) -> "SkewPoly":
        return cls(skew, (skew.ring.zero,) * k + (a,))

    @classmethod
    def variable(cls, skew: SkewData) -> "SkewPoly":
        return cls.monomial(skew, skew.ring.one, 1)

    def _check(self, other: "SkewPoly") -> None:
        if not isinstance(other, SkewPoly) or other.skew is not self.skew:
            raise UsageError("skew polynomials over different skew data")
        if other.side != self.side:
            raise UsageError("skew polynomials in different normal forms")

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        ring = self.ring
        length = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.skew, [ring.add(self.coefficient(k), other.coefficient(k)) for k in range(length)],
                        self.side)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.skew, [self.ring.neg(c) for c in self.coeffs], self.side)

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        return spoly_mul(self, other)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, SkewPoly) and other.skew is self.skew
                and other.side == self.side and other.coeffs == self.coeffs)

    def __hash__(self) -> int:
        return hash((id(self.skew), self.side, self.coeffs))

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"SkewPoly({render_poly(self)!r}, side={self.side.value})"


def render_poly(f: SkewPoly, var: str = "y") -> str:
    ring = f.ring
    pieces = [(k, ring.render(c)) for k, c in enumerate(f.coeffs) if c != ring.zero]
    return render_terms(pieces, var, f.side)


def spoly_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """Exact product of left-form polynomials: sum a_i theta_{i,k}(b_j) y^(k+j)."""
    f._check(g)
    if f.side != Side.LEFT:
        raise UsageError("spoly_mul needs left normal forms")
    if f.is_zero or g.is_zero:
        return SkewPoly(f.skew, ())
    ring, skew = f.ring, f.skew
    out = [ring.zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a == ring.zero:
            continue
        for j, b in enumerate(g.coeffs):
            if b == ring.zero:
                continue
            for k, t in enumerate(theta_row(skew, i, b)):
                if t != ring.zero:
                    out[k + j] = ring.add(out[k + j], ring.mul(a, t))
    return SkewPoly(skew, out)


def y_times(f: SkewPoly) -> SkewPoly:
    """y * f by a single application of the commutation rule."""
    if f.side != Side.LEFT:
        raise UsageError("y_times needs a left normal form")
    ring, skew = f.ring, f.skew
    out = [ring.zero] * (len(f.coeffs) + 1)
    for k, c in enumerate(f.coeffs):
        out[k + 1] = ring.add(out[k + 1], skew.tau(c))
        out[k] = ring.add(out[k], skew.delta(c))
    return SkewPoly(skew, out)


def reorder_coefficients(ring: FilteredRing, skew: SkewData, coeffs: Sequence[Element],
                         length: int = None) -> List[Element]:
    """out[k] = sum_i theta_{i,k}(c_i) computed with the given skew data."""
    length = len(coeffs) if length is None else length
    out = [ring.zero] * length
    for i, c in enumerate(coeffs):
        if c == ring.zero:
            continue
        for k, t in enumerate(theta_row(skew, i, c)):
            if k < length and t != ring.zero:
                out[k] = ring.add(out[k], t)
    return out


def convert_side(f: SkewPoly, direction: Direction) -> SkewPoly:
    """Rewrite f in the opposite normal form; the ring element is unchanged."""
    if direction == Direction.RIGHT_TO_LEFT:
        if f.side != Side.RIGHT:
            raise UsageError("right-to-left conversion needs a right normal form")
        coeffs = reorder_coefficients(f.ring, f.skew, f.coeffs)
        return SkewPoly(f.skew, coeffs, Side.LEFT)
    if f.side != Side.LEFT:
        raise UsageError("left-to-right conversion needs a left normal form")
    coeffs = reorder_coefficients(f.ring, f.skew.opposite, f.coeffs)
    return SkewPoly(f.skew, coeffs, Side.RIGHT)


def q_inverse(skew: SkewData, q: Element) -> Element:
    try:
        return skew.ring.inverse(q)
    except NotInvertibleError as exc:
        raise SkewDataError(f"q = {skew.ring.render(q)} is not a unit") from exc


def spoly_apply_extended_tau(f: SkewPoly, q: Element = None) -> SkewPoly:
    """The extension of tau to S with tau(y) = q^-1 y."""
    if f.side != Side.LEFT:
        raise UsageError("extended tau acts on left normal forms")
    skew, ring = f.skew, f.ring
    q = skew.q if q is None else q
    if q is None:
        raise SkewDataError(f"skew data {skew.label} carries no q")
    scale = q_inverse(skew, q)
    factor = ring.one
    out = []
    for c in f.coeffs:
        out.append(ring.mul(skew.tau(c), factor))
        factor = ring.mul(factor, scale)
    return SkewPoly(skew, out)


class SkewPolyRing:
    """Algebra facade over SkewPoly for the expression evaluator."""

    def __init__(self, skew: SkewData, var: str = "y"):
        self.skew = skew
        self.ring = skew.ring
        self.variable = var
        self.name = f"{skew.ring.name}[{var}]"

    @property
    def zero(self) -> SkewPoly:
        return SkewPoly(self.skew, ())

    @property
    def one(self) -> SkewPoly:
        return SkewPoly.constant(self.skew, self.ring.one)

    def constant(self, a: Element) -> SkewPoly:
        return SkewPoly.constant(self.skew, a)

    def add(self, f, g):
        return f + g

    def neg(self, f):
        return -f

    def sub(self, f, g):
        return f - g

    def mul(self, f, g):
        return spoly_mul(f, g)

    def from_int(self, n: int) -> SkewPoly:
        return self.constant(self.ring.from_int(n))

    def pow(self, f: SkewPoly, exponent: int) -> SkewPoly:
        if exponent < 0:
            return self.pow(self.inverse(f), -exponent)
        result = self.one
        for _ in range(exponent):
            result = spoly_mul(result, f)
        return result

    def inverse(self, f: SkewPoly) -> SkewPoly:
        if f.degree != 0:
            raise NotInvertibleError(f"{render_poly(f, self.variable)} is not a constant unit")
        return self.constant(self.ring.inverse(f.coeffs[0]))

    def generators(self) -> Dict[str, SkewPoly]:
        names = {name: self.constant(g) for name, g in self.ring.generators().items()}
        names[self.variable] = SkewPoly.variable(self.skew)
        return names

    def render(self, f: SkewPoly) -> str:
        return render_poly(f, self.variable)

    def is_element(self, f: Any) -> bool:
        return isinstance(f, SkewPoly) and f.skew is self.skew
