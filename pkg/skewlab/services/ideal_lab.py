"""Two-sided ideals of finite rings and brute-force prime theory.

Ideals are stored as full element sets together with an additive spanning set,
so inclusion tests are set operations and stability under additive maps only
needs to look at the spanning vectors. The ideal lattice of an ambient ring is
enumerated once (principal ideals, then sums to a fixed point) and memoized.
"""

from __future__ import annotations

import itertools
import logging
import threading
import weakref
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from skewlab.config import get_settings
from skewlab.exceptions import BudgetExceededError, IdealError, ConsistencyError
from skewlab.models import Direction, IdealOperation, Side
from skewlab.services.filtered_ring import Element, FilteredRing, QuotientRing, SkewData
from skewlab.services.skew_series import SeriesRing, TruncSeries, convert_side_series, extend_tau_series

logger = logging.getLogger(__name__)

Automorphism = Callable[[Element], Element]


@dataclass(frozen=True, eq=False)
class FiniteIdeal:
    """A two-sided ideal of a finite ring, as a closed element set."""
    ambient: FilteredRing
    generators: tuple
    elements: frozenset
    spanning: tuple

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteIdeal) and other.ambient is self.ambient and other.elements == self.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __contains__(self, a: Element) -> bool:
        return a in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __le__(self, other: "FiniteIdeal") -> bool:
        _same_ambient(self, other)
        return self.elements <= other.elements

    def __lt__(self, other: "FiniteIdeal") -> bool:
        _same_ambient(self, other)
        return self.elements < other.elements

    @property
    def is_proper(self) -> bool:
        return self.ambient.one not in self.elements

    @property
    def is_zero(self) -> bool:
        return len(self.elements) == 1

    def serialize(self) -> List[str]:
        ambient = self.ambient
        return [ambient.render(a) for a in sorted(self.elements, key=ambient.sort_key)]

    def describe(self) -> str:
        if self.is_zero:
            return "<0>"
        ambient = self.ambient
        return "<" + ", ".join(ambient.render(g) for g in self.spanning) + ">"

    def __repr__(self) -> str:
        return f"FiniteIdeal({self.describe()} in {self.ambient.name}, {len(self.elements)} elements)"


def _same_ambient(I: FiniteIdeal, J: FiniteIdeal) -> None:
    if I.ambient is not J.ambient:
        raise IdealError(f"ideals of different rings: {I.ambient.name} and {J.ambient.name}")


def _require_finite(ambient: FilteredRing) -> None:
    if not ambient.is_finite:
        raise IdealError(f"{ambient.name} is not finite")
    ambient.require_enumerable()


def ideal_generate(ambient: FilteredRing, generators: Iterable[Element]) -> FiniteIdeal:
    _require_finite(ambient)
    generators = tuple(generators)
    span = ambient.closure(generators)
    return FiniteIdeal(ambient, generators, span.elements, span.spanning)


def left_ideal_generate(ambient: FilteredRing, generators: Iterable[Element]) -> FiniteIdeal:
    """T*gens: closed under multiplication on the left only."""
    _require_finite(ambient)
    generators = tuple(generators)
    span = ambient.closure(generators, left=True, right=False)
    return FiniteIdeal(ambient, generators, span.elements, span.spanning)


def right_ideal_generate(ambient: FilteredRing, generators: Iterable[Element]) -> FiniteIdeal:
    """gens*T: closed under multiplication on the right only."""
    _require_finite(ambient)
    generators = tuple(generators)
    span = ambient.closure(generators, left=False, right=True)
    return FiniteIdeal(ambient, generators, span.elements, span.spanning)


def zero_ideal(ambient: FilteredRing) -> FiniteIdeal:
    return ideal_generate(ambient, ())


def unit_ideal(ambient: FilteredRing) -> FiniteIdeal:
    return ideal_generate(ambient, (ambient.one,))


def _from_elements(ambient: FilteredRing, elements: Iterable[Element]) -> FiniteIdeal:
    ordered = sorted(set(elements), key=ambient.sort_key)
    span = ambient.additive_span(ordered)
    return FiniteIdeal(ambient, span.spanning, span.elements, span.spanning)


def ideal_ops(kind: IdealOperation, I: FiniteIdeal, J: FiniteIdeal) -> FiniteIdeal:
    _same_ambient(I, J)
    ambient = I.ambient
    kind = IdealOperation(kind)
    if kind == IdealOperation.PRODUCT:
        return ideal_generate(ambient, (ambient.mul(a, b) for a in I.spanning for b in J.spanning))
    if kind == IdealOperation.SUM:
        return ideal_generate(ambient, I.spanning + J.spanning)
    return _from_elements(ambient, I.elements & J.elements)


def image_ideal(I: FiniteIdeal, alpha: Automorphism) -> FiniteIdeal:
    """alpha(I) for a ring automorphism alpha."""
    return _from_elements(I.ambient, (alpha(a) for a in I.elements))


def image_in_quotient(I: FiniteIdeal, quotient: FilteredRing) -> FiniteIdeal:
    """(I + i^N) / i^N inside R / i^N."""
    if quotient is I.ambient:
        return I
    if not isinstance(quotient, QuotientRing) or quotient.base is not I.ambient:
        raise IdealError(f"{quotient.name} is not a quotient of {I.ambient.name}")
    return _from_elements(quotient, (quotient.project(a) for a in I.elements))


# -- the ideal lattice -----------------------------------------------------

_lattices: "weakref.WeakKeyDictionary[FilteredRing, Tuple[FiniteIdeal, ...]]" = weakref.WeakKeyDictionary()
_lattice_lock = threading.Lock()


def _enumerate_by_sums(ambient: FilteredRing) -> List[FiniteIdeal]:
    found = {}
    for a in ambient.elements():
        ideal = ideal_generate(ambient, (a,))
        found.setdefault(ideal.elements, ideal)
    frontier = list(found.values())
    while frontier:
        known = list(found.values())
        fresh = []
        for I in frontier:
            for J in known:
                if I.elements <= J.elements or J.elements <= I.elements:
                    continue
                span = ambient.additive_span(I.spanning + J.spanning)
                if span.elements not in found:
                    ideal = FiniteIdeal(ambient, span.spanning, span.elements, span.spanning)
                    found[span.elements] = ideal
                    fresh.append(ideal)
        frontier = fresh
    return list(found.values())


def ideals_by_subgroups(ambient: FilteredRing) -> List[FiniteIdeal]:
    """Every additive subgroup closed under two-sided multiplication; an oracle for small rings."""
    _require_finite(ambient)
    limit = get_settings().subgroup_oracle_limit
    if ambient.size() > limit:
        raise BudgetExceededError(f"{ambient.name} is beyond the subgroup oracle limit {limit}")
    elements = ambient.elements()
    basis = ambient.additive_generators()
    subgroups = {frozenset({ambient.zero}): ()}
    frontier = list(subgroups.items())
    while frontier:
        fresh = []
        for group, spanning in frontier:
            for v in elements:
                if v in group:
                    continue
                grown = frozenset(ambient.span_insert(set(group), v))
                if grown not in subgroups:
                    subgroups[grown] = spanning + (v,)
                    fresh.append((grown, spanning + (v,)))
        frontier = fresh
    ideals = []
    for group, spanning in subgroups.items():
        closed = all(ambient.mul(b, v) in group and ambient.mul(v, b) in group for v in spanning for b in basis)
        if closed:
            ideals.append(FiniteIdeal(ambient, spanning, group, spanning))
    return ideals


def all_ideals(ambient: FilteredRing) -> Tuple[FiniteIdeal, ...]:
    """The whole ideal lattice, smallest first."""
    _require_finite(ambient)
    cached = _lattices.get(ambient)
    if cached is not None:
        return cached
    with _lattice_lock:
        cached = _lattices.get(ambient)
        if cached is not None:
            return cached
        ideals = _enumerate_by_sums(ambient)
        settings = get_settings()
        if settings.subgroup_oracle and ambient.size() <= settings.subgroup_oracle_limit:
            oracle = {I.elements for I in ideals_by_subgroups(ambient)}
            if oracle != {I.elements for I in ideals}:
                raise ConsistencyError(f"ideal enumeration of {ambient.name} disagrees with the subgroup oracle")
        ordered = tuple(sorted(ideals, key=lambda I: (len(I), sorted(ambient.sort_key(a) for a in I.elements))))
        logger.debug("%s has %d ideals", ambient.name, len(ordered))
        _lattices[ambient] = ordered
        return ordered


# -- primality -------------------------------------------------------------

def prime_witness(P: FiniteIdeal) -> Optional[Tuple[Element, Element]]:
    """(a, b) outside P with aAb inside P, or None when P is prime."""
    if not P.is_proper:
        raise IdealError("the unit ideal is not a candidate prime")
    ambient = P.ambient
    basis = ambient.additive_generators()
    outside = [a for a in ambient.elements() if a not in P.elements]
    for a in outside:
        row = [ambient.mul(a, r) for r in basis]
        for b in outside:
            if all(ambient.mul(ar, b) in P.elements for ar in row):
                return a, b
    return None


def is_prime(P: FiniteIdeal) -> bool:
    return prime_witness(P) is None


def automorphism_order(ambient: FilteredRing, alpha: Automorphism, cap: Optional[int] = None) -> int:
    """Smallest n >= 1 with alpha^n = id, tested on additive generators."""
    cap = get_settings().alpha_order_cap if cap is None else cap
    basis = ambient.additive_generators()
    current = list(basis)
    for n in range(1, cap + 1):
        current = [alpha(b) for b in current]
        if current == list(basis):
            return n
    raise BudgetExceededError(f"automorphism order exceeds {cap}")


def stability_witness(I: FiniteIdeal, maps: Sequence[Tuple[str, Automorphism]]) -> Optional[str]:
    """First spanning vector sent outside I by one of the additive maps."""
    ambient = I.ambient
    for name, fn in maps:
        for v in I.spanning:
            if fn(v) not in I.elements:
                return f"{name}({ambient.render(v)}) = {ambient.render(fn(v))}"
    return None


def is_alpha_stable(I: FiniteIdeal, alpha: Automorphism) -> bool:
    return stability_witness(I, [("alpha", alpha)]) is None


def is_alpha_prime(P: FiniteIdeal, alpha: Automorphism) -> bool:
    """alpha^n(x) A y inside P for every n forces x or y into P."""
    if not P.is_proper:
        raise IdealError("the unit ideal is not a candidate prime")
    witness = stability_witness(P, [("alpha", alpha)])
    if witness is not None:
        raise IdealError("ideal is not alpha-stable", witness)
    ambient = P.ambient
    order = automorphism_order(ambient, alpha)
    basis = ambient.additive_generators()
    outside = [a for a in ambient.elements() if a not in P.elements]
    for x in outside:
        orbit = [x]
        for _ in range(order - 1):
            orbit.append(alpha(orbit[-1]))
        rows = [ambient.mul(u, r) for u in orbit for r in basis]
        for y in outside:
            if all(ambient.mul(row, y) in P.elements for row in rows):
                return False
    return True


def alpha_ideals(ambient: FilteredRing, alpha: Automorphism) -> List[FiniteIdeal]:
    return [I for I in all_ideals(ambient) if is_alpha_stable(I, alpha)]


def is_alpha_prime_by_ideals(P: FiniteIdeal, alpha: Automorphism) -> bool:
    """Ideal-theoretic definition: IJ inside P forces I or J inside P, over alpha-ideals."""
    if not P.is_proper or not is_alpha_stable(P, alpha):
        return False
    larger = [I for I in alpha_ideals(P.ambient, alpha) if P < I]
    return _no_zero_divisor_pair(P, larger)


def _no_zero_divisor_pair(P: FiniteIdeal, larger: Sequence[FiniteIdeal]) -> bool:
    for I, J in itertools.product(larger, repeat=2):
        if ideal_ops(IdealOperation.PRODUCT, I, J).elements <= P.elements:
            return False
    return True


def is_tau_delta_stable(I: FiniteIdeal, skew: SkewData) -> bool:
    return stability_witness(I, [("tau", skew.tau), ("delta", skew.delta)]) is None


def tau_delta_ideals(ambient: FilteredRing, skew: SkewData) -> List[FiniteIdeal]:
    return [I for I in all_ideals(ambient) if is_tau_delta_stable(I, skew)]


def is_tau_delta_prime(Q: FiniteIdeal, skew: SkewData) -> bool:
    """Q proper, tau-delta-stable, and JK inside Q forces J or K inside Q over tau-delta-ideals."""
    if not Q.is_proper or not is_tau_delta_stable(Q, skew):
        return False
    larger = [I for I in tau_delta_ideals(Q.ambient, skew) if Q < I]
    return _no_zero_divisor_pair(Q, larger)


def prime_ideals(ambient: FilteredRing) -> List[FiniteIdeal]:
    return [P for P in all_ideals(ambient) if P.is_proper and is_prime(P)]


def minimal_primes_over(I: FiniteIdeal) -> List[FiniteIdeal]:
    over = [P for P in prime_ideals(I.ambient) if I <= P]
    return [P for P in over if not any(Q < P for Q in over)]


def tau_orbit(P: FiniteIdeal, alpha: Automorphism) -> List[FiniteIdeal]:
    orbit = [P]
    while True:
        image = image_ideal(orbit[-1], alpha)
        if image == P:
            return orbit
        orbit.append(image)


def intersect_all(ideals: Sequence[FiniteIdeal]) -> FiniteIdeal:
    result = ideals[0]
    for I in ideals[1:]:
        result = ideal_ops(IdealOperation.INTERSECTION, result, I)
    return result


def tau_orbit_decomposition(P: FiniteIdeal, alpha: Automorphism) -> List[FiniteIdeal]:
    """The alpha-orbit of primes whose intersection is the alpha-prime P."""
    if not is_alpha_prime(P, alpha):
        raise IdealError("ideal is not alpha-prime", P.describe())
    minimal = minimal_primes_over(P)
    if not minimal:
        raise ConsistencyError(f"no prime lies over {P.describe()}")
    orbit = tau_orbit(minimal[0], alpha)
    if set(orbit) != set(minimal):
        raise ConsistencyError(f"minimal primes over {P.describe()} are not a single alpha-orbit")
    if intersect_all(orbit) != P:
        raise ConsistencyError(f"the orbit of {minimal[0].describe()} does not intersect to {P.describe()}")
    return orbit


# -- induced ideals and contraction ----------------------------------------

def _coefficient_skew(Q: FiniteIdeal, algebra: SeriesRing) -> SkewData:
    if Q.ambient is algebra.base:
        return algebra.skew
    if Q.ambient is algebra.constant_ring:
        return algebra.constant_skew
    raise IdealError(f"{Q.ambient.name} is not the coefficient ring of {algebra.name}")


def induced_ideal_truncated(Q: FiniteIdeal, algebra: SeriesRing) -> FiniteIdeal:
    """Q[[y; tau, delta]] mod j^N, checked against QT, TQ, the generated ideal and the right-form set."""
    skew = _coefficient_skew(Q, algebra)
    witness = stability_witness(Q, [("tau", skew.tau), ("delta", skew.delta)])
    if witness is not None:
        raise IdealError("ideal is not a tau-delta-ideal", witness)
    base, N = algebra.base, algebra.N
    columns = [sorted({base.reduce(a, N - k) for a in Q.elements}, key=base.sort_key) for k in range(N)]
    left_set = frozenset(TruncSeries(algebra, tuple(choice)) for choice in itertools.product(*columns))
    right_set = frozenset(convert_side_series(TruncSeries(algebra, tuple(choice), Side.RIGHT), Direction.RIGHT_TO_LEFT)
                          for choice in itertools.product(*columns))
    constants = [algebra.constant(a) for a in Q.spanning]
    generated = ideal_generate(algebra, constants)
    left_module = left_ideal_generate(algebra, constants)
    right_module = right_ideal_generate(algebra, constants)
    for label, candidate in (("left-form set", left_set), ("right-form set", right_set),
                             ("QT", right_module.elements), ("TQ", left_module.elements)):
        if candidate != generated.elements:
            raise ConsistencyError(f"{label} differs from the ideal generated by {Q.describe()}")
    return generated


def contract(I: FiniteIdeal, check_stability: bool = True) -> FiniteIdeal:
    """I intersected with the constants R / i^N."""
    algebra = I.ambient
    if not isinstance(algebra, SeriesRing):
        raise IdealError(f"{algebra.name} is not a truncated series ring")
    constants = algebra.constant_ring
    contraction = _from_elements(constants, (a for a in constants.elements() if algebra.constant(a) in I.elements))
    if check_stability and algebra.skew.q is not None:
        if is_alpha_stable(I, lambda f: extend_tau_series(f)):
            skew = algebra.constant_skew
            witness = stability_witness(contraction, [("tau", skew.tau), ("delta", skew.delta)])
            if witness is not None:
                raise ConsistencyError(f"contraction of a tau-ideal is not tau-delta-stable: {witness}")
    return contraction


def extended_tau(algebra: SeriesRing) -> Automorphism:
    return lambda f: extend_tau_series(f)


def tau_ideals(algebra: SeriesRing) -> List[FiniteIdeal]:
    return alpha_ideals(algebra, extended_tau(algebra))


def tau_primes(algebra: SeriesRing) -> List[FiniteIdeal]:
    alpha = extended_tau(algebra)
    return [P for P in tau_ideals(algebra) if P.is_proper and is_alpha_prime(P, alpha)]


def tau_segment(ideals: Sequence[FiniteIdeal], alpha: Automorphism) -> Optional[List[FiniteIdeal]]:
    """Order ideals as Q, alpha(Q), ..., alpha^n(Q), or return None if they are not such a run."""
    wanted = set(ideals)
    for start in ideals:
        segment = [start]
        while len(segment) < len(wanted):
            image = image_ideal(segment[-1], alpha)
            if image not in wanted or image in segment:
                break
            segment.append(image)
        if set(segment) == wanted:
            return segment
    return None


def cutting_down_orbit(P: FiniteIdeal) -> List[FiniteIdeal]:
    """Minimal primes over the contraction of a prime P, ordered as Q, tau(Q), ..., tau^n(Q)."""
    contraction = contract(P, check_stability=False)
    tau = P.ambient.constant_skew.tau
    minimal = minimal_primes_over(contraction)
    if not minimal:
        raise ConsistencyError(f"no prime of {contraction.ambient.name} contains {contraction.describe()}")
    segment = tau_segment(minimal, tau)
    if segment is None:
        raise ConsistencyError(f"minimal primes over {contraction.describe()} are not a run of one tau-orbit")
    return segment


def lying_over(Q: FiniteIdeal, algebra: SeriesRing) -> List[FiniteIdeal]:
    """Maximal tau-ideals of T/j^N containing QT with contraction Q; each must be tau-prime."""
    skew = algebra.constant_skew
    Q = image_in_quotient(Q, algebra.constant_ring) if Q.ambient is algebra.base else Q
    if not is_tau_delta_prime(Q, skew):
        raise IdealError("ideal is not tau-delta-prime", Q.describe())
    induced = induced_ideal_truncated(Q, algebra)
    candidates = [J for J in tau_ideals(algebra)
                  if J.is_proper and induced <= J and contract(J, check_stability=False) == Q]
    maximal = [J for J in candidates if not any(J < K for K in candidates)]
    if not maximal:
        raise ConsistencyError(f"no tau-ideal lies over {Q.describe()}")
    alpha = extended_tau(algebra)
    for J in maximal:
        if not is_alpha_prime(J, alpha):
            raise ConsistencyError(f"maximal tau-ideal {J.describe()} over {Q.describe()} is not tau-prime")
    return maximal
