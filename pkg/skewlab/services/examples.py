"""Builders for the shipped ring families.

Each builder validates the skew data it produces and raises SkewDataError
(carrying the failing ValidationReport) instead of handing back an invalid
instance. The quantum builders produce iterated towers
k[[w1]][[w2; tau2, delta2]]... where every layer acts on the tower below it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

from skewlab.config import get_settings
from skewlab.exceptions import NotInvertibleError, RelationError, SkewDataError, UsageError
from skewlab.models import RelationForm
from skewlab.schemas import QuantumMatrixSpec, RelationReport, RelationResidual, ValidationReport
from skewlab.services.filtered_ring import (
    Element,
    FilteredRing,
    ProductFieldRing,
    SkewData,
    TruncPolyRing,
    ZModRing,
    validate_skew_data,
)
from skewlab.services.skew_series import SeriesRing, scale_variable

logger = logging.getLogger(__name__)

DeltaChoice = Union[None, str, Sequence[int], Callable[[Element], Element]]


@dataclass
class RingTower:
    """A base ring and the series layers stacked on it, with their certificates."""
    base: FilteredRing
    base_skew: SkewData
    levels: List[SeriesRing] = field(default_factory=list)
    reports: List[ValidationReport] = field(default_factory=list)
    relation_report: Optional[RelationReport] = None
    alpha: Optional[Callable[[Element], Element]] = None

    @property
    def top(self) -> FilteredRing:
        return self.levels[-1] if self.levels else self.base

    @property
    def top_skew(self) -> SkewData:
        return self.levels[-1].skew if self.levels else self.base_skew

    def lift(self, f: Element, level: int, upto: Optional[int] = None) -> Element:
        """Embed an element of levels[level] (or of the base for level -1) into levels[upto]."""
        upto = len(self.levels) - 1 if upto is None else upto
        for algebra in self.levels[level + 1:upto + 1]:
            f = algebra.constant(f)
        return f


def _require_valid(ring: FilteredRing, skew: SkewData, samples: Optional[int] = None) -> ValidationReport:
    report = validate_skew_data(ring, skew, samples=samples)
    if not report.ok:
        failed = ", ".join(f"{check.law} ({check.witness})" for check in report.failures())
        raise SkewDataError(f"skew data {skew.label} on {ring.name} is invalid: {failed}", report)
    return report


def build_zmod(p: int, m: int) -> Tuple[ZModRing, SkewData]:
    """Z/p^m with i = (p), tau = id and delta = 0."""
    ring = ZModRing(p, m)
    skew = SkewData.identity(ring)
    _require_valid(ring, skew)
    logger.info("built %s", ring.name)
    return ring, skew


def build_field(p: int) -> Tuple[ZModRing, SkewData]:
    """F_p as a discrete filtered ring (i = 0)."""
    return build_zmod(p, 1)


def build_delta_tau_minus_id(ring: FilteredRing, tau: Callable[[Element], Element],
                             tau_inverse: Callable[[Element], Element], label: str = "tau-id") -> SkewData:
    """delta := tau - id, which is automatically a left tau-derivation; q = 1."""
    skew = SkewData(ring, tau=tau, tau_inverse=tau_inverse,
                    delta=lambda a: ring.sub(tau(a), a), q=ring.one,
                    label=label, delta_is_tau_minus_id=True)
    _require_valid(ring, skew)
    return skew


def leibniz_from_generator(ring: TruncPolyRing, tau: Callable[[Element], Element],
                           image: Element) -> Callable[[Element], Element]:
    """The additive map with delta(x) = image and delta(x^k) = tau(x) delta(x^(k-1)) + delta(x) x^(k-1)."""
    tau_x = tau(ring.x)
    powers = [ring.zero]
    for k in range(1, ring.m):
        powers.append(ring.add(ring.mul(tau_x, powers[-1]), ring.mul(image, ring.monomial(k - 1))))

    def delta(a: Element) -> Element:
        total = ring.zero
        for k, c in enumerate(a):
            if c:
                total = ring.add(total, ring.mul(ring.from_int(c), powers[k]))
        return total

    return delta


def build_truncpoly(p: int, m: int, tau_image: Sequence[int], delta: DeltaChoice = None,
                    var: str = "x", validate: bool = True) -> Tuple[TruncPolyRing, SkewData]:
    """F_p[x]/(x^m) with tau(x) = tau_image and a chosen delta.

    delta may be None (zero), "tau-minus-id", coefficients of delta(x) extended
    by the Leibniz rule, or a ready-made map.
    """
    ring = TruncPolyRing(p, m, var)
    t = ring.from_coefficients(tau_image)
    tau = lambda a: ring.compose(a, t)
    try:
        s = ring.compositional_inverse(t)
        tau_inverse = lambda a: ring.compose(a, s)
    except NotInvertibleError:
        # no inverse exists; validation reports the failure
        tau_inverse = lambda a: a

    if delta is None:
        skew = SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=lambda a: ring.zero,
                        q=ring.one, label=f"tau({var})={ring.render(t)}")
    elif delta == "tau-minus-id":
        skew = SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=lambda a: ring.sub(tau(a), a),
                        q=ring.one, label=f"tau({var})={ring.render(t)}, delta=tau-id",
                        delta_is_tau_minus_id=True)
    elif callable(delta):
        skew = SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=delta,
                        label=f"tau({var})={ring.render(t)}")
    else:
        d = ring.from_coefficients(delta)
        skew = SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=leibniz_from_generator(ring, tau, d),
                        label=f"tau({var})={ring.render(t)}, delta({var})={ring.render(d)}")
    if validate:
        _require_valid(ring, skew)
    logger.info("built %s with %s", ring.name, skew.label)
    return ring, skew


def build_swap_product(p: int, copies: int) -> Tuple[ProductFieldRing, Callable[[Element], Element]]:
    """F_p^t with the coordinate-cycling automorphism."""
    ring = ProductFieldRing(p, copies)
    logger.info("built %s with cyclic automorphism", ring.name)
    return ring, ring.cycle


def product_skew(ring: ProductFieldRing) -> SkewData:
    """tau = cycle, delta = 0 on a product of fields."""
    return SkewData(ring, tau=ring.cycle, tau_inverse=ring.cycle_inverse,
                    delta=lambda a: ring.zero, q=ring.one, label="cycle")


def scaling_skew(algebra: SeriesRing, c: int, label: Optional[str] = None) -> SkewData:
    """tau(f) = f(c*y), delta = 0, on a series ring over a commutative coefficient ring."""
    base = algebra.base
    scalar = base.from_int(c)
    try:
        scalar_inverse = base.inverse(scalar)
    except NotInvertibleError as exc:
        raise UsageError(f"scaling factor {c} is not a unit") from exc
    return SkewData(algebra,
                    tau=lambda f: scale_variable(f, scalar),
                    tau_inverse=lambda f: scale_variable(f, scalar_inverse),
                    delta=lambda f: algebra.zero, q=algebra.one,
                    label=label or f"{algebra.variable} -> {c}*{algebra.variable}")


def build_quantum_plane(p: int, q: int, N: int) -> RingTower:
    """k[[x]][[y; tau]] with tau(x) = q x and delta = 0, truncated at j^N on both levels."""
    if q % p == 0:
        raise UsageError("q must be nonzero")
    field_ring, field_skew = build_field(p)
    inner = SeriesRing(field_ring, field_skew, N, "x")
    skew = scaling_skew(inner, q, label=f"x -> {q % p}*x")
    report = _require_valid(inner, skew, samples=get_settings().tower_samples)
    outer = SeriesRing(inner, skew, N, "y")
    logger.info("built quantum plane %s with q=%d", outer.name, q % p)
    return RingTower(base=field_ring, base_skew=field_skew, levels=[inner, outer], reports=[report])


# -- quantum matrices ------------------------------------------------------

def _variable_order(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def _name(index: Tuple[int, int]) -> str:
    return f"y{index[0]}{index[1]}"


def _relation(spec: QuantumMatrixSpec, later: Tuple[int, int], earlier: Tuple[int, int],
              form: RelationForm) -> Tuple[int, Optional[Tuple[int, Tuple[int, int], Tuple[int, int]]]]:
    """Scalar c and optional (coefficient, u, v) with later*earlier = c earlier*later + coefficient u v."""
    k = spec.prime
    p = lambda a, b: spec.p[a - 1][b - 1]
    i, j = later
    r, s = earlier
    lam = spec.lam
    if i == r:
        return p(s, j) % k, None
    if j <= s:
        return (lam * p(i, r) * p(s, j)) % k, None
    coefficient = ((lam - 1) * p(i, r)) % k
    second = (i, s) if form == RelationForm.STANDARD else (r, s)
    return (p(i, r) * p(s, j)) % k, (coefficient, (r, j), second)


class _TowerMaps:
    """Scalar automorphisms and Leibniz-extended derivations on a partially built tower."""

    def __init__(self, tower: RingTower):
        self.tower = tower
        self.levels = list(tower.levels)
        self.top_index = len(self.levels) - 1

    def lift(self, f: Element, level: int) -> Element:
        return self.tower.lift(f, level, self.top_index)

    def scalar_automorphism(self, scalars: Sequence[int]) -> Callable[[Element], Element]:
        """w_l -> scalars[l] * w_l on every level, extended multiplicatively."""
        levels = self.levels

        @lru_cache(maxsize=None)
        def apply(level: int, f: Element) -> Element:
            if level < 0:
                return f
            algebra = levels[level]
            inner = [apply(level - 1, a) for a in f.coeffs]
            return scale_variable(algebra.series(inner), algebra.base.from_int(scalars[level]))

        top_index = self.top_index
        return lambda f: apply(top_index, f)

    def leibniz_derivation(self, tau: Callable[[Element], Element],
                           images: Sequence[Element]) -> Callable[[Element], Element]:
        """The additive map on the current top with delta(w_l) = images[l] and the left Leibniz rule."""
        levels = self.levels
        lift = self.lift
        top_index = self.top_index
        top = levels[top_index]
        lifted_variables = [lift(algebra.y, index) for index, algebra in enumerate(levels)]

        @lru_cache(maxsize=None)
        def power_image(level: int, k: int) -> Element:
            if k == 0:
                return top.zero
            w = lifted_variables[level]
            previous_power = lift(levels[level].monomial(levels[level].base.one, k - 1), level)
            return top.add(top.mul(tau(w), power_image(level, k - 1)), top.mul(images[level], previous_power))

        @lru_cache(maxsize=None)
        def derive(level: int, f: Element) -> Element:
            if level < 0:
                return top.zero
            algebra = levels[level]
            total = top.zero
            for k, a in enumerate(f.coeffs):
                if a == algebra.base.zero:
                    continue
                lifted = lift(a, level - 1)
                power = lift(algebra.monomial(algebra.base.one, k), level)
                total = top.add(total, top.mul(tau(lifted), power_image(level, k)))
                total = top.add(total, top.mul(derive(level - 1, a), power))
            return total

        return lambda f: derive(top_index, f)


def build_quantum_matrices(spec: QuantumMatrixSpec) -> RingTower:
    """Completed multiparameter quantum n x n matrices, variables in row-major order."""
    k = spec.prime
    order = _variable_order(spec.n)
    field_ring, field_skew = build_field(k)
    tower = RingTower(base=field_ring, base_skew=field_skew)
    samples = get_settings().tower_samples
    generators: List[Tuple[int, int]] = []

    first = SeriesRing(field_ring, field_skew, spec.precision, _name(order[0]))
    tower.levels.append(first)
    generators.append(order[0])

    for later in order[1:]:
        top = tower.top
        maps = _TowerMaps(tower)
        scalars, images = [], []
        has_derivation = False
        for level, earlier in enumerate(generators):
            scalar, extra = _relation(spec, later, earlier, spec.relation_form)
            scalars.append(scalar)
            if extra is None:
                images.append(top.zero)
                continue
            coefficient, u, v = extra
            if coefficient % k:
                has_derivation = True
            value = top.mul(_lifted_generator(tower, generators, u), _lifted_generator(tower, generators, v))
            images.append(top.mul(top.from_int(coefficient), value))
        tau = maps.scalar_automorphism(scalars)
        tau_inverse = maps.scalar_automorphism([pow(c, -1, k) for c in scalars])
        delta = maps.leibniz_derivation(tau, images) if has_derivation else (lambda f, zero=top.zero: zero)
        q = top.from_int(pow(spec.lam, -1, k)) if has_derivation else top.one
        skew = SkewData(top, tau=tau, tau_inverse=tau_inverse, delta=delta, q=q, label=_name(later))
        report = validate_skew_data(top, skew, samples=samples)
        if not report.ok:
            failed = ", ".join(f"{check.law} ({check.witness})" for check in report.failures())
            raise RelationError(f"the relations cannot be realised as skew data: {failed}",
                                relation=f"{_name(later)} over {', '.join(_name(g) for g in generators)}")
        tower.reports.append(report)
        tower.levels.append(SeriesRing(top, skew, spec.precision, _name(later)))
        generators.append(later)

    tower.relation_report = relation_report(tower, spec, generators)
    logger.info("built quantum %dx%d matrices over F%d at precision %d (%s relations)",
                spec.n, spec.n, k, spec.precision, spec.relation_form.value)
    return tower


def _lifted_generator(tower: RingTower, generators: List[Tuple[int, int]], index: Tuple[int, int]) -> Element:
    level = generators.index(index)
    return tower.lift(tower.levels[level].y, level)


def relation_report(tower: RingTower, spec: QuantumMatrixSpec,
                    generators: Optional[List[Tuple[int, int]]] = None) -> RelationReport:
    """Evaluate every defining relation in the top of the tower."""
    generators = generators or _variable_order(spec.n)
    top = tower.top
    variables = {index: _lifted_generator(tower, generators, index) for index in generators}

    def residual(later, earlier, form) -> Element:
        scalar, extra = _relation(spec, later, earlier, form)
        u, v = variables[later], variables[earlier]
        value = top.sub(top.mul(u, v), top.mul(top.from_int(scalar), top.mul(v, u)))
        if extra is not None:
            coefficient, a, b = extra
            value = top.sub(value, top.mul(top.from_int(coefficient), top.mul(variables[a], variables[b])))
        return value

    relations, printed = [], []
    for position, later in enumerate(generators):
        for earlier in generators[:position]:
            label = f"{_name(later)}*{_name(earlier)}"
            value = residual(later, earlier, spec.relation_form)
            relations.append(RelationResidual(relation=label, residual=top.render(value), holds=value == top.zero))
            if spec.relation_form == RelationForm.STANDARD and later[0] > earlier[0] and later[1] > earlier[1]:
                value = residual(later, earlier, RelationForm.AS_PRINTED)
                printed.append(RelationResidual(relation=label, residual=top.render(value),
                                                holds=value == top.zero))
    return RelationReport(relation_form=spec.relation_form, precision=spec.precision,
                          relations=relations, printed_form_residuals=printed)
