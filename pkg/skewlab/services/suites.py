"""Verification suites over a configured ring tower.

A suite is a function from a SuiteContext to a list of cases. A case is a
(case id, check) pair; the check returns an optional note on success, raises
CaseFailed with a witness on failure and CaseSkipped (or runs out of budget)
when it cannot be decided. Cases run on a thread pool and the report is
ordered by case id, so reports depend only on (config, suite, seed).
"""

from __future__ import annotations

import contextvars
import itertools
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from skewlab.config import Settings, get_settings
from skewlab.exceptions import (
    BudgetExceededError,
    ConvergenceError,
    NotInvertibleError,
    SkewDataError,
    SkewLabError,
    UnknownSuiteError,
)
from skewlab.models import CaseStatus, Direction, RingFamily
from skewlab.schemas import CaseRecord, RingTowerConfig, SuiteReport
from skewlab.services.examples import RingTower
from skewlab.services.filtered_ring import (
    INFINITY,
    Element,
    FilteredRing,
    GradedElement,
    SkewData,
    ring_axiom_report,
    validate_skew_data,
)
from skewlab.services.ideal_lab import (
    all_ideals,
    alpha_ideals,
    contract,
    cutting_down_orbit,
    extended_tau,
    ideal_generate,
    image_ideal,
    induced_ideal_truncated,
    intersect_all,
    is_alpha_prime,
    is_alpha_prime_by_ideals,
    is_alpha_stable,
    is_prime,
    is_tau_delta_prime,
    is_tau_delta_stable,
    lying_over,
    prime_ideals,
    tau_delta_ideals,
    tau_ideals,
    tau_orbit,
    tau_orbit_decomposition,
    unit_ideal,
)
from skewlab.services.skew_poly import SkewPoly, convert_side, spoly_mul, theta, theta_row, y_times
from skewlab.services.skew_series import (
    SeriesRing,
    TruncSeries,
    conjugate_by_z,
    convert_side_series,
    invert_one_plus,
    j_valuation,
    jt_filtration_set,
    limit_of_sequence,
    require_tau_minus_id,
    right_form_product,
)
from skewlab.services.tower import budget_scope, build_tower

logger = logging.getLogger(__name__)


class CaseFailed(Exception):
    def __init__(self, witness: str):
        self.witness = witness
        super().__init__(witness)


class CaseSkipped(Exception):
    pass


@dataclass
class SuiteContext:
    config: RingTowerConfig
    tower: RingTower
    seed: int
    settings: Settings

    @property
    def top(self) -> FilteredRing:
        return self.tower.top

    @property
    def layer(self) -> Optional[SeriesRing]:
        return self.tower.levels[-1] if self.tower.levels else None

    def coefficients(self) -> Tuple[FilteredRing, SkewData]:
        """Coefficient ring and skew data of the top layer (the base itself without layers)."""
        layer = self.layer
        if layer is None:
            return self.tower.base, self.tower.base_skew
        return layer.base, layer.skew


Check = Callable[[SuiteContext, random.Random], Optional[str]]
Case = Tuple[str, Check]

_REGISTRY: Dict[str, Callable[[SuiteContext], List[Case]]] = {}


def suite(name: str):
    def register(builder: Callable[[SuiteContext], List[Case]]):
        _REGISTRY[name] = builder
        return builder
    return register


def list_suites() -> List[str]:
    return list(_REGISTRY)


def _inapplicable(note: str) -> List[Case]:
    def check(ctx: SuiteContext, rng: random.Random) -> Optional[str]:
        raise CaseSkipped(note)
    return [("inapplicable", check)]


def _population(ring: FilteredRing, rng: random.Random, count: int) -> List[Element]:
    if ring.enumerable():
        return ring.elements()
    return [ring.random_element(rng) for _ in range(count)]


def _pairs(ring: FilteredRing, rng: random.Random, count: int) -> List[Tuple[Element, Element]]:
    settings = get_settings()
    if ring.enumerable() and ring.size() ** 2 <= settings.exhaustive_pair_budget:
        elements = ring.elements()
        return list(itertools.product(elements, elements))
    return [(ring.random_element(rng), ring.random_element(rng)) for _ in range(count)]


def _first_difference(ring: FilteredRing, left: frozenset, right: frozenset) -> str:
    extra = sorted(left ^ right, key=ring.sort_key)
    side = "first set" if extra[0] in left else "second set"
    return f"{ring.render(extra[0])} only in the {side}"


def _require_layer(ctx: SuiteContext) -> Optional[List[Case]]:
    if ctx.layer is None:
        return _inapplicable("the tower has no series layer")
    return None


def _has_tau_minus_id(skew: SkewData) -> bool:
    try:
        require_tau_minus_id(skew)
    except SkewDataError:
        return False
    return True


def _report_failure(report) -> str:
    return "; ".join(f"{check.law}: {check.witness}" for check in report.failures())


# -- ring axioms and skew data --------------------------------------------

@suite("ring-axioms")
def ring_axioms_suite(ctx: SuiteContext) -> List[Case]:
    def axioms(ring: FilteredRing) -> Check:
        def check(ctx, rng):
            report = ring_axiom_report(ring, seed=ctx.seed)
            if not report.ok:
                raise CaseFailed(_report_failure(report))
            mode = "exhaustive" if report.exhaustive else "sampled"
            return f"{ring.name}: {mode}, {report.check('associativity').checked} triples"
        return check

    def separated(ctx, rng):
        top = ctx.top
        power = top.ideal_power(top.precision_cap)
        if power != frozenset({top.zero}):
            raise CaseFailed(f"i^{top.precision_cap} has {len(power)} elements")

    def proper(ctx, rng):
        top = ctx.top
        if top.in_ideal_power(top.one, 1):
            raise CaseFailed("1 lies in the distinguished ideal")

    cases = [("axioms/top", axioms(ctx.top)), ("filtration/proper", proper), ("filtration/separated", separated)]
    if ctx.tower.levels:
        cases.append(("axioms/base", axioms(ctx.tower.base)))
    return cases


@suite("skew-validation")
def skew_validation_suite(ctx: SuiteContext) -> List[Case]:
    def validate(ring: FilteredRing, skew: SkewData) -> Check:
        def check(ctx, rng):
            report = validate_skew_data(ring, skew, samples=ctx.settings.tower_samples, seed=ctx.seed)
            if not report.ok:
                raise CaseFailed(_report_failure(report))
            return f"{ring.name}: {'exhaustive' if report.exhaustive else 'basis'}"
        return check

    cases = [("base", validate(ctx.tower.base, ctx.tower.base_skew))]
    for index, level in enumerate(ctx.tower.levels):
        cases.append((f"layer/{index}-{level.variable}", validate(level.base, level.skew)))
    return cases


# -- theta calculus --------------------------------------------------------

@suite("theta")
def theta_suite(ctx: SuiteContext) -> List[Case]:
    ring, skew = ctx.coefficients()

    def filtration(i: int) -> Check:
        def check(ctx, rng):
            for r in _population(ring, rng, 32):
                for k in range(i + 1):
                    value = theta(skew, i, k, r)
                    if not ring.in_ideal_power(value, i - k):
                        raise CaseFailed(f"theta({i},{k})({ring.render(r)}) = {ring.render(value)} "
                                         f"is not in i^{i - k}")
        return check

    def expansion(i: int) -> Check:
        def check(ctx, rng):
            y_power = SkewPoly.monomial(skew, ring.one, i)
            for r in _population(ring, rng, 32):
                constant = SkewPoly.constant(skew, r)
                expected = SkewPoly(skew, theta_row(skew, i, r))
                if spoly_mul(y_power, constant) != expected:
                    raise CaseFailed(f"y^{i}*{ring.render(r)} = {spoly_mul(y_power, constant)}, "
                                     f"theta row gives {expected}")
                stepped = constant
                for _ in range(i):
                    stepped = y_times(stepped)
                if stepped != expected:
                    raise CaseFailed(f"repeated y_times on {ring.render(r)} gives {stepped}")
        return check

    def small_orders(ctx, rng):
        tau, delta = skew.tau, skew.delta
        for r in _population(ring, rng, 64):
            expected = {
                (1, 0): delta(r),
                (1, 1): tau(r),
                (2, 0): delta(delta(r)),
                (2, 1): ring.add(tau(delta(r)), delta(tau(r))),
                (2, 2): tau(tau(r)),
            }
            for (i, k), value in expected.items():
                if theta(skew, i, k, r) != value:
                    raise CaseFailed(f"theta({i},{k})({ring.render(r)}) = {ring.render(theta(skew, i, k, r))}, "
                                     f"expected {ring.render(value)}")
            if theta(skew, 2, 3, r) != ring.zero or theta(skew, 2, -1, r) != ring.zero:
                raise CaseFailed(f"theta outside 0..i is nonzero at {ring.render(r)}")

    def random_poly(rng: random.Random) -> SkewPoly:
        return SkewPoly(skew, [ring.random_element(rng) for _ in range(rng.randint(1, 4))])

    def associativity(ctx, rng):
        for _ in range(50):
            f, g, h = random_poly(rng), random_poly(rng), random_poly(rng)
            if spoly_mul(spoly_mul(f, g), h) != spoly_mul(f, spoly_mul(g, h)):
                raise CaseFailed(f"f={f}, g={g}, h={h}")
        return "50 sampled triples"

    def round_trip(ctx, rng):
        for _ in range(100):
            f = random_poly(rng)
            right = convert_side(f, Direction.LEFT_TO_RIGHT)
            if convert_side(right, Direction.RIGHT_TO_LEFT) != f:
                raise CaseFailed(f"{f} -> {right} does not convert back")

    cases: List[Case] = [("associativity", associativity), ("side-round-trip", round_trip),
                         ("small-orders", small_orders)]
    for i in range(6):
        cases.append((f"filtration/i{i}", filtration(i)))
        cases.append((f"expansion/i{i}", expansion(i)))
    return cases


# -- j-adic filtration -----------------------------------------------------

@suite("jt-lemma")
def jt_lemma_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer

    def power(ell: int) -> Check:
        def check(ctx, rng):
            ideal_power = layer.ideal_power(ell)
            described = jt_filtration_set(layer, ell)
            if ideal_power != described:
                raise CaseFailed(_first_difference(layer, ideal_power, described))
            return f"{len(ideal_power)} elements"
        return check

    def valuation(ctx, rng):
        for f in layer.elements():
            if j_valuation(f) != layer.valuation(f):
                raise CaseFailed(f"{layer.render(f)}: coefficient rule {j_valuation(f)}, "
                                 f"ideal powers {layer.valuation(f)}")

    def separated(ctx, rng):
        if layer.ideal_power(layer.N) != frozenset({layer.zero}):
            raise CaseFailed(f"j^{layer.N} is not zero")

    cases = [("separated", separated), ("valuation", valuation)]
    cases += [(f"power/l{ell}", power(ell)) for ell in range(1, min(3, layer.N) + 1)]
    return cases


@suite("graded")
def graded_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    base, skew = layer.base, layer.skew

    def valuation_laws(ctx, rng):
        for f, g in _pairs(layer, rng, 100):
            vf, vg = layer.valuation(f), layer.valuation(g)
            if layer.valuation(layer.add(f, g)) < min(vf, vg):
                raise CaseFailed(f"v(f+g) < min(v(f), v(g)) at f={layer.render(f)}, g={layer.render(g)}")
            if layer.valuation(layer.mul(f, g)) < vf + vg:
                raise CaseFailed(f"v(fg) < v(f)+v(g) at f={layer.render(f)}, g={layer.render(g)}")

    def expected_form(value: Element, degree: float) -> GradedElement:
        if degree == INFINITY or layer.in_ideal_power(value, degree + 1):
            return GradedElement(INFINITY, layer.zero)
        return GradedElement(degree, layer.reduce(value, degree + 1))

    def leading_forms(ctx, rng):
        for f, g in _pairs(layer, rng, 100):
            lf, lg = layer.leading_form(f), layer.leading_form(g)
            product = layer.graded_product(lf, lg)
            degree = INFINITY if lf.is_zero or lg.is_zero else lf.degree + lg.degree
            if product != expected_form(layer.mul(f, g), degree):
                raise CaseFailed(f"gr(f)gr(g) differs from the class of fg at "
                                 f"f={layer.render(f)}, g={layer.render(g)}")

    def monomials() -> List[Tuple[Element, int, TruncSeries]]:
        found = []
        for s in range(layer.N):
            for a in base.residues(layer.N - s):
                term = layer.monomial(a, s)
                if term != layer.zero:
                    found.append((a, s, term))
        return found

    def skew_rule_applies() -> bool:
        for v in range(base.precision_cap):
            if any(not base.in_ideal_power(skew.delta(a), v + 2) for a in base.ideal_power_span(v).spanning):
                return False
        return True

    def skew_rule(ctx, rng):
        base.require_enumerable()
        layer.require_enumerable()
        if not skew_rule_applies():
            raise CaseSkipped("delta does not raise filtration degree by two; gr y does not commute "
                              "past gr R by tau alone")
        for (a, s, f), (b, t, g) in itertools.product(monomials(), repeat=2):
            lf, lg = layer.leading_form(f), layer.leading_form(g)
            if lf.is_zero or lg.is_zero:
                continue
            expected = layer.monomial(base.mul(a, skew.tau_power(b, s)), s + t)
            if layer.graded_product(lf, lg) != expected_form(expected, lf.degree + lg.degree):
                raise CaseFailed(f"gr({layer.render(f)}) gr({layer.render(g)}) is not "
                                 f"gr({layer.render(expected)})")

    return [("leading-forms", leading_forms), ("skew-rule", skew_rule), ("valuation-laws", valuation_laws)]


# -- series inverses, conjugation, sides and limits ----------------------

@suite("neumann")
def neumann_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer

    def geometric(N: int) -> Check:
        def check(ctx, rng):
            algebra = SeriesRing(layer.base, layer.skew, N, layer.variable)
            z = algebra.add(algebra.one, algebra.y)
            inverse = invert_one_plus(algebra.y)
            if algebra.mul(z, inverse) != algebra.one or algebra.mul(inverse, z) != algebra.one:
                raise CaseFailed(f"(1+{layer.variable}) * {algebra.render(inverse)} is not 1")
            alternating = algebra.series([algebra.base.from_int((-1) ** k) for k in range(N)])
            if inverse != alternating:
                raise CaseFailed(f"inverse {algebra.render(inverse)} differs from {algebra.render(alternating)}")
        return check

    def random_elements(ctx, rng):
        for _ in range(20):
            g = layer.mul(layer.y, layer.random_element(rng))
            inverse = invert_one_plus(g)
            one_plus = layer.add(layer.one, g)
            if layer.mul(one_plus, inverse) != layer.one or layer.mul(inverse, one_plus) != layer.one:
                raise CaseFailed(f"g={layer.render(g)}")

    def outside_j(ctx, rng):
        try:
            invert_one_plus(layer.one)
        except NotInvertibleError:
            return None
        raise CaseFailed("1 + 1 was inverted by the Neumann series")

    cases = [(f"geometric/N{N}", geometric(N)) for N in range(2, 9)]
    return cases + [("outside-j", outside_j), ("random", random_elements)]


@suite("z-conjugation")
def z_conjugation_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    if not _has_tau_minus_id(layer.skew):
        return _inapplicable("delta is not tau - id on this layer")
    base, skew = layer.base, layer.skew

    def constants(ctx, rng):
        for r in _population(layer.constant_ring, rng, 64):
            image = conjugate_by_z(layer.constant(r))
            if image != layer.constant(skew.tau(r)):
                raise CaseFailed(f"z {base.render(r)} z^-1 = {layer.render(image)}")

    def variable(ctx, rng):
        image = conjugate_by_z(layer.y)
        if image != layer.y:
            raise CaseFailed(f"z {layer.variable} z^-1 = {layer.render(image)}")

    def multiplicative(ctx, rng):
        for _ in range(256):
            f, g = layer.random_element(rng), layer.random_element(rng)
            if conjugate_by_z(layer.mul(f, g)) != layer.mul(conjugate_by_z(f), conjugate_by_z(g)):
                raise CaseFailed(f"f={layer.render(f)}, g={layer.render(g)}")
        return "256 sampled pairs"

    def bijective(ctx, rng):
        elements = layer.elements()
        if len({conjugate_by_z(f) for f in elements}) != len(elements):
            raise CaseFailed("conjugation by z is not injective")

    def ideals_fixed(ctx, rng):
        for ideal in all_ideals(layer):
            if image_ideal(ideal, conjugate_by_z) != ideal:
                raise CaseFailed(f"z {ideal.describe()} z^-1 is another ideal")

    return [("bijective", bijective), ("constants", constants), ("ideals-fixed", ideals_fixed),
            ("multiplicative", multiplicative), ("variable", variable)]


@suite("side-conversion")
def side_conversion_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer

    def to_right(f: TruncSeries) -> TruncSeries:
        return convert_side_series(f, Direction.LEFT_TO_RIGHT)

    def round_trip(ctx, rng):
        for _ in range(200):
            f = layer.random_element(rng)
            if convert_side_series(to_right(f), Direction.RIGHT_TO_LEFT) != f:
                raise CaseFailed(f"{layer.render(f)} does not survive left -> right -> left")
        return "200 sampled series"

    def ring_map(ctx, rng):
        for _ in range(100):
            f, g = layer.random_element(rng), layer.random_element(rng)
            native = right_form_product(to_right(f), to_right(g))
            if native != to_right(layer.mul(f, g)):
                raise CaseFailed(f"right forms of f={layer.render(f)}, g={layer.render(g)} multiply differently")
        return "100 sampled pairs"

    return [("ring-map", ring_map), ("round-trip", round_trip)]


@suite("limits")
def limits_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    base, N = layer.base, layer.N

    def geometric(ctx, rng):
        partial, sums = layer.zero, []
        for m in range(N + 2):
            partial = layer.add(partial, layer.monomial(base.one, m))
            sums.append(partial)
        expected = layer.series([base.one] * N)
        if limit_of_sequence(sums) != expected:
            raise CaseFailed(f"sum of y^m converges to {layer.render(limit_of_sequence(sums))}")

    def constant(ctx, rng):
        f = layer.random_element(rng)
        if limit_of_sequence([f] * 5) != f:
            raise CaseFailed(f"constant sequence at {layer.render(f)}")

    def drift(ctx, rng):
        g = next((a for a in base.ideal_generators if a != base.zero), base.zero)
        r = base.random_element(rng)
        sequence = [layer.add(layer.monomial(base.one, s), layer.constant(base.mul(r, base.pow(g, s))))
                    for s in range(N + 2)]
        if limit_of_sequence(sequence) != layer.zero:
            raise CaseFailed(f"drifting sequence converges to {layer.render(limit_of_sequence(sequence))}")

    def non_cauchy(ctx, rng):
        try:
            limit_of_sequence([layer.zero, layer.one, layer.zero, layer.one])
        except ConvergenceError as exc:
            return f"rejected at index {exc.index}"
        raise CaseFailed("an oscillating sequence was given a limit")

    return [("constant", constant), ("drift", drift), ("geometric", geometric), ("non-cauchy", non_cauchy)]


# -- ideal theory ----------------------------------------------------------

@suite("orbit-decomposition")
def orbit_decomposition_suite(ctx: SuiteContext) -> List[Case]:
    if ctx.tower.alpha is not None:
        ring, alpha = ctx.tower.base, ctx.tower.alpha
    else:
        ring, skew = ctx.coefficients()
        alpha = skew.tau

    def examine(P) -> Check:
        def check(ctx, rng):
            by_elements = is_alpha_prime(P, alpha)
            if by_elements != is_alpha_prime_by_ideals(P, alpha):
                raise CaseFailed(f"element and ideal criteria disagree on {P.describe()}")
            prime = is_prime(P)
            if prime and not by_elements:
                raise CaseFailed(f"{P.describe()} is prime but not alpha-prime")
            if not by_elements:
                return "not alpha-prime"
            orbit = tau_orbit_decomposition(P, alpha)
            kind = "prime" if prime else "not prime"
            return f"alpha-prime, {kind}, orbit of {len(orbit)} primes: " + ", ".join(Q.describe() for Q in orbit)
        return check

    return [(f"ideal/{P.describe()}", examine(P)) for P in alpha_ideals(ring, alpha) if P.is_proper]


@suite("tau-delta-equivalence")
def tau_delta_equivalence_suite(ctx: SuiteContext) -> List[Case]:
    ring, skew = ctx.coefficients()

    def stability(ctx, rng):
        if not _has_tau_minus_id(skew):
            raise CaseSkipped("delta is not tau - id")
        for ideal in all_ideals(ring):
            tau_stable = is_alpha_stable(ideal, skew.tau)
            delta_stable = is_alpha_stable(ideal, skew.delta)
            if not tau_stable == delta_stable == is_tau_delta_stable(ideal, skew):
                raise CaseFailed(f"{ideal.describe()}: tau-stable {tau_stable}, delta-stable {delta_stable}")

    def primes(ctx, rng):
        count = 0
        for ideal in tau_delta_ideals(ring, skew):
            if ideal.is_proper and is_alpha_prime(ideal, skew.tau):
                count += 1
                if not is_tau_delta_prime(ideal, skew):
                    raise CaseFailed(f"{ideal.describe()} is tau-prime and delta-stable but not tau-delta-prime")
        return f"{count} delta-stable tau-primes"

    return [("primes", primes), ("stability", stability)]


@suite("induced-ideals")
def induced_ideals_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer

    def examine(Q) -> Check:
        def check(ctx, rng):
            induced = induced_ideal_truncated(Q, layer)
            contraction = contract(induced, check_stability=False)
            if contraction != Q:
                raise CaseFailed(f"contraction of the induced ideal is {contraction.describe()}")
            return f"{len(induced)} elements"
        return check

    ideals = tau_delta_ideals(layer.constant_ring, layer.constant_skew)
    return [(f"ideal/{Q.describe()}", examine(Q)) for Q in ideals]


def _requires_q(ctx: SuiteContext) -> Optional[List[Case]]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    if ctx.layer.skew.q is None:
        return _inapplicable("the layer carries no q, so tau does not extend to the series ring")
    return None


@suite("contraction")
def contraction_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _requires_q(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    constants, skew = layer.constant_ring, layer.constant_skew
    alpha = extended_tau(layer)

    def examine(I) -> Check:
        def check(ctx, rng):
            contraction = contract(I)
            if I.is_proper and is_alpha_prime(I, alpha):
                if not is_tau_delta_prime(contraction, skew):
                    raise CaseFailed(f"tau-prime {I.describe()} contracts to {contraction.describe()}, "
                                     f"which is not tau-delta-prime")
                return f"tau-prime over {contraction.describe()}"
            return f"contracts to {contraction.describe()}"
        return check

    def variable_ideal(ctx, rng):
        contraction = contract(ideal_generate(layer, [layer.y]), check_stability=False)
        if not is_tau_delta_stable(contraction, skew):
            raise CaseFailed(f"contraction {contraction.describe()} of <{layer.variable}> is not tau-delta-stable")
        for r in constants.elements():
            if skew.delta(r) not in contraction:
                raise CaseFailed(f"delta({constants.render(r)}) is missing from {contraction.describe()}")
        return contraction.describe()

    def whole_ring(ctx, rng):
        if contract(unit_ideal(layer)) != unit_ideal(constants):
            raise CaseFailed("the unit ideal does not contract to the unit ideal")

    cases = [(f"tau-ideal/{I.describe()}", examine(I)) for I in tau_ideals(layer)]
    return cases + [("variable-ideal", variable_ideal), ("whole-ring", whole_ring)]


@suite("cutting-down")
def cutting_down_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _require_layer(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    tau_minus_id = _has_tau_minus_id(layer.skew)
    tau = layer.constant_skew.tau

    def examine(P) -> Check:
        def check(ctx, rng):
            orbit = cutting_down_orbit(P)
            note = f"segment of {len(orbit)}: " + ", ".join(Q.describe() for Q in orbit)
            if tau_minus_id:
                contraction = contract(P, check_stability=False)
                if not is_alpha_prime(contraction, tau):
                    raise CaseFailed(f"contraction {contraction.describe()} is not tau-prime")
                if set(tau_orbit(orbit[0], tau)) != set(orbit):
                    raise CaseFailed(f"minimal primes over {contraction.describe()} are not a full tau-orbit")
                if intersect_all(orbit) != contraction:
                    raise CaseFailed(f"the orbit does not intersect to {contraction.describe()}")
            return note
        return check

    return [(f"prime/{P.describe()}", examine(P)) for P in prime_ideals(layer)]


@suite("lying-over")
def lying_over_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _requires_q(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    skew = layer.constant_skew

    def examine(Q) -> Check:
        def check(ctx, rng):
            over = lying_over(Q, layer)
            return f"{len(over)} maximal tau-ideals: " + ", ".join(J.describe() for J in over)
        return check

    primes = [Q for Q in tau_delta_ideals(layer.constant_ring, skew) if is_tau_delta_prime(Q, skew)]
    return [(f"prime/{Q.describe()}", examine(Q)) for Q in primes]


@suite("closing-question")
def closing_question_suite(ctx: SuiteContext) -> List[Case]:
    skipped = _requires_q(ctx)
    if skipped:
        return skipped
    layer = ctx.layer
    skew = layer.constant_skew
    alpha = extended_tau(layer)

    def observe(Q) -> Check:
        def check(ctx, rng):
            induced = induced_ideal_truncated(Q, layer)
            answer = induced.is_proper and is_alpha_prime(induced, alpha)
            return f"QT is {'' if answer else 'not '}tau-prime"
        return check

    primes = [Q for Q in tau_delta_ideals(layer.constant_ring, skew) if is_tau_delta_prime(Q, skew)]
    return [(f"prime/{Q.describe()}", observe(Q)) for Q in primes]


# -- quantum instances -----------------------------------------------------

@suite("quantum-relations")
def quantum_relations_suite(ctx: SuiteContext) -> List[Case]:
    tower = ctx.tower
    family = ctx.config.base.family
    if family == RingFamily.QUANTUM_PLANE:
        q = ctx.config.base.q

        def plane(ctx, rng):
            top = tower.top
            x, y = tower.lift(tower.levels[0].y, 0), tower.lift(tower.levels[1].y, 1)
            residual = top.sub(top.mul(y, x), top.mul(top.from_int(q), top.mul(x, y)))
            if residual != top.zero:
                raise CaseFailed(f"y*x - {q}*x*y = {top.render(residual)}")
        return [("plane", plane)]

    report = tower.relation_report
    if family != RingFamily.QUANTUM_MATRICES or report is None:
        return _inapplicable("the base is not a quantum instance")

    def relation(item) -> Check:
        def check(ctx, rng):
            if not item.holds:
                raise CaseFailed(f"residual {item.residual}")
        return check

    def printed(item) -> Check:
        def check(ctx, rng):
            return f"as-printed residual {item.residual}"
        return check

    cases = [(f"relation/{item.relation}", relation(item)) for item in report.relations]
    return cases + [(f"as-printed/{item.relation}", printed(item)) for item in report.printed_form_residuals]


# -- running ---------------------------------------------------------------

def _run_case(ctx: SuiteContext, name: str, case: Case) -> CaseRecord:
    case_id, check = case
    rng = random.Random(f"{ctx.seed}:{name}:{case_id}")
    status, witness, note = CaseStatus.PASS, None, None
    start = time.perf_counter_ns()
    try:
        note = check(ctx, rng)
    except CaseFailed as exc:
        status, witness = CaseStatus.FAIL, exc.witness
    except (CaseSkipped, BudgetExceededError) as exc:
        status, note = CaseStatus.SKIPPED, str(exc)
    except SkewLabError as exc:
        status, witness = CaseStatus.FAIL, str(exc)
    micros = (time.perf_counter_ns() - start) // 1000
    return CaseRecord(suite=name, case=case_id, status=status, witness=witness, note=note, micros=micros)


def run_suite(config: RingTowerConfig, name: str, seed: Optional[int] = None,
              budget: Optional[int] = None) -> SuiteReport:
    """Run one suite against the tower described by config."""
    if name not in _REGISTRY:
        raise UnknownSuiteError(f"unknown suite {name!r}; known suites: {', '.join(_REGISTRY)}")
    seed = next(value for value in (seed, config.budget.seed, get_settings().seed) if value is not None)
    enumeration = budget if budget is not None else config.budget.enumeration
    with budget_scope(enumeration, config.budget.samples, seed) as settings:
        tower = build_tower(config)
        ctx = SuiteContext(config=config, tower=tower, seed=seed, settings=settings)
        try:
            cases = _REGISTRY[name](ctx)
        except BudgetExceededError as exc:
            cases = _inapplicable(str(exc))
        # each case runs in a copy of this context so it sees the run settings
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            futures = [pool.submit(contextvars.copy_context().run, _run_case, ctx, name, case) for case in cases]
            records = [future.result() for future in futures]
    records.sort(key=lambda record: record.case)
    report = SuiteReport(suite=name, seed=seed, records=records)
    logger.info("suite %s: %d passed, %d failed, %d skipped", name, report.passed, report.failed, report.skipped)
    return report


def run_suites(config: RingTowerConfig, names: Optional[List[str]] = None, seed: Optional[int] = None,
               budget: Optional[int] = None) -> List[SuiteReport]:
    """The suites named by the caller, else those of the config, else all of them."""
    names = names or config.suites or list_suites()
    unknown = [name for name in names if name not in _REGISTRY]
    if unknown:
        raise UnknownSuiteError(f"unknown suite {unknown[0]!r}")
    return [run_suite(config, name, seed=seed, budget=budget) for name in names]
