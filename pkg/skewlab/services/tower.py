"""Build ring towers from parsed configurations."""

import hashlib
import logging
from typing import Callable, ContextManager, Optional, Tuple

from pydantic import ValidationError

from skewlab.config import Settings, get_settings, run_settings
from skewlab.exceptions import ConfigError, ExpressionError, NotInvertibleError, SkewDataError, UsageError
from skewlab.models import RingFamily
from skewlab.schemas import LayerSpec, QuantumMatrixSpec, RingTowerConfig
from skewlab.services import examples
from skewlab.services.examples import RingTower
from skewlab.services.expressions import evaluate, render_result
from skewlab.services.filtered_ring import (
    Element,
    FilteredRing,
    ProductFieldRing,
    SkewData,
    TruncPolyRing,
    validate_skew_data,
)
from skewlab.services.skew_series import SeriesRing, scale_variable

logger = logging.getLogger(__name__)


def config_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def budget_scope(enumeration: Optional[int] = None, samples: Optional[int] = None,
                 seed: Optional[int] = None) -> ContextManager[Settings]:
    """Budget overrides for one run, visible only to the calling context."""
    return run_settings(enumeration_budget=enumeration, validation_samples=samples, seed=seed)


def _build_base(config: RingTowerConfig) -> RingTower:
    base = config.base
    family = base.family
    if family == RingFamily.ZMOD:
        ring, skew = examples.build_zmod(base.prime, base.exponent)
        return RingTower(base=ring, base_skew=skew)
    if family == RingFamily.TRUNCPOLY:
        ring = TruncPolyRing(base.prime, base.length, base.var)
        return RingTower(base=ring, base_skew=SkewData.identity(ring))
    if family == RingFamily.FIELD:
        ring, skew = examples.build_field(base.prime)
        return RingTower(base=ring, base_skew=skew)
    if family == RingFamily.PRODUCT:
        ring, alpha = examples.build_swap_product(base.prime, base.copies)
        return RingTower(base=ring, base_skew=examples.product_skew(ring), alpha=alpha)
    if family == RingFamily.QUANTUM_PLANE:
        return examples.build_quantum_plane(base.prime, base.q, base.precision)
    upper = {(int(key[0]), int(key[1])): value for key, value in base.p_upper.items()}
    try:
        matrix_spec = QuantumMatrixSpec.from_upper(base.n, base.lam, upper, base.prime, base.precision,
                                                   base.relation_form)
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"quantum matrix parameters: {exc}", base.line) from None
    return examples.build_quantum_matrices(matrix_spec)


def _layer_tau(ring: FilteredRing, layer: LayerSpec) -> Tuple[Callable, Callable]:
    head, _, rest = layer.tau.partition(" ")
    rest = rest.strip()
    if layer.tau == "id":
        return (lambda a: a), (lambda a: a)
    if layer.tau == "cycle":
        if not isinstance(ring, ProductFieldRing):
            raise ConfigError("tau = cycle needs a product base", layer.line)
        return ring.cycle, ring.cycle_inverse
    if head == "map":
        if not isinstance(ring, TruncPolyRing):
            raise ConfigError("tau = map needs a truncpoly ring directly below the layer", layer.line)
        t = _evaluate_in(ring, rest, layer.line)
        try:
            s = ring.compositional_inverse(t)
        except NotInvertibleError as exc:
            raise ConfigError(f"tau({ring.variable}) = {ring.render(t)} is not an automorphism: {exc}",
                              layer.line) from None
        return (lambda a: ring.compose(a, t)), (lambda a: ring.compose(a, s))
    if not isinstance(ring, SeriesRing):
        raise ConfigError("tau = scale needs a series ring directly below the layer", layer.line)
    scalar = ring.base.from_int(int(rest))
    try:
        inverse = ring.base.inverse(scalar)
    except NotInvertibleError:
        raise ConfigError(f"scale factor {rest} is not a unit", layer.line) from None
    return (lambda f: scale_variable(f, scalar)), (lambda f: scale_variable(f, inverse))


def _evaluate_in(ring: FilteredRing, text: str, line: int) -> Element:
    try:
        return evaluate(ring, text)
    except ExpressionError as exc:
        raise ConfigError(str(exc), line) from None


def _layer_skew(ring: FilteredRing, layer: LayerSpec) -> SkewData:
    tau, tau_inverse = _layer_tau(ring, layer)
    label = f"{layer.var}: tau={layer.tau}, delta={layer.delta}"
    q = ring.from_int(layer.q)
    if layer.delta == "zero":
        return SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=lambda a: ring.zero, q=q, label=label)
    if layer.delta == "tau-minus-id":
        return SkewData(ring, tau=tau, tau_inverse=tau_inverse, delta=lambda a: ring.sub(tau(a), a),
                        q=q, label=label, delta_is_tau_minus_id=True)
    if not isinstance(ring, TruncPolyRing):
        raise ConfigError("delta = leibniz needs a truncpoly ring directly below the layer", layer.line)
    image = _evaluate_in(ring, layer.delta.partition(" ")[2].strip(), layer.line)
    return SkewData(ring, tau=tau, tau_inverse=tau_inverse,
                    delta=examples.leibniz_from_generator(ring, tau, image), q=None, label=label)


def build_tower(config: RingTowerConfig) -> RingTower:
    """The base ring of the config with every layer validated and stacked on top."""
    try:
        tower = _build_base(config)
    except (UsageError, SkewDataError) as exc:
        raise ConfigError(str(exc), config.base.line) from None
    samples = config.budget.samples or get_settings().tower_samples
    for layer in config.layers:
        ring = tower.top
        if layer.var in ring.generators():
            raise ConfigError(f"variable {layer.var!r} is already in use", layer.line)
        skew = _layer_skew(ring, layer)
        report = validate_skew_data(ring, skew, samples=samples)
        if not report.ok:
            failed = ", ".join(f"{check.law} ({check.witness})" for check in report.failures())
            raise ConfigError(f"skew data of layer {layer.var} is invalid: {failed}", layer.line)
        tower.reports.append(report)
        try:
            tower.levels.append(SeriesRing(ring, skew, layer.precision, layer.var))
        except UsageError as exc:
            raise ConfigError(str(exc), layer.line) from None
    logger.info("built tower %s", tower.top.name)
    return tower


def eval_expression(config: RingTowerConfig, expression: str) -> str:
    """Evaluate an expression in the top ring of the tower and render it canonically."""
    with budget_scope(config.budget.enumeration, config.budget.samples, config.budget.seed):
        tower = build_tower(config)
        top = tower.top
        return render_result(top, evaluate(top, expression))
