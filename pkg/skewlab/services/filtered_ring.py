"""Filtered coefficient rings: a ring R with a distinguished proper ideal i.

Every concrete ring keeps its elements in a canonical form (least nonnegative
residues, coefficient tuples) so that equality of classes is equality of
Python values. Membership in i^l is decided from the additive span of
products of ideal generators whenever the ring is small enough to enumerate,
and from the canonical reduction map otherwise.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from skewlab.config import get_settings
from skewlab.exceptions import NotInvertibleError, SkewDataError, UsageError, BudgetExceededError
from skewlab.models import Side
from skewlab.schemas import LawCheck, ValidationReport

logger = logging.getLogger(__name__)

INFINITY = math.inf

Element = Any


@dataclass(frozen=True)
class Span:
    """An additive subgroup together with a spanning set that generates it."""
    elements: frozenset
    spanning: tuple


@dataclass(frozen=True)
class GradedElement:
    """Leading form gr(a): the degree and the class of a in i^d / i^(d+1)."""
    degree: float
    residue: Element

    @property
    def is_zero(self) -> bool:
        return self.degree == INFINITY


def render_terms(pieces: Sequence[Tuple[int, str]], var: str, side: Side = Side.LEFT) -> str:
    """Join rendered coefficients into "a0 + a1*y + a2*y^2" (or "y*b1" for right forms)."""
    terms = []
    for k, text in pieces:
        if k == 0:
            terms.append(text)
            continue
        monomial = var if k == 1 else f"{var}^{k}"
        if text == "1":
            terms.append(monomial)
            continue
        coefficient = text if " + " not in text else f"({text})"
        terms.append(f"{coefficient}*{monomial}" if side == Side.LEFT else f"{monomial}*{coefficient}")
    return " + ".join(terms) if terms else "0"


class FilteredRing(ABC):
    """Abstract contract for a coefficient ring with its i-adic filtration."""

    name: str = "R"
    precision_cap: int = 1
    is_finite: bool = True
    variable: Optional[str] = None

    def __init__(self):
        settings = get_settings()
        self._mul_cached = lru_cache(maxsize=settings.mul_cache_size)(self._multiply)
        self._power_spans = lru_cache(maxsize=None)(self._compute_power_span)
        self._quotients = lru_cache(maxsize=None)(self._make_quotient)

    # -- arithmetic -------------------------------------------------------

    @property
    @abstractmethod
    def zero(self) -> Element: ...

    @property
    @abstractmethod
    def one(self) -> Element: ...

    @abstractmethod
    def add(self, a: Element, b: Element) -> Element: ...

    @abstractmethod
    def neg(self, a: Element) -> Element: ...

    @abstractmethod
    def _multiply(self, a: Element, b: Element) -> Element: ...

    def mul(self, a: Element, b: Element) -> Element:
        return self._mul_cached(a, b)

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def from_int(self, n: int) -> Element:
        result = self.zero
        base = self.one if n >= 0 else self.neg(self.one)
        n = abs(n)
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def pow(self, a: Element, exponent: int) -> Element:
        if exponent < 0:
            return self.pow(self.inverse(a), -exponent)
        result, base = self.one, a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    # -- filtration -------------------------------------------------------

    @property
    @abstractmethod
    def ideal_generators(self) -> tuple: ...

    @abstractmethod
    def reduce(self, a: Element, ell: int) -> Element:
        """Canonical representative of a modulo i^ell."""

    @abstractmethod
    def residue_count(self, ell: int) -> int:
        """Number of classes of R / i^ell."""

    @abstractmethod
    def residues(self, ell: int) -> List[Element]:
        """Canonical representatives of R / i^ell."""

    @abstractmethod
    def additive_generators(self) -> tuple:
        """Elements generating R as an additive group."""

    @abstractmethod
    def ideal_additive_generators(self) -> tuple:
        """Elements generating i as an additive group."""

    @abstractmethod
    def random_element(self, rng: random.Random) -> Element: ...

    @abstractmethod
    def inverse(self, a: Element) -> Element: ...

    @abstractmethod
    def render(self, a: Element) -> str: ...

    @abstractmethod
    def is_element(self, a: Element) -> bool: ...

    def sort_key(self, a: Element) -> Any:
        return a

    def generators(self) -> Dict[str, Element]:
        """Named ring generators understood by the expression evaluator."""
        return {}

    @property
    def is_discrete(self) -> bool:
        return all(g == self.zero for g in self.ideal_generators)

    def size(self) -> int:
        return self.residue_count(self.precision_cap)

    def elements(self) -> List[Element]:
        self.require_enumerable()
        return self.residues(self.precision_cap)

    def enumerable(self, budget: Optional[int] = None) -> bool:
        budget = get_settings().enumeration_budget if budget is None else budget
        return self.is_finite and self.size() <= budget

    def require_enumerable(self, budget: Optional[int] = None) -> None:
        if not self.enumerable(budget):
            raise BudgetExceededError(f"{self.name} has {self.size()} elements, beyond the enumeration budget")

    @cached_property
    def _span_membership(self) -> bool:
        return self.enumerable()

    def is_unit(self, a: Element) -> bool:
        try:
            self.inverse(a)
        except NotInvertibleError:
            return False
        return True

    def quotient(self, level: int) -> "FilteredRing":
        """R / i^level, or R itself when i^level is already zero."""
        if level >= self.precision_cap or self.is_discrete:
            return self
        return self._quotients(level)

    def _make_quotient(self, level: int) -> "FilteredRing":
        return QuotientRing(self, level)

    # -- spans and ideal powers ------------------------------------------

    def span_insert(self, elements: set, v: Element) -> set:
        """Additive span of a subgroup `elements` and one more vector."""
        if v in elements:
            return elements
        base = list(elements)
        grown = set(elements)
        shift = v
        while shift not in elements:
            grown.update(self.add(s, shift) for s in base)
            shift = self.add(shift, v)
        return grown

    def additive_span(self, vectors: Iterable[Element]) -> Span:
        elements = {self.zero}
        spanning = []
        for v in vectors:
            if v not in elements:
                elements = self.span_insert(elements, v)
                spanning.append(v)
        return Span(frozenset(elements), tuple(spanning))

    def closure(self, generators: Iterable[Element], left: bool = True, right: bool = True) -> Span:
        """Smallest additive subgroup containing generators and closed under the chosen multiplications."""
        basis = self.additive_generators()
        elements = {self.zero}
        spanning = []
        queue = deque(generators)
        while queue:
            v = queue.popleft()
            if v in elements:
                continue
            elements = self.span_insert(elements, v)
            spanning.append(v)
            for b in basis:
                if left:
                    queue.append(self.mul(b, v))
                if right:
                    queue.append(self.mul(v, b))
        logger.debug("closure in %s: %d elements from %d spanning vectors", self.name, len(elements), len(spanning))
        return Span(frozenset(elements), tuple(spanning))

    def _compute_power_span(self, ell: int) -> Span:
        if ell <= 0:
            return self.additive_span(self.additive_generators())
        if ell == 1:
            return self.closure(self.ideal_generators)
        previous = self._power_spans(ell - 1)
        first = self._power_spans(1)
        return self.additive_span(self.mul(u, v) for u in previous.spanning for v in first.spanning)

    def ideal_power_span(self, ell: int) -> Span:
        self.require_enumerable()
        return self._power_spans(max(ell, 0))

    def ideal_power(self, ell: int) -> frozenset:
        """The elements of i^ell, built from products of the ideal generators."""
        return self.ideal_power_span(ell).elements

    def in_ideal_power(self, a: Element, ell: int) -> bool:
        if ell <= 0:
            return True
        if self._span_membership:
            return a in self._power_spans(ell).elements
        return self.reduce(a, ell) == self.zero

    def valuation(self, a: Element) -> float:
        """Largest l with a in i^l; infinity for zero."""
        if a == self.zero:
            return INFINITY
        ell = 0
        while ell < self.precision_cap and self.in_ideal_power(a, ell + 1):
            ell += 1
        return INFINITY if ell >= self.precision_cap else ell

    def leading_form(self, a: Element) -> GradedElement:
        degree = self.valuation(a)
        if degree == INFINITY:
            return GradedElement(INFINITY, self.zero)
        return GradedElement(degree, self.reduce(a, degree + 1))

    def graded_product(self, g: GradedElement, h: GradedElement) -> GradedElement:
        """Product in gr R; zero when the degree-(d+e) component vanishes."""
        if g.is_zero or h.is_zero:
            return GradedElement(INFINITY, self.zero)
        degree = g.degree + h.degree
        residue = self.reduce(self.mul(g.residue, h.residue), degree + 1)
        if self.in_ideal_power(residue, degree + 1):
            return GradedElement(INFINITY, self.zero)
        return GradedElement(degree, residue)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class ZModRing(FilteredRing):
    """Z/p^m with i = (p)."""

    def __init__(self, p: int, m: int):
        if not sympy.isprime(p):
            raise UsageError(f"{p} is not prime")
        if m < 1:
            raise UsageError("exponent must be positive")
        self.p, self.m = p, m
        self.modulus = p ** m
        self.name = f"Z/{self.modulus}"
        self.precision_cap = m
        super().__init__()

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def _multiply(self, a, b):
        return (a * b) % self.modulus

    def from_int(self, n):
        return n % self.modulus

    @property
    def ideal_generators(self):
        return (self.p % self.modulus,)

    def _level(self, ell: int) -> int:
        return self.p ** min(max(ell, 0), self.m)

    def reduce(self, a, ell):
        return a % self._level(ell)

    def residue_count(self, ell):
        return self._level(ell)

    def residues(self, ell):
        return list(range(self._level(ell)))

    def additive_generators(self):
        return (1,)

    def ideal_additive_generators(self):
        return (self.p,) if self.m > 1 else ()

    def random_element(self, rng):
        return rng.randrange(self.modulus)

    def inverse(self, a):
        if a % self.p == 0:
            raise NotInvertibleError(f"{a} is not a unit of {self.name}", valuation=self.valuation(a))
        return int(sympy.mod_inverse(a, self.modulus))

    def render(self, a):
        return str(a)

    def is_element(self, a):
        return isinstance(a, int) and 0 <= a < self.modulus


class TruncPolyRing(FilteredRing):
    """F_p[x]/(x^m) with i = (x); elements are coefficient tuples, constant term first."""

    def __init__(self, p: int, m: int, var: str = "x"):
        if not sympy.isprime(p):
            raise UsageError(f"{p} is not prime")
        if m < 1:
            raise UsageError("length must be positive")
        self.p, self.m = p, m
        self.variable = var
        self.name = f"F{p}[{var}]/({var}^{m})"
        self.precision_cap = m
        super().__init__()
        self._zero = (0,) * m
        self._one = (1,) + (0,) * (m - 1)

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    @property
    def x(self):
        return self.monomial(1)

    def monomial(self, k: int, c: int = 1) -> tuple:
        if k >= self.m:
            return self._zero
        coeffs = [0] * self.m
        coeffs[k] = c % self.p
        return tuple(coeffs)

    def from_coefficients(self, coeffs: Sequence[int]) -> tuple:
        padded = list(coeffs[: self.m]) + [0] * max(0, self.m - len(coeffs))
        return tuple(c % self.p for c in padded)

    def add(self, a, b):
        p = self.p
        return tuple((u + v) % p for u, v in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-u) % p for u in a)

    def _multiply(self, a, b):
        m, p = self.m, self.p
        out = [0] * m
        for i, ai in enumerate(a):
            if ai:
                for j in range(m - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return tuple(c % p for c in out)

    def from_int(self, n):
        return self.monomial(0, n)

    def compose(self, f: tuple, t: tuple) -> tuple:
        """f(t(x)), evaluated by Horner's rule."""
        result = self._zero
        for c in reversed(f):
            result = self.add(self.mul(result, t), self.monomial(0, c))
        return result

    def compositional_inverse(self, t: tuple) -> tuple:
        """s with s(t(x)) = x, for t = u1*x + ... with u1 a unit."""
        if t[0] % self.p or (self.m > 1 and t[1] % self.p == 0):
            raise NotInvertibleError(f"{self.render(t)} is not x times a unit")
        if self.m == 1:
            return self._zero
        u1_inv = pow(t[1], -1, self.p)
        s = [0] * self.m
        for k in range(1, self.m):
            partial = self.compose(tuple(s), t)
            target = (1 if k == 1 else 0) - partial[k]
            s[k] = (target * pow(u1_inv, k, self.p)) % self.p
        return tuple(s)

    @property
    def ideal_generators(self):
        return (self.x,)

    def _clamp(self, ell: int) -> int:
        return min(max(ell, 0), self.m)

    def reduce(self, a, ell):
        ell = self._clamp(ell)
        if ell == self.m:
            return a
        return a[:ell] + (0,) * (self.m - ell)

    def residue_count(self, ell):
        return self.p ** self._clamp(ell)

    def residues(self, ell):
        ell = self._clamp(ell)
        padding = (0,) * (self.m - ell)
        return [tuple(reversed(digits)) + padding for digits in itertools.product(range(self.p), repeat=ell)]

    def additive_generators(self):
        return tuple(self.monomial(k) for k in range(self.m))

    def ideal_additive_generators(self):
        return tuple(self.monomial(k) for k in range(1, self.m))

    def random_element(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.m))

    def inverse(self, a):
        p = self.p
        if a[0] % p == 0:
            raise NotInvertibleError(f"{self.render(a)} is not a unit of {self.name}", valuation=self.valuation(a))
        a0_inv = pow(a[0], -1, p)
        b = [a0_inv] + [0] * (self.m - 1)
        for n in range(1, self.m):
            acc = sum(a[k] * b[n - k] for k in range(1, n + 1))
            b[n] = (-a0_inv * acc) % p
        return tuple(b)

    def render(self, a):
        var = self.variable
        pieces = []
        for k, c in enumerate(a):
            if not c:
                continue
            if k == 0:
                pieces.append(str(c))
                continue
            monomial = var if k == 1 else f"{var}^{k}"
            pieces.append(monomial if c == 1 else f"{c}*{monomial}")
        return " + ".join(pieces) if pieces else "0"

    def sort_key(self, a):
        return tuple(reversed(a))

    def is_element(self, a):
        return (isinstance(a, tuple) and len(a) == self.m
                and all(isinstance(c, int) and 0 <= c < self.p for c in a))

    def generators(self):
        return {self.variable: self.x}


class ProductFieldRing(FilteredRing):
    """F_p x ... x F_p (t copies) with i = 0; carries the coordinate-cycling automorphism."""

    def __init__(self, p: int, t: int):
        if not sympy.isprime(p):
            raise UsageError(f"{p} is not prime")
        if t < 1:
            raise UsageError("need at least one copy")
        self.p, self.t = p, t
        self.name = " x ".join([f"F{p}"] * t)
        self.precision_cap = 1
        super().__init__()
        self._zero = (0,) * t
        self._one = (1,) * t

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def idempotent(self, index: int) -> tuple:
        return tuple(1 if j == index else 0 for j in range(self.t))

    def add(self, a, b):
        return tuple((u + v) % self.p for u, v in zip(a, b))

    def neg(self, a):
        return tuple((-u) % self.p for u in a)

    def _multiply(self, a, b):
        return tuple((u * v) % self.p for u, v in zip(a, b))

    def from_int(self, n):
        return (n % self.p,) * self.t

    def cycle(self, a: tuple) -> tuple:
        return (a[-1],) + a[:-1]

    def cycle_inverse(self, a: tuple) -> tuple:
        return a[1:] + (a[0],)

    @property
    def ideal_generators(self):
        return (self._zero,)

    def reduce(self, a, ell):
        return self._zero if ell <= 0 else a

    def residue_count(self, ell):
        return 1 if ell <= 0 else self.p ** self.t

    def residues(self, ell):
        if ell <= 0:
            return [self._zero]
        return [tuple(reversed(digits)) for digits in itertools.product(range(self.p), repeat=self.t)]

    def additive_generators(self):
        return tuple(self.idempotent(j) for j in range(self.t))

    def ideal_additive_generators(self):
        return ()

    def random_element(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.t))

    def inverse(self, a):
        if any(u % self.p == 0 for u in a):
            raise NotInvertibleError(f"{self.render(a)} has a zero coordinate")
        return tuple(pow(u, -1, self.p) for u in a)

    def render(self, a):
        pieces = []
        for j, u in enumerate(a):
            if u:
                pieces.append(f"e{j + 1}" if u == 1 else f"{u}*e{j + 1}")
        return " + ".join(pieces) if pieces else "0"

    def sort_key(self, a):
        return tuple(reversed(a))

    def is_element(self, a):
        return isinstance(a, tuple) and len(a) == self.t and all(0 <= u < self.p for u in a)

    def generators(self):
        return {f"e{j + 1}": self.idempotent(j) for j in range(self.t)}


class QuotientRing(FilteredRing):
    """R / i^level, with elements kept as canonical representatives from R."""

    def __init__(self, base: FilteredRing, level: int):
        if level < 1:
            raise UsageError("quotient level must be positive")
        self.base = base
        self.level = level
        self.name = f"{base.name}/i^{level}"
        self.precision_cap = min(base.precision_cap, level)
        self.is_finite = base.is_finite
        self.variable = base.variable
        super().__init__()

    def project(self, a: Element) -> Element:
        return self.base.reduce(a, self.level)

    @property
    def zero(self):
        return self.base.zero

    @property
    def one(self):
        return self.project(self.base.one)

    def add(self, a, b):
        return self.project(self.base.add(a, b))

    def neg(self, a):
        return self.project(self.base.neg(a))

    def _multiply(self, a, b):
        return self.project(self.base.mul(a, b))

    def from_int(self, n):
        return self.project(self.base.from_int(n))

    @property
    def ideal_generators(self):
        return tuple(self.project(g) for g in self.base.ideal_generators)

    def reduce(self, a, ell):
        return self.base.reduce(a, min(ell, self.level))

    def residue_count(self, ell):
        return self.base.residue_count(min(ell, self.level))

    def residues(self, ell):
        return self.base.residues(min(ell, self.level))

    def _projected(self, vectors: Iterable[Element]) -> tuple:
        seen = []
        for v in vectors:
            image = self.project(v)
            if image != self.zero and image not in seen:
                seen.append(image)
        return tuple(seen)

    def additive_generators(self):
        return self._projected(self.base.additive_generators())

    def ideal_additive_generators(self):
        return self._projected(self.base.ideal_additive_generators())

    def random_element(self, rng):
        return self.project(self.base.random_element(rng))

    def inverse(self, a):
        return self.project(self.base.inverse(a))

    def render(self, a):
        return self.base.render(a)

    def sort_key(self, a):
        return self.base.sort_key(a)

    def is_element(self, a):
        return self.base.is_element(a) and self.project(a) == a

    def generators(self):
        return {name: self.project(g) for name, g in self.base.generators().items()}


@dataclass(eq=False)
class SkewData:
    """An automorphism tau and a left tau-derivation delta of a filtered ring."""
    ring: FilteredRing
    tau: Callable[[Element], Element]
    tau_inverse: Callable[[Element], Element]
    delta: Callable[[Element], Element]
    q: Optional[Element] = None
    label: str = "skew"
    delta_is_tau_minus_id: bool = False
    def __post_init__(self):
        # rows theta_{i,.}(r) keyed by (i, r), bounded like the product cache
        self.theta_rows = lru_cache(maxsize=get_settings().mul_cache_size)(self._theta_row)

    def _theta_row(self, i: int, r: Element) -> Tuple[Element, ...]:
        if i == 0:
            return (r,)
        ring, previous = self.ring, self.theta_rows(i - 1, r)
        width = len(previous)
        row = []
        for k in range(width + 1):
            term = ring.zero
            if k >= 1:
                term = ring.add(term, self.tau(previous[k - 1]))
            if k < width:
                term = ring.add(term, self.delta(previous[k]))
            row.append(term)
        return tuple(row)

    @classmethod
    def identity(cls, ring: FilteredRing, label: str = "id") -> "SkewData":
        return cls(ring, tau=lambda a: a, tau_inverse=lambda a: a,
                   delta=lambda a: ring.zero, q=ring.one, label=label)

    @cached_property
    def opposite(self) -> "SkewData":
        """Right-coefficient data: tau' = tau^-1 and delta' = -delta tau^-1."""
        ring, delta, tau_inverse = self.ring, self.delta, self.tau_inverse
        return SkewData(ring, tau=self.tau_inverse, tau_inverse=self.tau,
                        delta=lambda r: ring.neg(delta(tau_inverse(r))),
                        q=None, label=f"{self.label}'")

    def reduced(self, quotient: FilteredRing) -> "SkewData":
        """Induced data on R / i^N."""
        if quotient is self.ring:
            return self
        if not isinstance(quotient, QuotientRing) or quotient.base is not self.ring:
            raise UsageError(f"{quotient.name} is not a quotient of {self.ring.name}")
        project, tau, tau_inverse, delta = quotient.project, self.tau, self.tau_inverse, self.delta
        return SkewData(quotient,
                        tau=lambda a: project(tau(a)),
                        tau_inverse=lambda a: project(tau_inverse(a)),
                        delta=lambda a: project(delta(a)),
                        q=None if self.q is None else project(self.q),
                        label=f"{self.label} mod i^{quotient.level}",
                        delta_is_tau_minus_id=self.delta_is_tau_minus_id)

    def tau_power(self, a: Element, n: int) -> Element:
        step = self.tau if n >= 0 else self.tau_inverse
        for _ in range(abs(n)):
            a = step(a)
        return a


class _LawTally:
    """Accumulates one law's pass/fail state and its first witness."""

    def __init__(self, law: str, mode: str):
        self.law = law
        self.mode = mode
        self.checked = 0
        self.witness: Optional[str] = None

    def record(self, ok: bool, witness: Callable[[], str]) -> bool:
        self.checked += 1
        if not ok and self.witness is None:
            self.witness = witness()
        return ok

    @property
    def failed(self) -> bool:
        return self.witness is not None

    def result(self) -> LawCheck:
        return LawCheck(law=self.law, passed=self.witness is None, checked=self.checked,
                        mode=self.mode, witness=self.witness)


def _guarded(ring: FilteredRing, name: str, fn: Callable[[Element], Element]) -> Callable[[Element], Element]:
    def apply(a: Element) -> Element:
        image = fn(a)
        if not ring.is_element(image):
            raise SkewDataError(f"{name}({ring.render(a)}) = {image!r} leaves {ring.name}")
        return image
    return apply


def validate_skew_data(ring: FilteredRing, skew: SkewData, budget: Optional[int] = None,
                       samples: Optional[int] = None, seed: int = 0) -> ValidationReport:
    """Check the automorphism, derivation and filtration laws of skew on ring.

    Exhaustive over all pairs when the ring is finite and |R|^2 fits the pair
    budget. Otherwise the bi-additive laws are certified on all pairs of
    additive generators and additivity itself is sampled.
    """
    settings = get_settings()
    budget = settings.exhaustive_pair_budget if budget is None else budget
    samples = settings.validation_samples if samples is None else samples
    rng = random.Random(seed)

    tau = _guarded(ring, "tau", skew.tau)
    tau_inverse = _guarded(ring, "tau_inverse", skew.tau_inverse)
    delta = _guarded(ring, "delta", skew.delta)
    render = ring.render
    zero = ring.zero

    exhaustive = ring.is_finite and ring.size() ** 2 <= budget and ring.enumerable()
    if exhaustive:
        mode = "exhaustive"
        singles = ring.elements()
        product_pairs = list(itertools.product(singles, singles))
        additive_pairs = product_pairs
        ideal_elements = sorted(ring.ideal_power(1), key=ring.sort_key)
    else:
        mode = "basis"
        sampled = [ring.random_element(rng) for _ in range(samples)]
        basis = list(ring.additive_generators())
        singles = basis + sampled
        product_pairs = list(itertools.product(basis, basis))
        additive_pairs = [(ring.random_element(rng), ring.random_element(rng)) for _ in range(samples)]
        ideal_elements = list(ring.ideal_additive_generators())

    def pair(a, b) -> Callable[[], str]:
        return lambda: f"a={render(a)}, b={render(b)}"

    def single(a) -> Callable[[], str]:
        return lambda: render(a)

    checks: List[_LawTally] = []

    unit = _LawTally("tau-unit", mode)
    unit.record(tau(ring.one) == ring.one, lambda: render(tau(ring.one)))
    checks.append(unit)

    tally = _LawTally("tau-additive", "exhaustive" if exhaustive else "sampled")
    for a, b in additive_pairs:
        if not tally.record(tau(ring.add(a, b)) == ring.add(tau(a), tau(b)), pair(a, b)):
            break
    checks.append(tally)

    tally = _LawTally("tau-multiplicative", mode)
    for a, b in product_pairs:
        if not tally.record(tau(ring.mul(a, b)) == ring.mul(tau(a), tau(b)), pair(a, b)):
            break
    checks.append(tally)

    tally = _LawTally("tau-inverse", mode)
    for a in singles:
        if not tally.record(tau_inverse(tau(a)) == a and tau(tau_inverse(a)) == a, single(a)):
            break
    checks.append(tally)

    tally = _LawTally("delta-additive", "exhaustive" if exhaustive else "sampled")
    for a, b in additive_pairs:
        if not tally.record(delta(ring.add(a, b)) == ring.add(delta(a), delta(b)), pair(a, b)):
            break
    checks.append(tally)

    tally = _LawTally("leibniz", mode)
    for a, b in product_pairs:
        expected = ring.add(ring.mul(tau(a), delta(b)), ring.mul(delta(a), b))
        if not tally.record(delta(ring.mul(a, b)) == expected, pair(a, b)):
            break
    checks.append(tally)

    tally = _LawTally("tau-ideal", mode)
    for a in ideal_elements:
        ok = ring.in_ideal_power(tau(a), 1) and ring.in_ideal_power(tau_inverse(a), 1)
        if not tally.record(ok, single(a)):
            break
    checks.append(tally)

    tally = _LawTally("delta-into-ideal", mode)
    for a in singles:
        if not tally.record(ring.in_ideal_power(delta(a), 1), single(a)):
            break
    checks.append(tally)

    tally = _LawTally("delta-ideal-square", mode)
    for a in ideal_elements:
        if not tally.record(ring.in_ideal_power(delta(a), 2), single(a)):
            break
    checks.append(tally)

    if skew.q is not None:
        q = skew.q
        tally = _LawTally("q-unit", mode)
        tally.record(ring.is_unit(q), single(q))
        checks.append(tally)

        tally = _LawTally("q-invariant", mode)
        tally.record(tau(q) == q and delta(q) == zero, single(q))
        checks.append(tally)

        tally = _LawTally("q-central", mode)
        for a in singles:
            if not tally.record(ring.mul(q, a) == ring.mul(a, q), single(a)):
                break
        checks.append(tally)

        tally = _LawTally("q-commutation", mode)
        for a in singles:
            if not tally.record(delta(tau(a)) == ring.mul(q, tau(delta(a))), single(a)):
                break
        checks.append(tally)

    report = ValidationReport(ring=ring.name, exhaustive=exhaustive, checks=[t.result() for t in checks])
    if not report.ok:
        logger.info("skew data %s on %s fails: %s", skew.label, ring.name,
                    ", ".join(check.law for check in report.failures()))
    return report


def ring_axiom_report(ring: FilteredRing, triple_budget: Optional[int] = None,
                      samples: Optional[int] = None, seed: int = 0) -> ValidationReport:
    """Associativity, distributivity and unit laws; exhaustive when |R|^3 fits the budget."""
    settings = get_settings()
    triple_budget = settings.exhaustive_triple_budget if triple_budget is None else triple_budget
    samples = settings.validation_samples if samples is None else samples
    rng = random.Random(seed)
    render = ring.render

    exhaustive = ring.is_finite and ring.size() ** 3 <= triple_budget and ring.enumerable()
    mode = "exhaustive" if exhaustive else "sampled"
    if exhaustive:
        singles = ring.elements()
        triples: Iterable = itertools.product(singles, singles, singles)
    else:
        singles = [ring.random_element(rng) for _ in range(samples)]
        triples = [(ring.random_element(rng), ring.random_element(rng), ring.random_element(rng))
                   for _ in range(samples)]

    associativity = _LawTally("associativity", mode)
    left = _LawTally("left-distributivity", mode)
    right = _LawTally("right-distributivity", mode)
    mul, add = ring.mul, ring.add
    for a, b, c in triples:
        witness = lambda a=a, b=b, c=c: f"a={render(a)}, b={render(b)}, c={render(c)}"
        if not associativity.failed:
            associativity.record(mul(mul(a, b), c) == mul(a, mul(b, c)), witness)
        if not left.failed:
            left.record(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), witness)
        if not right.failed:
            right.record(mul(add(a, b), c) == add(mul(a, c), mul(b, c)), witness)

    unit = _LawTally("unit", mode)
    for a in singles:
        if not unit.record(mul(ring.one, a) == a and mul(a, ring.one) == a, lambda a=a: render(a)):
            break

    checks = [associativity, left, right, unit]
    return ValidationReport(ring=ring.name, exhaustive=exhaustive, checks=[t.result() for t in checks])
