from __future__ import annotations

from pydantic import BaseModel, Field, field_validator, model_validator
from datetime import datetime
from typing import Optional, List, Dict
from skewlab.models import CaseStatus, RelationForm, RingFamily


# Validation Schemas
class LawCheck(BaseModel):
    """Outcome of one law checked by validate_skew_data."""
    law: str
    passed: bool
    checked: int = 0
    mode: str = "exhaustive"
    witness: Optional[str] = None


class ValidationReport(BaseModel):
    """Certificate (or refutation) of a SkewData instance."""
    ring: str
    exhaustive: bool
    checks: List[LawCheck] = []

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[LawCheck]:
        return [check for check in self.checks if not check.passed]

    def check(self, law: str) -> LawCheck:
        for entry in self.checks:
            if entry.law == law:
                return entry
        raise KeyError(law)


# Quantum Matrix Schemas
class QuantumMatrixSpec(BaseModel):
    """Parameters of a completed multiparameter quantum matrix ring."""
    n: int = Field(..., ge=1, le=3)
    lam: int = Field(..., description="lambda, reduced mod prime")
    p: List[List[int]]
    prime: int = Field(..., ge=2)
    precision: int = Field(..., ge=1)
    relation_form: RelationForm = RelationForm.STANDARD

    @model_validator(mode="after")
    def check_parameters(self) -> "QuantumMatrixSpec":
        k = self.prime
        if self.lam % k == 0:
            raise ValueError("lambda must be invertible")
        if len(self.p) != self.n or any(len(row) != self.n for row in self.p):
            raise ValueError(f"p must be a {self.n}x{self.n} matrix")
        for i in range(self.n):
            if self.p[i][i] % k != 1:
                raise ValueError(f"p[{i + 1}][{i + 1}] must be 1")
            for j in range(self.n):
                if self.p[i][j] % k == 0:
                    raise ValueError(f"p[{i + 1}][{j + 1}] must be invertible")
                if (self.p[i][j] * self.p[j][i]) % k != 1:
                    raise ValueError(f"p is not multiplicatively antisymmetric at ({i + 1},{j + 1})")
        return self

    @classmethod
    def from_upper(cls, n: int, lam: int, upper: Dict[tuple, int], prime: int, precision: int,
                   relation_form: RelationForm = RelationForm.STANDARD) -> "QuantumMatrixSpec":
        """Fill p from its strict upper triangle (missing entries default to 1)."""
        p = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                value = upper.get((i + 1, j + 1), 1) % prime
                p[i][j] = value
                p[j][i] = pow(value, -1, prime) if value else 0
        return cls(n=n, lam=lam % prime, p=p, prime=prime, precision=precision,
                   relation_form=relation_form)


class RelationResidual(BaseModel):
    """A defining relation evaluated in the truncated tower."""
    relation: str
    residual: str
    holds: bool


class RelationReport(BaseModel):
    """Defining relations of a quantum matrix tower, checked mod j^N."""
    relation_form: RelationForm
    precision: int
    relations: List[RelationResidual] = []
    printed_form_residuals: List[RelationResidual] = []

    @property
    def ok(self) -> bool:
        return all(item.holds for item in self.relations)


# Tower Config Schemas
class BaseRingSpec(BaseModel):
    """[base] section of a tower config."""
    family: RingFamily
    prime: int = Field(..., ge=2)
    exponent: Optional[int] = Field(None, ge=1)
    length: Optional[int] = Field(None, ge=1)
    var: str = "x"
    copies: Optional[int] = Field(None, ge=1)
    q: Optional[int] = None
    n: Optional[int] = Field(None, ge=1)
    lam: Optional[int] = None
    p_upper: Dict[str, int] = {}
    relation_form: RelationForm = RelationForm.STANDARD
    precision: Optional[int] = Field(None, ge=1)
    line: int = 0

    @model_validator(mode="after")
    def check_family_keys(self) -> "BaseRingSpec":
        required = {
            RingFamily.ZMOD: ["exponent"],
            RingFamily.TRUNCPOLY: ["length"],
            RingFamily.FIELD: [],
            RingFamily.PRODUCT: ["copies"],
            RingFamily.QUANTUM_PLANE: ["q", "precision"],
            RingFamily.QUANTUM_MATRICES: ["n", "lam", "precision"],
        }[self.family]
        missing = [key for key in required if getattr(self, key) is None]
        if missing:
            raise ValueError(f"family {self.family.value} needs {', '.join(missing)}")
        return self


class LayerSpec(BaseModel):
    """[layer] section: one skew power series extension."""
    var: str = "y"
    precision: int = Field(..., ge=1)
    tau: str = "id"
    delta: str = "zero"
    q: int = 1
    line: int = 0

    @field_validator("var")
    @classmethod
    def check_var(cls, value: str) -> str:
        if not value.isidentifier():
            raise ValueError(f"variable name {value!r} is not an identifier")
        return value


class BudgetSpec(BaseModel):
    """[budget] section."""
    enumeration: Optional[int] = Field(None, ge=1)
    samples: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None


class RingTowerConfig(BaseModel):
    """A parsed ring-tower configuration."""
    base: BaseRingSpec
    layers: List[LayerSpec] = []
    suites: List[str] = []
    budget: BudgetSpec = BudgetSpec()
    source: str = ""


# Report Schemas
class CaseRecord(BaseModel):
    """One structured verification record."""
    suite: str
    case: str
    status: CaseStatus
    witness: Optional[str] = None
    note: Optional[str] = None
    micros: int = 0


class SuiteReport(BaseModel):
    """All records of one suite, canonically ordered by case id."""
    suite: str
    seed: int
    records: List[CaseRecord] = []

    @property
    def failed(self) -> int:
        return sum(1 for record in self.records if record.status == CaseStatus.FAIL)

    @property
    def passed(self) -> int:
        return sum(1 for record in self.records if record.status == CaseStatus.PASS)

    @property
    def skipped(self) -> int:
        return sum(1 for record in self.records if record.status == CaseStatus.SKIPPED)


# API Schemas
class EvalRequest(BaseModel):
    """Schema for an expression evaluation request."""
    config: str = Field(..., min_length=1)
    expression: str = Field(..., min_length=1)


class EvalResponse(BaseModel):
    """Schema for an evaluated expression."""
    expression: str
    result: str


class SuiteRunRequest(BaseModel):
    """Schema for running a suite over HTTP."""
    config: str = Field(..., min_length=1)
    suite: str = Field(..., min_length=1)
    seed: Optional[int] = None
    budget: Optional[int] = Field(None, ge=1)
    store: bool = False


class CaseResultResponse(BaseModel):
    """Schema for a stored case result."""
    case: str
    status: CaseStatus
    witness: Optional[str] = None
    note: Optional[str] = None
    micros: int

    class Config:
        from_attributes = True


class SuiteRunResponse(BaseModel):
    """Schema for a stored suite run."""
    id: int
    suite: str
    config_digest: str
    seed: int
    passed: int
    failed: int
    skipped: int
    created_at: datetime
    cases: List[CaseResultResponse] = []

    class Config:
        from_attributes = True
