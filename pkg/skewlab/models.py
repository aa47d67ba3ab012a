from sqlalchemy import Column, Integer, String, Text, DateTime, ForeignKey, Enum as SQLEnum
from sqlalchemy.orm import relationship, declarative_base
from datetime import datetime
import enum

Base = declarative_base()


class Side(str, enum.Enum):
    """Normal form of a skew polynomial or series."""
    LEFT = "left"      # sum a_i y^i
    RIGHT = "right"    # sum y^i b_i


class Direction(str, enum.Enum):
    """Side conversion direction."""
    LEFT_TO_RIGHT = "left-to-right"
    RIGHT_TO_LEFT = "right-to-left"


class IdealOperation(str, enum.Enum):
    """Binary operations on ideals of a finite ring."""
    PRODUCT = "product"
    INTERSECTION = "intersection"
    SUM = "sum"


class RingFamily(str, enum.Enum):
    """Base ring families addressable from a tower config."""
    ZMOD = "zmod"
    TRUNCPOLY = "truncpoly"
    FIELD = "field"
    PRODUCT = "product"
    QUANTUM_PLANE = "quantum-plane"
    QUANTUM_MATRICES = "quantum-matrices"


class RelationForm(str, enum.Enum):
    """Reading of the (i>r, j>s) quantum-matrix relation."""
    STANDARD = "standard"
    AS_PRINTED = "as-printed"


class CaseStatus(str, enum.Enum):
    """Outcome of one verification case."""
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class ReportFormat(str, enum.Enum):
    """Report renderings of the CLI."""
    TEXT = "text"
    JSONL = "jsonl"


class SuiteRun(Base):
    """One stored execution of a verification suite."""

    __tablename__ = "suite_runs"

    id = Column(Integer, primary_key=True, index=True)
    suite = Column(String(64), nullable=False, index=True)
    config_digest = Column(String(64), nullable=False, index=True)
    seed = Column(Integer, nullable=False)
    passed = Column(Integer, default=0, nullable=False)
    failed = Column(Integer, default=0, nullable=False)
    skipped = Column(Integer, default=0, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    # Relationships
    cases = relationship("CaseResult", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<SuiteRun(id={self.id}, suite='{self.suite}', failed={self.failed})>"


class CaseResult(Base):
    """Record of a single case inside a stored suite run."""

    __tablename__ = "case_results"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("suite_runs.id"), nullable=False, index=True)
    case = Column(String(128), nullable=False)
    status = Column(SQLEnum(CaseStatus), nullable=False, index=True)
    witness = Column(Text, nullable=True)
    note = Column(Text, nullable=True)
    micros = Column(Integer, nullable=False, default=0)

    # Relationships
    run = relationship("SuiteRun", back_populates="cases")

    def __repr__(self):
        return f"<CaseResult(run_id={self.run_id}, case='{self.case}', status='{self.status}')>"
