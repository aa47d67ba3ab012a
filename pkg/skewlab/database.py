import logging
import os

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, Session
from skewlab.config import get_settings
from skewlab.models import Base
from typing import Generator

logger = logging.getLogger(__name__)

settings = get_settings()


def _connect_args(url: str) -> dict:
    # SQLite connections are shared between the API worker threads
    return {"check_same_thread": False} if url.startswith("sqlite") else {}


def _ensure_sqlite_dir(url: str) -> None:
    if url.startswith("sqlite:///") and not url.startswith("sqlite:///:memory:"):
        directory = os.path.dirname(url[len("sqlite:///"):])
        if directory:
            os.makedirs(directory, exist_ok=True)


_ensure_sqlite_dir(settings.database_url)

# Create database engine
engine = create_engine(
    settings.database_url,
    pool_pre_ping=True,
    echo=settings.debug,
    connect_args=_connect_args(settings.database_url),
)

# Create session factory
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def get_db() -> Generator[Session, None, None]:
    """
    Dependency to get database session.
    Usage: def my_endpoint(db: Session = Depends(get_db))
    """
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


def init_db() -> None:
    """Create the run-ledger tables."""
    Base.metadata.create_all(bind=engine)
    logger.info("run ledger ready at %s", settings.database_url)


def drop_db() -> None:
    """Drop the run-ledger tables (use with caution!)."""
    Base.metadata.drop_all(bind=engine)
    logger.info("run ledger dropped")


if __name__ == "__main__":
    init_db()
