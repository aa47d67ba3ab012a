import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from skewlab.config import get_settings
from skewlab.database import init_db
from skewlab.routes import evaluation, suites
import uvicorn

settings = get_settings()
logging.basicConfig(level=settings.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

# Initialize FastAPI app
app = FastAPI(
    title="skewlab",
    description="Skew power series rings over filtered rings: evaluation and verification suites",
    version="1.0.0"
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(evaluation.router)
app.include_router(suites.router)


@app.on_event("startup")
async def startup_event():
    """Initialize the run ledger on startup."""
    init_db()


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "service": "skewlab"}


if __name__ == "__main__":
    uvicorn.run(
        "skewlab.main:app",
        host=settings.app_host,
        port=settings.app_port,
        reload=settings.debug
    )
