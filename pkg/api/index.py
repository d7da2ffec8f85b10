# api/index.py - Deployment entry point with root and health endpoints

import logging
import os
import sys

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import get_settings  # noqa: E402
from routes import norms, schmidt, werner, witness  # noqa: E402

settings = get_settings()
logging.basicConfig(level=settings.log_level)
logger = logging.getLogger(__name__)

VERSION = "1.0.0"

app = FastAPI(
    title="Schmidt Norms API",
    version=VERSION,
    description="Schmidt-rank vector and operator norms, k-block positivity tests and Werner-state numerics",
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(schmidt.router)
app.include_router(norms.router)
app.include_router(witness.router)
app.include_router(werner.router)

logger.info(f"Schmidt Norms API {VERSION} ready (production={settings.is_production})")


@app.get("/", tags=["Root"])
def read_root():
    """
    Welcome endpoint that provides basic API information
    """
    return {
        "message": "Schmidt Norms API",
        "version": VERSION,
        "status": "running",
        "production": settings.is_production,
        "documentation": {
            "swagger_ui": "/docs",
            "redoc": "/redoc",
            "openapi_schema": "/openapi.json"
        },
        "limits": {
            "size_cap": settings.size_cap,
            "max_restarts": settings.max_restarts
        },
        "endpoints": [
            "POST /schmidt/decompose",
            "POST /schmidt/vecnorm",
            "POST /opnorm/bounds",
            "POST /kpos/certify",
            "GET /werner/threshold",
            "GET /werner/limit"
        ]
    }


@app.get("/health", tags=["Health"])
def health():
    """
    Health check endpoint
    """
    return {
        "status": "healthy",
        "production": settings.is_production,
        "version": VERSION
    }
