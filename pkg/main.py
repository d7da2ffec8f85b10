# main.py - FastAPI app for local runs (uvicorn main:app)
import logging

from fastapi import FastAPI

from config import get_settings
from routes import norms, schmidt, werner, witness

logging.basicConfig(level=get_settings().log_level)

app = FastAPI(title="Schmidt Norms API")
app.include_router(schmidt.router)
app.include_router(norms.router)
app.include_router(witness.router)
app.include_router(werner.router)
