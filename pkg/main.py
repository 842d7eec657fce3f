from fastapi import FastAPI
import logging
from app.api.v1.api import api_router
from app.core.config import get_settings

# Configure logging
logging.basicConfig(level=get_settings().log_level)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="PAFAS Workbench",
    description="Timed process algebras with non-blocking reads: semantics, translations and analyses",
    version="1.0.0",
)

# Include API router with all endpoints
app.include_router(api_router, prefix="/api/v1")


@app.get("/")
async def root():
    """Root endpoint that returns a welcome message."""
    return {"message": "Welcome to the PAFAS Workbench", "status": "running"}


@app.get("/health")
async def health():
    """Health check endpoint that returns server status and exploration bounds."""
    settings = get_settings()
    return {
        "status": "healthy",
        "message": "Server is running properly",
        "max_states": settings.max_states,
        "max_depth": settings.max_depth,
    }
