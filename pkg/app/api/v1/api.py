from fastapi import APIRouter
from app.api.v1.endpoints import analysis, petri, reference, terms

api_router = APIRouter()

api_router.include_router(terms.router, prefix="/terms", tags=["terms"])
api_router.include_router(analysis.router, prefix="/analysis", tags=["analysis"])
api_router.include_router(petri.router, prefix="/petri", tags=["petri"])
api_router.include_router(reference.router, prefix="/reference", tags=["reference"])
