"""
HTTP API for the GF(2) Collatz toolkit

Exposes traces, stratum counts, the special families and the conjugation
experiment as JSON. Long searches stay on the command line (python -m app.cli).

Key components:
1. FastAPI web framework for the API
2. The collatz, enumeration and family services
3. Pydantic for configuration and response models
"""
import logging

import uvicorn
from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse

from app.config import settings
from app.exceptions import Gf2CollatzError
from app.models.collatz_models import CollatzTrace
from app.models.enumeration_models import QUADRANTS, Constraint, Stratum
from app.models.family_models import ConjugationReport, FamilyId, FamilyKind
from app.services.collatz_service import collatz_service
from app.services.enumeration_service import enumeration_service
from app.services.family_service import family_service
from app.services.gf2poly import format_poly, parse_poly

# Configure logging
logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Create FastAPI app
app = FastAPI(
    title="GF(2) Collatz toolkit",
    description="Trajectories of the map A -> (1 + (x^2+x+1) A) / (x^a (x+1)^b) on binary polynomials.",
    version="1.0.0",
)


@app.exception_handler(Gf2CollatzError)
async def domain_error_handler(request: Request, exc: Gf2CollatzError):
    logger.error(f"{request.url.path}: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/api/health")
async def health_check():
    """
    Health check endpoint
    """
    return {"status": "ok"}


@app.get("/api/trace", response_model=CollatzTrace)
def get_trace(poly: str = Query(..., description="polynomial text or hex mask")):
    """Full trajectory of one seed"""
    return collatz_service.trace(parse_poly(poly))


@app.get("/api/count")
def get_count(degree: int = Query(..., ge=0), stratum: str = Query("odd")):
    """
    Enumerated size of a stratum

    ``stratum`` is one of all, odd, quadrants or a single quadrant (p0=0, p0=1,
    p1=0, p1=1).
    """
    if stratum == "quadrants":
        counts = {c.value: enumeration_service.count(Stratum(degree=degree, constraint=c)) for c in QUADRANTS}
        return {"degree": degree, "stratum": stratum, "counts": counts}
    try:
        constraint = Constraint(stratum)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"unknown stratum {stratum!r}")
    count = enumeration_service.count(Stratum(degree=degree, constraint=constraint))
    return {"degree": degree, "stratum": stratum, "count": count}


@app.get("/api/families/{kind}")
def get_family(kind: FamilyKind, n: int = Query(0, ge=0)):
    """A member of a special family with its odd degree sequence"""
    polynomial = family_service.generate(FamilyId(kind=kind, n=n))
    return {
        "family": kind.value,
        "n": n,
        "polynomial": format_poly(polynomial),
        "hex": polynomial.to_hex(),
        "odd_degrees": collatz_service.odd_degree_sequence(polynomial),
    }


@app.get("/api/conjugation", response_model=ConjugationReport)
def get_conjugation(poly: str = Query(...)):
    """Degree sequences of A, A(x+1) and the reciprocal of A"""
    return family_service.conjugation_experiment(parse_poly(poly))


if __name__ == "__main__":
    # Local development server
    uvicorn.run("main:app", host="0.0.0.0", port=settings.port, reload=True)
