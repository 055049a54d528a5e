from fastapi import APIRouter, HTTPException

from src.api.models.bound_models import BoundResponse, PartitionResponse, SpectrumRequest
from src.bounds.spectrum import Spectrum
from src.partition.greedy import analyze_spectrum, partition_spectrum

router = APIRouter(prefix="/api", tags=["bounds"])


def _spectrum(req: SpectrumRequest) -> Spectrum:
    try:
        if req.sort:
            return Spectrum.from_unsorted(req.eigenvalues)
        return Spectrum(req.eigenvalues)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))


# -------------------------------------------------------------------
# /api/bound – m1, m2, ms with partition and degrees
# -------------------------------------------------------------------
@router.post("/bound", response_model=BoundResponse)
async def bound(req: SpectrumRequest) -> BoundResponse:
    spec = _spectrum(req)
    try:
        report = analyze_spectrum(spec, req.eps, req.accept)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))

    return BoundResponse(**report.to_dict())


# -------------------------------------------------------------------
# /api/partition – greedy cluster partition with every split decision
# -------------------------------------------------------------------
@router.post("/partition", response_model=PartitionResponse)
async def partition(req: SpectrumRequest) -> PartitionResponse:
    spec = _spectrum(req)
    try:
        result = partition_spectrum(spec, req.eps, req.accept)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))

    return PartitionResponse(**result.partition.to_dict(), decisions=result.decisions)
