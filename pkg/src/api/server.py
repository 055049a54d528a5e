from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src.api.routers import bound_router, solve_router
from src.utils.config import DEFAULT_EPS, DEFAULT_ORACLE_CAP


def create_app() -> FastAPI:
    """Bound service: spectrum bounds and partitions, plus small model-problem solves."""
    app = FastAPI(title="clusterbound API")

    # notebooks and plotting dashboards call the service from other origins
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.include_router(bound_router.router)
    app.include_router(solve_router.router)

    @app.get("/")
    def service_info():
        return {
            "status": "ok",
            "app": "clusterbound API",
            "defaults": {"eps": DEFAULT_EPS, "oracle_cap": DEFAULT_ORACLE_CAP, "max_grid": solve_router.MAX_GRID},
            "endpoints": ["/api/bound", "/api/partition", "/api/solve"],
        }

    return app


app = create_app()
