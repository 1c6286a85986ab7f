"""FastAPI service wrapping the solvers and the experiment harness.

Endpoints:
  GET  /health       liveness probe
  POST /factorize    run one solver on a posted matrix
  POST /experiments  run the full benchmark protocol, return all records

Dataset paths in experiment requests are resolved on the service host.
Run standalone with ``nmfbench-serve`` (or ``uvicorn nmfbench.service:app``).
"""

from __future__ import annotations

import argparse

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..harness import ExperimentError, run_experiment
from ..solvers import SolverConfig, solve_l1, solve_l2, solve_l21
from .schemas import (
    ExperimentRequest,
    ExperimentResponse,
    FactorizeRequest,
    FactorizeResponse,
    HealthResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="nmfbench", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/factorize", response_model=FactorizeResponse)
    def factorize(req: FactorizeRequest) -> FactorizeResponse:
        X = np.asarray(req.matrix, dtype=float)
        cfg = SolverConfig(max_iters=req.max_iters, epsilon=req.epsilon, seed=req.seed)
        try:
            if req.solver == "l2":
                result = solve_l2(X, req.k, cfg)
            elif req.solver == "l21":
                result = solve_l21(X, req.k, cfg)
            else:
                result = solve_l1(X, req.k, lam=req.lam, cfg=cfg)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return FactorizeResponse(
            basis=result.W.tolist(),
            coefficients=result.H.tolist(),
            noise_estimate=None if result.E is None else result.E.tolist(),
            objective_history=result.objective_history,
            iterations_run=result.iterations_run,
        )

    @app.post("/experiments", response_model=ExperimentResponse)
    def experiments(req: ExperimentRequest) -> ExperimentResponse:
        try:
            report = run_experiment(req.to_config())
        except (ValueError, FileNotFoundError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ExperimentError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return ExperimentResponse.from_report(report)

    return app


app = create_app()


def serve() -> None:
    """Console entry: run the service under uvicorn."""
    import uvicorn

    parser = argparse.ArgumentParser(description="Serve the nmfbench HTTP API")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args()
    uvicorn.run(app, host=args.host, port=args.port)
