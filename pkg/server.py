# server.py - HTTP surface for the plus-edge toolkit
from datetime import datetime
from typing import Any, Dict, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from simple_logging import get_simple_stats, log_message
from src import __version__, bounds
from src.config import Config
from src.core import InputError
from src.models import InstanceFile, PatternFile
from src.workflow import PIPELINE_COMMANDS, get_system

app = FastAPI(
    title="pluskit",
    description="Plus-edge embeddings, Hamiltonian cycles and triangle factors in signed complete graphs",
    version=__version__,
)


class BoundsRequest(BaseModel):
    n: int = Field(ge=1)
    d: Optional[float] = None
    delta: int = Field(default=1, ge=1)
    m: Optional[int] = Field(default=None, ge=0)


class RunRequest(BaseModel):
    instance: InstanceFile
    pattern: Optional[PatternFile] = None
    kind: Optional[str] = None
    delta: Optional[int] = None
    seed: Optional[int] = None
    cap: Optional[int] = None
    start: Optional[str] = None
    persist: bool = True


@app.get("/")
async def root():
    return {
        "message": "pluskit is running",
        "agents": ["supervisor", "loader", "solver", "certifier", "recorder"],
        "commands": list(PIPELINE_COMMANDS),
        "usage": "POST /run/{command} with {'instance': {'n': ..., 'plus_edges': [...]}}",
    }


@app.get("/health")
async def health():
    invalid = Config.get_invalid_settings()
    return {
        "status": "healthy" if not invalid else "misconfigured",
        "invalid_settings": invalid,
        "timestamp": datetime.now().isoformat(),
        "workflow": "langgraph",
    }


@app.get("/metrics")
async def get_metrics():
    """Get simple run metrics"""
    return get_simple_stats()


@app.post("/bounds")
async def post_bounds(request: BoundsRequest) -> Dict[str, Any]:
    try:
        payload: Dict[str, Any] = {"path_target": bounds.path_target(request.n)}
        if request.d is not None and request.m is not None:
            payload["theorem0"] = bounds.theorem0_bound(request.n, request.d, request.delta, request.m).model_dump()
            payload["d_star"] = float(bounds.d_star(request.n))
        payload["constants"] = bounds.constants(request.delta)
        return payload
    except InputError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/run/{command}")
async def run_command(command: str, request: RunRequest) -> Dict[str, Any]:
    if command not in PIPELINE_COMMANDS:
        raise HTTPException(status_code=404, detail=f"unknown command {command!r}")
    params: Dict[str, Any] = {
        "instance": request.instance.model_dump(),
        "seed": request.seed,
        "persist": request.persist,
    }
    if request.pattern is not None:
        params["pattern_inline"] = request.pattern.model_dump()
    for key in ("kind", "delta", "cap", "start"):
        if getattr(request, key) is not None:
            params[key] = getattr(request, key)
    state = get_system().run(command, params)
    if state.get("error_count"):
        raise HTTPException(status_code=400, detail=state.get("error", "input rejected"))
    return state["record"]


if __name__ == "__main__":
    log_message(f"Starting pluskit service on {Config.HOST}:{Config.PORT}")
    uvicorn.run(app, host=Config.HOST, port=Config.PORT, log_level="info")
