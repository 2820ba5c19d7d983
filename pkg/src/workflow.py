"""Pipeline orchestration with LangGraph.

A supervisor routes the run through four stage agents: loader (instance
and pattern), solver (the command's algorithm), certifier (bound value and
pass/fail) and recorder (RunRecord, JSONL append). Any input error ends
the pipeline.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, TypedDict

from langgraph.graph import END, StateGraph
from pydantic import ValidationError

from simple_logging import RunMetrics, log_error, log_stage_complete, log_stage_start, log_success
from src import bounds
from src.config import Config
from src.core import InputError, Pattern, SignedCompleteGraph, score
from src.embedder import embed_unbalanced, exact_expectation
from src.generators import pattern_factory, random_labeling
from src.matching import build_matched_pair
from src.models import InstanceFile, PatternFile, load_instance, load_pattern
from src.oracle import best_hamiltonian, best_triangle_factor, spectrum
from src.pathsearch import (
    PathSystem,
    assemble_hamiltonian,
    certify_path_system,
    cycle_plus,
    discrepancy_hamiltonian,
    path_local_search,
    stats,
)
from src.records import RunRecord, append_record, instance_digest
from src.trianglesearch import TriangleFactor, certify_fixed_point, profile, triangle_local_search

PIPELINE_COMMANDS = ("embed", "paths", "triangles", "spectrum", "exact", "discrepancy")
PATTERN_COMMANDS = ("embed", "spectrum")


class MessageType(Enum):
    REQUEST = "request"
    INSTANCE_LOADED = "instance_loaded"
    SOLVED = "solved"
    CERTIFIED = "certified"
    RECORDED = "recorded"


class PipelineState(TypedDict, total=False):
    messages: List[Dict[str, Any]]
    command: str
    params: Dict[str, Any]
    host: SignedCompleteGraph
    pattern: Optional[Pattern]
    result: Dict[str, Any]
    certificate: Dict[str, Any]
    record: Dict[str, Any]
    started: float
    error: str
    error_count: int


def create_initial_state(command: str, params: Optional[Dict[str, Any]] = None) -> PipelineState:
    """Create a new state dictionary with default values"""
    return {
        "messages": [],
        "command": command,
        "params": dict(params or {}),
        "result": {},
        "certificate": {},
        "record": {},
        "started": time.time(),
        "error": "",
        "error_count": 0,
    }


def add_message(state: PipelineState, msg_type: MessageType, content: str, agent: str) -> None:
    """Helper to add messages to state dictionary"""
    state.setdefault("messages", []).append({
        "type": msg_type.value,
        "content": content,
        "timestamp": datetime.now().isoformat(),
        "agent": agent,
    })


def _fail(state: PipelineState, agent: str, error: Exception) -> PipelineState:
    state["error_count"] = state.get("error_count", 0) + 1
    state["error"] = str(error)
    add_message(state, MessageType.REQUEST, f"Error: {error}", agent)
    log_error(f"{agent} failed: {error}")
    return state


# -- solvers --------------------------------------------------------------------


def _solve_embed(host: SignedCompleteGraph, pattern: Pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    embedding = embed_unbalanced(host, pattern)
    result = score(host, pattern, embedding)
    outputs = {
        "embedding": list(embedding.perm),
        "m_plus": result.plus,
        "m_minus": result.minus,
        "signed_sum": result.signed_sum,
        "m": pattern.m,
        "delta": pattern.max_degree,
    }
    if host.n % 2 == 0:
        outputs["expectation"] = str(exact_expectation(host, pattern, build_matched_pair(host, pattern)))
    return outputs


def _solve_paths(host: SignedCompleteGraph, pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    system = path_local_search(host, start_mode=params.get("start"))
    info = stats(system)
    cycle = assemble_hamiltonian(host, system) if host.n >= 3 else ()
    return {
        "paths": system.as_lists(),
        "m_h": info.m_h,
        "k": info.k,
        "stats": {"n0": info.n0, "n1": info.n1, "n2": info.n2, "ell": info.ell},
        "cycle": list(cycle),
        "m_plus": cycle_plus(host, cycle) if cycle else info.m_h,
    }


def _solve_triangles(host: SignedCompleteGraph, pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    factor = triangle_local_search(host, seed=params.get("seed"))
    counts = profile(host, factor)
    return {
        "factor": factor.as_lists(),
        "m_plus": counts.plus,
        "profile": list(counts.counts),
    }


def _solve_spectrum(host: SignedCompleteGraph, pattern: Pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    result = spectrum(host, pattern, cap=params.get("cap"))
    outputs = result.as_dict()
    outputs["m_plus"] = max(result.values)
    outputs["closest_to_mean"] = result.closest_to_mean()
    return outputs


def _solve_exact(host: SignedCompleteGraph, pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    best = best_hamiltonian(host, cap=params.get("cap"))
    outputs = {
        "cycle": list(best.cycle),
        "m_plus": best.plus,
        "min_plus": best.min_plus,
        "max_abs_signed_sum": best.max_abs_signed_sum,
        "cycles": best.cycles,
    }
    if host.n % 3 == 0 and host.n <= Config.TRIANGLE_CAP:
        triangles = best_triangle_factor(host)
        outputs["triangle_factor"] = triangles.factor.as_lists()
        outputs["triangle_plus"] = triangles.plus
    return outputs


def _solve_discrepancy(host: SignedCompleteGraph, pattern, params: Dict[str, Any]) -> Dict[str, Any]:
    result = discrepancy_hamiltonian(host)
    outputs = result.as_dict()
    outputs["m_plus"] = cycle_plus(host, result.cycle)
    return outputs


SOLVERS: Dict[str, Callable[..., Dict[str, Any]]] = {
    "embed": _solve_embed,
    "paths": _solve_paths,
    "triangles": _solve_triangles,
    "spectrum": _solve_spectrum,
    "exact": _solve_exact,
    "discrepancy": _solve_discrepancy,
}


def certify(command: str, host: SignedCompleteGraph, pattern: Optional[Pattern], result: Dict[str, Any]) -> Dict[str, Any]:
    """bound_value and certificate_pass for one solved command."""
    n = host.n
    if command == "embed":
        report = bounds.theorem0_bound(n, host.density(), max(pattern.max_degree, 1), pattern.m)
        passed = result["m_plus"] >= math.ceil(report.value - Config.TOLERANCE)
        return {"bound_value": report.value, "case": report.case_taken, "certificate_pass": passed}
    if command == "paths":
        system = PathSystem(tuple(tuple(p) for p in result["paths"]), n)
        certificate = certify_path_system(host, system)
        passed = certificate.passed and result["m_plus"] >= result["m_h"]
        return {"bound_value": certificate.target, "certificate_pass": passed, "details": certificate.as_dict()}
    if command == "triangles":
        factor = TriangleFactor(tuple(tuple(t) for t in result["factor"]), n)
        certificate = certify_fixed_point(host, factor)
        reference = bounds.constants()["c2_lower"] * n
        return {"bound_value": reference, "certificate_pass": certificate.passed, "details": certificate.as_dict()}
    if command == "spectrum":
        expected = host.density() * pattern.m
        mean_ok = Fraction(result["mean"]) == expected
        gap_ok = result["max_gap"] <= pattern.max_degree + pattern.min_degree
        return {
            "bound_value": float(expected),
            "certificate_pass": mean_ok and gap_ok,
            "details": {"mean_identity": mean_ok, "gap_bound": gap_ok},
        }
    if command == "exact":
        return {"bound_value": None, "certificate_pass": True}
    if command == "discrepancy":
        reduced_n = n - len(result["removed"])
        chain = 2 * result["balanced_plus"] - reduced_n
        return {"bound_value": chain, "certificate_pass": result["chain_holds"]}
    raise InputError(f"unknown command {command!r}")


# -- agents ----------------------------------------------------------------------


class SupervisorAgent:
    """Supervisor Agent - routes to the first stage whose output is missing"""

    def __init__(self):
        self.name = "supervisor"

    def should_continue(self, state: PipelineState) -> str:
        if state.get("error_count", 0) >= 1:
            return "end"
        if state.get("host") is None:
            return "loader"
        if not state.get("result"):
            return "solver"
        if not state.get("certificate"):
            return "certifier"
        if not state.get("record"):
            return "recorder"
        return "end"


class LoaderAgent:
    """Loader Agent - reads, accepts inline or generates the instance and pattern"""

    def __init__(self):
        self.name = "loader"

    def execute(self, state: PipelineState) -> PipelineState:
        log_stage_start(self.name)
        params = state.get("params", {})
        try:
            host = self.load_host(params)
            pattern = self.load_pattern(state["command"], host, params)
            state["host"] = host
            state["pattern"] = pattern
            add_message(state, MessageType.INSTANCE_LOADED, f"Instance n={host.n}, m+={host.plus_count}", self.name)
            log_stage_complete(self.name)
        except (InputError, ValidationError, OSError) as e:
            return _fail(state, self.name, e)
        return state

    def load_host(self, params: Dict[str, Any]) -> SignedCompleteGraph:
        if isinstance(params.get("host"), SignedCompleteGraph):
            return params["host"]
        if params.get("instance") is not None:
            return InstanceFile.model_validate(params["instance"]).to_graph()
        if params.get("in"):
            return load_instance(params["in"])
        raise InputError("no instance given: pass --in or an inline instance")

    def load_pattern(self, command: str, host: SignedCompleteGraph, params: Dict[str, Any]) -> Optional[Pattern]:
        if command not in PATTERN_COMMANDS:
            return None
        if isinstance(params.get("pattern_obj"), Pattern):
            pattern = params["pattern_obj"]
        elif params.get("pattern_inline") is not None:
            pattern = PatternFile.model_validate(params["pattern_inline"]).to_pattern()
        elif params.get("pattern"):
            pattern = load_pattern(params["pattern"])
        else:
            pattern = pattern_factory(
                params.get("kind") or "matching", host.n, params.get("delta"), params.get("seed") or 0
            )
        if pattern.n != host.n:
            raise InputError(f"dimension mismatch: host n={host.n}, pattern n={pattern.n}")
        return pattern


class SolverAgent:
    """Solver Agent - runs the command's algorithm"""

    def __init__(self):
        self.name = "solver"

    def execute(self, state: PipelineState) -> PipelineState:
        log_stage_start(self.name)
        command = state["command"]
        if command not in SOLVERS:
            return _fail(state, self.name, InputError(f"unknown command {command!r}"))
        try:
            state["result"] = SOLVERS[command](state["host"], state.get("pattern"), state.get("params", {}))
            add_message(state, MessageType.SOLVED, f"{command}: m+ = {state['result'].get('m_plus')}", self.name)
            log_stage_complete(self.name)
        except InputError as e:
            return _fail(state, self.name, e)
        return state


class CertifierAgent:
    """Certifier Agent - evaluates the guaranteed bound and the fixed-point checks"""

    def __init__(self):
        self.name = "certifier"

    def execute(self, state: PipelineState) -> PipelineState:
        log_stage_start(self.name)
        try:
            state["certificate"] = certify(state["command"], state["host"], state.get("pattern"), state["result"])
            add_message(
                state,
                MessageType.CERTIFIED,
                f"certificate_pass = {state['certificate']['certificate_pass']}",
                self.name,
            )
            log_stage_complete(self.name)
        except InputError as e:
            return _fail(state, self.name, e)
        return state


class RecorderAgent:
    """Recorder Agent - builds the RunRecord and appends it to the results file"""

    def __init__(self):
        self.name = "recorder"

    def execute(self, state: PipelineState) -> PipelineState:
        log_stage_start(self.name)
        params = state.get("params", {})
        outputs = dict(state["result"])
        outputs.update(state["certificate"])
        record = RunRecord(
            command=state["command"],
            instance_digest=instance_digest(state["host"], state.get("pattern")),
            seed=params.get("seed"),
            params={k: v for k, v in params.items() if isinstance(v, (int, float, str, bool, type(None)))},
            outputs=outputs,
            runtime_ms=int(round((time.time() - state.get("started", time.time())) * 1000)),
        )
        if params.get("persist", True):
            try:
                append_record(record, params.get("results"))
            except OSError as e:
                log_error(f"Could not append run record: {e}")
        state["record"] = record.model_dump()
        add_message(state, MessageType.RECORDED, f"digest {record.instance_digest[:12]}", self.name)
        log_stage_complete(self.name)
        return state


class PipelineSystem:
    """Main system that orchestrates all agents using LangGraph"""

    def __init__(self):
        self.supervisor = SupervisorAgent()
        self.loader = LoaderAgent()
        self.solver = SolverAgent()
        self.certifier = CertifierAgent()
        self.recorder = RecorderAgent()
        self.workflow = self.build_workflow()

    def build_workflow(self):
        """Build the LangGraph state machine"""
        workflow = StateGraph(PipelineState)
        workflow.add_node("supervisor", self.supervisor_node)
        workflow.add_node("loader", self.loader.execute)
        workflow.add_node("solver", self.solver.execute)
        workflow.add_node("certifier", self.certifier.execute)
        workflow.add_node("recorder", self.recorder.execute)
        workflow.set_entry_point("supervisor")
        workflow.add_conditional_edges(
            "supervisor",
            self.supervisor.should_continue,
            {
                "loader": "loader",
                "solver": "solver",
                "certifier": "certifier",
                "recorder": "recorder",
                "end": END,
            },
        )
        for stage in ("loader", "solver", "certifier", "recorder"):
            workflow.add_edge(stage, "supervisor")
        return workflow.compile()

    def supervisor_node(self, state: PipelineState) -> PipelineState:
        """Supervisor node - just passes through state for decision making"""
        return state

    def run(self, command: str, params: Optional[Dict[str, Any]] = None) -> PipelineState:
        """Run one command through the pipeline; errors end up in the returned state."""
        metrics = RunMetrics()
        metrics.start_run(command)
        if command not in PIPELINE_COMMANDS:
            state = create_initial_state(command, params)
            metrics.add_error()
            metrics.finish_run(success=False)
            return _fail(state, "supervisor", InputError(f"unknown command {command!r}"))
        state = create_initial_state(command, params)
        add_message(state, MessageType.REQUEST, command, "user")
        try:
            final_state = self.workflow.invoke(state)
        except Exception as e:
            metrics.add_error()
            metrics.finish_run(success=False)
            log_error(f"System error in {command}: {e}")
            raise
        for message in final_state.get("messages", []):
            if message["agent"] != "user":
                metrics.add_stage(message["agent"])
        success = not final_state.get("error_count")
        if not success:
            metrics.add_error()
        metrics.finish_run(success=success)
        if success:
            log_success(f"{command} finished, certificate_pass={final_state['certificate'].get('certificate_pass')}")
        return final_state


_SYSTEM: Optional[PipelineSystem] = None


def get_system() -> PipelineSystem:
    global _SYSTEM
    if _SYSTEM is None:
        _SYSTEM = PipelineSystem()
    return _SYSTEM


# -- sweeps ------------------------------------------------------------------------


def sweep_instance(kind: str, n: int, seed: int, d: Optional[float]) -> SignedCompleteGraph:
    """Balanced labeling when possible and no density is given; otherwise density d."""
    if d is None and kind in ("paths", "triangles") and n % 4 in (0, 1):
        return random_labeling(n, balanced=True, seed=seed)
    default = {"embed": 0.5, "discrepancy": 0.6}.get(kind, 0.5)
    return random_labeling(n, d=default if d is None else d, seed=seed)


def sweep_pattern(kind: str, n: int, delta: int, seed: int) -> Optional[Pattern]:
    if kind not in PATTERN_COMMANDS:
        return None
    if n % (delta + 1) == 0:
        return pattern_factory("clique_factor", n, delta)
    return pattern_factory("random", n, delta, seed)


def sweep_cell(kind: str, n: int, seed: int, d: Optional[float] = None, delta: int = 1) -> Dict[str, Any]:
    """Run one (n, d, delta, seed) cell; returns the CSV row and the unpersisted record."""
    host = sweep_instance(kind, n, seed, d)
    params = {
        "host": host,
        "pattern_obj": sweep_pattern(kind, n, delta, seed),
        "seed": seed,
        "delta": delta,
        "persist": False,
    }
    state = get_system().run(kind, params)
    if state.get("error_count"):
        return {"row": {"n": n, "d": float(host.density()), "delta": delta, "seed": seed,
                        "metric": None, "bound": None, "ratio": None, "pass": False},
                "record": None, "error": state.get("error")}
    outputs = state["record"]["outputs"]
    metric = outputs.get("m_h") if kind == "paths" else outputs.get("m_plus")
    if kind == "discrepancy":
        metric = outputs.get("oriented_sum")
    bound = outputs.get("bound_value")
    row = {
        "n": n,
        "d": round(float(host.density()), 6),
        "delta": delta,
        "seed": seed,
        "metric": metric,
        "bound": bound,
        "ratio": metric / bound if bound else None,
        "pass": bool(outputs.get("certificate_pass")),
    }
    return {"row": row, "record": state["record"], "error": None}


def run_sweep(
    kind: str,
    ns: Sequence[int],
    seeds: int,
    ds: Sequence[Optional[float]] = (None,),
    deltas: Sequence[int] = (1,),
    workers: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """All (n, d, delta, seed) cells in grid order; a pool runs them when workers > 1."""
    if kind not in PIPELINE_COMMANDS:
        raise InputError(f"unknown sweep kind {kind!r}")
    if not ds or not deltas:
        raise InputError("sweep needs at least one density and one degree bound")
    bad = [delta for delta in deltas if delta < 1]
    if bad:
        raise InputError(f"degree bounds must be at least 1, got {bad}")
    cells = [
        (kind, n, seed, d, delta)
        for n in ns
        for d in ds
        for delta in deltas
        for seed in range(seeds)
    ]
    workers = workers or Config.WORKERS
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(sweep_cell, *zip(*cells)))
    return [sweep_cell(*cell) for cell in cells]
