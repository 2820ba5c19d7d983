"""Closed-form bound evaluators and the two-variable triangle program.

Values are doubles; branch conditions are decided in exact rational
arithmetic. The triangle program is solved twice: an exact boundary
analysis with sympy, and a numpy grid refined with scipy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple, Union

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field, field_validator
from scipy.optimize import minimize

from src.config import Config
from src.core import InputError, pair_count
from src.matching import erdos_gallai_threshold

Number = Union[int, float, Fraction]

SQRT2 = math.sqrt(2.0)

# Caps on plus-edges between two triangles of a pairwise-stable factor,
# indexed by the plus-edge counts of the two triangles.
TRIANGLE_PAIR_CAPS: Tuple[Tuple[int, ...], ...] = (
    (0, 0, 3, 3),
    (0, 1, 4, 6),
    (3, 4, 5, 7),
    (3, 6, 7, 9),
)


class BoundReport(BaseModel):
    name: str
    inputs: Dict[str, Union[int, float, List[float]]] = Field(default_factory=dict)
    value: float
    case_taken: str = "closed-form"

    @field_validator("value")
    @classmethod
    def value_is_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("bound value must be finite")
        return value


# -- embedding bound ---------------------------------------------------------


def d_star(n: int) -> Fraction:
    """Density d* with d* C(n, 2) = (8n^2 - 14n + 3) / 25."""
    if n < 2:
        raise InputError(f"d* needs n >= 2, got {n}")
    return erdos_gallai_threshold(n) / pair_count(n)


def below_threshold(n: int, d: Number) -> bool:
    """True iff d C(n, 2) <= (8n^2 - 14n + 3) / 25 (first branch)."""
    return Fraction(d) * pair_count(n) <= erdos_gallai_threshold(n)


def _check_density(d: Number) -> None:
    if not 0 <= d <= 1:
        raise InputError(f"density d={d} outside [0, 1]")


def theorem0_coefficient(n: int, d: Number, delta: int) -> Tuple[float, str]:
    if n < 4:
        raise InputError(f"the embedding bound needs n >= 4, got n={n}")
    _check_density(d)
    if delta < 1:
        raise InputError(f"maximum degree bound must be at least 1, got {delta}")
    x = float(d)
    if below_threshold(n, d):
        gain = (2 - x - 2 * math.sqrt(1 - x)) / (2 * delta + 1)
        case = "d<=d*"
    else:
        gain = (math.sqrt(x) - x) / (2 * delta + 1)
        case = "d>d*"
    return x + gain - 3 / (n - 3), case


def theorem0_bound(n: int, d: Number, delta: int, m: int) -> BoundReport:
    """Guaranteed m+(G_pi) for some pi, for patterns of max degree <= delta."""
    if m < 0:
        raise InputError(f"edge count must be non-negative, got {m}")
    coefficient, case = theorem0_coefficient(n, d, delta)
    return BoundReport(
        name="theorem0",
        inputs={"n": n, "d": float(d), "delta": delta, "m": m},
        value=coefficient * m,
        case_taken=case,
    )


def matched_fraction_floor(n: int, d: Number) -> float:
    """Lower bound on the plus fraction p of a maximum plus-matching."""
    _check_density(d)
    x = float(d)
    if below_threshold(n, d):
        return 2 - 2 * math.sqrt(1 - x) - 1 / n
    return math.sqrt(x) - 1 / n


def cross_edge_floor(n: int, d: Number) -> float:
    """Plus-probability floor d - 1/(n-2) of a pattern edge crossing two pairs."""
    if n < 3:
        raise InputError(f"cross pairs need n >= 3, got {n}")
    return float(d) - 1 / (n - 2)


# -- Hamiltonian cycles -------------------------------------------------------


def path_target(n: int) -> float:
    """2n + 3 - sqrt(2n^2 + 14n + 1)."""
    if n < 1:
        raise InputError(f"path target needs n >= 1, got {n}")
    return 2 * n + 3 - math.sqrt(2 * n * n + 14 * n + 1)


def path_count_bound_single(n: int, m_h: int) -> float:
    """Ceiling on m+(K) when the stable system is one path with m_h edges."""
    return -m_h * m_h / 8 + (4 * n + 6) * m_h / 8 - 1


def path_count_bound_multi(n: int, m_h: int, k: int) -> float:
    """Ceiling on m+(K) when the stable system has k >= 2 paths and m_h edges."""
    if k < 2:
        raise InputError(f"the multi-path ceiling needs k >= 2, got {k}")
    if k <= 2 * n - 3 * m_h + 2:
        return (
            -k * k / 8
            - (2 * n - 3 * m_h - 6) * k / 12
            + (4 * n - m_h - 3) * (m_h + 1) / 8
        )
    return (
        1.5 * n + k * m_h + m_h * m_h - n * m_h - 2 * n * k / 3 + n * n / 2 + 0.125 - 2 * m_h
    )


def path_edge_ceiling(n: int, m_h: int, k: int) -> float:
    """Upper bound on m+(K) forced by a stable path system with m_h edges in k paths."""
    if k < 1:
        raise InputError(f"path count must be positive, got {k}")
    if k == 1:
        return path_count_bound_single(n, m_h)
    return path_count_bound_multi(n, m_h, k)


# -- constants ----------------------------------------------------------------


def c_delta_lower(delta: int) -> float:
    return 0.5 + (3 - 2 * SQRT2) / (4 * delta + 2)


def c_delta_upper(delta: int) -> float:
    return 0.5 + 1 / (2 * delta)


def subgraph_discrepancy_coefficient(delta: int) -> float:
    """(3 - 2 sqrt 2) / (2 delta + 1), the fixed-subgraph discrepancy rate."""
    return (3 - 2 * SQRT2) / (2 * delta + 1)


def constants(delta: int = 1) -> Dict[str, Union[float, int, str]]:
    if delta < 1:
        raise InputError(f"maximum degree bound must be at least 1, got {delta}")
    c1 = 2 - SQRT2
    return {
        "c1": c1,
        "c2_lower": 3 * SQRT2 / 4 - 0.5,
        "c2_conjecture": "c2 = c1 (open)",
        "delta": delta,
        "c_delta_lower": c_delta_lower(delta),
        "c_delta_upper": c_delta_upper(delta),
        "c3_upper": 1 - SQRT2 / 3,
        "corollary1": 3 - 2 * SQRT2,
        "thm1ii": 3 * SQRT2 / 4 - 0.5,
        "subgraph_discrepancy": subgraph_discrepancy_coefficient(delta),
        "balogh_reference": 1 / 128,
    }


# -- triangle program ----------------------------------------------------------


def h_function(t0: float, t1: float, t2: float, t3: float) -> float:
    return (
        t1 * t1 / 2
        + 5 * t2 * t2 / 2
        + 9 * t3 * t3 / 2
        + 3 * t0 * (t2 + t3)
        + 4 * t1 * t2
        + 6 * t1 * t3
        + 7 * t2 * t3
    )


def _f_radicand(t1, t3):
    return 8 * t1 * t1 + (32 * t3 + 8) * t1 + 16 * t3 * t3 + 16 * t3 + 2


def f_function(t1: float, t3: float) -> float:
    radicand = _f_radicand(t1, t3)
    if radicand < 0:
        raise InputError(f"negative radicand {radicand} at (t1, t3) = ({t1}, {t3})")
    return 3 * t1 + 5 * t3 + 2 - math.sqrt(radicand)


@dataclass
class TriangleProgramSolution:
    value: float
    argmin: Tuple[float, float]
    analytic_value: float
    analytic_argmin: Tuple[float, float]
    analytic_exact: sp.Expr
    grid_value: float
    grid_argmin: Tuple[float, float]
    candidates: Dict[str, float] = field(default_factory=dict)
    interior_stationary: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return abs(self.grid_value - self.analytic_value) <= Config.GRID_TOLERANCE

    def as_dict(self) -> Dict[str, object]:
        return {
            "value": self.value,
            "argmin": list(self.argmin),
            "analytic_value": self.analytic_value,
            "grid_value": self.grid_value,
            "grid_argmin": list(self.grid_argmin),
            "candidates": dict(self.candidates),
            "agree": self.agree,
        }


_T1, _T3, _S = sp.symbols("t1 t3 s", real=True)


def _symbolic_f(t1, t3) -> sp.Expr:
    return 3 * t1 + 5 * t3 + 2 - sp.sqrt(_f_radicand(t1, t3))


def _interior_stationary_points() -> List[Tuple[sp.Expr, sp.Expr]]:
    """Points of the open triangle where both partials of f vanish.

    Both partials vanish iff 6 sqrt(R) = dR/dt1 and 10 sqrt(R) = dR/dt3,
    i.e. 10 dR/dt1 = 6 dR/dt3 and (dR/dt1)^2 = 36 R with dR/dt1 >= 0.
    """
    radicand = _f_radicand(_T1, _T3)
    r1, r3 = sp.diff(radicand, _T1), sp.diff(radicand, _T3)
    points = []
    for sol in sp.solve([10 * r1 - 6 * r3, r1 ** 2 - 36 * radicand], [_T1, _T3], dict=True):
        a, b = sol.get(_T1), sol.get(_T3)
        if a is None or b is None or not (a.is_real and b.is_real):
            continue
        if a > 0 and b > 0 and a + b < sp.Rational(1, 3) and r1.subs(sol) >= 0:
            points.append((a, b))
    return points


def _segment_stationary(t1_of_s: sp.Expr, t3_of_s: sp.Expr) -> List[sp.Expr]:
    """Stationary parameters s in [0, 1/3] of f along an affine segment.

    f = L(s) - sqrt(Q(s)) with L affine of slope a; f' = 0 iff
    2a sqrt(Q) = Q', i.e. 4a^2 Q = Q'^2 with Q' of the sign of a.
    """
    linear = 3 * t1_of_s + 5 * t3_of_s + 2
    quadratic = sp.expand(_f_radicand(t1_of_s, t3_of_s))
    slope = sp.diff(linear, _S)
    dq = sp.diff(quadratic, _S)
    roots = []
    for root in sp.solve(sp.Eq(4 * slope ** 2 * quadratic, dq ** 2), _S):
        if not root.is_real or not (0 <= root <= sp.Rational(1, 3)):
            continue
        if sp.sign(dq.subs(_S, root)) == sp.sign(slope):
            roots.append(sp.nsimplify(root))
    return roots


def _analytic_minimum() -> Tuple[sp.Expr, Tuple[sp.Expr, sp.Expr], Dict[str, sp.Expr], list]:
    third = sp.Rational(1, 3)
    interior = _interior_stationary_points()
    points: Dict[str, Tuple[sp.Expr, sp.Expr]] = {
        "f(0,0)": (sp.Integer(0), sp.Integer(0)),
        "f(0,1/3)": (sp.Integer(0), third),
        "f(1/3,0)": (third, sp.Integer(0)),
    }
    segments = {
        "t3=0": (_S, sp.Integer(0)),
        "t1=0": (sp.Integer(0), _S),
        "t1+t3=1/3": (_S, third - _S),
    }
    for name, (a, b) in segments.items():
        for root in _segment_stationary(a, b):
            point = (sp.simplify(a.subs(_S, root)), sp.simplify(b.subs(_S, root)))
            points[f"stationary[{name}]({point[0]},{point[1]})"] = point
    for a, b in interior:
        points[f"interior({a},{b})"] = (a, b)
    values = {label: sp.simplify(_symbolic_f(a, b)) for label, (a, b) in points.items()}
    best = min(values, key=lambda label: float(values[label]))
    return values[best], points[best], values, interior


def _grid_minimum(points: int) -> Tuple[float, Tuple[float, float]]:
    axis = np.linspace(0.0, 1.0 / 3.0, points)
    t1, t3 = np.meshgrid(axis, axis, indexing="ij")
    feasible = t1 + t3 <= 1.0 / 3.0 + 1e-15
    values = 3 * t1 + 5 * t3 + 2 - np.sqrt(_f_radicand(t1, t3))
    values = np.where(feasible, values, np.inf)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    start = np.array([t1[i, j], t3[i, j]])
    best_value, best_point = float(values[i, j]), (float(start[0]), float(start[1]))

    refined = minimize(
        lambda x: f_function(max(x[0], 0.0), max(x[1], 0.0)),
        start,
        method="SLSQP",
        bounds=[(0.0, 1.0 / 3.0), (0.0, 1.0 / 3.0)],
        constraints=[{"type": "ineq", "fun": lambda x: 1.0 / 3.0 - x[0] - x[1]}],
        options={"ftol": 1e-14, "maxiter": 500},
    )
    x = np.clip(refined.x, 0.0, 1.0 / 3.0)
    if x[0] + x[1] <= 1.0 / 3.0 + 1e-12:
        value = f_function(float(x[0]), float(x[1]))
        if value < best_value:
            best_value, best_point = value, (float(x[0]), float(x[1]))
    return best_value, best_point


def solve_triangle_program(grid_points: int = 0) -> TriangleProgramSolution:
    """Minimise f over t1, t3 >= 0, t1 + t3 <= 1/3, analytically and on a grid."""
    exact, (a, b), values, interior = _analytic_minimum()
    grid_value, grid_argmin = _grid_minimum(grid_points or Config.GRID_POINTS)
    analytic_argmin = (float(a), float(b))
    return TriangleProgramSolution(
        value=float(exact),
        argmin=analytic_argmin,
        analytic_value=float(exact),
        analytic_argmin=analytic_argmin,
        analytic_exact=exact,
        grid_value=grid_value,
        grid_argmin=grid_argmin,
        candidates={label: float(v) for label, v in values.items()},
        interior_stationary=[(float(x), float(y)) for x, y in interior],
    )
