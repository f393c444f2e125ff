"""Boundary regularity for ``{|z1|^2 + |z2|^(1/alpha) < 1}`` and gradient evidence for custom g."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domain import ReinhardtDomain, sample_boundary

EXACT_GUARD = 1e-12


@dataclass(frozen=True)
class SmoothnessClass:
    """``kind`` is ``"Cinf"``, ``"Ck"`` (C^j but not C^(j+1)) or ``"belowC1"``."""

    kind: str
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Cinf", "Ck", "belowC1"):
            raise ValueError(f"unknown smoothness kind {self.kind!r}")
        if (self.kind == "Ck") != (self.j is not None):
            raise ValueError("j is required exactly for the Ck kind")
        if self.j is not None and self.j < 1:
            raise ValueError("Ck needs j >= 1")

    @property
    def label(self) -> str:
        return {"Cinf": "CInfinity", "belowC1": "BelowC1"}.get(self.kind, f"CExactly({self.j})")

    def at_least(self, k) -> bool:
        """Whether the class is C^k; ``k`` may be ``math.inf``."""
        if self.kind == "Cinf":
            return True
        if self.kind == "belowC1" or math.isinf(k):
            return False
        return self.j >= k

    def to_json(self) -> dict:
        return {"class": self.label, "kind": self.kind, "j": self.j}


CINF = SmoothnessClass("Cinf")
BELOW_C1 = SmoothnessClass("belowC1")


def Ck(j: int) -> SmoothnessClass:
    return SmoothnessClass("Ck", int(j))


def exceptional_index(alpha: float) -> Optional[int]:
    """``m`` with ``alpha`` within the guard of ``1/(2m)``, else None."""
    if not alpha > 0:
        return None
    m = round(1.0 / (2.0 * alpha))
    if m >= 1 and abs(alpha - 1.0 / (2 * m)) <= EXACT_GUARD:
        return int(m)
    return None


def smoothness_class_case_i(alpha: float) -> SmoothnessClass:
    """Boundary class of ``{|z1|^2 + |z2|^(1/alpha) < 1}``.

    Negative alpha and alpha = 1/(2m) give C-infinity; otherwise the boundary
    is C^k exactly for the largest k with ``alpha < 1/(2k)``.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if alpha == 0:
        raise ValueError("alpha = 0 gives the bidisc, which has no C^1 boundary")
    if alpha < 0:
        return CINF
    m = exceptional_index(alpha)
    if m is not None:
        if alpha != 1.0 / (2 * m):
            warnings.warn(f"alpha={alpha!r} is within {EXACT_GUARD} of 1/{2 * m}; "
                          "treated as C-infinity", stacklevel=2)
        return CINF
    j = math.ceil(1.0 / (2.0 * alpha)) - 1
    return BELOW_C1 if j < 1 else Ck(j)


def _graph_minus_one(alpha, t):
    # sqrt(1 - t^q) - 1 without cancellation
    s = np.power(t, 1.0 / (2.0 * alpha))
    return -s / (1.0 + np.sqrt(1.0 - s))


def _forward_difference(alpha, n, h):
    """``(Delta_h^n F(0) / h^n, roundoff bound)`` for ``F = graph - 1``."""
    i = np.arange(n + 1)
    coef = np.array([(-1) ** (n - k) * math.comb(n, k) for k in range(n + 1)], dtype=float)
    vals = _graph_minus_one(alpha, i * h)
    noise = 64.0 * np.finfo(float).eps * float(np.dot(np.abs(coef), np.abs(vals)))
    return float(np.dot(coef, vals)) / h ** n, noise / h ** n


@dataclass(frozen=True)
class WitnessReport:
    confirmed: bool
    alpha: float
    j: int
    graph: str
    steps: tuple
    order_j: tuple
    order_j1: tuple
    order_j_growth: float
    derivative_growth: tuple

    def to_json(self) -> dict:
        return {"confirmed": self.confirmed, "alpha": self.alpha, "j": self.j,
                "graph": self.graph, "steps": list(self.steps),
                "order_j": list(self.order_j), "order_j1": list(self.order_j1),
                "order_j_growth": self.order_j_growth,
                "derivative_growth": list(self.derivative_growth)}


def smoothness_witness(alpha: float, j: int, h_min: float = 1e-8, h_max: float = 1e-2,
                       threshold: float = 10.0) -> WitnessReport:
    """Finite-difference evidence that the boundary is C^j but not C^(j+1).

    The boundary near ``z2 = 0`` is the graph ``|z1| = sqrt(1 - t^(1/(2 alpha)))``
    over ``t = |z2|^2``. One-sided differences of order j and j+1 at ``t = 0``
    are taken at steps ``h_max, h_max/10, ..., h_min``. ``derivative_growth``
    lists the order-(j+1) growth over each two-decade window (NaN where the
    differences are below their roundoff bound); the verdict needs order j to
    stay bounded and the last resolved window to exceed ``threshold``.
    """
    if not alpha > 0:
        raise ValueError("the witness needs alpha > 0")
    if j < 1:
        raise ValueError("j must be >= 1")
    if h_min < 1e-12:
        raise ValueError("h_min below 1e-12 is beyond double precision for these differences")
    if not h_max >= 100 * h_min:
        raise ValueError("need at least two decades between h_min and h_max")
    decades = int(math.floor(math.log10(h_max / h_min) + 1e-9))
    steps = tuple(h_max * 10.0 ** -k for k in range(decades + 1))
    dj, nj = zip(*(_forward_difference(alpha, j, h) for h in steps))
    dj1, nj1 = zip(*(_forward_difference(alpha, j + 1, h) for h in steps))

    def growth_of(vals, noise, k):
        # NaN when either end of the window sits in roundoff
        a, b = vals[k], vals[k + 2]
        if abs(a) <= noise[k] or abs(b) <= noise[k + 2]:
            return math.nan
        return abs(b) / abs(a)

    growth = tuple(growth_of(dj1, nj1, k) for k in range(len(steps) - 2))
    resolved = [g for g in growth if not math.isnan(g)]
    j_windows = [growth_of(dj, nj, k) for k in range(len(steps) - 2)]
    # order j values that vanish into roundoff are converging to 0
    j_growth = max((g for g in j_windows if not math.isnan(g)), default=0.0)
    confirmed = bool(resolved) and j_growth <= 1.5 and resolved[-1] > threshold
    return WitnessReport(confirmed, float(alpha), int(j), "t=|z2|^2", steps, dj, dj1,
                         j_growth, growth)


def gradient_min_on_boundary(d: ReinhardtDomain, n: int = 100, tol: float = 1e-9, seed=0,
                             h: float = 1e-6) -> float:
    """Smallest Euclidean norm of ``grad g`` (in moduli) over ``n`` sampled boundary points.

    Central differences, switching to one-sided steps next to the axes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = sample_boundary(d, n, tol=tol, seed=seed)
    m1 = np.array([p.m1 for p in pts])
    m2 = np.array([p.m2 for p in pts])
    grads = []
    for axis in range(2):
        m = (m1, m2)[axis]
        step = h * np.maximum(1.0, m)
        lo = np.maximum(m - step, 0.0)
        hi = m + step
        if axis == 0:
            diff = d.g(hi, m2) - d.g(lo, m2)
        else:
            diff = d.g(m1, hi) - d.g(m1, lo)
        grads.append(diff / (hi - lo))
    norms = np.hypot(*grads)
    return float(np.min(norms))
