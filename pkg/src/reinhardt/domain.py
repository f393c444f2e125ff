"""Reinhardt domains in C^2 described by their modulus sets.

A domain is ``{g(|z1|, |z2|) < 0}`` for a signed defining function ``g`` of
the moduli, so torus invariance holds by construction. The log shadow is
``u -> g(exp(u1), exp(u2))``; monomial maps act on it affinely.

Band domains use log-residual walls (``log r + alpha*log(1-m1^2) - log m2``
and the like) combined with ``max``; this keeps the sign convention while
staying well scaled when the walls run off to 0 or infinity.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _pykernels, kernels

INF = math.inf


@dataclass(frozen=True)
class LogPoint:
    u1: float
    u2: float

    def __post_init__(self):
        if not (math.isfinite(self.u1) and math.isfinite(self.u2)):
            raise ValueError(f"LogPoint needs finite coordinates, got ({self.u1}, {self.u2})")

    def to_modulus(self) -> "ModulusPoint":
        return ModulusPoint(math.exp(self.u1), math.exp(self.u2))


@dataclass(frozen=True)
class ModulusPoint:
    m1: float
    m2: float

    def __post_init__(self):
        if not (math.isfinite(self.m1) and math.isfinite(self.m2)):
            raise ValueError(f"ModulusPoint needs finite moduli, got ({self.m1}, {self.m2})")
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError(f"moduli must be nonnegative, got ({self.m1}, {self.m2})")

    @classmethod
    def from_complex(cls, z1: complex, z2: complex) -> "ModulusPoint":
        return cls(abs(z1), abs(z2))


def _parse_R(value) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return INF
        raise ValueError(f"R must be a number or 'inf', got {value!r}")
    return float(value)


def _json_R(R: float):
    return "inf" if math.isinf(R) else R


class ReinhardtDomain:
    """Base class. Subclasses set ``kind`` and either a kernel ``code`` or override ``g``."""

    kind = "abstract"
    code: Optional[int] = None
    m1_max = 1.0

    def params(self) -> tuple:
        return ()

    def g(self, m1, m2) -> np.ndarray:
        return kernels.g_modulus(self.code, self.params(), m1, m2)

    def shadow(self, u1, u2) -> np.ndarray:
        if self.code is not None:
            return kernels.shadow(self.code, self.params(), u1, u2)
        return self.g(np.exp(u1), np.exp(u2))

    def hinge_batch(self, A, t1, t2, u1, u2) -> np.ndarray:
        if self.code is not None:
            return kernels.hinge_batch(self.code, self.params(), A, t1, t2, u1, u2)
        _, (t1, t2) = kernels._flat(t1, t2)
        _, (u1, u2) = kernels._flat(u1, u2)
        return _pykernels.hinge_with(self.shadow, np.ravel(A), t1, t2, u1, u2)

    def bisect(self, m1_in, m2_in, m1_out, m2_out, tol, maxiter=200):
        if self.code is not None:
            return kernels.bisect(self.code, self.params(), m1_in, m2_in, m1_out, m2_out,
                                  tol, maxiter)
        _, arrs = kernels._flat(m1_in, m2_in, m1_out, m2_out)
        return _pykernels.bisect_with(self.g, *arrs, tol, maxiter)

    def axis_flags(self) -> tuple[bool, bool]:
        raise NotImplementedError

    def fiber(self, m1):
        """Open interval ``(lo, hi)`` of admissible ``|z2|`` over ``|z1| = m1``, or None."""
        return None

    log_box = ((-5.0, 5.0), (-5.0, 5.0))

    def to_json(self) -> dict:
        raise NotImplementedError


def _disc_s(m1):
    m1 = np.asarray(m1, dtype=float)
    with np.errstate(all="ignore"):
        return np.where(m1 < 1.0, 1.0 - m1 * m1, np.nan)


@dataclass(frozen=True)
class TheoremI(ReinhardtDomain):
    """``{|z1|^2 + |z2|^(1/alpha) < 1}``; for alpha < 0 the axis ``z2 = 0`` is excluded."""

    alpha: float
    kind = "theorem_i"
    code = kernels.THEOREM_I

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha == 0:
            raise ValueError("theorem_i needs a finite alpha != 0")

    def params(self):
        return (self.alpha,)

    def axis_flags(self):
        return (True, self.alpha > 0)

    def fiber(self, m1):
        with np.errstate(all="ignore"):
            wall = np.power(_disc_s(m1), self.alpha)
        if self.alpha > 0:
            return np.zeros_like(wall), wall
        return wall, np.full_like(wall, INF)

    def to_json(self):
        return {"kind": self.kind, "alpha": self.alpha}


@dataclass(frozen=True)
class TheoremII(ReinhardtDomain):
    """``{|z1| < 1, (1-|z1|^2)^alpha < |z2| < R (1-|z1|^2)^alpha}`` with alpha < 0, 1 < R <= inf."""

    alpha: float
    R: float = INF
    kind = "theorem_ii"
    code = 12

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha < 0):
            raise ValueError("theorem_ii needs alpha < 0")
        if not self.R > 1:
            raise ValueError("theorem_ii needs 1 < R <= inf")

    def params(self):
        return (self.alpha, 1.0, self.R)

    def axis_flags(self):
        return (True, False)

    def fiber(self, m1):
        with np.errstate(all="ignore"):
            lo = np.power(_disc_s(m1), self.alpha)
        return lo, self.R * lo

    def to_json(self):
        return {"kind": self.kind, "alpha": self.alpha, "R": _json_R(self.R)}


@dataclass(frozen=True)
class TheoremIII(ReinhardtDomain):
    """``{exp(beta |z1|^2) < |z2| < R exp(beta |z1|^2)}`` with beta != 0, 1 < R <= inf."""

    beta: float
    R: float = INF
    kind = "theorem_iii"
    code = 14

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta == 0:
            raise ValueError("theorem_iii needs a finite beta != 0")
        if not self.R > 1:
            raise ValueError("theorem_iii needs 1 < R <= inf")

    @property
    def m1_max(self):
        return math.sqrt(12.0 / abs(self.beta))

    def params(self):
        return (self.beta, 1.0, self.R)

    def axis_flags(self):
        return (True, False)

    def fiber(self, m1):
        m1 = np.asarray(m1, dtype=float)
        with np.errstate(over="ignore"):
            lo = np.exp(self.beta * m1 * m1)
        return lo, self.R * lo

    def to_json(self):
        return {"kind": self.kind, "beta": self.beta, "R": _json_R(self.R)}


@dataclass(frozen=True, eq=False)
class CustomDomain(ReinhardtDomain):
    """Domain ``{g < 0}`` for a user function of the moduli.

    The axis flags are stored, not probed: ``g`` on a measure-zero axis cannot
    be sampled reliably. ``log_box`` bounds the rejection sampler.
    """

    g_func: Callable
    axis1: bool = False
    axis2: bool = False
    expr: Optional[str] = None
    log_box: tuple = ((-5.0, 5.0), (-5.0, 5.0))
    code: Optional[int] = None
    kernel_params: tuple = field(default=())
    kind = "custom"

    def params(self):
        return self.kernel_params

    def g(self, m1, m2):
        if self.code is not None:
            return kernels.g_modulus(self.code, self.kernel_params, m1, m2)
        m1 = np.asarray(m1, dtype=float)
        m2 = np.asarray(m2, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(self.g_func(m1, m2), dtype=float)
        out = np.broadcast_to(out, np.broadcast_shapes(m1.shape, m2.shape))
        return np.where(np.isnan(out), INF, out)

    def axis_flags(self):
        return (bool(self.axis1), bool(self.axis2))

    def to_json(self):
        if self.expr is None:
            raise ValueError("custom domain without an expression has no JSON form")
        return {"kind": self.kind, "expr": self.expr, "axis1": bool(self.axis1),
                "axis2": bool(self.axis2)}


def custom_from_expr(expr: str, axis1: bool = False, axis2: bool = False,
                     log_box=None) -> CustomDomain:
    from .expr import Expression

    compiled = Expression(expr, ("m1", "m2"))
    kw = {} if log_box is None else {"log_box": tuple(map(tuple, log_box))}
    return CustomDomain(compiled, axis1=axis1, axis2=axis2, expr=expr, **kw)


def _as_modulus(p) -> ModulusPoint:
    if isinstance(p, ModulusPoint):
        return p
    m1, m2 = p
    return ModulusPoint(float(m1), float(m2))


def contains(d: ReinhardtDomain, p) -> bool:
    """Strict membership; boundary points and excluded axes are outside."""
    p = _as_modulus(p)
    return bool(d.g(p.m1, p.m2) < 0.0)


def shadow_value(d: ReinhardtDomain, u) -> float:
    if not isinstance(u, LogPoint):
        u = LogPoint(*map(float, u))
    return float(d.shadow(u.u1, u.u2))


def axis_intersections(d: ReinhardtDomain) -> tuple[bool, bool]:
    """``(meets {z1=0}, meets {z2=0})``."""
    return d.axis_flags()


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_interior(d: ReinhardtDomain, n: int, seed=0, margin: float = 0.0,
                    log_span: float = 12.0, max_rounds: int = 200):
    """``n`` points with positive moduli and ``g < -margin``, as arrays ``(m1, m2)``.

    Parametric domains are sampled fiberwise (``|z1|`` uniform, ``log|z2|``
    uniform across the fiber, unbounded ends capped at ``log_span``); custom
    domains by rejection from ``log_box``.
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rng = _rng(seed)
    got1, got2, have = [], [], 0
    for _ in range(max_rounds):
        k = max(2 * (n - have), 256)
        lo_hi = d.fiber(np.full(1, 0.5 * d.m1_max))
        if lo_hi is not None:
            m1 = d.m1_max * rng.uniform(size=k)
            lo, hi = d.fiber(m1)
            with np.errstate(divide="ignore"):
                llo, lhi = np.log(lo), np.log(hi)
            llo = np.where(np.isinf(llo), lhi - log_span, llo)
            lhi = np.where(np.isinf(lhi), llo + log_span, lhi)
            u2 = rng.uniform(size=k) * (lhi - llo) + llo
            m2 = np.exp(u2)
        else:
            (a, b), (c, e) = d.log_box
            m1 = np.exp(rng.uniform(a, b, size=k))
            m2 = np.exp(rng.uniform(c, e, size=k))
        with np.errstate(invalid="ignore"):
            keep = (m1 > 0) & (m2 > 0) & np.isfinite(m2) & (d.g(m1, m2) < -margin)
        got1.append(m1[keep])
        got2.append(m2[keep])
        have += int(keep.sum())
        if have >= n:
            break
    else:
        raise RuntimeError(f"interior sampler found only {have} of {n} points")
    return np.concatenate(got1)[:n], np.concatenate(got2)[:n]


def sample_interior_log(d: ReinhardtDomain, n: int, seed=0, margin: float = 0.0):
    m1, m2 = sample_interior(d, n, seed=seed, margin=margin)
    return np.log(m1), np.log(m2)


class BoundarySamplingError(RuntimeError):
    pass


def sample_boundary(d: ReinhardtDomain, n: int, tol: float = 1e-9, seed=0,
                    max_rays: int = 200_000) -> list[ModulusPoint]:
    """Points with ``|g| <= tol`` found by bisection along rays from interior seeds.

    Rays live in the closed quadrant of moduli. A ray that leaves through an
    axis while still inside, or never leaves within 60 doublings, is skipped.
    """
    if n < 1:
        raise ValueError("need n >= 1 boundary points")
    if not tol > 0:
        raise ValueError("tol must be positive")
    rng = _rng(seed)
    found1, found2 = [], []
    have = tried = 0
    batch = max(4 * n, 64)
    while have < n and tried < max_rays:
        try:
            s1, s2 = sample_interior(d, batch, seed=rng, max_rounds=20)
        except RuntimeError:
            raise BoundarySamplingError(f"found {have} of {n} boundary points") from None
        tried += batch
        theta = rng.uniform(0.0, 2.0 * math.pi, size=batch)
        d1, d2 = np.cos(theta), np.sin(theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            t_edge = np.fmin(np.where(d1 < 0, s1 / -d1, INF), np.where(d2 < 0, s2 / -d2, INF))
        step = 0.01 * (1.0 + np.hypot(s1, s2))
        out1 = np.full(batch, np.nan)
        out2 = np.full(batch, np.nan)
        open_ = np.ones(batch, dtype=bool)
        for k in range(60):
            t = np.fmin(step * 2.0 ** k, t_edge)
            p1 = np.maximum(s1 + t * d1, 0.0)
            p2 = np.maximum(s2 + t * d2, 0.0)
            g = d.g(p1, p2)
            hit = open_ & (g >= 0)
            out1[hit], out2[hit] = p1[hit], p2[hit]
            open_ &= ~hit
            open_ &= ~(t >= t_edge)
            if not open_.any():
                break
        ok = ~np.isnan(out1)
        if ok.any():
            r1, r2, good = d.bisect(s1[ok], s2[ok], out1[ok], out2[ok], tol)
            found1.append(r1[good])
            found2.append(r2[good])
            have += int(good.sum())
    if have < n:
        raise BoundarySamplingError(f"found {have} of {n} boundary points")
    m1 = np.concatenate(found1)[:n]
    m2 = np.concatenate(found2)[:n]
    return [ModulusPoint(float(a), float(b)) for a, b in zip(m1, m2)]


@dataclass(frozen=True)
class ShadowGrid:
    bounds: tuple
    resolution: tuple
    values: np.ndarray

    def coordinates(self):
        (a, b), (c, e) = self.bounds
        u1 = np.linspace(a, b, self.resolution[0])
        u2 = np.linspace(c, e, self.resolution[1])
        U1, U2 = np.meshgrid(u1, u2, indexing="ij")
        return U1.ravel(), U2.ravel()

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u1", "u2", "g"])
        for a, b, v in zip(*self.coordinates(), self.values):
            w.writerow([repr(float(a)), repr(float(b)), repr(float(v))])
        return buf.getvalue()


def rasterize_shadow(d: ReinhardtDomain, bounds, resolution) -> ShadowGrid:
    """Shadow values on a regular grid, row-major with ``u1`` as the slow index."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    resolution = tuple(int(r) for r in resolution)
    if len(resolution) != 2 or min(resolution) < 2:
        raise ValueError("resolution must be >= 2 per axis")
    (a, b), (c, e) = bounds
    box = tuple((float(lo), float(hi)) for lo, hi in ((a, b), (c, e)))
    if not all(math.isfinite(x) for pair in box for x in pair):
        raise ValueError("bounds must be finite")
    grid = ShadowGrid(box, resolution, np.empty(0))
    u1, u2 = grid.coordinates()
    return ShadowGrid(box, resolution, d.shadow(u1, u2))
