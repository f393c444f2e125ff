"""Monomial (algebraic) automorphisms of (C*)^2 and their action on log shadows.

A map ``z_i -> lambda_i z1^a_i1 z2^a_i2`` with ``det(a) = +-1`` is stored up to
the torus action, i.e. by the integer matrix and ``c_i = log|lambda_i|``. On log
moduli it acts as ``u -> A u + c``.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .domain import LogPoint, ModulusPoint, ReinhardtDomain, contains, sample_interior_log

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))
SWAP: Matrix = ((0, 1), (1, 0))


def _as_matrix(A) -> Matrix:
    rows = [list(r) for r in A]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("A must be 2x2")
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, float):
                if not x.is_integer():
                    raise ValueError(f"exponent matrix entries must be integers, got {x}")
                x = int(x)
            if not isinstance(x, (int, np.integer)) or isinstance(x, bool):
                raise ValueError(f"exponent matrix entries must be integers, got {x!r}")
            row.append(int(x))
        out.append(tuple(row))
    return (out[0], out[1])


def det(A: Matrix) -> int:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def int_inverse(A: Matrix) -> Matrix:
    s = det(A)  # +-1, so 1/det == det
    return ((s * A[1][1], -s * A[0][1]), (-s * A[1][0], s * A[0][0]))


@dataclass(frozen=True)
class MonomialMap:
    A: Matrix = IDENTITY
    logscale: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        A = _as_matrix(self.A)
        if det(A) not in (1, -1):
            raise ValueError(f"exponent matrix must be unimodular, det = {det(A)}")
        c = tuple(float(x) for x in self.logscale)
        if len(c) != 2 or not all(math.isfinite(x) for x in c):
            raise ValueError("logscale must be two finite reals")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "logscale", c)

    @classmethod
    def identity(cls) -> "MonomialMap":
        return cls()

    @classmethod
    def swap(cls, c1: float = 0.0, c2: float = 0.0) -> "MonomialMap":
        return cls(SWAP, (c1, c2))

    @classmethod
    def scaling(cls, c1: float, c2: float) -> "MonomialMap":
        return cls(IDENTITY, (c1, c2))

    @property
    def det(self) -> int:
        return det(self.A)

    def apply_log(self, u1, u2):
        (a, b), (c, d) = self.A
        return a * u1 + b * u2 + self.logscale[0], c * u1 + d * u2 + self.logscale[1]

    def apply_modulus(self, m1, m2):
        """Image moduli; ``0**0 = 1`` and negative powers of 0 give inf."""
        m1 = np.asarray(m1, dtype=float)
        m2 = np.asarray(m2, dtype=float)
        (a, b), (c, d) = self.A
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            n1 = math.exp(self.logscale[0]) * np.power(m1, a) * np.power(m2, b)
            n2 = math.exp(self.logscale[1]) * np.power(m1, c) * np.power(m2, d)
        return n1, n2

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "logscale": list(self.logscale)}

    @classmethod
    def from_json(cls, obj) -> "MonomialMap":
        if "A" not in obj:
            raise ValueError("map JSON needs an 'A' field")
        return cls(obj["A"], tuple(obj.get("logscale", (0.0, 0.0))))


def compose(f: MonomialMap, g: MonomialMap) -> MonomialMap:
    """``f o g``."""
    (a, b), (c, d) = f.A
    g1, g2 = g.logscale
    c_new = (a * g1 + b * g2 + f.logscale[0], c * g1 + d * g2 + f.logscale[1])
    return MonomialMap(matmul(f.A, g.A), c_new)


def invert(f: MonomialMap) -> MonomialMap:
    B = int_inverse(f.A)
    (a, b), (c, d) = B
    c1, c2 = f.logscale
    return MonomialMap(B, (-(a * c1 + b * c2), -(c * c1 + d * c2)))


def power(f: MonomialMap, k: int) -> MonomialMap:
    base = f if k >= 0 else invert(f)
    out = MonomialMap.identity()
    for _ in range(abs(k)):
        out = compose(base, out)
    return out


def apply_log(f: MonomialMap, u) -> LogPoint:
    if not isinstance(u, LogPoint):
        u = LogPoint(*map(float, u))
    v1, v2 = f.apply_log(u.u1, u.u2)
    return LogPoint(float(v1), float(v2))


def torus_equal(f: MonomialMap, g: MonomialMap, tol: float = 1e-6) -> bool:
    return f.A == g.A and all(abs(x - y) <= tol for x, y in zip(f.logscale, g.logscale))


# --- candidate shapes -------------------------------------------------------


class ShapeTag(str, enum.Enum):
    DIAGONAL_ID = "diagonal_id"
    DIAGONAL_SWAP = "diagonal_swap"
    AXIS_FORM_8 = "axis_form_8"
    AXIS_FORM_9 = "axis_form_9"


class NoAxisError(ValueError):
    """The domain meets neither coordinate axis, so no shape restriction applies."""


@dataclass(frozen=True)
class CandidateShape:
    """Integer-matrix template for automorphisms of an axis-meeting domain.

    ``axis`` is the coordinate axis ``{z_axis = 0}`` the domain meets (None when
    it meets both). The axis-form templates are written for axis 1 and
    conjugated by the swap for axis 2.
    """

    tag: ShapeTag
    axis: Optional[int] = None
    free: tuple = ("c1", "c2")

    def matrix(self, a: int = 0) -> Matrix:
        if self.tag is ShapeTag.DIAGONAL_ID:
            return IDENTITY
        if self.tag is ShapeTag.DIAGONAL_SWAP:
            return SWAP
        sign = 1 if self.tag is ShapeTag.AXIS_FORM_8 else -1
        A = ((1, a), (0, sign))
        if self.axis == 2:
            A = matmul(matmul(SWAP, A), SWAP)
        return A

    def matrices(self, bound: int) -> list[Matrix]:
        if "a" not in self.free:
            return [self.matrix()]
        return [self.matrix(a) for a in range(-bound, bound + 1)]

    def matches(self, A: Matrix) -> bool:
        if "a" not in self.free:
            return A == self.matrix()
        a = A[0][1] if self.axis == 1 else A[1][0]
        return A == self.matrix(a)


def candidate_shapes(axis_flags) -> list[CandidateShape]:
    meets1, meets2 = (bool(x) for x in axis_flags)
    if meets1 and meets2:
        return [CandidateShape(ShapeTag.DIAGONAL_ID), CandidateShape(ShapeTag.DIAGONAL_SWAP)]
    if meets1 or meets2:
        axis = 1 if meets1 else 2
        return [CandidateShape(ShapeTag.AXIS_FORM_8, axis, ("c1", "c2", "a")),
                CandidateShape(ShapeTag.AXIS_FORM_9, axis, ("c1", "c2", "a"))]
    raise NoAxisError("domain meets neither coordinate axis; no candidate shapes apply")


def shape_of(A: Matrix, axis_flags) -> Optional[ShapeTag]:
    for shape in candidate_shapes(axis_flags):
        if shape.matches(A):
            return shape.tag
    return None


def compatible_with_axes(A: Matrix, axis_flags) -> bool:
    """Whether the monomial map and its inverse are holomorphic on a domain with these axis data.

    Every component must have nonnegative exponents in the variables that can
    vanish, and a component whose axis is avoided cannot depend on them.
    """
    meets = [bool(x) for x in axis_flags]
    for M in (A, int_inverse(A)):
        for i in range(2):
            for j in range(2):
                if meets[j] and (M[i][j] < 0 or (not meets[i] and M[i][j] != 0)):
                    return False
    return True


def unimodular_matrices(bound: int) -> list[Matrix]:
    rng = range(-bound, bound + 1)
    out = [((a, b), (c, d)) for a, b, c, d in itertools.product(rng, repeat=4)
           if a * d - b * c in (1, -1)]
    return sorted(out)


# --- preservation -----------------------------------------------------------


@dataclass(frozen=True)
class Preservation:
    """Outcome of :func:`preserves`; axis witnesses are given as moduli."""

    preserved: bool
    witness: Optional[LogPoint] = None
    direction: Optional[str] = None
    samples: int = 0
    max_image_shadow: float = -math.inf

    @property
    def verdict(self) -> str:
        return "preserved" if self.preserved else "violated"


def preserves(d: ReinhardtDomain, f: MonomialMap, n: int = 4000, tol: float = 1e-6,
              seed=0, samples=None) -> Preservation:
    """Sampled check that ``f`` and ``f^-1`` keep interior points interior.

    Samples are log points with shadow ``< -tol``; images must have shadow
    ``< tol``. ``samples`` may be given as ``(u1, u2)`` arrays.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    flags = d.axis_flags()
    if any(flags) and not compatible_with_axes(f.A, flags):
        raise ValueError(f"map with exponent matrix {f.A} is not holomorphic on a domain "
                         f"with axis data {flags}")
    if samples is None:
        u1, u2 = sample_interior_log(d, n, seed=seed, margin=tol)
    else:
        u1, u2 = (np.asarray(x, dtype=float) for x in samples)
        keep = d.shadow(u1, u2) < -tol
        u1, u2 = u1[keep], u2[keep]
    if u1.size == 0:
        raise ValueError("no interior samples to check")
    worst = -math.inf
    first = None
    for name, F in (("forward", f), ("inverse", invert(f))):
        v = d.shadow(*F.apply_log(u1, u2))
        worst = max(worst, float(np.max(v)))
        bad = np.flatnonzero(~(v < tol))
        if bad.size and (first is None or bad[0] < first[0]):
            first = (int(bad[0]), name)
    if first is not None:
        i, name = first
        return Preservation(False, LogPoint(float(u1[i]), float(u2[i])), name,
                            int(u1.size), worst)
    # points on the coordinate axes the domain meets, mapped in moduli
    with np.errstate(over="ignore"):
        m1, m2 = np.exp(u1), np.exp(u2)
    for axis, meets in enumerate(flags):
        if not meets:
            continue
        a1 = np.zeros_like(m1) if axis == 0 else m1
        a2 = np.zeros_like(m2) if axis == 1 else m2
        keep = d.g(a1, a2) < -tol
        a1, a2 = a1[keep], a2[keep]
        for name, F in (("forward", f), ("inverse", invert(f))):
            bad = np.flatnonzero(~(d.g(*F.apply_modulus(a1, a2)) < tol))
            if bad.size:
                i = int(bad[0])
                w = ModulusPoint(float(a1[i]), float(a2[i]))
                return Preservation(False, w, name + "_axis", int(u1.size), worst)
    return Preservation(True, samples=int(u1.size), max_image_shadow=worst)


# --- search -----------------------------------------------------------------

_DIRS = np.array([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)],
                 dtype=float)


class _Objective:
    """Forward + inverse saturated hinge for one exponent matrix."""

    def __init__(self, d, A, u1, u2):
        self.d, self.A, self.B = d, A, int_inverse(A)
        self.u1, self.u2 = u1, u2
        self.calls = 0

    def __call__(self, c1, c2):
        c1 = np.atleast_1d(np.asarray(c1, dtype=float))
        c2 = np.atleast_1d(np.asarray(c2, dtype=float))
        (a, b), (c, e) = self.B
        t1, t2 = -(a * c1 + b * c2), -(c * c1 + e * c2)
        self.calls += c1.size
        fwd = self.d.hinge_batch(self.A, c1, c2, self.u1, self.u2)
        inv = self.d.hinge_batch(self.B, t1, t2, self.u1, self.u2)
        return fwd + inv


def _pattern_search(obj, c, step, bound, min_step=1e-10, max_iter=2000):
    val = float(obj(*c)[0])
    for _ in range(max_iter):
        if val <= 0.0 or step < min_step:
            break
        cand = np.clip(c[None, :] + step * _DIRS, -bound, bound)
        vals = obj(cand[:, 0], cand[:, 1])
        k = int(np.argmin(vals))
        if vals[k] < val:
            c, val = cand[k], float(vals[k])
        else:
            step *= 0.5
    return c, val


_CENTER_DIRS = np.array([(1.0, 0.0), (0.0, 1.0), (math.sqrt(0.5), math.sqrt(0.5)),
                         (math.sqrt(0.5), -math.sqrt(0.5))])


def _center(obj, c, reach, rounds=3, iters=40):
    """Move ``c`` toward the middle of the zero set of ``obj`` (axes and diagonals)."""
    for _ in range(rounds):
        for e in _CENTER_DIRS:
            ends = []
            for sgn in (1.0, -1.0):
                lo, hi = 0.0, reach
                if obj(*(c + sgn * hi * e))[0] <= 0.0:
                    ends.append(hi)
                    continue
                for _ in range(iters):
                    mid = 0.5 * (lo + hi)
                    if obj(*(c + sgn * mid * e))[0] <= 0.0:
                        lo = mid
                    else:
                        hi = mid
                ends.append(lo)
            c = c + 0.5 * (ends[0] - ends[1]) * e
    return c


def _margin_layer(d, u1, u2, level, rng, doublings=30, iters=50):
    """Points on ``{shadow = level}`` reached along random log rays from ``(u1, u2)``.

    Near-boundary samples pin down the zero set of the hinge objective; uniform
    interior samples leave thin parts of the boundary almost unconstrained.
    """
    theta = rng.uniform(0.0, 2.0 * np.pi, size=u1.size)
    d1, d2 = np.cos(theta), np.sin(theta)
    lo = np.zeros(u1.size)
    hi = np.full(u1.size, np.nan)
    for k in range(doublings):
        t = 0.01 * 2.0 ** k
        out = np.isnan(hi) & ~(d.shadow(u1 + t * d1, u2 + t * d2) < level)
        hi[out] = t
        lo = np.where(np.isnan(hi), t, lo)
    ok = ~np.isnan(hi)
    u1, u2, d1, d2, lo, hi = u1[ok], u2[ok], d1[ok], d2[ok], lo[ok], hi[ok]
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = d.shadow(u1 + mid * d1, u2 + mid * d2) < level
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return u1 + lo * d1, u2 + lo * d2


@dataclass
class SearchReport:
    classes: list
    infinite_mod_torus: bool
    generator: Optional[MonomialMap]
    residuals: list = field(default_factory=list)
    shape_counts: dict = field(default_factory=dict)
    matrices_scanned: int = 0
    rejected_starts: int = 0
    settings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "classes": [f.to_json() for f in self.classes],
            "infinite_mod_torus": self.infinite_mod_torus,
            "generator": None if self.generator is None else self.generator.to_json(),
            "residuals": self.residuals,
            "shape_counts": self.shape_counts,
            "matrices_scanned": self.matrices_scanned,
            "rejected_starts": self.rejected_starts,
            "settings": self.settings,
            "notes": self.notes,
        }


def _local_minima(obj_grid, screen):
    n1, n2 = obj_grid.shape
    padded = np.pad(obj_grid, 1, constant_values=np.inf)
    is_min = np.ones_like(obj_grid, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= obj_grid <= padded[1 + di:1 + di + n1, 1 + dj:1 + dj + n2]
    is_min &= obj_grid < screen
    idx = np.argwhere(is_min)
    order = np.argsort(obj_grid[is_min], kind="stable")
    return [tuple(idx[k]) for k in order]


def _sort_key(f: MonomialMap):
    return (f.A, f.logscale)


def search_aut_alg(d: ReinhardtDomain, entry_bound: int = 3, scale_box: float = 4.0,
                   scale_steps: int = 33, tol: float = 1e-3, n_samples: int = 10_000,
                   seed=0, coarse: int = 512, medium: int = 2048,
                   max_starts: int = 12, screen: float = 0.5) -> SearchReport:
    """Search torus classes of monomial automorphisms with bounded exponents.

    Axis-meeting domains only get the candidate-shape matrices; otherwise every
    unimodular matrix with ``|entries| <= entry_bound`` is scanned. For each
    matrix the log-scale grid ``[-scale_box, scale_box]^2`` is scanned on a
    subsample, grid minima are refined by pattern search and centered, and
    survivors are confirmed with :func:`preserves` on all samples.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be >= 1")
    if scale_steps < 2:
        raise ValueError("scale_steps must be >= 2")
    if not (scale_box > 0 and tol > 0):
        raise ValueError("scale_box and tol must be positive")
    flags = d.axis_flags()
    if any(flags):
        shapes = candidate_shapes(flags)
        mats = sorted({A for s in shapes for A in s.matrices(entry_bound)})
    else:
        shapes = []
        mats = unimodular_matrices(entry_bound)

    rng = np.random.default_rng(seed)
    i1, i2 = sample_interior_log(d, n_samples - n_samples // 2, seed=rng, margin=tol)
    b1, b2 = _margin_layer(d, i1[:n_samples // 2], i2[:n_samples // 2], -1.5 * tol, rng)
    u1, u2 = np.concatenate([i1, b1]), np.concatenate([i2, b2])
    mix = rng.permutation(u1.size)
    u1, u2 = u1[mix], u2[mix]
    cu1, cu2 = u1[:coarse], u2[:coarse]
    mu1, mu2 = u1[:medium], u2[:medium]
    grid = np.linspace(-scale_box, scale_box, scale_steps)
    spacing = grid[1] - grid[0]
    G1, G2 = np.meshgrid(grid, grid, indexing="ij")

    found: list[MonomialMap] = []
    residuals = []
    rejected = 0
    for A in mats:
        coarse_obj = _Objective(d, A, cu1, cu2)
        values = coarse_obj(G1.ravel(), G2.ravel()).reshape(G1.shape)
        fine = _Objective(d, A, mu1, mu2)
        for i, j in _local_minima(values, screen)[:max_starts]:
            c0 = np.array([grid[i], grid[j]])
            if any(f.A == A and np.max(np.abs(np.array(f.logscale) - c0)) <= 2 * spacing
                   for f in found):
                continue
            c, val = _pattern_search(fine, c0, spacing, scale_box + spacing)
            if val > 0.0:
                rejected += 1
                continue
            c = _center(fine, c, spacing)
            cand = MonomialMap(A, tuple(c))
            check = preserves(d, cand, tol=tol, samples=(u1, u2))
            if not check.preserved:
                rejected += 1
                continue
            if any(torus_equal(cand, f) for f in found):
                continue
            found.append(cand)
            residuals.append({"A": [list(r) for r in A], "logscale": list(cand.logscale),
                              "objective": float(fine(*c)[0]),
                              "max_image_shadow": check.max_image_shadow})

    if not any(f.A == IDENTITY and max(map(abs, f.logscale)) <= tol for f in found):
        found.append(MonomialMap.identity())
    order = sorted(range(len(found)), key=lambda k: _sort_key(found[k]))
    found = [found[k] for k in order]

    translations = [f for f in found if f.A == IDENTITY and math.hypot(*f.logscale) > tol]
    generator = None
    if translations:
        generator = min(translations,
                        key=lambda f: (round(math.hypot(*f.logscale), 6), f.logscale[0] < 0,
                                       f.logscale))
    counts = {}
    if shapes:
        for s in shapes:
            counts[s.tag.value] = sum(1 for f in found if s.matches(f.A))
    notes = [f"exponent search bounded by |a_ij| <= {entry_bound}; maps outside the bound "
             "are not ruled out"]
    return SearchReport(
        classes=found,
        infinite_mod_torus=generator is not None,
        generator=generator,
        residuals=residuals,
        shape_counts=counts,
        matrices_scanned=len(mats),
        rejected_starts=rejected,
        settings={"entry_bound": entry_bound, "scale_box": scale_box,
                  "scale_steps": scale_steps, "tol": tol, "n_samples": n_samples,
                  "seed": seed if isinstance(seed, int) else None, "coarse": coarse,
                  "medium": medium},
        notes=notes,
    )


# --- line containment probe -------------------------------------------------


@dataclass(frozen=True)
class OrbitCertificate:
    """``contains_line``: the line ``{z_axis = level}`` lies in the domain."""

    verdict: str
    axis: Optional[int] = None
    level: Optional[float] = None
    iterations: int = 0
    reason: Optional[str] = None
    radii: tuple = ()

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "axis": self.axis, "level": self.level,
                "iterations": self.iterations, "reason": self.reason,
                "radii": list(self.radii)}


def _disc_inside(d, free, radius, level, n_check):
    t = np.linspace(0.0, 1.0, n_check, endpoint=False) * radius
    lv = np.full_like(t, level)
    m1, m2 = (t, lv) if free == 0 else (lv, t)
    return bool(np.all(d.g(m1, m2) < 0.0))


def line_containment_probe(d: ReinhardtDomain, f: MonomialMap, axis: int, level: float,
                           radius: float, K: int, escape: float = math.exp(20.0),
                           inverse: bool = False, n_check: int = 16) -> OrbitCertificate:
    """Iterate ``f`` (or ``f^-1``) on the disc ``{|z_axis| < radius, |z_other| = level}``.

    A monomial map sends such a disc to another one as long as exactly one image
    coordinate depends on the free variable, with exponent 1. Radii past
    ``escape`` with every image disc still inside and a fixed level certify the
    whole line ``{z_other = level}``.
    """
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    if K < 1:
        raise ValueError("K must be >= 1")
    if not radius > 0 or not escape > radius:
        raise ValueError("need 0 < radius < escape")
    level = abs(level)
    free, other = axis - 1, 2 - axis
    if not _disc_inside(d, free, radius, level, n_check):
        raise ValueError("seed disc is not contained in the domain")
    F = invert(f) if inverse else f
    A, c = F.A, F.logscale
    rho, lev = float(radius), float(level)
    radii = [rho]

    def stop(reason, k):
        return OrbitCertificate("inconclusive", iterations=k, reason=reason, radii=tuple(radii))

    for k in range(1, K + 1):
        rows = [i for i in range(2) if A[i][free] != 0]
        if len(rows) != 1:
            return stop("image of the disc is not a disc", k)
        i = rows[0]
        j = 1 - i
        if A[i][free] != 1:
            return stop("disc maps onto the exterior of a disc", k)
        with np.errstate(divide="ignore"):
            lev_pow_i = float(np.power(lev, A[i][other]))
            lev_new = math.exp(c[j]) * float(np.power(lev, A[j][other]))
        rho_new = math.exp(c[i]) * rho * lev_pow_i
        if not (math.isfinite(rho_new) and rho_new > 0 and math.isfinite(lev_new)):
            return stop("disc degenerates on a coordinate axis", k)
        if not _disc_inside(d, i, rho_new, lev_new, n_check):
            return stop("image disc leaves the domain", k)
        stable = (i == free) and (lev_new == lev or abs(lev_new - lev) <= 1e-12 * max(lev, 1.0))
        free, other, rho, lev = i, j, rho_new, lev_new
        radii.append(rho)
        if rho > escape:
            if not stable:
                return stop("radii escape but the level drifts", k)
            return OrbitCertificate("contains_line", axis=other + 1, level=lev, iterations=k,
                                    radii=tuple(radii))
    return OrbitCertificate("bounded", iterations=K, radii=tuple(radii))
