"""Worked examples: a sine-band domain in C^2 with an infinite monomial family, and a C^3 family."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .domain import CustomDomain, sample_interior
from .expr import Expression
from .monomial import MonomialMap, preserves

EXAMPLE1_EXPR = "max(sin(log(m1/m2)) - log(m1*m2), log(m1*m2) - sin(log(m1/m2)) - 1/2)"
EXAMPLE1_ANNULUS = (-1.0, 1.5)  # log|z1 z2| range
EXAMPLE1_COVER = ((-0.25, 0.5), (-1.0, -0.125), (0.25, 1.5))


def example1_domain() -> CustomDomain:
    """``{sin(log(m1/m2)) < log(m1 m2) < sin(log(m1/m2)) + 1/2}``; avoids both axes."""
    return CustomDomain(Expression(EXAMPLE1_EXPR), axis1=False, axis2=False, expr=EXAMPLE1_EXPR,
                        log_box=((-5.0, 5.0), (-5.0, 5.0)), code=kernels.SINE_BAND,
                        kernel_params=(0.0, 0.0, 0.0))


def example1_generator() -> MonomialMap:
    return MonomialMap.scaling(math.pi, -math.pi)


def _covers(intervals, target) -> bool:
    lo, hi = target
    reach = lo
    for a, b in sorted(intervals):
        if a > reach or (a == reach and reach != lo):
            return False
        reach = max(reach, b)
        if reach >= hi:
            return True
    return False


def _excluded_arcs(lo, hi, grid):
    """Mask of ``t`` values where no ``s`` in ``(lo, hi)`` satisfies ``sin t < s < sin t + 1/2``."""
    sn = np.sin(grid)
    return (sn >= hi) | (sn + 0.5 <= lo)


@dataclass
class FibrationReport:
    image_in_annulus: bool
    cover_is_cover: bool
    cover_preimages_bounded: tuple
    samples: int
    image_range: tuple
    pieces: list

    def to_json(self) -> dict:
        return {"image_in_annulus": self.image_in_annulus, "cover_is_cover": self.cover_is_cover,
                "cover_preimages_bounded": list(self.cover_preimages_bounded),
                "samples": self.samples, "image_range": list(self.image_range),
                "pieces": self.pieces}


def example1_fibration_check(n: int = 10_000, seed=0, bins: int = 720) -> FibrationReport:
    """Sampled evidence for the hyperbolicity argument via ``f = z1 z2``.

    In ``s = log m1 + log m2``, ``t = log m1 - log m2`` the domain is
    ``sin t < s < sin t + 1/2``. Over a cover piece ``lo < s < hi`` the angle
    ``t mod 2 pi`` must avoid the arc where the band misses the piece, which
    splits the preimage into bounded slabs. Each piece reports its s-extent,
    the largest empty arc of sampled ``t mod 2 pi`` and whether any sample
    lands in the predicted excluded arc.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = example1_domain()
    m1, m2 = sample_interior(d, n, seed=seed)
    s = np.log(m1) + np.log(m2)
    t = np.log(m1) - np.log(m2)
    lo, hi = EXAMPLE1_ANNULUS
    in_annulus = bool(np.all((s > lo) & (s < hi)))
    grid = (np.arange(bins) + 0.5) * (2 * math.pi / bins)
    pieces, bounded = [], []
    for a, b in EXAMPLE1_COVER:
        sel = (s > a) & (s < b)
        tm = np.mod(t[sel], 2 * math.pi)
        excluded = _excluded_arcs(a, b, grid)
        hits = np.bincount((tm / (2 * math.pi) * bins).astype(int).clip(0, bins - 1),
                           minlength=bins)
        # largest circular run of empty bins
        empty = np.concatenate([hits == 0, hits == 0])
        run = best = 0
        for e in empty:
            run = run + 1 if e else 0
            best = max(best, run)
        gap = min(best, bins) * 2 * math.pi / bins
        in_excluded = int(np.count_nonzero(_excluded_arcs(a, b, tm)))
        ok = bool(sel.any() and excluded.any() and gap > 0 and in_excluded == 0)
        bounded.append(ok)
        pieces.append({"interval": [a, b], "samples": int(sel.sum()),
                       "s_extent": [float(s[sel].min()), float(s[sel].max())] if sel.any() else None,
                       "t_gap": gap, "predicted_excluded_fraction": float(excluded.mean()),
                       "samples_in_excluded_arc": in_excluded})
    return FibrationReport(in_annulus, _covers(EXAMPLE1_COVER, EXAMPLE1_ANNULUS), tuple(bounded),
                           int(s.size), (float(s.min()), float(s.max())), pieces)


# --- C^3 example ------------------------------------------------------------


@dataclass(frozen=True)
class C3Point:
    z1: complex
    z2: complex
    z3: complex


@dataclass(frozen=True)
class Example2Profile:
    """Profile ``rho(x1, x2)`` with its partial derivatives and a lower bound ``c``."""

    name: str
    rho: Callable
    rho_x1: Callable
    rho_x2: Callable
    c: float

    def __call__(self, x1, x2):
        return _bcast(self.rho(x1, x2), x1, x2)

    def d1(self, x1, x2):
        return _bcast(self.rho_x1(x1, x2), x1, x2)

    def d2(self, x1, x2):
        return _bcast(self.rho_x2(x1, x2), x1, x2)


def _bcast(v, x1, x2):
    shape = np.broadcast_shapes(np.shape(x1), np.shape(x2))
    return np.broadcast_to(np.asarray(v, dtype=float), shape) + 0.0


PROFILES = {
    "const": Example2Profile("const", lambda x1, x2: 1.0, lambda x1, x2: 0.0,
                             lambda x1, x2: 0.0, 0.5),
    "linear": Example2Profile("linear", lambda x1, x2: 1.0 + x1 + x2, lambda x1, x2: 1.0,
                              lambda x1, x2: 1.0, 0.5),
    "quadratic": Example2Profile("quadratic", lambda x1, x2: 1.0 + x1 * x1 + x2 * x2,
                                 lambda x1, x2: 2.0 * x1, lambda x1, x2: 2.0 * x2, 0.5),
}


def validate_profile(prof: Example2Profile, n: int = 2000, span: float = 10.0, seed=0):
    """Sampled check of positivity above ``c``, monotonicity, and derivative consistency."""
    rng = np.random.default_rng(seed)
    x1 = rng.uniform(0.0, span, n)
    x2 = rng.uniform(0.0, span, n)
    r = prof(x1, x2)
    if not np.all(np.isfinite(r)) or not np.all(r > prof.c) or not prof.c > 0:
        raise ValueError(f"profile {prof.name!r} is not bounded below by c = {prof.c} > 0")
    for name, dv in (("x1", prof.d1(x1, x2)), ("x2", prof.d2(x1, x2))):
        if not np.all(dv >= 0):
            raise ValueError(f"profile {prof.name!r} has a negative partial in {name}")
    h = 1e-5
    fd1 = (prof(x1 + h, x2) - prof(x1 - h, x2)) / (2 * h)
    fd2 = (prof(x1, x2 + h) - prof(x1, x2 - h)) / (2 * h)
    for fd, dv, name in ((fd1, prof.d1(x1, x2), "x1"), (fd2, prof.d2(x1, x2), "x2")):
        if not np.allclose(fd, dv, rtol=1e-4, atol=1e-6):
            raise ValueError(f"profile {prof.name!r}: the {name} derivative does not match rho")


def profile_from_spec(text: str) -> Example2Profile:
    """A shipped profile name, or ``"rho;d_rho/dx1;d_rho/dx2"`` in variables x1, x2."""
    if text in PROFILES:
        return PROFILES[text]
    parts = text.split(";")
    if len(parts) != 3:
        raise ValueError(f"unknown profile {text!r}; use one of {sorted(PROFILES)} or "
                         "'rho;d1;d2' expressions")
    rho, d1, d2 = (Expression(p.strip(), ("x1", "x2")) for p in parts)
    rng = np.random.default_rng(0)
    x = rng.uniform(0.0, 10.0, (2, 2000))
    vals = _bcast(rho(x[0], x[1]), x[0], x[1])
    c = 0.5 * float(np.min(vals)) if np.all(np.isfinite(vals)) else math.nan
    prof = Example2Profile(text, rho, d1, d2, c)
    validate_profile(prof)
    return prof


def _parts(z):
    if isinstance(z, C3Point):
        z = (z.z1, z.z2, z.z3)
    return tuple(np.asarray(w, dtype=complex) for w in z)


def example2_phi(z, prof: Example2Profile):
    z1, z2, z3 = _parts(z)
    a1, a2, a3 = np.abs(z1) ** 2, np.abs(z2) ** 2, np.abs(z3) ** 2
    s = 1.0 - a1
    return a1 + s * s * a2 * prof(a2 * s, a3 * s) + s * s * a3 - 1.0


def example2_gradient(z, prof: Example2Profile):
    """``(d phi/d z1, d phi/d z2, d phi/d z3)`` (Wirtinger derivatives) in closed form."""
    z1, z2, z3 = _parts(z)
    a2, a3 = np.abs(z2) ** 2, np.abs(z3) ** 2
    s = 1.0 - np.abs(z1) ** 2
    x1, x2 = a2 * s, a3 * s
    r, r1, r2 = prof(x1, x2), prof.d1(x1, x2), prof.d2(x1, x2)
    g1 = np.conj(z1) * (1.0 - s * (2.0 * a2 * r + s * a2 * a2 * r1 + s * a2 * a3 * r2 + 2.0 * a3))
    g2 = s * s * np.conj(z2) * (r + s * a2 * r1)
    g3 = s * s * np.conj(z3) * (s * a2 * r2 + 1.0)
    return g1, g2, g3


def wirtinger_fd(z, prof: Example2Profile, h: float = 1e-5):
    """Central-difference Wirtinger derivatives of ``example2_phi``."""
    parts = list(_parts(z))
    out = []
    for k in range(3):
        def shifted(delta):
            p = list(parts)
            p[k] = p[k] + delta
            return example2_phi(p, prof)

        dx = (shifted(h) - shifted(-h)) / (2 * h)
        dy = (shifted(1j * h) - shifted(-1j * h)) / (2 * h)
        out.append(0.5 * (dx - 1j * dy))
    return tuple(out)


def sample_example2_interior(prof: Example2Profile, n: int, seed=0, z1_max: float = 0.95):
    """Random interior points with ``|z1| <= z1_max`` and uniform phases."""
    rng = np.random.default_rng(seed)
    m1 = z1_max * np.sqrt(rng.uniform(size=n))
    ang = rng.uniform(0.0, 0.5 * math.pi, size=n)
    c, s_ = np.cos(ang), np.sin(ang)
    lo, hi = np.zeros(n), np.ones(n)
    # grow until the ray leaves D, then bisect for the exit radius
    while True:
        out = example2_phi((m1, hi * c, hi * s_), prof) >= 0
        if out.all():
            break
        hi = np.where(out, hi, 2.0 * hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = example2_phi((m1, mid * c, mid * s_), prof) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    t = lo * rng.uniform(size=n) ** 0.5
    ph = np.exp(1j * rng.uniform(0.0, 2 * math.pi, size=(3, n)))
    return m1 * ph[0], t * c * ph[1], t * s_ * ph[2]


def example2_boundary_points(prof: Example2Profile, n: int, seed=0):
    """Boundary points by bisection of ``phi`` along random complex rays from the origin."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(3, n)) + 1j * rng.normal(size=(3, n))
    v /= np.linalg.norm(v, axis=0)
    # D lies over the unit disc in z1 and phi = 0 at |z1| = 1, so rays stop there
    cap = np.where(np.abs(v[0]) > 0, 1.0 / np.abs(v[0]), np.inf)
    lo, hi = np.zeros(n), np.minimum(1.0, cap)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(200):
            out = (hi >= cap) | (example2_phi(hi * v, prof) >= 0)
            if out.all():
                break
            hi = np.where(out, hi, np.minimum(2.0 * hi, cap))
        else:
            raise RuntimeError("some rays never left the domain")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        inside = example2_phi(mid * v, prof) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return tuple(hi * v)


def example2_boundary_gradient_scan(prof: Example2Profile, n: int = 500, seed=0) -> float:
    """Minimum norm of the closed-form gradient over ``n`` boundary points."""
    z = example2_boundary_points(prof, n, seed)
    g = example2_gradient(z, prof)
    return float(np.min(np.sqrt(sum(np.abs(x) ** 2 for x in g))))


def example2_aut(a: complex, z):
    """``z1 -> (z1 - a)/(1 - conj(a) z1)``, ``z2, z3 -> (1 - conj(a) z1) z_j / sqrt(1 - |a|^2)``."""
    a = complex(a)
    if not abs(a) < 1:
        raise ValueError(f"need |a| < 1, got |a| = {abs(a)}")
    z1, z2, z3 = _parts(z)
    den = 1.0 - np.conj(a) * z1
    k = math.sqrt(1.0 - abs(a) ** 2)
    return (z1 - a) / den, den * z2 / k, den * z3 / k


@dataclass
class OrbitTrace:
    points: list
    phi: list
    z1_modulus: list

    @property
    def inside_throughout(self) -> bool:
        return all(p < 0 for p in self.phi)

    def to_json(self) -> dict:
        return {"points": [[[w.real, w.imag] for w in p] for p in self.points],
                "phi": self.phi, "z1_modulus": self.z1_modulus,
                "inside_throughout": self.inside_throughout}


def example2_orbit_accumulation(a_sequence, z0, prof: Example2Profile) -> OrbitTrace:
    """Images of ``z0`` under the automorphisms for each ``a`` in the sequence."""
    z0 = _parts(z0)
    if not float(example2_phi(z0, prof)) < 0:
        raise ValueError("z0 is not inside the domain")
    pts, phis, mods = [], [], []
    for a in a_sequence:
        w = tuple(complex(x) for x in example2_aut(a, z0))
        pts.append(w)
        phis.append(float(example2_phi(w, prof)))
        mods.append(abs(w[0]))
    return OrbitTrace(pts, phis, mods)


def example1_verify(n: int = 10_000, seed=0) -> dict:
    d = example1_domain()
    gen = example1_generator()
    pres = preserves(d, gen, n=n, tol=1e-6, seed=seed)
    fib = example1_fibration_check(n, seed=seed)
    ok = pres.preserved and fib.image_in_annulus and fib.cover_is_cover and all(
        fib.cover_preimages_bounded)
    return {"example": 1, "verified": bool(ok), "generator": gen.to_json(),
            "generator_preserved": pres.preserved, "fibration": fib.to_json()}


def example2_verify(prof: Example2Profile, n: int = 1000, seed=0) -> dict:
    rng = np.random.default_rng(seed)
    z = sample_example2_interior(prof, 100, seed=rng)
    exact = example2_gradient(z, prof)
    fd = wirtinger_fd(z, prof)
    num = np.sqrt(sum(np.abs(e - f) ** 2 for e, f in zip(exact, fd)))
    den = np.sqrt(sum(np.abs(e) ** 2 for e in exact))
    grad_err = float(np.max(num / den))
    scan = example2_boundary_gradient_scan(prof, 500, seed=rng)
    zs = sample_example2_interior(prof, n, seed=rng)
    r = np.sqrt(rng.uniform(0, 0.99, n))
    a = r * np.exp(1j * rng.uniform(0, 2 * math.pi, n))
    worst = max(float(example2_phi(example2_aut(a[i], [w[i] for w in zs]), prof))
                for i in range(n))
    ks = range(1, 21)
    trace = example2_orbit_accumulation([-(1 - 2.0 ** -k) for k in ks], (0j, 0j, 0j), prof)
    ok = (grad_err < 1e-6 and scan > 0 and worst < 0 and trace.inside_throughout
          and max(trace.z1_modulus) > 0.999)
    return {"example": 2, "profile": prof.name, "verified": bool(ok),
            "gradient_max_relative_error": grad_err, "boundary_gradient_min_norm": scan,
            "aut_trials": n, "aut_max_phi": worst,
            "orbit_max_z1_modulus": max(trace.z1_modulus),
            "orbit_inside_throughout": trace.inside_throughout}
