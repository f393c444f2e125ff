"""The five normalized forms in C^2, their identity-component automorphisms, and case classification.

Forms (all with ``s = 1 - |z1|^2``):

* 11: ``|z1| < 1, |z2| < R s^alpha``
* 12: ``|z1| < 1, r s^alpha < |z2| < R s^alpha``  (R may be inf)
* 13: ``|z1| < 1, 0 < |z2| < R s^alpha``
* 14: ``r e^(beta|z1|^2) < |z2| < R e^(beta|z1|^2)``  (R may be inf)
* 15: ``0 < |z2| < R e^(beta|z1|^2)``
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .domain import (INF, ReinhardtDomain, TheoremI, TheoremII, TheoremIII, _json_R, _parse_R,
                     sample_interior)
from .monomial import IDENTITY, SWAP, MonomialMap, compose
from .smoothness import CINF, SmoothnessClass, exceptional_index, smoothness_class_case_i

FORM_IDS = (11, 12, 13, 14, 15)
TWO_PI = 2.0 * math.pi
INVERT_Z2 = ((1, 0), (0, -1))


@dataclass(frozen=True)
class NormalForm:
    form_id: int
    alpha: Optional[float] = None
    beta: Optional[float] = None
    r: Optional[float] = None
    R: float = 1.0

    def __post_init__(self):
        f = self.form_id
        if f not in FORM_IDS:
            raise ValueError(f"form_id must be one of {FORM_IDS}, got {f!r}")
        object.__setattr__(self, "R", _parse_R(self.R))
        disc = f <= 13
        if disc:
            if self.alpha is None or not math.isfinite(self.alpha) or self.beta is not None:
                raise ValueError(f"form {f} needs a finite alpha and no beta")
        else:
            if (self.beta is None or not math.isfinite(self.beta) or self.beta == 0
                    or self.alpha is not None):
                raise ValueError(f"form {f} needs a finite beta != 0 and no alpha")
        banded = f in (12, 14)
        if banded:
            if self.r is None or not (0 < self.r < self.R) or math.isinf(self.r):
                raise ValueError(f"form {f} needs 0 < r < R <= inf")
        else:
            if self.r is not None:
                raise ValueError(f"form {f} has no lower wall r")
            if not (0 < self.R < INF):
                raise ValueError(f"form {f} needs 0 < R < inf")

    @property
    def exponent(self) -> float:
        return self.alpha if self.form_id <= 13 else self.beta

    def kernel_params(self) -> tuple:
        if self.form_id in (12, 14):
            return (self.exponent, self.r, self.R)
        return (self.exponent, self.R)

    def to_json(self) -> dict:
        out = {"kind": "normal_form", "form": self.form_id}
        out["alpha" if self.form_id <= 13 else "beta"] = self.exponent
        if self.r is not None:
            out["r"] = self.r
        out["R"] = _json_R(self.R)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "NormalForm":
        return cls(int(obj["form"]), obj.get("alpha"), obj.get("beta"), obj.get("r"),
                   obj.get("R", 1.0))


@dataclass(frozen=True)
class NormalFormDomain(ReinhardtDomain):
    nf: NormalForm
    kind = "normal_form"

    @property
    def code(self):
        return self.nf.form_id

    @property
    def m1_max(self):
        if self.nf.form_id <= 13:
            return 1.0
        return math.sqrt(12.0 / abs(self.nf.beta))

    def params(self):
        return self.nf.kernel_params()

    def axis_flags(self):
        return (True, self.nf.form_id == 11)

    def fiber(self, m1):
        nf = self.nf
        m1 = np.asarray(m1, dtype=float)
        with np.errstate(all="ignore"):
            if nf.form_id <= 13:
                wall = np.power(np.where(m1 < 1.0, 1.0 - m1 * m1, np.nan), nf.alpha)
            else:
                wall = np.exp(nf.beta * m1 * m1)
        lo = nf.r * wall if nf.form_id in (12, 14) else np.zeros_like(wall)
        return lo, nf.R * wall

    def to_json(self):
        return self.nf.to_json()


def as_domain(nf: NormalForm) -> NormalFormDomain:
    return NormalFormDomain(nf)


# --- identity component -----------------------------------------------------


def _phase(x: float) -> float:
    return float(x) % TWO_PI


@dataclass(frozen=True)
class DiscElement:
    """``z1 -> e^(i theta)(z1 - a)/(1 - conj(a) z1)`` with the matching z2 factor."""

    a: complex = 0j
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        a = complex(self.a)
        if not abs(a) < 1:
            raise ValueError(f"disc element needs |a| < 1, got |a| = {abs(a)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", _phase(self.theta))
        object.__setattr__(self, "phi", _phase(self.phi))


@dataclass(frozen=True)
class PlaneElement:
    """``z1 -> e^(i theta) z1 + e`` with the matching z2 factor."""

    e: complex = 0j
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        e = complex(self.e)
        if not (math.isfinite(e.real) and math.isfinite(e.imag)):
            raise ValueError("plane element needs a finite translation")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "theta", _phase(self.theta))
        object.__setattr__(self, "phi", _phase(self.phi))


Aut0Element = Union[DiscElement, PlaneElement]


def _check_element(nf: NormalForm, g: Aut0Element):
    want = DiscElement if nf.form_id <= 13 else PlaneElement
    if not isinstance(g, want):
        raise TypeError(f"form {nf.form_id} takes {want.__name__}, got {type(g).__name__}")


def aut0_apply(nf: NormalForm, g: Aut0Element, z1, z2):
    """Image of ``(z1, z2)`` (complex scalars or arrays).

    For forms 14/15 the z2 factor is ``exp(+beta(2 conj(e) e^(i theta) z1 + |e|^2))``,
    the sign that keeps ``|z2| e^(-beta|z1|^2)`` invariant. Real powers use the
    principal branch; ``Re(1 - conj(a) z1) > 0`` on the disc keeps it continuous.
    """
    _check_element(nf, g)
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    rot = cmath.exp(1j * g.theta)
    if isinstance(g, DiscElement):
        a = g.a
        den = 1.0 - np.conj(a) * z1
        w1 = rot * (z1 - a) / den
        fac = (1.0 - abs(a) ** 2) ** nf.alpha * np.exp(-2.0 * nf.alpha * np.log(den))
        w2 = cmath.exp(1j * g.phi) * z2 * fac
    else:
        e = g.e
        w1 = rot * z1 + e
        w2 = cmath.exp(1j * g.phi) * np.exp(nf.beta * (2.0 * np.conj(e) * rot * z1
                                                       + abs(e) ** 2)) * z2
    return w1, w2


def aut0_compose(nf: NormalForm, g: Aut0Element, h: Aut0Element) -> Aut0Element:
    """The element acting as ``g o h``."""
    _check_element(nf, g)
    _check_element(nf, h)
    if isinstance(g, PlaneElement):
        rot1 = cmath.exp(1j * g.theta)
        e = rot1 * h.e + g.e
        phi = g.phi + h.phi + 2.0 * nf.beta * (g.e.conjugate() * rot1 * h.e).imag
        return PlaneElement(e, g.theta + h.theta, phi)
    # Moebius matrices [[e^(i t), -e^(i t) a], [-conj(a), 1]]
    def mat(el):
        rot = cmath.exp(1j * el.theta)
        return np.array([[rot, -rot * el.a], [-el.a.conjugate(), 1.0]])

    (p, q), (_, s) = mat(g) @ mat(h)
    a = -q / p
    theta = cmath.phase(p / s)
    # phase of z2: the factor at z1 = 0 determines it
    _, w2 = aut0_apply(nf, g, *aut0_apply(nf, h, 0j, 1 + 0j))
    phi = cmath.phase(complex(w2) / (1.0 - abs(a) ** 2) ** nf.alpha)
    return DiscElement(a, theta, phi)


def aut0_identity(nf: NormalForm) -> Aut0Element:
    return DiscElement() if nf.form_id <= 13 else PlaneElement()


@dataclass(frozen=True)
class NoncompactReport:
    noncompact: bool
    family: Callable[[int], Aut0Element]
    description: str


def aut0_noncompact(nf: NormalForm) -> NoncompactReport:
    """Every form has noncompact identity component; returns an escaping family."""
    if nf.form_id <= 13:
        return NoncompactReport(True, lambda k: DiscElement(1.0 - 2.0 ** -k),
                                "a_k = 1 - 2^-k along the real axis")
    return NoncompactReport(True, lambda k: PlaneElement(float(k)), "e_k = k along the real axis")


def exhaustion(nf: NormalForm, m1, m2):
    """Proper exhaustion of the form: large near infinity, the boundary and excluded axes."""
    d = as_domain(nf)
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = d.g(m1, m2)
        out = np.fmax(np.log1p(m1 + m2), -np.log(-g))
        if nf.form_id != 11:
            out = np.fmax(out, -np.log(m2))
    return np.where(g < 0, out, INF)


def escape_step(nf: NormalForm, z, level: float = 10.0, max_steps: int = 40) -> Optional[int]:
    """First k whose family element sends ``z`` to exhaustion level above ``level``."""
    fam = aut0_noncompact(nf).family
    for k in range(1, max_steps + 1):
        w1, w2 = aut0_apply(nf, fam(k), z[0], z[1])
        if exhaustion(nf, abs(complex(w1)), abs(complex(w2))) > level:
            return k
    return None


# --- z2 inversion and chains -----------------------------------------------


def invert_z2(nf: NormalForm) -> NormalForm:
    """Image of the form under ``z2 -> 1/z2``."""
    f, x = nf.form_id, nf.exponent
    key = "alpha" if f <= 13 else "beta"
    if f in (12, 14):
        if math.isinf(nf.R):
            return NormalForm(13 if f == 12 else 15, R=1.0 / nf.r, **{key: -x})
        return NormalForm(f, r=1.0 / nf.R, R=1.0 / nf.r, **{key: -x})
    if f in (13, 15):
        return NormalForm(12 if f == 13 else 14, r=1.0 / nf.R, R=INF, **{key: -x})
    raise ValueError("z2 -> 1/z2 is not defined on form 11, which contains {z2 = 0}")


@dataclass(frozen=True)
class Dilation:
    factors: tuple

    def as_map(self) -> MonomialMap:
        return MonomialMap(IDENTITY, tuple(math.log(x) for x in self.factors))

    def to_json(self):
        return {"step": "dilation", "factors": list(self.factors)}


@dataclass(frozen=True)
class Swap:
    def as_map(self) -> MonomialMap:
        return MonomialMap(SWAP)

    def to_json(self):
        return {"step": "swap"}


@dataclass(frozen=True)
class InvertZ2:
    def as_map(self) -> MonomialMap:
        return MonomialMap(INVERT_Z2)

    def to_json(self):
        return {"step": "invert_z2"}


@dataclass(frozen=True)
class Monomial:
    map: MonomialMap

    def as_map(self) -> MonomialMap:
        return self.map

    def to_json(self):
        return {"step": "monomial", "map": self.map.to_json()}


def _matches_closing_template(A) -> bool:
    # z_s(1) -> z_t(1) z_t(2)^a, z_s(2) -> z_t(2)^(+-1) for permutations s, t
    for s in ((0, 1), (1, 0)):
        for t in ((0, 1), (1, 0)):
            if (A[s[0]][t[0]] == 1 and A[s[1]][t[0]] == 0 and A[s[1]][t[1]] in (1, -1)):
                return True
    return False


@dataclass(frozen=True)
class EquivalenceChain:
    steps: tuple = ()

    def composed(self) -> MonomialMap:
        out = MonomialMap.identity()
        for step in self.steps:
            out = compose(step.as_map(), out)
        return out

    def matches_template(self) -> bool:
        return _matches_closing_template(self.composed().A)

    def step_names(self) -> list:
        return [s.to_json()["step"] for s in self.steps]

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


# --- membership oracle --------------------------------------------------------


@dataclass(frozen=True)
class OracleReport:
    passed: bool
    samples: int
    violations: int
    max_violation: float

    def to_json(self) -> dict:
        return {"passed": self.passed, "samples": self.samples, "violations": self.violations,
                "max_violation": self.max_violation}


def _axis_samples(d, m1, m2, margin):
    out1, out2 = [m1], [m2]
    for axis, meets in enumerate(d.axis_flags()):
        if meets:
            a1 = np.zeros_like(m1) if axis == 0 else m1
            a2 = np.zeros_like(m2) if axis == 1 else m2
            keep = d.g(a1, a2) < -margin
            out1.append(a1[keep])
            out2.append(a2[keep])
    return np.concatenate(out1), np.concatenate(out2)


def membership_oracle(src: ReinhardtDomain, dst: ReinhardtDomain, f: MonomialMap,
                      n: int = 1000, margin: float = 1e-9, seed=0) -> OracleReport:
    """Sampled check that ``f`` maps ``src`` into ``dst`` and ``f^-1`` maps ``dst`` into ``src``.

    Samples sit at least ``margin`` inside (points on met axes included); an
    image with ``g >= 0`` is a violation.
    """
    from .monomial import invert

    rng = np.random.default_rng(seed)
    total = bad = 0
    worst = -INF
    for a, b, F in ((src, dst, f), (dst, src, invert(f))):
        m1, m2 = sample_interior(a, n, seed=rng, margin=margin)
        m1, m2 = _axis_samples(a, m1, m2, margin)
        with np.errstate(all="ignore"):
            img = b.g(*F.apply_modulus(m1, m2))
        img = np.where(np.isnan(img), INF, img)
        total += m1.size
        bad += int(np.count_nonzero(~(img < 0)))
        worst = max(worst, float(np.max(img)))
    return OracleReport(bad == 0, total, bad, worst)


# --- admissibility and classification ------------------------------------------


class RejectReason(str, enum.Enum):
    NOT_C1 = "NotC1"
    NOT_CK_FOR_REQUESTED_K = "NotCkForRequestedK"
    BIDISC_EXCLUDED = "BidiscExcluded"
    NOT_NORMALIZABLE_SMOOTH = "NotNormalizableSmooth"


def _check_k(k):
    if isinstance(k, float) and math.isinf(k) and k > 0:
        return k
    if isinstance(k, (int, np.integer)) and not isinstance(k, bool) and k >= 1:
        return int(k)
    raise ValueError(f"k must be a positive integer or inf, got {k!r}")


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    achieved: Optional[SmoothnessClass]
    via: Optional[EquivalenceChain] = None
    reason: Optional[RejectReason] = None


def smooth_admissible(nf: NormalForm, k) -> Admissibility:
    """Whether the form can normalize a domain with C^k boundary (``k`` may be inf)."""
    k = _check_k(k)
    f, x = nf.form_id, nf.exponent
    if f == 11:
        if x == 0:
            return Admissibility(False, None, reason=RejectReason.BIDISC_EXCLUDED)
        cls = smoothness_class_case_i(x)
        if cls.at_least(k):
            return Admissibility(True, cls)
        reason = (RejectReason.NOT_C1 if cls.kind == "belowC1"
                  else RejectReason.NOT_CK_FOR_REQUESTED_K)
        return Admissibility(False, cls, reason=reason)
    if f == 12:
        if x < 0:
            return Admissibility(True, CINF)
        if x == 0:
            return Admissibility(False, None, reason=RejectReason.NOT_C1)
        if math.isinf(nf.R):
            return Admissibility(False, None, reason=RejectReason.NOT_NORMALIZABLE_SMOOTH)
        return Admissibility(True, CINF, EquivalenceChain((InvertZ2(),)))
    if f == 14:
        return Admissibility(True, CINF)
    # 13 and 15 reduce through z2 -> 1/z2
    inner = smooth_admissible(invert_z2(nf), k)
    via = EquivalenceChain((InvertZ2(),) + (inner.via.steps if inner.via else ()))
    return Admissibility(inner.admissible, inner.achieved, via if inner.admissible else None,
                         inner.reason)


def finite_nonsmooth_case(nf: NormalForm, k: int) -> bool:
    """True iff the form gives C^k but not C-infinity boundaries (only form 11 can)."""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("k must be a finite positive integer")
    if nf.form_id != 11:
        return False
    a = nf.alpha
    return a > 0 and exceptional_index(a) is None and a < 1.0 / (2 * k)


@dataclass(frozen=True)
class TheoremCase:
    """``variant`` is ``"I"``, ``"II"``, ``"III"`` or ``"rejected"``."""

    variant: str
    alpha: Optional[float] = None
    beta: Optional[float] = None
    R: Optional[float] = None
    reason: Optional[RejectReason] = None

    def domain(self) -> ReinhardtDomain:
        if self.variant == "I":
            return TheoremI(self.alpha)
        if self.variant == "II":
            return TheoremII(self.alpha, self.R)
        if self.variant == "III":
            return TheoremIII(self.beta, self.R)
        raise ValueError("a rejected case has no model domain")

    @property
    def label(self) -> str:
        if self.variant == "rejected":
            return f"Rejected({self.reason.value})"
        if self.variant == "I":
            return f"CaseI({self.alpha!r})"
        par = self.alpha if self.variant == "II" else self.beta
        return f"Case{self.variant}({par!r}, {_json_R(self.R)!r})"

    def to_json(self) -> dict:
        out = {"variant": self.variant, "label": self.label}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.beta is not None:
            out["beta"] = self.beta
        if self.R is not None:
            out["R"] = _json_R(self.R)
        if self.reason is not None:
            out["reason"] = self.reason.value
        return out


@dataclass
class Classification:
    case: TheoremCase
    chain: Optional[EquivalenceChain]
    oracle: Optional[OracleReport]
    admissibility: Admissibility
    notes: list = field(default_factory=list)

    @property
    def rejected(self) -> bool:
        return self.case.variant == "rejected"

    def to_json(self) -> dict:
        adm = self.admissibility
        return {
            "case": self.case.to_json(),
            "chain": None if self.chain is None else self.chain.to_json(),
            "composed_map": None if self.chain is None else self.chain.composed().to_json(),
            "oracle": None if self.oracle is None else self.oracle.to_json(),
            "achieved_class": None if adm.achieved is None else adm.achieved.label,
            "notes": list(self.notes),
        }


def _candidates(nf: NormalForm):
    """(case, chain) pairs to validate, in preference order."""
    f, x, R, r = nf.form_id, nf.exponent, nf.R, nf.r
    if f == 11:
        dil = Dilation((1.0, 1.0 / R))
        cands = [(TheoremCase("I", alpha=x), EquivalenceChain((dil,)))]
        if x < 0:
            cands += [(TheoremCase("I", alpha=-x), EquivalenceChain((dil,))),
                      (TheoremCase("II", alpha=x, R=INF), EquivalenceChain((dil,))),
                      (TheoremCase("I", alpha=x), EquivalenceChain((dil, Swap())))]
        return cands
    if f == 12:
        if x < 0:
            return [(TheoremCase("II", alpha=x, R=R / r), EquivalenceChain((Dilation((1.0, 1.0 / r)),)))]
        return [(TheoremCase("II", alpha=-x, R=R / r),
                 EquivalenceChain((InvertZ2(), Dilation((1.0, R)))))]
    if f == 13:
        return [(TheoremCase("II", alpha=-x, R=INF),
                 EquivalenceChain((InvertZ2(), Dilation((1.0, R)))))]
    if f == 14:
        return [(TheoremCase("III", beta=x, R=R / r), EquivalenceChain((Dilation((1.0, 1.0 / r)),)))]
    return [(TheoremCase("III", beta=-x, R=INF), EquivalenceChain((InvertZ2(), Dilation((1.0, R)))))]


def classify(nf: NormalForm, k=math.inf, n_oracle: int = 1000, margin: float = 1e-9,
             seed=0) -> Classification:
    """Theorem case of a normalized form, with a validated equivalence chain.

    Every candidate chain is checked by :func:`membership_oracle`; if none passes
    the form is rejected as not normalizable rather than guessed.
    """
    k = _check_k(k)
    adm = smooth_admissible(nf, k)
    if not adm.admissible:
        return Classification(TheoremCase("rejected", reason=adm.reason), None, None, adm)
    src = as_domain(nf)
    notes = []
    for case, chain in _candidates(nf):
        rep = membership_oracle(src, case.domain(), chain.composed(), n=n_oracle,
                                margin=margin, seed=seed)
        if rep.passed:
            if case.variant == "II" and math.isinf(case.R):
                notes.append("case II with R = inf is the same point set as case I with the "
                             "same alpha < 0; case II is reported")
            if not chain.matches_template():
                notes.append("composed map does not match the closing monomial template")
            return Classification(case, chain, rep, adm, notes)
        notes.append(f"candidate {case.label} via {chain.step_names()} failed the membership "
                     f"oracle ({rep.violations} of {rep.samples} samples, max g = "
                     f"{rep.max_violation:.3g})")
    notes.append("no candidate chain validated; the form is smooth but no theorem case "
                 "could be matched")
    return Classification(TheoremCase("rejected", reason=RejectReason.NOT_NORMALIZABLE_SMOOTH),
                          None, None, adm, notes)
