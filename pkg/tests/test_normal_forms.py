import math

import numpy as np
import pytest

from golden import AUT_FORMS, GOLDEN
from reinhardt.domain import TheoremII, sample_interior
from reinhardt.monomial import MonomialMap
from reinhardt.normal_forms import (DiscElement, NormalForm, PlaneElement, RejectReason,
                                    aut0_apply, aut0_compose, aut0_identity, aut0_noncompact,
                                    as_domain, classify, escape_step, finite_nonsmooth_case,
                                    invert_z2, membership_oracle, smooth_admissible)

INF = math.inf


def _points(nf, n, rng):
    m1, m2 = sample_interior(as_domain(nf), n, seed=rng, margin=1e-6)
    ph = np.exp(1j * rng.uniform(0, 2 * math.pi, (2, n)))
    return m1 * ph[0], m2 * ph[1]


def _element(nf, rng):
    if nf.form_id <= 13:
        a = math.sqrt(rng.uniform(0, 0.81)) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        return DiscElement(a, rng.uniform(0, 7), rng.uniform(0, 7))
    e = complex(rng.normal(0, 1), rng.normal(0, 1))
    return PlaneElement(e, rng.uniform(0, 7), rng.uniform(0, 7))


@pytest.mark.parametrize("nf", AUT_FORMS, ids=lambda f: f"form{f.form_id}")
def test_aut0_preserves_membership(nf):
    rng = np.random.default_rng(nf.form_id)
    d = as_domain(nf)
    z1, z2 = _points(nf, 1000, rng)
    worst = -INF
    for i in range(1000):
        g = _element(nf, rng)
        w1, w2 = aut0_apply(nf, g, z1[i], z2[i])
        worst = max(worst, float(d.g(abs(complex(w1)), abs(complex(w2)))))
    assert worst < 1e-9


@pytest.mark.parametrize("nf", AUT_FORMS, ids=lambda f: f"form{f.form_id}")
def test_aut0_homomorphism(nf):
    rng = np.random.default_rng(100 + nf.form_id)
    z1, z2 = _points(nf, 1000, rng)
    for i in range(1000):
        g, h = _element(nf, rng), _element(nf, rng)
        a1, a2 = aut0_apply(nf, g, *aut0_apply(nf, h, z1[i], z2[i]))
        b1, b2 = aut0_apply(nf, aut0_compose(nf, g, h), z1[i], z2[i])
        for x, y in ((a1, b1), (a2, b2)):
            x, y = abs(complex(x)), abs(complex(y))
            assert abs(x - y) <= 1e-9 * max(1.0, x), (i, x, y)


@pytest.mark.parametrize("nf", AUT_FORMS, ids=lambda f: f"form{f.form_id}")
def test_aut0_identity_and_types(nf):
    e = aut0_identity(nf)
    w = aut0_apply(nf, e, 0.3 + 0.1j, 1.5)
    assert complex(w[0]) == pytest.approx(0.3 + 0.1j) and complex(w[1]) == pytest.approx(1.5)
    wrong = PlaneElement() if nf.form_id <= 13 else DiscElement()
    with pytest.raises(TypeError):
        aut0_apply(nf, wrong, 0j, 1 + 0j)


def test_element_validation():
    with pytest.raises(ValueError):
        DiscElement(1.0)
    assert DiscElement(0.2, theta=-1.0).theta == pytest.approx(2 * math.pi - 1.0)


@pytest.mark.parametrize("nf", AUT_FORMS, ids=lambda f: f"form{f.form_id}")
def test_noncompact_families_escape(nf):
    rep = aut0_noncompact(nf)
    assert rep.noncompact
    rng = np.random.default_rng(7)
    z1, z2 = _points(nf, 20, rng)
    for i in range(20):
        k = escape_step(nf, (z1[i], z2[i]), level=10.0, max_steps=40)
        assert k is not None and k <= 40


@pytest.mark.parametrize("nf", AUT_FORMS, ids=lambda f: f"form{f.form_id}")
def test_family_orbit_is_monotone(nf):
    fam = aut0_noncompact(nf).family
    z = (0.1 + 0.05j, complex(np.mean(as_domain(nf).fiber(np.array([0.1]))[0])) * 1.01
         if nf.form_id != 11 else 0.2 + 0j)
    mods = [abs(complex(aut0_apply(nf, fam(k), *z)[0])) for k in range(3, 25)]
    assert all(b >= a for a, b in zip(mods, mods[1:]))
    if nf.form_id <= 13:
        assert mods[-1] > 0.999999 and mods[-1] < 1
    else:
        assert mods[-1] > 20


def test_invert_z2_table():
    assert invert_z2(NormalForm(12, alpha=2.0, r=1.0, R=4.0)) == NormalForm(12, alpha=-2.0, r=0.25,
                                                                            R=1.0)
    assert invert_z2(NormalForm(12, alpha=2.0, r=0.5, R=INF)) == NormalForm(13, alpha=-2.0, R=2.0)
    assert invert_z2(NormalForm(13, alpha=1.0, R=2.0)) == NormalForm(12, alpha=-1.0, r=0.5, R=INF)
    assert invert_z2(NormalForm(15, beta=1.0, R=2.0)) == NormalForm(14, beta=-1.0, r=0.5, R=INF)
    with pytest.raises(ValueError):
        invert_z2(NormalForm(11, alpha=0.5))


@pytest.mark.parametrize("nf", [NormalForm(12, alpha=2.0, r=1.0, R=4.0),
                                NormalForm(12, alpha=-1.0, r=1.0, R=3.0),
                                NormalForm(13, alpha=1.0, R=2.0),
                                NormalForm(14, beta=1.0, r=1.0, R=5.0),
                                NormalForm(14, beta=-2.0, r=1.0, R=INF),
                                NormalForm(15, beta=-1.0, R=2.0)], ids=str)
def test_reduction_coherence(nf):
    a = classify(nf)
    b = classify(invert_z2(nf))
    assert not a.rejected and not b.rejected
    assert a.case.variant == b.case.variant


def test_invert_z2_is_a_domain_equivalence():
    nf = NormalForm(12, alpha=2.0, r=1.0, R=4.0)
    rep = membership_oracle(as_domain(nf), as_domain(invert_z2(nf)),
                            MonomialMap(((1, 0), (0, -1))), n=1000)
    assert rep.passed and rep.violations == 0


@pytest.mark.parametrize("nf,k,label", GOLDEN, ids=[g[2] + f"-{i}" for i, g in enumerate(GOLDEN)])
def test_golden_classification(nf, k, label):
    res = classify(nf, k)
    assert res.case.label == label
    if not res.rejected:
        assert res.oracle.passed and res.oracle.violations == 0 and res.oracle.samples >= 2000
        assert res.chain.matches_template()
        again = membership_oracle(as_domain(nf), res.case.domain(), res.chain.composed(),
                                  n=1000, margin=1e-9, seed=99)
        assert again.passed


def test_oracle_catches_a_wrong_chain():
    nf = NormalForm(12, alpha=-1.0, r=1.0, R=3.0)
    rep = membership_oracle(as_domain(nf), TheoremII(-1.0, 2.0), MonomialMap.identity(), n=1000)
    assert not rep.passed and rep.violations > 0


def test_admissibility_rules():
    assert smooth_admissible(NormalForm(12, alpha=1.0, r=1.0, R=INF), INF).reason is \
        RejectReason.NOT_NORMALIZABLE_SMOOTH
    assert smooth_admissible(NormalForm(11, alpha=0.0), 1).reason is RejectReason.BIDISC_EXCLUDED
    for beta, R in ((1.0, 2.0), (-3.0, INF), (0.5, 100.0)):
        for k in (1, 5, INF):
            assert smooth_admissible(NormalForm(14, beta=beta, r=1.0, R=R), k).admissible
    with pytest.raises(ValueError):
        smooth_admissible(NormalForm(14, beta=1.0, r=1.0, R=2.0), 0)


def test_finite_nonsmooth_case():
    assert finite_nonsmooth_case(NormalForm(11, alpha=0.3), 1)
    assert not finite_nonsmooth_case(NormalForm(11, alpha=0.3), 2)
    assert not finite_nonsmooth_case(NormalForm(11, alpha=0.25), 2)
    assert not finite_nonsmooth_case(NormalForm(14, beta=2.0, r=1.0, R=5.0), 1)
    with pytest.raises(ValueError):
        finite_nonsmooth_case(NormalForm(11, alpha=0.3), INF)


def test_case_ii_at_infinity_is_noted():
    res = classify(NormalForm(13, alpha=1.0, R=2.0))
    assert any("case II" in n for n in res.notes)


def test_normal_form_validation():
    for kw in (dict(form_id=10, alpha=1.0), dict(form_id=12, alpha=1.0, r=2.0, R=1.0),
               dict(form_id=14, beta=0.0, r=1.0, R=2.0), dict(form_id=11, beta=1.0),
               dict(form_id=13, alpha=1.0, r=1.0, R=2.0)):
        with pytest.raises(ValueError):
            NormalForm(**kw)
    nf = NormalForm(14, beta=2.0, r=1.0, R=INF)
    assert NormalForm.from_json(nf.to_json()) == nf
