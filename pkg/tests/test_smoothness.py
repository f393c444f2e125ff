import math
import warnings

import numpy as np
import pytest

from reinhardt import TheoremI, smoothness_class_case_i, smoothness_witness
from reinhardt.domain import custom_from_expr
from reinhardt.domain import BoundarySamplingError
from reinhardt.gallery import example1_domain
from reinhardt.smoothness import (BELOW_C1, CINF, Ck, SmoothnessClass, exceptional_index,
                                  gradient_min_on_boundary)


@pytest.mark.parametrize("alpha,expected", [
    (0.25, CINF), (-3.0, CINF), (-1.0, CINF), (0.5, CINF), (1 / 6, CINF),
    (0.3, Ck(1)), (0.45, Ck(1)), (0.2, Ck(2)), (0.15, Ck(3)), (0.7, BELOW_C1), (2.0, BELOW_C1),
])
def test_class_table(alpha, expected):
    assert smoothness_class_case_i(alpha) == expected


def test_alpha_one_tenth_is_exceptional():
    # 0.1 = 1/(2*5), so the exceptional clause applies
    assert exceptional_index(0.1) == 5
    assert smoothness_class_case_i(0.1) == CINF


@pytest.mark.parametrize("m", range(1, 7))
def test_exceptional_set(m):
    assert smoothness_class_case_i(1.0 / (2 * m)) == CINF


def test_guard_warns_near_exceptional_values():
    with pytest.warns(UserWarning):
        assert smoothness_class_case_i(0.25 + 1e-14) == CINF
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert smoothness_class_case_i(0.25 + 1e-9) == Ck(1)


def test_zero_and_nonfinite_rejected():
    for a in (0.0, math.nan, math.inf):
        with pytest.raises(ValueError):
            smoothness_class_case_i(a)


def test_monotone_index():
    alphas = np.linspace(0.01, 0.499, 2000)
    js = []
    for a in alphas:
        if exceptional_index(a) is not None:
            continue
        cls = smoothness_class_case_i(a)
        js.append(cls.j)
    assert all(b <= a for a, b in zip(js, js[1:]))


def test_class_labels_and_order():
    assert Ck(4).label == "CExactly(4)"
    assert CINF.label == "CInfinity" and BELOW_C1.label == "BelowC1"
    assert Ck(2).at_least(2) and not Ck(2).at_least(3) and not Ck(2).at_least(math.inf)
    assert CINF.at_least(math.inf) and not BELOW_C1.at_least(1)
    with pytest.raises(ValueError):
        SmoothnessClass("Ck")
    with pytest.raises(ValueError):
        SmoothnessClass("Ck", 0)


@pytest.mark.parametrize("alpha,j", [(0.45, 1), (0.15, 3), (0.4, 1), (0.35, 1)])
def test_witness_confirms(alpha, j):
    rep = smoothness_witness(alpha, j)
    assert rep.confirmed, rep.derivative_growth


def test_witness_never_diverges_for_smooth_boundary():
    for j in range(1, 5):
        rep = smoothness_witness(0.25, j)
        assert not rep.confirmed
        assert all(math.isnan(g) or g < 10 for g in rep.derivative_growth)


def test_witness_input_errors():
    with pytest.raises(ValueError):
        smoothness_witness(0.3, 1, h_min=1e-13)
    with pytest.raises(ValueError):
        smoothness_witness(-0.3, 1)
    with pytest.raises(ValueError):
        smoothness_witness(0.3, 0)


def test_witness_coherence_random_alpha():
    rng = np.random.default_rng(2024)
    failures = []
    n = 0
    while n < 20:
        a = float(rng.uniform(0.05, 0.5))
        if exceptional_index(a) is not None:
            continue
        n += 1
        cls = smoothness_class_case_i(a)
        if cls.kind != "Ck":
            continue
        rep = smoothness_witness(a, cls.j)
        if not rep.confirmed:
            failures.append((round(a, 4), cls.j, rep.derivative_growth[-3:]))
    assert not failures, failures


def test_gradient_min_ball():
    assert gradient_min_on_boundary(TheoremI(0.5), n=100) == pytest.approx(2.0, rel=1e-4)


def test_gradient_min_example1_positive():
    assert gradient_min_on_boundary(example1_domain(), n=100) > 0.1


def test_gradient_min_needs_boundary():
    with pytest.raises(BoundarySamplingError):
        gradient_min_on_boundary(custom_from_expr("-1 + 0*m1"), n=10)
