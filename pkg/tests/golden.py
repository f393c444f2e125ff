"""Golden normalized-form instances with the expected classification.

Expected values come from the per-type admissibility rules and, for the case
parameters, from hand reduction (z2 -> 1/z2 flips the exponent sign; the band
ratio R/r is invariant under dilation).
"""
import math

from reinhardt.normal_forms import NormalForm

INF = math.inf

# (form, k, expected label)
GOLDEN = [
    (NormalForm(11, alpha=0.5, R=3.0), INF, "CaseI(0.5)"),
    (NormalForm(11, alpha=0.25, R=1.0), INF, "CaseI(0.25)"),
    (NormalForm(11, alpha=0.3, R=1.0), 1, "CaseI(0.3)"),
    (NormalForm(11, alpha=0.3, R=1.0), 2, "Rejected(NotCkForRequestedK)"),
    (NormalForm(11, alpha=0.7, R=1.0), 1, "Rejected(NotC1)"),
    (NormalForm(11, alpha=0.0, R=1.0), INF, "Rejected(BidiscExcluded)"),
    (NormalForm(11, alpha=-1.0, R=2.0), INF, "Rejected(NotNormalizableSmooth)"),
    (NormalForm(12, alpha=-1.0, r=1.0, R=3.0), INF, "CaseII(-1.0, 3.0)"),
    (NormalForm(12, alpha=-0.5, r=2.0, R=10.0), INF, "CaseII(-0.5, 5.0)"),
    (NormalForm(12, alpha=2.0, r=1.0, R=2.0), 1, "CaseII(-2.0, 2.0)"),
    (NormalForm(12, alpha=1.0, r=1.0, R=INF), INF, "Rejected(NotNormalizableSmooth)"),
    (NormalForm(12, alpha=0.0, r=1.0, R=2.0), 1, "Rejected(NotC1)"),
    (NormalForm(13, alpha=1.0, R=2.0), INF, "CaseII(-1.0, 'inf')"),
    (NormalForm(13, alpha=-1.0, R=1.0), INF, "Rejected(NotNormalizableSmooth)"),
    (NormalForm(14, beta=2.0, r=1.0, R=5.0), INF, "CaseIII(2.0, 5.0)"),
    (NormalForm(14, beta=-1.0, r=0.5, R=INF), INF, "CaseIII(-1.0, 'inf')"),
    (NormalForm(15, beta=1.0, R=1.0), INF, "CaseIII(-1.0, 'inf')"),
    (NormalForm(15, beta=-2.0, R=3.0), 3, "CaseIII(2.0, 'inf')"),
]

# one instance per form with an admissible chain, for Aut_0 checks
AUT_FORMS = [
    NormalForm(11, alpha=0.5, R=2.0),
    NormalForm(12, alpha=-1.0, r=1.0, R=3.0),
    NormalForm(13, alpha=1.0, R=2.0),
    NormalForm(14, beta=1.0, r=1.0, R=4.0),
    NormalForm(15, beta=-1.0, R=2.0),
]
