import math

import numpy as np
import pytest

from ringconc.basis import build_symmetric_basis
from ringconc.errors import DomainError, UnsupportedCaseError
from ringconc.operators import coherence_matrix
from ringconc.ow import ow_solve
from ringconc.rdm import AmplitudeVector, state_concurrence
from ringconc.stability import stability_test

KNOWN = {(5, 2): False, (7, 2): True, (9, 2): True, (7, 3): False, (8, 3): False,
         (10, 3): True, (11, 3): True}


@pytest.mark.parametrize("case,expected", sorted(KNOWN.items()))
def test_known_verdicts(case, expected):
    assert stability_test(*case).locally_optimal is expected


def tilt_gain(n, p, t=1e-5):
    """C(tilted) - C(OW) from an explicit partial trace, tilting into one-pair elements."""
    sol = ow_solve(n, p)
    b = build_symmetric_basis(n, p)
    one = np.flatnonzero(b.pair_counts == 1)
    grad = np.zeros(b.dim)
    grad[one] = (coherence_matrix(b) @ sol.amplitudes.values)[one]
    u = grad / np.linalg.norm(grad)
    tilted = AmplitudeVector.normalized(b, math.cos(t) * sol.amplitudes.values + math.sin(t) * u)
    return state_concurrence(tilted) - sol.c


@pytest.mark.parametrize("n,p", [(5, 2), (7, 2), (7, 3), (8, 3), (10, 3), (11, 3), (9, 4), (13, 4),
                                 (14, 5), (11, 5)])
def test_verdict_agrees_with_explicit_tilt(n, p):
    v = stability_test(n, p)
    if v.marginal:
        pytest.skip("marginal case")
    assert (tilt_gain(n, p) > 0) is (not v.locally_optimal)


@pytest.mark.parametrize("n", range(5, 26, 2))
def test_p2_matches_explicit_condition(n):
    # for p = 2 the first-order condition reduces to 2 a_2 < sqrt(n - 4) in the gap-2 amplitude
    a2 = ow_solve(n, 2).amplitudes.by_gaps()[(2, n - 2)]
    assert stability_test(n, 2).locally_optimal is (2 * a2 < math.sqrt(n - 4))


def test_verdict_fields():
    v = stability_test(7, 2)
    assert v.rhs == pytest.approx(math.sqrt(1 - 4 / 7))
    assert v.margin == pytest.approx(v.rhs - v.lhs)
    assert not v.marginal


def test_errors():
    with pytest.raises(UnsupportedCaseError):
        stability_test(8, 2)
    with pytest.raises(DomainError):
        stability_test(7, 1)
    with pytest.raises(DomainError):
        stability_test(7, 4)


@pytest.mark.parametrize("p", range(2, 6))
def test_verdict_predicts_exact_gain(p):
    from ringconc.ow import ow_closed_form
    from ringconc.xxz import cmax_exact

    for n in range(2 * p + 1, 3 * p + 4):
        if math.gcd(n, p) != 1:
            continue
        gain = cmax_exact(n, p) - ow_closed_form(n, p)
        if stability_test(n, p).locally_optimal:
            assert abs(gain) < 1e-6
        else:
            assert gain > 1e-6


def test_verdict_ignores_sign_of_the_constrained_optimum():
    n, p = 11, 3
    sol = ow_solve(n, p)
    b = sol.amplitudes.basis
    one = np.flatnonzero(b.pair_counts == 1)
    z10 = coherence_matrix(b)[one][:, sol.support]
    w0 = sol.amplitudes.values[sol.support]
    assert np.linalg.norm(z10 @ -w0) == np.linalg.norm(z10 @ w0)
    assert 2 * math.sqrt(n) * np.linalg.norm(z10 @ -w0) == pytest.approx(stability_test(n, p).lhs)
