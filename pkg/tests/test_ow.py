import math

import numpy as np
import pytest

from ringconc.errors import DomainError
from ringconc.ow import ow_closed_form, ow_solve, zero_pair_support
from ringconc.rdm import state_concurrence, two_site_rdm


@pytest.mark.parametrize("n", range(3, 21))
def test_solve_matches_closed_form(n):
    for p in range(1, n // 2 + 1):
        if n - p < 2:
            continue
        assert ow_solve(n, p).c == pytest.approx(ow_closed_form(n, p), abs=1e-12)


def test_known_values():
    assert ow_closed_form(6, 2) == pytest.approx(math.sqrt(2) / 3, abs=1e-15)
    assert ow_closed_form(7, 2) == pytest.approx((1 + math.sqrt(5)) / 7, abs=1e-15)
    assert ow_closed_form(8, 2) == pytest.approx(math.sqrt(3) / 4, abs=1e-15)
    for n in range(3, 15):
        assert ow_closed_form(n, 1) == pytest.approx(2 / n, abs=1e-15)


def test_eight_two_amplitudes():
    sol = ow_solve(8, 2)
    by = sol.amplitudes.by_gaps()
    assert by[(1, 7)] == 0.0
    assert by[(2, 6)] == pytest.approx(1 / math.sqrt(6), abs=1e-12)
    assert by[(3, 5)] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert by[(4, 4)] == pytest.approx(1 / math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("n,p", [(6, 2), (9, 3), (10, 4), (12, 5)])
def test_solution_state_is_consistent(n, p):
    sol = ow_solve(n, p)
    a = sol.amplitudes
    assert np.all(a.values >= -1e-14)
    assert a.norm_error() < 1e-12
    r = two_site_rdm(a)
    assert r.y == pytest.approx(0.0, abs=1e-15)
    assert r.z == pytest.approx(sol.z, abs=1e-12)
    assert state_concurrence(a) == pytest.approx(sol.c, abs=1e-12)
    off = np.setdiff1d(np.arange(a.basis.dim), zero_pair_support(a.basis))
    assert np.all(a.values[off] == 0)


@pytest.mark.parametrize("args", [(6, 4), (6, 0), (3, 2)])
def test_closed_form_domain(args):
    with pytest.raises(DomainError):
        ow_closed_form(*args)


def test_solve_domain():
    with pytest.raises(DomainError):
        ow_solve(8, 5)


def test_coherence_form_is_symmetric_and_matches_rdm():
    from ringconc.operators import coherence_matrix
    from ringconc.rdm import AmplitudeVector

    for n, p in [(8, 3), (11, 4), (12, 6)]:
        sol = ow_solve(n, p)
        b = sol.amplitudes.basis
        z = coherence_matrix(b)
        assert abs(z - z.T).max() < 1e-15
        a = AmplitudeVector.normalized(b, np.random.default_rng(n).random(b.dim))
        assert a.values @ (z @ a.values) == pytest.approx(two_site_rdm(a).z, abs=1e-14)
