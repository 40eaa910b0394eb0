import os
import subprocess
import sys

import numpy as np
import pytest

from ringconc import kernels

BACKENDS = kernels.backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled core not built")


def _sorted_triples(out):
    rows, cols, vals = (np.asarray(x) for x in out)
    order = np.lexsort((vals, cols, rows))
    return rows[order], cols[order], vals[order]


@needs_both
@pytest.mark.parametrize("n,p", [(2, 1), (5, 2), (8, 4), (12, 5), (16, 8), (26, 3)])
def test_backends_agree(n, p):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    layer = py.layer_states(n, p)
    np.testing.assert_array_equal(layer, cy.layer_states(n, p))
    for a, b in zip(py.min_rotation(layer, n), cy.min_rotation(layer, n)):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(py.reverse_bits(layer, n), cy.reverse_bits(layer, n))
    np.testing.assert_array_equal(py.pair_counts(layer, n), cy.pair_counts(layer, n))
    np.testing.assert_array_equal(py.rotate(layer, n, 3), cy.rotate(layer, n, 3))
    for reflect in (False, True):
        keys = np.unique(py.orbit_keys(layer, n, reflect))
        np.testing.assert_array_equal(keys, np.unique(cy.orbit_keys(layer, n, reflect)))
        np.testing.assert_array_equal(py.element_index(layer, keys, n, reflect),
                                      cy.element_index(layer, keys, n, reflect))
        sizes = np.bincount(py.element_index(layer, keys, n, reflect)).astype(np.int64)
        for a, b in zip(_sorted_triples(py.flip_couplings(keys, sizes, n, reflect)),
                        _sorted_triples(cy.flip_couplings(keys, sizes, n, reflect))):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_missing_state_raises(name):
    mod = BACKENDS[name]
    keys = np.array([0b0011], dtype=np.uint64)
    with pytest.raises(KeyError):
        mod.element_index(np.array([0b0101], dtype=np.uint64), keys, 4, True)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_layer_is_sorted_and_complete(name):
    layer = BACKENDS[name].layer_states(10, 4)
    assert len(layer) == 210
    assert np.all(np.diff(layer.astype(np.int64)) > 0)
    assert all(int(x).bit_count() == 4 for x in layer)


def test_env_forces_fallback():
    env = dict(os.environ, RINGCONC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ringconc; print(ringconc.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_fallback_gives_same_physics():
    code = ("import ringconc; print(ringconc.BACKEND, repr(ringconc.cmax_exact(8, 3)), "
            "repr(ringconc.ow_solve(10, 3).c))")
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, RINGCONC_PURE_PYTHON=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout.split())
    assert outs[0][0] == "python"
    assert [float(x) for x in outs[0][1:]] == pytest.approx([float(x) for x in outs[1][1:]], abs=1e-12)
