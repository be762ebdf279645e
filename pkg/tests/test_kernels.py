import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from copreg import _pykernels, kernels
from copreg.copula import ROTATIONS, log_density
from copreg.copula.families import FAMILY_CODES, Family

from conftest import REPRESENTATIVE, spec_id

ck = pytest.importorskip("copreg._ckernels")


@pytest.mark.parametrize("spec", REPRESENTATIVE, ids=spec_id)
@pytest.mark.parametrize("rotation", ROTATIONS)
def test_backend_parity(spec, rotation):
    u, v = np.random.default_rng(0).uniform(1e-6, 1 - 1e-6, (2, 500))
    code, p = FAMILY_CODES[spec.family], np.asarray(spec.params, dtype=float)
    a = ck.logpdf(code, rotation, p, u, v)
    b = _pykernels.logpdf(code, rotation, p, u, v)
    assert_allclose(a, b, rtol=1e-9, atol=1e-9)
    assert ck.loglik(code, rotation, p, u, v) == pytest.approx(np.sum(b), rel=1e-10)


@pytest.mark.parametrize("spec", REPRESENTATIVE, ids=spec_id)
def test_dispatch_matches_reference(spec):
    # small and large inputs take different backends
    for n in (50, 2000):
        u, v = np.random.default_rng(n).uniform(0.01, 0.99, (2, n))
        got = kernels.logpdf(spec.family, 0, spec.params, u, v)
        assert_allclose(got, log_density(spec, u, v), rtol=1e-9, atol=1e-9)


def test_size_routing():
    assert kernels._impl(Family.CLAYTON, 10) is ck
    assert kernels._impl(Family.CLAYTON, kernels.COMPILED_MAX_SIZE) is _pykernels
    assert kernels._impl(Family.STUDENT_T, 10**6) is ck


@settings(max_examples=80, deadline=None)
@given(
    idx=st.integers(0, len(REPRESENTATIVE) - 1),
    rot=st.sampled_from(ROTATIONS),
    u=st.floats(1e-9, 1 - 1e-9),
    v=st.floats(1e-9, 1 - 1e-9),
)
def test_backend_parity_property(idx, rot, u, v):
    spec = REPRESENTATIVE[idx]
    code, p = FAMILY_CODES[spec.family], np.asarray(spec.params, dtype=float)
    a = ck.logpdf(code, rot, p, np.array([u]), np.array([v]))[0]
    b = _pykernels.logpdf(code, rot, p, np.array([u]), np.array([v]))[0]
    assert a == pytest.approx(b, rel=1e-8, abs=1e-8)


def test_read_only_inputs():
    u = np.broadcast_to(np.array([0.3]), (10,))
    assert np.all(np.isfinite(ck.logpdf(FAMILY_CODES[Family.CLAYTON], 0, np.array([2.0]), u, u)))


def test_pure_python_switch():
    env = dict(os.environ, COPREG_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from copreg import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND == "cython"


def test_pure_python_results_identical_for_large_inputs():
    # above the cutoff both configurations use numpy, so the fits agree bitwise
    code = (
        "import numpy as np; from copreg.fitting import fit_pml; "
        "from copreg.copula import sample, CopulaSpec, Family; from copreg.margins import ecdf_transform; "
        "p = ecdf_transform(sample(CopulaSpec(Family.FRANK, 0, (4.0,)), 1000, 1)).columns(); "
        "print(repr(fit_pml('frank', p).spec.params[0]))"
    )
    res = [
        subprocess.run(
            [sys.executable, "-c", code], env=dict(os.environ, COPREG_PURE_PYTHON=flag),
            capture_output=True, text=True, check=True,
        ).stdout
        for flag in ("0", "1")
    ]
    assert res[0] == res[1]
