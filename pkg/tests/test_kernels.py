import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from stabwall import _kernels_py, kernels
from stabwall.quiverheart import DimVector, MonomialRep, _generator_cubics, slope_poly

try:
    from stabwall import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def brute_closed(succ):
    n = len(succ)
    return sorted(m for m in range(1 << n) if all(not (m >> i & 1) or (succ[i] & ~m) == 0 for i in range(n)))


def test_closed_subsets_reference():
    succ = list(MonomialRep.koszul(1).succ)
    assert sorted(_kernels_py.closed_subsets(succ)) == brute_closed(succ)
    assert len(kernels.closed_subsets(succ)) == 167


def test_box_screen_polynomials_are_slope_polys():
    parent = [1, 4, 6, 2]
    for d, w, bound, _ in _kernels_py.box_wall_screen(parent, _generator_cubics(1), 0):
        sp_ = slope_poly(DimVector(1, d), DimVector(1, tuple(parent)))
        assert [c * 36 for c in sp_.coeffs] == list(w[: len(sp_.coeffs)])


@needs_compiled
@pytest.mark.parametrize("parent", [[1, 4, 6, 4], [1, 6, 9, 4], [2, 8, 11, 5], [0, 1, 1, 0]])
@pytest.mark.parametrize("n", [1, 2, -1])
def test_backends_agree_on_box(parent, n):
    cubics = _generator_cubics(n)
    assert list(compiled.box_wall_screen(parent, cubics, n - 1)) == _kernels_py.box_wall_screen(parent, cubics, n - 1)


def dags():
    # random DAGs whose successors have smaller indices
    return st.integers(1, 12).flatmap(
        lambda n: st.tuples(*[st.integers(0, (1 << i) - 1) for i in range(n)])
    )


@needs_compiled
@settings(max_examples=100, derandomize=True, deadline=None)
@given(dags())
def test_backends_agree_on_closed_subsets(succ):
    succ = list(succ)
    assert sorted(compiled.closed_subsets(succ)) == sorted(_kernels_py.closed_subsets(succ)) == brute_closed(succ)


def test_overflow_guard_routes_to_python():
    assert not kernels._fits_int64([10**6] * 4, [[10**6] * 4] * 4, 0)
    assert kernels._fits_int64([1, 4, 6, 4], _generator_cubics(1), 0)


def test_pure_mode_env():
    env = dict(os.environ, STABWALL_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from stabwall import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
