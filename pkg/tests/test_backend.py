import os
import subprocess
import sys

import pytest

from invsqrt import _accel

SNIPPET = """
from invsqrt import _accel, solve_exact_root, hermite_h
from invsqrt.oracle import default_shooting_config, level_bracket, numerov_eigenvalue
from invsqrt import PhysicalSystem, energy_from_a
s = PhysicalSystem()
E = numerov_eigenvalue(s, default_shooting_config(s, level_bracket(s, 1), steps=2000))
print(_accel.BACKEND, repr(solve_exact_root(1)), repr(hermite_h(2.7, -3.1).value), repr(E))
"""


def _run(no_numba):
    env = dict(os.environ)
    env.pop("INVSQRT_NO_NUMBA", None)
    if no_numba:
        env["INVSQRT_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    name, *vals = res.stdout.split()
    return name, [float(v) for v in vals]


def test_fallback_selected_by_env():
    name, _ = _run(True)
    assert name == "python"


def test_backends_agree():
    fast_name, fast = _run(False)
    slow_name, slow = _run(True)
    assert slow_name == "python"
    if _accel.numba is None:
        pytest.skip("numba not installed")
    assert fast_name == "numba"
    # compiled and interpreted libm may differ in the last bits
    for a, b in zip(fast, slow):
        assert a == pytest.approx(b, rel=1e-13)
