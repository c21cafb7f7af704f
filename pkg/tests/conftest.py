"""Shared test setup.

The suite pins the pure-numpy backend so no test pays numba's per-process
compile cost; both backends run identical source and are checked for
bit-identical output in test_backend.py.
"""

import os

os.environ.setdefault("ITMFLOW_BACKEND", "numpy")

import pytest

from itmflow import StepControl


@pytest.fixture
def tight_control():
    """Step control tight enough to serve as a finite-difference oracle base."""
    return StepControl(abs_tol=1e-11, rel_tol=1e-11)
