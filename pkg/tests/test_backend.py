"""Backend parity: the numba kernels must reproduce the numpy path bit for bit."""

import importlib.util
import os
import subprocess
import sys

import pytest

HAVE_NUMBA = importlib.util.find_spec("numba") is not None

CANONICAL_ARGS = ["sakiadis", "--format", "csv"]


def _run_cli_subprocess(backend: str) -> bytes:
    env = dict(os.environ, ITMFLOW_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-m", "itmflow.cli", *CANONICAL_ARGS],
        capture_output=True, env=env, timeout=300, check=True,
    )
    return proc.stdout


def test_numpy_backend_is_explicit():
    from itmflow import BACKEND
    assert BACKEND == "numpy"  # pinned by conftest for suite speed


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_numba_backend_matches_numpy_bit_for_bit():
    numba_bytes = _run_cli_subprocess("numba")
    numpy_bytes = _run_cli_subprocess("numpy")
    assert numba_bytes == numpy_bytes
    assert numba_bytes.startswith(b"eta,f,df,ddf")


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_auto_backend_prefers_numba():
    env = dict(os.environ, ITMFLOW_BACKEND="auto")
    proc = subprocess.run(
        [sys.executable, "-c", "import itmflow; print(itmflow.BACKEND)"],
        capture_output=True, env=env, timeout=120, check=True,
    )
    assert proc.stdout.strip() == b"numba"


def test_unknown_backend_rejected():
    env = dict(os.environ, ITMFLOW_BACKEND="cuda")
    proc = subprocess.run(
        [sys.executable, "-c", "import itmflow"],
        capture_output=True, env=env, timeout=120,
    )
    assert proc.returncode != 0
    assert b"ITMFLOW_BACKEND" in proc.stderr
