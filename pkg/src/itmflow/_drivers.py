"""Hot integration loops shared by both backends.

Each driver exists in two flavours: the plain-Python function defined here
(used with arbitrary Python right-hand sides) and a numba-compiled twin
created lazily by :func:`compiled_fixed` / :func:`compiled_adaptive` (used
when the system's right-hand side is itself a numba dispatcher).  The
compiled twin runs the same source, so results are bit-identical.

Drivers never raise: they report one of the ``OK`` / ``BLOW_UP`` /
``UNDERFLOW`` / ``STEP_LIMIT`` statuses together with the samples accepted
so far, and the wrappers in :mod:`itmflow.ode` translate failures into
exceptions.  The RK4 stage blocks are written out inline so the only free
symbol inside a driver is the ``rhs`` argument.
"""

import numpy as np

from .backend import USE_NUMBA, jit_nocache

OK = 0
BLOW_UP = 1
UNDERFLOW = 2
STEP_LIMIT = 3


def fixed_driver(rhs, start, end, y0, h, max_steps):
    # Uniform RK4 march; the final step is shortened so the last node is
    # exactly ``end``.
    total = end - start
    n_steps = int(np.ceil(total / h - 1e-12))
    if n_steps < 1:
        n_steps = 1
    dim = y0.shape[0]
    if n_steps > max_steps:
        return STEP_LIMIT, start, np.empty(1), np.empty((1, dim)), np.empty((1, dim)), 0
    etas = np.empty(n_steps + 1)
    states = np.empty((n_steps + 1, dim))
    derivs = np.empty((n_steps + 1, dim))
    y = y0.copy()
    eta = start
    etas[0] = eta
    states[0] = y
    for step in range(n_steps):
        k1 = rhs(eta, y)
        ok = True
        for i in range(dim):
            if not np.isfinite(k1[i]):
                ok = False
        if not ok:
            return BLOW_UP, eta, etas, states, derivs, step + 1
        derivs[step] = k1
        if step < n_steps - 1:
            hi = h
            eta_next = start + (step + 1) * h
        else:
            hi = end - eta
            eta_next = end
        k2 = rhs(eta + 0.5 * hi, y + 0.5 * hi * k1)
        k3 = rhs(eta + 0.5 * hi, y + 0.5 * hi * k2)
        k4 = rhs(eta + hi, y + hi * k3)
        y = y + (hi / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ok = True
        for i in range(dim):
            if not np.isfinite(y[i]):
                ok = False
        if not ok:
            return BLOW_UP, eta_next, etas, states, derivs, step + 1
        eta = eta_next
        etas[step + 1] = eta
        states[step + 1] = y
    k1 = rhs(end, y)
    for i in range(dim):
        if not np.isfinite(k1[i]):
            return BLOW_UP, end, etas, states, derivs, n_steps
    derivs[n_steps] = k1
    return OK, 0.0, etas, states, derivs, n_steps + 1


def adaptive_driver(rhs, start, end, y0, abs_tol, rel_tol, h0, min_step,
                    max_step, safety, max_steps):
    # Step doubling: one full RK4 step against two half steps.  The accepted
    # state is the Richardson extrapolation of the two-half-step result; the
    # raw difference drives the (tol/err)^(1/5) step update.
    dim = y0.shape[0]
    cap = 256
    etas = np.empty(cap)
    states = np.empty((cap, dim))
    derivs = np.empty((cap, dim))
    y = y0.copy()
    eta = start
    k1 = rhs(eta, y)
    for i in range(dim):
        if not np.isfinite(k1[i]):
            return BLOW_UP, eta, etas, states, derivs, 0
    etas[0] = eta
    states[0] = y
    derivs[0] = k1
    n = 1
    h = min(h0, end - start)
    if h > max_step:
        h = max_step
    attempts = 0
    while eta < end:
        last = False
        if eta + h >= end:
            h = end - eta
            last = True
        attempts += 1
        if attempts > max_steps:
            return STEP_LIMIT, eta, etas, states, derivs, n
        hh = 0.5 * h
        # full step
        k2 = rhs(eta + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(eta + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(eta + h, y + h * k3)
        y_full = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        # first half step
        k2 = rhs(eta + 0.5 * hh, y + 0.5 * hh * k1)
        k3 = rhs(eta + 0.5 * hh, y + 0.5 * hh * k2)
        k4 = rhs(eta + hh, y + hh * k3)
        y_mid = y + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        mid = eta + hh
        k1m = rhs(mid, y_mid)
        # second half step
        k2 = rhs(mid + 0.5 * hh, y_mid + 0.5 * hh * k1m)
        k3 = rhs(mid + 0.5 * hh, y_mid + 0.5 * hh * k2)
        k4 = rhs(mid + hh, y_mid + hh * k3)
        y_two = y_mid + (hh / 6.0) * (k1m + 2.0 * k2 + 2.0 * k3 + k4)
        finite = True
        for i in range(dim):
            if not (np.isfinite(y_full[i]) and np.isfinite(y_two[i])):
                finite = False
        if not finite:
            return BLOW_UP, eta, etas, states, derivs, n
        ratio = 0.0
        for i in range(dim):
            tol = abs_tol + rel_tol * abs(y[i])
            r = abs(y_two[i] - y_full[i]) / tol
            if r > ratio:
                ratio = r
        if ratio <= 1.0:
            y = y_two + (y_two - y_full) / 15.0
            eta = end if last else eta + h
            k1 = rhs(eta, y)
            ok = True
            for i in range(dim):
                if not (np.isfinite(y[i]) and np.isfinite(k1[i])):
                    ok = False
            if not ok:
                return BLOW_UP, eta, etas, states, derivs, n
            if n == cap:
                cap2 = 2 * cap
                e2 = np.empty(cap2)
                s2 = np.empty((cap2, dim))
                d2 = np.empty((cap2, dim))
                e2[:cap] = etas
                s2[:cap] = states
                d2[:cap] = derivs
                etas, states, derivs, cap = e2, s2, d2, cap2
            etas[n] = eta
            states[n] = y
            derivs[n] = k1
            n += 1
            if ratio == 0.0:
                fac = 5.0
            else:
                fac = safety * ratio ** -0.2
                if fac > 5.0:
                    fac = 5.0
            h = h * fac
            if h > max_step:
                h = max_step
            if h < min_step:
                h = min_step
        else:
            fac = safety * ratio ** -0.2
            if fac < 0.1:
                fac = 0.1
            h = h * fac
            if h < min_step:
                return UNDERFLOW, eta, etas, states, derivs, n
    return OK, 0.0, etas, states, derivs, n


_compiled = {}


def compiled_fixed():
    """Numba twin of :func:`fixed_driver` (compiled on first request)."""
    if not USE_NUMBA:
        return None
    if "fixed" not in _compiled:
        _compiled["fixed"] = jit_nocache(fixed_driver)
    return _compiled["fixed"]


def compiled_adaptive():
    """Numba twin of :func:`adaptive_driver` (compiled on first request)."""
    if not USE_NUMBA:
        return None
    if "adaptive" not in _compiled:
        _compiled["adaptive"] = jit_nocache(adaptive_driver)
    return _compiled["adaptive"]
