"""RK4 kernels for the two-function evolution ODE.

A numba-compiled loop is used when numba is importable, unless the
environment variable ``G2LAB_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``; otherwise a plain numpy loop with identical arithmetic
runs instead.  Both return ``(t, u, v, status, where)`` where ``status`` is
0 on success, 1 for a non-finite state and 2 for a non-positive ``u`` or
``v`` (the flow left its domain).
"""

import os

import numpy as np

OK, NONFINITE, DOMAIN = 0, 1, 2


def _flag_disabled() -> bool:
    return os.environ.get("G2LAB_DISABLE_NUMBA", "") not in ("", "0")


def _rhs(u, v, a):
    v2 = v * v
    v4 = v2 * v2
    du = 0.25 * a * (1.0 / v4 + v4)
    dv = 0.25 * a * (1.0 / (u * v * v2) - v4 * v / u)
    return du, dv


def _rk4_loop(a, h, nsteps, u0, v0, t, u, v):
    uu = u0
    vv = v0
    t[0] = 0.0
    u[0] = uu
    v[0] = vv
    for i in range(nsteps):
        k1u, k1v = _rhs(uu, vv, a)
        k2u, k2v = _rhs(uu + 0.5 * h * k1u, vv + 0.5 * h * k1v, a)
        k3u, k3v = _rhs(uu + 0.5 * h * k2u, vv + 0.5 * h * k2v, a)
        k4u, k4v = _rhs(uu + h * k3u, vv + h * k3v, a)
        uu = uu + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        vv = vv + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        t[i + 1] = (i + 1) * h
        u[i + 1] = uu
        v[i + 1] = vv
        if not (np.isfinite(uu) and np.isfinite(vv)):
            return NONFINITE, i + 1
        if uu <= 0.0 or vv <= 0.0:
            return DOMAIN, i + 1
    return OK, nsteps


_numba_loop = None
if not _flag_disabled():
    try:
        from numba import njit

        _rhs_jit = njit(cache=False)(_rhs)

        @njit(cache=False)
        def _numba_loop(a, h, nsteps, u0, v0, t, u, v):
            uu = u0
            vv = v0
            t[0] = 0.0
            u[0] = uu
            v[0] = vv
            for i in range(nsteps):
                k1u, k1v = _rhs_jit(uu, vv, a)
                k2u, k2v = _rhs_jit(uu + 0.5 * h * k1u, vv + 0.5 * h * k1v, a)
                k3u, k3v = _rhs_jit(uu + 0.5 * h * k2u, vv + 0.5 * h * k2v, a)
                k4u, k4v = _rhs_jit(uu + h * k3u, vv + h * k3v, a)
                uu = uu + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
                vv = vv + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
                t[i + 1] = (i + 1) * h
                u[i + 1] = uu
                v[i + 1] = vv
                if not (np.isfinite(uu) and np.isfinite(vv)):
                    return NONFINITE, i + 1
                if uu <= 0.0 or vv <= 0.0:
                    return DOMAIN, i + 1
            return OK, nsteps
    except ImportError:  # pragma: no cover
        _numba_loop = None

BACKEND = "numba" if _numba_loop is not None else "numpy"


def rk4_trajectory(a: float, h: float, nsteps: int, backend: str | None = None, u0=1.0, v0=1.0):
    """Integrate from ``(u0, v0)`` with ``nsteps`` steps of size ``h``."""
    backend = backend or BACKEND
    t = np.empty(nsteps + 1)
    u = np.empty(nsteps + 1)
    v = np.empty(nsteps + 1)
    if backend == "numba":
        if _numba_loop is None:
            raise RuntimeError("numba backend unavailable")
        status, where = _numba_loop(float(a), float(h), int(nsteps), float(u0), float(v0), t, u, v)
    elif backend == "numpy":
        status, where = _rk4_loop(float(a), float(h), int(nsteps), float(u0), float(v0), t, u, v)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return t, u, v, int(status), int(where)
