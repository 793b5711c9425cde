"""Hermitian eigen kernels.

Two routines carry almost all of the floating-point work in this package:

* ``jacobi_eigh`` -- cyclic complex Jacobi rotations, eigenvalues and vectors.
* ``tridiag_eigvalsh`` -- Householder reduction to a real tridiagonal matrix
  followed by implicit QL, eigenvalues only (the entropy hot path).

Each exists as a numba ``@njit`` kernel and as a vectorised numpy version.
Set ``CLONECAP_KERNELS=numpy`` to force the numpy path; it is also used when
numba cannot be imported.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


MAX_SWEEPS = 60
MAX_QL_ITER = 60


def _backend_from_env() -> str:
    requested = os.environ.get("CLONECAP_KERNELS", "numba").strip().lower()
    if requested not in ("numba", "numpy"):
        raise ValueError(f"CLONECAP_KERNELS must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        return "numpy"
    return requested


BACKEND = _backend_from_env()


# --------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _jacobi_eigh_nb(a, want_vectors, tol):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    sweeps = 0
    if scale == 0.0:
        return np.zeros(n), v, sweeps
    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) <= tol * scale:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                ph = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                gpp = c
                gpq = s
                gqp = -s * np.conj(ph)
                gqq = c * np.conj(ph)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * gpp + akq * gqp
                    a[k, q] = akp * gpq + akq * gqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = np.conj(gpp) * apk + np.conj(gqp) * aqk
                    a[q, k] = np.conj(gpq) * apk + np.conj(gqq) * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = vkp * gpp + vkq * gqp
                        v[k, q] = vkp * gpq + vkq * gqq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


@njit(cache=True)
def _householder_tridiag_nb(a):
    n = a.shape[0]
    a = a.copy()
    d = np.empty(n)
    e = np.zeros(n)
    for k in range(n - 2):
        m = n - k - 1
        xnorm = 0.0
        for i in range(m):
            x = a[k + 1 + i, k]
            xnorm += x.real ** 2 + x.imag ** 2
        xnorm = math.sqrt(xnorm)
        if xnorm == 0.0:
            continue
        x0 = a[k + 1, k]
        if abs(x0) > 0.0:
            alpha = -(x0 / abs(x0)) * xnorm
        else:
            alpha = -xnorm + 0.0j
        v = np.empty(m, dtype=np.complex128)
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] -= alpha
        vnorm = 0.0
        for i in range(m):
            vnorm += v[i].real ** 2 + v[i].imag ** 2
        vnorm = math.sqrt(vnorm)
        if vnorm == 0.0:
            continue
        for i in range(m):
            v[i] /= vnorm
        # w = A v on the trailing block
        w = np.zeros(m, dtype=np.complex128)
        for i in range(m):
            acc = 0.0j
            for j in range(m):
                acc += a[k + 1 + i, k + 1 + j] * v[j]
            w[i] = acc
        vw = 0.0j
        for i in range(m):
            vw += np.conj(v[i]) * w[i]
        for i in range(m):
            for j in range(m):
                a[k + 1 + i, k + 1 + j] += (
                    -2.0 * v[i] * np.conj(w[j])
                    - 2.0 * w[i] * np.conj(v[j])
                    + 4.0 * vw * v[i] * np.conj(v[j])
                )
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        for i in range(k + 2, n):
            a[i, k] = 0.0
            a[k, i] = 0.0
    for i in range(n):
        d[i] = a[i, i].real
    for i in range(n - 1):
        e[i] = abs(a[i + 1, i])
    return d, e


@njit(cache=True)
def _tql_nb(d, e):
    # implicit QL on a real symmetric tridiagonal; e[i] couples i and i+1
    n = d.shape[0]
    d = d.copy()
    e = e.copy()
    eps = 2.220446049250313e-16
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > MAX_QL_ITER:
                return d, False
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d), True


@njit(cache=True)
def _tridiag_eigvalsh_nb(a):
    d, e = _householder_tridiag_nb(a)
    return _tql_nb(d, e)


# --------------------------------------------------------------------------
# numpy fallbacks


def _jacobi_eigh_np(a, want_vectors, tol):
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    sweeps = 0
    if scale == 0.0:
        return np.zeros(n), v, sweeps
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        if np.sqrt(2.0) * np.linalg.norm(a[iu]) <= tol * scale:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                ph = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    v[:, idx] = v[:, idx] @ g
    w = a.diagonal().real.copy()
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


def _householder_tridiag_np(a):
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128, copy=True)
    for k in range(n - 2):
        x = a[k + 1 :, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        alpha = -(x[0] / abs(x[0])) * xnorm if abs(x[0]) > 0 else -xnorm + 0j
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        sub = a[k + 1 :, k + 1 :]
        w = sub @ v
        vw = np.vdot(v, w)
        sub += (
            -2.0 * np.outer(v, w.conj())
            - 2.0 * np.outer(w, v.conj())
            + 4.0 * vw * np.outer(v, v.conj())
        )
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        a[k + 2 :, k] = 0.0
        a[k, k + 2 :] = 0.0
    d = a.diagonal().real.copy()
    e = np.zeros(n)
    e[: n - 1] = np.abs(np.diagonal(a, -1))
    return d, e


def _tql_np(d, e):
    n = d.shape[0]
    d = [float(x) for x in d]
    e = [float(x) for x in e]
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > MAX_QL_ITER:
                return np.sort(d), False
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d)), True


def _tridiag_eigvalsh_np(a):
    d, e = _householder_tridiag_np(a)
    return _tql_np(d, e)


# --------------------------------------------------------------------------
# dispatch

_IMPLS = {
    "numba": (_jacobi_eigh_nb, _tridiag_eigvalsh_nb),
    "numpy": (_jacobi_eigh_np, _tridiag_eigvalsh_np),
}


def jacobi_eigh(a: np.ndarray, want_vectors: bool = True, tol: float = 1e-15, backend: str | None = None):
    """Return ``(eigenvalues ascending, eigenvectors as columns, sweeps used)``."""
    impl = _IMPLS[backend or BACKEND][0]
    a = np.ascontiguousarray(a, dtype=np.complex128)
    w, v, sweeps = impl(a, want_vectors, tol)
    if sweeps >= MAX_SWEEPS:
        raise ArithmeticError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    return w, v, sweeps


def tridiag_eigvalsh(a: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Eigenvalues (ascending) of a complex Hermitian matrix."""
    impl = _IMPLS[backend or BACKEND][1]
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.shape[0] == 1:
        return np.array([a[0, 0].real])
    w, ok = impl(a)
    if not ok:
        raise ArithmeticError("implicit QL did not converge")
    return np.asarray(w)
