"""Cyclic Jacobi eigensolver for small dense complex Hermitian matrices."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j].real ** 2 + a[i, j].imag ** 2
    return math.sqrt(acc)


@njit(cache=True)
def jacobi_eigh(mat, tol, max_sweeps):
    """Diagonalize Hermitian ``mat`` by cyclic two-sided unitary rotations.

    Returns ``(w, V, sweeps)`` with ``mat @ V[:, k] = w[k] V[:, k]``, ``w``
    unsorted. Stops once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||mat||_F)``; ``sweeps == -1`` signals non-convergence.
    """
    n = mat.shape[0]
    a = mat.copy()
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    target = tol * max(1.0, math.sqrt(fro))

    sweeps = -1
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) < target:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                e = apq / r
                ec = e.conjugate()
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                if tau < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * e * vkp + c * vkq

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps
