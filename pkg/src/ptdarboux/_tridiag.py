"""Compiled kernels for complex-symmetric tridiagonal matrices."""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def csym_tridiag_eigvals(diag, off, max_sweeps):
    """Eigenvalues of a complex-symmetric tridiagonal matrix.

    Implicit QL with Wilkinson shifts and complex-orthogonal plane rotations
    (``c^2 + s^2 = 1``), which keep the matrix symmetric and tridiagonal so a
    sweep costs O(n).  Returns ``(eigenvalues, status, sweeps)``; ``status``
    is -1 on success, otherwise the index of the block that failed to converge.
    """
    n = diag.size
    d = diag.copy()
    e = np.zeros(n, dtype=np.complex128)
    e[: n - 1] = off
    eps = 2.220446049250313e-16
    sweeps = 0
    isotropic = False
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
            sweeps += 1
            if sweeps > max_sweeps:
                return d, l, sweeps
            d_save = d[l:m + 1].copy()
            e_save = e[l:m + 1].copy()
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.sqrt(g * g + 1.0)
            if abs(g + r) >= abs(g - r):
                g = d[m] - d[l] + e[l] / (g + r)
            else:
                g = d[m] - d[l] + e[l] / (g - r)
            if it % 10 == 0 or isotropic:
                # exceptional shift against cycling or a failed rotation
                g = g * (1.0 + 0.37j) + 1e-3 * abs(e[l])
            isotropic = False
            s = 1.0 + 0j
            c = 1.0 + 0j
            p = 0j
            i = m - 1
            broke = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.sqrt(f * f + g * g)
                if f == 0 and g == 0:
                    # exact decoupling inside the block
                    e[i + 1] = r
                    d[i + 1] -= p
                    e[m] = 0j
                    broke = True
                    break
                if abs(r) <= 1e-8 * (abs(f) + abs(g)):
                    # isotropic rotation: undo the sweep, retry with another shift
                    d[l:m + 1] = d_save
                    e[l:m + 1] = e_save
                    isotropic = True
                    broke = True
                    break
                e[i + 1] = r
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if broke:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0j
    return d, -1, sweeps


@njit(cache=True, nogil=True)
def tridiag_solve(sub, diag, sup, rhs):
    """Thomas algorithm with partial pivoting avoided; ``sub[i]`` couples rows i+1, i."""
    n = diag.size
    cp = np.empty(n, dtype=np.complex128)
    dp = np.empty(n, dtype=np.complex128)
    beta = diag[0]
    cp[0] = sup[0] / beta if n > 1 else 0j
    dp[0] = rhs[0] / beta
    for i in range(1, n):
        beta = diag[i] - sub[i - 1] * cp[i - 1]
        if i < n - 1:
            cp[i] = sup[i] / beta
        dp[i] = (rhs[i] - sub[i - 1] * dp[i - 1]) / beta
    x = np.empty(n, dtype=np.complex128)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x
