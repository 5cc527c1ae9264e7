"""Independent reference implementations used to check the library."""

import itertools

import numpy as np


def jacobi_eigenvalues(S, tol=1e-14, max_sweeps=100):
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = np.array(S, dtype=np.float64)
    n = a.shape[0]
    for _ in range(max_sweeps):
        scale = max(1.0, float(np.linalg.norm(a)))
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= n * tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= tol * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = 1.0 if theta == 0 else np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def grid_soft_threshold(v, t, step=1e-4):
    """argmin_x t|x| + (x - v)^2 / 2 over a grid between 0 and v."""
    lo, hi = min(0.0, v), max(0.0, v)
    grid = np.append(np.arange(lo, hi + step, step), [0.0, v])
    values = t * np.abs(grid) + 0.5 * (grid - v) ** 2
    return grid[np.argmin(values)]


def active_set_simplex(v, s):
    """Projection onto {x >= 0, sum x = s} by enumerating supports (small n only)."""
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0]
    best, best_dist = None, np.inf
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            idx = list(support)
            x = np.zeros(n)
            x[idx] = v[idx] - (v[idx].sum() - s) / size
            if np.all(x >= 0.0):
                dist = np.linalg.norm(x - v)
                if dist < best_dist:
                    best, best_dist = x, dist
    return best


def ista_reference(A, b, lam, L, x0, iters):
    """Plain proximal gradient loop for the LASSO."""
    x = np.array(x0, dtype=np.float64)
    step = 1.0 / L
    out = [x.copy()]
    for _ in range(iters):
        z = x - step * (A.T @ (A @ x - b))
        x = np.sign(z) * np.maximum(np.abs(z) - lam * step, 0.0)
        out.append(x.copy())
    return out


def central_difference(f, x, h=1e-6):
    """Gradient of ``f`` at ``x`` by central differences."""
    g = np.zeros_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g
