"""Shared brute-force oracles for the test suite.

These deliberately avoid the package's own numeric kernels: fixed-order
composite rules at extreme refinement and plain bisection, so every dual-route
check compares two independent code paths.
"""

import numpy as np


def composite_simpson(f, a, b, n_panels):
    """Composite Simpson on n_panels (even) uniform panels; f vectorized."""
    if n_panels % 2:
        n_panels += 1
    x = np.linspace(a, b, n_panels + 1)
    y = np.asarray(f(x), dtype=float)
    h = (b - a) / n_panels
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def composite_midpoint(f, a, b, n_panels):
    h = (b - a) / n_panels
    x = a + (np.arange(n_panels) + 0.5) * h
    return float(np.sum(np.asarray(f(x), dtype=float)) * h)


def bisect_root(f, lo, hi, n_iter=200):
    f_lo = f(lo)
    assert f_lo * f(hi) <= 0
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        if f_lo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            f_lo = f(lo)
    return 0.5 * (lo + hi)
