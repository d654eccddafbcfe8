"""Independent reference computations; none of these call the package."""
import numpy as np


def char_poly(r, lam, mu, k):
    return mu * r ** (k + 1) - (lam + mu) * r + lam


def grid_scan_root(lam, mu, k, step=1e-6):
    """Sign change of the undeflated polynomial on a dense grid, then plain bisection."""
    r = np.arange(0.0, 1.0, step)
    v = char_poly(r, lam, mu, k)
    idx = np.nonzero((v[:-1] > 0) & (v[1:] <= 0))[0]
    assert idx.size == 1, f"expected one sign change in (0, 1), found {idx.size}"
    lo, hi = r[idx[0]], r[idx[0] + 1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if char_poly(mid, lam, mu, k) > 0:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))
