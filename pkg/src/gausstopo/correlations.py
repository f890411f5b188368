"""Quadrature correlations, decay-bound verification and length fitting.

Correlations are read off a q/p block-diagonal covariance matrix:
<q_i q_j> is the (i, j) entry of the q block and <p_i p_j> of the p block.
Mode coordinates are grid coordinates (x, y) with mode id = x * cols + y.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import FitFailedError, UnsupportedStateError, ValidationError


@dataclass(frozen=True)
class CorrelationBound:
    """Closed-form exponential decay bound |<q_i q_j>| <= C e^{-(d+1)/xi}."""

    c_const: float
    xi: float
    a_spec: float
    b_spec: float

    @property
    def q_ratio(self):
        """q = (sqrt(b/a) - 1) / (sqrt(b/a) + 1)."""
        root = np.sqrt(self.b_spec / self.a_spec)
        return (root - 1.0) / (root + 1.0)

    def envelope(self, d):
        """Bound value at graph distance d."""
        return self.c_const * np.exp(-(np.asarray(d, dtype=float) + 1.0) / self.xi)


def dms_bound(s):
    """Decay bound constants for the surface-code U at squeezing s."""
    if s <= 0:
        raise ValidationError("s must be positive")
    root = np.sqrt(8 * s ** 4 + 1)
    c_const = (1 + root) ** 2 / (4 * (8 * s ** 2 + s ** -2))
    xi = 2.0 / np.log((root + 1) / (root - 1))
    return CorrelationBound(float(c_const), float(xi),
                            float(s ** -2), float(s ** 2 * (8 + s ** -4)))


def _require_block_diagonal(cov):
    if not cov.is_block_diagonal():
        raise UnsupportedStateError("correlations require a q/p block-diagonal state")


def qq_correlation(cov, i, j):
    """<q_i q_j> (kappa-scaled for thermal states)."""
    _require_block_diagonal(cov)
    return float(cov.q_block[i, j])


def pp_correlation(cov, i, j):
    """<p_i p_j>; exactly zero beyond the A_SC adjacency."""
    _require_block_diagonal(cov)
    return float(cov.p_block[i, j])


def mode_coords(spec, i):
    """Grid coordinates of mode id i."""
    return divmod(int(i), spec.cols)


def graph_distance(spec, i, j):
    """Chebyshev distance max(|dx|, |dy|) between mode coordinates.

    On a torus each coordinate difference is reduced modulo the wrap.
    """
    xi_, yi = mode_coords(spec, i)
    xj, yj = mode_coords(spec, j)
    dx = abs(xi_ - xj)
    dy = abs(yi - yj)
    if spec.boundary == "torus":
        dx = min(dx, spec.rows - dx)
        dy = min(dy, spec.cols - dy)
    return int(max(dx, dy))


def euclidean_distance(spec, i, j):
    """Euclidean distance between mode coordinates (wrap-reduced on torus)."""
    xi_, yi = mode_coords(spec, i)
    xj, yj = mode_coords(spec, j)
    dx = abs(xi_ - xj)
    dy = abs(yi - yj)
    if spec.boundary == "torus":
        dx = min(dx, spec.rows - dx)
        dy = min(dy, spec.cols - dy)
    return float(np.hypot(dx, dy))


def verify_bound(cov, spec, bound=None, min_distance=3):
    """Check the decay bound on all pairs with graph distance > 2.

    Violations are reported, not raised.

    Returns
    -------
    dict with keys n_pairs, n_violations, max_violation, max_ratio.
    """
    _require_block_diagonal(cov)
    if bound is None:
        bound = dms_bound(spec.s)
    n = cov.n_modes
    if n != spec.n_nodes:
        raise ValidationError("state size does not match the mode grid")
    coords = np.array([mode_coords(spec, i) for i in range(n)])
    dx = np.abs(coords[:, 0][:, None] - coords[:, 0][None, :])
    dy = np.abs(coords[:, 1][:, None] - coords[:, 1][None, :])
    if spec.boundary == "torus":
        dx = np.minimum(dx, spec.rows - dx)
        dy = np.minimum(dy, spec.cols - dy)
    dist = np.maximum(dx, dy)
    mask = dist >= min_distance
    corr = np.abs(cov.q_block)
    envelope = cov.kappa * bound.envelope(dist)
    excess = np.where(mask, corr - envelope, -np.inf)
    n_viol = int(np.count_nonzero(excess > 0))
    max_viol = float(excess.max()) if mask.any() else 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(mask & (envelope > 0), corr / envelope, 0.0)
    return {
        "n_pairs": int(np.count_nonzero(mask)) // 2,
        "n_violations": n_viol // 2,
        "max_violation": max(max_viol, 0.0),
        "max_ratio": float(ratio.max()),
    }


def axis_samples(cov, spec, max_separation=None, axis="diagonal"):
    """|<q q>| along a main axis through the lattice center.

    Returns (separations, correlations) for separations 1..max_separation
    from the center mode along the requested axis ('row', 'col',
    'diagonal' or 'antidiagonal').
    """
    _require_block_diagonal(cov)
    steps = {"row": (0, 1), "col": (1, 0), "diagonal": (1, 1), "antidiagonal": (1, -1)}
    if axis not in steps:
        raise ValidationError("axis must be one of %s" % sorted(steps))
    dx, dy = steps[axis]
    n, m = spec.rows, spec.cols
    cx, cy = n // 2 - 1, m // 2 - 1
    if max_separation is None:
        max_separation = max(min(n, m) // 2 - 5, 8)
    seps, vals = [], []
    for d in range(1, max_separation + 1):
        x, y = cx + dx * d, cy + dy * d
        if spec.boundary == "torus":
            x, y = x % n, y % m
        elif not (0 <= x < n and 0 <= y < m):
            break
        seps.append(d)
        vals.append(abs(cov.q_block[cx * m + cy, x * m + y]))
    return np.array(seps, dtype=float), np.array(vals, dtype=float)


def fit_correlation_length(separations, correlations, xi_init=(0.5, 3.0),
                           max_iterations=500, residual_threshold=1e-4):
    """Fit |<q q>| = a e^{-d/xi_a} + b e^{-d/xi_b} by separable least squares.

    Variable projection: for each (xi_a, xi_b) iterate, the amplitudes are
    solved by linear least squares and the outer residual is taken in the
    log domain.  Initialization is fixed, so the fit is deterministic.

    Returns
    -------
    (a, xi_a, b, xi_b, residual) with xi_a <= xi_b and residual the RMS
    log-domain misfit.
    """
    d = np.asarray(separations, dtype=float)
    y = np.asarray(correlations, dtype=float)
    if d.size < 8:
        raise ValidationError("need at least 8 sample separations")
    if d.shape != y.shape or np.any(y <= 0):
        raise ValidationError("correlations must be positive and match separations")

    def amplitudes(xi):
        basis = np.column_stack([np.exp(-d / xi[0]), np.exp(-d / xi[1])])
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        return coef, basis

    def resid(xi):
        coef, basis = amplitudes(xi)
        model = np.clip(basis @ coef, 1e-300, None)
        return np.log(model) - np.log(y)

    sol = least_squares(resid, list(xi_init), max_nfev=max_iterations)
    if not sol.success:
        raise FitFailedError("fit did not converge in %d iterations" % max_iterations,
                             residuals=sol.fun)
    xi_a, xi_b = sol.x
    (amp_a, amp_b), _ = amplitudes(sol.x)
    if xi_a > xi_b:
        xi_a, xi_b = xi_b, xi_a
        amp_a, amp_b = amp_b, amp_a
    residual = float(np.sqrt(np.mean(sol.fun ** 2)))
    return float(amp_a), float(xi_a), float(amp_b), float(xi_b), residual


def area_law_fit(cov, spec, sizes=None, offset=None):
    """Linear regression S = alpha * perimeter - gamma over nested squares.

    Square regions of side k have perimeter 4k; the default sides 2..10
    cover perimeters 8..40.

    Returns
    -------
    (alpha, gamma) from the least-squares line.
    """
    from .topo import region_entropy

    if sizes is None:
        sizes = range(2, 11)
    n, m = spec.rows, spec.cols
    if offset is None:
        kmax = max(sizes)
        offset = ((n - kmax) // 2, (m - kmax) // 2)
    ox, oy = offset
    perims, entropies = [], []
    for k in sizes:
        if ox + k > n or oy + k > m:
            raise ValidationError("square of side %d does not fit" % k)
        region = [(ox + x) * m + (oy + y) for x in range(k) for y in range(k)]
        perims.append(4 * k)
        entropies.append(region_entropy(cov, region))
    slope, intercept = np.polyfit(perims, entropies, 1)
    return float(slope), float(-intercept)
