"""Core Gaussian-state algebra.

A zero-mean N-mode Gaussian pure state is represented by its graph
Z = V + iU with V, U real symmetric and U positive definite.  Covariance
matrices use the quadrature ordering (q_1..q_N, p_1..p_N) with symplectic
form Omega = [[0, I], [-I, 0]].  All objects are immutable after
construction and all operations are pure functions.
"""

import json

import numpy as np
import scipy.linalg as sla

from .errors import (
    IllConditionedGraphError,
    SingularPivotError,
    SingularTransformError,
    UnsupportedStateError,
    ValidationError,
)

SERIALIZATION_VERSION = 1

_SYM_TOL = 1e-12


def symplectic_form(n_modes):
    """Return the 2N x 2N symplectic form for the (q..q, p..p) ordering."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


class GaussGraph:
    """Graph representation Z = V + iU of an N-mode Gaussian pure state.

    Parameters
    ----------
    v_part : (N, N) array_like
        Real symmetric part of Z.  May be None for V = 0.
    u_part : (N, N) array_like
        Imaginary part of Z; must be symmetric positive definite.
    """

    def __init__(self, v_part, u_part):
        u = np.atleast_2d(np.asarray(u_part, dtype=float))
        if v_part is None:
            v = np.zeros_like(u)
        else:
            v = np.atleast_2d(np.asarray(v_part, dtype=float))
        if u.ndim != 2 or u.shape[0] != u.shape[1] or v.shape != u.shape:
            raise ValidationError("v_part and u_part must be square matrices of equal shape")
        n = u.shape[0]
        if n < 0:
            raise ValidationError("n_modes must be non-negative")
        if n > 0:
            scale_v = max(1.0, np.abs(v).max())
            scale_u = max(1.0, np.abs(u).max())
            if np.abs(v - v.T).max() > _SYM_TOL * scale_v:
                raise ValidationError("v_part is not symmetric to within 1e-12")
            if np.abs(u - u.T).max() > _SYM_TOL * scale_u:
                raise ValidationError("u_part is not symmetric to within 1e-12")
            v = 0.5 * (v + v.T)
            u = 0.5 * (u + u.T)
            if np.linalg.eigvalsh(u).min() <= 0:
                raise ValidationError("u_part must be positive definite")
        self.n_modes = n
        self.v_part = v
        self.u_part = u
        self.v_part.setflags(write=False)
        self.u_part.setflags(write=False)

    @property
    def z_matrix(self):
        """Complex symmetric Z = V + iU."""
        return self.v_part + 1j * self.u_part

    def is_v_zero(self, tol=0.0):
        if self.n_modes == 0:
            return True
        return np.abs(self.v_part).max() <= tol

    def to_json(self):
        """Serialize to the JSON state record (dense row-major arrays)."""
        record = {
            "version": SERIALIZATION_VERSION,
            "n_modes": int(self.n_modes),
            "ordering": "qqpp",
            "kappa": 1.0,
            "v": None if self.is_v_zero() else self.v_part.ravel().tolist(),
            "u": self.u_part.ravel().tolist(),
        }
        return json.dumps(record)

    @classmethod
    def from_json(cls, text):
        record = json.loads(text)
        n = int(record["n_modes"])
        if record.get("ordering", "qqpp") != "qqpp":
            raise ValidationError("unsupported quadrature ordering %r" % record.get("ordering"))
        u = np.asarray(record["u"], dtype=float).reshape(n, n)
        v = record.get("v")
        if v is not None:
            v = np.asarray(v, dtype=float).reshape(n, n)
        return cls(v, u)

    def __eq__(self, other):
        if not isinstance(other, GaussGraph):
            return NotImplemented
        return (self.n_modes == other.n_modes
                and np.array_equal(self.v_part, other.v_part)
                and np.array_equal(self.u_part, other.u_part))


class CovMatrix:
    """Second-moment matrix Gamma in the (q..q, p..p) ordering.

    Parameters
    ----------
    gamma : (2N, 2N) array_like
        Real symmetric covariance matrix.
    kappa : float, optional
        Thermal scale, 1 for pure states.
    """

    def __init__(self, gamma, kappa=1.0):
        g = np.atleast_2d(np.asarray(gamma, dtype=float))
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 != 0:
            raise ValidationError("gamma must be a square 2N x 2N matrix")
        if kappa < 1.0:
            raise ValidationError("kappa must be >= 1")
        scale = max(1.0, np.abs(g).max())
        if np.abs(g - g.T).max() > 1e-10 * scale:
            raise ValidationError("gamma is not symmetric")
        self.n_modes = g.shape[0] // 2
        self.gamma = 0.5 * (g + g.T)
        self.gamma.setflags(write=False)
        self.kappa = float(kappa)

    @property
    def q_block(self):
        n = self.n_modes
        return self.gamma[:n, :n]

    @property
    def p_block(self):
        n = self.n_modes
        return self.gamma[n:, n:]

    @property
    def qp_block(self):
        n = self.n_modes
        return self.gamma[:n, n:]

    def is_block_diagonal(self, tol=1e-12):
        """True when the q-p cross block vanishes."""
        if self.n_modes == 0:
            return True
        scale = max(1.0, np.abs(self.gamma).max())
        return np.abs(self.qp_block).max() <= tol * scale


class SymplecticSpectrum:
    """Sorted positive symplectic eigenvalues of a reduced state.

    Parameters
    ----------
    values : array_like
        Positive symplectic eigenvalues; sorted descending on construction.
    tol_half : float, optional
        Classification tolerance around sigma = 1/2.
    """

    def __init__(self, values, tol_half=1e-9):
        vals = np.sort(np.asarray(values, dtype=float))[::-1]
        # validation scales with the spectral norm: eigensolver undershoot of
        # sigma = 1/2 grows with the covariance norm for strongly squeezed states
        scale = max(1.0, float(vals[0])) if vals.size else 1.0
        if vals.size and vals.min() < 0.5 - tol_half * scale:
            raise ValidationError("symplectic eigenvalue below 1/2 - tol_half")
        self.values = np.maximum(vals, 0.5)
        self.values.setflags(write=False)
        self.tol_half = float(tol_half)

    def __len__(self):
        return self.values.size

    @property
    def n_above(self):
        """Count of sigma > 1/2 + tol_half."""
        return int(np.count_nonzero(self.values > 0.5 + self.tol_half))

    @property
    def n_half(self):
        """Count of |sigma - 1/2| <= tol_half."""
        return len(self) - self.n_above

    def scaled(self, kappa):
        """Spectrum of the kappa-scaled state (sigma -> kappa * sigma)."""
        return SymplecticSpectrum(kappa * self.values, tol_half=self.tol_half)


def covariance_from_graph(graph, cond_threshold=1e12):
    """Covariance matrix Gamma = 1/2 [[U^-1, U^-1 V], [V U^-1, U + V U^-1 V]].

    Parameters
    ----------
    graph : GaussGraph
    cond_threshold : float, optional
        Maximum allowed condition number of U.

    Returns
    -------
    CovMatrix
        Pure-state covariance (kappa = 1).
    """
    u = graph.u_part
    if graph.n_modes == 0:
        return CovMatrix(np.zeros((0, 0)))
    if np.linalg.cond(u) > cond_threshold:
        raise IllConditionedGraphError("condition number of U exceeds %g" % cond_threshold)
    u_inv = np.linalg.inv(u)
    u_inv = 0.5 * (u_inv + u_inv.T)
    if graph.is_v_zero():
        n = graph.n_modes
        gamma = np.zeros((2 * n, 2 * n))
        gamma[:n, :n] = 0.5 * u_inv
        gamma[n:, n:] = 0.5 * u
        return CovMatrix(gamma)
    v = graph.v_part
    uv = u_inv @ v
    gamma = 0.5 * np.block([[u_inv, uv], [uv.T, u + v @ uv]])
    return CovMatrix(gamma)


def _is_scaled_pure(cov, tol=1e-8):
    """Cheap probe for Gx Gp = (kappa/2)^2 I (block-diagonal pure states)."""
    n = cov.n_modes
    if n == 0:
        return True
    rng = np.random.default_rng(0)
    probes = rng.standard_normal((n, 3))
    resid = cov.q_block @ (cov.p_block @ probes) - 0.25 * cov.kappa ** 2 * probes
    scale = 0.25 * cov.kappa ** 2 * max(1.0, np.abs(probes).max())
    return np.abs(resid).max() <= tol * scale


def _spectrum_block_diagonal(cov, region):
    """Fast path for q/p block-diagonal covariances.

    For a pure state scaled by kappa the q and p blocks are kappa/2 U^-1 and
    kappa/2 U.  The product of the reduced blocks then satisfies the low-rank
    identity (U^-1)_SS U_SS = I - (U^-1)_SL U_LS with L the complement of S,
    so the spectrum is computed on the smaller side of the bipartition and
    the larger side padded with exact kappa/2 entries.  Generic block-diagonal
    states fall back to the symmetrized product of the reduced blocks.
    """
    n = cov.n_modes
    region = sorted(region)
    gx = cov.q_block
    gp = cov.p_block
    if _is_scaled_pure(cov):
        comp = sorted(set(range(n)) - set(region))
        kappa = cov.kappa
        small = region if len(region) <= len(comp) else comp
        large = comp if len(region) <= len(comp) else region
        if not small:
            return np.full(len(region), 0.5 * kappa)
        cross = (4.0 / kappa ** 2) * (gx[np.ix_(small, large)] @ gp[np.ix_(large, small)])
        lam = np.linalg.eigvals(cross).real
        sigma = 0.5 * kappa * np.sqrt(np.clip(1.0 - lam, 1.0, None))
        pad = len(region) - len(sigma)
        if pad > 0:
            sigma = np.concatenate([sigma, np.full(pad, 0.5 * kappa)])
        return sigma
    sel = np.ix_(region, region)
    gx_r = gx[sel]
    gp_r = gp[sel]
    w, vecs = np.linalg.eigh(gx_r)
    root = (vecs * np.sqrt(np.clip(w, 0.0, None))) @ vecs.T
    lam = np.linalg.eigvalsh(root @ gp_r @ root)
    return np.sqrt(np.clip(lam, 0.0, None))


def _spectrum_general(gamma_red):
    """Positive eigenvalues of i Gamma^{1/2} Omega Gamma^{1/2} (Hermitian)."""
    n2 = gamma_red.shape[0]
    omega = symplectic_form(n2 // 2)
    w, vecs = np.linalg.eigh(gamma_red)
    w = np.clip(w, 0.0, None)
    root = (vecs * np.sqrt(w)) @ vecs.T
    herm = 1j * (root @ omega @ root)
    ev = np.linalg.eigvalsh(herm)
    return ev[ev > 0]


def symplectic_spectrum(cov, region, tol_half=1e-9, force_general=False):
    """Symplectic spectrum of the reduction of `cov` to `region`.

    Parameters
    ----------
    cov : CovMatrix
    region : iterable of int
        Mode indices to keep.
    tol_half : float, optional
        Classification tolerance around 1/2.
    force_general : bool, optional
        Skip the block-diagonal fast path (used as a cross-check oracle).

    Returns
    -------
    SymplecticSpectrum
    """
    region = sorted(set(int(i) for i in region))
    if not region:
        raise ValidationError("region must be non-empty")
    if region[0] < 0 or region[-1] >= cov.n_modes:
        raise ValidationError("region indices out of range")
    if not force_general and cov.is_block_diagonal():
        sigma = _spectrum_block_diagonal(cov, region)
    else:
        n = cov.n_modes
        idx = np.array(region + [n + i for i in region])
        sigma = _spectrum_general(cov.gamma[np.ix_(idx, idx)])
    return SymplecticSpectrum(sigma, tol_half=tol_half)


def von_neumann_entropy(spectrum):
    """Entropy in bits: sum (s+1/2)log2(s+1/2) - (s-1/2)log2(s-1/2).

    Terms with sigma within tol_half of 1/2 contribute exactly 0.
    """
    sigma = spectrum.values
    mask = sigma > 0.5 + spectrum.tol_half
    s = sigma[mask]
    if s.size == 0:
        return 0.0
    hi = s + 0.5
    lo = s - 0.5
    return float(np.sum(hi * np.log2(hi) - lo * np.log2(lo)))


def purity(spectrum):
    """Gaussian purity tr[rho^2] = prod (2 sigma_i)^-1."""
    return float(np.prod(1.0 / (2.0 * spectrum.values)))


def log_negativity(cov, region):
    """Log-negativity (bits) of a q/p block-diagonal state across `region`.

    Implements N = -1/2 sum log2 min(1, lambda_i(U^-1 mu U mu)) with
    mu = +1 on the complement and -1 on the region, where U^-1 and U are
    twice the q and p covariance blocks.  Only the block-diagonal form is
    supported.
    """
    region = sorted(set(int(i) for i in region))
    n = cov.n_modes
    if not region or region[0] < 0 or region[-1] >= n:
        raise ValidationError("region must be a non-empty subset of the modes")
    if not cov.is_block_diagonal():
        raise UnsupportedStateError("log_negativity requires a q/p block-diagonal state")
    if len(region) == n:
        return 0.0
    mu = np.ones(n)
    mu[region] = -1.0
    u = 2.0 * cov.p_block
    u_inv = 2.0 * cov.q_block
    # lambda(U^-1 mu U mu) via the generalized symmetric problem
    # (mu U mu) x = lambda U x, which keeps the eigenvalues real.
    mum = mu[:, None] * u * mu[None, :]
    lam = sla.eigvalsh(mum, u)
    lam = lam[lam < 1.0]
    if lam.size == 0:
        return 0.0
    return float(-0.5 * np.sum(np.log2(np.clip(lam, 1e-300, 1.0))))


def thermal_scale(cov, kappa):
    """Scale the covariance by kappa (thermal cluster-state noise model)."""
    if kappa < 1.0:
        raise ValidationError("kappa must be >= 1")
    return CovMatrix(kappa * cov.gamma, kappa=kappa * cov.kappa)


def measure_q(graph, node):
    """Measure q on `node`: delete its row and column from V and U."""
    n = graph.n_modes
    node = int(node)
    if not 0 <= node < n:
        raise ValidationError("node %d out of range for %d modes" % (node, n))
    keep = [i for i in range(n) if i != node]
    sel = np.ix_(keep, keep)
    return GaussGraph(graph.v_part[sel], graph.u_part[sel])


def measure_p(graph, node, pivot_tol=1e-12):
    """Measure p on `node`: Schur complement Z' = Z_minor - z z^T / Z_kk."""
    n = graph.n_modes
    node = int(node)
    if not 0 <= node < n:
        raise ValidationError("node %d out of range for %d modes" % (node, n))
    z = graph.z_matrix
    zkk = z[node, node]
    if abs(zkk) < pivot_tol:
        raise SingularPivotError("Z[%d,%d] is below pivot tolerance" % (node, node))
    keep = [i for i in range(n) if i != node]
    col = z[keep, node]
    z_new = z[np.ix_(keep, keep)] - np.outer(col, col) / zkk
    return GaussGraph(z_new.real, z_new.imag)


def apply_symplectic(graph, a, b, c, d, tol=1e-10):
    """Graph update Z' = (C + D Z)(A + B Z)^-1 for symplectic [[A,B],[C,D]].

    The blocks act on (q, p) with S (q, p)^T ordering; the symplectic
    condition S Omega S^T = Omega is checked to `tol`.
    """
    n = graph.n_modes
    blocks = [np.asarray(m, dtype=float) for m in (a, b, c, d)]
    if any(m.shape != (n, n) for m in blocks):
        raise ValidationError("blocks must be N x N")
    a, b, c, d = blocks
    s = np.block([[a, b], [c, d]])
    omega = symplectic_form(n)
    if np.abs(s @ omega @ s.T - omega).max() > tol:
        raise ValidationError("blocks do not satisfy the symplectic condition")
    z = graph.z_matrix
    denom = a + b @ z
    if n and np.linalg.cond(denom) > 1e14:
        raise SingularTransformError("(A + BZ) is numerically singular")
    z_new = (c + d @ z) @ np.linalg.inv(denom)
    z_new = 0.5 * (z_new + z_new.T)
    return GaussGraph(z_new.real, z_new.imag)


def phase_shift_blocks(n_modes, nodes):
    """Blocks of a pi/2 phase shift (q -> p, p -> -q) on the given modes."""
    diag = np.zeros(n_modes)
    diag[list(nodes)] = 1.0
    a = np.diag(1.0 - diag)
    b = np.diag(diag)
    c = np.diag(-diag)
    d = np.diag(1.0 - diag)
    return a, b, c, d
