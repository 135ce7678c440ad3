"""Dense symmetric eigendecomposition and the proximal operators used by
the splitting solver.

Matrices are plain numpy arrays; every operator preserves symmetry.  The
nuclear norm of a symmetric matrix is the sum of absolute eigenvalues, so
its proximal map reduces to eigenvalue shrinkage.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


def symmetrize(m: np.ndarray) -> np.ndarray:
    """(M + M^T) / 2; exact symmetry entrywise (IEEE addition commutes)."""
    return (m + m.T) / 2


def _check_finite_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise InputError("matrix has non-finite entries")
    return m


@dataclass
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix, ordered by descending |eigenvalue|."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def eig_sym(m: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix (LAPACK backed)."""
    m = _check_finite_symmetric(m)
    w, v = np.linalg.eigh(symmetrize(m))
    order = np.argsort(-np.abs(w), kind="stable")
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def nuclear_norm(m: np.ndarray) -> float:
    """Sum of singular values; for symmetric input, sum of |eigenvalues|."""
    m = _check_finite_symmetric(m)
    return float(np.abs(np.linalg.eigvalsh(symmetrize(m))).sum())


def l1_norm(m: np.ndarray) -> float:
    """Sum of absolute entries."""
    m = _check_finite_symmetric(m)
    return float(np.abs(m).sum())


def svt(m: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: prox of tau * nuclear norm.

    Eigenvalues are shrunk toward zero by tau; the reconstruction only uses
    the surviving eigenpairs, which keeps the tail of the solve cheap once
    iterates are nearly low rank.
    """
    if tau < 0:
        raise InputError("svt threshold must be non-negative")
    m = _check_finite_symmetric(m)
    w, v = np.linalg.eigh(m)
    shrunk = np.sign(w) * np.maximum(np.abs(w) - tau, 0.0)
    keep = shrunk != 0.0
    if not keep.any():
        return np.zeros_like(m)
    vk = v[:, keep]
    return symmetrize((vk * shrunk[keep]) @ vk.T)


def soft_threshold(m: np.ndarray, tau: float) -> np.ndarray:
    """Entrywise shrinkage: prox of tau * l1 norm."""
    if tau < 0:
        raise InputError("soft threshold must be non-negative")
    m = _check_finite_symmetric(m)
    out = np.abs(m) - tau
    np.maximum(out, 0.0, out=out)
    np.copysign(out, m, out=out)
    return out


# Bisection contract for the halfspace multiplier.
HALFSPACE_SUM_TOL = 1e-9
HALFSPACE_MAX_ITER = 200


def _bisect_theta(m: np.ndarray, clip_sum, lo: float, hi: float, target: float):
    """Smallest shift theta >= 0 with clip_sum(theta) matching the target."""
    tol = HALFSPACE_SUM_TOL * max(1.0, target)
    theta_lo, theta_hi = 0.0, hi - float(m.min())
    for _ in range(HALFSPACE_MAX_ITER):
        theta = 0.5 * (theta_lo + theta_hi)
        s = clip_sum(theta)
        if abs(s - target) <= tol:
            return theta
        if s < target:
            theta_lo = theta
        else:
            theta_hi = theta
    return theta_hi


def project_box_halfspace(
    m: np.ndarray, lo: float = 0.0, hi: float = 1.0, target: float = 0.0
) -> np.ndarray:
    """Euclidean projection onto {X in [lo, hi]^(n x n) : sum(X) >= target}.

    Returns the clamp of ``m`` when that already meets the target;
    otherwise shifts by the unique multiplier theta > 0 located by
    bisection so the clamped sum hits the target.
    """
    m = _check_finite_symmetric(m)
    n = m.shape[0]
    if lo >= hi:
        raise InputError("need lo < hi")
    if target > hi * n * n + 1e-12:
        raise InputError(f"target {target} exceeds feasible mass {hi * n * n}")
    out = np.clip(m, lo, hi)
    if out.sum() >= target:
        return out
    theta = _bisect_theta(m, lambda t: np.clip(m + t, lo, hi).sum(), lo, hi, target)
    return np.clip(m + theta, lo, hi)


def project_box_halfspace_masked(
    m: np.ndarray, mask: np.ndarray, lo: float, hi: float, target: float
) -> np.ndarray:
    """Masked variant: entries where ``mask`` is zero are pinned to 0 and
    excluded from the sum.  Saturates instead of raising when the target is
    unreachable; the solver reports non-convergence in that case."""
    m = _check_finite_symmetric(m)
    free = np.asarray(mask) != 0

    def clipped(theta):
        out = np.clip(m + theta, lo, hi)
        out[~free] = 0.0
        return out

    out = clipped(0.0)
    if out.sum() >= target or not free.any():
        return out
    theta = _bisect_theta(m[free], lambda t: clipped(t).sum(), lo, hi, target)
    return clipped(theta)
