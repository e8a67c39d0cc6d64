"""Dense symmetric eigensolver and grounded-Laplacian spectral analysis.

The eigensolver is a cyclic Jacobi rotation scheme: every sweep visits all
index pairs once, organized round-robin so each round rotates a set of
disjoint pairs. Rotations within a round commute, so they compose into a
single orthogonal update applied with two matrix products. Convergence is
quadratic once the off-diagonal mass is small; the sweep cap is a hard
failure, not a silent degradation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    FiedlerOutOfRangeError,
    NoConvergenceError,
    NotSymmetricError,
    SignIndefiniteError,
    SingularScalingError,
)
from .graphs import Graph, GroundedLaplacian, Partition

# Relative off-diagonal size at which a matrix counts as diagonalized.
_OFF_DIAG_TOL = 1e-14
# Mixed-sign tolerance for the positive orientation of the Fiedler vector.
_SIGN_TOL = 1e-9


@lru_cache(maxsize=None)
def _rotation_rounds(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Round-robin tournament schedule over index pairs of range(n).

    Returns n-1 (n even) or n (n odd) rounds; the pairs within one round are
    pairwise disjoint and every unordered pair appears in exactly one round.
    """
    players: list[int | None] = list(range(n)) + ([None] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(tuple(pairs))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def eig_symmetric(m: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, orthonormal eigenvectors as columns).
    The input must be symmetric within 1e-12 relative asymmetry; the residual
    ``max |m q - lambda q|`` is below 1e-10 * max|m| per pair.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    amax = float(np.abs(a).max()) if n else 0.0
    asym = float(np.abs(a - a.T).max())
    if asym > 1e-12 * max(amax, 1e-300):
        raise NotSymmetricError(f"relative asymmetry {asym / max(amax, 1e-300):.2e} > 1e-12")
    if n == 1:
        return a[0].copy(), np.eye(1)
    if amax == 0.0:
        return np.zeros(n), np.eye(n)

    a = 0.5 * (a + a.T)
    v = np.eye(n)
    tol = _OFF_DIAG_TOL * amax
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.abs(a[off_mask]).max() <= tol:
            break
        for pairs in _rotation_rounds(n):
            pp = np.fromiter((p for p, _ in pairs), dtype=int)
            qq = np.fromiter((q for _, q in pairs), dtype=int)
            apq = a[pp, qq]
            active = np.abs(apq) > 0.01 * tol
            if not active.any():
                continue
            pp, qq, apq = pp[active], qq[active], apq[active]
            tau = (a[qq, qq] - a[pp, pp]) / (2.0 * apq)
            t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t[tau == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rot = np.eye(n)
            rot[pp, pp] = c
            rot[qq, qq] = c
            rot[pp, qq] = s
            rot[qq, pp] = -s
            a = rot.T @ a @ rot
            v = v @ rot
        a = 0.5 * (a + a.T)
    else:
        raise NoConvergenceError(f"off-diagonal not annihilated in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


@dataclass(frozen=True)
class SpectralResult:
    """Smallest eigenpair of a grounded Laplacian plus its full spectrum."""

    lambda_f: float
    v_f: np.ndarray
    spectrum: np.ndarray

    def to_json(self) -> dict:
        return {
            "lambda_F": self.lambda_f,
            "v_F": [float(x) for x in self.v_f],
            "spectrum": [float(x) for x in self.spectrum],
        }


def fiedler_pair(grounded: GroundedLaplacian) -> SpectralResult:
    """Smallest eigenpair of the grounded Laplacian, oriented all-positive.

    The eigenvector is normalized to unit Euclidean norm and sign-flipped so
    its largest-magnitude entry is positive. Raises FiedlerOutOfRangeError
    when the smallest eigenvalue leaves (0, 1) — the symptom of a
    disconnected graph — and SignIndefiniteError when entries of both signs
    survive orientation, the symptom of eigenvalue multiplicity.
    """
    w, vecs = eig_symmetric(grounded.matrix)
    lam = float(w[0])
    v = vecs[:, 0].copy()
    if v[np.abs(v).argmax()] < 0.0:
        v = -v
    if lam <= 1e-12 or lam >= 1.0:
        raise FiedlerOutOfRangeError(
            f"smallest eigenvalue {lam:.6g} outside (0,1); graph disconnected "
            "or partition invalid"
        )
    if v.min() < -_SIGN_TOL:
        raise SignIndefiniteError(
            f"Fiedler vector has mixed signs (min entry {v.min():.3e})"
        )
    v /= np.linalg.norm(v)
    v.flags.writeable = False
    w.flags.writeable = False
    return SpectralResult(lambda_f=lam, v_f=v, spectrum=w)


@dataclass(frozen=True)
class SemiNormalizedAdjacency:
    """Adjacency matrix row-scaled by (degree + leader indicator - lambda_F)."""

    matrix: np.ndarray
    scaling: np.ndarray  # diagonal entries of the scaling matrix
    lambda_f: float


def semi_normalized_adjacency(
    g: Graph, p: Partition, lambda_f: float
) -> SemiNormalizedAdjacency:
    """Row-rescaled adjacency whose Perron eigenvalue is 1 at the true lambda_F."""
    a = g.adjacency_matrix()
    deg = a.sum(axis=1)
    scaling = deg + p.leader_indicator() - lambda_f
    if scaling.min() <= 0.0:
        bad = int(scaling.argmin())
        raise SingularScalingError(
            f"non-positive scaling {scaling[bad]:.6g} at node {bad} "
            f"(lambda_F={lambda_f:.6g})"
        )
    matrix = a / scaling[:, None]
    matrix.flags.writeable = False
    scaling.flags.writeable = False
    return SemiNormalizedAdjacency(matrix=matrix, scaling=scaling, lambda_f=lambda_f)


@dataclass(frozen=True)
class PerronReport:
    """Numerical check that the scaled adjacency has a simple unit Perron root."""

    spectral_radius: float
    radius_error: float  # |rho - 1|
    alignment_error: float  # 1 - |cos angle(A_hat v, v)|
    spectral_gap: float  # largest minus second-largest eigenvalue

    def to_json(self) -> dict:
        return {
            "spectral_radius": self.spectral_radius,
            "radius_error": self.radius_error,
            "alignment_error": self.alignment_error,
            "spectral_gap": self.spectral_gap,
        }


def verify_perron(adj: SemiNormalizedAdjacency, v_f: np.ndarray) -> PerronReport:
    """Measure how far the scaled adjacency is from (rho, v) = (1, v_F).

    The spectrum is taken from the symmetric similarity transform
    D^{1/2} A_hat D^{-1/2}, which shares eigenvalues with A_hat and keeps the
    computation inside the symmetric solver. The report only carries numbers;
    thresholds belong to the caller.
    """
    root = np.sqrt(adj.scaling)
    sym = adj.matrix * (root[:, None] / root[None, :])
    w, _ = eig_symmetric(sym)
    rho = float(w[-1])
    gap = float(w[-1] - w[-2]) if w.size >= 2 else float("inf")
    image = adj.matrix @ v_f
    denom = np.linalg.norm(image) * np.linalg.norm(v_f)
    cosine = 0.0 if denom == 0.0 else min(abs(float(np.dot(image, v_f) / denom)), 1.0)
    return PerronReport(
        spectral_radius=rho,
        radius_error=abs(rho - 1.0),
        alignment_error=1.0 - cosine,
        spectral_gap=gap,
    )
