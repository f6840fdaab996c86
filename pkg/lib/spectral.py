"""
Spectral certification of sparsifiers and effective-resistance oracles.

A weighted graph H is an epsilon-sparsifier of G when

    (1 - eps) L_G <= L_H <= (1 + eps) L_G

in the Loewner order. verify_spectral forms Y = M L_H M with M = (L_G^+)^{1/2},
deflates the all-ones direction and reads the extreme eigenvalues of Y on the
remaining (n-1)-dimensional subspace.

All matrices are dense; eigenproblems go through scipy.linalg.eigh.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from lib.errors import DisconnectedGraphError, ParameterError, PreconditionError
from lib.graph_core import Graph, laplacian
from lib.local_stats import alpha_sum, resolve_counts
from lib.sampler import edge_probabilities

KERNEL_TOL = 1e-12
EIG_TOL = 1e-8


def _range_eigensystem(L, tol=KERNEL_TOL):
    """Eigenpairs of L with the single kernel direction removed."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ParameterError(f"Laplacian must be square, got shape {L.shape}")
    n = L.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    w, V = linalg.eigh((L + L.T) / 2.0)
    cutoff = n * tol * max(float(np.abs(w).max()), 0.0)
    kernel = w <= cutoff
    if int(kernel.sum()) > 1:
        raise DisconnectedGraphError(
            f"Laplacian kernel has dimension {int(kernel.sum())}; the underlying graph is not connected"
        )
    return w[~kernel], V[:, ~kernel]


def pseudo_inverse(L, tol=KERNEL_TOL):
    """Moore-Penrose pseudoinverse of a connected graph's Laplacian."""
    w, V = _range_eigensystem(L, tol)
    return (V / w) @ V.T


def pseudo_inverse_sqrt(L, tol=KERNEL_TOL):
    """Square root of the pseudoinverse; M L M is the projector off the all-ones vector."""
    w, V = _range_eigensystem(L, tol)
    return (V / np.sqrt(w)) @ V.T


@dataclass(frozen=True)
class SpectralReport:
    eig_min: float
    eig_max: float
    distortion: float
    epsilon: float
    passed: bool

    def to_json(self):
        return {
            "eig_min": self.eig_min,
            "eig_max": self.eig_max,
            "distortion": self.distortion,
            "epsilon": self.epsilon,
            "pass": self.passed,
        }


def restricted_spectrum(L_G, L_H, tol=KERNEL_TOL):
    """Eigenvalues of L_G^{+/2} L_H L_G^{+/2} on the complement of the all-ones vector."""
    L_G = np.asarray(L_G, dtype=float)
    L_H = np.asarray(L_H, dtype=float)
    if L_G.shape != L_H.shape:
        raise ParameterError(f"Laplacian shapes differ: {L_G.shape} vs {L_H.shape}")
    n = L_G.shape[0]
    if n < 2:
        raise PreconditionError(f"Spectral comparison needs n >= 2, got n={n}")
    M = pseudo_inverse_sqrt(L_G, tol)
    P = np.eye(n) - np.full((n, n), 1.0 / n)
    Y = P @ M @ L_H @ M @ P
    eigs = linalg.eigvalsh((Y + Y.T) / 2.0)
    # the all-ones direction
    return np.delete(eigs, int(np.argmin(np.abs(eigs))))


def verify_spectral(L_G, L_H, epsilon, tol=KERNEL_TOL):
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    eigs = restricted_spectrum(L_G, L_H, tol)
    eig_min, eig_max = float(eigs.min()), float(eigs.max())
    return SpectralReport(
        eig_min=eig_min,
        eig_max=eig_max,
        distortion=max(abs(eig_max - 1.0), abs(1.0 - eig_min)),
        epsilon=float(epsilon),
        passed=bool(eig_min >= 1.0 - epsilon - EIG_TOL and eig_max <= 1.0 + epsilon + EIG_TOL),
    )


def distortion(L_G, L_H, tol=KERNEL_TOL):
    """max(|eig_max - 1|, |1 - eig_min|) of the restricted spectrum."""
    eigs = restricted_spectrum(L_G, L_H, tol)
    return max(abs(float(eigs.max()) - 1.0), abs(1.0 - float(eigs.min())))


def effective_resistance(g, i, j, tol=KERNEL_TOL):
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise ParameterError(f"Nodes ({i}, {j}) outside [0, {g.n})")
    if i == j:
        return 0.0
    L_pinv = pseudo_inverse(laplacian(g), tol)
    return float(L_pinv[i, i] + L_pinv[j, j] - 2.0 * L_pinv[i, j])


def effective_resistances(g, tol=KERNEL_TOL):
    """R_e for every edge of g, in edge order."""
    L_pinv = pseudo_inverse(laplacian(g), tol)
    if not g.edges:
        return np.zeros(0)
    ends = np.array(g.edges, dtype=np.int64)
    rows, cols = ends[:, 0], ends[:, 1]
    return L_pinv[rows, rows] + L_pinv[cols, cols] - 2.0 * L_pinv[rows, cols]


def local_subgraph(t):
    """Edge (0, 1) plus t common neighbors 2..t+1 joined to both endpoints."""
    if t < 0:
        raise ParameterError(f"common-neighbor count must be >= 0, got {t}")
    edges = [(0, 1)] + [(end, k) for k in range(2, t + 2) for end in (0, 1)]
    return Graph(t + 2, edges)


def local_subgraph_resistance(t):
    """Resistance between the endpoints of local_subgraph(t); equals 2 / (t + 2)."""
    return effective_resistance(local_subgraph(t), 0, 1)


def resistance_bound_check(g, t=None):
    """R_ij <= 2 / (T_ij + 2) on every edge of a connected graph."""
    counts = resolve_counts(g, t)
    R = effective_resistances(g)
    bounds = 2.0 / (counts + 2.0)
    return {
        "holds": bool((R <= bounds + 1e-10).all()),
        "max_ratio": float((R / bounds).max()) if len(R) else 0.0,
    }


def sample_norm_bound(g, t=None):
    """max_e R_e / p_e against n * alpha.

    Every sampled term L_G^{+/2} X L_G^{+/2} has norm R_e / p_e, so this is the
    per-draw norm bound the sample budget rests on.
    """
    counts = resolve_counts(g, t)
    dist = edge_probabilities(g, counts)
    ratio = float((effective_resistances(g) / dist.probs).max())
    n_alpha = alpha_sum(g, counts)
    return {
        "max_ratio": ratio,
        "n_alpha": n_alpha,
        "holds": ratio <= n_alpha * (1.0 + 1e-10),
    }
