"""Sparse symmetric linear algebra: CSR wrappers and preconditioned CG.

Matrices are scipy CSR (compressed row storage with sorted column indices);
the thin wrappers below add the shape checking and normalization the rest
of the package relies on.  The solver is a hand-rolled conjugate gradient
with optional Jacobi preconditioning and optional deflation of the
constant vector — the k = 0 Hodge-Laplacian system

    M x = b,   M = S_0 L_0 = D_0^T S_1 D_0

is singular with kernel span{1}, and b = S_0 R(f) only balances up to
quadrature rounding.  Deflation restores solvability by removing the
S-weighted mean of the underlying data (b <- b - (1^T b / 1^T s) s, which
makes 1^T b = 0 exactly), and gauge-fixes the solution to zero S-weighted
mean afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "SolverConfig",
    "SolverResult",
    "SolverError",
    "cg_solve",
    "spmv",
    "spgemm",
    "transpose",
    "diag_vector",
    "from_coo",
]


def spmv(A: sp.spmatrix, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product with an explicit shape check."""
    x = np.asarray(x)
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"shape mismatch: {A.shape} @ {x.shape}")
    return A @ x


def spgemm(A: sp.spmatrix, B: sp.spmatrix) -> sp.csr_matrix:
    """Sparse matrix product; duplicates merged, indices sorted."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch: {A.shape} @ {B.shape}")
    C = (A @ B).tocsr()
    C.sum_duplicates()
    C.sort_indices()
    return C


def transpose(A: sp.spmatrix) -> sp.csr_matrix:
    out = A.T.tocsr()
    out.sort_indices()
    return out


def diag_vector(A: sp.spmatrix) -> np.ndarray:
    return A.diagonal()


def from_coo(
    rows, cols, vals, shape: tuple[int, int]
) -> sp.csr_matrix:
    """Assemble CSR from triplets: duplicates summed, zeros dropped."""
    A = sp.csr_matrix((vals, (rows, cols)), shape=shape)
    A.sum_duplicates()
    A.eliminate_zeros()
    A.sort_indices()
    return A


@dataclass
class SolverConfig:
    """Conjugate-gradient parameters.

    max_iterations defaults (None) to 50 * sqrt(unknowns) + 1000.
    deflate_constants handles the k = 0 nullspace; it requires the
    star weights of the system's diagonal Hodge inner product.
    """

    tol: float = 1e-12
    max_iterations: int | None = None
    preconditioner: str = "jacobi"  # "jacobi" | "none"
    deflate_constants: bool = False

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.preconditioner not in ("jacobi", "none"):
            raise ValueError(f"unknown preconditioner {self.preconditioner!r}")


@dataclass
class SolverResult:
    x: np.ndarray
    residual: float  # achieved relative residual ||b - Mx|| / ||b||
    iterations: int
    residual_history: list[float] = field(default_factory=list)


class SolverError(RuntimeError):
    """Non-convergence or a structurally unusable system."""


def _check_symmetry(M: sp.spmatrix) -> None:
    scale = np.abs(M.data).max() if M.nnz else 1.0
    gap = np.abs((M - M.T).tocsr().data)
    if gap.size and gap.max() > 1e-12 * scale:
        raise SolverError(
            f"matrix is not symmetric: max asymmetry {gap.max():.3e} "
            f"exceeds 1e-12 * {scale:.3e}"
        )


def cg_solve(
    M: sp.spmatrix,
    b: np.ndarray,
    config: SolverConfig | None = None,
    star_weights: np.ndarray | None = None,
) -> SolverResult:
    """Solve the symmetric positive (semi)definite system M x = b by CG.

    With ``config.deflate_constants`` the right-hand side is projected so
    that 1^T b = 0 (subtracting the S-mean of the underlying cochain data,
    which is the discrete version of requiring the source to have average
    zero) and the returned solution has zero S-weighted mean; this needs
    ``star_weights`` — the diagonal of the S inner product.

    Deterministic: fixed reduction order, no randomness.

    Raises
    ------
    SolverError
        On detected asymmetry or non-convergence within the iteration
        budget (the message reports the best residual reached).
    """
    cfg = config or SolverConfig()
    M = M.tocsr()
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"system matrix must be square, got {M.shape}")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise ValueError(f"right-hand side shape {b.shape} != ({n},)")
    _check_symmetry(M)

    if cfg.deflate_constants:
        if star_weights is None:
            raise ValueError("deflation requires the star weights")
        s = np.asarray(star_weights, dtype=np.float64)
        b = b - (b.sum() / s.sum()) * s

    max_iterations = cfg.max_iterations
    if max_iterations is None:
        max_iterations = int(50 * np.sqrt(n)) + 1000

    norm_b = float(np.linalg.norm(b))
    x = np.zeros(n)
    if norm_b == 0.0:
        return SolverResult(x, 0.0, 0, [0.0])

    if cfg.preconditioner == "jacobi":
        d = M.diagonal().copy()
        d[d <= 0.0] = 1.0
        inv_d = 1.0 / d
    else:
        inv_d = None

    r = b.copy()
    z = r * inv_d if inv_d is not None else r.copy()
    p = z.copy()
    rho = float(r @ z)
    history = [norm_b]
    best = norm_b

    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        q = M @ p
        pq = float(p @ q)
        if pq <= 0.0:
            raise SolverError(
                f"matrix is not positive definite on the Krylov space "
                f"(p^T M p = {pq:.3e} at iteration {iterations})"
            )
        alpha = rho / pq
        x += alpha * p
        r -= alpha * q
        norm_r = float(np.linalg.norm(r))
        history.append(norm_r)
        best = min(best, norm_r)
        if norm_r <= cfg.tol * norm_b:
            converged = True
            break
        z = r * inv_d if inv_d is not None else r
        rho_new = float(r @ z)
        p = z + (rho_new / rho) * p
        rho = rho_new

    if not converged:
        raise SolverError(
            f"CG did not converge in {max_iterations} iterations: best "
            f"relative residual {best / norm_b:.3e} (target {cfg.tol:.1e})"
        )

    if cfg.deflate_constants:
        s = np.asarray(star_weights, dtype=np.float64)
        x = x - ((s @ x) / s.sum()) * np.ones(n)

    return SolverResult(x, history[-1] / norm_b, iterations, history)
