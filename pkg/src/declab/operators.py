"""Discrete Hodge star, codifferential, Laplacian, and interpolants.

With the circumcentric volume ratios a_sigma = |*sigma| / |sigma| (and
b_sigma = 1 / a_sigma) the diagonal Hodge star on k-cochains is
S_k = diag(a_sigma).  The discrete codifferential and Hodge Laplacian are

    delta_k = S_{k-1}^{-1} D_{k-1}^T S_k            (k >= 1)
    L_k     = D_{k-1} delta_k + delta_{k+1} D_k     (terms dropped at k = 0, n)

where D_k is the coboundary matrix.  delta is the adjoint of d in the
cochain inner product  [[u, v]]_k = sum_sigma a_sigma u_sigma v_sigma.

Equivalently, row sigma of delta_k reads off the cofaces of sigma:

    (delta_k u)_sigma = b_sigma * sum_{tau > sigma} sign(sigma, tau)
                                                  * a_tau * u_tau ,

the flux form of the operator on the dual complex;
`codifferential_matrix_stencil` builds it that way so the two independent
code paths can be compared entry by entry.

Boundary conditions are imposed implicitly: the transpose construction
never references dual cells of boundary simplices "from outside", which is
exactly the zero-boundary subspace the scheme solves in.  No explicit
boundary rows exist anywhere.

The dual-averaging interpolant J takes a smooth k-form to the cochain

    (J omega)_sigma = b_sigma * integral over *sigma of (star omega) ,

and agrees with the de Rham map Pi on constant forms.  The difference
Pi - J vanishes on piecewise-linear forms exactly when every simplex's
centroid coincides with its dual cell's centroid — the source of the
extra order of convergence on the symmetric meshes.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .complex import SimplicialComplex
from .dual import DualComplex
from .forms import (
    PolyForm,
    codifferential,
    de_rham,
    de_rham_dual,
    hodge_star,
    triangle_rule,
)

__all__ = [
    "star_matrix",
    "star_inverse_matrix",
    "hodge_star_apply",
    "hodge_star_inverse_apply",
    "codifferential_matrix",
    "codifferential_matrix_stencil",
    "hodge_laplacian_matrix",
    "discrete_inner",
    "discrete_norm",
    "dual_discrete_inner",
    "dual_discrete_norm",
    "j_interpolant",
    "pi_minus_j",
    "commuting_j_check",
    "whitney_evaluate",
    "l2_norm_whitney",
]


def star_matrix(dual: DualComplex, k: int) -> sp.csr_matrix:
    """Diagonal Hodge star S_k = diag(|*sigma| / |sigma|)."""
    return sp.diags(dual.hodge_ratio_a[k], format="csr")


def star_inverse_matrix(dual: DualComplex, k: int) -> sp.csr_matrix:
    """S_k^{-1} = diag(|sigma| / |*sigma|)."""
    return sp.diags(dual.hodge_ratio_b[k], format="csr")


def hodge_star_apply(dual: DualComplex, k: int, w: np.ndarray) -> np.ndarray:
    """Dual-cell values of the starred cochain: <*w, *sigma> = a_sigma w_sigma."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (dual.complex.n_simplices(k),):
        raise ValueError(f"cochain length {w.shape} does not match degree {k}")
    return dual.hodge_ratio_a[k] * w


def hodge_star_inverse_apply(dual: DualComplex, k: int, w: np.ndarray) -> np.ndarray:
    """Inverse star: multiply dual-cell values by b_sigma."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (dual.complex.n_simplices(k),):
        raise ValueError(f"cochain length {w.shape} does not match degree {k}")
    return dual.hodge_ratio_b[k] * w


def codifferential_matrix(
    K: SimplicialComplex, dual: DualComplex, k: int
) -> sp.csr_matrix:
    """delta_k = S_{k-1}^{-1} D_{k-1}^T S_k mapping k-cochains to (k-1)-cochains."""
    if not 1 <= k <= K.dim:
        raise ValueError(f"codifferential is defined for 1 <= k <= {K.dim}")
    d = K.coboundary_matrix(k - 1)
    return (
        star_inverse_matrix(dual, k - 1) @ (d.T.tocsr() @ star_matrix(dual, k))
    ).tocsr()


def codifferential_matrix_stencil(
    K: SimplicialComplex, dual: DualComplex, k: int
) -> sp.csr_matrix:
    """delta_k assembled row by row from coface stencils.

    Independent of the transpose construction: row sigma collects
    b_sigma * sign(sigma, tau) * a_tau over the cofaces tau of sigma.
    """
    if not 1 <= k <= K.dim:
        raise ValueError(f"codifferential is defined for 1 <= k <= {K.dim}")
    a = dual.hodge_ratio_a[k]
    b = dual.hodge_ratio_b[k - 1]
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for sigma in range(K.n_simplices(k - 1)):
        for inc in K.cofaces(k - 1, sigma):
            rows.append(sigma)
            cols.append(inc.index)
            vals.append(b[sigma] * (inc.sign * a[inc.index]))
    mat = sp.csr_matrix(
        (vals, (rows, cols)),
        shape=(K.n_simplices(k - 1), K.n_simplices(k)),
    )
    mat.sort_indices()
    return mat


def hodge_laplacian_matrix(
    K: SimplicialComplex, dual: DualComplex, k: int
) -> sp.csr_matrix:
    """L_k = D_{k-1} delta_k + delta_{k+1} D_k on k-cochains."""
    if not 0 <= k <= K.dim:
        raise ValueError(f"no {k}-cochains on a {K.dim}-complex")
    n = K.n_simplices(k)
    L = sp.csr_matrix((n, n))
    if k >= 1:
        L = L + K.coboundary_matrix(k - 1) @ codifferential_matrix(K, dual, k)
    if k <= K.dim - 1:
        L = L + codifferential_matrix(K, dual, k + 1) @ K.coboundary_matrix(k)
    return L.tocsr()


def discrete_inner(dual: DualComplex, k: int, u: np.ndarray, v: np.ndarray) -> float:
    """Cochain inner product [[u, v]]_k = sum a_sigma u_sigma v_sigma."""
    if len(u) != len(v):
        raise ValueError("cochain lengths differ")
    return float(np.sum(dual.hodge_ratio_a[k] * u * v))


def discrete_norm(dual: DualComplex, k: int, u: np.ndarray) -> float:
    return float(np.sqrt(np.sum(dual.hodge_ratio_a[k] * u * u)))


def dual_discrete_inner(
    dual: DualComplex, k: int, u: np.ndarray, v: np.ndarray
) -> float:
    """Dual-cell inner product [[u, v]]_* = sum b_sigma u_sigma v_sigma."""
    if len(u) != len(v):
        raise ValueError("cochain lengths differ")
    return float(np.sum(dual.hodge_ratio_b[k] * u * v))


def dual_discrete_norm(dual: DualComplex, k: int, u: np.ndarray) -> float:
    return float(np.sqrt(np.sum(dual.hodge_ratio_b[k] * u * u)))


def j_interpolant(
    K: SimplicialComplex, dual: DualComplex, form: PolyForm
) -> np.ndarray:
    """Dual-averaging interpolant (J omega)_sigma = b_sigma int_{*sigma} star omega."""
    k = form.degree
    return dual.hodge_ratio_b[k] * de_rham_dual(K, dual, hodge_star(form))


def pi_minus_j(
    K: SimplicialComplex, dual: DualComplex, form: PolyForm
) -> np.ndarray:
    """Difference between the de Rham map and the dual-averaging interpolant."""
    return de_rham(K, form) - j_interpolant(K, dual, form)


def commuting_j_check(
    K: SimplicialComplex, dual: DualComplex, form: PolyForm
) -> float:
    """Residual norm of delta_h (J omega) = J (delta omega), interior rows.

    Evaluated over interior (k-1)-simplices only: rows attached to the
    boundary integrate over truncated dual cells and pick up the boundary
    term of the smooth integration by parts, so the identity holds there
    only for forms whose tangential star-trace vanishes on the boundary
    (as the manufactured solutions' does).  On interior rows it is a pure
    consequence of Stokes' theorem on closed dual cells and holds for
    every smooth form.
    """
    k = form.degree
    if k < 1:
        raise ValueError("the commuting identity needs a form of degree >= 1")
    lhs = codifferential_matrix(K, dual, k) @ j_interpolant(K, dual, form)
    rhs = j_interpolant(K, dual, codifferential(form))
    diff = lhs - rhs
    interior = ~K.is_boundary(k - 1)
    w = dual.hodge_ratio_a[k - 1][interior] * diff[interior] ** 2
    return float(np.sqrt(w.sum()))


# ---------------------------------------------------------------------------
# Whitney reconstruction
# ---------------------------------------------------------------------------


def _triangle_frames(K: SimplicialComplex):
    """Per-triangle affine data: origin, edge vectors, inverse map, signed det."""
    tris = K.simplices(2)
    p0 = K.vertices[tris[:, 0]]
    e1 = K.vertices[tris[:, 1]] - p0
    e2 = K.vertices[tris[:, 2]] - p0
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    inv = np.empty((len(tris), 2, 2))
    inv[:, 0, 0] = e2[:, 1] / det
    inv[:, 0, 1] = -e2[:, 0] / det
    inv[:, 1, 0] = -e1[:, 1] / det
    inv[:, 1, 1] = e1[:, 0] / det
    return p0, e1, e2, inv, det


def _barycentric_gradients(inv: np.ndarray) -> np.ndarray:
    """(T, 3, 2) gradients of the barycentric coordinates."""
    grads = np.empty((inv.shape[0], 3, 2))
    grads[:, 1] = inv[:, 0]
    grads[:, 2] = inv[:, 1]
    grads[:, 0] = -(grads[:, 1] + grads[:, 2])
    return grads


_WHITNEY_EDGE_PAIRS = ((0, 1), (0, 2), (1, 2))  # matches cell_edges order


def whitney_evaluate(
    K: SimplicialComplex,
    k: int,
    cochain: np.ndarray,
    tri_index: int,
    points: np.ndarray,
) -> np.ndarray:
    """Evaluate the Whitney reconstruction of a k-cochain inside one triangle.

    Lowest-order basis on a triangle with ascending vertices (v0, v1, v2):
    k = 0 the hat functions lambda_i; k = 1 the edge forms
    lambda_i grad lambda_j - lambda_j grad lambda_i over ascending edges
    (i, j); k = 2 the constant density s_T / |T| whose signed integral over
    the ascending orientation is 1.

    Returns values (m,) for k = 0, 2 and vector proxies (m, 2) for k = 1.

    Raises
    ------
    ValueError
        If a point lies outside the triangle.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    p0, _, _, inv, det = _triangle_frames(K)
    tris = K.simplices(2)
    t = int(tri_index)

    xi = (pts - p0[t]) @ inv[t].T
    lam = np.concatenate([(1.0 - xi.sum(axis=1))[:, None], xi], axis=1)
    if (lam < -1e-12).any():
        raise ValueError(f"a point lies outside triangle {tris[t]}")

    if k == 0:
        return lam @ cochain[tris[t]]
    if k == 2:
        s = 1.0 if det[t] > 0 else -1.0
        val = cochain[t] * s / (0.5 * abs(det[t]))
        return np.full(len(pts), val)
    if k != 1:
        raise ValueError(f"no {k}-cochains on a 2-complex")

    grads = _barycentric_gradients(inv)[t]
    vals = np.zeros((len(pts), 2))
    for local, (i, j) in enumerate(_WHITNEY_EDGE_PAIRS):
        u_e = cochain[K.cell_edges[t, local]]
        w = lam[:, i, None] * grads[None, j] - lam[:, j, None] * grads[None, i]
        vals += u_e * w
    return vals


def l2_norm_whitney(
    K: SimplicialComplex, k: int, cochain: np.ndarray, rule_degree: int = 4
) -> float:
    """L2 norm over the domain of the Whitney reconstruction of a cochain.

    Element-wise quadrature of |W w|^2; the integrand is quadratic, so the
    default rule degree 4 is already more than exact.
    """
    rule = triangle_rule(rule_degree)
    xi, w = rule.points, rule.weights
    lam = np.concatenate([(1.0 - xi.sum(axis=1))[:, None], xi], axis=1)  # (q, 3)
    p0, _, _, inv, det = _triangle_frames(K)
    tris = K.simplices(2)
    area2 = np.abs(det)

    if k == 0:
        vals = np.einsum("tv,qv->tq", cochain[tris], lam)
        sq = vals**2
    elif k == 1:
        grads = _barycentric_gradients(inv)
        field = np.zeros((len(tris), len(w), 2))
        for local, (i, j) in enumerate(_WHITNEY_EDGE_PAIRS):
            u_e = cochain[K.cell_edges[:, local]]
            wpart = (
                lam[None, :, i, None] * grads[:, None, j, :]
                - lam[None, :, j, None] * grads[:, None, i, :]
            )
            field += u_e[:, None, None] * wpart
        sq = (field**2).sum(axis=2)
    elif k == 2:
        dens = cochain / (0.5 * area2)
        sq = (dens**2)[:, None] * np.ones(len(w))[None, :]
    else:
        raise ValueError(f"no {k}-cochains on a 2-complex")

    per_tri = area2 * (sq @ w)
    return float(np.sqrt(per_tri.sum()))
