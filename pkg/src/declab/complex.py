"""Oriented simplicial complexes on planar triangulations.

A complex is built from an explicit vertex table and a list of triangles.
All lower-dimensional simplices are enumerated, deduplicated, and sorted
lexicographically by ascending vertex tuple, so every k-simplex has a stable
integer index.

Orientation convention: a simplex is identified with its ascending vertex
tuple, and the oriented boundary of [v0, ..., vk] (v0 < ... < vk) is

    boundary [v0, ..., vk] = sum_j (-1)^j [v0, ..., v_{j-1}, v_{j+1}, ..., vk].

The coboundary matrix D_k is the transpose of this incidence: D_k[tau, sigma]
is the coefficient of sigma in the boundary of tau, so that the discrete
Stokes pairing <D w, tau> = <w, boundary tau> holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Simplex",
    "SignedIncidence",
    "SimplicialComplex",
    "build_complex",
]


@dataclass(frozen=True)
class Simplex:
    """A single simplex: its ascending vertex tuple and table index."""

    vertices: tuple[int, ...]
    index: int

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class SignedIncidence:
    """Index of an incident simplex together with its relative sign (+1/-1)."""

    index: int
    sign: int


class SimplicialComplex:
    """Two-dimensional simplicial complex with cached sparse incidence.

    Instances are produced by :func:`build_complex`; the constructor assumes
    pre-validated tables.

    Attributes
    ----------
    vertices : (V, 2) float array of vertex coordinates.
    dim : topological dimension (always 2).
    cell_edges : (T, 3) int array; row t holds the Delta_1 indices of the
        edges of triangle t in local pair order [(0,1), (0,2), (1,2)]
        relative to the ascending triangle tuple.
    """

    dim = 2

    def __init__(
        self,
        vertices: np.ndarray,
        edges: np.ndarray,
        triangles: np.ndarray,
        cell_edges: np.ndarray,
        boundary_flags: list[np.ndarray],
    ):
        self.vertices = vertices
        self._tables = [
            np.arange(len(vertices), dtype=np.int64).reshape(-1, 1),
            edges,
            triangles,
        ]
        self.cell_edges = cell_edges
        self._boundary = boundary_flags
        self._coboundary: dict[int, sp.csr_matrix] = {}
        self._coboundary_csc: dict[int, sp.csc_matrix] = {}
        self._index_maps: dict[int, dict[tuple[int, ...], int]] = {}

    # -- simplex tables ----------------------------------------------------

    def n_simplices(self, k: int) -> int:
        """Number of k-simplices."""
        return len(self._table(k))

    def simplices(self, k: int) -> np.ndarray:
        """(N_k, k+1) int array of ascending vertex tuples, lex-sorted."""
        return self._table(k)

    def simplex(self, k: int, index: int) -> Simplex:
        """The k-simplex with the given table index."""
        row = self._table(k)[index]
        return Simplex(tuple(int(v) for v in row), int(index))

    def index_of(self, vertices: tuple[int, ...]) -> int:
        """Table index of the simplex with the given vertex set."""
        key = tuple(sorted(int(v) for v in vertices))
        k = len(key) - 1
        if k not in self._index_maps:
            table = self._table(k)
            self._index_maps[k] = {
                tuple(int(v) for v in row): i for i, row in enumerate(table)
            }
        try:
            return self._index_maps[k][key]
        except KeyError:
            raise KeyError(f"no {k}-simplex with vertices {key}") from None

    def is_boundary(self, k: int) -> np.ndarray:
        """Boolean mask over Delta_k: True where the simplex lies in the
        geometric boundary (i.e. is contained in an edge with one coface)."""
        self._table(k)
        return self._boundary[k]

    def mesh_size(self) -> float:
        """Mesh parameter h: the largest simplex diameter (longest edge)."""
        ends = self.vertices[self._table(1)]
        return float(np.linalg.norm(ends[:, 1] - ends[:, 0], axis=1).max())

    def _table(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.dim:
            raise ValueError(f"no {k}-simplices in a {self.dim}-complex")
        return self._tables[k]

    # -- incidence ----------------------------------------------------------

    def coboundary_matrix(self, k: int) -> sp.csr_matrix:
        """Sparse coboundary D_k of shape (N_{k+1}, N_k).

        D_k[tau, sigma] = (-1)^j when sigma is tau with its j-th vertex
        removed.  Entries are exact +-1 stored as float64.  Cached.
        """
        if not 0 <= k < self.dim:
            raise ValueError(f"coboundary_matrix: k must be in [0, {self.dim}), got {k}")
        if k not in self._coboundary:
            self._coboundary[k] = self._build_coboundary(k)
        return self._coboundary[k]

    def _build_coboundary(self, k: int) -> sp.csr_matrix:
        if k == 0:
            edges = self._table(1)
            ne = len(edges)
            rows = np.repeat(np.arange(ne, dtype=np.int64), 2)
            cols = edges.ravel()
            # boundary [a, b] = [b] - [a]
            vals = np.tile(np.array([-1.0, 1.0]), ne)
        else:  # k == 1
            nt = self.n_simplices(2)
            rows = np.repeat(np.arange(nt, dtype=np.int64), 3)
            cols = self.cell_edges.ravel()
            # local pair order [(0,1), (0,2), (1,2)] drops vertex 2, 1, 0:
            # signs (+1, -1, +1)
            vals = np.tile(np.array([1.0, -1.0, 1.0]), nt)
        mat = sp.csr_matrix(
            (vals, (rows, cols)),
            shape=(self.n_simplices(k + 1), self.n_simplices(k)),
        )
        mat.sum_duplicates()
        mat.sort_indices()
        return mat

    def cofaces(self, k: int, index: int) -> list[SignedIncidence]:
        """Signed (k+1)-cofaces of the k-simplex `index`.

        The sign is the coefficient of the simplex in the coface's boundary.
        """
        if k == self.dim:
            return []
        if k not in self._coboundary_csc:
            self._coboundary_csc[k] = self.coboundary_matrix(k).tocsc()
        col = self._coboundary_csc[k]
        lo, hi = col.indptr[index], col.indptr[index + 1]
        return [
            SignedIncidence(int(i), int(s))
            for i, s in zip(col.indices[lo:hi], col.data[lo:hi])
        ]

    def faces(self, k: int, index: int) -> list[SignedIncidence]:
        """Signed (k-1)-faces of the k-simplex `index`, in drop-j order."""
        if k == 0:
            return []
        verts = self._table(k)[index]
        out = []
        for j in range(k + 1):
            face = tuple(int(v) for i, v in enumerate(verts) if i != j)
            out.append(SignedIncidence(self.index_of(face), -1 if j % 2 else 1))
        return out


def build_complex(vertices: np.ndarray, cells: np.ndarray) -> SimplicialComplex:
    """Build a 2-D simplicial complex from vertex coordinates and triangles.

    Parameters
    ----------
    vertices : array-like, shape (V, 2)
        Vertex coordinates.
    cells : array-like, shape (T, 3)
        Vertex indices of each triangle, any order; stored ascending.

    Raises
    ------
    ValueError
        On out-of-range or repeated vertex indices, duplicate cells,
        degenerate (zero-area) cells, unreferenced vertices, or a
        non-manifold edge (more than two cofaces).
    """
    vertices = np.ascontiguousarray(np.asarray(vertices, dtype=np.float64))
    if vertices.ndim != 2 or vertices.shape[1] != 2:
        raise ValueError("vertices must have shape (V, 2); this library is two-dimensional")
    cells = np.asarray(cells, dtype=np.int64)
    if cells.ndim != 2 or cells.shape[1] != 3:
        raise ValueError("cells must have shape (T, 3)")
    nv = len(vertices)
    if len(cells) == 0:
        raise ValueError("complex needs at least one cell")
    if cells.min() < 0 or cells.max() >= nv:
        raise ValueError("cell references a vertex index out of range")

    tris = np.sort(cells, axis=1)
    if np.any(np.diff(tris, axis=1) <= 0):
        bad = int(np.where(np.any(np.diff(tris, axis=1) <= 0, axis=1))[0][0])
        raise ValueError(f"cell {bad} repeats a vertex")

    # degenerate cells: area from the cross product of two edge vectors
    p = vertices[tris]
    e1, e2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    scale = np.max(np.abs(p - p[:, :1]), axis=(1, 2)) ** 2 + np.finfo(np.float64).tiny
    if np.any(np.abs(cross) <= 1e-12 * scale):
        bad = int(np.argmin(np.abs(cross) / scale))
        raise ValueError(f"cell {bad} is degenerate (zero area)")

    order = np.lexsort(tris.T[::-1])
    tris = tris[order]
    if np.any(np.all(tris[1:] == tris[:-1], axis=1)):
        raise ValueError("duplicate cell")

    used = np.zeros(nv, dtype=bool)
    used[tris.ravel()] = True
    if not used.all():
        raise ValueError(f"vertex {int(np.where(~used)[0][0])} is not referenced by any cell")

    # enumerate edges; np.unique sorts rows lexicographically
    pair_local = [(0, 1), (0, 2), (1, 2)]
    edges_all = tris[:, pair_local].reshape(-1, 2)
    edges, inverse = np.unique(edges_all, axis=0, return_inverse=True)
    cell_edges = inverse.reshape(-1, 3).astype(np.int64)

    coface_count = np.bincount(cell_edges.ravel(), minlength=len(edges))
    if coface_count.max() > 2:
        bad = int(np.argmax(coface_count))
        raise ValueError(
            f"non-manifold edge {tuple(int(v) for v in edges[bad])}: "
            f"{int(coface_count[bad])} cofaces"
        )

    boundary_edges = coface_count == 1
    boundary_vertices = np.zeros(nv, dtype=bool)
    boundary_vertices[edges[boundary_edges].ravel()] = True
    flags = [boundary_vertices, boundary_edges, np.zeros(len(tris), dtype=bool)]

    return SimplicialComplex(vertices, edges, tris, cell_edges, flags)
