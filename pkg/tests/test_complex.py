"""Simplicial complex construction and oriented incidence.

Hand oracle used throughout: the two-triangle complex [0,1,2], [1,2,3] on
vertices (0,0), (1,0), (0,1), (1,1).  Edges in lexicographic order:

    0: (0,1)   1: (0,2)   2: (1,2)   3: (1,3)   4: (2,3)

Boundary [a,b] = [b] - [a] gives D0; boundary [a,b,c] = [b,c] - [a,c] + [a,b]
gives D1:

    D0 = [[-1,  1,  0,  0],      D1 = [[ 1, -1,  1,  0,  0],
          [-1,  0,  1,  0],            [ 0,  0,  1, -1,  1]]
          [ 0, -1,  1,  0],
          [ 0, -1,  0,  1],
          [ 0,  0, -1,  1]]

Edge (1,2) is interior (two cofaces); the others have one.
"""

from __future__ import annotations

import numpy as np
import pytest

from declab import Simplex, build_complex

TWO_TRI_VERTS = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
TWO_TRI_CELLS = np.array([[0, 1, 2], [1, 2, 3]])

D0_ORACLE = np.array(
    [
        [-1.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 1.0],
    ]
)
D1_ORACLE = np.array(
    [
        [1.0, -1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, -1.0, 1.0],
    ]
)


@pytest.fixture
def two_tri():
    return build_complex(TWO_TRI_VERTS, TWO_TRI_CELLS)


def test_single_triangle_counts():
    K = build_complex(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), [[0, 1, 2]])
    assert [K.n_simplices(k) for k in range(3)] == [3, 3, 1]
    assert K.is_boundary(1).all()
    assert K.is_boundary(0).all()


def test_two_triangle_edge_table(two_tri):
    expected = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert [tuple(e) for e in two_tri.simplices(1)] == expected
    assert two_tri.n_simplices(1) == 5
    # only the shared edge (1,2) is interior
    assert list(two_tri.is_boundary(1)) == [True, True, False, True, True]


def test_coboundary_matrices_match_hand_oracle(two_tri):
    np.testing.assert_array_equal(two_tri.coboundary_matrix(0).toarray(), D0_ORACLE)
    np.testing.assert_array_equal(two_tri.coboundary_matrix(1).toarray(), D1_ORACLE)


def test_d_after_d_is_zero(two_tri):
    prod = (two_tri.coboundary_matrix(1) @ two_tri.coboundary_matrix(0)).tocsr()
    prod.eliminate_zeros()
    assert prod.nnz == 0


def test_faces_of_triangle_signs(two_tri):
    # boundary [0,1,2] = [1,2] - [0,2] + [0,1]
    got = {
        tuple(two_tri.simplex(1, f.index).vertices): f.sign
        for f in two_tri.faces(2, 0)
    }
    assert got == {(1, 2): 1, (0, 2): -1, (0, 1): 1}


def test_interior_edge_cofaces_cancel_with_orientation(two_tri):
    """The two cofaces of an interior edge induce opposite orientations on
    it once the triangles' geometric (CCW/CW) signs are taken into account:
    the ascending-tuple coefficients alone need not differ."""
    pts = two_tri.vertices
    interior = int(two_tri.index_of((1, 2)))
    cof = two_tri.cofaces(1, interior)
    assert len(cof) == 2
    total = 0.0
    for inc in cof:
        tri = two_tri.simplices(2)[inc.index]
        e1, e2 = pts[tri[1]] - pts[tri[0]], pts[tri[2]] - pts[tri[0]]
        ccw = 1.0 if e1[0] * e2[1] - e1[1] * e2[0] > 0 else -1.0
        total += ccw * inc.sign
    assert total == 0.0
    # boundary edges have exactly one coface
    for e in range(two_tri.n_simplices(1)):
        if e != interior:
            assert len(two_tri.cofaces(1, e)) == 1


def test_vertex_coboundary_is_difference(two_tri):
    w = np.array([3.0, 5.0, 11.0, 2.0])
    dw = two_tri.coboundary_matrix(0) @ w
    # edge (a,b) carries w_b - w_a
    for i, (a, b) in enumerate(two_tri.simplices(1)):
        assert dw[i] == w[b] - w[a]


def test_stokes_pairing_against_transpose(two_tri):
    rng = np.random.default_rng(11)
    for k in (0, 1):
        D = two_tri.coboundary_matrix(k)
        w = rng.standard_normal(two_tri.n_simplices(k))
        c = rng.standard_normal(two_tri.n_simplices(k + 1))
        assert np.isclose((D @ w) @ c, w @ (D.T @ c), rtol=1e-13, atol=0)


def test_index_round_trip(two_tri):
    for k in range(3):
        for i in range(two_tri.n_simplices(k)):
            s = two_tri.simplex(k, i)
            assert isinstance(s, Simplex)
            assert s.dim == k
            assert two_tri.index_of(s.vertices) == i


def test_cofaces_and_faces_signs_consistent(two_tri):
    for k in (1, 2):
        for tau in range(two_tri.n_simplices(k)):
            for f in two_tri.faces(k, tau):
                back = {
                    inc.index: inc.sign for inc in two_tri.cofaces(k - 1, f.index)
                }
                assert back[tau] == f.sign


def test_mesh_size_is_longest_edge(two_tri):
    assert two_tri.mesh_size() == pytest.approx(np.sqrt(2.0))


def test_rejects_duplicate_cell():
    with pytest.raises(ValueError, match="duplicate"):
        build_complex(TWO_TRI_VERTS, [[0, 1, 2], [2, 1, 0]])


def test_rejects_degenerate_cell():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(ValueError, match="degenerate"):
        build_complex(verts, [[0, 1, 2]])


def test_rejects_non_manifold_edge():
    verts = np.array(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, -1.0]]
    )
    cells = [[0, 1, 2], [1, 2, 3], [0, 1, 4]]
    # edge (0,1) would belong to triangles 0 and 2; add one more on it
    cells.append([0, 1, 3])
    with pytest.raises(ValueError, match="non-manifold"):
        build_complex(verts, cells)


def test_rejects_repeated_vertex_in_cell():
    with pytest.raises(ValueError, match="repeats"):
        build_complex(TWO_TRI_VERTS, [[0, 1, 1]])


def test_rejects_out_of_range_vertex():
    with pytest.raises(ValueError, match="out of range"):
        build_complex(TWO_TRI_VERTS, [[0, 1, 7]])


def test_rejects_unreferenced_vertex():
    with pytest.raises(ValueError, match="not referenced"):
        build_complex(TWO_TRI_VERTS, [[0, 1, 2]])


def test_coboundary_k_out_of_range(two_tri):
    with pytest.raises(ValueError):
        two_tri.coboundary_matrix(2)
