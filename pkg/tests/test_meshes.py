"""Mesh families, the counter-based RNG, and mesh file IO.

The RNG oracle is the classic splitmix64 stream: state += golden gamma,
output = finalizer(state).  Seed 1234567 must produce the published
sequence 6457827717110365317, 3203168211198807973, 9817491932198370423;
`counter_uniform(seed, i)` must equal draw i of that stream mapped to
[0, 1) by taking the top 53 bits.
"""

from __future__ import annotations

import numpy as np
import pytest

from declab import (
    MeshError,
    MeshFamilySpec,
    build_dual,
    build_mesh,
    counter_uniform,
    is_well_centered,
    perturbed_mesh,
    read_mesh,
    symmetric_mesh,
    write_mesh,
)

SQRT3 = np.sqrt(3.0)

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _splitmix64_stream(seed: int, n: int) -> list[int]:
    """Independent textbook splitmix64: advance state, finalize, repeat."""
    out = []
    state = seed
    for _ in range(n):
        state = (state + _GAMMA) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out


# -- RNG ----------------------------------------------------------------------


def test_splitmix64_published_vector():
    assert _splitmix64_stream(1234567, 3) == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
    ]


def test_counter_uniform_matches_stream():
    for seed in (0, 1, 42, 2**63):
        stream = _splitmix64_stream(seed, 8)
        for i, z in enumerate(stream):
            assert counter_uniform(seed, i) == (z >> 11) * 2.0**-53


def test_counter_uniform_range_and_spread():
    draws = np.array([counter_uniform(9, i) for i in range(1000)])
    assert ((0.0 <= draws) & (draws < 1.0)).all()
    assert abs(draws.mean() - 0.5) < 0.03


# -- symmetric family ---------------------------------------------------------


def test_symmetric_counts():
    K1 = symmetric_mesh(1)
    assert [K1.n_simplices(k) for k in range(3)] == [6, 9, 4]
    K2 = symmetric_mesh(2)
    assert [K2.n_simplices(k) for k in range(3)] == [15, 30, 16]


def test_symmetric_geometry():
    for m in (1, 2, 3):
        K = symmetric_mesh(m)
        h = 0.5**m
        ends = K.vertices[K.simplices(1)]
        lengths = np.linalg.norm(ends[:, 1] - ends[:, 0], axis=1)
        np.testing.assert_allclose(lengths, h, rtol=1e-14)
        assert K.mesh_size() == pytest.approx(h, rel=1e-14)
        # covers the unit-edge equilateral domain
        assert K.vertices[:, 0].min() == 0.0
        assert K.vertices[:, 0].max() == 1.0
        assert K.vertices[:, 1].max() == pytest.approx(SQRT3 / 2, rel=1e-15)
        ok, offenders = is_well_centered(K)
        assert ok and not offenders


def test_symmetric_vertices_are_lexicographically_ordered():
    K = symmetric_mesh(2)
    keys = list(map(tuple, np.round(K.vertices[:, ::-1], 12)))
    assert keys == sorted(keys)


def test_symmetric_area_partition():
    K = symmetric_mesh(3)
    tris = K.vertices[K.simplices(2)]
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    np.testing.assert_allclose(areas, SQRT3 / 4 * 0.5**6, rtol=1e-13)
    assert areas.sum() == pytest.approx(SQRT3 / 4, rel=1e-13)


# -- perturbed family ---------------------------------------------------------


def test_perturbed_zero_alpha_is_symmetric():
    K0 = symmetric_mesh(2)
    Kp = perturbed_mesh(2, seed=3, alpha=0.0)
    assert np.array_equal(K0.vertices, Kp.vertices)
    assert np.array_equal(K0.simplices(2), Kp.simplices(2))


def test_perturbed_is_deterministic_and_seed_dependent():
    a = perturbed_mesh(3, seed=1)
    b = perturbed_mesh(3, seed=1)
    c = perturbed_mesh(3, seed=2)
    assert np.array_equal(a.vertices, b.vertices)
    assert not np.array_equal(a.vertices, c.vertices)


def test_perturbed_moves_only_interior_vertices_within_alpha_h():
    m, alpha = 3, 0.15
    K0 = symmetric_mesh(m)
    Kp = perturbed_mesh(m, seed=1, alpha=alpha)
    disp = np.linalg.norm(Kp.vertices - K0.vertices, axis=1)
    boundary = K0.is_boundary(0)
    assert np.abs(disp[boundary]).max() == 0.0
    assert disp[~boundary].max() <= alpha * 0.5**m + 1e-15
    assert disp[~boundary].max() > 0.0
    ok, _ = is_well_centered(Kp)
    assert ok


def test_perturbed_meshes_stay_well_centered_across_seeds():
    for seed in range(1, 6):
        K = perturbed_mesh(2, seed=seed)
        build_dual(K)  # raises if any triangle is not strictly acute


def test_mesh_family_spec_validation_and_dispatch():
    K = build_mesh(MeshFamilySpec("symmetric", 1))
    assert K.n_simplices(2) == 4
    Kp = build_mesh(MeshFamilySpec("perturbed", 2, seed=4))
    assert np.array_equal(Kp.vertices, perturbed_mesh(2, seed=4).vertices)
    with pytest.raises(ValueError, match="family"):
        MeshFamilySpec("random", 1)
    with pytest.raises(ValueError, match="level"):
        MeshFamilySpec("symmetric", 0)
    with pytest.raises(ValueError, match="alpha"):
        MeshFamilySpec("perturbed", 1, alpha=0.5)
    with pytest.raises(ValueError):
        perturbed_mesh(0, seed=1)


# -- mesh file IO -------------------------------------------------------------


def test_write_read_round_trip(tmp_path):
    K = perturbed_mesh(2, seed=5)
    path = tmp_path / "mesh.txt"
    write_mesh(K, path)
    K2 = read_mesh(path)
    assert np.array_equal(K.vertices, K2.vertices)  # %.17g is exact for float64
    assert np.array_equal(K.simplices(2), K2.simplices(2))


def test_read_mesh_accepts_comments_and_whitespace(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text(
        "# a single triangle\n2 3 1\n\n0.0 0.0\n1.0 0.0  # inline noise-free\n0.5 0.8\n0 1 2\n"
    )
    K = read_mesh(path)
    assert K.n_simplices(2) == 1


@pytest.mark.parametrize(
    "text,match",
    [
        ("", "header"),
        ("3 3 1\n0 0\n1 0\n0.5 1\n0 1 2\n", "planar"),
        ("2 3 1\n0 0\n1 0\n0.5 1\n0 1\n", "malformed|expected"),
        ("2 3 1\n0 0\n1 0\n0.5 1\n0 1 5\n", "outside"),
        ("2 3 1\n0 0\nane 0\n0.5 1\n0 1 2\n", "malformed"),
        ("2 4 1\n0 0\n1 0\n0.5 1\n2 2\n0 1 2\n", "complex"),
    ],
)
def test_read_mesh_error_cases(tmp_path, text, match):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(MeshError, match=match):
        read_mesh(path)


def test_read_mesh_missing_file():
    with pytest.raises(MeshError, match="cannot read"):
        read_mesh("/nonexistent/mesh.txt")
