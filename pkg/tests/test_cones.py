"""Cone calculus: minors, complex powers, triangular group."""

import numpy as np
import pytest

from symcone import cones, eja
from symcone.eja import Element

RNG = np.random.default_rng(20240812)

ALGS = [
    eja.sym_real(1),
    eja.sym_real(2),
    eja.sym_real(3),
    eja.herm_complex(2),
    eja.herm_complex(3),
    eja.herm_quaternion(2),
    eja.spin_factor(4),
    eja.spin_factor(5),
]


def rand_cone_point(alg, rng, spread=1.0):
    """t . e for a random triangular t: guaranteed interior."""
    t = rand_triangular(alg, rng, spread)
    return cones.t_action(t, eja.identity(alg))


def rand_triangular(alg, rng, spread=1.0):
    if alg.family == "spin":
        return cones.TriangularElement(
            alg,
            t11=np.exp(spread * rng.normal()),
            t22=np.exp(spread * rng.normal()),
            v=spread * rng.normal(size=alg.dim_m - 2),
        )
    if alg.family == "herm_quaternion":
        # the cholesky factor of a quaternionic cone point stays in the group
        v = rand_element(alg, rng, scale=spread)
        y = eja.jordan_product(v, v) + 0.3 * eja.identity(alg)
        return cones.cholesky_t(y)
    n = alg.size
    if alg.family == "sym_real":
        M = spread * rng.normal(size=(n, n))
    else:
        M = spread * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    L = np.tril(M, k=-1) + np.diag(np.exp(spread * rng.normal(size=n)))
    return cones.TriangularElement(alg, mat=L)


def rand_element(alg, rng, scale=1.0):
    return Element(alg, scale * rng.normal(size=alg.dim_m))


# ---------------------------------------------------------------------------
# minors
# ---------------------------------------------------------------------------

def test_minors_at_identity_are_one():
    for alg in ALGS:
        e = eja.identity(alg)
        for j in range(1, alg.rank + 1):
            assert cones.delta_j(e, j) == pytest.approx(1.0, abs=1e-12)


def test_top_minor_is_the_determinant():
    for alg in ALGS:
        for _ in range(4):
            x = rand_element(alg, RNG)
            assert cones.delta_j(x, alg.rank) == pytest.approx(
                eja.determinant(x), rel=1e-9, abs=1e-11
            )


def test_minors_match_embedded_blocks():
    # oracle: numeric determinants of leading blocks of the embedding
    for alg in [eja.sym_real(3), eja.herm_complex(3)]:
        for _ in range(5):
            x = rand_element(alg, RNG)
            M = eja.embed_matrix(x)
            for j in range(1, alg.rank + 1):
                want = np.linalg.det(M[:j, :j]).real
                assert cones.delta_j(x, j) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_quaternion_minors_square_to_embedded_dets():
    alg = eja.herm_quaternion(2)
    for _ in range(5):
        x = rand_element(alg, RNG)
        M = eja.embed_matrix(x)
        for j in range(1, alg.rank + 1):
            d = cones.delta_j(x, j)
            want = np.linalg.det(M[: 2 * j, : 2 * j]).real
            assert d * d == pytest.approx(want, rel=1e-8, abs=1e-10)
    # sign fixed by the identity, degree-j homogeneity pins it everywhere
    e = eja.identity(alg)
    assert cones.delta_j(e, 1) == pytest.approx(1.0)
    assert cones.delta_j(e, 2) == pytest.approx(1.0)


def test_spin_minor_closed_forms():
    alg = eja.spin_factor(5)
    for _ in range(5):
        c = RNG.normal(size=5)
        x = Element(alg, c)
        assert cones.delta_j(x, 1) == pytest.approx(c[0])
        assert cones.delta_j(x, 2) == pytest.approx(c[0] * c[1] - np.dot(c[2:], c[2:]))


def test_minor_multiplicativity_on_triangular_orbit():
    # Delta_j(t . x) = prod_{k<=j} t_kk^2 Delta_j(x) pins every coefficient
    for alg in ALGS:
        t = rand_triangular(alg, RNG, spread=0.4)
        d = t.diagonal()
        x = rand_element(alg, RNG)
        tx = cones.t_action(t, x)
        for j in range(1, alg.rank + 1):
            scale = np.prod(d[:j] ** 2)
            assert cones.delta_j(tx, j) == pytest.approx(
                scale * cones.delta_j(x, j), rel=1e-8, abs=1e-10
            )


def test_star_minors_reverse_the_frame():
    for alg in ALGS:
        x = rand_element(alg, RNG)
        # top minor is frame independent
        assert cones.delta_j_star(x, alg.rank) == pytest.approx(
            cones.delta_j(x, alg.rank), rel=1e-9, abs=1e-12
        )
    alg = eja.sym_real(3)
    x = rand_element(alg, RNG)
    M = eja.embed_matrix(x)
    assert cones.delta_j_star(x, 1) == pytest.approx(M[2, 2])
    assert cones.delta_j_star(x, 2) == pytest.approx(np.linalg.det(M[1:, 1:]))


def test_spin_star_minor_swaps_coordinates():
    alg = eja.spin_factor(4)
    x = Element(alg, np.array([3.0, 2.0, 1.0, -1.0]))
    assert cones.delta_j_star(x, 1) == pytest.approx(2.0)
    assert cones.delta_j_star(x, 2) == pytest.approx(cones.delta_j(x, 2))


# ---------------------------------------------------------------------------
# cone membership and real powers
# ---------------------------------------------------------------------------

def test_in_cone_matches_minor_positivity():
    hits = 0
    for alg in ALGS:
        for _ in range(40):
            x = rand_element(alg, RNG, scale=1.2)
            inside = cones.in_cone(x)
            minors = [cones.delta_j(x, j) for j in range(1, alg.rank + 1)]
            if inside:
                assert all(m > 0 for m in minors)
                hits += 1
            elif cones.min_eigenvalue(x) < -1e-9:
                assert min(minors) < 1e-9
    assert hits > 10  # the sampler does reach the cone


def test_identity_and_orbit_points_are_interior():
    for alg in ALGS:
        assert cones.in_cone(eja.identity(alg))
        y = rand_cone_point(alg, RNG, spread=0.7)
        assert cones.in_cone(y)


def test_delta_power_successive_differences():
    alg = eja.sym_real(3)
    x = rand_cone_point(alg, RNG, spread=0.5)
    s = np.array([2.0, 1.0, -0.5])
    d1, d2, d3 = (cones.delta_j(x, j) for j in (1, 2, 3))
    want = d1 ** (s[0] - s[1]) * d2 ** (s[1] - s[2]) * d3 ** s[2]
    assert cones.delta_power(x, s) == pytest.approx(want, rel=1e-12)
    # scalar power: s = (lam, ..., lam) gives det^lam
    lam = 0.7
    assert cones.delta_power(x, lam * np.ones(3)) == pytest.approx(
        eja.determinant(x) ** lam, rel=1e-10
    )


def test_delta_power_rejects_outside_points():
    alg = eja.sym_real(2)
    x = Element(alg, np.array([1.0, 0.0, -1.0]))
    with pytest.raises(ValueError):
        cones.delta_power(x, np.array([1.0, 1.0]))


# ---------------------------------------------------------------------------
# complex powers and branch continuity
# ---------------------------------------------------------------------------

def test_complex_power_restricts_to_real_power():
    for alg in ALGS:
        y = rand_cone_point(alg, RNG, spread=0.5)
        s = np.sort(RNG.normal(size=alg.rank))[::-1]
        a = cones.delta_power_complex(y, s)
        b = cones.delta_power(y, s)
        assert abs(a.imag) < 1e-10 * max(1.0, abs(b))
        assert a.real == pytest.approx(b, rel=1e-9)


def test_complex_power_agrees_with_eigen_route_high_rank():
    # rank-3 algebras exercise the per-eigenvalue branch
    for alg in [eja.sym_real(3), eja.herm_complex(3)]:
        x = rand_cone_point(alg, RNG, spread=0.4)
        v = rand_element(alg, RNG, scale=0.8)
        w = Element(alg, x.coords + 1j * v.coords)
        lam = 1.3
        got = cones.delta_power_complex(w, lam * np.ones(alg.rank))
        M = eja.embed_matrix(w)
        want = np.exp(lam * cones._log_rhp_det(M))
        assert got == pytest.approx(want, rel=1e-9)


def test_branch_is_continuous_along_loops():
    # walk a closed loop in the tube; the continued log must return exactly
    alg = eja.sym_real(2)
    s = np.array([-1.0, -1.0])
    base = Element(alg, np.array([1.0, 0.0, 1.0], dtype=complex))
    spike = Element(alg, np.array([0.3, 1.1, -0.4]))
    prev = None
    first = None
    n = 200
    for k in range(n + 1):
        th = 2 * np.pi * k / n
        w = Element(
            alg,
            base.coords + 0.6 * np.cos(th) * spike.coords * 1j
            + 0.35 * np.sin(th) * spike.coords,
        )
        val = cones.delta_power_complex(w, s)
        if prev is not None:
            assert abs(val - prev) < 0.35 * max(1.0, abs(prev))
        if first is None:
            first = val
        prev = val
    assert prev == pytest.approx(first, rel=1e-10)


def test_purely_imaginary_identity_power():
    # boundary argument handled by path continuation: Delta^(-1)(i e) = -i
    alg = eja.sym_real(1)
    w = Element(alg, np.array([1j]))
    val = cones.delta_power_complex(w, np.array([-1.0]))
    assert val == pytest.approx(-1j, abs=1e-10)
    # and with rank 2: Delta(ie) = i^2 = -1, Delta^(-1) = -1 on the branch
    alg2 = eja.spin_factor(4)
    w2 = Element(alg2, 1j * eja.identity(alg2).coords.astype(complex))
    val2 = cones.delta_power_complex(w2, np.array([-1.0, -1.0]))
    assert val2 == pytest.approx(-1.0, abs=1e-9)


def test_path_and_direct_branch_agree_in_interior():
    alg = eja.herm_quaternion(2)
    x = rand_cone_point(alg, RNG, spread=0.4)
    v = rand_element(alg, RNG, scale=0.5)
    w = Element(alg, x.coords + 1j * v.coords)
    s = np.array([0.8, -0.6])
    direct = cones.delta_power_complex(w, s)
    via_path = np.exp(sum(
        (np.append(s, 0.0)[j - 1] - np.append(s, 0.0)[j])
        * cones._log_delta_j_path(w, j)
        for j in (1, 2)
    ))
    assert direct == pytest.approx(via_path, rel=1e-9)


def test_complex_power_rejects_left_half_points():
    alg = eja.sym_real(2)
    w = Element(alg, np.array([-1.0 + 0.5j, 0.0, 1.0]))
    with pytest.raises(ValueError):
        cones.delta_power_complex(w, np.array([1.0, 1.0]))


# ---------------------------------------------------------------------------
# triangular group
# ---------------------------------------------------------------------------

def test_cholesky_roundtrip():
    for alg in ALGS:
        y = rand_cone_point(alg, RNG, spread=0.6)
        t = cones.cholesky_t(y)
        back = cones.t_action(t, eja.identity(alg))
        assert np.allclose(back.coords, y.coords, atol=1e-10)


def test_cholesky_diagonal_gives_minor_ratios():
    for alg in ALGS:
        y = rand_cone_point(alg, RNG, spread=0.5)
        t = cones.cholesky_t(y)
        d = t.diagonal()
        prev = 1.0
        for j in range(1, alg.rank + 1):
            dj = cones.delta_j(y, j)
            assert d[j - 1] ** 2 == pytest.approx(dj / prev, rel=1e-8)
            prev = dj


def test_triangular_compose_and_inverse():
    for alg in ALGS:
        t1 = rand_triangular(alg, RNG, spread=0.5)
        t2 = rand_triangular(alg, RNG, spread=0.5)
        x = rand_element(alg, RNG)
        lhs = cones.t_action(t1, cones.t_action(t2, x))
        rhs = cones.t_action(t1.compose(t2), x)
        assert np.allclose(lhs.coords, rhs.coords, atol=1e-9)
        ti = t1.inverse()
        back = cones.t_action(ti, cones.t_action(t1, x))
        assert np.allclose(back.coords, x.coords, atol=1e-8)
        ide = t1.compose(ti)
        e = eja.identity(alg)
        assert np.allclose(cones.t_action(ide, e).coords, e.coords, atol=1e-8)


def test_character_formula():
    for alg in ALGS:
        t = rand_triangular(alg, RNG, spread=0.4)
        s = RNG.normal(size=alg.rank)
        y = cones.t_action(t, eja.identity(alg))
        assert cones.delta_power(y, s) == pytest.approx(
            cones.character(t, s), rel=1e-8
        )


def test_equivariance_of_power_under_triangular():
    # Delta^s(t . x) = Delta^s(t . e) Delta^s(x)
    for alg in ALGS:
        t = rand_triangular(alg, RNG, spread=0.4)
        x = rand_cone_point(alg, RNG, spread=0.4)
        s = RNG.normal(size=alg.rank)
        lhs = cones.delta_power(cones.t_action(t, x), s)
        rhs = cones.character(t, s) * cones.delta_power(x, s)
        assert lhs == pytest.approx(rhs, rel=1e-8)


def test_complexified_action_is_linear():
    alg = eja.herm_complex(2)
    t = rand_triangular(alg, RNG, spread=0.5)
    u = rand_element(alg, RNG)
    v = rand_element(alg, RNG)
    w = Element(alg, u.coords + 1j * v.coords)
    tw = cones.t_action(t, w)
    want = cones.t_action(t, u).coords + 1j * cones.t_action(t, v).coords
    assert np.allclose(tw.coords, want, atol=1e-10)


def test_action_jacobian_matches_power_of_determinant():
    for alg in ALGS:
        t = rand_triangular(alg, RNG, spread=0.3)
        y = cones.t_action(t, eja.identity(alg))
        want = eja.determinant(y) ** (alg.dim_m / alg.rank)
        assert cones.t_jacobian(t) == pytest.approx(want, rel=1e-8)


def test_halfspace_action_shapes():
    alg = eja.herm_complex(2, 4)
    t = rand_triangular(alg, RNG, spread=0.4)
    z = RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
    out = cones.t_action_halfspace(t, z)
    assert out.shape == (2, 2)
    assert np.allclose(out, t.mat @ z)
    with pytest.raises(ValueError):
        cones.t_action_halfspace(rand_triangular(eja.sym_real(2), RNG), z)
