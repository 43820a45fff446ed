"""Bounded and Siegel realizations: membership, Cayley transform, kernels,
group actions, the invariant measure, and samplers.

Points of the bounded domain pair a complex algebra element z1 with a
rectangular block zeta (only herm_complex(p, q>p) has one). Siegel points
pair zeta with z in the complexified algebra; membership means
Im z - Phi(zeta, zeta) lies in the open cone.

Kernels carry no normalizing constants: the Siegel kernel is the plain
Delta^(-lambda) of the polarized argument, and bounded kernels are
normalized so K(z, 0) = 1. For tube families the bounded kernel is the
Siegel kernel transported through the Cayley transform; written as a cross
ratio the fractional Jacobian powers cancel, so no extra branch choices
appear. Type I has the determinant closed form, with the logarithm summed
over eigenvalues so the branch is the continuous one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cones, eja
from .eja import AlgebraDescriptor, Element

BOUNDARY_TOL = 1e-12


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass
class BoundedPoint:
    alg: AlgebraDescriptor
    z1: Element
    zeta: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.z1.alg != self.alg:
            raise ValueError("element does not belong to the stated algebra")
        if self.alg.siegel_n:
            if self.zeta is None:
                self.zeta = np.zeros(
                    (self.alg.size, self.alg.cols - self.alg.size), dtype=complex)
            self.zeta = np.asarray(self.zeta, dtype=complex)
            want = (self.alg.size, self.alg.cols - self.alg.size)
            if self.zeta.shape != want:
                raise ValueError("half-space block has the wrong shape")
        elif self.zeta is not None and np.asarray(self.zeta).size:
            raise ValueError("tube-type domains carry no half-space block")
        else:
            self.zeta = None

    def full_matrix(self) -> np.ndarray:
        """Embedded picture; for herm_complex the full p x q matrix."""
        if self.alg.family == "herm_complex":
            return eja.full_matrix(self.z1, self.zeta)
        return eja.embed_matrix(self.z1)

    def as_vector(self) -> np.ndarray:
        """Coordinates as one complex vector (rank-1 domains: the ball)."""
        v = eja.to_zchart(self.z1.as_complex())
        if self.zeta is not None:
            v = np.concatenate([v, self.zeta.ravel()])
        return v


def bounded_from_vector(alg: AlgebraDescriptor, v: np.ndarray) -> BoundedPoint:
    v = np.asarray(v, dtype=complex)
    z1 = eja.from_zchart(alg, v[: alg.dim_m])
    zeta = None
    if alg.siegel_n:
        zeta = v[alg.dim_m:].reshape(alg.size, alg.cols - alg.size)
    return BoundedPoint(alg, z1, zeta)


@dataclass
class SiegelPoint:
    alg: AlgebraDescriptor
    zeta: Optional[np.ndarray]
    z: Element

    def __post_init__(self):
        if self.z.alg != self.alg:
            raise ValueError("element does not belong to the stated algebra")
        self.z = self.z.as_complex()
        if self.alg.siegel_n:
            if self.zeta is None:
                self.zeta = np.zeros(
                    (self.alg.size, self.alg.cols - self.alg.size), dtype=complex)
            self.zeta = np.asarray(self.zeta, dtype=complex)
            want = (self.alg.size, self.alg.cols - self.alg.size)
            if self.zeta.shape != want:
                raise ValueError("half-space block has the wrong shape")
        elif self.zeta is not None and np.asarray(self.zeta).size:
            raise ValueError("tube-type domains carry no half-space block")
        else:
            self.zeta = None


def siegel_base_point(alg: AlgebraDescriptor) -> SiegelPoint:
    return SiegelPoint(alg, None, 1j * eja.identity(alg))


# ---------------------------------------------------------------------------
# spectral norm and membership
# ---------------------------------------------------------------------------

def spectral_norm(p: BoundedPoint) -> float:
    alg = p.alg
    if alg.family == "spin":
        u = eja.to_zchart(p.z1.as_complex())
        nsq = float(np.vdot(u, u).real)
        d2 = abs(u[0] * u[1] - 0.5 * np.sum(u[2:] ** 2))
        disc = max(nsq * nsq - 4.0 * d2 * d2, 0.0)
        return float(np.sqrt((nsq + np.sqrt(disc)) / 2.0))
    sv = np.linalg.svd(p.full_matrix(), compute_uv=False)
    return float(sv[0])


def in_bounded_domain(p: BoundedPoint, tol: float = BOUNDARY_TOL) -> bool:
    return spectral_norm(p) < 1.0 - tol


def phi_form(alg: AlgebraDescriptor, zeta, zeta2) -> Element:
    """Phi(zeta, zeta') = 2{zeta, zeta', e}: linear left, conjugate right."""
    if not alg.siegel_n:
        if (zeta is not None and np.asarray(zeta).size) or (
                zeta2 is not None and np.asarray(zeta2).size):
            raise ValueError("tube-type domains carry no half-space block")
        return Element(alg, np.zeros(alg.dim_m, dtype=complex))
    zeta = np.asarray(zeta, dtype=complex)
    zeta2 = np.asarray(zeta2, dtype=complex)
    want = (alg.size, alg.cols - alg.size)
    if zeta.shape != want or zeta2.shape != want:
        raise ValueError("half-space block has the wrong shape")
    return eja.unembed_matrix(alg, zeta @ zeta2.conj().T)


def siegel_defect(p: SiegelPoint) -> Element:
    """Im z - Phi(zeta, zeta): real for honest points."""
    y = p.z.imag_part()
    if p.alg.siegel_n:
        y = y - phi_form(p.alg, p.zeta, p.zeta).real_part()
    return y


def in_siegel_domain(p: SiegelPoint, tol: float = cones.CONE_TOL) -> bool:
    return cones.in_cone(siegel_defect(p), tol)


# ---------------------------------------------------------------------------
# Cayley transform
# ---------------------------------------------------------------------------

def cayley(p: BoundedPoint) -> SiegelPoint:
    """z -> i (e - z1)^(-1) (e + z1), zeta -> (e - z1)^(-1) zeta."""
    alg = p.alg
    e = eja.identity(alg)
    if alg.family == "herm_complex":
        Z = eja.embed_matrix(p.z1.as_complex())
        I = np.eye(alg.size)
        try:
            inv = np.linalg.inv(I - Z)
        except np.linalg.LinAlgError:
            raise ValueError("pole of the transform: e - z1 is singular")
        w = eja.unembed_matrix(alg, 1j * inv @ (I + Z))
        omega = inv @ p.zeta if alg.siegel_n else None
        return SiegelPoint(alg, omega, w)
    try:
        inv = eja.inverse(e - p.z1.as_complex())
    except np.linalg.LinAlgError:
        raise ValueError("pole of the transform: e - z1 is singular")
    # inv and e + z1 generate an associative subalgebra, the product is safe
    w = 1j * eja.jordan_product(inv, e + p.z1.as_complex())
    return SiegelPoint(alg, None, w)


def inverse_cayley(p: SiegelPoint) -> BoundedPoint:
    """w -> (w - ie)(w + ie)^(-1), omega -> 2i (w + ie)^(-1) omega."""
    alg = p.alg
    e = eja.identity(alg)
    if alg.family == "herm_complex":
        W = eja.embed_matrix(p.z)
        I = np.eye(alg.size)
        try:
            inv = np.linalg.inv(W + 1j * I)
        except np.linalg.LinAlgError:
            raise ValueError("pole of the transform: w + ie is singular")
        z1 = eja.unembed_matrix(alg, (W - 1j * I) @ inv)
        zeta = 2j * inv @ p.zeta if alg.siegel_n else None
        return BoundedPoint(alg, z1, zeta)
    try:
        inv = eja.inverse(p.z + 1j * e)
    except np.linalg.LinAlgError:
        raise ValueError("pole of the transform: w + ie is singular")
    z1 = eja.jordan_product(p.z - 1j * e, inv)
    return BoundedPoint(alg, z1, None)


def log_delta_upper(alg: AlgebraDescriptor, w: Element) -> complex:
    """Continuous log of Delta(w) on the upper tube {Im w in the cone}.

    Delta(i v) = i^rank Delta(v) as polynomials, so rotating the argument to
    the right tube costs the constant i rank pi / 2; the value at w = i e
    is i rank pi / 2, matching the principal branch there.
    """
    eta = Element(alg, -1j * w.as_complex().coords)
    return 1j * alg.rank * np.pi / 2.0 + cones.log_delta_j(eta, alg.rank)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def kernel_siegel(lam: float, p: SiegelPoint, q: SiegelPoint) -> complex:
    """Delta^(-lambda)((z - conj z') / 2i - Phi(zeta, zeta'))."""
    alg = p.alg
    if alg != q.alg:
        raise ValueError("mismatched algebras")
    arg = Element(alg, (p.z.coords - np.conj(q.z.coords)) / 2j)
    if alg.siegel_n:
        arg = arg - phi_form(alg, p.zeta, q.zeta)
    s = -lam * np.ones(alg.rank)
    return cones.delta_power_complex(arg, s)


def _log_det_unit_pencil(M: np.ndarray) -> complex:
    """Continuous log det(I - M) for a matrix with spectral radius < 1."""
    mu = np.linalg.eigvals(M)
    if np.max(np.abs(mu)) >= 1.0:
        raise ValueError("pencil eigenvalues reach the unit circle")
    return complex(np.sum(np.log1p(-mu)))


def kernel_bounded(lam: float, z: BoundedPoint, w: BoundedPoint) -> complex:
    """Normalized kernel on the bounded domain, K(z, 0) = 1."""
    alg = z.alg
    if alg != w.alg:
        raise ValueError("mismatched algebras")
    if alg.family == "herm_complex":
        M = z.full_matrix() @ w.full_matrix().conj().T
        return complex(np.exp(-lam * _log_det_unit_pencil(M)))
    # tube families: transport the Siegel kernel; in the cross ratio the
    # Cayley Jacobian powers cancel, and S(C0, C0) = 1
    Cz, Cw = cayley(z), cayley(w)
    C0 = siegel_base_point(alg)
    num = kernel_siegel(lam, Cz, Cw) * kernel_siegel(lam, C0, C0)
    den = kernel_siegel(lam, Cz, C0) * kernel_siegel(lam, C0, Cw)
    return complex(num / den)


def generic_norm(z: BoundedPoint, w: BoundedPoint) -> complex:
    """h(z, w): the sesquiholomorphic polynomial with K_lambda = h^(-lambda).

    Closed forms where classical; the quaternionic family falls back to the
    transported kernel at lambda = -1, which is polynomial in (z, conj w).
    """
    alg = z.alg
    if alg.family == "herm_complex":
        M = z.full_matrix() @ w.full_matrix().conj().T
        return complex(np.linalg.det(np.eye(alg.size) - M))
    if alg.family == "sym_real":
        M = eja.embed_matrix(z.z1.as_complex()) @ np.conj(
            eja.embed_matrix(w.z1.as_complex()))
        return complex(np.linalg.det(np.eye(alg.size) - M))
    if alg.family == "spin":
        u = eja.to_zchart(z.z1.as_complex())
        v = eja.to_zchart(w.z1.as_complex())
        d2 = lambda c: c[0] * c[1] - 0.5 * np.sum(c[2:] ** 2)
        return complex(1.0 - np.vdot(v, u) + d2(u) * np.conj(d2(v)))
    return kernel_bounded(-1.0, z, w)


# ---------------------------------------------------------------------------
# Mobius maps (rank-1 domains: disc and ball)
# ---------------------------------------------------------------------------

@dataclass
class MobiusMap:
    alg: AlgebraDescriptor
    b: np.ndarray  # image of 0 under the inverse involution, |b| < 1
    unitary: np.ndarray  # post-composed unitary

    def __post_init__(self):
        if self.alg.rank != 1:
            raise ValueError("Mobius maps are provided for rank-1 domains only")
        self.b = np.asarray(self.b, dtype=complex).ravel()
        self.unitary = np.asarray(self.unitary, dtype=complex)
        if np.linalg.norm(self.b) >= 1:
            raise ValueError("base point must be inside the ball")


def mobius_identity(alg: AlgebraDescriptor) -> MobiusMap:
    # the b = 0 involution is v -> -v, so the unitary part must undo it
    d = alg.dim_m + alg.siegel_n
    return MobiusMap(alg, np.zeros(d, dtype=complex), -np.eye(d, dtype=complex))


def mobius_sample(alg: AlgebraDescriptor, rng: np.random.Generator) -> MobiusMap:
    """b uniform in the radius-0.8 ball, Haar unitary part."""
    d = alg.dim_m + alg.siegel_n
    while True:
        b = 0.8 * (rng.uniform(-1, 1, size=d) + 1j * rng.uniform(-1, 1, size=d))
        if np.linalg.norm(b) < 0.8:
            break
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(G)
    U = Q @ np.diag(np.diag(R) / np.abs(np.diag(R)))
    return MobiusMap(alg, b, U)


def _ball_involution(b: np.ndarray, v: np.ndarray) -> np.ndarray:
    """phi_b(v) = (b - P v - s Q v) / (1 - <v, b>); phi_b(0) = b, involutive."""
    bb = float(np.vdot(b, b).real)
    if bb == 0.0:
        return -v
    s = np.sqrt(1.0 - bb)
    proj = (np.vdot(b, v) / bb) * b
    return (b - proj - s * (v - proj)) / (1.0 - np.vdot(b, v))


def mobius_apply(phi: MobiusMap, z: BoundedPoint) -> BoundedPoint:
    v = z.as_vector()
    out = phi.unitary @ _ball_involution(phi.b, v)
    return bounded_from_vector(phi.alg, out)


def mobius_jacobian(phi: MobiusMap, z: BoundedPoint) -> complex:
    """Complex Jacobian determinant at z."""
    d = phi.alg.dim_m + phi.alg.siegel_n
    v = z.as_vector()
    bb = float(np.vdot(phi.b, phi.b).real)
    s = np.sqrt(1.0 - bb)
    detU = complex(np.linalg.det(phi.unitary))
    if bb == 0.0:
        return detU * (-1.0) ** d
    return detU * (-1.0) ** d * s ** (d + 1) / (1.0 - np.vdot(phi.b, v)) ** (d + 1)


# ---------------------------------------------------------------------------
# affine group of the Siegel domain
# ---------------------------------------------------------------------------

@dataclass
class AffineMap:
    """n . (t . p): a Heisenberg translation after a triangular dilation."""
    alg: AlgebraDescriptor
    zeta0: Optional[np.ndarray]
    x0: Element
    tri: cones.TriangularElement

    def __post_init__(self):
        if not self.x0.is_real:
            raise ValueError("the translation part lives in the real form")
        if self.alg.siegel_n:
            self.zeta0 = np.asarray(self.zeta0, dtype=complex)
            want = (self.alg.size, self.alg.cols - self.alg.size)
            if self.zeta0.shape != want:
                raise ValueError("half-space block has the wrong shape")
        else:
            self.zeta0 = None


def affine_identity(alg: AlgebraDescriptor) -> AffineMap:
    zeta0 = np.zeros((alg.size, alg.cols - alg.size), dtype=complex) \
        if alg.siegel_n else None
    return AffineMap(alg, zeta0, Element(alg, np.zeros(alg.dim_m)),
                     cones.identity_triangular(alg))


def heisenberg_apply(alg, zeta0, x0: Element, p: SiegelPoint) -> SiegelPoint:
    """(zeta0, x0) . (zeta, z) = (zeta0+zeta, z + x0 + i Phi(zeta0) + 2i Phi(zeta, zeta0))."""
    shift = x0.as_complex() + 1j * phi_form(alg, zeta0, zeta0) \
        if alg.siegel_n else x0.as_complex()
    z = p.z + shift
    zeta = None
    if alg.siegel_n:
        z = z + 2j * phi_form(alg, p.zeta, zeta0)
        zeta = zeta0 + p.zeta
    return SiegelPoint(alg, zeta, z)


def triangular_apply(t: cones.TriangularElement, p: SiegelPoint) -> SiegelPoint:
    z = cones.t_action(t, p.z)
    zeta = cones.t_action_halfspace(t, p.zeta) if p.alg.siegel_n else None
    return SiegelPoint(p.alg, zeta, z)


def affine_apply(m: AffineMap, p: SiegelPoint) -> SiegelPoint:
    return heisenberg_apply(m.alg, m.zeta0, m.x0, triangular_apply(m.tri, p))


def heisenberg_product(alg, n1, n2):
    """(z1, x1)(z2, x2) = (z1 + z2, x1 + x2 + 2 Im Phi(z1, z2))."""
    z1, x1 = n1
    z2, x2 = n2
    x = x1 + x2
    if alg.siegel_n:
        x = x + 2.0 * phi_form(alg, z1, z2).imag_part()
        return (z1 + z2, x)
    return (None, x)


def affine_compose(m1: AffineMap, m2: AffineMap) -> AffineMap:
    """m1 after m2; the triangular part twists the Heisenberg part."""
    alg = m1.alg
    if alg != m2.alg:
        raise ValueError("mismatched algebras")
    tz2 = cones.t_action_halfspace(m1.tri, m2.zeta0) if alg.siegel_n else None
    tx2 = cones.t_action(m1.tri, m2.x0.as_complex()).real_part()
    zeta, x = heisenberg_product(alg, (m1.zeta0, m1.x0), (tz2, tx2))
    return AffineMap(alg, zeta, x, m1.tri.compose(m2.tri))


def affine_real_jacobian(m: AffineMap) -> float:
    """|det| of the real-linear action on (zeta, z): Delta(t.e)^genus."""
    return cones.character(m.tri, float(m.alg.genus) * np.ones(m.alg.rank))


def invariant_measure_density(p: SiegelPoint) -> float:
    """Delta^(-genus)(Im z - Phi(zeta)) against Lebesgue measure."""
    y = siegel_defect(p)
    if not cones.in_cone(y):
        raise ValueError("point is outside the Siegel domain")
    return cones.delta_power(y, -float(p.alg.genus) * np.ones(p.alg.rank))


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

_BOX_SCALE = {"sym_real": np.sqrt(2.0), "herm_complex": 1.0,
              "herm_quaternion": 1.0, "spin": np.sqrt(2.0)}


def sample_bounded(alg: AlgebraDescriptor, rng: np.random.Generator):
    """One uniform point of the bounded domain by box rejection."""
    c = _BOX_SCALE[alg.family]
    d = alg.dim_m + alg.siegel_n
    while True:
        v = c * (rng.uniform(-1, 1, size=d) + 1j * rng.uniform(-1, 1, size=d))
        p = bounded_from_vector(alg, v)
        if in_bounded_domain(p):
            return p


def disc_rejection_rate(rng: np.random.Generator, n: int) -> float:
    """Vectorized acceptance frequency for the disc box sampler."""
    z = rng.uniform(-1, 1, size=n) + 1j * rng.uniform(-1, 1, size=n)
    return float(np.mean(np.abs(z) < 1.0))


@dataclass
class SiegelSamplerConfig:
    sigma_zeta: float = 1.0
    sigma_x: float = 1.0
    sigma_lower: float = 1.0
    sigma_logdiag: float = 1.0
    cauchy_x: bool = False


def _triangular_params(t: cones.TriangularElement) -> np.ndarray:
    """Coordinates: log diagonal first, then the strictly lower block."""
    alg = t.alg
    if alg.family == "spin":
        return np.concatenate([[np.log(t.t11), np.log(t.t22)], t.v])
    d = np.log(t.diagonal())
    low = []
    n = alg.size
    if alg.family == "sym_real":
        for i in range(1, n):
            low.extend(t.mat[i, :i].real)
    elif alg.family == "herm_complex":
        for i in range(1, n):
            low.extend(t.mat[i, :i].real)
            low.extend(t.mat[i, :i].imag)
    else:  # quaternion: 2x2 blocks below the diagonal
        for i in range(1, n):
            for j in range(i):
                B = t.mat[2 * i: 2 * i + 2, 2 * j: 2 * j + 2]
                a = (B[0, 0] + B[1, 1]) / 2.0
                dq = (B[0, 0] - B[1, 1]) / 2j
                b = (B[0, 1] - B[1, 0]) / 2.0
                cq = (B[0, 1] + B[1, 0]) / 2j
                low.extend([a.real, b.real, cq.real, dq.real])
    return np.concatenate([d, np.asarray(low, dtype=float)])


def _triangular_from_params(alg: AlgebraDescriptor, theta: np.ndarray):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (alg.dim_m,):
        raise ValueError("parameter vector must have length dim_m")
    if alg.family == "spin":
        return cones.TriangularElement(
            alg, t11=np.exp(theta[0]), t22=np.exp(theta[1]), v=theta[2:])
    n = alg.size
    diag = np.exp(theta[:n])
    rest = theta[n:]
    if alg.family == "sym_real":
        M = np.diag(diag).astype(float)
        k = 0
        for i in range(1, n):
            M[i, :i] = rest[k: k + i]
            k += i
        return cones.TriangularElement(alg, mat=M)
    if alg.family == "herm_complex":
        M = np.diag(diag).astype(complex)
        k = 0
        for i in range(1, n):
            M[i, :i] = rest[k: k + i] + 1j * rest[k + i: k + 2 * i]
            k += 2 * i
        return cones.TriangularElement(alg, mat=M)
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        M[2 * i, 2 * i] = M[2 * i + 1, 2 * i + 1] = diag[i]
    k = 0
    for i in range(1, n):
        for j in range(i):
            a, b, cq, dq = rest[k: k + 4]
            k += 4
            M[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = (
                a * eja._QUNITS[0] + b * eja._QUNITS[1]
                + cq * eja._QUNITS[2] + dq * eja._QUNITS[3])
    return cones.TriangularElement(alg, mat=M)


def _param_directions(alg: AlgebraDescriptor, t: cones.TriangularElement):
    """dt/dtheta_k as matrices (None for spin, handled in closed form)."""
    n = alg.size
    dirs = []
    if alg.family == "herm_quaternion":
        for i in range(n):
            D = np.zeros((2 * n, 2 * n), dtype=complex)
            D[2 * i, 2 * i] = D[2 * i + 1, 2 * i + 1] = t.mat[2 * i, 2 * i]
            dirs.append(D)
        for i in range(1, n):
            for j in range(i):
                for q in range(4):
                    D = np.zeros((2 * n, 2 * n), dtype=complex)
                    D[2 * i: 2 * i + 2, 2 * j: 2 * j + 2] = eja._QUNITS[q]
                    dirs.append(D)
        return dirs
    for i in range(n):
        D = np.zeros((n, n), dtype=complex)
        D[i, i] = t.mat[i, i]
        dirs.append(D)
    for i in range(1, n):
        for j in range(i):
            D = np.zeros((n, n), dtype=complex)
            D[i, j] = 1.0
            dirs.append(D)
        if alg.family == "herm_complex":
            # per row: real directions then imaginary, like _triangular_params
            for j in range(i):
                D = np.zeros((n, n), dtype=complex)
                D[i, j] = 1j
                dirs.append(D)
    return dirs


def orbit_jacobian(t: cones.TriangularElement) -> float:
    """|det d(theta -> t(theta) . e)| at t, exact via bilinearity."""
    alg = t.alg
    if alg.family == "spin":
        t11, t22, v = t.t11, t.t22, t.v
        k = alg.dim_m - 2
        J = np.zeros((alg.dim_m, alg.dim_m))
        J[0, 0] = 2 * t11 ** 2
        J[1, 1] = 2 * t22 ** 2
        J[2:, 0] = t11 * v
        for i in range(k):
            J[1, 2 + i] = 2 * v[i]
            J[2 + i, 2 + i] = t11
        return float(abs(np.linalg.det(J)))
    cols = []
    T = t.mat
    for D in _param_directions(alg, t):
        H = D @ T.conj().T + T @ D.conj().T
        cols.append(eja.unembed_matrix(alg, H).coords.real)
    return float(abs(np.linalg.det(np.column_stack(cols))))


def _gauss_logpdf(v: np.ndarray, sigma: float) -> float:
    v = np.asarray(v, dtype=float).ravel()
    return float(-0.5 * np.sum((v / sigma) ** 2)
                 - v.size * np.log(sigma * np.sqrt(2 * np.pi)))


def _cauchy_logpdf(v: np.ndarray, sigma: float) -> float:
    v = np.asarray(v, dtype=float).ravel()
    return float(np.sum(-np.log(np.pi * sigma * (1.0 + (v / sigma) ** 2))))


def siegel_proposal_logdensity(p: SiegelPoint,
                               cfg: SiegelSamplerConfig) -> float:
    """Exact log density of sample_siegel at p (Lebesgue on (zeta, z))."""
    alg = p.alg
    out = 0.0
    if alg.siegel_n:
        zr = np.concatenate([p.zeta.real.ravel(), p.zeta.imag.ravel()])
        out += _gauss_logpdf(zr, cfg.sigma_zeta)
    x = p.z.real_part().coords
    out += (_cauchy_logpdf(x, cfg.sigma_x) if cfg.cauchy_x
            else _gauss_logpdf(x, cfg.sigma_x))
    y = siegel_defect(p)
    t = cones.cholesky_t(y)
    theta = _triangular_params(t)
    out += _gauss_logpdf(theta[: alg.rank], cfg.sigma_logdiag)
    out += _gauss_logpdf(theta[alg.rank:], cfg.sigma_lower)
    out -= np.log(orbit_jacobian(t))
    return out


def sample_siegel(alg: AlgebraDescriptor, rng: np.random.Generator,
                  cfg: SiegelSamplerConfig = SiegelSamplerConfig()):
    """Draw (point, log proposal density); the point is always interior."""
    zeta = None
    if alg.siegel_n:
        shape = (alg.size, alg.cols - alg.size)
        zeta = cfg.sigma_zeta * (rng.normal(size=shape)
                                 + 1j * rng.normal(size=shape))
    if cfg.cauchy_x:
        x = cfg.sigma_x * rng.standard_cauchy(size=alg.dim_m)
    else:
        x = cfg.sigma_x * rng.normal(size=alg.dim_m)
    theta = np.concatenate([
        cfg.sigma_logdiag * rng.normal(size=alg.rank),
        cfg.sigma_lower * rng.normal(size=alg.dim_m - alg.rank)])
    t = _triangular_from_params(alg, theta)
    y = cones.t_action(t, eja.identity(alg))
    if alg.siegel_n:
        y = y + phi_form(alg, zeta, zeta).real_part()
    p = SiegelPoint(alg, zeta, Element(alg, x + 1j * y.coords))
    return p, siegel_proposal_logdensity(p, cfg)
