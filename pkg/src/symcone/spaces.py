"""Norms, seminorms, and verification experiments for the kernel-induced
function spaces: Gram positivity, series norms over signatures, Bergman
and Hardy Monte Carlo, sup-norm and atomic estimators, and the
intertwining identities on the disc and on tube domains.

Conventions used throughout and echoed in reports:
  - kernel(lambda) means generic_norm^(-lambda) on the bounded side and the
    matching Siegel kernel on the unbounded side;
  - all integrals are Lebesgue on the unitary chart coordinates, with no
    1/pi style normalizations;
  - series norms report (value, last-shell magnitude) so truncation quality
    is observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import cones, domains, eja, fischer, wallach
from .domains import AffineMap, BoundedPoint, MobiusMap, SiegelPoint
from .eja import AlgebraDescriptor
from .poly import SparsePolynomial

PSD_HARD = 1e-8   # below -PSD_HARD * ||G||: a genuine negative witness
PSD_SOFT = 1e-10  # above -PSD_SOFT * ||G||: numerically positive


# ---------------------------------------------------------------------------
# holomorphic function wrapper
# ---------------------------------------------------------------------------

def point_vector(p) -> np.ndarray:
    """Chart coordinates of a bounded or Siegel point as one vector."""
    if isinstance(p, BoundedPoint):
        return p.as_vector()
    v = eja.to_zchart(p.z)
    if p.zeta is not None:
        v = np.concatenate([v, p.zeta.ravel()])
    return v


@dataclass
class HolFunction:
    """Evaluator plus optional Taylor polynomial at the base point."""
    alg: AlgebraDescriptor
    evaluator: Callable[[object], complex]
    taylor: Optional[SparsePolynomial] = None
    domain: str = "bounded"  # or "siegel"

    def __call__(self, p) -> complex:
        return self.evaluator(p)


def poly_function(alg: AlgebraDescriptor, poly: SparsePolynomial,
                  domain: str = "bounded") -> HolFunction:
    out = HolFunction(alg, lambda p: complex(poly.eval(point_vector(p))),
                      taylor=poly, domain=domain)
    if domain == "siegel" and alg.family == "sym_real" and alg.rank == 2:
        out._sr_batch = lambda W: poly.eval(np.stack(
            [W[:, 0, 0], np.sqrt(2.0) * W[:, 0, 1], W[:, 1, 1]], axis=1))
    return out


def zero_function(alg: AlgebraDescriptor, domain: str = "bounded") -> HolFunction:
    nv = alg.dim_m + alg.siegel_n
    return poly_function(alg, SparsePolynomial.zero(nv), domain)


# ---------------------------------------------------------------------------
# Gram positivity
# ---------------------------------------------------------------------------

@dataclass
class GramReport:
    lam: float
    points: list
    min_eigenvalue: float
    matrix_norm: float
    verdict: str  # PSD | NotPSD | inconclusive

    @property
    def ratio(self) -> float:
        return self.min_eigenvalue / max(self.matrix_norm, 1e-300)


def _kernel_value(lam: float, z, w) -> complex:
    if isinstance(z, BoundedPoint):
        return domains.kernel_bounded(lam, z, w)
    return domains.kernel_siegel(lam, z, w)


def gram_matrix(lam: float, points: Sequence) -> np.ndarray:
    n = len(points)
    vecs = [point_vector(p) for p in points]
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(vecs[i] - vecs[j]) < 1e-12:
                raise ValueError("coincident points give a degenerate Gram matrix")
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = _kernel_value(lam, points[i], points[j])
            G[j, i] = np.conj(G[i, j])
    return 0.5 * (G + G.conj().T)


def psd_verdict(lam: float, points: Sequence) -> GramReport:
    G = gram_matrix(lam, points)
    ev = np.linalg.eigvalsh(G)
    mn, norm = float(ev[0]), float(np.max(np.abs(ev)))
    if mn < -PSD_HARD * norm:
        verdict = "NotPSD"
    elif mn >= -PSD_SOFT * norm:
        verdict = "PSD"
    else:
        verdict = "inconclusive"
    return GramReport(lam, list(points), mn, norm, verdict)


def _quadric_frame(alg: AlgebraDescriptor):
    """Eigenframe of the degree-2 minor's quadratic form.

    Returns (mu, V, eps_rel) with eigenvalues mu, orthonormal directions in
    the columns of V, and per-direction scale ratios balanced so that a
    +/- pair cluster can carry a second-order jet proportional to the minor
    itself.  None when the algebra is rank 1 or the form is one-signed.
    """
    if alg.rank < 2:
        return None
    if "quadric_frame" in alg._cache:
        return alg._cache["quadric_frame"]
    d2 = cones.minor_polynomials(alg)[1]
    nv = alg.dim_m
    M = np.zeros((nv, nv))
    for mono, c in d2.coeffs.items():
        idx = [i for i, e in enumerate(mono) for _ in range(e)]
        if len(idx) != 2:
            continue
        i, j = idx
        if i == j:
            M[i, i] += c.real
        else:
            M[i, j] += c.real / 2
            M[j, i] += c.real / 2
    vals, vecs = np.linalg.eigh(M)
    keep = np.abs(vals) > 1e-12 * max(float(np.abs(vals).max()), 1e-300)
    mu, V = vals[keep], vecs[:, keep]
    npos = int(np.sum(mu > 0))
    nneg = int(np.sum(mu < 0))
    frame = None
    if npos and nneg:
        # sum_j mu_j / eps_j^2 = 0 so the pair weights can sum to zero
        t = np.where(mu > 0, 1.0 / npos, 1.0 / nneg)
        eps_rel = np.sqrt(np.abs(mu) / t)
        frame = (mu, V, eps_rel / eps_rel.max())
    alg._cache["quadric_frame"] = frame
    return frame


def _small_rotation(rng: np.random.Generator, dim: int, scale: float) -> np.ndarray:
    a = scale * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(np.eye(dim) + a - a.T)
    # qr sign convention can flip columns; undo so the rotation stays near I
    return q * np.sign(np.diag(r))


def _cluster_proposal(alg: AlgebraDescriptor, rng: np.random.Generator,
                      realization: str, max_points: int):
    """Symmetric +/- pair cluster around a base point.

    Positivity failures inside the gaps of the admissible parameter set are
    jet effects: a diffuse configuration never sees them.  When the minor
    eigenframe fits the point budget the pairs follow it with balanced
    scales, which pins the cluster's quadratic jet on the minor; otherwise
    the directions are a random orthonormal set.
    """
    d = alg.dim_m + alg.siegel_n
    frame = _quadric_frame(alg)
    if frame is not None and 2 * len(frame[0]) <= max_points:
        k = len(frame[0])
        dirs = np.zeros((d, k))
        dirs[: alg.dim_m] = _small_rotation(rng, alg.dim_m, 0.04) @ frame[1]
        eps_rel = frame[2]
    else:
        k = max(1, min(max_points // 2, d))
        dirs = np.linalg.qr(rng.standard_normal((d, k)))[0]
        eps_rel = rng.uniform(0.5, 1.0, size=k)
    eps0 = rng.uniform(0.05, 0.25)
    if realization == "siegel":
        base = np.zeros(d, dtype=complex)
        base[: alg.dim_m] = (eja.to_zchart(eja.identity(alg)) * 1j
                             + 0.05 * rng.standard_normal(alg.dim_m))
        base[alg.dim_m:] = 0.05 * rng.standard_normal(alg.siegel_n)
    else:
        base = 0.05 * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
    for _ in range(8):
        pts = []
        for j in range(k):
            off = eps0 * eps_rel[j] * dirs[:, j]
            pts.append(base + off)
            pts.append(base - off)
        if realization == "siegel":
            return [SiegelPoint(alg, v[alg.dim_m:].reshape(
                        alg.size, alg.cols - alg.size) if alg.siegel_n else None,
                        eja.from_zchart(alg, v[: alg.dim_m])) for v in pts]
        cand = [domains.bounded_from_vector(alg, v) for v in pts]
        if all(domains.in_bounded_domain(p) for p in cand):
            return cand
        base, eps0 = 0.6 * base, 0.6 * eps0
    return None


def wallach_search(lam: float, alg: AlgebraDescriptor, trials: int,
                   rng: np.random.Generator, realization: str = "bounded",
                   max_points: int = 6,
                   stop_on_witness: bool = True) -> GramReport:
    """Worst Gram report over random point configurations.

    Mixes diffuse configurations (uniform on the bounded domain, or the
    Siegel proposal sampler) with tight +/- pair clusters; the clusters are
    what exposes the sign failures strictly inside the continuous-part gaps.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    worst: Optional[GramReport] = None
    cfg = domains.SiegelSamplerConfig() if realization == "siegel" else None
    for _ in range(trials):
        pts = None
        if rng.uniform() < 0.5:
            pts = _cluster_proposal(alg, rng, realization, max_points)
        if pts is None:
            n = int(rng.integers(1, max_points + 1))
            if realization == "siegel":
                pts = [domains.sample_siegel(alg, rng, cfg)[0] for _ in range(n)]
            else:
                pts = [domains.sample_bounded(alg, rng) for _ in range(n)]
        rep = psd_verdict(lam, pts)
        if worst is None or rep.ratio < worst.ratio:
            worst = rep
        if stop_on_witness and worst.verdict == "NotPSD":
            break
    return worst


# ---------------------------------------------------------------------------
# series norms over signatures
# ---------------------------------------------------------------------------

def _taylor_of(f) -> SparsePolynomial:
    if isinstance(f, SparsePolynomial):
        return f
    if isinstance(f, HolFunction) and f.taylor is not None:
        return f.taylor
    raise ValueError("need Taylor data (a polynomial or a Taylor-backed function)")


def _signature_pairing(proj: fischer.PsProjector, s: Tuple[int, ...],
                       fp: SparsePolynomial, gp: SparsePolynomial,
                       same: bool) -> complex:
    """Fischer pairing of the two projections, through the cached
    orthonormal bases so no projected polynomial is materialized."""
    if proj.alg.rank == 1:
        pf = fp.homogeneous_part(s[0])
        if not pf.coeffs:
            return 0.0
        pg = pf if same else gp.homogeneous_part(s[0])
        if not pg.coeffs:
            return 0.0
        return fischer.fischer_inner(pf, pg)
    basis = proj.basis(s)
    cf = np.array([fischer.fischer_inner(fp, b) for b in basis])
    cg = cf if same else np.array([fischer.fischer_inner(gp, b) for b in basis])
    return complex(np.dot(cf, np.conj(cg)))


def h_lambda_inner(f, g, lam: float, alg: AlgebraDescriptor,
                   trunc_degree: int,
                   cache: Optional[fischer.PsProjector] = None
                   ) -> Tuple[complex, float]:
    """Truncated signature series of the lambda-pairing.

    Returns (value, last-shell magnitude); the shell is the total absolute
    contribution of the top degree, an observable truncation proxy.
    """
    if not wallach.wallach_contains(lam, alg):
        raise ValueError("parameter outside the positive set; "
                         "use h_tilde_seminorm on the discrete lattice")
    fp, gp = _taylor_of(f), _taylor_of(g)
    same = gp is fp
    proj = cache if cache is not None else fischer.projector(alg)
    if fp.degree() < 0 or gp.degree() < 0:
        return 0.0 + 0.0j, 0.0
    top = min(trunc_degree, fp.degree(), gp.degree())
    total = 0.0 + 0.0j
    shell = 0.0
    for s in wallach.enumerate_signatures(alg.rank, top):
        if wallach.q_order(s, lam, alg) != 0:
            continue
        pair = _signature_pairing(proj, s, fp, gp, same)
        if pair == 0.0:
            continue
        term = pair / wallach.pochhammer(lam, s, alg)
        total += term
        if sum(s) == trunc_degree:
            shell += abs(term)
    return complex(total), float(shell)


def h_lambda_norm_sq(f, lam: float, alg: AlgebraDescriptor, trunc_degree: int,
                     cache: Optional[fischer.PsProjector] = None
                     ) -> Tuple[float, float]:
    v, shell = h_lambda_inner(f, f, lam, alg, trunc_degree, cache)
    return float(v.real), shell


def _on_tilde_lattice(lam: float, alg: AlgebraDescriptor) -> bool:
    # lattice m/r - 1 - N, intersected with actual degeneracy
    base = alg.dim_m / alg.rank - 1.0
    k = round(base - lam)
    return k >= 0 and abs(lam - (base - k)) < 1e-9 and wallach.q_max(lam, alg) >= 1


def h_tilde_seminorm(f, lam: float, alg: AlgebraDescriptor, trunc_degree: int,
                     cache: Optional[fischer.PsProjector] = None) -> float:
    """Residue-weighted seminorm at a degenerate lattice parameter."""
    if not _on_tilde_lattice(lam, alg):
        raise ValueError("parameter is not on the degenerate lattice")
    fp = _taylor_of(f)
    proj = cache if cache is not None else fischer.projector(alg)
    qm = wallach.q_max(lam, alg)
    if fp.degree() < 0:
        return 0.0
    top = min(trunc_degree, fp.degree())
    total = 0.0
    for s in wallach.enumerate_signatures(alg.rank, top):
        if wallach.q_order(s, lam, alg) != qm:
            continue
        pair = _signature_pairing(proj, s, fp, fp, True)
        if pair == 0.0:
            continue
        total += pair.real / wallach.residue_pochhammer(lam, s, alg)
    return float(np.sqrt(max(total, 0.0)))


def dilation_monotonicity(f, lam: float, alg: AlgebraDescriptor,
                          R_grid: Sequence[float], trunc_degree: int,
                          cache: Optional[fischer.PsProjector] = None
                          ) -> Tuple[bool, List[float]]:
    """Squared series norms of the dilates f(R .); they must grow in R."""
    if not wallach.wallach_contains(lam, alg):
        raise ValueError("parameter outside the positive set")
    fp = _taylor_of(f)
    proj = cache if cache is not None else fischer.projector(alg)
    terms: List[Tuple[int, float]] = []
    top = min(trunc_degree, max(fp.degree(), 0))
    for s in wallach.enumerate_signatures(alg.rank, top):
        if wallach.q_order(s, lam, alg) != 0:
            continue
        pair = _signature_pairing(proj, s, fp, fp, True)
        if pair == 0.0:
            continue
        terms.append((sum(s),
                      pair.real / float(wallach.pochhammer(lam, s, alg))))
    values = [sum(c * R ** (2 * d) for d, c in terms) for R in R_grid]
    monotone = all(values[i + 1] >= values[i] - 1e-12 * max(abs(values[i]), 1.0)
                   for i in range(len(values) - 1))
    return monotone, values


# ---------------------------------------------------------------------------
# Cayley transport of functions
# ---------------------------------------------------------------------------

def _transport_factor(lam: float, w: SiegelPoint) -> complex:
    """Delta^(-lambda)((z + ie)/2i), the kernel factor against the base point."""
    alg = w.alg
    arg = (w.z + 1j * eja.identity(alg)) * (1.0 / (2.0 * 1j))
    return cones.delta_power_complex(arg, np.full(alg.rank, -float(lam)))


def transport_to_siegel(f: HolFunction, lam: float) -> HolFunction:
    """Unitary-up-to-constant map of the bounded-side space to the Siegel side.

    (Tf)(w) = f(C^{-1} w) * Delta^(-lambda)((w + ie)/2i) carries kernels to
    kernels, so series norms and Siegel integrals are proportional.
    """
    if f.domain != "bounded":
        raise ValueError("transport expects a bounded-side function")
    alg = f.alg
    if not alg.is_tube:
        raise ValueError("transport is implemented for tube domains")

    def ev(w: SiegelPoint) -> complex:
        z = domains.inverse_cayley(w)
        return f(z) * _transport_factor(lam, w)

    out = HolFunction(alg, ev, taylor=None, domain="siegel")
    if f.taylor is not None and alg.family == "sym_real" and alg.rank == 2:
        poly = f.taylor

        def batch(W: np.ndarray) -> np.ndarray:
            # W: (n, 2, 2) tube points; principal logs are the continuous
            # branch for rank <= 2 minors on the right tube
            I = np.eye(2)
            A = -0.5j * (W + 1j * I)
            detA = A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]
            factor = np.exp(-lam * np.log(detA))
            B = (W - 1j * I) @ np.linalg.inv(W + 1j * I)
            coords = np.stack([B[:, 0, 0], np.sqrt(2.0) * B[:, 0, 1],
                               B[:, 1, 1]], axis=1)
            return poly.eval(coords) * factor

        out._sr_batch = batch
    return out


# ---------------------------------------------------------------------------
# Monte Carlo norms
# ---------------------------------------------------------------------------

def _siegel_batch_sym_real2(alg: AlgebraDescriptor, n: int,
                            rng: np.random.Generator,
                            cfg: domains.SiegelSamplerConfig
                            ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vector form of the tube proposal for sym_real(2).

    Returns (W, logq, detY): (n, 2, 2) points x + iy with y = t t*, the exact
    log proposal density, and Delta_2(y). Must agree with the per-point
    sampler density; the tests pin that.
    """
    X = (cfg.sigma_x * rng.standard_cauchy(size=(n, 3)) if cfg.cauchy_x
         else cfg.sigma_x * rng.normal(size=(n, 3)))
    if cfg.cauchy_x:
        logq_x = np.sum(-np.log(np.pi * cfg.sigma_x
                                * (1.0 + (X / cfg.sigma_x) ** 2)), axis=1)
    else:
        logq_x = (-0.5 * np.sum((X / cfg.sigma_x) ** 2, axis=1)
                  - 3 * np.log(cfg.sigma_x * np.sqrt(2 * np.pi)))
    th_d = cfg.sigma_logdiag * rng.normal(size=(n, 2))
    th_l = cfg.sigma_lower * rng.normal(size=(n, 1))
    logq_t = (-0.5 * np.sum((th_d / cfg.sigma_logdiag) ** 2, axis=1)
              - 2 * np.log(cfg.sigma_logdiag * np.sqrt(2 * np.pi))
              - 0.5 * np.sum((th_l / cfg.sigma_lower) ** 2, axis=1)
              - np.log(cfg.sigma_lower * np.sqrt(2 * np.pi)))
    a, c, b = np.exp(th_d[:, 0]), np.exp(th_d[:, 1]), th_l[:, 0]
    # y = t t* for t = [[a, 0], [b, c]]; |d theta -> y| = 4 sqrt(2) a^3 c^2
    y11, y12, y22 = a ** 2, a * b, b ** 2 + c ** 2
    logjac = np.log(4.0 * np.sqrt(2.0)) + 3.0 * th_d[:, 0] + 2.0 * th_d[:, 1]
    logq = logq_x + logq_t - logjac
    s2 = np.sqrt(2.0)
    W = np.empty((n, 2, 2), dtype=complex)
    W[:, 0, 0] = X[:, 0] + 1j * y11
    W[:, 0, 1] = X[:, 1] / s2 + 1j * y12
    W[:, 1, 0] = W[:, 0, 1]
    W[:, 1, 1] = X[:, 2] + 1j * y22
    detY = y11 * y22 - y12 ** 2
    return W, logq, detY


def bergman_norm_mc(f: HolFunction, lam: float, alg: AlgebraDescriptor,
                    n_samples: int, rng: np.random.Generator,
                    realization: str = "bounded",
                    config: Optional[domains.SiegelSamplerConfig] = None
                    ) -> Tuple[float, float]:
    """(norm, standard error) of the weighted square integral.

    Bounded: integral over D of |f|^2 h(z,z)^(lambda - g) in chart Lebesgue
    measure, by box sampling. Siegel: importance sampling with the exact
    proposal density, weight Delta^(lambda - g) of the defect.
    """
    g = float(alg.genus)
    if lam <= g - 1:
        raise ValueError("the weighted square integral diverges at or below "
                         "genus - 1")
    if realization == "bounded":
        d = alg.dim_m + alg.siegel_n
        c = domains._BOX_SCALE[alg.family]
        vol = (2.0 * c) ** (2 * d)
        if d == 1 and f.taylor is not None:
            Z = rng.uniform(-c, c, size=(n_samples, 2))
            z = Z[:, 0] + 1j * Z[:, 1]
            inside = np.abs(z) < 1.0 - 1e-12
            vals = np.zeros(n_samples)
            fv = f.taylor.eval(z[inside, None])
            vals[inside] = (np.abs(fv) ** 2
                            * (1.0 - np.abs(z[inside]) ** 2) ** (lam - g))
        else:
            Z = rng.uniform(-c, c, size=(n_samples, 2 * d))
            vals = np.zeros(n_samples)
            for i in range(n_samples):
                vec = Z[i, :d] + 1j * Z[i, d:]
                p = domains.bounded_from_vector(alg, vec)
                if domains.spectral_norm(p) < 1.0 - 1e-12:
                    h = domains.generic_norm(p, p).real
                    vals[i] = abs(f(p)) ** 2 * h ** (lam - g)
        est = vol * float(np.mean(vals))
        se = vol * float(np.std(vals)) / math.sqrt(n_samples)
    elif realization == "siegel":
        cfg = config if config is not None else domains.SiegelSamplerConfig()
        batch = getattr(f, "_sr_batch", None)
        if batch is not None and alg.family == "sym_real" and alg.rank == 2:
            vals = np.empty(n_samples)
            done = 0
            while done < n_samples:
                chunk = min(200000, n_samples - done)
                W, logq, detY = _siegel_batch_sym_real2(alg, chunk, rng, cfg)
                fv = batch(W)
                vals[done: done + chunk] = (np.abs(fv) ** 2
                                            * detY ** (lam - g)
                                            * np.exp(-logq))
                done += chunk
        else:
            vals = np.zeros(n_samples)
            s = np.full(alg.rank, lam - g)
            for i in range(n_samples):
                p, logq = domains.sample_siegel(alg, rng, cfg)
                weight = cones.delta_power(domains.siegel_defect(p), s)
                vals[i] = abs(f(p)) ** 2 * weight * math.exp(-logq)
        est = float(np.mean(vals))
        se = float(np.std(vals)) / math.sqrt(n_samples)
    else:
        raise ValueError(realization)
    norm = math.sqrt(max(est, 0.0))
    norm_se = se / (2.0 * norm) if norm > 0 else math.sqrt(max(se, 0.0))
    return norm, norm_se


def hardy_norm_mc(f: HolFunction, alg: AlgebraDescriptor, n_samples: int,
                  rng: np.random.Generator, realization: str = "bounded",
                  radius_grid: Optional[Sequence[float]] = None,
                  cone_grid: Optional[Sequence[float]] = None) -> float:
    """sup over a dilation grid of mean-square boundary integrals.

    Rank-1 bounded: normalized sphere measure on |z| = r. Tube: Lebesgue
    integral over the flat boundary x + ih with componentwise Cauchy
    importance sampling, sup over the cone grid h = t e.
    """
    if realization == "bounded":
        if alg.rank != 1:
            raise ValueError("boundary sampling is rank-1 only here")
        grid = radius_grid if radius_grid is not None else (
            0.9, 0.99, 0.999, 0.9999, 0.99999)
        d = alg.dim_m + alg.siegel_n
        G = rng.normal(size=(n_samples, d)) + 1j * rng.normal(size=(n_samples, d))
        G /= np.linalg.norm(G, axis=1, keepdims=True)
        best = 0.0
        for r in grid:
            if f.taylor is not None:
                acc = float(np.mean(np.abs(f.taylor.eval(r * G)) ** 2))
            else:
                acc = sum(abs(f(domains.bounded_from_vector(alg, r * G[i]))) ** 2
                          for i in range(n_samples)) / n_samples
            best = max(best, acc)
        return math.sqrt(best)
    if realization == "siegel":
        if not alg.is_tube:
            raise ValueError("flat-boundary sampling is tube-only here")
        grid = cone_grid if cone_grid is not None else (0.02, 0.1, 0.3, 1.0)
        d = alg.dim_m
        X = rng.standard_cauchy(size=(n_samples, d))
        logw = np.sum(np.log(np.pi * (1.0 + X ** 2)), axis=1)
        best = 0.0
        for t in grid:
            h = t * eja.identity(alg)
            acc = 0.0
            for i in range(n_samples):
                z = eja.from_zchart(alg, X[i].astype(complex)) + 1j * h
                p = SiegelPoint(alg, None, z)
                acc += abs(f(p)) ** 2 * math.exp(logw[i])
            best = max(best, acc / n_samples)
        return math.sqrt(best)
    raise ValueError(realization)


# ---------------------------------------------------------------------------
# sup-norm space estimator and atoms
# ---------------------------------------------------------------------------

def weighted_modulus(f: HolFunction, lam: float, p: SiegelPoint) -> float:
    defect = domains.siegel_defect(p)
    w = cones.delta_power(defect, np.full(p.alg.rank, lam / 2.0))
    return float(w * abs(f(p)))


def sup_norm_max_space(f: HolFunction, lam: float,
                       grid: Sequence[SiegelPoint]) -> float:
    """Grid lower bound of sup Delta^(lambda/2)(defect) |f|."""
    return max((weighted_modulus(f, lam, p) for p in grid), default=0.0)


def siegel_kernel_atom(lam: float, center: SiegelPoint) -> HolFunction:
    """Kernel at the center, normalized so its weighted modulus there is 1."""
    alg = center.alg
    defect = domains.siegel_defect(center)
    norm = cones.delta_power(defect, np.full(alg.rank, lam / 2.0))

    def ev(w) -> complex:
        return domains.kernel_siegel(lam, w, center) * norm

    return HolFunction(alg, ev, domain="siegel")


@dataclass
class Lattice:
    points: list
    separation: float


def hyperbolic_distance_disc(z: complex, w: complex) -> float:
    rho = abs((z - w) / (1.0 - np.conj(w) * z))
    return 2.0 * math.atanh(min(rho, 1.0 - 1e-16))


def hyperbolic_distance_halfplane(z: complex, w: complex) -> float:
    rho = abs((z - w) / (z - np.conj(w)))
    return 2.0 * math.atanh(min(rho, 1.0 - 1e-16))


def lattice_generate(delta: float, region, alg: AlgebraDescriptor) -> Lattice:
    """Greedy 2 delta-separated maximal set on a truncated region.

    Disc: region is the outer radius. Half-plane: region is (xmax, ymin,
    ymax), the box |x| <= xmax, ymin <= y <= ymax. Higher rank needs a
    hyperbolic metric we have no closed form for.
    """
    if delta <= 0:
        raise ValueError("separation must be positive")
    if alg.rank != 1 or alg.dim_m + alg.siegel_n != 1:
        raise NotImplementedError("lattices exist for the disc and half-plane only")
    halfplane = not np.isscalar(region)
    if halfplane and not alg.is_tube:
        raise ValueError("a box region needs the half-plane realization")
    chosen: List[complex] = []
    if halfplane:
        xmax, ymin, ymax = region
        dist = hyperbolic_distance_halfplane
        # logarithmic spacing in y matches the invariant metric
        ys = np.exp(np.linspace(math.log(ymin), math.log(ymax), 40))
        cand = [complex(x, y) for y in ys
                for x in np.linspace(-xmax, xmax, 81) * y]
    else:
        rmax = float(region)
        dist = hyperbolic_distance_disc
        cand = [0j]
        for rr in np.linspace(0.05, rmax, 60):
            k = max(8, int(2 * np.pi * rr / 0.05))
            cand.extend(rr * np.exp(2j * np.pi * np.arange(k) / k))
    for c in cand:
        if all(dist(c, p) >= 2.0 * delta for p in chosen):
            chosen.append(c)
    if halfplane:
        pts = [SiegelPoint(alg, None, eja.from_zchart(alg, np.array([c])))
               for c in chosen]
    else:
        pts = [domains.bounded_from_vector(alg, np.array([c])) for c in chosen]
    return Lattice(pts, delta)


def atomic_synthesis(coeffs: Sequence[complex], lattice: Lattice,
                     lam: float) -> HolFunction:
    """Finite atomic sum sum_j a_j (normalized kernel atom at p_j)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("coefficients must be summable (finite)")
    pts = lattice.points[: len(coeffs)]
    if len(pts) < len(coeffs):
        raise ValueError("more coefficients than lattice points")
    first = pts[0]
    alg = first.alg
    if lam <= 2.0 * (alg.dim_m / alg.rank - 1.0):
        raise ValueError("atoms need a parameter above 2(m/r - 1)")
    if isinstance(first, SiegelPoint):
        atoms = [siegel_kernel_atom(lam, p) for p in pts]
        dom = "siegel"
    else:
        atoms = [HolFunction(alg,
                             (lambda p, c=c: domains.kernel_bounded(lam, p, c)),
                             domain="bounded")
                 for c in pts]
        dom = "bounded"

    def ev(w) -> complex:
        return complex(sum(a * atom(w) for a, atom in zip(coeffs, atoms)))

    return HolFunction(alg, ev, domain=dom)


# ---------------------------------------------------------------------------
# disc Bloch / Besov
# ---------------------------------------------------------------------------

def bloch_seminorm_disc(f: HolFunction, grid: Sequence[complex]) -> float:
    fp = _taylor_of(f).derivative(0)
    return max(float((1.0 - abs(z) ** 2) * abs(fp.eval(np.array([z]))))
               for z in grid)


def besov1_norm_disc(f: HolFunction, n_radial: int = 200,
                     n_angular: int = 256) -> float:
    """|f(0)| + |f'(0)| + integral over the disc of |f''| (chart Lebesgue)."""
    p = _taylor_of(f)
    fp = p.derivative(0)
    fpp = fp.derivative(0)
    rs = (np.arange(n_radial) + 0.5) / n_radial
    ths = 2.0 * np.pi * (np.arange(n_angular) + 0.5) / n_angular
    Zs = rs[:, None] * np.exp(1j * ths)[None, :]
    vals = np.abs(fpp.eval(Zs.ravel()[:, None]))
    integral = float(np.sum(vals * np.repeat(rs, n_angular))
                     * (1.0 / n_radial) * (2.0 * np.pi / n_angular))
    z0 = np.zeros(1, dtype=complex)
    return float(abs(p.eval(z0)) + abs(fp.eval(z0)) + integral)


# ---------------------------------------------------------------------------
# affine action and exact invariance
# ---------------------------------------------------------------------------

def affine_inverse(phi: AffineMap) -> AffineMap:
    """phi = (translation) о (triangular); the Heisenberg inverse is plain
    negation because Phi(zeta, zeta) has no imaginary part."""
    alg = phi.alg
    ti = phi.tri.inverse()
    z0 = -phi.zeta0 if phi.zeta0 is not None else None
    x0 = -phi.x0
    inv_n = AffineMap(alg, z0, x0, cones.identity_triangular(alg))
    inv_t = AffineMap(alg,
                      np.zeros_like(phi.zeta0) if phi.zeta0 is not None else None,
                      0.0 * phi.x0, ti)
    return domains.affine_compose(inv_t, inv_n)


def u_lambda_affine(f: HolFunction, phi: AffineMap, lam: float) -> HolFunction:
    """(f о phi^{-1}) |J phi^{-1}|^(lambda/g) with the holomorphic Jacobian
    modulus (the square root of the real one); affine Jacobians are constant.
    On the disc this is the usual |phi'|^(lambda/2) weight."""
    alg = f.alg
    inv = affine_inverse(phi)
    jac = 1.0 / math.sqrt(domains.affine_real_jacobian(phi))
    scale = jac ** (lam / alg.genus)

    def ev(w: SiegelPoint) -> complex:
        return f(domains.affine_apply(inv, w)) * scale

    return HolFunction(alg, ev, domain="siegel")


# ---------------------------------------------------------------------------
# intertwining on the disc: exact series manipulation
# ---------------------------------------------------------------------------

def _ser(coef: Sequence[complex]) -> SparsePolynomial:
    return SparsePolynomial(1, {(k,): c for k, c in enumerate(coef)})


def _ser_mul(a, b, order):
    return (a * b).truncate(order)


def _ser_inverse(a: SparsePolynomial, order: int) -> SparsePolynomial:
    c0 = a.coeffs.get((0,), 0.0)
    if abs(c0) < 1e-300:
        raise ValueError("series has no inverse at 0")
    u = (SparsePolynomial.constant(1, 1.0) - a * (1.0 / c0)).truncate(order)
    out = SparsePolynomial.constant(1, 1.0)
    term = SparsePolynomial.constant(1, 1.0)
    for _ in range(order):
        term = _ser_mul(term, u, order)
        if not term.coeffs:
            break
        out = out + term
    return out * (1.0 / c0)


def _ser_pow(a: SparsePolynomial, n: float, order: int) -> SparsePolynomial:
    """a(eps)^n with a(0) != 0: principal branch on the constant term."""
    if n == int(n) and n >= 0:
        out = SparsePolynomial.constant(1, 1.0)
        for _ in range(int(n)):
            out = _ser_mul(out, a, order)
        return out
    if n == int(n):
        return _ser_pow(_ser_inverse(a, order), -n, order)
    c0 = complex(a.coeffs.get((0,), 0.0))
    v = a * (1.0 / c0) - 1.0
    # exp(n log(1 + v)) with exact truncated series
    logs = SparsePolynomial.zero(1)
    term = SparsePolynomial.constant(1, 1.0)
    for k in range(1, order + 1):
        term = _ser_mul(term, v, order)
        if not term.coeffs:
            break
        logs = logs + ((-1.0) ** (k + 1) / k) * term
    w = logs * n
    out = SparsePolynomial.constant(1, 1.0)
    term = SparsePolynomial.constant(1, 1.0)
    for k in range(1, order + 1):
        term = _ser_mul(term, w, order) * (1.0 / k)
        if not term.coeffs:
            break
        out = out + term
    return out * (c0 ** n)


def _ser_compose_poly(f: SparsePolynomial, w0: complex,
                      delta: SparsePolynomial, order: int) -> SparsePolynomial:
    """Series of f(w0 + delta(eps)) for a one-variable polynomial f."""
    out = SparsePolynomial.constant(1, complex(f.eval(np.array([w0]))))
    dpow = SparsePolynomial.constant(1, 1.0)
    der = f
    fact = 1.0
    for j in range(1, f.degree() + 1):
        der = der.derivative(0)
        fact *= j
        dpow = _ser_mul(dpow, delta, order)
        if not dpow.coeffs:
            break
        out = out + (complex(der.eval(np.array([w0]))) / fact) * dpow
    return out


def _mobius_scalar(phi: MobiusMap) -> Tuple[complex, complex]:
    """(u, b) with phi(z) = u (b - z)/(1 - conj(b) z) on the disc."""
    return complex(phi.unitary[0, 0]), complex(phi.b[0])


def _disc_phi_series(phi: MobiusMap, z0: complex, order: int):
    """phi(z0 + eps), sqrt(phi') (z0 + eps) as exact truncated series."""
    u, b = _mobius_scalar(phi)
    bb = np.conj(b)
    A = _ser([u * (b - z0), -u])
    B = _ser([1.0 - bb * z0, -bb])
    Binv = _ser_inverse(B, order)
    phi_series = _ser_mul(A, Binv, order)
    sq = np.sqrt(complex(-u * (1.0 - abs(b) ** 2)))
    s_series = Binv * sq  # squares to phi'
    return phi_series, s_series


def intertwine_check_disc(phi: MobiusMap, f: SparsePolynomial, lam: int,
                          test_points: Sequence[complex]) -> float:
    """max |(U_lam f)^((1-lam)) - U_{2-lam} f^((1-lam))| over the points.

    lam is a non-positive integer; all derivatives come from exact series
    composition around each test point.
    """
    if lam > 0 or lam != int(lam):
        raise ValueError("the derivative identity needs lambda in {0, -1, ...}")
    lam = int(lam)
    n = 1 - lam
    order = n + 1
    fd = f
    for _ in range(n):
        fd = fd.derivative(0)
    worst = 0.0
    for z0 in test_points:
        phis, ss = _disc_phi_series(phi, complex(z0), order)
        w0 = phis.coeffs.get((0,), 0.0)
        delta = phis - w0
        comp = _ser_compose_poly(f, w0, delta, order)
        lhs_series = _ser_mul(comp, _ser_pow(ss, lam, order), order)
        lhs = lhs_series.coeffs.get((n,), 0.0) * math.factorial(n)
        s0 = ss.coeffs.get((0,), 0.0)
        rhs = complex(fd.eval(np.array([w0]))) * s0 ** (2 - lam)
        worst = max(worst, abs(lhs - rhs))
    return worst


def u_lambda_disc_taylor(phi: MobiusMap, f: SparsePolynomial, lam: float,
                         order: int) -> SparsePolynomial:
    """Taylor polynomial at 0 of (f о phi) (phi')^(lambda/2), exact series."""
    phis, ss = _disc_phi_series(phi, 0.0, order)
    w0 = phis.coeffs.get((0,), 0.0)
    comp = _ser_compose_poly(f, w0, phis - w0, order)
    return _ser_mul(comp, _ser_pow(ss, float(lam), order), order)


# ---------------------------------------------------------------------------
# box operator and tube intertwining
# ---------------------------------------------------------------------------

def box_operator(alg: AlgebraDescriptor, f: SparsePolynomial,
                 k: int = 1) -> SparsePolynomial:
    """Delta(partial)^k f in the trace-orthonormal chart coordinates."""
    if not alg.is_tube:
        raise ValueError("the wave-type operator lives on tube domains")
    if f.nvars != alg.dim_m:
        raise ValueError("polynomial lives on the wrong chart")
    symbol = cones.minor_polynomials(alg)[alg.rank - 1]
    out = f
    for _ in range(k):
        acc = SparsePolynomial.zero(alg.dim_m)
        for alpha, c in symbol.coeffs.items():
            acc = acc + c * out.derivative_multi(alpha)
        out = acc
    return out


def _tri_chart_matrix(alg: AlgebraDescriptor,
                      t: cones.TriangularElement) -> np.ndarray:
    cols = []
    for kk in range(alg.dim_m):
        e = np.zeros(alg.dim_m, dtype=complex)
        e[kk] = 1.0
        x = eja.from_zchart(alg, e)
        cols.append(eja.to_zchart(cones.t_action(t, x)))
    return np.column_stack(cols)


def intertwine_check_tube(alg: AlgebraDescriptor, f: SparsePolynomial,
                          lam: float, affine_maps: Sequence[AffineMap],
                          test_points: Sequence[SiegelPoint]) -> float:
    """Residual of box^k carrying the affine lambda-action to lambda + 2k.

    k = m/r - lam must be a non-negative integer. Everything is exact
    polynomial algebra: compose with the inverse affine map, scale by the
    constant Jacobian power, apply the symbol-of-Delta operator.
    """
    if not alg.is_tube:
        raise ValueError("tube families only")
    mr = alg.dim_m / alg.rank
    k = round(mr - lam)
    if k < 0 or abs(mr - lam - k) > 1e-9:
        raise ValueError("m/r - lambda must be a non-negative integer")
    lam2 = lam + 2 * k
    pts = np.array([eja.to_zchart(p.z) for p in test_points])
    worst = 0.0
    for phi in affine_maps:
        ti = phi.tri.inverse()
        M = _tri_chart_matrix(alg, ti)
        shift = -(M @ eja.to_zchart(phi.x0.as_complex()))
        jac_inv = 1.0 / math.sqrt(domains.affine_real_jacobian(phi))
        fu = f.compose_affine(M, shift) * jac_inv ** (lam / alg.genus)
        lhs = box_operator(alg, fu, k)
        rhs = (box_operator(alg, f, k).compose_affine(M, shift)
               * jac_inv ** (lam2 / alg.genus))
        diff = lhs - rhs
        if diff.coeffs:
            worst = max(worst, float(np.max(np.abs(diff.eval(pts)))))
    return worst
