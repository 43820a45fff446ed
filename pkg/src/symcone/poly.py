"""Sparse polynomials in several complex variables.

Monomials are keyed by exponent tuples; coefficients are complex scalars.
This representation is aimed at the moderate degrees (<= 60 in one variable,
<= 12 in up to ~8 variables) used throughout the package, so everything is
dictionary arithmetic plus vectorized evaluation. Coefficients with modulus
below DROP_TOL relative to the largest coefficient are dropped on cleanup to
keep dictionaries from silting up with float dust.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

Exponent = Tuple[int, ...]

DROP_TOL = 0.0  # exact arithmetic by default; cleanup() takes an explicit tol


class SparsePolynomial:
    """Polynomial sum_alpha c_alpha z^alpha on C^nvars."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: Mapping[Exponent, complex] | None = None):
        self.nvars = int(nvars)
        self.coeffs: Dict[Exponent, complex] = {}
        if coeffs:
            for a, c in coeffs.items():
                if c != 0:
                    key = tuple(int(k) for k in a)
                    if len(key) != self.nvars:
                        raise ValueError("exponent arity mismatch")
                    self.coeffs[key] = self.coeffs.get(key, 0.0) + complex(c)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePolynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c: complex) -> "SparsePolynomial":
        p = cls(nvars)
        if c != 0:
            p.coeffs[(0,) * nvars] = complex(c)
        return p

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1.0})

    @classmethod
    def linear_form(cls, vec: Iterable[complex]) -> "SparsePolynomial":
        vec = list(vec)
        p = cls(len(vec))
        for i, c in enumerate(vec):
            if c != 0:
                e = [0] * len(vec)
                e[i] = 1
                p.coeffs[tuple(e)] = complex(c)
        return p

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.coeffs:
            return -1
        return max(sum(a) for a in self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            return -1
        return min(sum(a) for a in self.coeffs)

    def copy(self) -> "SparsePolynomial":
        p = SparsePolynomial(self.nvars)
        p.coeffs = dict(self.coeffs)
        return p

    def cleanup(self, tol: float = 1e-14) -> "SparsePolynomial":
        """Drop coefficients tiny relative to the largest one."""
        if not self.coeffs:
            return self
        top = max(abs(c) for c in self.coeffs.values())
        if top == 0.0:
            self.coeffs.clear()
            return self
        cut = top * tol
        self.coeffs = {a: c for a, c in self.coeffs.items() if abs(c) > cut}
        return self

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SparsePolynomial.constant(self.nvars, other)
        out = self.copy()
        for a, c in other.coeffs.items():
            s = out.coeffs.get(a, 0.0) + c
            if s == 0:
                out.coeffs.pop(a, None)
            else:
                out.coeffs[a] = s
        return out

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.nvars, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SparsePolynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            if other == 0:
                return SparsePolynomial(self.nvars)
            return SparsePolynomial(self.nvars, {a: c * other for a, c in self.coeffs.items()})
        out = SparsePolynomial(self.nvars)
        oc = out.coeffs
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = tuple(x + y for x, y in zip(a, b))
                oc[key] = oc.get(key, 0.0) + ca * cb
        out.coeffs = {a: c for a, c in oc.items() if c != 0}
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePolynomial.constant(self.nvars, 1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, max_degree: int) -> "SparsePolynomial":
        return SparsePolynomial(
            self.nvars, {a: c for a, c in self.coeffs.items() if sum(a) <= max_degree}
        )

    def homogeneous_part(self, degree: int) -> "SparsePolynomial":
        return SparsePolynomial(
            self.nvars, {a: c for a, c in self.coeffs.items() if sum(a) == degree}
        )

    def conj_coeffs(self) -> "SparsePolynomial":
        """Coefficient-wise conjugate (the polynomial z -> conj(p(conj z)))."""
        return SparsePolynomial(self.nvars, {a: np.conj(c) for a, c in self.coeffs.items()})

    def scale_argument(self, r: complex) -> "SparsePolynomial":
        """p(r z): multiplies each degree-k part by r^k."""
        return SparsePolynomial(
            self.nvars, {a: c * (r ** sum(a)) for a, c in self.coeffs.items()}
        )

    # -- calculus ----------------------------------------------------------

    def derivative(self, i: int, order: int = 1) -> "SparsePolynomial":
        out = SparsePolynomial(self.nvars)
        for a, c in self.coeffs.items():
            k = a[i]
            if k < order:
                continue
            fac = 1.0
            for j in range(order):
                fac *= k - j
            e = list(a)
            e[i] = k - order
            out.coeffs[tuple(e)] = out.coeffs.get(tuple(e), 0.0) + c * fac
        return out

    def derivative_multi(self, beta: Exponent) -> "SparsePolynomial":
        p = self
        for i, b in enumerate(beta):
            if b:
                p = p.derivative(i, b)
        return p

    # -- substitution -------------------------------------------------------

    def compose_linear(self, mat: np.ndarray) -> "SparsePolynomial":
        """p(M z): substitute z_i -> sum_j M[i, j] z_j.

        M is nvars x nvars_new; result lives on nvars_new variables.
        """
        mat = np.asarray(mat)
        nnew = mat.shape[1]
        lin = [SparsePolynomial.linear_form(mat[i, :]) for i in range(self.nvars)]
        return self._substitute(lin, nnew)

    def compose_affine(self, mat: np.ndarray, shift: np.ndarray) -> "SparsePolynomial":
        """p(M z + b)."""
        mat = np.asarray(mat)
        shift = np.asarray(shift)
        nnew = mat.shape[1]
        subs = []
        for i in range(self.nvars):
            li = SparsePolynomial.linear_form(mat[i, :])
            if shift[i] != 0:
                li = li + complex(shift[i])
            subs.append(li)
        return self._substitute(subs, nnew)

    def _substitute(self, subs, nnew: int) -> "SparsePolynomial":
        # Horner over the variable of highest total use would be cleaner; for
        # our sizes a direct power-product cache is fast enough.
        powers: Dict[Tuple[int, int], SparsePolynomial] = {}

        def var_pow(i: int, k: int) -> SparsePolynomial:
            if k == 0:
                return SparsePolynomial.constant(nnew, 1.0)
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] ** k
            return powers[key]

        out = SparsePolynomial(nnew)
        for a, c in self.coeffs.items():
            term = SparsePolynomial.constant(nnew, c)
            for i, k in enumerate(a):
                if k:
                    term = term * var_pow(i, k)
            out = out + term
        return out

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z) -> complex | np.ndarray:
        return self.eval(z)

    def eval(self, z) -> complex | np.ndarray:
        """Evaluate at a point (shape (nvars,)) or a batch (shape (N, nvars))."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        if single:
            z = z[None, :]
        if z.shape[1] != self.nvars:
            raise ValueError("point dimension mismatch")
        vals = np.zeros(z.shape[0], dtype=complex)
        for a, c in self.coeffs.items():
            term = np.full(z.shape[0], c, dtype=complex)
            for i, k in enumerate(a):
                if k == 1:
                    term = term * z[:, i]
                elif k > 1:
                    term = term * z[:, i] ** k
            vals += term
        return vals[0] if single else vals

    # -- misc -----------------------------------------------------------------

    def __repr__(self):
        if not self.coeffs:
            return "SparsePolynomial(0)"
        parts = []
        for a in sorted(self.coeffs, key=lambda t: (sum(t), t))[:6]:
            parts.append(f"{self.coeffs[a]:.3g}*z^{a}")
        more = "..." if len(self.coeffs) > 6 else ""
        return "SparsePolynomial(" + " + ".join(parts) + more + ")"


def monomial_factorial(alpha: Exponent) -> float:
    out = 1.0
    for k in alpha:
        out *= math.factorial(k)
    return out


def det_poly(entries) -> SparsePolynomial:
    """Determinant of a square array of SparsePolynomial entries.

    Cofactor expansion along the first row; sizes here never exceed ~8.
    """
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    out = None
    for j in range(n):
        minor = [[entries[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = entries[0][j] * det_poly(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def pfaffian_poly(entries) -> SparsePolynomial:
    """Pfaffian of an even-size skew-symmetric array of polynomials.

    Expansion along the first row: Pf(A) = sum_j (-1)^j A[0][j] Pf(A with rows
    and columns 0, j removed). Normalized so Pf([[0, a], [-a, 0]]) = a.
    """
    n = len(entries)
    if n % 2:
        raise ValueError("pfaffian needs even size")
    if n == 0:
        raise ValueError("empty pfaffian")
    if n == 2:
        return entries[0][1]
    out = None
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        minor = [[entries[r][c] for c in keep] for r in keep]
        term = entries[0][j] * pfaffian_poly(minor)
        if j % 2 == 0:
            term = -term
        out = term if out is None else out + term
    return out
