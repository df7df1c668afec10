"""
Univariate polynomial ideals over the complex numbers.

A finite multiset of roots (a *variety*) generates the principal ideal of all
polynomials that vanish on it.  Restricted to degree < N the ideal is a linear
subspace of C^N, spanned by the columns of a banded Toeplitz matrix whose first
column holds the generator coefficients.

Coefficient vectors are stored in ascending degree order throughout:
``coeffs[k]`` multiplies ``x**k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DimensionError, DomainError

__all__ = [
    "Variety",
    "Poly",
    "IdealBasis",
    "elementary_symmetric",
    "generator_poly",
    "toeplitz_basis",
    "ideal_basis",
    "extend_variety",
    "poly_mul",
    "poly_eval",
    "poly_divmod",
]

# roots closer than this are considered the same point under "multiplicity"
ROOT_MERGE_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Variety:
    """Ordered multiset of complex roots; multiplicity is repetition."""

    roots: np.ndarray

    def __post_init__(self):
        roots = np.atleast_1d(np.asarray(self.roots, dtype=complex)).ravel()
        if roots.size < 1:
            raise DomainError("a variety needs at least one root")
        object.__setattr__(self, "roots", _frozen(roots))

    def __len__(self) -> int:
        return self.roots.size

    def __iter__(self):
        return iter(self.roots)

    def on_unit_circle(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.roots) - 1.0) <= tol))

    def contains(self, other: "Variety", tol: float = 1e-12) -> bool:
        """Multiset inclusion ``other ⊆ self``."""
        pool = list(self.roots)
        for r in other.roots:
            dist = [abs(r - p) for p in pool]
            if not dist or min(dist) > tol:
                return False
            pool.pop(int(np.argmin(dist)))
        return True


@dataclass(frozen=True)
class Poly:
    """Polynomial with complex coefficients in ascending degree order.

    Trailing zero coefficients are stripped on construction, so the leading
    coefficient is nonzero except for the zero polynomial ``Poly([0])``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return -1
        return self.coeffs.size - 1

    def in_space(self, N: int) -> bool:
        """Membership in C_N[x], the polynomials of degree < N."""
        return self.coeffs.size <= N

    def padded(self, N: int) -> np.ndarray:
        if not self.in_space(N):
            raise DimensionError(f"degree {self.degree} does not fit in C_{N}[x]")
        out = np.zeros(N, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def __call__(self, x):
        return poly_eval(self, x)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(self.coeffs.size, other.coeffs.size)
        return Poly(self.padded(n) + other.padded(n))

    def __neg__(self) -> "Poly":
        return Poly(-self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())


@dataclass(frozen=True)
class IdealBasis:
    """Toeplitz basis ``Q`` (N x (N-L)) of the ideal generated by ``generator``
    restricted to C_N[x]."""

    Q: np.ndarray
    generator: Poly
    N: int
    variety: Optional[Variety] = field(default=None, compare=False)

    @property
    def L(self) -> int:
        return self.generator.degree

    @property
    def K(self) -> int:
        return self.N - self.L


def elementary_symmetric(roots: Iterable[complex], k: int) -> complex:
    """k-th elementary symmetric function of ``roots``.

    Folds one root at a time into the running vector ``e`` with
    ``e[j] <- e[j] + r * e[j-1]``, which costs O(L^2) and avoids subset
    enumeration.
    """
    r = np.asarray(list(roots), dtype=complex).ravel()
    if not 0 <= k <= r.size:
        raise DomainError(f"k={k} outside [0, {r.size}]")
    e = _all_elementary_symmetric(r)
    return complex(e[k])


def _all_elementary_symmetric(r: np.ndarray) -> np.ndarray:
    e = np.zeros(r.size + 1, dtype=complex)
    e[0] = 1.0
    for i, root in enumerate(r, start=1):
        e[1 : i + 1] = e[1 : i + 1] + root * e[0:i]
    return e


def generator_poly(variety: Variety) -> Poly:
    """Monic generator prod_l (x - r_l) of the ideal vanishing on ``variety``.

    Coefficients follow Viète: ``coeffs[L-k] = (-1)^k e_k(roots)``.
    """
    r = variety.roots
    L = r.size
    e = _all_elementary_symmetric(r)
    coeffs = np.empty(L + 1, dtype=complex)
    for k in range(L + 1):
        coeffs[L - k] = (-1) ** k * e[k]
    return Poly(coeffs)


def toeplitz_basis(generator: Poly, N: int, variety: Optional[Variety] = None) -> IdealBasis:
    """Columns are ``generator * x**j`` for j = 0..N-L-1, zero padded to length N."""
    L = generator.degree
    if L < 1:
        raise DomainError("generator must have degree >= 1")
    if L >= N:
        raise DimensionError(
            f"variety leaves no degrees of freedom (L={L} >= N={N})"
        )
    K = N - L
    Q = np.zeros((N, K), dtype=complex)
    for j in range(K):
        Q[j : j + L + 1, j] = generator.coeffs
    Q.setflags(write=False)
    return IdealBasis(Q=Q, generator=generator, N=N, variety=variety)


def ideal_basis(variety: Variety, N: int) -> IdealBasis:
    return toeplitz_basis(generator_poly(variety), N, variety=variety)


def _merge_close(roots: np.ndarray, tol: float) -> np.ndarray:
    out = roots.copy()
    for i in range(out.size):
        for j in range(i):
            if abs(out[i] - out[j]) < tol:
                out[i] = out[j]
                break
    return out


def extend_variety(
    base: Variety,
    target_L: int,
    policy: str = "multiplicity",
    extra: Optional[Sequence[complex]] = None,
) -> Variety:
    """Grow ``base`` to ``target_L`` roots while keeping it as a sub-multiset.

    ``"multiplicity"`` repeats the base roots round-robin; ``"explicit"``
    appends caller-supplied roots from ``extra``.  Either way the extended ideal
    is contained in the base ideal.
    """
    L0 = len(base)
    if target_L < L0:
        raise DomainError(f"target_L={target_L} is smaller than |base|={L0}")
    n_new = target_L - L0
    if policy == "multiplicity":
        roots = _merge_close(base.roots, ROOT_MERGE_TOL)
        added = [roots[i % L0] for i in range(n_new)]
        return Variety(np.concatenate([roots, np.asarray(added, dtype=complex)]))
    if policy == "explicit":
        if n_new == 0:
            return Variety(base.roots)
        if extra is None or len(extra) < n_new:
            have = 0 if extra is None else len(extra)
            raise ConfigError(f"explicit policy needs {n_new} extra roots, got {have}")
        added = np.asarray(list(extra)[:n_new], dtype=complex)
        return Variety(np.concatenate([base.roots, added]))
    raise ConfigError(f"unknown extension policy {policy!r}")


def poly_mul(a: Poly, b: Poly) -> Poly:
    return Poly(np.convolve(a.coeffs, b.coeffs))


def poly_eval(p: Poly, x):
    """Horner evaluation; ``x`` may be a scalar or an array."""
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for c in p.coeffs[::-1]:
        acc = acc * x + c
    return acc[()] if acc.ndim == 0 else acc


def poly_divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``num = q * den + r`` with ``deg r < deg den``."""
    if den.degree < 0:
        raise DomainError("division by the zero polynomial")
    r = num.coeffs.astype(complex).copy()
    d = den.coeffs
    m = d.size - 1
    if r.size - 1 < m:
        return Poly([0]), Poly(r)
    q = np.zeros(r.size - m, dtype=complex)
    lead = d[-1]
    for k in range(r.size - 1, m - 1, -1):
        coef = r[k] / lead
        q[k - m] = coef
        r[k - m : k + 1] -= coef * d
    return Poly(q), Poly(r[:m] if m > 0 else [0])
