"""Finite Hopf *-algebras as dense structure tensors, plus their dual functionals.

Conventions used throughout:

* elements are coefficient vectors over a fixed basis (e_1, ..., e_n);
* linear maps act on coefficient columns from the left, so kappa(a) has
  coefficients ``antipode @ a``;
* the star operation is conjugate-linear: the coefficients of a* are
  ``star @ conj(a)``, which turns involutivity into ``star @ conj(star) = 1``;
* ``mul[i, j, k]`` is the e_k-coefficient of e_i e_j (inputs first);
* ``comul[i, j, k]`` is the (e_j tensor e_k)-coefficient of the coproduct
  of e_i (input first).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import max_abs
from .errors import DimensionMismatch, HostMismatch, NotConvolutionInvertible

Array = np.ndarray


def freeze(a) -> Array:
    """Return a read-only complex128 copy of a."""
    out = np.array(a, dtype=np.complex128, order="C", copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ScalarContext:
    """Tolerance and seed shared by every numerical routine.

    Comparisons are absolute max-norm comparisons against ``tolerance``.
    """

    tolerance: float = 1e-9
    seed: int = 7

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DimensionMismatch("tolerance must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def close(self, residual: float) -> bool:
        return residual <= self.tolerance


DEFAULT_CONTEXT = ScalarContext()


@dataclass(frozen=True, eq=False)
class FiniteHopfStarAlgebra:
    """Structure tensors of a finite-dimensional Hopf *-algebra."""

    dim: int
    basis_labels: tuple[str, ...]
    mul: Array
    unit: Array
    comul: Array
    counit: Array
    antipode: Array
    antipode_inv: Array
    star: Array

    def __post_init__(self):
        n = self.dim
        if n <= 0:
            raise DimensionMismatch("dim must be positive")
        if len(self.basis_labels) != n:
            raise DimensionMismatch("label count differs from dim")
        object.__setattr__(self, "basis_labels", tuple(str(s) for s in self.basis_labels))
        shapes = {
            "mul": (n, n, n),
            "unit": (n,),
            "comul": (n, n, n),
            "counit": (n,),
            "antipode": (n, n),
            "antipode_inv": (n, n),
            "star": (n, n),
        }
        for name, shape in shapes.items():
            arr = freeze(getattr(self, name))
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)

    def basis_vector(self, i: int) -> Array:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[i] = 1.0
        return v

    def product(self, x: Array, y: Array) -> Array:
        return np.einsum("i,j,ijk->k", x, y, self.mul)

    def star_of(self, x: Array) -> Array:
        return self.star @ np.conj(x)

    def antipode_of(self, x: Array) -> Array:
        return self.antipode @ x

    def antipode_inv_of(self, x: Array) -> Array:
        return self.antipode_inv @ x

    def counit_of(self, x: Array) -> complex:
        return complex(np.dot(self.counit, x))

    def coproduct_of(self, x: Array) -> Array:
        return np.einsum("i,ijk->jk", x, self.comul)

    def dual_identity(self) -> "DualFunctional":
        return DualFunctional(self, self.counit)


def iterated_coproduct(algebra: FiniteHopfStarAlgebra, k: int) -> Array:
    """Tensor of Delta^(k): axis 0 is the input leg, axes 1..k+1 the output legs.

    k = 1 reproduces ``comul`` exactly.
    """
    if k < 1:
        raise DimensionMismatch("k must be at least 1")
    out = algebra.comul
    for _ in range(k - 1):
        # expand the last output leg
        out = np.tensordot(out, algebra.comul, axes=([out.ndim - 1], [0]))
    return out


@dataclass(frozen=True, eq=False)
class DualFunctional:
    """Linear functional on a host algebra, stored by its values on the basis."""

    host: FiniteHopfStarAlgebra
    coeffs: Array

    def __post_init__(self):
        arr = freeze(self.coeffs)
        if arr.shape != (self.host.dim,):
            raise DimensionMismatch("functional length differs from host dim")
        object.__setattr__(self, "coeffs", arr)

    def __call__(self, x: Array) -> complex:
        return complex(np.dot(self.coeffs, x))

    def __mul__(self, other: "DualFunctional") -> "DualFunctional":
        return convolve(self, other)


def pair(a: Array, phi: DualFunctional) -> complex:
    """Bilinear pairing <a, phi> = phi(a)."""
    return phi(np.asarray(a, dtype=np.complex128))


def convolve(phi: DualFunctional, psi: DualFunctional) -> DualFunctional:
    """Convolution product (phi * psi)(a) = phi(a_(1)) psi(a_(2))."""
    if phi.host is not psi.host:
        raise HostMismatch("convolution requires a common host algebra")
    coeffs = np.einsum("ijk,j,k->i", phi.host.comul, phi.coeffs, psi.coeffs)
    return DualFunctional(phi.host, coeffs)


def convolution_matrix(host: FiniteHopfStarAlgebra, phi: Array) -> Array:
    """Matrix of psi -> phi * psi on functional coefficient vectors."""
    return np.einsum("ijk,j->ik", host.comul, phi)


def convolution_inverse(phi: DualFunctional, ctx: ScalarContext = DEFAULT_CONTEXT) -> DualFunctional:
    """Convolution inverse, solving (phi * x) = counit by a linear solve."""
    host = phi.host
    lmat = convolution_matrix(host, phi.coeffs)
    s = np.linalg.svd(lmat, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > 1.0 / ctx.tolerance:
        raise NotConvolutionInvertible(
            f"left convolution operator has condition number above {1.0 / ctx.tolerance:.3g}"
        )
    x = np.linalg.solve(lmat, host.counit)
    inv = DualFunctional(host, x)
    left = convolve(phi, inv).coeffs - host.counit
    right = convolve(inv, phi).coeffs - host.counit
    resid = max(max_abs(left), max_abs(right))
    if not ctx.close(resid):
        raise NotConvolutionInvertible(f"two-sided inverse residual {resid:.3g}")
    return inv


def dual_star(phi: DualFunctional) -> DualFunctional:
    """Involution on the dual: phi*(a) = conj(phi(kappa(a)*))."""
    host = phi.host
    # phi*(e_i) = conj(sum_j (star @ conj(antipode))[j, i] phi_j)
    m = host.star @ np.conj(host.antipode)
    return DualFunctional(host, np.conj(m.T @ phi.coeffs))


def dual_star_matrix_apply(host: FiniteHopfStarAlgebra, phi: Array) -> Array:
    """Coefficient-level form of dual_star, for tight loops."""
    m = host.star @ np.conj(host.antipode)
    return np.conj(m.T @ phi)


@dataclass(frozen=True)
class AxiomReport:
    """Named residuals from a verification pass, judged against one tolerance."""

    subject: str
    checks: tuple[tuple[str, float], ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for _, r in self.checks)

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.checks), default=0.0)

    def residual(self, name: str) -> float:
        for key, value in self.checks:
            if key == name:
                return value
        raise KeyError(name)

    def failing(self) -> tuple[str, ...]:
        return tuple(name for name, r in self.checks if r > self.tolerance)

    def as_rows(self) -> list[dict]:
        return [
            {"check": name, "residual": r, "passed": bool(r <= self.tolerance)}
            for name, r in self.checks
        ]


def verify_hopf_axioms(
    algebra: FiniteHopfStarAlgebra,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    subject: str = "hopf-algebra",
) -> AxiomReport:
    """Residuals of every finitely-checkable Hopf *-algebra axiom."""
    a = algebra
    n = a.dim
    eye = np.eye(n, dtype=np.complex128)
    checks: list[tuple[str, float]] = []

    assoc = np.einsum("ijp,pkl->ijkl", a.mul, a.mul) - np.einsum(
        "jkq,iql->ijkl", a.mul, a.mul
    )
    checks.append(("associativity", max_abs(assoc)))

    left_unit = np.einsum("i,ijk->jk", a.unit, a.mul) - eye
    right_unit = np.einsum("j,ijk->ik", a.unit, a.mul) - eye
    checks.append(("unit-law", max(max_abs(left_unit), max_abs(right_unit))))

    coassoc = np.einsum("ipc,pab->iabc", a.comul, a.comul) - np.einsum(
        "iap,pbc->iabc", a.comul, a.comul
    )
    checks.append(("coassociativity", max_abs(coassoc)))

    left_counit = np.einsum("ijk,j->ik", a.comul, a.counit) - eye
    right_counit = np.einsum("ijk,k->ij", a.comul, a.counit) - eye
    checks.append(("counit-law", max(max_abs(left_counit), max_abs(right_counit))))

    hom = np.einsum("ijc,cab->ijab", a.mul, a.comul) - np.einsum(
        "ipq,jrs,pra,qsb->ijab", a.comul, a.comul, a.mul, a.mul, optimize=True
    )
    checks.append(("coproduct-multiplicative", max_abs(hom)))

    unit_coprod = np.einsum("i,ijk->jk", a.unit, a.comul) - np.outer(a.unit, a.unit)
    checks.append(("coproduct-unital", max_abs(unit_coprod)))

    counit_mul = np.einsum("ijk,k->ij", a.mul, a.counit) - np.outer(a.counit, a.counit)
    counit_unit = abs(complex(np.dot(a.counit, a.unit)) - 1.0)
    checks.append(("counit-multiplicative", max(max_abs(counit_mul), counit_unit)))

    # Delta(a*) = (* tensor *) Delta(a)
    star_coprod = np.einsum("ji,jab->iab", a.star, a.comul) - np.einsum(
        "ijk,aj,bk->iab", np.conj(a.comul), a.star, a.star, optimize=True
    )
    checks.append(("coproduct-star", max_abs(star_coprod)))

    antipode_target = np.outer(a.counit, a.unit)
    anti_left = (
        np.einsum("ijk,pj,pkl->il", a.comul, a.antipode, a.mul, optimize=True)
        - antipode_target
    )
    anti_right = (
        np.einsum("ijk,pk,jpl->il", a.comul, a.antipode, a.mul, optimize=True)
        - antipode_target
    )
    checks.append(("antipode-law", max(max_abs(anti_left), max_abs(anti_right))))

    anti_hom = np.einsum("ijk,lk->ijl", a.mul, a.antipode) - np.einsum(
        "pj,qi,pql->ijl", a.antipode, a.antipode, a.mul, optimize=True
    )
    checks.append(("antipode-antimultiplicative", max_abs(anti_hom)))

    checks.append(("antipode-inverse", max_abs(a.antipode_inv @ a.antipode - eye)))

    # kappa(a*) = (kappa^{-1}(a))*  <=>  antipode @ star = star @ conj(antipode_inv)
    anti_star = a.antipode @ a.star - a.star @ np.conj(a.antipode_inv)
    checks.append(("antipode-star-compatible", max_abs(anti_star)))

    checks.append(("star-involutive", max_abs(a.star @ np.conj(a.star) - eye)))
    checks.append(("star-unit", max_abs(a.star @ np.conj(a.unit) - a.unit)))

    # (e_i e_j)* = e_j* e_i*
    star_anti = np.einsum("ijk,lk->ijl", np.conj(a.mul), a.star) - np.einsum(
        "pj,qi,pql->ijl", a.star, a.star, a.mul, optimize=True
    )
    checks.append(("star-antimultiplicative", max_abs(star_anti)))

    return AxiomReport(subject=subject, checks=tuple(checks), tolerance=ctx.tolerance)
