"""Dual unitary 2-cocycles on the tensor square of the dual.

A cocycle is stored as the matrix of its values on basis pairs,
sigma[i, j] = sigma(e_i, e_j).  Convolution, inversion, and the involution
on functionals of the tensor square are implemented at matrix level; the
inverse is always recomputed from sigma, never trusted from input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import max_abs
from .core import (
    DEFAULT_CONTEXT,
    AxiomReport,
    DualFunctional,
    FiniteHopfStarAlgebra,
    ScalarContext,
    convolution_inverse,
    freeze,
)
from .errors import (
    HostMismatch,
    InvalidBicharacter,
    InvalidInverse,
    InvalidMorphism,
    TheoremViolation,
)
from .groups import FiniteGroupData, group_algebra

Array = np.ndarray


def convolve2(host: FiniteHopfStarAlgebra, x: Array, y: Array) -> Array:
    """Convolution of two functionals on the tensor square."""
    return np.einsum(
        "iab,jcd,ac,bd->ij", host.comul, host.comul, x, y, optimize=True
    )


def identity2(host: FiniteHopfStarAlgebra) -> Array:
    return np.outer(host.counit, host.counit)


def invert2(host: FiniteHopfStarAlgebra, x: Array, ctx: ScalarContext) -> Array:
    """Convolution inverse on the tensor square by a flattened linear solve."""
    n = host.dim
    lmat = np.einsum(
        "iab,jcd,ac->ijbd", host.comul, host.comul, x, optimize=True
    ).reshape(n * n, n * n)
    s = np.linalg.svd(lmat, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > 1.0 / ctx.tolerance:
        raise InvalidInverse("tensor-square convolution operator is singular")
    inv = np.linalg.solve(lmat, identity2(host).reshape(n * n)).reshape(n, n)
    resid = max(
        max_abs(convolve2(host, x, inv) - identity2(host)),
        max_abs(convolve2(host, inv, x) - identity2(host)),
    )
    if not ctx.close(resid):
        raise InvalidInverse(f"two-sided inverse residual {resid:.3g}")
    return inv


def dual_star2(host: FiniteHopfStarAlgebra, x: Array) -> Array:
    """Involution on tensor-square functionals, leg-wise consistent with
    the involution on single-leg functionals."""
    m = host.star @ np.conj(host.antipode)
    return np.conj(m.T @ x @ m)


@dataclass(frozen=True, eq=False)
class DualCocycle:
    host: FiniteHopfStarAlgebra
    sigma: Array
    sigma_inv: Array = field(default=None)
    ctx: ScalarContext = DEFAULT_CONTEXT

    def __post_init__(self):
        sig = freeze(self.sigma)
        if sig.shape != (self.host.dim, self.host.dim):
            raise InvalidInverse(
                f"cocycle matrix has shape {sig.shape}, host dim {self.host.dim}"
            )
        object.__setattr__(self, "sigma", sig)
        inv = invert2(self.host, sig, self.ctx)
        if self.sigma_inv is not None:
            drift = max_abs(np.asarray(self.sigma_inv) - inv)
            if not self.ctx.close(drift):
                raise InvalidInverse(
                    f"supplied inverse differs from recomputed one by {drift:.3g}"
                )
        object.__setattr__(self, "sigma_inv", freeze(inv))

    def value(self, a: Array, b: Array) -> complex:
        return complex(a @ self.sigma @ b)


def trivial_cocycle(host: FiniteHopfStarAlgebra) -> DualCocycle:
    return DualCocycle(host, identity2(host))


def verify_cocycle(
    cocycle: DualCocycle, ctx: ScalarContext = DEFAULT_CONTEXT, subject: str = "cocycle"
) -> AxiomReport:
    host = cocycle.host
    sig, inv = cocycle.sigma, cocycle.sigma_inv
    eye2 = identity2(host)
    checks: list[tuple[str, float]] = []

    checks.append(
        (
            "inverse-two-sided",
            max(
                max_abs(convolve2(host, sig, inv) - eye2),
                max_abs(convolve2(host, inv, sig) - eye2),
            ),
        )
    )

    lhs = np.einsum(
        "jpq,krs,pr,qst,it->ijk", host.comul, host.comul, sig, host.mul, sig,
        optimize=True,
    )
    rhs = np.einsum(
        "ipq,jrs,pr,qst,tk->ijk", host.comul, host.comul, sig, host.mul, sig,
        optimize=True,
    )
    checks.append(("cocycle-identity", max_abs(lhs - rhs)))

    norm = max(
        max_abs(sig @ host.unit - host.counit),
        max_abs(host.unit @ sig - host.counit),
        max_abs(inv @ host.unit - host.counit),
        max_abs(host.unit @ inv - host.counit),
    )
    checks.append(("normalization", norm))

    checks.append(("unitarity", max_abs(dual_star2(host, sig) - inv)))

    return AxiomReport(subject=subject, checks=tuple(checks), tolerance=ctx.tolerance)


def from_bicharacter(
    group: FiniteGroupData,
    beta: Array,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    host: FiniteHopfStarAlgebra | None = None,
) -> DualCocycle:
    """Bicharacter table on a finite group as a cocycle on its group algebra.

    A pre-built group algebra of the same group may be passed as host so the
    cocycle attaches to an existing object instead of a fresh one.
    """
    n = group.order
    beta = np.asarray(beta, dtype=np.complex128)
    if beta.shape != (n, n):
        raise InvalidBicharacter(f"table shape {beta.shape} for group of order {n}")
    if max_abs(np.abs(beta) - 1.0) > ctx.tolerance:
        raise InvalidBicharacter("table values must be unimodular")
    t = group.table
    for g in range(n):
        for h in range(n):
            for k in range(n):
                if abs(beta[g, t[h, k]] - beta[g, h] * beta[g, k]) > ctx.tolerance:
                    raise InvalidBicharacter(
                        f"not multiplicative in the second slot at ({g},{h},{k})"
                    )
                if abs(beta[t[g, h], k] - beta[g, k] * beta[h, k]) > ctx.tolerance:
                    raise InvalidBicharacter(
                        f"not multiplicative in the first slot at ({g},{h},{k})"
                    )
    if host is not None and host.dim != n:
        raise InvalidBicharacter(
            f"supplied host has dimension {host.dim}, group has order {n}"
        )
    cocycle = DualCocycle(host if host is not None else group_algebra(group), beta, ctx=ctx)
    report = verify_cocycle(cocycle, ctx)
    if not report.passed:
        raise InvalidBicharacter(
            f"table fails cocycle checks: {', '.join(report.failing())}"
        )
    return cocycle


@dataclass(frozen=True, eq=False)
class QuotientMorphism:
    """Surjective Hopf *-algebra morphism, as a matrix on coefficient columns."""

    source: FiniteHopfStarAlgebra
    target: FiniteHopfStarAlgebra
    pi: Array

    def __post_init__(self):
        p = freeze(self.pi)
        if p.shape != (self.target.dim, self.source.dim):
            raise InvalidMorphism(
                f"morphism matrix shape {p.shape}, expected "
                f"{(self.target.dim, self.source.dim)}"
            )
        object.__setattr__(self, "pi", p)

    def apply(self, x: Array) -> Array:
        return self.pi @ np.asarray(x, dtype=np.complex128)


def verify_morphism(
    mor: QuotientMorphism, ctx: ScalarContext = DEFAULT_CONTEXT
) -> AxiomReport:
    s, t, p = mor.source, mor.target, mor.pi
    checks: list[tuple[str, float]] = []

    prod = np.einsum("ijk,pk->ijp", s.mul, p) - np.einsum(
        "pi,qj,pqr->ijr", p, p, t.mul, optimize=True
    )
    checks.append(("multiplicative", max_abs(prod)))
    checks.append(("unital", max_abs(p @ s.unit - t.unit)))

    coprod = np.einsum("ki,kpq->ipq", p, t.comul) - np.einsum(
        "iab,pa,qb->ipq", s.comul, p, p, optimize=True
    )
    checks.append(("comultiplicative", max_abs(coprod)))
    checks.append(("counital", max_abs(t.counit @ p - s.counit)))
    checks.append(("star-compatible", max_abs(p @ s.star - t.star @ np.conj(p))))
    checks.append(("antipode-compatible", max_abs(p @ s.antipode - t.antipode @ p)))

    rank = np.linalg.matrix_rank(p, tol=1e-8)
    checks.append(("surjective", 0.0 if rank == t.dim else 1.0))

    return AxiomReport(subject="morphism", checks=tuple(checks), tolerance=ctx.tolerance)


def induce(
    cocycle: DualCocycle,
    mor: QuotientMorphism,
    ctx: ScalarContext = DEFAULT_CONTEXT,
) -> DualCocycle:
    """Pull a cocycle on the quotient back to the big algebra."""
    if cocycle.host is not mor.target:
        raise HostMismatch("cocycle does not live on the morphism target")
    report = verify_morphism(mor, ctx)
    if not report.passed:
        raise InvalidMorphism(
            f"morphism checks failed: {', '.join(report.failing())}"
        )
    sigma = mor.pi.T @ cocycle.sigma @ mor.pi
    induced = DualCocycle(mor.source, sigma, ctx=ctx)
    back = verify_cocycle(induced, ctx)
    if not back.passed:
        raise TheoremViolation(
            f"induced cocycle fails checks: {', '.join(back.failing())}"
        )
    return induced


def w_functional(
    cocycle: DualCocycle, ctx: ScalarContext = DEFAULT_CONTEXT
) -> tuple[DualFunctional, DualFunctional]:
    """The functional a -> sigma(a_(1), antipode(a_(2))) and its inverse."""
    host = cocycle.host
    w = np.einsum(
        "ijk,pk,jp->i", host.comul, host.antipode, cocycle.sigma, optimize=True
    )
    w_fn = DualFunctional(host, w)
    value_at_unit = complex(np.dot(w, host.unit))
    if abs(value_at_unit - 1.0) > 1e3 * ctx.tolerance:
        raise TheoremViolation(f"w takes value {value_at_unit:.6g} at the unit")
    return w_fn, convolution_inverse(w_fn, ctx)


def v_functional(
    cocycle: DualCocycle, ctx: ScalarContext = DEFAULT_CONTEXT
) -> tuple[DualFunctional, DualFunctional]:
    """v = (w^-1 (x) w(antipode_inv .)) against the coproduct, and its inverse."""
    host = cocycle.host
    w_fn, w_inv = w_functional(cocycle, ctx)
    v = np.einsum(
        "ijk,j,pk,p->i",
        host.comul,
        w_inv.coeffs,
        host.antipode_inv,
        w_fn.coeffs,
        optimize=True,
    )
    v_fn = DualFunctional(host, v)
    value_at_unit = complex(np.dot(v, host.unit))
    if abs(value_at_unit - 1.0) > 1e3 * ctx.tolerance:
        raise TheoremViolation(f"v takes value {value_at_unit:.6g} at the unit")
    return v_fn, convolution_inverse(v_fn, ctx)
