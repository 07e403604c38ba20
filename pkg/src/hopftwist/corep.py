"""Unitary corepresentations on finite Hilbert spaces.

A corep is an N x N matrix of algebra elements u[i, j] (each an n-vector).
The module provides the dual representation pi_U, the adjoint action ad_V on
operators, spectral projections refined to E-maps, and decomposition into
irreducibles with adapted orthonormal bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import gram_schmidt_step, max_abs
from .core import (
    DEFAULT_CONTEXT,
    AxiomReport,
    DualFunctional,
    FiniteHopfStarAlgebra,
    ScalarContext,
    freeze,
)
from .errors import DecompositionError, DimensionMismatch, HostMismatch
from .peterweyl import PeterWeylData, gram_matrix, haar_state

Array = np.ndarray


@dataclass(frozen=True, eq=False)
class UnitaryCorep:
    host: FiniteHopfStarAlgebra
    hdim: int
    u: Array  # (N, N, n)

    def __post_init__(self):
        arr = freeze(self.u)
        if arr.shape != (self.hdim, self.hdim, self.host.dim):
            raise DimensionMismatch(
                f"corep tensor has shape {arr.shape}, expected "
                f"{(self.hdim, self.hdim, self.host.dim)}"
            )
        object.__setattr__(self, "u", arr)

    def entry_star(self) -> Array:
        """Entrywise star: (u*)[i, j] = u[i, j]*."""
        return np.einsum("cb,ijb->ijc", self.host.star, np.conj(self.u))

    def apply(self, vec: Array) -> Array:
        """Image of a vector under the corep, as an (N, n) tensor leg pair."""
        return np.einsum("ijc,j->ic", self.u, vec)


def trivial_corep(host: FiniteHopfStarAlgebra, hdim: int) -> UnitaryCorep:
    u = np.zeros((hdim, hdim, host.dim), dtype=np.complex128)
    for i in range(hdim):
        u[i, i] = host.unit
    return UnitaryCorep(host, hdim, u)


def direct_sum(a: UnitaryCorep, b: UnitaryCorep) -> UnitaryCorep:
    if a.host is not b.host:
        raise HostMismatch("direct sum requires a common host")
    n = a.host.dim
    u = np.zeros((a.hdim + b.hdim, a.hdim + b.hdim, n), dtype=np.complex128)
    u[: a.hdim, : a.hdim] = a.u
    u[a.hdim :, a.hdim :] = b.u
    return UnitaryCorep(a.host, a.hdim + b.hdim, u)


def regular_corep(
    host: FiniteHopfStarAlgebra, ctx: ScalarContext = DEFAULT_CONTEXT
) -> UnitaryCorep:
    """The coproduct viewed as a corep on the state space of the Haar state."""
    u = host.comul.transpose(1, 0, 2)
    gram = gram_matrix(host, haar_state(host, ctx))
    scale = np.trace(gram) / host.dim
    if max_abs(gram - scale * np.eye(host.dim)) > 1e3 * ctx.tolerance:
        # move to an orthonormal basis of the state space
        evals, evecs = np.linalg.eigh(gram)
        root = evecs @ np.diag(np.sqrt(evals)) @ evecs.conj().T
        root_inv = np.linalg.inv(root)
        u = np.einsum("ai,ijc,jb->abc", root, u, root_inv, optimize=True)
    return UnitaryCorep(host, host.dim, u)


def verify_corep(
    corep: UnitaryCorep, ctx: ScalarContext = DEFAULT_CONTEXT, subject: str = "corep"
) -> AxiomReport:
    a = corep.host
    u = corep.u
    n_h = corep.hdim
    checks: list[tuple[str, float]] = []

    law = np.einsum("ijc,cab->ijab", u, a.comul) - np.einsum(
        "ika,kjb->ijab", u, u, optimize=True
    )
    checks.append(("corep-law", max_abs(law)))

    counit_side = np.einsum("ijc,c->ij", u, a.counit) - np.eye(n_h)
    checks.append(("corep-counit", max_abs(counit_side)))

    ustar = corep.entry_star()
    target = np.einsum("ij,c->ijc", np.eye(n_h), a.unit)
    row = np.einsum("ika,jkb,abc->ijc", u, ustar, a.mul, optimize=True) - target
    col = np.einsum("kia,kjb,abc->ijc", ustar, u, a.mul, optimize=True) - target
    checks.append(("unitarity-right", max_abs(row)))
    checks.append(("unitarity-left", max_abs(col)))

    return AxiomReport(subject=subject, checks=tuple(checks), tolerance=ctx.tolerance)


def pi_u(corep: UnitaryCorep, omega: DualFunctional | Array) -> Array:
    """The dual acting on the carrier space: (id (x) omega)(U)."""
    coeffs = omega.coeffs if isinstance(omega, DualFunctional) else np.asarray(omega)
    return np.einsum("ijc,c->ij", corep.u, coeffs)


def ad_v(corep: UnitaryCorep, t: Array) -> Array:
    """Adjoint action on an operator: ad(T)[i, j] = sum_kl v_ik T_kl (v_jl)*.

    Products and stars are those of the corep's host, so the same function
    serves twisted hosts.
    """
    u = corep.u
    ustar = corep.entry_star()
    return np.einsum(
        "ika,kl,jlb,abc->ijc", u, np.asarray(t, dtype=np.complex128), ustar,
        corep.host.mul, optimize=True,
    )


def ad_v_tensor(corep: UnitaryCorep) -> Array:
    """All-matrix-units form of ad_v: AD[i, j, k, l] = ad(E_kl)[i, j]."""
    u = corep.u
    ustar = corep.entry_star()
    return np.einsum("ika,jlb,abc->ijklc", u, ustar, corep.host.mul, optimize=True)


def e_map_matrix(corep: UnitaryCorep, rho: Array, ad_tensor: Array | None = None) -> Array:
    """The map (id (x) rho) ad_v as an N^2 x N^2 matrix over vectorized operators."""
    ad = ad_v_tensor(corep) if ad_tensor is None else ad_tensor
    n_h = corep.hdim
    return np.einsum("ijklc,c->ijkl", ad, rho).reshape(n_h * n_h, n_h * n_h)


def spectral_projection(
    corep: UnitaryCorep, pw: PeterWeylData, block: int, ad_tensor: Array | None = None
) -> dict:
    """P and the refined E-maps of one block, as matrices over vec(T)."""
    if pw.host is not corep.host:
        raise HostMismatch("Peter-Weyl data belongs to a different host")
    b = pw.blocks[block]
    ad = ad_v_tensor(corep) if ad_tensor is None else ad_tensor
    d = b.dimension
    e_maps = np.zeros((d, d, corep.hdim ** 2, corep.hdim ** 2), dtype=np.complex128)
    for s in range(d):
        for m in range(d):
            e_maps[s, m] = e_map_matrix(corep, b.rho[s, m], ad)
    p_map = np.einsum("ssij->ij", e_maps)
    return {"block": block, "p": p_map, "e": e_maps}


def e_map_composition_table(
    corep: UnitaryCorep, pw: PeterWeylData, ctx: ScalarContext = DEFAULT_CONTEXT
) -> dict:
    """Measure the composition law of the E-maps instead of assuming one.

    Returns the observed rule as a residual against the candidate
    E[s,m] E[i,j] = delta(m, i) E[s, j] within a block, plus the cross-block
    annihilation residual.
    """
    ad = ad_v_tensor(corep)
    projections = [spectral_projection(corep, pw, k, ad) for k in range(len(pw.blocks))]
    same_block = 0.0
    cross_block = 0.0
    for bi, proj in enumerate(projections):
        d = pw.blocks[bi].dimension
        for s in range(d):
            for m in range(d):
                for i in range(d):
                    for j in range(d):
                        got = proj["e"][s, m] @ proj["e"][i, j]
                        want = proj["e"][s, j] if m == i else 0.0
                        same_block = max(same_block, max_abs(got - want))
        for bj, other in enumerate(projections):
            if bi == bj:
                continue
            for s in range(pw.blocks[bi].dimension):
                for m in range(pw.blocks[bi].dimension):
                    for i in range(pw.blocks[bj].dimension):
                        for j in range(pw.blocks[bj].dimension):
                            got = proj["e"][s, m] @ other["e"][i, j]
                            cross_block = max(cross_block, max_abs(got))
    return {
        "rule": "E[s,m] E[i,j] = delta(m,i) E[s,j] within a block, 0 across blocks",
        "same_block_residual": same_block,
        "cross_block_residual": cross_block,
        "passed": bool(same_block <= ctx.tolerance and cross_block <= ctx.tolerance),
    }


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    corep: UnitaryCorep
    entries: tuple[dict, ...]  # keys: block, multiplicity, basis (m, d, N)
    residual: float

    def multiplicity(self, block: int) -> int:
        for entry in self.entries:
            if entry["block"] == block:
                return entry["multiplicity"]
        return 0


def decompose_corep(
    corep: UnitaryCorep, pw: PeterWeylData, ctx: ScalarContext = DEFAULT_CONTEXT
) -> SpectralDecomposition:
    """Adapted orthonormal bases with U(e[i, j]) = sum_k e[i, k] (x) q[k, j]."""
    if pw.host is not corep.host:
        raise HostMismatch("Peter-Weyl data belongs to a different host")
    n_h = corep.hdim
    entries = []
    total = 0
    worst = 0.0
    for bi, b in enumerate(pw.blocks):
        d = b.dimension
        slot = pi_u(corep, DualFunctional(corep.host, b.rho[0, 0]))
        collected: list[Array] = []
        for col in range(n_h):
            vec = slot[:, col]
            nxt = gram_schmidt_step(vec, collected, 1e3 * ctx.tolerance)
            if nxt is not None:
                collected.append(nxt)
        mult = len(collected)
        if mult == 0:
            continue
        basis = np.zeros((mult, d, n_h), dtype=np.complex128)
        for i, f in enumerate(collected):
            for j in range(d):
                shift = pi_u(corep, DualFunctional(corep.host, b.rho[j, 0]))
                basis[i, j] = shift @ f
        # adapted-law residual: U e[i, j] = sum_k e[i, k] (x) q[k, j]
        for i in range(mult):
            for j in range(d):
                got = corep.apply(basis[i, j])
                want = np.einsum("kx,kc->xc", basis[i], b.q[:, j])
                worst = max(worst, max_abs(got - want))
        # orthonormality across the block
        flat = basis.reshape(mult * d, n_h)
        worst = max(worst, max_abs(flat.conj() @ flat.T - np.eye(mult * d)))
        total += mult * d
        entries.append({"block": bi, "multiplicity": mult, "basis": basis})
    if total != n_h:
        raise DecompositionError(
            f"adapted bases span {total} of {n_h} dimensions"
        )
    # cross-block orthogonality
    flats = [e["basis"].reshape(-1, n_h) for e in entries]
    for a_idx in range(len(flats)):
        for b_idx in range(a_idx + 1, len(flats)):
            worst = max(worst, max_abs(flats[a_idx].conj() @ flats[b_idx].T))
    if not ctx.close(worst):
        raise DecompositionError(f"adapted basis residual {worst:.3g}")
    return SpectralDecomposition(corep=corep, entries=tuple(entries), residual=worst)
