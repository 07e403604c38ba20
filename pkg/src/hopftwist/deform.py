"""Finite spectral triples and their cocycle deformations.

A triple is (generators, H, D) with H = C^N and D self-adjoint.  A corep V
of a host algebra on H carries three constructions:

  * the R-twisted volume tau_R(x) = Tr(Rx) and its preservation check
    under the adjoint coaction of V,
  * the deformed representation rho_sigma(T) = sum_i T_(0)^i Pi_V(sigma_i)
    with sigma_i = sigma^{-1}(T_(1)^i, .), which carries the original
    operator algebra to the deformed one,
  * the twisted volume operator R^sigma = Pi_V(v)* R Pi_V(v).

The deformed product and involution on operators are expressed through the
adjoint coaction, so images of rho_sigma multiply and star correctly when
the source carries the twisted structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import gram_schmidt_step, max_abs
from .cocycle import DualCocycle, w_functional
from .core import (
    DEFAULT_CONTEXT,
    DualFunctional,
    ScalarContext,
    freeze,
)
from .corep import (
    UnitaryCorep,
    SpectralDecomposition,
    ad_v,
    ad_v_tensor,
    pi_u,
    spectral_projection,
    verify_corep,
)
from .errors import (
    DimensionMismatch,
    HostMismatch,
    InputError,
    NotEquivariant,
    NotInCategory,
    TheoremViolation,
)
from .peterweyl import PeterWeylData, decompose, haar_state
from .twist import TwistResult

Array = np.ndarray

_STRUCTURE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralTriple:
    """Operator-algebra generators with a self-adjoint Dirac matrix."""

    hdim: int
    generators: tuple[Array, ...]
    dirac: Array
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(freeze(g) for g in self.generators)
        dirac = freeze(self.dirac)
        shape = (self.hdim, self.hdim)
        if dirac.shape != shape:
            raise DimensionMismatch(
                f"dirac matrix has shape {dirac.shape}, expected {shape}"
            )
        for g in gens:
            if g.shape != shape:
                raise DimensionMismatch(
                    f"generator has shape {g.shape}, expected {shape}"
                )
        scale = 1.0 + max_abs(dirac)
        if max_abs(dirac - dirac.conj().T) > _STRUCTURE_TOL * scale:
            raise InputError("dirac matrix must be self-adjoint")
        labels = tuple(self.labels) or tuple(f"a{i}" for i in range(len(gens)))
        if len(labels) != len(gens):
            raise InputError(
                f"{len(labels)} labels supplied for {len(gens)} generators"
            )
        if gens and not _adjoint_closed(gens):
            raise InputError("generator list must span a self-adjoint set")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "dirac", dirac)
        object.__setattr__(self, "labels", labels)


def _adjoint_closed(gens: tuple[Array, ...]) -> bool:
    stack = np.stack([g.reshape(-1) for g in gens], axis=1)
    for g in gens:
        target = g.conj().T.reshape(-1)
        coeffs, *_ = np.linalg.lstsq(stack, target, rcond=None)
        if max_abs(stack @ coeffs - target) > _STRUCTURE_TOL * (1.0 + max_abs(g)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class RTwistedVolume:
    """Positive invertible matrix R defining the functional x -> Tr(Rx)."""

    r: Array

    def __post_init__(self):
        r = freeze(self.r)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise DimensionMismatch(f"volume matrix has shape {r.shape}")
        scale = 1.0 + max_abs(r)
        if max_abs(r - r.conj().T) > _STRUCTURE_TOL * scale:
            raise InputError("volume matrix must be self-adjoint")
        evals = np.linalg.eigvalsh(0.5 * (r + r.conj().T))
        if evals[0] <= _STRUCTURE_TOL * max(1.0, evals[-1]):
            raise InputError(
                f"volume matrix must be positive invertible; lowest eigenvalue {evals[0]:.3g}"
            )
        object.__setattr__(self, "r", r)

    @property
    def hdim(self) -> int:
        return self.r.shape[0]

    def tau(self, x: Array) -> complex:
        return complex(np.trace(self.r @ np.asarray(x, dtype=np.complex128)))


def tau(rv: RTwistedVolume, x: Array) -> complex:
    """The volume functional Tr(R x)."""
    return rv.tau(x)


def equivariance_residual(corep: UnitaryCorep, mat: Array) -> float:
    """How far mat (x) 1 is from commuting with the corep matrix."""
    m = np.asarray(mat, dtype=np.complex128)
    left = np.einsum("ik,kjc->ijc", m, corep.u)
    right = np.einsum("ikc,kj->ijc", corep.u, m)
    return max_abs(left - right)


def check_volume_preservation(
    corep: UnitaryCorep, rv: RTwistedVolume, ctx: ScalarContext = DEFAULT_CONTEXT
) -> dict:
    """Exhaustive test of (tau_R (x) id) ad_V(x) = tau_R(x) 1 on matrix units."""
    if rv.hdim != corep.hdim:
        raise DimensionMismatch(
            f"volume matrix is {rv.hdim}x{rv.hdim}, corep acts on dimension {corep.hdim}"
        )
    ad = ad_v_tensor(corep)
    contracted = np.einsum("ji,ijklc->klc", rv.r, ad, optimize=True)
    expected = np.einsum("lk,c->klc", rv.r, corep.host.unit)
    residual = max_abs(contracted - expected)
    return {"residual": float(residual), "passed": bool(residual <= ctx.tolerance)}


def extract_block_form(
    corep: UnitaryCorep,
    rv: RTwistedVolume,
    sd: SpectralDecomposition,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    pw: PeterWeylData | None = None,
) -> dict:
    """Multiplicity-space matrices T of a volume-preserving R, block by block.

    In the adapted basis a preserving R acts as F (x) T on each isotypic
    block; T is recovered by averaging the diagonal of the irrep leg.  When
    no Peter-Weyl data is supplied the F matrices are taken to be identity
    (exact for every tracial-Haar host in the built-in collection).
    """
    if sd.corep is not corep:
        raise HostMismatch("spectral decomposition belongs to a different corep")
    commutation = equivariance_residual(corep, rv.r)
    if commutation > ctx.tolerance:
        raise NotEquivariant(
            f"volume matrix does not commute with the corep (residual {commutation:.3g})"
        )
    preservation = check_volume_preservation(corep, rv, ctx)
    blocks = []
    worst = 0.0
    for entry in sd.entries:
        basis = entry["basis"]
        mult, d, _ = basis.shape
        if pw is not None:
            f_mat = pw.blocks[entry["block"]].f_matrix
            m_val = pw.blocks[entry["block"]].m_value
        else:
            f_mat = np.eye(d)
            m_val = float(d)
        rblk = np.einsum("sax,xy,tby->astb", basis.conj(), rv.r, basis, optimize=True)
        t_mat = np.einsum("asta->st", rblk) / m_val
        blocks.append(
            {"block": entry["block"], "multiplicity": mult, "t": t_mat}
        )
        worst = max(worst, max_abs(rblk - np.einsum("ab,st->astb", f_mat, t_mat)))
    flats = [entry["basis"].reshape(-1, corep.hdim) for entry in sd.entries]
    for i in range(len(flats)):
        for j in range(len(flats)):
            if i == j:
                continue
            worst = max(worst, max_abs(flats[i].conj() @ rv.r @ flats[j].T))
    reconstructed = bool(worst <= ctx.tolerance)
    if preservation["passed"] and not reconstructed:
        raise TheoremViolation(
            f"volume is preserved but R is not of block form (residual {worst:.3g})"
        )
    return {
        "preserved": preservation["passed"],
        "preservation_residual": preservation["residual"],
        "equivariance": float(commutation),
        "blocks": tuple(blocks),
        "reconstruction_residual": float(worst),
        "passed": bool(preservation["passed"] and reconstructed),
    }


def rho_sigma(corep: UnitaryCorep, sigma: DualCocycle, t: Array) -> Array:
    """Deformed image of an operator: sum of T_(0) Pi_V(sigma^{-1}(T_(1), .))."""
    if sigma.host is not corep.host:
        raise HostMismatch("cocycle and corep live on different hosts")
    mat = np.asarray(t, dtype=np.complex128)
    return np.einsum(
        "ikc,kjq,cq->ij", ad_v(corep, mat), corep.u, sigma.sigma_inv, optimize=True
    )


def twisted_operator_product(
    corep: UnitaryCorep, sigma: DualCocycle, a: Array, b: Array
) -> Array:
    """Deformed product a_(0) b_(0) sigma^{-1}(a_(1), b_(1)) on operators."""
    if sigma.host is not corep.host:
        raise HostMismatch("cocycle and corep live on different hosts")
    return np.einsum(
        "ijc,jkd,cd->ik",
        ad_v(corep, np.asarray(a, dtype=np.complex128)),
        ad_v(corep, np.asarray(b, dtype=np.complex128)),
        sigma.sigma_inv,
        optimize=True,
    )


def twisted_operator_star(
    corep: UnitaryCorep,
    sigma: DualCocycle,
    a: Array,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    w: DualFunctional | None = None,
) -> Array:
    """Deformed involution on operators: contract ad(a+) against w o antipode^{-1}.

    The functional leg makes rho_sigma star-preserving: the deformed image of
    the twisted adjoint is the operator adjoint of the deformed image.
    """
    if sigma.host is not corep.host:
        raise HostMismatch("cocycle and corep live on different hosts")
    if w is None:
        w, _ = w_functional(sigma, ctx)
    host = corep.host
    leg = w.coeffs @ host.antipode_inv
    adj = np.asarray(a, dtype=np.complex128).conj().T
    return np.einsum("ijc,c->ij", ad_v(corep, adj), leg, optimize=True)


def _operator_span_basis(
    mats: list[Array], hdim: int, tol: float
) -> list[Array]:
    """Orthonormal basis (Frobenius) of the *-algebra generated by mats."""
    basis: list[Array] = []

    def absorb(m: Array) -> bool:
        nxt = gram_schmidt_step(m.reshape(-1), basis, tol)
        if nxt is None:
            return False
        basis.append(nxt)
        return True

    absorb(np.eye(hdim, dtype=np.complex128))
    for m in mats:
        absorb(np.asarray(m, dtype=np.complex128))
        absorb(np.asarray(m, dtype=np.complex128).conj().T)
    changed = True
    while changed:
        changed = False
        current = [b.reshape(hdim, hdim) for b in basis]
        for x in current:
            if absorb(x.conj().T):
                changed = True
        for x in current:
            for y in current:
                if absorb(x @ y):
                    changed = True
    return [b.reshape(hdim, hdim) for b in basis]


def _block_refined_basis(
    corep: UnitaryCorep,
    pw: PeterWeylData,
    span: list[Array],
    ctx: ScalarContext,
) -> tuple[list[Array], list[str]]:
    """Split a spanning family along the spectral projections of the corep."""
    ad = ad_v_tensor(corep)
    n_h = corep.hdim
    refined: list[Array] = []
    labels: list[str] = []
    for k in range(len(pw.blocks)):
        p_map = spectral_projection(corep, pw, k, ad)["p"]
        collected: list[Array] = []
        for m in span:
            comp = p_map @ m.reshape(-1)
            nxt = gram_schmidt_step(comp, collected, 1e3 * ctx.tolerance)
            if nxt is not None:
                collected.append(nxt)
        for i, vec in enumerate(collected):
            refined.append(vec.reshape(n_h, n_h))
            labels.append(f"p{k}.{i}")
    return refined, labels


@dataclass(frozen=True, eq=False)
class DeformedAlgebra:
    """Images of a spectral basis under rho_sigma, with the closure flag."""

    images: tuple[Array, ...]
    labels: tuple[str, ...]
    generated: bool

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(freeze(m) for m in self.images))
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True, eq=False)
class DeformationResult:
    algebra: DeformedAlgebra
    dirac: Array
    transcript: dict = field(repr=False)


def _commutator_identity_residual(
    corep: UnitaryCorep, sigma: DualCocycle, dirac: Array, mat: Array, image: Array
) -> float:
    """Residual of [D, rho(a)] against the leg-wise commutator expansion."""
    slices = ad_v(corep, mat).transpose(2, 0, 1)
    comm = dirac @ slices - slices @ dirac
    legs = np.einsum("kjq,cq->ckj", corep.u, sigma.sigma_inv, optimize=True)
    expanded = np.einsum("cik,ckj->ij", comm, legs, optimize=True)
    return max_abs((dirac @ image - image @ dirac) - expanded)


def deform_triple(
    st: SpectralTriple,
    corep: UnitaryCorep,
    sigma: DualCocycle,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    pw: PeterWeylData | None = None,
) -> DeformationResult:
    """Deform the operator algebra of a triple; the Dirac matrix is untouched.

    The corep must commute with the Dirac matrix.  The generator span is
    closed into a *-algebra, refined along spectral projections, and each
    refined basis element is carried through rho_sigma.  The transcript
    records the block content of every generator, the Dirac commutator
    identity residual, and the dimension of the generated image algebra.
    """
    if sigma.host is not corep.host:
        raise HostMismatch("cocycle and corep live on different hosts")
    if st.hdim != corep.hdim:
        raise DimensionMismatch(
            f"triple acts on dimension {st.hdim}, corep on {corep.hdim}"
        )
    dirac_residual = equivariance_residual(corep, st.dirac)
    if dirac_residual > ctx.tolerance:
        raise NotInCategory(
            f"dirac matrix does not commute with the corep (residual {dirac_residual:.3g})"
        )
    host = corep.host
    if pw is None:
        pw = decompose(host, haar_state(host, ctx), ctx)
    span = _operator_span_basis(list(st.generators), st.hdim, 1e3 * ctx.tolerance)
    refined, labels = _block_refined_basis(corep, pw, span, ctx)

    ad = ad_v_tensor(corep)
    generator_blocks = []
    for name, gen in zip(st.labels, st.generators):
        weights = []
        for k in range(len(pw.blocks)):
            p_map = spectral_projection(corep, pw, k, ad)["p"]
            weight = float(np.linalg.norm(p_map @ gen.reshape(-1)))
            if weight > 1e3 * ctx.tolerance:
                weights.append((k, weight))
        generator_blocks.append({"generator": name, "blocks": tuple(weights)})

    images = [rho_sigma(corep, sigma, m) for m in refined]
    commutator = 0.0
    for mat, image in zip(refined, images):
        commutator = max(
            commutator,
            _commutator_identity_residual(corep, sigma, st.dirac, mat, image),
        )
    closure = _operator_span_basis(images, st.hdim, 1e3 * ctx.tolerance)
    transcript = {
        "dirac_equivariance": float(dirac_residual),
        "commutator_identity": float(commutator),
        "spectral_dimension": len(refined),
        "generated_dimension": len(closure),
        "generator_blocks": tuple(generator_blocks),
    }
    algebra = DeformedAlgebra(
        images=tuple(images), labels=tuple(labels), generated=True
    )
    return DeformationResult(algebra=algebra, dirac=st.dirac, transcript=transcript)


def r_sigma(
    rv: RTwistedVolume,
    corep: UnitaryCorep,
    v: DualFunctional,
    ctx: ScalarContext = DEFAULT_CONTEXT,
) -> RTwistedVolume:
    """Twisted volume matrix Pi_V(v)* R Pi_V(v); must stay positive invertible."""
    if v.host is not corep.host:
        raise HostMismatch("functional and corep live on different hosts")
    piv = pi_u(corep, v)
    cand = piv.conj().T @ rv.r @ piv
    drift = max_abs(cand - cand.conj().T)
    herm = 0.5 * (cand + cand.conj().T)
    evals = np.linalg.eigvalsh(herm)
    if drift > 1e3 * ctx.tolerance or evals[0] <= 1e3 * ctx.tolerance:
        raise TheoremViolation(
            "twisted volume matrix lost positivity "
            f"(self-adjointness drift {drift:.3g}, lowest eigenvalue {evals[0]:.3g}); "
            "the v-functional convention is inconsistent"
        )
    return RTwistedVolume(herm)


def intertwine_check(
    corep: UnitaryCorep,
    tw: TwistResult,
    t: Array,
    ctx: ScalarContext = DEFAULT_CONTEXT,
) -> float:
    """Residual of ad over the twisted corep against rho_sigma on coaction legs."""
    if tw.original is not corep.host:
        raise HostMismatch("twist transcript belongs to a different host")
    corep_sigma = UnitaryCorep(tw.twisted, corep.hdim, corep.u)
    image = rho_sigma(corep, tw.cocycle, t)
    lhs = ad_v(corep_sigma, image)
    legs = ad_v(corep, np.asarray(t, dtype=np.complex128))
    rhs = np.empty_like(lhs)
    for c in range(corep.host.dim):
        rhs[:, :, c] = rho_sigma(corep, tw.cocycle, legs[:, :, c])
    return max_abs(lhs - rhs)


@dataclass(frozen=True, eq=False)
class CategoryReport:
    """Three named verdicts behind membership of (Q, V) with (D, R)."""

    subject: str
    corep_residual: float
    dirac_residual: float
    volume_residual: float
    tolerance: float
    twisted: "CategoryReport | None" = None

    @property
    def corep_valid(self) -> bool:
        return self.corep_residual <= self.tolerance

    @property
    def dirac_commutes(self) -> bool:
        return self.dirac_residual <= self.tolerance

    @property
    def volume_preserved(self) -> bool:
        return self.volume_residual <= self.tolerance

    @property
    def member(self) -> bool:
        return self.corep_valid and self.dirac_commutes and self.volume_preserved

    def verdicts(self) -> tuple[tuple[str, float, bool], ...]:
        return (
            ("corep-valid", self.corep_residual, self.corep_valid),
            ("dirac-commutes", self.dirac_residual, self.dirac_commutes),
            ("volume-preserved", self.volume_residual, self.volume_preserved),
        )


def check_membership(
    corep: UnitaryCorep,
    st: SpectralTriple,
    rv: RTwistedVolume,
    ctx: ScalarContext = DEFAULT_CONTEXT,
    tw: TwistResult | None = None,
    subject: str = "datum",
) -> CategoryReport:
    """Verdicts for corep validity, Dirac commutation, and volume preservation.

    With a twist transcript the deformed datum (twisted host, same corep
    matrix, same Dirac, twisted volume) is re-checked and attached.
    """
    report = verify_corep(corep, ctx)
    corep_residual = max(value for _, value in report.checks)
    dirac_residual = equivariance_residual(corep, st.dirac)
    volume_residual = check_volume_preservation(corep, rv, ctx)["residual"]
    twisted_report = None
    if tw is not None:
        if tw.original is not corep.host:
            raise HostMismatch("twist transcript belongs to a different host")
        corep_sigma = UnitaryCorep(tw.twisted, corep.hdim, corep.u)
        rv_sigma = r_sigma(rv, corep, tw.v, ctx)
        twisted_report = check_membership(
            corep_sigma, st, rv_sigma, ctx, tw=None, subject=f"{subject}^sigma"
        )
    return CategoryReport(
        subject=subject,
        corep_residual=float(corep_residual),
        dirac_residual=float(dirac_residual),
        volume_residual=float(volume_residual),
        tolerance=ctx.tolerance,
        twisted=twisted_report,
    )
