"""The built-in verification suite.

Every finitely checkable claim the library is built around is exercised on
the catalog and reported as one named check with a measured residual and a
threshold.  Check ids are stable and ordered; a rerun with the same seed
produces byte-identical canonical report bytes.

One check is waived: on the eight-dimensional dihedral function algebra,
every dual 2-cocycle twist stays commutative, so the requested
noncommutativity witness cannot exist.  The check runs, reports the zero
witness honestly, and is marked expected-to-fail rather than silently
passing.
"""

from __future__ import annotations

import time

import numpy as np

from . import catalog
from .cocycle import DualCocycle, verify_cocycle
from .core import (
    DEFAULT_CONTEXT,
    DualFunctional,
    ScalarContext,
    convolve,
    dual_star,
    max_abs,
    verify_hopf_axioms,
)
from .corep import UnitaryCorep, decompose_corep, pi_u, regular_corep, verify_corep
from .deform import (
    RTwistedVolume,
    _operator_span_basis,
    check_volume_preservation,
    deform_triple,
    extract_block_form,
    intertwine_check,
    r_sigma,
    rho_sigma,
    twisted_operator_product,
    twisted_operator_star,
)
from .peterweyl import PeterWeylData, decompose, haar_state
from .report import CheckRecord, VerificationReport
from .serialize import canonical_dumps
from .twist import f_matrix_relation, haar_invariance, roundtrip, twist_algebra, twist_corep

Array = np.ndarray

PAPER_SUITE = "paper"

_STRICT = 1e-9
_BLOCK_TOL = 1e-8
_EXACT = 1e-12
_BOOL = 0.5
_RANDOM_DRAWS = 50


class _Workspace:
    """Shared, lazily built objects reused across checks of one run."""

    def __init__(self, ctx: ScalarContext):
        self.ctx = ctx
        self._pw: dict[int, PeterWeylData] = {}
        self._twists: dict[str, object] = {}

    def peter_weyl(self, algebra) -> PeterWeylData:
        key = id(algebra)
        if key not in self._pw:
            self._pw[key] = decompose(algebra, haar_state(algebra, self.ctx), self.ctx)
        return self._pw[key]

    def twist(self, cocycle_name: str):
        if cocycle_name not in self._twists:
            host = catalog.algebra(catalog.cocycle_host_name(cocycle_name))
            sigma = catalog.cocycle(cocycle_name, self.ctx)
            self._twists[cocycle_name] = twist_algebra(host, sigma, self.ctx)
        return self._twists[cocycle_name]

    def scene_twist(self, scene: dict):
        for cname, sname in catalog._TRIPLE_COCYCLES.items():
            if cname == scene["name"] and sname is not None:
                return self.twist(sname)
        return twist_algebra(scene["host"], scene["cocycle"], self.ctx)


def _bool_residual(ok: bool) -> float:
    return 0.0 if ok else 1.0


def _schur_residual(pw: PeterWeylData) -> float:
    """Orthogonality of matrix coefficients in both orders, against the
    identity-F, M = d pattern, across and inside blocks."""
    host, h = pw.host, pw.haar
    worst = 0.0
    star = host.star
    for ai, ba in enumerate(pw.blocks):
        worst = max(worst, max_abs(ba.f_matrix - np.eye(ba.dimension)))
        worst = max(worst, abs(ba.m_value - ba.dimension))
        for bi, bb in enumerate(pw.blocks):
            qa, qb = ba.q, bb.q
            qb_star = np.einsum("xy,kly->klx", star, np.conj(qb))
            qa_star = np.einsum("xy,ijy->ijx", star, np.conj(qa))
            vals1 = np.einsum(
                "ijx,klz,xzt,t->ijkl", qa, qb_star, host.mul, h.coeffs, optimize=True
            )
            vals2 = np.einsum(
                "ijx,klz,xzt,t->ijkl", qa_star, qb, host.mul, h.coeffs, optimize=True
            )
            if ai == bi:
                d = ba.dimension
                eye = np.eye(d)
                want = np.einsum("ik,jl->ijkl", eye, eye) / ba.m_value
            else:
                want = 0.0
            worst = max(worst, max_abs(vals1 - want), max_abs(vals2 - want))
    return worst


def _rho_family(pw: PeterWeylData) -> list[DualFunctional]:
    out = []
    for bi, b in enumerate(pw.blocks):
        for p in range(b.dimension):
            for r in range(b.dimension):
                out.append(pw.rho_functional(bi, p, r))
    return out


def _star_hom_residual(corep: UnitaryCorep, pw: PeterWeylData) -> float:
    rhos = _rho_family(pw)
    images = [pi_u(corep, f) for f in rhos]
    worst = 0.0
    for fa, ma in zip(rhos, images):
        worst = max(worst, max_abs(pi_u(corep, dual_star(fa)) - ma.conj().T))
        for fb, mb in zip(rhos, images):
            worst = max(worst, max_abs(pi_u(corep, convolve(fa, fb)) - ma @ mb))
    return worst


def _rank_one_residual(corep: UnitaryCorep, pw: PeterWeylData, ctx: ScalarContext) -> float:
    sd = decompose_corep(corep, pw, ctx)
    worst = float(sd.residual)
    for entry in sd.entries:
        bi = entry["block"]
        basis = entry["basis"]
        d = pw.blocks[bi].dimension
        for p in range(d):
            for r in range(d):
                image = pi_u(corep, pw.rho_functional(bi, p, r))
                want = np.einsum("ix,iy->xy", basis[:, p], np.conj(basis[:, r]))
                worst = max(worst, max_abs(image - want))
    return worst


def _equivariant_volume(
    sd, rng: np.random.Generator
) -> tuple[Array, dict[int, Array]]:
    """A random positive equivariant matrix assembled blockwise, plus the
    multiplicity matrices it was built from."""
    hdim = sd.entries[0]["basis"].shape[2]
    r = np.zeros((hdim, hdim), dtype=np.complex128)
    chosen: dict[int, Array] = {}
    for entry in sd.entries:
        basis = entry["basis"]
        m = entry["multiplicity"]
        a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        t = a @ a.conj().T + 0.25 * np.eye(m)
        chosen[entry["block"]] = t
        r += np.einsum("st,sax,tay->xy", t, basis, np.conj(basis), optimize=True)
    return 0.5 * (r + r.conj().T), chosen


def _form_r_residual(scene: dict, ws: _Workspace) -> tuple[float, str]:
    ctx = ws.ctx
    corep = scene["corep"]
    pw = ws.peter_weyl(scene["host"])
    sd = decompose_corep(corep, pw, ctx)
    rng = ctx.rng()
    worst = 0.0
    agree = 0
    for _ in range(_RANDOM_DRAWS):
        r, chosen = _equivariant_volume(sd, rng)
        rv = RTwistedVolume(r)
        preserved = check_volume_preservation(corep, rv, ctx)["passed"]
        form = extract_block_form(corep, rv, sd, ctx, pw=pw)
        if preserved == bool(form["passed"]):
            agree += 1
        worst = max(worst, float(form["reconstruction_residual"]))
        for blk in form["blocks"]:
            worst = max(worst, max_abs(blk["t"] - chosen[blk["block"]]))
    detail = f"verdicts agree in {agree}/{_RANDOM_DRAWS} draws"
    if agree != _RANDOM_DRAWS:
        worst = max(worst, 1.0)
    return worst, detail


def _spectral_basis(scene: dict, ctx: ScalarContext) -> list[Array]:
    st = scene["triple"]
    seeds = [np.eye(st.hdim, dtype=np.complex128)] + [np.array(g) for g in st.generators]
    return _operator_span_basis(seeds, st.hdim, 1e3 * ctx.tolerance)


def _hom_star_residual(scene: dict, ws: _Workspace) -> float:
    ctx = ws.ctx
    corep, sigma = scene["corep"], scene["cocycle"]
    basis = _spectral_basis(scene, ctx)
    images = [rho_sigma(corep, sigma, t) for t in basis]
    worst = 0.0
    for a, ia in zip(basis, images):
        starred = twisted_operator_star(corep, sigma, a, ctx)
        worst = max(worst, max_abs(rho_sigma(corep, sigma, starred) - ia.conj().T))
        for b, ib in zip(basis, images):
            prod = twisted_operator_product(corep, sigma, a, b)
            worst = max(worst, max_abs(rho_sigma(corep, sigma, prod) - ia @ ib))
    return worst


def _noncommutativity_witness(algebra) -> float:
    best = 0.0
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            comm = algebra.mul[i, j] - algebra.mul[j, i]
            best = max(best, float(np.linalg.norm(comm)))
    return best


def run_paper_suite(ctx: ScalarContext = DEFAULT_CONTEXT) -> VerificationReport:
    start = time.perf_counter()
    ws = _Workspace(ctx)
    records: list[CheckRecord] = []

    def add(check_id, anchor, residual, threshold=_STRICT, waived=False, detail=""):
        records.append(
            CheckRecord(
                check_id=check_id,
                anchor=anchor,
                residual=float(residual),
                threshold=float(threshold),
                passed=bool(residual <= threshold),
                waived=waived,
                detail=detail,
            )
        )

    # 1: every catalog algebra satisfies all axioms
    for name in catalog.host_names():
        rep = verify_hopf_axioms(catalog.algebra(name), ctx, subject=name)
        add(f"01.axioms.{name}", "all Hopf star-algebra axioms hold", rep.max_residual)

    # 2: Haar state and block decomposition
    s3_pw = ws.peter_weyl(catalog.algebra("c-s3"))
    dims = tuple(sorted(s3_pw.dimensions))
    ok = dims == (1, 1, 2) and sum(d * d for d in dims) == 6
    add(
        "02.peter-weyl.c-s3.blocks",
        "block sizes {1,1,2} with squares summing to 6",
        _bool_residual(ok),
        _BOOL,
        detail=f"found dimensions {dims}",
    )
    for name in catalog.host_names():
        pw = ws.peter_weyl(catalog.algebra(name))
        add(
            f"02.peter-weyl.{name}.orthogonality",
            "Schur orthogonality with identity F and M = d",
            _schur_residual(pw),
        )

    # 3: the dual acts as a star-homomorphism with rank-one images
    for name in ("c-s3", "g-d4"):
        algebra = catalog.algebra(name)
        pw = ws.peter_weyl(algebra)
        corep = regular_corep(algebra, ctx)
        add(
            f"03.mult-rep.{name}.star-hom",
            "dual matrix units represent as a star-homomorphism",
            _star_hom_residual(corep, pw),
        )
        add(
            f"03.mult-rep.{name}.rank-one",
            "dual matrix units act as rank-one maps on adapted bases",
            _rank_one_residual(corep, pw, ctx),
        )

    # 4: cocycle identity, normalization, unitarity on all catalog cocycles
    for _, cname in catalog.cocycle_pairs():
        sigma = catalog.cocycle(cname, ctx)
        rep = verify_cocycle(sigma, ctx, subject=cname)
        add(
            f"04.cocycle.{cname}",
            "dual 2-cocycle identity, normalization, unitarity",
            rep.max_residual,
        )

    # 5: the flagship twist
    tw_d4 = ws.twist("klein-induced")
    add(
        "05.twist.c-d4.axioms",
        "twisted algebra passes all Hopf star-algebra axioms",
        tw_d4.transcript.max_residual,
    )
    coalgebra_ok = (
        np.array_equal(tw_d4.twisted.comul, tw_d4.original.comul)
        and np.array_equal(tw_d4.twisted.unit, tw_d4.original.unit)
        and np.array_equal(tw_d4.twisted.counit, tw_d4.original.counit)
    )
    add(
        "05.twist.c-d4.coalgebra",
        "coproduct, unit, counit unchanged bitwise",
        _bool_residual(coalgebra_ok),
        _BOOL,
    )
    witness = _noncommutativity_witness(tw_d4.twisted)
    records.append(
        CheckRecord(
            check_id="05.twist.c-d4.noncommutativity",
            anchor="some basis pair has commutator norm above 0.5",
            residual=witness,
            threshold=_BOOL,
            passed=bool(witness > _BOOL),
            waived=True,
            detail=(
                "largest commutator norm over all basis pairs is "
                f"{witness:.3e}; every dual 2-cocycle twist of this "
                "commutative eight-dimensional algebra is again commutative, "
                "so no witness can exist and the failure is expected"
            ),
        )
    )

    # 6: twisting back with the inverse cocycle
    for hname, cname in catalog.cocycle_pairs():
        rt = roundtrip(catalog.algebra(hname), catalog.cocycle(cname, ctx), ctx)
        residual = max(rt["residual"], rt["inverse_cocycle_residual"])
        if not rt["coalgebra_identical"]:
            residual = max(residual, 1.0)
        add(
            f"06.roundtrip.{cname}",
            "twist by sigma then by its inverse restores every tensor",
            residual,
        )

    # 7: Haar invariance and the block-form change of F
    for hname, cname in catalog.cocycle_pairs():
        tw = ws.twist(cname)
        drift, _ = haar_invariance(tw, ctx)
        add(
            f"07.haar.{cname}",
            "Haar functional has the same coefficients after twisting",
            drift,
        )
        rows = f_matrix_relation(tw, ws.peter_weyl(tw.original), ws.peter_weyl(tw.twisted), ctx)
        residual = max(row["residual"] for row in rows)
        if not all(row["c"] > 0 for row in rows):
            residual = max(residual, 1.0)
        add(
            f"07.f-matrix.{cname}",
            "twisted F is a positive multiple of a-star-F-a per block",
            residual,
            _BLOCK_TOL,
        )

    # 8: coreps reinterpreted over the twisted algebra
    for hname, cname in catalog.cocycle_pairs():
        tw = ws.twist(cname)
        corep = regular_corep(catalog.algebra(hname), ctx)
        _, rep = twist_corep(corep, tw, ctx)
        add(
            f"08.twisted-corep.{cname}",
            "twisted unitarity and antipode-star flip of every entry",
            rep.max_residual,
        )

    # 9: equivariant volume matrices and their block form
    for sname in ("z2z2-torus", "d4-regular"):
        scene = catalog.triple_scene(sname, ctx)
        residual, detail = _form_r_residual(scene, ws)
        add(
            f"09.form-r.{sname}",
            "preservation verdict matches block-form recovery on random draws",
            residual,
            detail=detail,
        )

    # 10: the deformed representation on the four-point torus
    torus = catalog.triple_scene("z2z2-torus", ctx)
    t_op, s_op = torus["triple"].generators[0], torus["triple"].generators[1]
    add(
        "10.deform.z2z2-torus.commuting-pair",
        "chosen translation pair commutes before deformation",
        max_abs(t_op @ s_op - s_op @ t_op),
        _EXACT,
    )
    rho_t = rho_sigma(torus["corep"], torus["cocycle"], t_op)
    rho_s = rho_sigma(torus["corep"], torus["cocycle"], s_op)
    add(
        "10.deform.z2z2-torus.anticommuting-pair",
        "deformed translation pair anticommutes",
        max_abs(rho_t @ rho_s + rho_s @ rho_t),
    )
    add(
        "10.deform.z2z2-torus.hom-star",
        "deformation is multiplicative and star-preserving on the spectral basis",
        _hom_star_residual(torus, ws),
    )
    add(
        "10.deform.d4-regular.hom-star",
        "deformation is multiplicative and star-preserving on the spectral basis",
        _hom_star_residual(catalog.triple_scene("d4-regular", ctx), ws),
    )

    # 11: deformed triples keep the Dirac matrix and satisfy the
    # commutator expansion
    for sname in catalog.triple_names():
        scene = catalog.triple_scene(sname, ctx)
        result = deform_triple(
            scene["triple"], scene["corep"], scene["cocycle"], ctx,
            pw=ws.peter_weyl(scene["host"]),
        )
        residual = float(result.transcript["commutator_identity"])
        if result.dirac is not scene["triple"].dirac:
            residual = max(residual, 1.0)
        add(
            f"11.triple.{sname}",
            "Dirac matrix unchanged and commutators expand through the dual legs",
            residual,
            detail=f"spectral dimension {result.transcript['spectral_dimension']}",
        )

    # 12: the twisted category data
    for sname in catalog.triple_names():
        scene = catalog.triple_scene(sname, ctx)
        corep, sigma = scene["corep"], scene["cocycle"]
        tw = ws.scene_twist(scene)
        basis = _spectral_basis(scene, ctx)
        add(
            f"12.intertwine.{sname}",
            "deformed operators intertwine the twisted adjoint action",
            max(intertwine_check(corep, tw, t, ctx) for t in basis),
        )
        rv_sigma = r_sigma(scene["volume"], corep, tw.v, ctx)
        corep_sigma = UnitaryCorep(tw.twisted, corep.hdim, corep.u)
        dirac = scene["triple"].dirac
        residual = max(
            max_abs(dirac @ rv_sigma.r - rv_sigma.r @ dirac),
            check_volume_preservation(corep_sigma, rv_sigma, ctx)["residual"],
        )
        add(
            f"12.r-sigma.{sname}",
            "twisted volume is positive, Dirac-compatible, and preserved",
            residual,
        )
        inverse = DualCocycle(tw.twisted, sigma.sigma_inv, ctx=ctx)
        back = twist_algebra(tw.twisted, inverse, ctx)
        rv_back = r_sigma(rv_sigma, corep_sigma, back.v, ctx)
        residual = max_abs(rv_back.r - scene["volume"].r)
        for t in basis:
            forward = rho_sigma(corep, sigma, t)
            residual = max(
                residual, max_abs(rho_sigma(corep_sigma, inverse, forward) - t)
            )
        add(
            f"12.double-twist.{sname}",
            "inverse cocycle undoes the deformation and the twisted volume",
            residual,
        )

    # 13: seeded reruns reproduce the random-draw check byte for byte
    def _draw_record(fresh: ScalarContext) -> str:
        fresh_ws = _Workspace(fresh)
        scene = catalog.triple_scene("z2z2-torus", fresh)
        residual, detail = _form_r_residual(scene, fresh_ws)
        return canonical_dumps({"residual": residual, "detail": detail})

    first = _draw_record(ScalarContext(tolerance=ctx.tolerance, seed=ctx.seed))
    second = _draw_record(ScalarContext(tolerance=ctx.tolerance, seed=ctx.seed))
    add(
        "13.determinism.reports",
        "equal seeds reproduce byte-identical check payloads",
        _bool_residual(first == second),
        _BOOL,
    )

    records.sort(key=lambda rec: rec.check_id)
    wall = time.perf_counter() - start
    return VerificationReport(suite=PAPER_SUITE, records=tuple(records), wall_time=wall)
