"""The transversality pipeline.

Everything rests on one exact identity: pulling the target defining
polynomial back through the complexified map (H, Hbar) must be divisible
by the source defining polynomial, and the quotient a decides
transversality pointwise — the map is transversal exactly where a does
not vanish.  Because both defining polynomials are stored with a fixed
normalization, a is pinned exactly, not just up to a unit.

On top of the factor sit the locus decomposition (a restricted to the
complexified hypersurface splits as B(Z) * Cbar(xi) * unit under the
rank-gap hypothesis) and the guarantee rules T1.1, T1.3, T1.5(s), T3.6,
T4.1(s), each evaluated hypothesis by hypothesis with semi-decisions
recorded verbatim.  A rule may only ever guarantee transversality when
the direct constant-term check agrees; a violation of that cross-check is
an internal error, never a property of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from crtv.errors import (
    InternalConsistencyError,
    MapDoesNotPreserveError,
    NonPolynomialRestrictionError,
    UniverseMismatchError,
)
from crtv.gcd import multivar_gcd, squarefree_part
from crtv.holomaps import (
    CodimVerdict,
    FiniteMapResult,
    HoloMap,
    MinorTable,
    MixedMinorVerdict,
    finite_map_test,
    generic_rank,
    minor_table,
    mixed_minor_condition,
    wh_codim_ge2,
    whs_codim_ge2,
)
from crtv.hypersurfaces import (
    DEFAULT_TRUNC,
    FiniteTypeResult,
    Hypersurface,
    LeviData,
    finite_type_check,
    levi_data,
    on_hypersurface_or_raise,
    segre_substitute,
)
from crtv.poly import MPoly
from crtv.scalars import GaussRat


@dataclass(frozen=True)
class TransFactor:
    """The factor a in rho'(H(Z), Hbar(xi)) = a(Z, xi) * rho(Z, xi)."""

    a: MPoly
    source: Hypersurface
    target: Hypersurface
    holomap: HoloMap


def compute_a(source: Hypersurface, target: Hypersurface, h: HoloMap) -> TransFactor:
    """Pull the target defining polynomial back and divide by the source one.

    Raises MapDoesNotPreserveError with the remainder as evidence when the
    division is not exact (H does not send M into M', or rho is reducible
    and H preserves only one branch).  The computed factor is re-multiplied
    against rho and checked Hermitian before it is returned.
    """
    if h.source_dim != source.dim:
        raise UniverseMismatchError("map source dimension does not match M")
    if h.target_dim != target.dim:
        raise UniverseMismatchError("map target dimension does not match M'")
    if h.universe != source.universe:
        raise UniverseMismatchError("map components do not live in the source universe")
    tgt_u = target.universe
    mapping: dict[int, MPoly] = {}
    for i, comp in enumerate(h.components):
        mapping[i] = comp
        mapping[tgt_u.z_count + i] = comp.bar()
    pullback = target.rho.subs(mapping, universe=source.universe)
    quotient, remainder = pullback.divmod_single(source.rho)
    if not remainder.is_zero():
        raise MapDoesNotPreserveError(
            "pullback of the target defining polynomial is not divisible by rho",
            remainder=remainder)
    if quotient * source.rho != pullback:
        raise InternalConsistencyError("division re-multiplication failed")
    if quotient.bar() != quotient:
        raise InternalConsistencyError("transversality factor is not Hermitian")
    return TransFactor(a=quotient, source=source, target=target, holomap=h)


def is_transversal_at_origin(factor: TransFactor) -> bool:
    """Transversal at 0 iff a(0,0) is nonzero."""
    return bool(factor.a.constant_term())


def is_transversal_at_point(factor: TransFactor, point: list[GaussRat]) -> bool:
    """Evaluate a at (p, conj p) for a rational point lying exactly on M."""
    on_hypersurface_or_raise(factor.source, point)
    values = list(point) + [p.conj() for p in point]
    return bool(factor.a.evaluate(values))


def nonvanishing_mod_rho(factor: TransFactor) -> bool:
    """True iff a does not vanish identically on the complexified
    hypersurface, i.e. its restriction through the graph solution is not
    the zero polynomial."""
    return not segre_substitute(factor.source, factor.a).is_zero()


@dataclass(frozen=True)
class LocusDecomposition:
    """a restricted to the complexified hypersurface, split by contents.

    b_factor depends only on the Z-block and cbar_factor only on the
    xi-block; the product b * cbar * cofactor reproduces the restriction
    exactly.  The split realizes the non-transversality locus whenever
    the cofactor is a unit (nonzero at the origin); split_failed records
    the opposite outcome, which is a legitimate report when the rank-gap
    hypothesis 2N - r <= 2n - 2 fails.
    """

    b_factor: MPoly
    cbar_factor: MPoly
    cofactor: MPoly
    cofactor_at_origin: GaussRat
    split_failed: bool
    hypotheses_hold: bool
    b_squarefree: MPoly
    c_squarefree: MPoly
    b_divides_minors: bool | None
    c_divides_minors: bool | None
    hermitian_symmetric: bool
    components: tuple[dict, ...]


def split_content_factors(a_restricted: MPoly) -> tuple[MPoly, MPoly, MPoly]:
    """Split f = B(Z) * Cbar(xi) * cofactor by iterated contents.

    B is the monic GCD of the coefficients of f grouped by xi-exponents;
    Cbar is extracted from the remaining cofactor symmetrically.
    """
    u = a_restricted.universe
    xi_vars = range(u.z_count, u.nvars)
    z_vars = range(u.z_count)
    groups = a_restricted.split_by_exponents(tuple(xi_vars))
    b = multivar_gcd(list(groups.values()))
    rest = a_restricted.exact_quotient(b)
    if rest is None:
        raise InternalConsistencyError("content does not divide the restriction")
    groups2 = rest.split_by_exponents(tuple(z_vars))
    cbar = multivar_gcd(list(groups2.values()))
    cofactor = rest.exact_quotient(cbar)
    if cofactor is None:
        raise InternalConsistencyError("content does not divide the cofactor")
    return b, cbar, cofactor


def decompose_locus(factor: TransFactor,
                    table: MinorTable | None = None) -> LocusDecomposition:
    """Decompose the non-transversality locus of the complexified map.

    Preconditions: a(0,0) = 0 and a does not vanish identically on the
    complexified hypersurface.  The restriction of a is split into
    B(Z) * Cbar(xi) * cofactor; under the rank-gap hypothesis the
    cofactor is a unit and the square-free parts of B and of C = bar(Cbar)
    divide every nonzero top minor, which is verified and recorded.  Each
    locus component pairs the vanishing of a factor on one side with the
    Segre fibers on the other, and the family is Hermitian symmetric.
    """
    if is_transversal_at_origin(factor):
        raise ValueError("map is transversal at the origin; nothing to decompose")
    if not nonvanishing_mod_rho(factor):
        raise ValueError("factor vanishes identically on the hypersurface")
    a_res = segre_substitute(factor.source, factor.a)
    b, cbar, cofactor = split_content_factors(a_res)
    c0 = cofactor.constant_term()
    split_failed = not bool(c0)

    n = factor.source.dim
    big_n = factor.target.dim
    r = levi_data(factor.target).rank
    hypotheses_hold = 2 * big_n - r <= 2 * n - 2

    table = table if table is not None else minor_table(factor.holomap)
    deltas = [m.value for m in table.nonzero(n + 1)]
    b_sf = squarefree_part(b)
    c_sf = squarefree_part(cbar.bar())
    if deltas:
        b_div = all(d.exact_quotient(b_sf) is not None for d in deltas) \
            if not b_sf.is_constant() else True
        c_div = all(d.exact_quotient(c_sf) is not None for d in deltas) \
            if not c_sf.is_constant() else True
    else:
        b_div = c_div = None

    components = []
    if not b_sf.is_constant():
        components.append({"side": "source", "vanishing": str(b_sf),
                           "fiber": "conjugate Segre fibers over the vanishing set"})
    if not c_sf.is_constant():
        components.append({"side": "conjugate", "vanishing": str(c_sf),
                           "fiber": "Segre fibers over the conjugated vanishing set"})

    return LocusDecomposition(
        b_factor=b, cbar_factor=cbar, cofactor=cofactor, cofactor_at_origin=c0,
        split_failed=split_failed, hypotheses_hold=hypotheses_hold,
        b_squarefree=b_sf, c_squarefree=c_sf,
        b_divides_minors=b_div, c_divides_minors=c_div,
        hermitian_symmetric=(b_sf == c_sf),
        components=tuple(components))


# ----------------------------------------------------------------------
# guarantee rules

THEOREM_IDS = ("T1.1", "T1.3", "T1.5", "T3.6", "T4.1")


@dataclass(frozen=True)
class HypothesisRecord:
    name: str
    satisfied: bool | None   # None records an unresolved semi-decision
    detail: str


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    s: int | None
    hypotheses: tuple[HypothesisRecord, ...]
    guaranteed: bool
    transversal_at_origin: bool


@dataclass
class AnalysisContext:
    """Shared lazily-computed ingredients for the rule evaluations."""

    source: Hypersurface
    target: Hypersurface
    holomap: HoloMap
    trunc: int = DEFAULT_TRUNC
    degree_cap: int = 20
    factor: TransFactor | None = None
    table: MinorTable | None = None
    levi_target: LeviData | None = None
    levi_source: LeviData | None = None
    finite_type: FiniteTypeResult | None = None
    finite_map: FiniteMapResult | None = None

    def get_factor(self) -> TransFactor:
        if self.factor is None:
            self.factor = compute_a(self.source, self.target, self.holomap)
        return self.factor

    def get_table(self) -> MinorTable:
        if self.table is None:
            self.table = minor_table(self.holomap)
        return self.table

    def get_levi_target(self) -> LeviData:
        if self.levi_target is None:
            self.levi_target = levi_data(self.target)
        return self.levi_target

    def get_levi_source(self) -> LeviData:
        if self.levi_source is None:
            self.levi_source = levi_data(self.source)
        return self.levi_source

    def get_finite_type(self) -> FiniteTypeResult:
        if self.finite_type is None:
            self.finite_type = finite_type_check(self.source, self.trunc)
        return self.finite_type

    def get_finite_map(self) -> FiniteMapResult:
        if self.finite_map is None:
            self.finite_map = finite_map_test(self.holomap, self.degree_cap)
        return self.finite_map


def _rank_gap_hypothesis(ctx: AnalysisContext, bound: int, bound_text: str) -> HypothesisRecord:
    n, big_n = ctx.source.dim, ctx.target.dim
    r = ctx.get_levi_target().rank
    lhs = 2 * big_n - r
    return HypothesisRecord(
        name="levi_rank_gap",
        satisfied=lhs <= bound,
        detail=f"2N-r = {lhs}, required <= {bound_text} = {bound} (N={big_n}, r={r}, n={n})")


def _generic_rank_hypothesis(ctx: AnalysisContext, name: str = "generic_rank_full") -> HypothesisRecord:
    n = ctx.source.dim
    rank = generic_rank(ctx.holomap, ctx.get_table())
    return HypothesisRecord(
        name=name, satisfied=rank == n + 1,
        detail=f"generic rank {rank} of the Jacobian, required {n + 1}")


def _wh_hypothesis(ctx: AnalysisContext) -> HypothesisRecord:
    n = ctx.source.dim
    if generic_rank(ctx.holomap, ctx.get_table()) < n + 1:
        return HypothesisRecord(
            name="wh_codim_ge2", satisfied=False,
            detail="generic rank below n+1: the rank-drop locus is everything")
    verdict = wh_codim_ge2(ctx.holomap, ctx.get_table())
    detail = ("no common divisor of the top minors vanishes at 0"
              if verdict.codim_ge2 else f"common divisor {verdict.witness} vanishes at 0")
    return HypothesisRecord(name="wh_codim_ge2", satisfied=verdict.codim_ge2, detail=detail)


def _whs_hypothesis(ctx: AnalysisContext, s: int) -> HypothesisRecord:
    verdict = whs_codim_ge2(ctx.holomap, s, ctx.get_table())
    if verdict.degenerate:
        return HypothesisRecord(
            name=f"whs_codim_ge2(s={s})", satisfied=False,
            detail=f"every {s}x{s} minor vanishes identically (generic rank < s)")
    detail = (f"no common divisor of the k>={s} minors vanishes at 0"
              if verdict.codim_ge2 else f"common divisor {verdict.witness} vanishes at 0")
    return HypothesisRecord(name=f"whs_codim_ge2(s={s})",
                            satisfied=verdict.codim_ge2, detail=detail)


def _finite_type_hypothesis(ctx: AnalysisContext) -> HypothesisRecord:
    ft = ctx.get_finite_type()
    if ft.finite:
        return HypothesisRecord(name="finite_type", satisfied=True,
                                detail="source is of finite type at 0")
    return HypothesisRecord(
        name="finite_type", satisfied=None,
        detail=f"finite type not established through order {ft.order} (semi-decision)")


def _finite_map_hypothesis(ctx: AnalysisContext) -> HypothesisRecord:
    fm = ctx.get_finite_map()
    satisfied = {"finite": True, "not_finite": False}.get(fm.verdict)
    return HypothesisRecord(name="finite_map", satisfied=satisfied,
                            detail=f"{fm.verdict} via {fm.certificate}: {fm.detail}")


def _mixed_minor_hypothesis(ctx: AnalysisContext, s: int) -> HypothesisRecord:
    verdict = mixed_minor_condition(ctx.holomap, s, ctx.get_table())
    detail = ("combined minor family is coprime at 0" if verdict.holds
              else f"common divisor {verdict.witness} of every k>={s} minor vanishes at 0")
    return HypothesisRecord(name=f"mixed_minor(s={s})", satisfied=verdict.holds,
                            detail=detail)


def evaluate_theorem(theorem_id: str, source: Hypersurface, target: Hypersurface,
                     h: HoloMap, s: int | None = None,
                     ctx: AnalysisContext | None = None) -> TheoremVerdict:
    """Evaluate one guarantee rule: all hypotheses, the guarantee, and the
    direct constant-term check, with the soundness cross-check enforced.

    An unresolved semi-decision (None) never contributes to a guarantee.
    """
    if ctx is None:
        ctx = AnalysisContext(source=source, target=target, holomap=h)
    n = source.dim
    if theorem_id in ("T1.5", "T4.1"):
        if s is None:
            raise ValueError(f"{theorem_id} needs a minor size s")
        if not 1 <= s <= n + 1:
            raise ValueError("s out of range")

    if theorem_id == "T1.1":
        hypotheses = (_rank_gap_hypothesis(ctx, 2 * n - 2, "2n-2"),
                      _wh_hypothesis(ctx))
    elif theorem_id == "T1.3":
        hypotheses = (_rank_gap_hypothesis(ctx, 2 * n - 3, "2n-3"),
                      _finite_type_hypothesis(ctx),
                      _finite_map_hypothesis(ctx))
    elif theorem_id == "T1.5":
        hypotheses = (_finite_type_hypothesis(ctx),
                      _rank_gap_hypothesis(ctx, n + s - 3, "n+s-3"),
                      _generic_rank_hypothesis(ctx, "wh_proper"),
                      _whs_hypothesis(ctx, s))
    elif theorem_id == "T3.6":
        hypotheses = (_rank_gap_hypothesis(ctx, 2 * n - 2, "2n-2"),
                      _generic_rank_hypothesis(ctx),
                      _top_minor_coprime_hypothesis(ctx))
    elif theorem_id == "T4.1":
        hypotheses = (_generic_rank_hypothesis(ctx),
                      _rank_gap_hypothesis(ctx, n + s - 3, "n+s-3"),
                      _finite_type_hypothesis(ctx),
                      _mixed_minor_hypothesis(ctx, s))
    else:
        raise ValueError(f"unknown theorem id {theorem_id!r}")

    guaranteed = all(rec.satisfied is True for rec in hypotheses)
    direct = is_transversal_at_origin(ctx.get_factor())
    if guaranteed and not direct:
        raise InternalConsistencyError(
            f"{theorem_id} guaranteed transversality but a(0,0) = 0")
    return TheoremVerdict(theorem_id=theorem_id, s=s, hypotheses=hypotheses,
                          guaranteed=guaranteed, transversal_at_origin=direct)


def _top_minor_coprime_hypothesis(ctx: AnalysisContext) -> HypothesisRecord:
    n = ctx.source.dim
    if generic_rank(ctx.holomap, ctx.get_table()) < n + 1:
        return HypothesisRecord(name="minors_coprime_at_origin", satisfied=False,
                                detail="generic rank below n+1")
    verdict = wh_codim_ge2(ctx.holomap, ctx.get_table())
    detail = ("top minors have no common divisor vanishing at 0"
              if verdict.codim_ge2 else f"nontrivial common divisor {verdict.witness}")
    return HypothesisRecord(name="minors_coprime_at_origin",
                            satisfied=verdict.codim_ge2, detail=detail)


# ----------------------------------------------------------------------
# full report

@dataclass
class TransReport:
    meta: dict
    factor: TransFactor
    transversal_at_origin: bool
    nonvanishing_on_surface: bool | None
    nonvanishing_reason: str | None
    levi_source: LeviData
    levi_target: LeviData
    generic_rank: int
    minor_summary: list[dict]
    wh: CodimVerdict | None
    wh_reason: str | None
    whs: list[tuple[int, CodimVerdict]]
    mixed: list[tuple[int, MixedMinorVerdict]]
    finite_type: FiniteTypeResult
    finite_map: FiniteMapResult
    locus: LocusDecomposition | None
    locus_reason: str | None
    theorems: list[TheoremVerdict]
    options: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        def poly_str(p):
            return None if p is None else str(p)

        wh_witness = None
        if self.wh is not None and self.wh.witness is not None:
            wh_witness = str(self.wh.witness)
        locus = None
        if self.locus is not None:
            locus = {
                "B": str(self.locus.b_factor),
                "Cbar": str(self.locus.cbar_factor),
                "cofactor": str(self.locus.cofactor),
                "cofactor_at_origin": str(self.locus.cofactor_at_origin),
                "split_failed": self.locus.split_failed,
                "hypotheses_hold": self.locus.hypotheses_hold,
                "B_squarefree": str(self.locus.b_squarefree),
                "C_squarefree": str(self.locus.c_squarefree),
                "B_divides_all_top_minors": self.locus.b_divides_minors,
                "C_divides_all_top_minors": self.locus.c_divides_minors,
                "hermitian_symmetric": self.locus.hermitian_symmetric,
                "components": list(self.locus.components),
            }
        return {
            "problem": self.meta,
            "a_polynomial": str(self.factor.a),
            "a_constant_term": str(self.factor.a.constant_term()),
            "transversal_at_origin": self.transversal_at_origin,
            "nonvanishing_on_surface": self.nonvanishing_on_surface,
            "levi_rank_target": self.levi_target.rank,
            "levi_rank_source": self.levi_source.rank,
            "generic_rank": self.generic_rank,
            "minor_summary": self.minor_summary,
            "wh_codim_ge2": None if self.wh is None else self.wh.codim_ge2,
            "wh_codim_witness": wh_witness,
            "wh_reason": self.wh_reason,
            "whs_table": [
                {"s": s, "degenerate": v.degenerate, "codim_ge2": v.codim_ge2,
                 "witness": poly_str(v.witness)}
                for s, v in self.whs
            ],
            "mixed_minor_table": [
                {"s": s, "holds": v.holds, "witness": poly_str(v.witness)}
                for s, v in self.mixed
            ],
            "finite_type": {"finite": self.finite_type.finite,
                            "order": self.finite_type.order},
            "finite_map": {"verdict": self.finite_map.verdict,
                           "certificate": self.finite_map.certificate,
                           "witness": poly_str(self.finite_map.witness),
                           "detail": self.finite_map.detail},
            "locus": locus,
            "locus_reason": self.locus_reason,
            "theorems": [
                {"id": t.theorem_id, "s": t.s,
                 "hypotheses": [{"name": h.name, "satisfied": h.satisfied,
                                 "detail": h.detail} for h in t.hypotheses],
                 "guaranteed": t.guaranteed,
                 "transversal_at_origin": t.transversal_at_origin}
                for t in self.theorems
            ],
            "options": self.options,
        }


def full_report(source: Hypersurface, target: Hypersurface, h: HoloMap,
                trunc: int = DEFAULT_TRUNC, degree_cap: int = 20,
                s: int | None = None, meta: dict | None = None) -> TransReport:
    """Aggregate the whole analysis for one problem instance.

    Raises MapDoesNotPreserveError when the fundamental identity fails;
    everything downstream of a successful factor is collected, with
    unevaluable sections recorded alongside the reason.
    """
    n = source.dim
    s_default = s if s is not None else max(1, n)
    ctx = AnalysisContext(source=source, target=target, holomap=h,
                          trunc=trunc, degree_cap=degree_cap)
    factor = ctx.get_factor()
    table = ctx.get_table()
    transversal = is_transversal_at_origin(factor)

    nonvanishing = None
    nonvanishing_reason = None
    try:
        nonvanishing = nonvanishing_mod_rho(factor)
    except NonPolynomialRestrictionError as exc:
        nonvanishing_reason = str(exc)

    rank = generic_rank(h, table)
    if rank == n + 1:
        wh = wh_codim_ge2(h, table)
        wh_reason = None
    else:
        wh = None
        wh_reason = f"generic rank {rank} below n+1; the rank-drop locus is everything"

    whs = [(k, whs_codim_ge2(h, k, table)) for k in range(1, n + 2)]
    mixed = [(k, mixed_minor_condition(h, k, table)) for k in range(1, n + 2)] \
        if rank == n + 1 else []

    minor_summary = []
    for k in range(1, n + 2):
        ms = table.minors(k)
        nz = table.nonzero(k)
        minor_summary.append({
            "size": k,
            "total": len(ms),
            "nonzero": len(nz),
            "unit_at_origin": any(bool(m.value.constant_term()) for m in nz),
        })

    locus = None
    locus_reason = None
    if transversal:
        locus_reason = "map is transversal at the origin; the locus is empty there"
    elif nonvanishing is None:
        locus_reason = "restriction of a is not polynomial; decomposition skipped"
    elif not nonvanishing:
        locus_reason = "a vanishes identically on the complexified hypersurface"
    else:
        locus = decompose_locus(factor, table)

    theorems = [
        evaluate_theorem("T1.1", source, target, h, ctx=ctx),
        evaluate_theorem("T1.3", source, target, h, ctx=ctx),
        evaluate_theorem("T1.5", source, target, h, s=s_default, ctx=ctx),
        evaluate_theorem("T3.6", source, target, h, ctx=ctx),
        evaluate_theorem("T4.1", source, target, h, s=s_default, ctx=ctx),
    ]

    return TransReport(
        meta=meta or {"n": n, "N": target.dim},
        factor=factor,
        transversal_at_origin=transversal,
        nonvanishing_on_surface=nonvanishing,
        nonvanishing_reason=nonvanishing_reason,
        levi_source=ctx.get_levi_source(),
        levi_target=ctx.get_levi_target(),
        generic_rank=rank,
        minor_summary=minor_summary,
        wh=wh,
        wh_reason=wh_reason,
        whs=whs,
        mixed=mixed,
        finite_type=ctx.get_finite_type(),
        finite_map=ctx.get_finite_map(),
        locus=locus,
        locus_reason=locus_reason,
        theorems=theorems,
        options={"trunc": trunc, "degree_cap": degree_cap, "s": s_default},
    )
