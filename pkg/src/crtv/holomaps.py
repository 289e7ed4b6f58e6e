"""Holomorphic polynomial maps: Jacobian, minor lattice, rank loci.

The codimension tests all reduce to one germ criterion: a determinantal
locus V(d_1, ..., d_m) has a codimension-one component through the origin
exactly when the GCD of the d's vanishes there (any such component is a
hypersurface whose defining polynomial divides every d_l).  Witnesses are
reported square-free, i.e. as the reduced common divisor cutting out the
offending component.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from crtv.errors import DegreeCapExceededError, InternalConsistencyError
from crtv.gcd import multivar_gcd, squarefree_part
from crtv.groebner import buchberger, is_groebner, pure_power_variables
from crtv.linalg import mat_rank
from crtv.poly import MPoly, VarUniverse
from crtv.scalars import GaussRat


@dataclass(frozen=True)
class HoloMap:
    """A polynomial map C^{n+1} -> C^{N+1} fixing the origin; components
    live in the source universe and involve only the Z-block."""

    source_dim: int
    target_dim: int
    components: tuple[MPoly, ...]

    @property
    def universe(self) -> VarUniverse:
        return self.components[0].universe


def make_holomap(components, source_dim: int, target_dim: int | None = None) -> HoloMap:
    components = tuple(components)
    if target_dim is None:
        target_dim = len(components) - 1
    if len(components) != target_dim + 1:
        raise ValueError(f"expected {target_dim + 1} components, got {len(components)}")
    u = components[0].universe
    if u.z_count != source_dim + 1:
        raise ValueError("component universe does not match the source dimension")
    for k, comp in enumerate(components):
        if comp.universe != u:
            raise ValueError("components live in different universes")
        if any(i >= u.z_count for i in comp.support_variables()):
            raise ValueError(f"component {k + 1} involves conjugated variables")
        if comp.constant_term():
            raise ValueError(f"component {k + 1} does not vanish at the origin")
    return HoloMap(source_dim=source_dim, target_dim=target_dim, components=components)


def jacobian(h: HoloMap) -> tuple[tuple[MPoly, ...], ...]:
    """(N+1) x (n+1) matrix of partial derivatives of the components."""
    return tuple(tuple(comp.diff(j) for j in range(h.source_dim + 1))
                 for comp in h.components)


@dataclass(frozen=True)
class Minor:
    size: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    value: MPoly

    def is_zero(self) -> bool:
        return self.value.is_zero()


@dataclass(frozen=True)
class MinorTable:
    source_dim: int
    target_dim: int
    by_size: dict[int, tuple[Minor, ...]]

    def minors(self, size: int) -> tuple[Minor, ...]:
        return self.by_size.get(size, ())

    def nonzero(self, size: int) -> list[Minor]:
        return [m for m in self.minors(size) if not m.is_zero()]

    def nonzero_values(self, min_size: int, max_size: int | None = None) -> list[MPoly]:
        top = self.source_dim + 1 if max_size is None else max_size
        return [m.value for k in range(min_size, top + 1) for m in self.nonzero(k)]

    def max_nonzero_size(self) -> int:
        return max((k for k, ms in self.by_size.items()
                    if any(not m.is_zero() for m in ms)), default=0)


def minor_table(h: HoloMap) -> MinorTable:
    """All k x k minors of the Jacobian for k = 1 .. n+1, computed by a
    shared-subminor Laplace expansion."""
    jac = jacobian(h)
    n_rows = h.target_dim + 1
    n_cols = h.source_dim + 1
    cache: dict[tuple, MPoly] = {}
    zero = MPoly.zero(h.universe)

    def det(rows: tuple[int, ...], cols: tuple[int, ...]) -> MPoly:
        if len(rows) == 1:
            return jac[rows[0]][cols[0]]
        key = (rows, cols)
        got = cache.get(key)
        if got is not None:
            return got
        last = rows[-1]
        total = zero
        for pos, col in enumerate(cols):
            entry = jac[last][col]
            if entry.is_zero():
                continue
            sub = det(rows[:-1], cols[:pos] + cols[pos + 1:])
            piece = entry * sub
            total = total + piece if (len(rows) - 1 + pos) % 2 == 0 else total - piece
        cache[key] = total
        return total

    by_size = {}
    for k in range(1, n_cols + 1):
        ms = []
        for rows in combinations(range(n_rows), k):
            for cols in combinations(range(n_cols), k):
                ms.append(Minor(size=k, rows=rows, cols=cols, value=det(rows, cols)))
        by_size[k] = tuple(ms)
    return MinorTable(source_dim=h.source_dim, target_dim=h.target_dim, by_size=by_size)


def generic_rank(h: HoloMap, table: MinorTable | None = None) -> int:
    """Largest k with a not-identically-zero k x k minor."""
    table = table if table is not None else minor_table(h)
    return table.max_nonzero_size()


@dataclass(frozen=True)
class CodimVerdict:
    codim_ge2: bool
    witness: MPoly | None          # square-free reduced common divisor
    common_factor: MPoly | None    # raw monic GCD of the minors
    degenerate: bool = False


def _codim_verdict(values: list[MPoly]) -> CodimVerdict:
    g = multivar_gcd(values)
    if g.constant_term():
        return CodimVerdict(codim_ge2=True, witness=None, common_factor=g)
    return CodimVerdict(codim_ge2=False, witness=squarefree_part(g), common_factor=g)


def wh_codim_ge2(h: HoloMap, table: MinorTable | None = None) -> CodimVerdict:
    """Does the full-rank-drop locus have germ codimension >= 2 at 0?

    Requires generic rank n+1.  Answer is yes iff the GCD of the nonzero
    top minors does not vanish at the origin.
    """
    table = table if table is not None else minor_table(h)
    top = table.nonzero(h.source_dim + 1)
    if not top:
        raise ValueError("generic rank is below n+1; the rank-drop locus is everything")
    return _codim_verdict([m.value for m in top])


def whs_codim_ge2(h: HoloMap, s: int, table: MinorTable | None = None) -> CodimVerdict:
    """Same germ criterion for the rank < s locus (all k x k minors, k >= s)."""
    if not 1 <= s <= h.source_dim + 1:
        raise ValueError("s out of range")
    table = table if table is not None else minor_table(h)
    values = table.nonzero_values(s)
    if not table.nonzero(s):
        # rank < s generically: the locus is everything
        return CodimVerdict(codim_ge2=False, witness=None, common_factor=None,
                            degenerate=True)
    return _codim_verdict(values)


@dataclass(frozen=True)
class MixedMinorVerdict:
    holds: bool
    witness: MPoly | None
    common_factor: MPoly | None


def mixed_minor_condition(h: HoloMap, s: int,
                          table: MinorTable | None = None) -> MixedMinorVerdict:
    """Per-irreducible-divisor form of the mixed-minor hypothesis.

    Every common irreducible divisor (through 0) of the top minors must
    miss some k x k minor with k >= s; equivalently the GCD of the
    combined family {top minors} union {k x k minors, k >= s} does not
    vanish at the origin.  The literal "every common divisor d" phrasing
    is formally stronger than this germ form; see the package docs.
    """
    if not 1 <= s <= h.source_dim + 1:
        raise ValueError("s out of range")
    table = table if table is not None else minor_table(h)
    if not table.nonzero(h.source_dim + 1):
        raise ValueError("generic rank is below n+1")
    values = table.nonzero_values(s)
    g = multivar_gcd(values)
    if g.constant_term():
        return MixedMinorVerdict(holds=True, witness=None, common_factor=g)
    return MixedMinorVerdict(holds=False, witness=squarefree_part(g), common_factor=g)


@dataclass(frozen=True)
class FiniteMapResult:
    verdict: str       # "finite" | "not_finite" | "inconclusive"
    certificate: str
    witness: MPoly | None = None
    detail: str = ""


def finite_map_test(h: HoloMap, degree_cap: int = 20) -> FiniteMapResult:
    """Three-way semi-decision for H^{-1}(0) = {0} as a germ.

    Certificate paths, in order, each re-verified before reporting:
      (a) finite when the Jacobian at 0 has full rank n+1 (local embedding);
      (b) not finite when the component GCD is a nonunit vanishing at 0
          (a hypersurface through 0 inside the fiber), or when the
          component ideal is homogeneous and its leading ideal misses a
          pure power of some variable (the zero set is then a cone of
          positive dimension, hence positive-dimensional through 0);
      (c) finite when the leading ideal contains a pure power of every
          variable (globally zero-dimensional zero set).
    Anything else is inconclusive: a positive-dimensional zero set that
    cannot be certified to pass through the origin proves nothing here.
    """
    n1 = h.source_dim + 1
    jac = jacobian(h)
    jac0 = [[entry.constant_term() for entry in row] for row in jac]
    if mat_rank(jac0) == n1:
        recheck = [[entry.constant_term() for entry in row] for row in jacobian(h)]
        if mat_rank(recheck) != n1:
            raise InternalConsistencyError("Jacobian rank certificate failed re-verification")
        return FiniteMapResult(verdict="finite", certificate="jacobian_rank",
                               detail=f"rank of the Jacobian at 0 is {n1}")

    comps = [c for c in h.components if not c.is_zero()]
    if not comps:
        return FiniteMapResult(verdict="not_finite", certificate="zero_map",
                               detail="every component vanishes identically")
    g = multivar_gcd(comps)
    if not g.is_constant() and not g.constant_term():
        for c in comps:
            if c.exact_quotient(g) is None:
                raise InternalConsistencyError("component GCD certificate failed re-division")
        return FiniteMapResult(verdict="not_finite", certificate="component_gcd",
                               witness=g,
                               detail="common component factor vanishing at 0 puts a "
                                      "hypersurface through 0 inside the fiber")

    try:
        basis = buchberger(comps, degree_cap=degree_cap)
    except DegreeCapExceededError as exc:
        return FiniteMapResult(verdict="inconclusive", certificate="degree_cap",
                               detail=str(exc))
    z_vars = set(range(n1))
    covered = pure_power_variables(basis, z_vars)
    missing = sorted(z_vars - covered)
    homogeneous = all(len({sum(e) for e in c.terms}) == 1 for c in comps)
    if missing and homogeneous:
        name = h.universe.names[missing[0]]
        return FiniteMapResult(verdict="not_finite", certificate="groebner_cone",
                               detail=f"no pure power of {name} in the leading ideal "
                                      "and the ideal is homogeneous: the zero set is a "
                                      "positive-dimensional cone through 0")
    if not missing:
        if not is_groebner(basis):
            raise InternalConsistencyError("zero-dimensionality certificate failed "
                                           "basis re-reduction")
        return FiniteMapResult(verdict="finite", certificate="groebner_zero_dimensional",
                               detail="the leading ideal contains a pure power of "
                                      "every variable")
    return FiniteMapResult(verdict="inconclusive", certificate="unresolved",
                           detail="positive-dimensional zero set not certified to "
                                  "pass through the origin")
