"""Real-algebraic hypersurfaces through the origin, in complexified form.

A hypersurface M in C^{n+1} is stored through a complexified defining
polynomial rho(Z, xi) that is Hermitian (fixed by the bar involution),
vanishes at the origin and has nonzero Z-gradient there; real points of M
are the (Z, xi) with xi = conj(Z).  All checks in this package happen at
the origin; translate_defining moves any other rational base point there
first.

Normal-coordinate convention.  Graph output is w = Q(z, chi, tau) with

    Q(z, 0, tau) = Q(0, chi, tau) = tau

and the reality identity Q(z, chi, Qbar(chi, z, w)) = w, verified exactly
through the truncation order.  (The other common display of the first
pair of identities with "= 0" on the right contradicts the reality
identity at chi = 0; the tau-convention above is the one the reality
identity forces, and it is what finite_type_check consumes.)
"""

from __future__ import annotations

from dataclasses import dataclass

from crtv.errors import (
    InternalConsistencyError,
    NonPolynomialRestrictionError,
    NotHermitianError,
    NotThroughOriginError,
    PointNotOnHypersurfaceError,
    UniverseMismatchError,
    ZeroGradientError,
)
from crtv.linalg import mat_rank
from crtv.poly import MPoly, VarUniverse
from crtv.scalars import GaussRat, HALF, I, ONE, ZERO
from crtv.series import TruncSeries, implicit_solve, subs_series

DEFAULT_TRUNC = 8


@dataclass(frozen=True)
class Hypersurface:
    """A validated hypersurface; dim is the CR dimension n."""

    dim: int
    rho: MPoly
    distinguished_w: int | None

    @property
    def universe(self) -> VarUniverse:
        return self.rho.universe

    def graph_is_polynomial(self) -> bool:
        """True when the defining polynomial is affine-linear in the
        distinguished variable with a constant linear coefficient, so the
        graph solution is itself a polynomial."""
        return _graph_tau_data(self) is not None


@dataclass(frozen=True)
class LeviData:
    full_matrix: tuple[tuple[GaussRat, ...], ...]
    gradient: tuple[GaussRat, ...]
    tangent_basis: tuple[tuple[GaussRat, ...], ...]
    restricted_matrix: tuple[tuple[GaussRat, ...], ...]
    rank: int


@dataclass(frozen=True)
class NormalForm:
    q: TruncSeries
    order: int
    transform: tuple[TruncSeries, ...]
    universe: VarUniverse


@dataclass(frozen=True)
class FiniteTypeResult:
    finite: bool
    order: int

    @property
    def verdict(self) -> str:
        return "finite_type" if self.finite else f"infinite_type_up_to_order_{self.order}"


def _bilinear_coefficient(rho: MPoly, i: int, j: int) -> GaussRat:
    """d^2 rho / dZ_i dxi_j at the origin = coefficient of Z_i * xi_j."""
    u = rho.universe
    exp = [0] * u.nvars
    exp[i] += 1
    exp[u.z_count + j] += 1
    return rho.terms.get(tuple(exp), ZERO)


def _z_gradient_at_origin(rho: MPoly) -> list[GaussRat]:
    u = rho.universe
    out = []
    for i in range(u.z_count):
        exp = [0] * u.nvars
        exp[i] = 1
        out.append(rho.terms.get(tuple(exp), ZERO))
    return out


def translate_defining(rho: MPoly, point: list[GaussRat]) -> MPoly:
    """Move the base point to the origin: Z := Z + p, xi := xi + conj(p)."""
    u = rho.universe
    if len(point) != u.z_count:
        raise UniverseMismatchError("base point has wrong length")
    mapping = {}
    for i, p in enumerate(point):
        mapping[i] = MPoly.variable(u, i) + MPoly.constant(u, p)
        j = u.z_count + i
        mapping[j] = MPoly.variable(u, j) + MPoly.constant(u, p.conj())
    return rho.subs(mapping)


def validate_hypersurface(rho: MPoly, dim: int) -> Hypersurface:
    """Check the hypersurface invariants and fix the normalization.

    The defining polynomial must vanish at the origin, be Hermitian and
    have nonzero Z-gradient there.  The stored representative is scaled
    by a real rational so its leading coefficient has real part 1 (or is
    exactly i when the real part vanishes); the scaling keeps the
    polynomial Hermitian and pins the transversality factor exactly
    rather than up to a unit.
    """
    u = rho.universe
    if u.z_count != dim + 1 or u.xi_count != dim + 1:
        raise UniverseMismatchError(
            f"universe blocks must both have {dim + 1} variables")
    if rho.constant_term():
        raise NotThroughOriginError(
            f"defining polynomial has value {rho.constant_term()} at the origin")
    if rho.bar() != rho:
        raise NotHermitianError("defining polynomial is not Hermitian")
    gradient = _z_gradient_at_origin(rho)
    if not any(gradient):
        raise ZeroGradientError("Z-gradient vanishes at the origin")

    _, lc = rho.leading_term()
    scale = lc.re if lc.re else lc.im
    rho = rho * GaussRat.of(1 / scale)

    gradient = _z_gradient_at_origin(rho)
    distinguished = None
    for j in reversed(range(dim + 1)):
        if rho.degree_in(j) == 1 and gradient[j]:
            if rho.coeff_of_power(j, 1).is_constant():
                distinguished = j
                break
            if distinguished is None:
                distinguished = j
    return Hypersurface(dim=dim, rho=rho, distinguished_w=distinguished)


def point_on_hypersurface(m: Hypersurface, point: list[GaussRat]) -> bool:
    values = list(point) + [p.conj() for p in point]
    return not m.rho.evaluate(values)


def levi_data(m: Hypersurface) -> LeviData:
    """Exact Levi data at the origin.

    The full matrix is the mixed second-derivative matrix of rho; the
    restricted matrix is its compression to the holomorphic tangent space
    ker(rho_Z(0)), conjugating the column-side basis.  The rank is exact.
    """
    n1 = m.dim + 1
    full = tuple(tuple(_bilinear_coefficient(m.rho, i, j) for j in range(n1))
                 for i in range(n1))
    gradient = tuple(_z_gradient_at_origin(m.rho))
    pivot = next(i for i in range(n1) if gradient[i])
    basis = []
    for k in range(n1):
        if k == pivot:
            continue
        vec = [ZERO] * n1
        vec[k] = ONE
        vec[pivot] = -(gradient[k] / gradient[pivot])
        basis.append(tuple(vec))
    restricted = tuple(
        tuple(sum((u_i * full[i][j] * v_j.conj()
                   for i, u_i in enumerate(u) if u_i
                   for j, v_j in enumerate(v) if v_j), ZERO)
              for v in basis)
        for u in basis)
    return LeviData(full_matrix=full, gradient=gradient,
                    tangent_basis=tuple(basis),
                    restricted_matrix=restricted,
                    rank=mat_rank(restricted) if basis else 0)


def normalize(m: Hypersurface, order: int = DEFAULT_TRUNC) -> NormalForm:
    """Graph form w = Q(z, chi, tau) in normal coordinates, to the given order.

    Three stages: a linear change sending the tangent directions to z and
    scaling the transversal direction so the solved graph starts at tau;
    an implicit solve for w; then degree-by-degree holomorphic changes in
    (z, w) killing the pure (chi = 0) dependence, with the conjugated
    change applied on the (chi, tau) side.  Both normalization identities
    and the reality identity are verified exactly through the order.
    """
    n = m.dim
    nf_u = VarUniverse.normal_space(n)
    gradient = _z_gradient_at_origin(m.rho)
    pivot = next(i for i in range(n + 1) if gradient[i])

    # Columns of the linear change: tangent vectors then the transversal
    # direction, scaled so d rho/d w at 0 becomes i * |c|^2.
    columns: list[list[GaussRat]] = []
    for k in range(n + 1):
        if k == pivot:
            continue
        col = [ZERO] * (n + 1)
        col[k] = ONE
        col[pivot] = -(gradient[k] / gradient[pivot])
        columns.append(col)
    # Scale the transversal direction so d rho/d w at 0 is purely
    # imaginary, which makes the solved graph start exactly at tau; an
    # already-imaginary derivative is left alone so hypersurfaces given
    # in normal form come back unchanged.
    trans = [ZERO] * (n + 1)
    c0 = gradient[pivot]
    trans[pivot] = ONE if not c0.re else I * c0.conj()
    columns.append(trans)

    mapping = {}
    for i in range(n + 1):
        z_expr = MPoly.zero(nf_u)
        xi_expr = MPoly.zero(nf_u)
        for k in range(n + 1):
            c = columns[k][i]
            if c:
                z_expr = z_expr + MPoly.variable(nf_u, k) * c
                xi_expr = xi_expr + MPoly.variable(nf_u, nf_u.z_count + k) * c.conj()
        mapping[i] = z_expr
        mapping[m.universe.z_count + i] = xi_expr
    rho_n = m.rho.subs(mapping, universe=nf_u)

    w_idx = n
    tau_idx = nf_u.z_count + n
    w_poly = MPoly.variable(nf_u, w_idx)
    tau_poly = MPoly.variable(nf_u, tau_idx)

    q = implicit_solve(rho_n, w_idx, order)
    if q.poly.homogeneous_part(1) != tau_poly:
        raise InternalConsistencyError("graph solution does not start at tau")

    transform = [TruncSeries.make(mapping[i], order) for i in range(n + 1)]

    for degree in range(2, order + 1):
        pure = q.poly.subs({nf_u.z_count + k: 0 for k in range(n)}) - tau_poly
        part = pure.homogeneous_part(degree)
        if part.is_zero():
            continue
        tau_pow = [0] * nf_u.nvars
        tau_pow[tau_idx] = degree
        c_d = part.terms.get(tuple(tau_pow), ZERO)
        if c_d + c_d.conj():
            raise InternalConsistencyError(
                "pure tangential coefficient is not purely imaginary")
        mixed = part - MPoly.monomial(nf_u, tuple(tau_pow), c_d) if c_d else part
        # Perturbation of the w-coordinate: old w = w + f(z, w).
        f_pert = mixed.subs({tau_idx: w_poly})
        if c_d:
            w_pow = [0] * nf_u.nvars
            w_pow[w_idx] = degree
            f_pert = f_pert + MPoly.monomial(nf_u, tuple(w_pow), c_d * HALF)
        f_bar = f_pert.bar()

        rhs = subs_series(q.poly, tau_idx,
                          TruncSeries.make(tau_poly + f_bar, order), order)
        current = rhs
        for _ in range(order + 2):
            nxt = rhs - subs_series(f_pert, w_idx, current, order)
            if nxt.poly == current.poly:
                break
            current = nxt
        else:
            raise InternalConsistencyError("normal-form fixed point did not converge")
        q = current
        shift = TruncSeries.make(w_poly + f_pert, order)
        transform = [subs_series(t.poly, w_idx, shift, order) for t in transform]

    _verify_normal_form(q, nf_u, n, order)
    return NormalForm(q=q, order=order, transform=tuple(transform), universe=nf_u)


def _verify_normal_form(q: TruncSeries, nf_u: VarUniverse, n: int, order: int):
    w_poly = MPoly.variable(nf_u, n)
    tau_poly = MPoly.variable(nf_u, nf_u.z_count + n)
    if q.poly.subs({nf_u.z_count + k: 0 for k in range(n)}) != tau_poly:
        raise InternalConsistencyError("normalization failed: Q(z,0,t) != t")
    if q.poly.subs({k: 0 for k in range(n)}) != tau_poly:
        raise InternalConsistencyError("normalization failed: Q(0,chi,t) != t")
    q_bar = q.poly.bar()
    res = subs_series(q.poly, nf_u.z_count + n,
                      TruncSeries.make(q_bar, order), order)
    if res.poly != w_poly.truncate_degree(order):
        raise InternalConsistencyError("reality identity residual is nonzero")


def finite_type_check(m: Hypersurface, order: int = DEFAULT_TRUNC) -> FiniteTypeResult:
    """Finite type at the origin iff Q(z, chi, 0) has a term of degree <= order.

    A positive answer is exact; a negative one is a semi-decision up to
    the truncation order (and exact whenever the graph is polynomial of
    degree within the order).
    """
    nf = normalize(m, order)
    tau_idx = nf.universe.z_count + m.dim
    restricted = nf.q.poly.subs({tau_idx: 0})
    return FiniteTypeResult(finite=not restricted.is_zero(), order=order)


def _graph_tau_data(m: Hypersurface):
    """(tau index, constant coefficient, remainder) when rho is
    affine-linear in the distinguished xi-variable with constant
    coefficient, so rho = c*tau + rest with rest free of tau."""
    if m.distinguished_w is None:
        return None
    tau_idx = m.universe.z_count + m.distinguished_w
    if m.rho.degree_in(tau_idx) != 1:
        return None
    lin = m.rho.coeff_of_power(tau_idx, 1)
    if not lin.is_constant():
        return None
    return tau_idx, lin.constant_term(), m.rho.coeff_of_power(tau_idx, 0)


def segre_substitute(m: Hypersurface, f: MPoly) -> MPoly:
    """Restrict f to the complexified hypersurface by eliminating tau.

    Exact when f does not involve tau at all, or when the graph solution
    tau = Qbar(chi, Z) is polynomial (constant linear coefficient).  In
    the remaining cases the solution is a genuine power series; use
    segre_substitute_series with an explicit order.
    """
    if m.distinguished_w is None:
        raise NonPolynomialRestrictionError(
            "hypersurface is not graph-capable (no distinguished variable)")
    tau_idx = m.universe.z_count + m.distinguished_w
    if f.degree_in(tau_idx) <= 0:
        return f
    data = _graph_tau_data(m)
    if data is None:
        raise NonPolynomialRestrictionError(
            "graph solution is not polynomial; use segre_substitute_series")
    tau_idx, c, rest = data
    q_bar = rest * (-c.inverse())
    return f.subs({tau_idx: q_bar})


def segre_substitute_series(m: Hypersurface, f: MPoly, order: int) -> TruncSeries:
    """Truncated restriction of f for non-polynomial graph solutions."""
    if m.distinguished_w is None:
        raise NonPolynomialRestrictionError(
            "hypersurface is not graph-capable (no distinguished variable)")
    tau_idx = m.universe.z_count + m.distinguished_w
    theta = implicit_solve(m.rho, tau_idx, order)
    return subs_series(f, tau_idx, theta, order)


def on_hypersurface_or_raise(m: Hypersurface, point: list[GaussRat]):
    if not point_on_hypersurface(m, point):
        raise PointNotOnHypersurfaceError(
            "point does not satisfy the defining equation exactly")
