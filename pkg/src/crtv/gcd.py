"""Multivariate GCD, contents and square-free parts over Q(i).

GCDs are computed by recursive content extraction: pick a main variable
shared by both inputs, split each into content times primitive part,
recurse on the contents, and run a primitive pseudo-remainder sequence on
the primitive parts.  Taking the primitive part after every pseudo-division
keeps coefficient growth tame at the scales this package works at.

Results are normalized monic under the global monomial order, and "unit"
means a nonzero constant throughout: the coefficient field is Q(i), so the
content of a univariate polynomial is always a unit and the recursion
bottoms out at constants.
"""

from __future__ import annotations

from crtv.poly import MPoly
from crtv.scalars import ONE


def coefficients_in_var(f: MPoly, var: int) -> list[MPoly]:
    """Nonzero coefficients of f viewed as univariate in var."""
    return [c for k in range(f.degree_in(var) + 1)
            if not (c := f.coeff_of_power(var, k)).is_zero()]


def content_and_primitive(f: MPoly, var: int) -> tuple[MPoly, MPoly]:
    """Split f = content * primitive with respect to one variable.

    The content is the (monic) GCD of the coefficients of f as a
    univariate polynomial in var; division by it is always exact.
    """
    cont = multivar_gcd(coefficients_in_var(f, var))
    pp = f.exact_quotient(cont)
    if pp is None:
        raise AssertionError("content must divide the polynomial")
    return cont, pp


def pseudo_remainder(f: MPoly, g: MPoly, var: int) -> MPoly:
    """Pseudo-remainder of f by g in the given variable (deg_v g >= 1)."""
    dg = g.degree_in(var)
    lc_g = g.coeff_of_power(var, dg)
    u = f.universe
    r = f
    while not r.is_zero() and r.degree_in(var) >= dg:
        dr = r.degree_in(var)
        lc_r = r.coeff_of_power(var, dr)
        shift = [0] * u.nvars
        shift[var] = dr - dg
        r = lc_g * r - MPoly.monomial(u, tuple(shift), ONE) * lc_r * g
    return r


def _gcd_pair(f: MPoly, g: MPoly) -> MPoly:
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return MPoly.one(f.universe)
    shared = sorted(f.support_variables() & g.support_variables())
    if not shared:
        return MPoly.one(f.universe)
    v = shared[0]
    cf, pf = content_and_primitive(f, v)
    cg, pg = content_and_primitive(g, v)
    cont = _gcd_pair(cf, cg)
    if pf.degree_in(v) < pg.degree_in(v):
        pf, pg = pg, pf
    while not pg.is_zero() and pg.degree_in(v) > 0:
        r = pseudo_remainder(pf, pg, v)
        pf, pg = pg, (r if r.is_zero() else content_and_primitive(r, v)[1])
    head = pf if pg.is_zero() else MPoly.one(f.universe)
    return (cont * head).monic()


def multivar_gcd(polys: list[MPoly]) -> MPoly:
    """Monic greatest common divisor of a nonempty family (zeros ignored)."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("gcd of an empty or all-zero family")
    nonzero.sort(key=lambda p: (p.total_degree(), len(p.terms)))
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        g = _gcd_pair(g, p)
    return g


def squarefree_part(f: MPoly) -> MPoly:
    """Product of the distinct irreducible factors of f, monic.

    Characteristic zero: dividing f by gcd(f, all partial derivatives)
    strips every repeated factor.
    """
    if f.is_zero():
        raise ValueError("square-free part of zero")
    if f.is_constant():
        return MPoly.one(f.universe)
    family = [f]
    for v in sorted(f.support_variables()):
        d = f.diff(v)
        if not d.is_zero():
            family.append(d)
    g = multivar_gcd(family)
    q = f.exact_quotient(g)
    if q is None:
        raise AssertionError("gcd with derivatives must divide the polynomial")
    return q.monic()
