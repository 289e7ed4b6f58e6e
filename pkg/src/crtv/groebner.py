"""Buchberger's algorithm under the global grevlex order.

Desk-scale only: S-pairs are processed in order of lcm degree, the
coprime-leading-term criterion prunes pairs, every basis element is kept
monic, and a hard cap on element degree aborts runaway computations.
"""

from __future__ import annotations

from crtv.errors import DegreeCapExceededError
from crtv.poly import Exponent, MPoly, grevlex_key
from crtv.scalars import ZERO


def _lcm_exp(e1: Exponent, e2: Exponent) -> Exponent:
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _divides(e1: Exponent, e2: Exponent) -> bool:
    return all(a <= b for a, b in zip(e1, e2))


def s_polynomial(f: MPoly, g: MPoly) -> MPoly:
    ef, cf = f.leading_term()
    eg, cg = g.leading_term()
    lcm = _lcm_exp(ef, eg)
    u = f.universe
    mf = MPoly.monomial(u, tuple(a - b for a, b in zip(lcm, ef)), cf.inverse())
    mg = MPoly.monomial(u, tuple(a - b for a, b in zip(lcm, eg)), cg.inverse())
    return mf * f - mg * g


def reduce_fully(f: MPoly, basis: list[MPoly]) -> MPoly:
    """Normal form of f modulo the basis (every term reduced)."""
    leads = [(b.leading_term()[0], b.leading_term()[1], b) for b in basis]
    p = f
    remainder: dict[Exponent, object] = {}
    while not p.is_zero():
        pe, pc = p.leading_term()
        hit = next(((le, lc, b) for le, lc, b in leads if _divides(le, pe)), None)
        if hit is None:
            prev = remainder.get(pe, ZERO)
            total = prev + pc
            if total:
                remainder[pe] = total
            p = p - MPoly.monomial(p.universe, pe, pc)
        else:
            le, lc, b = hit
            mono = MPoly.monomial(p.universe,
                                  tuple(a - c for a, c in zip(pe, le)), pc / lc)
            p = p - mono * b
    return MPoly(f.universe, remainder)


def buchberger(generators: list[MPoly], degree_cap: int = 20) -> list[MPoly]:
    """Reduced monic grevlex basis of the ideal; deterministic output.

    Raises DegreeCapExceededError when any intermediate element exceeds
    the cap in total degree.
    """
    basis = []
    for g in generators:
        if not g.is_zero():
            basis.append(g.monic())
    if not basis:
        return []
    basis.sort(key=lambda p: grevlex_key(p.leading_term()[0]))
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]

    def pair_key(pair):
        i, j = pair
        lcm = _lcm_exp(basis[i].leading_term()[0], basis[j].leading_term()[0])
        return (sum(lcm), i, j)

    while pairs:
        pairs.sort(key=pair_key)
        i, j = pairs.pop(0)
        ei = basis[i].leading_term()[0]
        ej = basis[j].leading_term()[0]
        if _lcm_exp(ei, ej) == tuple(a + b for a, b in zip(ei, ej)):
            continue  # coprime leading terms reduce to zero
        h = reduce_fully(s_polynomial(basis[i], basis[j]), basis)
        if h.is_zero():
            continue
        h = h.monic()
        if h.total_degree() > degree_cap:
            raise DegreeCapExceededError(
                f"basis element of degree {h.total_degree()} exceeds cap {degree_cap}")
        basis.append(h)
        pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return _reduce_basis(basis)


def _reduce_basis(basis: list[MPoly]) -> list[MPoly]:
    # drop elements whose leading term another element's leading term divides
    kept: list[MPoly] = []
    leads = [b.leading_term()[0] for b in basis]
    for k, b in enumerate(basis):
        lt = leads[k]
        if any(m != k and _divides(leads[m], lt)
               and not (leads[m] == lt and m > k) for m in range(len(basis))):
            continue
        kept.append(b)
    reduced = []
    for k, b in enumerate(kept):
        others = kept[:k] + kept[k + 1:]
        nf = reduce_fully(b, others) if others else b
        if not nf.is_zero():
            reduced.append(nf.monic())
    reduced.sort(key=lambda p: grevlex_key(p.leading_term()[0]))
    return reduced


def is_groebner(basis: list[MPoly]) -> bool:
    for j in range(len(basis)):
        for i in range(j):
            if not reduce_fully(s_polynomial(basis[i], basis[j]), basis).is_zero():
                return False
    return True


def pure_power_variables(basis: list[MPoly], var_indices) -> set[int]:
    """Variables that appear as a pure power among the leading terms."""
    found = set()
    for b in basis:
        lt, _ = b.leading_term()
        support = [k for k, e in enumerate(lt) if e]
        if len(support) == 1 and support[0] in var_indices:
            found.add(support[0])
    return found
