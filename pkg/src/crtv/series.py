"""Truncated formal power series and implicit graph solving.

A TruncSeries is a polynomial with every monomial of total degree above
its order discarded.  Arithmetic truncates to the smaller operand order,
and agrees with polynomial arithmetic followed by truncation.  Series
appear only as an internal carrier: inputs to the package are polynomial,
but normal coordinates and non-graph restrictions are genuine series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from crtv.errors import DegenerateImplicitError, InternalConsistencyError
from crtv.poly import MPoly
from crtv.scalars import GaussRat, ZERO


def mul_truncated(f: MPoly, g: MPoly, order: int) -> MPoly:
    """Product with monomials above the order dropped during expansion."""
    f._check_universe(g)
    gitems = [(e, sum(e), c) for e, c in g.terms.items() if sum(e) <= order]
    acc: dict[tuple, GaussRat] = {}
    for e1, c1 in f.terms.items():
        d1 = sum(e1)
        if d1 > order:
            continue
        for e2, d2, c2 in gitems:
            if d1 + d2 > order:
                continue
            exp = tuple(a + b for a, b in zip(e1, e2))
            c = c1 * c2
            prev = acc.get(exp)
            c = c if prev is None else prev + c
            if c:
                acc[exp] = c
            else:
                acc.pop(exp, None)
    return MPoly(f.universe, acc)


@dataclass(frozen=True)
class TruncSeries:
    poly: MPoly
    order: int

    @classmethod
    def make(cls, poly: MPoly, order: int) -> "TruncSeries":
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        return cls(poly.truncate_degree(order), order)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (MPoly, int, Fraction, GaussRat)):
            p = other if isinstance(other, MPoly) else MPoly.constant(self.poly.universe, other)
            return TruncSeries.make(p, self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order = min(self.order, o.order)
        return TruncSeries.make(self.poly + o.poly, order)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(-self.poly, self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order = min(self.order, o.order)
        return TruncSeries(mul_truncated(self.poly, o.poly, order), order)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self) -> str:
        return f"{self.poly} + O(deg {self.order + 1})"

    __repr__ = __str__


def subs_series(f: MPoly, var: int, series: TruncSeries,
                order: int | None = None) -> TruncSeries:
    """Substitute a series for one variable of a polynomial, truncated.

    Simultaneous semantics: each occurrence is replaced once, so the
    series may itself involve the substituted variable.
    """
    if series.poly.universe != f.universe:
        raise ValueError("series lives in a different universe")
    k_max = f.degree_in(var)
    order = series.order if order is None else min(order, series.order)
    acc = MPoly.zero(f.universe)
    power = MPoly.one(f.universe)
    for k in range(max(k_max, 0) + 1):
        coeff = f.coeff_of_power(var, k)
        if not coeff.is_zero():
            acc = acc + mul_truncated(coeff, power, order)
        if k < k_max:
            power = mul_truncated(power, series.poly, order)
    return TruncSeries.make(acc, order)


def implicit_solve(rho: MPoly, solve_var: int, order: int) -> TruncSeries:
    """Solve rho = 0 for one variable as a truncated series in the rest.

    Requires rho(0) = 0 and a nonzero linear coefficient on the solve
    variable at the origin; the solution theta satisfies theta(0) = 0 and
    rho with solve_var := theta vanishes identically through the given
    total degree.  Built degree by degree: at each step the lowest
    homogeneous part of the residual is cancelled using the constant
    linear coefficient.
    """
    if rho.constant_term():
        raise DegenerateImplicitError("defining polynomial does not vanish at 0")
    c = rho.diff(solve_var).constant_term()
    if not c:
        raise DegenerateImplicitError(
            "degenerate linear coefficient at 0 for the solve variable")
    c_inv = c.inverse()
    theta = TruncSeries.make(MPoly.zero(rho.universe), order)
    for degree in range(1, order + 1):
        residual = subs_series(rho, solve_var, theta, order)
        if residual.is_zero():
            break
        low = residual.poly.homogeneous_part(degree)
        if low.is_zero():
            continue
        theta = TruncSeries.make(theta.poly - low * c_inv, order)
    final = subs_series(rho, solve_var, theta, order)
    if not final.is_zero():
        raise InternalConsistencyError("implicit solution residual is nonzero")
    return theta
