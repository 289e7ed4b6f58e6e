"""Sparse multivariate polynomials over the Gaussian rationals.

A VarUniverse declares the variables once, split into a Z-block and a
xi-block; every polynomial refers to exactly one universe.  The xi-block
plays the role of the conjugated variables after complexification, so a
real point corresponds to xi = conj(Z).

Terms map exponent tuples (one entry per variable) to nonzero GaussRat
coefficients; the zero polynomial is the empty map and equality is
structural.  The global monomial order is graded reverse lexicographic
with the Z-block preceding the xi-block.  Leading terms, single-divisor
division and GCD normalization all refer to this one order, so "monic"
and "leading coefficient" mean the same thing everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from crtv.errors import UniverseMismatchError
from crtv.scalars import GaussRat, ONE, ZERO

Exponent = tuple[int, ...]


def grevlex_key(exp: Exponent):
    """Sort key: exponents compare by total degree, ties broken reverse
    lexicographically (larger key means larger monomial)."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class VarUniverse:
    """A fixed set of variables split into a Z-block and a xi-block."""

    z_names: tuple[str, ...]
    xi_names: tuple[str, ...]

    @classmethod
    def standard(cls, z_count: int, xi_count: int | None = None,
                 z_prefix: str = "Z", xi_prefix: str = "XI") -> "VarUniverse":
        if xi_count is None:
            xi_count = z_count
        return cls(tuple(f"{z_prefix}{k + 1}" for k in range(z_count)),
                   tuple(f"{xi_prefix}{k + 1}" for k in range(xi_count)))

    @classmethod
    def source_space(cls, n: int) -> "VarUniverse":
        """Ambient C^{n+1} for a source hypersurface: Z1..Z{n+1}, XI1..XI{n+1}."""
        return cls.standard(n + 1)

    @classmethod
    def target_space(cls, big_n: int) -> "VarUniverse":
        """Ambient C^{N+1} for a target hypersurface: ZP1.., XIP1.. ."""
        return cls.standard(big_n + 1, z_prefix="ZP", xi_prefix="XIP")

    @classmethod
    def normal_space(cls, n: int) -> "VarUniverse":
        """Normal-coordinate universe (z1..zn, w | x1..xn, t)."""
        return cls(tuple(f"z{k + 1}" for k in range(n)) + ("w",),
                   tuple(f"x{k + 1}" for k in range(n)) + ("t",))

    @property
    def z_count(self) -> int:
        return len(self.z_names)

    @property
    def xi_count(self) -> int:
        return len(self.xi_names)

    @property
    def nvars(self) -> int:
        return len(self.z_names) + len(self.xi_names)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return self.z_names + self.xi_names

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.names)}

    def try_index(self, name: str) -> int | None:
        return self._index.get(name)

    def is_symmetric(self) -> bool:
        return self.z_count == self.xi_count

    def xi_partner(self, z_index: int) -> int:
        """Universe index of the xi-variable conjugate to Z-variable z_index."""
        return self.z_count + z_index


class MPoly:
    """A sparse polynomial; construct through the factory classmethods."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: VarUniverse, terms: dict[Exponent, GaussRat]):
        self.universe = universe
        self.terms = terms

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_terms(cls, universe: VarUniverse,
                   items: Iterable[tuple[Exponent, GaussRat]]) -> "MPoly":
        nvars = universe.nvars
        acc: dict[Exponent, GaussRat] = {}
        for exp, coeff in items:
            exp = tuple(exp)
            if len(exp) != nvars:
                raise UniverseMismatchError(
                    f"exponent vector of length {len(exp)}, universe has {nvars} variables")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            c = GaussRat.of(coeff)
            prev = acc.get(exp)
            c = c if prev is None else prev + c
            if c:
                acc[exp] = c
            else:
                acc.pop(exp, None)
        return cls(universe, acc)

    @classmethod
    def zero(cls, universe: VarUniverse) -> "MPoly":
        return cls(universe, {})

    @classmethod
    def one(cls, universe: VarUniverse) -> "MPoly":
        return cls.constant(universe, ONE)

    @classmethod
    def constant(cls, universe: VarUniverse, value) -> "MPoly":
        c = GaussRat.of(value)
        if not c:
            return cls(universe, {})
        return cls(universe, {(0,) * universe.nvars: c})

    @classmethod
    def variable(cls, universe: VarUniverse, index: int) -> "MPoly":
        if not 0 <= index < universe.nvars:
            raise UniverseMismatchError(f"variable index {index} out of range")
        exp = [0] * universe.nvars
        exp[index] = 1
        return cls(universe, {tuple(exp): ONE})

    @classmethod
    def monomial(cls, universe: VarUniverse, exp: Exponent, coeff) -> "MPoly":
        return cls.from_terms(universe, [(exp, coeff)])

    # ------------------------------------------------------------------
    # predicates and accessors

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> GaussRat:
        return self.terms.get((0,) * self.universe.nvars, ZERO)

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def support_variables(self) -> set[int]:
        used: set[int] = set()
        for exp in self.terms:
            for k, e in enumerate(exp):
                if e:
                    used.add(k)
        return used

    def leading_term(self) -> tuple[Exponent, GaussRat]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=grevlex_key)
        return exp, self.terms[exp]

    def sorted_terms(self) -> list[tuple[Exponent, GaussRat]]:
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]),
                      reverse=True)

    def _check_universe(self, other: "MPoly"):
        if self.universe != other.universe:
            raise UniverseMismatchError("operands live in different universes")

    # ------------------------------------------------------------------
    # ring operations

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction, GaussRat)):
            return MPoly.constant(self.universe, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._check_universe(o)
        out = dict(self.terms)
        for exp, c in o.terms.items():
            prev = out.get(exp)
            c = c if prev is None else prev + c
            if c:
                out[exp] = c
            else:
                out.pop(exp, None)
        return MPoly(self.universe, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.universe, {e: -c for e, c in self.terms.items()})

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
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.of(other)
            if not c:
                return MPoly(self.universe, {})
            return MPoly(self.universe,
                         {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_universe(other)
        out: dict[Exponent, GaussRat] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = out.get(exp)
                c = c if prev is None else prev + c
                if c:
                    out[exp] = c
                else:
                    out.pop(exp, None)
        return MPoly(self.universe, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MPoly.one(self.universe)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            o = self._coerce(other)
            if o is None:
                return NotImplemented
            other = o
        return self.universe == other.universe and self.terms == other.terms

    __hash__ = None

    # ------------------------------------------------------------------
    # calculus and structure

    def diff(self, var: int) -> "MPoly":
        """Formal partial derivative with respect to one variable."""
        out: dict[Exponent, GaussRat] = {}
        for exp, c in self.terms.items():
            e = exp[var]
            if not e:
                continue
            ne = exp[:var] + (e - 1,) + exp[var + 1:]
            nc = c * e
            prev = out.get(ne)
            nc = nc if prev is None else prev + nc
            if nc:
                out[ne] = nc
            else:
                out.pop(ne, None)
        return MPoly(self.universe, out)

    def bar(self) -> "MPoly":
        """The bar involution: conjugate coefficients, swap the Z-block
        with the xi-block.  Requires equal block sizes."""
        u = self.universe
        if not u.is_symmetric():
            raise UniverseMismatchError("bar involution needs a symmetric universe")
        zc = u.z_count
        return MPoly(u, {exp[zc:] + exp[:zc]: c.conj()
                         for exp, c in self.terms.items()})

    def coeff_of_power(self, var: int, k: int) -> "MPoly":
        """Coefficient of var**k, as a polynomial with that variable zeroed."""
        out = {}
        for exp, c in self.terms.items():
            if exp[var] == k:
                out[exp[:var] + (0,) + exp[var + 1:]] = c
        return MPoly(self.universe, out)

    def split_by_exponents(self, var_indices: Sequence[int]) -> dict[Exponent, "MPoly"]:
        """Group terms by their exponents on the given variables.

        Keys are the restricted exponent tuples (aligned with var_indices);
        values are polynomials with those variables zeroed out.
        """
        idx = tuple(var_indices)
        groups: dict[Exponent, dict[Exponent, GaussRat]] = {}
        for exp, c in self.sorted_terms():
            key = tuple(exp[i] for i in idx)
            rest = list(exp)
            for i in idx:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: MPoly(self.universe, t) for k, t in groups.items()}

    def homogeneous_part(self, degree: int) -> "MPoly":
        return MPoly(self.universe,
                     {e: c for e, c in self.terms.items() if sum(e) == degree})

    def truncate_degree(self, order: int) -> "MPoly":
        return MPoly(self.universe,
                     {e: c for e, c in self.terms.items() if sum(e) <= order})

    def monic(self) -> "MPoly":
        """Scale so the leading coefficient is 1."""
        _, lc = self.leading_term()
        return self * lc.inverse()

    # ------------------------------------------------------------------
    # substitution and evaluation

    def subs(self, mapping: Mapping[int, object],
             universe: VarUniverse | None = None) -> "MPoly":
        """Exact substitution of polynomials or scalars for variables.

        All polynomial replacement values must share one universe.  When
        that universe equals this polynomial's, unmapped variables are
        kept; otherwise every variable occurring here must be mapped and
        the result lives in the replacement universe.
        """
        target_u: VarUniverse | None = None
        vals: dict[int, object] = {}
        for idx, v in mapping.items():
            if not 0 <= idx < self.universe.nvars:
                raise UniverseMismatchError(f"variable index {idx} out of range")
            if isinstance(v, MPoly):
                if target_u is None:
                    target_u = v.universe
                elif v.universe != target_u:
                    raise UniverseMismatchError(
                        "replacement polynomials live in different universes")
            vals[idx] = v
        if target_u is None:
            target_u = universe if universe is not None else self.universe
        elif universe is not None and universe != target_u:
            raise UniverseMismatchError("explicit universe disagrees with replacements")
        cross = target_u != self.universe
        polys: dict[int, MPoly] = {}
        for idx, v in vals.items():
            polys[idx] = v if isinstance(v, MPoly) else MPoly.constant(target_u, v)
        if cross:
            missing = self.support_variables() - polys.keys()
            if missing:
                names = ", ".join(self.universe.names[i] for i in sorted(missing))
                raise UniverseMismatchError(
                    f"cross-universe substitution leaves variables unmapped: {names}")

        powers: dict[int, list[MPoly]] = {i: [MPoly.one(target_u), p]
                                          for i, p in polys.items()}

        def power(i: int, e: int) -> MPoly:
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * cache[1])
            return cache[e]

        acc: dict[Exponent, GaussRat] = {}
        for exp, c in self.terms.items():
            if cross:
                kept = (0,) * target_u.nvars
            else:
                kept = tuple(0 if i in polys else e for i, e in enumerate(exp))
            term = MPoly.monomial(target_u, kept, c)
            for i, e in enumerate(exp):
                if e and i in polys:
                    term = term * power(i, e)
            for e2, c2 in term.terms.items():
                prev = acc.get(e2)
                c2 = c2 if prev is None else prev + c2
                if c2:
                    acc[e2] = c2
                else:
                    acc.pop(e2, None)
        return MPoly(target_u, acc)

    def evaluate(self, values: Sequence[GaussRat]) -> GaussRat:
        """Evaluate at a point given as one GaussRat per variable."""
        if len(values) != self.universe.nvars:
            raise UniverseMismatchError("point has wrong number of coordinates")
        total = ZERO
        for exp, c in self.terms.items():
            prod = c
            for i, e in enumerate(exp):
                if e:
                    prod = prod * values[i] ** e
            total = total + prod
        return total

    # ------------------------------------------------------------------
    # division

    def divmod_single(self, g: "MPoly") -> tuple["MPoly", "MPoly"]:
        """Single-divisor division under the global monomial order.

        Returns (q, r) with self = q*g + r, where no term of r is
        divisible by the leading term of g.  The remainder is zero if
        and only if g divides self exactly, because leading terms are
        multiplicative.
        """
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        self._check_universe(g)
        gexp, gc = g.leading_term()
        p = dict(self.terms)
        q: dict[Exponent, GaussRat] = {}
        r: dict[Exponent, GaussRat] = {}
        while p:
            pe = max(p, key=grevlex_key)
            pc = p[pe]
            diff = tuple(a - b for a, b in zip(pe, gexp))
            if all(d >= 0 for d in diff):
                coeff = pc / gc
                q[diff] = coeff
                for e2, c2 in g.terms.items():
                    ne = tuple(a + b for a, b in zip(diff, e2))
                    nc = p.get(ne, ZERO) - coeff * c2
                    if nc:
                        p[ne] = nc
                    else:
                        p.pop(ne, None)
            else:
                r[pe] = pc
                del p[pe]
        return MPoly(self.universe, q), MPoly(self.universe, r)

    def exact_quotient(self, g: "MPoly") -> "MPoly | None":
        """self / g when the division is exact, else None."""
        q, r = self.divmod_single(g)
        return q if r.is_zero() else None

    # ------------------------------------------------------------------
    # printing

    def to_string(self) -> str:
        """Canonical display; parsing the result reproduces this polynomial."""
        if not self.terms:
            return "0"
        names = self.universe.names
        pieces: list[str] = []
        for k, (exp, c) in enumerate(self.sorted_terms()):
            mono = "*".join(f"{names[i]}^{e}" if e > 1 else names[i]
                            for i, e in enumerate(exp) if e)
            negative, coeff_txt = _coeff_display(c, bool(mono))
            if coeff_txt and mono:
                body = f"{coeff_txt}*{mono}"
            else:
                body = coeff_txt or mono
            if k == 0:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"MPoly({self.to_string()})"


def _coeff_display(c: GaussRat, has_monomial: bool) -> tuple[bool, str]:
    """Split a coefficient into a displayed sign and text.

    Empty text means the coefficient is +-1 next to a monomial and can be
    omitted.  Mixed complex coefficients are parenthesized with the sign
    kept inside, so the printed form stays within the expression grammar.
    """
    if not c.im:
        negative = c.re < 0
        mag = abs(c.re)
        if mag == 1 and has_monomial:
            return negative, ""
        return negative, str(mag)
    if not c.re:
        negative = c.im < 0
        mag = abs(c.im)
        return negative, "i" if mag == 1 else f"{mag}*i"
    imag = "i" if abs(c.im) == 1 else f"{abs(c.im)}*i"
    sign = "+" if c.im > 0 else "-"
    return False, f"({c.re}{sign}{imag})"
