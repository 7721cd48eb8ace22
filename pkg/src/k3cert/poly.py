"""Exact polynomial arithmetic: sparse multivariate polynomials over Z, Q,
Z/m, F_p and F_{p^k}, plus dense univariate machinery (gcd, squarefree parts,
distinct-degree / Cantor-Zassenhaus factorization) and Sylvester resultants.

Terms are kept sorted under the ring's active monomial order so leading-term
access is O(1); all values are immutable and safe to share across workers.
"""
from __future__ import annotations

import hashlib
import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from .arith import (
    ExtField,
    ExtFieldElement,
    gcd as int_gcd,
    inverse_mod,
    is_probable_prime,
    legendre,
    tonelli_shanks,
)

Monomial = Tuple[int, ...]


# ---------------------------------------------------------------------------
# coefficient domains

class Domain:
    """Coefficient domain protocol: exact ring ops on raw payloads."""

    is_field = False
    char = 0

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def eq(self, a, b) -> bool:
        return a == b

    def div(self, a, b):
        raise NotImplementedError(f"{self} has no division")

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items(),
                                                       key=lambda kv: kv[0])))) \
            if not any(isinstance(v, ExtField) for v in self.__dict__.values()) \
            else id(self)


class IntegerDomain(Domain):
    char = 0

    def from_int(self, n: int) -> int:
        return n

    def div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ValueError("inexact integer division")
        return q

    def __repr__(self):
        return "Z"


class RationalDomain(Domain):
    is_field = True
    char = 0

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def div(self, a, b):
        return Fraction(a) / b

    def __repr__(self):
        return "Q"


class IntegerModDomain(Domain):
    """Z/m with int payloads in [0, m); a field when m is prime."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must exceed 1")
        self.m = m
        self.is_field = is_probable_prime(m)
        self.char = m if self.is_field else m  # additive exponent either way

    def from_int(self, n: int) -> int:
        return n % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return a * b % self.m

    def neg(self, a):
        return -a % self.m

    def div(self, a, b):
        return a * inverse_mod(b, self.m) % self.m

    def pth_root(self, a):
        # Frobenius is the identity on the prime field
        if not self.is_field:
            raise NotImplementedError("p-th roots need a field")
        return a

    def order(self) -> int:
        return self.m

    def element_from_index(self, n: int):
        return n % self.m

    def __repr__(self):
        return f"F{self.m}" if self.is_field else f"Z/{self.m}"


def GF(p: int) -> IntegerModDomain:
    dom = IntegerModDomain(p)
    if not dom.is_field:
        raise ValueError(f"{p} is not prime")
    return dom


class ExtDomain(Domain):
    """Finite extension field; payloads are ExtFieldElement values."""

    is_field = True

    def __init__(self, field: ExtField):
        self.field = field
        self.char = field.p

    def from_int(self, n: int) -> ExtFieldElement:
        return self.field.coerce(n)

    def div(self, a, b):
        return a / b

    def pth_root(self, a):
        return a ** (self.field.order() // self.field.p)

    def order(self) -> int:
        return self.field.order()

    def element_from_index(self, n: int):
        # base-(suborder) digit expansion spans the whole field, towers too
        field = self.field
        base = field.base
        sub = base if isinstance(base, int) else base.order()
        digits = []
        n %= field.order()
        for _ in range(field.degree):
            d = n % sub
            n //= sub
            if isinstance(base, int):
                digits.append(d)
            else:
                digits.append(ExtDomain(base).element_from_index(d))
        out = field.zero
        for i, dig in enumerate(reversed(digits)):
            out = out * field.gen + field.coerce(dig)
        return out

    def __repr__(self):
        return f"F{self.field.order()}"

    def __eq__(self, other):
        return isinstance(other, ExtDomain) and self.field is other.field

    def __hash__(self):
        return id(self.field)


ZZ = IntegerDomain()
QQ = RationalDomain()


# ---------------------------------------------------------------------------
# monomial orders

class MonomialOrder:
    """Total order on exponent tuples: grevlex, lex, or a two-block
    elimination order (grevlex within each block, first block dominates)."""

    def __init__(self, kind: str, split: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown order {kind!r}")
        if kind == "block" and split <= 0:
            raise ValueError("block order needs a positive split point")
        self.kind = kind
        self.split = split if kind == "block" else 0

    @staticmethod
    def _grevlex_key(exps: Monomial):
        return (sum(exps), tuple(-e for e in reversed(exps)))

    def key(self, exps: Monomial):
        if self.kind == "grevlex":
            return self._grevlex_key(exps)
        if self.kind == "lex":
            return exps
        return (self._grevlex_key(exps[:self.split]),
                self._grevlex_key(exps[self.split:]))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and \
            (self.kind, self.split) == (other.kind, other.split)

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        if self.kind == "block":
            return f"block({self.split})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# polynomial ring and elements

class PolyRing:
    def __init__(self, variables: Sequence[str], domain: Domain,
                 order: MonomialOrder = GREVLEX):
        if len(set(variables)) != len(variables) or not variables:
            raise ValueError("variables must be nonempty and distinct")
        self.variables = tuple(variables)
        self.nvars = len(self.variables)
        self.domain = domain
        self.order = order

    def gens(self) -> Tuple["Polynomial", ...]:
        one = self.domain.from_int(1)
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(Polynomial(self, {tuple(e): one}))
        return tuple(out)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        if isinstance(c, int):
            c = self.domain.from_int(c)
        if self.domain.is_zero(c):
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def from_terms(self, terms: Iterable[Tuple[Monomial, object]]) -> "Polynomial":
        acc: dict = {}
        for mon, c in terms:
            if isinstance(c, int):
                c = self.domain.from_int(c)
            if tuple(mon) in acc:
                c = self.domain.add(acc[tuple(mon)], c)
            acc[tuple(mon)] = c
        return Polynomial(self, acc)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.domain, order)

    def with_domain(self, domain: Domain) -> "PolyRing":
        return PolyRing(self.variables, domain, self.order)

    def var_index(self, name: str) -> int:
        return self.variables.index(name)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and \
            (self.variables, self.domain, self.order) == \
            (other.variables, other.domain, other.order)

    def __hash__(self):
        return hash((self.variables, self.domain, self.order))

    def __repr__(self):
        return f"{self.domain}[{', '.join(self.variables)}; {self.order}]"


class Polynomial:
    """Sparse exact polynomial; terms stored sorted descending under the
    ring's order, no zero coefficients, no duplicate monomials."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, coeffs: dict):
        dom = ring.domain
        cleaned = [(m, c) for m, c in coeffs.items() if not dom.is_zero(c)]
        cleaned.sort(key=lambda mc: ring.order.key(mc[0]), reverse=True)
        self.ring = ring
        self.terms: Tuple[Tuple[Monomial, object], ...] = tuple(cleaned)

    # -- basic structure ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def leading_term(self) -> Tuple[Monomial, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def leading_monomial(self) -> Monomial:
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def coefficient(self, mon: Monomial):
        for m, c in self.terms:
            if m == tuple(mon):
                return c
        return self.ring.domain.from_int(0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(m[var] for m, _ in self.terms)

    def is_homogeneous(self, weights: Optional[Sequence[int]] = None) -> bool:
        if not self.terms:
            return True
        w = weights or (1,) * self.ring.nvars
        degs = {sum(e * wi for e, wi in zip(m, w)) for m, _ in self.terms}
        return len(degs) == 1

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------------
    def _same_ring(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("mixed rings")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._same_ring(other)
        dom = self.ring.domain
        acc = dict(self.terms)
        for m, c in other.terms:
            if m in acc:
                acc[m] = dom.add(acc[m], c)
            else:
                acc[m] = c
        return Polynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        return Polynomial(self.ring, {m: dom.neg(c) for m, c in self.terms})

    def __sub__(self, other):
        return self + (-self._same_ring(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("mixed rings")
            dom = self.ring.domain
            acc: dict = {}
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    prod = dom.mul(c1, c2)
                    if m in acc:
                        acc[m] = dom.add(acc[m], prod)
                    else:
                        acc[m] = prod
            return Polynomial(self.ring, acc)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        dom = self.ring.domain
        if isinstance(c, int):
            c = dom.from_int(c)
        return Polynomial(self.ring,
                          {m: dom.mul(co, c) for m, co in self.terms})

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Exact division; raises ValueError when the division fails."""
        other = self._same_ring(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        dom = self.ring.domain
        rem = self
        quot: dict = {}
        lm, lc = other.leading_term()
        while rem.terms:
            m, c = rem.leading_term()
            qm = tuple(a - b for a, b in zip(m, lm))
            if any(e < 0 for e in qm):
                raise ValueError("inexact polynomial division")
            qc = dom.div(c, lc)
            quot[qm] = qc
            rem = rem - Polynomial(self.ring, {qm: qc}) * other
        return Polynomial(self.ring, quot)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # -- calculus and substitution -------------------------------------------
    def partial_derivative(self, var: int) -> "Polynomial":
        dom = self.ring.domain
        acc: dict = {}
        for m, c in self.terms:
            e = m[var]
            if e == 0:
                continue
            dm = m[:var] + (e - 1,) + m[var + 1:]
            dc = dom.mul(c, dom.from_int(e))
            if dom.is_zero(dc):
                continue
            acc[dm] = dom.add(acc[dm], dc) if dm in acc else dc
        return Polynomial(self.ring, acc)

    def evaluate(self, point: Sequence, domain: Optional[Domain] = None):
        """Exact value of the polynomial at a point; values may live in a
        stated extension of the coefficient domain."""
        if len(point) != self.ring.nvars:
            raise ValueError("point arity mismatch")
        dom = domain or self.ring.domain
        vals = [v if not isinstance(v, int) else dom.from_int(v)
                for v in point]
        total = dom.from_int(0)
        # cache variable powers across terms
        powers: list[dict] = [{0: dom.from_int(1)} for _ in vals]
        for m, c in self.terms:
            term = dom.from_int(c) if isinstance(c, int) else c
            if domain is not None and isinstance(c, int):
                term = dom.from_int(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                cache = powers[i]
                if e not in cache:
                    cache[e] = _pow_cached(cache, vals[i], e, dom)
                term = dom.mul(term, cache[e])
            total = dom.add(total, term)
        return total

    def substitute_linear(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose with one image polynomial per variable (images share a
        common ring); exact for arbitrary, not just linear, images."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        target = None
        imgs = []
        for im in images:
            if isinstance(im, Polynomial):
                target = im.ring
        if target is None:
            raise ValueError("at least one image must be a polynomial")
        for im in images:
            imgs.append(im if isinstance(im, Polynomial)
                        else target.constant(im))
        out = target.zero()
        pow_cache: list[dict] = [{} for _ in imgs]
        for m, c in self.terms:
            term = target.constant(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if e not in pow_cache[i]:
                    pow_cache[i][e] = imgs[i] ** e
                term = term * pow_cache[i][e]
            out = out + term
        return out

    def substitute_values(self, assignment: dict) -> "Polynomial":
        """Plug constants in for a subset of variables; the result lives in
        the ring on the remaining variables."""
        names = [v for v in self.ring.variables if v not in assignment]
        if not names:
            raise ValueError("use evaluate for a full assignment")
        sub = PolyRing(names, self.ring.domain, self.ring.order)
        dom = self.ring.domain
        vals = {self.ring.var_index(v): (dom.from_int(a) if isinstance(a, int)
                                         else a)
                for v, a in assignment.items()}
        keep = [i for i, v in enumerate(self.ring.variables)
                if v not in assignment]
        acc: dict = {}
        for m, c in self.terms:
            coeff = c
            ok = True
            for i, val in vals.items():
                e = m[i]
                if e:
                    coeff = dom.mul(coeff, _pow_value(val, e, dom))
            if dom.is_zero(coeff):
                continue
            nm = tuple(m[i] for i in keep)
            acc[nm] = dom.add(acc[nm], coeff) if nm in acc else coeff
        return Polynomial(sub, acc)

    def reduce_mod(self, m: int) -> "Polynomial":
        """Coefficientwise reduction of an integer polynomial modulo m."""
        if not isinstance(self.ring.domain, IntegerDomain):
            raise ValueError("reduce_mod applies to integer polynomials")
        if m < 2:
            raise ValueError("modulus must be at least 2")
        dom = IntegerModDomain(m)
        ring = self.ring.with_domain(dom)
        return Polynomial(ring, {mon: c % m for mon, c in self.terms})

    def map_domain(self, domain: Domain) -> "Polynomial":
        ring = self.ring.with_domain(domain)
        acc = {}
        for m, c in self.terms:
            if isinstance(c, int):
                acc[m] = domain.from_int(c)
            elif isinstance(c, Fraction):
                if c.denominator == 1:
                    acc[m] = domain.from_int(c.numerator)
                else:
                    acc[m] = domain.div(domain.from_int(c.numerator),
                                        domain.from_int(c.denominator))
            else:
                acc[m] = c
        return Polynomial(ring, acc)

    def with_order(self, order: MonomialOrder) -> "Polynomial":
        return Polynomial(self.ring.with_order(order), dict(self.terms))

    # -- integer content ------------------------------------------------------
    def content(self) -> int:
        if not isinstance(self.ring.domain, IntegerDomain):
            raise ValueError("content applies to integer polynomials")
        g = 0
        for _, c in self.terms:
            g = int_gcd(g, c)
        return g

    def primitive(self) -> "Polynomial":
        """Divide out the content and normalize the leading sign positive."""
        g = self.content()
        if g == 0:
            return self
        if self.leading_coefficient() < 0:
            g = -g
        return Polynomial(self.ring, {m: c // g for m, c in self.terms})

    def clear_denominators(self) -> "Polynomial":
        """Rational polynomial to primitive integer polynomial (same zeros)."""
        if isinstance(self.ring.domain, IntegerDomain):
            return self.primitive()
        if not isinstance(self.ring.domain, RationalDomain):
            raise ValueError("expects a rational polynomial")
        den = 1
        for _, c in self.terms:
            den = den * c.denominator // int_gcd(den, c.denominator)
        ring = self.ring.with_domain(ZZ)
        out = Polynomial(ring, {m: int(c * den) for m, c in self.terms})
        return out.primitive()

    # -- comparisons and formatting -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __repr__(self):
        return format_infix(self)


def _pow_cached(cache: dict, base, e: int, dom: Domain):
    best = max(k for k in cache if k <= e)
    val = cache[best]
    while best < e:
        val = dom.mul(val, base)
        best += 1
        cache[best] = val
    return val


def _pow_value(val, e: int, dom: Domain):
    out = dom.from_int(1)
    base = val
    while e:
        if e & 1:
            out = dom.mul(out, base)
        base = dom.mul(base, base)
        e >>= 1
    return out


# ---------------------------------------------------------------------------
# dense univariate polynomials

class UniPoly:
    """Dense univariate polynomial over a Domain; coeffs ascending."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, domain: Domain, coeffs: Sequence):
        cs = list(coeffs)
        while cs and domain.is_zero(cs[-1]):
            cs.pop()
        self.domain = domain
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, domain: Domain, ints: Sequence[int]) -> "UniPoly":
        return cls(domain, [domain.from_int(c) for c in ints])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.domain == other.domain \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.domain), self.coeffs))

    def __add__(self, other):
        dom = self.domain
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [dom.from_int(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = dom.add(a[i], c)
        return UniPoly(dom, a)

    def __neg__(self):
        return UniPoly(self.domain, [self.domain.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        dom = self.domain
        if not isinstance(other, UniPoly):
            return UniPoly(dom, [dom.mul(c, other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly(dom, [])
        out = [dom.from_int(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if dom.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = dom.add(out[i + j], dom.mul(a, b))
        return UniPoly(dom, out)

    __rmul__ = __mul__

    def scale(self, c):
        return UniPoly(self.domain,
                       [self.domain.mul(co, c) for co in self.coeffs])

    def divmod(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        dom = self.domain
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if not dom.is_field:
            raise ValueError("divmod needs field coefficients")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return UniPoly(dom, []), self
        quot = [dom.from_int(0)] * (dq + 1)
        inv_lead = dom.div(dom.from_int(1), other.lead())
        for i in range(dq, -1, -1):
            c = rem[i + other.degree()]
            if dom.is_zero(c):
                continue
            q = dom.mul(c, inv_lead)
            quot[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] = dom.sub(rem[i + j], dom.mul(q, b))
        return UniPoly(dom, quot), UniPoly(dom, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        dom = self.domain
        inv = dom.div(dom.from_int(1), self.lead())
        return self.scale(inv)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UniPoly":
        dom = self.domain
        return UniPoly(dom, [dom.mul(c, dom.from_int(i))
                             for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, v):
        dom = self.domain
        acc = dom.from_int(0)
        for c in reversed(self.coeffs):
            acc = dom.add(dom.mul(acc, v), c)
        return acc

    def shift_compose(self, inner: "UniPoly") -> "UniPoly":
        """Composition self(inner(x))."""
        dom = self.domain
        acc = UniPoly(dom, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly(dom, [c])
        return acc

    def pow_mod(self, e: int, modulus: "UniPoly") -> "UniPoly":
        result = UniPoly.from_ints(self.domain, [1])
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def squarefree_part(self) -> "UniPoly":
        """Monic product of the distinct irreducible factors."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        if self.degree() == 0:
            return UniPoly.from_ints(self.domain, [1])
        dom = self.domain
        f = self.monic()
        d = f.derivative()
        if dom.char == 0:
            return f.divmod(f.gcd(d))[0].monic()
        p = dom.char
        if d.is_zero():
            return _pth_root(f).squarefree_part()
        g = f.gcd(d)
        part = f.divmod(g)[0].monic()
        # strip the factors of part out of g entirely
        rest = g
        while True:
            h = rest.gcd(part)
            if h.degree() <= 0:
                break
            rest = rest.divmod(h)[0]
        if rest.degree() <= 0:
            return part
        tail = _pth_root(rest).squarefree_part()
        # part and tail are coprime by construction
        return (part * tail).monic()

    def __repr__(self):
        return f"UniPoly({[self.domain.to_str(c) for c in self.coeffs]})"


def _pth_root(f: UniPoly) -> UniPoly:
    """p-th root of a perfect p-th power in characteristic p."""
    dom = f.domain
    p = dom.char
    root = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            root.append(dom.pth_root(c))
        elif not dom.is_zero(c):
            raise ValueError("not a p-th power")
    return UniPoly(dom, root)


def _field_order(dom: Domain) -> int:
    if isinstance(dom, IntegerModDomain) and dom.is_field:
        return dom.m
    if isinstance(dom, ExtDomain):
        return dom.order()
    raise ValueError("finite field required")


def _seeded_stream(tag: str):
    i = 0
    while True:
        yield int.from_bytes(hashlib.sha256(f"{tag}:{i}".encode()).digest(),
                             "big")
        i += 1


def distinct_degree_factor(f: UniPoly) -> list[Tuple[UniPoly, int]]:
    """Split a squarefree monic f over a finite field into products of
    irreducibles of equal degree; returns (product, degree) pairs."""
    dom = f.domain
    q = _field_order(dom)
    out = []
    x = UniPoly.from_ints(dom, [0, 1])
    h = x
    v = f.monic()
    d = 0
    while v.degree() > 0:
        d += 1
        if 2 * d > v.degree():
            out.append((v, v.degree()))
            break
        h = h.pow_mod(q, v)
        g = v.gcd(h - x)
        if g.degree() > 0:
            out.append((g.monic(), d))
            v = v.divmod(g)[0]
            h = h % v
    return out


def equal_degree_split(f: UniPoly, d: int, tag: str = "cz") -> list[UniPoly]:
    """Cantor-Zassenhaus on a monic squarefree product of degree-d
    irreducibles over a finite field of odd order; seeded and reproducible."""
    dom = f.domain
    q = _field_order(dom)
    if q % 2 == 0:
        raise NotImplementedError("even field order not supported here")
    if f.degree() == d:
        return [f.monic()]
    stream = _seeded_stream(f"{tag}:{q}:{f.coeffs!r}")
    exp = (q ** d - 1) // 2
    while True:
        bits = next(stream)
        coeffs = []
        for i in range(f.degree()):
            coeffs.append(dom.element_from_index(bits % q))
            bits //= q
        r = UniPoly(dom, coeffs)
        if r.degree() < 1:
            continue
        g = f.gcd(r)
        if 0 < g.degree() < f.degree():
            return equal_degree_split(g, d, tag) + \
                equal_degree_split(f.divmod(g)[0], d, tag)
        h = r.pow_mod(exp, f) - UniPoly.from_ints(dom, [1])
        g = f.gcd(h)
        if 0 < g.degree() < f.degree():
            return equal_degree_split(g, d, tag) + \
                equal_degree_split(f.divmod(g)[0], d, tag)


def factor_squarefree(f: UniPoly) -> list[UniPoly]:
    """Irreducible factors of a squarefree monic f over an odd finite field,
    sorted by (degree, coefficient string) for determinism."""
    parts = []
    for prod, d in distinct_degree_factor(f.monic()):
        parts.extend(equal_degree_split(prod, d))
    parts.sort(key=lambda g: (g.degree(),
                              [str(c) for c in g.coeffs]))
    return parts


def roots_in_field(f: UniPoly) -> list:
    """Roots of f in its own finite coefficient field (deduplicated)."""
    dom = f.domain
    q = _field_order(dom)
    x = UniPoly.from_ints(dom, [0, 1])
    xq = x.pow_mod(q, f)
    lin = f.gcd(xq - x)
    roots = []
    for g in factor_squarefree(lin.squarefree_part()) if lin.degree() > 0 else []:
        if g.degree() == 1:
            # x + c0 -> root -c0
            roots.append(dom.neg(g.coeffs[0]))
    return roots


# ---------------------------------------------------------------------------
# resultants

def _bareiss_determinant(rows: list[list], exact_div) -> object:
    """Fraction-free Bareiss determinant over an integral domain, using the
    provided exact-division hook."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero_entry(m[k][k]):
            swap = next((i for i in range(k + 1, n)
                         if not _is_zero_entry(m[i][k])), None)
            if swap is None:
                return _zero_like(m[k][k])
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else exact_div(num, prev)
            m[i][k] = _zero_like(m[k][k])
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _is_zero_entry(v) -> bool:
    if isinstance(v, Polynomial):
        return v.is_zero()
    return not v


def _zero_like(v):
    if isinstance(v, Polynomial):
        return v.ring.zero()
    return type(v)(0) if not isinstance(v, int) else 0


def sylvester_resultant(a: "Polynomial", b: "Polynomial", var: int = 0):
    """Resultant of a and b with respect to one variable, by the Sylvester
    determinant; remaining variables stay symbolic in the result.

    Integer inputs are computed directly with fraction-free elimination.
    """
    if a.ring != b.ring:
        raise ValueError("mixed rings")
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of zero polynomial")
    ring = a.ring
    da, db = a.degree_in(var), b.degree_in(var)
    if da == 0 and db == 0:
        raise ValueError("both inputs constant in the chosen variable")
    other_vars = [v for i, v in enumerate(ring.variables) if i != var]
    scalar = not other_vars or all(
        p.degree_in(i) == 0
        for p in (a, b) for i in range(ring.nvars) if i != var)

    def coeff_list(p: "Polynomial", d: int):
        # coefficients of var^i as polynomials in the other variables
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for m, c in p.terms:
            e = m[var]
            rest = tuple(x for i, x in enumerate(m) if i != var)
            buckets[e][rest] = c
        if scalar:
            dom = ring.domain
            zero_mon = ()
            return [bk.get(zero_mon, dom.from_int(0)) for bk in buckets]
        sub = PolyRing(other_vars or ("_t",), ring.domain, ring.order)
        return [Polynomial(sub, bk) for bk in buckets]

    A = coeff_list(a, da)
    B = coeff_list(b, db)
    n = da + db
    rows = []
    for i in range(db):
        row = [_entry_zero(ring, scalar, other_vars)] * n
        for j, c in enumerate(reversed(A)):
            row[i + j] = c
        rows.append(row)
    for i in range(da):
        row = [_entry_zero(ring, scalar, other_vars)] * n
        for j, c in enumerate(reversed(B)):
            row[i + j] = c
        rows.append(row)

    dom = ring.domain
    if scalar:
        if isinstance(dom, IntegerDomain):
            return _bareiss_determinant(rows, lambda x, y: _int_exact(x, y))
        if dom.is_field:
            return _field_determinant(rows, dom)
        return _bareiss_determinant(rows, lambda x, y: dom.div(x, y))
    if isinstance(dom, IntegerDomain):
        return _bareiss_determinant(rows, lambda x, y: x.exact_div(y))
    return _bareiss_determinant(rows, lambda x, y: x.exact_div(y))


def _int_exact(x: int, y: int) -> int:
    q, r = divmod(x, y)
    if r:
        raise ValueError("inexact division in Bareiss elimination")
    return q


def _entry_zero(ring: PolyRing, scalar: bool, other_vars):
    if scalar:
        return ring.domain.from_int(0)
    sub = PolyRing(other_vars or ("_t",), ring.domain, ring.order)
    return sub.zero()


def _field_determinant(rows: list[list], dom: Domain):
    n = len(rows)
    m = [list(r) for r in rows]
    det = dom.from_int(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if not dom.is_zero(m[i][k])),
                     None)
        if pivot is None:
            return dom.from_int(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = dom.neg(det)
        det = dom.mul(det, m[k][k])
        inv = dom.div(dom.from_int(1), m[k][k])
        for i in range(k + 1, n):
            if dom.is_zero(m[i][k]):
                continue
            factor = dom.mul(m[i][k], inv)
            for j in range(k, n):
                m[i][j] = dom.sub(m[i][j], dom.mul(factor, m[k][j]))
    return det


# ---------------------------------------------------------------------------
# square roots of polynomials

def poly_sqrt(p: Polynomial) -> Optional[Tuple[object, Polynomial]]:
    """Write p = scalar * s**2 and return (scalar, s), or None.

    The scalar is 1 whenever the leading coefficient is itself a square in
    the coefficient field; otherwise the leading coefficient is factored out
    first.  Integer inputs are handled through Q.
    """
    if p.is_zero():
        return (p.ring.domain.from_int(1), p)
    dom = p.ring.domain
    if isinstance(dom, IntegerDomain):
        res = poly_sqrt(p.map_domain(QQ))
        if res is None:
            return None
        sc, root = res
        introot = {m: c for m, c in root.terms}
        if all(c.denominator == 1 for c in introot.values()) and \
                getattr(sc, "denominator", 1) == 1:
            ring = p.ring
            return (int(sc),
                    Polynomial(ring, {m: int(c) for m, c in introot.items()}))
        return (sc, root)
    if not dom.is_field:
        raise ValueError("field (or Z) coefficients required")

    if dom.char == 2:
        return _poly_sqrt_char2(p)

    one = dom.from_int(1)
    lc = p.leading_coefficient()
    sq = _field_sqrt(dom, lc)
    if sq is not None:
        cand = _sqrt_by_descent(p, sq)
        if cand is not None:
            return (one, cand)
        return None
    inv = dom.div(one, lc)
    scaled = p.scale(inv)
    cand = _sqrt_by_descent(scaled, one)
    if cand is not None:
        return (lc, cand)
    return None


def _poly_sqrt_char2(p: Polynomial) -> Optional[Tuple[object, Polynomial]]:
    dom = p.ring.domain
    acc = {}
    for m, c in p.terms:
        if any(e % 2 for e in m):
            return None
        half = tuple(e // 2 for e in m)
        acc[half] = dom.pth_root(c) if hasattr(dom, "pth_root") else c
    root = Polynomial(p.ring, acc)
    if root * root == p:
        return (dom.from_int(1), root)
    return None


def _field_sqrt(dom: Domain, a):
    """Square root of a field element, or None."""
    if dom.is_zero(a):
        return dom.from_int(0)
    if isinstance(dom, RationalDomain):
        fa = Fraction(a)
        rn = math.isqrt(fa.numerator) if fa.numerator >= 0 else -1
        rd = math.isqrt(fa.denominator)
        if rn >= 0 and rn * rn == fa.numerator and rd * rd == fa.denominator:
            return Fraction(rn, rd)
        return None
    if isinstance(dom, IntegerModDomain) and dom.is_field:
        pp = dom.m
        if pp == 2:
            return a % 2
        if legendre(a, pp) != 1:
            return None
        return tonelli_shanks(a, pp)
    if isinstance(dom, ExtDomain):
        q = dom.order()
        if q % 2 == 0:
            return a ** (q // 2)  # Frobenius inverse of squaring
        if (a ** ((q - 1) // 2)) != dom.from_int(1):
            return None
        # Tonelli-Shanks over the extension, deterministic nonresidue scan
        return _ext_sqrt(dom, a)
    raise ValueError("unsupported field for square roots")


def _ext_sqrt(dom: ExtDomain, a):
    q = dom.order()
    s, t = 0, q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = None
    idx = 1
    while z is None:
        idx += 1
        e = dom.element_from_index(idx)
        if e and (e ** ((q - 1) // 2)) != dom.from_int(1):
            z = e
    m, c = s, z ** t
    w = a ** ((t + 1) // 2)
    u = a ** t
    one = dom.from_int(1)
    while u != one:
        u2, i = u, 0
        while u2 != one:
            u2 = u2 * u2
            i += 1
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        u, w = u * c, w * b
    return w


def _sqrt_by_descent(p: Polynomial, lead_root) -> Optional[Polynomial]:
    """Term-by-term square root assuming the leading root is known."""
    dom = p.ring.domain
    lm, _ = p.leading_term()
    if any(e % 2 for e in lm):
        return None
    half = tuple(e // 2 for e in lm)
    root = Polynomial(p.ring, {half: lead_root})
    two_lead = dom.mul(dom.from_int(2), lead_root)
    rem = p - root * root
    order = p.ring.order
    guard = len(p.terms) ** 2 + 2 * len(p.terms) + 4
    while rem.terms:
        guard -= 1
        if guard < 0:
            return None
        m, c = rem.leading_term()
        nm = tuple(a - b for a, b in zip(m, half))
        if any(e < 0 for e in nm):
            return None
        if not order.greater(half, nm):
            # next term must sit strictly below the leading root term
            return None
        t = Polynomial(p.ring, {nm: dom.div(c, two_lead)})
        root = root + t
        rem = p - root * root
    return root


# ---------------------------------------------------------------------------
# binary forms and line restriction

class BinaryForm:
    """Homogeneous polynomial in two variables of a stated degree."""

    def __init__(self, poly: Polynomial, degree: int):
        if poly.ring.nvars != 2:
            raise ValueError("binary form needs exactly two variables")
        if poly.terms and (not poly.is_homogeneous()
                           or poly.total_degree() != degree):
            raise ValueError("terms must all have the stated degree")
        self.poly = poly
        self.degree = degree

    def dehomogenize(self, at: int = 1) -> UniPoly:
        """Set the chosen variable to 1, producing a dense univariate."""
        dom = self.poly.ring.domain
        coeffs = [dom.from_int(0)] * (self.degree + 1)
        keep = 1 - at
        for m, c in self.poly.terms:
            coeffs[m[keep]] = c
        return UniPoly(dom, coeffs)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __repr__(self):
        return f"BinaryForm(deg={self.degree}, {self.poly!r})"


def restrict_to_line(f: Polynomial, spanning_points: Sequence[Sequence]) -> BinaryForm:
    """Restrict a ternary form to the line through two independent points;
    the output is a binary form in the line parameters (s, t)."""
    if f.ring.nvars != 3:
        raise ValueError("ternary form required")
    P, Q = spanning_points
    dom = f.ring.domain
    P = [dom.from_int(v) if isinstance(v, int) else v for v in P]
    Q = [dom.from_int(v) if isinstance(v, int) else v for v in Q]
    if _rank2_check(dom, P, Q) < 2:
        raise ValueError("spanning points are proportional")
    ring = PolyRing(("s", "t"), dom, f.ring.order)
    s, t = ring.gens()
    images = [s * P[i] + t * Q[i] for i in range(3)]
    out = f.substitute_linear(images)
    return BinaryForm(out, f.total_degree())


def _rank2_check(dom: Domain, P, Q) -> int:
    rank = 0
    for i in range(3):
        for j in range(i + 1, 3):
            minor = dom.sub(dom.mul(P[i], Q[j]), dom.mul(P[j], Q[i]))
            if not dom.is_zero(minor):
                return 2
    if any(not dom.is_zero(v) for v in list(P) + list(Q)):
        return 1
    return 0


# ---------------------------------------------------------------------------
# serialization

def _domain_tag(dom: Domain) -> str:
    if isinstance(dom, IntegerDomain):
        return "Z"
    if isinstance(dom, RationalDomain):
        return "Q"
    if isinstance(dom, IntegerModDomain):
        if dom.is_field:
            return f"Fp({dom.m})"
        return f"Zmod({dom.m})"
    raise ValueError(f"cannot serialize domain {dom}")


def _domain_from_tag(tag: str) -> Domain:
    tag = tag.strip()
    if tag == "Z":
        return ZZ
    if tag == "Q":
        return QQ
    if tag.startswith("Fp(") and tag.endswith(")"):
        return GF(int(tag[3:-1]))
    if tag.startswith("Zmod(") and tag.endswith(")"):
        return IntegerModDomain(int(tag[5:-1]))
    raise ValueError(f"unknown domain tag {tag!r}")


def format_polynomial(p: Polynomial) -> str:
    """Spec text format: header 'vars: ...; domain: ...' then one term per
    line as 'coefficient e0 e1 ... en'."""
    lines = [f"vars: {' '.join(p.ring.variables)}; domain: "
             f"{_domain_tag(p.ring.domain)}"]
    for m, c in p.terms:
        lines.append(f"{p.ring.domain.to_str(c)} " + " ".join(map(str, m)))
    return "\n".join(lines) + "\n"


def parse_polynomials(text: str) -> Tuple[PolyRing, dict]:
    """Parse the term-per-line format; 'poly <label>' lines open labeled
    blocks (a single unlabeled block is labeled 'poly0').  An 'expr: ...'
    line gives a whole polynomial in infix form instead."""
    ring: Optional[PolyRing] = None
    variables: Tuple[str, ...] = ()
    domain: Optional[Domain] = None
    out: dict = {}
    label = None
    acc: list = []
    exprs: dict = {}

    def flush():
        nonlocal acc, label
        if label is not None:
            out[label] = acc
        acc = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vars:"):
            body = line[len("vars:"):]
            if ";" in body:
                vpart, dpart = body.split(";", 1)
                dpart = dpart.strip()
                if not dpart.startswith("domain:"):
                    raise ValueError("expected domain after vars header")
                domain = _domain_from_tag(dpart[len("domain:"):])
            else:
                vpart = body
            variables = tuple(vpart.split())
            continue
        if line.startswith("domain:"):
            domain = _domain_from_tag(line[len("domain:"):])
            continue
        if line.startswith("poly"):
            flush()
            parts = line.split(None, 1)
            label = parts[1].strip() if len(parts) > 1 else f"poly{len(out)}"
            continue
        if line.startswith("expr:"):
            flush()
            name = f"poly{len(out) + len(exprs)}" if label is None else label
            exprs[name] = line[len("expr:"):].strip()
            label = None
            continue
        if label is None:
            label = f"poly{len(out)}"
        acc.append(line)
    flush()

    if not variables or domain is None:
        raise ValueError("missing vars/domain header")
    if not out and not exprs:
        out["poly0"] = []  # header-only file serializes the zero polynomial
    ring = PolyRing(variables, domain)
    polys: dict = {}
    for name, lines in out.items():
        terms = []
        for ln in lines:
            bits = ln.split()
            if len(bits) != len(variables) + 1:
                raise ValueError(f"bad term line {ln!r}")
            c = _parse_coeff(bits[0], domain)
            terms.append((tuple(int(b) for b in bits[1:]), c))
        polys[name] = ring.from_terms(terms)
    for name, expr in exprs.items():
        polys[name] = parse_infix(expr, ring)
    return ring, polys


def _parse_coeff(tok: str, dom: Domain):
    if "/" in tok:
        num, den = tok.split("/")
        return dom.div(dom.from_int(int(num)), dom.from_int(int(den)))
    return dom.from_int(int(tok))


def format_infix(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    dom = p.ring.domain
    bits = []
    for m, c in p.terms:
        factors = []
        for name, e in zip(p.ring.variables, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        cs = dom.to_str(c)
        if factors and cs == "1":
            body = "*".join(factors)
        elif factors and cs == "-1":
            body = "-" + "*".join(factors)
        elif factors:
            body = cs + "*" + "*".join(factors)
        else:
            body = cs
        bits.append(body)
    text = " + ".join(bits).replace("+ -", "- ")
    return text


class _InfixParser:
    """Recursive-descent parser for expressions with + - * ^ ( ) and implicit
    multiplication between a digit/closing-paren and a letter/open-paren."""

    def __init__(self, text: str, ring: PolyRing):
        self.ring = ring
        self.toks = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list:
        toks: list = []
        i = 0
        names = sorted(self.ring.variables, key=len, reverse=True)
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "+-*^()":
                toks.append(ch)
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(int(text[i:j]))
                i = j
                continue
            matched = None
            for name in names:
                if text.startswith(name, i):
                    matched = name
                    break
            if matched is None:
                raise ValueError(f"cannot tokenize at {text[i:i+8]!r}")
            toks.append(("var", matched))
            i += len(matched)
        # splice implicit multiplication
        out: list = []
        for t in toks:
            if out and self._value_like(out[-1]) and self._value_start(t):
                out.append("*")
            out.append(t)
        return out

    @staticmethod
    def _value_like(t) -> bool:
        return isinstance(t, int) or t == ")" or \
            (isinstance(t, tuple) and t[0] == "var")

    @staticmethod
    def _value_start(t) -> bool:
        return isinstance(t, int) or t == "(" or \
            (isinstance(t, tuple) and t[0] == "var")

    def parse(self) -> Polynomial:
        v = self._sum()
        if self.pos != len(self.toks):
            raise ValueError("trailing tokens in expression")
        return v

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _sum(self) -> Polynomial:
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.toks[self.pos] == "-" else 1
            self.pos += 1
        acc = self._product().scale(sign)
        while self._peek() in ("+", "-"):
            op = self.toks[self.pos]
            self.pos += 1
            term = self._product()
            acc = acc + term if op == "+" else acc - term
        return acc

    def _product(self) -> Polynomial:
        acc = self._power()
        while self._peek() == "*":
            self.pos += 1
            acc = acc * self._power()
        return acc

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            e = self.toks[self.pos]
            if not isinstance(e, int):
                raise ValueError("integer exponent required")
            self.pos += 1
            return base ** e
        return base

    def _atom(self) -> Polynomial:
        t = self._peek()
        if t == "(":
            self.pos += 1
            v = self._sum()
            if self._peek() != ")":
                raise ValueError("unbalanced parenthesis")
            self.pos += 1
            return v
        if isinstance(t, int):
            self.pos += 1
            return self.ring.constant(t)
        if isinstance(t, tuple) and t[0] == "var":
            self.pos += 1
            return self.ring.gens()[self.ring.var_index(t[1])]
        raise ValueError(f"unexpected token {t!r}")


def parse_infix(text: str, ring: PolyRing) -> Polynomial:
    return _InfixParser(text, ring).parse()
