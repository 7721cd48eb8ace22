"""Buchberger Groebner engine over Q and prime fields.

Provides reduced Groebner bases, normal forms, elimination ideals, ideal
intersection, saturation, projective-emptiness certification, and vector-
space dimension of quotient rings.

Performance notes.  Exponent vectors are packed into single integers
(8 bits per variable), so monomial comparison, multiplication, and
divisibility run as machine-integer arithmetic instead of tuple work.
Sort keys for grevlex / lex / block orders are additive integer
functionals of the packed exponents, so term orders never unpack.
Coefficient arithmetic is fraction-free over Q (primitive integer
polynomials, content stripped between reductions) and modular over
prime fields.  Pair selection follows the sugar strategy with the
Gebauer-Moller installation of Buchberger's two criteria; every
tie-break is deterministic, so a fixed input yields an identical
reduced basis on every run.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import (
    GREVLEX,
    IntegerModDomain,
    MonomialOrder,
    Polynomial,
    PolyRing,
    QQ,
)

__all__ = [
    "Ideal",
    "GroebnerBasis",
    "EmptinessCertificate",
    "RunLimits",
    "ResourceLimitExceeded",
    "buchberger",
    "normal_form",
    "saturate",
    "elimination_ideal",
    "ideal_intersect",
    "is_projectively_empty",
    "quotient_dimension",
    "ideal_equal",
]


# ---------------------------------------------------------------------------
# resource limits

class ResourceLimitExceeded(RuntimeError):
    """A basis computation hit a configured resource cap.

    The computation is abandoned rather than truncated: no partial basis
    is returned, and the exception carries which cap tripped."""

    def __init__(self, stage: str, **counters):
        self.stage = stage
        self.counters = dict(counters)
        detail = ", ".join(f"{k}={v}" for k, v in sorted(counters.items()))
        super().__init__(f"resources exhausted during {stage} ({detail})")


@dataclass(frozen=True)
class RunLimits:
    """Caps on a single basis computation.

    `max_total_degree` must stay below 64 so packed exponent fields can
    never overflow their 8-bit slots (intermediate products reach at most
    twice the cap)."""

    max_basis_size: int = 4096
    max_total_degree: int = 48
    max_pairs: int = 2_000_000

    def __post_init__(self):
        if not (1 <= self.max_total_degree < 64):
            raise ValueError("max_total_degree must lie in [1, 63]")


DEFAULT_LIMITS = RunLimits()


# ---------------------------------------------------------------------------
# packed exponent vectors

_FIELD_BITS = 8
_FIELD_MASK = (1 << _FIELD_BITS) - 1


class _Packer:
    """Packs exponent tuples of a fixed-width ring into integers.

    Variable i occupies bits [8i, 8i+8); packed values are additive under
    monomial multiplication.  Divisibility is tested with a guard-bit
    trick that works whenever every exponent stays below 128, which the
    degree caps in RunLimits enforce."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.shifts = tuple(_FIELD_BITS * i for i in range(nvars))
        self.deg_shift = _FIELD_BITS * nvars
        self.top_mask = sum(
            1 << (s + _FIELD_BITS - 1) for s in self.shifts)

    def pack(self, exps: Sequence[int]) -> int:
        acc = 0
        for e, s in zip(exps, self.shifts):
            if e >= 100:
                raise ResourceLimitExceeded("exponent packing", exponent=e)
            acc |= e << s
        return acc

    def unpack(self, packed: int) -> Tuple[int, ...]:
        return tuple((packed >> s) & _FIELD_MASK for s in self.shifts)

    def degree(self, packed: int) -> int:
        total = 0
        for s in self.shifts:
            total += (packed >> s) & _FIELD_MASK
        return total

    def divides(self, a: int, b: int) -> bool:
        """True when monomial a divides monomial b (fieldwise a <= b)."""
        return ((b | self.top_mask) - a) & self.top_mask == self.top_mask

    def lcm(self, a: int, b: int) -> int:
        acc = 0
        for s in self.shifts:
            ea = (a >> s) & _FIELD_MASK
            eb = (b >> s) & _FIELD_MASK
            acc |= (ea if ea >= eb else eb) << s
        return acc

    # -- additive sort keys ------------------------------------------------

    def grevlex_key(self):
        deg_shift = self.deg_shift
        shifts = self.shifts

        def key(packed: int) -> int:
            total = 0
            for s in shifts:
                total += (packed >> s) & _FIELD_MASK
            return (total << deg_shift) - packed

        return key

    def lex_key(self):
        shifts = self.shifts

        def key(packed: int) -> int:
            acc = 0
            for i, s in enumerate(shifts):
                acc |= ((packed >> s) & _FIELD_MASK) << \
                    (_FIELD_BITS * (len(shifts) - 1 - i))
            return acc

        return key

    def block_key(self, split: int):
        """Two-block order: grevlex on the first `split` variables
        dominates grevlex on the rest."""
        lo_shifts = self.shifts[:split]
        hi_shifts = self.shifts[split:]
        lo_mask = sum(_FIELD_MASK << s for s in lo_shifts)
        deg_shift = self.deg_shift
        # block-1 keys fit below deg_shift + 12 bits; separate the two
        # block keys far enough that sums of keys never interact.
        gap = deg_shift + 16

        def key(packed: int) -> int:
            lo = packed & lo_mask
            hi = packed ^ lo
            dlo = 0
            for s in lo_shifts:
                dlo += (packed >> s) & _FIELD_MASK
            dhi = 0
            for s in hi_shifts:
                dhi += (packed >> s) & _FIELD_MASK
            klo = (dlo << deg_shift) - lo
            khi = (dhi << deg_shift) - hi
            return (klo << gap) + khi

        return key

    def key_for_order(self, order: MonomialOrder):
        if order.kind == "grevlex":
            return self.grevlex_key()
        if order.kind == "lex":
            return self.lex_key()
        return self.block_key(order.split)


# ---------------------------------------------------------------------------
# internal polynomial form: tuple of (sortkey, packed_exponents, coeff),
# sorted descending by sortkey; coefficients are ints (mod p, or raw over Z)

_Term = Tuple[int, int, int]
_IPoly = Tuple[_Term, ...]


def _content(terms: Sequence[_Term]) -> int:
    g = 0
    for _, _, c in terms:
        g = math.gcd(g, c)
        if g == 1:
            return 1
    return g


def _strip_content(terms: List[_Term]) -> List[_Term]:
    g = _content(terms)
    if g > 1:
        terms = [(k, e, c // g) for k, e, c in terms]
    if terms and terms[0][2] < 0:
        terms = [(k, e, -c) for k, e, c in terms]
    return terms


def _merge_scaled(a: Sequence[_Term], sa: int,
                  b: Sequence[_Term], sb: int,
                  shift_key: int, shift_exp: int,
                  p: int) -> List[_Term]:
    """Compute sa*a + sb*(monomial shift of b) as a merged sorted list."""
    out: List[_Term] = []
    ia, ib = 0, 0
    la, lb = len(a), len(b)
    while ia < la and ib < lb:
        ka = a[ia][0]
        kb = b[ib][0] + shift_key
        if ka > kb:
            t = a[ia]
            c = sa * t[2] % p if p else sa * t[2]
            if c:
                out.append((ka, t[1], c))
            ia += 1
        elif kb > ka:
            t = b[ib]
            c = sb * t[2] % p if p else sb * t[2]
            if c:
                out.append((kb, t[1] + shift_exp, c))
            ib += 1
        else:
            c = sa * a[ia][2] + sb * b[ib][2]
            if p:
                c %= p
            if c:
                out.append((ka, a[ia][1], c))
            ia += 1
            ib += 1
    while ia < la:
        t = a[ia]
        c = sa * t[2] % p if p else sa * t[2]
        if c:
            out.append((t[0], t[1], c))
        ia += 1
    while ib < lb:
        t = b[ib]
        c = sb * t[2] % p if p else sb * t[2]
        if c:
            out.append((t[0] + shift_key, t[1] + shift_exp, c))
        ib += 1
    return out


class _Engine:
    """One Buchberger run: fixed ring width, order key, and coefficient
    mode (p > 0: arithmetic mod p with monic basis elements; p == 0:
    fraction-free integer arithmetic with primitive basis elements)."""

    def __init__(self, packer: _Packer, keyf, p: int, limits: RunLimits):
        self.packer = packer
        self.keyf = keyf
        self.p = p
        self.limits = limits
        self.basis: List[_IPoly] = []
        self.sugars: List[int] = []
        self.pairable: List[bool] = []
        self.pair_data: Dict[Tuple[int, int], Tuple[int, int, int]] = {}
        self.heap: List[Tuple[int, int, int, int]] = []
        self.pairs_processed = 0

    # -- normalization -----------------------------------------------------

    def _normalize(self, terms: List[_Term]) -> _IPoly:
        if not terms:
            return ()
        if self.p:
            lead = terms[0][2]
            if lead != 1:
                inv = pow(lead, self.p - 2, self.p)
                terms = [(k, e, c * inv % self.p) for k, e, c in terms]
            return tuple(terms)
        return tuple(_strip_content(terms))

    # -- full reduction ----------------------------------------------------

    def _find_reducer(self, exp: int) -> int:
        divides = self.packer.divides
        for idx, g in enumerate(self.basis):
            if g and divides(g[0][1], exp):
                return idx
        return -1

    def reduce_full(self, terms: List[_Term], sugar: int) -> Tuple[_IPoly, int]:
        """Fully reduce `terms` against the current basis; returns the
        normalized remainder and its sugar degree."""
        p = self.p
        packer = self.packer
        frontier = 0
        steps = 0
        while frontier < len(terms):
            key, exp, coeff = terms[frontier]
            ridx = self._find_reducer(exp)
            if ridx < 0:
                frontier += 1
                continue
            g = self.basis[ridx]
            gkey, gexp, gcoeff = g[0]
            shift_exp = exp - gexp
            shift_key = key - gkey
            sugar = max(sugar, self.sugars[ridx] + packer.degree(shift_exp))
            head = terms[:frontier]
            tail = terms[frontier:]
            if p:
                reduced = _merge_scaled(tail, 1, g, p - coeff,
                                        shift_key, shift_exp, p)
            else:
                gcd = math.gcd(coeff, gcoeff)
                scale_self = gcoeff // gcd
                scale_g = -(coeff // gcd)
                if scale_self < 0:
                    scale_self, scale_g = -scale_self, -scale_g
                if scale_self != 1 and head:
                    head = [(k, e, c * scale_self) for k, e, c in head]
                reduced = _merge_scaled(tail, scale_self, g, scale_g,
                                        shift_key, shift_exp, 0)
            terms = head + reduced
            steps += 1
            if not p and steps % 16 == 0 and terms:
                g_all = _content(terms)
                if g_all > 1:
                    terms = [(k, e, c // g_all) for k, e, c in terms]
        return self._normalize(terms), sugar

    # -- pair bookkeeping (Gebauer-Moller update) ---------------------------

    def _push_pair(self, i: int, j: int, lcm_exp: int):
        packer = self.packer
        lcm_key = self.keyf(lcm_exp)
        lead_i = self.basis[i][0][1]
        lead_j = self.basis[j][0][1]
        sugar = max(
            self.sugars[i] + packer.degree(lcm_exp - lead_i),
            self.sugars[j] + packer.degree(lcm_exp - lead_j))
        self.pair_data[(i, j)] = (sugar, lcm_key, lcm_exp)
        heapq.heappush(self.heap, (sugar, lcm_key, i, j))

    def add_generator(self, poly: _IPoly, sugar: int):
        """Install a new basis element and update the pair set with the
        Gebauer-Moller criteria."""
        packer = self.packer
        t = len(self.basis)
        if t >= self.limits.max_basis_size:
            raise ResourceLimitExceeded(
                "basis growth", basis_size=t,
                limit=self.limits.max_basis_size)
        lead_t = poly[0][1]
        deg_lead = packer.degree(lead_t)
        if deg_lead > self.limits.max_total_degree:
            raise ResourceLimitExceeded(
                "degree growth", degree=deg_lead,
                limit=self.limits.max_total_degree)
        self.basis.append(poly)
        self.sugars.append(sugar)
        self.pairable.append(True)

        # candidate new pairs, visited in deterministic (lcm, index) order
        cand = []
        for i in range(t):
            if not self.pairable[i]:
                continue
            lead_i = self.basis[i][0][1]
            lcm_exp = packer.lcm(lead_i, lead_t)
            cand.append((self.keyf(lcm_exp), i, lcm_exp,
                         lcm_exp == lead_i + lead_t))
        cand.sort(key=lambda item: (item[0], item[1]))

        kept: List[Tuple[int, int, int, bool]] = []
        for pos, (lk, i, lcm_exp, coprime) in enumerate(cand):
            if coprime:
                kept.append((lk, i, lcm_exp, True))
                continue
            redundant = False
            for ok, oi, oexp, _ in kept:
                if packer.divides(oexp, lcm_exp):
                    redundant = True
                    break
            if not redundant:
                for ok, oi, oexp, _ in cand[pos + 1:]:
                    if oexp != lcm_exp and packer.divides(oexp, lcm_exp):
                        redundant = True
                        break
            if not redundant:
                kept.append((lk, i, lcm_exp, False))

        # prune old pairs via the chain criterion against the new lead
        for (i, j), (sug, lk, lcm_exp) in list(self.pair_data.items()):
            if not packer.divides(lead_t, lcm_exp):
                continue
            lead_i = self.basis[i][0][1]
            lead_j = self.basis[j][0][1]
            if packer.lcm(lead_i, lead_t) != lcm_exp and \
                    packer.lcm(lead_j, lead_t) != lcm_exp:
                del self.pair_data[(i, j)]

        for lk, i, lcm_exp, coprime in kept:
            if not coprime:
                self._push_pair(i, t, lcm_exp)

        # retire basis members whose lead the new lead divides
        for i in range(t):
            if self.pairable[i] and \
                    packer.divides(lead_t, self.basis[i][0][1]):
                self.pairable[i] = False

    # -- S-polynomials -------------------------------------------------------

    def s_polynomial(self, i: int, j: int, lcm_exp: int) -> List[_Term]:
        f = self.basis[i]
        g = self.basis[j]
        fk, fe, fc = f[0]
        gk, ge, gc = g[0]
        lcm_key = self.keyf(lcm_exp)
        if self.p:
            sa, sb = 1, -1
        else:
            gcd = math.gcd(fc, gc)
            sa, sb = gc // gcd, -(fc // gcd)
        shifted_f = [(k + lcm_key - fk, e + lcm_exp - fe,
                      sa * c % self.p if self.p else sa * c)
                     for k, e, c in f]
        merged = _merge_scaled(shifted_f, 1, g, sb,
                               lcm_key - gk, lcm_exp - ge, self.p)
        return merged

    # -- main loop -----------------------------------------------------------

    def run(self, gens: Sequence[_IPoly], gen_sugars: Sequence[int]):
        order = sorted(range(len(gens)),
                       key=lambda i: (self.keyf(gens[i][0][1]), i))
        for i in order:
            poly, sugar = self.reduce_full(list(gens[i]), gen_sugars[i])
            if poly:
                self.add_generator(poly, sugar)
        while self.heap:
            sug, lk, i, j = heapq.heappop(self.heap)
            data = self.pair_data.pop((i, j), None)
            if data is None or data[0] != sug or data[1] != lk:
                continue
            self.pairs_processed += 1
            if self.pairs_processed > self.limits.max_pairs:
                raise ResourceLimitExceeded(
                    "pair processing", pairs=self.pairs_processed,
                    limit=self.limits.max_pairs)
            spoly = self.s_polynomial(i, j, data[2])
            pair_sugar = sug
            reduced, new_sugar = self.reduce_full(spoly, pair_sugar)
            if reduced:
                self.add_generator(reduced, new_sugar)

    # -- reduced basis -------------------------------------------------------

    def reduced_basis(self) -> List[_IPoly]:
        packer = self.packer
        leads = [(g[0][1], idx) for idx, g in enumerate(self.basis) if g]
        minimal: List[int] = []
        for exp, idx in leads:
            keep = True
            for oexp, oidx in leads:
                if oidx == idx:
                    continue
                if packer.divides(oexp, exp) and \
                        (oexp != exp or oidx < idx):
                    keep = False
                    break
            if keep:
                minimal.append(idx)

        survivors = [self.basis[i] for i in minimal]
        sugars = [self.sugars[i] for i in minimal]
        out: List[_IPoly] = []
        for pos, poly in enumerate(survivors):
            others = _Engine(self.packer, self.keyf, self.p, self.limits)
            others.basis = survivors[:pos] + survivors[pos + 1:]
            others.sugars = sugars[:pos] + sugars[pos + 1:]
            reduced, _ = others.reduce_full(list(poly), sugars[pos])
            if reduced:
                out.append(reduced)
        out.sort(key=lambda g: g[0][0], reverse=True)
        return out


# ---------------------------------------------------------------------------
# public types

def _coeff_mode(ring: PolyRing) -> int:
    """Returns p for prime fields, 0 for Q; rejects other domains."""
    dom = ring.domain
    if dom == QQ:
        return 0
    if isinstance(dom, IntegerModDomain):
        if dom.is_field:
            return dom.m
        raise ValueError("coefficient modulus is not prime")
    raise ValueError(
        "Groebner computations need Q or prime-field coefficients; "
        f"got {dom!r}")


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal in a polynomial ring over a field."""

    ring: PolyRing
    generators: Tuple[Polynomial, ...]

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial]):
        gens = tuple(generators)
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator outside the ambient ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", gens)

    def nonzero_generators(self) -> Tuple[Polynomial, ...]:
        return tuple(g for g in self.generators if not g.is_zero())

    def is_homogeneous(self, weights: Optional[Sequence[int]] = None) -> bool:
        return all(g.is_homogeneous(weights)
                   for g in self.nonzero_generators())

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators over {self.ring!r})"


class GroebnerBasis:
    """A reduced Groebner basis: monic generators, no leading term divides
    another, every tail fully reduced; sorted descending by leading
    monomial under `order`."""

    def __init__(self, polys: Sequence[Polynomial], order: MonomialOrder,
                 ideal: Ideal, strategy: str = "sugar+gebauer-moller"):
        self.polys = tuple(polys)
        self.order = order
        self.ideal = ideal
        self.strategy = strategy

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].total_degree() == 0

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def verify(self) -> bool:
        """Recheck the defining property: all S-polynomials reduce to zero
        and every original generator is a member."""
        ring = self.ideal.ring.with_order(self.order)
        polys = [q if q.ring == ring else
                 ring.from_terms(q.terms) for q in self.polys]
        for f, g in itertools.combinations(polys, 2):
            if not _division_remainder(_s_poly_public(f, g), polys).is_zero():
                return False
        for gen in self.ideal.nonzero_generators():
            gen = gen if gen.ring == ring else ring.from_terms(gen.terms)
            if not _division_remainder(gen, polys).is_zero():
                return False
        return True

    def report(self) -> str:
        lines = [
            f"order: {self.order!r}",
            f"strategy: {self.strategy}",
            f"basis size: {len(self.polys)}",
        ]
        for i, p in enumerate(self.polys):
            lines.append(f"g{i}: {p}")
        return "\n".join(lines)

    def __repr__(self):
        return f"GroebnerBasis({len(self.polys)} elements, {self.order!r})"


# ---------------------------------------------------------------------------
# conversions between Polynomial and internal form

def _to_internal(poly: Polynomial, packer: _Packer, keyf, p: int
                 ) -> Tuple[_IPoly, int]:
    """Convert to internal terms; returns (terms, sugar).  Over Q the
    coefficients are cleared to a primitive integer vector."""
    if poly.is_zero():
        return (), 0
    sugar = poly.total_degree()
    if p:
        items = [(keyf(packer.pack(m)), packer.pack(m), int(c) % p)
                 for m, c in poly.terms]
    else:
        denom = 1
        for _, c in poly.terms:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        ints = [(m, int(c * denom)) for m, c in poly.terms]
        g = 0
        for _, c in ints:
            g = math.gcd(g, c)
        items = [(keyf(packer.pack(m)), packer.pack(m), c // g)
                 for m, c in ints]
    items = [(k, e, c) for k, e, c in items if c]
    items.sort(key=lambda t: t[0], reverse=True)
    return tuple(items), sugar


def _from_internal(terms: _IPoly, packer: _Packer, ring: PolyRing,
                   p: int) -> Polynomial:
    if not terms:
        return ring.zero()
    if p:
        return ring.from_terms(
            [(packer.unpack(e), c) for _, e, c in terms])
    lead = terms[0][2]
    return ring.from_terms(
        [(packer.unpack(e), Fraction(c, lead)) for _, e, c in terms])


def _run_engine(gens: Sequence[Polynomial], ring: PolyRing,
                order: MonomialOrder, limits: RunLimits) -> List[Polynomial]:
    """Shared driver: reduced basis of `gens` under `order`, as monic
    Polynomials in `ring` (which carries the same variable list)."""
    p = _coeff_mode(ring)
    packer = _Packer(len(ring.variables))
    keyf = packer.key_for_order(order)
    internal = []
    sugars = []
    for g in gens:
        ig, sug = _to_internal(g, packer, keyf, p)
        if ig:
            internal.append(ig)
            sugars.append(sug)
    if not internal:
        return []
    engine = _Engine(packer, keyf, p, limits)
    engine.run(internal, sugars)
    return [_from_internal(t, packer, ring, p)
            for t in engine.reduced_basis()]


# ---------------------------------------------------------------------------
# public operations

def buchberger(ideal: Ideal, order: Optional[MonomialOrder] = None,
               limits: RunLimits = DEFAULT_LIMITS) -> GroebnerBasis:
    """Reduced Groebner basis of `ideal` under `order` (default: the
    ring's own order).  Deterministic for fixed input."""
    order = order or ideal.ring.order
    ring = ideal.ring.with_order(order)
    gens = [g if g.ring == ring else ring.from_terms(g.terms)
            for g in ideal.nonzero_generators()]
    basis = _run_engine(gens, ring, order, limits)
    return GroebnerBasis(basis, order, ideal)


def _s_poly_public(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    mf, cf = f.leading_term()
    mg, cg = g.leading_term()
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    shift_f = tuple(l - a for l, a in zip(lcm, mf))
    shift_g = tuple(l - b for l, b in zip(lcm, mg))
    dom = ring.domain
    one = dom.from_int(1)
    mono_f = ring.from_terms([(shift_f, dom.div(one, cf))])
    mono_g = ring.from_terms([(shift_g, dom.div(one, cg))])
    return mono_f * f - mono_g * g


def _division_remainder(p: Polynomial, basis: Sequence[Polynomial],
                        quotients: Optional[List[Polynomial]] = None
                        ) -> Polynomial:
    """Multivariate division of p by monic `basis`; optionally records the
    cofactors so p = sum(q_i * basis_i) + remainder holds exactly."""
    ring = p.ring
    dom = ring.domain
    remainder = ring.zero()
    work = p
    leads = [g.leading_monomial() for g in basis]
    while not work.is_zero():
        mono, coeff = work.leading_term()
        hit = -1
        for idx, lm in enumerate(leads):
            if all(a <= b for a, b in zip(lm, mono)):
                hit = idx
                break
        if hit < 0:
            spike = ring.from_terms([(mono, coeff)])
            remainder = remainder + spike
            work = work - spike
            continue
        g = basis[hit]
        lc = g.leading_coefficient()
        shift = tuple(a - b for a, b in zip(mono, leads[hit]))
        factor = ring.from_terms([(shift, dom.div(coeff, lc))])
        work = work - factor * g
        if quotients is not None:
            quotients[hit] = quotients[hit] + factor
    return remainder


def normal_form(p: Polynomial, basis: GroebnerBasis,
                with_cofactors: bool = False):
    """Remainder of multivariate division by a reduced basis: zero exactly
    when p lies in the ideal.  With `with_cofactors`, also returns the
    division transcript q such that p = sum(q_i g_i) + remainder."""
    ring = basis.ideal.ring.with_order(basis.order)
    if p.ring != ring:
        if p.ring.variables != ring.variables:
            raise ValueError("polynomial from a different variable set")
        p = ring.from_terms(p.terms) if p.ring.domain == ring.domain else \
            p.map_domain(ring.domain, ring)
    polys = [q if q.ring == ring else ring.from_terms(q.terms)
             for q in basis.polys]
    if with_cofactors:
        quotients = [ring.zero() for _ in polys]
        rem = _division_remainder(p, polys, quotients)
        return rem, quotients
    return _division_remainder(p, polys)


def ideal_equal(a: Ideal, b: Ideal,
                limits: RunLimits = DEFAULT_LIMITS) -> bool:
    """Double-inclusion equality through normal forms."""
    ga = buchberger(a, limits=limits)
    gb = buchberger(b, limits=limits)
    return all(gb.contains(p) for p in a.nonzero_generators()) and \
        all(ga.contains(p) for p in b.nonzero_generators())


# ---------------------------------------------------------------------------
# elimination machinery

def _fresh_variable(ring: PolyRing) -> str:
    name = "t"
    while name in ring.variables:
        name += "_"
    return name


def _extended_ring(ring: PolyRing) -> Tuple[PolyRing, str]:
    aux = _fresh_variable(ring)
    ext = PolyRing((aux,) + tuple(ring.variables), ring.domain,
                   MonomialOrder("block", 1))
    return ext, aux


def _lift(p: Polynomial, ext: PolyRing) -> Polynomial:
    return ext.from_terms([((0,) + m, c) for m, c in p.terms])


def _eliminate_first(gens: Sequence[Polynomial], ext: PolyRing,
                     ring: PolyRing, limits: RunLimits) -> List[Polynomial]:
    """Reduced basis of <gens> in ext (block order isolating the first
    variable), restricted to the subring without it."""
    basis = _run_engine(list(gens), ext, ext.order, limits)
    out = []
    for g in basis:
        if g.degree_in(0) == 0:
            out.append(ring.from_terms([(m[1:], c) for m, c in g.terms]))
    return out


def elimination_ideal(ideal: Ideal, keep: Iterable[str],
                      limits: RunLimits = DEFAULT_LIMITS) -> Ideal:
    """Intersection of the ideal with the subring on the `keep` variables,
    returned inside the original ring.  Computed under a two-block order
    whose first block holds the eliminated variables."""
    ring = ideal.ring
    keep_set = set(keep)
    unknown = keep_set - set(ring.variables)
    if unknown:
        raise ValueError(f"unknown variables: {sorted(unknown)}")
    drop = [v for v in ring.variables if v not in keep_set]
    if not drop:
        return Ideal(ring, ideal.nonzero_generators())
    # permute so the eliminated variables come first
    perm = [ring.var_index(v) for v in drop] + \
        [ring.var_index(v) for v in ring.variables if v in keep_set]
    permuted = PolyRing(tuple(ring.variables[i] for i in perm), ring.domain,
                        MonomialOrder("block", len(drop)))
    gens = [permuted.from_terms([(tuple(m[i] for i in perm), c)
                                 for m, c in g.terms])
            for g in ideal.nonzero_generators()]
    basis = _run_engine(gens, permuted, permuted.order, limits)
    inv = {pi: i for i, pi in enumerate(perm)}
    out = []
    for g in basis:
        if all(g.degree_in(i) == 0 for i in range(len(drop))):
            out.append(ring.from_terms(
                [(tuple(m[inv[i]] for i in range(len(m))), c)
                 for m, c in g.terms]))
    return Ideal(ring, out)


def ideal_intersect(a: Ideal, b: Ideal,
                    limits: RunLimits = DEFAULT_LIMITS) -> Ideal:
    """I cap J via elimination on t*I + (1-t)*J."""
    if a.ring != b.ring:
        raise ValueError("intersection needs a common ring")
    ring = a.ring
    ext, _ = _extended_ring(ring)
    t = ext.gens()[0]
    one = ext.one()
    gens = [t * _lift(g, ext) for g in a.nonzero_generators()]
    gens += [(one - t) * _lift(g, ext) for g in b.nonzero_generators()]
    return Ideal(ring, _eliminate_first(gens, ext, ring, limits))


def _saturate_principal(ideal: Ideal, g: Polynomial,
                        limits: RunLimits) -> Ideal:
    """I : g^infinity via the auxiliary relation t*g = 1."""
    ring = ideal.ring
    ext, _ = _extended_ring(ring)
    t = ext.gens()[0]
    gens = [_lift(q, ext) for q in ideal.nonzero_generators()]
    gens.append(t * _lift(g, ext) - ext.one())
    return Ideal(ring, _eliminate_first(gens, ext, ring, limits))


def saturate(ideal: Ideal, by: Ideal,
             limits: RunLimits = DEFAULT_LIMITS) -> Ideal:
    """I : J^infinity, as the intersection over the generators g of J of
    the single-generator saturations I : g^infinity."""
    if ideal.ring != by.ring:
        raise ValueError("saturation needs a common ring")
    gens = by.nonzero_generators()
    if not gens:
        raise ValueError("saturation by the zero ideal")
    partials: List[Ideal] = []
    seen = set()
    for g in gens:
        if g.total_degree() == 0:
            return Ideal(ideal.ring, ideal.nonzero_generators())
        part = _saturate_principal(ideal, g, limits)
        key = tuple(p.terms for p in part.generators)
        if key not in seen:
            seen.add(key)
            partials.append(part)
    result = partials[0]
    for part in partials[1:]:
        result = ideal_intersect(result, part, limits)
    return result


# ---------------------------------------------------------------------------
# geometric certificates

@dataclass(frozen=True)
class EmptinessCertificate:
    """Outcome of a projective-emptiness test.  `basis` is the reduced
    Groebner basis of the saturation of the input by the irrelevant
    ideal: the unit ideal exactly when the projective locus is empty."""

    empty: bool
    basis: GroebnerBasis
    method: str

    def report(self) -> str:
        status = "empty" if self.empty else "nonempty"
        return "\n".join([
            f"projective locus: {status}",
            f"method: {self.method}",
            self.basis.report(),
        ])


def is_projectively_empty(ideal: Ideal,
                          weights: Optional[Sequence[int]] = None,
                          limits: RunLimits = DEFAULT_LIMITS
                          ) -> EmptinessCertificate:
    """Decides whether the projective zero locus of a (weighted-)
    homogeneous ideal is empty over the algebraic closure.

    Emptiness is equivalent to the vanishing cone being the origin alone,
    which is read off a Groebner basis: every variable must carry a pure
    power among the leading monomials.  In that case the saturation by
    the irrelevant ideal is the unit ideal and the certificate basis is
    {1}; otherwise the certificate is the nonunit saturated basis."""
    ring = ideal.ring
    if weights is not None and (len(weights) != len(ring.variables) or
                                any(w <= 0 for w in weights)):
        raise ValueError("weights must be positive, one per variable")
    for g in ideal.nonzero_generators():
        if not g.is_homogeneous(weights):
            raise ValueError("emptiness test needs homogeneous generators")
    gb = buchberger(ideal, limits=limits)
    if gb.is_unit_ideal():
        return EmptinessCertificate(True, gb, "unit ideal")
    nvars = len(ring.variables)
    covered = set()
    for p in gb.polys:
        lm = p.leading_monomial()
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            covered.add(support[0])
    if len(covered) == nvars:
        unit = Ideal(ring, (ring.one(),))
        cert_basis = GroebnerBasis((ring.one(),), gb.order, unit)
        return EmptinessCertificate(True, cert_basis, "finite quotient")
    irrelevant = Ideal(ring, ring.gens())
    sat = saturate(ideal, irrelevant, limits)
    sat_gb = buchberger(sat, limits=limits)
    if sat_gb.is_unit_ideal():
        return EmptinessCertificate(True, sat_gb, "saturation")
    return EmptinessCertificate(False, sat_gb, "saturation")


def quotient_dimension(ideal: Ideal, order: Optional[MonomialOrder] = None,
                       limits: RunLimits = DEFAULT_LIMITS,
                       enumeration_cap: int = 10_000_000):
    """Vector-space dimension of ring/ideal: the number of standard
    monomials under `order`; math.inf when the quotient is infinite-
    dimensional."""
    gb = buchberger(ideal, order=order, limits=limits)
    if gb.is_unit_ideal():
        return 0
    nvars = len(ideal.ring.variables)
    leads = [p.leading_monomial() for p in gb.polys]
    bounds = [None] * nvars
    for lm in leads:
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
    if any(b is None for b in bounds):
        return math.inf
    box = 1
    for b in bounds:
        box *= b
    if box > enumeration_cap:
        raise ResourceLimitExceeded("standard monomial enumeration",
                                    box=box, limit=enumeration_cap)
    count = 0
    for mono in itertools.product(*(range(b) for b in bounds)):
        if not any(all(e <= m for e, m in zip(lm, mono)) for lm in leads):
            count += 1
    return count
