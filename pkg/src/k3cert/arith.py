"""Exact integer, rational, prime-field and extension-field arithmetic.

Everything here is pure and deterministic: primality testing uses a fixed
witness set below 2**64 and a seeded witness schedule above, factor hunting
uses seeded Brent cycles, and CRT output uses the symmetric range so signs
survive multi-modular reconstruction.  Values are immutable and safe to share
between worker processes.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Rat = Union[int, Fraction]

# Miller-Rabin with this witness set is deterministic for n < 3.3 * 10**24,
# comfortably above the documented threshold.
DETERMINISTIC_PRIMALITY_BOUND = 2**64
_DET_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i:: i] = bytes(len(flags[i * i:: i]))
    return [i for i in range(limit + 1) if flags[i]]

_SMALL_PRIMES = _sieve(10000)


def gcd(a: int, b: int) -> int:
    """Nonnegative greatest common divisor; gcd(0, 0) == 0."""
    return math.gcd(a, b)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b == g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def inverse_mod(a: int, m: int) -> int:
    """Inverse of a modulo m; raises ZeroDivisionError if gcd(a, m) != 1."""
    g, s, _ = xgcd(a % m, m)
    if g != 1:
        raise ZeroDivisionError(f"{a} is not invertible modulo {m}")
    return s % m


def _miller_rabin_witness(n: int, a: int) -> bool:
    # True if a witnesses compositeness of odd n > 2.
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _seeded_witnesses(n: int, rounds: int) -> Iterable[int]:
    # Reproducible witness schedule for large n, seeded by n itself.
    seed = str(n).encode()
    for i in range(rounds):
        h = hashlib.sha256(seed + b":" + str(i).encode()).digest()
        yield 2 + int.from_bytes(h, "big") % (n - 3)


def is_probable_prime(n: int, rounds: int = 24) -> bool:
    """Primality test: deterministic below 2**64, strong-probable-prime with a
    seeded witness schedule above (reproducible across runs)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:64]:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < DETERMINISTIC_PRIMALITY_BOUND:
        witnesses: Iterable[int] = (a for a in _DET_WITNESSES if a < n - 1)
    else:
        witnesses = _seeded_witnesses(n, rounds)
    return not any(_miller_rabin_witness(n, a) for a in witnesses)


# ---------------------------------------------------------------------------
# factorization ledger

@dataclass(frozen=True)
class FactorEntry:
    prime: int
    exponent: int
    primality_status: str  # "proven-small" or "probable"


@dataclass(frozen=True)
class FactorLedger:
    value: int
    entries: Tuple[FactorEntry, ...]
    cofactor: int

    def verify(self) -> bool:
        prod = self.cofactor
        for e in self.entries:
            if e.exponent <= 0 or not is_probable_prime(e.prime):
                return False
            if self.cofactor % e.prime == 0:
                return False
            prod *= e.prime ** e.exponent
        return prod == self.value

    def factor_dict(self) -> dict[int, int]:
        return {e.prime: e.exponent for e in self.entries}


def _brent_rho(n: int, seed: int, max_iters: int) -> int:
    """One seeded Brent cycle with an iteration budget; returns a nontrivial
    factor of composite odd n or 1 on failure."""
    h = hashlib.sha256(f"{n}:{seed}".encode()).digest()
    y = 2 + int.from_bytes(h[:16], "big") % (n - 3)
    c = 1 + int.from_bytes(h[16:], "big") % (n - 2)
    m = 128
    g = r = q = 1
    x = ys = y
    spent = 0
    while g == 1:
        if spent > max_iters:
            return 1
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += 2 * r
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else 1


def _rho_factor(n: int, bound: int, max_seeds: int = 8) -> int:
    # expected cycle length to hit a factor p is ~1.2*sqrt(p), so a budget of
    # a few multiples of sqrt(bound) makes misses vanishingly unlikely while
    # keeping over-bound cofactors from stalling the ledger
    budget = max(20000, 4 * math.isqrt(bound))
    for seed in range(max_seeds):
        g = _brent_rho(n, seed, budget)
        if 1 < g < n:
            return g
    return 1


def extract_small_factors(n: int, bound: int = 10**6) -> FactorLedger:
    """Peel off every prime factor <= bound of n, with exact exponents.

    Trial division covers primes up to min(bound, 10**6); beyond that, seeded
    Brent-rho splits the remaining cofactor and keeps the probable-prime
    pieces that fall under the bound.  Rho runs on a fixed seed schedule, so
    on adversarial inputs a factor slightly under the bound could in
    principle be missed; for the sizes used here the schedule has ample
    margin.
    """
    if n <= 0:
        raise ValueError("positive integer required")
    rest = n
    found: dict[int, int] = {}
    trial_limit = min(bound, 10**6)

    def peel(p: int) -> None:
        nonlocal rest
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            found[p] = found.get(p, 0) + e

    # trial division proves rest prime (or 1) once the divisor square passes it
    proven_prime_or_1 = False
    for p in _SMALL_PRIMES:
        if p > trial_limit:
            break
        if p * p > rest:
            proven_prime_or_1 = True
            break
        peel(p)
    if not proven_prime_or_1:
        i = _SMALL_PRIMES[-1] + 2
        while i <= trial_limit:
            if i * i > rest:
                proven_prime_or_1 = True
                break
            peel(i)
            i += 2
    if 1 < rest <= bound and (proven_prime_or_1 or is_probable_prime(rest)):
        peel(rest)

    if bound > trial_limit and rest > 1 and not proven_prime_or_1:
        # split the cofactor into probable-prime pieces; keep those under the
        # bound, let unsplittable or over-bound pieces flow back
        stack = [rest]
        while stack:
            v = stack.pop()
            if is_probable_prime(v):
                if v <= bound:
                    found[v] = found.get(v, 0) + 1
                continue
            g = _rho_factor(v, bound)
            if g > 1:
                stack.append(g)
                stack.append(v // g)
        # exponents can be split across branches; recompute them exactly
        exact: dict[int, int] = {}
        rest = n
        for p in sorted(found):
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            if e:
                exact[p] = e
        found = exact

    entries = tuple(
        FactorEntry(p, e,
                    "proven-small" if p < DETERMINISTIC_PRIMALITY_BOUND
                    else "probable")
        for p, e in sorted(found.items()))
    return FactorLedger(value=n, entries=entries, cofactor=rest)


def factor_over(n: int, primes: Sequence[int]) -> FactorLedger:
    """Divide n by the given primes to exact exponents; no searching."""
    if n <= 0:
        raise ValueError("positive integer required")
    rest = n
    entries = []
    for p in primes:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            status = "proven-small" if p < DETERMINISTIC_PRIMALITY_BOUND else "probable"
            entries.append(FactorEntry(p, e, status))
    return FactorLedger(value=n, entries=tuple(entries), cofactor=rest)


# ---------------------------------------------------------------------------
# p-adic utilities

def padic_valuation(a: Rat, p: int) -> int:
    """v_p(a) for nonzero rational a."""
    num, den = (a.numerator, a.denominator) if isinstance(a, Fraction) else (a, 1)
    if num == 0:
        raise ZeroDivisionError("valuation of zero is undefined")
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) in {-1, 0, 1} for odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


@dataclass(frozen=True)
class SquareClassResult:
    prime: int
    valuation: int
    is_square: bool
    unit_class_witness: str


def padic_square_class(a: Rat, p: int) -> SquareClassResult:
    """Decide whether a nonzero rational is a square in the p-adic field.

    Odd p: square iff the valuation is even and the unit part is a quadratic
    residue.  p = 2: square iff the valuation is even and the unit part is
    congruent to 1 mod 8.
    """
    if a == 0:
        raise ZeroDivisionError("square class of zero is undefined")
    v = padic_valuation(a, p)
    fa = Fraction(a)
    unit = fa / Fraction(p) ** v
    if p == 2:
        # unit mod 8: numerator * inverse(denominator) mod 8
        u = unit.numerator * inverse_mod(unit.denominator, 8) % 8
        ok = v % 2 == 0 and u == 1
        witness = f"v_2 = {v}, unit = {u} mod 8"
    else:
        u = unit.numerator * inverse_mod(unit.denominator, p) % p
        sym = legendre(u, p)
        ok = v % 2 == 0 and sym == 1
        witness = f"v_{p} = {v}, legendre = {sym}"
    return SquareClassResult(prime=p, valuation=v, is_square=ok,
                             unit_class_witness=witness)


def tonelli_shanks(a: int, p: int) -> int:
    """Square root of a quadratic residue a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError("not a quadratic residue")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    # deterministic scan for a non-residue keeps runs reproducible
    z = next(z for z in range(2, p) if legendre(z, p) == -1)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def padic_sqrt(a: int, p: int, precision: int) -> int:
    """Witness w with w**2 == a mod p**precision, for a p-adic unit square a.

    Odd p lifts a Tonelli-Shanks root by Newton doubling; p = 2 requires
    a == 1 mod 8 and lifts from the 2-adic seed likewise.
    """
    if precision < 1:
        raise ValueError("precision must be positive")
    if a % p == 0:
        raise ValueError("unit required; strip even powers of p first")
    if p == 2:
        head = 1 << min(precision, 3)
        if a % head != 1 % head:
            raise ValueError("not a 2-adic square at this precision")
        if precision <= 3:
            return 1
        # bit-by-bit lift: from w^2 == a mod 2^k either w or w + 2^(k-1)
        # satisfies the congruence one bit higher
        w, k = 1, 3
        while k < precision:
            if (w * w - a) % (1 << (k + 1)):
                w += 1 << (k - 1)
            k += 1
        w %= 1 << precision
        return min(w, (1 << precision) - w)
    w = tonelli_shanks(a, p)
    k = 1
    while k < precision:
        k2 = min(2 * k, precision)
        mod = p ** k2
        # Newton step w -> (w + a/w) / 2 doubles the matching precision
        w = (w + (a % mod) * inverse_mod(w, mod)) % mod
        w = w * inverse_mod(2, mod) % mod
        k = k2
    return min(w, p ** precision - w)


# ---------------------------------------------------------------------------
# CRT and rational reconstruction

def crt_combine(residues: Sequence[Tuple[int, int]], symmetric: bool = True) -> int:
    """Combine (residue, modulus) pairs into a single residue.

    Moduli must be pairwise coprime (non-coprime pairs raise unless the
    residues agree, in which case they merge).  Output lies in the symmetric
    range (-M/2, M/2] by default, or [0, M) if symmetric is False.
    """
    r, m = 0, 1
    for (ri, mi) in residues:
        if mi <= 0:
            raise ValueError("moduli must be positive")
        g = math.gcd(m, mi)
        if (ri - r) % g:
            raise ValueError("inconsistent residues at non-coprime moduli")
        lcm = m // g * mi
        if mi // g > 1:
            t = ((ri - r) // g * inverse_mod(m // g, mi // g)) % (mi // g)
            r = (r + m * t) % lcm
        m = lcm
    if symmetric and r > m // 2:
        r -= m
    return r


def rational_reconstruct(r: int, modulus: int) -> Optional[Fraction]:
    """Lift r mod modulus to the unique fraction a/b with |a|, b <= sqrt(m/2),
    gcd(b, m) = 1 and a == r*b mod m, or return None."""
    if modulus <= 1:
        raise ValueError("modulus must exceed 1")
    bound = math.isqrt(modulus // 2)
    v0, v1 = (modulus, 0), (r % modulus, 1)
    while v1[0] > bound:
        q = v0[0] // v1[0]
        v0, v1 = v1, (v0[0] - q * v1[0], v0[1] - q * v1[1])
    a, b = v1
    if b < 0:
        a, b = -a, -b
    if b == 0 or abs(a) > bound or b > bound or math.gcd(b, modulus) != 1:
        return None
    if (a - r * b) % modulus:
        return None
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# field elements

class PrimeFieldElement:
    """Element of F_p with operator arithmetic; residues stay in [0, p)."""

    __slots__ = ("p", "value")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = value % p

    def __add__(self, other):
        return PrimeFieldElement(self.value + _coerce(other, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElement(self.value - _coerce(other, self.p), self.p)

    def __rsub__(self, other):
        return PrimeFieldElement(_coerce(other, self.p) - self.value, self.p)

    def __mul__(self, other):
        return PrimeFieldElement(self.value * _coerce(other, self.p), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * PrimeFieldElement(_coerce(other, self.p), self.p).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * _coerce(other, self.p)

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElement(pow(self.value, e, self.p), self.p)

    def inverse(self) -> "PrimeFieldElement":
        return PrimeFieldElement(inverse_mod(self.value, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def _coerce(v, p: int) -> int:
    if isinstance(v, PrimeFieldElement):
        if v.p != p:
            raise ValueError("mixed prime moduli")
        return v.value
    if isinstance(v, int):
        return v % p
    raise TypeError(f"cannot coerce {type(v).__name__} into F_{p}")


class ExtFieldElement:
    """Element of F_p[a]/(modulus), with coefficients over any stack of
    PrimeFieldElement/ExtFieldElement layers (towers allowed).

    The defining modulus is a tuple of base-field coefficients, ascending
    degree, monic; representatives keep degree < k."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ExtField", coeffs):
        k = field.degree
        cs = list(coeffs)
        if len(cs) > k:
            raise ValueError("representative too long")
        cs += [field.base_zero] * (k - len(cs))
        self.field = field
        self.coeffs = tuple(cs)

    def _binop(self, other, op):
        other = self.field.coerce(other)
        return ExtFieldElement(
            self.field, [op(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __neg__(self):
        return ExtFieldElement(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self.field.coerce(other)
        return ExtFieldElement(self.field,
                               self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "ExtFieldElement":
        return self.field.inverse(self)

    def __truediv__(self, other):
        return self * self.field.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = self.field.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"ext{self.coeffs}"


class ExtField:
    """F_q[t]/(modulus) as a concrete field of ExtFieldElement values.

    base is either an int prime p (ground layer) or another ExtField; the
    modulus is given ascending with monic leading coefficient."""

    def __init__(self, base, modulus_ascending):
        self.base = base
        if isinstance(base, int):
            self.p = base
            self.base_zero = PrimeFieldElement(0, base)
            self.base_one = PrimeFieldElement(1, base)
            mk = [c if isinstance(c, PrimeFieldElement)
                  else PrimeFieldElement(c, base) for c in modulus_ascending]
        else:
            self.p = base.p
            self.base_zero = base.zero
            self.base_one = base.one
            mk = [base.coerce(c) for c in modulus_ascending]
        if not mk or mk[-1] != self.base_one:
            raise ValueError("monic modulus required")
        self.modulus = tuple(mk)
        self.degree = len(mk) - 1
        self.zero = ExtFieldElement(self, [self.base_zero])
        self.one = ExtFieldElement(self, [self.base_one])
        self.gen = ExtFieldElement(
            self, [self.base_zero, self.base_one] if self.degree > 1
            else [-mk[0]])

    def order(self) -> int:
        k = self.degree
        b = self.base
        while not isinstance(b, int):
            k *= b.degree
            b = b.base
        return b ** k

    def coerce(self, v) -> ExtFieldElement:
        if isinstance(v, ExtFieldElement):
            if v.field is self:
                return v
            if v.field is self.base:
                return ExtFieldElement(self, [v])
            raise ValueError("mixed extension fields")
        if isinstance(v, int):
            if isinstance(self.base, int):
                return ExtFieldElement(self, [PrimeFieldElement(v, self.p)])
            return ExtFieldElement(self, [self.base.coerce(v)])
        if isinstance(v, PrimeFieldElement) and isinstance(self.base, int):
            return ExtFieldElement(self, [v])
        if not isinstance(self.base, int):
            return ExtFieldElement(self, [self.base.coerce(v)])
        raise TypeError(f"cannot coerce {type(v).__name__}")

    def _mul(self, a, b):
        k = self.degree
        zero = self.base_zero
        prod = [zero] * (2 * k - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = prod[i + j] + ai * bj
        # reduce by the monic modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if not c:
                continue
            prod[i] = zero
            for j in range(self.degree):
                prod[i - k + j] = prod[i - k + j] - c * self.modulus[j]
        return prod[:k]

    def inverse(self, v: ExtFieldElement) -> ExtFieldElement:
        # extended Euclid on coefficient lists over the base field
        zero, one = self.base_zero, self.base_one

        def degree_of(c):
            for i in range(len(c) - 1, -1, -1):
                if c[i]:
                    return i
            return -1

        def scale(c, s):
            return [ci * s for ci in c]

        def sub(c, d):
            ln = max(len(c), len(d))
            c = list(c) + [zero] * (ln - len(c))
            d = list(d) + [zero] * (ln - len(d))
            return [a - b for a, b in zip(c, d)]

        r0, r1 = list(self.modulus), list(v.coeffs)
        s0, s1 = [zero], [one]
        d1 = degree_of(r1)
        if d1 < 0:
            raise ZeroDivisionError("zero has no inverse")
        while True:
            d0, d1 = degree_of(r0), degree_of(r1)
            if d1 < 0:
                raise ZeroDivisionError("zero divisor met in inversion")
            if d1 == 0:
                inv_lead = self._base_inv(r1[0])
                return ExtFieldElement(self, scale(s1, inv_lead)[:self.degree])
            while d0 >= d1:
                q = r0[d0] * self._base_inv(r1[d1])
                shift = d0 - d1
                r0 = sub(r0, [zero] * shift + scale(r1, q))
                s0 = sub(s0, [zero] * shift + scale(s1, q))
                d0 = degree_of(r0)
            r0, r1 = r1, r0
            s0, s1 = s1, s0

    def _base_inv(self, c):
        if isinstance(c, PrimeFieldElement):
            return c.inverse()
        return self.base.inverse(c)

    def elements(self):
        """Iterate all field elements (small fields only)."""
        if isinstance(self.base, int):
            base_elems = [PrimeFieldElement(i, self.p) for i in range(self.p)]
        else:
            base_elems = list(self.base.elements())
        idx = [0] * self.degree
        total = len(base_elems) ** self.degree
        for n in range(total):
            v, coeffs = n, []
            for _ in range(self.degree):
                coeffs.append(base_elems[v % len(base_elems)])
                v //= len(base_elems)
            yield ExtFieldElement(self, coeffs)

    def __repr__(self):
        return f"ExtField(order={self.order()})"
