"""Reconstruction of a homogeneous ternary form from univariate slices.

A degree-d form in three variables has (d+1)(d+2)/2 coefficients.  Fixing
the last two coordinates at a coprime integer pair and letting the first
vary restricts the form to a univariate polynomial whose d+1 coefficients
are linear in the unknowns, so enough slices determine the form by exact
rational elimination.  Slices may come with a known scale (the oracle
reported exact values) or only up to an unknown nonzero factor (the
oracle reported a projective object); both contracts are supported and
mixed freely.

The module also ships the downstream consumers of a reconstructed form:
exact extraction of a smooth degree-6 component from a degree-12 form,
and a guarded discriminant oracle that produces slices either exactly
(for symmetric-matrix fibrations) or multi-modularly, and that refuses —
with a structured resource report — the full elimination route that is
too expensive at realistic scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import crt_combine, is_probable_prime
from .groebner import Ideal, RunLimits, elimination_ideal, is_projectively_empty
from .poly import GF, Polynomial, PolyRing, QQ, UniPoly, ZZ

__all__ = [
    "SpecializationSample",
    "ReconstructionProblem",
    "ReconstructionError",
    "ReconstructionResult",
    "reconstruct",
    "specialize_form",
    "ExtractionVerdict",
    "extract_smooth_sextic",
    "ConicFamily",
    "FibrationSystem",
    "shipped_fibration",
    "discriminant_oracle",
]

MAX_SLICE_DEGREE = 12


# ---------------------------------------------------------------------------
# samples and problems

@dataclass(frozen=True)
class SpecializationSample:
    """One univariate slice of the target form.

    `values` is the restriction of the form to the line through
    (1 : 0 : 0) and (0 : y0 : z0), written as a polynomial in the first
    variable.  When `scale_known` is false the values are trusted only up
    to one nonzero rational factor, and the solver allocates a fresh
    unknown for that factor."""

    y0: int
    z0: int
    values: UniPoly
    scale_known: bool = True

    def __post_init__(self):
        if (self.y0, self.z0) == (0, 0):
            raise ValueError("the pair (0, 0) does not define a slice")
        if math.gcd(self.y0, self.z0) != 1:
            raise ValueError("slice pair must be coprime")
        if self.values.domain != QQ:
            raise ValueError("slice values must be rational")
        if self.values.degree() > MAX_SLICE_DEGREE:
            raise ValueError(
                f"slice degree exceeds the cap {MAX_SLICE_DEGREE}")

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self.values.coeffs):
            return self.values.coeffs[i]
        return Fraction(0)

    def is_zero(self) -> bool:
        return self.values.is_zero()


@dataclass(frozen=True)
class ReconstructionProblem:
    """A target degree together with the collected slices.

    The unknowns are the coefficients of a homogeneous degree-`degree`
    form in three variables: (degree+1)(degree+2)/2 of them."""

    degree: int
    samples: Tuple[SpecializationSample, ...]

    def __post_init__(self):
        if not (0 <= self.degree <= MAX_SLICE_DEGREE):
            raise ValueError(
                f"degree must lie in 0..{MAX_SLICE_DEGREE}")
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise ValueError("at least one slice is required")
        for s in self.samples:
            if s.values.degree() > self.degree:
                raise ValueError(
                    "slice degree exceeds the target form degree")

    @property
    def unknown_count(self) -> int:
        return (self.degree + 1) * (self.degree + 2) // 2


class ReconstructionError(ValueError):
    """The linear system did not have a one-dimensional solution space.

    `kind` is "underdetermined" (several independent solutions) or
    "inconsistent" (no nonzero solution interpolates the data); the rank
    profile is attached so the caller can see how far off the sample set
    was."""

    def __init__(self, kind: str, rank: int, nullity: int,
                 unknowns: int, equations: int, detail: str = ""):
        self.kind = kind
        self.rank = rank
        self.nullity = nullity
        self.unknowns = unknowns
        self.equations = equations
        msg = (f"{kind} reconstruction: rank {rank}, nullity {nullity}, "
               f"{unknowns} unknowns, {equations} equations")
        if detail:
            msg += f"; {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class ReconstructionResult:
    """The solved form plus the rank profile of the linear system.

    `form` is integral, primitive, and normalized so its leading
    (grevlex-first) coefficient is positive.  `sample_scales[i]` is the
    rational factor with  form(x, y0, z0) == scale * sample values ,
    or None for an identically zero slice."""

    form: Polynomial
    rank: int
    unknowns: int
    equations: int
    sample_scales: Tuple[Optional[Fraction], ...]


def _degree_monomials(d: int) -> List[Tuple[int, int, int]]:
    """All exponent triples of total degree d, in a fixed documented
    order: descending power of the first variable, then of the second."""
    out = []
    for i in range(d, -1, -1):
        for j in range(d - i, -1, -1):
            out.append((i, j, d - i - j))
    return out


def _height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


def _rref(matrix: List[List[Fraction]]) -> Tuple[List[List[Fraction]],
                                                 List[int]]:
    """Reduced row echelon form by exact rational elimination.  Among the
    candidate pivots of a column the entry of least height is chosen,
    which keeps intermediate numbers small for small-height samples."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        best = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                if best is None or _height(rows[i][c]) < _height(
                        rows[best][c]):
                    best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b
                           for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def _nullspace_vector(rref_rows: List[List[Fraction]],
                      pivots: List[int], ncols: int) -> List[Fraction]:
    """The kernel vector for the unique free column (nullity one)."""
    free = [c for c in range(ncols) if c not in pivots]
    assert len(free) == 1
    fc = free[0]
    vec = [Fraction(0)] * ncols
    vec[fc] = Fraction(1)
    for row, pc in zip(rref_rows, pivots):
        vec[pc] = -row[fc]
    return vec


_RING_ZZ = PolyRing(("x", "y", "z"), ZZ)


def reconstruct(problem: ReconstructionProblem) -> ReconstructionResult:
    """Solves for the unique-up-to-scalar form interpolating the slices.

    Every slice contributes degree+1 linear equations.  All exact-scale
    slices share one global scale unknown (so the data enters a
    homogeneous system and "unique up to scalar" is literal); each
    unknown-scale slice carries its own factor.  The solution space must
    be one-dimensional, every scale factor in the solution must be
    nonzero, and the result is normalized integral primitive with
    positive leading coefficient."""
    d = problem.degree
    monos = _degree_monomials(d)
    ncoef = len(monos)
    col_of = {m: i for i, m in enumerate(monos)}

    known = [s for s in problem.samples if s.scale_known]
    unknown = [s for s in problem.samples if not s.scale_known]
    ncols = ncoef + (1 if known else 0) + len(unknown)
    scale_col: Dict[int, int] = {}
    if known:
        global_col = ncoef
        base = ncoef + 1
    else:
        global_col = None
        base = ncoef
    for idx, s in enumerate(unknown):
        scale_col[id(s)] = base + idx

    rows: List[List[Fraction]] = []
    for s in problem.samples:
        powers_y = [Fraction(s.y0) ** e for e in range(d + 1)]
        powers_z = [Fraction(s.z0) ** e for e in range(d + 1)]
        col_s = global_col if s.scale_known else scale_col[id(s)]
        for i in range(d + 1):
            row = [Fraction(0)] * ncols
            for j in range(d - i + 1):
                k = d - i - j
                row[col_of[(i, j, k)]] = powers_y[j] * powers_z[k]
            row[col_s] = -s.coefficient(i)
            rows.append(row)

    rref_rows, pivots = _rref(rows)
    rank = len(pivots)
    nullity = ncols - rank
    if nullity == 0:
        raise ReconstructionError(
            "inconsistent", rank, nullity, ncols, len(rows),
            "only the zero assignment satisfies every slice")
    if nullity > 1:
        raise ReconstructionError(
            "underdetermined", rank, nullity, ncols, len(rows),
            "add slices at fresh coprime pairs")
    vec = _nullspace_vector(rref_rows, pivots, ncols)

    for s in problem.samples:
        col_s = global_col if s.scale_known else scale_col[id(s)]
        if vec[col_s] == 0 and not s.is_zero():
            raise ReconstructionError(
                "inconsistent", rank, nullity, ncols, len(rows),
                f"slice at ({s.y0}, {s.z0}) cannot be matched at any "
                f"scale")
    coeff_vec = vec[:ncoef]
    if all(v == 0 for v in coeff_vec):
        raise ReconstructionError(
            "inconsistent", rank, nullity, ncols, len(rows),
            "the only interpolant is the zero form")

    denom_lcm = 1
    for v in coeff_vec:
        denom_lcm = denom_lcm * v.denominator // math.gcd(
            denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in coeff_vec]
    content = 0
    for v in ints:
        content = math.gcd(content, abs(v))
    ints = [v // content for v in ints]
    form = _RING_ZZ.from_terms(
        [(m, c) for m, c in zip(monos, ints) if c])
    if form.terms[0][1] < 0:
        form = form * (-1)

    scales: List[Optional[Fraction]] = []
    for s in problem.samples:
        restricted = _slice_values(form, s.y0, s.z0)
        scales.append(_proportionality(restricted, s.values))
    return ReconstructionResult(
        form=form, rank=rank, unknowns=ncols, equations=len(rows),
        sample_scales=tuple(scales))


def _slice_values(form: Polynomial, y0: int, z0: int) -> UniPoly:
    """form(x, y0, z0) as a univariate rational polynomial."""
    vy, vz = form.ring.variables[1], form.ring.variables[2]
    restricted = form.substitute_values({vy: y0, vz: z0})
    d = form.total_degree()
    coeffs = [Fraction(0)] * (d + 1)
    for mono, c in restricted.terms:
        coeffs[mono[0]] = Fraction(c)
    return UniPoly(QQ, coeffs)


def _proportionality(a: UniPoly, b: UniPoly) -> Optional[Fraction]:
    """The factor with a == factor * b, None when b is zero; raises when
    the two are not proportional (an internal solver invariant)."""
    if b.is_zero():
        if not a.is_zero():
            raise ArithmeticError("zero slice against nonzero restriction")
        return None
    if a.is_zero():
        raise ArithmeticError("nonzero slice against zero restriction")
    factor = a.lead() / b.lead()
    if a.degree() != b.degree() or any(
            x != factor * y for x, y in zip(a.coeffs, b.coeffs)):
        raise ArithmeticError("slice is not proportional to restriction")
    return factor


def specialize_form(form: Polynomial, y0: int, z0: int,
                    scale: Fraction = Fraction(1),
                    scale_known: bool = True) -> SpecializationSample:
    """Builds the slice of a ternary form at a coprime pair, optionally
    multiplied by a simulated oracle scale."""
    if len(form.ring.variables) != 3:
        raise ValueError("a three-variable form is required")
    if not form.is_homogeneous():
        raise ValueError("a homogeneous form is required")
    scale = Fraction(scale)
    if scale == 0:
        raise ValueError("scale must be nonzero")
    values = _slice_values(form, y0, z0)
    scaled = UniPoly(QQ, [scale * c for c in values.coeffs])
    return SpecializationSample(
        y0=y0, z0=z0, values=scaled, scale_known=scale_known)


# ---------------------------------------------------------------------------
# component extraction

@dataclass(frozen=True)
class ExtractionVerdict:
    """Result of dividing a degree-12 form by a candidate sextic.

    `candidate_smooth` certifies (via singular-locus emptiness modulo the
    two recorded primes) that the candidate has no singular point in any
    characteristic-zero algebraic closure.  `cofactor_is_singular` is the
    opposite check on the cofactor: the expected companion component is a
    cuspidal curve, so a smooth cofactor does not match that profile."""

    cofactor: Polynomial
    candidate_smooth: bool
    smoothness_primes: Tuple[int, ...]
    cofactor_is_singular: bool
    detail: str = ""


_SMOOTHNESS_POOL = (7, 11, 13, 17, 19, 23, 29, 31)


def _as_primitive_integral(form: Polynomial) -> Polynomial:
    """Clears denominators and content; fixes the leading sign positive.
    The result lives in the shared integer ring on (x, y, z)."""
    if len(form.ring.variables) != 3:
        raise ValueError("a three-variable form is required")
    if form.is_zero():
        raise ValueError("the zero form has no primitive model")
    denom_lcm = 1
    for _, c in form.terms:
        q = Fraction(c)
        denom_lcm = denom_lcm * q.denominator // math.gcd(
            denom_lcm, q.denominator)
    ints = {}
    content = 0
    for m, c in form.terms:
        v = int(Fraction(c) * denom_lcm)
        ints[m] = v
        content = math.gcd(content, abs(v))
    out = _RING_ZZ.from_terms(
        [(m, v // content) for m, v in ints.items()])
    if out.terms[0][1] < 0:
        out = out * (-1)
    return out


def _singular_locus_empty_mod_p(form: Polynomial, p: int,
                                limits: RunLimits) -> Optional[bool]:
    """Whether the projective singular locus of the reduction mod p is
    empty; None when the reduction degenerates (content divisible by p).
    Emptiness modulo a single prime already forces smoothness in
    characteristic zero, because a characteristic-zero singular point
    would survive reduction."""
    reduced = form.reduce_mod(p)
    if reduced.is_zero() or reduced.total_degree() != form.total_degree():
        return None
    gens = [reduced] + [reduced.partial_derivative(i) for i in range(3)]
    cert = is_projectively_empty(Ideal(reduced.ring, gens), limits=limits)
    return cert.empty


def extract_smooth_sextic(big_form: Polynomial, candidate: Polynomial,
                          primes: Sequence[int] = _SMOOTHNESS_POOL,
                          limits: RunLimits = RunLimits()
                          ) -> ExtractionVerdict:
    """Verifies that the candidate sextic divides the degree-12 form
    exactly, that the cofactor is again a sextic, and that the candidate
    is smooth — certified independently modulo two distinct good primes.
    The cofactor's own singularity status is reported so a caller can
    check it against the expected cuspidal companion."""
    big = _as_primitive_integral(big_form)
    cand = _as_primitive_integral(candidate)
    if cand.total_degree() != 6 or not cand.is_homogeneous():
        raise ValueError("candidate must be a homogeneous sextic")
    if not big.is_homogeneous():
        raise ValueError("the degree-12 form must be homogeneous")
    try:
        cofactor = big.exact_div(cand)
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(
            "candidate does not divide the degree-12 form") from err
    if cofactor.total_degree() != 6:
        raise ValueError(
            f"cofactor has degree {cofactor.total_degree()}, expected 6")

    certified: List[int] = []
    skipped: List[int] = []
    for p in primes:
        verdict = _singular_locus_empty_mod_p(cand, p, limits)
        if verdict is True:
            certified.append(p)
            if len(certified) == 2:
                break
        else:
            skipped.append(p)
    smooth = len(certified) == 2

    cof_singular = True
    cof_primes: List[int] = []
    for p in primes:
        verdict = _singular_locus_empty_mod_p(cofactor, p, limits)
        if verdict is True:
            cof_singular = False
            cof_primes.append(p)
            break
        if verdict is False:
            cof_primes.append(p)
            if len(cof_primes) == 2:
                break

    parts = []
    if smooth:
        parts.append(
            f"candidate singular locus empty modulo {certified[0]} and "
            f"{certified[1]}")
    else:
        parts.append(
            f"candidate smoothness not certified (tried {list(primes)}, "
            f"failures/degenerations at {skipped})")
    if cof_singular:
        parts.append(
            f"cofactor is singular modulo {cof_primes} — consistent "
            f"with a cuspidal companion")
    else:
        parts.append(
            f"cofactor is smooth modulo {cof_primes[0]} — it cannot be "
            f"the cuspidal companion")
    return ExtractionVerdict(
        cofactor=cofactor,
        candidate_smooth=smooth,
        smoothness_primes=tuple(certified),
        cofactor_is_singular=cof_singular,
        detail="; ".join(parts))


# ---------------------------------------------------------------------------
# discriminant oracle

@dataclass(frozen=True)
class ConicFamily:
    """A family of plane conics whose Gram matrix has polynomial entries
    over a base ring; the discriminant of the family is the determinant,
    computable exactly and cheaply."""

    matrix: Tuple[Tuple[Polynomial, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != 3 or any(len(row) != 3 for row in m):
            raise ValueError("a 3x3 Gram matrix is required")
        ring = m[0][0].ring
        for row in m:
            for entry in row:
                if entry.ring != ring:
                    raise ValueError("matrix entries share one ring")
        for i in range(3):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise ValueError("the Gram matrix must be symmetric")

    @property
    def ring(self) -> PolyRing:
        return self.matrix[0][0].ring

    def discriminant(self) -> Polynomial:
        """Determinant of the Gram matrix by direct cofactor expansion."""
        m = self.matrix
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


_MODULAR_PRIMES = (1000003, 1000033, 1000037, 1000039, 1000081, 1000099)


def _modular_discriminant(family: ConicFamily,
                          primes: Sequence[int]) -> Polynomial:
    """Determinant reconstructed from its reductions at the given primes
    via the Chinese remainder theorem with symmetric lifting.  The prime
    runs share no arithmetic with the exact route, so agreement between
    the two is a genuine cross-check."""
    if len(primes) < 2:
        raise ValueError("at least two primes are required")
    ring = family.ring
    if ring.domain != ZZ:
        raise ValueError("the modular route needs integer entries")
    per_prime: List[Dict[tuple, int]] = []
    for p in primes:
        if not is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        reduced = ConicFamily(tuple(
            tuple(entry.reduce_mod(p) for entry in row)
            for row in family.matrix))
        det = reduced.discriminant()
        per_prime.append({m: int(c) for m, c in det.terms})
    support = set()
    for table in per_prime:
        support.update(table)
    terms = []
    for mono in sorted(support):
        residues = [(table.get(mono, 0), p)
                    for table, p in zip(per_prime, primes)]
        lifted = crt_combine(residues, symmetric=True)
        if lifted:
            terms.append((mono, lifted))
    return ring.from_terms(terms)


@dataclass(frozen=True)
class FibrationSystem:
    """A cubic hypersurface together with the three quadrics whose net
    induces the projection to the plane.  Slicing the base plane at
    (t : y0 : z0) and asking for the t-values over which the fiber turns
    singular is an elimination problem in ten polynomial unknowns — set
    up on the dominant multiplier chart of the criticality condition, and
    guarded because completing it is far beyond desk scale."""

    cubic: Polynomial
    quadrics: Tuple[Polynomial, Polynomial, Polynomial]

    def __post_init__(self):
        object.__setattr__(self, "quadrics", tuple(self.quadrics))
        if len(self.quadrics) != 3:
            raise ValueError("exactly three quadrics are required")


def shipped_fibration() -> FibrationSystem:
    from . import constants
    return FibrationSystem(
        cubic=constants.fourfold_cubic(),
        quadrics=constants.quadrics())


def _fibration_slice_ideal(system: FibrationSystem, y0: int,
                           z0: int) -> Ideal:
    """The incidence system whose elimination to the plane coordinate
    gives the singular-fiber values along one base slice: the cubic, the
    two net equations pinning the fiber over (t : y0 : z0), and the rank
    condition that some point of the fiber is critical, expressed through
    auxiliary multipliers."""
    ring = system.cubic.ring
    nvars = len(ring.variables)
    names = tuple(ring.variables) + ("t", "u1", "u2", "u3")
    big = PolyRing(names, QQ)
    gens = big.gens()
    t, u1, u2, u3 = gens[nvars:]

    def lift(poly: Polynomial) -> Polynomial:
        return big.from_terms(
            [(tuple(m) + (0,) * 4, Fraction(c)) for m, c in poly.terms])

    cubic = lift(system.cubic)
    q1, q2, q3 = (lift(q) for q in system.quadrics)
    # all three 2x2 minors pinning (q1 : q2 : q3) = (t : y0 : z0); any two
    # degenerate on the locus where the omitted coordinate vanishes
    minors = [q1 * Fraction(y0) - q2 * t,
              q2 * Fraction(z0) - q3 * Fraction(y0),
              q1 * Fraction(z0) - q3 * t]
    eqs = [cubic] + minors
    # critical-point condition in its dominant chart: the gradient of the
    # cubic is an affine combination of the pinning gradients
    for i in range(nvars):
        eqs.append(cubic.partial_derivative(i)
                   - minors[0].partial_derivative(i) * u1
                   - minors[1].partial_derivative(i) * u2
                   - minors[2].partial_derivative(i) * u3)
    return Ideal(big, eqs)


def discriminant_oracle(family, y0: int, z0: int,
                        method: str = "exact",
                        primes: Sequence[int] = _MODULAR_PRIMES,
                        limits: RunLimits = RunLimits(
                            max_basis_size=40, max_total_degree=12,
                            max_pairs=400)) -> SpecializationSample:
    """One slice of a fibration's discriminant form, scale unknown.

    For a `ConicFamily` the slice is cut from the exact determinant
    ("exact") or from a CRT reconstruction over several primes that is
    accepted only when two successive prime sets agree ("modular").  For
    a `FibrationSystem` the faithful elimination is attempted under tight
    resource limits and the structured resource error is allowed to
    propagate: completing it is out of desk-scale reach."""
    if math.gcd(y0, z0) != 1:
        raise ValueError("slice pair must be coprime")
    if isinstance(family, ConicFamily):
        if len(family.ring.variables) != 3:
            raise ValueError("slicing needs a three-variable base")
        if method == "exact":
            disc = family.discriminant()
        elif method == "modular":
            first = _modular_discriminant(family, primes[:2])
            second = _modular_discriminant(family, primes[:3])
            if first != second:
                third = _modular_discriminant(family, primes)
                if second != third:
                    raise ArithmeticError(
                        "modular determinant did not stabilize; add "
                        "larger primes")
                second = third
            disc = second
        else:
            raise ValueError(f"unknown method {method!r}")
        if disc.is_zero():
            raise ValueError("the family is everywhere degenerate")
        return specialize_form(disc, y0, z0, scale_known=False)
    if isinstance(family, FibrationSystem):
        ideal = _fibration_slice_ideal(family, y0, z0)
        keep = ("t",)
        eliminated = elimination_ideal(ideal, keep, limits=limits)
        for g in eliminated.generators:
            if not g.is_zero():
                values = [Fraction(0)] * (g.total_degree() + 1)
                for mono, c in g.terms:
                    values[mono[-3]] = Fraction(c)
                return SpecializationSample(
                    y0=y0, z0=z0, values=UniPoly(QQ, values),
                    scale_known=False)
        raise ArithmeticError("elimination produced no relation")
    raise TypeError("family must be a ConicFamily or a FibrationSystem")
