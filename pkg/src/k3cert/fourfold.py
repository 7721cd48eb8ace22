"""Construction and checking of the special cubic hypersurface in P^5:
saturating three quadrics through a pair of disjoint planes into the
ideal of a sextic ruled surface, assembling an everywhere-locally-
interesting cubic from its generators, and certifying 3-adic
insolubility and smoothness."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .groebner import (
    GroebnerBasis,
    Ideal,
    ResourceLimitExceeded,
    RunLimits,
    buchberger,
    ideal_equal,
    is_projectively_empty,
    normal_form,
    saturate,
)
from .localsolve import SolubilityReport, scan_projective
from .poly import Polynomial, PolyRing, QQ, ZZ

__all__ = [
    "SurfaceIdealPackage",
    "CubicFourfold",
    "StructuralMismatch",
    "build_surface_ideal",
    "assemble_cubic",
    "verify_insoluble_mod9",
    "plane_cubic_in_own_ring",
    "verify_plane_cubics_insoluble",
    "certify_smooth",
    "SmoothnessCertificate",
    "sample_quadric_configurations",
]


class StructuralMismatch(RuntimeError):
    """The saturation did not produce the expected two-cubic structure."""


@dataclass(frozen=True)
class SurfaceIdealPackage:
    """The saturation bundle: input quadrics, the two plane ideals, the
    saturated surface ideal, and the two extracted plane cubics (primitive
    integral forms when the ground field is Q)."""

    quadrics: Tuple[Polynomial, Polynomial, Polynomial]
    plane_ideals: Tuple[Ideal, Ideal]
    surface_ideal: Ideal
    cubics: Tuple[Polynomial, Polynomial]

    def surface_basis(self) -> GroebnerBasis:
        return buchberger(self.surface_ideal)


@dataclass(frozen=True)
class CubicFourfold:
    """A homogeneous cubic in six variables over Z, together with the
    linear multipliers used to assemble it from the surface package."""

    cubic: Polynomial
    multipliers: Tuple[Polynomial, Polynomial, Polynomial]

    def __post_init__(self):
        if self.cubic.total_degree() != 3 or not self.cubic.is_homogeneous():
            raise ValueError("expected a homogeneous cubic")


def _support(poly: Polynomial) -> set:
    out = set()
    for mono, _ in poly.terms:
        for i, e in enumerate(mono):
            if e:
                out.add(i)
    return out


def build_surface_ideal(quadrics: Sequence[Polynomial],
                        plane1: Sequence[str] = ("x0", "x1", "x2"),
                        plane2: Sequence[str] = ("x3", "x4", "x5"),
                        limits: RunLimits = RunLimits()
                        ) -> SurfaceIdealPackage:
    """Saturates <quadrics> by the product of the two plane ideals and
    extracts the two new minimal cubic generators from the reduced
    Groebner basis.

    The quadrics must contain both planes (vanish modulo each plane
    ideal).  The returned ideal is verified (double inclusion) to equal
    the ideal generated by the quadrics plus the two cubics.  Raises
    StructuralMismatch when the saturation does not add exactly two new
    cubics.  When each cubic is supported on one plane's coordinate
    triple, the first returned cubic is the one in the second plane's
    variables."""
    if len(quadrics) != 3:
        raise ValueError("expected exactly three quadrics")
    base_ring = quadrics[0].ring
    over_z = base_ring.domain == ZZ
    field_ring = base_ring.with_domain(QQ) if over_z else base_ring
    qs = tuple(q.map_domain(QQ) if over_z else q for q in quadrics)
    for q in qs:
        if q.total_degree() != 2 or not q.is_homogeneous():
            raise ValueError("generators must be homogeneous quadrics")

    idx1 = [field_ring.var_index(v) for v in plane1]
    idx2 = [field_ring.var_index(v) for v in plane2]
    gens = field_ring.gens()
    ideal1 = Ideal(field_ring, tuple(gens[i] for i in idx1))
    ideal2 = Ideal(field_ring, tuple(gens[i] for i in idx2))

    gb1 = buchberger(ideal1, limits=limits)
    gb2 = buchberger(ideal2, limits=limits)
    for q in qs:
        if not normal_form(q, gb1).is_zero() or \
                not normal_form(q, gb2).is_zero():
            raise ValueError("quadric does not contain both planes")

    products = [a * b for a in ideal1.generators for b in ideal2.generators]
    quadric_ideal = Ideal(field_ring, qs)
    surface = saturate(quadric_ideal, Ideal(field_ring, tuple(products)),
                       limits=limits)
    surface_gb = buchberger(surface, limits=limits)
    if surface_gb.is_unit_ideal():
        raise StructuralMismatch("saturation removed the whole zero locus")

    # greedy minimal-generator selection among the reduced basis's cubics
    picked: List[Polynomial] = []
    for cand in (g for g in surface_gb.polys if g.total_degree() == 3):
        current = buchberger(Ideal(field_ring, qs + tuple(picked)),
                             limits=limits)
        if not normal_form(cand, current).is_zero():
            picked.append(cand)
    if len(picked) != 2:
        raise StructuralMismatch(
            f"saturation added {len(picked)} new minimal cubics, "
            "expected exactly two")
    if not ideal_equal(surface, Ideal(field_ring, qs + tuple(picked)),
                       limits=limits):
        raise StructuralMismatch(
            "quadrics plus extracted cubics do not regenerate the "
            "saturated ideal")

    supports = [_support(c) for c in picked]
    if supports[0] <= set(idx2) and supports[1] <= set(idx1):
        pass
    elif supports[0] <= set(idx1) and supports[1] <= set(idx2):
        picked.reverse()
    if over_z:
        picked = [c.clear_denominators() for c in picked]

    return SurfaceIdealPackage(
        quadrics=tuple(quadrics), plane_ideals=(ideal1, ideal2),
        surface_ideal=surface, cubics=(picked[0], picked[1]))


def assemble_cubic(pkg: SurfaceIdealPackage,
                   multipliers: Sequence[Polynomial]) -> CubicFourfold:
    """C = 9*(L1*Q1 + L2*Q2 + L3*Q3) + 3*C1 + C2, expanded over Z."""
    if len(multipliers) != 3:
        raise ValueError("expected three linear multipliers")
    ring = pkg.quadrics[0].ring
    for ell in multipliers:
        if not ell.is_zero() and ell.total_degree() > 1:
            raise ValueError("multipliers must be linear forms")
    combo = ring.zero()
    for ell, q in zip(multipliers, pkg.quadrics):
        combo = combo + ell * q
    c1, c2 = pkg.cubics
    cubic = combo.scale(9) + c1.scale(3) + c2
    return CubicFourfold(cubic=cubic, multipliers=tuple(multipliers))


def verify_insoluble_mod9(fourfold: CubicFourfold,
                          workers: int = 1) -> SolubilityReport:
    """Complete scan of the cubic mod 9 over all primitive 6-tuples."""
    return scan_projective([fourfold.cubic], 9, workers=workers)


def plane_cubic_in_own_ring(cubic: Polynomial,
                            variables: Sequence[str]) -> Polynomial:
    """Restricts a cubic supported on three coordinates of a larger ring
    to a standalone three-variable ring."""
    ring = cubic.ring
    idx = [ring.var_index(v) for v in variables]
    others = [i for i in range(len(ring.variables)) if i not in idx]
    for mono, _ in cubic.terms:
        if any(mono[i] for i in others):
            raise ValueError("cubic is not supported on the given triple")
    small = PolyRing(tuple(variables), ring.domain)
    return small.from_terms(
        [(tuple(m[i] for i in idx), c) for m, c in cubic.terms])


def verify_plane_cubics_insoluble(pkg: SurfaceIdealPackage,
                                  plane1: Sequence[str] = ("x0", "x1", "x2"),
                                  plane2: Sequence[str] = ("x3", "x4", "x5"),
                                  ) -> Tuple[SolubilityReport,
                                             SolubilityReport]:
    """Z/3 insolubility of both extracted plane cubics, each scanned in
    its own coordinate triple."""
    c1, c2 = pkg.cubics
    r1 = scan_projective([plane_cubic_in_own_ring(c1, plane2)], 3)
    r2 = scan_projective([plane_cubic_in_own_ring(c2, plane1)], 3)
    return r1, r2


# ---------------------------------------------------------------------------
# smoothness

@dataclass(frozen=True)
class SmoothnessCertificate:
    smooth: bool
    prime: int
    method: str
    detail: str

    def report(self) -> str:
        status = "smooth" if self.smooth else "singular"
        return (f"reduction mod {self.prime}: {status}\n"
                f"method: {self.method}\n{self.detail}\n"
                + ("a smooth reduction at a single prime certifies "
                   "smoothness of the integral model over Q\n"
                   if self.smooth else ""))


def _jacobian_scan(cubic_mod_p: Polynomial, p: int) -> Tuple[bool, str]:
    """Exhaustive P^5(F_p) scan: a singular point is a projective zero of
    the cubic where all six partials vanish."""
    nvars = 6
    forms = [cubic_mod_p] + [cubic_mod_p.partial_derivative(i)
                             for i in range(nvars)]
    checked = 0
    for lead in range(nvars):
        free = nvars - lead - 1
        count = p ** free
        block = np.empty((count, nvars), dtype=np.int64)
        block[:, :lead] = 0
        block[:, lead] = 1
        for j in range(free):
            reps = p ** (free - 1 - j)
            pattern = np.repeat(np.arange(p, dtype=np.int64), reps)
            block[:, lead + 1 + j] = np.tile(pattern, count // (reps * p))
        mask = np.ones(count, dtype=bool)
        for f in forms:
            acc = np.zeros(count, dtype=np.int64)
            for mono, coeff in f.terms:
                term = np.full(count, int(coeff) % p, dtype=np.int64)
                for i, e in enumerate(mono):
                    for _ in range(e):
                        term = term * block[:, i] % p
                acc = (acc + term) % p
            mask &= acc == 0
            if not mask.any():
                break
        checked += count
        if mask.any():
            idx = int(np.argmax(mask))
            pt = tuple(int(v) for v in block[idx])
            return False, f"singular point {pt} found after {checked} points"
    return True, f"all {checked} points of P^5(F_{p}) have nonzero Jacobian"


def certify_smooth(fourfold: CubicFourfold, p: int,
                   method: str = "groebner",
                   limits: RunLimits = RunLimits()) -> SmoothnessCertificate:
    """Certifies that the cubic's reduction mod p has empty singular
    locus, by Groebner emptiness of the Jacobian ideal or by exhaustive
    P^5(F_p) scan."""
    cubic = fourfold.cubic
    if cubic.content() % p == 0:
        raise ValueError(f"{p} divides the content of the cubic")
    cp = cubic.reduce_mod(p)
    ring_p = cp.ring
    if method == "scan":
        smooth, detail = _jacobian_scan(cp, p)
        return SmoothnessCertificate(smooth, p, "exhaustive-scan", detail)
    if method != "groebner":
        raise ValueError("method must be 'groebner' or 'scan'")
    gens = [cp] + [cp.partial_derivative(i) for i in range(6)]
    cert = is_projectively_empty(
        Ideal(ring_p, tuple(g for g in gens if not g.is_zero())),
        limits=limits)
    detail = f"Jacobian ideal saturation: {cert.method}"
    return SmoothnessCertificate(cert.empty, p, "groebner-emptiness", detail)


# ---------------------------------------------------------------------------
# search harness for new configurations

def sample_quadric_configurations(seed: int, count: int,
                                  height: int = 2,
                                  trials: int = 200) -> List[dict]:
    """Seeded re-discovery experiment: sample triples of small-height
    quadrics through both coordinate planes, saturate, and keep the
    configurations whose two extracted plane cubics are both Z/3-
    insoluble.  Returns at most `count` records."""
    rng = random.Random(seed)
    ring = PolyRing(("x0", "x1", "x2", "x3", "x4", "x5"), ZZ)
    mixed = [(i, j) for i in range(3) for j in range(3, 6)]
    found = []
    for trial in range(trials):
        if len(found) >= count:
            break
        quadrics = []
        for _ in range(3):
            terms = []
            for i, j in mixed:
                c = rng.randint(-height, height)
                if c:
                    mono = [0] * 6
                    mono[i] += 1
                    mono[j] += 1
                    terms.append((tuple(mono), c))
            if terms:
                quadrics.append(ring.from_terms(terms))
        if len(quadrics) != 3:
            continue
        try:
            pkg = build_surface_ideal(quadrics)
            r1, r2 = verify_plane_cubics_insoluble(pkg)
        except (StructuralMismatch, ValueError, ResourceLimitExceeded):
            continue
        if r1.verdict == "insoluble" and r2.verdict == "insoluble":
            found.append({
                "trial": trial,
                "quadrics": quadrics,
                "cubics": pkg.cubics,
            })
    return found
