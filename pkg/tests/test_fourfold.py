"""Saturation construction, cubic assembly, 3-adic insolubility, and
smoothness certification for the shipped hypersurface data."""

import random

import pytest

from k3cert import constants as K
from k3cert.fourfold import (
    CubicFourfold,
    StructuralMismatch,
    assemble_cubic,
    build_surface_ideal,
    certify_smooth,
    plane_cubic_in_own_ring,
    sample_quadric_configurations,
    verify_insoluble_mod9,
    verify_plane_cubics_insoluble,
)
from k3cert.groebner import Ideal, buchberger, ideal_equal, normal_form
from k3cert.localsolve import scan_projective
from k3cert.poly import GF, PolyRing, QQ, ZZ

VARS = ("x0", "x1", "x2", "x3", "x4", "x5")


@pytest.fixture(scope="module")
def pkg():
    return build_surface_ideal(K.quadrics())


@pytest.fixture(scope="module")
def fourfold(pkg):
    return assemble_cubic(pkg, K.cubic_multipliers())


# -- build_surface_ideal ------------------------------------------------------

def test_build_reproduces_shipped_cubics(pkg):
    c1, c2 = K.plane_cubics()
    assert pkg.cubics[0] == c1
    assert pkg.cubics[1] == c2


def test_build_ideal_equals_quadrics_plus_cubics(pkg):
    ring = pkg.surface_ideal.ring
    gens = tuple(q.map_domain(QQ) for q in K.quadrics())
    gens += tuple(c.map_domain(QQ) for c in K.plane_cubics())
    assert ideal_equal(pkg.surface_ideal, Ideal(ring, gens))


def test_build_plane_ideals_are_coordinate_triples(pkg):
    names1 = sorted(str(g) for g in pkg.plane_ideals[0].generators)
    names2 = sorted(str(g) for g in pkg.plane_ideals[1].generators)
    assert names1 == ["x0", "x1", "x2"]
    assert names2 == ["x3", "x4", "x5"]


def test_build_rejects_wrong_count():
    with pytest.raises(ValueError):
        build_surface_ideal(K.quadrics()[:2])


def test_build_rejects_quadric_missing_a_plane():
    ring = PolyRing(VARS, ZZ)
    x = ring.gens()
    bad = [x[0] * x[0], x[1] * x[4], x[2] * x[5]]
    with pytest.raises(ValueError):
        build_surface_ideal(bad)


def test_build_rejects_wrong_degree():
    ring = PolyRing(VARS, ZZ)
    x = ring.gens()
    bad = [x[0] * x[3] * x[4], x[1] * x[4], x[2] * x[5]]
    with pytest.raises(ValueError):
        build_surface_ideal(bad)


def test_build_flags_degenerate_configuration():
    ring = PolyRing(VARS, ZZ)
    x = ring.gens()
    with pytest.raises(StructuralMismatch):
        build_surface_ideal([x[0] * x[3], x[0] * x[4], x[0] * x[5]])


def test_build_random_quadrics_over_f101():
    rng = random.Random(20260818)
    ring = PolyRing(VARS, GF(101))
    for _ in range(3):
        quadrics = []
        for _ in range(3):
            terms = []
            for i in range(3):
                for j in range(3, 6):
                    c = rng.randrange(101)
                    if c:
                        mono = [0] * 6
                        mono[i] += 1
                        mono[j] += 1
                        terms.append((tuple(mono), c))
            quadrics.append(ring.from_terms(terms))
        built = build_surface_ideal(quadrics)
        gb = buchberger(built.surface_ideal)
        for q in quadrics:
            assert normal_form(q, gb).is_zero()
        for c in built.cubics:
            assert c.total_degree() == 3


# -- assemble_cubic -----------------------------------------------------------

def test_assemble_matches_shipped_cubic(fourfold):
    assert fourfold.cubic == K.fourfold_cubic()


def test_assemble_x0_cube_coefficient(fourfold):
    assert fourfold.cubic.coefficient((3, 0, 0, 0, 0, 0)) == 2


def test_assemble_zero_multipliers(pkg):
    ring = pkg.quadrics[0].ring
    zero = ring.zero()
    built = assemble_cubic(pkg, (zero, zero, zero))
    c1, c2 = pkg.cubics
    assert built.cubic == c1.scale(3) + c2


def test_assemble_rejects_nonlinear_multiplier(pkg):
    ring = pkg.quadrics[0].ring
    x = ring.gens()
    with pytest.raises(ValueError):
        assemble_cubic(pkg, (x[0] * x[1], ring.zero(), ring.zero()))


def test_cubic_lies_in_surface_ideal(pkg, fourfold):
    gb = buchberger(pkg.surface_ideal)
    assert normal_form(fourfold.cubic.map_domain(QQ), gb).is_zero()


def test_cubic_mod9_identity(pkg, fourfold):
    c1, c2 = pkg.cubics
    lhs = fourfold.cubic.reduce_mod(9)
    rhs = (c1.scale(3) + c2).reduce_mod(9)
    assert lhs == rhs


# -- 3-adic insolubility ------------------------------------------------------

def test_shipped_cubic_insoluble_mod9(fourfold):
    report = verify_insoluble_mod9(fourfold)
    assert report.verdict == "insoluble"
    assert report.exhaustion["tuples_total"] == 9 ** 6
    assert report.exhaustion["primitive_tuples"] == 9 ** 6 - 3 ** 6
    assert report.exhaustion["solutions"] == 0


def test_fermat_cubic_soluble_mod9():
    ring = PolyRing(VARS, ZZ)
    x = ring.gens()
    fermat = sum((xi ** 3 for xi in x[1:]), x[0] ** 3)
    report = verify_insoluble_mod9(CubicFourfold(
        cubic=fermat, multipliers=(ring.zero(),) * 3))
    assert report.verdict == "soluble"
    w = report.witness
    assert fermat.evaluate(w) % 9 == 0
    assert any(v % 3 for v in w)


def test_unscaled_combination_insoluble_mod9(pkg):
    c1, c2 = pkg.cubics
    report = scan_projective([c1.scale(3) + c2], 9)
    assert report.verdict == "insoluble"


def test_plane_cubics_insoluble_mod3(pkg):
    r1, r2 = verify_plane_cubics_insoluble(pkg)
    for rep in (r1, r2):
        assert rep.verdict == "insoluble"
        assert rep.exhaustion["tuples_total"] == 27
        assert rep.exhaustion["primitive_tuples"] == 26


def test_insolubility_decomposition_mod3(pkg, fourfold):
    c1, c2 = pkg.cubics
    cubic = fourfold.cubic
    for code in range(3 ** 6):
        tup = tuple(code // 3 ** k % 3 for k in range(6))
        if all(v == 0 for v in tup):
            continue
        back = tup[:3]
        front = tup[3:]
        if any(front):
            assert c1.evaluate((0, 0, 0) + front) % 3 != 0
        if any(back):
            assert c2.evaluate(back + (0, 0, 0)) % 3 != 0
        assert (cubic.evaluate(tup) - c2.evaluate(back + (0, 0, 0))) % 3 == 0


def test_plane_cubic_restriction_rejects_mixed_support(fourfold):
    with pytest.raises(ValueError):
        plane_cubic_in_own_ring(fourfold.cubic, ("x0", "x1", "x2"))


# -- smoothness ---------------------------------------------------------------

def test_smooth_at_7_by_groebner(fourfold):
    cert = certify_smooth(fourfold, 7, method="groebner")
    assert cert.smooth
    assert cert.prime == 7
    assert "smooth" in cert.report()


def test_smooth_at_7_by_scan(fourfold):
    cert = certify_smooth(fourfold, 7, method="scan")
    assert cert.smooth
    assert "19608" in cert.detail


def test_singular_at_11_detected_by_both_routes(fourfold):
    by_scan = certify_smooth(fourfold, 11, method="scan")
    by_gb = certify_smooth(fourfold, 11, method="groebner")
    assert not by_scan.smooth
    assert not by_gb.smooth
    assert "singular point" in by_scan.detail


def test_mod3_verdict_reported_without_rational_inference(fourfold):
    cert = certify_smooth(fourfold, 3)
    assert not cert.smooth
    assert "single prime" not in cert.report()


def test_cone_over_plane_cubic_is_singular(pkg):
    c2 = pkg.cubics[1]
    cone = CubicFourfold(cubic=c2, multipliers=(c2.ring.zero(),) * 3)
    cert = certify_smooth(cone, 7, method="groebner")
    assert not cert.smooth


def test_content_divisible_by_prime_rejected(fourfold):
    scaled = CubicFourfold(cubic=fourfold.cubic.scale(7),
                           multipliers=fourfold.multipliers)
    with pytest.raises(ValueError):
        certify_smooth(scaled, 7)


def test_unknown_method_rejected(fourfold):
    with pytest.raises(ValueError):
        certify_smooth(fourfold, 7, method="magic")


# -- configuration sampling ---------------------------------------------------

def test_sampler_is_deterministic():
    a = sample_quadric_configurations(seed=3, count=2, trials=10)
    b = sample_quadric_configurations(seed=3, count=2, trials=10)
    assert [r["trial"] for r in a] == [r["trial"] for r in b]
    for rec in a:
        assert set(rec) == {"trial", "quadrics", "cubics"}
        r1 = scan_projective(
            [plane_cubic_in_own_ring(rec["cubics"][0], ("x3", "x4", "x5"))], 3)
        assert r1.verdict == "insoluble"
