"""Groebner engine tests: golden examples, determinism, saturation and
intersection identities, emptiness certificates, and randomized
self-consistency properties."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3cert import constants
from k3cert.arith import ExtField, ExtFieldElement
from k3cert.groebner import (
    EmptinessCertificate,
    GroebnerBasis,
    Ideal,
    ResourceLimitExceeded,
    RunLimits,
    buchberger,
    elimination_ideal,
    ideal_equal,
    ideal_intersect,
    is_projectively_empty,
    normal_form,
    quotient_dimension,
    saturate,
)
from k3cert.poly import (
    GF,
    GREVLEX,
    LEX,
    ExtDomain,
    Polynomial,
    PolyRing,
    QQ,
    ZZ,
)


def ring_qq2():
    return PolyRing(("x", "y"), QQ)


def to_qq(poly, ring):
    return ring.from_terms([(m, Fraction(c)) for m, c in poly.terms])


def mod_p(poly, p):
    ring = poly.ring.with_domain(GF(p))
    return ring.from_terms([(m, c % p) for m, c in poly.terms])


# ---------------------------------------------------------------------------
# buchberger golden cases

def test_monomial_ideal_already_reduced():
    R = ring_qq2()
    x, y = R.gens()
    gb = buchberger(Ideal(R, (x, y)))
    assert [str(p) for p in gb] == ["x", "y"]


def test_lex_pair_reduces_to_zero():
    R = ring_qq2().with_order(LEX)
    x, y = R.gens()
    gb = buchberger(Ideal(R, (x - y, y * y - R.one())))
    assert sorted(str(p) for p in gb) == ["x - y", "y^2 - 1"]
    assert gb.verify()


def test_quadric_ideal_excludes_plane_cubic():
    ring = constants.fourfold_ring().with_domain(QQ)
    q1, q2, q3 = [to_qq(q, ring) for q in constants.quadrics()]
    c1, _ = [to_qq(c, ring) for c in constants.plane_cubics()]
    gb = buchberger(Ideal(ring, (q1, q2, q3)))
    assert len(gb) == 7
    assert not normal_form(c1, gb).is_zero()


def test_basis_is_monic_and_autoreduced():
    R = PolyRing(("x", "y", "z"), QQ)
    x, y, z = R.gens()
    gb = buchberger(Ideal(R, (
        x + 2 * y + 2 * z - R.one(),
        x * x + 2 * y * y + 2 * z * z - x,
        2 * x * y + 2 * y * z - y,
    )))
    assert gb.verify()
    lead_monos = [p.leading_monomial() for p in gb.polys]
    for p in gb.polys:
        assert p.leading_coefficient() == 1
        for lm in lead_monos:
            if lm == p.leading_monomial():
                continue
            for mono, _ in p.terms:
                assert not all(a <= b for a, b in zip(lm, mono))


def test_deterministic_across_runs():
    ring = constants.fourfold_ring().with_domain(QQ)
    q1, q2, q3 = [to_qq(q, ring) for q in constants.quadrics()]
    a = buchberger(Ideal(ring, (q1, q2, q3)))
    b = buchberger(Ideal(ring, (q1, q2, q3)))
    assert [p.terms for p in a.polys] == [p.terms for p in b.polys]


def test_rejects_non_field_coefficients():
    R = PolyRing(("x",), ZZ)
    with pytest.raises(ValueError):
        buchberger(Ideal(R, (R.gens()[0],)))


def test_resource_limit_is_structured():
    R = PolyRing(("x", "y"), QQ)
    x, y = R.gens()
    tight = RunLimits(max_basis_size=1)
    with pytest.raises(ResourceLimitExceeded) as info:
        buchberger(Ideal(R, (x * x + y, y * y - x)), limits=tight)
    assert info.value.stage
    assert info.value.counters


# ---------------------------------------------------------------------------
# normal forms

def test_normal_form_trivials():
    R = ring_qq2()
    x, y = R.gens()
    gb = buchberger(Ideal(R, (x, y)))
    assert normal_form(R.zero(), gb).is_zero()
    assert normal_form(R.one(), gb) == R.one()


def test_normal_form_cofactor_transcript():
    R = PolyRing(("x", "y"), GF(13))
    x, y = R.gens()
    gb = buchberger(Ideal(R, (x * x - y, y * y - R.one())))
    p = x ** 4 + x * y + x
    rem, quotients = normal_form(p, gb, with_cofactors=True)
    recombined = rem
    for q, g in zip(quotients, gb.polys):
        recombined = recombined + q * g
    assert recombined == p


def test_membership_of_plane_cubics_in_saturation():
    ring = constants.fourfold_ring().with_domain(QQ)
    q1, q2, q3 = [to_qq(q, ring) for q in constants.quadrics()]
    c1, c2 = [to_qq(c, ring) for c in constants.plane_cubics()]
    gb = buchberger(Ideal(ring, (q1, q2, q3, c1, c2)))
    assert normal_form(c1, gb).is_zero()
    assert normal_form(c2, gb).is_zero()


# ---------------------------------------------------------------------------
# saturation / intersection / elimination

def test_saturate_monomial_example():
    R = ring_qq2()
    x, y = R.gens()
    S = saturate(Ideal(R, (x * y,)), Ideal(R, (x,)))
    assert [str(p) for p in S.generators] == ["y"]


def test_saturate_by_unit_is_identity():
    R = ring_qq2()
    x, y = R.gens()
    I = Ideal(R, (x * x + y,))
    S = saturate(I, Ideal(R, (R.one(),)))
    assert ideal_equal(S, I)


def test_intersect_coordinate_ideals():
    R = ring_qq2()
    x, y = R.gens()
    got = ideal_intersect(Ideal(R, (x,)), Ideal(R, (y,)))
    assert [str(p) for p in got.generators] == ["x*y"]


def test_intersect_with_self_is_identity():
    R = ring_qq2()
    x, y = R.gens()
    I = Ideal(R, (x * x - y, x * y))
    assert ideal_equal(ideal_intersect(I, I), I)


def test_intersect_monomial_inclusions():
    R = ring_qq2()
    x, y = R.gens()
    got = ideal_intersect(Ideal(R, (x * x,)), Ideal(R, (x * y,)))
    expect = Ideal(R, (x * x * y,))
    assert ideal_equal(got, expect)
    gb = buchberger(expect)
    for g in got.generators:
        assert normal_form(g, gb).is_zero()
    gb2 = buchberger(got)
    assert normal_form(x * x * y, gb2).is_zero()


def test_eliminate_variable():
    R = ring_qq2()
    x, y = R.gens()
    E = elimination_ideal(Ideal(R, (x - y, y * y - R.one())), ["x"])
    assert [str(p) for p in E.generators] == ["x^2 - 1"]


def test_elimination_consistent_with_saturation():
    R = ring_qq2()
    x, y = R.gens()
    S = saturate(Ideal(R, (x * y,)), Ideal(R, (x,)))
    assert ideal_equal(S, Ideal(R, (y,)))


def test_minimal_polynomial_of_coordinate_over_f101():
    # vanishing ideal of the graph points {(a, g(a))}: eliminating y must
    # return the monic minimal polynomial of the x-coordinates
    from k3cert.poly import roots_in_field, UniPoly
    R = PolyRing(("x", "y"), GF(101))
    x, y = R.gens()
    xs = [3, 27, 55, 90]
    fx = R.one()
    for a in xs:
        fx = fx * (x - R.constant(a))
    gy = y - (x * x + R.constant(7))
    E = elimination_ideal(Ideal(R, (fx, gy)), ["x"])
    assert len(E.generators) == 1
    gen = E.generators[0]
    assert gen.degree_in(1) == 0
    coeffs = [0] * (gen.total_degree() + 1)
    for mono, c in gen.terms:
        coeffs[mono[0]] = c
    up = UniPoly(GF(101), coeffs)
    assert sorted(roots_in_field(up)) == sorted(xs)


def test_headline_saturation_recovers_surface_ideal():
    ring = constants.fourfold_ring().with_domain(QQ)
    q1, q2, q3 = [to_qq(q, ring) for q in constants.quadrics()]
    c1, c2 = [to_qq(c, ring) for c in constants.plane_cubics()]
    gens = ring.gens()
    products = [a * b for a in gens[:3] for b in gens[3:]]
    S = saturate(Ideal(ring, (q1, q2, q3)), Ideal(ring, tuple(products)))
    expect = Ideal(ring, (q1, q2, q3, c1, c2))
    assert ideal_equal(S, expect)


# ---------------------------------------------------------------------------
# projective emptiness

def test_irrelevant_ideal_is_empty():
    R = PolyRing(("x", "y", "z"), QQ)
    cert = is_projectively_empty(Ideal(R, R.gens()))
    assert cert.empty
    assert cert.basis.is_unit_ideal()
    assert "empty" in cert.report()


def test_sextic_jacobian_empty_at_good_prime():
    f = mod_p(constants.branch_sextic(), 7)
    gens = [f] + [f.partial_derivative(i) for i in range(3)]
    cert = is_projectively_empty(Ideal(f.ring, tuple(gens)))
    assert cert.empty


def test_sextic_jacobian_nonempty_at_bad_prime():
    f = mod_p(constants.branch_sextic(), 5)
    gens = [f] + [f.partial_derivative(i) for i in range(3)]
    cert = is_projectively_empty(Ideal(f.ring, tuple(gens)))
    assert not cert.empty
    assert not cert.basis.is_unit_ideal()


def test_emptiness_rejects_inhomogeneous():
    R = PolyRing(("x", "y"), QQ)
    x, y = R.gens()
    with pytest.raises(ValueError):
        is_projectively_empty(Ideal(R, (x + R.one(),)))


def test_emptiness_weighted_cone():
    # w has weight 3, x weight 1: w^2 - x^6 is weighted-homogeneous
    R = PolyRing(("w", "x"), GF(5))
    w, x = R.gens()
    p = w * w - x ** 6
    with pytest.raises(ValueError):
        is_projectively_empty(Ideal(R, (p,)))
    cert = is_projectively_empty(Ideal(R, (p,)), weights=(3, 1))
    assert not cert.empty
    cert2 = is_projectively_empty(Ideal(R, (w * w, x ** 6)), weights=(3, 1))
    assert cert2.empty


def _projective_points(nvars, field):
    elems = list(field.elements())
    zero, one = field.zero, field.one
    for lead in range(nvars):
        head = [zero] * lead + [one]
        tails = [elems] * (nvars - lead - 1)
        stack = [tuple(head)]
        if not tails:
            yield tuple(head)
            continue
        import itertools as it
        for rest in it.product(*tails):
            yield tuple(head) + rest


def _has_point_over(gens, p, max_degree):
    for k in range(1, max_degree + 1):
        field = _ext_field(p, k)
        dom = ExtDomain(field)
        for pt in _projective_points(len(gens[0].ring.variables), field):
            if all(g.evaluate(pt, domain=dom) == field.zero for g in gens):
                return True
    return False


def _ext_field(p, k):
    if k == 1:
        return ExtField(p, [p - 1, 1])  # F_p as a degree-1 extension
    # a degree-2 or degree-3 polynomial is irreducible iff it is rootless
    assert k in (2, 3)
    import itertools as it
    for tail in it.product(range(p), repeat=k):
        coeffs = list(tail) + [1]
        if all(sum(c * a ** i for i, c in enumerate(coeffs)) % p
               for a in range(p)):
            return ExtField(p, coeffs)
    raise AssertionError("no irreducible found")


def test_emptiness_agrees_with_point_search_crafted():
    R = PolyRing(("x", "y", "z"), GF(2))
    x, y, z = R.gens()
    # conjugate line pair plus z: no F_2 point, an F_4 point exists
    I = Ideal(R, (x * x + x * y + y * y, z))
    cert = is_projectively_empty(I)
    assert not cert.empty
    assert not _has_point_over(list(I.generators), 2, 1)
    assert _has_point_over(list(I.generators), 2, 2)
    # fat origin: empty projective locus
    I2 = Ideal(R, (x * x, y * y, z * z))
    assert is_projectively_empty(I2).empty
    assert not _has_point_over(list(I2.generators), 2, 3)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_emptiness_agrees_with_point_search_random(data):
    p = data.draw(st.sampled_from([2, 3]), label="p")
    R = PolyRing(("x", "y", "z"), GF(p))
    monos2 = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1),
              (0, 1, 1)]
    monos1 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    gens = []
    for _ in range(data.draw(st.integers(1, 2), label="ngens")):
        deg = data.draw(st.sampled_from([1, 2]), label="deg")
        monos = monos1 if deg == 1 else monos2
        coeffs = data.draw(st.lists(st.integers(0, p - 1),
                                    min_size=len(monos),
                                    max_size=len(monos)), label="coeffs")
        poly = R.from_terms(
            [(m, c) for m, c in zip(monos, coeffs) if c])
        if not poly.is_zero():
            gens.append(poly)
    if not gens:
        return
    cert = is_projectively_empty(Ideal(R, tuple(gens)))
    found = _has_point_over(gens, p, 3)
    if cert.empty:
        assert not found
    if found:
        assert not cert.empty


# ---------------------------------------------------------------------------
# quotient dimension

def test_quotient_dimension_examples():
    R = PolyRing(("x", "y"), GF(13))
    x, y = R.gens()
    assert quotient_dimension(Ideal(R, (x * x, y))) == 2
    assert quotient_dimension(Ideal(R, (x,))) == math.inf
    assert quotient_dimension(Ideal(R, (R.one(),))) == 0


def test_singular_point_count_mod_29():
    # the saturated singular locus of the branch sextic mod 29 is a single
    # reduced point visible in every affine chart
    f = mod_p(constants.branch_sextic(), 29)
    gens = [f] + [f.partial_derivative(i) for i in range(3)]
    sat = saturate(Ideal(f.ring, tuple(gens)), Ideal(f.ring, f.ring.gens()))
    for var in ("x", "y", "z"):
        dehom = [g.substitute_values({var: 1}) for g in sat.generators]
        ring = dehom[0].ring
        count = quotient_dimension(
            Ideal(ring, tuple(g for g in dehom if not g.is_zero())))
        assert count == 1
    # the known singular representative (1, 13, 13) satisfies the ideal
    for g in sat.generators:
        assert g.evaluate((1, 13, 13)) == 0


# ---------------------------------------------------------------------------
# randomized self-consistency

@settings(max_examples=30, deadline=None)
@given(st.data())
def test_groebner_membership_and_idempotence(data):
    R = PolyRing(("x", "y"), GF(13))
    monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    gens = []
    for _ in range(data.draw(st.integers(1, 3), label="ngens")):
        coeffs = data.draw(st.lists(st.integers(0, 12), min_size=6,
                                    max_size=6), label="coeffs")
        poly = R.from_terms([(m, c) for m, c in zip(monos, coeffs) if c])
        if not poly.is_zero():
            gens.append(poly)
    if not gens:
        return
    I = Ideal(R, tuple(gens))
    gb = buchberger(I)
    for g in gens:
        assert normal_form(g, gb).is_zero()
    if gb.polys:
        again = buchberger(Ideal(R, gb.polys))
        assert [p.terms for p in again.polys] == [p.terms for p in gb.polys]
    assert gb.verify()


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_saturation_contains_ideal_and_excludes_multiplier(data):
    R = PolyRing(("x", "y"), GF(7))
    x, y = R.gens()
    monos = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    coeffs = data.draw(st.lists(st.integers(0, 6), min_size=5, max_size=5),
                       label="coeffs")
    h = R.from_terms([(m, c) for m, c in zip(monos, coeffs) if c])
    if h.is_zero():
        return
    g = x
    I = Ideal(R, (g * h,))
    S = saturate(I, Ideal(R, (g,)))
    gb = buchberger(S)
    # h itself must belong to the saturation (g*h) : g^infinity
    assert normal_form(h, gb).is_zero()
    # and the saturation contains the original ideal
    assert normal_form(g * h, gb).is_zero()
