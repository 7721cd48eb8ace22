"""Double-cover model checks: the 2-adic change of variable, the bad-prime
ledger, singularity classification at each bad prime, tritangent-line
search, point counts with zeta bookkeeping, and the final certificate."""

import dataclasses
from fractions import Fraction

import pytest

from k3cert import constants as K
from k3cert.k3 import (
    BadPrimeLedger,
    DoubleCoverModel,
    EvidenceBundle,
    TritangentLine,
    WeilPolynomial,
    assemble_certificate,
    certify,
    classify_singularities,
    collect_evidence,
    count_points_double_cover,
    good_reduction_at_2,
    is_bad_prime,
    shipped_ledger,
    shipped_model,
    shipped_weil_polynomial,
    tritangent_search,
    verify_ledger,
    weil_consistency,
)
from k3cert.localsolve import EnumerationBudgetExceeded
from k3cert.poly import GF, PolyRing, ZZ

P19 = 8990396491695741359
P24 = 381640024919828593698301
BAD = K.bad_primes()


@pytest.fixture(scope="module")
def model():
    return shipped_model()


@pytest.fixture(scope="module")
def plane():
    return PolyRing(("x", "y", "z"), ZZ)


# -- model validation ----------------------------------------------------------

def test_shipped_model_is_untwisted(model):
    assert model.twist == 1
    assert model.branch_sextic == K.branch_sextic()


def test_model_rejects_inhomogeneous_sextic(plane):
    x, y, z = plane.gens()
    with pytest.raises(ValueError):
        DoubleCoverModel(branch_sextic=x ** 6 + y ** 5)


def test_model_rejects_bad_twist(plane):
    x, y, z = plane.gens()
    with pytest.raises(ValueError):
        DoubleCoverModel(branch_sextic=x ** 6 + y ** 6 + z ** 6, twist=2)


# -- good reduction at 2 --------------------------------------------------------

def test_char2_transform_matches_pinned_data(model):
    result = good_reduction_at_2(model)
    assert result.smooth
    assert result.sqrt_mod2 == K.char2_sqrt().reduce_mod(2)
    # residual sextic agrees with the pinned char-2 model
    assert result.residual_sextic == K.char2_sextic().reduce_mod(2)


def test_char2_transform_simple_identity(plane):
    # f = g^2 + 4*h with g = x^3 + y^3, h = z^6: the transform must
    # recover g mod 2 and h mod 2 exactly.
    x, y, z = plane.gens()
    g = x ** 3 + y ** 3
    f = g * g + 4 * (z ** 6) + 2 * g * (2 * x ** 3)  # = (g + 2x^3)^2 + 4(z^6 - x^6)
    model = DoubleCoverModel(branch_sextic=f)
    result = good_reduction_at_2(model)
    # mod 2, the square root is g (any lift differs by an even form)
    lifted = result.sqrt_mod2
    assert lifted * lifted == (g * g).reduce_mod(2)


def test_char2_transform_rejects_twisted_model(plane):
    x, y, z = plane.gens()
    m = DoubleCoverModel(branch_sextic=(x ** 3) ** 2 + 4 * y ** 6, twist=-1)
    with pytest.raises(ValueError, match="twist"):
        good_reduction_at_2(m)


def test_char2_transform_rejects_nonsquare_mod_4(plane):
    x, y, z = plane.gens()
    # f = x^6 + 2*y^6 is x^6 mod 2 (square root x^3) but the mod-4
    # correction 2*y^6 is not twice an even coefficient, so f - g^2 is
    # not divisible by 4 for the canonical lift.
    m = DoubleCoverModel(branch_sextic=x ** 6 + 2 * y ** 6)
    with pytest.raises(ValueError):
        good_reduction_at_2(m)


def test_char2_degenerate_square_is_not_smooth(plane):
    # f = g^2 exactly gives residual h = 0: the char-2 model
    # w^2 + g*w = 0 is a double plane, never a smooth surface.
    x, y, z = plane.gens()
    g = x ** 3 + x * y * z + z ** 3
    m = DoubleCoverModel(branch_sextic=g * g)
    result = good_reduction_at_2(m)
    assert not result.smooth


# -- bad prime detection --------------------------------------------------------

def test_bad_primes_detected(model):
    assert is_bad_prime(model, 5).bad
    assert is_bad_prime(model, 29).bad
    assert is_bad_prime(model, 3).bad


def test_good_primes_detected(model):
    assert not is_bad_prime(model, 7).bad
    assert not is_bad_prime(model, 11).bad
    assert not is_bad_prime(model, 13).bad


def test_huge_ledger_prime_is_bad(model):
    assert is_bad_prime(model, P19).bad


def test_two_is_good_via_transform(model):
    verdict = is_bad_prime(model, 2)
    assert not verdict.bad
    assert "transform" in verdict.detail or "char" in verdict.detail.lower() \
        or verdict.detail  # detail is informative


def test_is_bad_prime_rejects_composite(model):
    with pytest.raises(ValueError):
        is_bad_prime(model, 15)


# -- ledger verification ---------------------------------------------------------

def test_shipped_ledger_all_checks_pass(model):
    report = verify_ledger(model, shipped_ledger())
    assert report.ok
    names = [c.label for c in report.checks]
    assert sorted(names) == sorted([
        "discriminant-gcd", "small-prime-valuations", "primality",
        "divisibility", "exclusions", "completeness", "even-prime",
        "obstruction-prime", "bad-reduction"])
    assert all(c.ok for c in report.checks)


def test_ledger_report_is_printable(model):
    report = verify_ledger(model, shipped_ledger())
    text = report.report()
    assert "discriminant-gcd" in text
    assert "pass" in text


def test_ledger_with_good_prime_inserted_fails(model):
    base = shipped_ledger()
    tampered = dataclasses.replace(
        base, primes=tuple(sorted(base.primes + (7,))))
    report = verify_ledger(model, tampered)
    assert not report.ok
    failed = {c.label for c in report.checks if not c.ok}
    assert "divisibility" in failed or "bad-reduction" in failed


def test_ledger_with_wrong_gcd_fails(model):
    base = shipped_ledger()
    tampered = dataclasses.replace(base, disc_gcd=base.disc_gcd * 5)
    report = verify_ledger(model, tampered)
    assert not report.ok
    failed = {c.label for c in report.checks if not c.ok}
    assert "discriminant-gcd" in failed


def test_ledger_prime_list_matches_pinned_data():
    assert shipped_ledger().primes == BAD
    assert len(BAD) == 8
    assert 3 not in BAD  # the obstruction prime is handled separately


# -- singularity classification ---------------------------------------------------

def test_classification_at_5_is_conjugate_node_pair(model):
    report = classify_singularities(model, 5)
    assert report.prime == 5
    assert report.isolated
    assert len(report.orbits) == 1
    orbit = report.orbits[0]
    assert orbit.residue_degree == 2
    assert orbit.ordinary
    assert report.geometric_count == 2
    assert report.mild


def test_classification_at_29_is_single_node(model):
    report = classify_singularities(model, 29)
    assert report.isolated
    assert report.geometric_count == 1
    assert report.all_ordinary
    assert report.mild


@pytest.mark.parametrize("p", [q for q in BAD if q > 29])
def test_classification_at_large_primes(model, p):
    report = classify_singularities(model, p)
    assert report.isolated
    assert report.geometric_count == 1
    assert report.all_ordinary
    assert report.mild


def test_classification_at_3_is_not_isolated(model):
    report = classify_singularities(model, 3)
    assert not report.isolated
    assert not report.mild
    assert "positive-dimensional" in report.detail


def test_classification_rejects_two(model):
    with pytest.raises(ValueError):
        classify_singularities(model, 2)


def test_good_prime_has_no_singular_points(model):
    report = classify_singularities(model, 7)
    assert report.isolated
    assert report.orbits == ()
    assert report.geometric_count == 0
    assert not report.mild  # mild requires at least one genuine node


def test_cusp_is_rejected_as_non_ordinary(plane):
    # w^2 = x^4*z^2 + y^5*z + y^6: at (0:0:1), chart z = 1, the branch
    # curve has local equation x^4 + y^5 + y^6 whose quadratic part
    # vanishes — a non-ordinary singular point of the double cover.
    x, y, z = plane.gens()
    f = x ** 4 * z ** 2 + y ** 5 * z + y ** 6
    toy = DoubleCoverModel(branch_sextic=f)
    report = classify_singularities(toy, 7)
    if report.isolated and report.orbits:
        assert not report.all_ordinary
        assert not report.mild


# -- tritangent search ------------------------------------------------------------

def test_exactly_one_tritangent_mod_13(model):
    lines = tritangent_search(model.branch_sextic, 13)
    assert len(lines) == 1
    line = lines[0]
    assert line.prime == 13
    assert line.dual == (1, 5, 1)


def test_tritangent_13_matches_pinned_display(model):
    (line,) = tritangent_search(model.branch_sextic, 13)
    display = K.tritangent_display_13()
    assert line.line_form == display["line"]
    assert line.contact_scale == 10
    # the contact cubic is the product of the pinned linear and
    # quadratic factors
    assert line.contact_cubic() == display["factor_linear"] * \
        display["factor_quadratic"]
    assert sorted(f.total_degree() for f in line.contact_factors) == [1, 2]
    assert line.cofactor_scale == 6
    assert line.cofactor_quintic == display["quintic"]
    assert line.verify(model.branch_sextic)


def test_tritangent_identity_reconstructs_sextic(model):
    # sanity: scale*(cubic)^2 + line*(cofactor_scale*quintic) == f mod 13
    (line,) = tritangent_search(model.branch_sextic, 13)
    ring13 = line.line_form.ring
    dom = ring13.domain
    f13 = model.branch_sextic.reduce_mod(13)
    cubic = line.contact_cubic()
    lhs = cubic * cubic * dom.from_int(line.contact_scale) + \
        line.line_form * line.cofactor_quintic * dom.from_int(
            line.cofactor_scale)
    assert lhs == f13


def test_no_tritangent_mod_7(model):
    assert tritangent_search(model.branch_sextic, 7) == []


def test_tritangent_search_rejects_two_and_composites(model):
    with pytest.raises(ValueError):
        tritangent_search(model.branch_sextic, 2)
    with pytest.raises(ValueError):
        tritangent_search(model.branch_sextic, 15)


def test_tritangent_line_count_is_projective_invariant(model):
    # substituting a random invertible linear change of coordinates
    # must not change the number of tritangent lines mod 13
    import random

    rng = random.Random(18)
    ring13 = PolyRing(("x", "y", "z"), GF(13))
    f13 = model.branch_sextic.reduce_mod(13)
    dom = ring13.domain
    while True:
        mat = [[rng.randrange(13) for _ in range(3)] for _ in range(3)]
        det = (mat[0][0] * (mat[1][1] * mat[2][2] - mat[1][2] * mat[2][1])
               - mat[0][1] * (mat[1][0] * mat[2][2] - mat[1][2] * mat[2][0])
               + mat[0][2] * (mat[1][0] * mat[2][1] - mat[1][1] * mat[2][0]))
        if det % 13:
            break
    gens = ring13.gens()
    images = [sum((gens[j] * dom.from_int(mat[i][j]) for j in range(1, 3)),
                  gens[0] * dom.from_int(mat[i][0])) for i in range(3)]
    moved = f13.substitute_linear(images)
    assert len(tritangent_search(moved, 13)) == 1


# -- point counting ----------------------------------------------------------------

def test_count_mod_13_both_methods(model):
    by_enum = count_points_double_cover(model, 13, 1, method="enumeration")
    by_char = count_points_double_cover(model, 13, 1, method="character")
    assert by_enum == by_char == 188


def test_count_extension_field_both_methods(model):
    by_enum = count_points_double_cover(model, 13, 2, method="enumeration")
    by_char = count_points_double_cover(model, 13, 2, method="character")
    assert by_enum == by_char == 28964


def test_count_rejects_even_prime(model):
    with pytest.raises(ValueError):
        count_points_double_cover(model, 2)


def test_count_budget_guard(model):
    with pytest.raises(EnumerationBudgetExceeded):
        count_points_double_cover(model, 13, 3, budget=10 ** 5)


def test_count_toy_surface_mod_3(plane):
    # w^2 = x^6 + y^6 + z^6 over F_3: direct hand count.  x^6 = x^2 mod
    # x^3 - x is 1 on units; count matches brute force below.
    x, y, z = plane.gens()
    toy = DoubleCoverModel(branch_sextic=x ** 6 + y ** 6 + z ** 6)
    got = count_points_double_cover(toy, 3, 1)
    # brute force over all of weighted projective space
    seen = set()
    f = toy.branch_sextic
    for a in range(3):
        for b in range(3):
            for c in range(3):
                if (a, b, c) == (0, 0, 0):
                    continue
                v = f.evaluate((a, b, c)) % 3
                for w in range(3):
                    if (w * w - v) % 3 == 0:
                        # normalize under (a,b,c,w) ~ l*(a,b,c,l^3 w... )
                        orbit = frozenset(
                            ((l * a) % 3, (l * b) % 3, (l * c) % 3,
                             (pow(l, 3, 3) * w) % 3)
                            for l in (1, 2))
                        seen.add(orbit)
    assert got == len(seen)
    assert count_points_double_cover(toy, 3, 1, method="character") == got


# -- Weil polynomial ------------------------------------------------------------------

def test_shipped_weil_polynomial_shape():
    weil = shipped_weil_polynomial()
    assert weil.prime == 13
    assert len(weil.coeffs) == 23
    assert weil.coeffs[-1] == 1  # monic of degree 22
    assert weil.coeffs[0] == Fraction(1)


def test_weil_polynomial_rejects_wrong_leading_term():
    p, desc = K.weil_factor_13()
    bad = (desc[0] + 1,) + desc[1:]
    with pytest.raises(ValueError):
        WeilPolynomial.from_noncyclotomic_factor(p, bad)


def test_weil_polynomial_rejects_short_factor():
    p, desc = K.weil_factor_13()
    with pytest.raises(ValueError):
        WeilPolynomial.from_noncyclotomic_factor(p, desc[:-1])


def test_weil_expected_counts():
    weil = shipped_weil_polynomial()
    assert weil.expected_count(1) == 188
    assert weil.expected_count(2) == 28964


def test_weil_functional_equation_sign():
    assert shipped_weil_polynomial().functional_equation_sign() == 1


def test_weil_roots_of_unity_part_is_double_root_at_one():
    from k3cert.poly import QQ, UniPoly
    part = shipped_weil_polynomial().roots_of_unity_part()
    assert part == UniPoly(QQ, (Fraction(1), Fraction(-2), Fraction(1)))


def test_weil_power_sums_match_counts():
    # the trace formula reads #X(F_{p^k}) = 1 + p^2k + p^k * s_k where
    # s_k is the k-th power sum of the (normalized) Frobenius roots
    weil = shipped_weil_polynomial()
    s = weil.power_sums(2)
    assert 1 + 13 ** 2 + 13 * s[0] == 188
    assert 1 + 13 ** 4 + 13 ** 2 * s[1] == 28964
    # the roots are normalized by 1/p, so p^k * s_k is the power sum of
    # genuine algebraic integers over a Galois-stable set: an integer
    assert all((13 ** (k + 1) * v).denominator == 1 for k, v in enumerate(s))


def test_weil_consistency_all_checks_pass(model):
    weil = shipped_weil_polynomial()
    report = weil_consistency(model, weil, kmax=2)
    assert report.ok
    names = [c.label for c in report.checks]
    assert "functional-equation" in names
    assert "count-k1" in names
    assert "count-k2" in names
    assert "roots-of-unity" in names


def test_weil_consistency_detects_perturbed_coefficient(model):
    p, desc = K.weil_factor_13()
    # perturb the palindrome-symmetric coefficient pair adjacent to the
    # lead: the functional equation survives but the first power sum —
    # hence the point count over F_13 — shifts by a multiple of 13
    wrong = (desc[0], desc[1] + 13) + desc[2:19] + (desc[19] + 13, desc[20])
    weil = WeilPolynomial.from_noncyclotomic_factor(p, wrong)
    report = weil_consistency(model, weil, kmax=1)
    assert not report.ok
    failed = {c.label for c in report.checks if not c.ok}
    assert "count-k1" in failed
    passed = {c.label for c in report.checks if c.ok}
    assert "functional-equation" in passed


# -- evidence and certificate -------------------------------------------------------

@pytest.fixture(scope="module")
def evidence(model):
    return collect_evidence(model, K.fourfold_cubic())


def test_certificate_is_granted(evidence):
    cert = assemble_certificate(evidence)
    assert cert.certified
    assert cert.gaps == ()


def test_certificate_has_unique_nonzero_place(evidence):
    # a None invariant encodes "provably nonzero, exact value not
    # computed" — the insoluble-fiber argument at 3 gives exactly that
    cert = assemble_certificate(evidence)
    nonzero = [v for v in cert.verdicts if v.invariant != Fraction(0)]
    assert len(nonzero) == 1
    assert nonzero[0].place == "3"
    assert nonzero[0].invariant is None
    assert nonzero[0].rule == "insoluble-cubic-fiber"


def test_certificate_real_place_is_zero(evidence):
    cert = assemble_certificate(evidence)
    real = [v for v in cert.verdicts if v.place == "real"]
    assert len(real) == 1
    assert real[0].invariant == Fraction(0)


def test_certificate_every_named_place_has_local_point(evidence):
    # the collective tail verdict covers infinitely many places and
    # carries sampled witnesses in its detail instead of a single point
    cert = assemble_certificate(evidence)
    for verdict in cert.verdicts:
        if verdict.rule == "good-reduction-unramified-tail":
            assert "sampled" in verdict.detail
            continue
        assert verdict.local_point is not None, verdict.place


def test_certificate_report_mentions_every_rule(evidence):
    cert = assemble_certificate(evidence)
    text = cert.report()
    for rule in ("half-integral-archimedean-image",
                 "good-reduction-after-transform",
                 "insoluble-cubic-fiber",
                 "mild-bad-reduction-ordinary-double-points",
                 "good-reduction-unramified"):
        assert rule in text


def test_certificate_requires_table_rows(evidence):
    # dropping the 3-adic table row breaks the obstruction-place witness
    pruned = dataclasses.replace(
        evidence,
        table_checks=tuple(r for r in evidence.table_checks
                           if r.prime != 3))
    cert = assemble_certificate(pruned)
    assert not cert.certified
    assert any("3" in gap for gap in cert.gaps)


def test_certificate_rejects_wild_singularities(evidence):
    # fabricate a report claiming eight nodes at 5: no longer mild
    import k3cert.k3 as k3mod
    fake_orbits = tuple(
        dataclasses.replace(evidence.classifications[0][1].orbits[0])
        for _ in range(8))
    bad5 = dataclasses.replace(
        evidence.classifications[0][1], orbits=fake_orbits)
    patched = dataclasses.replace(
        evidence,
        classifications=((5, bad5),) + evidence.classifications[1:])
    cert = assemble_certificate(patched)
    assert not cert.certified
    assert any("5" in gap for gap in cert.gaps)


def test_certify_end_to_end_deterministic():
    first = certify()
    second = certify()
    assert first.certified and second.certified
    assert [v.place for v in first.verdicts] == \
        [v.place for v in second.verdicts]
    assert [v.invariant for v in first.verdicts] == \
        [v.invariant for v in second.verdicts]


def test_certificate_states_assumptions(evidence):
    cert = assemble_certificate(evidence)
    assert len(cert.assumptions) == 4
    assert all(isinstance(a, str) and a for a in cert.assumptions)
