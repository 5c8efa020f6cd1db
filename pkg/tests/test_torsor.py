import random

import pytest

from tametorus.errors import (
    DegreeIncompatible,
    EnumerationTooLarge,
    PrecisionExhausted,
    SpecialFibreVanishing,
)
from tametorus.padic import PadicContext
from tametorus.torsor import (
    MultivariatePolynomial,
    NormTorsorFamily,
    constancy_check,
    evaluate,
    reduce_point,
    sample_points,
    special_eval,
    verify_factorization,
)

P = MultivariatePolynomial


def family(p, e, f, precision=4):
    return NormTorsorFamily(PadicContext(p, precision), e, f)


def x_squared_plus_one():
    return P(1, ((1, (2,)), (1, (0,))))


class TestPolynomial:
    def test_canonical_form_combines_and_sorts(self):
        f = P(2, ((1, (0, 0)), (2, (1, 1)), (-2, (1, 1)), (3, (2, 0)), (5, (0, 2))))
        assert f.terms == ((3, (2, 0)), (5, (0, 2)), (1, (0, 0)))

    def test_graded_lex_order(self):
        f = P(2, ((1, (1, 0)), (1, (0, 2)), (1, (1, 1))))
        degrees = [sum(e) for _, e in f.terms]
        assert degrees == sorted(degrees, reverse=True)
        assert f.terms[0][1] == (0, 2) or f.terms[0][1] == (1, 1)
        # within a degree, lexicographically larger exponent first
        assert f.terms[:2] == ((1, (1, 1)), (1, (0, 2)))

    def test_algebra(self):
        x = P.variable(1, 0)
        one = P.constant(1, 1)
        f = (x + one) * (x + one)
        assert f == P(1, ((1, (2,)), (2, (1,)), (1, (0,))))
        assert (x**3).terms == ((1, (3,)),)

    def test_evaluate_mod(self):
        f = x_squared_plus_one()
        assert f.evaluate_mod([1], 625) == 2
        assert f.evaluate_mod([2], 625) == 5
        assert f.evaluate_mod([7], 5) == 0

    def test_json_roundtrip(self):
        f = P(2, ((3, (1, 2)), (-1, (0, 0))))
        assert P.from_json_list(2, f.to_json_list()) == f


class TestEvaluate:
    def test_constant_one_everywhere_zero(self):
        fam = family(5, 2, P.constant(2, 1))
        rng = random.Random(0)
        for _ in range(20):
            pt = [rng.randrange(fam.context.modulus) for _ in range(2)]
            assert evaluate(fam, pt).value == 0

    def test_nonresidue_point(self):
        fam = family(5, 2, x_squared_plus_one())
        assert evaluate(fam, [1]).value == 1

    def test_uniformizer_point(self):
        # f(2) = 5 and 5 is a norm from Q_5(sqrt 5)
        fam = family(5, 2, x_squared_plus_one())
        assert evaluate(fam, [2]).value == 0

    def test_patch_boundary_is_loud(self):
        fam = family(5, 2, P(1, ((1, (1,)),)))
        with pytest.raises(PrecisionExhausted):
            evaluate(fam, [0])

    def test_degree_must_divide(self):
        with pytest.raises(DegreeIncompatible):
            family(5, 3, x_squared_plus_one())


class TestReduceAndSpecialEval:
    def test_reduce(self):
        fam = family(5, 2, x_squared_plus_one())
        assert reduce_point(fam, [0]) == (0,)
        assert reduce_point(fam, [7]) == (2,)
        fam3 = family(3, 2, P.constant(2, 1))
        assert reduce_point(fam3, [10, -1]) == (1, 2)

    def test_special_constant(self):
        fam = family(5, 2, P.constant(1, 1))
        assert special_eval(fam, [3]).value == 0

    def test_special_nonresidue(self):
        fam = family(5, 2, x_squared_plus_one())
        assert special_eval(fam, [1]).value == 1

    def test_special_cubic(self):
        fam = family(7, 3, P(1, ((1, (1,)),)))
        assert special_eval(fam, [2]).value == 2

    def test_vanishing(self):
        fam = family(5, 2, x_squared_plus_one())
        with pytest.raises(SpecialFibreVanishing):
            special_eval(fam, [2])


class TestVerifyFactorization:
    def test_constant_unit_no_skips(self):
        fam = family(5, 2, P.constant(2, 3))
        report = verify_factorization(fam, 300, seed=1)
        assert report.commuted
        assert report.skipped_nonunit == 0
        assert report.samples_tested == 300

    def test_x_squared_plus_one_skip_set(self):
        fam = family(5, 2, x_squared_plus_one())
        report = verify_factorization(fam, 2000, seed=42)
        assert report.failures == ()
        # regenerate the primary sample: skips are exactly residues 2 and 3
        rng = random.Random(42)
        points = sample_points(fam, 2000, rng)
        vanishing = [pt for pt in points if pt[0] % 5 in (2, 3)]
        assert report.skipped_nonunit == len(vanishing)
        assert report.samples_tested == 2000 - len(vanishing)

    def test_two_variable_cubic_family(self):
        fam = family(7, 3, P(2, ((1, (1, 1)), (1, (0, 0)))))
        report = verify_factorization(fam, 1500, seed=9)
        assert report.failures == ()

    def test_deterministic(self):
        fam = family(5, 2, x_squared_plus_one())
        a = verify_factorization(fam, 500, seed=5)
        b = verify_factorization(fam, 500, seed=5)
        assert a == b

    def test_multiplicativity_in_f(self):
        rng = random.Random(83)
        ctx = PadicContext(5, 4)
        f1 = P(1, ((1, (2,)), (1, (0,))))
        f2 = P(1, ((2, (1,)), (1, (0,))))
        fam1 = NormTorsorFamily(ctx, 2, f1)
        fam2 = NormTorsorFamily(ctx, 2, f2)
        fam12 = NormTorsorFamily(ctx, 2, f1 * f2)
        checked = 0
        for _ in range(60):
            pt = [rng.randrange(ctx.modulus)]
            try:
                lhs = evaluate(fam12, pt)
                rhs = evaluate(fam1, pt) + evaluate(fam2, pt)
            except PrecisionExhausted:
                continue
            checked += 1
            assert lhs == rhs
        assert checked > 20

    def test_reduction_invariance(self):
        # same residue mod p, same class
        fam = family(7, 3, P(1, ((1, (2,)), (3, (0,)))))
        rng = random.Random(97)
        mod = fam.context.modulus
        for _ in range(50):
            base = rng.randrange(mod)
            if fam.f.evaluate_mod([base % 7], 7) == 0:
                continue
            other = (base + 7 * rng.randrange(mod // 7)) % mod
            assert evaluate(fam, [base]) == evaluate(fam, [other])


class TestConstancy:
    def test_unit_constant(self):
        fam = family(5, 2, P.constant(1, 3))
        report = constancy_check(fam)
        assert report.constant
        assert set(report.classes.values()) == {1}
        assert len(report.classes) == 5

    def test_x_is_not_constant(self):
        fam = family(5, 2, P(1, ((1, (1,)),)))
        report = constancy_check(fam)
        assert not report.constant
        assert report.classes == {(1,): 0, (2,): 1, (3,): 1, (4,): 0}

    def test_eth_power_shape_is_constant(self):
        # f = c*g^e + p*h reduces to c*gbar^e on the special fibre
        g = P(1, ((1, (1,)), (2, (0,))))
        h = P(1, ((3, (2,)), (1, (0,))))
        c = 2
        f = (g * g).scale(c) + h.scale(5)
        fam = family(5, 2, f)
        report = constancy_check(fam)
        assert report.constant
        assert set(report.classes.values()) == {1}  # 2 is a non-residue mod 5

    def test_enumeration_guard(self):
        fam = family(101, 2, P.constant(4, 1), precision=2)
        with pytest.raises(EnumerationTooLarge):
            constancy_check(fam)


def test_family_json_roundtrip():
    fam = family(5, 2, x_squared_plus_one(), precision=6)
    d = fam.to_json_dict()
    assert d == {
        "p": 5,
        "precision": 6,
        "e": 2,
        "n_vars": 1,
        "f": [{"c": 1, "exp": [2]}, {"c": 1, "exp": [0]}],
    }
    assert NormTorsorFamily.from_json_dict(d) == fam
