import random

import pytest

from tametorus.errors import (
    ContextMismatch,
    DegreeIncompatible,
    NotAUnit,
    PrecisionExhausted,
    SearchSpaceTooLarge,
)
from tametorus.padic import (
    NormClass,
    PadicContext,
    PadicInt,
    eth_power_class,
    field_norm,
    norm_class,
    norm_class_oracle,
    smallest_primitive_root,
    unit_part,
)


class TestContext:
    def test_rejects_two(self):
        with pytest.raises(ValueError, match="wildly"):
            PadicContext(2, 4)

    def test_rejects_composite_and_low_precision(self):
        with pytest.raises(ValueError):
            PadicContext(9, 4)
        with pytest.raises(ValueError):
            PadicContext(5, 1)

    def test_primitive_roots(self):
        assert smallest_primitive_root(3) == 2
        assert smallest_primitive_root(5) == 2
        assert smallest_primitive_root(7) == 3
        assert smallest_primitive_root(13) == 2
        assert smallest_primitive_root(41) == 6


class TestArithmetic:
    def test_add_with_carry_into_valuation(self):
        ctx = PadicContext(5, 4)
        s = ctx.integer(2) + ctx.integer(3)
        assert s.residue == 5 and s.known_valuation == 1

    def test_zero_times_anything_is_exhausted(self):
        ctx = PadicContext(5, 4)
        z = ctx.integer(0) * ctx.integer(17)
        assert z.is_exhausted
        assert z.known_valuation == ctx.precision

    def test_mul_exact_mod_p_cubed(self):
        ctx = PadicContext(5, 3)
        assert (ctx.integer(24) * ctx.integer(24)).residue == 76

    def test_sub_and_negatives_reduce(self):
        ctx = PadicContext(7, 3)
        assert (ctx.integer(3) - ctx.integer(5)).residue == 343 - 2

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatch):
            PadicContext(5, 4).integer(1) + PadicContext(7, 4).integer(1)
        with pytest.raises(ContextMismatch):
            PadicContext(5, 4).integer(1) * PadicContext(5, 5).integer(1)


class TestUnitPart:
    def test_two_digits(self):
        v, u = unit_part(PadicContext(5, 4).integer(50))
        assert (v, u.residue) == (2, 2)

    def test_unit_input(self):
        a = PadicContext(5, 4).integer(7)
        v, u = unit_part(a)
        assert v == 0 and u == a

    def test_27_times_2(self):
        v, u = unit_part(PadicContext(3, 5).integer(54))
        assert (v, u.residue) == (3, 2)

    def test_exhausted(self):
        with pytest.raises(PrecisionExhausted):
            unit_part(PadicContext(5, 4).integer(625))


class TestEthPowerClass:
    def test_one_is_always_a_power(self):
        for p, e in [(5, 2), (7, 3), (13, 4)]:
            assert eth_power_class(PadicContext(p, 4).integer(1), e).value == 0

    def test_nonresidue_mod_five(self):
        assert eth_power_class(PadicContext(5, 4).integer(2), 2).value == 1

    def test_cube_class_mod_seven(self):
        # primitive root 3: 3^2 = 2, so dlog(2) = 2; cubes mod 7 are {1, 6}
        assert eth_power_class(PadicContext(7, 4).integer(2), 3).value == 2
        cubes = {pow(x, 3, 7) for x in range(1, 7)}
        assert 2 not in cubes

    def test_dlog_matches_brute_force(self):
        for p, e in [(5, 2), (7, 2), (7, 3), (13, 2), (13, 3), (13, 4), (13, 6)]:
            ctx = PadicContext(p, 4)
            g = ctx.primitive_root
            dlog = {pow(g, k, p): k for k in range(p - 1)}
            for u in range(1, p):
                assert eth_power_class(ctx.integer(u), e).value == dlog[u] % e

    def test_not_a_unit(self):
        with pytest.raises(NotAUnit):
            eth_power_class(PadicContext(5, 4).integer(10), 2)

    def test_degree_incompatible(self):
        with pytest.raises(DegreeIncompatible):
            eth_power_class(PadicContext(5, 4).integer(2), 3)


class TestNormClass:
    def test_unit_square_is_a_norm(self):
        ctx = PadicContext(5, 6)
        for u in (1, 4, 6, 9):
            assert norm_class(ctx.integer(u), 2).value == 0

    def test_p_is_a_norm_for_p_five(self):
        # N(sqrt(5)) = -5 and -1 = 2^2 mod 5
        assert norm_class(PadicContext(5, 4).integer(5), 2).value == 0

    def test_two_is_not_a_norm(self):
        assert norm_class(PadicContext(5, 4).integer(2), 2).value == 1

    def test_homomorphism(self):
        rng = random.Random(61)
        for p, e in [(5, 2), (7, 3), (13, 2), (13, 3)]:
            ctx = PadicContext(p, 6)
            for _ in range(40):
                a = ctx.integer(rng.randrange(1, ctx.modulus))
                b = ctx.integer(rng.randrange(1, ctx.modulus))
                prod = a * b
                if a.is_exhausted or b.is_exhausted or prod.is_exhausted:
                    continue
                assert norm_class(prod, e) == norm_class(a, e) + norm_class(b, e)

    def test_norms_have_class_zero(self):
        rng = random.Random(67)
        for p, e in [(5, 2), (7, 3), (13, 3)]:
            ctx = PadicContext(p, 6)
            for _ in range(40):
                coeffs = tuple(rng.randrange(-p**2, p**2) for _ in range(e))
                n = field_norm(p, e, coeffs)
                value = ctx.integer(n)
                if value.is_exhausted:
                    continue
                assert norm_class(value, e).value == 0

    def test_tame_stability(self):
        # the class of p^v * u only depends on a mod p^(v+1)
        rng = random.Random(71)
        for p, e in [(5, 2), (7, 3)]:
            ctx = PadicContext(p, 6)
            for _ in range(40):
                a = ctx.integer(rng.randrange(1, ctx.modulus))
                if a.is_exhausted:
                    continue
                v = a.known_valuation
                if v + 1 >= ctx.precision:
                    continue
                bump = ctx.integer(p ** (v + 1) * rng.randrange(ctx.modulus))
                assert norm_class(a + bump, e) == norm_class(a, e)

    def test_exhausted_input(self):
        with pytest.raises(PrecisionExhausted):
            norm_class(PadicContext(5, 4).integer(0), 2)


class TestOracle:
    def test_one_is_a_norm(self):
        assert norm_class_oracle(PadicContext(5, 6).integer(1), 2, 2).value == 0

    def test_two_needs_one_twist(self):
        assert norm_class_oracle(PadicContext(5, 6).integer(2), 2, 3).value == 1

    def test_seven_is_a_norm_in_degree_three(self):
        assert norm_class_oracle(PadicContext(7, 6).integer(7), 3, 2).value == 0

    def test_matches_formula_on_units_and_uniformizers(self):
        for p, e in [(3, 2), (5, 2), (7, 3)]:
            ctx = PadicContext(p, 6)
            for alpha in (0, 1):
                for u in range(1, p):
                    a = ctx.integer(p**alpha * u)
                    assert norm_class_oracle(a, e, 2) == norm_class(a, e)

    def test_search_precision_doubling_keeps_verdicts(self):
        for p, e in [(3, 2), (5, 2)]:
            ctx = PadicContext(p, 6)
            for alpha in (0, 1):
                for u in range(1, p):
                    a = ctx.integer(p**alpha * u)
                    assert norm_class_oracle(a, e, 2) == norm_class_oracle(a, e, 3)

    def test_search_space_guard(self):
        with pytest.raises(SearchSpaceTooLarge):
            norm_class_oracle(PadicContext(13, 12).integer(5), 3, 3)

    def test_precision_must_cover_valuation_plus_two(self):
        with pytest.raises(PrecisionExhausted):
            norm_class_oracle(PadicContext(5, 4).integer(125), 2, 2)


class TestNormClassValue:
    def test_validation(self):
        with pytest.raises(ValueError):
            NormClass(2, 2)
        with pytest.raises(ValueError):
            NormClass(0, 0)

    def test_addition(self):
        assert NormClass(3, 2) + NormClass(3, 2) == NormClass(3, 1)
        with pytest.raises(ValueError):
            NormClass(2, 1) + NormClass(3, 1)

    def test_json(self):
        assert NormClass(3, 2).to_json_dict() == {"value": 2, "e": 3}


def test_field_norm_quadratic_and_cubic_forms():
    # degree 2: N(c0 + c1 t) = c0^2 - p c1^2; degree 3 adds the cubic form
    rng = random.Random(73)
    for _ in range(50):
        p = rng.choice((3, 5, 7, 13))
        c0, c1, c2 = (rng.randrange(-20, 20) for _ in range(3))
        assert field_norm(p, 2, (c0, c1)) == c0 * c0 - p * c1 * c1
        expected = c0**3 + p * c1**3 + p * p * c2**3 - 3 * p * c0 * c1 * c2
        assert field_norm(p, 3, (c0, c1, c2)) == expected
