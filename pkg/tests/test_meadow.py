import unittest
from fractions import Fraction

from hypothesis import given, strategies as st

from meadowcalc.errors import ParseError, UnboundVariableError
from meadowcalc.meadow import (
    MEADOW_LAWS,
    SIGN_LAWS,
    Const,
    Inv,
    Var,
    abs_,
    check_equation,
    check_laws,
    cond3,
    default_grid,
    div,
    eval_term,
    format_rational,
    inverse_law_failures,
    leq_val,
    lt_val,
    match_one_of,
    match_zero_of,
    nonnegativity_characterisation_holds,
    one_of,
    parse_rational,
    q_inv,
    q_sign,
    square,
    zero_of,
)

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)

x, y = Var("x"), Var("y")


class TestRationals(unittest.TestCase):
    def test_totalized_inverse(self):
        self.assertEqual(q_inv(Fraction(0)), 0)
        self.assertEqual(q_inv(Fraction(-2, 3)), Fraction(-3, 2))

    def test_sign(self):
        self.assertEqual([q_sign(Fraction(v)) for v in (-5, 0, 7)], [-1, 0, 1])

    def test_parse_and_format(self):
        self.assertEqual(parse_rational("-5/3"), Fraction(-5, 3))
        self.assertEqual(parse_rational("6/4"), Fraction(3, 2))
        self.assertEqual(format_rational(Fraction(4, 2)), "2")
        self.assertEqual(format_rational(Fraction(-1, 3)), "-1/3")

    def test_parse_rejects_garbage(self):
        for text in ("", "1/0", "a", "1/-2"):
            with self.assertRaises(ParseError):
                parse_rational(text)


class TestTerms(unittest.TestCase):
    def test_division_by_zero_is_zero(self):
        self.assertEqual(eval_term(div(Const(Fraction(1)), Const(Fraction(0))), {}), 0)

    def test_inverse_of_zero(self):
        self.assertEqual(eval_term(Inv(Const(Fraction(0))), {}), 0)

    def test_unbound_variable(self):
        with self.assertRaises(UnboundVariableError) as ctx:
            eval_term(x + 1, {})
        self.assertEqual(ctx.exception.name, "x")

    def test_indicators(self):
        self.assertEqual(eval_term(zero_of(x), {"x": 0}), 1)
        self.assertEqual(eval_term(zero_of(x), {"x": 3}), 0)
        self.assertEqual(eval_term(one_of(x), {"x": Fraction(-1, 2)}), 1)

    def test_cond3_selects_on_zero(self):
        t = cond3(Const(Fraction(5)), y, Const(Fraction(7)))
        self.assertEqual(eval_term(t, {"y": 2}), 5)
        self.assertEqual(eval_term(t, {"y": 0}), 7)

    def test_matchers(self):
        self.assertEqual(match_zero_of(zero_of(x - 1)), x - 1)
        self.assertEqual(match_one_of(one_of(y)), y)
        self.assertIsNone(match_zero_of(square(x)))

    @given(rationals, rationals)
    def test_order_values(self, a, b):
        self.assertEqual(eval_term(lt_val(Const(a), Const(b)), {}), 1 if a < b else 0)
        self.assertEqual(eval_term(leq_val(Const(a), Const(b)), {}), 1 if a <= b else 0)

    @given(rationals)
    def test_abs(self, a):
        self.assertEqual(eval_term(abs_(Const(a)), {}), abs(a))


class TestLaws(unittest.TestCase):
    def test_meadow_laws_hold_on_grid(self):
        for law, verdict in check_laws(MEADOW_LAWS):
            self.assertTrue(verdict.ok, f"{law.name}: {verdict}")

    def test_sign_laws_hold_on_grid(self):
        small = [Fraction(v) for v in (-2, -1, 0, 1, 2)] + [Fraction(1, 3), Fraction(-4, 3)]
        for law, verdict in check_laws(SIGN_LAWS, small):
            self.assertTrue(verdict.ok, f"{law.name}: {verdict}")

    def test_inverse_law_fails_only_at_zero(self):
        self.assertEqual(inverse_law_failures(), [Fraction(0)])

    def test_failing_equation_reports_witness(self):
        verdict = check_equation(x * Inv(x), Const(Fraction(1)))
        self.assertFalse(verdict.ok)
        self.assertEqual(verdict.env, {"x": Fraction(0)})
        self.assertEqual(str(verdict), "FAIL at x=0 (0 vs 1)")

    def test_grid_size(self):
        grid = default_grid()
        self.assertIn(Fraction(-4, 3), grid)
        self.assertEqual(len(grid), len(set(grid)))

    @given(rationals)
    def test_nonnegativity_characterisation(self, a):
        self.assertTrue(nonnegativity_characterisation_holds(a))


if __name__ == "__main__":
    unittest.main()
