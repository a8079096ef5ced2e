import unittest
from fractions import Fraction

from meadowcalc.condval import constant_cv, v
from meadowcalc.configspace import (
    CGuard,
    Empty,
    Obj,
    Par,
    Yield,
    ask_threshold,
    asking_options,
    cfg_canon,
    check_config_laws,
    elicit_indifference,
    expected_utility,
    option,
    prefers_asking,
    utility,
)
from meadowcalc.errors import DegenerateDenominatorError, InvalidThresholdError, UnknownObjectError
from meadowcalc.events import AtomRef, Not, Or, make_space
from meadowcalc.probability import weight_pf

F = Fraction
SPACE = make_space(["e", "ne"])
E = AtomRef("e")


class TestNormalForm(unittest.TestCase):
    def test_outer_yield_wins(self):
        inner = Yield(Yield(Obj("c1"), v(1)), v(2))
        self.assertEqual(cfg_canon(inner, SPACE), cfg_canon(Yield(Obj("c1"), v(2)), SPACE))

    def test_bare_object_yields_zero(self):
        canon = cfg_canon(Obj("c1"), SPACE)
        self.assertEqual(utility(canon), constant_cv(SPACE, 0))
        self.assertEqual(str(canon), "T :-> c1 ~> (0, 0)")

    def test_bottom_guard_disappears(self):
        a = CGuard(Not(Or(E, AtomRef("ne"))), Obj("c1"))
        self.assertEqual(cfg_canon(a, SPACE), cfg_canon(Empty(), SPACE))
        self.assertEqual(str(cfg_canon(Empty(), SPACE)), "eps")

    def test_split_guards_compare_equal(self):
        whole = Obj("c1")
        split = Par(CGuard(E, Obj("c1")), CGuard(Not(E), Obj("c1")))
        self.assertEqual(cfg_canon(whole, SPACE), cfg_canon(split, SPACE))

    def test_multiplicity_counts(self):
        self.assertNotEqual(cfg_canon(Par(Obj("c1"), Obj("c1")), SPACE), cfg_canon(Obj("c1"), SPACE))

    def test_undeclared_object(self):
        with self.assertRaises(UnknownObjectError):
            cfg_canon(Obj("c9"), SPACE, objects=["c1", "c2"])


class TestUtility(unittest.TestCase):
    def test_expected_utility_of_option(self):
        p = weight_pf(SPACE, {"e": F(1, 2), "ne": F(1, 2)})
        self.assertEqual(expected_utility(option(E, "c1", 10, "c2", 0), p), 5)

    def test_elicitation(self):
        self.assertEqual(elicit_indifference(10, 0, 2, 4), F(1, 3))
        with self.assertRaises(DegenerateDenominatorError):
            elicit_indifference(1, 1, 1, 1)

    def test_elicited_probability_makes_options_equal(self):
        p_e = elicit_indifference(10, 0, 2, 4)
        p = weight_pf(SPACE, {"e": p_e, "ne": 1 - p_e})
        self.assertEqual(expected_utility(option(E, "c1", 10, "c2", 0), p),
                         expected_utility(option(E, "c3", 2, "c4", 4), p))

    def test_threshold(self):
        self.assertEqual(ask_threshold(10, 0, 2), F(4, 5))
        with self.assertRaises(InvalidThresholdError):
            ask_threshold(0, 10, 2)

    def test_asking_pays_below_threshold(self):
        below = weight_pf(SPACE, {"e": F(1, 2), "ne": F(1, 2)})
        above = weight_pf(SPACE, {"e": F(9, 10), "ne": F(1, 10)})
        at = weight_pf(SPACE, {"e": F(4, 5), "ne": F(1, 5)})
        self.assertTrue(prefers_asking(below, E, 10, 0, 2))
        self.assertFalse(prefers_asking(above, E, 10, 0, 2))
        self.assertFalse(prefers_asking(at, E, 10, 0, 2))

    def test_asking_pays_exactly_below_threshold_on_a_grid(self):
        threshold = ask_threshold(10, 0, 2)
        for k in range(21):
            p_e = F(k, 20)
            with self.subTest(p_e=p_e):
                p = weight_pf(SPACE, {"e": p_e, "ne": 1 - p_e})
                self.assertEqual(prefers_asking(p, E, 10, 0, 2), p_e < threshold)

    def test_asking_options_utilities(self):
        option1, option2 = asking_options(E, 10, 0, 2)
        p = weight_pf(SPACE, {"e": F(1, 2), "ne": F(1, 2)})
        self.assertEqual(expected_utility(option1, p), 5)
        self.assertEqual(expected_utility(option2, p), 8)


class TestLaws(unittest.TestCase):
    def test_catalogue_holds(self):
        for space in (make_space(["a1"]), make_space(["a1", "a2"])):
            self.assertEqual(check_config_laws(space, 40, seed=1), [])


if __name__ == "__main__":
    unittest.main()
