import itertools
import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from meadowcalc.condval import (
    SAMPLE_GRID,
    CAdd,
    CanonCV,
    CInv,
    CMul,
    Guarded,
    cancellation_witness,
    check_cv_laws,
    constant_cv,
    corr2_p,
    cov_p,
    cv_canon,
    cv_cond3,
    cv_flat,
    cv_flat_product,
    cv_independent,
    cv_is_cancellation_violation,
    cv_similar,
    e_p,
    e_p_flat,
    flat_terms,
    format_flat,
    joint_pmf,
    pmf_of_cv,
    v,
    var_p,
)
from meadowcalc.errors import InvalidDistributionError, SpaceMismatchError
from meadowcalc.events import AtomRef, Or, make_space
from meadowcalc.fss import corr2_pmf, cov_pmf, e_pmf, format_pmf, var_pmf
from meadowcalc.probability import separating_model, weight_pf

F = Fraction
SPACE = make_space(["a", "b", "c"])
P = weight_pf(SPACE, {"a": F(1, 2), "b": F(1, 4), "c": F(1, 4)})

cvs = st.lists(st.sampled_from(SAMPLE_GRID), min_size=3, max_size=3).map(lambda vs: CanonCV(SPACE, tuple(vs)))


def cv(*values):
    return CanonCV(SPACE, tuple(F(x) for x in values))


class TestCanonicalForm(unittest.TestCase):
    def test_guarded_sum(self):
        expr = CAdd(Guarded(Or(AtomRef("a"), AtomRef("c")), v(3)), Guarded(AtomRef("b"), v(F(1, 2))))
        self.assertEqual(cv_canon(expr, SPACE), cv(3, F(1, 2), 3))

    def test_inverse_is_total(self):
        self.assertEqual(cv_canon(CInv(Guarded(AtomRef("a"), v(2))), SPACE), cv(F(1, 2), 0, 0))

    def test_cond3(self):
        expr = cv_cond3(v(1), AtomRef("b"), v(5))
        self.assertEqual(cv_canon(expr, SPACE), cv(5, 1, 5))

    def test_flat_form_text(self):
        x = cv(3, F(1, 2), 3)
        self.assertEqual(format_flat(flat_terms(x)), "(a|c) :-> v(3) + b :-> v(1/2)")
        self.assertEqual(format_flat(flat_terms(constant_cv(SPACE, 0))), "v(0)")

    @settings(max_examples=1000)
    @given(cvs)
    def test_flat_form_denotes_the_same_value(self, x):
        self.assertEqual(cv_canon(cv_flat(x), SPACE), x)

    @given(cvs, cvs)
    def test_flat_product(self, x, y):
        total = constant_cv(SPACE, 0)
        for e, value in cv_flat_product(x, y):
            total = total + constant_cv(SPACE, value).guarded(e)
        self.assertEqual(total, x * y)

    @given(cvs, cvs)
    def test_similar_forms_share_guards(self, x, y):
        fx, fy = cv_similar(x, y)
        self.assertEqual([e for e, _ in fx], [e for e, _ in fy])
        rebuilt = constant_cv(SPACE, 0)
        for e, value in fx:
            rebuilt = rebuilt + constant_cv(SPACE, value).guarded(e)
        self.assertEqual(rebuilt, x)

    def test_cancellation(self):
        witness = cancellation_witness(SPACE)
        self.assertTrue(cv_is_cancellation_violation(witness))
        self.assertNotEqual(witness * witness.inverse(), constant_cv(SPACE, 1))
        self.assertIsNone(cancellation_witness(make_space(["only"])))

    def test_space_mismatch(self):
        with self.assertRaises(SpaceMismatchError):
            cv(1, 2, 3) + constant_cv(make_space(["a", "b"]), 1)


class TestStatistics(unittest.TestCase):
    def test_expectation_and_variance(self):
        x = cv(3, F(1, 2), 3)
        self.assertEqual(e_p(x, P), F(19, 8))
        self.assertEqual(var_p(x, P), F(75, 64))
        self.assertEqual(e_p_flat(cv_flat(x), P), F(19, 8))

    def test_expectation_needs_weights(self):
        with self.assertRaises(InvalidDistributionError):
            e_p(constant_cv(make_space(["e", "ne"]), 1), separating_model())

    def test_correlation(self):
        x, y = cv(1, 0, 0), cv(2, 0, 0)
        self.assertEqual(cov_p(x, y, P), F(1, 2))
        self.assertEqual(corr2_p(x, y, P), 1)
        self.assertEqual(corr2_p(x, constant_cv(SPACE, 7), P), 0)

    def test_pmfs(self):
        x = cv(1, 0, 1)
        self.assertEqual(format_pmf(pmf_of_cv(x, P)), "(0) -> 1/4 (1) -> 3/4")
        joint = joint_pmf(x, cv(0, 0, 1), P)
        self.assertEqual(format_pmf(joint), "(0,0) -> 1/4 (1,0) -> 1/2 (1,1) -> 1/4")

    def test_independence(self):
        space = make_space(["a", "b", "c", "d"])
        uniform = weight_pf(space, {n: F(1, 4) for n in space.atoms})
        first = CanonCV(space, (F(1), F(1), F(0), F(0)))
        second = CanonCV(space, (F(1), F(0), F(1), F(0)))
        self.assertTrue(cv_independent(first, second, uniform))
        self.assertFalse(cv_independent(first, first, uniform))

    def test_pmf_statistics_agree_on_small_spaces(self):
        space = make_space(["a", "b"])
        p = weight_pf(space, {"a": F(1, 3), "b": F(2, 3)})
        values = [CanonCV(space, (F(u), F(w))) for u, w in itertools.product(range(-2, 3), repeat=2)]
        for x in values:
            g = pmf_of_cv(x, p)
            self.assertEqual(e_pmf(g), e_p(x, p))
            self.assertEqual(var_pmf(g), var_p(x, p))
        for x, y in itertools.product(values, repeat=2):
            with self.subTest(x=x.values, y=y.values):
                joint = joint_pmf(x, y, p)
                self.assertEqual(cov_pmf(joint), cov_p(x, y, p))
                self.assertEqual(corr2_pmf(joint), corr2_p(x, y, p))

    @given(cvs, cvs)
    def test_expectation_is_linear(self, x, y):
        self.assertEqual(e_p(x + y, P), e_p(x, P) + e_p(y, P))


class TestLaws(unittest.TestCase):
    def test_catalogue_holds(self):
        for space in (make_space(["a1"]), make_space(["a1", "a2"]), SPACE):
            self.assertEqual(check_cv_laws(space, 40, seed=3), [])

    def test_products_are_pointwise(self):
        self.assertEqual(cv_canon(CMul(v(2), Guarded(AtomRef("b"), v(3))), SPACE), cv(0, 6, 0))


if __name__ == "__main__":
    unittest.main()
