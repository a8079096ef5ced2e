import itertools
import unittest
from fractions import Fraction

from hypothesis import given, strategies as st

from meadowcalc.condval import SAMPLE_GRID, CanonCV, corr2_p, cov_p, e_p, var_p
from meadowcalc.errors import SpaceMismatchError
from meadowcalc.events import make_space
from meadowcalc.probability import weight_pf
from meadowcalc.rv import RandomVariable, corr2_rv, cov_rv, cv_of_rv, e_rv, rv_of_cv, sum_over_atoms, var_rv

F = Fraction
SPACE = make_space(["a", "b", "c"])
P = weight_pf(SPACE, {"a": F(1, 2), "b": F(1, 4), "c": F(1, 4)})

cvs = st.lists(st.sampled_from(SAMPLE_GRID), min_size=3, max_size=3).map(lambda vs: CanonCV(SPACE, tuple(vs)))


class TestRandomVariables(unittest.TestCase):
    def test_function_view(self):
        f = RandomVariable(SPACE, (F(3), F(0), F(-1)))
        self.assertEqual(f("c"), -1)
        self.assertEqual(f.as_map(), {"a": 3, "b": 0, "c": -1})
        self.assertEqual(str(f), "{a->3, b->0, c->-1}")

    def test_empty_sum(self):
        self.assertEqual(sum_over_atoms({}), 0)

    def test_space_mismatch(self):
        other = make_space(["x", "y"])
        with self.assertRaises(SpaceMismatchError):
            e_rv(RandomVariable(other, (F(1), F(2))), P)

    @given(cvs)
    def test_round_trip(self, x):
        self.assertEqual(cv_of_rv(rv_of_cv(x)), x)

    @given(cvs, cvs)
    def test_statistics_agree_with_conditional_values(self, x, y):
        f, g = rv_of_cv(x), rv_of_cv(y)
        self.assertEqual(e_rv(f, P), e_p(x, P))
        self.assertEqual(var_rv(f, P), var_p(x, P))
        self.assertEqual(cov_rv(f, g, P), cov_p(x, y, P))
        self.assertEqual(corr2_rv(f, g, P), corr2_p(x, y, P))

    def test_statistics_agree_on_small_spaces(self):
        space = make_space(["a", "b"])
        p = weight_pf(space, {"a": F(1, 3), "b": F(2, 3)})
        values = [CanonCV(space, (F(u), F(w))) for u, w in itertools.product(range(-2, 3), repeat=2)]
        for x, y in itertools.product(values, repeat=2):
            f, g = rv_of_cv(x), rv_of_cv(y)
            with self.subTest(x=x.values, y=y.values):
                self.assertEqual(e_rv(f, p), e_p(x, p))
                self.assertEqual(var_rv(f, p), var_p(x, p))
                self.assertEqual(cov_rv(f, g, p), cov_p(x, y, p))
                self.assertEqual(corr2_rv(f, g, p), corr2_p(x, y, p))


if __name__ == "__main__":
    unittest.main()
