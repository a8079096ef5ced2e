import random
import unittest
from fractions import Fraction

from meadowcalc.condval import CanonCV
from meadowcalc.errors import (
    InvalidDistributionError,
    InvalidFamilyError,
    MissingArityError,
    SizeBoundExceededError,
    SpaceMismatchError,
)
from meadowcalc.multidim import (
    ArityFamily,
    MultiCV,
    check_pairing_laws,
    check_pff_axioms,
    dimension_spaces,
    family_closure,
    format_tensor,
    joint_exists,
    lift_cv,
    lift_product,
    marginal_pf,
    md_corr2,
    md_cov,
    md_e,
    md_var,
    multi_cv,
    pff_eval,
    pff_from_blocks,
    pff_from_joint,
    product_space,
    reduced_stats,
    validate_family,
)

F = Fraction
HALF = F(1, 2)
QUARTER = F(1, 4)


def diagonal(p_same=HALF):
    return {(0, 0): p_same, (1, 1): 1 - p_same}


def anti_diagonal():
    return {(0, 1): HALF, (1, 0): HALF}


def indicator(space, first=1, second=0):
    return CanonCV(space, (F(first), F(second)))


class TestFamilies(unittest.TestCase):
    def test_closure(self):
        closure = family_closure([("a", "b")], ["a", "b", "c"])
        self.assertEqual(closure, {("a",), ("b",), ("c",), ("a", "b"), ("b", "a")})

    def test_validation_order(self):
        dims = ("a", "b")
        self.assertEqual(str(validate_family(dims, [("a",), ("b",), ("a", "b")])),
                         "FAIL permutation closure at (b a)")
        self.assertEqual(validate_family(dims, [("a", "b"), ("b", "a")]).condition, "subsequence")
        self.assertEqual(validate_family(dims, [("a",)]).condition, "singleton")
        self.assertEqual(validate_family(dims, [("a", "a")]).condition, "repetition-free")
        self.assertEqual(validate_family(dims, [("z",)]).condition, "repetition-free")
        self.assertTrue(validate_family(dims, family_closure([("a", "b")])).ok)

    def test_family_rejects_invalid(self):
        with self.assertRaises(InvalidFamilyError):
            ArityFamily(("a", "b"), frozenset({("a",), ("b",), ("a", "b")}))


class TestPFF(unittest.TestCase):
    def setUp(self):
        self.spaces = dimension_spaces(["a", "b"])
        self.p = pff_from_blocks(self.spaces, {("a", "b"): diagonal()})

    def test_dimension_spaces(self):
        self.assertEqual(self.spaces["b"].atoms, ("b1", "b2"))

    def test_derived_tensors(self):
        self.assertEqual(self.p.tensor(("b", "a")), diagonal())
        self.assertEqual(self.p.tensor(("a",)), {(0,): HALF, (1,): HALF})

    def test_eval(self):
        a, b = self.spaces["a"], self.spaces["b"]
        self.assertEqual(pff_eval(self.p, ("a", "b"), [a.atom("a1"), b.top()]), HALF)
        self.assertEqual(pff_eval(self.p, ("a", "b"), [a.atom("a1"), b.atom("b2")]), 0)
        with self.assertRaises(SpaceMismatchError):
            pff_eval(self.p, ("a", "b"), [b.top(), a.top()])
        with self.assertRaises(MissingArityError):
            self.p.tensor(("a", "c"))

    def test_axioms_hold(self):
        self.assertTrue(check_pff_axioms(self.p).ok)

    def test_invalid_blocks(self):
        with self.assertRaises(InvalidDistributionError):
            pff_from_blocks(self.spaces, {("a", "b"): {(0, 0): HALF}})
        with self.assertRaises(InvalidDistributionError):
            pff_from_blocks(self.spaces, {("a", "b"): {(0, 0): F(3, 2), (1, 1): -HALF}})
        with self.assertRaises(InvalidDistributionError):
            pff_from_blocks(self.spaces, {("a", "b"): diagonal(), ("b", "a"): diagonal(QUARTER)})

    def test_marginal_pf(self):
        self.assertEqual(marginal_pf(self.p, "a").weights, (HALF, HALF))

    def test_from_joint(self):
        spaces = dimension_spaces(["a", "b", "c"])
        joint = {(0, 0, 0): HALF, (1, 1, 1): HALF}
        p = pff_from_joint(spaces, ("a", "b", "c"), joint, arities=[("a", "b"), ("b", "c")])
        self.assertNotIn(("a", "c"), p.family)
        self.assertIn(("c", "b"), p.family)
        self.assertEqual(p.tensor(("b", "c")), diagonal())


class TestStatistics(unittest.TestCase):
    def setUp(self):
        self.spaces = dimension_spaces(["a", "b"])
        self.x = indicator(self.spaces["a"])
        self.y = indicator(self.spaces["b"])

    def test_correlated(self):
        p = pff_from_blocks(self.spaces, {("a", "b"): diagonal()})
        xy = multi_cv(p, ("a", self.x), ("b", self.y))
        self.assertEqual(md_e(p, MultiCV((("a", self.x),))), HALF)
        self.assertEqual(md_var(p, MultiCV((("a", self.x),))), QUARTER)
        self.assertEqual(md_cov(p, xy), QUARTER)
        self.assertEqual(md_corr2(p, xy), 1)

    def test_product_tensor_has_zero_covariance(self):
        product = {(i, j): QUARTER for i in range(2) for j in range(2)}
        p = pff_from_blocks(self.spaces, {("a", "b"): product})
        self.assertEqual(md_cov(p, multi_cv(p, ("a", self.x), ("b", self.y))), 0)

    def test_covariance_needs_joint_arity(self):
        p = pff_from_blocks(self.spaces, {("a",): {(0,): HALF, (1,): HALF}, ("b",): {(0,): HALF, (1,): HALF}})
        with self.assertRaises(MissingArityError):
            multi_cv(p, ("a", self.x), ("b", self.y))

    def test_labels_must_match_spaces(self):
        p = pff_from_blocks(self.spaces, {("a", "b"): diagonal()})
        with self.assertRaises(SpaceMismatchError):
            multi_cv(p, ("a", self.y))

    def test_reduction_agrees(self):
        p = pff_from_blocks(self.spaces, {("a", "b"): diagonal(F(1, 3))})
        xy = multi_cv(p, ("a", self.x), ("b", self.y))
        stats = reduced_stats(p, xy)
        self.assertEqual(stats.e_x, md_e(p, MultiCV((("a", self.x),))))
        self.assertEqual(stats.var_y, md_var(p, MultiCV((("b", self.y),))))
        self.assertEqual(stats.cov, md_cov(p, xy))
        self.assertEqual(stats.corr2, md_corr2(p, xy))

    def test_pairing_laws(self):
        self.assertIsNone(check_pairing_laws(product_space(self.spaces["a"], self.spaces["b"])))

    def test_lift_cv(self):
        prod = product_space(self.spaces["a"], self.spaces["b"])
        self.assertEqual(lift_cv(self.x, 0, prod).values, (1, 1, 0, 0))
        self.assertEqual(lift_cv(self.y, 1, prod).values, (1, 0, 1, 0))
        with self.assertRaises(SpaceMismatchError):
            lift_cv(self.y, 0, prod)

    def test_lift_product(self):
        p = pff_from_blocks(self.spaces, {("a", "b"): diagonal()})
        prod, pf = lift_product(p, "a", "b")
        self.assertEqual(prod.space.atoms, ("a1_b1", "a1_b2", "a2_b1", "a2_b2"))
        self.assertEqual(pf.weights, (HALF, 0, 0, HALF))


class TestJointExistence(unittest.TestCase):
    def test_consistent_pair(self):
        spaces = dimension_spaces(["a", "b"])
        p = pff_from_blocks(spaces, {("a", "b"): diagonal()})
        result = joint_exists(p)
        self.assertTrue(result.exists)
        self.assertEqual(format_tensor(p, ("a", "b"), result.witness), "(a1,b1)=1/2 (a2,b2)=1/2")

    def test_pairwise_marginals_with_joint(self):
        spaces = dimension_spaces(["a", "b", "c"])
        blocks = {("a", "b"): diagonal(), ("b", "c"): diagonal(), ("a", "c"): diagonal()}
        result = joint_exists(pff_from_blocks(spaces, blocks))
        self.assertTrue(result.exists)
        self.assertTrue(all(value >= 0 for value in result.witness.values()))
        self.assertEqual(sum(result.witness.values()), 1)

    def test_marginals_of_random_joints_have_a_joint(self):
        rng = random.Random(7)
        spaces = dimension_spaces(["a", "b", "c"])
        cells = [(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]
        for trial in range(20):
            weights = [rng.randint(0, 6) for _ in cells]
            weights[rng.randrange(len(cells))] += 1
            total = sum(weights)
            joint = {cell: F(w, total) for cell, w in zip(cells, weights) if w}
            p = pff_from_joint(spaces, ("a", "b", "c"), joint, arities=[("a", "b"), ("b", "c"), ("a", "c")])
            with self.subTest(trial=trial):
                result = joint_exists(p)
                self.assertTrue(result.exists)
                self.assertTrue(all(value >= 0 for value in result.witness.values()))
                self.assertEqual(sum(result.witness.values()), 1)

    def test_frustrated_triangle_has_no_joint(self):
        spaces = dimension_spaces(["a", "b", "c"])
        blocks = {("a", "b"): diagonal(), ("b", "c"): diagonal(), ("a", "c"): anti_diagonal()}
        result = joint_exists(pff_from_blocks(spaces, blocks))
        self.assertFalse(result.exists)
        self.assertIsNone(result.witness)
        self.assertEqual(result.certificate, "eliminating 1 free cell(s) yields -1/2 >= 0")

    def test_size_bound(self):
        spaces = dimension_spaces(["a", "b", "c"])
        p = pff_from_blocks(spaces, {("a", "b", "c"): {(0, 0, 0): F(1)}})
        with self.assertRaises(SizeBoundExceededError):
            joint_exists(p, max_cells=4)


if __name__ == "__main__":
    unittest.main()
