import unittest
from fractions import Fraction

from meadowcalc.condval import CAdd, Guarded, VEmbed, cv_canon
from meadowcalc.configspace import CGuard, Empty, Obj, Par, Yield
from meadowcalc.errors import ParseError, UnknownCommandError
from meadowcalc.events import And, AtomRef, Not, Or, Top, make_space
from meadowcalc.meadow import Const, Var, div, eval_term, one_of, zero_of
from meadowcalc.parser import (
    EOF,
    Check,
    CVRef,
    DeclareDims,
    DeclarePF,
    DeclarePFF,
    Eval,
    FssCommand,
    Labelled,
    Laws,
    Search,
    SumOf,
    parse_config,
    parse_cv,
    parse_event,
    parse_line,
    parse_term,
    tokenize,
)

F = Fraction
x = Var("x")


class TestTokenizer(unittest.TestCase):
    def test_columns_and_symbols(self):
        tokens = tokenize("cv X on S = a :-> v(1/2)")
        self.assertEqual([t.text for t in tokens][:8], ["cv", "X", "on", "S", "=", "a", ":->", "v"])
        self.assertEqual(tokens[6].column, 15)
        self.assertEqual(tokens[-1].kind, EOF)

    def test_comment_ends_the_line(self):
        self.assertEqual([t.text for t in tokenize("show P # remark")], ["show", "P", ""])

    def test_bad_character(self):
        with self.assertRaises(ParseError) as ctx:
            tokenize("show $")
        self.assertEqual(ctx.exception.column, 6)


class TestTerms(unittest.TestCase):
    def test_indicator_shorthand(self):
        self.assertEqual(parse_term("0x"), zero_of(x))
        self.assertEqual(parse_term("1(x-1)"), one_of(x - Const(F(1))))

    def test_precedence(self):
        self.assertEqual(eval_term(parse_term("1 + 2 * 3"), {}), 7)
        self.assertEqual(eval_term(parse_term("-2^2"), {}), -4)
        self.assertEqual(eval_term(parse_term("(1/2)^-1 - 3/4"), {}), F(5, 4))

    def test_functions(self):
        self.assertEqual(eval_term(parse_term("cond(5, 0, 7)"), {}), 7)
        self.assertEqual(eval_term(parse_term("abs(-3) + s(-2)"), {}), 2)
        self.assertEqual(eval_term(parse_term("lt(1, 2) + leq(2, 2)"), {}), 2)
        self.assertEqual(eval_term(parse_term("inv(0) + 1/(2-2)"), {}), 0)

    def test_division_by_zero_is_total(self):
        self.assertEqual(parse_term("1/0"), div(Const(F(1)), Const(F(0))))
        self.assertEqual(eval_term(parse_term("1/0"), {}), 0)
        self.assertEqual(eval_term(parse_term("3/0 + 1/2"), {}), F(1, 2))
        self.assertEqual(parse_term("3/4"), Const(F(3, 4)))
        space = make_space(["a", "b"])
        self.assertTrue(cv_canon(parse_cv("a :-> v(1/0)"), space).is_zero())

    def test_function_name_without_arguments_is_a_variable(self):
        self.assertEqual(parse_term("s"), Var("s"))

    def test_trailing_garbage(self):
        with self.assertRaises(ParseError):
            parse_term("1 2")


class TestEventsAndValues(unittest.TestCase):
    def test_event_precedence(self):
        self.assertEqual(parse_event("a | b & !c"), Or(AtomRef("a"), And(AtomRef("b"), Not(AtomRef("c")))))
        self.assertEqual(parse_event("T"), Top())

    def test_guarded_sum(self):
        expr = parse_cv("(a|c) :-> v(3) + b :-> v(1/2)")
        self.assertIsInstance(expr, CAdd)
        self.assertEqual(expr.left, Guarded(Or(AtomRef("a"), AtomRef("c")), VEmbed(Const(F(3)))))
        space = make_space(["a", "b", "c"])
        self.assertEqual(cv_canon(expr, space).values, (F(3), F(1, 2), F(3)))

    def test_name_reference(self):
        self.assertEqual(parse_cv("X"), CVRef("X"))

    def test_configuration(self):
        expr = parse_config("(e :-> c1 ~> v(10)) || (!e :-> c2 ~> v(0))")
        self.assertEqual(expr, Par(CGuard(AtomRef("e"), Yield(Obj("c1"), VEmbed(Const(F(10))))),
                                   CGuard(Not(AtomRef("e")), Yield(Obj("c2"), VEmbed(Const(F(0)))))))
        self.assertEqual(parse_config("eps || c1"), Par(Empty(), Obj("c1")))


class TestCommands(unittest.TestCase):
    def test_blank_and_comment_lines(self):
        self.assertIsNone(parse_line(""))
        self.assertIsNone(parse_line("   # nothing here"))

    def test_pf(self):
        self.assertEqual(parse_line("pf P on S : a=1/2 b=-1/2"),
                         DeclarePF("P", "S", (("a", F(1, 2)), ("b", F(-1, 2)))))

    def test_check_forms(self):
        self.assertEqual(parse_line("check PF,WPF,PF' T"), Check("systems", "T", ("PF", "WPF", "PF'")))
        self.assertEqual(parse_line("check pff Q"), Check("pff", "Q"))
        self.assertEqual(parse_line("check pmf G"), Check("pmf", "G"))

    def test_search(self):
        self.assertEqual(parse_line("search satisfy WPF violate PF atoms 2 grid 0,1 as N"),
                         Search(("WPF",), ("PF",), 2, (F(0), F(1)), "N"))
        self.assertEqual(parse_line("search violate PF atoms 1 grid 0").satisfy, ())

    def test_dims(self):
        self.assertEqual(parse_line("dims a b"), DeclareDims(("a", "b"), ("1", "2")))
        self.assertEqual(parse_line("dims a b atoms 1 2 3"), DeclareDims(("a", "b"), ("1", "2", "3")))

    def test_pff(self):
        cmd = parse_line("pff Q : (a b) { (a1,b1)=1/2 (a2,b2)=1/2 }")
        self.assertEqual(cmd, DeclarePFF("Q", ((("a", "b"), ((("a1", "b1"), F(1, 2)), (("a2", "b2"), F(1, 2)))),)))

    def test_fss(self):
        cmd = parse_line("fss sum x of (sum y of 0x*0y)")
        self.assertIsInstance(cmd, FssCommand)
        self.assertEqual(cmd.text, "sum x of (sum y of 0x*0y)")
        self.assertEqual(cmd.expr.variables, ("x",))
        self.assertIsInstance(cmd.expr.body, SumOf)

    def test_eval_keeps_source_text(self):
        cmd = parse_line("eval MDCOV[Q, X@a, Y@b]")
        self.assertEqual(cmd, Eval("MDCOV", ("Q", Labelled("X", "a"), Labelled("Y", "b")), "MDCOV[Q, X@a, Y@b]"))

    def test_laws(self):
        self.assertEqual(parse_line("laws cv S 20"), Laws("cv", "S", 20))
        self.assertEqual(parse_line("laws meadow"), Laws("meadow"))

    def test_unknown_command(self):
        with self.assertRaises(UnknownCommandError):
            parse_line("frobnicate X")

    def test_unknown_operator(self):
        with self.assertRaises(ParseError) as ctx:
            parse_line("eval FOO[P]")
        self.assertEqual(ctx.exception.column, 6)

    def test_missing_bracket_column(self):
        text = "eval E[Q, v(2) * (a :-> v(3))"
        with self.assertRaises(ParseError) as ctx:
            parse_line(text)
        self.assertEqual(ctx.exception.column, len(text) + 1)


if __name__ == "__main__":
    unittest.main()
