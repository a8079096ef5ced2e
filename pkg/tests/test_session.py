import contextlib
import io
import os
import tempfile
import unittest

import main
from meadowcalc.errors import KindMismatchError, RedefinitionError, UnboundNameError
from meadowcalc.parser import parse_line
from meadowcalc.session import Session, execute, run_text, with_overrides
from meadowcalc.settings import Settings

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "goldens")
SETTINGS = Settings(cache_enabled=False)


def golden_names():
    return sorted(name[:-3] for name in os.listdir(GOLDEN_DIR) if name.endswith(".mc"))


def read_golden(name, suffix):
    with open(os.path.join(GOLDEN_DIR, name + suffix), encoding="utf-8") as handle:
        return handle.read()


class TestGoldens(unittest.TestCase):
    def test_goldens_present(self):
        self.assertIn("basics", golden_names())

    def test_replay_matches_expected_output(self):
        for name in golden_names():
            with self.subTest(script=name):
                expected = read_golden(name, ".out").rstrip("\n")
                self.assertEqual(run_text(read_golden(name, ".mc"), SETTINGS), expected)

    def test_replay_is_deterministic(self):
        for name in golden_names():
            with self.subTest(script=name):
                script = read_golden(name, ".mc")
                self.assertEqual(run_text(script, SETTINGS), run_text(script, SETTINGS))

    def test_fail_lines_carry_a_witness(self):
        for name in golden_names():
            for line in read_golden(name, ".out").splitlines():
                with self.subTest(script=name, line=line):
                    self.assertRegex(line, r"^(OK .+|FAIL .+ at .+)$")

    def test_negative_pmf_reports_the_point(self):
        session = Session(SETTINGS)
        session.run_line("fn N in x = 0(x-1)*(-1) + 0(x-2)*2")
        self.assertEqual(session.run_line("check pmf N"), ["FAIL pmf N negative value at x=1"])


class TestSession(unittest.TestCase):
    def setUp(self):
        self.session = Session(SETTINGS)

    def test_failures_are_counted(self):
        self.session.run_line("space S atoms a b")
        self.session.run_line("pf P on S : a=1/2 b=1/2")
        self.assertEqual(self.session.failures, 0)
        self.assertEqual(self.session.run_line("pf P on S : a=1"), ["FAIL 'P' is already defined at line 3"])
        self.session.run_line("check PF,WPF P")
        self.assertEqual(self.session.failures, 1)

    def test_blank_lines_count_towards_line_numbers(self):
        self.session.run_line("")
        self.assertEqual(self.session.run_line("show Z"), ["FAIL unbound name 'Z' at line 2"])

    def test_lookup(self):
        self.session.run_line("space S atoms a b")
        with self.assertRaises(KindMismatchError):
            self.session.lookup("pf", "S")
        with self.assertRaises(UnboundNameError):
            self.session.lookup("pf", "P")
        with self.assertRaises(RedefinitionError):
            self.session.bind("space", "S", None)

    def test_execute_returns_report_text(self):
        self.session.run_line("space S atoms a b")
        self.session.run_line("pf P on S : a=1/4 b=3/4")
        session, text = execute(parse_line("eval PR[P, b]"), self.session)
        self.assertIs(session, self.session)
        self.assertEqual(text, "OK PR[P, b] = 3/4")

    def test_overrides_skip_missing_values(self):
        settings = with_overrides(SETTINGS, max_atoms=2, seed=None)
        self.assertEqual(settings.max_atoms, 2)
        self.assertEqual(settings.seed, SETTINGS.seed)


class TestBatch(unittest.TestCase):
    def run_script(self, text):
        with tempfile.NamedTemporaryFile("w", suffix=".mc", delete=False, encoding="utf-8") as handle:
            handle.write(text)
        self.addCleanup(os.remove, handle.name)
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = main.run_batch(Session(SETTINGS), handle.name)
        return code, out.getvalue()

    def test_clean_script_exits_zero(self):
        code, out = self.run_script("space S atoms a\npf P on S : a=1\neval PR[P, a]\n")
        self.assertEqual(code, 0)
        self.assertEqual(out, "OK PR[P, a] = 1\n")

    def test_fail_line_exits_one(self):
        code, out = self.run_script("show Z\n")
        self.assertEqual(code, 1)
        self.assertEqual(out, "FAIL unbound name 'Z' at line 1\n")


if __name__ == "__main__":
    unittest.main()
