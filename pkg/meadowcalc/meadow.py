"""
Exact arithmetic in the signed meadow of rationals.

Division is total (the inverse of 0 is 0) and sign maps into {-1, 0, 1}.
Terms are immutable trees over the primitive constructors; every derived
operator (1_x, 0_x, x/y, |x|, x <| y |> z, ...) is expanded into primitives
when it is built, so eval_term is the only evaluator.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from meadowcalc.errors import ParseError, UnboundVariableError

logger = logging.getLogger(__name__)

Rational = Fraction
Env = Mapping[str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """
    Parse a rational literal: optional minus, integer, optional "/" positive integer.

    Args:
        text: Literal such as "-5/3" or "7"

    Returns:
        Fraction: The value in lowest terms
    """
    body = text.strip()
    sign = 1
    if body.startswith("-"):
        sign, body = -1, body[1:]
    num, _, den = body.partition("/")
    if not num.isdigit() or (den and not den.isdigit()):
        raise ParseError(f"bad rational literal '{text}'")
    denominator = int(den) if den else 1
    if denominator == 0:
        raise ParseError(f"zero denominator in '{text}'")
    return Fraction(sign * int(num), denominator)


def format_rational(value: Fraction) -> str:
    """Render a rational as "p/q" or as an integer when q = 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def q_inv(a: Fraction) -> Fraction:
    """Totalized inverse: 0 maps to 0, everything else to its field inverse."""
    if a == 0:
        return ZERO
    return 1 / Fraction(a)


def q_sign(a: Fraction) -> Fraction:
    """Sign of a rational as a rational in {-1, 0, 1}."""
    if a > 0:
        return ONE
    if a < 0:
        return -ONE
    return ZERO


# Terms

class Term:
    """Base class of meadow terms."""

    def __add__(self, other: "Term") -> "Term":
        return Add(self, _lift(other))

    def __radd__(self, other) -> "Term":
        return Add(_lift(other), self)

    def __sub__(self, other: "Term") -> "Term":
        return sub(self, _lift(other))

    def __rsub__(self, other) -> "Term":
        return sub(_lift(other), self)

    def __mul__(self, other: "Term") -> "Term":
        return Mul(self, _lift(other))

    def __rmul__(self, other) -> "Term":
        return Mul(_lift(other), self)

    def __neg__(self) -> "Term":
        return Neg(self)


@dataclass(frozen=True)
class Const(Term):
    value: Fraction

    def __str__(self) -> str:
        text = format_rational(self.value)
        return f"({text})" if self.value < 0 else text


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Neg(Term):
    arg: Term

    def __str__(self) -> str:
        return f"-{_wrap(self.arg)}"


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{_wrap(self.left)}*{_wrap(self.right)}"


@dataclass(frozen=True)
class Inv(Term):
    arg: Term

    def __str__(self) -> str:
        return f"{_wrap(self.arg)}^-1"


@dataclass(frozen=True)
class Sign(Term):
    arg: Term

    def __str__(self) -> str:
        return f"s({self.arg})"


MeadowTerm = Term
TermLike = Union[Term, Fraction, int]


def _wrap(t: Term) -> str:
    if isinstance(t, (Var, Const, Sign)):
        return str(t)
    text = str(t)
    return text if text.startswith("(") else f"({text})"


def _lift(value: TermLike) -> Term:
    if isinstance(value, Term):
        return value
    return Const(Fraction(value))


def const(value: Union[Fraction, int, str]) -> Const:
    if isinstance(value, str):
        return Const(parse_rational(value))
    return Const(Fraction(value))


def var(name: str) -> Var:
    return Var(name)


# Derived constructors

def sub(x: TermLike, y: TermLike) -> Term:
    return Add(_lift(x), Neg(_lift(y)))


def one_of(x: TermLike) -> Term:
    """1_x = x * x^-1"""
    x = _lift(x)
    return Mul(x, Inv(x))


def zero_of(x: TermLike) -> Term:
    """0_x = 1 - x * x^-1"""
    return Add(Const(ONE), Neg(one_of(x)))


def square(x: TermLike) -> Term:
    x = _lift(x)
    return Mul(x, x)


def div(x: TermLike, y: TermLike) -> Term:
    return Mul(_lift(x), Inv(_lift(y)))


fraction = div


def cond3(x: TermLike, y: TermLike, z: TermLike) -> Term:
    """x <| y |> z = 1_y * x + 0_y * z"""
    return Add(Mul(one_of(y), _lift(x)), Mul(zero_of(y), _lift(z)))


def abs_(x: TermLike) -> Term:
    """|x| = s(x) * x"""
    x = _lift(x)
    return Mul(Sign(x), x)


def lt_val(x: TermLike, y: TermLike) -> Term:
    """Value version of x < y: 1 when s(y - x) = 1, else 0."""
    s = Sign(sub(y, x))
    return Mul(Add(s, Mul(s, s)), Inv(Const(Fraction(2))))


def leq_val(x: TermLike, y: TermLike) -> Term:
    """Value version of x <= y: s(s(y - x) + 1)."""
    return Sign(Add(Sign(sub(y, x)), Const(ONE)))


def match_zero_of(t: Term) -> Optional[Term]:
    """Return p when t is the expansion of 0_p, otherwise None."""
    if (isinstance(t, Add) and t.left == Const(ONE) and isinstance(t.right, Neg)
            and isinstance(t.right.arg, Mul) and t.right.arg.right == Inv(t.right.arg.left)):
        return t.right.arg.left
    return None


def match_one_of(t: Term) -> Optional[Term]:
    """Return p when t is the expansion of 1_p, otherwise None."""
    if isinstance(t, Mul) and t.right == Inv(t.left):
        return t.left
    return None


def free_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, (Add, Mul)):
        return free_vars(t.left) | free_vars(t.right)
    return free_vars(t.arg)


def ordered_vars(t: Term) -> List[str]:
    """Free variables in order of first occurrence, left to right."""
    seen: List[str] = []

    def walk(node: Term) -> None:
        if isinstance(node, Var):
            if node.name not in seen:
                seen.append(node.name)
        elif isinstance(node, (Add, Mul)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Neg, Inv, Sign)):
            walk(node.arg)

    walk(t)
    return seen


def substitute(t: Term, values: Mapping[str, Term]) -> Term:
    """Replace variables by terms."""
    if isinstance(t, Var):
        return values.get(t.name, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Add):
        return Add(substitute(t.left, values), substitute(t.right, values))
    if isinstance(t, Mul):
        return Mul(substitute(t.left, values), substitute(t.right, values))
    return type(t)(substitute(t.arg, values))


def eval_term(t: Term, env: Env) -> Fraction:
    """
    Evaluate a term in the meadow of rationals.

    Args:
        t: Term over primitive constructors
        env: Values for every free variable

    Returns:
        Fraction: The exact value

    Raises:
        UnboundVariableError: When a free variable is missing from env
    """
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return Fraction(env[t.name])
        except KeyError:
            raise UnboundVariableError(t.name) from None
    if isinstance(t, Add):
        return eval_term(t.left, env) + eval_term(t.right, env)
    if isinstance(t, Mul):
        return eval_term(t.left, env) * eval_term(t.right, env)
    if isinstance(t, Neg):
        return -eval_term(t.arg, env)
    if isinstance(t, Inv):
        return q_inv(eval_term(t.arg, env))
    if isinstance(t, Sign):
        return q_sign(eval_term(t.arg, env))
    raise TypeError(f"not a meadow term: {t!r}")


# Equation checking

@dataclass(frozen=True)
class EquationVerdict:
    """Outcome of check_equation; env and values are set on failure."""
    ok: bool
    env: Optional[Dict[str, Fraction]] = None
    lhs_value: Optional[Fraction] = None
    rhs_value: Optional[Fraction] = None

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        bindings = ", ".join(f"{k}={format_rational(v)}" for k, v in sorted(self.env.items()))
        return (f"FAIL at {bindings} ({format_rational(self.lhs_value)} vs "
                f"{format_rational(self.rhs_value)})")


def default_grid() -> List[Fraction]:
    """All p/q with |p| <= 4 and 1 <= q <= 3, deduplicated and sorted."""
    return sorted({Fraction(p, q) for p in range(-4, 5) for q in range(1, 4)})


def env_grid(variables: Sequence[str], values: Optional[Sequence[Fraction]] = None) -> Iterable[Dict[str, Fraction]]:
    """Every assignment of grid values to the given variables."""
    if values is None:
        values = default_grid()
    for combo in itertools.product(values, repeat=len(variables)):
        yield dict(zip(variables, combo))


def check_equation(lhs: Term, rhs: Term, envs: Optional[Iterable[Env]] = None) -> EquationVerdict:
    """
    Compare two terms on every environment.

    Args:
        lhs: Left-hand side
        rhs: Right-hand side
        envs: Environments binding all free variables; defaults to the
            default grid over the free variables of both sides

    Returns:
        EquationVerdict: OK, or the first environment where the values differ
    """
    if envs is None:
        variables = sorted(free_vars(lhs) | free_vars(rhs))
        envs = env_grid(variables)
    for env in envs:
        left = eval_term(lhs, env)
        right = eval_term(rhs, env)
        if left != right:
            return EquationVerdict(False, dict(env), left, right)
    return EquationVerdict(True)


# Law catalogue

@dataclass(frozen=True)
class Law:
    name: str
    lhs: Term
    rhs: Term

    def check(self, values: Optional[Sequence[Fraction]] = None) -> EquationVerdict:
        variables = sorted(free_vars(self.lhs) | free_vars(self.rhs))
        return check_equation(self.lhs, self.rhs, env_grid(variables, values))


_x, _y, _z = Var("x"), Var("y"), Var("z")

MEADOW_LAWS: Tuple[Law, ...] = (
    Law("add-assoc", Add(Add(_x, _y), _z), Add(_x, Add(_y, _z))),
    Law("add-comm", Add(_x, _y), Add(_y, _x)),
    Law("add-zero", Add(_x, Const(ZERO)), _x),
    Law("add-neg", Add(_x, Neg(_x)), Const(ZERO)),
    Law("mul-assoc", Mul(Mul(_x, _y), _z), Mul(_x, Mul(_y, _z))),
    Law("mul-comm", Mul(_x, _y), Mul(_y, _x)),
    Law("mul-one", Mul(Const(ONE), _x), _x),
    Law("distrib", Mul(_x, Add(_y, _z)), Add(Mul(_x, _y), Mul(_x, _z))),
    Law("inv-involutive", Inv(Inv(_x)), _x),
    Law("restricted-inverse", Mul(_x, Mul(_x, Inv(_x))), _x),
)

SIGN_LAWS: Tuple[Law, ...] = (
    Law("sign-one", Sign(one_of(_x)), one_of(_x)),
    Law("sign-zero", Sign(zero_of(_x)), zero_of(_x)),
    Law("sign-minus-one", Sign(Const(-ONE)), Const(-ONE)),
    Law("sign-inv", Sign(Inv(_x)), Sign(_x)),
    Law("sign-mul", Sign(Mul(_x, _y)), Mul(Sign(_x), Sign(_y))),
    Law("sign-add", Mul(zero_of(sub(Sign(_x), Sign(_y))), sub(Sign(Add(_x, _y)), Sign(_x))), Const(ZERO)),
)


def check_laws(laws: Iterable[Law], values: Optional[Sequence[Fraction]] = None) -> List[Tuple[Law, EquationVerdict]]:
    """Check each law over the grid and return (law, verdict) pairs."""
    results = []
    for law in laws:
        verdict = law.check(values)
        logger.debug(f"Law {law.name}: {verdict}")
        results.append((law, verdict))
    return results


def nonnegativity_characterisation_holds(a: Fraction) -> bool:
    """0 <= a  iff  a = s(a) * a  iff  leq_val(0, a) = 1."""
    by_order = a >= 0
    by_sign = a == q_sign(a) * a
    by_value = eval_term(leq_val(Const(ZERO), Const(a)), {}) == 1
    return by_order == by_sign == by_value


def inverse_law_failures(values: Optional[Sequence[Fraction]] = None) -> List[Fraction]:
    """Grid points where x * x^-1 = 1 fails; in the rationals this is exactly [0]."""
    if values is None:
        values = default_grid()
    return [a for a in values if a * q_inv(a) != 1]
