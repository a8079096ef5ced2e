"""
Conditional values.

A CV expression is built from embedded values v(t) and guarded values
e :-> X with the meadow operations. Its canonical form CanonCV is the vector
of its values at the atoms of the event space; all laws become pointwise.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from meadowcalc.errors import InvalidDistributionError, SpaceMismatchError
from meadowcalc.events import AtomRef, Bot, Event, EventExpr, EventSpace, Not, Or, Top, eval_event
from meadowcalc.fss import PmfView, is_independent
from meadowcalc.meadow import Const, Term, eval_term, format_rational, q_inv
from meadowcalc.probability import ProbabilityFunction, WeightPF, pf_eval

logger = logging.getLogger(__name__)


# Expressions

class CVExpr:
    """Base class of conditional value expressions."""


@dataclass(frozen=True)
class VEmbed(CVExpr):
    term: Term

    def __str__(self) -> str:
        return f"v({self.term})"


@dataclass(frozen=True)
class Guarded(CVExpr):
    event: EventExpr
    body: CVExpr

    def __str__(self) -> str:
        return f"{self.event} :-> {self.body}"


@dataclass(frozen=True)
class CAdd(CVExpr):
    left: CVExpr
    right: CVExpr

    def __str__(self) -> str:
        return f"{self.left} + {self.right}"


@dataclass(frozen=True)
class CNeg(CVExpr):
    arg: CVExpr

    def __str__(self) -> str:
        return f"-({self.arg})"


@dataclass(frozen=True)
class CMul(CVExpr):
    left: CVExpr
    right: CVExpr

    def __str__(self) -> str:
        return f"({self.left})*({self.right})"


@dataclass(frozen=True)
class CInv(CVExpr):
    arg: CVExpr

    def __str__(self) -> str:
        return f"({self.arg})^-1"


def v(value) -> VEmbed:
    """Embed a rational constant."""
    return VEmbed(Const(Fraction(value)))


def cv_square(x: CVExpr) -> CVExpr:
    return CMul(x, x)


def cv_sub(x: CVExpr, y: CVExpr) -> CVExpr:
    return CAdd(x, CNeg(y))


def cv_cond3(x: CVExpr, e: EventExpr, y: CVExpr) -> CVExpr:
    """X <| e |> Y = (e :-> X) + (!e :-> Y)"""
    return CAdd(Guarded(e, x), Guarded(Not(e), y))


# Canonical form

@dataclass(frozen=True)
class CanonCV:
    space: EventSpace
    values: Tuple[Fraction, ...]

    def _check(self, other: "CanonCV") -> None:
        if other.space != self.space:
            raise SpaceMismatchError(f"conditional values over {self.space} and {other.space} cannot be combined")

    def __add__(self, other: "CanonCV") -> "CanonCV":
        self._check(other)
        return CanonCV(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "CanonCV") -> "CanonCV":
        return self + (-other)

    def __mul__(self, other: "CanonCV") -> "CanonCV":
        self._check(other)
        return CanonCV(self.space, tuple(a * b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "CanonCV":
        return CanonCV(self.space, tuple(-a for a in self.values))

    def inverse(self) -> "CanonCV":
        return CanonCV(self.space, tuple(q_inv(a) for a in self.values))

    def guarded(self, e: Event) -> "CanonCV":
        if e.space != self.space:
            raise SpaceMismatchError(f"event {e} is not in {self.space}")
        return CanonCV(self.space, tuple(a if e.contains(i) else Fraction(0) for i, a in enumerate(self.values)))

    def at(self, atom: str) -> Fraction:
        return self.values[self.space.index(atom)]

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(a) for a in self.values) + ")"


def constant_cv(space: EventSpace, value) -> CanonCV:
    return CanonCV(space, tuple(Fraction(value) for _ in space.atoms))


def cv_canon(x: CVExpr, space: EventSpace) -> CanonCV:
    """
    Evaluate a CV expression at every atom.

    Raises:
        UnknownAtomError: For an atom name not in the space
        UnboundVariableError: For an embedded term with a free variable
    """
    if isinstance(x, VEmbed):
        return constant_cv(space, eval_term(x.term, {}))
    if isinstance(x, Guarded):
        return cv_canon(x.body, space).guarded(eval_event(x.event, space))
    if isinstance(x, CAdd):
        return cv_canon(x.left, space) + cv_canon(x.right, space)
    if isinstance(x, CNeg):
        return -cv_canon(x.arg, space)
    if isinstance(x, CMul):
        return cv_canon(x.left, space) * cv_canon(x.right, space)
    if isinstance(x, CInv):
        return cv_canon(x.arg, space).inverse()
    raise TypeError(f"not a CV expression: {x!r}")


# Flat forms

FlatForm = List[Tuple[Event, Fraction]]


def event_expr_of(e: Event) -> EventExpr:
    if e.is_top:
        return Top()
    if e.is_bot:
        return Bot()
    names = e.atom_names()
    expr: EventExpr = AtomRef(names[0])
    for name in names[1:]:
        expr = Or(expr, AtomRef(name))
    return expr


def flat_terms(x: CanonCV) -> FlatForm:
    """Nonoverlapping (guard, value) pairs grouping equal nonzero values, by first atom."""
    groups: Dict[Fraction, int] = {}
    for i, a in enumerate(x.values):
        if a != 0:
            groups[a] = groups.get(a, 0) | (1 << i)
    return [(Event(x.space, mask), value) for value, mask in groups.items()]


def flat_expr(terms: FlatForm) -> CVExpr:
    """Sum of guarded embeddings; the empty sum is v(0)."""
    if not terms:
        return v(0)
    pieces = [Guarded(event_expr_of(e), v(value)) for e, value in terms]
    expr = pieces[0]
    for piece in pieces[1:]:
        expr = CAdd(expr, piece)
    return expr


def cv_flat(x: CanonCV) -> CVExpr:
    """Nonoverlapping flat form of a canonical CV."""
    return flat_expr(flat_terms(x))


def format_flat(terms: FlatForm) -> str:
    if not terms:
        return "v(0)"
    pieces = []
    for e, value in terms:
        guard = str(e)
        if "|" in guard:
            guard = f"({guard})"
        pieces.append(f"{guard} :-> v({format_rational(value)})")
    return " + ".join(pieces)


def cv_flat_product(x: CanonCV, y: CanonCV) -> FlatForm:
    """Product of two flat forms: (e_i & f_j) :-> v(t_i * r_j), skipping empty guards."""
    x._check(y)
    result = []
    for e, t in flat_terms(x):
        for f, r in flat_terms(y):
            g = e & f
            if not g.is_bot:
                result.append((g, t * r))
    return result


def cv_similar(x: CanonCV, y: CanonCV) -> Tuple[FlatForm, FlatForm]:
    """Two flat forms over the same guards: the atom blocks on which both X and Y are constant."""
    x._check(y)
    blocks: Dict[Tuple[Fraction, Fraction], int] = {}
    for i, pair in enumerate(zip(x.values, y.values)):
        blocks[pair] = blocks.get(pair, 0) | (1 << i)
    guards = [(Event(x.space, mask), pair) for pair, mask in blocks.items()]
    return [(g, pair[0]) for g, pair in guards], [(g, pair[1]) for g, pair in guards]


def cv_is_cancellation_violation(x: CanonCV) -> bool:
    """X is nonzero yet X * X^-1 differs from 1 somewhere."""
    return not x.is_zero() and any(a == 0 for a in x.values)


def cancellation_witness(space: EventSpace) -> Optional[CanonCV]:
    """a :-> v(1) for the first atom, when the space has at least two atoms."""
    if space.size < 2:
        return None
    return constant_cv(space, 1).guarded(space.atom(space.atoms[0]))


# Expectation and derived statistics

def _require_weights(x: CanonCV, p: ProbabilityFunction) -> WeightPF:
    if not isinstance(p, WeightPF):
        raise InvalidDistributionError("expectation needs a weight-based probability function")
    if p.space != x.space:
        raise SpaceMismatchError("conditional value and probability function use different spaces")
    return p


def e_p(x: CanonCV, p: WeightPF) -> Fraction:
    p = _require_weights(x, p)
    return sum((a * w for a, w in zip(x.values, p.weights)), Fraction(0))


def var_p(x: CanonCV, p: WeightPF) -> Fraction:
    mean = e_p(x, p)
    return e_p(x * x, p) - mean * mean


def cov_p(x: CanonCV, y: CanonCV, p: WeightPF) -> Fraction:
    return e_p(x * y, p) - e_p(x, p) * e_p(y, p)


def corr2_p(x: CanonCV, y: CanonCV, p: WeightPF) -> Fraction:
    cov = cov_p(x, y, p)
    return cov * cov * q_inv(var_p(x, p) * var_p(y, p))


def e_p_flat(expr: CVExpr, p: WeightPF) -> Fraction:
    """E_P by rewriting to a nonoverlapping flat form and summing P(e_i) * x_i."""
    terms = flat_terms(cv_canon(expr, p.space))
    return sum((pf_eval(p, e) * value for e, value in terms), Fraction(0))


def pmf_of_cv(x: CanonCV, p: WeightPF) -> PmfView:
    """lambda x. P(X = x) over the range of X."""
    p = _require_weights(x, p)
    masses: Dict[Tuple[Fraction, ...], Fraction] = {}
    for a, w in zip(x.values, p.weights):
        masses[(a,)] = masses.get((a,), Fraction(0)) + w
    return PmfView.from_points(["x"], masses)


def joint_pmf(x: CanonCV, y: CanonCV, p: WeightPF) -> PmfView:
    """P(X = x, Y = y) for two event-sharing CVs."""
    x._check(y)
    p = _require_weights(x, p)
    masses: Dict[Tuple[Fraction, ...], Fraction] = {}
    for a, b, w in zip(x.values, y.values, p.weights):
        masses[(a, b)] = masses.get((a, b), Fraction(0)) + w
    return PmfView.from_points(["x", "y"], masses)


def cv_independent(x: CanonCV, y: CanonCV, p: WeightPF) -> bool:
    return is_independent(joint_pmf(x, y, p))


# Law catalogue

@dataclass(frozen=True)
class CVLaw:
    """A law over CVs X, Y, Z, events e, f and rationals a, b."""
    name: str
    holds: Callable[..., bool]


def _v(space: EventSpace, a: Fraction) -> CanonCV:
    return constant_cv(space, a)


CV_LAWS: Tuple[CVLaw, ...] = (
    CVLaw("embed-neg", lambda S, X, Y, Z, e, f, a, b: _v(S, -a) == -_v(S, a)),
    CVLaw("embed-inv", lambda S, X, Y, Z, e, f, a, b: _v(S, q_inv(a)) == _v(S, a).inverse()),
    CVLaw("embed-add", lambda S, X, Y, Z, e, f, a, b: _v(S, a + b) == _v(S, a) + _v(S, b)),
    CVLaw("embed-mul", lambda S, X, Y, Z, e, f, a, b: _v(S, a * b) == _v(S, a) * _v(S, b)),
    CVLaw("embed-injective", lambda S, X, Y, Z, e, f, a, b: _v(S, a) != _v(S, 0) or a == 0),
    CVLaw("add-assoc", lambda S, X, Y, Z, e, f, a, b: (X + Y) + Z == X + (Y + Z)),
    CVLaw("add-comm", lambda S, X, Y, Z, e, f, a, b: X + Y == Y + X),
    CVLaw("add-zero", lambda S, X, Y, Z, e, f, a, b: X + _v(S, 0) == X),
    CVLaw("add-neg", lambda S, X, Y, Z, e, f, a, b: X + (-X) == _v(S, 0)),
    CVLaw("mul-assoc", lambda S, X, Y, Z, e, f, a, b: (X * Y) * Z == X * (Y * Z)),
    CVLaw("mul-comm", lambda S, X, Y, Z, e, f, a, b: X * Y == Y * X),
    CVLaw("mul-one", lambda S, X, Y, Z, e, f, a, b: _v(S, 1) * X == X),
    CVLaw("distrib", lambda S, X, Y, Z, e, f, a, b: X * (Y + Z) == X * Y + X * Z),
    CVLaw("inv-involutive", lambda S, X, Y, Z, e, f, a, b: X.inverse().inverse() == X),
    CVLaw("restricted-inverse", lambda S, X, Y, Z, e, f, a, b: X * (X * X.inverse()) == X),
    CVLaw("guard-top", lambda S, X, Y, Z, e, f, a, b: X.guarded(S.top()) == X),
    CVLaw("guard-bottom", lambda S, X, Y, Z, e, f, a, b: X.guarded(S.bot()) == _v(S, 0)),
    CVLaw("guard-add", lambda S, X, Y, Z, e, f, a, b: (X + Y).guarded(e) == X.guarded(e) + Y.guarded(e)),
    CVLaw("guard-mul", lambda S, X, Y, Z, e, f, a, b: (X * Y).guarded(e) == X.guarded(e) * Y.guarded(e)),
    CVLaw("guard-neg", lambda S, X, Y, Z, e, f, a, b: (-X).guarded(e) == -X.guarded(e)),
    CVLaw("guard-inv", lambda S, X, Y, Z, e, f, a, b: X.inverse().guarded(e) == X.guarded(e).inverse()),
    CVLaw("guard-or", lambda S, X, Y, Z, e, f, a, b:
          X.guarded(e | f) == X.guarded(e) + X.guarded(f) - X.guarded(e & f)),
    CVLaw("guard-and", lambda S, X, Y, Z, e, f, a, b: X.guarded(e & f) == X.guarded(f).guarded(e)),
)


@dataclass(frozen=True)
class CVLawFailure:
    law: str
    sample: Dict[str, str]


def random_cv(space: EventSpace, rng: random.Random, grid: Sequence[Fraction]) -> CanonCV:
    return CanonCV(space, tuple(rng.choice(grid) for _ in space.atoms))


def random_event(space: EventSpace, rng: random.Random) -> Event:
    return Event(space, rng.randrange(1 << space.size))


SAMPLE_GRID: Tuple[Fraction, ...] = tuple(Fraction(p, q) for p in range(-2, 3) for q in (1, 2) if p % q or q == 1)


def check_cv_laws(space: EventSpace, samples: int, seed: int = 0,
                  grid: Sequence[Fraction] = SAMPLE_GRID) -> List[CVLawFailure]:
    """
    Check every CV law on randomly sampled arguments.

    Args:
        space: Event space of the CVs
        samples: Number of random argument tuples
        seed: Seed for the sampler, so a run is reproducible
        grid: Values drawn for CV components and embedded rationals

    Returns:
        List[CVLawFailure]: First failing sample per law, empty when all hold
    """
    rng = random.Random(seed)
    failures: Dict[str, CVLawFailure] = {}
    for _ in range(samples):
        X, Y, Z = (random_cv(space, rng, grid) for _ in range(3))
        e, f = random_event(space, rng), random_event(space, rng)
        a, b = rng.choice(grid), rng.choice(grid)
        for law in CV_LAWS:
            if law.name in failures:
                continue
            if not law.holds(space, X, Y, Z, e, f, a, b):
                failures[law.name] = CVLawFailure(law.name, {
                    "X": str(X), "Y": str(Y), "Z": str(Z), "e": str(e), "f": str(f),
                    "a": format_rational(a), "b": format_rational(b)})
    logger.debug(f"Checked {len(CV_LAWS)} CV laws on {samples} samples, {len(failures)} failures")
    return [failures[law.name] for law in CV_LAWS if law.name in failures]
