"""
Configuration space: parallel object states with conditional presence and
attached yields, their utility, expected utility and the two elicitation
scenarios (indifference between options, disutility of asking).
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from meadowcalc.condval import (
    SAMPLE_GRID,
    CAdd,
    CanonCV,
    CVExpr,
    Guarded,
    constant_cv,
    cv_canon,
    e_p,
    event_expr_of,
    flat_expr,
    flat_terms,
    random_cv,
    random_event,
    v,
)
from meadowcalc.errors import DegenerateDenominatorError, InvalidThresholdError, MeadowCalcError, UnknownObjectError
from meadowcalc.events import AtomRef, Event, EventExpr, EventSpace, Not, eval_event, make_space
from meadowcalc.meadow import format_rational
from meadowcalc.probability import WeightPF, weight_pf

logger = logging.getLogger(__name__)


class ConfigExpr:
    """Base class of configuration expressions."""


@dataclass(frozen=True)
class Empty(ConfigExpr):
    def __str__(self) -> str:
        return "eps"


@dataclass(frozen=True)
class Obj(ConfigExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Par(ConfigExpr):
    left: ConfigExpr
    right: ConfigExpr

    def __str__(self) -> str:
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class CGuard(ConfigExpr):
    event: EventExpr
    body: ConfigExpr

    def __str__(self) -> str:
        return f"({self.event} :-> {self.body})"


@dataclass(frozen=True)
class Yield(ConfigExpr):
    body: ConfigExpr
    cv: CVExpr

    def __str__(self) -> str:
        return f"({self.body} ~> {self.cv})"


Triple = Tuple[Event, str, CanonCV]


@dataclass(frozen=True, eq=False)
class CanonConfig:
    """
    Normal form: conditionally present objects with their yields.

    Equality compares, atom by atom, the multiset of present (object, yield)
    pairs, so configurations differing only in how guards are split compare equal.
    """
    space: EventSpace
    triples: Tuple[Triple, ...]

    def atom_multisets(self) -> Tuple[FrozenSet, ...]:
        result = []
        for i in range(self.space.size):
            present = Counter((name, cv.values) for e, name, cv in self.triples if e.contains(i))
            result.append(frozenset(present.items()))
        return tuple(result)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CanonConfig) and self.space == other.space
                and self.atom_multisets() == other.atom_multisets())

    def __hash__(self) -> int:
        return hash((self.space, self.atom_multisets()))

    def __str__(self) -> str:
        if not self.triples:
            return "eps"
        return " || ".join(f"{e} :-> {name} ~> {cv}" for e, name, cv in self.triples)


def cfg_canon(a: ConfigExpr, space: EventSpace, objects: Optional[Iterable[str]] = None) -> CanonConfig:
    """
    Normalize a configuration: guards accumulate by conjunction, the outermost
    yield applies to every object below it, bare objects yield v(0), and
    empty or bottom-guarded parts disappear.

    Args:
        a: Configuration expression
        space: Event space for guards and yields
        objects: Declared object names; None accepts any name

    Raises:
        UnknownObjectError: For an undeclared object
        UnknownAtomError: For an undeclared atom in a guard or yield
    """
    declared = set(objects) if objects is not None else None
    triples: List[Triple] = []

    def walk(node: ConfigExpr, guard: Event, override: Optional[CanonCV]) -> None:
        if isinstance(node, Empty):
            return
        if isinstance(node, Obj):
            if declared is not None and node.name not in declared:
                raise UnknownObjectError(node.name)
            if not guard.is_bot:
                triples.append((guard, node.name, override if override is not None else constant_cv(space, 0)))
            return
        if isinstance(node, Par):
            walk(node.left, guard, override)
            walk(node.right, guard, override)
            return
        if isinstance(node, CGuard):
            walk(node.body, guard & eval_event(node.event, space), override)
            return
        if isinstance(node, Yield):
            walk(node.body, guard, override if override is not None else cv_canon(node.cv, space))
            return
        raise TypeError(f"not a configuration expression: {node!r}")

    walk(a, space.top(), None)
    triples.sort(key=lambda t: (t[1], t[0].mask, t[2].values))
    return CanonConfig(space, tuple(triples))


def utility(a: CanonConfig) -> CanonCV:
    """Sum of the yields, each restricted to its object's presence event."""
    total = constant_cv(a.space, 0)
    for e, _, cv in a.triples:
        total = total + cv.guarded(e)
    return total


def expected_utility(a: ConfigExpr, p: WeightPF, objects: Optional[Iterable[str]] = None) -> Fraction:
    return e_p(utility(cfg_canon(a, p.space, objects)), p)


# Elicitation

def option(e: EventExpr, first: str, u_first, second: str, u_second) -> ConfigExpr:
    """(e :-> first ~> v(u_first)) || (!e :-> second ~> v(u_second))"""
    return Par(CGuard(e, Yield(Obj(first), v(u_first))), CGuard(Not(e), Yield(Obj(second), v(u_second))))


def _indifference_space() -> Tuple[EventSpace, EventExpr]:
    return make_space(["e", "ne"]), AtomRef("e")


def elicit_indifference(u1, u2, u3, u4) -> Fraction:
    """
    Subjective probability of e revealed by indifference between
    (e :-> c1 ~> u1) || (!e :-> c2 ~> u2) and (e :-> c3 ~> u3) || (!e :-> c4 ~> u4).

    Returns:
        Fraction: (u4 - u2) / (u4 - u2 + u1 - u3)

    Raises:
        DegenerateDenominatorError: When u4 - u2 + u1 - u3 = 0
    """
    u1, u2, u3, u4 = (Fraction(u) for u in (u1, u2, u3, u4))
    denominator = u4 - u2 + u1 - u3
    if denominator == 0:
        raise DegenerateDenominatorError("u4 - u2 + u1 - u3 must be nonzero")
    p = (u4 - u2) / denominator
    if 0 <= p <= 1:
        space, e = _indifference_space()
        pf = weight_pf(space, {"e": p, "ne": 1 - p})
        first = expected_utility(option(e, "c1", u1, "c2", u2), pf)
        third = expected_utility(option(e, "c3", u3, "c4", u4), pf)
        if first != third:
            raise MeadowCalcError(f"back-substitution gave {format_rational(first)} vs {format_rational(third)}")
        logger.debug(f"Indifference at P(e)={format_rational(p)}, expected utility {format_rational(first)}")
    return p


def ask_threshold(high, low, d) -> Fraction:
    """Asking about e at cost d pays off exactly when P(e) < 1 - d/(high - low)."""
    high, low, d = Fraction(high), Fraction(low), Fraction(d)
    if low >= high:
        raise InvalidThresholdError(f"low ({format_rational(low)}) must be below high ({format_rational(high)})")
    return 1 - d / (high - low)


def asking_options(e: EventExpr, high, low, d) -> Tuple[ConfigExpr, ConfigExpr]:
    """
    The two paths scenario.

    option1 stays on the first path: pi1 ~> (e :-> v(high) + !e :-> v(low)).
    option2 asks at cost d and switches when needed, so both branches yield high - d.
    """
    high, low, d = Fraction(high), Fraction(low), Fraction(d)
    option1 = Yield(Obj("pi1"), CAdd(Guarded(e, v(high)), Guarded(Not(e), v(low))))
    option2 = option(e, "pi1", high - d, "pi2", high - d)
    return option1, option2


def prefers_asking(p: WeightPF, e: EventExpr, high, low, d) -> bool:
    """E^U(option2(d)) > E^U(option1)."""
    option1, option2 = asking_options(e, high, low, d)
    return expected_utility(option2, p) > expected_utility(option1, p)


# Law catalogue

@dataclass(frozen=True)
class ConfigLaw:
    name: str
    sides: Callable[..., Tuple[ConfigExpr, ConfigExpr]]


CS_LAWS: Tuple[ConfigLaw, ...] = (
    ConfigLaw("par-comm", lambda A, B, C, e, f, X, Y: (Par(A, B), Par(B, A))),
    ConfigLaw("par-assoc", lambda A, B, C, e, f, X, Y: (Par(Par(A, B), C), Par(B, Par(A, C)))),
    ConfigLaw("par-empty", lambda A, B, C, e, f, X, Y: (Par(A, Empty()), A)),
    ConfigLaw("guard-top", lambda A, B, C, e, f, X, Y: (CGuard(_event(e.space.top()), A), A)),
    ConfigLaw("guard-bottom", lambda A, B, C, e, f, X, Y: (CGuard(_event(e.space.bot()), A), Empty())),
    ConfigLaw("guard-par", lambda A, B, C, e, f, X, Y:
              (CGuard(_event(e), Par(A, B)), Par(CGuard(_event(e), A), CGuard(_event(e), B)))),
    ConfigLaw("guard-split", lambda A, B, C, e, f, X, Y:
              (Par(CGuard(_event(e), A), CGuard(_event(f), A)),
               Par(CGuard(_event(e | f), A), CGuard(_event(e & f), A)))),
    ConfigLaw("object-yield", lambda A, B, C, e, f, X, Y: (Obj("c1"), Yield(Obj("c1"), v(0)))),
    ConfigLaw("yield-override", lambda A, B, C, e, f, X, Y: (Yield(Yield(A, X), Y), Yield(A, Y))),
    ConfigLaw("yield-empty", lambda A, B, C, e, f, X, Y: (Yield(Empty(), X), Empty())),
    ConfigLaw("yield-par", lambda A, B, C, e, f, X, Y: (Yield(Par(A, B), X), Par(Yield(A, X), Yield(B, X)))),
)


def _event(e: Event) -> EventExpr:
    return event_expr_of(e)


def _cv(x: CanonCV) -> CVExpr:
    return flat_expr(flat_terms(x))


def random_config(space: EventSpace, objects: Sequence[str], rng: random.Random, depth: int = 2) -> ConfigExpr:
    choice = rng.randrange(5) if depth > 0 else rng.randrange(2)
    if choice == 0:
        return Empty() if rng.random() < 0.3 else Obj(rng.choice(objects))
    if choice == 1:
        return Obj(rng.choice(objects))
    if choice == 2:
        return Par(random_config(space, objects, rng, depth - 1), random_config(space, objects, rng, depth - 1))
    if choice == 3:
        return CGuard(_event(random_event(space, rng)), random_config(space, objects, rng, depth - 1))
    return Yield(random_config(space, objects, rng, depth - 1), _cv(random_cv(space, rng, SAMPLE_GRID)))


@dataclass(frozen=True)
class ConfigLawFailure:
    law: str
    lhs: str
    rhs: str


def check_config_laws(space: EventSpace, samples: int, seed: int = 0,
                      objects: Sequence[str] = ("c1", "c2", "c3")) -> List[ConfigLawFailure]:
    """
    Check every configuration law, and the additivity of utility, on random instances.

    Returns:
        List[ConfigLawFailure]: First failure per law, empty when all hold
    """
    rng = random.Random(seed)
    failures: Dict[str, ConfigLawFailure] = {}
    for _ in range(samples):
        A, B, C = (random_config(space, objects, rng) for _ in range(3))
        e, f = random_event(space, rng), random_event(space, rng)
        X, Y = (_cv(random_cv(space, rng, SAMPLE_GRID)) for _ in range(2))
        for law in CS_LAWS:
            if law.name in failures:
                continue
            lhs, rhs = law.sides(A, B, C, e, f, X, Y)
            if cfg_canon(lhs, space) != cfg_canon(rhs, space):
                failures[law.name] = ConfigLawFailure(law.name, str(lhs), str(rhs))
        if "utility-par" not in failures:
            whole = utility(cfg_canon(Par(A, B), space))
            if whole != utility(cfg_canon(A, space)) + utility(cfg_canon(B, space)):
                failures["utility-par"] = ConfigLawFailure("utility-par", str(Par(A, B)), "U(A) + U(B)")
    return list(failures.values())
