"""
Probability functions over finite event spaces and the axiom auditor.

Two representations are supported: WeightPF (atom weights, a model of the
probability axioms by construction) and TablePF (an arbitrary valuation of
every event, used to exhibit models of weaker axiom systems).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from meadowcalc import cache
from meadowcalc.errors import (
    InvalidDistributionError,
    SizeBoundExceededError,
    SpaceMismatchError,
    UnknownCommandError,
)
from meadowcalc.events import Event, EventSpace, event_tuples, make_space
from meadowcalc.meadow import format_rational, q_inv
from meadowcalc.settings import Settings, load_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightPF:
    """P(e) is the sum of the weights of the atoms below e."""
    space: EventSpace
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.space.size:
            raise InvalidDistributionError(
                f"expected {self.space.size} weights, got {len(self.weights)}")
        negative = [a for a, w in zip(self.space.atoms, self.weights) if w < 0]
        if negative:
            raise InvalidDistributionError(f"negative weight on {', '.join(negative)}")
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise InvalidDistributionError(f"weights sum to {format_rational(total)}, not 1")

    def weight(self, atom: str) -> Fraction:
        return self.weights[self.space.index(atom)]


@dataclass(frozen=True)
class TablePF:
    """A valuation of all 2^n events, indexed by event mask."""
    space: EventSpace
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.space.size:
            raise InvalidDistributionError(
                f"expected {1 << self.space.size} event values, got {len(self.values)}")

    def __str__(self) -> str:
        return " ".join(f"{e}={format_rational(self.values[e.mask])}" for e in self.space.events())


ProbabilityFunction = Union[WeightPF, TablePF]


def weight_pf(space: EventSpace, weights: Mapping[str, Fraction]) -> WeightPF:
    """Build a WeightPF from atom weights; unlisted atoms get weight 0."""
    for name in weights:
        space.index(name)
    return WeightPF(space, tuple(Fraction(weights.get(a, 0)) for a in space.atoms))


def table_pf(space: EventSpace, values: Mapping[Event, Fraction]) -> TablePF:
    """Build a TablePF; events not listed get value 0."""
    table = [Fraction(0)] * (1 << space.size)
    for event, value in values.items():
        if event.space != space:
            raise SpaceMismatchError(f"event {event} is not in {space}")
        table[event.mask] = Fraction(value)
    return TablePF(space, tuple(table))


def pf_eval(p: ProbabilityFunction, e: Event) -> Fraction:
    if e.space != p.space:
        raise SpaceMismatchError(f"event {e} is not in the space of the probability function")
    if isinstance(p, WeightPF):
        return sum((p.weights[i] for i in e.atom_indices()), Fraction(0))
    return p.values[e.mask]


def _select(a: Fraction, condition: Fraction, b: Fraction) -> Fraction:
    """a <| condition |> b"""
    one = condition * q_inv(condition)
    return one * a + (1 - one) * b


def cond_p(variant: str, p: ProbabilityFunction, x: Event, y: Event) -> Fraction:
    """
    Totalized conditional probability P(x | y).

    Args:
        variant: "p0" (0 when P(y) = 0), "p1" (1) or "ps" (P(x))
    """
    if x.space != y.space:
        raise SpaceMismatchError("conditioning events come from different spaces")
    py = pf_eval(p, y)
    plain = pf_eval(p, x & y) * q_inv(py)
    if variant == "p0":
        return plain
    if variant == "p1":
        return _select(plain, py, Fraction(1))
    if variant == "ps":
        return _select(plain, py, pf_eval(p, x))
    raise UnknownCommandError(variant)


# Axioms

@dataclass(frozen=True)
class Axiom:
    label: str
    names: Tuple[str, ...]
    holds: Callable[..., bool]

    @property
    def arity(self) -> int:
        return len(self.names)


def _p(p, e):
    return pf_eval(p, e)


def _bayes(p, x, y):
    return cond_p("p0", p, x, y) == cond_p("p0", p, y, x) * _p(p, x) * q_inv(_p(p, y))


def _bayes2(p, x, y, z):
    total = cond_p("p0", p, y, z) * _p(p, z) + cond_p("p0", p, y, ~z) * _p(p, ~z)
    return cond_p("p0", p, x, y) == cond_p("p0", p, y, x) * _p(p, x) * q_inv(total)


AXIOMS: Dict[str, Axiom] = {a.label: a for a in (
    Axiom("top", (), lambda p: _p(p, p.space.top()) == 1),
    Axiom("bottom", (), lambda p: _p(p, p.space.bot()) == 0),
    Axiom("nonneg", ("x",), lambda p, x: _p(p, x) == abs(_p(p, x))),
    Axiom("inclusion-exclusion", ("x", "y"),
          lambda p, x, y: _p(p, x | y) == _p(p, x) + _p(p, y) - _p(p, x & y)),
    Axiom("weak-cancel", ("x", "y"),
          lambda p, x, y: _p(p, x & y) * _p(p, y) * q_inv(_p(p, y)) == _p(p, x & y)),
    Axiom("bayes", ("x", "y"), _bayes),
    Axiom("bayes2", ("x", "y", "z"), _bayes2),
    Axiom("split", ("y", "z"), lambda p, y, z: _p(p, y) == _p(p, y & z) + _p(p, y & ~z)),
)}

SYSTEMS: Dict[str, Tuple[str, ...]] = {
    "PF": ("top", "bottom", "nonneg", "inclusion-exclusion"),
    "WPF": ("top", "bottom", "nonneg", "weak-cancel"),
    "PF'": ("top", "bottom", "nonneg", "bayes2"),
    "BR": ("bayes",),
    "BR2": ("bayes2",),
    "WPF0": ("top", "bottom", "nonneg"),
    "ADD": ("split",),
}


@dataclass(frozen=True)
class SystemVerdict:
    """Audit result for one axiom system; label and witness are set on failure."""
    system: str
    ok: bool
    label: Optional[str] = None
    witness: Tuple[Tuple[str, Event], ...] = ()

    def witness_text(self) -> str:
        return ", ".join(f"{name}={event}" for name, event in self.witness)


def _system_axioms(system: str) -> Tuple[Axiom, ...]:
    try:
        return tuple(AXIOMS[label] for label in SYSTEMS[system])
    except KeyError:
        raise UnknownCommandError(system) from None


def first_failure(p: ProbabilityFunction, axiom: Axiom) -> Optional[Tuple[Event, ...]]:
    """First event tuple, in mask order, at which the axiom fails."""
    for events in event_tuples(p.space, axiom.arity):
        if not axiom.holds(p, *events):
            return events
    return None


def check_system(p: ProbabilityFunction, system: str) -> SystemVerdict:
    for axiom in _system_axioms(system):
        witness = first_failure(p, axiom)
        if witness is not None:
            return SystemVerdict(system, False, axiom.label, tuple(zip(axiom.names, witness)))
    return SystemVerdict(system, True)


def check_axioms(p: ProbabilityFunction, systems: Sequence[str]) -> List[SystemVerdict]:
    """
    Audit a probability function against axiom systems, exhaustively over events.

    Args:
        p: WeightPF or TablePF
        systems: Names from SYSTEMS, e.g. ["PF", "WPF", "BR"]

    Returns:
        List[SystemVerdict]: One verdict per system, in the order given
    """
    verdicts = [check_system(p, s) for s in systems]
    logger.debug(f"Audit: {[(v.system, v.ok) for v in verdicts]}")
    return verdicts


def holds(p: ProbabilityFunction, system: str) -> bool:
    return check_system(p, system).ok


def default_atom_names(n: int) -> List[str]:
    return [f"a{i}" for i in range(1, n + 1)]


def search_counterexample(space_size: int, satisfy: Sequence[str], violate: Sequence[str],
                          value_grid: Sequence[Fraction], atoms: Optional[Sequence[str]] = None,
                          max_atoms: Optional[int] = None, use_cache: bool = True,
                          settings: Optional[Settings] = None) -> Optional[TablePF]:
    """
    Find a valuation table satisfying some systems while violating others.

    Candidates are enumerated in lexicographic order of grid positions over
    events in mask order, so the result is the first model in that order.

    Args:
        space_size: Atom count
        satisfy: Systems every candidate must satisfy
        violate: Systems each of which the candidate must fail
        value_grid: Values tried for every event
        atoms: Atom names; defaults to a1..an
        max_atoms: Size bound; defaults to settings.max_atoms
        use_cache: Consult the diskcache before searching
        settings: Size bound and cache location; defaults to the environment

    Returns:
        The first TablePF found, or None when the grid is exhausted

    Raises:
        SizeBoundExceededError: When space_size exceeds the bound
    """
    settings = settings or load_settings()
    bound = settings.max_atoms if max_atoms is None else max_atoms
    if space_size > bound:
        raise SizeBoundExceededError(space_size, bound)
    names = list(atoms) if atoms is not None else default_atom_names(space_size)
    space = make_space(names)
    grid = [Fraction(v) for v in value_grid]
    for system in list(satisfy) + list(violate):
        _system_axioms(system)

    key = cache.search_key("counterexample", ",".join(names), ",".join(satisfy), ",".join(violate),
                           ",".join(format_rational(v) for v in grid))
    if use_cache:
        cached = cache.get_cached_data(key, settings=settings)
        if cached is not None:
            logger.info(f"Using cached search result for {key}")
            return None if cached["values"] is None else TablePF(space, tuple(cached["values"]))

    found = None
    tried = 0
    for values in itertools.product(grid, repeat=1 << space_size):
        tried += 1
        candidate = TablePF(space, values)
        if all(holds(candidate, s) for s in satisfy) and not any(holds(candidate, s) for s in violate):
            found = candidate
            break
    logger.info(f"Counterexample search tried {tried} candidates, found={found is not None}")

    if use_cache:
        cache.cache_data(key, {"values": None if found is None else list(found.values)}, settings=settings)
    return found


def separating_model(space: Optional[EventSpace] = None) -> TablePF:
    """The four-event valuation that satisfies WPF but not PF: only the top event has mass."""
    space = space or make_space(["e", "ne"])
    if space.size != 2:
        raise InvalidDistributionError("the separating model lives on a two-atom space")
    return table_pf(space, {space.top(): Fraction(1)})
