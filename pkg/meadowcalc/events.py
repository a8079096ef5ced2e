"""
Finite Boolean event algebras presented by named atoms.

An event is the set of atoms below it, stored as an integer bitmask over the
atom indices of its space. Events of different spaces never mix.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from meadowcalc.errors import InvalidSpaceError, SpaceMismatchError, UnknownAtomError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EventSpace:
    """A power-set algebra over an ordered list of distinct atom names."""
    atoms: Tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UnknownAtomError(name) from None

    def top(self) -> "Event":
        return Event(self, self.full_mask)

    def bot(self) -> "Event":
        return Event(self, 0)

    def atom(self, name: str) -> "Event":
        return Event(self, 1 << self.index(name))

    def atom_events(self) -> List["Event"]:
        return [Event(self, 1 << i) for i in range(self.size)]

    def events(self) -> Iterator["Event"]:
        """All 2^n events in mask order (bottom first, top last)."""
        for mask in range(1 << self.size):
            yield Event(self, mask)

    def event_of(self, names: Sequence[str]) -> "Event":
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return Event(self, mask)

    def __str__(self) -> str:
        return "{" + ", ".join(self.atoms) + "}"


def make_space(names: Sequence[str]) -> EventSpace:
    """
    Create an event space from atom names.

    Args:
        names: Nonempty list of distinct atom names

    Returns:
        EventSpace: Power-set algebra with 2^n events

    Raises:
        InvalidSpaceError: On an empty or duplicated name list
    """
    names = tuple(names)
    if not names:
        raise InvalidSpaceError("an event space needs at least one atom")
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise InvalidSpaceError(f"duplicate atom names: {', '.join(dupes)}")
    logger.debug(f"Created event space with atoms {names}")
    return EventSpace(names)


@dataclass(frozen=True)
class Event:
    space: EventSpace
    mask: int

    def _check(self, other: "Event") -> None:
        if other.space != self.space:
            raise SpaceMismatchError(f"events from {self.space} and {other.space} cannot be combined")

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & other.mask)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask | other.mask)

    def __invert__(self) -> "Event":
        return Event(self.space, self.space.full_mask & ~self.mask)

    def contains(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def atom_indices(self) -> List[int]:
        return [i for i in range(self.space.size) if self.mask >> i & 1]

    def atom_names(self) -> List[str]:
        return [self.space.atoms[i] for i in self.atom_indices()]

    @property
    def is_top(self) -> bool:
        return self.mask == self.space.full_mask

    @property
    def is_bot(self) -> bool:
        return self.mask == 0

    def __str__(self) -> str:
        if self.is_top:
            return "T"
        if self.is_bot:
            return "F"
        return "|".join(self.atom_names())


def is_atomic(e: Event) -> bool:
    """True iff e is a single atom; bottom is not atomic."""
    return e.mask != 0 and e.mask & (e.mask - 1) == 0


def atoms_below(e: Event) -> List[Event]:
    """The unique atoms whose join is e."""
    return [Event(e.space, 1 << i) for i in e.atom_indices()]


def join(events: Sequence[Event], space: EventSpace) -> Event:
    result = space.bot()
    for e in events:
        result = result | e
    return result


# Event expressions

class EventExpr:
    """Base class of event expression trees."""


@dataclass(frozen=True)
class Top(EventExpr):
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Bot(EventExpr):
    def __str__(self) -> str:
        return "F"


@dataclass(frozen=True)
class AtomRef(EventExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class And(EventExpr):
    left: EventExpr
    right: EventExpr

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(EventExpr):
    left: EventExpr
    right: EventExpr

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Not(EventExpr):
    arg: EventExpr

    def __str__(self) -> str:
        return f"!{self.arg}"


def eval_event(x: EventExpr, space: EventSpace) -> Event:
    """
    Evaluate an event expression to its atom set.

    Raises:
        UnknownAtomError: When an atom name is not in the space
    """
    if isinstance(x, Top):
        return space.top()
    if isinstance(x, Bot):
        return space.bot()
    if isinstance(x, AtomRef):
        return space.atom(x.name)
    if isinstance(x, And):
        return eval_event(x.left, space) & eval_event(x.right, space)
    if isinstance(x, Or):
        return eval_event(x.left, space) | eval_event(x.right, space)
    if isinstance(x, Not):
        return ~eval_event(x.arg, space)
    raise TypeError(f"not an event expression: {x!r}")


# Boolean algebra laws, checked exhaustively

@dataclass(frozen=True)
class EventLaw:
    name: str
    arity: int
    sides: Callable[..., Tuple[Event, Event]]


BA_LAWS: Tuple[EventLaw, ...] = (
    EventLaw("absorb-and", 2, lambda x, y: ((x | y) & y, y)),
    EventLaw("absorb-or", 2, lambda x, y: ((x & y) | y, y)),
    EventLaw("distrib-and", 3, lambda x, y, z: (x & (y | z), (y & x) | (z & x))),
    EventLaw("distrib-or", 3, lambda x, y, z: (x | (y & z), (y | x) & (z | x))),
    EventLaw("complement-and", 1, lambda x: (x & ~x, x.space.bot())),
    EventLaw("complement-or", 1, lambda x: (x | ~x, x.space.top())),
)

DERIVED_BA_LAWS: Tuple[EventLaw, ...] = (
    EventLaw("not-involutive", 1, lambda x: (~~x, x)),
    EventLaw("and-idempotent", 1, lambda x: (x & x, x)),
    EventLaw("or-idempotent", 1, lambda x: (x | x, x)),
    EventLaw("and-comm", 2, lambda x, y: (x & y, y & x)),
    EventLaw("or-comm", 2, lambda x, y: (x | y, y | x)),
    EventLaw("and-assoc", 3, lambda x, y, z: ((x & y) & z, x & (y & z))),
    EventLaw("or-assoc", 3, lambda x, y, z: ((x | y) | z, x | (y | z))),
)


def event_tuples(space: EventSpace, arity: int) -> Iterator[Tuple[Event, ...]]:
    """All arity-tuples of events in lexicographic mask order."""
    if arity == 0:
        yield ()
        return
    for head in space.events():
        for rest in event_tuples(space, arity - 1):
            yield (head,) + rest


def check_event_law(law: EventLaw, space: EventSpace) -> Optional[Tuple[Event, ...]]:
    """Return the first failing event tuple, or None when the law holds."""
    for args in event_tuples(space, law.arity):
        lhs, rhs = law.sides(*args)
        if lhs != rhs:
            logger.debug(f"Law {law.name} fails at {[str(a) for a in args]}")
            return args
    return None
