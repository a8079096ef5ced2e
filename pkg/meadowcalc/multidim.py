"""
Probability function families over several dimensions.

Each dimension d has its own event space, an isomorphic copy whose atoms are
named f"{d}{base}" (a1, a2, b1, b2, ...). A PFF stores one joint weight
tensor per arity of its family, keyed by tuples of atom indices.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import sympy

from meadowcalc.condval import CanonCV, corr2_p, cov_p, e_p, flat_terms, var_p
from meadowcalc.errors import (
    InvalidDistributionError,
    InvalidFamilyError,
    MissingArityError,
    SizeBoundExceededError,
    SpaceMismatchError,
)
from meadowcalc.events import Event, EventSpace, make_space
from meadowcalc.meadow import format_rational, q_inv
from meadowcalc.probability import SystemVerdict, WeightPF
from meadowcalc.settings import load_settings

logger = logging.getLogger(__name__)

Arity = Tuple[str, ...]
Index = Tuple[int, ...]
Tensor = Dict[Index, Fraction]

DEFAULT_BASE_ATOMS = ("1", "2")


def dimension_spaces(dims: Sequence[str], base: Sequence[str] = DEFAULT_BASE_ATOMS) -> Dict[str, EventSpace]:
    """One event space per dimension, atoms tagged with the dimension name."""
    return {d: make_space([f"{d}{name}" for name in base]) for d in dims}


# Arity families

def format_arity(w: Arity) -> str:
    return "(" + " ".join(w) + ")"


def family_closure(arities: Iterable[Arity], dims: Iterable[str] = ()) -> FrozenSet[Arity]:
    """Smallest arity family containing the given arities and the singletons of dims."""
    result = set((d,) for d in dims)
    for w in arities:
        for k in range(1, len(w) + 1):
            for sub in itertools.combinations(w, k):
                result.update(itertools.permutations(sub))
    return frozenset(result)


@dataclass(frozen=True)
class FamilyVerdict:
    ok: bool
    condition: Optional[str] = None
    witness: Optional[Arity] = None

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return f"FAIL {self.condition} closure at {format_arity(self.witness)}"


def validate_family(dims: Sequence[str], arities: Iterable[Arity]) -> FamilyVerdict:
    """
    Check the closure conditions of an arity family.

    Returns:
        FamilyVerdict: OK, or the first violated condition with the missing
            or offending arity as witness
    """
    family = set(arities)
    ordered = sorted(family, key=lambda w: (len(w), w))
    for w in ordered:
        if not w or len(set(w)) != len(w) or any(d not in dims for d in w):
            return FamilyVerdict(False, "repetition-free", w)
    for w in ordered:
        for perm in sorted(itertools.permutations(w)):
            if perm not in family:
                return FamilyVerdict(False, "permutation", perm)
    for w in ordered:
        for k in range(1, len(w)):
            for sub in itertools.combinations(w, k):
                if sub not in family:
                    return FamilyVerdict(False, "subsequence", sub)
    for d in dims:
        if (d,) not in family:
            return FamilyVerdict(False, "singleton", (d,))
    return FamilyVerdict(True)


@dataclass(frozen=True)
class ArityFamily:
    dimensions: Tuple[str, ...]
    arities: FrozenSet[Arity]

    def __post_init__(self):
        verdict = validate_family(self.dimensions, self.arities)
        if not verdict.ok:
            raise InvalidFamilyError(f"{verdict.condition} closure fails at {format_arity(verdict.witness)}")

    def __contains__(self, w) -> bool:
        return tuple(w) in self.arities

    def sorted_arities(self) -> List[Arity]:
        return sorted(self.arities, key=lambda w: (len(w), [self.dimensions.index(d) for d in w]))


# Tensors

def _index_tuples(spaces: Sequence[EventSpace]) -> Iterable[Index]:
    return itertools.product(*[range(s.size) for s in spaces])


def permute_tensor(tensor: Tensor, order: Sequence[int]) -> Tensor:
    return {tuple(idx[k] for k in order): value for idx, value in tensor.items()}


def project_tensor(tensor: Tensor, source: Arity, target: Arity) -> Tensor:
    """Sum out the dimensions of source missing from target, in target order."""
    positions = [source.index(d) for d in target]
    result: Tensor = {}
    for idx, value in tensor.items():
        key = tuple(idx[p] for p in positions)
        result[key] = result.get(key, Fraction(0)) + value
    return result


@dataclass(frozen=True, eq=False)
class PFF:
    """
    Probability function family: one tensor per arity, validated on creation
    for nonnegativity, unit mass, symmetry and marginal coherence.
    """
    family: ArityFamily
    spaces: Mapping[str, EventSpace]
    tensors: Mapping[Arity, Tensor] = field(default_factory=dict)

    def __post_init__(self):
        for d in self.family.dimensions:
            if d not in self.spaces:
                raise SpaceMismatchError(f"no event space for dimension '{d}'")
        for w in self.family.sorted_arities():
            if w not in self.tensors:
                raise MissingArityError(w)
            self._validate(w)

    def _spaces(self, w: Arity) -> List[EventSpace]:
        return [self.spaces[d] for d in w]

    def tensor(self, w: Arity) -> Tensor:
        w = tuple(w)
        if w not in self.family:
            raise MissingArityError(w)
        return self.tensors[w]

    def _validate(self, w: Arity) -> None:
        tensor = self.tensors[w]
        label = format_arity(w)
        for idx in _index_tuples(self._spaces(w)):
            if tensor.get(idx, Fraction(0)) < 0:
                raise InvalidDistributionError(f"negative weight in tensor {label}")
        total = sum(tensor.values(), Fraction(0))
        if total != 1:
            raise InvalidDistributionError(f"tensor {label} has mass {format_rational(total)}, not 1")
        for order in itertools.permutations(range(len(w))):
            other = tuple(w[k] for k in order)
            if _dense(permute_tensor(tensor, order)) != _dense(self.tensors[other]):
                raise InvalidDistributionError(f"tensors {label} and {format_arity(other)} are not symmetric")
        if len(w) > 1:
            sub = w[1:]
            if _dense(project_tensor(tensor, w, sub)) != _dense(self.tensors[sub]):
                raise InvalidDistributionError(f"tensor {label} does not marginalise to {format_arity(sub)}")

    @property
    def dimensions(self) -> Tuple[str, ...]:
        return self.family.dimensions


def _dense(tensor: Tensor) -> Dict[Index, Fraction]:
    return {idx: value for idx, value in tensor.items() if value != 0}


def pff_from_blocks(spaces: Mapping[str, EventSpace], blocks: Mapping[Arity, Tensor],
                    dims: Optional[Sequence[str]] = None) -> PFF:
    """
    Build a PFF from joint tensors for some arities.

    The family is the closure of the listed arities. Every other arity gets
    the marginal of the listed tensors containing it; those marginals must agree.

    Raises:
        InvalidDistributionError: When listed tensors disagree on a shared marginal
    """
    dims = tuple(dims) if dims is not None else tuple(spaces)
    family = ArityFamily(dims, family_closure(blocks, dims))
    tensors: Dict[Arity, Tensor] = {}
    for w in family.sorted_arities():
        candidates = [_dense(project_tensor(t, u, w)) for u, t in blocks.items() if set(w) <= set(u)]
        if not candidates:
            raise MissingArityError(w)
        if any(c != candidates[0] for c in candidates[1:]):
            raise InvalidDistributionError(f"listed tensors disagree on the marginal {format_arity(w)}")
        tensors[w] = candidates[0]
    logger.debug(f"Built PFF over {dims} with {len(tensors)} arities")
    return PFF(family, dict(spaces), tensors)


def pff_from_joint(spaces: Mapping[str, EventSpace], dims: Sequence[str], joint: Tensor,
                   arities: Optional[Iterable[Arity]] = None) -> PFF:
    """
    Build a PFF by marginalising a joint tensor over all of dims.

    Args:
        arities: Arities to keep (their closure is the family); all by default
    """
    dims = tuple(dims)
    top = {dims: joint}
    if arities is None:
        return pff_from_blocks(spaces, top, dims)
    arities = list(arities)
    blocks = {w: _dense(project_tensor(joint, dims, w)) for w in arities}
    return pff_from_blocks(spaces, blocks, dims)


# Evaluation and the family axioms

def pff_eval(p: PFF, w: Sequence[str], events: Sequence[Event]) -> Fraction:
    """P^w(e1, ..., en): the tensor summed over the atoms below each event."""
    w = tuple(w)
    tensor = p.tensor(w)
    if len(events) != len(w):
        raise SpaceMismatchError(f"arity {format_arity(w)} takes {len(w)} events, got {len(events)}")
    for d, e in zip(w, events):
        if e.space != p.spaces[d]:
            raise SpaceMismatchError(f"event {e} is not in the space of dimension '{d}'")
    total = Fraction(0)
    for idx in itertools.product(*[e.atom_indices() for e in events]):
        total += tensor.get(idx, Fraction(0))
    return total


def _event_tuples(p: PFF, w: Arity) -> Iterable[Tuple[Event, ...]]:
    return itertools.product(*[list(p.spaces[d].events()) for d in w])


def _names(n: int) -> Tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def check_pff_axioms(p: PFF) -> SystemVerdict:
    """
    Audit the family axioms exhaustively over all event tuples of every arity.

    Returns:
        SystemVerdict for system "PFF"; on failure the label names the axiom
        and arity, the witness lists the events
    """
    def fail(label, w, names, events):
        return SystemVerdict("PFF", False, f"{label} {format_arity(w)}", tuple(zip(names, events)))

    for w in p.family.sorted_arities():
        n = len(w)
        if n == 1:
            space = p.spaces[w[0]]
            if pff_eval(p, w, [space.top()]) != 1:
                return fail("unit", w, (), ())
            if pff_eval(p, w, [space.bot()]) != 0:
                return fail("null", w, (), ())
        for events in _event_tuples(p, w):
            value = pff_eval(p, w, events)
            if value != abs(value):
                return fail("nonneg", w, _names(n), events)
            for i, j in itertools.combinations(range(n), 2):
                order = list(range(n))
                order[i], order[j] = j, i
                swapped_w = tuple(w[k] for k in order)
                if pff_eval(p, swapped_w, [events[k] for k in order]) != value:
                    return fail("symmetry", w, _names(n), events)
        if n > 1:
            head_space, rest = p.spaces[w[0]], w[1:]
            for events in _event_tuples(p, rest):
                if pff_eval(p, w, (head_space.top(),) + events) != pff_eval(p, rest, events):
                    return fail("marginal", w, _names(n - 1), events)
                if pff_eval(p, w, (head_space.bot(),) + events) != 0:
                    return fail("slot-null", w, _names(n - 1), events)
        head_events = list(p.spaces[w[0]].events())
        for x, y in itertools.product(head_events, head_events):
            for rest in _event_tuples(p, w[1:]):
                lhs = pff_eval(p, w, (x | y,) + rest)
                rhs = (pff_eval(p, w, (x,) + rest) + pff_eval(p, w, (y,) + rest)
                       - pff_eval(p, w, (x & y,) + rest))
                if lhs != rhs:
                    return fail("slot-additivity", w, ("x", "y") + _names(n - 1), (x, y) + rest)
    return SystemVerdict("PFF", True)


# Multivariate CVs and statistics

@dataclass(frozen=True)
class MultiCV:
    components: Tuple[Tuple[str, CanonCV], ...]

    @property
    def arity(self) -> Arity:
        return tuple(d for d, _ in self.components)


def multi_cv(p: PFF, *components: Tuple[str, CanonCV]) -> MultiCV:
    """
    Label CVs with distinct dimensions.

    Raises:
        MissingArityError: When the label sequence is not in the family
        SpaceMismatchError: When a CV is not over its dimension's space
    """
    result = MultiCV(tuple(components))
    if len(set(result.arity)) != len(result.arity) or result.arity not in p.family:
        raise MissingArityError(result.arity)
    for d, cv in components:
        if cv.space != p.spaces[d]:
            raise SpaceMismatchError(f"CV is not over the space of dimension '{d}'")
    return result


def md_e(p: PFF, x: MultiCV) -> Fraction:
    (d, cv), = x.components
    return sum((t * pff_eval(p, (d,), [e]) for e, t in flat_terms(cv)), Fraction(0))


def md_var(p: PFF, x: MultiCV) -> Fraction:
    (d, cv), = x.components
    mean = md_e(p, x)
    second = sum((t * t * pff_eval(p, (d,), [e]) for e, t in flat_terms(cv)), Fraction(0))
    return second - mean * mean


def md_cov(p: PFF, xy: MultiCV) -> Fraction:
    """COV needs the joint arity of both labels; MissingArityError signals its absence."""
    (a, x), (b, y) = xy.components
    p.tensor((a, b))
    joint = Fraction(0)
    for e, t in flat_terms(x):
        for f, r in flat_terms(y):
            joint += t * r * pff_eval(p, (a, b), [e, f])
    return joint - md_e(p, MultiCV(((a, x),))) * md_e(p, MultiCV(((b, y),)))


def md_corr2(p: PFF, xy: MultiCV) -> Fraction:
    (a, x), (b, y) = xy.components
    cov = md_cov(p, xy)
    return cov * cov * q_inv(md_var(p, MultiCV(((a, x),))) * md_var(p, MultiCV(((b, y),))))


def marginal_pf(p: PFF, d: str) -> WeightPF:
    """The one-dimensional PF P^d as atom weights."""
    tensor = p.tensor((d,))
    space = p.spaces[d]
    return WeightPF(space, tuple(tensor.get((i,), Fraction(0)) for i in range(space.size)))


# Reduction to one dimension

@dataclass(frozen=True)
class ProductSpace:
    """Event space of atom pairs, named f"{left}_{right}", left-major."""
    space: EventSpace
    left: EventSpace
    right: EventSpace

    def pair(self, e: Event, f: Event) -> Event:
        """The rectangle <e, f>."""
        if e.space != self.left or f.space != self.right:
            raise SpaceMismatchError("pairing needs a left event and a right event")
        mask = 0
        for i in e.atom_indices():
            for j in f.atom_indices():
                mask |= 1 << (i * self.right.size + j)
        return Event(self.space, mask)


def product_space(left: EventSpace, right: EventSpace) -> ProductSpace:
    names = [f"{a}_{b}" for a in left.atoms for b in right.atoms]
    return ProductSpace(make_space(names), left, right)


def pair_event(prod: ProductSpace, e: Event, f: Event) -> Event:
    return prod.pair(e, f)


def lift_product(p: PFF, a: str, b: str) -> Tuple[ProductSpace, WeightPF]:
    """
    Identify P^{a,b} with a one-dimensional PF over the pair algebra.

    Raises:
        MissingArityError: When (a, b) is not in the family
    """
    tensor = p.tensor((a, b))
    prod = product_space(p.spaces[a], p.spaces[b])
    weights = tuple(tensor.get((i, j), Fraction(0))
                    for i in range(prod.left.size) for j in range(prod.right.size))
    return prod, WeightPF(prod.space, weights)


PAIRING_LAWS = (
    ("top", lambda P, e1, e2, f1, f2: (P.space.top(), P.pair(P.left.top(), P.right.top()))),
    ("bottom-right", lambda P, e1, e2, f1, f2: (P.space.bot(), P.pair(e1, P.right.bot()))),
    ("bottom-left", lambda P, e1, e2, f1, f2: (P.space.bot(), P.pair(P.left.bot(), f1))),
    ("meet", lambda P, e1, e2, f1, f2: (P.pair(e1, f1) & P.pair(e2, f2), P.pair(e1 & e2, f1 & f2))),
    ("join-right", lambda P, e1, e2, f1, f2: (P.pair(e1, f1 | f2), P.pair(e1, f1) | P.pair(e1, f2))),
    ("join-left", lambda P, e1, e2, f1, f2: (P.pair(e1 | e2, f1), P.pair(e1, f1) | P.pair(e2, f1))),
)


def check_pairing_laws(prod: ProductSpace) -> Optional[Tuple[str, Tuple[Event, ...]]]:
    """First (law, (e1, e2, f1, f2)) at which a pairing law fails, or None."""
    lefts, rights = list(prod.left.events()), list(prod.right.events())
    for name, sides in PAIRING_LAWS:
        for e1, e2, f1, f2 in itertools.product(lefts, lefts, rights, rights):
            lhs, rhs = sides(prod, e1, e2, f1, f2)
            if lhs != rhs:
                return name, (e1, e2, f1, f2)
    return None


def lift_cv(x: CanonCV, slot: int, prod: ProductSpace) -> CanonCV:
    """Cylinder extension of a CV to the pair algebra along slot 0 (left) or 1 (right)."""
    factor = prod.left if slot == 0 else prod.right
    if x.space != factor:
        raise SpaceMismatchError(f"CV is not over the slot {slot} space of the product")
    values = []
    for i in range(prod.left.size):
        for j in range(prod.right.size):
            values.append(x.values[i] if slot == 0 else x.values[j])
    return CanonCV(prod.space, tuple(values))


class ReducedStats(NamedTuple):
    e_x: Fraction
    e_y: Fraction
    var_x: Fraction
    var_y: Fraction
    cov: Fraction
    corr2: Fraction


def reduced_stats(p: PFF, xy: MultiCV) -> ReducedStats:
    """E, VAR, COV and CORR2 of <X^a, Y^b> computed on the product space."""
    (a, x), (b, y) = xy.components
    prod, pf = lift_product(p, a, b)
    lx, ly = lift_cv(x, 0, prod), lift_cv(y, 1, prod)
    return ReducedStats(e_p(lx, pf), e_p(ly, pf), var_p(lx, pf), var_p(ly, pf),
                        cov_p(lx, ly, pf), corr2_p(lx, ly, pf))


# Joint existence

class JointExistence(NamedTuple):
    exists: bool
    witness: Optional[Tensor]
    certificate: Optional[str]


Inequality = Tuple[Dict[int, Fraction], Fraction]  # sum(coef * var) + const >= 0


def _normalize(ineq: Inequality) -> Inequality:
    coefs, const = ineq
    coefs = {k: c for k, c in coefs.items() if c != 0}
    if coefs:
        scale = abs(coefs[min(coefs)])
        coefs = {k: c / scale for k, c in coefs.items()}
        const = const / scale
    return coefs, const


def _key(ineq: Inequality) -> Tuple:
    return tuple(sorted(ineq[0].items())), ineq[1]


def _fourier_motzkin(ineqs: List[Inequality], variables: List[int]
                     ) -> Tuple[Optional[Inequality], List[List[Inequality]]]:
    """
    Eliminate variables in order.

    Returns:
        (contradiction or None, the inequality set before each elimination)
    """
    stages = []
    current = {_key(i): i for i in map(_normalize, ineqs)}
    for var in variables:
        stages.append(list(current.values()))
        lower, upper, rest = [], [], []
        for ineq in current.values():
            c = ineq[0].get(var, Fraction(0))
            (lower if c > 0 else upper if c < 0 else rest).append(ineq)
        combined = list(rest)
        for lo in lower:
            for up in upper:
                a, b = lo[0][var], -up[0][var]
                coefs: Dict[int, Fraction] = {}
                for k in set(lo[0]) | set(up[0]):
                    coefs[k] = b * lo[0].get(k, Fraction(0)) + a * up[0].get(k, Fraction(0))
                combined.append((coefs, b * lo[1] + a * up[1]))
        current = {}
        for ineq in map(_normalize, combined):
            if not ineq[0] and ineq[1] >= 0:
                continue
            current[_key(ineq)] = ineq
        logger.debug(f"Eliminated cell {var}: {len(current)} inequalities remain")
    for ineq in current.values():
        if not ineq[0] and ineq[1] < 0:
            return ineq, stages
    return None, stages


def _back_substitute(stages: List[List[Inequality]], variables: List[int]) -> Dict[int, Fraction]:
    values: Dict[int, Fraction] = {}
    for var, stage in reversed(list(zip(variables, stages))):
        lows, highs = [], []
        for coefs, const in stage:
            c = coefs.get(var, Fraction(0))
            if c == 0:
                continue
            rest = const + sum((coefs[k] * values[k] for k in coefs if k != var), Fraction(0))
            bound = -rest / c
            (lows if c > 0 else highs).append(bound)
        if lows:
            values[var] = max(lows)
        elif highs:
            values[var] = min(highs)
        else:
            values[var] = Fraction(0)
    return values


def joint_exists(p: PFF, dims: Optional[Sequence[str]] = None, max_cells: Optional[int] = None) -> JointExistence:
    """
    Decide whether a joint tensor over all of dims has every tensor of the family as marginal.

    Equalities are solved by exact row reduction; the nonnegativity of the
    remaining cells is decided by Fourier-Motzkin elimination.

    Raises:
        SizeBoundExceededError: When the number of atom tuples exceeds the bound
    """
    dims = tuple(dims) if dims is not None else p.dimensions
    bound = load_settings().joint_max_cells if max_cells is None else max_cells
    spaces = [p.spaces[d] for d in dims]
    cells = list(_index_tuples(spaces))
    if len(cells) > bound:
        raise SizeBoundExceededError(len(cells), bound)
    if len(dims) == 1:
        return JointExistence(True, dict(p.tensor(dims)), None)

    rows, rhs = [], []
    for w in p.family.sorted_arities():
        if any(d not in dims for d in w) or list(w) != sorted(w, key=dims.index):
            continue
        positions = [dims.index(d) for d in w]
        tensor = p.tensor(w)
        for idx in _index_tuples([p.spaces[d] for d in w]):
            rows.append([1 if tuple(c[k] for k in positions) == idx else 0 for c in cells])
            rhs.append(tensor.get(idx, Fraction(0)))
    matrix = sympy.Matrix(rows).row_join(sympy.Matrix([sympy.Rational(r.numerator, r.denominator) for r in rhs]))
    reduced, pivots = matrix.rref()
    n = len(cells)
    if n in pivots:
        return JointExistence(False, None, "marginal equations are inconsistent")

    free = [k for k in range(n) if k not in pivots]
    solved: Dict[int, Inequality] = {}
    for i, j in enumerate(pivots):
        coefs = {k: -Fraction(int(reduced[i, k].p), int(reduced[i, k].q)) for k in free if reduced[i, k] != 0}
        solved[j] = (coefs, Fraction(int(reduced[i, n].p), int(reduced[i, n].q)))
    ineqs: List[Inequality] = [({k: Fraction(1)}, Fraction(0)) for k in free] + list(solved.values())
    contradiction, stages = _fourier_motzkin(ineqs, free)
    if contradiction is not None:
        certificate = f"eliminating {len(free)} free cell(s) yields {format_rational(contradiction[1])} >= 0"
        logger.info(f"No joint over {dims}: {certificate}")
        return JointExistence(False, None, certificate)

    values = _back_substitute(stages, free)
    for j, (coefs, const) in solved.items():
        values[j] = const + sum((c * values[k] for k, c in coefs.items()), Fraction(0))
    witness = {cells[k]: values[k] for k in range(n)}
    return JointExistence(True, witness, None)


def format_tensor(p: PFF, dims: Sequence[str], tensor: Tensor) -> str:
    """(a1,b1)=1/2 style listing of the nonzero cells."""
    pieces = []
    for idx in _index_tuples([p.spaces[d] for d in dims]):
        value = tensor.get(idx, Fraction(0))
        if value != 0:
            names = ",".join(p.spaces[d].atoms[i] for d, i in zip(dims, idx))
            pieces.append(f"({names})={format_rational(value)}")
    return " ".join(pieces)
