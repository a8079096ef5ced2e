"""
Finite support summation over guard tables.

A guard table is a finite sum of entries, each a conjunction of linear
constraints (the guard) times a polynomial coefficient. Guards are kept in
reduced row-echelon form and coefficients are reduced modulo their guard, so
two entries describe the same region exactly when their guards are equal.

The fragment accepted by gt_parse: sums of products of rational constants,
polynomials in the variables and indicators zero(p), where p is a univariate
polynomial, an affine form, or a sum of squares of such forms.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple, Union

import sympy

from meadowcalc.errors import (
    InvalidDistributionError,
    InvalidIndexError,
    ParseError,
    UnboundVariableError,
    UnsupportedPatternError,
    VariableMismatchError,
)
from meadowcalc.meadow import (
    Add,
    Const,
    Inv,
    Mul,
    Neg,
    Sign,
    Term,
    Var,
    format_rational,
    free_vars,
    match_one_of,
    match_zero_of,
    one_of,
    parse_rational,
    q_inv,
    zero_of,
)

logger = logging.getLogger(__name__)


class qinv(sympy.Function):
    """Totalized inverse inside sympy expressions; evaluates on rational arguments."""

    @classmethod
    def eval(cls, arg):
        if arg.is_Rational:
            return sympy.S.Zero if arg == 0 else 1 / arg
        return None


def to_sympy_rational(value: Fraction) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(expr: sympy.Expr) -> Fraction:
    if not expr.is_Rational:
        raise UnsupportedPatternError(str(expr), "value is not a rational constant")
    return Fraction(int(expr.p), int(expr.q))


def format_expr(expr: sympy.Expr) -> str:
    if expr.is_Rational:
        return format_rational(to_fraction(expr))
    return sympy.sstr(expr)


def term_to_sympy(t: Term) -> sympy.Expr:
    """Translate a meadow term to a sympy expression with sign and qinv kept symbolic."""
    if isinstance(t, Const):
        return to_sympy_rational(t.value)
    if isinstance(t, Var):
        return sympy.Symbol(t.name)
    if isinstance(t, Add):
        return term_to_sympy(t.left) + term_to_sympy(t.right)
    if isinstance(t, Mul):
        return term_to_sympy(t.left) * term_to_sympy(t.right)
    if isinstance(t, Neg):
        return -term_to_sympy(t.arg)
    if isinstance(t, Inv):
        return qinv(term_to_sympy(t.arg))
    if isinstance(t, Sign):
        return sympy.sign(term_to_sympy(t.arg))
    raise TypeError(f"not a meadow term: {t!r}")


def _is_polynomial(expr: sympy.Expr) -> bool:
    return not (expr.has(qinv) or expr.has(sympy.sign))


# Guards

@dataclass(frozen=True)
class Point:
    value: Fraction

    def __str__(self) -> str:
        return format_rational(self.value)


@dataclass(frozen=True)
class Link:
    expr: sympy.Expr

    def __str__(self) -> str:
        return format_expr(self.expr)


Binding = Union[Point, Link]


@dataclass(frozen=True)
class Guard:
    """
    Solved form of a conjunction of linear equations.

    Each row binds a pivot variable to an affine expression over non-pivot
    variables, so substituting the rows once eliminates every pivot.
    """
    rows: Tuple[Tuple[str, sympy.Expr], ...] = ()

    @property
    def constraints(self) -> Dict[str, Binding]:
        result: Dict[str, Binding] = {}
        for name, expr in self.rows:
            result[name] = Point(to_fraction(expr)) if expr.is_Rational else Link(expr)
        return result

    @property
    def bound(self) -> Set[str]:
        return {name for name, _ in self.rows}

    def substitution(self) -> Dict[sympy.Symbol, sympy.Expr]:
        return {sympy.Symbol(name): expr for name, expr in self.rows}

    def equations(self) -> List[sympy.Expr]:
        return [sympy.Symbol(name) - expr for name, expr in self.rows]

    def holds(self, point: Mapping[sympy.Symbol, sympy.Expr]) -> bool:
        return all(point[sympy.Symbol(name)] == expr.subs(point) for name, expr in self.rows)

    def sort_key(self) -> Tuple:
        return (len(self.rows), tuple((name, sympy.sstr(expr)) for name, expr in self.rows))

    def __str__(self) -> str:
        return "[" + ", ".join(f"{name}={format_expr(expr)}" for name, expr in self.rows) + "]"


def solve_guard(equations: Sequence[sympy.Expr], columns: Sequence[str]) -> Optional[Guard]:
    """
    Row-reduce linear equations (each meaning expr = 0) over the given columns.

    Returns:
        Guard in solved form, or None when the system has no solution
    """
    equations = [sympy.expand(eq) for eq in equations]
    equations = [eq for eq in equations if eq != 0]
    if not equations:
        return Guard()
    if any(eq.is_Rational for eq in equations):
        return None
    symbols = [sympy.Symbol(c) for c in columns]
    matrix, rhs = sympy.linear_eq_to_matrix(equations, symbols)
    reduced, pivots = matrix.row_join(rhs).rref()
    if len(symbols) in pivots:
        return None
    rows = []
    for i, j in enumerate(pivots):
        expr = reduced[i, len(symbols)]
        for k in range(len(symbols)):
            if k not in pivots:
                expr -= reduced[i, k] * symbols[k]
        rows.append((columns[j], sympy.expand(expr)))
    return Guard(tuple(rows))


# Guard tables

Entry = Tuple[Guard, sympy.Expr]


@dataclass(frozen=True)
class GuardTable:
    variables: Tuple[str, ...]
    entries: Tuple[Entry, ...] = ()

    def is_empty(self) -> bool:
        return not self.entries

    def __str__(self) -> str:
        return format_table(self)


def canonical_table(variables: Sequence[str], raw: Iterable[Entry]) -> GuardTable:
    """
    Reduce coefficients modulo their guards, merge identical guards and drop zeros.

    Raises:
        UnsupportedPatternError: When a surviving coefficient is not a polynomial
    """
    merged: Dict[Guard, sympy.Expr] = {}
    for guard, coeff in raw:
        reduced = sympy.expand(sympy.sympify(coeff).subs(guard.substitution()))
        if not _is_polynomial(reduced):
            raise UnsupportedPatternError(sympy.sstr(reduced), "coefficient outside the polynomial fragment")
        merged[guard] = merged.get(guard, sympy.S.Zero) + reduced
    entries = []
    for guard, coeff in merged.items():
        coeff = sympy.expand(coeff)
        if coeff != 0:
            entries.append((guard, coeff))
    entries.sort(key=lambda entry: entry[0].sort_key())
    return GuardTable(tuple(variables), tuple(entries))


def gt_const(value: Union[Fraction, sympy.Expr], variables: Sequence[str] = ()) -> GuardTable:
    expr = to_sympy_rational(value) if isinstance(value, (int, Fraction)) else value
    return canonical_table(variables, [(Guard(), expr)])


def gt_from_points(variables: Sequence[str], points: Mapping[Tuple[Fraction, ...], Fraction]) -> GuardTable:
    """Table with one fully pointed entry per listed point."""
    raw = []
    for point, value in points.items():
        if len(point) != len(variables):
            raise VariableMismatchError(f"point {point} does not match variables {tuple(variables)}")
        rows = tuple((v, to_sympy_rational(c)) for v, c in zip(variables, point))
        raw.append((Guard(rows), to_sympy_rational(value)))
    return canonical_table(variables, raw)


# Parsing the fragment

def _summands(t: Term) -> List[Term]:
    if isinstance(t, Add):
        return _summands(t.left) + _summands(t.right)
    return [t]


def _indicator_alternatives(p: Term, variables: Sequence[str]) -> List[List[sympy.Expr]]:
    """
    Constraint alternatives for zero(p); each alternative is a list of
    linear equations, an empty outer list means the indicator is identically 0.
    """
    while isinstance(p, Inv):
        p = p.arg  # 0_{t^-1} = 0_t
    parts = _summands(p)
    if all(isinstance(s, Mul) and s.left == s.right for s in parts) and (
            len(parts) > 1 or len(free_vars(parts[0].left)) > 1):
        alternatives: List[List[sympy.Expr]] = [[]]
        for s in parts:
            alternatives = [a + b for a in alternatives for b in _indicator_alternatives(s.left, variables)]
        return alternatives

    poly = sympy.expand(term_to_sympy(p))
    if not _is_polynomial(poly):
        raise UnsupportedPatternError(str(p))
    if poly == 0:
        return [[]]
    symbols = sorted(poly.free_symbols, key=lambda s: variables.index(s.name))
    if not symbols:
        return []
    if len(symbols) == 1:
        v = symbols[0]
        univariate = sympy.Poly(poly, v)
        if univariate.degree() == 1:
            return [[poly]]
        roots = sorted(r for r in univariate.ground_roots())
        logger.debug(f"zero({p}) has rational roots {roots}")
        return [[v - r] for r in roots]
    if sympy.Poly(poly, *symbols).total_degree() == 1:
        return [[poly]]
    raise UnsupportedPatternError(str(p))


def _is_indicator(t: Term) -> bool:
    return match_zero_of(t) is not None or match_one_of(t) is not None


def _expand_products(t: Term) -> List[Tuple[Tuple[Term, ...], sympy.Expr]]:
    """
    Distribute the term into (indicator arguments, coefficient) products.

    Nested indicators are flattened first: 0_t^-1 = 0_t, 1_t^-1 = 1_t,
    0(0_t) = 1_t and 0(1_t) = 0_t.
    """
    if isinstance(t, Inv) and _is_indicator(t.arg):
        return _expand_products(t.arg)
    p = match_zero_of(t)
    if p is not None:
        while isinstance(p, Inv):
            p = p.arg
        q = match_zero_of(p)
        if q is not None:
            return _expand_products(one_of(q))
        q = match_one_of(p)
        if q is not None:
            return _expand_products(zero_of(q))
        return [((p,), sympy.S.One)]
    p = match_one_of(t)
    if p is not None:
        return [((), sympy.S.One)] + [(inds, -coeff) for inds, coeff in _expand_products(zero_of(p))]
    if isinstance(t, Add):
        return _expand_products(t.left) + _expand_products(t.right)
    if isinstance(t, Neg):
        return [(inds, -coeff) for inds, coeff in _expand_products(t.arg)]
    if isinstance(t, Mul):
        left = _expand_products(t.left)
        right = _expand_products(t.right)
        return [(li + ri, lc * rc) for li, lc in left for ri, rc in right]
    return [((), term_to_sympy(t))]


def gt_parse(term: Term, variables: Sequence[str]) -> GuardTable:
    """
    Turn a meadow term with zero(.) indicators into a canonical guard table.

    Args:
        term: Term in the supported fragment
        variables: Ordered variable list; affine links bind the earliest variable

    Returns:
        GuardTable: Canonical table

    Raises:
        UnsupportedPatternError: For indicators or coefficients outside the fragment
        UnboundVariableError: When the term mentions a variable not listed
    """
    variables = tuple(variables)
    for name in sorted(free_vars(term)):
        if name not in variables:
            raise UnboundVariableError(name)
    raw: List[Entry] = []
    for indicators, coeff in _expand_products(term):
        choices: List[List[sympy.Expr]] = [[]]
        for p in indicators:
            options = _indicator_alternatives(p, variables)
            choices = [a + b for a in choices for b in options]
            if not choices:
                break
        for equations in choices:
            guard = solve_guard(equations, variables)
            if guard is not None:
                raw.append((guard, coeff))
    table = canonical_table(variables, raw)
    logger.debug(f"Parsed {term} into {len(table.entries)} entries")
    return table


# Pointwise algebra

def _require_same_variables(f: GuardTable, g: GuardTable) -> None:
    if f.variables != g.variables:
        raise VariableMismatchError(f"variables {f.variables} and {g.variables} differ")


def gt_eval(f: GuardTable, point: Mapping[str, Fraction]) -> Fraction:
    """Value of the table at a point binding every variable."""
    for name in f.variables:
        if name not in point:
            raise UnboundVariableError(name)
    env = {sympy.Symbol(name): to_sympy_rational(point[name]) for name in f.variables}
    total = sympy.S.Zero
    for guard, coeff in f.entries:
        if guard.holds(env):
            total += coeff.subs(env)
    return to_fraction(sympy.expand(total))


def gt_add(f: GuardTable, g: GuardTable) -> GuardTable:
    _require_same_variables(f, g)
    return canonical_table(f.variables, list(f.entries) + list(g.entries))


def gt_scale(f: GuardTable, c: Union[Fraction, int]) -> GuardTable:
    factor = to_sympy_rational(c)
    return canonical_table(f.variables, [(guard, coeff * factor) for guard, coeff in f.entries])


def gt_mul(f: GuardTable, g: GuardTable) -> GuardTable:
    """Product; guards conjoin and unsatisfiable conjunctions vanish."""
    _require_same_variables(f, g)
    raw = []
    for fg, fc in f.entries:
        for gg, gc in g.entries:
            guard = solve_guard(fg.equations() + gg.equations(), f.variables)
            if guard is not None:
                raw.append((guard, fc * gc))
    return canonical_table(f.variables, raw)


def gt_equal(f: GuardTable, g: GuardTable) -> bool:
    """Semantic equality: the difference has the canonical zero table."""
    return gt_add(f, gt_scale(g, -1)).is_empty()


# Summation

class _OtherValue:
    """Region marker for parameter values outside every listed constant."""

    def __repr__(self) -> str:
        return "OTHER"


OTHER = _OtherValue()


@dataclass(frozen=True)
class _Resolved:
    points: Dict[str, Fraction]
    rows: Tuple[Tuple[str, sympy.Expr], ...]
    coeff: sympy.Expr


def _resolve(f: GuardTable, summed: Sequence[str], params: Sequence[str]) -> List[_Resolved]:
    columns = list(summed) + list(params)
    resolved = []
    for guard, coeff in f.entries:
        solved = solve_guard(guard.equations(), columns)
        points: Dict[str, Fraction] = {}
        rows = []
        for name, expr in solved.rows:
            if name in params:
                if not expr.is_Rational:
                    raise UnsupportedPatternError(f"{name} = {sympy.sstr(expr)}", "relation between parameters")
                points[name] = to_fraction(expr)
            else:
                rows.append((name, expr))
        reduced = sympy.expand(coeff.subs(solved.substitution()))
        resolved.append(_Resolved(points, tuple(rows), reduced))
    return resolved


def _merge_region(resolved: Sequence[_Resolved], region: Mapping[str, object]) -> Dict[Tuple, sympy.Expr]:
    subs = {sympy.Symbol(p): to_sympy_rational(c) for p, c in region.items() if c is not OTHER}
    merged: Dict[Tuple, sympy.Expr] = {}
    for entry in resolved:
        if any(region[p] is OTHER or region[p] != c for p, c in entry.points.items()):
            continue
        key = tuple((name, sympy.expand(expr.subs(subs))) for name, expr in entry.rows)
        merged[key] = merged.get(key, sympy.S.Zero) + entry.coeff.subs(subs)
    return {key: sympy.expand(coeff) for key, coeff in merged.items() if sympy.expand(coeff) != 0}


def _univariate_roots(expr: sympy.Expr, params: Sequence[str]) -> List[Tuple[str, Fraction]]:
    """Rational roots of a factor that mentions a single parameter."""
    symbols = [s for s in expr.free_symbols if s.name in params]
    if not symbols:
        return []
    if len(symbols) > 1:
        raise UnsupportedPatternError(sympy.sstr(expr), "condition on several parameters")
    p = symbols[0]
    return [(p.name, to_fraction(r)) for r in sympy.Poly(expr, p).ground_roots()]


def _special_points(merged: Dict[Tuple, sympy.Expr], summed: Sequence[str],
                    params: Sequence[str]) -> List[Tuple[str, Fraction]]:
    """
    Parameter values at which an infinite-support group of the region may
    vanish or collide with another group.
    """
    found: List[Tuple[str, Fraction]] = []
    free_groups = [key for key in merged if len(key) < len(summed)]
    for key in free_groups:
        bound = {name for name, _ in key}
        free_symbols = [sympy.Symbol(s) for s in summed if s not in bound]
        coeffs = sympy.Poly(merged[key], *free_symbols).coeffs()
        content = sympy.gcd_list(coeffs) if len(coeffs) > 1 else coeffs[0]
        for factor, _ in sympy.factor_list(content)[1]:
            found.extend(_univariate_roots(factor, params))
    for a, b in itertools.combinations(free_groups, 2):
        if [n for n, _ in a] != [n for n, _ in b]:
            continue
        diffs = [sympy.expand(ea - eb) for (_, ea), (_, eb) in zip(a, b)]
        diffs = [d for d in diffs if d != 0]
        if not diffs or any(s.name in summed for d in diffs for s in d.free_symbols):
            continue
        found.extend(_univariate_roots(diffs[0], params))
    return found


def _region_value(merged: Dict[Tuple, sympy.Expr], summed: Sequence[str]) -> sympy.Expr:
    total = sympy.S.Zero
    for key, coeff in merged.items():
        if len(key) < len(summed):
            return sympy.S.Zero
        total += coeff
    return sympy.expand(total)


def fss(f: GuardTable, summed: Sequence[str]) -> GuardTable:
    """
    Finite support summation of f over the summed variables.

    The parameter space is split into regions: each listed constant of a
    parameter and one region for every other value. A region whose summand
    has infinitely many nonzero points contributes 0.

    Args:
        f: Table to sum
        summed: Variables bound by the summation

    Returns:
        GuardTable: Canonical table over the remaining variables
    """
    for name in summed:
        if name not in f.variables:
            raise VariableMismatchError(f"'{name}' is not a variable of the table")
    summed = [v for v in f.variables if v in set(summed)]
    params = [v for v in f.variables if v not in summed]
    resolved = _resolve(f, summed, params)

    constants: Dict[str, Set[Fraction]] = {p: set() for p in params}
    for entry in resolved:
        for p, c in entry.points.items():
            constants[p].add(c)

    while True:
        grown = False
        for region in _regions(params, constants):
            merged = _merge_region(resolved, region)
            for p, c in _special_points(merged, summed, params):
                if region[p] is OTHER and c not in constants[p]:
                    constants[p].add(c)
                    grown = True
        if not grown:
            break

    raw: List[Entry] = []
    for region in _regions(params, constants):
        value = _region_value(_merge_region(resolved, region), summed)
        logger.debug(f"Region {region}: {value}")
        if value == 0:
            continue
        factors = []
        for p in params:
            if region[p] is OTHER:
                factors.append([(None, 1)] + [((p, c), -1) for c in sorted(constants[p])])
            else:
                factors.append([((p, region[p]), 1)])
        for combo in itertools.product(*factors):
            equations = [sympy.Symbol(bind[0]) - to_sympy_rational(bind[1]) for bind, _ in combo if bind is not None]
            sign = 1
            for _, s in combo:
                sign *= s
            raw.append((solve_guard(equations, params), value * sign))
    return canonical_table(params, raw)


def _regions(params: Sequence[str], constants: Mapping[str, Set[Fraction]]) -> Iterable[Dict[str, object]]:
    choices = [sorted(constants[p]) + [OTHER] for p in params]
    for combo in itertools.product(*choices):
        yield dict(zip(params, combo))


def gt_value(f: GuardTable) -> Fraction:
    """The constant value of a table over no variables."""
    if f.variables:
        raise VariableMismatchError(f"table still has variables {f.variables}")
    return gt_eval(f, {})


def fss_total(f: GuardTable) -> Fraction:
    """Sum over every variable at once."""
    return gt_value(fss(f, f.variables))


def support_flag(f: GuardTable) -> Fraction:
    """1 when the canonical table is nonempty, else 0."""
    return Fraction(0) if f.is_empty() else Fraction(1)


# PMFs

class PmfView:
    """A finitely supported PMF: every entry is a point with a positive constant value."""

    def __init__(self, table: GuardTable):
        self.table = table

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.table.variables

    def points(self) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
        result = []
        for guard, coeff in self.table.entries:
            constraints = guard.constraints
            point = tuple(constraints[v].value for v in self.variables)
            result.append((point, to_fraction(coeff)))
        return sorted(result)

    def mass_at(self, point: Sequence[Fraction]) -> Fraction:
        return dict(self.points()).get(tuple(Fraction(c) for c in point), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, PmfView) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"PmfView({format_pmf(self)})"

    @classmethod
    def from_points(cls, variables: Sequence[str], points: Mapping[Tuple[Fraction, ...], Fraction]) -> "PmfView":
        check = is_pmf(gt_from_points(variables, points))
        if not check.ok:
            raise InvalidDistributionError(f"not a PMF: {check.reason} ({check.witness})")
        return check.view


class PmfCheck(NamedTuple):
    ok: bool
    reason: Optional[str]
    view: Optional[PmfView]
    witness: Optional[str] = None


MASS_NOT_ONE = "mass != 1"
NEGATIVE_VALUE = "negative value"
INFINITE_SUPPORT = "infinite support"
NON_CONSTANT = "non-constant coefficient"


def is_pmf(f: GuardTable, variables: Optional[Sequence[str]] = None) -> PmfCheck:
    """
    Decide whether a table represents a PMF with finite support.

    Args:
        f: Candidate table
        variables: The PMF's variables; defaults to all of f's variables

    Returns:
        PmfCheck: ok flag, the view on success; on failure a reason code and
            a witness (the offending point, the unbounded variable, or the mass)
    """
    variables = tuple(variables) if variables is not None else f.variables
    for guard, coeff in f.entries:
        constraints = guard.constraints
        unbounded = [v for v in variables if not isinstance(constraints.get(v), Point)]
        if unbounded:
            return PmfCheck(False, INFINITE_SUPPORT, None, unbounded[0])
        point = ", ".join(f"{v}={format_rational(constraints[v].value)}" for v in variables)
        if not coeff.is_Rational:
            return PmfCheck(False, NON_CONSTANT, None, point)
        if coeff < 0:
            return PmfCheck(False, NEGATIVE_VALUE, None, point)
    mass = sum((to_fraction(coeff) for _, coeff in f.entries), Fraction(0))
    if mass != 1:
        return PmfCheck(False, MASS_NOT_ONE, None, f"mass={format_rational(mass)}")
    return PmfCheck(True, None, PmfView(f))


def _kept_indices(n: int, kept: Sequence[int]) -> List[int]:
    kept = list(kept)
    if not kept:
        raise InvalidIndexError("at least one index must be kept")
    if any(i < 1 or i > n for i in kept):
        raise InvalidIndexError(f"indices must lie in 1..{n}, got {kept}")
    if any(a >= b for a, b in zip(kept, kept[1:])):
        raise InvalidIndexError(f"indices must be strictly increasing, got {kept}")
    return kept


def marginalise(g: PmfView, kept: Sequence[int]) -> PmfView:
    """
    Sum out every variable whose 1-based position is not kept.

    Raises:
        InvalidIndexError: For empty, out-of-range or unordered indices
    """
    kept = _kept_indices(len(g.variables), kept)
    dropped = [v for i, v in enumerate(g.variables, start=1) if i not in kept]
    return PmfView(fss(g.table, dropped))


def _poly_table(expr: sympy.Expr, variables: Sequence[str]) -> GuardTable:
    return canonical_table(variables, [(Guard(), expr)])


def _expect(g: PmfView, expr: sympy.Expr) -> Fraction:
    return fss_total(gt_mul(g.table, _poly_table(expr, g.variables)))


def _require_arity(g: PmfView, n: int) -> None:
    if len(g.variables) != n:
        raise VariableMismatchError(f"expected a PMF over {n} variable(s), got {g.variables}")


def e_pmf(f: PmfView) -> Fraction:
    _require_arity(f, 1)
    return _expect(f, sympy.Symbol(f.variables[0]))


def var_pmf(f: PmfView) -> Fraction:
    _require_arity(f, 1)
    x = sympy.Symbol(f.variables[0])
    mean = e_pmf(f)
    return _expect(f, x * x) - mean * mean


def cov_pmf(g: PmfView) -> Fraction:
    _require_arity(g, 2)
    x, y = (sympy.Symbol(v) for v in g.variables)
    return _expect(g, x * y) - e_pmf(marginalise(g, [1])) * e_pmf(marginalise(g, [2]))


def corr2_pmf(g: PmfView) -> Fraction:
    """Squared correlation with totalized division: a degenerate marginal gives 0."""
    _require_arity(g, 2)
    cov = cov_pmf(g)
    return cov * cov * q_inv(var_pmf(marginalise(g, [1])) * var_pmf(marginalise(g, [2])))


def is_independent(g: PmfView) -> bool:
    """G(x, y) = G1(x) * G2(y) on the grid of support coordinates."""
    _require_arity(g, 2)
    first = dict((p[0], m) for p, m in marginalise(g, [1]).points())
    second = dict((p[0], m) for p, m in marginalise(g, [2]).points())
    joint = dict(g.points())
    for x in first:
        for y in second:
            if joint.get((x, y), Fraction(0)) != first[x] * second[y]:
                logger.debug(f"Dependence witnessed at ({x}, {y})")
                return False
    return True


# Text formats

def format_table(f: GuardTable) -> str:
    if f.is_empty():
        return "0"
    if len(f.entries) == 1 and not f.entries[0][0].rows:
        return format_expr(f.entries[0][1])
    return " + ".join(f"{guard} -> {format_expr(coeff)}" for guard, coeff in f.entries)


def format_pmf(view: PmfView) -> str:
    pieces = []
    for point, mass in view.points():
        pieces.append("(" + ",".join(format_rational(c) for c in point) + ") -> " + format_rational(mass))
    return " ".join(pieces)


def parse_table_literal(text: str, variables: Sequence[str]) -> GuardTable:
    """
    Read lines of the form "(1,2) -> 1/3" into a fully pointed table.

    Raises:
        ParseError: On a malformed line
    """
    points: Dict[Tuple[Fraction, ...], Fraction] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        left, arrow, right = line.partition("->")
        left = left.strip()
        if not arrow or not (left.startswith("(") and left.endswith(")")):
            raise ParseError(f"expected '(c1,...,cn) -> value', got '{line}'")
        point = tuple(parse_rational(c) for c in left[1:-1].split(","))
        points[point] = points.get(point, Fraction(0)) + parse_rational(right)
    return gt_from_points(variables, points)
