"""
Line-oriented command language.

Each script line is one command. Tokens are produced by a regular expression
scanner and consumed by a recursive descent parser with one-token lookahead
and local backtracking where an event guard and a name can start alike.

Grammar overview (one production per command word):

    space S atoms a b c
    pf P on S : a=1/2 b=1/2
    table T on S : T=1 a|b=1/2
    cv X on S = (a|c) :-> v(3) + b :-> v(1/2)
    rv R = rvof X
    objects c1 c2
    config C on S = (e :-> c1 ~> v(10)) || (!e :-> c2 ~> v(0))
    dims a b [atoms 1 2]
    family W = (a) (b) (a b) (b a)
    pff P : (a b) { (a1,b1)=1/2 (a2,b2)=1/2 }
    fn G in x,y = zero(x)*zero(y)
    pmf F in x = zero(x-1)*1/2 + zero(x-2)*1/2
    extract F = pmf X P | extract G = joint X Y P
    marginal H = G keep 1
    check PF,WPF T | check pff P | check family W | check pmf G
    search [satisfy PF] violate WPF atoms 2 grid 0,1 [as T]
    elicit 10 0 2 4
    threshold 10 0 2
    fss sum x,y of <term>
    eval OP[arg, ...]
    reduce P X@a Y@b
    jointexists P
    laws meadow | laws events [S] | laws cv S [n] | laws config S [n]
    show NAME
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from meadowcalc.condval import CAdd, CInv, CMul, CNeg, CVExpr, Guarded, VEmbed, cv_cond3, cv_square, cv_sub
from meadowcalc.configspace import CGuard, ConfigExpr, Empty, Obj, Par, Yield
from meadowcalc.errors import ParseError, UnknownCommandError
from meadowcalc.events import And, AtomRef, Bot, EventExpr, Not, Or, Top
from meadowcalc.meadow import (
    Const,
    Inv,
    Neg,
    Sign,
    Term,
    Var,
    abs_,
    cond3,
    div,
    leq_val,
    lt_val,
    one_of,
    square,
    sub,
    zero_of,
)

logger = logging.getLogger(__name__)


# Tokens

NUM, IDENT, SYM, EOF = "number", "identifier", "symbol", "end"

_TOKEN_RE = re.compile(r"""
    (?P<space>\s+)
  | (?P<comment>\#.*)
  | (?P<number>\d+)
  | (?P<identifier>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<symbol>:->|~>|\|\||\^-1|\^2|[-+*/&|!@:=,()\[\]{}])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int

    @property
    def end(self) -> int:
        return self.column + len(self.text)

    def __str__(self) -> str:
        return self.text if self.kind != EOF else "end of line"


def tokenize(text: str) -> List[Token]:
    """
    Split a line into tokens with 1-based columns.

    Raises:
        ParseError: At the first character no token starts with
    """
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character '{text[pos]}'", pos + 1)
        kind = match.lastgroup
        if kind == "comment":
            break
        if kind != "space":
            tokens.append(Token(kind, match.group(), pos + 1))
        pos = match.end()
    tokens.append(Token(EOF, "", len(text) + 1))
    return tokens


# Parse results that refer to session names

@dataclass(frozen=True)
class CVRef(CVExpr):
    """A bound conditional value used inside a CV expression."""
    name: str

    def __str__(self) -> str:
        return self.name


def resolve_cv_refs(x: CVExpr, lookup: Callable[[str], CVExpr]) -> CVExpr:
    """Replace every CVRef by the expression lookup returns for it."""
    if isinstance(x, CVRef):
        return lookup(x.name)
    if isinstance(x, Guarded):
        return Guarded(x.event, resolve_cv_refs(x.body, lookup))
    if isinstance(x, CAdd):
        return CAdd(resolve_cv_refs(x.left, lookup), resolve_cv_refs(x.right, lookup))
    if isinstance(x, CMul):
        return CMul(resolve_cv_refs(x.left, lookup), resolve_cv_refs(x.right, lookup))
    if isinstance(x, CNeg):
        return CNeg(resolve_cv_refs(x.arg, lookup))
    if isinstance(x, CInv):
        return CInv(resolve_cv_refs(x.arg, lookup))
    return x


def resolve_config_refs(a: ConfigExpr, lookup: Callable[[str], CVExpr]) -> ConfigExpr:
    if isinstance(a, Par):
        return Par(resolve_config_refs(a.left, lookup), resolve_config_refs(a.right, lookup))
    if isinstance(a, CGuard):
        return CGuard(a.event, resolve_config_refs(a.body, lookup))
    if isinstance(a, Yield):
        return Yield(resolve_config_refs(a.body, lookup), resolve_cv_refs(a.cv, lookup))
    return a


@dataclass(frozen=True)
class SumOf:
    """Finite support summation over variables of a term or of a nested sum."""
    variables: Tuple[str, ...]
    body: Union[Term, "SumOf"]


@dataclass(frozen=True)
class Labelled:
    """X@a: a CV name labelled with a dimension."""
    name: str
    dimension: str


# Commands

class Command:
    """Base class of parsed commands."""


@dataclass(frozen=True)
class DeclareSpace(Command):
    name: str
    atoms: Tuple[str, ...]


@dataclass(frozen=True)
class DeclarePF(Command):
    name: str
    space: str
    weights: Tuple[Tuple[str, Fraction], ...]


@dataclass(frozen=True)
class DeclareTable(Command):
    name: str
    space: str
    entries: Tuple[Tuple[EventExpr, Fraction], ...]


@dataclass(frozen=True)
class DeclareCV(Command):
    name: str
    space: str
    expr: CVExpr


@dataclass(frozen=True)
class DeclareRV(Command):
    name: str
    cv: str


@dataclass(frozen=True)
class DeclareObjects(Command):
    names: Tuple[str, ...]


@dataclass(frozen=True)
class DeclareConfig(Command):
    name: str
    space: str
    expr: ConfigExpr


@dataclass(frozen=True)
class DeclareDims(Command):
    dims: Tuple[str, ...]
    atoms: Tuple[str, ...]


@dataclass(frozen=True)
class DeclareFamily(Command):
    name: str
    arities: Tuple[Tuple[str, ...], ...]


@dataclass(frozen=True)
class DeclarePFF(Command):
    name: str
    blocks: Tuple[Tuple[Tuple[str, ...], Tuple[Tuple[Tuple[str, ...], Fraction], ...]], ...]


@dataclass(frozen=True)
class DeclareFunction(Command):
    """fn (a guard table) or pmf (a checked PMF view)."""
    kind: str
    name: str
    variables: Tuple[str, ...]
    term: Term


@dataclass(frozen=True)
class Extract(Command):
    name: str
    what: str
    cvs: Tuple[str, ...]
    pf: str


@dataclass(frozen=True)
class Marginal(Command):
    name: str
    source: str
    kept: Tuple[int, ...]


@dataclass(frozen=True)
class Check(Command):
    what: str
    target: str
    systems: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Search(Command):
    satisfy: Tuple[str, ...]
    violate: Tuple[str, ...]
    atoms: int
    grid: Tuple[Fraction, ...]
    bind: Optional[str] = None


@dataclass(frozen=True)
class Elicit(Command):
    utilities: Tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class Threshold(Command):
    high: Fraction
    low: Fraction
    cost: Fraction


@dataclass(frozen=True)
class FssCommand(Command):
    expr: SumOf
    text: str


@dataclass(frozen=True)
class Eval(Command):
    op: str
    args: Tuple[object, ...]
    text: str


@dataclass(frozen=True)
class Reduce(Command):
    pff: str
    x: Labelled
    y: Labelled


@dataclass(frozen=True)
class JointExists(Command):
    pff: str


@dataclass(frozen=True)
class Laws(Command):
    catalogue: str
    space: Optional[str] = None
    samples: Optional[int] = None


@dataclass(frozen=True)
class Show(Command):
    name: str


# eval operators and their argument kinds
EVAL_SIGNATURES: Dict[str, Tuple[str, ...]] = {
    "E": ("name", "cv"),
    "EFLAT": ("name", "cv"),
    "VAR": ("name", "cv"),
    "COV": ("name", "cv", "cv"),
    "CORR2": ("name", "cv", "cv"),
    "PR": ("name", "event"),
    "P0": ("name", "event", "event"),
    "P1": ("name", "event", "event"),
    "PS": ("name", "event", "event"),
    "EU": ("name", "name"),
    "ERV": ("name", "name"),
    "VARRV": ("name", "name"),
    "COVRV": ("name", "name", "name"),
    "CORR2RV": ("name", "name", "name"),
    "EPMF": ("name",),
    "VARPMF": ("name",),
    "COVPMF": ("name",),
    "CORR2PMF": ("name",),
    "IND": ("name",),
    "INDCV": ("name", "cv", "cv"),
    "MDE": ("name", "labelled"),
    "MDVAR": ("name", "labelled"),
    "MDCOV": ("name", "labelled", "labelled"),
    "MDCORR2": ("name", "labelled", "labelled"),
    "V": ("term",),
}

_TERM_FUNCTIONS: Dict[str, Tuple[int, Callable[..., Term]]] = {
    "s": (1, Sign),
    "abs": (1, abs_),
    "one": (1, one_of),
    "zero": (1, zero_of),
    "inv": (1, Inv),
    "cond": (3, cond3),
    "lt": (2, lt_val),
    "leq": (2, leq_val),
}


class Parser:
    """Recursive descent over the tokens of one line."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # Token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos = min(self.pos + 1, len(self.tokens) - 1)
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in (SYM, IDENT) and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.column)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected '{text}', found '{self.peek()}'")
        return self.next()

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != IDENT:
            raise self.error(f"expected a name, found '{tok}'")
        return self.next().text

    def idents(self, stop: Sequence[str] = ()) -> List[str]:
        names = []
        while self.peek().kind == IDENT and self.peek().text not in stop:
            names.append(self.next().text)
        return names

    def ident_list(self) -> List[str]:
        names = [self.ident()]
        while self.accept(","):
            names.append(self.ident())
        return names

    def integer(self) -> int:
        tok = self.peek()
        if tok.kind != NUM:
            raise self.error(f"expected a number, found '{tok}'")
        return int(self.next().text)

    def rational(self) -> Fraction:
        negative = self.accept("-")
        value = Fraction(self.integer())
        if self.accept("/"):
            start = self.peek()
            denominator = self.integer()
            if denominator == 0:
                raise self.error("zero denominator", start)
            value /= denominator
        return -value if negative else value

    def end(self) -> None:
        if self.peek().kind != EOF:
            raise self.error(f"unexpected '{self.peek()}'")

    def attempt(self, production: Callable[[], object]) -> Optional[object]:
        """Run a production; on a syntax error rewind and return None."""
        saved = self.pos
        try:
            return production()
        except ParseError:
            self.pos = saved
            return None

    def source(self, start: Token, stop: Token) -> str:
        return self.text[start.column - 1:stop.end - 1]

    # Events: | binds looser than &, ! binds tightest

    def event(self) -> EventExpr:
        left = self.event_and()
        while self.at("|"):
            self.next()
            left = Or(left, self.event_and())
        return left

    def event_and(self) -> EventExpr:
        left = self.event_not()
        while self.at("&"):
            self.next()
            left = And(left, self.event_not())
        return left

    def event_not(self) -> EventExpr:
        if self.accept("!"):
            return Not(self.event_not())
        if self.accept("("):
            inner = self.event()
            self.expect(")")
            return inner
        name = self.ident()
        if name == "T":
            return Top()
        if name == "F":
            return Bot()
        return AtomRef(name)

    def guard_prefix(self) -> Optional[EventExpr]:
        """An event followed by ':->', or None with the position unchanged."""
        def production():
            e = self.event()
            self.expect(":->")
            return e
        return self.attempt(production)

    # Meadow terms

    def term(self) -> Term:
        left = self.term_product()
        while self.at("+") or self.at("-"):
            op = self.next().text
            right = self.term_product()
            left = left + right if op == "+" else sub(left, right)
        return left

    def term_product(self) -> Term:
        left = self.term_unary()
        while self.at("*") or self.at("/"):
            op = self.next().text
            right = self.term_unary()
            left = left * right if op == "*" else div(left, right)
        return left

    def term_unary(self) -> Term:
        if self.accept("-"):
            return Neg(self.term_unary())
        return self.term_power()

    def term_power(self) -> Term:
        base = self.term_atom()
        while self.at("^-1") or self.at("^2"):
            base = Inv(base) if self.next().text == "^-1" else square(base)
        return base

    def term_atom(self) -> Term:
        tok = self.peek()
        if tok.kind == NUM:
            self.next()
            follower = self.peek()
            adjacent = follower.column == tok.end and (follower.kind == IDENT or follower.text == "(")
            if tok.text in ("0", "1") and adjacent:
                indicator = zero_of if tok.text == "0" else one_of
                return indicator(self.term_atom())
            value = Fraction(int(tok.text))
            if self.at("/") and self.peek(1).kind == NUM and int(self.peek(1).text) != 0:
                self.next()
                value /= int(self.next().text)
            return Const(value)
        if tok.kind == IDENT:
            self.next()
            if tok.text in _TERM_FUNCTIONS and self.at("("):
                arity, build = _TERM_FUNCTIONS[tok.text]
                self.expect("(")
                args = [self.term()]
                for _ in range(arity - 1):
                    self.expect(",")
                    args.append(self.term())
                self.expect(")")
                return build(*args)
            return Var(tok.text)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error(f"expected a term, found '{tok}'")

    # Conditional values

    def cv(self) -> CVExpr:
        left = self.cv_product()
        while self.at("+") or self.at("-"):
            op = self.next().text
            right = self.cv_product()
            left = CAdd(left, right) if op == "+" else cv_sub(left, right)
        return left

    def cv_product(self) -> CVExpr:
        left = self.cv_unary()
        while self.accept("*"):
            left = CMul(left, self.cv_unary())
        return left

    def cv_unary(self) -> CVExpr:
        if self.accept("-"):
            return CNeg(self.cv_unary())
        return self.cv_power()

    def cv_power(self) -> CVExpr:
        base = self.cv_atom()
        while self.at("^-1") or self.at("^2"):
            base = CInv(base) if self.next().text == "^-1" else cv_square(base)
        return base

    def cv_atom(self) -> CVExpr:
        guard = self.guard_prefix()
        if guard is not None:
            return Guarded(guard, self.cv_unary())
        if self.at("v") and self.at("(", 1):
            self.next()
            self.next()
            body = self.term()
            self.expect(")")
            return VEmbed(body)
        if self.at("cond") and self.at("(", 1):
            self.next()
            self.next()
            x = self.cv()
            self.expect(",")
            e = self.event()
            self.expect(",")
            y = self.cv()
            self.expect(")")
            return cv_cond3(x, e, y)
        if self.accept("("):
            inner = self.cv()
            self.expect(")")
            return inner
        if self.peek().kind == IDENT:
            return CVRef(self.next().text)
        raise self.error(f"expected a conditional value, found '{self.peek()}'")

    # Configurations: || loosest, then ~>, then :->

    def config(self) -> ConfigExpr:
        left = self.config_item()
        while self.accept("||"):
            left = Par(left, self.config_item())
        return left

    def config_item(self) -> ConfigExpr:
        base = self.config_unit()
        while self.accept("~>"):
            base = Yield(base, self.cv_unary())
        return base

    def config_unit(self) -> ConfigExpr:
        if self.accept("eps"):
            return Empty()
        guard = self.guard_prefix()
        if guard is not None:
            return CGuard(guard, self.config_item())
        if self.accept("("):
            inner = self.config()
            self.expect(")")
            return inner
        return Obj(self.ident())

    # Summation expressions

    def sum_of(self) -> SumOf:
        self.expect("sum")
        variables = tuple(self.ident_list())
        self.expect("of")
        if self.at("(") and self.at("sum", 1):
            self.next()
            body: Union[Term, SumOf] = self.sum_of()
            self.expect(")")
        else:
            body = self.term()
        return SumOf(variables, body)

    def labelled(self) -> Labelled:
        name = self.ident()
        self.expect("@")
        return Labelled(name, self.ident())

    def arity(self) -> Tuple[str, ...]:
        self.expect("(")
        dims = self.idents()
        if not dims:
            raise self.error("an arity lists at least one dimension")
        self.expect(")")
        return tuple(dims)

    # Commands

    def command(self) -> Optional[Command]:
        tok = self.peek()
        if tok.kind == EOF:
            return None
        if tok.kind != IDENT:
            raise self.error(f"expected a command, found '{tok}'")
        handler = getattr(self, f"cmd_{tok.text}", None)
        if handler is None:
            raise UnknownCommandError(tok.text)
        self.next()
        result = handler()
        self.end()
        return result

    def cmd_space(self) -> Command:
        name = self.ident()
        self.expect("atoms")
        return DeclareSpace(name, tuple(self.idents()))

    def _name_on_space(self) -> Tuple[str, str]:
        name = self.ident()
        self.expect("on")
        return name, self.ident()

    def cmd_pf(self) -> Command:
        name, space = self._name_on_space()
        self.expect(":")
        weights = []
        while self.peek().kind == IDENT:
            atom = self.ident()
            self.expect("=")
            weights.append((atom, self.rational()))
        return DeclarePF(name, space, tuple(weights))

    def cmd_table(self) -> Command:
        name, space = self._name_on_space()
        self.expect(":")
        entries = []
        while self.peek().kind != EOF:
            e = self.event()
            self.expect("=")
            entries.append((e, self.rational()))
        return DeclareTable(name, space, tuple(entries))

    def cmd_cv(self) -> Command:
        name, space = self._name_on_space()
        self.expect("=")
        return DeclareCV(name, space, self.cv())

    def cmd_rv(self) -> Command:
        name = self.ident()
        self.expect("=")
        self.expect("rvof")
        return DeclareRV(name, self.ident())

    def cmd_objects(self) -> Command:
        return DeclareObjects(tuple(self.idents()))

    def cmd_config(self) -> Command:
        name, space = self._name_on_space()
        self.expect("=")
        return DeclareConfig(name, space, self.config())

    def cmd_dims(self) -> Command:
        dims = self.idents(stop=("atoms",))
        if not dims:
            raise self.error("expected at least one dimension")
        atoms: Tuple[str, ...] = ("1", "2")
        if self.accept("atoms"):
            names = []
            while self.peek().kind in (NUM, IDENT):
                names.append(self.next().text)
            if not names:
                raise self.error("expected atom names after 'atoms'")
            atoms = tuple(names)
        return DeclareDims(tuple(dims), atoms)

    def cmd_family(self) -> Command:
        name = self.ident()
        self.expect("=")
        arities = [self.arity()]
        while self.at("("):
            arities.append(self.arity())
        return DeclareFamily(name, tuple(arities))

    def cmd_pff(self) -> Command:
        name = self.ident()
        self.expect(":")
        blocks = []
        while self.at("("):
            w = self.arity()
            self.expect("{")
            cells = []
            while self.accept("("):
                atoms = tuple(self.ident_list())
                self.expect(")")
                self.expect("=")
                cells.append((atoms, self.rational()))
            self.expect("}")
            blocks.append((w, tuple(cells)))
        if not blocks:
            raise self.error("expected at least one '(dims) { ... }' block")
        return DeclarePFF(name, tuple(blocks))

    def _function(self, kind: str) -> Command:
        name = self.ident()
        self.expect("in")
        variables = tuple(self.ident_list())
        self.expect("=")
        return DeclareFunction(kind, name, variables, self.term())

    def cmd_fn(self) -> Command:
        return self._function("fn")

    def cmd_pmf(self) -> Command:
        return self._function("pmf")

    def cmd_extract(self) -> Command:
        name = self.ident()
        self.expect("=")
        what = self.ident()
        if what == "pmf":
            cvs = (self.ident(),)
        elif what == "joint":
            cvs = (self.ident(), self.ident())
        else:
            raise self.error(f"expected 'pmf' or 'joint', found '{what}'", self.tokens[self.pos - 1])
        return Extract(name, what, cvs, self.ident())

    def cmd_marginal(self) -> Command:
        name = self.ident()
        self.expect("=")
        source = self.ident()
        self.expect("keep")
        kept = [self.integer()]
        while self.accept(","):
            kept.append(self.integer())
        return Marginal(name, source, tuple(kept))

    def cmd_check(self) -> Command:
        if self.at("pff") or self.at("family") or self.at("pmf"):
            if self.peek(1).kind == IDENT and self.peek(2).kind == EOF:
                what = self.next().text
                return Check(what, self.ident())
        systems = tuple(self.ident_list())
        return Check("systems", self.ident(), systems)

    def cmd_search(self) -> Command:
        satisfy: List[str] = []
        if self.accept("satisfy"):
            satisfy = self.ident_list()
        self.expect("violate")
        violate = self.ident_list()
        self.expect("atoms")
        atoms = self.integer()
        self.expect("grid")
        grid = [self.rational()]
        while self.accept(","):
            grid.append(self.rational())
        bind = self.ident() if self.accept("as") else None
        return Search(tuple(satisfy), tuple(violate), atoms, tuple(grid), bind)

    def cmd_elicit(self) -> Command:
        return Elicit(tuple(self.rational() for _ in range(4)))

    def cmd_threshold(self) -> Command:
        high, low, cost = (self.rational() for _ in range(3))
        return Threshold(high, low, cost)

    def cmd_fss(self) -> Command:
        start = self.peek()
        expr = self.sum_of()
        return FssCommand(expr, self.source(start, self.tokens[self.pos - 1]))

    def cmd_eval(self) -> Command:
        start = self.peek()
        op = self.ident()
        if op not in EVAL_SIGNATURES:
            raise self.error(f"unknown operator '{op}'", start)
        self.expect("[")
        args: List[object] = []
        for i, kind in enumerate(EVAL_SIGNATURES[op]):
            if i:
                self.expect(",")
            if kind == "name":
                args.append(self.ident())
            elif kind == "cv":
                args.append(self.cv())
            elif kind == "event":
                args.append(self.event())
            elif kind == "labelled":
                args.append(self.labelled())
            else:
                args.append(self.term())
        stop = self.expect("]")
        return Eval(op, tuple(args), self.source(start, stop))

    def cmd_reduce(self) -> Command:
        return Reduce(self.ident(), self.labelled(), self.labelled())

    def cmd_jointexists(self) -> Command:
        return JointExists(self.ident())

    def cmd_laws(self) -> Command:
        catalogue = self.ident()
        space = self.ident() if self.peek().kind == IDENT else None
        samples = self.integer() if self.peek().kind == NUM else None
        return Laws(catalogue, space, samples)

    def cmd_show(self) -> Command:
        return Show(self.ident())


def parse_line(text: str) -> Optional[Command]:
    """
    Parse one script line.

    Returns:
        The command, or None for a blank or comment line

    Raises:
        ParseError: With the 1-based column of the offending token
        UnknownCommandError: When the first word names no command
    """
    command = Parser(text).command()
    logger.debug(f"Parsed {type(command).__name__ if command else 'blank line'}: {text.strip()}")
    return command


def parse_term(text: str) -> Term:
    """Parse a whole line as a meadow term."""
    parser = Parser(text)
    result = parser.term()
    parser.end()
    return result


def parse_event(text: str) -> EventExpr:
    parser = Parser(text)
    result = parser.event()
    parser.end()
    return result


def parse_cv(text: str) -> CVExpr:
    parser = Parser(text)
    result = parser.cv()
    parser.end()
    return result


def parse_config(text: str) -> ConfigExpr:
    parser = Parser(text)
    result = parser.config()
    parser.end()
    return result
