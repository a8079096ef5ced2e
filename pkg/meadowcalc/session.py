"""
Session state and command execution for the command language.
Commands run in order against named bindings; a failing command becomes a
FAIL report line and the session carries on with the next one.
"""

import logging
from dataclasses import replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from meadowcalc import report
from meadowcalc.condval import (
    CV_LAWS,
    CVExpr,
    check_cv_laws,
    corr2_p,
    cov_p,
    cv_canon,
    cv_flat,
    cv_independent,
    e_p,
    e_p_flat,
    flat_terms,
    format_flat,
    joint_pmf,
    pmf_of_cv,
    var_p,
)
from meadowcalc.configspace import CS_LAWS, ask_threshold, cfg_canon, check_config_laws, elicit_indifference, expected_utility
from meadowcalc.errors import (
    InvalidDistributionError,
    KindMismatchError,
    MeadowCalcError,
    RedefinitionError,
    SpaceMismatchError,
    UnboundNameError,
    UnknownCommandError,
)
from meadowcalc.events import BA_LAWS, DERIVED_BA_LAWS, EventSpace, check_event_law, eval_event, make_space
from meadowcalc.fss import (
    GuardTable,
    PmfView,
    corr2_pmf,
    cov_pmf,
    e_pmf,
    format_pmf,
    format_table,
    fss,
    gt_parse,
    is_independent,
    is_pmf,
    marginalise,
    var_pmf,
)
from meadowcalc.meadow import MEADOW_LAWS, SIGN_LAWS, Term, check_laws, eval_term, format_rational, ordered_vars
from meadowcalc.multidim import (
    PFF,
    check_pff_axioms,
    dimension_spaces,
    format_arity,
    format_tensor,
    joint_exists,
    md_corr2,
    md_cov,
    md_e,
    md_var,
    multi_cv,
    pff_from_blocks,
    reduced_stats,
    validate_family,
)
from meadowcalc.parser import (
    Check,
    Command,
    DeclareConfig,
    DeclareCV,
    DeclareDims,
    DeclareFamily,
    DeclareFunction,
    DeclareObjects,
    DeclarePF,
    DeclarePFF,
    DeclareRV,
    DeclareSpace,
    DeclareTable,
    Elicit,
    Eval,
    Extract,
    FssCommand,
    JointExists,
    Labelled,
    Laws,
    Marginal,
    Reduce,
    Search,
    Show,
    SumOf,
    Threshold,
    parse_line,
    resolve_config_refs,
    resolve_cv_refs,
)
from meadowcalc.probability import (
    TablePF,
    WeightPF,
    check_axioms,
    cond_p,
    default_atom_names,
    pf_eval,
    search_counterexample,
    table_pf,
    weight_pf,
)
from meadowcalc.rv import RandomVariable, corr2_rv, cov_rv, e_rv, rv_of_cv, var_rv
from meadowcalc.settings import Settings, load_settings

logger = logging.getLogger(__name__)

KINDS = ("space", "pf", "table", "cv", "rv", "object", "config", "family", "pff", "fn", "pmf")

DEFAULT_LAW_SAMPLES = 50


class Session:
    """
    Named bindings of one script or REPL run.

    Names are unique per kind and cannot be rebound; bindings keep their
    insertion order.
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or load_settings()
        self.bindings: Dict[str, Dict[str, object]] = {kind: {} for kind in KINDS}
        self.dims: Tuple[str, ...] = ()
        self.line = 0
        self.failures = 0
        logger.info(f"Session created (max_atoms={self.settings.max_atoms}, seed={self.settings.seed})")

    # Bindings

    def bind(self, kind: str, name: str, value: object) -> None:
        if name in self.bindings[kind]:
            raise RedefinitionError(name)
        self.bindings[kind][name] = value
        logger.debug(f"Bound {kind} {name}")

    def lookup(self, kind: Union[str, Sequence[str]], name: str):
        """
        Resolve a name of one of the given kinds.

        Raises:
            KindMismatchError: When the name is bound, but to another kind
            UnboundNameError: When the name is not bound at all
        """
        kinds = (kind,) if isinstance(kind, str) else tuple(kind)
        for k in kinds:
            if name in self.bindings[k]:
                return self.bindings[k][name]
        for other in KINDS:
            if name in self.bindings[other]:
                raise KindMismatchError(name, " or ".join(kinds), other)
        raise UnboundNameError(name)

    def _cv_expr(self, name: str) -> CVExpr:
        return cv_flat(self.lookup("cv", name))

    def _cv(self, expr: CVExpr, space: EventSpace):
        return cv_canon(resolve_cv_refs(expr, self._cv_expr), space)

    def _weights(self, name: str) -> WeightPF:
        p = self.lookup(("pf", "table"), name)
        if not isinstance(p, WeightPF):
            raise InvalidDistributionError(f"'{name}' is a valuation table; this needs atom weights")
        return p

    # Running lines

    def run_line(self, text: str) -> List[str]:
        """
        Parse and execute one line.

        Returns:
            List[str]: Report lines; a failed command yields one FAIL line
        """
        self.line += 1
        try:
            command = parse_line(text)
            lines = [] if command is None else self.execute(command)
        except MeadowCalcError as e:
            logger.error(f"Line {self.line} failed: {e}")
            lines = [report.format_error(self.line, e)]
        self.failures += sum(1 for line in lines if line.startswith("FAIL"))
        return lines

    def run_script(self, lines: Iterable[str]) -> List[str]:
        output: List[str] = []
        for text in lines:
            output.extend(self.run_line(text.rstrip("\n")))
        logger.info(f"Replayed {self.line} lines, {self.failures} FAIL lines")
        return output

    def execute(self, command: Command) -> List[str]:
        handler = getattr(self, f"_do_{type(command).__name__}", None)
        if handler is None:
            raise UnknownCommandError(type(command).__name__)
        return handler(command)

    # Declarations

    def _do_DeclareSpace(self, cmd: DeclareSpace) -> List[str]:
        self.bind("space", cmd.name, make_space(cmd.atoms))
        return []

    def _do_DeclarePF(self, cmd: DeclarePF) -> List[str]:
        space = self.lookup("space", cmd.space)
        self.bind("pf", cmd.name, weight_pf(space, dict(cmd.weights)))
        return []

    def _do_DeclareTable(self, cmd: DeclareTable) -> List[str]:
        space = self.lookup("space", cmd.space)
        values = {eval_event(e, space): value for e, value in cmd.entries}
        self.bind("table", cmd.name, table_pf(space, values))
        return []

    def _do_DeclareCV(self, cmd: DeclareCV) -> List[str]:
        space = self.lookup("space", cmd.space)
        self.bind("cv", cmd.name, self._cv(cmd.expr, space))
        return []

    def _do_DeclareRV(self, cmd: DeclareRV) -> List[str]:
        self.bind("rv", cmd.name, rv_of_cv(self.lookup("cv", cmd.cv)))
        return []

    def _do_DeclareObjects(self, cmd: DeclareObjects) -> List[str]:
        for name in cmd.names:
            self.bind("object", name, name)
        return []

    def _objects(self) -> Optional[List[str]]:
        return list(self.bindings["object"]) or None

    def _do_DeclareConfig(self, cmd: DeclareConfig) -> List[str]:
        space = self.lookup("space", cmd.space)
        expr = resolve_config_refs(cmd.expr, self._cv_expr)
        cfg_canon(expr, space, self._objects())
        self.bind("config", cmd.name, (space, expr))
        return []

    def _do_DeclareDims(self, cmd: DeclareDims) -> List[str]:
        for d, space in dimension_spaces(cmd.dims, cmd.atoms).items():
            self.bind("space", d, space)
        self.dims += tuple(cmd.dims)
        return []

    def _do_DeclareFamily(self, cmd: DeclareFamily) -> List[str]:
        self.bind("family", cmd.name, cmd.arities)
        return []

    def _do_DeclarePFF(self, cmd: DeclarePFF) -> List[str]:
        used = {d for w, _ in cmd.blocks for d in w}
        dims = tuple(d for d in self.dims if d in used) + tuple(sorted(used - set(self.dims)))
        spaces = {d: self.lookup("space", d) for d in dims}
        blocks = {}
        for w, cells in cmd.blocks:
            tensor: Dict[Tuple[int, ...], Fraction] = {}
            for atoms, value in cells:
                if len(atoms) != len(w):
                    raise SpaceMismatchError(f"cell ({','.join(atoms)}) does not match arity {format_arity(w)}")
                idx = tuple(spaces[d].index(a) for d, a in zip(w, atoms))
                tensor[idx] = tensor.get(idx, Fraction(0)) + value
            blocks[w] = tensor
        self.bind("pff", cmd.name, pff_from_blocks(spaces, blocks, dims))
        return []

    def _do_DeclareFunction(self, cmd: DeclareFunction) -> List[str]:
        table = gt_parse(cmd.term, cmd.variables)
        if cmd.kind == "fn":
            self.bind("fn", cmd.name, table)
            return []
        check = is_pmf(table)
        if not check.ok:
            raise InvalidDistributionError(f"not a PMF: {check.reason} ({check.witness})")
        self.bind("pmf", cmd.name, check.view)
        return []

    def _do_Extract(self, cmd: Extract) -> List[str]:
        p = self._weights(cmd.pf)
        cvs = [self.lookup("cv", name) for name in cmd.cvs]
        view = pmf_of_cv(cvs[0], p) if cmd.what == "pmf" else joint_pmf(cvs[0], cvs[1], p)
        self.bind("pmf", cmd.name, view)
        return []

    def _do_Marginal(self, cmd: Marginal) -> List[str]:
        self.bind("pmf", cmd.name, marginalise(self.lookup("pmf", cmd.source), cmd.kept))
        return []

    # Audits and searches

    def _do_Check(self, cmd: Check) -> List[str]:
        if cmd.what == "pff":
            verdict = check_pff_axioms(self.lookup("pff", cmd.target))
            return [report.format_system_verdict(verdict, f"PFF {cmd.target}")]
        if cmd.what == "family":
            arities = self.lookup("family", cmd.target)
            dims = self.dims or tuple(sorted({d for w in arities for d in w}))
            verdict = validate_family(dims, arities)
            subject = f"family {cmd.target}"
            if verdict.ok:
                return [report.format_pass(subject)]
            return [report.FAIL_TEMPLATE.format(subject=subject, label=f"{verdict.condition} closure",
                                                witness=format_arity(verdict.witness))]
        if cmd.what == "pmf":
            check = is_pmf(self.lookup("fn", cmd.target))
            subject = f"pmf {cmd.target}"
            if check.ok:
                return [report.format_pass(subject)]
            return [report.format_reason(subject, check.reason, check.witness)]
        p = self.lookup(("pf", "table"), cmd.target)
        return [report.format_system_verdict(v) for v in check_axioms(p, cmd.systems)]

    def _do_Search(self, cmd: Search) -> List[str]:
        found = search_counterexample(cmd.atoms, cmd.satisfy, cmd.violate, cmd.grid,
                                      settings=self.settings)
        if found is None:
            return [report.format_none("search", "grid exhausted")]
        if cmd.bind:
            self.bind("table", cmd.bind, found)
        return [report.format_show("search", str(found))]

    def _do_Elicit(self, cmd: Elicit) -> List[str]:
        return [report.format_value_line("elicit P(e)", elicit_indifference(*cmd.utilities))]

    def _do_Threshold(self, cmd: Threshold) -> List[str]:
        return [report.format_value_line("threshold", ask_threshold(cmd.high, cmd.low, cmd.cost))]

    def _sum(self, expr: SumOf, variables: Sequence[str]) -> GuardTable:
        if isinstance(expr.body, SumOf):
            table = self._sum(expr.body, variables)
        else:
            table = gt_parse(expr.body, variables)
        return fss(table, expr.variables)

    def _do_FssCommand(self, cmd: FssCommand) -> List[str]:
        variables: List[str] = []
        node: Union[SumOf, Term] = cmd.expr
        while isinstance(node, SumOf):
            variables.extend(v for v in node.variables if v not in variables)
            node = node.body
        variables.extend(v for v in ordered_vars(node) if v not in variables)
        return [report.format_value_line(cmd.text, format_table(self._sum(cmd.expr, variables)))]

    # Evaluation

    def _labelled(self, p: PFF, *items: Labelled):
        return multi_cv(p, *[(item.dimension, self.lookup("cv", item.name)) for item in items])

    def _evaluate(self, op: str, args: Tuple) -> object:
        if op == "V":
            return eval_term(args[0], {})
        if op in ("EPMF", "VARPMF", "COVPMF", "CORR2PMF", "IND"):
            view: PmfView = self.lookup("pmf", args[0])
            return {"EPMF": e_pmf, "VARPMF": var_pmf, "COVPMF": cov_pmf,
                    "CORR2PMF": corr2_pmf, "IND": is_independent}[op](view)
        if op.startswith("MD"):
            p = self.lookup("pff", args[0])
            mcv = self._labelled(p, *args[1:])
            return {"MDE": md_e, "MDVAR": md_var, "MDCOV": md_cov, "MDCORR2": md_corr2}[op](p, mcv)
        if op in ("PR", "P0", "P1", "PS"):
            p = self.lookup(("pf", "table"), args[0])
            events = [eval_event(e, p.space) for e in args[1:]]
            if op == "PR":
                return pf_eval(p, events[0])
            return cond_p(op.lower(), p, events[0], events[1])
        p = self._weights(args[0])
        if op == "EU":
            space, expr = self.lookup("config", args[1])
            if space != p.space:
                raise SpaceMismatchError(f"configuration '{args[1]}' and '{args[0]}' use different spaces")
            return expected_utility(expr, p, self._objects())
        if op in ("ERV", "VARRV", "COVRV", "CORR2RV"):
            rvs: List[RandomVariable] = [self.lookup("rv", name) for name in args[1:]]
            return {"ERV": e_rv, "VARRV": var_rv, "COVRV": cov_rv, "CORR2RV": corr2_rv}[op](*rvs, p)
        if op == "EFLAT":
            return e_p_flat(resolve_cv_refs(args[1], self._cv_expr), p)
        cvs = [self._cv(x, p.space) for x in args[1:]]
        return {"E": e_p, "VAR": var_p, "COV": cov_p, "CORR2": corr2_p, "INDCV": cv_independent}[op](*cvs, p)

    def _do_Eval(self, cmd: Eval) -> List[str]:
        return [report.format_value_line(cmd.text, self._evaluate(cmd.op, cmd.args))]

    def _do_Reduce(self, cmd: Reduce) -> List[str]:
        p = self.lookup("pff", cmd.pff)
        pair = self._labelled(p, cmd.x, cmd.y)
        x_only, y_only = self._labelled(p, cmd.x), self._labelled(p, cmd.y)
        stats = reduced_stats(p, pair)
        direct = (md_e(p, x_only), md_e(p, y_only), md_var(p, x_only), md_var(p, y_only),
                  md_cov(p, pair), md_corr2(p, pair))
        labels = ("E1", "E2", "VAR1", "VAR2", "COV", "CORR2")
        text = " ".join(f"{label}={format_rational(v)}" for label, v in zip(labels, stats))
        subject = f"reduce {cmd.pff} {cmd.x.name}@{cmd.x.dimension} {cmd.y.name}@{cmd.y.dimension}"
        for label, reduced, plain in zip(labels, stats, direct):
            if reduced != plain:
                return [report.FAIL_TEMPLATE.format(
                    subject=subject, label="mismatch",
                    witness=f"{label} ({format_rational(reduced)} vs {format_rational(plain)})")]
        return [report.format_show(subject, text)]

    def _do_JointExists(self, cmd: JointExists) -> List[str]:
        p = self.lookup("pff", cmd.pff)
        result = joint_exists(p, max_cells=self.settings.joint_max_cells)
        subject = f"jointexists {cmd.pff}"
        if not result.exists:
            return [report.format_none(subject, result.certificate)]
        return [report.format_show(subject, format_tensor(p, p.dimensions, result.witness))]

    # Law catalogues

    def _law_space(self, name: Optional[str]) -> EventSpace:
        if name is not None:
            return self.lookup("space", name)
        return make_space(default_atom_names(min(2, self.settings.max_atoms)))

    def _do_Laws(self, cmd: Laws) -> List[str]:
        samples = cmd.samples if cmd.samples is not None else DEFAULT_LAW_SAMPLES
        if cmd.catalogue == "meadow":
            return [report.format_equation_law(law.name, verdict)
                    for law, verdict in check_laws(MEADOW_LAWS + SIGN_LAWS)]
        if cmd.catalogue == "events":
            space = self._law_space(cmd.space)
            return [report.format_event_law(law.name, check_event_law(law, space))
                    for law in BA_LAWS + DERIVED_BA_LAWS]
        if cmd.catalogue == "cv":
            space = self._law_space(cmd.space)
            failures = {f.law: f.sample for f in check_cv_laws(space, samples, self.settings.seed)}
            return report.format_sampled_laws([law.name for law in CV_LAWS], failures)
        if cmd.catalogue == "config":
            space = self._law_space(cmd.space)
            failures = {f.law: {"lhs": f.lhs, "rhs": f.rhs}
                        for f in check_config_laws(space, samples, self.settings.seed)}
            return report.format_sampled_laws([law.name for law in CS_LAWS] + ["utility-par"], failures)
        raise UnknownCommandError(cmd.catalogue)

    def _do_Show(self, cmd: Show) -> List[str]:
        for kind in KINDS:
            if cmd.name in self.bindings[kind]:
                return [report.format_show(cmd.name, describe(self.bindings[kind][cmd.name]))]
        raise UnboundNameError(cmd.name)


def describe(value: object) -> str:
    """Text form of a bound value for the show command."""
    if isinstance(value, EventSpace):
        return " ".join(value.atoms)
    if isinstance(value, WeightPF):
        return " ".join(f"{a}={format_rational(w)}" for a, w in zip(value.space.atoms, value.weights))
    if isinstance(value, TablePF):
        return str(value)
    if isinstance(value, PmfView):
        return format_pmf(value)
    if isinstance(value, GuardTable):
        return format_table(value)
    if isinstance(value, PFF):
        return " ".join(format_arity(w) for w in value.family.sorted_arities())
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], EventSpace):
        return str(cfg_canon(value[1], value[0]))
    if isinstance(value, tuple):
        return " ".join(format_arity(w) for w in value)
    if isinstance(value, RandomVariable):
        return str(value)
    if hasattr(value, "values") and hasattr(value, "space"):
        return format_flat(flat_terms(value))
    return str(value)


def execute(command: Command, session: Session) -> Tuple[Session, str]:
    """Run a parsed command; returns the session and the report text."""
    return session, "\n".join(session.execute(command))


def run_text(text: str, settings: Optional[Settings] = None) -> str:
    """Replay a whole script in a fresh session and return its report."""
    session = Session(settings)
    return "\n".join(session.run_script(text.splitlines()))


def with_overrides(settings: Settings, **changes) -> Settings:
    return replace(settings, **{k: v for k, v in changes.items() if v is not None})
