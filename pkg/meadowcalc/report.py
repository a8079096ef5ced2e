"""
Report line templates.
Every line the command language prints is built here, so the verdict
vocabulary stays OK/FAIL everywhere.
"""

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from meadowcalc.events import Event
from meadowcalc.meadow import EquationVerdict, format_rational
from meadowcalc.probability import SystemVerdict

VALUE_TEMPLATE = "OK {expr} = {value}"

PASS_TEMPLATE = "OK {subject}"

FAIL_TEMPLATE = "FAIL {subject} {label} at {witness}"

WITNESS_TEMPLATE = "FAIL {subject} at {witness}"

REASON_TEMPLATE = "FAIL {subject} {reason} at {witness}"

NONE_TEMPLATE = "OK {subject}: none ({detail})"

ERROR_TEMPLATE = "FAIL {message} at line {line}"

SHOW_TEMPLATE = "OK {name} = {text}"


def format_value_line(expr: str, value) -> str:
    """Format an evaluation result; booleans print as yes/no."""
    if isinstance(value, bool):
        text = "yes" if value else "no"
    elif isinstance(value, Fraction):
        text = format_rational(value)
    else:
        text = str(value)
    return VALUE_TEMPLATE.format(expr=expr, value=text)


def format_pass(subject: str) -> str:
    return PASS_TEMPLATE.format(subject=subject)


def format_witness(names: Sequence[str], events: Sequence[Event]) -> str:
    return ", ".join(f"{n}={e}" for n, e in zip(names, events))


def format_system_verdict(verdict: SystemVerdict, subject: Optional[str] = None) -> str:
    """OK PF, or FAIL PF inclusion-exclusion at x=e, y=ne"""
    subject = subject or verdict.system
    if verdict.ok:
        return format_pass(subject)
    witness = verdict.witness_text() or "()"
    return FAIL_TEMPLATE.format(subject=subject, label=verdict.label, witness=witness)


def format_equation_law(name: str, verdict: EquationVerdict) -> str:
    subject = f"law {name}"
    if verdict.ok:
        return format_pass(subject)
    bindings = ", ".join(f"{k}={format_rational(v)}" for k, v in sorted(verdict.env.items()))
    return FAIL_TEMPLATE.format(
        subject=subject, label=f"({format_rational(verdict.lhs_value)} vs {format_rational(verdict.rhs_value)})",
        witness=bindings)


def format_event_law(name: str, witness: Optional[Tuple[Event, ...]]) -> str:
    subject = f"law {name}"
    if witness is None:
        return format_pass(subject)
    names = ("x", "y", "z")[:len(witness)]
    return WITNESS_TEMPLATE.format(subject=subject, witness=format_witness(names, witness))


def format_sampled_laws(names: Iterable[str], failures: dict) -> list:
    """One line per law name; failures maps a law name to its sample bindings."""
    lines = []
    for name in names:
        sample = failures.get(name)
        if sample is None:
            lines.append(format_pass(f"law {name}"))
        else:
            witness = ", ".join(f"{k}={v}" for k, v in sample.items())
            lines.append(FAIL_TEMPLATE.format(subject=f"law {name}", label="sample", witness=witness))
    return lines


def format_reason(subject: str, reason: str, witness: str) -> str:
    return REASON_TEMPLATE.format(subject=subject, reason=reason, witness=witness)


def format_none(subject: str, detail: str) -> str:
    return NONE_TEMPLATE.format(subject=subject, detail=detail)


def format_error(line: int, error: Exception) -> str:
    return ERROR_TEMPLATE.format(line=line, message=str(error))


def format_show(name: str, text: str) -> str:
    return SHOW_TEMPLATE.format(name=name, text=text)
