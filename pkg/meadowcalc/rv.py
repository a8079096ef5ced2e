"""
Random-variable view of conditional values: a CV over a finite event space
is a function from atoms to rationals, and its statistics are sums over atoms.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Tuple

from meadowcalc.condval import CanonCV
from meadowcalc.errors import SpaceMismatchError
from meadowcalc.events import EventSpace
from meadowcalc.meadow import format_rational, q_inv
from meadowcalc.probability import WeightPF

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomVariable:
    space: EventSpace
    values: Tuple[Fraction, ...]

    def __call__(self, atom: str) -> Fraction:
        return self.values[self.space.index(atom)]

    def as_map(self) -> dict:
        return dict(zip(self.space.atoms, self.values))

    def __mul__(self, other: "RandomVariable") -> "RandomVariable":
        _same_space(self.space, other.space)
        return RandomVariable(self.space, tuple(a * b for a, b in zip(self.values, other.values)))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a}->{format_rational(x)}" for a, x in zip(self.space.atoms, self.values)) + "}"


def _same_space(a: EventSpace, b: EventSpace) -> None:
    if a != b:
        raise SpaceMismatchError("random variables and probability functions must share one sample space")


def rv_of_cv(x: CanonCV) -> RandomVariable:
    return RandomVariable(x.space, x.values)


def cv_of_rv(f: RandomVariable) -> CanonCV:
    return CanonCV(f.space, f.values)


def sum_over_atoms(f: Mapping[str, Fraction]) -> Fraction:
    """Sum of an atom-indexed map; 0 when there are no atoms."""
    terms: Iterable[Fraction] = f.values()
    return sum((Fraction(t) for t in terms), Fraction(0))


def e_rv(f: RandomVariable, p: WeightPF) -> Fraction:
    """Sum over atoms of f(atom) * P(atom)."""
    _same_space(f.space, p.space)
    return sum_over_atoms({a: x * w for a, x, w in zip(f.space.atoms, f.values, p.weights)})


def var_rv(f: RandomVariable, p: WeightPF) -> Fraction:
    mean = e_rv(f, p)
    return e_rv(f * f, p) - mean * mean


def cov_rv(f: RandomVariable, g: RandomVariable, p: WeightPF) -> Fraction:
    return e_rv(f * g, p) - e_rv(f, p) * e_rv(g, p)


def corr2_rv(f: RandomVariable, g: RandomVariable, p: WeightPF) -> Fraction:
    cov = cov_rv(f, g, p)
    result = cov * cov * q_inv(var_rv(f, p) * var_rv(g, p))
    logger.debug(f"CORR2 over {f.space}: {format_rational(result)}")
    return result
