"""Hogg's single-step search for maximally constrained 1-SAT on two variables.

The circuit is U = M R W acting on the pseudo-pure |00> state: W makes the
uniform superposition, R multiplies each assignment s by i^c(s) where c counts
violated clauses, and M = W D W with D_rr = i^(h(r) - 1) mixes the amplitudes
back onto the unique satisfying assignment. Bit value 1 means "true".
"""
import re
from dataclasses import dataclass
from functools import reduce
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from pseudo_pure.errors import InputError, PreconditionError
from pseudo_pure.models import DeviationMatrix, Operator
from pseudo_pure.spin_core import evolve, pure_part
from pseudo_pure.utils import bits_of, hamming_weight

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

_LITERAL = re.compile(r"^(!?)V(\d+)$")


def _i_power(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


@dataclass(frozen=True)
class Literal:
    variable: int
    negated: bool = False

    def __str__(self):
        return f"{'!' if self.negated else ''}V{self.variable}"


@dataclass(frozen=True)
class OneSatFormula:
    clauses: Tuple[Literal, ...]
    n_vars: int = 2

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        variables = [literal.variable for literal in self.clauses]
        if any(not 1 <= v <= self.n_vars for v in variables):
            raise InputError(f"literal outside V1..V{self.n_vars}", formula=str(self))
        if len(set(variables)) != len(variables):
            raise InputError("a variable appears in more than one clause", formula=str(self))

    @property
    def maximally_constrained(self) -> bool:
        return len(self.clauses) == self.n_vars

    def solution(self) -> Optional[str]:
        if not self.maximally_constrained:
            return None
        bits = ["0"] * self.n_vars
        for literal in self.clauses:
            bits[literal.variable - 1] = "0" if literal.negated else "1"
        return "".join(bits)

    def __str__(self):
        return "&".join(str(literal) for literal in self.clauses)


class HoggOutcome(NamedTuple):
    rho_final: DeviationMatrix
    probabilities: Dict[str, float]


def parse_formula(text: str, n_vars: int = 2) -> OneSatFormula:
    """Parse literals V<k> or !V<k> joined by '&'; an empty string has no clauses."""
    text = text.strip()
    if not text:
        return OneSatFormula((), n_vars)
    literals = []
    for part in text.split("&"):
        match = _LITERAL.match(part.strip())
        if match is None:
            raise InputError(f"malformed literal {part.strip()!r}", formula=text)
        literals.append(Literal(int(match.group(2)), bool(match.group(1))))
    return OneSatFormula(tuple(literals), n_vars)


def conflicts(assignment: str, formula: OneSatFormula) -> int:
    if len(assignment) != formula.n_vars or set(assignment) - {"0", "1"}:
        raise InputError(f"assignment {assignment!r} is not {formula.n_vars} bits", assignment=assignment)
    violated = 0
    for literal in formula.clauses:
        value = assignment[literal.variable - 1] == "1"
        if value == literal.negated:
            violated += 1
    return violated


def phase_oracle(formula: OneSatFormula) -> Operator:
    n = formula.n_vars
    phases = [_i_power(conflicts(bits_of(level, n), formula)) for level in range(1, 2 ** n + 1)]
    return np.diag(phases).astype(complex)


def walsh(n: int) -> Operator:
    return reduce(np.kron, [HADAMARD] * n)


def mixing(n: int = 2) -> Operator:
    if n != 2:
        raise InputError("the mixing operator is only defined for two variables", n_spins=n)
    w = walsh(n)
    d = np.diag([_i_power(hamming_weight(level) - 1) for level in range(1, 2 ** n + 1)])
    return w @ d @ w


def hogg_unitary(formula: OneSatFormula) -> Operator:
    n = formula.n_vars
    return mixing(n) @ phase_oracle(formula) @ walsh(n)


def hogg_run(rho_pp: DeviationMatrix, formula: OneSatFormula, tol: Optional[float] = None) -> HoggOutcome:
    """Run the search on a pseudo-pure |00> deviation matrix.

    The uniform background is invariant under conjugation, so the pure part's
    diagonal after the run gives the weight of each assignment.
    """
    rho_pp = np.asarray(rho_pp, dtype=complex)
    if rho_pp.shape != (2 ** formula.n_vars,) * 2:
        raise InputError("state and formula sizes differ", state=list(rho_pp.shape), n_vars=formula.n_vars)
    part = pure_part(rho_pp, tol)
    if part.target != 1:
        raise PreconditionError("input is pseudo-pure but not at |00>", target=bits_of(part.target, formula.n_vars))
    rho_final = evolve(rho_pp, hogg_unitary(formula))
    weights = (np.real(np.diag(rho_final)) - part.uniform_coeff) / part.pure_coeff
    probabilities = {bits_of(level, formula.n_vars): float(weight) for level, weight in enumerate(weights, start=1)}
    return HoggOutcome(rho_final, probabilities)
