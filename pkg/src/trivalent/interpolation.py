"""Split interpolant synthesis.

For a classically valid ``phi => psi`` the interpolant is assembled from one
clause per valuation that makes ``phi`` true (constructions C and D) or makes
``psi`` false (constructions E and F). Each clause collects the shared atoms
that valuation leaves classical. Which construction is safe depends on which
of the scheme's connectives is Strong Kleene; every result is re-verified
exhaustively before it is returned, and the exact clone search is the fallback.
"""

from __future__ import annotations

import enum
import functools
import logging
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from . import clones
from .semantics import (
    Inference,
    Standard,
    Valuation,
    bivaluations,
    classical_value,
    classically_valid,
    evaluate,
    format_valuation,
    valid,
    valuation_at,
    value_vector,
)
from .syntax import And, Atom, Formula, Literal, Neg, Or, atoms, fold_conj, fold_disj, to_text
from .truth import TV, ConnChoice, Scheme

log = logging.getLogger(__name__)


class InternalError(AssertionError):
    """A machine-checked certificate contradicted another check."""


class SideConditionError(ValueError):
    pass


class EmptyClauseError(ValueError):
    def __init__(self, shape: "Shape", valuation: Valuation):
        self.shape = shape
        self.valuation = valuation
        super().__init__(f"every shared atom is 1/2 under {format_valuation(valuation)}")


class Shape(enum.Enum):
    CONJ = "conj"  # C^v: conjunction of literals
    NEGDISJ = "negdisj"  # D^v: negated disjunction of negated literals
    DISJ = "disj"  # E^v: disjunction of literals
    NEGCONJ = "negconj"  # F^v: negated conjunction of negated literals

    @property
    def phi_side(self) -> bool:
        return self in (Shape.CONJ, Shape.NEGDISJ)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]
    shape: Shape

    @property
    def sort_key(self) -> tuple:
        return tuple(lit.sort_key for lit in self.literals)


def _shared(phi: Formula, psi: Formula) -> tuple[Atom, ...]:
    return tuple(sorted(set(atoms(phi)) & set(atoms(psi))))


def _clause_literals(shape: Shape, v: Mapping[str, TV], shared: tuple[Atom, ...]) -> tuple[Literal, ...]:
    # phi-side clauses name what v makes true, psi-side clauses what v makes false
    positive_value = TV.T if shape.phi_side else TV.F
    return tuple(
        Literal(a, v[a.name] == positive_value) for a in shared if v[a.name] is not TV.N
    )


def build_clause(shape: Shape, v: Mapping[str, TV], phi: Formula, psi: Formula, scheme: Scheme) -> Clause:
    shared = _shared(phi, psi)
    if not shared:
        raise SideConditionError("phi and psi share no atom")
    if shape.phi_side:
        if evaluate(scheme, v, phi) is not TV.T:
            raise SideConditionError(f"{shape.value} clauses need a valuation making phi true")
    elif evaluate(scheme, v, psi) is not TV.F:
        raise SideConditionError(f"{shape.value} clauses need a valuation making psi false")
    return Clause(_clause_literals(shape, v, shared), shape)


def clause_to_formula(clause: Clause) -> Formula:
    if not clause.literals:
        raise EmptyClauseError(clause.shape, {})
    lits = [lit.to_formula() for lit in clause.literals]
    if clause.shape is Shape.CONJ:
        return fold_conj(lits)
    if clause.shape is Shape.DISJ:
        return fold_disj(lits)
    negated = [Neg(f) for f in lits]
    if clause.shape is Shape.NEGDISJ:
        return Neg(fold_disj(negated))
    return Neg(fold_conj(negated))


# ---------------------------------------------------------------------------
# aggregates


class Kind(enum.Enum):
    C = "C"
    D = "D"
    E = "E"
    F = "F"


_SHAPE = {Kind.C: Shape.CONJ, Kind.D: Shape.NEGDISJ, Kind.E: Shape.DISJ, Kind.F: Shape.NEGCONJ}


@dataclass(frozen=True)
class Aggregate:
    formula: Formula
    clauses: int
    dedup_count: int
    valuations_scanned: int
    limit: bool  # the default p & ~p / p | ~p was used


@functools.lru_cache(maxsize=100_000)
def _aggregate(kind: Kind, scheme: Scheme, side: Formula, shared: tuple[Atom, ...]) -> Aggregate:
    shape = _SHAPE[kind]
    pool = tuple(a.name for a in atoms(side))
    target = TV.T if shape.phi_side else TV.F
    hits = np.flatnonzero(value_vector(scheme, side, pool) == target)
    least = shared[0]
    if hits.size == 0:
        limit = And(least, Neg(least)) if shape.phi_side else Or(least, Neg(least))
        return Aggregate(limit, 0, 0, 3 ** len(pool), True)

    found: dict[tuple[Literal, ...], None] = {}
    for index in hits.tolist():
        v = valuation_at(pool, index)
        lits = _clause_literals(shape, v, shared)
        if not lits:
            raise EmptyClauseError(shape, v)
        found.setdefault(lits)
    ordered = sorted(found, key=lambda lits: tuple(lit.sort_key for lit in lits))
    parts = [clause_to_formula(Clause(lits, shape)) for lits in ordered]
    if kind is Kind.C:
        formula = Neg(fold_conj([Neg(f) for f in parts]))
    elif kind is Kind.D:
        formula = fold_disj(parts)
    elif kind is Kind.E:
        formula = Neg(fold_disj([Neg(f) for f in parts]))
    else:
        formula = fold_conj(parts)
    return Aggregate(formula, len(ordered), int(hits.size) - len(ordered), 3 ** len(pool), False)


def aggregate_info(kind: Kind | str, scheme: Scheme, phi: Formula, psi: Formula) -> Aggregate:
    kind = Kind(kind)
    shared = _shared(phi, psi)
    if not shared:
        raise SideConditionError("phi and psi share no atom")
    side = phi if _SHAPE[kind].phi_side else psi
    return _aggregate(kind, scheme, side, shared)


def aggregate(kind: Kind | str, scheme: Scheme, phi: Formula, psi: Formula) -> Formula:
    """The interpolant candidate C, D, E or F for ``phi => psi``.

    Raises :class:`EmptyClauseError` when a generating valuation leaves every
    shared atom at 1/2; :func:`blocked` reports those instances.
    """
    return aggregate_info(kind, scheme, phi, psi).formula


# ---------------------------------------------------------------------------
# blocked instances


class BlockKind(enum.Enum):
    SS_BLOCKED = "ss_blocked"
    TT_BLOCKED = "tt_blocked"
    UNBLOCKED = "unblocked"


@dataclass(frozen=True)
class BlockReport:
    ss_witness: Valuation | None = None
    tt_witness: Valuation | None = None

    @property
    def kind(self) -> BlockKind:
        if self.ss_witness is not None:
            return BlockKind.SS_BLOCKED
        if self.tt_witness is not None:
            return BlockKind.TT_BLOCKED
        return BlockKind.UNBLOCKED

    @property
    def witness(self) -> Valuation | None:
        return self.ss_witness if self.ss_witness is not None else self.tt_witness

    def defeats(self, std1: Standard, std2: Standard) -> Valuation | None:
        """The witness ruling out every shared-atom candidate for this standard pair."""
        if std1 is Standard.SS and self.ss_witness is not None:
            return self.ss_witness
        if std2 is Standard.TT and self.tt_witness is not None:
            return self.tt_witness
        return None

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "witness": format_valuation(self.witness) if self.witness is not None else None,
            "ss_witness": format_valuation(self.ss_witness) if self.ss_witness is not None else None,
            "tt_witness": format_valuation(self.tt_witness) if self.tt_witness is not None else None,
        }


@functools.lru_cache(maxsize=100_000)
def _first_all_n(scheme: Scheme, side: Formula, shared: tuple[Atom, ...], target: TV) -> Valuation | None:
    pool = tuple(a.name for a in atoms(side))
    values = value_vector(scheme, side, pool)
    for index in np.flatnonzero(values == target).tolist():
        v = valuation_at(pool, index)
        if all(v[a.name] is TV.N for a in shared):
            return v
    return None


def blocked(scheme: Scheme, phi: Formula, psi: Formula) -> BlockReport:
    shared = _shared(phi, psi)
    if not shared:
        raise SideConditionError("phi and psi share no atom")
    return BlockReport(
        ss_witness=_first_all_n(scheme, phi, shared, TV.T),
        tt_witness=_first_all_n(scheme, psi, shared, TV.F),
    )


# ---------------------------------------------------------------------------
# synthesis


class Strategy(enum.Enum):
    CF = "CF"
    DE = "DE"
    UNSUPPORTED = "unsupported"


def strategy_for(scheme: Scheme) -> Strategy:
    if scheme.conj_choice is ConnChoice.SK:
        return Strategy.CF
    if scheme.disj_choice is ConnChoice.SK:
        return Strategy.DE
    if (scheme.conj_choice, scheme.disj_choice) == (ConnChoice.WK, ConnChoice.WK):
        return Strategy.DE
    return Strategy.UNSUPPORTED


class Outcome(enum.Enum):
    INTERPOLANT = "interpolant"
    NO_INTERPOLANT = "no_interpolant"
    NOT_CLASSICALLY_VALID = "not_classically_valid"
    NO_SHARED_ATOMS = "no_shared_atoms"
    UNSUPPORTED = "unsupported"


SYNTHESIS_STANDARDS = ((Standard.SS, Standard.ST), (Standard.TT, Standard.ST))


@dataclass
class InterpolationResult:
    outcome: Outcome
    scheme: Scheme
    std1: Standard
    std2: Standard
    phi: Formula
    psi: Formula
    chi: Formula | None = None
    strategy: str | None = None  # C, D, E, F, classical or clone-search
    leg1: bool | None = None
    leg2: bool | None = None
    atoms_ok: bool | None = None
    block: BlockReport | None = None
    certificate: str | None = None  # "block" or "clone-none"
    clone_confirmed: bool | None = None
    counter: Valuation | None = None
    fallback: bool = False
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.INTERPOLANT

    def to_record(self) -> dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "scheme": self.scheme.name,
            "std1": str(self.std1),
            "std2": str(self.std2),
            "phi": to_text(self.phi),
            "psi": to_text(self.psi),
            "strategy": self.strategy,
            "chi": to_text(self.chi) if self.chi is not None else None,
            "ss_leg": self.leg1,
            "tt_leg": self.leg2,
            "atoms_ok": self.atoms_ok,
            "block": self.block.to_record() if self.block is not None else None,
            "certificate": self.certificate,
            "clone_confirmed": self.clone_confirmed,
            "counter": format_valuation(self.counter) if self.counter is not None else None,
            "fallback": self.fallback,
            "stats": dict(self.stats),
        }


def verify(scheme: Scheme, std1: Standard, std2: Standard, phi: Formula, psi: Formula, chi: Formula) -> tuple[bool, bool, bool]:
    """(atom containment, leg 1, leg 2), each checked exhaustively."""
    shared = set(_shared(phi, psi))
    atoms_ok = set(atoms(chi)) <= shared
    leg1 = valid(scheme, std1, Inference((phi,), (chi,))).valid
    leg2 = valid(scheme, std2, Inference((chi,), (psi,))).valid
    return atoms_ok, leg1, leg2


def classical_interpolant(phi: Formula, psi: Formula) -> Formula:
    """Strongest classical interpolant: the shared-atom minterms of phi's models."""
    shared = _shared(phi, psi)
    minterms: dict[tuple[Literal, ...], None] = {}
    for v in bivaluations(atoms(phi)):
        if classical_value(v, phi):
            minterms.setdefault(tuple(Literal(a, v[a.name] is TV.T) for a in shared))
    if not minterms:
        return And(shared[0], Neg(shared[0]))
    ordered = sorted(minterms, key=lambda lits: tuple(lit.sort_key for lit in lits))
    return fold_disj([fold_conj([lit.to_formula() for lit in lits]) for lits in ordered])


def split_interpolant(scheme: Scheme, std1: Standard, std2: Standard, phi: Formula, psi: Formula) -> InterpolationResult:
    if std1 not in SYNTHESIS_STANDARDS[0] or std2 not in SYNTHESIS_STANDARDS[1]:
        raise ValueError(f"synthesis supports std1 in {{ss, st}} and std2 in {{tt, st}}, got {std1}/{std2}")
    result = InterpolationResult(Outcome.NO_INTERPOLANT, scheme, std1, std2, phi, psi)
    shared = _shared(phi, psi)
    if not shared:
        result.outcome = Outcome.NO_SHARED_ATOMS
        return result
    classical = classically_valid(Inference((phi,), (psi,)))
    if not classical.valid:
        result.outcome = Outcome.NOT_CLASSICALLY_VALID
        result.counter = classical.counter
        return result

    strategy = strategy_for(scheme)
    if strategy is Strategy.UNSUPPORTED:
        if (std1, std2) == (Standard.ST, Standard.ST):
            return _finish(result, classical_interpolant(phi, psi), "classical")
        return _clone_search(result)

    block = blocked(scheme, phi, psi)
    result.block = block
    witness = block.defeats(std1, std2)
    if witness is not None:
        # every candidate over the shared atoms is 1/2 on the witness
        result.certificate = "block"
        if len(shared) <= clones.arity_cap():
            existence = clones.interpolant_exists(scheme, std1, std2, phi, psi)
            if existence.exists:
                raise InternalError(
                    f"block certificate contradicted by clone witness {to_text(existence.witness)}"
                )
            result.clone_confirmed = True
        return result

    phi_side, psi_side = (Kind.C, Kind.F) if strategy is Strategy.CF else (Kind.D, Kind.E)
    phi_satisfiable = bool((value_vector(scheme, phi, tuple(a.name for a in atoms(phi))) == TV.T).any())
    if phi_satisfiable and block.ss_witness is None:
        kind = phi_side
    elif block.tt_witness is None:
        kind = psi_side
    else:
        kind = phi_side
    try:
        info = aggregate_info(kind, scheme, phi, psi)
    except EmptyClauseError:
        log.warning("construction %s hit an empty clause for %s => %s", kind.value, to_text(phi), to_text(psi))
        result.fallback = True
        return _clone_search(result)
    result.stats = {
        "valuations_scanned": info.valuations_scanned,
        "clauses": info.clauses,
        "dedup_count": info.dedup_count,
    }
    return _finish(result, info.formula, kind.value)


def _finish(result: InterpolationResult, chi: Formula, strategy: str) -> InterpolationResult:
    atoms_ok, leg1, leg2 = verify(result.scheme, result.std1, result.std2, result.phi, result.psi, chi)
    if atoms_ok and leg1 and leg2:
        result.outcome = Outcome.INTERPOLANT
        result.chi, result.strategy = chi, strategy
        result.atoms_ok, result.leg1, result.leg2 = atoms_ok, leg1, leg2
        return result
    log.warning("construction %s failed verification for %s => %s", strategy, to_text(result.phi), to_text(result.psi))
    result.fallback = True
    return _clone_search(result)


def _clone_search(result: InterpolationResult) -> InterpolationResult:
    shared = _shared(result.phi, result.psi)
    if len(shared) > clones.arity_cap():
        result.outcome = Outcome.UNSUPPORTED
        return result
    existence = clones.interpolant_exists(result.scheme, result.std1, result.std2, result.phi, result.psi)
    if not existence.exists:
        result.outcome = Outcome.NO_INTERPOLANT
        result.certificate = "clone-none"
        result.clone_confirmed = True
        result.stats = dict(result.stats, clone_elements=existence.checked)
        return result
    chi = existence.witness
    atoms_ok, leg1, leg2 = verify(result.scheme, result.std1, result.std2, result.phi, result.psi, chi)
    if not (atoms_ok and leg1 and leg2):
        raise InternalError(f"clone witness {to_text(chi)} failed verification")
    result.outcome = Outcome.INTERPOLANT
    result.chi, result.strategy = chi, "clone-search"
    result.atoms_ok, result.leg1, result.leg2 = atoms_ok, leg1, leg2
    result.stats = dict(result.stats, clone_elements=existence.checked)
    return result
