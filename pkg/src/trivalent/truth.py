"""Truth values, operation tables and the sixteen Boolean normal monotonic schemes.

Schemes are not only hard-coded: :func:`all_schemes` derives them by filtering
every candidate table for Boolean normality and monotonicity, then checks the
result cell-for-cell against the published choices for the unsettled cells.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union


class TV(enum.IntEnum):
    """A truth value. Integer order is the truth order F < N < T."""

    F = 0
    N = 1
    T = 2

    def __str__(self) -> str:
        return _TV_TEXT[self]

    @property
    def is_classical(self) -> bool:
        return self is not TV.N

    @classmethod
    def parse(cls, text: str) -> "TV":
        key = text.strip()
        try:
            return _TV_PARSE[key]
        except KeyError:
            raise ValueError(f"unknown truth value {text!r}; expected 0, 1/2 or 1") from None


_TV_TEXT = {TV.F: "0", TV.N: "1/2", TV.T: "1"}
_TV_PARSE = {"0": TV.F, "1/2": TV.N, "½": TV.N, "0.5": TV.N, "1": TV.T}

VALUES: tuple[TV, ...] = (TV.F, TV.N, TV.T)


def info_leq(a: TV, b: TV) -> bool:
    """Information order: N lies below both classical values, F and T are incomparable."""
    return a == b or a is TV.N


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class UnaryTable:
    out: tuple[TV, TV, TV]

    arity = 1

    def __call__(self, a: TV) -> TV:
        return self.out[a]

    def rows(self) -> Iterator[tuple[tuple[TV, ...], TV]]:
        for a in VALUES:
            yield (a,), self.out[a]


@dataclass(frozen=True)
class BinaryTable:
    """Row-major table: ``out[3 * a + b]`` is the value at ``(a, b)``."""

    out: tuple[TV, ...]

    arity = 2

    def __post_init__(self) -> None:
        if len(self.out) != 9:
            raise ValueError("a binary table has exactly 9 cells")

    def __call__(self, a: TV, b: TV) -> TV:
        return self.out[3 * a + b]

    def rows(self) -> Iterator[tuple[tuple[TV, ...], TV]]:
        for a, b in itertools.product(VALUES, repeat=2):
            yield (a, b), self.out[3 * a + b]

    def with_cell(self, a: TV, b: TV, value: TV) -> "BinaryTable":
        cells = list(self.out)
        cells[3 * a + b] = value
        return BinaryTable(tuple(cells))


Table = Union[UnaryTable, BinaryTable]

CLASSICAL_OPS: dict[str, tuple[int, Callable[..., bool]]] = {
    "not": (1, lambda a: not a),
    "and": (2, lambda a, b: a and b),
    "or": (2, lambda a, b: a or b),
}


def _make_table(arity: int, cells: Sequence[TV]) -> Table:
    return UnaryTable(tuple(cells)) if arity == 1 else BinaryTable(tuple(cells))


def is_boolean_normal(table: Table, classical_op: str) -> bool:
    """True iff ``table`` agrees with the two-valued operation on classical inputs."""
    arity, op = CLASSICAL_OPS[classical_op]
    if arity != table.arity:
        raise ValueError(f"{classical_op!r} has arity {arity}, table has arity {table.arity}")
    for args in itertools.product((TV.F, TV.T), repeat=arity):
        expected = TV.T if op(*(a is TV.T for a in args)) else TV.F
        if table(*args) is not expected:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _related_pairs(arity: int) -> tuple[tuple[tuple[TV, ...], tuple[TV, ...]], ...]:
    # pairs of distinct argument tuples related pointwise by info_leq
    tuples = list(itertools.product(VALUES, repeat=arity))
    return tuple(
        (xs, ys)
        for xs in tuples
        for ys in tuples
        if xs != ys and all(info_leq(x, y) for x, y in zip(xs, ys))
    )


def is_monotonic(table: Table) -> bool:
    """True iff the table preserves the information order in all arguments jointly."""
    return all(info_leq(table(*xs), table(*ys)) for xs, ys in _related_pairs(table.arity))


def enumerate_bnm_tables(arity: int, classical_op: str) -> list[Table]:
    """All Boolean normal monotonic tables for ``classical_op``, in lexicographic order.

    Every one of the 3**(3**arity) candidate tables is generated; the order is
    lexicographic over the output cells with F < N < T.
    """
    op_arity, _ = CLASSICAL_OPS[classical_op]
    if arity not in (1, 2) or arity != op_arity:
        raise ValueError(f"cannot enumerate {arity}-ary tables for {classical_op!r}")
    found = []
    for cells in itertools.product(VALUES, repeat=3**arity):
        table = _make_table(arity, cells)
        if is_boolean_normal(table, classical_op) and is_monotonic(table):
            found.append(table)
    return found


# ---------------------------------------------------------------------------
# schemes


class ConnChoice(enum.Enum):
    SK = "SK"
    WK = "WK"
    LMK = "LMK"
    RMK = "RMK"

    def __str__(self) -> str:
        return self.value


CHOICES: tuple[ConnChoice, ...] = (ConnChoice.SK, ConnChoice.WK, ConnChoice.LMK, ConnChoice.RMK)

# the two unsettled cells of each connective
CONJ_UNSETTLED = ((TV.F, TV.N), (TV.N, TV.F))
DISJ_UNSETTLED = ((TV.T, TV.N), (TV.N, TV.T))

CONJ_CELLS: dict[ConnChoice, tuple[TV, TV]] = {
    ConnChoice.SK: (TV.F, TV.F),
    ConnChoice.WK: (TV.N, TV.N),
    ConnChoice.LMK: (TV.F, TV.N),
    ConnChoice.RMK: (TV.N, TV.F),
}
DISJ_CELLS: dict[ConnChoice, tuple[TV, TV]] = {
    ConnChoice.SK: (TV.T, TV.T),
    ConnChoice.WK: (TV.N, TV.N),
    ConnChoice.LMK: (TV.T, TV.N),
    ConnChoice.RMK: (TV.N, TV.T),
}

_F, _N, _T = TV.F, TV.N, TV.T
NEGATION = UnaryTable((_T, _N, _F))
# settled cells; the unsettled ones are overwritten per choice
_CONJ_BASE = BinaryTable((_F, _F, _F,
                          _F, _N, _N,
                          _F, _N, _T))
_DISJ_BASE = BinaryTable((_F, _N, _T,
                          _N, _N, _T,
                          _T, _T, _T))


def conj_table(choice: ConnChoice) -> BinaryTable:
    table = _CONJ_BASE
    for (a, b), value in zip(CONJ_UNSETTLED, CONJ_CELLS[choice]):
        table = table.with_cell(a, b, value)
    return table


def disj_table(choice: ConnChoice) -> BinaryTable:
    table = _DISJ_BASE
    for (a, b), value in zip(DISJ_UNSETTLED, DISJ_CELLS[choice]):
        table = table.with_cell(a, b, value)
    return table


class SchemeDerivationError(AssertionError):
    """Derived tables disagree with the hard-coded cell choices."""


@dataclass(frozen=True, eq=False)
class Scheme:
    conj_choice: ConnChoice
    disj_choice: ConnChoice
    neg: UnaryTable
    conj: BinaryTable
    disj: BinaryTable

    @property
    def name(self) -> str:
        return f"{self.conj_choice}/{self.disj_choice}"

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Scheme({self.name})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scheme):
            return NotImplemented
        return (self.conj_choice, self.disj_choice) == (other.conj_choice, other.disj_choice)

    def __hash__(self) -> int:
        return hash((self.conj_choice, self.disj_choice))

    @property
    def sort_key(self) -> tuple[int, int]:
        return CHOICES.index(self.conj_choice), CHOICES.index(self.disj_choice)

    def unsettled_cells(self) -> list[tuple[str, TV, TV, TV]]:
        """The four cells that distinguish this scheme, as (op, a, b, value)."""
        cells = [("and", a, b, self.conj(a, b)) for a, b in CONJ_UNSETTLED]
        cells += [("or", a, b, self.disj(a, b)) for a, b in DISJ_UNSETTLED]
        return cells


def _identify(table: BinaryTable, unsettled, cells_by_choice) -> ConnChoice:
    observed = tuple(table(a, b) for a, b in unsettled)
    for choice, cells in cells_by_choice.items():
        if cells == observed:
            return choice
    raise SchemeDerivationError(f"derived table {table.out} matches no known choice")


@functools.lru_cache(maxsize=None)
def all_schemes() -> tuple[Scheme, ...]:
    """The 16 schemes, ordered by (conjunction choice, disjunction choice)."""
    negs = enumerate_bnm_tables(1, "not")
    conjs = enumerate_bnm_tables(2, "and")
    disjs = enumerate_bnm_tables(2, "or")
    if negs != [NEGATION]:
        raise SchemeDerivationError(f"expected a unique negation, derived {negs}")
    if len(conjs) != 4 or len(disjs) != 4:
        raise SchemeDerivationError(f"expected 4+4 binary tables, got {len(conjs)}+{len(disjs)}")

    derived_conj = {_identify(t, CONJ_UNSETTLED, CONJ_CELLS): t for t in conjs}
    derived_disj = {_identify(t, DISJ_UNSETTLED, DISJ_CELLS): t for t in disjs}
    for choice in CHOICES:
        if derived_conj.get(choice) != conj_table(choice):
            raise SchemeDerivationError(f"conjunction {choice} disagrees with its cell constants")
        if derived_disj.get(choice) != disj_table(choice):
            raise SchemeDerivationError(f"disjunction {choice} disagrees with its cell constants")

    return tuple(
        Scheme(c, d, NEGATION, derived_conj[c], derived_disj[d])
        for c in CHOICES
        for d in CHOICES
    )


def get_scheme(name: str | Scheme) -> Scheme:
    """Look up a scheme by its ``"<conj>/<disj>"`` name, case-insensitively."""
    if isinstance(name, Scheme):
        return name
    parts = name.strip().upper().split("/")
    if len(parts) != 2:
        raise ValueError(f"scheme name must look like 'SK/WK', got {name!r}")
    try:
        conj, disj = (ConnChoice(part.strip()) for part in parts)
    except ValueError:
        raise ValueError(f"unknown scheme {name!r}; choices are SK, WK, LMK, RMK") from None
    return all_schemes()[4 * CHOICES.index(conj) + CHOICES.index(disj)]
