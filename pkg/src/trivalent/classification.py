"""Verdict tables for every (scheme, premise standard, conclusion standard) cell.

A cell fails when a known counterexample applies; the counterexample is
re-certified from scratch (classical validity, then exact non-existence of an
interpolant). Every other cell is tested against a finite formula corpus: each
classically valid pair with a shared atom must either get a verified
interpolant or be a blocked instance confirmed by clone search.
"""

from __future__ import annotations

import csv
import enum
import functools
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import clones
from .interpolation import Outcome, split_interpolant
from .semantics import (
    Standard,
    STANDARDS,
    Inference,
    classical_matrix,
    classical_validity_matrix,
    classically_valid,
    evaluate,
    value_vector,
)
from .syntax import Formula, atoms, enumerate_formulas, parse, to_text
from .truth import TV, ConnChoice, Scheme, all_schemes, get_scheme

SS, TT, ST, TS, SSTT = Standard.SS, Standard.TT, Standard.ST, Standard.TS, Standard.SSTT

# schemes where at least one connective is left- or right-monotonic and the
# other is not Strong Kleene
FAILING_SCHEMES: frozenset[str] = frozenset(
    {"LMK/LMK", "LMK/RMK", "LMK/WK", "RMK/LMK", "RMK/RMK", "RMK/WK", "WK/LMK", "WK/RMK"}
)

# the standard pairs that hold exactly for the schemes outside FAILING_SCHEMES
MIXED_PAIRS: tuple[tuple[Standard, Standard], ...] = ((SS, TT), (SS, ST), (ST, TT))
SUITE_PAIRS: tuple[tuple[Standard, Standard], ...] = MIXED_PAIRS + ((ST, ST),)


def in_failing_set(scheme: Scheme) -> bool:
    return scheme.name in FAILING_SCHEMES


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"  # corpus budget exhausted

    @property
    def mark(self) -> str:
        return _MARKS[self]


_MARKS = {Status.HOLDS: "✓", Status.FAILS: "✗", Status.INCONCLUSIVE: "?"}


@dataclass(frozen=True)
class Cell:
    scheme: Scheme
    std1: Standard
    std2: Standard

    def __str__(self) -> str:
        return f"{self.scheme.name} {self.std1}/{self.std2}"


def all_cells() -> list[Cell]:
    """The 400 cells, schemes SK < WK < LMK < RMK, standards ss < tt < st < ts < sstt."""
    return [Cell(s, a, b) for s in all_schemes() for a in STANDARDS for b in STANDARDS]


# ---------------------------------------------------------------------------
# counterexample catalog

_TT_FIRST = ("p | (q & ~q)", "p")
_SS_SECOND = ("p", "p & (q | ~q)")
_TS_ANY = ("p", "p")

# (connective, choice, formula), in listing order. The two disjunction rows
# are attached to the opposite choice from the one they are usually listed
# under: as usually listed, each admits an interpolant.
_PQ_ROWS = (
    ("or", ConnChoice.LMK, "(r | q) & (~r | p)"),
    ("or", ConnChoice.RMK, "(q | r) & (p | ~r)"),
    ("and", ConnChoice.LMK, "(r & q) | (~r & p)"),
    ("and", ConnChoice.RMK, "(q & r) | (p & ~r)"),
)
_POR_ROWS = (
    ("and", ConnChoice.RMK, "(q & r) | (p & ~r)"),
    ("and", ConnChoice.LMK, "(r & q) | (~r & p)"),
    ("or", ConnChoice.RMK, "(q | r) & (p | ~r)"),
    ("or", ConnChoice.LMK, "(r | q) & (~r | p)"),
)
# the disjunction rows under their usual choice, kept for regression tests
LISTED_OR_ROWS = {ConnChoice.LMK: "(q | r) & (p | ~r)", ConnChoice.RMK: "(r | q) & (~r | p)"}


class Family(enum.Enum):
    CONJ_PHI = "conj_phi"  # phi = p & q, used for ss/tt and st/tt
    DISJ_PSI = "disj_psi"  # psi = p | q, used for ss/st


def _row_matches(scheme: Scheme, op: str, choice: ConnChoice) -> bool:
    return (scheme.conj_choice if op == "and" else scheme.disj_choice) is choice


def family_rows(scheme: Scheme, family: Family) -> list[tuple[Formula, Formula]]:
    """Every family row whose connective condition the scheme meets, in listing order.

    This ignores membership in the failing set: outside it the rows are not
    counterexamples.
    """
    if family is Family.CONJ_PHI:
        return [(parse("p & q"), parse(text)) for op, c, text in _PQ_ROWS if _row_matches(scheme, op, c)]
    return [(parse(text), parse("p | q")) for op, c, text in _POR_ROWS if _row_matches(scheme, op, c)]


def catalog_rows(cell: Cell) -> list[tuple[Formula, Formula]]:
    """All catalog counterexamples applicable to ``cell``, preferred first."""
    std1, std2 = cell.std1, cell.std2
    if std1 in (TT, SSTT):
        return [tuple(map(parse, _TT_FIRST))]
    if std2 in (SS, SSTT):
        return [tuple(map(parse, _SS_SECOND))]
    if TS in (std1, std2):
        return [tuple(map(parse, _TS_ANY))]
    if not in_failing_set(cell.scheme):
        return []
    if (std1, std2) in ((SS, TT), (ST, TT)):
        return family_rows(cell.scheme, Family.CONJ_PHI)
    if (std1, std2) == (SS, ST):
        return family_rows(cell.scheme, Family.DISJ_PSI)
    return []


def catalog_counterexample(cell: Cell) -> tuple[Formula, Formula] | None:
    rows = catalog_rows(cell)
    return rows[0] if rows else None


# ---------------------------------------------------------------------------
# certificates


class CertificateError(AssertionError):
    """A catalog counterexample failed to re-validate."""


@dataclass(frozen=True)
class Certificate:
    kind: str  # "clone-none" or "ts-empty"
    phi: Formula
    psi: Formula
    shared: tuple[str, ...]
    clone_elements: int | None = None


def _all_n(f: Formula) -> dict[str, TV]:
    return {a.name: TV.N for a in atoms(f)}


def certify(cell: Cell, phi: Formula, psi: Formula) -> Certificate:
    """Re-check a counterexample from scratch; raises CertificateError if it does not hold."""
    if not classically_valid(Inference.of(phi, psi)).valid:
        raise CertificateError(f"{to_text(phi)} => {to_text(psi)} is not classically valid")
    shared = clones.shared_atoms(phi, psi)
    if not shared:
        raise CertificateError("counterexample has no shared atom")
    scheme = cell.scheme

    if TS in (cell.std1, cell.std2) and cell.std1 not in (TT, SSTT) and cell.std2 not in (SS, SSTT):
        # Any formula over the shared atoms is 1/2 when they all are. A ts leg
        # then needs a tolerant premise to force a strict conclusion, which
        # fails as soon as the other side is 1/2 there too.
        if cell.std1 is TS and evaluate(scheme, _all_n(phi), phi) is not TV.N:
            raise CertificateError("phi is not 1/2 on the all-1/2 valuation")
        if cell.std2 is TS and evaluate(scheme, _all_n(psi), psi) is not TV.N:
            raise CertificateError("psi is not 1/2 on the all-1/2 valuation")
        kind = "ts-empty"
    else:
        kind = "clone-none"

    if len(shared) > clones.arity_cap():
        if kind == "ts-empty":
            return Certificate(kind, phi, psi, shared)
        raise CertificateError(f"{len(shared)} shared atoms exceed the clone arity cap")
    existence = clones.interpolant_exists(scheme, cell.std1, cell.std2, phi, psi)
    if existence.exists:
        raise CertificateError(f"{to_text(existence.witness)} interpolates {to_text(phi)} => {to_text(psi)}")
    return Certificate(kind, phi, psi, shared, existence.checked)


# ---------------------------------------------------------------------------
# corpus suite


@dataclass(frozen=True)
class CorpusSpec:
    atoms: tuple[str, ...] = ("p", "q", "r")
    max_depth: int = 2
    max_pairs: int | None = None  # budget on distinct class pairs per scheme

    def describe(self) -> str:
        budget = "" if self.max_pairs is None else f", at most {self.max_pairs} class pairs"
        return f"atoms {{{','.join(self.atoms)}}}, depth <= {self.max_depth}{budget}"


DEFAULT_CORPUS = CorpusSpec()


@functools.lru_cache(maxsize=None)
def corpus(spec: CorpusSpec) -> tuple[Formula, ...]:
    return tuple(enumerate_formulas(spec.atoms, spec.max_depth))


@dataclass(frozen=True)
class Classes:
    """Corpus formulas grouped by (atom set, truth table) under one scheme.

    Synthesis, verification and clone search depend on a formula only through
    this key, so one representative per class stands in for all its members.
    """

    representatives: tuple[Formula, ...]
    sizes: tuple[int, ...]


@functools.lru_cache(maxsize=None)
def classes(scheme: Scheme, spec: CorpusSpec) -> Classes:
    groups: dict[tuple, list[Formula]] = {}
    for f in corpus(spec):
        pool = tuple(a.name for a in atoms(f))
        groups.setdefault((pool, value_vector(scheme, f, pool).tobytes()), []).append(f)
    reps = tuple(members[0] for members in groups.values())
    return Classes(reps, tuple(len(members) for members in groups.values()))


@dataclass
class PairTally:
    pairs: int = 0  # corpus pairs, counted with class multiplicity
    class_pairs: int = 0
    synthesized: int = 0
    blocked_confirmed: int = 0
    fallbacks: int = 0  # found only after a construction failed verification
    no_interpolant: list[tuple[Formula, Formula, str]] = field(default_factory=list)
    unresolved: list[tuple[Formula, Formula, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.no_interpolant and not self.unresolved and self.fallbacks == 0

    def to_record(self) -> dict[str, Any]:
        return {
            "pairs": self.pairs,
            "class_pairs": self.class_pairs,
            "synthesized": self.synthesized,
            "blocked_confirmed": self.blocked_confirmed,
            "fallbacks": self.fallbacks,
            "no_interpolant": [[to_text(a), to_text(b), why] for a, b, why in self.no_interpolant],
            "unresolved": [[to_text(a), to_text(b), why] for a, b, why in self.unresolved],
        }


@dataclass
class SuiteReport:
    scheme: Scheme
    spec: CorpusSpec
    formulas: int
    classes: int
    tallies: dict[tuple[Standard, Standard], PairTally]
    exhausted: bool = False


def candidate_pairs(scheme: Scheme, spec: CorpusSpec) -> list[tuple[int, int]]:
    """Class-representative index pairs that are classically valid and share an atom."""
    cls = classes(scheme, spec)
    reps = cls.representatives
    valid = classical_validity_matrix(classical_matrix(reps, spec.atoms))
    masks = np.array([sum(1 << spec.atoms.index(a.name) for a in atoms(f)) for f in reps])
    share = (masks[:, None] & masks[None, :]) != 0
    return [tuple(ij) for ij in np.argwhere(valid & share).tolist()]


def run_suite(scheme: Scheme, spec: CorpusSpec = DEFAULT_CORPUS, pairs: Sequence[tuple[Standard, Standard]] | None = None) -> SuiteReport:
    if pairs is None:
        pairs = SUITE_PAIRS if not in_failing_set(scheme) else ((ST, ST),)
    return _run_suite(scheme, spec, tuple(pairs))


@functools.lru_cache(maxsize=None)
def _run_suite(scheme: Scheme, spec: CorpusSpec, std_pairs: tuple[tuple[Standard, Standard], ...]) -> SuiteReport:
    cls = classes(scheme, spec)
    reps, sizes = cls.representatives, cls.sizes
    todo = candidate_pairs(scheme, spec)
    exhausted = spec.max_pairs is not None and len(todo) > spec.max_pairs
    if exhausted:
        todo = todo[: spec.max_pairs]
    tallies = {sp: PairTally() for sp in std_pairs}
    for i, j in todo:
        phi, psi = reps[i], reps[j]
        weight = sizes[i] * sizes[j]
        for sp in std_pairs:
            tally = tallies[sp]
            tally.pairs += weight
            tally.class_pairs += 1
            result = split_interpolant(scheme, sp[0], sp[1], phi, psi)
            if result.outcome is Outcome.INTERPOLANT:
                tally.synthesized += weight
                if result.fallback:
                    tally.fallbacks += weight
            elif result.outcome is Outcome.NO_INTERPOLANT and result.certificate == "block":
                if result.clone_confirmed:
                    tally.blocked_confirmed += weight
                else:
                    tally.unresolved.append((phi, psi, "block not confirmed by clone search"))
            elif result.outcome is Outcome.NO_INTERPOLANT:
                tally.no_interpolant.append((phi, psi, result.certificate or "none"))
            else:
                tally.unresolved.append((phi, psi, result.outcome.value))
    return SuiteReport(scheme, spec, len(corpus(spec)), len(reps), tallies, exhausted)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    cell: Cell
    status: Status
    certificate: Certificate | None = None
    suite: PairTally | None = None
    corpus: CorpusSpec | None = None
    note: str = ""

    @property
    def phi(self) -> Formula | None:
        return self.certificate.phi if self.certificate else None

    @property
    def psi(self) -> Formula | None:
        return self.certificate.psi if self.certificate else None

    def to_record(self) -> dict[str, Any]:
        return {
            "scheme": self.cell.scheme.name,
            "std1": str(self.cell.std1),
            "std2": str(self.cell.std2),
            "status": self.status.value,
            "phi": to_text(self.phi) if self.phi is not None else None,
            "psi": to_text(self.psi) if self.psi is not None else None,
            "certificate": self.certificate.kind if self.certificate else None,
            "clone_elements": self.certificate.clone_elements if self.certificate else None,
            "corpus": self.corpus.describe() if self.corpus else None,
            "suite": self.suite.to_record() if self.suite else None,
            "note": self.note,
        }


def classify_cell(cell: Cell, corpus_budget: CorpusSpec = DEFAULT_CORPUS) -> Verdict:
    rows = catalog_rows(cell)
    if rows:
        phi, psi = rows[0]
        return Verdict(cell, Status.FAILS, certify(cell, phi, psi))
    std_pair = (cell.std1, cell.std2)
    if std_pair not in SUITE_PAIRS:
        raise AssertionError(f"no catalog entry and no suite for {cell}")
    report = run_suite(cell.scheme, corpus_budget)
    if std_pair not in report.tallies:
        # a failing-set scheme whose catalog did not cover this pair
        report = run_suite(cell.scheme, corpus_budget, (std_pair,))
    tally = report.tallies[std_pair]
    if tally.no_interpolant:
        phi, psi, _ = tally.no_interpolant[0]
        return Verdict(cell, Status.FAILS, certify(cell, phi, psi), tally, corpus_budget, "found by corpus")
    if report.exhausted or tally.unresolved:
        return Verdict(cell, Status.INCONCLUSIVE, None, tally, corpus_budget, "corpus budget exhausted")
    return Verdict(cell, Status.HOLDS, None, tally, corpus_budget)


def _classify_scheme(args: tuple[str, CorpusSpec]) -> list[Verdict]:
    name, spec = args
    scheme = get_scheme(name)
    return [classify_cell(Cell(scheme, a, b), spec) for a in STANDARDS for b in STANDARDS]


def classify_all(spec: CorpusSpec = DEFAULT_CORPUS, schemes: Iterable[Scheme] | None = None, jobs: int = 1) -> list[Verdict]:
    """Verdicts for every cell of the given schemes, in canonical order."""
    names = [s.name for s in (schemes if schemes is not None else all_schemes())]
    work = [(name, spec) for name in names]
    if jobs <= 1:
        chunks = map(_classify_scheme, work)
        return [v for chunk in chunks for v in chunk]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunks = list(pool.map(_classify_scheme, work))
    # verdicts carry scheme objects from the workers; rebind to the canonical ones
    return [Verdict(Cell(get_scheme(v.cell.scheme.name), v.cell.std1, v.cell.std2), v.status, v.certificate, v.suite, v.corpus, v.note) for chunk in chunks for v in chunk]


# ---------------------------------------------------------------------------
# rendering

STANDARD_LABELS = {SS: "ss", TT: "tt", ST: "st", TS: "ts", SSTT: "ss∩tt"}
MIXED_MARK = "✓/✗"
DEPENDENT_MARK = "dep"
TABLE_KINDS = ("independent", "schemes", "full")
TABLE_FORMATS = ("text", "markdown", "csv")


def _aggregate_mark(statuses: Sequence[Status], mixed: str) -> str:
    kinds = set(statuses)
    if len(kinds) == 1:
        return next(iter(kinds)).mark
    if Status.INCONCLUSIVE in kinds:
        return Status.INCONCLUSIVE.mark
    return mixed


def _by_cell(verdicts: Iterable[Verdict]) -> dict[tuple[str, Standard, Standard], Verdict]:
    return {(v.cell.scheme.name, v.cell.std1, v.cell.std2): v for v in verdicts}


def _grid_text(corner: str, cols: Sequence[str], rows: Sequence[tuple[str, Sequence[str]]]) -> str:
    widths = [max(len(corner), *(len(r[0]) for r in rows))]
    for k, c in enumerate(cols):
        widths.append(max(len(c), *(len(r[1][k]) for r in rows)))
    lines = []
    for cells in [(corner, *cols)] + [(label, *marks) for label, marks in rows]:
        lines.append("  ".join(text.ljust(w) for text, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _grid_markdown(corner: str, cols: Sequence[str], rows: Sequence[tuple[str, Sequence[str]]]) -> str:
    lines = ["| " + " | ".join((corner, *cols)) + " |", "|" + "---|" * (len(cols) + 1)]
    for label, marks in rows:
        lines.append("| " + " | ".join((label, *marks)) + " |")
    return "\n".join(lines) + "\n"


def _csv(records: Iterable[Sequence[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["scheme", "std1", "std2", "status", "phi", "psi", "certificate"])
    writer.writerows(records)
    return out.getvalue()


def _verdict_row(scheme: str, v: Verdict, status: str | None = None) -> list[str]:
    return [
        scheme,
        str(v.cell.std1),
        str(v.cell.std2),
        status or v.status.value,
        to_text(v.phi) if v.phi is not None else "",
        to_text(v.psi) if v.psi is not None else "",
        v.certificate.kind if v.certificate else "",
    ]


def render_table(kind: str, fmt: str = "text", verdicts: Sequence[Verdict] | None = None, jobs: int = 1) -> str:
    """Render one of the verdict tables; computes the verdicts when not given."""
    if kind not in TABLE_KINDS:
        raise ValueError(f"unknown table kind {kind!r}; choose from {', '.join(TABLE_KINDS)}")
    if fmt not in TABLE_FORMATS:
        raise ValueError(f"unknown table format {fmt!r}; choose from {', '.join(TABLE_FORMATS)}")
    schemes = all_schemes()
    if verdicts is None:
        verdicts = classify_all(jobs=jobs)
    cells = _by_cell(verdicts)

    if kind == "schemes":
        choices = [c.value for c in (ConnChoice.SK, ConnChoice.WK, ConnChoice.LMK, ConnChoice.RMK)]
        if fmt == "csv":
            return _csv(_verdict_row(s.name, cells[(s.name, SS, TT)]) for s in schemes)
        rows = [(c, [cells[(f"{c}/{d}", SS, TT)].status.mark for d in choices]) for c in choices]
        corner = "∧ \\ ∨"
        return (_grid_text if fmt == "text" else _grid_markdown)(corner, choices, rows)

    mixed = DEPENDENT_MARK if kind == "independent" else MIXED_MARK
    marks: dict[tuple[Standard, Standard], str] = {}
    for a in STANDARDS:
        for b in STANDARDS:
            marks[(a, b)] = _aggregate_mark([cells[(s.name, a, b)].status for s in schemes], mixed)

    if fmt == "csv":
        if kind == "full":
            return _csv(_verdict_row(s.name, cells[(s.name, a, b)]) for s in schemes for a in STANDARDS for b in STANDARDS)
        records = []
        for a in STANDARDS:
            for b in STANDARDS:
                status = _status_word(marks[(a, b)])
                first = cells[(schemes[0].name, a, b)]
                row = _verdict_row("*", first, status)
                if status == DEPENDENT_MARK:
                    row[4:] = ["", "", ""]
                records.append(row)
        return _csv(records)

    labels = [STANDARD_LABELS[s] for s in STANDARDS]
    rows = [(STANDARD_LABELS[a], [marks[(a, b)] for b in STANDARDS]) for a in STANDARDS]
    return (_grid_text if fmt == "text" else _grid_markdown)("C \\ C'", labels, rows)


def _status_word(mark: str) -> str:
    for status in Status:
        if status.mark == mark:
            return status.value
    return DEPENDENT_MARK


def count_holds(verdicts: Iterable[Verdict]) -> int:
    return sum(v.status is Status.HOLDS for v in verdicts)
