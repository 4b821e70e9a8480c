"""Valuations, evaluation under a scheme, and the five intersective mixed standards.

Validity is decided by exhaustive enumeration over the atoms of the inference.
Valuations are plain ``dict`` objects mapping atom names to :class:`TV`; they are
enumerated with the last atom varying fastest and values in the order F < N < T,
so index ``i`` of a valuation sweep is the base-3 number ``i`` read digit-wise.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .syntax import And, Atom, Formula, Neg, Or, atoms, parse, to_text
from .truth import TV, Scheme, info_leq

Valuation = dict[str, TV]

STRICT = frozenset({TV.T})
TOLERANT = frozenset({TV.T, TV.N})


class MissingAtomError(LookupError):
    def __init__(self, atom: str):
        self.atom = atom
        super().__init__(f"valuation does not assign atom {atom!r}")


class Standard(enum.Enum):
    SS = "ss"
    TT = "tt"
    ST = "st"
    TS = "ts"
    SSTT = "sstt"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Standard":
        key = text.strip().lower().replace("∩", "").replace("&", "").replace("_", "")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown standard {text!r}; expected one of ss, tt, st, ts, sstt") from None

    @property
    def components(self) -> tuple[tuple[frozenset[TV], frozenset[TV]], ...]:
        """(premise set, conclusion set) pairs that must all be respected."""
        return _COMPONENTS[self]


_COMPONENTS = {
    Standard.SS: ((STRICT, STRICT),),
    Standard.TT: ((TOLERANT, TOLERANT),),
    Standard.ST: ((STRICT, TOLERANT),),
    Standard.TS: ((TOLERANT, STRICT),),
    Standard.SSTT: ((STRICT, STRICT), (TOLERANT, TOLERANT)),
}

STANDARDS: tuple[Standard, ...] = tuple(Standard)


@dataclass(frozen=True)
class Inference:
    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]

    @classmethod
    def of(cls, premises: Formula | Iterable[Formula], conclusions: Formula | Iterable[Formula]) -> "Inference":
        def as_tuple(x):
            return (x,) if isinstance(x, (Atom, Neg, And, Or)) else tuple(x)

        return cls(as_tuple(premises), as_tuple(conclusions))

    @classmethod
    def parse(cls, text: str) -> "Inference":
        """Parse ``"G1 ; G2 => D1 ; D2"``; either side may be empty."""
        if text.count("=>") != 1:
            raise ValueError(f"an inference needs exactly one '=>': {text!r}")
        left, right = text.split("=>")

        def side(part: str) -> tuple[Formula, ...]:
            return tuple(parse(chunk) for chunk in part.split(";") if chunk.strip())

        return cls(side(left), side(right))

    def atoms(self) -> tuple[Atom, ...]:
        found: set[Atom] = set()
        for f in self.premises + self.conclusions:
            found.update(atoms(f))
        return tuple(sorted(found))

    def __str__(self) -> str:
        lhs = " ; ".join(to_text(f) for f in self.premises)
        rhs = " ; ".join(to_text(f) for f in self.conclusions)
        return f"{lhs} => {rhs}".strip()


# ---------------------------------------------------------------------------
# evaluation


def evaluate(scheme: Scheme, v: Mapping[str, TV], f: Formula) -> TV:
    if isinstance(f, Atom):
        try:
            return TV(v[f.name])
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, Neg):
        return scheme.neg(evaluate(scheme, v, f.arg))
    if isinstance(f, And):
        return scheme.conj(evaluate(scheme, v, f.left), evaluate(scheme, v, f.right))
    return scheme.disj(evaluate(scheme, v, f.left), evaluate(scheme, v, f.right))


def classical_value(v: Mapping[str, TV], f: Formula) -> bool:
    """Two-valued evaluation with Python booleans; ``v`` must be classical."""
    if isinstance(f, Atom):
        try:
            value = v[f.name]
        except KeyError:
            raise MissingAtomError(f.name) from None
        if value is TV.N:
            raise ValueError(f"atom {f.name!r} is not classical in a bivaluation")
        return value is TV.T
    if isinstance(f, Neg):
        return not classical_value(v, f.arg)
    if isinstance(f, And):
        return classical_value(v, f.left) and classical_value(v, f.right)
    return classical_value(v, f.left) or classical_value(v, f.right)


def _names(pool: Iterable[Atom | str]) -> tuple[str, ...]:
    return tuple(a.name if isinstance(a, Atom) else a for a in pool)


def valuations(pool: Iterable[Atom | str]) -> Iterator[Valuation]:
    names = _names(pool)
    for values in itertools.product((TV.F, TV.N, TV.T), repeat=len(names)):
        yield dict(zip(names, values))


def bivaluations(pool: Iterable[Atom | str]) -> Iterator[Valuation]:
    names = _names(pool)
    for values in itertools.product((TV.F, TV.T), repeat=len(names)):
        yield dict(zip(names, values))


def valuation_at(pool: Iterable[Atom | str], index: int) -> Valuation:
    """The ``index``-th valuation of :func:`valuations`."""
    names = _names(pool)
    digits = []
    for _ in names:
        index, digit = divmod(index, 3)
        digits.append(TV(digit))
    return dict(zip(names, reversed(digits)))


def format_valuation(v: Mapping[str, TV]) -> str:
    return ", ".join(f"{name}={TV(value)}" for name, value in v.items())


def parse_valuation(text: str) -> Valuation:
    """Parse ``"p=1,q=1/2,r=0"``."""
    v: Valuation = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected name=value, got {item.strip()!r}")
        v[Atom(name.strip()).name] = TV.parse(value)
    return v


# -- vectorised evaluation over a whole valuation sweep -----------------------


@functools.lru_cache(maxsize=None)
def _np_tables(scheme: Scheme) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    neg = np.array(scheme.neg.out, dtype=np.int8)
    conj = np.array(scheme.conj.out, dtype=np.int8).reshape(3, 3)
    disj = np.array(scheme.disj.out, dtype=np.int8).reshape(3, 3)
    return neg, conj, disj


@functools.lru_cache(maxsize=64)
def _coordinates(n: int) -> np.ndarray:
    # row i holds the value of the i-th atom across the 3**n valuations
    idx = np.arange(3**n)
    return np.array([(idx // 3 ** (n - 1 - i)) % 3 for i in range(n)], dtype=np.int8).reshape(n, 3**n)


@functools.lru_cache(maxsize=200_000)
def value_vector(scheme: Scheme, f: Formula, pool: tuple[str, ...]) -> np.ndarray:
    """Values of ``f`` under every valuation of ``pool``, in sweep order (read-only)."""
    coords = _coordinates(len(pool))
    neg, conj, disj = _np_tables(scheme)
    position = {name: i for i, name in enumerate(pool)}

    def walk(node: Formula) -> np.ndarray:
        if isinstance(node, Atom):
            try:
                return coords[position[node.name]]
            except KeyError:
                raise MissingAtomError(node.name) from None
        if isinstance(node, Neg):
            return neg[walk(node.arg)]
        table = conj if isinstance(node, And) else disj
        return table[walk(node.left), walk(node.right)]

    out = np.array(walk(f), dtype=np.int8)
    out.setflags(write=False)
    return out


def _designated(values: np.ndarray, designated: frozenset[TV]) -> np.ndarray:
    if designated is STRICT:
        return values == TV.T
    return values != TV.F


# ---------------------------------------------------------------------------
# consequence


def satisfies(scheme: Scheme, std: Standard, v: Mapping[str, TV], inf: Inference) -> bool:
    for premise_set, conclusion_set in std.components:
        premises_hold = all(evaluate(scheme, v, g) in premise_set for g in inf.premises)
        if premises_hold and not any(evaluate(scheme, v, d) in conclusion_set for d in inf.conclusions):
            return False
    return True


@dataclass(frozen=True)
class Verdict:
    valid: bool
    counter: Valuation | None = None

    def __bool__(self) -> bool:
        return self.valid


def sweep(scheme: Scheme, std: Standard, inf: Inference, pool: Sequence[str], start: int = 0, stop: int | None = None) -> int | None:
    """Index of the first refuting valuation of ``pool`` in ``[start, stop)``, or None.

    Disjoint ranges can be swept independently; the smallest index found wins.
    """
    pool = tuple(pool)
    stop = 3 ** len(pool) if stop is None else stop
    ok = np.ones(3 ** len(pool), dtype=bool)
    for premise_set, conclusion_set in std.components:
        prem = np.ones_like(ok)
        for g in inf.premises:
            prem &= _designated(value_vector(scheme, g, pool), premise_set)
        conc = np.zeros_like(ok)
        for d in inf.conclusions:
            conc |= _designated(value_vector(scheme, d, pool), conclusion_set)
        ok &= ~prem | conc
    bad = np.flatnonzero(~ok[start:stop])
    return int(bad[0]) + start if bad.size else None


def valid(scheme: Scheme, std: Standard, inf: Inference) -> Verdict:
    """Exhaustive validity over the valuations of the atoms of ``inf``."""
    pool = _names(inf.atoms())
    index = sweep(scheme, std, inf, pool)
    if index is None:
        return Verdict(True)
    return Verdict(False, valuation_at(pool, index))


def entails(scheme: Scheme, std: Standard, phi: Formula, psi: Formula) -> bool:
    return valid(scheme, std, Inference((phi,), (psi,))).valid


def classically_valid(inf: Inference) -> Verdict:
    """Two-valued validity over bivaluations; independent of any scheme."""
    for v in bivaluations(inf.atoms()):
        if all(classical_value(v, g) for g in inf.premises) and not any(
            classical_value(v, d) for d in inf.conclusions
        ):
            return Verdict(False, v)
    return Verdict(True)


def is_partial_sharpening(v: Mapping[str, TV], vstar: Mapping[str, TV], sigma: Iterable[Atom | str]) -> bool:
    names = _names(sigma)
    for name in names:
        if name not in v or name not in vstar:
            raise MissingAtomError(name)
    return all(info_leq(v[name], vstar[name]) for name in names)


# ---------------------------------------------------------------------------
# batch sweeps for corpora


def value_matrix(scheme: Scheme, formulas: Sequence[Formula], pool: Sequence[str]) -> np.ndarray:
    pool = tuple(pool)
    return np.stack([value_vector(scheme, f, pool) for f in formulas])


def classical_matrix(formulas: Sequence[Formula], pool: Sequence[str]) -> np.ndarray:
    """Boolean truth values of each formula under every bivaluation of ``pool``."""
    rows = [[classical_value(v, f) for v in bivaluations(pool)] for f in formulas]
    return np.array(rows, dtype=bool).reshape(len(formulas), 2 ** len(pool))


def validity_matrix(values: np.ndarray, std: Standard, chunk: int = 256) -> np.ndarray:
    """``out[i, j]`` is the validity of ``f_i => f_j`` given a :func:`value_matrix`.

    All formulas share one valuation pool; since evaluation depends only on the
    atoms that occur, quantifying over a larger pool decides the same question.
    """
    n = values.shape[0]
    out = np.ones((n, n), dtype=bool)
    for premise_set, conclusion_set in std.components:
        prem = _designated(values, premise_set)
        conc = _designated(values, conclusion_set)
        for lo in range(0, n, chunk):
            block = ~prem[lo : lo + chunk, None, :] | conc[None, :, :]
            out[lo : lo + chunk] &= block.all(axis=2)
    return out


def classical_validity_matrix(truth: np.ndarray, chunk: int = 256) -> np.ndarray:
    n = truth.shape[0]
    out = np.empty((n, n), dtype=bool)
    for lo in range(0, n, chunk):
        out[lo : lo + chunk] = (~truth[lo : lo + chunk, None, :] | truth[None, :, :]).all(axis=2)
    return out
