"""Clones of truth functions generated by a scheme, and exact interpolant existence.

A formula whose atoms lie in a fixed tuple of argument atoms denotes a truth
function on those atoms; the set of all such functions is the clone generated
from the projections by the scheme's three connectives. Because it is finite,
"is there an interpolant over the shared atoms?" becomes a scan over the clone.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .semantics import Standard, _coordinates, _designated, _np_tables, value_vector
from .syntax import And, Atom, Formula, Neg, Or, atoms
from .truth import TV, Scheme

DEFAULT_ARITY_CAP = 2
ARITY_CAP_ENV = "TRIVALENT_ARITY_CAP"


class ArityCapExceeded(ValueError):
    def __init__(self, arity: int, cap: int):
        self.arity = arity
        self.cap = cap
        super().__init__(f"clone arity {arity} exceeds the cap of {cap} (set {ARITY_CAP_ENV} to raise it)")


def arity_cap() -> int:
    raw = os.environ.get(ARITY_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_ARITY_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{ARITY_CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


def default_atoms(arity: int) -> tuple[str, ...]:
    return tuple("pqrstuvw"[:arity])


@dataclass(frozen=True)
class FnTable:
    """A truth function on ``arity`` arguments with a formula realising it."""

    arity: int
    out: tuple[TV, ...]
    witness: Formula

    def __call__(self, *args: TV) -> TV:
        index = 0
        for a in args:
            index = 3 * index + a
        return self.out[index]


@dataclass(frozen=True, eq=False)
class Clone:
    scheme: Scheme
    arity: int
    atoms: tuple[str, ...]
    elements: tuple[FnTable, ...]
    matrix: np.ndarray  # elements x 3**arity, same order as ``elements``

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, out: object) -> bool:
        if isinstance(out, FnTable):
            out = out.out
        return tuple(out) in self._index

    @functools.cached_property
    def _index(self) -> dict[tuple[TV, ...], int]:
        return {e.out: i for i, e in enumerate(self.elements)}

    def find(self, out: Sequence[TV]) -> FnTable | None:
        i = self._index.get(tuple(TV(x) for x in out))
        return None if i is None else self.elements[i]


def clone_closure(scheme: Scheme, arity: int, arg_atoms: Sequence[str] | None = None) -> Clone:
    """Least set of functions containing the projections and closed under the connectives."""
    cap = arity_cap()
    if arity < 1:
        raise ValueError("arity must be at least 1")
    if arity > cap:
        raise ArityCapExceeded(arity, cap)
    names = tuple(arg_atoms) if arg_atoms is not None else default_atoms(arity)
    if len(names) != arity:
        raise ValueError(f"need {arity} argument atoms, got {names}")
    return _closure(scheme, names)


_NOT, _AND, _OR = 0, 1, 2


class _Generation:
    """Best fresh candidate per table code seen during one closure round."""

    def __init__(self, known: np.ndarray):
        self.known = known  # sorted codes already in the clone
        self.best: dict[int, tuple[int, int, int, int, int]] = {}  # code -> (size, order, op, i, j)
        self.order = 0

    def offer(self, codes, sizes, op, left, right) -> None:
        codes = codes.ravel()
        n = codes.size
        orders = np.arange(self.order, self.order + n)
        self.order += n
        fresh = ~np.isin(codes, self.known)
        if not fresh.any():
            return
        codes, sizes, orders = codes[fresh], sizes.ravel()[fresh], orders[fresh]
        left, right = left.ravel()[fresh], right.ravel()[fresh]
        # smallest witness per code, earliest on ties
        perm = np.lexsort((orders, sizes, codes))
        codes, sizes, orders, left, right = codes[perm], sizes[perm], orders[perm], left[perm], right[perm]
        first = np.ones(codes.size, dtype=bool)
        first[1:] = codes[1:] != codes[:-1]
        for c, s, o, i, j in zip(*(a[first].tolist() for a in (codes, sizes, orders, left, right))):
            cur = self.best.get(c)
            if cur is None or (s, o) < cur[:2]:
                self.best[c] = (s, o, op, i, j)


@functools.lru_cache(maxsize=None)
def _closure(scheme: Scheme, names: tuple[str, ...]) -> Clone:
    arity = len(names)
    width = 3**arity
    neg, conj, disj = _np_tables(scheme)
    powers = 3 ** np.arange(width - 1, -1, -1, dtype=np.int64)

    rows: list[np.ndarray] = [_coordinates(arity)[i].copy() for i in range(arity)]
    witnesses: list[Formula] = [Atom(name) for name in names]
    sizes: list[int] = [1] * arity
    codes: list[int] = [int(r.astype(np.int64) @ powers) for r in rows]

    start = 0
    while start < len(rows):
        stop = len(rows)
        table = np.stack(rows)
        size_arr = np.array(sizes, dtype=np.int64)
        gen = _Generation(np.sort(np.array(codes, dtype=np.int64)))
        frontier = np.arange(start, stop)
        everything = np.arange(stop)

        gen.offer(neg[table[frontier]].astype(np.int64) @ powers, size_arr[frontier] + 1, _NOT, frontier, frontier)
        block = max(1, 1_000_000 // (stop * width))
        for op, tab in ((_AND, conj), (_OR, disj)):
            for lo in range(start, stop, block):
                blk = np.arange(lo, min(lo + block, stop))
                # (frontier, anything) then (older, frontier): every ordered pair once
                vals = tab[table[blk][:, None, :], table[None, :, :]]
                left, right = np.meshgrid(blk, everything, indexing="ij")
                gen.offer(vals.astype(np.int64) @ powers, size_arr[left] + size_arr[right] + 1, op, left, right)
                if start:
                    older = np.arange(start)
                    vals = tab[table[older][:, None, :], table[blk][None, :, :]]
                    left, right = np.meshgrid(older, blk, indexing="ij")
                    gen.offer(vals.astype(np.int64) @ powers, size_arr[left] + size_arr[right] + 1, op, left, right)

        for code, (size, _, op, i, j) in sorted(gen.best.items(), key=lambda kv: kv[1][1]):
            if op == _NOT:
                row, witness = neg[rows[i]], Neg(witnesses[i])
            elif op == _AND:
                row, witness = conj[rows[i], rows[j]], And(witnesses[i], witnesses[j])
            else:
                row, witness = disj[rows[i], rows[j]], Or(witnesses[i], witnesses[j])
            rows.append(np.asarray(row, dtype=np.int8))
            witnesses.append(witness)
            sizes.append(size)
            codes.append(code)
        start = stop

    matrix = np.stack(rows)
    matrix.setflags(write=False)
    elements = tuple(
        FnTable(arity, tuple(TV(int(x)) for x in row), w) for row, w in zip(rows, witnesses)
    )
    return Clone(scheme, arity, names, elements, matrix)


# ---------------------------------------------------------------------------
# interpolant existence


@dataclass(frozen=True)
class Existence:
    exists: bool
    witness: Formula | None
    element: FnTable | None
    shared: tuple[str, ...]
    checked: int  # clone elements examined

    def __bool__(self) -> bool:
        return self.exists


def _restriction_index(pool: tuple[str, ...], shared: tuple[str, ...]) -> np.ndarray:
    """For every valuation of ``pool``, the index of its restriction to ``shared``."""
    coords = _coordinates(len(pool))
    index = np.zeros(3 ** len(pool), dtype=np.int64)
    for name in shared:
        index = 3 * index + coords[pool.index(name)]
    return index


def qualifying(
    scheme: Scheme, std1: Standard, std2: Standard, phi: Formula, psi: Formula, clone: Clone
) -> np.ndarray:
    """Boolean mask over ``clone`` of the elements that are interpolants for phi => psi."""
    shared = clone.atoms
    phi_pool = tuple(a.name for a in atoms(phi))
    psi_pool = tuple(a.name for a in atoms(psi))
    g_phi = clone.matrix[:, _restriction_index(phi_pool, shared)]
    g_psi = clone.matrix[:, _restriction_index(psi_pool, shared)]
    phi_vals = value_vector(scheme, phi, phi_pool)
    psi_vals = value_vector(scheme, psi, psi_pool)

    ok = np.ones(len(clone), dtype=bool)
    for x, y in std1.components:
        ok &= (~_designated(phi_vals, x)[None, :] | _designated(g_phi, y)).all(axis=1)
    for x, y in std2.components:
        ok &= (~_designated(g_psi, x) | _designated(psi_vals, y)[None, :]).all(axis=1)
    return ok


def shared_atoms(phi: Formula, psi: Formula) -> tuple[str, ...]:
    return tuple(sorted({a.name for a in atoms(phi)} & {a.name for a in atoms(psi)}))


def interpolant_exists(scheme: Scheme, std1: Standard, std2: Standard, phi: Formula, psi: Formula) -> Existence:
    """Decide whether some formula over the shared atoms interpolates phi => psi.

    Complete: any candidate over the shared atoms denotes an element of the clone.
    """
    shared = shared_atoms(phi, psi)
    if not shared:
        raise ValueError("phi and psi share no atom")
    clone = clone_closure(scheme, len(shared), shared)
    mask = qualifying(scheme, std1, std2, phi, psi, clone)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return Existence(False, None, None, shared, len(clone))
    element = clone.elements[int(hits[0])]
    return Existence(True, element.witness, element, shared, len(clone))
