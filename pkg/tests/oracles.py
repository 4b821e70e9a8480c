"""Reference computations used by the tests, written without the library's evaluators."""

from __future__ import annotations

import itertools

import numpy as np

from trivalent.truth import TV, Scheme, info_leq


def scheme_arrays(scheme: Scheme):
    neg = np.array([int(scheme.neg(TV(a))) for a in range(3)], dtype=np.int8)
    conj = np.array([[int(scheme.conj(TV(a), TV(b))) for b in range(3)] for a in range(3)], dtype=np.int8)
    disj = np.array([[int(scheme.disj(TV(a), TV(b))) for b in range(3)] for a in range(3)], dtype=np.int8)
    return neg, conj, disj


def valuation_grid(n_atoms: int) -> np.ndarray:
    """Row k is the k-th valuation, last atom varying fastest, F < N < T."""
    return np.array(list(itertools.product(range(3), repeat=n_atoms)), dtype=np.int8)


def compositional_tables(scheme: Scheme, n_atoms: int, max_depth: int) -> np.ndarray:
    """Value tables of every formula up to ``max_depth``, in enumeration order.

    Built level by level from the scheme's cell tables: negations of the last
    level, then every conjunction, then every disjunction of earlier formulas
    with at least one operand from the last level.
    """
    neg, conj, disj = scheme_arrays(scheme)
    grid = valuation_grid(n_atoms)
    level = grid.T.copy()
    upto = np.empty((0, grid.shape[0]), dtype=np.int8)
    parts = []
    for d in range(max_depth + 1):
        if d == 0:
            new = level
        else:
            boundary = upto.shape[0] - level.shape[0]
            idx = np.arange(upto.shape[0])
            keep = (idx[:, None] >= boundary) | (idx[None, :] >= boundary)
            new_parts = [neg[level]]
            for tab in (conj, disj):
                combos = tab[upto[:, None, :], upto[None, :, :]]
                new_parts.append(combos[keep])
            new = np.concatenate(new_parts)
        parts.append(new)
        upto = np.concatenate([upto, new])
        level = new
    return np.concatenate(parts)


def sharpening_pairs(n_atoms: int) -> list[tuple[int, int]]:
    """Index pairs (a, b) of valuations with a below b in the information order."""
    grid = valuation_grid(n_atoms)
    pairs = []
    for a, va in enumerate(grid):
        for b, vb in enumerate(grid):
            if all(info_leq(TV(x), TV(y)) for x, y in zip(va, vb)):
                pairs.append((a, b))
    return pairs
