import functools

import pytest
from hypothesis import given, strategies as st

from trivalent.syntax import (
    And,
    Atom,
    Literal,
    Neg,
    Or,
    ParseError,
    atoms,
    depth,
    enumerate_formulas,
    fold_conj,
    fold_disj,
    parse,
    parse_many,
    size,
    to_text,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def count_formulas(n_atoms: int, d: int) -> int:
    """Independent counter: formulas of depth at most d."""

    @functools.lru_cache(maxsize=None)
    def upto(k: int) -> int:
        if k == 0:
            return n_atoms
        prev = upto(k - 1)
        return n_atoms + prev + 2 * prev * prev

    return upto(d)


def test_count_oracle_small_cases():
    assert count_formulas(1, 0) == 1
    assert count_formulas(1, 1) == 4


def test_enumeration_small():
    assert list(enumerate_formulas(["p"], 0)) == [p]
    assert list(enumerate_formulas(["p"], 1)) == [p, Neg(p), And(p, p), Or(p, p)]


@pytest.mark.parametrize("pool,d", [("pq", 2), ("pqr", 2), ("p", 3), ("pq", 1)])
def test_enumeration_count_matches_oracle(pool, d):
    forms = list(enumerate_formulas(pool, d))
    assert len(forms) == count_formulas(len(pool), d)
    assert len(set(forms)) == len(forms)
    assert all(depth(f) <= d for f in forms)


def test_enumeration_known_counts():
    assert len(list(enumerate_formulas("pq", 2))) == 302
    assert len(list(enumerate_formulas("pqr", 2))) == 1179


def test_enumeration_orders_by_depth():
    depths = [depth(f) for f in enumerate_formulas("pq", 2)]
    assert depths == sorted(depths)


def test_enumeration_rejects_negative_depth():
    with pytest.raises(ValueError):
        list(enumerate_formulas("p", -1))


def test_round_trip_over_enumeration():
    for f in enumerate_formulas("pq", 3):
        assert parse(to_text(f)) == f


def test_printing():
    assert to_text(parse("p | (q & ~q)")) == "p | (q & ~q)"
    assert to_text(parse("p & q & r")) == "p & q & r"
    assert to_text(And(p, And(q, r))) == "p & (q & r)"
    assert to_text(Neg(Neg(p))) == "~~p"
    assert to_text(Neg(Or(p, q))) == "~(p | q)"
    assert str(Or(And(p, q), r)) == "(p & q) | r"


def test_bang_is_negation():
    assert parse("!p & ~q") == And(Neg(p), Neg(q))


def test_precedence():
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("~p & q") == And(Neg(p), q)


@pytest.mark.parametrize(
    "text,offset",
    [("p &", 3), ("(p | q", 6), ("p q", 2), ("", 0), ("p & )", 4), ("P", 0)],
)
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert info.value.expected


def test_parse_error_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        parse("½ & p")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        parse("p & ½")
    assert info.value.offset == 4


def test_parse_many():
    assert parse_many(["p", "~q"]) == [p, Neg(q)]


def test_atoms_size_depth():
    f = parse("(p & ~r) | q")
    assert atoms(f) == (p, q, r)
    assert size(f) == 6
    assert depth(f) == 3
    assert depth(p) == 0


def test_atom_validation():
    for bad in ("P", "1p", "", "p-q"):
        with pytest.raises(ValueError):
            Atom(bad)
    assert Atom("p_1x").name == "p_1x"


def test_literal_order():
    lits = [Literal(q), Literal(p, False), Literal(p)]
    assert sorted(lits, key=lambda lit: lit.sort_key) == [Literal(p), Literal(p, False), Literal(q)]
    assert Literal(p, False).to_formula() == Neg(p)


def test_folds():
    assert fold_conj([p, q, r]) == And(And(p, q), r)
    assert fold_disj([p]) == p
    with pytest.raises(ValueError):
        fold_conj([])
    with pytest.raises(ValueError):
        fold_disj([])


def _leaves(f):
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, Neg):
        return _leaves(f.arg)
    return _leaves(f.left) + _leaves(f.right)


formulas = st.recursive(
    st.sampled_from([p, q, r, Atom("s1")]),
    lambda sub: st.one_of(
        sub.map(Neg),
        st.tuples(sub, sub).map(lambda ab: And(*ab)),
        st.tuples(sub, sub).map(lambda ab: Or(*ab)),
    ),
    max_leaves=12,
)


@given(formulas)
def test_round_trip_property(f):
    assert parse(to_text(f)) == f


@given(formulas, formulas)
def test_atoms_of_compounds(f, g):
    assert atoms(Neg(f)) == atoms(f)
    assert set(atoms(And(f, g))) == set(atoms(f)) | set(atoms(g))
    assert set(atoms(Or(f, g))) == set(atoms(f)) | set(atoms(g))


@given(st.lists(formulas, min_size=1, max_size=5))
def test_folds_keep_leaves_in_order(items):
    expected = [leaf for item in items for leaf in _leaves(item)]
    assert _leaves(fold_conj(items)) == expected
    assert _leaves(fold_disj(items)) == expected
