import pytest

from msrecovery.conjugation import (
    build_chain,
    chain_covers,
    chain_roots_vanish,
    is_compliant,
    n_conjugate,
    quadratic,
    s_conjugate,
    solutions_upto,
)
from msrecovery.moser import moser_value

CHAIN4 = [(2, 1), (3, 1), (3, 2), (8, 2), (8, 6), (27, 6), (27, 21), (98, 21), (98, 77), (363, 77), (363, 286)]
CHAIN4_UNDERLINED = {(2, 1), (3, 1), (3, 2), (8, 2)}

CHAIN5 = [
    (1444, 133), (147, 133), (147, 14), (16, 14), (16, 2), (3, 2), (3, 1),
    (4, 1), (4, 3), (27, 3), (27, 24), (256, 24), (256, 232),
]  # fmt: skip
CHAIN5_UNDERLINED = {(16, 2), (3, 2), (3, 1), (4, 1), (4, 3), (27, 3)}


def test_chain4():
    chain = build_chain(4, 11)
    assert list(chain.pairs) == CHAIN4
    assert [not ok for ok in chain.compliant] == [p in CHAIN4_UNDERLINED for p in CHAIN4]
    assert "".join(chain.move_labels) == "snsnsnsnsn"


def test_chain5():
    chain = build_chain(5, 13)
    assert list(chain.pairs) == CHAIN5
    assert [not ok for ok in chain.compliant] == [p in CHAIN5_UNDERLINED for p in CHAIN5]
    assert "".join(chain.move_labels) == "snsnsnsnsnsn"


def test_chain5_full_window():
    pairs = build_chain(5, 15).pairs
    assert pairs[0] == (1444, 1311) and pairs[-1] == (2523, 232)


def test_text_and_json():
    chain = build_chain(4, 6)
    assert chain.to_text() == "!(2,1) -s-> !(3,1) -n-> !(3,2) -s-> !(8,2) -n-> (8,6) -s-> (27,6)"
    js = chain.to_json()
    assert js[0] == {"n": 2, "s": 1, "move": None, "compliant": False}
    assert js[-1] == {"n": 27, "s": 6, "move": "s", "compliant": True}


@pytest.mark.parametrize("k,length", [(4, 30), (5, 31)])
def test_every_chain_pair_solves_quadratic(k, length):
    assert all(quadratic(n, s, k) == 0 for n, s in build_chain(k, length).pairs)


@pytest.mark.parametrize("k,length", [(4, 12), (5, 13)])
def test_compliant_pairs_are_moser_roots(k, length):
    chain = build_chain(k, length)
    assert chain_roots_vanish(chain)
    assert all(moser_value(s, k, n) == 0 for (n, s), ok in zip(chain.pairs, chain.compliant) if ok)


@pytest.mark.parametrize("k", [4, 5])
def test_solutions_upto_matches_brute_force(k):
    brute = [(n, s) for n in range(1, 3000) for s in range(1, n + 1) if quadratic(n, s, k) == 0]
    assert solutions_upto(k, 2999) == brute


@pytest.mark.parametrize("k", [4, 5])
def test_chain_covers_all_solutions(k):
    assert chain_covers(k, 10**5) == (True, None)


def test_moves():
    assert n_conjugate(27, 6) == (27, 21)
    assert s_conjugate(27, 6, 4) == (8, 6)
    assert s_conjugate(27, 3, 5) == (4, 3)
    with pytest.raises(ValueError):
        s_conjugate(27, 5, 4)
    with pytest.raises(ValueError):
        n_conjugate(3, 3)
    with pytest.raises(ValueError):
        build_chain(6, 3)
    with pytest.raises(ValueError):
        build_chain(4, 0)


def test_compliance_rule():
    assert not is_compliant(8, 2, 4) and is_compliant(8, 6, 4)
    assert not is_compliant(27, 3, 5) and is_compliant(16, 14, 5)
