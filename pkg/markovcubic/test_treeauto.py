import itertools

import numpy as np
import pytest

from .treeauto import (
    CYCLE3,
    IDENTITY3,
    SWAP01,
    TreeAut,
    doubling,
    embed,
    i_map,
    index_word,
    random_aut,
    splitting,
    tripling,
    wreath_compose,
    wreath_decompose,
)
from .typedyn import CycleDataDist


def _words(n):
    return list(itertools.product(range(3), repeat=n))


def test_apply_root_permutation():
    x = TreeAut.from_root(CYCLE3)
    assert x.apply((0,)) == (1,)
    assert x.apply("2") == (0,)
    assert x.apply(()) == ()


def test_compose_is_left_to_right():
    a = TreeAut.from_root(SWAP01)
    b = TreeAut.from_root(CYCLE3)
    assert (a * b).apply((0,)) == (2,)
    assert (b * a).apply((0,)) == (0,)


def test_compose_and_inverse_on_random_elements():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b = random_aut(3, rng), random_aut(3, rng)
        for w in _words(3):
            assert (a * b).apply(w) == b.apply(a.apply(w))
        assert (a * ~a).is_identity()
        assert (~a * a).is_identity()
        assert list((a * b).leaf_permutation()) == [
            int(b.leaf_permutation()[i]) for i in a.leaf_permutation()
        ]


def test_apply_rejects_long_words_and_bad_letters():
    a = TreeAut.identity(1)
    with pytest.raises(ValueError):
        a.apply((0, 0))
    with pytest.raises(ValueError):
        a.apply("3")


def test_invalid_portrait():
    with pytest.raises(ValueError):
        TreeAut(1, [(0, 0, 1)])
    with pytest.raises(ValueError):
        TreeAut(2, [IDENTITY3])
    with pytest.raises(ValueError):
        TreeAut.identity(1) * TreeAut.identity(2)


def test_section_and_restrict():
    rng = np.random.default_rng(11)
    a = random_aut(3, rng)
    for w in _words(2):
        assert a.section((1,)).apply(w) == a.apply((1,) + w)[1:]
    for w in _words(3):
        assert a.restrict(1).apply(w[:1]) == a.apply(w)[:1]
    assert a.restrict(0) == TreeAut.identity(0)


def test_wreath_compose_action():
    rng = np.random.default_rng(3)
    sections = [random_aut(2, rng) for _ in range(3)]
    a = wreath_compose(sections, CYCLE3)
    for j in range(3):
        for w in _words(2):
            assert a.apply((j,) + w) == (CYCLE3[j],) + sections[j].apply(w)
    a0, a1, a2, root = wreath_decompose(a)
    assert [a0, a1, a2] == sections
    assert root == CYCLE3


def test_embed():
    rng = np.random.default_rng(5)
    a = random_aut(2, rng)
    e = embed(a, 4)
    assert e.level == 4
    for w in _words(2):
        assert e.apply((0, 0) + w) == (0, 0) + a.apply(w)
        assert e.apply((1, 2) + w) == (1, 2) + w
        assert e.apply((0, 1) + w) == (0, 1) + w
    assert embed(a, 2) == a
    with pytest.raises(ValueError):
        embed(a, 1)


def test_leaf_permutation_roundtrip():
    rng = np.random.default_rng(13)
    a = random_aut(3, rng)
    assert TreeAut.from_leaf_permutation(a.leaf_permutation(), 3) == a


def test_from_leaf_permutation_rejects_non_automorphism():
    perm = list(range(9))
    perm[0], perm[3] = 3, 0
    with pytest.raises(ValueError):
        TreeAut.from_leaf_permutation(perm, 2)


def test_cycle_decomposition_is_canonical():
    x = TreeAut.from_root(CYCLE3)
    assert x.cycle_decomposition() == [(0, 1, 2)]
    assert TreeAut.identity(2).cycle_structure() == (1,) * 9
    y = TreeAut.from_root(SWAP01)
    assert y.cycle_decomposition() == [(0, 1), (2,)]


def test_splitting_doubling_tripling():
    x = TreeAut.from_root(CYCLE3)
    assert splitting(x).cycle_structure() == (3, 3, 3)
    assert doubling(x).cycle_structure() == (6, 3)
    assert tripling(x).cycle_structure() == (9,)
    assert tripling(TreeAut.identity(0)) == x
    assert doubling(TreeAut.identity(0)) == TreeAut.from_root(SWAP01)
    for f in (splitting, doubling, tripling):
        assert f(x).restrict(1) == x


def test_i_map():
    a = TreeAut.identity(1)
    b = i_map({"2": CYCLE3}, a)
    assert b.apply((2, 0)) == (2, 1)
    assert b.apply((1, 0)) == (1, 0)
    with pytest.raises(ValueError):
        i_map({"22": CYCLE3}, a)


def test_powers_and_conjugates():
    x = TreeAut.from_root(CYCLE3)
    assert (x**3).is_identity()
    assert x**-1 == ~x
    y = TreeAut.from_root(SWAP01)
    assert y.conjugate(x).cycle_structure() == (2, 1)


def test_text_form():
    text = "2 120 012 012 120"
    a = TreeAut.from_text(text)
    assert a.to_text() == text
    assert a.apply((2, 0)) == (0, 1)
    assert TreeAut.identity(0).to_text() == "0"
    assert index_word(5, 2) == (1, 2)


def test_cycle_arithmetic_on_random_elements():
    rng = np.random.default_rng(17)
    for _ in range(500):
        a = random_aut(int(rng.integers(1, 4)), rng)
        base = CycleDataDist({a.cycle_structure(): 1})
        assert CycleDataDist({tripling(a).cycle_structure(): 1}) == base.tA()
        assert CycleDataDist({doubling(a).cycle_structure(): 1}) == base.dA()
        assert CycleDataDist({splitting(a).cycle_structure(): 1}) == base.product(base).product(base)
        assert tripling(a).restrict(a.level) == a
        assert doubling(a).restrict(a.level) == a


@pytest.mark.parametrize("level", range(1, 7))
def test_wreath_round_trip(level):
    rng = np.random.default_rng(level)
    a = random_aut(level, rng)
    *sections, root = wreath_decompose(a)
    assert wreath_compose(sections, root) == a
    assert all(s.level == level - 1 for s in sections)
