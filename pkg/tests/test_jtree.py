"""Junction tree construction: elimination, clique costs, tree invariants."""

import random

import pytest

from pedgen import random_loopy_pedigree, random_pedigree
from pedrisk.families import looped_family
from pedrisk.jtree import (
    build_junction_tree,
    junction_tree_for,
    min_fill_order,
    skeleton_from_pedigree,
    verify_junction_tree,
)
from pedrisk.pedigree import Individual, Pedigree, has_loop, pedigree_from_dict


def trio():
    return pedigree_from_dict(
        {
            "individuals": [
                {"id": "f", "sex": "M"},
                {"id": "m", "sex": "F"},
                {"id": "c", "father": "f", "mother": "m"},
            ]
        }
    )


def test_trio_collapses_to_one_clique():
    _, tree = junction_tree_for(trio())
    assert len(tree.cliques) == 1
    assert tree.treewidth == 3
    assert tree.table_cost == 64
    assert tree.to == (None,)


def test_lone_individual():
    _, tree = junction_tree_for(Pedigree((Individual("only"),)))
    assert tree.cliques == (("only",),)
    assert tree.table_cost == 4


def test_looped_family_cost_matches_hand_count():
    # Two 4-variable cliques at the marriages that close the loop, six
    # 3-variable cliques elsewhere: 6*4^3 + 2*4^4 = 896 cells.
    _, tree = junction_tree_for(looped_family())
    sizes = sorted(len(c) for c in tree.cliques)
    assert sizes == [3, 3, 3, 3, 3, 3, 4, 4]
    assert tree.treewidth == 4
    assert tree.table_cost == 896


def test_twins_share_one_variable():
    ped = pedigree_from_dict(
        {
            "individuals": [
                {"id": "f", "sex": "M"},
                {"id": "m", "sex": "F"},
                {"id": "a", "father": "f", "mother": "m", "twin_group": "t"},
                {"id": "b", "father": "f", "mother": "m", "twin_group": "t"},
            ]
        }
    )
    skeleton = skeleton_from_pedigree(ped)
    assert len(skeleton.variables) == 3
    assert skeleton.var_of["a"] == skeleton.var_of["b"] == "a"
    assert skeleton.members["a"] == ("a", "b")
    assert skeleton.scopes["b"] == ("a", "f", "m")


def test_min_fill_prefers_zero_fill_variables():
    # Chain x - y - z (two factors): eliminating the middle variable would
    # connect its neighbours, the ends are free, so the ends go first.
    scopes = {"f1": ("x", "y"), "f2": ("y", "z")}
    order = min_fill_order(("x", "y", "z"), scopes)
    assert order[0] == "x"  # zero fill everywhere: first index wins ties
    assert set(order) == {"x", "y", "z"}


def test_explicit_elimination_order_is_respected():
    ped = looped_family()
    skeleton = skeleton_from_pedigree(ped)
    worst = tuple(reversed(skeleton.variables))
    tree = build_junction_tree(skeleton.variables, skeleton.scopes, order=worst)
    assert tree.order == worst
    verify_junction_tree(tree, skeleton.scopes)
    with pytest.raises(ValueError):
        build_junction_tree(skeleton.variables, skeleton.scopes, order=("1", "2"))


def test_every_factor_has_a_home_clique():
    ped = looped_family()
    skeleton, tree = junction_tree_for(ped)
    for key, scope in skeleton.scopes.items():
        assert set(scope) <= set(tree.cliques[tree.home[key]])


def test_loopless_pedigrees_have_treewidth_at_most_three():
    rng = random.Random(20260814)
    checked = 0
    while checked < 200:
        ped = random_pedigree(rng, n_max=8)
        if has_loop(ped):
            continue
        _, tree = junction_tree_for(ped)
        assert tree.treewidth <= 3
        checked += 1


def test_random_trees_satisfy_invariants():
    rng = random.Random(7)
    for _ in range(100):
        ped = random_pedigree(rng, n_max=8)
        skeleton, tree = junction_tree_for(ped)
        verify_junction_tree(tree, skeleton.scopes)


def test_loopy_pedigrees_build_and_verify():
    rng = random.Random(11)
    for _ in range(25):
        ped = random_loopy_pedigree(rng)
        assert has_loop(ped)
        skeleton, tree = junction_tree_for(ped)
        verify_junction_tree(tree, skeleton.scopes)
        assert tree.treewidth >= 3


def test_min_fill_is_deterministic():
    ped = looped_family()
    skeleton = skeleton_from_pedigree(ped)
    first = min_fill_order(skeleton.variables, skeleton.scopes)
    assert all(
        min_fill_order(skeleton.variables, skeleton.scopes) == first for _ in range(5)
    )
