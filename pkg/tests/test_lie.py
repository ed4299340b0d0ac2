from math import prod

import pytest

from toda_cells.errors import DomainError
from toda_cells.lie import (
    braid_order,
    classify_subdiagram,
    components,
    coset_count,
    element_from_word,
    invariant_degrees,
    inversion_count,
    is_valid_type,
    longest_in_parabolic,
    minimal_coset_reps,
    multiply,
    root_datum,
    weyl_order,
)


def test_cartan_conventions():
    assert root_datum("A", 3).cartan == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    assert root_datum("B", 2).cartan[0][1] == -2
    assert root_datum("C", 2).cartan[1][0] == -2
    g2 = root_datum("G", 2).cartan
    assert (g2[0][1], g2[1][0]) == (-1, -3)
    f4 = root_datum("F", 4).cartan
    assert f4[1][2] == -2 and f4[2][1] == -1


def test_e_labelling_branches_at_third_node():
    e6 = root_datum("E", 6)
    assert e6.cartan[5][2] == -1
    assert e6.cartan[5][4] == 0


@pytest.mark.parametrize(
    "family,rank",
    [("A", 0), ("B", 1), ("D", 3), ("E", 5), ("E", 9), ("F", 3), ("G", 3), ("X", 2)],
)
def test_invalid_types_rejected(family, rank):
    assert not is_valid_type(family, rank)
    with pytest.raises(DomainError, match="Valid ranges"):
        root_datum(family, rank)


@pytest.mark.parametrize(
    "family,rank,order",
    [
        ("A", 1, 2),
        ("A", 3, 24),
        ("B", 3, 48),
        ("C", 3, 48),
        ("D", 4, 192),
        ("G", 2, 12),
        ("F", 4, 1152),
        ("E", 6, 51840),
        ("E", 8, 696729600),
    ],
)
def test_weyl_order(family, rank, order):
    assert weyl_order(root_datum(family, rank)) == order


@pytest.mark.parametrize(
    "family,rank",
    [("A", 5), ("B", 4), ("C", 4), ("D", 5), ("E", 6), ("E", 7), ("F", 4), ("G", 2)],
)
def test_weyl_order_matches_invariant_degrees(family, rank):
    assert weyl_order(root_datum(family, rank)) == prod(invariant_degrees(family, rank))


def test_positive_root_counts():
    assert root_datum("A", 3).n_pos_roots == 6
    assert root_datum("G", 2).n_pos_roots == 6
    assert root_datum("E", 6).n_pos_roots == 36


def test_longest_element_word_and_length():
    datum = root_datum("A", 3)
    w = longest_in_parabolic(datum, datum.simple)
    assert w.word == (1, 2, 3, 1, 2, 1)
    assert w.length == datum.n_pos_roots == 6
    assert inversion_count(datum, w.mat) == 6


def test_longest_in_parabolic_of_subset():
    datum = root_datum("A", 3)
    w = longest_in_parabolic(datum, {1, 3})
    assert sorted(w.word) == [1, 3]
    assert longest_in_parabolic(datum, set()).word == ()


def test_element_string_and_identity():
    datum = root_datum("A", 2)
    assert str(element_from_word(datum, ())) == "e"
    assert str(element_from_word(datum, (2, 1))) == "s2s1"


def test_multiply_reduces_words():
    datum = root_datum("A", 2)
    s1 = element_from_word(datum, (1,))
    product = multiply(datum, s1, s1)
    assert product == element_from_word(datum, ())
    assert product.length == 0


def test_braid_relation_elements_agree():
    datum = root_datum("A", 3)
    assert element_from_word(datum, (1, 2, 1)) == element_from_word(datum, (2, 1, 2))
    assert element_from_word(datum, (1, 3)) == element_from_word(datum, (3, 1))


def test_minimal_coset_reps_count_and_order():
    datum = root_datum("A", 3)
    reps = minimal_coset_reps(datum, {2})
    assert len(reps) == 6
    assert reps[0].word == ()
    lengths = [r.length for r in reps]
    assert lengths == sorted(lengths)


@pytest.mark.parametrize("family,rank", [("B", 3), ("D", 4), ("G", 2), ("F", 4)])
def test_coset_counts_sum_over_all_subsets(family, rank):
    datum = root_datum(family, rank)
    assert coset_count(datum.cartan, datum.simple) == weyl_order(datum)
    assert coset_count(datum.cartan, set()) == 1


def test_coset_reps_reject_foreign_roots():
    with pytest.raises(DomainError):
        minimal_coset_reps(root_datum("A", 2), {3})


def test_braid_orders():
    g2 = root_datum("G", 2).cartan
    b3 = root_datum("B", 3).cartan
    assert braid_order(g2, 1, 2) == 6
    assert braid_order(b3, 2, 3) == 4
    assert braid_order(b3, 1, 3) == 2
    assert braid_order(b3, 1, 1) == 1


def test_components_sorted_by_smallest_node():
    datum = root_datum("A", 5)
    assert components(datum, {1, 2, 4, 5}) == [frozenset({1, 2}), frozenset({4, 5})]


def test_classify_subdiagrams():
    e6 = root_datum("E", 6)
    family, n, mapping = classify_subdiagram(e6, {2, 3, 4, 6})
    assert (family, n) == ("D", 4)
    assert sorted(mapping) == [2, 3, 4, 6]
    assert sorted(mapping.values()) == [1, 2, 3, 4]

    b4 = root_datum("B", 4)
    assert classify_subdiagram(b4, {3, 4})[:2] == ("B", 2)
    assert classify_subdiagram(b4, {1, 2})[:2] == ("A", 2)

    c4 = root_datum("C", 4)
    assert classify_subdiagram(c4, {2, 3, 4})[:2] == ("C", 3)


def test_minimal_coset_reps_a2_example():
    reps = minimal_coset_reps(root_datum("A", 2), {1})
    assert {str(r) for r in reps} == {"e", "s1", "s2s1"}
    assert [str(r) for r in minimal_coset_reps(root_datum("A", 1), {1})] == ["e", "s1"]
    assert [str(r) for r in minimal_coset_reps(root_datum("B", 3), set())] == ["e"]


@pytest.mark.parametrize(
    "family,rank,J",
    [("A", 3, {2}), ("B", 3, {1, 3}), ("C", 4, {4}), ("D", 4, {1, 2, 3, 4}), ("G", 2, {1, 2})],
)
def test_breadth_first_depth_is_inversion_count(family, rank, J):
    datum = root_datum(family, rank)
    for rep in minimal_coset_reps(datum, J):
        assert rep.length == len(rep.word) == inversion_count(datum, rep.mat)
        for i in sorted(datum.simple - J):
            longer = multiply(datum, rep, element_from_word(datum, (i,)))
            assert longer.length == rep.length + 1
