# test_flag_cells.py
import pytest

from algebra.cartan_matrix import named
from algebra.flag_cells import (
    DIVERGE,
    MATCH,
    InvalidSheetsError,
    TableMismatchError,
    cell_table,
    compare_tables,
    cover_cell_table,
    group_cell_table,
    support_diagram,
    truncate_table,
)
from algebra.weyl_group import growth_series


def _quotient_tables(m, D):
    """E_{m+1}/E_m 与 A_m/A_{m-1} 的胞腔表"""
    left = cell_table(named(f"E{m + 1}"), range(m), D)
    right = cell_table(named(f"A{m}"), range(m - 1), D)
    return left, right


def test_cell_table_counts_coset_reps():
    table = cell_table(named("A2"), [1], 2)
    assert table.counts == (1, 1, 1)
    assert table.sheets == 1
    assert table.source.parabolic == ("2",)


def test_cover_multiplies_every_dimension():
    table = cell_table(named("A1"), [], 1)
    assert cover_cell_table(table, 3).counts == (3, 3)
    with pytest.raises(InvalidSheetsError):
        cover_cell_table(table, 0)
    with pytest.raises(InvalidSheetsError):
        cover_cell_table(cover_cell_table(table, 2), 2)


def test_group_cell_tables():
    assert group_cell_table(named("A2"), 3, "flag").counts == (1, 2, 2, 1)
    k_table = group_cell_table(named("A2"), 3, "K")
    assert k_table.counts == (4, 8, 8, 4)
    assert group_cell_table(named("A2"), 3, "Spin").sheets == 8
    with pytest.raises(InvalidSheetsError):
        group_cell_table(named("A2"), 3, "Pin")


def test_e9_quotient_diverges_at_seven():
    left, right = _quotient_tables(8, 8)
    assert left.counts[:8] == (1, 1, 1, 1, 1, 1, 1, 2)
    assert right.counts == (1,) * 9
    result = compare_tables(left, right)
    assert result.verdict == DIVERGE
    assert result.dimension == 7
    assert result.support_depth == 6
    assert result.support_isomorphic


@pytest.mark.parametrize("m", [9, 10])
def test_e10_and_e11_quotients_match_spheres_through_seven(m):
    left, right = _quotient_tables(m, 7)
    result = compare_tables(left, right)
    assert result.verdict == MATCH
    assert result.dimension == 7
    assert result.support_isomorphic
    assert str(result) == "MatchThrough(7)"


def test_first_divergence_of_e10_quotient():
    left, right = _quotient_tables(9, 8)
    result = compare_tables(left, right)
    assert (result.verdict, result.dimension) == (DIVERGE, 8)


def test_compare_is_symmetric():
    left, right = _quotient_tables(8, 8)
    forward, backward = compare_tables(left, right), compare_tables(right, left)
    assert (forward.verdict, forward.dimension) == (backward.verdict, backward.dimension)


def test_compare_requires_same_shape():
    left, right = _quotient_tables(9, 7)
    with pytest.raises(TableMismatchError):
        compare_tables(left, truncate_table(right, 6))
    with pytest.raises(TableMismatchError):
        compare_tables(left, cover_cell_table(right, 2))


def test_truncate_table():
    left, _ = _quotient_tables(9, 7)
    short = truncate_table(left, 3)
    assert short.counts == left.counts[:4]
    assert short.max_dim == 3
    with pytest.raises(TableMismatchError):
        truncate_table(left, 8)


def test_support_diagram_marks_parabolic_nodes():
    left, _ = _quotient_tables(9, 7)
    graph = support_diagram(left, 3)
    # s10, s9 s10, s8 s9 s10, s7 s8 s9 s10
    assert sorted(graph.nodes) == [6, 7, 8, 9]
    assert not graph.nodes[9]["parabolic"]
    assert graph.nodes[6]["parabolic"]
    assert graph.number_of_edges() == 3


def test_lifted_sphere_has_two_cells_per_dimension():
    table = cell_table(named("A8"), range(7), 8)
    assert table.counts == (1,) * 9
    assert cover_cell_table(table, 2).counts == (2,) * 9
    assert cover_cell_table(table, 1) == table


def test_empty_parabolic_has_one_cell_per_node():
    assert cell_table(named("E10"), [], 1).counts == (1, 10)
    g = named("D4")
    assert list(cell_table(g, [], 6).counts) == growth_series(g, 6)


@pytest.mark.parametrize("name, J, index", [
    ("A2", [0], 3),
    ("A3", [1], 12),
    ("A3", [0, 2], 6),
    ("D4", [0, 1, 3], 8),
])
def test_full_tables_count_the_parabolic_index(name, J, index):
    assert sum(cell_table(named(name), J, 12).counts) == index


def test_truncation_equals_direct_computation():
    g = named("E9")
    deep = cell_table(g, range(8), 8)
    assert truncate_table(deep, 5) == cell_table(g, range(8), 5)
