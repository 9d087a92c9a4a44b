# flag_cells.py
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import networkx as nx

from algebra.cartan_matrix import GeneralizedCartanMatrix, NodeSubset, dynkin_graph, normalize_subset
from algebra.weyl_group import minimal_coset_reps
from utils.errors import EngineError

logger = logging.getLogger(__name__)

MATCH = "MatchThrough"
DIVERGE = "DivergeAt"

# 群的胞腔结构相对于 G/B 的叶数，n 为秩：|T∩K| = 2^n，Spin 再翻一倍
GROUP_SHEETS = {
    "flag": lambda n: 1,
    "K": lambda n: 2 ** n,
    "Spin": lambda n: 2 ** (n + 1),
}


class TableMismatchError(EngineError):
    """两个胞腔表的截断维数或叶数不同，无法比较"""

    code = "TableMismatch"


class InvalidSheetsError(EngineError):
    """覆叠叶数不合法"""

    code = "InvalidSheets"


@dataclass(frozen=True)
class CellSource:
    name: str
    parabolic: Tuple[str, ...]
    max_dim: int

    def to_dict(self) -> Dict:
        return {"name": self.name, "parabolic": list(self.parabolic), "max_dim": self.max_dim}


@dataclass(frozen=True)
class CellTable:
    """
    旗流形 G/P_J 的 Bruhat 胞腔表
    counts[d] = sheets × (W^J 中长度为 d 的元素个数)；
    letters_by_dim[d] 记录长度为 d 的规范字里出现过的生成元
    """

    counts: Tuple[int, ...]
    source: CellSource
    sheets: int
    gcm: GeneralizedCartanMatrix
    parabolic: NodeSubset
    letters_by_dim: Tuple[FrozenSet[int], ...]

    @property
    def max_dim(self) -> int:
        return self.source.max_dim

    def to_dict(self) -> Dict:
        return {
            "counts": list(self.counts),
            "sheets": self.sheets,
            "source": self.source.to_dict(),
        }


@dataclass(frozen=True)
class ComparisonResult:
    """
    verdict 为 MatchThrough 时 dimension = 截断维数；
    为 DivergeAt 时 dimension 为第一个计数不同的维数
    """

    verdict: str
    dimension: int
    detail: Tuple[Tuple[int, int, int], ...]
    support_isomorphic: bool
    support_depth: int

    def to_dict(self) -> Dict:
        return {
            "verdict": self.verdict,
            "dimension": self.dimension,
            "detail": [list(row) for row in self.detail],
            "support_isomorphic": self.support_isomorphic,
            "support_depth": self.support_depth,
        }

    def __str__(self) -> str:
        return f"{self.verdict}({self.dimension})"


def cell_table(g: GeneralizedCartanMatrix, J: Iterable[int], D: int, budget: Optional[int] = None,
               show_progress: bool = False) -> CellTable:
    """
    G/P_J 的胞腔表：维数 d 的胞腔对应 W^J 中长度为 d 的元素

    Args:
        g: 广义 Cartan 矩阵
        J: 抛物子群的节点下标
        D: 最大维数

    Returns:
        CellTable: sheets = 1
    """
    J = normalize_subset(g, J)
    levels = minimal_coset_reps(g, J, D, budget, show_progress)
    letters = tuple(frozenset(i for w in level for i in w.word) for level in levels.levels)
    source = CellSource(g.display_name(), tuple(g.labels[j] for j in J), D)
    table = CellTable(tuple(levels.sizes()), source, 1, g, J, letters)
    logger.info(f"胞腔表 {source.name}/J={list(source.parabolic)}: {list(table.counts)}")
    return table


def cover_cell_table(t: CellTable, sheets: int) -> CellTable:
    """
    有限覆叠上的提升胞腔结构：每个胞腔提升为 sheets 个同胚胞腔

    Raises:
        InvalidSheetsError: sheets < 1，或输入已经是覆叠
    """
    if sheets < 1:
        raise InvalidSheetsError(f"叶数必须为正整数: {sheets}", {"sheets": sheets})
    if t.sheets != 1:
        raise InvalidSheetsError(f"只能提升旗流形本身的胞腔表（当前叶数 {t.sheets}）", {"sheets": t.sheets})
    return CellTable(tuple(c * sheets for c in t.counts), t.source, sheets, t.gcm, t.parabolic, t.letters_by_dim)


def group_cell_table(g: GeneralizedCartanMatrix, D: int, group: str = "K", budget: Optional[int] = None,
                     show_progress: bool = False) -> CellTable:
    """
    群本身的胞腔结构：K/(T∩K) ≅ G/B，K 与 Spin 是其上的有限覆叠

    Args:
        group: "flag"（G/B 本身）、"K" 或 "Spin"
    """
    if group not in GROUP_SHEETS:
        raise InvalidSheetsError(f"未知的群: {group}", {"group": group, "choices": sorted(GROUP_SHEETS)})
    base = cell_table(g, (), D, budget, show_progress)
    sheets = GROUP_SHEETS[group](g.n)
    return base if sheets == 1 else cover_cell_table(base, sheets)


def truncate_table(t: CellTable, D: int) -> CellTable:
    """截断到更低的维数"""
    if D < 0 or D > t.max_dim:
        raise TableMismatchError(f"截断维数 {D} 不在 0..{t.max_dim} 内", {"max_dim": t.max_dim, "requested": D})
    source = CellSource(t.source.name, t.source.parabolic, D)
    return CellTable(t.counts[:D + 1], source, t.sheets, t.gcm, t.parabolic, t.letters_by_dim[:D + 1])


def support_diagram(t: CellTable, depth: Optional[int] = None) -> nx.Graph:
    """
    长度 <= depth 的规范字中用到的生成元所诱导的 Dynkin 子图，
    节点属性 parabolic 标记是否属于 J
    """
    depth = t.max_dim if depth is None else depth
    used = set()
    for letters in t.letters_by_dim[:depth + 1]:
        used.update(letters)
    graph = dynkin_graph(t.gcm).subgraph(sorted(used)).copy()
    for node in graph.nodes:
        graph.nodes[node]["parabolic"] = node in t.parabolic
    return graph


def _same_support(t1: CellTable, t2: CellTable, depth: int) -> bool:
    return nx.is_isomorphic(
        support_diagram(t1, depth),
        support_diagram(t2, depth),
        node_match=lambda a, b: a["parabolic"] == b["parabolic"],
        edge_match=lambda a, b: a["weight"] == b["weight"],
    )


def compare_tables(t1: CellTable, t2: CellTable) -> ComparisonResult:
    """
    逐维比较两个胞腔表，并检查一致范围内所用子图是否同构

    Raises:
        TableMismatchError: 截断维数或叶数不同
    """
    if t1.max_dim != t2.max_dim or t1.sheets != t2.sheets:
        raise TableMismatchError(
            "胞腔表的截断维数或叶数不同",
            {"left": {"max_dim": t1.max_dim, "sheets": t1.sheets},
             "right": {"max_dim": t2.max_dim, "sheets": t2.sheets}},
        )
    detail = tuple((d, a, b) for d, (a, b) in enumerate(zip(t1.counts, t2.counts)))
    diverged = [d for d, a, b in detail if a != b]
    if diverged:
        verdict, dimension = DIVERGE, diverged[0]
        support_depth = dimension - 1
    else:
        verdict, dimension = MATCH, t1.max_dim
        support_depth = t1.max_dim
    support_ok = support_depth < 0 or _same_support(t1, t2, support_depth)
    result = ComparisonResult(verdict, dimension, detail, support_ok, support_depth)
    logger.info(f"比较 {t1.source.name} 与 {t2.source.name}: {result}，子图同构={support_ok}")
    return result
