# cartan_matrix.py
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix

from utils.errors import EngineError

logger = logging.getLogger(__name__)

# 节点下标集合（0 起始），对外展示时用标签
NodeSubset = Tuple[int, ...]

FAMILY_MIN_RANK = {"A": 1, "D": 4, "E": 6}
NAMED_PATTERN = re.compile(r"^\s*([ADEade])\s*(\d+)\s*$")


class CartanMatrixError(EngineError):
    """广义 Cartan 矩阵不满足定义时抛出，violations 列出全部违反项"""

    code = "CartanMatrixError"

    def __init__(self, violations: List[Dict]):
        kinds = sorted({v["kind"] for v in violations})
        super().__init__(f"不是合法的广义Cartan矩阵: {', '.join(kinds)}", {"violations": violations})
        self.violations = violations


class DynkinNameError(EngineError):
    """Dynkin 类型名无法识别或秩不在允许范围内"""

    code = "DynkinNameError"


class NodeIndexError(EngineError):
    """节点下标越界"""

    code = "NodeIndexError"


class NotSymmetricError(EngineError):
    """只接受对称矩阵的操作收到了非对称矩阵"""

    code = "NotSymmetricError"


class GcmFormatError(EngineError):
    """GCM 文本格式解析失败"""

    code = "GcmFormatError"


@dataclass(frozen=True)
class DynkinName:
    """
    单边 (simply-laced) Dynkin 图的名称
    family 取 A/D/E，E 系列的秩不设上限（E9、E10 ... 为 Kac-Moody 情形）
    """

    family: str
    rank: int

    def __post_init__(self):
        family = self.family.upper()
        object.__setattr__(self, "family", family)
        if family not in FAMILY_MIN_RANK:
            raise DynkinNameError(f"未知的Dynkin类型: {self.family}", {"family": self.family})
        if self.rank < FAMILY_MIN_RANK[family]:
            raise DynkinNameError(
                f"{family} 型的秩必须至少为 {FAMILY_MIN_RANK[family]}，收到 {self.rank}",
                {"family": family, "rank": self.rank},
            )

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class GeneralizedCartanMatrix:
    """
    广义 Cartan 矩阵
    构造后不可变，所有反射运算都从这里取系数
    """

    entries: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(len(self.entries))))
        if len(self.labels) != len(self.entries):
            raise GcmFormatError(
                f"标签数量 {len(self.labels)} 与矩阵阶数 {len(self.entries)} 不一致",
                {"labels": list(self.labels)},
            )

    @property
    def n(self) -> int:
        return len(self.entries)

    @cached_property
    def array(self) -> np.ndarray:
        """只读的 int64 数组形式"""
        arr = np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)
        arr.setflags(write=False)
        return arr

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def display_name(self) -> str:
        return self.name or f"GCM{self.n}"


# ---------------------------------------------------------------------------
# 构造与校验
# ---------------------------------------------------------------------------

def _named_edges(name: DynkinName) -> List[Tuple[int, int]]:
    """
    返回命名 Dynkin 图的边（0 起始下标）

    E 系列采用 Bourbaki 编号：长尾 1-3-4-5-...-n，分支节点 2 接在 4 上；
    n >= 9 时节点 m 接在节点 m-1 上
    """
    n = name.rank
    if name.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if name.family == "D":
        edges = [(i, i + 1) for i in range(n - 2)]
        edges.append((n - 3, n - 1))
        return edges
    # E 系列
    edges = [(0, 2), (1, 3)]
    edges.extend((m, m + 1) for m in range(2, n - 1))
    return edges


def build_named(name: DynkinName) -> "GeneralizedCartanMatrix":
    """
    构造命名 Dynkin 图对应的对称广义 Cartan 矩阵

    Args:
        name (DynkinName): 类型名，例如 DynkinName("E", 10)

    Returns:
        GeneralizedCartanMatrix: 对角线为 2、图的边上为 -1 的矩阵
    """
    n = name.rank
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in _named_edges(name):
        rows[i][j] = -1
        rows[j][i] = -1
    gcm = validate(rows, name=str(name))
    logger.debug(f"构造命名矩阵 {name}，阶数 {n}")
    return gcm


def validate(entries: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
             name: str = "") -> GeneralizedCartanMatrix:
    """
    校验整数方阵并返回广义 Cartan 矩阵

    Args:
        entries: 方阵
        labels: 节点名，缺省为 "1".."n"
        name: 展示用名称

    Returns:
        GeneralizedCartanMatrix: 校验通过的矩阵

    Raises:
        CartanMatrixError: 列出所有违反的条件（对角线不为 2、非对角为正、零模式不对称等）
    """
    rows = [list(row) for row in entries]
    n = len(rows)
    violations: List[Dict] = []

    for i, row in enumerate(rows):
        if len(row) != n:
            violations.append({"kind": "NotSquare", "row": i + 1, "length": len(row)})
    if violations:
        raise CartanMatrixError(violations)

    for i in range(n):
        for j in range(n):
            value = rows[i][j]
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                violations.append({"kind": "NonInteger", "position": [i + 1, j + 1]})
    if violations:
        raise CartanMatrixError(violations)

    for i in range(n):
        if rows[i][i] != 2:
            violations.append({"kind": "NonTwoDiagonal", "position": [i + 1, i + 1], "value": int(rows[i][i])})
        for j in range(n):
            if i == j:
                continue
            if rows[i][j] > 0:
                violations.append({"kind": "PositiveOffDiagonal", "position": [i + 1, j + 1],
                                   "value": int(rows[i][j])})
            # 每对只报告一次
            if i < j and (rows[i][j] == 0) != (rows[j][i] == 0):
                violations.append({"kind": "AsymmetricZeroPattern", "position": [i + 1, j + 1]})

    if violations:
        raise CartanMatrixError(violations)

    frozen = tuple(tuple(int(v) for v in row) for row in rows)
    return GeneralizedCartanMatrix(frozen, tuple(labels) if labels else (), name)


def parse_named(text: str) -> DynkinName:
    """
    解析 "A2"、"d4"、"E10" 这样的类型名（大小写不敏感）

    Raises:
        DynkinNameError: 格式不对或秩不合法
    """
    match = NAMED_PATTERN.match(text or "")
    if not match:
        raise DynkinNameError(f"无法识别的类型名: {text!r}", {"text": text})
    return DynkinName(match.group(1).upper(), int(match.group(2)))


def named(text: str) -> GeneralizedCartanMatrix:
    """parse_named 与 build_named 的组合"""
    return build_named(parse_named(text))


# ---------------------------------------------------------------------------
# 性质判定
# ---------------------------------------------------------------------------

def is_symmetric(g: GeneralizedCartanMatrix) -> bool:
    return all(g.entries[i][j] == g.entries[j][i] for i in range(g.n) for j in range(i + 1, g.n))


def is_simply_laced(g: GeneralizedCartanMatrix) -> bool:
    """所有非对角元都在 {0, -1} 中且矩阵对称"""
    for i in range(g.n):
        for j in range(g.n):
            if i != j and g.entries[i][j] not in (0, -1):
                return False
    return is_symmetric(g)


def leading_minors(g: GeneralizedCartanMatrix) -> List[int]:
    """
    顺序主子式（精确整数运算）

    Returns:
        List[int]: 第 k 项为左上 k×k 子矩阵的行列式，k = 1..n
    """
    mat = Matrix(g.entries)
    return [int(mat[:k, :k].det(method="bareiss")) for k in range(1, g.n + 1)]


def determinant(g: GeneralizedCartanMatrix) -> int:
    if g.n == 0:
        return 1
    return int(Matrix(g.entries).det(method="bareiss"))


def is_finite_type(g: GeneralizedCartanMatrix) -> bool:
    """
    判断是否为有限型（正定）

    Raises:
        NotSymmetricError: 可对称化但不对称的矩阵不在处理范围内
    """
    if not is_symmetric(g):
        raise NotSymmetricError("有限型判定只接受对称矩阵", {"name": g.display_name()})
    return all(minor > 0 for minor in leading_minors(g))


def dynkin_graph(g: GeneralizedCartanMatrix) -> nx.Graph:
    """
    Dynkin 图：节点为下标，节点属性 label，边属性 weight = (a_ij, a_ji)
    """
    graph = nx.Graph()
    for i, label in enumerate(g.labels):
        graph.add_node(i, label=label)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if g.entries[i][j] != 0:
                graph.add_edge(i, j, weight=(g.entries[i][j], g.entries[j][i]))
    return graph


def is_irreducible(g: GeneralizedCartanMatrix) -> bool:
    """Dynkin 图连通"""
    return g.n > 0 and nx.is_connected(dynkin_graph(g))


# ---------------------------------------------------------------------------
# 子图
# ---------------------------------------------------------------------------

def normalize_subset(g: GeneralizedCartanMatrix, J: Iterable[int]) -> NodeSubset:
    """
    校验并排序节点下标集合

    Raises:
        NodeIndexError: 下标越界
    """
    nodes = sorted(set(int(j) for j in J))
    bad = [j for j in nodes if j < 0 or j >= g.n]
    if bad:
        raise NodeIndexError(
            f"节点下标越界: {[j + 1 for j in bad]}（秩为 {g.n}）",
            {"indices": [j + 1 for j in bad], "rank": g.n},
        )
    return tuple(nodes)


def subdiagram(g: GeneralizedCartanMatrix, J: Iterable[int]) -> GeneralizedCartanMatrix:
    """
    取 J 对应的主子矩阵，保留标签

    Args:
        g: 原矩阵
        J: 节点下标（0 起始）

    Returns:
        GeneralizedCartanMatrix: 主子矩阵，J 为空时为 0×0 矩阵
    """
    nodes = normalize_subset(g, J)
    entries = tuple(tuple(g.entries[i][j] for j in nodes) for i in nodes)
    labels = tuple(g.labels[i] for i in nodes)
    return GeneralizedCartanMatrix(entries, labels, f"{g.display_name()}[{','.join(labels)}]")


def parse_node_subset(text: str, g: GeneralizedCartanMatrix) -> NodeSubset:
    """
    解析节点列表语法，例如 "1-8,10"，编号从 1 开始

    Returns:
        NodeSubset: 0 起始下标
    """
    text = (text or "").strip()
    if not text or text in ("-", "none", "empty"):
        return ()
    nodes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                start, end = part.split("-", 1)
                first, last = int(start), int(end)
                if first > last:
                    raise ValueError(part)
                nodes.extend(range(first, last + 1))
            else:
                nodes.append(int(part))
        except ValueError:
            raise NodeIndexError(f"无法解析节点列表: {text!r}", {"text": text})
    return normalize_subset(g, (node - 1 for node in nodes))


# ---------------------------------------------------------------------------
# 文本格式
# ---------------------------------------------------------------------------

def parse_gcm_text(text: str, name: str = "") -> GeneralizedCartanMatrix:
    """
    解析 GCM 文本格式：第一行为 n，随后 n 行每行 n 个整数，
    可选的最后一行 "labels: ..."

    Raises:
        GcmFormatError: 格式错误
        CartanMatrixError: 矩阵不合法
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]
    if not lines:
        raise GcmFormatError("GCM 文本为空")
    try:
        n = int(lines[0])
    except ValueError:
        raise GcmFormatError(f"第一行必须是矩阵阶数: {lines[0]!r}", {"line": 1})
    if n < 0:
        raise GcmFormatError(f"矩阵阶数不能为负: {n}")

    body = lines[1:1 + n]
    if len(body) != n:
        raise GcmFormatError(f"需要 {n} 行矩阵，实际只有 {len(body)} 行", {"expected": n, "found": len(body)})
    rows = []
    for index, line in enumerate(body):
        try:
            rows.append([int(token) for token in line.split()])
        except ValueError:
            raise GcmFormatError(f"第 {index + 2} 行含有非整数: {line!r}", {"line": index + 2})

    labels = None
    rest = lines[1 + n:]
    if rest:
        head = rest[0]
        if not head.lower().startswith("labels:") or len(rest) > 1:
            raise GcmFormatError(f"矩阵之后只允许一行 labels: {head!r}")
        labels = head.split(":", 1)[1].split()
    return validate(rows, labels=labels, name=name)


def format_gcm_text(g: GeneralizedCartanMatrix) -> str:
    lines = [str(g.n)]
    lines.extend(" ".join(str(v) for v in row) for row in g.entries)
    lines.append("labels: " + " ".join(g.labels))
    return "\n".join(lines) + "\n"


def load_gcm_file(path: str) -> GeneralizedCartanMatrix:
    """
    从文件读取 GCM

    Raises:
        GcmFormatError: 文件不存在或内容格式错误
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise GcmFormatError(f"无法读取GCM文件 {path}: {e}", {"path": path})
    logger.info(f"已读取GCM文件: {path}")
    return parse_gcm_text(text, name=path)
