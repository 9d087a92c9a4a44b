# weyl_group.py
import logging
import sys
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from algebra.cartan_matrix import GeneralizedCartanMatrix, NodeSubset, NodeIndexError, normalize_subset
from utils.errors import EngineError
from utils.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

INT64_MAX = int(np.iinfo(np.int64).max)
# 剥离下降时的迭代上限，只用来防止把非 Weyl 元素的矩阵送进来时死循环
MAX_STRIP_STEPS = 10 ** 6

Word = Tuple[int, ...]


class RootSign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class MixedSignError(EngineError):
    """向量坐标有正有负，说明它不是实根（调用方的错误）"""

    code = "MixedSign"


class WeylOverflowError(EngineError):
    """int64 运算可能溢出，按硬错误处理"""

    code = "WeylOverflow"


class EnumerationBudgetExceeded(EngineError):
    """枚举的元素总数超过预算"""

    code = "EnumerationBudgetExceeded"

    def __init__(self, depth_reached: int, element_count: int, budget: int):
        super().__init__(
            f"元素数量超过预算 {budget}：已完整枚举到长度 {depth_reached}，共 {element_count} 个元素",
            {"depth_reached": depth_reached, "element_count": element_count, "budget": budget},
        )
        self.depth_reached = depth_reached


class GcmMismatchError(EngineError):
    """两个元素属于不同的广义 Cartan 矩阵"""

    code = "GcmMismatch"


class NotAWeylElementError(EngineError):
    """矩阵无法通过剥离下降化为单位阵"""

    code = "NotAWeylElement"


class LengthRangeError(EngineError):
    """截断长度为负"""

    code = "LengthRangeError"


@dataclass(frozen=True)
class RootVector:
    """单根基下的整数坐标"""

    coords: Tuple[int, ...]

    @classmethod
    def simple(cls, n: int, i: int) -> "RootVector":
        return cls(tuple(1 if k == i else 0 for k in range(n)))


def root_sign(r: Union[RootVector, Sequence[int], np.ndarray]) -> RootSign:
    """
    实根的符号：全部坐标 >= 0 为正，全部 <= 0 为负

    Raises:
        MixedSignError: 坐标符号混杂或全为零
    """
    coords = r.coords if isinstance(r, RootVector) else tuple(int(v) for v in r)
    if any(v > 0 for v in coords) and all(v >= 0 for v in coords):
        return RootSign.POSITIVE
    if any(v < 0 for v in coords) and all(v <= 0 for v in coords):
        return RootSign.NEGATIVE
    raise MixedSignError(f"不是实根: {list(coords)}", {"coords": list(coords)})


class WeylElement:
    """
    Weyl 群元素
    matrix 的第 j 列是 w(α_j) 在单根基下的坐标；word 为规范约化字（0 起始下标）
    """

    __slots__ = ("gcm", "matrix", "word", "_key")

    def __init__(self, gcm: GeneralizedCartanMatrix, matrix: np.ndarray, word: Word):
        matrix = np.asarray(matrix, dtype=np.int64)
        matrix.setflags(write=False)
        self.gcm = gcm
        self.matrix = matrix
        self.word = tuple(word)
        self._key = matrix.tobytes()

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def key(self) -> bytes:
        return self._key

    def root_image(self, j: int) -> RootVector:
        """w(α_j)"""
        return RootVector(tuple(int(v) for v in self.matrix[:, j]))

    def right_descents(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.gcm.n) if root_sign(self.matrix[:, j]) is RootSign.NEGATIVE)

    def word_labels(self) -> List[str]:
        return [self.gcm.labels[i] for i in self.word]

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self._key == other._key and self.gcm == other.gcm

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        letters = "".join(f"s{label}" for label in self.word_labels()) or "e"
        return f"WeylElement({self.gcm.display_name()}: {letters})"


@dataclass(frozen=True)
class LengthLevels:
    """
    按长度分层的元素表，levels[l] 中的元素长度都为 l，层内按规范字排序
    parabolic 为 None 表示整个 W，否则为 W^J 的 J
    """

    levels: Tuple[Tuple[WeylElement, ...], ...]
    truncation: int
    parabolic: Optional[NodeSubset] = None

    def sizes(self) -> List[int]:
        return [len(level) for level in self.levels]

    def elements(self) -> Iterator[WeylElement]:
        for level in self.levels:
            yield from level

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)


# ---------------------------------------------------------------------------
# 基本运算
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _reflection_matrices(g: GeneralizedCartanMatrix) -> Tuple[np.ndarray, ...]:
    """s_i(α_j) = α_j - a_ij α_i，即单位阵的第 i 行减去 A 的第 i 行"""
    mats = []
    for i in range(g.n):
        m = np.eye(g.n, dtype=np.int64)
        m[i, :] -= g.array[i, :]
        m.setflags(write=False)
        mats.append(m)
    return tuple(mats)


def _guard_product(a: np.ndarray, other_peak: int) -> None:
    """
    用 Python 整数估计 a 与最大元素为 other_peak 的矩阵相乘的上界，可能溢出就报错

    Raises:
        WeylOverflowError: 上界超过 int64
    """
    if a.size == 0:
        return
    bound = int(np.abs(a).max()) * other_peak * a.shape[1]
    if bound > INT64_MAX:
        raise WeylOverflowError(
            f"矩阵元素过大，int64 乘法可能溢出（上界 {bound}）",
            {"bound": bound, "limit": INT64_MAX},
        )


def _checked_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """int64 矩阵乘法，可能溢出就报错而不是回绕"""
    if a.size == 0 or b.size == 0:
        return a @ b
    _guard_product(a, int(np.abs(b).max()))
    return a @ b


def _first_descent(m: np.ndarray) -> Optional[int]:
    """
    最小的右下降：第一列全部 <= 0 的列下标

    Raises:
        MixedSignError: 某一列不是实根
    """
    nonpos = (m <= 0).all(axis=0)
    nonneg = (m >= 0).all(axis=0)
    mixed = ~(nonpos | nonneg)
    if mixed.any():
        j = int(np.flatnonzero(mixed)[0])
        raise MixedSignError(f"第 {j + 1} 列符号混杂，不是实根", {"column": j + 1, "coords": m[:, j].tolist()})
    hits = np.flatnonzero(nonpos)
    return int(hits[0]) if hits.size else None


def _strip_word(g: GeneralizedCartanMatrix, matrix: np.ndarray) -> Word:
    """反复剥离最小右下降，返回规范约化字"""
    refl = _reflection_matrices(g)
    m = np.asarray(matrix, dtype=np.int64)
    letters: List[int] = []
    for _ in range(MAX_STRIP_STEPS):
        descent = _first_descent(m) if g.n else None
        if descent is None:
            break
        m = _checked_matmul(m, refl[descent])
        letters.append(descent)
    else:
        raise NotAWeylElementError("剥离下降没有终止", {"steps": MAX_STRIP_STEPS})
    if not np.array_equal(m, np.eye(g.n, dtype=np.int64)):
        raise NotAWeylElementError("矩阵没有右下降却不是单位阵", {"matrix": m.tolist()})
    letters.reverse()
    return tuple(letters)


def identity(g: GeneralizedCartanMatrix) -> WeylElement:
    return WeylElement(g, np.eye(g.n, dtype=np.int64), ())


def simple_reflection(g: GeneralizedCartanMatrix, i: int) -> WeylElement:
    """
    单反射 s_i

    Args:
        g: 广义 Cartan 矩阵
        i: 节点下标（0 起始）

    Raises:
        NodeIndexError: 下标越界
    """
    if not 0 <= i < g.n:
        raise NodeIndexError(f"节点下标越界: {i + 1}（秩为 {g.n}）", {"index": i + 1, "rank": g.n})
    return WeylElement(g, _reflection_matrices(g)[i], (i,))


def from_matrix(g: GeneralizedCartanMatrix, matrix: np.ndarray) -> WeylElement:
    """由作用矩阵构造元素，长度和规范字重新计算"""
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.shape != (g.n, g.n):
        raise GcmMismatchError(f"矩阵形状 {matrix.shape} 与秩 {g.n} 不符")
    return WeylElement(g, matrix, _strip_word(g, matrix))


def word_matrix(g: GeneralizedCartanMatrix, word: Iterable[int]) -> np.ndarray:
    """按顺序连乘单反射得到的矩阵（不做约化）"""
    refl = _reflection_matrices(g)
    m = np.eye(g.n, dtype=np.int64)
    for i in word:
        if not 0 <= i < g.n:
            raise NodeIndexError(f"节点下标越界: {i + 1}", {"index": i + 1, "rank": g.n})
        m = _checked_matmul(m, refl[i])
    return m


def word_product(g: GeneralizedCartanMatrix, word: Iterable[int]) -> WeylElement:
    return from_matrix(g, word_matrix(g, word))


def canonical_word(w: WeylElement) -> Tuple[Word, int]:
    """
    规范约化字：反复剥离最小的右下降（i 是右下降当且仅当 w(α_i) 为负根）

    Returns:
        Tuple[Word, int]: (规范字, 长度)
    """
    word = _strip_word(w.gcm, w.matrix)
    return word, len(word)


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    """
    精确整数矩阵乘积，长度与规范字重新计算（不假设长度可加）

    Raises:
        GcmMismatchError: 两个元素不在同一个群里
        WeylOverflowError: int64 可能溢出
    """
    if a.gcm != b.gcm:
        raise GcmMismatchError("两个元素属于不同的广义Cartan矩阵",
                               {"left": a.gcm.display_name(), "right": b.gcm.display_name()})
    return from_matrix(a.gcm, _checked_matmul(a.matrix, b.matrix))


def inverse(a: WeylElement) -> WeylElement:
    """逆元：把规范字反过来连乘，单反射都是对合"""
    return word_product(a.gcm, reversed(a.word))


def is_minimal_rep(w: WeylElement, J: Iterable[int]) -> bool:
    """
    w 是 wW_J 中的最短代表元当且仅当对所有 j ∈ J，w(α_j) 为正根
    """
    return all(root_sign(w.matrix[:, j]) is RootSign.POSITIVE for j in J)


# ---------------------------------------------------------------------------
# 按长度的广度优先枚举
# ---------------------------------------------------------------------------

def _check_length(L: int) -> None:
    if L < 0:
        raise LengthRangeError(f"截断长度不能为负: {L}", {"max_length": L})


def enumerate_by_length(g: GeneralizedCartanMatrix, L: int, budget: Optional[int] = None,
                        show_progress: bool = False) -> LengthLevels:
    """
    广度优先枚举长度 <= L 的全部元素

    只保留长度增加的乘积 w·s_i（即 w(α_i) 为正根），按矩阵去重；
    新元素的规范字由它的最小右下降回到上一层查得

    Args:
        g: 广义 Cartan 矩阵
        L: 最大长度
        budget: 元素总数上限，缺省取 EngineSettings.element_budget
        show_progress: 是否在标准错误显示 tqdm 进度条

    Returns:
        LengthLevels: 完整、无重复的各层元素

    Raises:
        EnumerationBudgetExceeded: 超过预算，报告已完成的深度
        WeylOverflowError: int64 可能溢出
    """
    _check_length(L)
    budget = DEFAULT_SETTINGS.element_budget if budget is None else budget
    refl = _reflection_matrices(g)
    start = identity(g)
    levels: List[Tuple[WeylElement, ...]] = [(start,)]
    current: Dict[bytes, WeylElement] = {start.key: start}
    total = 1

    refl_peak = max((int(np.abs(r).max()) for r in refl), default=1)

    for length in tqdm(range(1, L + 1), desc=f"枚举 {g.display_name()}", unit="层",
                       disable=not show_progress, file=sys.stderr):
        found: Dict[bytes, WeylElement] = {}
        for w in levels[-1]:
            _guard_product(w.matrix, refl_peak)
            # 只沿非下降方向延伸（w(α_i) 为正根），长度恰好加一
            for i in np.flatnonzero((w.matrix >= 0).all(axis=0)):
                i = int(i)
                m = w.matrix @ refl[i]
                key = m.tobytes()
                if key in found:
                    continue
                descent = _first_descent(m)
                if descent == i:
                    word = w.word + (i,)
                else:
                    parent = current[_checked_matmul(m, refl[descent]).tobytes()]
                    word = parent.word + (descent,)
                found[key] = WeylElement(g, m, word)
                total += 1
                if total > budget:
                    raise EnumerationBudgetExceeded(length - 1, total, budget)
        levels.append(tuple(sorted(found.values(), key=lambda e: e.word)))
        current = found
        logger.debug(f"{g.display_name()} 长度 {length}: {len(found)} 个元素")

    logger.info(f"枚举完成: {g.display_name()} 长度 <= {L}，共 {total} 个元素")
    return LengthLevels(tuple(levels), L, None)


def growth_series(g: GeneralizedCartanMatrix, L: int, budget: Optional[int] = None,
                  show_progress: bool = False) -> List[int]:
    """增长级数（Poincaré 级数）截断到 q^L 的系数"""
    return enumerate_by_length(g, L, budget, show_progress).sizes()


def minimal_coset_reps(g: GeneralizedCartanMatrix, J: Iterable[int], L: int, budget: Optional[int] = None,
                       show_progress: bool = False) -> LengthLevels:
    """
    直接枚举最短陪集代表元 W^J，不经过整个 W

    从长度为 l 的代表元 w 出发构造 s_i w：长度变短的乘积必定落在上一层，
    其余的长度为 l+1，再用 is_minimal_rep 过滤

    Args:
        g: 广义 Cartan 矩阵
        J: 抛物子群的节点下标
        L: 最大长度

    Returns:
        LengthLevels: W^J 的各层，parabolic 记录 J
    """
    _check_length(L)
    J = normalize_subset(g, J)
    if not J:
        levels = enumerate_by_length(g, L, budget, show_progress)
        return LengthLevels(levels.levels, L, ())

    budget = DEFAULT_SETTINGS.element_budget if budget is None else budget
    refl = _reflection_matrices(g)
    start = identity(g)
    levels: List[Tuple[WeylElement, ...]] = [(start,)]
    previous_keys: set = set()
    current_keys = {start.key}
    total = 1

    for length in tqdm(range(1, L + 1), desc=f"陪集 {g.display_name()}", unit="层",
                       disable=not show_progress, file=sys.stderr):
        found: Dict[bytes, WeylElement] = {}
        for w in levels[-1]:
            for i in range(g.n):
                m = _checked_matmul(refl[i], w.matrix)
                key = m.tobytes()
                if key in previous_keys or key in found:
                    continue
                if any(root_sign(m[:, j]) is RootSign.NEGATIVE for j in J):
                    continue
                word = _strip_word(g, m)
                if len(word) != length:
                    raise EngineError(f"陪集枚举的长度不一致: 期望 {length}，得到 {len(word)}",
                                      {"word": [g.labels[k] for k in word]})
                found[key] = WeylElement(g, m, word)
                total += 1
                if total > budget:
                    raise EnumerationBudgetExceeded(length - 1, total, budget)
        levels.append(tuple(sorted(found.values(), key=lambda e: e.word)))
        previous_keys, current_keys = current_keys, set(found)

    logger.info(f"陪集枚举完成: {g.display_name()} / J={[g.labels[j] for j in J]}，长度 <= {L}，共 {total} 个代表元")
    return LengthLevels(tuple(levels), L, J)
