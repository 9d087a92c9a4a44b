# ledger.py
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from algebra.cartan_matrix import GeneralizedCartanMatrix, dynkin_graph, is_irreducible, is_simply_laced, named
from algebra.flag_cells import DIVERGE, cell_table, compare_tables
from homotopy.groups import (
    TRIVIAL,
    Z,
    AbelianGroupDescriptor,
    Countable,
    DegreeRangeError,
    HomotopyProfile,
    cyclic,
    free,
    trivial_profile,
    unknown,
)
from utils.errors import EngineError
from utils.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

# 推导规则引用的数学事实
CITATIONS = {
    "bott": "Bott periodicity: pi_k(O) is C2, C2, 1, Z, 1, 1, 1, Z for k = 0..7 mod 8",
    "stable": "pi_k(O(n)) = pi_k(O) for n > k+1, via the bundle O(n-1) -> O(n) -> S^(n-1)",
    "connected": "SO(n) is the identity component of O(n)",
    "unstable": "pi_15(O(16)) = Z ⊕ Z lies outside the stable range",
    "e8": "the maximal compact subgroup of split E8 is K(E8) ≅ SO(16) in the degrees considered",
    "cells": "the Bruhat cells of G/P_J are indexed by minimal coset representatives, cell dimension = length",
    "sphere": "K(E_(m+1))/K(E_m) carries the low cells of K(A_m)/K(A_(m-1)) ≅ SO(m+1)/SO(m) ≅ S^m, "
              "so pi_k(K(E_(m+1))/K(E_m)) = pi_k(S^m) = 1 for k <= 7 when m >= 8",
    "fibration": "K_J -> K -> K/K_J is a Hurewicz fibration (k_omega group, paracompact quotient)",
    "sandwich": "exact sequence pi_(k+1)(B) -> pi_k(F) -> pi_k(E) -> pi_k(B) with trivial flanks",
    "cover": "a finite covering lifts every cell of the base to one cell per sheet",
    "lie": "homotopy groups of a compact Lie group are countable",
    "cw": "a CW complex with countably many cells has countable homotopy groups",
    "quotient": "pi_k(K)/im pi_k(SO(3)) embeds in pi_k(K/SO(3)) by the homomorphism theorem",
    "induction": "induction along E_n ⊂ E_(n+1) with the E8 case as base",
}

E8_RANK = 8
E8_COMPACT_DIMENSION = 16


class OutOfStableRangeError(EngineError):
    """请求的 (n, k) 不在稳定范围 n > k+1 内，且没有记录的非稳定例外"""

    code = "OutOfStableRange"


class SphereRangeError(EngineError):
    code = "SphereRangeError"


class KmaxCapError(EngineError):
    """E_n 的推导最多只到 6 阶"""

    code = "KmaxCapError"


class EnRangeError(EngineError):
    code = "EnRangeError"


class ComparisonFailedError(EngineError):
    """胞腔比较在声称的范围内不一致，推导中止"""

    code = "ComparisonFailed"


class FibrationShapeError(EngineError):
    code = "FibrationShapeError"


class CertificateError(EngineError):
    """可数性证书的前提（单边、不可约、秩至少 2）不满足"""

    code = "CertificateError"


@dataclass(frozen=True)
class TraceLine:
    """
    推导记录中的一行
    degree 为 None 时是不针对具体阶数的步骤说明
    """

    rule: str
    citation: str
    degree: Optional[int] = None
    group: Optional[AbelianGroupDescriptor] = None
    comment: str = ""

    def render(self) -> str:
        if self.degree is not None:
            return f"DEGREE {self.degree}: {self.group} BY {self.rule} CITING {self.citation}"
        return f"STEP: {self.comment} BY {self.rule} CITING {self.citation}"

    def to_dict(self) -> Dict:
        return {
            "degree": self.degree,
            "group": None if self.group is None else str(self.group),
            "rule": self.rule,
            "citation": self.citation,
            "comment": self.comment,
            "text": self.render(),
        }


def render_trace(lines: List[TraceLine]) -> str:
    return "\n".join(line.render() for line in lines)


# ---------------------------------------------------------------------------
# 正交群
# ---------------------------------------------------------------------------

# Bott 周期表：π_k(O)，k mod 8
_BOTT_TABLE = (cyclic(2), cyclic(2), TRIVIAL, Z, TRIVIAL, TRIVIAL, TRIVIAL, Z)

# 稳定范围之外已知的例外 (n, k) -> π_k(O(n))
UNSTABLE_EXCEPTIONS: Dict[Tuple[int, int], AbelianGroupDescriptor] = {
    (16, 15): free(2),
}


def bott_pi_O(k: int) -> AbelianGroupDescriptor:
    """
    稳定正交群 O 的同伦群

    Raises:
        DegreeRangeError: k < 0
    """
    if k < 0:
        raise DegreeRangeError(f"同伦阶数不能为负: {k}", {"degree": k})
    return _BOTT_TABLE[k % 8]


def stable_pi_SO(n: int, k: int) -> AbelianGroupDescriptor:
    """
    π_k(SO(n))，只在稳定范围 n > k+1 内给出；π_0(SO(n)) 平凡

    Raises:
        OutOfStableRangeError: n <= k+1
    """
    if k < 0:
        raise DegreeRangeError(f"同伦阶数不能为负: {k}", {"degree": k})
    if k == 0:
        return TRIVIAL
    if n <= k + 1:
        raise OutOfStableRangeError(
            f"π_{k}(SO({n})) 不在稳定范围内（需要 n > k+1）",
            {"n": n, "degree": k, "exception": (n, k) in UNSTABLE_EXCEPTIONS},
        )
    return bott_pi_O(k)


def pi_orthogonal(n: int, k: int, connected: bool = False) -> AbelianGroupDescriptor:
    """
    π_k(O(n)) 或 π_k(SO(n))：稳定范围内用 Bott 周期，否则查非稳定例外表
    """
    if k == 0:
        return TRIVIAL if connected or n < 1 else cyclic(2)
    if (n, k) in UNSTABLE_EXCEPTIONS and n <= k + 1:
        return UNSTABLE_EXCEPTIONS[(n, k)]
    return stable_pi_SO(n, k)


def orthogonal_profile(n: int, kmax: int, connected: bool = False) -> HomotopyProfile:
    """O(n)（connected=True 时为 SO(n)）在 0..kmax 阶的同伦群"""
    if kmax < 0:
        raise DegreeRangeError(f"同伦阶数不能为负: {kmax}", {"degree": kmax})
    name = f"SO({n})" if connected else f"O({n})"
    return HomotopyProfile(name, tuple(pi_orthogonal(n, k, connected) for k in range(kmax + 1)))


def bott_trace(kmax: int) -> List[TraceLine]:
    """Bott 表每一阶一行，再为每个记录在案的非稳定例外补一行"""
    trace = [TraceLine("bott-periodicity", CITATIONS["bott"], k, bott_pi_O(k)) for k in range(kmax + 1)]
    for (n, k), group in sorted(UNSTABLE_EXCEPTIONS.items()):
        trace.append(TraceLine(
            "unstable-exception", CITATIONS["unstable"],
            comment=f"pi_{k}(O({n})) = {pi_orthogonal(n, k)} while pi_{k}(O) = {bott_pi_O(k)}",
        ))
    return trace


def sphere_profile(m: int, kmax: int) -> HomotopyProfile:
    """
    S^m 在 0..kmax 阶的同伦群，只处理 kmax < m（全部平凡）

    Raises:
        SphereRangeError: m < 2 或 kmax >= m
    """
    if m < 2 or kmax >= m or kmax < 0:
        raise SphereRangeError(
            f"只能给出 S^{m} 在低于 {m} 阶的同伦群（请求到 {kmax} 阶）",
            {"m": m, "kmax": kmax},
        )
    return trivial_profile(f"S^{m}", kmax)


# ---------------------------------------------------------------------------
# 纤维化
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FibrationRecord:
    """纤维化 F -> E -> B，三者记录到同一阶数"""

    fiber: HomotopyProfile
    total: HomotopyProfile
    base: HomotopyProfile
    justification: str = CITATIONS["fibration"]

    def __post_init__(self):
        depths = {self.fiber.kmax, self.total.kmax, self.base.kmax}
        if len(depths) != 1:
            raise FibrationShapeError(
                "纤维化三项的同伦表阶数不一致",
                {"fiber": self.fiber.kmax, "total": self.total.kmax, "base": self.base.kmax},
            )

    @property
    def kmax(self) -> int:
        return self.base.kmax


def countability_propagate(fiber: Countable, base: Countable) -> Countable:
    """纤维和底空间的同伦群都可数时，全空间的也可数"""
    if fiber == Countable.YES and base == Countable.YES:
        return Countable.YES
    return Countable.UNKNOWN


def sandwich_deduce(f: FibrationRecord, k: int) -> AbelianGroupDescriptor:
    """
    π_{k+1}(B) 与 π_k(B) 都平凡时 π_k(E) ≅ π_k(F)；否则返回未知（保留可数性）

    Raises:
        DegreeRangeError: k < 0 或 k+1 超出记录的阶数
    """
    if k < 0 or k + 1 > f.kmax:
        raise DegreeRangeError(
            f"夹逼推导需要底空间的第 {k + 1} 阶，记录只到 {f.kmax} 阶",
            {"degree": k, "kmax": f.kmax},
        )
    base_k, base_next = f.base.at(k), f.base.at(k + 1)
    if base_k.is_trivial and base_next.is_trivial:
        return f.fiber.at(k)
    return unknown(countability_propagate(f.fiber.at(k).countable, base_k.countable))


# ---------------------------------------------------------------------------
# E_n 推导
# ---------------------------------------------------------------------------

@dataclass
class EnDeduction:
    profile: HomotopyProfile
    trace: List[TraceLine] = field(default_factory=list)
    comparisons: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "profile": self.profile.to_dict(),
            "comparisons": self.comparisons,
        }


def _check_en_arguments(n: int, kmax: int) -> None:
    if n < E8_RANK:
        raise EnRangeError(f"E_n 推导要求 n >= {E8_RANK}，收到 {n}", {"n": n})
    if kmax < 0:
        raise DegreeRangeError(f"同伦阶数不能为负: {kmax}", {"degree": kmax})
    cap = DEFAULT_SETTINGS.en_degree_cap
    if kmax > cap:
        raise KmaxCapError(f"E_n 的推导最多到 {cap} 阶，请求 {kmax}", {"kmax": kmax, "cap": cap})


def _base_case(tracked: int, trace: List[TraceLine]) -> HomotopyProfile:
    trace.append(TraceLine("maximal-compact", CITATIONS["e8"], comment="K(E8) ≅ SO(16)"))
    groups = []
    for k in range(tracked + 1):
        group = stable_pi_SO(E8_COMPACT_DIMENSION, k)
        rule = "identity-component" if k == 0 else "bott-stable-range"
        trace.append(TraceLine(rule, CITATIONS["connected" if k == 0 else "stable"], k, group))
        groups.append(group)
    return HomotopyProfile("K(E8)", tuple(groups))


def _compare_step(m: int, tracked: int, kmax: int, budget: Optional[int], show_progress: bool,
                  trace: List[TraceLine]) -> Dict:
    """
    比较 E_{m+1}/E_m 与 A_m/A_{m-1} 的胞腔表到 tracked 维，
    要求 kmax 维以内完全一致且所用子图同构
    """
    left = cell_table(named(f"E{m + 1}"), range(m), tracked, budget, show_progress)
    right = cell_table(named(f"A{m}"), range(m - 1), tracked, budget, show_progress)
    result = compare_tables(left, right)
    summary = {
        "quotient": f"E{m + 1}/E{m}",
        "model": f"A{m}/A{m - 1}",
        "result": result.to_dict(),
    }
    if (result.verdict == DIVERGE and result.dimension <= kmax) or not result.support_isomorphic:
        raise ComparisonFailedError(
            f"E{m + 1}/E{m} 与 A{m}/A{m - 1} 的胞腔在 {kmax} 维以内不一致: {result}",
            summary,
        )
    trace.append(TraceLine(
        "cell-comparison", CITATIONS["cells"],
        comment=f"E{m + 1}/E{m} vs A{m}/A{m - 1} cells agree through dimension {kmax}",
    ))
    if result.verdict == DIVERGE:
        _, left_count, right_count = result.detail[result.dimension]
        trace.append(TraceLine(
            "cell-comparison", CITATIONS["cells"],
            comment=(f"dimension {result.dimension} differs ({left_count} vs {right_count} cells); "
                     f"degree {result.dimension} is not claimed"),
        ))
    return summary


def _sphere_model_line(m: int, tracked: int, kmax: int, result: Dict) -> TraceLine:
    """底空间取 S^m 的同伦群；胞腔证据不到 tracked 维时在说明中写明"""
    comment = f"K(E{m + 1})/K(E{m}) modelled on S^{m}: trivial in degrees 0..{tracked}"
    if result["verdict"] == DIVERGE:
        comment += (f"; cell evidence reaches dimension {kmax} only, "
                    f"degree {tracked} of the base rests on the sphere model")
    return TraceLine("sphere-model", CITATIONS["sphere"], comment=comment)


def en_profile(n: int, kmax: int = 6, budget: Optional[int] = None,
               show_progress: bool = False) -> EnDeduction:
    """
    推导 K(E_n) 在 0..kmax 阶的同伦群

    以 K(E8) ≅ SO(16) 为起点，沿 E_m ⊂ E_{m+1} 归纳：
    K(E_{m+1})/K(E_m) 与 S^m 的胞腔在 kmax 维以内一致，
    因此底空间在 kmax+1 阶以内平凡，夹逼得到 π_k 不变

    Args:
        n: E_n 的秩，n >= 8
        kmax: 最高阶数，不超过 6

    Returns:
        EnDeduction: 同伦表、推导记录和每步的比较结果

    Raises:
        KmaxCapError: kmax > 6
        ComparisonFailedError: 胞腔比较不一致
    """
    _check_en_arguments(n, kmax)
    tracked = kmax + 1
    trace: List[TraceLine] = []
    comparisons: List[Dict] = []

    profile = _base_case(tracked, trace)
    for m in range(E8_RANK, n):
        summary = _compare_step(m, tracked, kmax, budget, show_progress, trace)
        comparisons.append(summary)
        base = sphere_profile(m, tracked).renamed(f"K(E{m + 1})/K(E{m})")
        trace.append(_sphere_model_line(m, tracked, kmax, summary["result"]))
        total = HomotopyProfile.from_mapping(f"K(E{m + 1})", {}, tracked)
        record = FibrationRecord(profile, total, base)
        trace.append(TraceLine(
            "fibration", record.justification,
            comment=f"K(E{m}) -> K(E{m + 1}) -> {base.space_name}, base is {tracked}-connected",
        ))
        groups = []
        for k in range(tracked):
            group = sandwich_deduce(record, k)
            trace.append(TraceLine("exact-sandwich", CITATIONS["sandwich"], k, group))
            groups.append(group)
        groups.append(unknown(countability_propagate(profile.at(tracked).countable, Countable.YES)))
        profile = HomotopyProfile(f"K(E{m + 1})", tuple(groups))
        logger.info(f"K(E{m + 1}) 的 0..{kmax} 阶同伦群: {[str(g) for g in groups[:tracked]]}")

    if n > E8_RANK:
        trace.append(TraceLine("induction", CITATIONS["induction"],
                               comment=f"K(E{n}) agrees with K(E8) in degrees 0..{kmax}"))
    return EnDeduction(profile.truncated(kmax), trace, comparisons)


# ---------------------------------------------------------------------------
# 可数性
# ---------------------------------------------------------------------------

def _so3_profile(kmax: int) -> HomotopyProfile:
    known = {0: TRIVIAL, 1: cyclic(2), 2: TRIVIAL, 3: Z}
    return HomotopyProfile("SO(3)", tuple(known.get(k, unknown(Countable.YES)) for k in range(kmax + 1)))


def countability_certificate(g: GeneralizedCartanMatrix, kmax: int, cell_depth: int = 3,
                             budget: Optional[int] = None) -> Tuple[HomotopyProfile, List[TraceLine]]:
    """
    证明 K(A) 的各阶同伦群都可数

    取 Dynkin 图中一条边 {i, j}，K_J ≅ SO(3) 是紧李群，
    K/SO(3) 是有可数多个胞腔的 CW 复形，由纤维化得到可数性

    Raises:
        CertificateError: 不是单边、不可约或秩小于 2
    """
    if kmax < 0:
        raise DegreeRangeError(f"同伦阶数不能为负: {kmax}", {"degree": kmax})
    if not is_simply_laced(g) or not is_irreducible(g) or g.n < 2:
        raise CertificateError(
            f"{g.display_name()} 需要是秩至少为 2 的不可约单边矩阵",
            {"simply_laced": is_simply_laced(g), "irreducible": is_irreducible(g), "rank": g.n},
        )
    i, j = min(tuple(sorted(edge)) for edge in dynkin_graph(g).edges)
    labels = f"{g.labels[i]},{g.labels[j]}"
    trace = [TraceLine("rank-two-subgroup", CITATIONS["lie"],
                       comment=f"K_J for J = {{{labels}}} is SO(3), a compact Lie group")]

    cells = cell_table(g, (i, j), cell_depth, budget)
    trace.append(TraceLine(
        "cell-structure", CITATIONS["cw"],
        comment=f"K/SO(3) has {list(cells.counts)} cells in dimensions 0..{cell_depth}, countably many in total",
    ))

    fiber = _so3_profile(kmax)
    base = HomotopyProfile(f"K({g.display_name()})/SO(3)", tuple(unknown(Countable.YES) for _ in range(kmax + 1)))
    groups = []
    for k in range(kmax + 1):
        group = unknown(countability_propagate(fiber.at(k).countable, base.at(k).countable))
        trace.append(TraceLine("countable-quotient", CITATIONS["quotient"], k, group,
                               comment=f"countable={group.countable.value}"))
        groups.append(group)
    return HomotopyProfile(f"K({g.display_name()})", tuple(groups)), trace
