# groups.py
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from utils.errors import EngineError


class Countable(Enum):
    YES = "yes"
    UNKNOWN = "unknown"


class DegreeRangeError(EngineError):
    """请求的同伦阶数超出已知范围"""

    code = "DegreeRangeError"


class DescriptorError(EngineError):
    code = "DescriptorError"


TRIVIAL_KIND = "trivial"
FREE_KIND = "free"
CYCLIC_KIND = "cyclic"
SUM_KIND = "sum"
UNKNOWN_KIND = "unknown"


@dataclass(frozen=True)
class AbelianGroupDescriptor:
    """
    有限生成交换群（或未知群）的规范描述

    已知群统一写成 Z^rank ⊕ C_{m1} ⊕ ... ，orders 升序且每项 >= 2；
    known=False 表示群未知，此时只保留可数性信息
    """

    rank: int = 0
    orders: Tuple[int, ...] = ()
    known: bool = True
    countable: Countable = Countable.YES

    def __post_init__(self):
        # 有限生成群总是可数的
        if self.known and self.countable != Countable.YES:
            object.__setattr__(self, "countable", Countable.YES)

    @property
    def kind(self) -> str:
        if not self.known:
            return UNKNOWN_KIND
        if self.rank == 0 and not self.orders:
            return TRIVIAL_KIND
        if not self.orders:
            return FREE_KIND
        if self.rank == 0 and len(self.orders) == 1:
            return CYCLIC_KIND
        return SUM_KIND

    @property
    def is_trivial(self) -> bool:
        return self.kind == TRIVIAL_KIND

    def __str__(self) -> str:
        if not self.known:
            return "?[countable]" if self.countable == Countable.YES else "?"
        if self.is_trivial:
            return "1"
        parts = ["Z"] * self.rank + [f"C{m}" for m in self.orders]
        return "⊕".join(parts)

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "orders": list(self.orders),
            "countable": self.countable.value,
            "text": str(self),
        }


TRIVIAL = AbelianGroupDescriptor()
Z = AbelianGroupDescriptor(rank=1)


def free(rank: int) -> AbelianGroupDescriptor:
    if rank < 0:
        raise DescriptorError(f"秩不能为负: {rank}", {"rank": rank})
    return AbelianGroupDescriptor(rank=rank)


def cyclic(m: int) -> AbelianGroupDescriptor:
    """C_m，C_1 规范化为平凡群"""
    if m < 1:
        raise DescriptorError(f"循环群的阶必须为正: {m}", {"order": m})
    if m == 1:
        return TRIVIAL
    return AbelianGroupDescriptor(orders=(m,))


def unknown(countable: Countable = Countable.UNKNOWN) -> AbelianGroupDescriptor:
    return AbelianGroupDescriptor(known=False, countable=countable)


def direct_sum(*parts: AbelianGroupDescriptor) -> AbelianGroupDescriptor:
    """
    直和：展开嵌套、合并自由部分、去掉平凡项；
    任一分量未知则结果未知，可数性取所有分量的合取
    """
    if any(not p.known for p in parts):
        countable = Countable.YES if all(p.countable == Countable.YES for p in parts) else Countable.UNKNOWN
        return unknown(countable)
    rank = sum(p.rank for p in parts)
    orders = tuple(sorted(m for p in parts for m in p.orders))
    return AbelianGroupDescriptor(rank=rank, orders=orders)


@dataclass(frozen=True)
class HomotopyProfile:
    """
    空间在阶数 0..kmax 上的同伦群表，每个阶数恰有一项
    """

    space_name: str
    groups: Tuple[AbelianGroupDescriptor, ...]

    @property
    def kmax(self) -> int:
        return len(self.groups) - 1

    @classmethod
    def from_mapping(cls, space_name: str, values: Mapping[int, AbelianGroupDescriptor],
                     kmax: int) -> "HomotopyProfile":
        """未给出的阶数填为未知"""
        return cls(space_name, tuple(values.get(k, unknown()) for k in range(kmax + 1)))

    def at(self, k: int) -> AbelianGroupDescriptor:
        if k < 0 or k > self.kmax:
            raise DegreeRangeError(
                f"{self.space_name} 的同伦群只记录到 {self.kmax} 阶，请求 {k}",
                {"space": self.space_name, "kmax": self.kmax, "degree": k},
            )
        return self.groups[k]

    def truncated(self, kmax: int) -> "HomotopyProfile":
        if kmax > self.kmax:
            raise DegreeRangeError(
                f"无法把 {self.space_name} 截断到更高的 {kmax} 阶",
                {"space": self.space_name, "kmax": self.kmax, "degree": kmax},
            )
        return HomotopyProfile(self.space_name, self.groups[:kmax + 1])

    def renamed(self, space_name: str) -> "HomotopyProfile":
        return replace(self, space_name=space_name)

    def unknown_degrees(self) -> List[int]:
        return [k for k, group in enumerate(self.groups) if not group.known]

    def to_dict(self) -> Dict:
        return {
            "space": self.space_name,
            "kmax": self.kmax,
            "groups": [dict(group.to_dict(), degree=k) for k, group in enumerate(self.groups)],
        }


def trivial_profile(space_name: str, kmax: int, known_until: Optional[int] = None) -> HomotopyProfile:
    """阶数 <= known_until 的群为平凡，之后为未知"""
    known_until = kmax if known_until is None else known_until
    return HomotopyProfile(space_name, tuple(TRIVIAL if k <= known_until else unknown() for k in range(kmax + 1)))
