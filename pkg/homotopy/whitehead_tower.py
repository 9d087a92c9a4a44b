# whitehead_tower.py
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from homotopy.groups import TRIVIAL, AbelianGroupDescriptor, HomotopyProfile
from homotopy.ledger import en_profile
from utils.errors import EngineError

logger = logging.getLogger(__name__)

STAGE_NAMES = {0: "connected cover", 1: "Spin-stage", 3: "String-stage"}


class UnknownEntryError(EngineError):
    """塔的构造遇到未知的同伦群"""

    code = "UnknownEntry"


class StageNotFoundError(EngineError):
    code = "StageNotFound"


def stage_name(k: int) -> str:
    return STAGE_NAMES.get(k, f"stage {k}")


@dataclass(frozen=True)
class TowerStage:
    stage_name: str
    killed_degree: int
    killed_group: AbelianGroupDescriptor
    resulting_profile: HomotopyProfile

    def to_dict(self) -> Dict:
        return {
            "name": self.stage_name,
            "killed_degree": self.killed_degree,
            "killed_group": str(self.killed_group),
            "profile": self.resulting_profile.to_dict(),
        }


@dataclass(frozen=True)
class WhiteheadTower:
    """
    Whitehead 塔：stages 按被杀掉的阶数升序排列，
    truncated_at 为截断阶数，更高阶的层不生成
    """

    source: HomotopyProfile
    stages: Tuple[TowerStage, ...]
    truncated_at: int

    def __iter__(self) -> Iterator[TowerStage]:
        return iter(self.stages)

    def __len__(self) -> int:
        return len(self.stages)

    def stage(self, name: str) -> TowerStage:
        for s in self.stages:
            if s.stage_name == name:
                return s
        raise StageNotFoundError(
            f"{self.source.space_name} 的塔中没有 {name}（0..{self.truncated_at} 阶内对应的群平凡）",
            {"space": self.source.space_name, "stage": name},
        )

    def chain(self) -> str:
        """从最高层到原空间，例如 String-stage → Spin-stage → connected cover → O(16)"""
        names = [s.stage_name for s in reversed(self.stages)] + [self.source.space_name]
        return " → ".join(names)

    def to_dict(self) -> Dict:
        return {
            "source": self.source.space_name,
            "stages": [s.to_dict() for s in self.stages],
            "truncated_at": self.truncated_at,
            "chain": self.chain(),
        }


def whitehead_tower(p: HomotopyProfile) -> WhiteheadTower:
    """
    依次杀掉最低的非平凡同伦群，直到 kmax

    Args:
        p: 0..kmax 阶全部已知的同伦表

    Returns:
        WhiteheadTower: 每个非平凡阶数对应一层

    Raises:
        UnknownEntryError: 某阶未知，附带阻塞的阶数
    """
    blocking = p.unknown_degrees()
    if blocking:
        raise UnknownEntryError(
            f"{p.space_name} 的第 {blocking[0]} 阶同伦群未知，无法构造 Whitehead 塔",
            {"space": p.space_name, "degree": blocking[0]},
        )

    stages: List[TowerStage] = []
    current = list(p.groups)
    for k, group in enumerate(p.groups):
        if group.is_trivial:
            continue
        current[k] = TRIVIAL
        resulting = HomotopyProfile(f"{p.space_name}⟨{k + 1}⟩", tuple(current))
        stages.append(TowerStage(stage_name(k), k, group, resulting))
        logger.debug(f"{p.space_name}: 杀掉第 {k} 阶 {group}，得到 {stage_name(k)}")
    return WhiteheadTower(p, tuple(stages), p.kmax)


def _stage_profile(n: int, kmax: int, name: str, budget: Optional[int]) -> HomotopyProfile:
    base = en_profile(n, kmax, budget).profile
    tower = whitehead_tower(base)
    profile = tower.stage(name).resulting_profile
    return profile.renamed(f"{name.split('-')[0]}(E{n})")


def spin_profile(n: int, kmax: int = 6, budget: Optional[int] = None) -> HomotopyProfile:
    """Spin(E_n)：K(E_n) 的万有覆叠（杀掉 π_1）"""
    return _stage_profile(n, kmax, STAGE_NAMES[1], budget)


def string_profile(n: int, kmax: int = 6, budget: Optional[int] = None) -> HomotopyProfile:
    """String(E_n)：在 Spin 之上再杀掉 π_3"""
    return _stage_profile(n, kmax, STAGE_NAMES[3], budget)
