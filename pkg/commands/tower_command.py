# tower_command.py
import re
from typing import Any, Dict, List

from commands.base_command import BaseCommand, CommandResult, RenderedOutput, UsageError
from homotopy.groups import HomotopyProfile
from homotopy.ledger import en_profile, orthogonal_profile
from homotopy.whitehead_tower import whitehead_tower

ORTHOGONAL_PATTERN = re.compile(r"^\s*(S?O)\s*\(?\s*(\d+)\s*\)?\s*$", re.IGNORECASE)
EN_PATTERN = re.compile(r"^\s*(?:K\s*\(\s*)?E\s*(\d+)\s*\)?\s*$", re.IGNORECASE)


def parse_space(text: str, kmax: int, budget=None) -> HomotopyProfile:
    """
    解析空间名：O16 / SO(16) 用 Bott 周期，E10 / K(E10) 走 E_n 推导

    Raises:
        UsageError: 无法识别的空间名
    """
    match = ORTHOGONAL_PATTERN.match(text or "")
    if match:
        return orthogonal_profile(int(match.group(2)), kmax, connected=match.group(1).upper() == "SO")
    match = EN_PATTERN.match(text or "")
    if match:
        return en_profile(int(match.group(1)), kmax, budget).profile
    raise UsageError(f"--space: 无法识别的空间 {text!r}（可用 O16、SO16、E10）", {"flag": "--space", "text": text})


class TowerCommand(BaseCommand):
    """
    Whitehead 塔：依次杀掉最低的非平凡同伦群
    """

    name = "tower"
    description = "构造截断的 Whitehead 塔"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": "space",
                "type": "text",
                "flag": "--space",
                "label": "O16、SO16 或 E10 这样的空间名",
                "default": "E10",
            },
            {
                "name": "max_k",
                "type": "number",
                "flag": "--max-k",
                "label": "截断阶数",
                "default": 6,
                "min_value": 0,
            },
        ]

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        profile = parse_space(user_input["space"], user_input["max_k"], user_input.get("budget"))
        tower = whitehead_tower(profile)
        payload = tower.to_dict()
        payload.update({"space": user_input["space"], "max_k": user_input["max_k"],
                        "source_profile": profile.to_dict()})
        return CommandResult(payload)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = [[stage["killed_degree"], stage["killed_group"], stage["name"]] for stage in payload["stages"]]
        rows.append([f"<= {payload['truncated_at']}", "", payload["chain"]])
        csv_rows = [[stage["killed_degree"], stage["killed_group"], stage["name"]] for stage in payload["stages"]]
        return RenderedOutput(["degree", "killed", "stage"], rows, csv_rows)

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "O(16)", "description": "connected cover、Spin、String 三层",
             "argv": ["tower", "--space", "O16", "--max-k", "6"]},
        ]
