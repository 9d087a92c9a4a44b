# countable_command.py
from typing import Any, Dict, List

from commands.base_command import BaseCommand, CommandResult, RenderedOutput, gcm_fields
from commands.homotopy_en_command import profile_rows
from homotopy.ledger import countability_certificate


class CountableCommand(BaseCommand):
    """
    可数性证书：单边不可约 GCM 的 K(A) 各阶同伦群可数
    """

    name = "countable"
    description = "证明 K(A) 的同伦群可数"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return gcm_fields() + [
            {
                "name": "max_k",
                "type": "number",
                "flag": "--max-k",
                "label": "列出的最高阶数",
                "default": 6,
                "min_value": 0,
            },
        ]

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        prepared = dict(user_input)
        prepared["gcm"] = self.gcm_from_input(user_input)
        return prepared

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        g = user_input["gcm"]
        profile, trace = countability_certificate(g, user_input["max_k"], budget=user_input.get("budget"))
        return CommandResult({"type": g.display_name(), "max_k": user_input["max_k"],
                              "profile": profile.to_dict()}, trace)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        return RenderedOutput(["degree", "group", "countable"], profile_rows(payload["profile"]))

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "E10", "description": "取 A2 子图 {1,3}，K(E10) 的 π_0..π_3 可数",
             "argv": ["countable", "E10", "--max-k", "3"]},
        ]
