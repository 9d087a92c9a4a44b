# growth_command.py
from typing import Any, Dict, List

from algebra.weyl_group import growth_series
from commands.base_command import BaseCommand, CommandResult, RenderedOutput, gcm_fields


class GrowthCommand(BaseCommand):
    """
    Weyl 群的增长级数：长度为 0..L 的元素个数
    """

    name = "growth"
    description = "按长度统计 Weyl 群元素个数"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return gcm_fields() + [
            {
                "name": "max_len",
                "type": "number",
                "flag": "--max-len",
                "label": "最大长度 L",
                "default": 10,
                "min_value": 0,
            },
        ]

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        prepared = dict(user_input)
        prepared["gcm"] = self.gcm_from_input(user_input)
        return prepared

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        g = user_input["gcm"]
        coefficients = growth_series(g, user_input["max_len"], user_input.get("budget"),
                                     user_input.get("progress", False))
        return CommandResult({
            "type": g.display_name(),
            "rank": g.n,
            "max_len": user_input["max_len"],
            "coefficients": coefficients,
            "total": sum(coefficients),
        })

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = [[length, count] for length, count in enumerate(payload["coefficients"])]
        return RenderedOutput(["length", "count"], rows, [payload["coefficients"]])

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "A3", "description": "有限型，级数在 6 处结束", "argv": ["growth", "A3", "--max-len", "6"]},
            {"name": "E10", "description": "双曲型", "argv": ["growth", "E10", "--max-len", "6"]},
        ]
