# homotopy_en_command.py
from typing import Any, Dict, List

from commands.base_command import BaseCommand, CommandResult, RenderedOutput
from homotopy.ledger import en_profile
from utils.settings import DEFAULT_SETTINGS


def profile_rows(profile: Dict[str, Any]) -> List[List[Any]]:
    return [[entry["degree"], entry["text"], entry["countable"]] for entry in profile["groups"]]


class HomotopyEnCommand(BaseCommand):
    """
    K(E_n) 的低阶同伦群，附带逐步推导记录
    """

    name = "homotopy-en"
    description = "推导 K(E_n) 在 0..6 阶的同伦群"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": "n",
                "type": "number",
                "flag": "--n",
                "label": "E_n 的秩（至少为 8）",
                "default": 10,
                "min_value": 8,
            },
            {
                "name": "max_k",
                "type": "number",
                "flag": "--max-k",
                "label": "最高阶数",
                "default": DEFAULT_SETTINGS.en_degree_cap,
                "min_value": 0,
            },
        ]

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        deduction = en_profile(user_input["n"], user_input["max_k"], user_input.get("budget"),
                               user_input.get("progress", False))
        payload = deduction.to_dict()
        payload.update({"n": user_input["n"], "max_k": user_input["max_k"]})
        return CommandResult(payload, deduction.trace)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = profile_rows(payload["profile"])
        return RenderedOutput(["degree", "group", "countable"], rows)

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "E10", "description": "K(E10) 的 π_0..π_6",
             "argv": ["homotopy-en", "--n", "10", "--max-k", "6", "--format", "json"]},
        ]
