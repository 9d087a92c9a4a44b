# bott_command.py
from typing import Any, Dict, List

from commands.base_command import BaseCommand, CommandResult, RenderedOutput
from homotopy.ledger import UNSTABLE_EXCEPTIONS, bott_pi_O, bott_trace


class BottCommand(BaseCommand):
    """Bott 周期表 π_k(O)，并列出记录的非稳定例外"""

    name = "bott"
    description = "稳定正交群的同伦群"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": "max_k",
                "type": "number",
                "flag": "--max-k",
                "label": "最高阶数",
                "default": 15,
                "min_value": 0,
            },
        ]

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        values = [{"degree": k, "group": str(bott_pi_O(k))} for k in range(user_input["max_k"] + 1)]
        exceptions = [
            {"n": n, "degree": k, "group": str(group), "stable_group": str(bott_pi_O(k))}
            for (n, k), group in sorted(UNSTABLE_EXCEPTIONS.items())
        ]
        payload = {"max_k": user_input["max_k"], "values": values, "unstable_exceptions": exceptions}
        return CommandResult(payload, bott_trace(user_input["max_k"]))

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = [[v["degree"], v["group"]] for v in payload["values"]]
        return RenderedOutput(["degree", "pi_k(O)"], rows)

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "π_0..π_15", "description": "两个周期，附 π_15(O(16)) 的例外",
             "argv": ["bott", "--max-k", "15"]},
        ]
