# cosets_command.py
from typing import Any, Dict, List

from algebra.weyl_group import minimal_coset_reps
from commands.base_command import BaseCommand, CommandResult, RenderedOutput, gcm_fields, resolve_nodes, table_payload


class CosetsCommand(BaseCommand):
    """
    最小陪集代表元 W^J，按长度列出规范字
    """

    name = "cosets"
    description = "列出最小陪集代表元"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return gcm_fields(sub=True) + [
            {
                "name": "max_len",
                "type": "number",
                "flag": "--max-len",
                "label": "最大长度 L",
                "default": 4,
                "min_value": 0,
            },
        ]

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        prepared = dict(user_input)
        prepared["gcm"] = self.gcm_from_input(user_input)
        prepared["J"] = resolve_nodes(user_input.get("sub"), prepared["gcm"])
        return prepared

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        g, J = user_input["gcm"], user_input["J"]
        levels = minimal_coset_reps(g, J, user_input["max_len"], user_input.get("budget"),
                                    user_input.get("progress", False))
        payload = table_payload(g, J)
        payload.update({
            "max_len": user_input["max_len"],
            "sizes": levels.sizes(),
            "levels": [[w.word_labels() for w in level] for level in levels.levels],
        })
        return CommandResult(payload)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = []
        for length, words in enumerate(payload["levels"]):
            text = " ".join("s" + "s".join(word) if word else "e" for word in words)
            rows.append([length, len(words), text])
        csv_rows = [[length, size] for length, size in enumerate(payload["sizes"])]
        return RenderedOutput(["length", "count", "representatives"], rows, csv_rows)

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "A2/A1", "description": "J = {2}", "argv": ["cosets", "A2", "--sub", "2", "--max-len", "3"]},
        ]
