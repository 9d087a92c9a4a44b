# compare_command.py
from typing import Any, Dict, List

from algebra.flag_cells import cell_table, compare_tables
from commands.base_command import BaseCommand, CommandResult, RenderedOutput, UsageError, resolve_gcm, resolve_nodes


class CompareCommand(BaseCommand):
    """
    比较两个旗流形的胞腔表
    --sub 依次对应左、右两侧，省略时为空集
    """

    name = "compare"
    description = "逐维比较两个胞腔表"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": "left",
                "type": "gcm",
                "positional": True,
                "required": True,
                "label": "左侧类型名或 GCM 文件",
            },
            {
                "name": "right",
                "type": "gcm",
                "positional": True,
                "required": True,
                "label": "右侧类型名或 GCM 文件",
            },
            {
                "name": "sub",
                "type": "nodes",
                "flag": "--sub",
                "repeat": True,
                "label": "抛物子集，第一次对应左侧，第二次对应右侧",
                "default": None,
            },
            {
                "name": "max_dim",
                "type": "number",
                "flag": "--max-dim",
                "label": "比较到的维数 D",
                "default": 8,
                "min_value": 0,
            },
        ]

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        prepared = dict(user_input)
        subs = list(user_input.get("sub") or [])
        if len(subs) > 2:
            raise UsageError("--sub: 最多给出两次（左、右）", {"flag": "--sub", "count": len(subs)})
        subs += [""] * (2 - len(subs))
        for side, text in zip(("left", "right"), subs):
            g = resolve_gcm(user_input[side], side)
            prepared[side + "_gcm"] = g
            prepared[side + "_J"] = resolve_nodes(text, g)
        return prepared

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        D = user_input["max_dim"]
        budget, progress = user_input.get("budget"), user_input.get("progress", False)
        left = cell_table(user_input["left_gcm"], user_input["left_J"], D, budget, progress)
        right = cell_table(user_input["right_gcm"], user_input["right_J"], D, budget, progress)
        result = compare_tables(left, right)
        payload = result.to_dict()
        payload.update({"left": left.to_dict(), "right": right.to_dict(), "max_dim": D})
        return CommandResult(payload)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = [list(row) + ["" if row[1] == row[2] else "≠"] for row in payload["detail"]]
        rows.append([payload["verdict"], payload["dimension"], "", ""])
        csv_rows = [list(row) for row in payload["detail"]]
        return RenderedOutput(["dimension", "left", "right", ""], rows, csv_rows)

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "E10/E9 vs A9/A8", "description": "低维胞腔一致",
             "argv": ["compare", "E10", "A9", "--sub", "1-9", "--sub", "1-8", "--max-dim", "7"]},
        ]
