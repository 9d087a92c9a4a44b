# cells_command.py
from typing import Any, Dict, List

from algebra.flag_cells import GROUP_SHEETS, cell_table, cover_cell_table, group_cell_table
from commands.base_command import (
    BaseCommand,
    CommandResult,
    RenderedOutput,
    UsageError,
    gcm_fields,
    resolve_nodes,
    table_payload,
)
from homotopy.ledger import CITATIONS, TraceLine


class CellsCommand(BaseCommand):
    """
    旗流形 G/P_J（或其有限覆叠、或群 K / Spin 本身）的胞腔表
    """

    name = "cells"
    description = "按维数统计 Bruhat 胞腔"

    def get_input_fields(self) -> List[Dict[str, Any]]:
        return gcm_fields(sub=True) + [
            {
                "name": "max_dim",
                "type": "number",
                "flag": "--max-dim",
                "label": "最大维数 D",
                "default": 8,
                "min_value": 0,
            },
            {
                "name": "sheets",
                "type": "number",
                "flag": "--sheets",
                "label": "有限覆叠的叶数",
                "default": 1,
                "min_value": 1,
            },
            {
                "name": "group",
                "type": "select",
                "flag": "--group",
                "label": "flag 为旗流形本身，K/Spin 为群的胞腔结构（要求 J 为空）",
                "options": sorted(GROUP_SHEETS),
                "default": "flag",
            },
        ]

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        prepared = dict(user_input)
        prepared["gcm"] = self.gcm_from_input(user_input)
        prepared["J"] = resolve_nodes(user_input.get("sub"), prepared["gcm"])
        group = user_input.get("group") or "flag"
        if group != "flag" and (prepared["J"] or user_input.get("sheets", 1) != 1):
            raise UsageError("--group: 群的胞腔结构不能再指定 --sub 或 --sheets", {"flag": "--group"})
        prepared["group"] = group
        return prepared

    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        g, J = user_input["gcm"], user_input["J"]
        D = user_input["max_dim"]
        budget, progress = user_input.get("budget"), user_input.get("progress", False)
        if user_input["group"] != "flag":
            table = group_cell_table(g, D, user_input["group"], budget, progress)
        else:
            table = cell_table(g, J, D, budget, progress)
            sheets = user_input.get("sheets") or 1
            if sheets != 1:
                table = cover_cell_table(table, sheets)
        payload = table_payload(g, J)
        payload.update({
            "group": user_input["group"],
            "max_dim": D,
            "sheets": table.sheets,
            "counts": list(table.counts),
        })
        trace = None
        if table.sheets != 1:
            trace = [TraceLine("finite-cover", CITATIONS["cover"],
                               comment=f"{table.sheets} sheets over the Bruhat cells of {table.source.name}")]
        return CommandResult(payload, trace)

    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        rows = [[d, count] for d, count in enumerate(payload["counts"])]
        return RenderedOutput(["dimension", "cells"], rows, [payload["counts"]])

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        return [
            {"name": "E10/E9", "description": "K(E10)/K(E9) 的低维胞腔",
             "argv": ["cells", "E10", "--sub", "1-9", "--max-dim", "8"]},
            {"name": "K(E10)", "description": "群本身，2^10 叶",
             "argv": ["cells", "E10", "--group", "K", "--max-dim", "3"]},
        ]
