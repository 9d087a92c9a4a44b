# base_command.py
import argparse
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from algebra.cartan_matrix import (
    DynkinNameError,
    GeneralizedCartanMatrix,
    NodeIndexError,
    NodeSubset,
    load_gcm_file,
    named,
    parse_node_subset,
)
from homotopy.ledger import TraceLine
from utils.errors import EngineError
from utils.report_utils import format_table, rows_to_csv
from utils.settings import DEFAULT_SETTINGS, EngineSettings

OUTPUT_FORMATS = ["table", "json", "csv"]

# 所有命令共用的参数
COMMON_FIELDS: List[Dict[str, Any]] = [
    {
        "name": "format",
        "type": "select",
        "flag": "--format",
        "label": "输出格式",
        "options": OUTPUT_FORMATS,
        "default": "table",
        "required": False,
    },
    {
        "name": "budget",
        "type": "number",
        "flag": "--budget",
        "label": "枚举元素总数上限",
        "default": DEFAULT_SETTINGS.element_budget,
        "min_value": 1,
        "required": False,
    },
    {
        "name": "output",
        "type": "text",
        "flag": "--output",
        "label": "同时把 JSON 报告写入该文件",
        "default": None,
        "required": False,
    },
    {
        "name": "progress",
        "type": "checkbox",
        "flag": "--progress",
        "label": "在标准错误显示枚举进度条",
        "default": False,
        "required": False,
    },
    {
        "name": "with_timing",
        "type": "checkbox",
        "flag": "--with-timing",
        "label": "在报告中附带耗时",
        "default": False,
        "required": False,
    },
    {
        "name": "verbose",
        "type": "count",
        "flag": "-v",
        "label": "日志详细程度，可重复",
        "default": 0,
        "required": False,
    },
]

# 不回显到报告 provenance 里的参数
NON_ECHO_FIELDS = {"output", "progress", "verbose", "with_timing"}


class UsageError(EngineError):
    """命令行参数用法错误，details["flag"] 指出出错的参数"""

    code = "UsageError"


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    trace: Optional[List[TraceLine]] = None


@dataclass
class RenderedOutput:
    headers: List[str]
    rows: List[List[Any]]
    csv_rows: List[List[Any]] = field(default_factory=list)


def field_flag(field_def: Dict[str, Any]) -> str:
    """报错时展示的参数名"""
    if field_def.get("positional"):
        return field_def["name"]
    return field_def.get("flag") or "--" + field_def["name"].replace("_", "-")


def resolve_gcm(text: str, flag: str) -> GeneralizedCartanMatrix:
    """
    把命名类型（E10）或 GCM 文件路径解析为矩阵

    Raises:
        UsageError: 既不是合法的类型名也不是存在的文件
    """
    try:
        return named(text)
    except DynkinNameError as e:
        if os.path.isfile(text):
            return load_gcm_file(text)
        raise UsageError(f"{flag}: {e.message}", dict(e.details, flag=flag))


def resolve_nodes(text: Optional[str], g: GeneralizedCartanMatrix, flag: str = "--sub") -> NodeSubset:
    try:
        return parse_node_subset(text or "", g)
    except NodeIndexError as e:
        raise UsageError(f"{flag}: {e.message}", dict(e.details, flag=flag))


class BaseCommand(ABC):
    """
    命令基类
    所有子命令都必须继承此类，命令行入口会自动发现 commands/ 下的子类
    """

    # 子命令名，例如 "growth"
    name: str = ""
    description: str = ""

    def __init__(self, settings: EngineSettings = DEFAULT_SETTINGS):
        """
        初始化命令

        Args:
            settings (EngineSettings): 引擎默认参数
        """
        self.settings = settings

    @abstractmethod
    def get_input_fields(self) -> List[Dict[str, Any]]:
        """
        获取输入字段配置

        Returns:
            List[Dict]: 每个字段是一个字典，包含：
                - name (str): 字段名，必须唯一
                - type (str): gcm, nodes, number, select, checkbox, text, count
                - label (str): 帮助文本
                - flag (str): 命令行参数名，例如 "--max-len"
                - positional (bool): 是否为位置参数
                - repeat (bool): 是否可以重复给出
                - default (Any): 默认值
                - required (bool): 是否必填，默认为 False
                - options (List): 选项列表（select）
                - min_value / max_value (int): 取值范围（number）
        """
        pass

    @abstractmethod
    def execute(self, user_input: Dict[str, Any]) -> CommandResult:
        """
        执行命令

        Args:
            user_input (Dict): 经过 preprocess_input 处理的参数

        Returns:
            CommandResult: JSON 报告的 payload 与可选的推导记录

        Raises:
            EngineError: 可预期的计算错误
        """
        pass

    @abstractmethod
    def render(self, payload: Dict[str, Any]) -> RenderedOutput:
        """把 payload 投影为表格行和 CSV 行，两者只包含 payload 中已有的数值"""
        pass

    def all_fields(self) -> List[Dict[str, Any]]:
        return self.get_input_fields() + COMMON_FIELDS

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """根据字段配置注册 argparse 参数"""
        for field_def in self.all_fields():
            kwargs: Dict[str, Any] = {"help": field_def.get("label", "")}
            kind = field_def["type"]
            if kind == "checkbox":
                kwargs["action"] = "store_true"
            elif kind == "count":
                kwargs["action"] = "count"
                kwargs["default"] = field_def.get("default", 0)
            else:
                if kind == "number":
                    kwargs["type"] = int
                if kind == "select":
                    kwargs["choices"] = field_def["options"]
                if field_def.get("repeat"):
                    kwargs["action"] = "append"
                kwargs["default"] = field_def.get("default")

            if field_def.get("positional"):
                if not field_def.get("required"):
                    kwargs["nargs"] = "?"
                parser.add_argument(field_def["name"], **kwargs)
            else:
                kwargs["dest"] = field_def["name"]
                parser.add_argument(field_flag(field_def), **kwargs)

    def validate_input(self, user_input: Dict[str, Any]) -> Tuple[bool, str]:
        """
        验证用户输入

        Returns:
            tuple: (is_valid, error_message)，错误信息以出错的参数名开头
        """
        for field_def in self.all_fields():
            name = field_def["name"]
            value = user_input.get(name)
            flag = field_flag(field_def)
            if field_def.get("required") and value in (None, "", []):
                return False, f"{flag}: 必须提供{field_def.get('label', name)}"
            if value is None:
                continue
            if field_def["type"] == "number":
                if "min_value" in field_def and value < field_def["min_value"]:
                    return False, f"{flag}: 不能小于 {field_def['min_value']}（收到 {value}）"
                if "max_value" in field_def and value > field_def["max_value"]:
                    return False, f"{flag}: 不能大于 {field_def['max_value']}（收到 {value}）"
            elif field_def["type"] == "select" and value not in field_def["options"]:
                return False, f"{flag}: 必须是以下选项之一: {', '.join(field_def['options'])}"
        return True, ""

    def preprocess_input(self, user_input: Dict[str, Any]) -> Dict[str, Any]:
        """
        预处理用户输入
        子类可以重写此方法把类型名、文件和节点列表解析为矩阵与下标
        """
        return dict(user_input)

    def gcm_from_input(self, user_input: Dict[str, Any]) -> GeneralizedCartanMatrix:
        """位置参数 type 与 --file 恰好给出一个"""
        text, path = user_input.get("type"), user_input.get("file")
        if bool(text) == bool(path):
            raise UsageError("type/--file: 需要恰好给出类型名或 GCM 文件中的一个", {"flag": "--file"})
        if path:
            return load_gcm_file(path)
        return resolve_gcm(text, "type")

    def format_output(self, payload: Dict[str, Any], output_format: str) -> str:
        rendered = self.render(payload)
        if output_format == "csv":
            return rows_to_csv(rendered.csv_rows or rendered.rows)
        return format_table(rendered.headers, rendered.rows)

    def get_command_info(self) -> Dict[str, str]:
        """
        获取命令信息

        Returns:
            Dict: name、description、version
        """
        return {
            "name": self.name,
            "description": self.description or "未提供描述",
            "version": self.settings.version,
        }

    def get_usage_examples(self) -> List[Dict[str, Any]]:
        """
        获取使用示例

        Returns:
            List[Dict]: 每个示例包含 name、description、argv
        """
        return []


def gcm_fields(sub: bool = False) -> List[Dict[str, Any]]:
    """growth/cosets/cells 共用的矩阵输入字段"""
    fields: List[Dict[str, Any]] = [
        {
            "name": "type",
            "type": "gcm",
            "positional": True,
            "label": "命名类型（A/D/E，例如 E10）或 GCM 文件路径",
            "default": None,
        },
        {
            "name": "file",
            "type": "text",
            "flag": "--file",
            "label": "GCM 文本文件",
            "default": None,
        },
    ]
    if sub:
        fields.append({
            "name": "sub",
            "type": "nodes",
            "flag": "--sub",
            "label": "抛物子集 J，例如 1-8,10（从 1 编号）",
            "default": None,
        })
    return fields


def table_payload(g: GeneralizedCartanMatrix, J: NodeSubset) -> Dict[str, Any]:
    return {
        "type": g.display_name(),
        "rank": g.n,
        "parabolic": [g.labels[j] for j in J],
    }
