# report_utils.py
import json
import logging
import os
from typing import Any, Dict, List, Sequence

logger = logging.getLogger(__name__)


def dump_json(data: Dict[str, Any]) -> str:
    """
    报告的规范 JSON 文本
    键排序、缩进 2、保留非 ASCII 字符，相同输入得到逐字节相同的输出

    Args:
        data (Dict): 报告字典

    Returns:
        str: 以换行结尾的 JSON 文本
    """
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def save_report(path: str, data: Dict[str, Any]) -> bool:
    """
    把报告写入文件

    Args:
        path (str): 目标文件路径
        data (Dict): 报告字典

    Returns:
        bool: 是否成功保存
    """
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(dump_json(data))
        logger.info(f"报告已保存: {path}")
        return True
    except OSError as e:
        logger.error(f"保存报告失败: {e}")
        return False


def load_report(path: str) -> Dict[str, Any]:
    """读取之前保存的报告，文件不存在或损坏时返回空字典"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError):
        return {}


def rows_to_csv(rows: Sequence[Sequence[Any]]) -> str:
    """每行用逗号连接，不加引号"""
    return "".join(",".join(str(value) for value in row) + "\n" for row in rows)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """
    对齐的纯文本表格

    Args:
        headers: 表头
        rows: 数据行

    Returns:
        str: 表头、分隔线和数据行
    """
    cells: List[List[str]] = [[str(h) for h in headers]] + [[str(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells if i < len(row)) for i in range(len(headers))]
    lines = []
    for index, row in enumerate(cells):
        lines.append("  ".join(value.ljust(widths[i]) for i, value in enumerate(row)).rstrip())
        if index == 0:
            lines.append("  ".join("-" * w for w in widths).rstrip())
    return "\n".join(lines) + "\n"
