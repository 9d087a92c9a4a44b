# errors.py
from typing import Any, Dict, Optional


class EngineError(Exception):
    """
    引擎领域错误基类
    所有可预期的计算错误都继承此类，命令行据此返回退出码 1
    """

    code = "EngineError"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        初始化错误

        Args:
            message (str): 错误描述
            details (Dict): 结构化的附加信息，会原样写入报告
        """
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """
        转换为可序列化的字典

        Returns:
            Dict: 包含 type、message、details 的字典
        """
        return {
            "type": self.code,
            "message": self.message,
            "details": self.details,
        }
