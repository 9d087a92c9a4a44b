# settings.py
from dataclasses import dataclass


@dataclass(frozen=True)
class EngineSettings:
    """
    引擎默认参数
    不读取环境变量和配置文件，所有覆盖都通过命令行参数完成
    """

    tool_name: str = "cell-ledger"
    version: str = "1.0.0"
    # JSON 报告的 schema 版本
    schema: int = 1
    # 枚举时允许保存的元素总数上限
    element_budget: int = 10 ** 7
    # E_n 同伦推导的最高阶数
    en_degree_cap: int = 6


DEFAULT_SETTINGS = EngineSettings()
