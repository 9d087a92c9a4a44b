# log_utils.py
import logging
import sys

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def setup_logging(verbose: int = 0) -> None:
    """
    配置日志输出
    日志统一写到标准错误，标准输出只留给报告本身

    Args:
        verbose (int): 0 为 WARNING，1 为 INFO，2 及以上为 DEBUG
    """
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    root = logging.getLogger()
    # 重复调用时不要叠加 handler
    for handler in list(root.handlers):
        if getattr(handler, "_cell_ledger", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._cell_ledger = True
    root.addHandler(handler)
    root.setLevel(level)
