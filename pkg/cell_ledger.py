# cell_ledger.py
import argparse
import glob
import importlib
import inspect
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Type

from commands.base_command import NON_ECHO_FIELDS, BaseCommand, UsageError
from utils.errors import EngineError
from utils.log_utils import setup_logging
from utils.report_utils import dump_json, save_report
from utils.settings import DEFAULT_SETTINGS, EngineSettings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


def load_commands() -> Dict[str, Type[BaseCommand]]:
    """
    加载 commands/ 目录下的所有命令

    Returns:
        Dict: 子命令名 -> 命令类
    """
    commands: Dict[str, Type[BaseCommand]] = {}
    here = os.path.dirname(os.path.abspath(__file__))
    for file in sorted(glob.glob(os.path.join(here, "commands", "*.py"))):
        base = os.path.basename(file)
        if base in ("__init__.py", "base_command.py"):
            continue
        module_name = "commands." + base[:-3]
        try:
            module = importlib.import_module(module_name)
        except ImportError as e:
            logger.error(f"加载命令 {module_name} 失败: {e}")
            continue
        for _, obj in inspect.getmembers(module, inspect.isclass):
            if issubclass(obj, BaseCommand) and obj is not BaseCommand and obj.__module__ == module.__name__:
                commands[obj.name] = obj
    return commands


@dataclass
class CommandRequest:
    """一次命令行调用：子命令名与全部参数值"""

    command: str
    arguments: Dict[str, Any] = field(default_factory=dict)

    @property
    def output_format(self) -> str:
        return self.arguments.get("format") or "table"

    @property
    def with_timing(self) -> bool:
        return bool(self.arguments.get("with_timing"))

    def echo(self) -> Dict[str, Any]:
        """回显到报告里的参数，不含只影响运行方式的开关"""
        return {k: v for k, v in sorted(self.arguments.items()) if k not in NON_ECHO_FIELDS}


@dataclass
class Report:
    command: str
    status: str
    provenance: Dict[str, Any]
    payload: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    trace: Optional[List[Any]] = None
    timing_ms: Optional[float] = None

    def to_dict(self, settings: EngineSettings = DEFAULT_SETTINGS, with_timing: bool = False) -> Dict[str, Any]:
        data = {
            "schema": settings.schema,
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "error": self.error,
            "trace": [line.to_dict() for line in self.trace] if self.trace is not None else None,
            "provenance": self.provenance,
        }
        if with_timing and self.timing_ms is not None:
            data["timing_ms"] = round(self.timing_ms, 3)
        return data


def usage_epilog(command: BaseCommand, settings: EngineSettings = DEFAULT_SETTINGS) -> Optional[str]:
    """把命令的使用示例排成 --help 末尾的说明"""
    examples = command.get_usage_examples()
    if not examples:
        return None
    lines = ["示例:"]
    for example in examples:
        lines.append(f"  {settings.tool_name} {' '.join(example['argv'])}")
        lines.append(f"      {example['name']}: {example['description']}")
    return "\n".join(lines)


def build_parser(commands: Dict[str, Type[BaseCommand]],
                 settings: EngineSettings = DEFAULT_SETTINGS) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.tool_name,
        description="Kac-Moody 型 Weyl 群、旗流形胞腔与 K(E_n) 低阶同伦群的计算工具",
    )
    parser.add_argument("--version", action="version", version=f"{settings.tool_name} {settings.version}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in sorted(commands):
        command = commands[name](settings)
        info = command.get_command_info()
        sub = subparsers.add_parser(name, help=info["description"], description=info["description"],
                                    epilog=usage_epilog(command, settings),
                                    formatter_class=argparse.RawDescriptionHelpFormatter)
        command.add_arguments(sub)
    return parser


def parse_request(argv: Optional[List[str]], commands: Dict[str, Type[BaseCommand]],
                  settings: EngineSettings = DEFAULT_SETTINGS) -> CommandRequest:
    """解析命令行；argparse 自身的用法错误以退出码 2 结束进程"""
    namespace = build_parser(commands, settings).parse_args(argv)
    arguments = vars(namespace).copy()
    command = arguments.pop("command")
    return CommandRequest(command, arguments)


def run(request: CommandRequest, commands: Optional[Dict[str, Type[BaseCommand]]] = None,
        settings: EngineSettings = DEFAULT_SETTINGS) -> Tuple[Report, int]:
    """
    执行一次请求

    Returns:
        Tuple[Report, int]: 报告与退出码（0 成功、1 领域错误、2 用法错误）
    """
    commands = load_commands() if commands is None else commands
    provenance = {"tool": settings.tool_name, "version": settings.version, "input": request.echo()}
    if request.command not in commands:
        error = UsageError(f"未知的子命令: {request.command}", {"flag": "command", "choices": sorted(commands)})
        return Report(request.command, "error", provenance, error=error.to_dict()), EXIT_USAGE_ERROR

    command = commands[request.command](settings)
    is_valid, message = command.validate_input(request.arguments)
    if not is_valid:
        error = UsageError(message, {"flag": message.split(":", 1)[0]})
        return Report(request.command, "error", provenance, error=error.to_dict()), EXIT_USAGE_ERROR

    started = time.perf_counter()
    try:
        prepared = command.preprocess_input(request.arguments)
        result = command.execute(prepared)
    except UsageError as e:
        logger.warning(f"用法错误: {e.message}")
        return Report(request.command, "error", provenance, error=e.to_dict()), EXIT_USAGE_ERROR
    except EngineError as e:
        logger.warning(f"{request.command} 失败: {e.message}")
        return Report(request.command, "error", provenance, error=e.to_dict()), EXIT_DOMAIN_ERROR
    except Exception as e:
        logger.exception(f"{request.command} 出现未预期的错误")
        error = {"type": "InternalError", "message": str(e), "details": {"exception": type(e).__name__}}
        return Report(request.command, "error", provenance, error=error), EXIT_DOMAIN_ERROR

    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"{request.command} 完成，耗时 {elapsed:.1f} ms")
    report = Report(request.command, "ok", provenance, payload=result.payload, trace=result.trace,
                    timing_ms=elapsed)
    return report, EXIT_OK


def emit(report: Report, request: CommandRequest, commands: Dict[str, Type[BaseCommand]],
         settings: EngineSettings = DEFAULT_SETTINGS) -> str:
    """按 --format 生成标准输出的文本"""
    if request.output_format == "json":
        return dump_json(report.to_dict(settings, request.with_timing))
    command = commands[request.command](settings)
    text = command.format_output(report.payload, request.output_format)
    if request.output_format == "table":
        if report.trace:
            text += "\n" + "\n".join(line.render() for line in report.trace) + "\n"
        if request.with_timing and report.timing_ms is not None:
            text += f"\n耗时: {report.timing_ms:.1f} ms\n"
    return text


def main(argv: Optional[List[str]] = None) -> int:
    commands = load_commands()
    request = parse_request(argv, commands)
    setup_logging(request.arguments.get("verbose") or 0)

    report, code = run(request, commands)

    output_path = request.arguments.get("output")
    if output_path and not save_report(output_path, report.to_dict(DEFAULT_SETTINGS, request.with_timing)):
        print(f"错误: 无法写入 {output_path}", file=sys.stderr)
        if code == EXIT_OK:
            code = EXIT_DOMAIN_ERROR

    if report.status == "ok":
        sys.stdout.write(emit(report, request, commands))
    elif request.output_format == "json":
        sys.stdout.write(dump_json(report.to_dict(DEFAULT_SETTINGS, request.with_timing)))
    else:
        print(f"错误 [{report.error['type']}]: {report.error['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
