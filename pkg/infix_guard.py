import argparse
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Tuple

from core.bench_log import (
    LAYOUTS,
    BenchReport,
    Workload,
    emit_csv,
    plot_report,
    profile_enumeration,
)
from core.engine import InfixEngine, select_strategy
from core.env_loader import load_and_check_env, parse_sizes
from core.instrument import make_meter
from core.language import load_language
from utils.error_handler import InfixError, ScriptError, exit_code_for

logger = logging.getLogger("infix.cli")

COMMANDS = ("sub", "enum", "member", "count-results")


# --- Скрипт команд ---
def parse_script(lines: Iterable[str]) -> List[Tuple[int, List[str]]]:
    """Строки скрипта -> [(номер строки, токены)]; пустые и `#` пропускаются."""
    out = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        cmd = tokens[0]
        if cmd not in COMMANDS:
            raise ScriptError(f"unknown command {cmd!r}", line=lineno)
        if cmd == "sub":
            if len(tokens) != 3:
                raise ScriptError("usage: sub <pos> <letter>", line=lineno)
            try:
                int(tokens[1])
            except ValueError:
                raise ScriptError(f"position must be an integer, got {tokens[1]!r}", line=lineno)
        elif len(tokens) != 1:
            raise ScriptError(f"{cmd} takes no arguments", line=lineno)
        out.append((lineno, tokens))
    return out


def run_script(
    engine: InfixEngine,
    script: List[Tuple[int, List[str]]],
    out: TextIO,
    sorted_output: bool = False,
) -> None:
    for lineno, tokens in script:
        cmd = tokens[0]
        try:
            if cmd == "sub":
                engine.substitute(int(tokens[1]), tokens[2])
            elif cmd == "enum":
                session = engine.enumerate()
                # --sorted буферизует весь результат
                results = sorted(session) if sorted_output else session
                for l, r in results:
                    out.write(f"{l} {r}\n")
            elif cmd == "member":
                out.write("yes\n" if engine.member() else "no\n")
            elif cmd == "count-results":
                out.write(f"{engine.count_results()}\n")
        except ScriptError:
            raise
        except InfixError as exc:
            err = ScriptError(exc.message, line=lineno, payload={"cause": exc.code})
            # код выхода по исходной ошибке
            err.exit_code = exit_code_for(exc)
            raise err from exc


# --- Подкоманды ---
def cmd_classify(args, cfg) -> int:
    language = load_language(args.lang, monoid_limit=cfg["MONOID_LIMIT"])
    for line in language.report.lines(language.alphabet):
        print(line)
    print(f"strategy: {select_strategy(language).name}")
    return 0


def cmd_run(args, cfg) -> int:
    language = load_language(args.lang, monoid_limit=cfg["MONOID_LIMIT"])
    if args.script:
        try:
            lines = Path(args.script).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ScriptError(f"cannot read script {args.script}: {exc}") from exc
    else:
        lines = args.commands.split(";")
    script = parse_script(lines)
    meter = make_meter(cfg["METER"])
    engine = InfixEngine(language, args.word, meter=meter)
    run_script(engine, script, sys.stdout, sorted_output=args.sorted)
    if meter.enabled:
        logger.info(
            "[RUN][METER] ops=%d cells=%d high_water=%d",
            meter.ops,
            engine.cells(),
            meter.mem.high_water,
        )
    return 0


def cmd_bench(args, cfg) -> int:
    language = load_language(args.lang, monoid_limit=cfg["MONOID_LIMIT"])
    sizes = parse_sizes(args.sizes)
    if not sizes or any(n < 1 for n in sizes):
        raise ScriptError(f"bad --sizes {args.sizes!r}")
    workload = Workload.from_config(args.ops, layout=args.layout, cfg=cfg)
    report = BenchReport()
    for n in sizes:
        report.add(profile_enumeration(language, n, args.seed, workload, allow_oracle=args.allow_oracle))
    emit_csv(report, args.out)
    print(f"bench: {len(report)} rows -> {args.out}")
    if args.plot:
        plot_report(report, args.plot)
        print(f"plot: {args.plot}")
    return 0


def build_parser(cfg) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infix_guard", description="Dynamic L-infix enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Классы языка и выбранная стратегия")
    p.add_argument("lang", help="Файл языка (.lang)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("run", help="Выполнить скрипт обновлений и запросов")
    p.add_argument("lang")
    p.add_argument("--word", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--script", help="Файл со строками sub/enum/member/count-results")
    src.add_argument("--commands", help='Команды через ";", например "enum;sub 2 b;enum"')
    p.add_argument("--sorted", action="store_true", help="Выдавать enum в лексикографическом порядке")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="Замер задержки и памяти по размерам слова")
    p.add_argument("--lang", required=True)
    p.add_argument("--sizes", default="1000,100000")
    p.add_argument("--seed", type=int, default=cfg["SEED"])
    p.add_argument("--ops", type=int, default=20, help="Число замен в нагрузке")
    p.add_argument("--out", default=cfg["BENCH_OUT"])
    p.add_argument("--layout", choices=LAYOUTS, default="tail")
    p.add_argument("--allow-oracle", action="store_true", help="Разрешить квадратичный запасной путь")
    p.add_argument("--plot", help="PNG с графиком задержки и памяти")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    cfg = load_and_check_env()
    logging.basicConfig(
        level=getattr(logging, cfg["LOG_LEVEL"], logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    args = build_parser(cfg).parse_args(argv)
    try:
        return args.func(args, cfg)
    except InfixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", None) or exit_code_for(exc)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
