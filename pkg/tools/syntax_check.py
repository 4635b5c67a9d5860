import argparse
import py_compile
import sys
from pathlib import Path
from typing import List, Optional

import autopep8

SKIP_DIRS = {"examples", ".git", "__pycache__", ".pytest_cache"}
MAX_LINE = 120


def python_files(root: Path) -> List[Path]:
    out = []
    for path in sorted(root.rglob("*.py")):
        if SKIP_DIRS.intersection(path.relative_to(root).parts):
            continue
        out.append(path)
    return out


def compile_all(files: List[Path]) -> List[str]:
    failures = []
    for f in files:
        try:
            py_compile.compile(str(f), doraise=True)
        except py_compile.PyCompileError as e:
            failures.append(f"{f}: {e.msg}")
    return failures


def style_drift(files: List[Path]) -> List[Path]:
    """Файлы, которые autopep8 переписал бы (только пробелы и отступы)."""
    drift = []
    for f in files:
        source = f.read_text(encoding="utf-8")
        fixed = autopep8.fix_code(source, options={"max_line_length": MAX_LINE, "select": ["E1", "W2", "W3"]})
        if fixed != source:
            drift.append(f)
    return drift


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Syntax + whitespace check")
    parser.add_argument("root", nargs="?", default=".")
    parser.add_argument("--style", action="store_true", help="Также сообщать о расхождениях с autopep8")
    args = parser.parse_args(argv)

    files = python_files(Path(args.root))
    if not files:
        print("No Python files found.")
        return 0
    failures = compile_all(files)
    for line in failures:
        print(f"[FAIL] {line}")
    if failures:
        return 1
    print(f"Syntax OK ({len(files)} files)")
    if args.style:
        drift = style_drift(files)
        for f in drift:
            print(f"[STYLE] {f}")
        if drift:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
