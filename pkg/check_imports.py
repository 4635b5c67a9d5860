import importlib
import sys

# сторонние пакеты и собственные модули, без которых движок не стартует
MODS = ["dotenv", "numpy", "pandas", "matplotlib", "core.engine", "core.bench_log", "infix_guard"]


def main(mods=MODS) -> int:
    fail = False
    for m in mods:
        try:
            importlib.import_module(m)
            print(f"[OK] import {m}")
        except Exception as e:
            print(f"[FAIL] import {m}: {e.__class__.__name__}: {e}")
            fail = True
    return 1 if fail else 0


if __name__ == "__main__":
    sys.exit(main())
