import check_imports
from tools.syntax_check import compile_all, main, python_files, style_drift


def test_python_files_skip_examples(tmp_path):
    (tmp_path / "examples").mkdir()
    (tmp_path / "examples" / "x.py").write_text("x = 1\n")
    (tmp_path / "a.py").write_text("a = 1\n")
    assert [p.name for p in python_files(tmp_path)] == ["a.py"]


def test_compile_failure_reported(tmp_path):
    bad = tmp_path / "bad.py"
    bad.write_text("def f(:\n")
    assert len(compile_all([bad])) == 1
    assert main([str(tmp_path)]) == 1


def test_style_drift(tmp_path):
    ok = tmp_path / "ok.py"
    ok.write_text("x = 1\n")
    messy = tmp_path / "messy.py"
    messy.write_text("def f():\n   return 1   \n")
    assert style_drift([ok, messy]) == [messy]
    assert main([str(tmp_path)]) == 0
    assert main([str(tmp_path), "--style"]) == 1


def test_check_imports():
    assert check_imports.main(["core.engine", "numpy"]) == 0
    assert check_imports.main(["no_such_module_here"]) == 1
