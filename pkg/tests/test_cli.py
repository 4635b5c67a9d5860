import logging
import random

import pytest

from core.oracle import brute_enumerate
from infix_guard import main, parse_script
from tests.conftest import LANG_DIR, lang, random_word
from utils.error_handler import ScriptError

A_STAR = str(LANG_DIR / "a_star.lang")
L_AB = str(LANG_DIR / "l_ab.lang")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


def test_worked_example(capsys):
    script = "enum;count-results;sub 2 b;enum;count-results;sub 1 b;sub 3 b;enum;count-results"
    code, out, _ = run_cli(capsys, "run", A_STAR, "--word", "aaa", "--commands", script, "--sorted")
    assert code == 0
    assert out == [
        "1 1", "1 2", "1 3", "2 2", "2 3", "3 3", "6",
        "1 1", "3 3", "2",
        "0",
    ]


def test_member_command(capsys):
    code, out, _ = run_cli(
        capsys, "run", str(LANG_DIR / "l_ab.lang"), "--word", "aeb", "--commands", "member;sub 3 a;member"
    )
    assert code == 0
    assert out == ["yes", "no"]


def test_position_error_reports_line(capsys):
    code, out, err = run_cli(capsys, "run", A_STAR, "--word", "aaa", "--commands", "enum;sub 0 a")
    assert code == 1
    assert len(out) == 6
    assert "position" in err and "line 2" in err


def test_script_file(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text("# обновления\nsub 2 b\n\nenum\n")
    code, out, _ = run_cli(capsys, "run", A_STAR, "--word", "aaa", "--script", str(script), "--sorted")
    assert code == 0
    assert out == ["1 1", "3 3"]


def test_bad_script_line(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text("enum\n\nsub x a\n")
    code, out, err = run_cli(capsys, "run", A_STAR, "--word", "aaa", "--script", str(script))
    assert code == 1
    assert out == []
    assert "line 3" in err


def test_parse_script_rejects_unknown_command():
    with pytest.raises(ScriptError) as info:
        parse_script(["enum", "jump 3"])
    assert info.value.line == 2


def test_unknown_letter_is_input_error(capsys):
    code, _, err = run_cli(capsys, "run", A_STAR, "--word", "aaa", "--commands", "sub 1 z")
    assert code == 1
    assert err.startswith("error:")


def test_classify_semiext(capsys):
    code, out, _ = run_cli(capsys, "classify", str(LANG_DIR / "l_ab.lang"))
    assert code == 0
    assert "is_semi_extensible_zg: true" in out
    assert "is_extensible: false" in out
    assert "threshold: 3" in out
    assert out[-1] == "strategy: semiext"


def test_classify_adhoc(capsys):
    code, out, _ = run_cli(capsys, "classify", str(LANG_DIR / "bstar_a.lang"))
    assert code == 0
    assert "is_zg: false" in out
    assert out[-1] == "strategy: adhoc"


def test_missing_language_file(tmp_path, capsys):
    code, _, err = run_cli(capsys, "classify", str(tmp_path / "nope.lang"))
    assert code == 1
    assert "error:" in err


def test_bench_writes_csv(tmp_path, capsys):
    out_csv = tmp_path / "bench.csv"
    code, out, _ = run_cli(
        capsys, "bench", "--lang", str(LANG_DIR / "l_ab.lang"), "--sizes", "40,80", "--ops", "4", "--out", str(out_csv)
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "language,n,seed,preprocess_ops,max_update_ops,max_delay_ops,extra_enum_cells,total_cells"
    assert len(lines) == 3
    assert out[0].startswith("bench: 2 rows")


def test_bench_refuses_oracle_only(tmp_path, capsys):
    out_csv = tmp_path / "bench.csv"
    code, _, err = run_cli(capsys, "bench", "--lang", A_STAR, "--sizes", "20", "--out", str(out_csv))
    assert code == 2
    assert "allow-oracle" in err
    assert not out_csv.exists()
    code, _, _ = run_cli(
        capsys, "bench", "--lang", A_STAR, "--sizes", "20", "--out", str(out_csv), "--allow-oracle"
    )
    assert code == 0 and out_csv.exists()


def test_bench_bad_sizes(tmp_path, capsys):
    code, _, _ = run_cli(
        capsys, "bench", "--lang", A_STAR, "--sizes", "0", "--out", str(tmp_path / "b.csv"), "--allow-oracle"
    )
    assert code == 1


@pytest.mark.parametrize("name", ["l_ab", "l_abc5", "bstar_a", "contains_aa", "a_star"])
def test_sorted_run_matches_oracle(capsys, name):
    language = lang(name)
    decode = language.alphabet.decode
    rng = random.Random(f"cli-{name}")
    k = len(language.alphabet)
    for _ in range(15):
        n = rng.randint(1, 25)
        start = random_word(rng, language, n)
        word = list(start)
        commands = []
        for _ in range(rng.randint(0, 4)):
            i, a = rng.randint(1, n), rng.randrange(k)
            word[i - 1] = a
            commands.append(f"sub {i} {decode([a])}")
        commands.append("enum")
        code, out, _ = run_cli(
            capsys,
            "run",
            str(LANG_DIR / f"{name}.lang"),
            "--word",
            decode(start),
            "--commands",
            ";".join(commands),
            "--sorted",
        )
        assert code == 0
        assert out == [f"{l} {r}" for l, r in sorted(brute_enumerate(language.dfa, word))]


def test_meter_from_config(monkeypatch, caplog, capsys):
    monkeypatch.setenv("INFIX_METER", "1")
    with caplog.at_level(logging.INFO, logger="infix.cli"):
        code, out, _ = run_cli(capsys, "run", L_AB, "--word", "aeb", "--commands", "enum")
    assert code == 0 and out == ["1 3"]
    metered = [r.getMessage() for r in caplog.records if "[RUN][METER]" in r.getMessage()]
    assert len(metered) == 1 and "ops=0 " not in metered[0]

    caplog.clear()
    monkeypatch.setenv("INFIX_METER", "0")
    with caplog.at_level(logging.INFO, logger="infix.cli"):
        run_cli(capsys, "run", L_AB, "--word", "aeb", "--commands", "enum")
    assert not [r for r in caplog.records if "[RUN][METER]" in r.getMessage()]
