from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from core.classify import (
    ClassificationReport,
    CondFamily,
    classify,
    sample_words,
    validate_threshold,
    with_threshold,
)
from core.dfa import Dfa, compile_min_dfa
from core.env_loader import load_and_check_env
from core.monoid import Monoid, syntactic_monoid
from core.regex import Alphabet, RegexAst, parse_regex
from utils.error_handler import (
    InfixError,
    LanguageFileError,
    NeutralHintRejected,
    NotSemiExtensible,
    ThresholdRejected,
)

logger = logging.getLogger("infix.language")

KEYS = ("name", "letters", "regex", "neutral-hint", "threshold")


@dataclass
class Language:
    name: str
    alphabet: Alphabet
    regex: str
    ast: RegexAst
    dfa: Dfa
    monoid: Monoid
    report: ClassificationReport
    family: CondFamily = field(repr=False)

    @property
    def neutral(self):
        return self.report.neutral

    def encode(self, text: str):
        return self.alphabet.encode(text)


def parse_language_text(text: str) -> Dict[str, Tuple[str, int]]:
    """Строки `key: value`; `#` начинает комментарий. Возвращает key -> (value, line)."""
    fields: Dict[str, Tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise LanguageFileError(f"expected 'key: value', got {line!r}", line=lineno)
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key not in KEYS:
            raise LanguageFileError(f"unknown key {key!r}", line=lineno)
        if key in fields:
            raise LanguageFileError(f"duplicate key {key!r}", line=lineno)
        fields[key] = (value.strip(), lineno)
    for key in ("letters", "regex"):
        if key not in fields:
            raise LanguageFileError(f"missing '{key}:' line")
    return fields


def _split_letters(value: str, lineno: int):
    letters = [s.strip() for s in value.split(",") if s.strip()]
    try:
        return Alphabet.of(letters)
    except InfixError as exc:
        raise LanguageFileError(str(exc), line=lineno) from exc


def compile_language(
    letters,
    regex: str,
    *,
    name: str = "",
    neutral_hint=None,
    threshold: Optional[int] = None,
    monoid_limit: Optional[int] = None,
) -> Language:
    alphabet = letters if isinstance(letters, Alphabet) else Alphabet.of(letters)
    ast = parse_regex(regex, alphabet)
    dfa = compile_min_dfa(ast, alphabet)
    monoid = syntactic_monoid(dfa, limit=monoid_limit)
    report = classify(dfa, monoid)
    family = CondFamily(dfa, report.neutral)

    if neutral_hint:
        hinted = {alphabet.index[s] for s in neutral_hint if s in alphabet.index}
        unknown = [s for s in neutral_hint if s not in alphabet.index]
        if unknown or not hinted <= report.neutral:
            raise NeutralHintRejected(
                f"neutral-hint {','.join(neutral_hint)} is not neutral for this language",
                payload={"neutral": sorted(report.neutral)},
            )

    if threshold is not None:
        try:
            report = with_threshold(report, threshold)
        except NotSemiExtensible as exc:
            raise ThresholdRejected(str(exc)) from exc
        cfg = load_and_check_env()
        samples = sample_words(
            len(alphabet), cfg["VALIDATE_SAMPLES"], 14, cfg["SEED"], exhaustive_len=4
        )
        check = validate_threshold(monoid, family, threshold, samples)
        if not check:
            word, t = check.counterexample
            raise ThresholdRejected(
                f"threshold {threshold} fails on {alphabet.decode(word)!r}",
                payload={"T": sorted(t)},
            )

    logger.info("[LANG] name=%s states=%d monoid=%d", name, dfa.num_states, monoid.size)
    return Language(
        name=name,
        alphabet=alphabet,
        regex=regex,
        ast=ast,
        dfa=dfa,
        monoid=monoid,
        report=report,
        family=family,
    )


def load_language(path, monoid_limit: Optional[int] = None) -> Language:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LanguageFileError(f"cannot read {path}: {exc}") from exc
    fields = parse_language_text(text)
    alphabet = _split_letters(*fields["letters"])
    regex, regex_line = fields["regex"]
    hint = None
    if "neutral-hint" in fields:
        hint = [s.strip() for s in fields["neutral-hint"][0].split(",") if s.strip()]
    threshold = None
    if "threshold" in fields:
        value, lineno = fields["threshold"]
        try:
            threshold = int(value)
        except ValueError as exc:
            raise LanguageFileError(f"threshold must be an integer, got {value!r}", line=lineno) from exc
    name = fields["name"][0] if "name" in fields else path.stem
    try:
        return compile_language(
            alphabet,
            regex,
            name=name,
            neutral_hint=hint,
            threshold=threshold,
            monoid_limit=monoid_limit,
        )
    except InfixError as exc:
        # номер строки regex для синтаксических ошибок
        if exc.line is None and exc.offset is not None:
            exc.line = regex_line
        raise
