import random

import pytest

from core.engine import InfixEngine
from core.instrument import NULL_METER, Meter, NullMeter, make_meter
from tests.conftest import lang, random_word


def test_meter_counts_ops_and_cells():
    meter = Meter()
    meter.tick()
    meter.tick(3)
    assert meter.ops == 4
    assert meter.checkpoint("phase") == 4
    meter.alloc(10)
    meter.alloc(5)
    meter.release(10)
    assert meter.mem.live == 5
    assert meter.mem.high_water == 15
    assert meter.mem.allocations == 2
    meter.mem.reset_high_water()
    assert meter.mem.high_water == 5


def test_null_meter_records_nothing():
    meter = NullMeter()
    meter.tick(100)
    meter.alloc(7)
    assert meter.ops == 0
    assert meter.mem.high_water == 0
    assert not meter.enabled


def test_make_meter_follows_config(monkeypatch):
    monkeypatch.setenv("INFIX_METER", "1")
    assert isinstance(make_meter(), Meter) and make_meter().enabled
    monkeypatch.setenv("INFIX_METER", "0")
    assert make_meter() is NULL_METER
    assert make_meter(True).enabled


@pytest.mark.parametrize("name", ["l_ab", "l_aabb", "bstar_a", "contains_aa", "odd_a"])
def test_measured_and_plain_runs_agree(name):
    language = lang(name)
    rng = random.Random(f"meter-{name}")
    k = len(language.alphabet)
    for _ in range(10):
        n = rng.randint(1, 40)
        word = random_word(rng, language, n)
        updates = [(rng.randint(1, n), rng.randrange(k)) for _ in range(5)]
        plain = InfixEngine(language, word)
        measured = InfixEngine(language, word, meter=Meter())
        for i, a in updates:
            plain.substitute(i, a)
            measured.substitute(i, a)
            assert list(plain.enumerate()) == list(measured.enumerate())
        assert measured.meter.ops > 0
