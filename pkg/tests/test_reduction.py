import pytest

from murmur.arith import is_prime
from murmur.curves import CurveSeed
from murmur.reduction import (
    conductor,
    global_invariants,
    is_prime_conductor,
    local_data,
    root_number,
    tate_local,
)


def _parse_locals(text):
    out = {}
    for item in filter(None, text.split(";")):
        p, kind, exp, kod, w = item.split(":")
        out[int(p)] = (kind, int(exp), kod, int(w))
    return out


def test_local_examples():
    loc = tate_local(CurveSeed(-1, 0), 2)
    assert (loc.kind, loc.conductor_exponent) == ("additive", 5)
    loc = tate_local(CurveSeed(0, 1), 5)
    assert (loc.kind, loc.conductor_exponent) == ("good", 0)
    assert tate_local(CurveSeed(0, 2), 3).kind == "additive"


def test_conductor_examples():
    assert conductor(CurveSeed(0, 1)) == 36
    assert conductor(CurveSeed(-1, 0)) == 32
    assert conductor(CurveSeed(1, 1)) == 496
    assert root_number(CurveSeed(0, 1)) == 1
    assert root_number(CurveSeed(-1, 0)) == 1
    assert root_number(CurveSeed(1, 1)) == -1
    assert not is_prime_conductor(CurveSeed(0, 1))


def test_prime_conductor_seed(fixture_rows):
    rows = [r for r in fixture_rows if is_prime(int(r["N"]))]
    assert rows
    for r in rows[:10]:
        assert is_prime_conductor(CurveSeed(int(r["A"]), int(r["B"])))


def test_single_split_prime_gives_plus_one(fixture_rows):
    found = 0
    for r in fixture_rows:
        locs = _parse_locals(r["locals"])
        if len(locs) == 1 and next(iter(locs.values()))[0] == "split-mult":
            inv = global_invariants(CurveSeed(int(r["A"]), int(r["B"])))
            assert inv.eps == 1
            found += 1
    assert found


def test_fixture_full_agreement(fixture_rows):
    """Conductor, sign, kinds, exponents and Kodaira symbols for every H <= 10^4."""
    assert len(fixture_rows) == 1048
    for r in fixture_rows:
        seed = CurveSeed(int(r["A"]), int(r["B"]))
        inv = global_invariants(seed)
        assert inv.N == int(r["N"]), seed
        assert inv.eps == int(r["eps"]), seed
        ref = _parse_locals(r["locals"])
        ours = {loc.p: loc for loc in local_data(seed) if loc.kind != "good"}
        assert set(ours) == set(ref), seed
        for p, (kind, exp, kod, w) in ref.items():
            loc = ours[p]
            assert (loc.kind, loc.conductor_exponent, loc.kodaira) == (kind, exp, kod), (seed, p)
            if loc.local_root_number is not None:
                assert loc.local_root_number == w, (seed, p)


def test_conductor_exceeds_one(fixture_rows):
    assert all(int(r["N"]) > 1 for r in fixture_rows)


def test_good_primes_have_no_exponent():
    for loc in local_data(CurveSeed(2, 3)):
        if loc.kind == "good":
            assert loc.conductor_exponent == 0 and loc.ap is None
        elif loc.kind == "additive":
            assert loc.conductor_exponent >= 2 and loc.ap == 0
        else:
            assert loc.conductor_exponent == 1 and loc.ap in (1, -1)


def test_bad_input():
    with pytest.raises(ValueError):
        CurveSeed(-3, 2)
