import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from origamis.errors import DegreeMismatch, ParseError, ValidationError
from origamis.perm import (
    Perm,
    SPerm,
    centralizer,
    compose,
    format_cycles,
    is_transitive,
    parse_perm,
    parse_sperm,
    signed_domain,
    simultaneous_conjugacy,
    simultaneous_conjugacy_plain,
)


def random_perm(rng, d):
    img = list(range(1, d + 1))
    rng.shuffle(img)
    return Perm(img)


def random_sperm(rng, d):
    vals = signed_domain(d)
    img = vals[:]
    rng.shuffle(img)
    return SPerm(dict(zip(vals, img)), d)


def random_odd_sperm(rng, d):
    plain = random_perm(rng, d)
    signs = [rng.choice([1, -1]) for _ in range(d)]
    return SPerm.from_square_map(plain, signs)


# --- compose -----------------------------------------------------------------


def test_compose_examples():
    p = Perm.from_cycles([[1, 2]], 3)
    q = Perm.from_cycles([[2, 3]], 3)
    assert compose(p, q) == Perm.from_cycles([[1, 2, 3]], 3)
    assert compose(Perm.identity(5), random_perm(random.Random(0), 5)) == random_perm(
        random.Random(0), 5
    )
    f = SPerm.from_cycles([[1, -1]], 1)
    assert compose(f, f) == SPerm.identity(1)


def test_compose_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(Perm.identity(2), Perm.identity(3))


@given(st.integers(1, 6), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_compose_associative_and_inverse(d, rx):
    rng = random.Random(rx.randint(0, 10**9))
    p, q, r = (random_sperm(rng, d) for _ in range(3))
    assert (p * q) * r == p * (q * r)
    assert p * p.inverse() == SPerm.identity(d)
    a, b, c = (random_perm(rng, d) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == Perm.identity(d)


# --- cycles ------------------------------------------------------------------


def test_cycles_examples():
    assert Perm.from_cycles([[1, 2, 3]], 4).cycles() == [[1, 2, 3], [4]]
    assert Perm.identity(3).cycles() == [[1], [2], [3]]
    n = SPerm.sign_inversion(2)
    assert n.cycles() == [[1, -1], [2, -2]]


@given(st.integers(1, 6), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_cycles_cover_and_rebuild(d, rx):
    rng = random.Random(rx.randint(0, 10**9))
    p = random_sperm(rng, d)
    cycles = p.cycles()
    assert sum(len(c) for c in cycles) == 2 * d
    assert SPerm.from_cycles(cycles, d) == p
    q = random_perm(rng, d)
    assert Perm.from_cycles(q.cycles(), d) == q


def test_cycle_text_roundtrip():
    rng = random.Random(7)
    for d in range(1, 6):
        p = random_sperm(rng, d)
        assert parse_sperm(str(p), d) == p
        q = random_perm(rng, d)
        assert parse_perm(str(q), d) == q
    assert str(SPerm.identity(1)) == "(+1)(-1)"
    assert format_cycles([], signed=False) == "()"


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as e:
        parse_perm("(1 2")
    assert e.value.position == 4
    with pytest.raises(ParseError):
        parse_perm("(1 -2)")
    with pytest.raises(ValidationError):
        parse_perm("(1 1)")
    with pytest.raises(ParseError) as e:
        parse_sperm("(+1 -1) junk")
    assert "position" in str(e.value)


# --- transitivity ------------------------------------------------------------


def test_is_transitive_examples():
    gens = [Perm.from_cycles([[1, 2]], 3), Perm.from_cycles([[2, 3]], 3)]
    assert is_transitive(gens)
    assert not is_transitive([Perm.identity(2)])
    mu = SPerm.from_cycles([[1, -1], [2, -2]], 2)
    n = SPerm.sign_inversion(2)
    assert not is_transitive([mu, n])


def test_odd_iff_commutes_with_sign_inversion():
    rng = random.Random(3)
    for d in range(1, 6):
        n = SPerm.sign_inversion(d)
        for _ in range(20):
            f = random_sperm(rng, d)
            assert f.odd() == (f * n == n * f)
        g = random_odd_sperm(rng, d)
        assert g.odd()


# --- centralizer -------------------------------------------------------------


def _closure(gens, d):
    group = {SPerm.identity(d)}
    frontier = list(group)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return group


def test_centralizer_empty_gens_full_symmetric():
    gens = centralizer([], d=1, ambient="sym")
    assert gens == [SPerm.from_cycles([[1, -1]], 1)]
    assert len(_closure(gens, 1)) == 2


def test_centralizer_of_sign_inversion_is_odd_group():
    d = 2
    gens = centralizer([SPerm.sign_inversion(d)], d=d, ambient="sym")
    group = _closure(gens, d)
    assert len(group) == 8  # |odd subgroup| = 2^d d!
    assert all(g.odd() for g in group)


def test_centralizer_commutes():
    rng = random.Random(11)
    for d in (2, 3, 4):
        a = random_odd_sperm(rng, d)
        b = random_odd_sperm(rng, d)
        for ambient in ("sym", "odd"):
            for g in centralizer([a, b], ambient=ambient):
                assert g * a == a * g
                assert g * b == b * g
                if ambient == "odd":
                    assert g.odd()


# --- simultaneous conjugacy --------------------------------------------------


def test_simultaneous_conjugacy_basic():
    a = SPerm.from_cycles([[1, -1]], 1)
    w = simultaneous_conjugacy([a], [a])
    assert w is not None and w.is_identity()
    a = SPerm.from_cycles([[1, -2], [-1, 2]], 2)
    b = SPerm.from_cycles([[2, -1], [-2, 1]], 2)
    w = simultaneous_conjugacy([a], [b])
    assert w is not None
    assert w * a * w.inverse() == b


def test_simultaneous_conjugacy_random_conjugates():
    rng = random.Random(5)
    for d in (2, 3, 4, 5):
        for _ in range(10):
            tup = [random_sperm(rng, d) for _ in range(2)]
            g = random_odd_sperm(rng, d)
            conj = [g * t * g.inverse() for t in tup]
            w = simultaneous_conjugacy(tup, conj, constraint="odd")
            assert w is not None and w.odd()
            for t, c in zip(tup, conj):
                assert w * t * w.inverse() == c


def test_simultaneous_conjugacy_plain_random():
    rng = random.Random(6)
    for d in (2, 3, 4):
        for _ in range(10):
            tup = [random_perm(rng, d) for _ in range(2)]
            g = random_perm(rng, d)
            conj = [g * t * g.inverse() for t in tup]
            w = simultaneous_conjugacy_plain(tup, conj)
            assert w is not None
            for t, c in zip(tup, conj):
                assert w * t * w.inverse() == c


def test_simultaneous_conjugacy_absent():
    a = Perm.from_cycles([[1, 2]], 3)
    b = Perm.from_cycles([[1, 2, 3]], 3)
    assert simultaneous_conjugacy_plain([a], [b]) is None
