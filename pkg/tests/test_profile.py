import itertools

import pytest
from hypothesis import given, strategies as st

from rankembed.profile import (
    PreferenceProfile,
    ProfileError,
    parse_profile,
    profile_to_json,
    random_profile,
    rank_matrix,
    rank_statistics,
    reduce_irreducible,
    serialize_profile,
)

WORKED = "5 2\n1 2 3 4 5\n2 4 5 1 3"


@st.composite
def profiles(draw, max_m=6, max_n=6):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    rows = [draw(st.permutations(range(m))) for _ in range(n)]
    return PreferenceProfile.from_rankings(rows)


def test_parse_example_1():
    p = parse_profile(WORKED)
    assert (p.m, p.n) == (5, 2)
    assert p.rankings == ((0, 1, 2, 3, 4), (1, 3, 4, 0, 2))


def test_parse_trivial():
    p = parse_profile("1 1\n1")
    assert p.rankings == ((0,),)


def test_parse_roundtrip_bit_exact():
    text = "3 2\n1 2 3\n1 3 2\n"
    assert serialize_profile(parse_profile(text)) == text


def test_parse_ignores_comments_and_blank_lines():
    p = parse_profile("# header\n3 1\n\n# voter one\n3 1 2\n")
    assert p.rankings == ((2, 0, 1),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("3\n1 2 3", 1),
        ("3 1\n1 2 2", 2),
        ("3 1\n1 2 4", 2),
        ("3 2\n1 2 3\n1 2", 3),
        ("3 1\n1 x 3", 2),
        ("2 1\n1 2\n2 1", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ProfileError) as info:
        parse_profile(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_too_few_rows():
    with pytest.raises(ProfileError, match="expected 2 rankings"):
        parse_profile("2 2\n1 2\n")


def test_json_roundtrip():
    p = parse_profile(WORKED)
    import json

    assert parse_profile(json.dumps(profile_to_json(p))) == p


def test_json_bad_row():
    with pytest.raises(ProfileError):
        parse_profile('{"m": 2, "n": 1, "rankings": [[1, 1]]}')


@given(profiles())
def test_serialize_parse_identity(p):
    assert parse_profile(serialize_profile(p)) == p
    assert serialize_profile(parse_profile(serialize_profile(p))) == serialize_profile(p)


def test_rank_matrix_example_1():
    rk = rank_matrix(parse_profile(WORKED))
    assert rk == [[1, 2, 3, 4, 5], [4, 1, 5, 2, 3]]


@pytest.mark.parametrize("m", [1, 2, 5])
def test_rank_matrix_identity_and_reversal(m):
    p = PreferenceProfile.from_rankings([list(range(m)), list(range(m))[::-1]])
    rk = rank_matrix(p)
    assert rk[0] == list(range(1, m + 1))
    assert rk[1] == list(range(m, 0, -1))


@given(profiles())
def test_rank_matrix_inverts_rankings(p):
    rk = rank_matrix(p)
    for i, ranking in enumerate(p.rankings):
        assert sorted(rk[i]) == list(range(1, p.m + 1))
        for k, alt in enumerate(ranking):
            assert rk[i][alt] == k + 1


def test_rank_statistics_tie_breaks():
    p = PreferenceProfile.from_rankings([[0, 1, 2], [2, 1, 0]])
    lo = rank_statistics(p, "smallest")
    hi = rank_statistics(p, "largest")
    assert lo.mk == hi.mk == (3, 2, 3)
    assert lo.g == (1, 0, 0)
    assert hi.g == (1, 1, 0)
    with pytest.raises(ValueError):
        rank_statistics(p, "middle")


@given(profiles())
def test_rank_statistics_invariants(p):
    rk = rank_matrix(p)
    for tb in ("smallest", "largest"):
        s = rank_statistics(p, tb)
        for j in range(p.m):
            assert rk[s.g[j]][j] == s.mk[j] == max(row[j] for row in rk)


def test_reduce_identical_pair():
    p = PreferenceProfile.from_rankings([[0, 1, 2], [0, 1, 2]])
    r, cmap = reduce_irreducible(p)
    assert r.n == 1 and cmap == [0, 0]


def test_reduce_example_1_unchanged():
    p = parse_profile(WORKED)
    r, cmap = reduce_irreducible(p)
    assert r is p and cmap == [0, 1]


def test_reduce_four_voters_two_classes():
    p = PreferenceProfile.from_rankings([[0, 1, 2], [2, 1, 0], [0, 1, 2], [2, 1, 0]])
    r, cmap = reduce_irreducible(p)
    assert r.n == 2 and cmap == [0, 1, 0, 1]
    again, cmap2 = reduce_irreducible(r)
    assert again == r and cmap2 == [0, 1]


@given(profiles())
def test_reduce_idempotent_and_never_grows(p):
    r, cmap = reduce_irreducible(p)
    assert r.n <= p.n and r.is_irreducible()
    assert reduce_irreducible(r)[0] == r
    assert [r.rankings[k] for k in cmap] == list(p.rankings)


def test_random_profile_full_set():
    p = random_profile(3, 6, seed=11)
    assert set(p.rankings) == set(itertools.permutations(range(3)))


def test_random_profile_deterministic():
    assert random_profile(5, 2, seed=7) == random_profile(5, 2, seed=7)
    assert random_profile(5, 2, seed=7) != random_profile(5, 2, seed=8)


def test_random_profile_rejects_too_many():
    with pytest.raises(ProfileError):
        random_profile(2, 3, seed=0)


@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_random_profile_distinct(m, n, seed):
    import math

    n = min(n, math.factorial(m))
    p = random_profile(m, n, seed)
    assert p.is_irreducible() and (p.m, p.n) == (m, n)
