from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dequetsip import loops
from dequetsip.errors import OracleScaleError
from dequetsip.series import TruncatedSeries

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)


@pytest.fixture(scope="module")
def table12():
    return loops.build_loop_table(12)


@pytest.fixture(scope="module")
def brute12():
    return loops.brute_force_loops(12)


def test_table_examples(table12):
    assert table12[0, 0, 0, 0] == 1
    assert table12.loops(2)(1) == 2
    assert table12.loops(4)(1) == 10


def test_brute_force_examples(brute12):
    assert brute12[2, 0, 0, 0] == 2
    assert sum(brute12[2, k, 0, 0] for k in range(3)) == 2
    # NE and EN both reach (1, 1) without a corner
    assert brute12[2, 0, 1, 1] == 2 and brute12[2, 1, 1, 1] == 0
    # E S N would pass through (1, -1); E N W is the only cornered walk to (0, 1),
    # and NNS, NSN, NEW, EWN have no corner
    assert brute12[3, 1, 0, 1] == 1
    assert brute12[3, 0, 0, 1] == 4
    # E S from (0, 1): N E S is a confined walk with one ES corner
    assert brute12[3, 1, 1, 0] == 1


def test_brute_force_limit():
    with pytest.raises(OracleScaleError):
        loops.brute_force_loops(loops.table.BRUTE_FORCE_LIMIT + 1)


def test_recurrence_matches_enumeration(table12, brute12):
    assert dict(table12.entries()) == dict(brute12.entries())


def test_table_shape(table12):
    for (n, k, x, y), v in table12.entries():
        assert v > 0
        assert x + y <= n and 0 <= k < max(n, 1)
        assert table12[n, k, y, x] == v


def test_keep_last_layer_only():
    t = loops.build_loop_table(10, keep="last")
    assert set(t.layers) == {10}
    assert t[10, 2, 0, 0] == loops.build_loop_table(10)[10, 2, 0, 0]
    with pytest.raises(KeyError):
        t[9, 0, 1, 0]


def test_q_series_examples():
    q = loops.q_series(30)
    assert q.polys[0].coeffs == (1,) and q.polys[1].coeffs == (2,)
    for n, p in enumerate(q.polys):
        assert p(1) == loops.catalan(n) * loops.catalan(n + 1)


def test_q_series_matches_table(table12):
    q = loops.q_series(6)
    for n in range(7):
        assert q.polys[n] == table12.loops(2 * n)


def test_q_json_roundtrip():
    q = loops.q_series(8)
    assert loops.QSeries.from_json(q.to_json()) == q
    g = loops.q_series(8, graded=True)
    assert loops.QSeries.from_json(g.to_json()) == g
    assert g.polys[3].coeffs == q.polys[3].coeffs[:6]


@given(rationals)
def test_q_at_matches_polynomials(a):
    q = loops.q_series(10)
    assert loops.q_at(a, 10) == q.at(a)


def test_graded_cannot_specialize():
    with pytest.raises(ValueError):
        loops.q_series(4, graded=True).at(1)


@given(rationals)
def test_q1_at_two_is_q(a):
    assert loops.q1_series(a, 2, 12) == loops.q_at(a, 12)


@given(rationals)
def test_q1_at_zero_is_one(a):
    assert loops.q1_series(a, 0, 8) == TruncatedSeries.constant(1, 8)


def test_u_series():
    U = loops.u_series(1, 10)
    Q = loops.q_at(1, 10)
    assert U[0] == 0 and U[1] == Q[1] == 2
    assert (1 - U) * Q == TruncatedSeries.constant(1, 10)


def test_positivity_small():
    rep = loops.check_a_plus_one_positivity(loops.q_series(20))
    assert rep.positive and rep.first_violation is None and rep.checked_through == 20
    assert loops.q_series(1).polys[0].shifted_basis(1) == (1,)


def test_positivity_reports_violation():
    from dequetsip.series import CornerPolynomial
    bad = loops.QSeries((CornerPolynomial([1]), CornerPolynomial([0, 1])))
    rep = loops.check_a_plus_one_positivity(bad)
    assert not rep.positive and rep.first_violation == (1, 0, -1)


def test_threads_do_not_change_results():
    a = loops.build_loop_table(16, threads=1)
    b = loops.build_loop_table(16, threads=3)
    assert list(a.entries()) == list(b.entries())
    assert loops.q_series(12, threads=3) == loops.q_series(12)


def test_progress_callback():
    seen = []
    loops.build_loop_table(4, progress=lambda d, t: seen.append((d, t)))
    assert seen[-1] == (4, 4)
