import pytest
from hypothesis import given
from hypothesis import strategies as st

from dequetsip import cache
from dequetsip.series import TruncatedSeries

from .conftest import DATA


def test_write_then_read(tmp_path, bundle50):
    P = bundle50.P.truncate(20)
    path = cache.write_series(tmp_path / "P_20.json", "P", P)
    name, back = cache.read_series(path, integral=True)
    assert name == "P" and back == P and back.order == 20


def test_rewrite_is_byte_identical(tmp_path, bundle50):
    path = cache.write_series(tmp_path / "D.json", "D", bundle50.D)
    first = path.read_bytes()
    name, s = cache.read_series(path)
    cache.write_series(path, name, s)
    assert path.read_bytes() == first


@given(st.lists(st.fractions(max_denominator=1000), min_size=1, max_size=30))
def test_string_roundtrip(coeffs):
    s = TruncatedSeries(coeffs)
    text = cache.dumps_series("x", s)
    assert cache.loads_series(text) == ("x", s)
    assert cache.dumps_series("x", cache.loads_series(text)[1]) == text


def test_fraction_rejected_for_integer_series():
    with pytest.raises(cache.CacheFormatError, match=r"coeffs\[1\]"):
        cache.read_series(DATA / "bad_fraction.json", integral=True)
    # the same file is fine as a rational series
    assert cache.read_series(DATA / "bad_fraction.json")[1][1] == 0.5


def test_length_mismatch_names_field():
    with pytest.raises(cache.CacheFormatError, match="'coeffs' has 3 entries"):
        cache.read_series(DATA / "bad_field.json")


def test_malformed_json_reports_position():
    with pytest.raises(cache.CacheFormatError, match="line 1 column"):
        cache.loads_series('{"name": "P", "order": 1, "coeffs": ["1", 2.5}')


def test_float_coefficient_rejected():
    with pytest.raises(cache.CacheFormatError, match="not an exact rational"):
        cache.loads_series('{"name": "P", "order": 0, "coeffs": [1.5]}')


def test_legacy_lines_fixture():
    name, s = cache.read_series(DATA / "P_legacy.txt", fmt="lines", integral=True)
    assert name == "P_legacy"
    assert s.order == 12 and list(s.coeffs[:9]) == [1, 1, 2, 6, 23, 103, 513, 2760, 15741]


def test_legacy_line_errors():
    with pytest.raises(cache.CacheFormatError, match="line 2"):
        cache.loads_lines("1\nx\n")
    with pytest.raises(cache.CacheFormatError):
        cache.loads_lines("\n\n")


def test_find_cached_picks_smallest_sufficient(tmp_path):
    s = TruncatedSeries(range(1, 31))
    cache.write_series(cache.cached_path(tmp_path, "P", 29), "P", s)
    cache.write_series(cache.cached_path(tmp_path, "P", 9), "P", s.truncate(9))
    assert cache.find_cached(tmp_path, "P", 5) == s.truncate(5)
    assert cache.find_cached(tmp_path, "P", 20) == s.truncate(20)
    assert cache.find_cached(tmp_path, "P", 40) is None
    assert cache.find_cached(None, "P", 3) is None


def test_env_default(monkeypatch, tmp_path):
    monkeypatch.setenv(cache.CACHE_ENV, str(tmp_path))
    assert cache.default_cache_dir() == tmp_path
