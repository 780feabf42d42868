import numpy as np
import pytest

from src.sylow.errors import CacheError
from src.sylow.groups.unitary import UnitaryParams, UnitarySylowGroup
from src.sylow.groups.wreath import WreathGroup
from src.sylow.servicies.cache import (
    MAGIC, cache_name, get_or_build, group_header, is_cacheable, read_group_cache, read_header,
    write_group_cache,
)


def test_matrix_round_trip(tmp_path, s3):
    path = write_group_cache(tmp_path / 'g.cache', s3)
    header = read_header(path)
    assert header['representation'] == 'matrix'
    assert (header['p'], header['k'], header['n'], header['count']) == (5, 1, 3, 125)
    G = read_group_cache(path)
    assert isinstance(G, UnitarySylowGroup)
    assert np.array_equal(G.codes, s3.codes)
    assert G.generators == s3.generators


def test_element_section_is_deterministic(tmp_path, s3):
    first = write_group_cache(tmp_path / 'a.cache', s3).read_bytes()
    second = write_group_cache(tmp_path / 'b.cache', read_group_cache(tmp_path / 'a.cache')).read_bytes()
    assert first == second
    assert first.startswith(MAGIC)


def test_wreath_round_trip(tmp_path, c5_wr_c5):
    path = write_group_cache(tmp_path / cache_name(group_header(c5_wr_c5)), c5_wr_c5)
    assert path.name == 'wreath_p5_r1_h1.cache'
    G = read_group_cache(path)
    assert isinstance(G, WreathGroup) and G.order == 15625


def test_get_or_build(tmp_path, s2):
    calls = []

    def build():
        calls.append(1)
        return s2

    expected = {'representation': 'matrix', 'p': 5, 'k': 1, 'n': 2}
    path = tmp_path / cache_name(expected)
    get_or_build(path, build, expected)
    G = get_or_build(path, build, expected)
    assert len(calls) == 1 and G.order == 5
    with pytest.raises(CacheError):
        get_or_build(path, build, {**expected, 'n': 3})


def test_corrupted(tmp_path, s2):
    path = tmp_path / 'bad.cache'
    path.write_bytes(b'NOTACACHE')
    with pytest.raises(CacheError):
        read_group_cache(path)
    good = write_group_cache(tmp_path / 'good.cache', s2).read_bytes()
    path.write_bytes(good[:-2])
    with pytest.raises(CacheError):
        read_group_cache(path)
    with pytest.raises(CacheError):
        read_group_cache(tmp_path / 'missing.cache')


def test_helpers(tmp_path, s3, c5_c25):
    assert is_cacheable(s3) and not is_cacheable(c5_c25)
    with pytest.raises(CacheError):
        get_or_build(tmp_path / 'product.cache', lambda: c5_c25, {})
    assert not (tmp_path / 'product.cache').exists()
    with pytest.raises(CacheError):
        group_header(c5_c25)
    assert cache_name(group_header(s3)) == 'sylow_p5_k1_n3.cache'
    assert UnitaryParams(p=5, q=5, n=3) == s3.params
