'''
Tests for the plain-text series cache.
'''

import os
import asd_forms as af
import asd_tools as at


def make_series():
    ring = af.PadicRing(af.PadicContext(11, 20))
    return af.zhang_basis(150, ring)[1]


def test_roundtrip(tmp_path):
    f = make_series()
    cache = at.SeriesCache(str(tmp_path))
    g = at.cache_roundtrip(f, ('zhang_f2', 11, 20, 150), cache)
    assert g is not None
    assert g.ring == f.ring and g.offset == f.offset and g.coeffs == f.coeffs
    assert cache.hits == 1
    assert not [fn for fn in os.listdir(tmp_path) if fn.endswith('.tmp')]
    return


def test_corruption_is_a_miss(tmp_path):
    f = make_series()
    cache = at.SeriesCache(str(tmp_path))
    path = cache.save(f, 'zhang_f2', 11, 20, 150)
    lines = open(path).read().split('\n')
    lines[5] = str(int(lines[5]) + 1)
    with open(path, 'w') as fh:
        fh.write('\n'.join(lines))
    assert cache.load('zhang_f2', 11, 20, 150) is None
    assert cache.misses == 1

    # A file whose header names another key is also a miss
    os.replace(path, cache.filename('zhang_f2', 11, 20, 151))
    assert cache.load('zhang_f2', 11, 20, 151) is None
    assert cache.load('zhang_f1', 11, 20, 150) is None
    assert cache.misses == 3
    return


def test_get_builds_once(tmp_path):
    calls = []
    def build():
        calls.append(1)
        return make_series()
    cache = at.SeriesCache(str(tmp_path / 'sub'))
    a = cache.get('zhang_f2', 11, 20, 150, build)
    b = cache.get('zhang_f2', 11, 20, 150, build)
    assert len(calls) == 1
    assert a.equals(b)
    cache.get('zhang_f2', 11, 20, 150, build, force=True)
    assert len(calls) == 2
    return


if __name__ == '__main__':
    import tempfile
    import pathlib
    for test in [test_roundtrip, test_corruption_is_a_miss, test_get_builds_once]:
        test(pathlib.Path(tempfile.mkdtemp()))
