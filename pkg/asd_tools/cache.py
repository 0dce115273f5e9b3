'''
Plain-text cache of computed q-expansions, one file per key (form id, p, B, N).

File layout: a header line "p B N form-id sha", then the serialized series
(ring descriptor, "offset trunc", one decimal coefficient per line). The sha is
the SHA-256 of everything after the header. Any mismatch counts as a miss.
'''

import os
import hashlib
import sciris as sc

import asd_forms as af


__all__ = ['SeriesCache', 'cache_roundtrip']


def _digest(body):
    return hashlib.sha256(body.encode('utf-8')).hexdigest()


class SeriesCache:
    '''
    Args:
        folder (str): where the files live; created on first write
        verbose (int): print hits, misses and writes if nonzero
    '''

    def __init__(self, folder, verbose=0):
        self.folder = folder
        self.verbose = verbose
        self.hits = 0
        self.misses = 0
        return

    def __repr__(self):
        return f'SeriesCache({self.folder}, hits={self.hits}, misses={self.misses})'

    def filename(self, form_id, p, B, N):
        return os.path.join(self.folder, f'{form_id}_p{p}_B{B}_N{N}.txt')

    def save(self, series, form_id, p, B, N):
        ''' Write atomically: the file appears complete or not at all '''
        body = af.serialize(series)
        header = f'{p} {B} {N} {form_id} {_digest(body)}\n'
        path = self.filename(form_id, p, B, N)
        os.makedirs(self.folder, exist_ok=True)
        tmp = f'{path}.{os.getpid()}.tmp'
        sc.savetext(tmp, header + body)
        os.replace(tmp, path)
        sc.printv(f'Cached {form_id} at p={p}, B={B}, N={N}: {path}', 1, self.verbose)
        return path

    def load(self, form_id, p, B, N):
        ''' The cached series, or None on a miss (absent, corrupted or mismatched file) '''
        path = self.filename(form_id, p, B, N)
        if not os.path.isfile(path):
            self.misses += 1
            return None
        try:
            text = sc.loadtext(path)
            header, body = text.split('\n', 1)
            hp, hB, hN, hid, sha = header.split()
            if (int(hp), int(hB), int(hN), hid) != (p, B, N, form_id):
                raise ValueError(f'header {header} does not match the key')
            if sha != _digest(body):
                raise ValueError('checksum mismatch')
            series = af.deserialize(body)
        except Exception as E:
            print(f'Warning: ignoring cache file {path}: {str(E)}')
            self.misses += 1
            return None
        self.hits += 1
        sc.printv(f'Loaded {form_id} at p={p}, B={B}, N={N} from cache', 1, self.verbose)
        return series

    def get(self, form_id, p, B, N, build, force=False):
        ''' Load from the cache, or call build() and store the result '''
        if not force:
            series = self.load(form_id, p, B, N)
            if series is not None:
                return series
        series = build()
        self.save(series, form_id, p, B, N)
        return series


def cache_roundtrip(series, key, cache):
    '''
    Write a series under key = (form id, p, B, N) and read it back.

    **Example**::

        f = cache_roundtrip(f1, ('zhang_f1', 11, 20, 1500), SeriesCache('cache'))
    '''
    form_id, p, B, N = key
    cache.save(series, form_id, p, B, N)
    return cache.load(form_id, p, B, N)
