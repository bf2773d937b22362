"""Sparse elements of a tensor power (one factor per edge) with implicit units.

An element is a dict mapping a key tuple to a scalar.  Entry ``p`` of a key
is a basis index of the factor at edge ``p`` or ``None`` for the unit of that
factor.  ``None`` keeps elements such as ``(y (x) gamma)_e`` short even when
the local unit is a sum of several basis vectors.  ``normalize`` gives a
canonical form for comparisons.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import ONE, ZERO, Q, add_term, axpy, mixed_radix_decode


class EdgeTensorSpace:
    """The carrier ``V^{(x) E}`` with a choice of named componentwise products.

    ``tables[name][(i, j)]`` is the sparse product of local basis vectors.
    """

    def __init__(self, dim: int, n_edges: int, unit: Mapping[int, Q],
                 tables: Mapping[str, Mapping[tuple[int, int], Mapping[int, Q]]]):
        self.dim = dim
        self.n_edges = n_edges
        self.local_unit = dict(unit)
        self.tables = dict(tables)

    # --- construction
    def unit(self) -> dict:
        return {(None,) * self.n_edges: ONE}

    def embed(self, pos: int, vec: Mapping) -> dict:
        out = {}
        for i, c in vec.items():
            if c:
                key = [None] * self.n_edges
                key[pos] = i
                out[tuple(key)] = c
        return out

    def pure(self, parts: Mapping[int, Mapping]) -> dict:
        """Tensor product of local vectors at the given positions."""
        out = {(None,) * self.n_edges: ONE}
        for pos, vec in parts.items():
            nxt: dict = {}
            for key, c in out.items():
                for i, z in vec.items():
                    k = list(key)
                    k[pos] = i
                    add_term(nxt, tuple(k), c * z)
            out = nxt
        return out

    def basis(self, digits: Sequence[int | None]) -> dict:
        return {tuple(digits): ONE}

    # --- products
    def mul(self, x: Mapping, y: Mapping, mode: str) -> dict:
        table = self.tables[mode]
        out: dict = {}
        for kx, cx in x.items():
            for ky, cy in y.items():
                c = cx * cy
                key = list(kx)
                multi = []
                zero = False
                for p, b in enumerate(ky):
                    if b is None:
                        continue
                    a = kx[p]
                    if a is None:
                        key[p] = b
                        continue
                    r = table.get((a, b))
                    if not r:
                        zero = True
                        break
                    if len(r) == 1:
                        ((k, z),) = r.items()
                        key[p] = k
                        c = c * z
                    else:
                        multi.append((p, tuple(r.items())))
                if zero:
                    continue
                if not multi:
                    add_term(out, tuple(key), c)
                    continue
                positions = [p for p, _ in multi]
                for combo in itertools.product(*(opts for _, opts in multi)):
                    cc = c
                    for p, (k, z) in zip(positions, combo):
                        key[p] = k
                        cc = cc * z
                    add_term(out, tuple(key), cc)
        return out

    def mul_many(self, factors: Iterable[Mapping], mode: str) -> dict:
        out = self.unit()
        for f in factors:
            out = self.mul(out, f, mode)
        return out

    def commutator(self, x: Mapping, y: Mapping, mode: str) -> dict:
        out = self.mul(x, y, mode)
        axpy(out, self.mul(y, x, mode), -ONE)
        return out

    # --- local maps
    def apply_local(self, x: Mapping, pos: int, fn: Callable[[int | None], Mapping]) -> dict:
        """Apply a linear map at one position; ``fn(None)`` acts on the local unit."""
        out: dict = {}
        cache: dict = {}
        for key, c in x.items():
            a = key[pos]
            img = cache.get(a)
            if img is None:
                img = cache[a] = fn(a)
            for k, z in img.items():
                nk = list(key)
                nk[pos] = k
                add_term(out, tuple(nk), c * z)
        return out

    # --- canonical forms
    def expand_positions(self, x: Mapping, positions: Iterable[int]) -> dict:
        positions = list(positions)
        out: dict = {}
        unit_items = tuple(self.local_unit.items())
        for key, c in x.items():
            slots = [p for p in positions if key[p] is None]
            if not slots:
                add_term(out, key, c)
                continue
            for combo in itertools.product(unit_items, repeat=len(slots)):
                nk = list(key)
                cc = c
                for p, (u, z) in zip(slots, combo):
                    nk[p] = u
                    cc = cc * z
                add_term(out, tuple(nk), cc)
        return out

    def support(self, x: Mapping) -> set:
        return {p for key in x for p, a in enumerate(key) if a is not None}

    def normalize(self, x: Mapping) -> dict:
        return self.expand_positions(x, sorted(self.support(x)))

    def equal(self, x: Mapping, y: Mapping) -> bool:
        diff = dict(x)
        axpy(diff, y, -ONE)
        return not self.normalize(diff)

    def is_zero(self, x: Mapping) -> bool:
        return not self.normalize(x)

    def to_flat(self, x: Mapping) -> dict:
        """Expand completely and encode keys as mixed-radix integers."""
        full = self.expand_positions(x, range(self.n_edges))
        d = self.dim
        out: dict = {}
        for key, c in full.items():
            flat = 0
            for a in key:
                flat = flat * d + a
            add_term(out, flat, c)
        return out

    def from_flat(self, vec: Mapping[int, Q]) -> dict:
        shape = [self.dim] * self.n_edges
        return {mixed_radix_decode(k, shape): c for k, c in vec.items()}

    @property
    def total_dim(self) -> int:
        return self.dim ** self.n_edges

    def basis_keys(self) -> Iterable[tuple]:
        return itertools.product(range(self.dim), repeat=self.n_edges)


def linear_extend(fn: Callable[[tuple], Mapping], x: Mapping) -> dict:
    """Extend a map on key tuples linearly."""
    out: dict = {}
    for key, c in x.items():
        axpy(out, fn(key), c)
    return out

