"""Integer rings in C, H and O: Eisenstein, Hurwitz and Cayley integers.

The Cayley integers are built as a lattice (Gravesian integers plus halving
vectors), gated on multiplicative closure, and then studied through their
240 units: a loop multiplication table, Moufang identities, and the
automorphism group as permutations of the units.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .exact import (
    FANO_TRIPLES,
    EisensteinRational,
    Octonion,
    Quaternion,
    det,
    integer_basis,
    inverse,
    matvec,
    oct_mul_coords,
    rank,
    transpose,
)
from .groups import SEED, FiniteGroupModel, GenericCarrier, PermCarrier

# ----------------------------------------------------------------------------
# Eisenstein integers


def eisenstein_int(a: int, b: int) -> EisensteinRational:
    if not (isinstance(a, int) and isinstance(b, int)):
        raise TypeError("Eisenstein integers need integer coordinates")
    return EisensteinRational(a, b)


def eisenstein_unit_scan(bound: int = 2) -> list[EisensteinRational]:
    """Norm-1 Eisenstein integers with ``|a|, |b| <= bound``."""
    return [eisenstein_int(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
            if a * a - a * b + b * b == 1]


def eisenstein_units() -> FiniteGroupModel:
    carrier = GenericCarrier(lambda x, y: x * y, EisensteinRational(1), name="eisenstein", inverse=lambda x: x.conj())
    return FiniteGroupModel.from_elements(eisenstein_unit_scan(), carrier, name="Eisenstein units")


# ----------------------------------------------------------------------------
# Hurwitz integers


def is_hurwitz(q: Quaternion) -> bool:
    dens = {c.denominator for c in q.coords}
    if dens == {1}:
        return True
    return dens == {2}


HALF_STEPS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))


def hurwitz_unit_scan() -> list[Quaternion]:
    """Norm-1 Hurwitz quaternions by scanning coordinates in {0, +-1/2, +-1}."""
    out = []
    for c in itertools.product(HALF_STEPS, repeat=4):
        q = Quaternion(*c)
        if q.norm() == 1 and is_hurwitz(q):
            out.append(q)
    return out


def hurwitz_units() -> FiniteGroupModel:
    carrier = GenericCarrier(lambda x, y: x * y, Quaternion(1), name="hurwitz", inverse=lambda x: x.conj())
    return FiniteGroupModel.from_elements(hurwitz_unit_scan(), carrier, name="Hurwitz units")


# ----------------------------------------------------------------------------
# Cayley integers


class ConstructionError(RuntimeError):
    """No multiplicatively closed order was found."""


def fano_lines(swap: tuple[int, int] | None = None) -> list[frozenset[int]]:
    """Lines of the multiplication Fano plane, optionally with two imaginary indices swapped."""
    def s(k):
        if swap is None:
            return k
        a, b = swap
        return b if k == a else a if k == b else k

    return [frozenset(s(k) for k in t) for t in FANO_TRIPLES]


def halving_sets(swap: tuple[int, int] | None) -> list[frozenset[int]]:
    """The 14 four-element coordinate sets carrying half-integer units: {0} + line, and complements."""
    lines = fano_lines(swap)
    sets = [frozenset({0}) | ln for ln in lines]
    sets += [frozenset(range(8)) - st for st in sets]
    return sets


@dataclass
class CayleyRing:
    """A rank-8 lattice of octonions given by a Z-basis (doubled integer coordinates)."""

    basis2: list[tuple[int, ...]]
    swap: tuple[int, int] | None
    halving: list[frozenset[int]]
    rejected: list[tuple[int, int] | None]

    def __post_init__(self):
        self._inv = inverse(transpose(self.basis2))

    @property
    def basis(self) -> list[Octonion]:
        return [Octonion(*(Fraction(c, 2) for c in b)) for b in self.basis2]

    def contains2(self, v2) -> bool:
        """Membership for doubled integer coordinates."""
        return all(c.denominator == 1 for c in matvec(self._inv, v2))

    def __contains__(self, x: Octonion) -> bool:
        try:
            return self.contains2(x.doubled())
        except ValueError:
            return False

    def closure_failures(self) -> list[tuple[int, int]]:
        """Basis pairs whose product leaves the lattice."""
        bad = []
        for i, a in enumerate(self.basis2):
            for j, b in enumerate(self.basis2):
                prod4 = oct_mul_coords(a, b)  # = 4 * product
                if any(c % 2 for c in prod4):
                    bad.append((i, j))
                    continue
                if not self.contains2([c // 2 for c in prod4]):
                    bad.append((i, j))
        return bad

    def gram2(self) -> list[list[int]]:
        """Gram matrix of the basis under twice the norm form."""
        return [[Fraction(sum(x * y for x, y in zip(a, b)), 2) for b in self.basis2] for a in self.basis2]


def _candidate_ring(swap) -> CayleyRing:
    gens = [tuple(2 * int(i == k) for i in range(8)) for k in range(8)]
    sets = halving_sets(swap)
    gens += [tuple(int(i in st) for i in range(8)) for st in sets]
    basis = integer_basis(gens)
    if len(basis) != 8:
        raise ConstructionError("halving lattice is not of rank 8")
    return CayleyRing(basis, swap, sets, [])


@lru_cache(maxsize=None)
def cayley_ring() -> CayleyRing:
    """First candidate order (unswapped, then each index transposition) passing the closure gate."""
    rejected = []
    for swap in [None] + list(itertools.combinations(range(1, 8), 2)):
        ring = _candidate_ring(swap)
        if not ring.closure_failures():
            ring.rejected = rejected
            return ring
        rejected.append(swap)
    raise ConstructionError("no multiplicatively closed halving order found")


# ----------------------------------------------------------------------------
# the unit loop


def _key2(rows: np.ndarray) -> np.ndarray:
    """Encode rows of doubled coordinates in [-2, 2] as base-5 ints."""
    return ((rows + 2) * (5 ** np.arange(8))).sum(axis=-1)


@dataclass
class UnitLoop:
    elements: list[Octonion]
    coords2: np.ndarray          # (240, 8) doubled coordinates
    table: np.ndarray            # table[i, j] = index of elements[i] * elements[j]
    lookup: np.ndarray           # base-5 key -> index, -1 if not a unit

    @property
    def one(self) -> int:
        return self.index_of((2, 0, 0, 0, 0, 0, 0, 0))

    def index_of(self, v2) -> int:
        return int(self.lookup[_key2(np.asarray(v2))])

    def __len__(self):
        return len(self.elements)

    def is_closed(self) -> bool:
        return bool((self.table >= 0).all())

    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.one, axis=1)


def unit_scan(ring: CayleyRing) -> list[tuple[int, ...]]:
    """Doubled coordinates of all norm-1 lattice points (coordinates in {0, +-1/2, +-1})."""
    out = []
    for k in range(8):
        for s in (2, -2):
            v = [0] * 8
            v[k] = s
            out.append(tuple(v))
    for support in itertools.combinations(range(8), 4):
        for signs in itertools.product((1, -1), repeat=4):
            v = [0] * 8
            for k, s in zip(support, signs):
                v[k] = s
            out.append(tuple(v))
    return sorted(v for v in out if ring.contains2(v))


@lru_cache(maxsize=None)
def cayley_units() -> UnitLoop:
    ring = cayley_ring()
    units2 = unit_scan(ring)
    coords2 = np.array(units2, dtype=np.int64)
    lookup = np.full(5**8, -1, dtype=np.int64)
    lookup[_key2(coords2)] = np.arange(len(units2))
    n = len(units2)
    where = {v: i for i, v in enumerate(units2)}
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(units2):
        row = table[i]
        for j, b in enumerate(units2):
            prod4 = oct_mul_coords(a, b)  # = 4 * product
            if any(c % 2 for c in prod4):
                row[j] = -1
            else:
                row[j] = where.get(tuple(c // 2 for c in prod4), -1)
    elements = [Octonion(*(Fraction(c, 2) for c in v)) for v in units2]
    return UnitLoop(elements, coords2, table, lookup)


def moufang_exhaustive(loop: UnitLoop, threads: int = 1) -> int:
    """Number of triples violating ``z(x(zy)) = ((zx)z)y``, over all |L|^3 triples."""
    M = loop.table
    n = len(loop)

    def block(zs):
        bad = 0
        for z in zs:
            zy = M[z]                      # over y
            lhs = M[z][M[:, zy]]           # [x, y]: z(x(zy))
            zxz = M[M[z], z]               # over x: (zx)z
            rhs = M[zxz]                   # [x, y]: ((zx)z)y
            bad += int((lhs != rhs).sum())
        return bad

    parts = [range(k, n, max(threads, 1)) for k in range(max(threads, 1))]
    if threads <= 1:
        return block(range(n))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(block, parts))


def moufang_sampled(loop: UnitLoop, count: int = 100_000, seed: int = SEED) -> dict[str, int]:
    """Violations of the other two Moufang identities on seeded random triples."""
    M = loop.table
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, len(loop), size=(3, count))
    # x(z(yz)) = ((xz)y)z
    second = M[x, M[z, M[y, z]]] != M[M[M[x, z], y], z]
    # (zx)(yz) = (z(xy))z
    third = M[M[z, x], M[y, z]] != M[M[z, M[x, y]], z]
    return {"x(z(yz))=((xz)y)z": int(second.sum()), "(zx)(yz)=(z(xy))z": int(third.sum())}


def associativity_witness(loop: UnitLoop) -> tuple[int, int, int] | None:
    """First triple of unit indices (lexicographic) with (uv)w != u(vw)."""
    M = loop.table
    for u in range(len(loop)):
        lhs = M[M[u]]                  # [v, w]: (uv)w
        rhs = M[u][M]                  # [v, w]: u(vw)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            v, w = diff[0]
            return u, int(v), int(w)
    return None


# ----------------------------------------------------------------------------
# automorphisms


def _dot2(a, b) -> int:
    return int(np.dot(a, b))


def basic_triple(loop: UnitLoop) -> tuple[int, int, int]:
    """Lexicographically first basic triple of imaginary units.

    (i, j, l) with i, j orthogonal imaginary units and l orthogonal to the
    quaternion algebra spanned by 1, i, j, ij.
    """
    U = loop.coords2
    M = loop.table
    imag = sorted((i for i in range(len(loop)) if U[i, 0] == 0), key=lambda i: tuple(loop.elements[i].coords))
    for i in imag:
        for j in imag:
            if _dot2(U[i], U[j]) != 0:
                continue
            ij = M[i, j]
            for l in imag:
                if all(_dot2(U[l], U[k]) == 0 for k in (i, j, ij)):
                    return i, j, l
    raise ConstructionError("no basic triple among the units")


def triple_basis(loop: UnitLoop, i: int, j: int, l: int) -> list[int]:
    """Unit indices of 1, i, j, ij, l, il, jl, (ij)l."""
    M = loop.table
    ij = M[i, j]
    return [loop.one, i, j, int(ij), l, int(M[i, l]), int(M[j, l]), int(M[ij, l])]


@dataclass
class AutomorphismSearch:
    source: tuple[int, int, int]
    perms: list[bytes]
    candidates: int


def cayley_automorphisms_search(loop: UnitLoop | None = None, threads: int = 1) -> AutomorphismSearch:
    """Backtracking over images of the canonical basic triple.

    Each image triple fixes a linear map through the basis 1, i, j, ij, l,
    il, jl, (ij)l; it is kept iff it permutes the 240 units and preserves the
    products of the standard basis.
    """
    loop = loop or cayley_units()
    U, M = loop.coords2, loop.table
    n = len(loop)
    src = basic_triple(loop)
    B = triple_basis(loop, *src)
    Bc = [[Fraction(int(c), 2) for c in U[k]] for k in B]
    if rank(Bc) != 8:
        raise ConstructionError("basic triple does not span the octonions")
    # coefficients of every unit in the basis B, scaled to integers
    Binv = inverse(transpose(Bc))
    coeff = [matvec(Binv, [Fraction(int(c), 2) for c in U[u]]) for u in range(n)]
    D = lcm(*(c.denominator for row in coeff for c in row))
    C = np.array([[int(c * D) for c in row] for row in coeff], dtype=np.int64)
    quat_units = np.array([u for u in range(n) if not C[u, 4:].any()])
    one = loop.one
    imag = [u for u in range(n) if U[u, 0] == 0]
    std = [loop.index_of(tuple(2 * int(a == k) for a in range(8))) for k in range(8)]

    def images(basis_imgs: np.ndarray, rows: np.ndarray) -> np.ndarray:
        # basis_imgs: (..., 8) unit indices; returns (..., len(rows)) unit indices or -1
        vec = np.einsum("rk,...kc->...rc", C[rows], U[basis_imgs])
        if (vec % D).any():
            bad = ((vec % D) != 0).any(axis=-1)
        else:
            bad = None
        vec = vec // D
        inrange = (np.abs(vec) <= 2).all(axis=-1)
        keys = _key2(np.clip(vec, -2, 2))
        idx = np.where(inrange, loop.lookup[keys], -1)
        if bad is not None:
            idx = np.where(bad, -1, idx)
        return idx

    def branch(i2: int) -> tuple[list[bytes], int]:
        found, cands = [], 0
        for j2 in imag:
            if _dot2(U[i2], U[j2]) != 0:
                continue
            ij2 = M[i2, j2]
            qimg = images(np.array([one, i2, j2, ij2, one, one, one, one]), quat_units)
            if (qimg < 0).any():
                continue
            ls = [l2 for l2 in imag if all(_dot2(U[l2], U[k]) == 0 for k in (i2, j2, ij2))]
            if not ls:
                continue
            ls = np.array(ls)
            cands += len(ls)
            bimgs = np.stack([np.full(len(ls), one), np.full(len(ls), i2), np.full(len(ls), j2), np.full(len(ls), ij2),
                              ls, M[i2, ls], M[j2, ls], M[ij2, ls]], axis=1)
            full = images(bimgs, np.arange(n))
            for row in full:
                if (row < 0).any() or len(set(row.tolist())) != n:
                    continue
                if row[one] != one:
                    continue
                if all(row[M[a, b]] == M[row[a], row[b]] for a in std for b in std):
                    found.append(bytes(row.astype(np.uint8)))
        return found, cands

    if threads <= 1:
        results = list(map(branch, imag))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(branch, imag))
    perms = [p for found, _ in results for p in found]
    return AutomorphismSearch(src, perms, sum(c for _, c in results))


@lru_cache(maxsize=None)
def _automorphism_search_cached() -> AutomorphismSearch:
    return cayley_automorphisms_search()


def cayley_automorphisms(search: AutomorphismSearch | None = None) -> FiniteGroupModel:
    search = search or _automorphism_search_cached()
    return FiniteGroupModel.from_elements(search.perms, PermCarrier(240), name="G2(Z)")


def automorphism_matrix(loop: UnitLoop, perm: bytes) -> list[list[Fraction]]:
    """8x8 rational matrix (columns = images of e_0..e_7) of an automorphism given on units."""
    cols = []
    for k in range(8):
        src = loop.index_of(tuple(2 * int(a == k) for a in range(8)))
        cols.append([Fraction(int(c), 2) for c in loop.coords2[perm[src]]])
    return transpose(cols)


def cayley_gram_det2(ring: CayleyRing) -> Fraction:
    return det(ring.gram2())
