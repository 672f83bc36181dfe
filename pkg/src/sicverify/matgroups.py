"""Classical matrix groups over F2, F3 and F9.

F9 is ``F3[t]/(t^2 + 1)``; an element ``a + b*t`` is encoded as the int
``a + 3*b``.  Matrices are row-major tuples of such ints.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .groups import (
    DEFAULT_MATRIX_LIMIT,
    Carrier,
    FiniteGroupModel,
    center,
    closure,
    permutation_image,
    quotient,
)


class GF:
    """A prime field F2/F3 or F9 = F3[t]/(t^2+1), with elements ``0..q-1``."""

    def __init__(self, q: int):
        if q not in (2, 3, 9):
            raise ValueError(f"unsupported field size {q}")
        self.q = q
        p = 3 if q == 9 else q
        self.p = p
        elems = range(q)
        if q == 9:
            def split(x):
                return x % 3, x // 3

            def join(a, b):
                return a % 3 + 3 * (b % 3)

            self.add_t = [[join(split(x)[0] + split(y)[0], split(x)[1] + split(y)[1]) for y in elems] for x in elems]
            # (a + bt)(c + dt) = (ac - bd) + (ad + bc)t
            self.mul_t = [[join(split(x)[0] * split(y)[0] - split(x)[1] * split(y)[1],
                                split(x)[0] * split(y)[1] + split(x)[1] * split(y)[0]) for y in elems] for x in elems]
            self.frob_t = [join(split(x)[0], -split(x)[1]) for x in elems]
        else:
            self.add_t = [[(x + y) % p for y in elems] for x in elems]
            self.mul_t = [[(x * y) % p for y in elems] for x in elems]
            self.frob_t = list(elems)
        self.neg_t = [next(y for y in elems if self.add_t[x][y] == 0) for x in elems]
        self.inv_t = [None] + [next(y for y in elems if self.mul_t[x][y] == 1) for x in range(1, q)]

    def add(self, x, y):
        return self.add_t[x][y]

    def mul(self, x, y):
        return self.mul_t[x][y]

    def neg(self, x):
        return self.neg_t[x]

    def sub(self, x, y):
        return self.add_t[x][self.neg_t[y]]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 in GF")
        return self.inv_t[x]

    def frob(self, x):
        """``x -> x^p``; on F9 this is the conjugation ``a + bt -> a - bt``."""
        return self.frob_t[x]

    def power(self, x, k):
        r = 1
        for _ in range(k):
            r = self.mul_t[r][x]
        return r

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


class MatrixCarrier(Carrier):
    """n x n matrices over GF(q) as row-major tuples."""

    name = "matrix"
    limit = DEFAULT_MATRIX_LIMIT

    def __init__(self, q: int, n: int):
        self.F = field(q)
        self.n = n
        self._id = tuple(int(i == j) for i in range(n) for j in range(n))

    def identity(self):
        return self._id

    def mul(self, a, b):
        n, M, A = self.n, self.F.mul_t, self.F.add_t
        out = []
        for i in range(n):
            row = a[i * n:(i + 1) * n]
            for j in range(n):
                s = 0
                for k in range(n):
                    s = A[s][M[row[k]][b[k * n + j]]]
                out.append(s)
        return tuple(out)


def mat_det(F: GF, m: tuple, n: int):
    if n == 2:
        return F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2]))
    if n == 3:
        a, b, c, d, e, f, g, h, i = m
        t1 = F.mul(a, F.sub(F.mul(e, i), F.mul(f, h)))
        t2 = F.mul(b, F.sub(F.mul(d, i), F.mul(f, g)))
        t3 = F.mul(c, F.sub(F.mul(d, h), F.mul(e, g)))
        return F.add(F.sub(t1, t2), t3)
    raise NotImplementedError("determinant only for n <= 3")


def build_sl23() -> FiniteGroupModel:
    """SL(2,3) by exhaustive scan of all 81 matrices."""
    F = field(3)
    mats = [(a, b, c, d) for a in range(3) for b in range(3) for c in range(3) for d in range(3)]
    sl = [m for m in mats if mat_det(F, m, 2) == 1]
    return FiniteGroupModel.from_elements(sl, MatrixCarrier(3, 2), name="SL(2,3)")


# ----------------------------------------------------------------------------
# unitary group over F9


def herm(F: GF, u, v):
    """Hermitian form ``sum conj(u_k) v_k`` on F9^n (identity Gram matrix)."""
    s = 0
    for x, y in zip(u, v):
        s = F.add(s, F.mul(F.frob(x), y))
    return s


def gu33_elements() -> list[tuple]:
    """All M over F9 with conj(M)^T M = I, by column backtracking."""
    F = field(9)
    vecs = [(a, b, c) for a in range(9) for b in range(9) for c in range(9)]
    unit = [v for v in vecs if herm(F, v, v) == 1]
    out = []
    for c1 in unit:
        c2s = [v for v in unit if herm(F, c1, v) == 0]
        for c2 in c2s:
            for c3 in c2s:
                if herm(F, c2, c3) == 0:
                    # row-major from columns
                    out.append((c1[0], c2[0], c3[0], c1[1], c2[1], c3[1], c1[2], c2[2], c3[2]))
    return out


def is_unitary(m: tuple) -> bool:
    F = field(9)
    cols = [m[0::3], m[1::3], m[2::3]]
    return all(herm(F, cols[i], cols[j]) == int(i == j) for i in range(3) for j in range(3))


@lru_cache(maxsize=None)
def build_gu33() -> FiniteGroupModel:
    return FiniteGroupModel.from_elements(gu33_elements(), MatrixCarrier(9, 3), name="GU(3,3)")


def projective_points(q: int = 9, n: int = 3) -> list[tuple]:
    """Points of PG(n-1, q) as vectors whose first nonzero entry is 1."""
    pts = []

    def rec(prefix):
        if len(prefix) == n:
            if any(prefix):
                first = next(x for x in prefix if x)
                if first == 1:
                    pts.append(tuple(prefix))
            return
        for x in range(q):
            rec(prefix + [x])

    rec([])
    return pts


def _act_projective(F: GF, n: int):
    def act(m, v):
        w = []
        for i in range(n):
            s = 0
            for k in range(n):
                s = F.add(s, F.mul(m[i * n + k], v[k]))
            w.append(s)
        lead = F.inv(next(x for x in w if x))
        return tuple(F.mul(lead, x) for x in w)

    return act


@lru_cache(maxsize=None)
def build_psu33_parts() -> tuple[FiniteGroupModel, FiniteGroupModel, FiniteGroupModel, FiniteGroupModel]:
    """(GU(3,3), its centre, GU/Z as cosets, GU/Z as permutations of PG(2,9))."""
    gu = build_gu33()
    z = center(gu)
    pgu = quotient(gu, z)
    pgu.name = "PSU(3,3)"
    F = field(9)
    image = permutation_image(pgu, projective_points(), _act_projective(F, 3), name="PSU(3,3)")
    return gu, z, pgu, image


def build_psu33() -> FiniteGroupModel:
    """PSU(3,3), order 6048, realized faithfully on the 91 points of PG(2,9).

    GU(3,3)/Z is materialized first; since the kernel of the projective
    action is exactly the scalar centre, the permutation image has the same
    order, which :func:`build_psu33_parts` callers can check.
    """
    return build_psu33_parts()[3]


# ----------------------------------------------------------------------------
# Sp(6,2) on Pauli labels
#
# Labels are 6-bit ints p with shift part a = p >> 3 and phase part b = p & 7;
# bit k + 3 (a coordinate) is paired with bit k (b coordinate).


def symp(p: int, q: int) -> int:
    """Symplectic form a.b' + a'.b mod 2."""
    return (bin(((p >> 3) & q) ^ ((q >> 3) & p) & 7).count("1")) & 1


_SYMP = [[symp(p, q) for q in range(64)] for p in range(64)]
# _ORTH[v]: bitmask over w of {w : <v, w> = 0}
_ORTH = [sum(1 << w for w in range(64) if _SYMP[v][w] == 0) for v in range(64)]


def apply_cols(cols, v: int) -> int:
    """Image of label ``v`` under the linear map with column images ``cols[bit]``."""
    out = 0
    k = 0
    while v:
        if v & 1:
            out ^= cols[k]
        v >>= 1
        k += 1
    return out


def is_symplectic(cols) -> bool:
    """``S^T J S = J`` checked on basis pairs."""
    return all(_SYMP[cols[i]][cols[j]] == _SYMP[1 << i][1 << j] for i in range(6) for j in range(6))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_sp62() -> Iterator[tuple[int, ...]]:
    """Stream every element of Sp(6,2) as a tuple of column images (bit 0..5).

    Images of the hyperbolic pairs (bit 5, bit 2), (bit 4, bit 1),
    (bit 3, bit 0) are chosen in turn inside the running symplectic
    complement, giving 63*32*15*8*3*2 = 1,451,520 elements in a fixed order.
    """
    full = (1 << 64) - 1
    pairs = ((5, 2), (4, 1), (3, 0))
    cols = [0] * 6

    def rec(level: int, space: int):
        if level == 3:
            yield tuple(cols)
            return
        ei, fi = pairs[level]
        for e in _bits(space & ~1):
            cols[ei] = e
            for f in _bits(space & ~_ORTH[e]):
                cols[fi] = f
                yield from rec(level + 1, space & _ORTH[e] & _ORTH[f])

    return rec(0, full)


def transvection(v: int) -> tuple[int, ...]:
    """Columns of ``x -> x + <x, v> v``."""
    return tuple((1 << i) ^ (v if _SYMP[1 << i][v] else 0) for i in range(6))


def sp62_generators() -> list[tuple[int, ...]]:
    """Two generators of Sp(6,2): an element of order 15 and the transvection along bit 5.

    That the pair generates the whole group is established by the closure
    count in the test suite.
    """
    return [(49, 44, 23, 41, 48, 7), transvection(0b100000)]


class F2LinearCarrier(Carrier):
    """Invertible linear maps of F2^6 keyed by their 6 column images (as bytes)."""

    name = "matrix"
    limit = DEFAULT_MATRIX_LIMIT

    def identity(self):
        return bytes(1 << i for i in range(6))

    @staticmethod
    def _table(a: bytes) -> bytes:
        t = bytearray(256)
        for v in range(64):
            t[v] = apply_cols(a, v)
        return bytes(t)

    def mul(self, a, b):
        return b.translate(self._table(a))

    def left(self, g):
        t = self._table(g)
        return lambda x: x.translate(t)


def sp62_closure(limit: int | None = None) -> FiniteGroupModel:
    gens = [bytes(g) for g in sp62_generators()]
    return closure(gens, F2LinearCarrier(), limit=limit, name="Sp(6,2)")
