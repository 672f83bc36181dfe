"""Exact constructions of the qubit, Hesse (d=3) and Hoggar (d=8) SICs.

Vectors are kept unnormalized with coordinates in Z[w] or Z[i]; every SIC
identity is checked in cleared-denominator form, so no square roots appear.
Symmetries are detected as permutations of the labels that preserve the
triple products ``<j|k><k|l><l|j>``.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal

import numpy as np

from .exact import (
    OMEGA,
    EisensteinRational,
    GaussianRational,
    conj,
    det,
    inverse,
    matmul,
    matvec,
    norm,
    transpose,
)
from .groups import SEED, FiniteGroupModel, PermCarrier, closure, stabilizer
from .matgroups import apply_cols, build_sp62

# ----------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Fiducial:
    d: int
    coords: tuple
    norm_sq: Fraction

    @classmethod
    def of(cls, coords) -> "Fiducial":
        coords = tuple(coords)
        n = inner(coords, coords)
        n = n.real_part() if hasattr(n, "real_part") else Fraction(n)
        if n <= 0:
            raise ValueError("fiducial must be nonzero")
        return cls(len(coords), coords, n)


@dataclass
class SicSystem:
    d: int
    labels: list
    vectors: dict
    scalar_ring: Literal["eisenstein", "gaussian"]
    norm_sq: Fraction
    _gram: list | None = field(default=None, repr=False)

    def vector(self, i: int) -> tuple:
        return self.vectors[self.labels[i]]

    def gram(self) -> list[list]:
        """Inner products ``<psi_j|psi_k>`` indexed by label position."""
        if self._gram is None:
            vs = [self.vectors[lab] for lab in self.labels]
            n = len(vs)
            g = [[None] * n for _ in range(n)]
            for j in range(n):
                for k in range(j, n):
                    ip = inner(vs[j], vs[k])
                    g[j][k] = ip
                    g[k][j] = conj(ip)
            self._gram = g
        return self._gram


def inner(u, v):
    """``<u|v> = sum conj(u_i) v_i``."""
    it = iter(zip(u, v))
    a, b = next(it)
    s = conj(a) * b
    for a, b in it:
        s = s + conj(a) * b
    return s


def hesse_fiducial() -> Fiducial:
    return Fiducial.of(EisensteinRational(x) for x in (0, 1, -1))


def hoggar_fiducial() -> Fiducial:
    return Fiducial.of([GaussianRational(-1, 2)] + [GaussianRational(1)] * 7)


# ----------------------------------------------------------------------------
# orbits


def wh_qutrit_orbit(f: Fiducial) -> SicSystem:
    """Orbit ``X^a Z^b psi`` for (a, b) in Z3^2; Z = diag(1, w, w^2), X|j> = |j+1>."""
    if f.d != 3:
        raise ValueError("qutrit orbit needs d = 3")
    powers = [OMEGA**k for k in range(3)]
    vectors = {}
    labels = [(a, b) for a in range(3) for b in range(3)]
    for a, b in labels:
        z = [f.coords[j] * powers[(b * j) % 3] for j in range(3)]
        vectors[(a, b)] = tuple(z[(j - a) % 3] for j in range(3))
    return SicSystem(3, labels, vectors, "eisenstein", f.norm_sq)


def pauli_label_action(p: int, v: tuple) -> tuple:
    """Apply ``X^{a1}Z^{b1} (x) X^{a2}Z^{b2} (x) X^{a3}Z^{b3}`` for label ``p = (a|b)`` to ``v``.

    Basis index j has qubit 1 as its most significant bit, matching the bit
    order of ``a = p >> 3`` and ``b = p & 7``.
    """
    a, b = p >> 3, p & 7
    out = [None] * 8
    for j in range(8):
        x = v[j]
        if bin(b & j).count("1") & 1:
            x = -x
        out[j ^ a] = x
    return tuple(out)


def pauli3_orbit(f: Fiducial) -> SicSystem:
    if f.d != 8:
        raise ValueError("three-qubit orbit needs d = 8")
    labels = list(range(64))
    vectors = {p: pauli_label_action(p, f.coords) for p in labels}
    return SicSystem(8, labels, vectors, "gaussian", f.norm_sq)


def qutrit_displace(label: tuple, v: tuple) -> tuple:
    a, b = label
    z = [v[j] * OMEGA ** ((b * j) % 3) for j in range(3)]
    return tuple(z[(j - a) % 3] for j in range(3))


def parallel(u, v) -> bool:
    """Whether ``u`` and ``v`` span the same line (Cauchy-Schwarz equality)."""
    ip = inner(u, v)
    return norm(ip) == _real(inner(u, u)) * _real(inner(v, v))


def _real(x) -> Fraction:
    return x.real_part() if hasattr(x, "real_part") else Fraction(x)


@lru_cache(maxsize=None)
def hesse_system() -> SicSystem:
    return wh_qutrit_orbit(hesse_fiducial())


@lru_cache(maxsize=None)
def hoggar_system() -> SicSystem:
    return pauli3_orbit(hoggar_fiducial())


# ----------------------------------------------------------------------------
# SIC condition


@dataclass
class SicCheck:
    ok: bool
    pairs_checked: int
    overlap_values: set
    diagonal_values: set


def check_sic(s: SicSystem) -> SicCheck:
    """Cleared-denominator SIC identity over all unordered pairs and the diagonal.

    ``|<j|k>|^2`` is symmetric in (j, k), so unordered pairs cover all
    ordered ones.
    """
    n = len(s.labels)
    target = s.norm_sq * s.norm_sq
    vs = [s.vectors[lab] for lab in s.labels]
    ok = n == s.d * s.d
    over, diag = set(), set()
    pairs = 0
    for j in range(n):
        dj = norm(inner(vs[j], vs[j]))
        diag.add(dj)
        ok = ok and dj == target
        for k in range(j + 1, n):
            o = norm(inner(vs[j], vs[k]))
            over.add(o)
            pairs += 1
            if (s.d + 1) * o != target:
                ok = False
    return SicCheck(ok, pairs, over, diag)


def verify_sic(s: SicSystem) -> bool:
    return check_sic(s).ok


# ----------------------------------------------------------------------------
# triple products


class TripleProductTable:
    """``T(p, q, r) = <p|q><q|r><r|p>`` over label positions, with ``T(p, q) = T(0, p, q)``."""

    def __init__(self, s: SicSystem):
        self.system = s
        self.n = len(s.labels)
        self.g = s.gram()
        g = self.g
        self.base = [[g[0][p] * g[p][q] * g[q][0] for q in range(self.n)] for p in range(self.n)]

    def __call__(self, p: int, q: int, r: int | None = None):
        if r is None:
            return self.base[p][q]
        g = self.g
        return g[p][q] * g[q][r] * g[r][p]

    def all_integral(self) -> bool:
        return all(t.is_integral() for row in self.base for t in row)

    def preserves(self, perm, triples, conjugate: bool = False) -> bool:
        for p, q, r in triples:
            t = self(p, q, r)
            if conjugate:
                t = t.conj()
            if self(perm[p], perm[q], perm[r]) != t:
                return False
        return True


def triple_products(s: SicSystem) -> TripleProductTable:
    if not verify_sic(s):
        raise ValueError("triple products requested for a non-SIC")
    return TripleProductTable(s)


@lru_cache(maxsize=None)
def hesse_triples() -> TripleProductTable:
    return triple_products(hesse_system())


@lru_cache(maxsize=None)
def hoggar_triples() -> TripleProductTable:
    return triple_products(hoggar_system())


def random_triples(n: int, count: int, seed: int = SEED) -> list[tuple[int, int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(count)]


# ----------------------------------------------------------------------------
# qubit: Bloch tetrahedron


@dataclass(frozen=True)
class BlochTetrahedron:
    vertices: tuple[tuple[int, int, int], ...] = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))

    def dots(self) -> list[list[int]]:
        return [[sum(a * b for a, b in zip(u, v)) for v in self.vertices] for u in self.vertices]


def qubit_model() -> BlochTetrahedron:
    return BlochTetrahedron()


def realizing_map(t: BlochTetrahedron, images: tuple[int, ...]):
    """The unique linear map sending vertex i to vertex images[i] for i < 3, or None if it misses vertex 3."""
    v = t.vertices
    src = transpose([v[0], v[1], v[2]])
    dst = transpose([v[images[0]], v[images[1]], v[images[2]]])
    m = matmul(dst, inverse(src))
    if matvec(m, v[3]) != [Fraction(x) for x in v[images[3]]]:
        return None
    return m


def bloch_symmetries(admit_reflections: bool = False) -> FiniteGroupModel:
    """Vertex permutations realized by an orthogonal map (rotations only unless reflections admitted)."""
    t = qubit_model()
    keep = []
    for images in itertools.permutations(range(4)):
        m = realizing_map(t, images)
        if m is None:
            continue
        mt = transpose(m)
        if matmul(mt, m) != [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]:
            continue
        d = det(m)
        if d == 1 or (admit_reflections and d == -1):
            keep.append(bytes(images))
    return FiniteGroupModel.from_elements(keep, PermCarrier(4), name="Bloch rotations" if not admit_reflections else "Bloch O(3)")


def qubit_stabilizer(admit_reflections: bool = False) -> FiniteGroupModel:
    return stabilizer(bloch_symmetries(admit_reflections), 0)


# ----------------------------------------------------------------------------
# Hesse symmetries


def _scan_perms(T: TripleProductTable, conjugate: bool) -> list[bytes]:
    """All label permutations preserving (or conjugating) every triple product.

    Exhaustive over S_n by depth-first assignment; a branch is cut as soon
    as a triple among the assigned points disagrees.
    """
    n = T.n
    key = [[[None] * n for _ in range(n)] for _ in range(n)]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                key[p][q][r] = T(p, q, r)
    want = key
    if conjugate:
        want = [[[key[p][q][r].conj() for r in range(n)] for q in range(n)] for p in range(n)]
    found = []
    img = [0] * n
    used = [False] * n

    def rec(k: int):
        if k == n:
            found.append(bytes(img))
            return
        for v in range(n):
            if used[v]:
                continue
            img[k] = v
            ok = True
            for i in range(k + 1):
                pi = img[i]
                row_w, row_k = want[i], key[pi]
                for j in range(k + 1):
                    if row_k[img[j]][v] != row_w[j][k]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                used[v] = True
                rec(k + 1)
                used[v] = False

    rec(0)
    return found


@dataclass
class HesseSymmetries:
    full_group: FiniteGroupModel
    stabilizer0: FiniteGroupModel
    antiunitary: list[bytes]


@lru_cache(maxsize=None)
def hesse_symmetries() -> HesseSymmetries:
    T = hesse_triples()
    unitary = _scan_perms(T, conjugate=False)
    anti = _scan_perms(T, conjugate=True)
    full = FiniteGroupModel.from_elements(unitary, PermCarrier(9), name="Hesse symmetries")
    return HesseSymmetries(full, stabilizer(full, 0), anti)


# ----------------------------------------------------------------------------
# Hoggar symmetries


def _encode(z: GaussianRational) -> int:
    if not z.is_integral():
        raise ValueError("triple product left the Gaussian integers")
    return int(z.re) * 8192 + int(z.im)


def _perms_from_cols(cols: np.ndarray) -> np.ndarray:
    n = cols.shape[0]
    perms = np.zeros((n, 64), dtype=np.uint8)
    for v in range(1, 64):
        low = v & -v
        perms[:, v] = perms[:, v ^ low] ^ cols[:, low.bit_length() - 1]
    return perms


def _chunks(stream: Iterator[tuple], size: int) -> Iterator[np.ndarray]:
    while True:
        block = list(itertools.islice(stream, size))
        if not block:
            return
        yield np.array(block, dtype=np.uint8)


def _filter_chunk(cols: np.ndarray, table: np.ndarray, targets: list[np.ndarray]) -> list[np.ndarray]:
    """For each target table, indices of rows whose label permutation maps ``table`` onto it."""
    perms = _perms_from_cols(cols)
    out = []
    for target in targets:
        alive = np.arange(len(cols))
        for p in range(1, 64):
            pp = perms[alive, p]
            for q in range(1, 64):
                keep = table[pp, perms[alive, q]] == target[p, q]
                alive = alive[keep]
                pp = pp[keep]
                if not alive.size:
                    break
            if not alive.size:
                break
        out.append(alive)
    return out


@dataclass
class HoggarStabilizer:
    unitary_stab: FiniteGroupModel
    unitary_matrices: list[tuple[int, ...]]
    antiunitary_matrices: list[tuple[int, ...]]
    antiunitary_perms: list[bytes]
    candidates_scanned: int

    @property
    def antiunitary_coset_size(self) -> int:
        return len(self.antiunitary_matrices)

    def extended_group(self) -> FiniteGroupModel:
        return FiniteGroupModel.from_elements(
            list(self.unitary_stab.elements) + self.antiunitary_perms, PermCarrier(64), name="Hoggar extended stabilizer"
        )


def hoggar_stabilizer(threads: int = 1, chunk: int = 1 << 16) -> HoggarStabilizer:
    """Scan Sp(6,2) for label maps S with T(0,Sp,Sq) = T(0,p,q) (or its conjugate).

    The stream is cut into fixed chunks and results are merged in chunk
    order, so the output does not depend on ``threads``.
    """
    T = hoggar_triples()
    table = np.array([[_encode(t) for t in row] for row in T.base], dtype=np.int64)
    table_conj = np.array([[_encode(t.conj()) for t in row] for row in T.base], dtype=np.int64)
    targets = [table, table_conj]
    scanned = 0
    unitary, anti = [], []

    def work(cols):
        return cols, _filter_chunk(cols, table, targets)

    def consume(results):
        nonlocal scanned
        for cols, (u_idx, a_idx) in results:
            scanned += len(cols)
            unitary.extend(tuple(int(x) for x in cols[i]) for i in u_idx)
            anti.extend(tuple(int(x) for x in cols[i]) for i in a_idx)

    blocks = _chunks(build_sp62(), chunk)
    if threads <= 1:
        consume(map(work, blocks))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            consume(pool.map(work, blocks))
    to_perm = lambda c: bytes(apply_cols(c, v) for v in range(64))
    group = FiniteGroupModel.from_elements([to_perm(c) for c in unitary], PermCarrier(64), name="Hoggar stabilizer")
    return HoggarStabilizer(group, unitary, anti, [to_perm(c) for c in anti], scanned)


_HOGGAR_CACHE: dict = {}


def cached_hoggar_stabilizer(threads: int = 1) -> HoggarStabilizer:
    """Process-wide memo of :func:`hoggar_stabilizer` (results are thread-count independent)."""
    if "stab" not in _HOGGAR_CACHE:
        _HOGGAR_CACHE["stab"] = hoggar_stabilizer(threads=threads)
    return _HOGGAR_CACHE["stab"]


def translation(a: int) -> bytes:
    return bytes(p ^ a for p in range(64))


def hoggar_full_symmetry(stab: HoggarStabilizer) -> FiniteGroupModel:
    """Label translations together with the unitary stabilizer, as a group on 64 points."""
    gens = [translation(1 << k) for k in range(6)] + list(stab.unitary_stab.generators)
    return closure(gens, PermCarrier(64), name="Hoggar symmetries")


# ----------------------------------------------------------------------------
# twins


def twin_check(s: SicSystem) -> Literal["self_conjugate", "twinned"]:
    """Whether entrywise conjugation maps the projector set onto itself."""
    vs = [s.vectors[lab] for lab in s.labels]
    for v in vs:
        cv = tuple(conj(x) for x in v)
        if not any(parallel(cv, w) for w in vs):
            return "twinned"
    return "self_conjugate"


def twin_check_bloch(t: BlochTetrahedron) -> Literal["self_conjugate", "twinned"]:
    """Complex conjugation of a qubit state flips the y Bloch coordinate."""
    flipped = {(x, -y, z) for x, y, z in t.vertices}
    return "self_conjugate" if flipped == set(t.vertices) else "twinned"
