"""Root-system fingerprints for the unit sets (A2, D4, E8).

A :class:`VectorFamily` is a list of rational coordinate vectors plus the
bilinear form of the coordinate basis.  For Eisenstein integers the basis
{1, w} is not orthonormal, and the form is computed algebraically as
``Re(x * conj(y))`` on basis elements, so no irrational coordinates appear.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Literal, Sequence

import numpy as np

from .exact import EisensteinRational, Octonion, Quaternion, det, integer_basis


@dataclass
class VectorFamily:
    vectors: list[tuple[Fraction, ...]]
    form: list[list[Fraction]]

    @property
    def dim(self) -> int:
        return len(self.form)

    def inner(self, u, v) -> Fraction:
        f = self.form
        return sum((u[i] * f[i][j] * v[j] for i in range(self.dim) for j in range(self.dim) if u[i] and v[j]), Fraction(0))

    def integer_data(self) -> tuple[np.ndarray, np.ndarray, int, int]:
        """(X, F, L, M) with vectors = X / L and form = F / M, all integers."""
        L = lcm(*(c.denominator for v in self.vectors for c in v))
        M = lcm(*(c.denominator for row in self.form for c in row))
        X = np.array([[int(c * L) for c in v] for v in self.vectors], dtype=np.int64)
        F = np.array([[int(c * M) for c in row] for row in self.form], dtype=np.int64)
        return X, F, L, M


def _algebra_form(basis) -> list[list[Fraction]]:
    return [[(a * b.conj()).real_part() for b in basis] for a in basis]


def family_from_elements(elements: Sequence) -> VectorFamily:
    """Vector family of ring elements with inner product ``Re(x * conj(y))``."""
    first = elements[0]
    if isinstance(first, EisensteinRational):
        basis = [EisensteinRational(1), EisensteinRational(0, 1)]
        vecs = [(z.a, z.b) for z in elements]
    elif isinstance(first, (Quaternion, Octonion)):
        dim = first.DIM
        mk = type(first)
        basis = [mk(*[int(i == k) for i in range(dim)]) for k in range(dim)]
        vecs = [tuple(x.coords) for x in elements]
    else:
        raise TypeError(f"no inner product for {type(first).__name__}")
    return VectorFamily(vecs, _algebra_form(basis))


def standard_family(dim: int) -> VectorFamily:
    eye = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return VectorFamily([tuple(r) for r in eye], eye)


def gram(v: VectorFamily) -> list[list[Fraction]]:
    X, F, L, M = v.integer_data()
    G = X @ F @ X.T
    scale = Fraction(1, L * L * M)
    return [[scale * int(x) for x in row] for row in G]


# ----------------------------------------------------------------------------
# identification

Label = Literal["A2", "D4", "E8", "unknown"]

# roots, rank, and per-root counts of 2<a,b>/<a,a> = (2, -2, 1, -1, 0)
FINGERPRINTS: dict[str, tuple[int, int, tuple[int, int, int, int, int]]] = {
    "A2": (6, 2, (1, 1, 2, 2, 0)),
    "D4": (24, 4, (1, 1, 8, 8, 6)),
    "E8": (240, 8, (1, 1, 56, 56, 126)),
}


@dataclass
class RootSystemID:
    label: Label
    evidence: dict = field(default_factory=dict)


def _symmetrized(v: VectorFamily) -> tuple[VectorFamily, bool]:
    seen = list(dict.fromkeys(v.vectors))
    have = set(seen)
    added = False
    for x in list(seen):
        nx = tuple(-c for c in x)
        if nx not in have:
            have.add(nx)
            seen.append(nx)
            added = True
    return VectorFamily(sorted(seen), v.form), added


def reflection_closed(v: VectorFamily) -> bool:
    """Whether ``b - 2<b,a>/<a,a> a`` stays in the family for every pair."""
    X, F, _, _ = v.integer_data()
    G = X @ F @ X.T
    members = {tuple(r) for r in X.tolist()}
    for a in range(len(X)):
        num = 2 * G[:, a:a + 1] * X[a]       # (n, dim)
        d = G[a, a]
        if (num % d).any():
            return False
        R = X - num // d
        if any(tuple(r) not in members for r in R.tolist()):
            return False
    return True


def lattice_basis(v: VectorFamily) -> list[tuple[Fraction, ...]]:
    """A Z-basis of the lattice generated by the family."""
    X, _, L, _ = v.integer_data()
    return [tuple(Fraction(int(c), L) for c in b) for b in integer_basis(X.tolist())]


@dataclass
class UnimodularCheck:
    even: bool
    determinant: Fraction
    rank: int

    def __bool__(self):
        return self.even and self.determinant == 1


def root_scaled(v: VectorFamily) -> VectorFamily:
    """The same vectors under a form rescaled so the minimal squared norm is 2."""
    scale = 2 / min(v.inner(x, x) for x in v.vectors)
    return VectorFamily(v.vectors, [[scale * c for c in row] for row in v.form])


def even_unimodular_check(v: VectorFamily) -> UnimodularCheck:
    """Evenness and determinant of the lattice spanned by ``v``, under its form as given."""
    basis = lattice_basis(v)
    G = [[v.inner(a, b) for b in basis] for a in basis]
    integral = all(x.denominator == 1 for row in G for x in row)
    even = integral and all(G[i][i] % 2 == 0 for i in range(len(G)))
    return UnimodularCheck(even=even, determinant=det(G), rank=len(basis))


def is_even_unimodular(v: VectorFamily) -> bool:
    check = even_unimodular_check(v)
    return bool(check) and check.rank == v.dim


def identify_root_system(v: VectorFamily) -> RootSystemID:
    fam, added = _symmetrized(v)
    X, F, _, _ = fam.integer_data()
    G = X @ F @ X.T
    diag = np.diag(G)
    ev: dict = {"roots": len(fam.vectors), "negation_added": added}
    if (diag != diag[0]).any():
        ev["mixed_norms"] = True
        return RootSystemID("unknown", ev)
    ev["rank"] = len(integer_basis(G.tolist()))
    two = 2 * G
    if (two % diag[0]).any():
        ev["simply_laced"] = False
        return RootSystemID("unknown", ev)
    ratios = two // diag[0]
    profiles = {tuple(int((row == k).sum()) for k in (2, -2, 1, -1, 0)) for row in ratios}
    ev["ip_profile"] = sorted(profiles)
    ev["ip_multiset"] = dict(sorted(Counter(ratios.ravel().tolist()).items()))
    ev["simply_laced"] = bool(np.isin(ratios, (-2, -1, 0, 1, 2)).all())
    ev["reflection_closed"] = reflection_closed(fam)
    for label, (count, rk, profile) in FINGERPRINTS.items():
        if (ev["roots"], ev["rank"]) != (count, rk):
            continue
        ok = ev["simply_laced"] and ev["reflection_closed"] and profiles == {profile}
        if label == "E8":
            check = even_unimodular_check(root_scaled(fam))
            ev["even"] = check.even
            ev["determinant"] = str(check.determinant)
            ok = ok and bool(check)
        if ok:
            return RootSystemID(label, ev)
    return RootSystemID("unknown", ev)
