"""Exact scalar and hypercomplex arithmetic.

Every number in the package is built from :class:`fractions.Fraction`, so no
floating point ever enters a computation.  The scalar families are

* :class:`GaussianRational`   ``re + im*i``
* :class:`EisensteinRational` ``a + b*w`` with ``w**2 = -1 - w``

and the hypercomplex families are :class:`Quaternion` and :class:`Octonion`.
All values are immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


def Q(x: RationalLike) -> Fraction:
    """Coerce an int/Fraction (or "p/q" string) to a Fraction."""
    return x if type(x) is Fraction else Fraction(x)


class ScalarMixin:
    """Shared arithmetic glue: integer/Fraction coercion and division."""

    __slots__ = ()

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return -self + other

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError(f"division by zero {type(self).__name__}")
        return (self * other.conj()).scale(1 / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (self._coerce(1) / self) ** (-k)
        result = self._coerce(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


@dataclass(frozen=True, slots=True)
class GaussianRational(ScalarMixin):
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Q(self.re))
        object.__setattr__(self, "im", Q(self.im))

    @classmethod
    def _coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Q(x), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(("G", self.re, self.im))

    def scale(self, r: RationalLike) -> "GaussianRational":
        return GaussianRational(self.re * r, self.im * r)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def real_part(self) -> Fraction:
        return self.re

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


@dataclass(frozen=True, slots=True)
class EisensteinRational(ScalarMixin):
    """``a + b*w`` where ``w = exp(2*pi*i/3)``, stored in the basis ``{1, w}``."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))

    @classmethod
    def _coerce(cls, x) -> "EisensteinRational":
        if isinstance(x, EisensteinRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Q(x), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinRational(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinRational(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return EisensteinRational(-self.a, -self.b)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2,  w^2 = -1 - w
        a, b, c, d = self.a, self.b, other.a, other.b
        bd = b * d
        return EisensteinRational(a * c - bd, a * d + b * c - bd)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash(("E", self.a, self.b))

    def scale(self, r: RationalLike) -> "EisensteinRational":
        return EisensteinRational(self.a * r, self.b * r)

    def conj(self) -> "EisensteinRational":
        # conj(w) = w^2 = -1 - w
        return EisensteinRational(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def real_part(self) -> Fraction:
        return self.a - self.b / 2

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __repr__(self):
        return f"({self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}w)"


OMEGA = EisensteinRational(0, 1)
I_UNIT = GaussianRational(0, 1)

ExactScalar = Union[Fraction, GaussianRational, EisensteinRational]


def conj(x):
    """Complex conjugate of any exact scalar (identity on Fractions and ints)."""
    return x if isinstance(x, (int, Fraction)) else x.conj()


def norm(x) -> Fraction:
    """Squared absolute value of any exact scalar, as a Fraction."""
    if isinstance(x, (int, Fraction)):
        return Q(x) * Q(x)
    return x.norm()


# ----------------------------------------------------------------------------
# Hypercomplex elements


class _VectorAlgebra:
    """Coordinate-vector behaviour shared by quaternions and octonions."""

    __slots__ = ()
    DIM: int

    def __add__(self, other):
        return type(self)(*(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return type(self)(*(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return type(self)(*(-x for x in self.coords))

    def scale(self, r: RationalLike):
        return type(self)(*(x * r for x in self.coords))

    def conj(self):
        c = self.coords
        return type(self)(c[0], *(-x for x in c[1:]))

    def norm(self) -> Fraction:
        return sum((x * x for x in self.coords), Fraction(0))

    def real_part(self) -> Fraction:
        return self.coords[0]

    def inner(self, other) -> Fraction:
        """Re(x * conj(y)), the Euclidean inner product of coordinates."""
        return sum((x * y for x, y in zip(self.coords, other.coords)), Fraction(0))

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.conj().scale(1 / n)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(1 / Q(other))
        return self * other.inverse()

    def __eq__(self, other):
        return type(other) is type(self) and self.coords == other.coords

    def __hash__(self):
        return hash((type(self).__name__, self.coords))

    def doubled(self) -> tuple[int, ...]:
        """Coordinates times 2 as ints; raises if not half-integral."""
        out = []
        for x in self.coords:
            y = 2 * x
            if y.denominator != 1:
                raise ValueError(f"{self!r} is not half-integral")
            out.append(int(y))
        return tuple(out)

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(str(c) for c in self.coords)})"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Quaternion(_VectorAlgebra):
    w: Fraction
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    DIM = 4

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, Q(getattr(self, name)))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.w, self.x, self.y, self.z)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )


# Oriented Fano triples (a, b, c): e_a e_b = e_c, cyclically; e_a^2 = -1.
FANO_TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
)


def _build_octonion_table() -> tuple[tuple[tuple[int, int], ...], ...]:
    """OCT_TABLE[i][j] = (sign, k) with e_i e_j = sign * e_k."""
    table = [[(0, 0)] * 8 for _ in range(8)]
    for i in range(8):
        table[0][i] = (1, i)
        table[i][0] = (1, i)
    for i in range(1, 8):
        table[i][i] = (-1, 0)
    for a, b, c in FANO_TRIPLES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[x][y] = (1, z)
            table[y][x] = (-1, z)
    return tuple(tuple(row) for row in table)


OCT_TABLE = _build_octonion_table()

# Flattened (i, j, sign, k) list of structure constants, used by all products.
_OCT_TERMS = tuple((i, j, s, k) for i in range(8) for j in range(8) for s, k in [OCT_TABLE[i][j]])


def oct_mul_coords(x: Sequence, y: Sequence) -> list:
    """Bilinear octonion product on raw coordinate sequences (ints or Fractions)."""
    out = [0] * 8
    for i, j, s, k in _OCT_TERMS:
        xi = x[i]
        if xi:
            yj = y[j]
            if yj:
                out[k] += xi * yj if s > 0 else -(xi * yj)
    return out


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Octonion(_VectorAlgebra):
    coords: tuple[Fraction, ...]

    DIM = 8

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        if len(coords) != 8:
            raise ValueError(f"octonion needs 8 coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", tuple(Q(c) for c in coords))

    @classmethod
    def basis(cls, k: int, coeff: RationalLike = 1) -> "Octonion":
        c = [0] * 8
        c[k] = coeff
        return cls(*c)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return Octonion(*oct_mul_coords(self.coords, other.coords))


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return p * q


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    return x * y


# ----------------------------------------------------------------------------
# Small exact linear algebra over Q


def _as_matrix(rows: Iterable[Iterable[RationalLike]]) -> list[list[Fraction]]:
    return [[Q(v) for v in row] for row in rows]


def rank(rows: Iterable[Iterable[RationalLike]]) -> int:
    m = _as_matrix(rows)
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                f = f / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        r += 1
    return r


def det(rows: Iterable[Iterable[RationalLike]]) -> Fraction:
    m = _as_matrix(rows)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        pc = m[c]
        d *= pc[c]
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                f = f / pc[c]
                m[i] = [a - f * b for a, b in zip(m[i], pc)]
    return d


def inverse(rows: Iterable[Iterable[RationalLike]]) -> list[list[Fraction]]:
    m = _as_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_basis(vectors: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """A Z-basis (echelon form) of the lattice spanned by integer vectors.

    Each vector is folded into the running echelon basis with extended-gcd
    row operations, so the result spans exactly the same Z-module.
    """
    pivots: dict[int, list[int]] = {}
    dim = None
    for v in vectors:
        v = [int(x) for x in v]
        dim = len(v) if dim is None else dim
        for col in range(dim):
            if v[col] == 0:
                continue
            p = pivots.get(col)
            if p is None:
                if v[col] < 0:
                    v = [-x for x in v]
                pivots[col] = v
                break
            g, x, y = _egcd(p[col], v[col])
            a, b = p[col] // g, v[col] // g
            newp = [x * pi + y * vi for pi, vi in zip(p, v)]
            v = [a * vi - b * pi for pi, vi in zip(p, v)]
            if newp[col] < 0:
                newp = [-t for t in newp]
            pivots[col] = newp
        # a fully reduced v is zero and contributes nothing
    return [tuple(pivots[c]) for c in sorted(pivots)]
