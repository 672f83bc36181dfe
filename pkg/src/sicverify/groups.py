"""Finite groups materialized from generators.

A :class:`FiniteGroupModel` is a fully enumerated group: a list of hashable
element keys plus a *carrier* that knows how to multiply and invert keys.
Everything here works for any carrier, but permutations (stored as ``bytes``
of point images, composed with :meth:`bytes.translate`) are the fast path,
and every large group in the package is turned into a permutation group
before heavy structural work is done on it.

Conventions: ``mul(a, b)`` is the group product ``a*b``; for permutations it
is the composite ``i -> a[b[i]]`` (apply ``b`` first).
"""
from __future__ import annotations

import random
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Literal, Sequence

Key = Hashable

DEFAULT_TABLE_LIMIT = 10**5
DEFAULT_MATRIX_LIMIT = 2 * 10**7
DEFAULT_PERM_LIMIT = 2 * 10**7
# Seed for every deterministic pseudo-random choice made by the engine.
SEED = 20160617


class SizeLimitError(RuntimeError):
    """Closure grew beyond the carrier's configured bound."""


class InvalidInput(ValueError):
    pass


# ----------------------------------------------------------------------------
# carriers


class Carrier:
    """Composition law for a family of hashable element keys."""

    name = "generic"
    limit = DEFAULT_TABLE_LIMIT

    def mul(self, a: Key, b: Key) -> Key:
        raise NotImplementedError

    def identity(self) -> Key:
        raise NotImplementedError

    def inv(self, a: Key) -> Key:
        # generic fallback: a^(ord(a)-1)
        e = self.identity()
        prev, x = e, a
        while x != e:
            prev, x = x, self.mul(x, a)
        return prev

    def left(self, g: Key) -> Callable[[Key], Key]:
        """Left multiplication ``x -> g*x`` as a callable."""
        mul = self.mul
        return lambda x: mul(g, x)


class GenericCarrier(Carrier):
    """Wraps a plain ``compose`` function and an identity key."""

    def __init__(self, compose: Callable[[Key, Key], Key], identity: Key, name="generic", limit=DEFAULT_TABLE_LIMIT, inverse=None):
        self._compose = compose
        self._identity = identity
        self._inverse = inverse
        self.name = name
        self.limit = limit

    def mul(self, a, b):
        return self._compose(a, b)

    def identity(self):
        return self._identity

    def inv(self, a):
        if self._inverse is not None:
            return self._inverse(a)
        return super().inv(a)


class TableCarrier(Carrier):
    """Elements are indices ``0..n-1`` into a Cayley table."""

    name = "table"

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, limit=DEFAULT_TABLE_LIMIT):
        if len(table) > limit:
            raise SizeLimitError(f"table of order {len(table)} exceeds bound {limit}")
        self.table = [list(row) for row in table]
        self._identity = identity
        self.limit = limit

    def mul(self, a, b):
        return self.table[a][b]

    def identity(self):
        return self._identity


_TAILS = [bytes(range(n, 256)) for n in range(257)]


class PermCarrier(Carrier):
    """Permutations of ``0..n-1`` (n <= 256) stored as ``bytes`` of images."""

    name = "perm"
    limit = DEFAULT_PERM_LIMIT

    def __init__(self, n: int):
        if not 0 < n <= 256:
            raise InvalidInput("permutation degree must be in 1..256")
        self.n = n
        self._tail = _TAILS[n]
        self._id = bytes(range(n))

    def mul(self, a, b):
        return b.translate(a + self._tail)

    def identity(self):
        return self._id

    def inv(self, a):
        out = bytearray(self.n)
        for i, j in enumerate(a):
            out[j] = i
        return bytes(out)

    def left(self, g):
        t = g + self._tail
        return lambda x: x.translate(t)


def perm(images: Iterable[int]) -> bytes:
    p = bytes(images)
    if sorted(p) != list(range(len(p))):
        raise InvalidInput(f"not a permutation: {list(p)}")
    return p


def perm_from_cycles(n: int, *cycles: Sequence[int]) -> bytes:
    img = list(range(n))
    for cyc in cycles:
        for i, a in enumerate(cyc):
            img[a] = cyc[(i + 1) % len(cyc)]
    return perm(img)


# ----------------------------------------------------------------------------
# the group model


class FiniteGroupModel:
    """A materialized finite group.

    ``elements[0]`` is always the identity.  ``index`` maps keys to their
    position, which doubles as a hash-set for membership tests.
    """

    def __init__(self, elements: list, carrier: Carrier, generators: Sequence[Key], name: str = ""):
        self.elements = elements
        self.index = {x: i for i, x in enumerate(elements)}
        self.carrier = carrier
        self.generators = list(generators)
        self.identity = carrier.identity()
        self.name = name
        self._orders: list[int] | None = None
        self._classes: list[list[int]] | None = None
        if elements[0] != self.identity:
            raise InvalidInput("first element must be the identity")

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"<FiniteGroupModel {self.name or self.carrier.name} order={self.order}>"

    def mul(self, a, b):
        return self.carrier.mul(a, b)

    def inv(self, a):
        return self.carrier.inv(a)

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.carrier.mul(self.carrier.mul(g, x), self.carrier.inv(g))

    def element_order(self, x) -> int:
        e, y, k = self.identity, x, 1
        while y != e:
            y = self.carrier.mul(y, x)
            k += 1
        return k

    def orders(self) -> list[int]:
        """Element orders, aligned with ``elements``."""
        if self._orders is None:
            self._orders = [self.element_order(x) for x in self.elements]
        return self._orders

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    @classmethod
    def from_elements(cls, elements: Iterable[Key], carrier: Carrier, name: str = "", generators=None) -> "FiniteGroupModel":
        """Wrap an already-enumerated element set, finding a generating set if none is given.

        The set is checked to be closed under the chosen generators; that
        together with the count makes it a group.
        """
        elements = list(elements)
        ident = carrier.identity()
        if ident not in elements:
            raise InvalidInput("element set lacks the identity")
        elements.remove(ident)
        elements.insert(0, ident)
        target = set(elements)
        if len(target) != len(elements):
            raise InvalidInput("duplicate elements")
        if generators is None:
            generators = _find_generators(elements, carrier)
        grp = closure(generators, carrier, name=name)
        if set(grp.elements) != target:
            raise InvalidInput("element set is not the group generated by its generators")
        out = cls(elements, carrier, grp.generators, name=name)
        return out


def _find_generators(elements: list, carrier: Carrier) -> list:
    """Greedy generating set drawn in a seeded pseudo-random order."""
    order = list(range(1, len(elements)))
    random.Random(SEED).shuffle(order)
    gens: list = []
    seen = {elements[0]: 0}
    queue: list = [elements[0]]
    for i in order:
        if len(seen) == len(elements):
            break
        x = elements[i]
        if x in seen:
            continue
        gens.append(x)
        _extend(seen, queue, gens, carrier, carrier.limit)
    return gens


def _extend(seen: dict, elements: list, gens: list, carrier: Carrier, limit: int, stop_at: int | None = None) -> None:
    """Grow ``elements`` (closed under ``gens[:-1]``) to be closed under all of ``gens``.

    Old elements only need the newest generator applied; newly found
    elements get every generator.
    """
    lefts = [carrier.left(g) for g in gens]
    newest = lefts[-1]
    old_count = len(elements)
    queue = deque()
    for x in elements[:old_count]:
        y = newest(x)
        if y not in seen:
            seen[y] = len(elements)
            elements.append(y)
            queue.append(y)
    while queue:
        if stop_at is not None and len(elements) >= stop_at:
            return
        x = queue.popleft()
        for lf in lefts:
            y = lf(x)
            if y not in seen:
                if len(elements) >= limit:
                    raise SizeLimitError(f"closure exceeded bound {limit}")
                seen[y] = len(elements)
                elements.append(y)
                queue.append(y)


def closure(generators: Sequence[Key], carrier: Carrier, limit: int | None = None, name: str = "") -> FiniteGroupModel:
    """Materialize the group generated by ``generators``.

    Breadth-first over left multiplication by generators, so the enumeration
    order depends only on the generator order.
    """
    limit = carrier.limit if limit is None else limit
    ident = carrier.identity()
    elements = [ident]
    seen = {ident: 0}
    gens: list = []
    for g in generators:
        gens.append(g)
        if g in seen and len(gens) > 1:
            continue
        _extend(seen, elements, gens, carrier, limit)
    grp = FiniteGroupModel.__new__(FiniteGroupModel)
    grp.elements = elements
    grp.index = seen
    grp.carrier = carrier
    grp.generators = list(generators)
    grp.identity = ident
    grp.name = name
    grp._orders = None
    grp._classes = None
    return grp


def subgroup(G: FiniteGroupModel, generators: Sequence[Key], name: str = "", stop_at: int | None = None) -> FiniteGroupModel:
    """Subgroup of ``G`` generated by ``generators`` (optionally stopping once ``stop_at`` elements exist)."""
    for g in generators:
        if g not in G:
            raise InvalidInput("generator outside the ambient group")
    if stop_at is None:
        return closure(generators, G.carrier, limit=G.order, name=name)
    ident = G.identity
    elements, seen, gens = [ident], {ident: 0}, []
    for g in generators:
        gens.append(g)
        _extend(seen, elements, gens, G.carrier, G.order, stop_at=stop_at)
        if len(elements) >= stop_at:
            break
    grp = FiniteGroupModel.__new__(FiniteGroupModel)
    grp.__dict__.update(elements=elements, index=seen, carrier=G.carrier, generators=list(generators),
                        identity=ident, name=name, _orders=None, _classes=None)
    return grp


# ----------------------------------------------------------------------------
# structure


def conjugacy_classes(G: FiniteGroupModel) -> list[list[Key]]:
    """Partition of ``G`` into conjugacy classes, each listed in discovery order.

    Classes are orbits of the conjugation action, which is generated by
    conjugation with the generators.
    """
    if G._classes is None:
        conjugators = [(G.carrier.left(g), G.carrier.inv(g)) for g in G.generators]
        mul = G.carrier.mul
        label = [-1] * G.order
        classes: list[list[int]] = []
        for i, x in enumerate(G.elements):
            if label[i] >= 0:
                continue
            c = len(classes)
            label[i] = c
            orbit = [i]
            queue = [x]
            while queue:
                y = queue.pop()
                for lf, ginv in conjugators:
                    z = mul(lf(y), ginv)
                    j = G.index[z]
                    if label[j] < 0:
                        label[j] = c
                        orbit.append(j)
                        queue.append(z)
            classes.append(sorted(orbit))
        G._classes = classes
    return [[G.elements[i] for i in cls] for cls in G._classes]


def class_sizes(G: FiniteGroupModel) -> list[int]:
    conjugacy_classes(G)
    return sorted(len(c) for c in G._classes)


def center(G: FiniteGroupModel) -> FiniteGroupModel:
    mul = G.carrier.mul
    central = [x for x in G.elements if all(mul(x, g) == mul(g, x) for g in G.generators)]
    return FiniteGroupModel.from_elements(central, G.carrier, name=f"Z({G.name})")


def normal_closure(G: FiniteGroupModel, S: Sequence[Key], stop_at: int | None = None) -> FiniteGroupModel:
    """Smallest normal subgroup of ``G`` containing ``S``.

    With ``stop_at`` the computation may return early once the subgroup has
    at least that many elements (used by the simplicity test).
    """
    gens = [s for s in S if s != G.identity] or [G.identity]
    H = subgroup(G, gens)
    changed = True
    while changed:
        changed = False
        if stop_at is not None and H.order >= stop_at:
            break
        for g in G.generators:
            for h in list(H.generators):
                c = G.conj(g, h)
                if c not in H:
                    H.generators.append(c)
                    _extend(H.index, H.elements, H.generators, G.carrier, G.order)
                    changed = True
    H._orders = None
    H._classes = None
    return H


def commutator(G: FiniteGroupModel, a, b):
    inv = G.carrier.inv
    mul = G.carrier.mul
    return mul(mul(inv(a), inv(b)), mul(a, b))


def derived_subgroup(G: FiniteGroupModel) -> FiniteGroupModel:
    gs = G.generators
    comms = [commutator(G, a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
    H = normal_closure(G, comms)
    H.name = f"[{G.name},{G.name}]"
    return H


def is_normal(G: FiniteGroupModel, N: FiniteGroupModel) -> bool:
    return all(x in G for x in N.generators) and all(G.conj(g, n) in N for g in G.generators for n in N.generators)


class CosetCarrier(Carrier):
    """Cosets ``xN`` represented by their earliest member in ``G.elements``."""

    name = "coset"

    def __init__(self, G: FiniteGroupModel, rep: dict):
        self.G = G
        self.rep = rep
        self.limit = G.order

    def mul(self, a, b):
        return self.rep[self.G.carrier.mul(a, b)]

    def identity(self):
        return self.G.identity

    def inv(self, a):
        return self.rep[self.G.carrier.inv(a)]


def quotient(G: FiniteGroupModel, N: FiniteGroupModel) -> FiniteGroupModel:
    """``G/N`` with cosets as elements; raises :class:`InvalidInput` if ``N`` is not normal."""
    if not is_normal(G, N):
        raise InvalidInput("quotient by a non-normal subgroup")
    mul = G.carrier.mul
    rep: dict = {}
    reps = []
    for x in G.elements:
        if x in rep:
            continue
        reps.append(x)
        for n in N.elements:
            rep[mul(x, n)] = x
    carrier = CosetCarrier(G, rep)
    gens = [rep[g] for g in G.generators]
    Q = FiniteGroupModel(reps, carrier, gens, name=f"{G.name}/{N.name}")
    return Q


def is_simple(G: FiniteGroupModel) -> bool:
    if G.order <= 1:
        raise InvalidInput("trivial group")
    for cls in conjugacy_classes(G):
        x = cls[0]
        if x == G.identity:
            continue
        if normal_closure(G, [x], stop_at=G.order).order < G.order:
            return False
    return True


def is_cyclic(G: FiniteGroupModel) -> bool:
    return G.order in G.orders()


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    element_order_histogram: tuple[tuple[int, int], ...]
    conjugacy_class_sizes: tuple[int, ...]
    abelianization_order: int


def fingerprint(G: FiniteGroupModel) -> GroupFingerprint:
    hist = tuple(sorted(Counter(G.orders()).items()))
    return GroupFingerprint(
        order=G.order,
        element_order_histogram=hist,
        conjugacy_class_sizes=tuple(class_sizes(G)),
        abelianization_order=G.order // derived_subgroup(G).order,
    )


# ----------------------------------------------------------------------------
# permutation actions

Transitivity = Literal["intransitive", "transitive", "doubly_transitive"]


def point_orbit(gens: Sequence[bytes], point: int) -> set[int]:
    orbit = {point}
    queue = [point]
    while queue:
        p = queue.pop()
        for g in gens:
            q = g[p]
            if q not in orbit:
                orbit.add(q)
                queue.append(q)
    return orbit


def pair_orbit_size(G: FiniteGroupModel, pair: tuple[int, int] = (0, 1)) -> int:
    orbit = {pair}
    queue = [pair]
    gens = G.generators
    while queue:
        a, b = queue.pop()
        for g in gens:
            q = (g[a], g[b])
            if q not in orbit:
                orbit.add(q)
                queue.append(q)
    return len(orbit)


def transitivity(G: FiniteGroupModel, n: int | None = None) -> Transitivity:
    if not isinstance(G.carrier, PermCarrier):
        raise InvalidInput("transitivity needs a permutation carrier")
    n = G.carrier.n if n is None else n
    if len(point_orbit(G.generators, 0)) < n:
        return "intransitive"
    if n >= 2 and pair_orbit_size(G) == n * (n - 1):
        return "doubly_transitive"
    return "transitive"


def stabilizer(G: FiniteGroupModel, point: int) -> FiniteGroupModel:
    """Point stabilizer of a permutation group, by filtering the element list."""
    fixed = [g for g in G.elements if g[point] == point]
    return FiniteGroupModel.from_elements(fixed, G.carrier, name=f"{G.name}_{point}")


def permutation_image(G: FiniteGroupModel, points: Sequence[Key], act: Callable[[Key, Key], Key], name: str = "") -> FiniteGroupModel:
    """Image of ``G`` acting on ``points`` via ``act(g, point)``, as a permutation group."""
    where = {p: i for i, p in enumerate(points)}
    carrier = PermCarrier(len(points))
    gens = [bytes(where[act(g, p)] for p in points) for g in G.generators]
    return closure(gens, carrier, name=name)


# ----------------------------------------------------------------------------
# isomorphism


@dataclass
class IsomorphismResult:
    status: Literal["isomorphic", "not_isomorphic", "inconclusive"]
    generators: list = field(default_factory=list)
    images: list = field(default_factory=list)
    reason: str = ""
    candidates_tried: int = 0
    mapping: dict | None = None

    def __bool__(self):
        return self.status == "isomorphic"


def _generating_tuple(G: FiniteGroupModel) -> list:
    """A generating set of at most two elements with rare element orders, if one exists.

    The first element is taken as a conjugacy-class representative (no loss of
    generality), the second ranges over everything, both in order of how rare
    their element order is.
    """
    orders = G.orders()
    hist = Counter(orders)
    conjugacy_classes(G)
    reps = sorted((cls[0] for cls in G._classes), key=lambda i: (hist[orders[i]], orders[i], i))
    if G.order == 1:
        return [G.identity]
    for i in reps:
        if orders[i] == G.order:
            return [G.elements[i]]
    by_rarity = sorted(range(1, G.order), key=lambda i: (hist[orders[i]], orders[i], i))
    best = None
    tries = 0
    for i in reps:
        if orders[i] == 1:
            continue
        for j in by_rarity:
            if best is not None and hist[orders[i]] * hist[orders[j]] >= best[0]:
                break
            tries += 1
            if subgroup(G, [G.elements[i], G.elements[j]], stop_at=G.order).order == G.order:
                best = (hist[orders[i]] * hist[orders[j]], i, j)
                break
            if tries > 2000:
                break
    if best is None:
        return list(G.generators)
    return [G.elements[best[1]], G.elements[best[2]]]


def _extend_map(G: FiniteGroupModel, H: FiniteGroupModel, gens: Sequence, imgs: Sequence) -> dict | None:
    """Breadth-first extension of ``gens -> imgs`` to all of ``G``; ``None`` on any conflict."""
    phi = {G.identity: H.identity}
    used = {H.identity}
    pairs = [(G.carrier.left(g), H.carrier.left(h)) for g, h in zip(gens, imgs)]
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for lg, lh in pairs:
            y = lg(x)
            fy = lh(fx)
            old = phi.get(y)
            if old is None:
                if fy in used:
                    return None
                phi[y] = fy
                used.add(fy)
                queue.append(y)
            elif old != fy:
                return None
    if len(phi) != G.order:
        return None
    return phi


def isomorphic(G: FiniteGroupModel, H: FiniteGroupModel, budget: int = 200_000, keep_mapping: bool = False,
               deadline: float | None = None) -> IsomorphismResult:
    """Search for an isomorphism ``G -> H``.

    Fingerprints are compared first; a mismatch is a proof of
    non-isomorphism.  Otherwise generator images are searched and every
    candidate is checked by extending it along the Cayley graph, which
    verifies ``phi(s*x) = phi(s)*phi(x)`` for every generator ``s`` and
    every ``x`` and hence the homomorphism property.  ``budget`` caps the
    number of full extensions attempted; ``deadline`` (a
    :func:`time.monotonic` value) bounds the wall-clock time.  Running out
    of either gives ``"inconclusive"``, never ``"not_isomorphic"``.
    """
    fG, fH = fingerprint(G), fingerprint(H)
    if fG != fH:
        diff = [f for f in ("order", "element_order_histogram", "conjugacy_class_sizes", "abelianization_order")
                if getattr(fG, f) != getattr(fH, f)]
        return IsomorphismResult("not_isomorphic", reason=f"fingerprints differ: {', '.join(diff)}")

    gens = _generating_tuple(G)
    conjugacy_classes(G)
    conjugacy_classes(H)
    g_class_size = {}
    for cls in G._classes:
        for i in cls:
            g_class_size[i] = len(cls)
    h_class_size = {}
    for cls in H._classes:
        for i in cls:
            h_class_size[i] = len(cls)
    sig = [(G.element_order(g), g_class_size[G.index[g]]) for g in gens]
    h_orders = H.orders()

    def matching(k):
        return [H.elements[i] for i in range(H.order) if (h_orders[i], h_class_size[i]) == sig[k]]

    first = [H.elements[cls[0]] for cls in H._classes if (h_orders[cls[0]], len(cls)) == sig[0]]
    tried = 0
    if len(gens) == 1:
        for h in first:
            tried += 1
            phi = _extend_map(G, H, gens, [h])
            if phi is not None:
                return IsomorphismResult("isomorphic", gens, [h], candidates_tried=tried, mapping=phi if keep_mapping else None)
        return IsomorphismResult("not_isomorphic", gens, reason="no generator image extends", candidates_tried=tried)
    if len(gens) > 2:
        return _isomorphic_general(G, H, gens, matching, budget, keep_mapping)

    a, b = gens
    mulG, mulH = G.mul, H.mul
    words = lambda x, y: (mulG(x, y), mulG(x, mulG(y, y)), mulG(mulG(x, y), mulG(x, y)))
    word_orders = [G.element_order(w) for w in words(a, b)]
    second = matching(1)
    for h1 in first:
        for h2 in second:
            ab = mulH(h1, h2)
            if H.element_order(ab) != word_orders[0]:
                continue
            if H.element_order(mulH(h1, mulH(h2, h2))) != word_orders[1]:
                continue
            if H.element_order(mulH(ab, ab)) != word_orders[2]:
                continue
            tried += 1
            if tried > budget or (deadline is not None and time.monotonic() > deadline):
                return IsomorphismResult("inconclusive", gens, reason="search budget exhausted", candidates_tried=tried - 1)
            phi = _extend_map(G, H, gens, [h1, h2])
            if phi is not None:
                return IsomorphismResult("isomorphic", gens, [h1, h2], candidates_tried=tried, mapping=phi if keep_mapping else None)
    return IsomorphismResult("not_isomorphic", gens, reason="exhaustive generator-image search found no extension", candidates_tried=tried)


def _isomorphic_general(G, H, gens, matching, budget, keep_mapping) -> IsomorphismResult:
    # plain backtracking over images for groups needing 3+ generators
    pools = [matching(k) for k in range(len(gens))]
    tried = 0

    def rec(k, imgs):
        nonlocal tried
        if k == len(gens):
            tried += 1
            phi = _extend_map(G, H, gens, imgs)
            return None if phi is None else (phi, imgs)
        for h in pools[k]:
            if tried > budget:
                return None
            found = rec(k + 1, imgs + [h])
            if found is not None:
                return found
        return None

    found = rec(0, [])
    if found is not None:
        phi, imgs = found
        return IsomorphismResult("isomorphic", gens, imgs, candidates_tried=tried, mapping=phi if keep_mapping else None)
    if tried > budget:
        return IsomorphismResult("inconclusive", gens, reason="search budget exhausted", candidates_tried=tried)
    return IsomorphismResult("not_isomorphic", gens, reason="exhaustive search found no extension", candidates_tried=tried)


def is_homomorphism(G: FiniteGroupModel, H: FiniteGroupModel, phi: dict, pairs: Iterable[tuple] | None = None) -> bool:
    """Check ``phi(a*b) == phi(a)*phi(b)`` over ``pairs`` (default: all of ``G x G``)."""
    if pairs is None:
        pairs = ((a, b) for a in G.elements for b in G.elements)
    return all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a, b in pairs)
