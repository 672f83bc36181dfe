import itertools

import numpy as np
import pytest

from sicverify.groups import class_sizes, is_simple, point_orbit
from sicverify.matgroups import (
    F2LinearCarrier,
    build_psu33,
    build_sp62,
    field,
    gu33_elements,
    is_symplectic,
    is_unitary,
    mat_det,
    sp62_closure,
)

SP62_ORDER = 2**9 * (2**2 - 1) * (2**4 - 1) * (2**6 - 1)


def pack(cols):
    return sum(c << (6 * k) for k, c in enumerate(cols))


@pytest.fixture(scope="module")
def sp_stream():
    return np.fromiter((pack(c) for c in build_sp62()), dtype=np.int64)


def oracle_form(p, q):
    # <(a|b), (a'|b')> = a.b' + a'.b over F2, bit by bit
    a, b, a2, b2 = p >> 3, p & 7, q >> 3, q & 7
    return sum(((a >> k) & (b2 >> k) & 1) + ((a2 >> k) & (b >> k) & 1) for k in range(3)) % 2


def test_f9_is_a_field():
    F = field(9)
    for x in range(1, 9):
        assert F.mul(x, F.inv(x)) == 1
    for x, y in itertools.product(range(9), repeat=2):
        assert F.mul(x, y) == F.mul(y, x)
        # Frobenius is a ring automorphism of order 2
        assert F.frob(F.mul(x, y)) == F.mul(F.frob(x), F.frob(y))
        assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))
    assert all(F.frob(F.frob(x)) == x for x in range(9))
    assert sorted(x for x in range(9) if F.frob(x) == x) == [0, 1, 2]


def test_gu33_order_and_membership(psu_parts):
    gu, z, pgu, image = psu_parts
    q = 3
    assert gu.order == q**3 * (q + 1) * (q**2 - 1) * (q**3 + 1) == 24192
    assert len(set(gu33_elements())) == 24192
    assert all(is_unitary(m) for m in gu.elements)


def test_gu33_center_by_brute_force(psu_parts):
    gu, z, _, _ = psu_parts
    gens = gu.generators
    central = [g for g in gu.elements if all(gu.mul(g, h) == gu.mul(h, g) for h in gens)]
    assert sorted(central) == sorted(z.elements)
    assert z.order == 4
    # the centre is the scalar matrices
    assert all(m[1] == m[2] == m[3] == m[5] == m[6] == m[7] == 0 and m[0] == m[4] == m[8] for m in z.elements)


def test_psu33(psu_parts):
    gu, z, pgu, image = psu_parts
    assert pgu.order == 6048 == gu.order // z.order
    assert image.order == 6048
    assert image.carrier.n == 91
    assert is_simple(image)
    assert sum(class_sizes(image)) == 6048
    # orbits on PG(2,9): the q^3 + 1 = 28 isotropic points and the other 63
    sizes = sorted({frozenset(point_orbit(image.generators, p)) for p in range(91)}, key=len)
    assert [len(o) for o in sizes] == [28, 63]


def test_psu33_deterministic(psu_parts):
    assert build_psu33().elements[:50] == psu_parts[3].elements[:50]


def test_sl23_determinants(sl23):
    F = field(3)
    assert all(mat_det(F, m, 2) == 1 for m in sl23.elements)


def test_form_matches_oracle():
    from sicverify.matgroups import symp
    for p, q in itertools.product(range(64), repeat=2):
        assert symp(p, q) == oracle_form(p, q)


def test_identity_is_symplectic():
    assert is_symplectic(tuple(1 << k for k in range(6)))


def test_sp62_stream_count_distinct(sp_stream):
    assert len(sp_stream) == SP62_ORDER == 1_451_520
    assert len(np.unique(sp_stream)) == SP62_ORDER


def test_sp62_stream_all_symplectic(sp_stream):
    cols = [(sp_stream >> (6 * k)) & 63 for k in range(6)]
    form = np.array([[oracle_form(p, q) for q in range(64)] for p in range(64)])
    for i in range(6):
        for j in range(i + 1, 6):
            assert (form[cols[i], cols[j]] == oracle_form(1 << i, 1 << j)).all()
    # symplectic implies invertible: check a sample by rank over F2
    rng = np.random.default_rng(7)
    for packed in rng.choice(sp_stream, 200):
        rows = [int((packed >> (6 * k)) & 63) for k in range(6)]
        basis = []
        for r in rows:
            for b in basis:
                r = min(r, r ^ b)
            if r:
                basis.append(r)
        assert len(basis) == 6


def test_sp62_closure_matches_stream(sp_stream):
    G = sp62_closure()
    assert G.order == SP62_ORDER
    closed = np.array(sorted(pack(g) for g in G.elements), dtype=np.int64)
    assert (closed == np.sort(sp_stream)).all()


def test_f2_carrier_composes_like_matrices():
    C = F2LinearCarrier()
    a = bytes([3, 2, 4, 8, 16, 32])
    b = bytes([1, 6, 4, 8, 16, 33])
    ab = C.mul(a, b)
    from sicverify.matgroups import apply_cols
    for v in range(64):
        assert apply_cols(ab, v) == apply_cols(a, apply_cols(b, v))
