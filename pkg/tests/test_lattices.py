import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sicverify import algebras
from sicverify.lattices import (
    VectorFamily,
    even_unimodular_check,
    family_from_elements,
    gram,
    identify_root_system,
    is_even_unimodular,
    reflection_closed,
    root_scaled,
    standard_family,
)

half = Fraction(1, 2)


def euclid(vectors):
    dim = len(vectors[0])
    eye = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return VectorFamily([tuple(Fraction(c) for c in v) for v in vectors], eye)


def classical_a2():
    return euclid([tuple(int(k == i) - int(k == j) for k in range(3)) for i in range(3) for j in range(3) if i != j])


def classical_d4():
    out = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 4
            v[i], v[j] = si, sj
            out.append(tuple(v))
    return euclid(out)


def classical_e8():
    out = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            out.append(tuple(v))
    for signs in itertools.product((half, -half), repeat=8):
        if sum(1 for s in signs if s < 0) % 2 == 0:
            out.append(signs)
    return euclid(out)


@pytest.fixture(scope="module")
def families(units):
    return {
        "A2": family_from_elements(algebras.eisenstein_units().elements),
        "D4": family_from_elements(algebras.hurwitz_units().elements),
        "E8": family_from_elements(units.elements),
    }


def test_identity_gram():
    fam = standard_family(5)
    assert gram(fam) == [[int(i == j) for j in range(5)] for i in range(5)]


def test_eisenstein_gram_exact_vs_embedding(families):
    G = gram(families["A2"])
    off = {G[i][j] for i in range(6) for j in range(6) if i != j}
    assert off == {-1, half, -half}
    assert all(G[i][i] == 1 for i in range(6))
    # float embedding a + b w -> (a - b/2, b sqrt(3)/2) as an independent check
    E = algebras.eisenstein_units().elements
    X = np.array([[float(z.a) - float(z.b) / 2, float(z.b) * 3 ** 0.5 / 2] for z in E])
    assert np.allclose(X @ X.T, np.array(G, dtype=float))


def test_hurwitz_gram_values(families):
    G = gram(families["D4"])
    assert {x for row in G for x in row} <= {0, half, -half, 1, -1}


@pytest.mark.parametrize("label", ["A2", "D4", "E8"])
def test_unit_sets_identified(families, label):
    ident = identify_root_system(families[label])
    assert ident.label == label
    assert reflection_closed(families[label])
    roots, rank = {"A2": (6, 2), "D4": (24, 4), "E8": (240, 8)}[label]
    assert ident.evidence["roots"] == roots and ident.evidence["rank"] == rank


@pytest.mark.parametrize("build,label", [(classical_a2, "A2"), (classical_d4, "D4"), (classical_e8, "E8")])
def test_classical_root_systems(build, label):
    assert identify_root_system(build()).label == label


def test_e8_even_unimodular(families):
    # unit norm 1: the doubled form is the E8 lattice
    assert not even_unimodular_check(families["E8"]).even
    check = even_unimodular_check(root_scaled(families["E8"]))
    assert check.even and check.determinant == 1
    assert is_even_unimodular(root_scaled(families["E8"]))
    assert is_even_unimodular(classical_e8())


def test_d4_not_unimodular(families):
    check = even_unimodular_check(root_scaled(families["D4"]))
    assert check.even and check.determinant == 4
    assert not is_even_unimodular(root_scaled(families["D4"]))


def test_cubic_lattice_not_even():
    fam = standard_family(8)
    assert not even_unimodular_check(fam).even
    assert not is_even_unimodular(fam)


def test_non_root_systems_unknown():
    d4 = classical_d4()
    assert identify_root_system(VectorFamily(d4.vectors[:10], d4.form)).label == "unknown"
    a3 = euclid([tuple(int(k == i) - int(k == j) for k in range(4)) for i in range(4) for j in range(4) if i != j])
    assert identify_root_system(a3).label == "unknown"
    mixed = euclid([(1, 0), (0, 2), (-1, 0), (0, -2)])
    assert identify_root_system(mixed).label == "unknown"


def test_half_family_symmetrized(families):
    fam = families["D4"]
    positive = [v for v in fam.vectors if next(c for c in v if c) > 0]
    ident = identify_root_system(VectorFamily(positive, fam.form))
    assert ident.label == "D4" and ident.evidence["negation_added"]


@given(st.randoms(use_true_random=False), st.sampled_from(["A2", "D4"]))
def test_label_invariant_under_permutation_and_sign(families, rnd, label):
    fam = families[label]
    vecs = list(fam.vectors)
    rnd.shuffle(vecs)
    vecs = [tuple(-c for c in v) if rnd.random() < 0.5 else v for v in vecs]
    assert identify_root_system(VectorFamily(vecs, fam.form)).label == label


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_e8_label_invariant(families, seed):
    import random
    rnd = random.Random(seed)
    vecs = list(families["E8"].vectors)
    rnd.shuffle(vecs)
    vecs = [tuple(-c for c in v) if rnd.random() < 0.5 else v for v in vecs]
    assert identify_root_system(VectorFamily(vecs, families["E8"].form)).label == "E8"
