import itertools
import math
import random

import pytest

from fermatgroups.invariants import (
    AbelianInvariants,
    ResourceLimitError,
    abelianization,
    count_homomorphisms,
    fingerprint_compare,
    perm_compose,
    perm_inverse,
    relator_matrix,
    smith_normal_form,
    symmetric_group,
    tietze_simplify,
)
from fermatgroups.presentation import (
    PresName,
    main_presentation,
    make_presentation,
    u0_presentation,
)
from fermatgroups.words import commutator, empty_word, g, gp, word


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum(
        (-1) ** j * m[0][j] * _det([row[:j] + row[j + 1 :] for row in m[1:]])
        for j in range(len(m))
    )


def _mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _determinantal_divisors(a):
    """gcd of all k x k minors, for k = 1..rank; the independent SNF oracle."""
    rows, cols = len(a), len(a[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        gcd = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                minor = _det([[a[i][j] for j in ci] for i in ri])
                gcd = math.gcd(gcd, abs(minor))
        out.append(gcd)
    return out


def _snf_diag_from_divisors(a):
    divisors = _determinantal_divisors(a)
    diag = []
    prev = 1
    for d in divisors:
        if d == 0:
            break
        diag.append(d // prev)
        prev = d
    k = min(len(a), len(a[0]))
    return diag + [0] * (k - len(diag))


def _check_snf(a):
    u, d, v = smith_normal_form(a)
    assert _mat_mul(_mat_mul(u, a), v) == d
    assert abs(_det(u)) == 1
    assert abs(_det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    for x, y in zip(diag, diag[1:]):
        if x:
            assert y % x == 0
        else:
            assert y == 0
    assert all(x >= 0 for x in diag)
    assert diag == _snf_diag_from_divisors(a)
    return diag


def test_snf_known_matrices():
    assert _check_snf([[2, 4], [6, 8]]) == [2, 4]
    assert _check_snf([[1, 0], [0, 0]]) == [1, 0]
    assert _check_snf([[0, 0], [0, 0]]) == [0, 0]
    assert _check_snf([[2, 0], [0, 3]]) == [1, 6]
    assert _check_snf([[6, 10], [10, 15]]) == [1, 10]
    assert _check_snf([[3]]) == [3]
    assert _check_snf([[-7]]) == [7]
    assert _check_snf([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == [2, 2, 156]


def test_snf_random_property():
    rng = random.Random(2468)
    for _ in range(150):
        rows = rng.randrange(1, 4)
        cols = rng.randrange(1, 5)
        a = [[rng.randrange(-5, 6) for _ in range(cols)] for _ in range(rows)]
        _check_snf(a)


def test_perm_helpers():
    s3 = symmetric_group(3)
    assert len(s3) == 6
    a = (1, 2, 0)
    b = (1, 0, 2)
    # left-to-right composition: (a then b)[i] = b[a[i]]
    assert perm_compose(a, b) == (0, 2, 1)
    assert perm_compose(a, perm_inverse(a)) == (0, 1, 2)
    s5 = symmetric_group(5)
    assert len(s5) == 120


def _free_group(rank):
    gens = [g(rank, i) for i in range(rank)]
    return make_presentation(rank, PresName.U0, gens, [])


def test_hom_count_free_group():
    f2 = _free_group(2)
    assert count_homomorphisms(f2, 3).count == 36
    assert count_homomorphisms(f2, 3).target == "S3"
    assert count_homomorphisms(f2, 2).count == 4
    assert count_homomorphisms(f2, 1).count == 1


def test_hom_count_z_squared():
    z2 = make_presentation(
        2,
        PresName.U0,
        [g(2, 0), g(2, 1)],
        [commutator(word(2, [g(2, 0)]), word(2, [g(2, 1)]))],
    )
    # commuting pairs in S3: brute-forced independently below
    assert count_homomorphisms(z2, 3).count == 18
    s3 = symmetric_group(3)
    brute = sum(
        1 for a in s3 for b in s3 if perm_compose(a, b) == perm_compose(b, a)
    )
    assert brute == 18


def test_hom_count_vs_exhaustive_u0_2():
    p = u0_presentation(2)  # 4 generators, one commutator relator
    got = count_homomorphisms(p, 3).count
    s3 = symmetric_group(3)
    brute = 0
    for imgs in itertools.product(s3, repeat=4):
        assignment = dict(zip(p.generators, imgs))
        ok = True
        for r in p.relators:
            acc = tuple(range(3))
            for lt in r.letters:
                im = assignment[lt.symbol]
                if lt.sign < 0:
                    im = perm_inverse(im)
                acc = perm_compose(acc, im)
            if acc != tuple(range(3)):
                ok = False
                break
        if ok:
            brute += 1
    assert got == brute


def test_hom_count_guard():
    with pytest.raises(ResourceLimitError):
        count_homomorphisms(main_presentation(2), 5)  # 120^6 > 1e12
    with pytest.raises(ValueError):
        count_homomorphisms(_free_group(2), 6)
    with pytest.raises(ValueError):
        count_homomorphisms(_free_group(2), 0)


def test_hom_count_s2_never_prunes():
    # S2 is abelian, so the commutator relator cuts nothing: all 2^4 maps
    p = u0_presentation(2)
    assert count_homomorphisms(p, 2).count == 2 ** len(p.generators)


def test_abelianization_examples():
    z2 = make_presentation(
        2,
        PresName.U0,
        [g(2, 0), g(2, 1)],
        [commutator(word(2, [g(2, 0)]), word(2, [g(2, 1)]))],
    )
    ab = abelianization(z2)
    assert ab.free_rank == 2 and ab.torsion == ()
    assert ab.describe() == "Z^2"
    # torsion case: <a | a^3>
    za = make_presentation(
        1, PresName.U0, [g(1, 0)], [word(1, [(g(1, 0), 1)] * 3)]
    )
    ab3 = abelianization(za)
    assert ab3.free_rank == 0 and ab3.torsion == (3,)
    assert ab3.describe() == "Z/3"
    # mixed: <a,b | a^2 b^4> ~ Z + Z/2
    mixed = make_presentation(
        2,
        PresName.U0,
        [g(2, 0), g(2, 1)],
        [word(2, [(g(2, 0), 1)] * 2 + [(g(2, 1), 1)] * 4)],
    )
    abm = abelianization(mixed)
    assert abm.free_rank == 1 and abm.torsion == (2,)


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(-1, ())
    with pytest.raises(ValueError):
        AbelianInvariants(0, (3, 4))  # 3 does not divide 4
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))


def test_relator_matrix_shape():
    p = u0_presentation(2)
    m = relator_matrix(p)
    assert len(m) == len(p.relators)
    assert all(len(row) == len(p.generators) for row in m)
    assert all(all(x == 0 for x in row) for row in m)  # commutator relator


def test_tietze_eliminates_defined_generator():
    n = 3
    rel = word(n, [(g(n, 2), 1), (g(n, 1), -1), (g(n, 0), -1)])  # g2 = g0 g1
    p = make_presentation(n, PresName.U0, [g(n, 0), g(n, 1), g(n, 2)], [rel])
    q = tietze_simplify(p)
    assert set(q.generators) == {g(n, 0), g(n, 1)}
    assert q.relators == ()
    assert abelianization(q) == abelianization(p)


def test_tietze_collapses_rotated_and_inverted_duplicates():
    n = 2
    a, b = word(n, [g(n, 0)]), word(n, [g(n, 1)])
    r1 = commutator(a, b)
    r2 = commutator(b, a)  # the inverse of r1 up to rotation
    rot = word(n, list(r1.letters[1:]) + [r1.letters[0]])
    p = make_presentation(n, PresName.U0, [g(n, 0), g(n, 1)], [r1, r2, rot])
    q = tietze_simplify(p)
    assert len(q.relators) == 1


def test_tietze_preserves_hom_count_u0_3():
    p = u0_presentation(3)
    q = tietze_simplify(p)
    assert count_homomorphisms(p, 3).count == count_homomorphisms(q, 3).count
    assert abelianization(p) == abelianization(q)


def test_fingerprint_reflexive_and_symmetric():
    p = u0_presentation(2)
    r = fingerprint_compare(p, p)
    assert r.verdict == "consistent"
    assert r.distinctions == ()
    f2 = _free_group(2)
    ab = fingerprint_compare(p, f2)
    ba = fingerprint_compare(f2, p)
    assert ab.verdict == ba.verdict
    assert [(t, x, y) for t, x, y in ab.hom_counts] == [(t, y, x) for t, x, y in ba.hom_counts]


def test_fingerprint_distinguishes_f2_from_z2():
    f2 = _free_group(2)
    z2 = make_presentation(
        2,
        PresName.U0,
        [g(2, 0), g(2, 1)],
        [commutator(word(2, [g(2, 0)]), word(2, [g(2, 1)]))],
    )
    r = fingerprint_compare(z2, f2)
    assert r.verdict == "distinguished"
    assert any("S3" in d and "18" in d and "36" in d for d in r.distinctions)


def test_fingerprint_main_vs_simplified():
    p = main_presentation(2)
    r = fingerprint_compare(p, tietze_simplify(p))
    assert r.verdict == "consistent"
