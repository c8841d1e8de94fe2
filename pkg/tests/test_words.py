import pytest

from fermatgroups.words import (
    DomainError,
    FreeAutomorphism,
    Letter,
    Word,
    apply_endomorphism,
    commutator,
    compose,
    concat,
    conjugate,
    cyclic_reduce,
    empty_word,
    exponent_vector,
    fiber_alphabet,
    free_reduce,
    g,
    gamma,
    gp,
    gpp,
    identity_automorphism,
    invert,
    is_conjugate_free,
    parse_word,
    word,
)
from fermatgroups.presentation import (
    cyclic_product,
    gamma0_action,
    gamma1_action_longhand,
    gamma2_action_longhand,
    gammak_action,
    k_conjugate,
)


def test_symbol_index_mod_n():
    assert g(3, 5) == g(3, 2)
    assert gp(2, 2) == gp(2, 0)
    assert gpp(4, -1) == gpp(4, 3)
    assert g(3, 0) != gp(3, 0)


def test_gamma_index_not_reduced():
    # gamma_0..gamma_n are n+1 distinct loops
    assert gamma(2, 2) != gamma(2, 0)
    with pytest.raises(ValueError):
        gamma(2, 3)


def test_free_reduce_cancellation():
    w = word(2, [(g(2, 0), 1), (g(2, 0), -1), (g(2, 1), 1)])
    assert free_reduce(w) == word(2, [g(2, 1)])


def test_free_reduce_empty():
    assert free_reduce(empty_word(3)) == empty_word(3)
    assert len(free_reduce(word(1, [(g(1, 0), 1), (g(1, 0), -1)]))) == 0


def test_free_reduce_nested():
    # cancellation that only appears after an inner pair is removed
    w = word(2, [(g(2, 0), 1), (g(2, 1), 1), (g(2, 1), -1), (g(2, 0), -1), (gp(2, 0), 1)])
    assert free_reduce(w) == word(2, [gp(2, 0)])


def test_invert_basic():
    w = word(2, [g(2, 0), g(2, 1)])
    assert invert(w) == word(2, [(g(2, 1), -1), (g(2, 0), -1)])
    assert invert(empty_word(2)) == empty_word(2)
    assert len(free_reduce(w * invert(w))) == 0


def test_invert_k_conjugate_is_gamma2_g_image():
    # inverting the k=2 conjugate word gives the 9-letter gamma_2 . g_{n-i} word
    for n in (3, 4, 6):
        for i in range(n):
            expected, _ = gamma2_action_longhand(n, i)
            assert free_reduce(invert(k_conjugate(n, 2, i))) == free_reduce(expected)


def test_conjugate_basic():
    assert conjugate(word(2, [gp(2, 0)]), word(2, [g(2, 0)])) == word(
        2, [(g(2, 0), -1), (gp(2, 0), 1), (g(2, 0), 1)]
    )
    # conjugating g_1' by the cyclic product g_1 g_0 at n=2
    got = conjugate(word(2, [gp(2, 1)]), cyclic_product(2))
    assert got == word(
        2, [(g(2, 0), -1), (g(2, 1), -1), (gp(2, 1), 1), (g(2, 1), 1), (g(2, 0), 1)]
    )
    w = word(2, [(g(2, 1), 1), (g(2, 1), 1), (g(2, 1), -1)])
    assert conjugate(w, empty_word(2)) == free_reduce(w)


def test_is_conjugate_cyclic_rotation():
    u = word(2, [g(2, 0), g(2, 1)])
    v = word(2, [g(2, 1), g(2, 0)])
    ok, c = is_conjugate_free(u, v)
    assert ok
    assert c == word(2, [g(2, 0)])
    assert conjugate(u, c) == v


def test_is_conjugate_false():
    ok, c = is_conjugate_free(word(2, [g(2, 0)]), word(2, [g(2, 1)]))
    assert not ok and c is None


def test_is_conjugate_prefix_witness():
    # a b c b^-1 a b c^-1 b^-1 a^-1 with a=g2, b=g1, c=g1' (n=3) is u g2 u^-1
    a, b, c = g(3, 2), g(3, 1), gp(3, 1)
    w = word(3, [(a, 1), (b, 1), (c, 1), (b, -1), (a, 1), (b, 1), (c, -1), (b, -1), (a, -1)])
    ok, witness = is_conjugate_free(w, word(3, [a]))
    assert ok
    assert witness == word(3, [(a, 1), (b, 1), (c, 1), (b, -1)])
    assert conjugate(w, witness) == word(3, [a])


def test_is_conjugate_needs_same_n():
    with pytest.raises(ValueError):
        is_conjugate_free(word(2, [g(2, 0)]), word(3, [g(3, 0)]))


def test_cyclic_reduce():
    # p * core * p^-1 with p = g0 g1
    p = word(2, [g(2, 0), g(2, 1)])
    core = word(2, [gp(2, 0), gp(2, 1)])
    w = p * core * invert(p)
    got_core, got_prefix = cyclic_reduce(w)
    assert got_core == core
    assert got_prefix == p
    assert free_reduce(got_prefix * got_core * invert(got_prefix)) == free_reduce(w)


def test_apply_endomorphism_identity():
    w = word(2, [(g(2, 0), 1), (gp(2, 1), -1), (gp(2, 1), 1)])
    assert apply_endomorphism(identity_automorphism(2), w) == free_reduce(w)


def test_apply_gamma0_fixes_unprimed():
    f = gamma0_action(2).action
    assert apply_endomorphism(f, word(2, [g(2, 1)])) == word(2, [g(2, 1)])


def test_apply_gamma1_on_primed():
    # gamma_1 . g_i' = g_{n-i} g_i' g_{n-i}^-1 at n=2, i=1
    f = gammak_action(2, 1).action
    got = apply_endomorphism(f, word(2, [gp(2, 1)]))
    assert got == word(2, [(g(2, 1), 1), (gp(2, 1), 1), (g(2, 1), -1)])


def test_apply_endomorphism_respects_inverses():
    f = gammak_action(3, 2).action
    w = word(3, [(g(3, 0), 1), (gp(3, 2), -1), (g(3, 1), 1)])
    assert apply_endomorphism(f, invert(w)) == invert(apply_endomorphism(f, w))


def test_apply_endomorphism_domain_error():
    f = identity_automorphism(2)
    with pytest.raises(DomainError):
        apply_endomorphism(f, word(2, [gpp(2, 0)]))


def test_compose_order():
    # compose(outer, inner) applies inner first
    n = 2
    swap = FreeAutomorphism(
        n,
        {
            g(n, 0): word(n, [g(n, 1)]),
            g(n, 1): word(n, [g(n, 0)]),
            gp(n, 0): word(n, [gp(n, 0)]),
            gp(n, 1): word(n, [gp(n, 1)]),
        },
    )
    push = FreeAutomorphism(
        n,
        {
            g(n, 0): word(n, [(g(n, 0), 1), (gp(n, 0), 1)]),
            g(n, 1): word(n, [g(n, 1)]),
            gp(n, 0): word(n, [gp(n, 0)]),
            gp(n, 1): word(n, [gp(n, 1)]),
        },
    )
    got = compose(push, swap)  # swap first, then push
    assert got.images[g(n, 1)] == word(n, [(g(n, 0), 1), (gp(n, 0), 1)])
    assert compose(swap, push).images[g(n, 1)] == word(n, [g(n, 0)])


def test_exponent_vector_cyclic_product():
    vec = exponent_vector(cyclic_product(3))
    assert vec == {g(3, 0): 1, g(3, 1): 1, g(3, 2): 1}


def test_exponent_vector_commutator_zero():
    w = commutator(word(2, [g(2, 0)]), word(2, [gp(2, 0)]))
    assert exponent_vector(w) == {}


def test_exponent_vector_of_conjugate_core():
    for n, i in [(2, 0), (3, 1), (5, 4)]:
        on_g, _ = gamma2_action_longhand(n, i) if n >= 2 else gamma1_action_longhand(n, i)
        assert exponent_vector(on_g) == {g(n, n - i): 1}


def test_exponent_vector_k_conjugate():
    # every letter of the k-conjugate word cancels except one inverse of g_{n-s}
    for n, k, s in [(3, 2, 1), (4, 3, 2), (6, 4, 0)]:
        assert exponent_vector(k_conjugate(n, k, s)) == {g(n, n - s): -1}


def test_word_mul_keeps_letters():
    # concatenation does not reduce; reduction is explicit
    w = word(2, [g(2, 0)]) * word(2, [(g(2, 0), -1)])
    assert len(w) == 2
    assert len(free_reduce(w)) == 0
    with pytest.raises(ValueError):
        word(2, [g(2, 0)]) * word(3, [g(3, 0)])


def test_concat_and_empty_tokens():
    w = concat(word(2, [g(2, 0)]), empty_word(2), word(2, [gp(2, 1)]))
    assert w.tokens() == ["g0", "gp1"]
    assert empty_word(2).tokens() == ["1"]


def test_token_round_trip():
    w = word(3, [(g(3, 0), 1), (gp(3, 2), -1), (gpp(3, 1), 1), (gamma(3, 3), -1)])
    assert w.tokens() == ["g0", "gp2^-1", "gpp1", "gamma3^-1"]
    assert parse_word(w.tokens(), 3) == w
    assert parse_word(["1"], 3) == empty_word(3)
    assert parse_word([], 3) == empty_word(3)
    with pytest.raises(ValueError):
        parse_word(["gq1"], 3)


def test_automorphism_domain_must_be_fiber():
    with pytest.raises(ValueError):
        FreeAutomorphism(2, {g(2, 0): word(2, [g(2, 0)])})  # missing symbols
    images = {s: word(2, [s]) for s in fiber_alphabet(2)}
    images[g(2, 0)] = word(2, [gpp(2, 0)])  # image outside the fiber families
    with pytest.raises(ValueError):
        FreeAutomorphism(2, images)
