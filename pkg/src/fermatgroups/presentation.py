"""Loop actions on the fiber generators and the finitely presented groups they cut out.

Each relator family follows one fixed formula.  Where a general formula could
be read two ways (the "..." runs inside the k-conjugate words, the order of
the prime cyclic products), the chosen reading is pinned down by the longhand
k<=3 expansions, rebuilt letter-by-letter in the *_longhand functions and
re-checked at runtime by formula_consistency_report.

An equation L = R is stored as the single relator free_reduce(L * R^-1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .words import (
    FIBER_FAMILIES,
    Family,
    FreeAutomorphism,
    GeneratorSymbol,
    Letter,
    Word,
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
    invert,
    word,
)


class PresName(enum.Enum):
    U0 = "U0"
    U0_MINUS_Y = "U0MinusY"
    CP2_MINUS_CX = "CP2MinusCx"
    U_INFTY = "UInfty"
    U_INFTY_MINUS_X = "UInftyMinusX"
    MAIN = "Main"
    GROUP_G = "GroupG"
    QUOTIENT_FN = "QuotientFn"


@dataclass(frozen=True)
class Presentation:
    n: int
    name: PresName
    generators: tuple[GeneratorSymbol, ...]
    relators: tuple[Word, ...]
    #: how many relators the defining families produce before reduction,
    #: deduplication, and dropping of empties (metadata, not identity)
    raw_relator_count: int = field(compare=False, default=0)


def make_presentation(
    n: int, name: PresName, generators: Sequence[GeneratorSymbol], raw_relators: Sequence[Word]
) -> Presentation:
    """Reduce, drop empties, and deduplicate (exact equality, order-preserving)."""
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    gens = tuple(generators)
    gen_set = set(gens)
    seen: set[tuple] = set()
    relators: list[Word] = []
    for r in raw_relators:
        r = free_reduce(r)
        if not r.letters:
            continue
        key = tuple((lt.symbol, lt.sign) for lt in r.letters)
        if key in seen:
            continue
        seen.add(key)
        for lt in r.letters:
            if lt.symbol not in gen_set:
                raise ValueError(f"relator symbol {lt.symbol} not among the generators")
        relators.append(r)
    return Presentation(n, name, gens, tuple(relators), len(raw_relators))


@dataclass(frozen=True)
class ActionTable:
    """The monodromy action of the base loop gamma_k on the 2n fiber generators."""

    n: int
    loop_index: int  # 0..n
    action: FreeAutomorphism

    def __post_init__(self) -> None:
        if not 0 <= self.loop_index <= self.n:
            raise ValueError(f"loop index {self.loop_index} out of range 0..{self.n}")
        # Every image must be a syntactic conjugate u * x * u^-1 of its own
        # generator: prefix-stripping must leave exactly the one-letter core.
        for sym, img in self.action.images.items():
            core, _ = cyclic_reduce(img)
            if core.letters != (Letter(sym, 1),):
                raise ValueError(f"image of {sym} is not a syntactic conjugate of it: {img}")


def relator_of_equation(lhs: Word, rhs: Word) -> Word:
    return free_reduce(lhs * invert(rhs))


def descending_run(n: int, top: int, count: int) -> Word:
    """g_top g_{top-1} ... (count letters, indices mod n); empty when count=0."""
    return word(n, [g(n, top - j) for j in range(count)])


def cyclic_product(n: int) -> Word:
    """The cyclic product of all fiber g-generators: g_{n-1}...g_1g_0."""
    return descending_run(n, n - 1, n)


def prime_product_ascending(n: int) -> Word:
    """g'_0 g'_1 ... g'_{n-1}."""
    return word(n, [gp(n, i) for i in range(n)])


def prime_product_g_style(n: int) -> Word:
    """g'_0 g'_{n-1} g'_{n-2} ... g'_1 (the order used in the definition of G)."""
    return word(n, [gp(n, 0)]) * descending_run_prime(n, n - 1, n - 1)


def descending_run_prime(n: int, top: int, count: int) -> Word:
    return word(n, [gp(n, top - j) for j in range(count)])


def cyclic_relators(n: int) -> list[Word]:
    """For j=1..n-1: g_j...g_0 g_{n-1}...g_{j+1} = g_0 g_{n-1}...g_1."""
    rhs = word(n, [g(n, 0)]) * descending_run(n, n - 1, n - 1)
    out = []
    for j in range(1, n):
        lhs = descending_run(n, j, j + 1) * descending_run(n, n - 1, n - 1 - j)
        out.append(relator_of_equation(lhs, rhs))
    return out


def g0_action_u01(n: int, i: int) -> Word:
    """g_0 . g_i = g_{n-1}g_{n-2}...g_1 g_i g_1^-1...g_{n-1}^-1, freely reduced."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"index i must satisfy 1 <= i <= n-1, got {i}")
    prefix = descending_run(n, n - 1, n - 1)
    return free_reduce(prefix * word(n, [g(n, i)]) * invert(prefix))


def gamma0_action(n: int) -> ActionTable:
    """gamma_0^-1 g_i gamma_0 = g_i;  gamma_0^-1 g_i' gamma_0 = (g_{n-i} g)^-1 g_i' (g_{n-i} g)."""
    gword = cyclic_product(n)
    images: dict[GeneratorSymbol, Word] = {}
    for i in range(n):
        images[g(n, i)] = word(n, [g(n, i)])
    for i in range(n):
        by = word(n, [g(n, n - i)]) * gword
        images[gp(n, i)] = conjugate(word(n, [gp(n, i)]), by)
    return ActionTable(n, 0, FreeAutomorphism(n, images))


def k_conjugate(n: int, k: int, s: int) -> Word:
    """The k-conjugate word (4k+1 letters)

        G^k_{n-s} = D g'_{s+k-1} D^-1 . Dhat g'^-1_{s+k-1} D^-1

    with D = g_{n-s}g_{n-s-1}...g_{n-s-(k-1)} and Dhat = D without its first
    letter.  Defined for k >= 2 (the k=1 chain is empty and never needs it);
    s is taken mod n.
    """
    if not 2 <= k <= n:
        raise ValueError(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")
    d = descending_run(n, n - s, k)
    dhat = Word(n, d.letters[1:])
    core = word(n, [gp(n, s + k - 1)])
    return d * core * invert(d) * dhat * invert(core) * invert(d)


def half_conjugate(n: int, k: int, i: int) -> Word:
    """H^k_{n-i+(k-1)} = g_{n-i+(k-1)} g_{n-i+(k-2)} ... g_{n-i}  (k letters)."""
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    return descending_run(n, n - i + k - 1, k)


def gammak_g_image(n: int, k: int, i: int) -> Word:
    """gamma_k . g_{n-i} = D g'_{i+k-1} Dhat^-1 g_{n-i} Dhat g'^-1_{i+k-1} D^-1."""
    d = descending_run(n, n - i, k)
    dhat = Word(n, d.letters[1:])
    core = word(n, [gp(n, i + k - 1)])
    return d * core * invert(dhat) * word(n, [g(n, n - i)]) * dhat * invert(core) * invert(d)


def gammak_gp_image(n: int, k: int, i: int) -> Word:
    """gamma_k . g_i' = C g_i' C^-1 with C = G^k_{n-i} G^k_{n-i+1}...G^k_{n-i+(k-2)} H^k_{n-i+(k-1)}."""
    chain = [k_conjugate(n, k, i - j) for j in range(k - 1)]
    c = concat(*chain, half_conjugate(n, k, i)) if chain else half_conjugate(n, k, i)
    return c * word(n, [gp(n, i)]) * invert(c)


def gammak_action(n: int, k: int) -> ActionTable:
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    images: dict[GeneratorSymbol, Word] = {}
    for i in range(n):
        images[g(n, n - i)] = gammak_g_image(n, k, i)
    for i in range(n):
        images[gp(n, i)] = gammak_gp_image(n, k, i)
    return ActionTable(n, k, FreeAutomorphism(n, images))


def loop_action(n: int, k: int) -> ActionTable:
    return gamma0_action(n) if k == 0 else gammak_action(n, k)


# --- longhand transcriptions of the printed gamma_1/2/3 expansions ----------
#
# These rebuild the displayed words letter-by-letter (no shared machinery with
# k_conjugate / half_conjugate), so agreement with the general formula is a
# real consistency check and not a tautology.


def gamma1_action_longhand(n: int, i: int) -> tuple[Word, Word]:
    gi = lambda j: Letter(g(n, j), 1)
    gi_ = lambda j: Letter(g(n, j), -1)
    pi = lambda j: Letter(gp(n, j), 1)
    pi_ = lambda j: Letter(gp(n, j), -1)
    on_g = Word(n, (gi(n - i), pi(i), gi(n - i), pi_(i), gi_(n - i)))
    on_gp = Word(n, (gi(n - i), pi(i), gi_(n - i)))
    return on_g, on_gp


def gamma2_action_longhand(n: int, i: int) -> tuple[Word, Word]:
    gi = lambda j: Letter(g(n, j), 1)
    gi_ = lambda j: Letter(g(n, j), -1)
    pi = lambda j: Letter(gp(n, j), 1)
    pi_ = lambda j: Letter(gp(n, j), -1)
    on_g = Word(n, (
        gi(n - i), gi(n - i - 1), pi(i + 1), gi_(n - i - 1), gi(n - i),
        gi(n - i - 1), pi_(i + 1), gi_(n - i - 1), gi_(n - i),
    ))
    on_gp = Word(n, (
        gi(n - i), gi(n - i - 1), pi(i + 1), gi_(n - i - 1), gi_(n - i),
        gi(n - i - 1), pi_(i + 1), gi_(n - i - 1), gi_(n - i),
        gi(n - i + 1), gi(n - i),
        pi(i),
        gi_(n - i), gi_(n - i + 1),
        gi(n - i), gi(n - i - 1), pi(i + 1), gi_(n - i - 1), gi(n - i),
        gi(n - i - 1), pi_(i + 1), gi_(n - i - 1), gi_(n - i),
    ))
    return on_g, on_gp


def gamma3_action_longhand(n: int, i: int) -> tuple[Word, Word]:
    gi = lambda j: Letter(g(n, j), 1)
    gi_ = lambda j: Letter(g(n, j), -1)
    pi = lambda j: Letter(gp(n, j), 1)
    pi_ = lambda j: Letter(gp(n, j), -1)
    on_g = Word(n, (
        gi(n - i), gi(n - i - 1), gi(n - i - 2), pi(i + 2), gi_(n - i - 2),
        gi_(n - i - 1), gi(n - i), gi(n - i - 1), gi(n - i - 2), pi_(i + 2),
        gi_(n - i - 2), gi_(n - i - 1), gi_(n - i),
    ))
    on_gp = Word(n, (
        # row 1
        gi(n - i), gi(n - i - 1), gi(n - i - 2), pi(i + 2), gi_(n - i - 2),
        gi_(n - i - 1), gi_(n - i), gi(n - i - 1), gi(n - i - 2), pi_(i + 2),
        gi_(n - i - 2),
        # row 2
        gi_(n - i - 1), gi_(n - i), gi(n - i + 1), gi(n - i), gi(n - i - 1),
        pi(i + 1), gi_(n - i - 1), gi_(n - i), gi_(n - i + 1), gi(n - i),
        gi(n - i - 1), pi_(i + 1),
        # row 3
        gi_(n - i - 1), gi_(n - i), gi_(n - i + 1), gi(n - i + 2), gi(n - i + 1),
        gi(n - i), pi(i), gi_(n - i), gi_(n - i + 1), gi_(n - i + 2),
        gi(n - i + 1), gi(n - i),
        # row 4
        gi(n - i - 1), pi(i + 1), gi_(n - i - 1), gi_(n - i), gi(n - i + 1),
        gi(n - i), gi(n - i - 1), pi_(i + 1), gi_(n - i - 1), gi_(n - i),
        gi_(n - i + 1), gi(n - i),
        # row 5
        gi(n - i - 1), gi(n - i - 2), pi(i + 2), gi_(n - i - 2), gi_(n - i - 1),
        gi(n - i), gi(n - i - 1), gi(n - i - 2), pi_(i + 2), gi_(n - i - 2),
        gi_(n - i - 1), gi_(n - i),
    ))
    return on_g, on_gp


_LONGHAND = {1: gamma1_action_longhand, 2: gamma2_action_longhand, 3: gamma3_action_longhand}


def formula_consistency_report(n: int) -> dict:
    """Re-verify the general gamma_k formula against the longhand k<=3 expansions.

    Returns {"n": n, "ok": bool, "mismatches": [...]}; each mismatch carries
    the loop index, generator, and both words for a diff.
    """
    mismatches = []
    for k in (1, 2, 3):
        if k > n:
            continue
        table = gammak_action(n, k)
        for i in range(n):
            long_g, long_gp = _LONGHAND[k](n, i)
            pairs = [
                (g(n, n - i), free_reduce(table.action.images[g(n, n - i)]), free_reduce(long_g)),
                (gp(n, i), free_reduce(table.action.images[gp(n, i)]), free_reduce(long_gp)),
            ]
            for sym, formula, longhand in pairs:
                if formula != longhand:
                    mismatches.append(
                        {
                            "k": k,
                            "i": i,
                            "generator": sym.token(),
                            "formula": formula.tokens(),
                            "longhand": longhand.tokens(),
                        }
                    )
    return {"n": n, "ok": not mismatches, "mismatches": mismatches}


# --- the presentations -------------------------------------------------------


def u0_presentation(n: int) -> Presentation:
    gens = [g(n, i) for i in range(n)] + [gp(n, i) for i in range(n)]
    return make_presentation(n, PresName.U0, gens, cyclic_relators(n))


def u0_minus_y_presentation(n: int) -> Presentation:
    gens = [gamma(n, 0)] + fiber_alphabet(n)
    table = gamma0_action(n)
    gam = word(n, [gamma(n, 0)])
    rels = []
    for x in fiber_alphabet(n):
        lhs = invert(gam) * word(n, [x]) * gam
        rels.append(relator_of_equation(lhs, table.action.images[x]))
    return make_presentation(n, PresName.U0_MINUS_Y, gens, rels)


def _gpp_conjugation_relators(n: int, actions: Mapping[int, FreeAutomorphism]) -> list[Word]:
    """g''_{n-k+1}^-1 x g''_{n-k+1} = gamma_k . x for k=1..n, x in {g_{n-i}, g_i'}."""
    rels = []
    for k in range(1, n + 1):
        gpp_word = word(n, [gpp(n, n - k + 1)])
        for i in range(n):
            for x in (g(n, n - i), gp(n, i)):
                lhs = invert(gpp_word) * word(n, [x]) * gpp_word
                rels.append(relator_of_equation(lhs, actions[k].images[x]))
    return rels


def cp2_minus_cx_presentation(n: int) -> Presentation:
    gens = (
        [g(n, i) for i in range(n)]
        + [gp(n, i) for i in range(n)]
        + [gpp(n, i) for i in range(n)]
    )
    gword = cyclic_product(n)
    rels = [commutator(gword, word(n, [g(n, i)])) for i in range(n)]
    rels += [commutator(word(n, [gp(n, i)]), word(n, [g(n, n - i)])) for i in range(n)]
    actions = {k: gammak_action(n, k).action for k in range(1, n + 1)}
    rels += _gpp_conjugation_relators(n, actions)
    return make_presentation(n, PresName.CP2_MINUS_CX, gens, rels)


def main_presentation(n: int) -> Presentation:
    """Presentation of the full complement of the 3n lines."""
    gens = (
        [g(n, i) for i in range(n)]
        + [gp(n, i) for i in range(n)]
        + [gpp(n, i) for i in range(n)]
    )
    rels = [commutator(word(n, [g(n, n - i)]), word(n, [gp(n, i)])) for i in range(n)]
    rels += [commutator(word(n, [g(n, i)]), cyclic_product(n)) for i in range(n)]
    rels += [commutator(word(n, [gp(n, i)]), prime_product_ascending(n)) for i in range(n)]
    actions = {k: gammak_action(n, k).action for k in range(1, n + 1)}
    rels += _gpp_conjugation_relators(n, actions)
    return make_presentation(n, PresName.MAIN, gens, rels)


def main_presentation_from_actions(
    n: int, actions: Mapping[int, FreeAutomorphism]
) -> Presentation:
    """The same relator families, with the gamma_k images taken from `actions`.

    Used to rebuild the presentation from numerically derived monodromy
    (actions[k] for k=1..n) and compare invariants against main_presentation.
    """
    gens = (
        [g(n, i) for i in range(n)]
        + [gp(n, i) for i in range(n)]
        + [gpp(n, i) for i in range(n)]
    )
    rels = [commutator(word(n, [g(n, n - i)]), word(n, [gp(n, i)])) for i in range(n)]
    rels += [commutator(word(n, [g(n, i)]), cyclic_product(n)) for i in range(n)]
    rels += [commutator(word(n, [gp(n, i)]), prime_product_ascending(n)) for i in range(n)]
    rels += _gpp_conjugation_relators(n, actions)
    return make_presentation(n, PresName.MAIN, gens, rels)


def group_G_presentation(n: int) -> Presentation:
    gens = [g(n, i) for i in range(n)] + [gp(n, i) for i in range(n)]
    rotated = word(n, [g(n, 0)]) * descending_run(n, n - 1, n - 1)  # g_0 g_{n-1}...g_1
    rels = [commutator(word(n, [g(n, 0)]), word(n, [gp(n, 0)]))]
    rels += [commutator(word(n, [g(n, i)]), rotated) for i in range(n)]
    rels += [commutator(word(n, [g(n, n - i)]), word(n, [gp(n, i)])) for i in range(n)]
    rels += [commutator(word(n, [gp(n, i)]), prime_product_g_style(n)) for i in range(n)]
    return make_presentation(n, PresName.GROUP_G, gens, rels)


def quotient_fn_presentation(n: int) -> Presentation:
    return make_presentation(n, PresName.QUOTIENT_FN, [gpp(n, i) for i in range(n)], [])


# --- the infinity chart ------------------------------------------------------
#
# U_infty is the mirror chart y != 0, |x/y| < 2*epsilon.  Its generators
# g_{infty,i}, g'_{infty,i} are written with the same g/gp tokens: a word's
# alphabet is interpreted per presentation.


def phi_symmetry(n: int) -> FreeAutomorphism:
    """The coordinate swap [x:y:z] -> [y:x:z]: g_i -> g'_{infty,n-i}, g_j' -> g_{infty,n-j}."""
    images: dict[GeneratorSymbol, Word] = {}
    for i in range(n):
        images[g(n, i)] = word(n, [gp(n, n - i)])
        images[gp(n, i)] = word(n, [g(n, n - i)])
    return FreeAutomorphism(n, images)


def rel_u_infty(n: int) -> list[Word]:
    """For j=1..n-1: g'_{inf,j}...g'_{inf,n-1} g'_{inf,0}...g'_{inf,j-1} = g'_{inf,0}...g'_{inf,n-1}."""
    rhs = word(n, [gp(n, i) for i in range(n)])
    out = []
    for j in range(1, n):
        lhs = word(n, [gp(n, (j + a) % n) for a in range(n)])
        out.append(relator_of_equation(lhs, rhs))
    return out


def rel_u_infty_translated(n: int) -> list[Word]:
    """For j=1..n-1: g'_j...g'_{n-1} g'_0...g'_{j-1} = g'_0...g'_{n-1} (same shape, base alphabet)."""
    return rel_u_infty(n)


def uinfty_presentations(n: int) -> tuple[Presentation, Presentation]:
    fiber = fiber_alphabet(n)
    u_infty = make_presentation(n, PresName.U_INFTY, fiber, rel_u_infty(n))

    gens = [gamma(n, 0)] + fiber  # gamma token 0 stands for gamma_infty here
    gam = word(n, [gamma(n, 0)])
    g_inf = word(n, [gp(n, i) for i in range(n)])  # the cyclic product at infinity
    rels = []
    for i in range(n):
        lhs = invert(gam) * word(n, [gp(n, i)]) * gam
        rels.append(relator_of_equation(lhs, word(n, [gp(n, i)])))
    for i in range(n):
        lhs = invert(gam) * word(n, [g(n, i)]) * gam
        rhs = (
            invert(g_inf)
            * word(n, [(gp(n, n - i), -1), (g(n, i), 1), (gp(n, n - i), 1)])
            * g_inf
        )
        rels.append(relator_of_equation(lhs, rhs))
    u_infty_minus_x = make_presentation(n, PresName.U_INFTY_MINUS_X, gens, rels)
    return u_infty, u_infty_minus_x


def translate_infinity(n: int) -> FreeAutomorphism:
    """Base change along alpha: g_{infty,i} -> g'_{n-i}^-1 g_i g'_{n-i}; g'_{infty,i} -> g_i'."""
    images: dict[GeneratorSymbol, Word] = {}
    for i in range(n):
        images[g(n, i)] = word(n, [(gp(n, n - i), -1), (g(n, i), 1), (gp(n, n - i), 1)])
        images[gp(n, i)] = word(n, [gp(n, i)])
    return FreeAutomorphism(n, images)


# --- structural checks -------------------------------------------------------


@dataclass(frozen=True)
class SemidirectReport:
    n: int
    deletion_failures: tuple[str, ...]  # main relators whose g''-shadow is nontrivial
    g_relator_failures: tuple[str, ...]  # G relators mentioning g''
    quotient: Presentation

    @property
    def passed(self) -> bool:
        return not self.deletion_failures and not self.g_relator_failures


def semidirect_check(n: int) -> SemidirectReport:
    """Mechanical check of the split short exact sequence 1 -> G -> pi_1 -> F_n -> 1.

    (a) deleting all g/g' letters from each relator of the full presentation
    must leave a word that freely reduces to the empty word (the quotient by
    the normal closure of the fiber generators is free on the g''), and
    (b) every relator of G must be a word in g/g' only.
    """
    deletion_failures = []
    for r in main_presentation(n).relators:
        shadow = Word(n, tuple(lt for lt in r.letters if lt.symbol.family is Family.LINE_GPP))
        if free_reduce(shadow).letters:
            deletion_failures.append(".".join(r.tokens()))
    g_failures = []
    for r in group_G_presentation(n).relators:
        if any(lt.symbol.family not in FIBER_FAMILIES for lt in r.letters):
            g_failures.append(".".join(r.tokens()))
    return SemidirectReport(
        n, tuple(deletion_failures), tuple(g_failures), quotient_fn_presentation(n)
    )


def remark_k_table(n: int, i: int) -> dict[int, Word]:
    """Low-k commutator shapes equivalent to the conjugation relators.

    Diagnostic only (printed by the consistency checker, never asserted): the
    k=0 row extends the pattern below the k>=1 range of the relator families.
    """
    out = {
        0: commutator(
            word(n, [g(n, n - i)]), word(n, [gpp(n, 1), gp(n, i - 1)])
        ),
        1: commutator(word(n, [g(n, i)]), word(n, [gpp(n, 0)])),
    }
    if n >= 2:
        out[2] = commutator(
            word(n, [g(n, n - i)]),
            word(n, [gpp(n, n - 1), g(n, n - i), gp(n, i + 1)]),
        )
    if n >= 3:
        out[3] = commutator(
            word(n, [g(n, n - i)]),
            word(
                n,
                [
                    (gpp(n, n - 2), 1),
                    (g(n, n - i), 1),
                    (g(n, n - i - 1), 1),
                    (gp(n, i + 2), 1),
                    (g(n, n - i - 1), -1),
                ],
            ),
        )
    return out
