"""Presentation-level invariants: abelianization, finite-quotient counts, Tietze moves.

All matrix arithmetic is exact over Python ints; the matrices involved are a
few dozen rows by at most 3n columns, so there is no need for anything faster
than textbook row/column reduction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Letter, Word, cyclic_reduce, exponent_vector, free_reduce, invert
from .presentation import Presentation, make_presentation

Matrix = list[list[int]]


class ResourceLimitError(Exception):
    """A guarded search space is too large to enumerate."""


def _identity(k: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    cols = len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(cols)]
        for i in range(len(a))
    ]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Exact Smith normal form: returns (U, D, V) with U*A*V = D.

    U and V are built from elementary row/column operations, hence unimodular;
    D is diagonal with d1 | d2 | ... and non-negative diagonal entries.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    A: Matrix = [list(map(int, row)) for row in a]
    for row in A:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the trailing submatrix
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t then row t; a nonzero remainder becomes the new,
            # strictly smaller pivot, so this terminates
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility: fold any non-multiple into column t and loop again
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % A[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1

    D = A
    check = _mat_mul(_mat_mul(U, [list(map(int, row)) for row in a]), V) if rows and cols else D
    assert not rows or not cols or check == D
    diag = [D[i][i] for i in range(min(rows, cols))]
    for x, y in zip(diag, diag[1:]):
        assert (x == 0 and y == 0) or (x != 0 and y % x == 0)
    return U, D, V


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]  # entries >= 2, each dividing the next

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for x, y in zip(self.torsion, self.torsion[1:]):
            if x < 2 or y % x:
                raise ValueError(f"torsion {self.torsion} violates divisibility")
        if self.torsion and self.torsion[-1] < 2:
            raise ValueError(f"torsion {self.torsion} violates divisibility")

    def describe(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relator_matrix(p: Presentation) -> Matrix:
    """Rows = relators, columns = generators, entries = exponent sums."""
    index = {sym: j for j, sym in enumerate(p.generators)}
    out = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for sym, e in exponent_vector(r).items():
            row[index[sym]] = e
        out.append(row)
    return out


def abelianization(p: Presentation) -> AbelianInvariants:
    mat = relator_matrix(p)
    if not mat:
        return AbelianInvariants(len(p.generators), ())
    _, d, _ = smith_normal_form(mat)
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    rank = sum(1 for x in diag if x)
    torsion = tuple(x for x in diag if x > 1)
    return AbelianInvariants(len(p.generators) - rank, torsion)


# --- homomorphism counting ---------------------------------------------------

Perm = tuple[int, ...]


def symmetric_group(m: int) -> list[Perm]:
    return [tuple(s) for s in itertools.permutations(range(m))]


def perm_compose(a: Perm, b: Perm) -> Perm:
    """(a then b): result[i] = b[a[i]]."""
    return tuple(b[x] for x in a)


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


@dataclass(frozen=True)
class HomCount:
    target: str  # "S2".."S5"
    count: int

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("negative count")


def count_homomorphisms(p: Presentation, m: int) -> HomCount:
    """Exact number of homomorphisms from the presented group into S_m.

    Backtracking over generator images, generators ordered by how many
    relators touch them (descending); each relator is evaluated as soon as
    its last symbol gets an image.  Generators appearing in no relator are
    free and contribute a factor |S_m| each.
    """
    if not 1 <= m <= 5:
        raise ValueError(f"symmetric group index out of range: {m}")
    group = symmetric_group(m)
    order = len(group)
    if order ** len(p.generators) > 10**12:
        raise ResourceLimitError(
            f"{order}^{len(p.generators)} assignments exceed the 1e12 guard"
        )

    touched: dict = {sym: 0 for sym in p.generators}
    for r in p.relators:
        for sym in {lt.symbol for lt in r.letters}:
            touched[sym] += 1
    bound = [sym for sym in p.generators if touched[sym]]
    free = len(p.generators) - len(bound)
    bound.sort(key=lambda s: (-touched[s], s.sort_key()))
    pos = {sym: j for j, sym in enumerate(bound)}

    # relators become checkable once their highest-position symbol is assigned
    ready: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in bound]
    for r in p.relators:
        seq = tuple((pos[lt.symbol], lt.sign) for lt in r.letters)
        depth = max(j for j, _ in seq)
        ready[depth].append(seq)

    identity = tuple(range(m))
    images: list[Perm] = [identity] * len(bound)
    inverse_of = {s: perm_inverse(s) for s in group}

    def satisfied(seq) -> bool:
        acc = identity
        for j, sign in seq:
            x = images[j] if sign == 1 else inverse_of[images[j]]
            acc = perm_compose(acc, x)
        return acc == identity

    def dfs(depth: int) -> int:
        if depth == len(bound):
            return 1
        total = 0
        for cand in group:
            images[depth] = cand
            if all(satisfied(seq) for seq in ready[depth]):
                total += dfs(depth + 1)
        return total

    count = dfs(0) if bound else 1
    return HomCount(f"S{m}", count * order**free)


# --- Tietze simplification ----------------------------------------------------


def _cyclic_inversion_key(w: Word) -> tuple:
    """Canonical key identifying relators up to cyclic rotation and inversion."""
    core, _ = cyclic_reduce(w)
    variants = []
    for u in (core, invert(core)):
        letters = list(u.letters)
        for r in range(max(1, len(letters))):
            rot = letters[r:] + letters[:r]
            variants.append(
                tuple((lt.symbol.family.value, lt.symbol.index, lt.sign) for lt in rot)
            )
    return min(variants) if variants else ()


def tietze_simplify(p: Presentation) -> Presentation:
    """Drop empties, dedup up to rotation/inversion, eliminate defined generators.

    A relator of shape g·w⁻¹ with g not occurring in w defines g; the
    generator is removed and w substituted for it everywhere.  Repeats until
    stable.  Abelianization is asserted unchanged.
    """
    before = abelianization(p)
    gens = list(p.generators)
    relators = [free_reduce(r) for r in p.relators]

    changed = True
    while changed:
        changed = False
        # dedup up to cyclic rotation + inversion, drop empties
        seen = set()
        kept = []
        for r in relators:
            if not r.letters:
                continue
            key = _cyclic_inversion_key(r)
            if key in seen:
                continue
            seen.add(key)
            kept.append(r)
        if len(kept) != len(relators):
            changed = True
        relators = kept

        # find a generator occurring exactly once across one relator and absent
        # from the rest of that relator: rotate to g * w^-1 and substitute
        elim = None
        for idx, r in enumerate(relators):
            counts: dict = {}
            for lt in r.letters:
                counts[lt.symbol] = counts.get(lt.symbol, 0) + 1
            for j, lt in enumerate(r.letters):
                if counts[lt.symbol] == 1:
                    elim = (idx, j, lt)
                    break
            if elim:
                break
        if elim is None:
            continue
        idx, j, lt = elim
        r = relators[idx]
        rest = Word(p.n, r.letters[j + 1 :] + r.letters[:j])  # r ~ lt * rest cyclically
        replacement = invert(rest) if lt.sign == 1 else free_reduce(rest)
        sym = lt.symbol

        def substitute(w: Word) -> Word:
            out = []
            for letter in w.letters:
                if letter.symbol == sym:
                    out.extend(
                        (replacement if letter.sign == 1 else invert(replacement)).letters
                    )
                else:
                    out.append(letter)
            return free_reduce(Word(p.n, tuple(out)))

        relators = [substitute(w) for k, w in enumerate(relators) if k != idx]
        gens = [s for s in gens if s != sym]
        changed = True

    out = make_presentation(p.n, p.name, gens, relators)
    after = abelianization(out)
    assert before == after, f"Tietze moves changed abelianization: {before} -> {after}"
    return out


# --- fingerprints -------------------------------------------------------------


@dataclass(frozen=True)
class FingerprintReport:
    abelianization: tuple[AbelianInvariants, AbelianInvariants]
    hom_counts: tuple[tuple[str, int, int], ...]  # (target, count1, count2)
    verdict: str  # "consistent" or "distinguished"
    distinctions: tuple[str, ...]


def fingerprint_compare(p1: Presentation, p2: Presentation) -> FingerprintReport:
    """Compare isomorphism invariants; equality only ever means "consistent"."""
    a1, a2 = abelianization(p1), abelianization(p2)
    distinctions = []
    if a1 != a2:
        distinctions.append(
            f"abelianization differs: {a1.describe()} vs {a2.describe()}"
        )
    targets = [2, 3]
    if 24 ** max(len(p1.generators), len(p2.generators)) <= 10**12:
        targets.append(4)
    hom_rows = []
    for m in targets:
        c1 = count_homomorphisms(p1, m).count
        c2 = count_homomorphisms(p2, m).count
        hom_rows.append((f"S{m}", c1, c2))
        if c1 != c2:
            distinctions.append(f"hom counts into S{m} differ: {c1} vs {c2}")
    return FingerprintReport(
        (a1, a2),
        tuple(hom_rows),
        "distinguished" if distinctions else "consistent",
        tuple(distinctions),
    )
