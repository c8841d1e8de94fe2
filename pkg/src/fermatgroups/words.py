"""Exact free-group word algebra over the presentation alphabet.

Words are flat sequences of signed generator letters.  Nothing in here knows
about relations: equality, conjugacy and inversion are all decided in the free
group.  Indices of the three line families are normalized mod n at symbol
construction, so g_n == g_0 automatically; the base-loop family is stored as
given (gamma_0 .. gamma_n are n+1 distinct loops).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class DomainError(Exception):
    """A word mentions a symbol outside an endomorphism's domain."""


class Family(enum.Enum):
    FIBER_G = "g"
    FIBER_GP = "gp"
    LINE_GPP = "gpp"
    BASE_GAMMA = "gamma"


#: The two families an automorphism of the fiber group acts on.
FIBER_FAMILIES = (Family.FIBER_G, Family.FIBER_GP)


@dataclass(frozen=True)
class GeneratorSymbol:
    family: Family
    index: int

    def token(self) -> str:
        return f"{self.family.value}{self.index}"

    def sort_key(self) -> tuple[str, int]:
        return (self.family.value, self.index)

    def __repr__(self) -> str:
        return self.token()


def g(n: int, i: int) -> GeneratorSymbol:
    """The fiber generator g_i (a loop around an L_x puncture), index mod n."""
    _check_n(n)
    return GeneratorSymbol(Family.FIBER_G, i % n)


def gp(n: int, i: int) -> GeneratorSymbol:
    """The fiber generator g'_i (a loop around an L_y puncture), index mod n."""
    _check_n(n)
    return GeneratorSymbol(Family.FIBER_GP, i % n)


def gpp(n: int, i: int) -> GeneratorSymbol:
    """The generator g''_i (a loop around an L_z line), index mod n."""
    _check_n(n)
    return GeneratorSymbol(Family.LINE_GPP, i % n)


def gamma(n: int, k: int) -> GeneratorSymbol:
    """The base loop symbol gamma_k.  k ranges over 0..n and is NOT reduced."""
    _check_n(n)
    if not 0 <= k <= n:
        raise ValueError(f"gamma index must lie in 0..{n}, got {k}")
    return GeneratorSymbol(Family.BASE_GAMMA, k)


def _check_n(n: int) -> None:
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class Letter:
    symbol: GeneratorSymbol
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def token(self) -> str:
        return self.symbol.token() + ("^-1" if self.sign < 0 else "")

    def sort_key(self) -> tuple[str, int, int]:
        return self.symbol.sort_key() + (self.sign,)

    def __repr__(self) -> str:
        return self.token()


@dataclass(frozen=True)
class Word:
    """A (possibly unreduced) word over the alphabet, with its ambient n."""

    n: int
    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        for lt in self.letters:
            bound = self.n + 1 if lt.symbol.family is Family.BASE_GAMMA else self.n
            if not 0 <= lt.symbol.index < bound:
                raise ValueError(f"letter {lt} has index out of range for n={self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        # Plain concatenation -- deliberately unreduced, so that literal
        # comparisons against longhand words can be made before reduction.
        if self.n != other.n:
            raise ValueError(f"ambient n mismatch: {self.n} vs {other.n}")
        return Word(self.n, self.letters + other.letters)

    def is_reduced(self) -> bool:
        return all(
            not (a.symbol == b.symbol and a.sign == -b.sign)
            for a, b in zip(self.letters, self.letters[1:])
        )

    def tokens(self) -> list[str]:
        if not self.letters:
            return ["1"]
        return [lt.token() for lt in self.letters]

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(lt.sort_key() for lt in self.letters))

    def __repr__(self) -> str:
        return ".".join(self.tokens())


def empty_word(n: int) -> Word:
    return Word(n, ())


def word(n: int, items: Iterable[GeneratorSymbol | Letter | tuple[GeneratorSymbol, int]]) -> Word:
    """Build a word from symbols (sign +1), letters, or (symbol, sign) pairs."""
    letters: list[Letter] = []
    for item in items:
        if isinstance(item, Letter):
            letters.append(item)
        elif isinstance(item, GeneratorSymbol):
            letters.append(Letter(item, 1))
        else:
            sym, sign = item
            letters.append(Letter(sym, sign))
    return Word(n, tuple(letters))


def concat(*ws: Word) -> Word:
    if not ws:
        raise ValueError("concat needs at least one word")
    out = ws[0]
    for w in ws[1:]:
        out = out * w
    return out


def free_reduce(w: Word) -> Word:
    """The unique freely reduced representative of w (idempotent)."""
    out: list[Letter] = []
    for lt in w.letters:
        if out and out[-1].symbol == lt.symbol and out[-1].sign == -lt.sign:
            out.pop()
        else:
            out.append(lt)
    return Word(w.n, tuple(out))


def invert(w: Word) -> Word:
    """Reverse the letter order and flip every sign."""
    return Word(w.n, tuple(lt.inverse() for lt in reversed(w.letters)))


def conjugate(w: Word, by: Word) -> Word:
    """free_reduce(by^-1 * w * by)."""
    return free_reduce(invert(by) * w * by)


def commutator(a: Word, b: Word) -> Word:
    """[a, b] := a * b * a^-1 * b^-1, freely reduced."""
    return free_reduce(a * b * invert(a) * invert(b))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split w = p * core * p^-1 with core cyclically reduced.

    Returns (core, p).  p is the stripped prefix in stripping order; both are
    freely reduced.
    """
    w = free_reduce(w)
    letters = list(w.letters)
    prefix: list[Letter] = []
    while len(letters) >= 2 and letters[0] == letters[-1].inverse():
        prefix.append(letters[0])
        letters = letters[1:-1]
    return Word(w.n, tuple(letters)), Word(w.n, tuple(prefix))


def _rotations(core: Word) -> Iterator[tuple[int, tuple[Letter, ...]]]:
    lts = core.letters
    for r in range(len(lts)):
        yield r, lts[r:] + lts[:r]


def is_conjugate_free(u: Word, v: Word) -> tuple[bool, Optional[Word]]:
    """Decide conjugacy of u and v in the free group.

    Conjugacy is decided by cyclic reduction followed by cyclic-rotation
    matching.  On success a witness word c with c^-1 * u * c = v (freely) is
    returned; among all rotation witnesses the shortest is picked, with ties
    broken lexicographically by symbol order.
    """
    if u.n != v.n:
        raise ValueError(f"ambient n mismatch: {u.n} vs {v.n}")
    cu, p = cyclic_reduce(u)
    cv, q = cyclic_reduce(v)
    if len(cu) != len(cv):
        return False, None
    if len(cu) == 0:
        return True, empty_word(u.n)
    candidates = []
    for r, rotated in _rotations(cu):
        if rotated == cv.letters:
            # c = p * cu[:r] * q^-1 sends u to v: rotating the core by r is
            # conjugation by its length-r prefix.
            c = free_reduce(p * Word(u.n, cu.letters[:r]) * invert(q))
            candidates.append(c)
    if not candidates:
        return False, None
    best = min(candidates, key=lambda c: c.sort_key())
    assert conjugate(u, best) == free_reduce(v)
    return True, best


@dataclass(frozen=True)
class FreeAutomorphism:
    """A finite map generator -> Word over the 2n fiber generators.

    The domain is exactly {g_0..g_{n-1}, g'_0..g'_{n-1}} and every image word
    uses only those two families.
    """

    n: int
    images: Mapping[GeneratorSymbol, Word]

    def __post_init__(self) -> None:
        expected = set(fiber_alphabet(self.n))
        if set(self.images) != expected:
            raise ValueError("automorphism domain must be exactly the 2n fiber generators")
        for sym, img in self.images.items():
            if img.n != self.n:
                raise ValueError(f"image of {sym} has wrong ambient n")
            for lt in img.letters:
                if lt.symbol.family not in FIBER_FAMILIES:
                    raise ValueError(f"image of {sym} uses non-fiber symbol {lt.symbol}")

    def __call__(self, w: Word) -> Word:
        return apply_endomorphism(self, w)


def fiber_alphabet(n: int) -> list[GeneratorSymbol]:
    """The 2n fiber generators, g-family first: g_0..g_{n-1}, g'_0..g'_{n-1}."""
    return [g(n, i) for i in range(n)] + [gp(n, i) for i in range(n)]


def identity_automorphism(n: int) -> FreeAutomorphism:
    return FreeAutomorphism(n, {s: word(n, [s]) for s in fiber_alphabet(n)})


def apply_endomorphism(f: FreeAutomorphism, w: Word) -> Word:
    """Homomorphic substitution of f into w, freely reduced."""
    if f.n != w.n:
        raise ValueError(f"ambient n mismatch: {f.n} vs {w.n}")
    out: list[Letter] = []
    for lt in w.letters:
        if lt.symbol not in f.images:
            raise DomainError(f"symbol {lt.symbol} outside the endomorphism domain")
        img = f.images[lt.symbol]
        if lt.sign < 0:
            img = invert(img)
        for piece in img.letters:
            if out and out[-1] == piece.inverse():
                out.pop()
            else:
                out.append(piece)
    return Word(w.n, tuple(out))


def compose(outer: FreeAutomorphism, inner: FreeAutomorphism) -> FreeAutomorphism:
    """The map x -> outer(inner(x)): inner is applied first."""
    if outer.n != inner.n:
        raise ValueError("ambient n mismatch")
    return FreeAutomorphism(
        outer.n, {s: apply_endomorphism(outer, img) for s, img in inner.images.items()}
    )


def exponent_vector(w: Word) -> dict[GeneratorSymbol, int]:
    """Signed letter counts per generator; zero entries are dropped."""
    out: dict[GeneratorSymbol, int] = {}
    for lt in w.letters:
        out[lt.symbol] = out.get(lt.symbol, 0) + lt.sign
    return {s: e for s, e in out.items() if e != 0}


# --- token serialization ----------------------------------------------------

_TOKEN_RE = re.compile(r"^(gamma|gpp|gp|g)(\d+)(\^-1)?$")


def parse_token(tok: str, n: int) -> Letter:
    m = _TOKEN_RE.match(tok)
    if m is None:
        raise ValueError(f"malformed word token: {tok!r}")
    fam = Family(m.group(1))
    idx = int(m.group(2))
    sign = -1 if m.group(3) else 1
    if fam is Family.BASE_GAMMA:
        sym = gamma(n, idx)
    else:
        if idx >= n:
            raise ValueError(f"token {tok!r} has index out of range for n={n}")
        sym = GeneratorSymbol(fam, idx)
    return Letter(sym, sign)


def parse_word(tokens: Sequence[str], n: int) -> Word:
    """Inverse of Word.tokens(): ["1"] (or []) denotes the empty word."""
    if list(tokens) in ([], ["1"]):
        return empty_word(n)
    return Word(n, tuple(parse_token(t, n) for t in tokens))
