"""Numerical monodromy: track fiber punctures along base loops, read off braids,
and compare the induced free-group automorphisms with the formula actions.

Conventions (all deterministic, fixed here once):

* The fiber coordinate is pre-rotated by +0.003 rad before comparing real
  parts, so the roots of unity never tie vertically.  Strand positions are the
  ranks in this rotated real-part order, 1-based, left to right.
* A crossing of adjacent strands emits a positive Artin letter sigma_i exactly
  when the strand previously on the left passes below the other (smaller
  interpolated imaginary part).  A counterclockwise full twist of two
  punctures therefore reads sigma_i^2.
* sigma_i acts by x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i; the automorphism
  of a braid word is folded chronologically, last crossing outermost.
* Punctures over base b: the x-family at b*zeta_n^-j, the y-family at
  zeta_n^j for every n (the y-family is independent of the base point).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .arrangement import (
    FiberConfiguration,
    LineTag,
    Puncture,
    fiber_punctures,
    roots_of_unity,
    zeta_pow,
)
from .presentation import loop_action, translate_infinity
from .words import (
    FreeAutomorphism,
    GeneratorSymbol,
    Word,
    apply_endomorphism,
    compose,
    concat,
    conjugate,
    empty_word,
    fiber_alphabet,
    free_reduce,
    g,
    gp,
    invert,
    is_conjugate_free,
    word,
)

PRE_ROTATION = 0.003
CROSSING_TIE_TOL = 1e-12
CLOSURE_TOL = 1e-8
MAX_STEPS = 2**20
DEFAULT_EPSILON = 0.1
DEFAULT_DELTA = 0.02


class NumericTrackingError(RuntimeError):
    """Tracking or braid extraction could not be stabilized numerically."""


class _RefinementNeeded(Exception):
    pass


class LoopKind(enum.Enum):
    GAMMA0 = "Gamma0"
    GAMMA_K = "GammaK"
    ALPHA = "Alpha"


@dataclass(frozen=True)
class BaseLoop:
    kind: LoopKind
    n: int
    epsilon: float
    delta: float
    k: Optional[int] = None  # loop index for GAMMA_K (1..n)

    @property
    def total_time(self) -> float:
        return {LoopKind.GAMMA0: 1.0, LoopKind.GAMMA_K: 5.0, LoopKind.ALPHA: 3.0}[self.kind]

    @property
    def is_closed(self) -> bool:
        return self.kind is not LoopKind.ALPHA

    def at(self, t: float) -> complex:
        eps, dlt, n = self.epsilon, self.delta, self.n
        if self.kind is LoopKind.GAMMA0:
            return eps * cmath.exp(2j * math.pi * t)
        if self.kind is LoopKind.GAMMA_K:
            j = self.k - 1
            z = zeta_pow(n, j)
            if t <= 1:
                return eps * cmath.exp(2j * math.pi * t * j / n)
            if t <= 2:
                return z * (2 * eps + dlt - 1) + t * z * (1 - dlt - eps)
            if t <= 3:
                return z * (1 - dlt * cmath.exp(2j * math.pi * (t - 2)))
            if t <= 4:
                return z * (2 * eps + dlt - 1) + (5 - t) * z * (1 - dlt - eps)
            return eps * cmath.exp(2j * math.pi * (5 - t) * j / n)
        # alpha: epsilon -> 1-delta -> around 1 -> 1/epsilon, along the real axis
        if t <= 1:
            return eps + (1 - dlt - eps) * t
        if t <= 2:
            return 1 + dlt * cmath.exp(1j * math.pi * t)
        return 1 + dlt + (1 / eps - 1 - dlt) * (t - 2)

    def label(self) -> str:
        if self.kind is LoopKind.GAMMA0:
            return f"gamma0(n={self.n})"
        if self.kind is LoopKind.GAMMA_K:
            return f"gamma{self.k}(n={self.n})"
        return f"alpha(n={self.n})"


def base_loop(kind: LoopKind, n: int, epsilon: float = DEFAULT_EPSILON,
              delta: float = DEFAULT_DELTA, k: Optional[int] = None) -> BaseLoop:
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not 0 < delta < epsilon:
        raise ValueError(f"need 0 < delta < epsilon, got delta={delta}, epsilon={epsilon}")
    if not 2 * epsilon < 1 / 3:
        raise ValueError(f"need 2*epsilon < 1/3, got epsilon={epsilon}")
    if not delta < epsilon / 2:
        raise ValueError(f"need delta < epsilon/2, got delta={delta}, epsilon={epsilon}")
    if kind is LoopKind.GAMMA_K:
        if k is None or not 1 <= k <= n:
            raise ValueError(f"GammaK needs 1 <= k <= n, got k={k}")
    elif k is not None:
        raise ValueError(f"loop kind {kind} takes no index k")
    return BaseLoop(kind, n, float(epsilon), float(delta), k)


def loop_for_index(n: int, k, epsilon: float = DEFAULT_EPSILON,
                   delta: float = DEFAULT_DELTA) -> BaseLoop:
    """k in 0..n selects gamma_k; the string "alpha" selects the base change path."""
    if k == "alpha":
        return base_loop(LoopKind.ALPHA, n, epsilon, delta)
    if k == 0:
        return base_loop(LoopKind.GAMMA0, n, epsilon, delta)
    return base_loop(LoopKind.GAMMA_K, n, epsilon, delta, k=k)


# --- tracking -----------------------------------------------------------------


@dataclass(frozen=True)
class PunctureTrajectory:
    loop: BaseLoop
    samples: tuple[tuple[float, FiberConfiguration], ...]
    #: per sample, the matching of its punctures to the previous sample's
    #: (tag -> tag); nearest-neighbor matching is asserted to be the identity
    strand_identity: tuple[dict, ...]
    min_gap: float
    max_step: float


def _branch_margin(loop: BaseLoop, b: complex) -> float:
    specials = (0j,) + roots_of_unity(loop.n)
    return min(abs(b - s) for s in specials)


def _track_once(loop: BaseLoop, steps: int) -> PunctureTrajectory:
    total = loop.total_time
    ts = [total * i / steps for i in range(steps + 1)]
    configs = []
    for t in ts:
        b = loop.at(t)
        if _branch_margin(loop, b) < loop.delta / 2 - 1e-12:
            raise ValueError(f"path point {b} violates the delta/2 branch margin")
        configs.append(fiber_punctures(loop.n, b))

    min_gap = min(c.min_gap() for c in configs)
    max_step = 0.0
    for prev, cur in zip(configs, configs[1:]):
        gap = min(prev.min_gap(), cur.min_gap())
        prev_pos = {p.tag: p.position for p in prev.punctures}
        for q in cur.punctures:
            dists = sorted(
                ((abs(q.position - pos), tag) for tag, pos in prev_pos.items()),
                key=lambda it: it[0],
            )
            d1, tag1 = dists[0]
            if len(dists) > 1 and dists[1][0] < 2 * d1:
                raise _RefinementNeeded  # ambiguous nearest-neighbor match
            if tag1 != q.tag:
                raise _RefinementNeeded  # strand swap slipped past the matcher
            if d1 >= gap / 3:
                raise _RefinementNeeded
            max_step = max(max_step, d1)

    if loop.is_closed:
        first = {p.tag: p.position for p in configs[0].punctures}
        last = {p.tag: p.position for p in configs[-1].punctures}
        for tag, pos in first.items():
            if abs(pos - last[tag]) > CLOSURE_TOL:
                raise NumericTrackingError(
                    f"loop did not close: puncture {tag} moved by {abs(pos - last[tag])}"
                )

    identity = {p.tag: p.tag for p in configs[0].punctures}
    return PunctureTrajectory(
        loop,
        tuple(zip(ts, configs)),
        tuple(identity for _ in configs),
        min_gap,
        max_step,
    )


def track_punctures(loop: BaseLoop, steps: int = 256) -> PunctureTrajectory:
    """Sample the loop, doubling the step count until every consecutive pair of
    fiber configurations matches unambiguously by nearest neighbor."""
    while True:
        try:
            return _track_once(loop, steps)
        except _RefinementNeeded:
            steps *= 2
            if steps > MAX_STEPS:
                raise NumericTrackingError(
                    f"displacement bound not met within {MAX_STEPS} steps on {loop.label()}"
                ) from None


# --- braid extraction ---------------------------------------------------------


@dataclass(frozen=True)
class Braid:
    strand_count: int
    letters: tuple[tuple[int, int], ...]  # (position 1..strand_count-1, sign +-1)

    def __post_init__(self) -> None:
        for pos, sign in self.letters:
            if not 1 <= pos <= self.strand_count - 1:
                raise ValueError(f"braid letter position {pos} out of range")
            if sign not in (-1, 1):
                raise ValueError(f"braid letter sign must be +-1, got {sign}")

    def word_str(self) -> str:
        if not self.letters:
            return "e"
        return ".".join(f"s{p}" if s == 1 else f"s{p}^-1" for p, s in self.letters)

    def permutation(self) -> tuple[int, ...]:
        """result[p] = 0-based index of the starting strand that ends at position p."""
        at_pos = list(range(self.strand_count))
        for pos, _ in self.letters:
            i = pos - 1
            at_pos[i], at_pos[i + 1] = at_pos[i + 1], at_pos[i]
        return tuple(at_pos)


def _rotated(config: FiberConfiguration) -> dict:
    rot = cmath.exp(1j * PRE_ROTATION)
    return {p.tag: p.position * rot for p in config.punctures}


def _re_order(points: dict) -> tuple:
    return tuple(tag for tag, z in sorted(points.items(), key=lambda kv: kv[1].real))


def extract_braid(traj: PunctureTrajectory) -> Braid:
    """Read the braid from changes of the rotated real-part order.

    Each step contributes the crossings of every pair whose relative order
    flips, sorted by interpolated crossing time; a crossing of strands that
    are not adjacent at its moment, or an imaginary-part tie at a crossing,
    aborts (the caller re-tracks with more steps).
    """
    samples = [(_rotated(cfg)) for _, cfg in traj.samples]
    current = list(_re_order(samples[0]))
    letters: list[tuple[int, int]] = []

    for prev, cur in zip(samples, samples[1:]):
        order_after = _re_order(cur)
        if tuple(current) == order_after:
            continue
        tags = list(prev)
        events = []
        for a_idx in range(len(tags)):
            for b_idx in range(a_idx + 1, len(tags)):
                a, b = tags[a_idx], tags[b_idx]
                d0 = prev[a].real - prev[b].real
                d1 = cur[a].real - cur[b].real
                if abs(d0) < CROSSING_TIE_TOL or abs(d1) < CROSSING_TIE_TOL:
                    raise NumericTrackingError(f"real-part tie between {a} and {b}")
                if (d0 > 0) != (d1 > 0):
                    tau = d0 / (d0 - d1)
                    events.append((tau, a, b))
        events.sort(key=lambda e: e[0])
        for tau, a, b in events:
            ia, ib = current.index(a), current.index(b)
            if abs(ia - ib) != 1:
                raise NumericTrackingError(
                    f"non-adjacent crossing of {a} and {b} (positions {ia+1}, {ib+1})"
                )
            left = current[min(ia, ib)]
            right = current[max(ia, ib)]
            im_left = (1 - tau) * prev[left].imag + tau * cur[left].imag
            im_right = (1 - tau) * prev[right].imag + tau * cur[right].imag
            if abs(im_left - im_right) < CROSSING_TIE_TOL:
                raise NumericTrackingError(f"imaginary-part tie between {a} and {b}")
            sign = 1 if im_left < im_right else -1
            letters.append((min(ia, ib) + 1, sign))
            current[min(ia, ib)], current[max(ia, ib)] = right, left
        if tuple(current) != order_after:
            raise NumericTrackingError("crossing decomposition did not reproduce the order")

    braid = Braid(len(current), tuple(letters))
    if traj.loop.is_closed and braid.permutation() != tuple(range(braid.strand_count)):
        raise NumericTrackingError("closed loop produced a non-pure braid")
    return braid


# --- braid action on the free group -------------------------------------------


def _canonical_symbol(n: int, position: int) -> GeneratorSymbol:
    """Strand position 1..2n as a fiber symbol: g_0..g_{n-1}, then g'_0..g'_{n-1}."""
    return g(n, position - 1) if position <= n else gp(n, position - n - 1)


def braid_to_automorphism(b: Braid) -> FreeAutomorphism:
    if b.strand_count % 2:
        raise ValueError("braid automorphisms here live on 2n strands")
    n = b.strand_count // 2
    syms = [_canonical_symbol(n, p) for p in range(1, 2 * n + 1)]

    def letter_auto(pos: int, sign: int) -> FreeAutomorphism:
        x, y = syms[pos - 1], syms[pos]
        images = {s: word(n, [s]) for s in syms}
        if sign == 1:
            images[x] = word(n, [(x, 1), (y, 1), (x, -1)])
            images[y] = word(n, [x])
        else:
            images[x] = word(n, [y])
            images[y] = word(n, [(y, -1), (x, 1), (y, 1)])
        return FreeAutomorphism(n, images)

    m = FreeAutomorphism(n, {s: word(n, [s]) for s in syms})
    for pos, sign in b.letters:
        m = compose(letter_auto(pos, sign), m)

    ordered = word(n, syms)
    assert free_reduce(apply_endomorphism(m, ordered)) == ordered, (
        "Artin action failed to fix the ordered product of strand generators"
    )
    return m


# --- dictionaries and relabeling -----------------------------------------------


def _positions_by_rank(config: FiberConfiguration) -> list:
    points = _rotated(config)
    return list(_re_order(points))


def strand_dictionary(config: FiberConfiguration) -> dict[int, GeneratorSymbol]:
    """Position (1-based, by rotated real part) -> generator, over the standard fiber."""
    if abs(config.base_value.imag) > 1e-9 or not 0 < config.base_value.real < 1 / 3:
        raise ValueError("strand_dictionary expects the standard fiber over a small real base")
    n = len(config.punctures) // 2
    out = {}
    for rank, tag in enumerate(_positions_by_rank(config), start=1):
        out[rank] = g(n, tag.index) if tag.family == "Lx" else gp(n, tag.index)
    return out


def _infinity_dictionary(config: FiberConfiguration) -> dict[int, GeneratorSymbol]:
    """Position -> symbol over the far fiber (base 1/epsilon).

    The far-chart generators mirror the near-chart naming of the same lines
    (the coordinate swap x <-> y carries the x-family line of index j to the
    y-family line of index n-j and vice versa, and composing the two renames
    gives the identity on (family, index)): the x-family puncture of index j,
    now on the outer ring, stands for the outer generator of index j, and the
    y-family keeps its index on the inner ring."""
    n = len(config.punctures) // 2
    out = {}
    for rank, tag in enumerate(_positions_by_rank(config), start=1):
        out[rank] = g(n, tag.index) if tag.family == "Lx" else gp(n, tag.index)
    return out


def _relabel_closed(m: FreeAutomorphism, positions: dict[int, GeneratorSymbol]) -> FreeAutomorphism:
    """Conjugate the canonical-alphabet automorphism by position -> symbol."""
    n = m.n
    rho_images = {}
    rho_inv_images = {}
    for p, actual in positions.items():
        canon = _canonical_symbol(n, p)
        rho_images[canon] = word(n, [actual])
        rho_inv_images[actual] = word(n, [canon])
    rho = FreeAutomorphism(n, rho_images)
    rho_inv = FreeAutomorphism(n, rho_inv_images)
    return compose(rho, compose(m, rho_inv))


# --- comparison ----------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    loop: str
    n: int
    loop_index: Optional[object]  # 0..n or "alpha"
    permutation_match: bool
    exact_word_match: bool
    conjugator: Optional[Word]
    basis_dictionary: tuple[tuple[int, str], ...]
    braid: Braid
    numeric_images: tuple[tuple[str, tuple[str, ...]], ...]
    formula_images: tuple[tuple[str, tuple[str, ...]], ...]
    residual_min_gap: float
    residual_max_step: float
    notes: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.exact_word_match and not self.permutation_match:
            raise ValueError("exact word match implies permutation match")


_PUNCTURE_NOTE = (
    "convention: the y-family punctures sit at the n-th roots of unity zeta_n^j "
    "for every n; the x-family at base*zeta_n^{-j}"
)


def _match_policy(
    n: int, numeric: FreeAutomorphism, formula: FreeAutomorphism
) -> tuple[bool, bool, Optional[Word]]:
    """(permutation_match, exact_word_match, conjugator).

    Permutation match: every numeric image is freely conjugate to the formula
    image (single-letter cores force equal core symbols).  Exact match: one
    global c with c^-1 * numeric(x) * c = formula(x) for all x, found by
    scanning the centralizer coset of the first generator's witness.
    """
    alphabet = fiber_alphabet(n)
    witnesses = {}
    for s in alphabet:
        ok, c = is_conjugate_free(numeric.images[s], formula.images[s])
        if not ok:
            return False, False, None
        witnesses[s] = c

    first = alphabet[0]
    u = free_reduce(numeric.images[first])
    c0 = witnesses[first]
    candidates = []
    for mth in range(-6, 7):
        power = concat(*([u] * abs(mth))) if mth else empty_word(n)
        c = free_reduce((power if mth > 0 else invert(power)) * c0)
        if all(
            conjugate(numeric.images[s], c) == free_reduce(formula.images[s])
            for s in alphabet
        ):
            candidates.append(c)
    if not candidates:
        return True, False, None
    best = min(candidates, key=lambda w: w.sort_key())
    return True, True, best


def _image_rows(auto: FreeAutomorphism) -> tuple:
    rows = []
    for s in sorted(auto.images, key=lambda s: s.sort_key()):
        rows.append((s.token(), tuple(free_reduce(auto.images[s]).tokens())))
    return tuple(rows)


def _tracked_braid(loop: BaseLoop, steps: int) -> tuple[PunctureTrajectory, Braid]:
    attempt_steps = steps
    last: Exception | None = None
    for _ in range(4):
        traj = track_punctures(loop, attempt_steps)
        try:
            return traj, extract_braid(traj)
        except NumericTrackingError as exc:
            last = exc
            attempt_steps = max(len(traj.samples) - 1, attempt_steps) * 4
            if attempt_steps > MAX_STEPS:
                break
    raise NumericTrackingError(f"braid extraction failed on {loop.label()}: {last}")


def verify_gamma(
    n: int,
    k: int,
    epsilon: float = DEFAULT_EPSILON,
    delta: float = DEFAULT_DELTA,
    steps: int = 256,
) -> VerificationReport:
    """Compare the tracked monodromy of gamma_k with the formula action."""
    if not 0 <= k <= n:
        raise ValueError(f"loop index k must satisfy 0 <= k <= n, got {k}")
    loop = loop_for_index(n, k, epsilon, delta)
    traj, braid = _tracked_braid(loop, steps)
    m = braid_to_automorphism(braid)
    positions = strand_dictionary(traj.samples[0][1])
    numeric = _relabel_closed(m, positions)
    formula = loop_action(n, k).action
    perm, exact, conj = _match_policy(n, numeric, formula)
    return VerificationReport(
        loop=loop.label(),
        n=n,
        loop_index=k,
        permutation_match=perm,
        exact_word_match=exact,
        conjugator=conj,
        basis_dictionary=tuple((p, s.token()) for p, s in sorted(positions.items())),
        braid=braid,
        numeric_images=_image_rows(numeric),
        formula_images=_image_rows(formula),
        residual_min_gap=traj.min_gap,
        residual_max_step=traj.max_step,
        notes=(_PUNCTURE_NOTE,),
    )


def verify_alpha(
    n: int,
    epsilon: float = DEFAULT_EPSILON,
    delta: float = DEFAULT_DELTA,
    steps: int = 256,
) -> VerificationReport:
    """Track the open base-change path and compare with the substitution rule."""
    loop = loop_for_index(n, "alpha", epsilon, delta)
    traj, braid = _tracked_braid(loop, steps)
    m = braid_to_automorphism(braid)
    start = strand_dictionary(traj.samples[0][1])
    end = _infinity_dictionary(traj.samples[-1][1])

    rho_start = {_canonical_symbol(n, p): word(n, [s]) for p, s in start.items()}
    rho = FreeAutomorphism(n, rho_start)
    images = {}
    for q, end_sym in end.items():
        images[end_sym] = apply_endomorphism(rho, m.images[_canonical_symbol(n, q)])
    numeric = FreeAutomorphism(n, images)

    formula = translate_infinity(n)
    perm, exact, conj = _match_policy(n, numeric, formula)
    return VerificationReport(
        loop=loop.label(),
        n=n,
        loop_index="alpha",
        permutation_match=perm,
        exact_word_match=exact,
        conjugator=conj,
        basis_dictionary=tuple((p, s.token()) for p, s in sorted(start.items())),
        braid=braid,
        numeric_images=_image_rows(numeric),
        formula_images=_image_rows(formula),
        residual_min_gap=traj.min_gap,
        residual_max_step=traj.max_step,
        notes=(
            _PUNCTURE_NOTE,
            "far-fiber dictionary: both puncture families keep their line index; "
            "the x-family is the outer ring there, the y-family the inner one",
        ),
    )
