"""Near-optimal word synthesis for the dichotomy gadgets.

When the per-block survival probability x exceeds 1/2, the block word
a^{n_2} b a^{n_3} b ... b a^{n_k} with n_i = ceil(log_x(1/i) + C_eps) drives
the optimistic branch's success mass toward 1 while the pessimistic branch's
failure mass stays below eps; C_eps = (1/b) log_x(eps (b-1)/b) where b > 1
solves x^b = 1 - x.  The exponents are computed in floating point, the block
lengths are then integers, and everything downstream is exact again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import gadgets
from .pfa import Pfa, PfaError, Word, frac, reach_mass, reach_prob, value

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class WitnessError(ValueError):
    """Parameters outside the synthesis preconditions."""


class ClosedFormMismatch(RuntimeError):
    """Exact simulation disagreed with the closed forms: gadget wiring bug."""


def solve_b(x) -> float:
    """Bisect for the b > 1 with x^b = 1 - x; residual at most 1e-12."""
    x = frac(x)
    if not (HALF < x < 1):
        raise WitnessError(f"survival probability {x} outside (1/2, 1)")
    xf = float(x)
    target = 1.0 - xf

    def residual(b: float) -> float:
        return xf ** b - target

    lo, hi = 1.0, 2.0
    while residual(hi) > 0:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if residual(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 and abs(residual(mid)) <= 1e-12:
            break
    b = (lo + hi) / 2
    if abs(residual(b)) > 1e-12:
        raise WitnessError(f"bisection stalled at b={b} (residual {residual(b)})")
    return b


def c_epsilon(x, eps, b: Optional[float] = None) -> float:
    """The additive offset (1/b) log_x(eps (b-1)/b)."""
    x = frac(x)
    eps = frac(eps)
    if not (0 < eps < x):
        raise WitnessError(f"tolerance {eps} outside (0, x)")
    if b is None:
        b = solve_b(x)
    arg = float(eps) * (b - 1.0) / b
    return math.log(arg) / (b * math.log(float(x)))


def witness_lengths(x, eps, k: int, b: Optional[float] = None) -> list[int]:
    """Block lengths n_i = ceil(log_x(1/i) + C_eps) for i = 2..k, clamped to
    at least 1; nondecreasing in i."""
    x = frac(x)
    if k < 2:
        raise WitnessError(f"need k >= 2, got {k}")
    if b is None:
        b = solve_b(x)
    c_eps = c_epsilon(x, eps, b=b)
    log_x = math.log(float(x))
    return [max(1, math.ceil(math.log(1.0 / i) / log_x + c_eps)) for i in range(2, k + 1)]


def zeta_tail_bound(b: float) -> float:
    """Upper bound b/(b-1) on sum_{n>=1} n^-b for b > 1."""
    if b <= 1:
        raise WitnessError(f"tail bound needs b > 1, got {b}")
    if b - 1 == 0:
        return math.inf
    return b / (b - 1)


@dataclass(frozen=True)
class WitnessReport:
    lengths: tuple[int, ...]
    word: Word
    p_q1_q3: Fraction
    p_q4_q6: Fraction
    p_q4_hold: Fraction
    value: Fraction
    requirement1_met: bool   # p_q4_q6 <= eps
    requirement2_met: bool   # p_q1_q3 >= 1 - eps
    x: Fraction
    eps: Fraction
    y: Fraction
    k: int
    b: Optional[float]


def _closed_forms(x: Fraction, y: Fraction, lengths: Sequence[int]):
    """Success class, failure sink, hold mass and value for the synthesized
    word (separators after every block except the last)."""
    closed = lengths[:-1]
    survive_top = ONE
    survive_bot = ONE
    for n in closed:
        survive_top *= 1 - x ** n
        survive_bot *= 1 - (1 - x) ** n
    p_top = ONE - survive_top
    p_bot_sink = ONE - survive_bot
    residual_home = survive_bot * (1 - x) ** lengths[-1]
    p_bot_hold = ONE - p_bot_sink - residual_home
    return p_top, p_bot_sink, p_bot_hold, y * (p_top + p_bot_hold)


def synthesize_word(x=None, eps=None, k: int = 2, y=HALF,
                    inner: Optional[Pfa] = None,
                    inner_word: Optional[Sequence[str]] = None) -> WitnessReport:
    """Build the schedule word, simulate it exactly on the actual gadget, and
    cross-check every probability against the closed forms.

    Plain mode (no `inner`) targets the coin gadget with survival x; lifted
    mode targets the embedded gadget with x = value(inner, inner_word), which
    must exceed 1/2.  The inner word must avoid the separator symbol b, since
    a b inside a block would recall held mass mid-block and no closed form
    describes that.  Any simulation/closed-form disagreement raises.
    """
    eps = frac(eps)
    y = frac(y)
    if inner is not None:
        if inner_word is None:
            raise WitnessError("lifted mode needs an inner word")
        inner_word = tuple(inner_word)
        if "b" in inner_word:
            raise WitnessError("inner word must avoid the separator symbol 'b'")
        x = value(inner, inner_word)
        if x <= HALF:
            raise WitnessError(f"inner word has value {x}, need > 1/2")
        gadget = gadgets.build_D_Ay(inner, y)
        block = ("a",) + inner_word + ("c",)
    else:
        x = frac(x)
        if not (HALF < x <= 1):
            raise WitnessError(f"survival probability {x} outside (1/2, 1]")
        gadget = gadgets.build_D_xy(x, y)
        block = ("a",)

    if not (0 < eps < x):
        raise WitnessError(f"tolerance {eps} outside (0, x)")
    if x == 1:
        b = None
        lengths = [1] * (k - 1 if k >= 2 else 0)
        if k < 2:
            raise WitnessError(f"need k >= 2, got {k}")
    else:
        b = solve_b(x)
        lengths = witness_lengths(x, eps, k, b=b)

    pieces: list[str] = []
    for i, n in enumerate(lengths):
        if i:
            pieces.append("b")
        pieces.extend(block * n)
    word = tuple(pieces)

    p_top = reach_mass(gadget, "q1", word, gadgets.TOP_SUCCESS_CLASS)
    p_sink = reach_prob(gadget, "q4", word, gadgets.BOTTOM_FAIL_STATE)
    p_hold = reach_mass(gadget, "q4", word, gadgets.BOTTOM_HOLD_CLASS)
    val = value(gadget, word)

    cf_top, cf_sink, cf_hold, cf_val = _closed_forms(x, y, lengths)
    mismatches = [
        (name, got, want)
        for name, got, want in (
            ("success class from q1", p_top, cf_top),
            ("failure sink from q4", p_sink, cf_sink),
            ("hold mass from q4", p_hold, cf_hold),
            ("word value", val, cf_val),
        )
        if got != want
    ]
    if mismatches:
        detail = "; ".join(f"{name}: simulated {got}, closed form {want}"
                           for name, got, want in mismatches)
        raise ClosedFormMismatch(detail)

    return WitnessReport(
        lengths=tuple(lengths), word=word,
        p_q1_q3=p_top, p_q4_q6=p_sink, p_q4_hold=p_hold, value=val,
        requirement1_met=p_sink <= eps,
        requirement2_met=p_top >= 1 - eps,
        x=x, eps=eps, y=y, k=k, b=b)
