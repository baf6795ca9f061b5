"""Information measures, Blahut-Arimoto, block-channel achievability and
converse checks, capacity brackets, and the staged concentration demo.

Exact rationals are kept up to the point where logarithms appear; from
there on everything is 64-bit float with the tolerances stated per
operation.  All rates and entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .fsmc import Fsmc, FsmcError, split_v_input
from .pfa import (FREEZE_SYMBOL, RESET_SYMBOL, Matrix, Pfa, Vector,
                  brute_force_value, mat_vec)

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

DEFAULT_BLOCK_BUDGET = 14


class CapacityError(ValueError):
    """Invalid distribution, channel or parameter."""


# ---------------------------------------------------------------------------
# Information measures.
# ---------------------------------------------------------------------------

def _as_dist(p, tol: float = 1e-9) -> np.ndarray:
    arr = np.asarray([float(e) for e in p], dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise CapacityError("need a one-dimensional distribution")
    if np.any(arr < -tol):
        raise CapacityError("distribution has negative entries")
    if abs(arr.sum() - 1.0) > tol:
        raise CapacityError(f"distribution sums to {arr.sum()}")
    return np.clip(arr, 0.0, None)


def entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    arr = _as_dist(p)
    nz = arr[arr > 0]
    return float(-(nz * np.log2(nz)).sum())


def binary_entropy(eps) -> float:
    eps = float(eps)
    if not (0.0 <= eps <= 1.0):
        raise CapacityError(f"binary entropy argument {eps} outside [0, 1]")
    if eps in (0.0, 1.0):
        return 0.0
    return -eps * math.log2(eps) - (1 - eps) * math.log2(1 - eps)


def _as_joint(joint, tol: float = 1e-9) -> np.ndarray:
    arr = np.asarray([[float(e) for e in row] for row in joint], dtype=float)
    if arr.ndim != 2:
        raise CapacityError("need a two-dimensional joint distribution")
    if np.any(arr < -tol):
        raise CapacityError("joint has negative entries")
    if abs(arr.sum() - 1.0) > tol:
        raise CapacityError(f"joint sums to {arr.sum()}")
    return np.clip(arr, 0.0, None)


def mutual_information(joint) -> float:
    """I(X;Y) in bits from a joint table p[x][y]."""
    arr = _as_joint(joint)
    px = arr.sum(axis=1)
    py = arr.sum(axis=0)
    total = 0.0
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            p = arr[i, j]
            if p > 0:
                total += p * math.log2(p / (px[i] * py[j]))
    return total


@dataclass(frozen=True)
class SpectrumSample:
    """One atom of the information-density distribution."""
    value: float
    probability: float


def information_spectrum(joint) -> list[SpectrumSample]:
    """Distribution of log2(p(y|x)/p(y)); its mean is the mutual information."""
    arr = _as_joint(joint)
    px = arr.sum(axis=1)
    py = arr.sum(axis=0)
    out = []
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            p = arr[i, j]
            if p > 0:
                out.append(SpectrumSample(
                    value=math.log2(p / (px[i] * py[j])), probability=float(p)))
    return out


# ---------------------------------------------------------------------------
# Memoryless channels and Blahut-Arimoto.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteChannel:
    """Row-stochastic table p[y|x]; rows are inputs."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] < 1:
            raise CapacityError("channel table must be a 2-d array")
        if np.any(m < -1e-12):
            raise CapacityError("channel table has negative entries")
        rows = m.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-12):
            raise CapacityError(f"channel rows sum to {rows.min()}..{rows.max()}")
        object.__setattr__(self, "matrix", np.clip(m, 0.0, None))

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.matrix.shape[1]


def bsc(eps) -> DiscreteChannel:
    eps = float(eps)
    return DiscreteChannel(np.array([[1 - eps, eps], [eps, 1 - eps]]))


@dataclass(frozen=True)
class BaResult:
    capacity: float          # certified lower bound at the final iterate
    input_dist: np.ndarray
    gap: float               # upper bound minus lower bound
    iterations: int
    converged: bool
    lower_bounds: tuple[float, ...]


def blahut_arimoto(ch: DiscreteChannel, tol: float = 1e-9,
                   max_iters: int = 10_000) -> BaResult:
    """Alternating maximization with the classical stopping rule: iterate
    until max_x D(x) - log2 sum_x r(x) 2^{D(x)} <= tol, where D(x) is the
    divergence of row x against the output mixture.  The returned capacity
    is the final lower bound, hence within tol of the true capacity."""
    if tol <= 0:
        raise CapacityError(f"tolerance {tol} must be positive")
    P = ch.matrix
    n_in = ch.n_inputs
    r = np.full(n_in, 1.0 / n_in)
    lower_bounds = []
    gap = math.inf
    iterations = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        for iterations in range(1, max_iters + 1):
            q = r @ P
            ratio = np.where((P > 0) & (q > 0), P / np.where(q > 0, q, 1.0), 1.0)
            D = np.where(P > 0, P * np.log2(np.where(P > 0, ratio, 1.0)), 0.0).sum(axis=1)
            weights = r * np.exp2(D)
            total = weights.sum()
            lower = math.log2(total) if total > 0 else 0.0
            upper = float(D.max())
            lower_bounds.append(lower)
            gap = upper - lower
            if gap <= tol:
                return BaResult(capacity=lower, input_dist=r, gap=gap,
                                iterations=iterations, converged=True,
                                lower_bounds=tuple(lower_bounds))
            r = weights / total
    return BaResult(capacity=lower_bounds[-1], input_dist=r, gap=gap,
                    iterations=iterations, converged=False,
                    lower_bounds=tuple(lower_bounds))


# ---------------------------------------------------------------------------
# Control schedules and block channels for lifted automaton channels.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ControlSchedule:
    """Periodic control input: the word for the first m slots, the freeze
    symbol for the next free_slots - 1, the reset symbol on the last slot."""

    word: tuple[str, ...]
    free_slots: int

    def __post_init__(self):
        if self.free_slots < 1:
            raise CapacityError("need at least one free slot for the reset")

    @property
    def period(self) -> int:
        return len(self.word) + self.free_slots

    def controls(self) -> tuple[str, ...]:
        return (tuple(self.word)
                + (FREEZE_SYMBOL,) * (self.free_slots - 1)
                + (RESET_SYMBOL,))


@dataclass(frozen=True)
class _VStructure:
    """Automaton view of a lifted channel: binary output, data forwarded
    noiselessly from accepting states, state law independent of the data."""

    states: tuple[str, ...]
    controls: tuple[str, ...]
    matrices: dict[str, Matrix]
    accepting: tuple[int, ...]
    s0: int


def _v_structure(ch: Fsmc) -> _VStructure:
    if tuple(ch.outputs) != ("0", "1"):
        raise FsmcError("expected a binary-output channel")
    controls = []
    matrices = {}
    for sym in ch.inputs:
        bit, control = split_v_input(sym)
        other = ("1" if bit == "0" else "0") + ":" + control
        if other not in ch.inputs:
            raise FsmcError(f"input {other!r} missing: not a data/control product")
        if ch.state_law[sym] != ch.state_law[other]:
            raise FsmcError(f"state law for control {control!r} depends on the data bit")
        if control not in matrices:
            controls.append(control)
            matrices[control] = ch.state_law[sym]
    accepting = []
    probe = ch.output_law["0:" + controls[0]]
    for j in range(ch.n_states):
        col = (probe[0][j], probe[1][j])
        if col == (ONE, ZERO):
            accepting.append(j)
        elif col != (HALF, HALF):
            raise FsmcError(f"state {ch.states[j]!r} is neither noiseless nor uniform")
    return _VStructure(states=ch.states, controls=tuple(controls), matrices=matrices,
                       accepting=tuple(accepting), s0=ch.state_index(ch.initial))


def _v_pfa(vs: _VStructure) -> Pfa:
    initial = tuple(ONE if i == vs.s0 else ZERO for i in range(len(vs.states)))
    return Pfa(states=vs.states, alphabet=vs.controls, matrices=dict(vs.matrices),
               initial=initial, accepting=frozenset(vs.states[i] for i in vs.accepting))


def _word_value(vs: _VStructure, controls: Sequence[str]) -> Fraction:
    dist = tuple(ONE if i == vs.s0 else ZERO for i in range(len(vs.states)))
    for c in controls:
        dist = mat_vec(vs.matrices[c], dist)
    return sum((dist[i] for i in vs.accepting), ZERO)


def accept_pattern_dist(ch: Fsmc, controls: Sequence[str],
                        start: Optional[Vector] = None) -> dict[int, Fraction]:
    """Exact law of the per-slot acceptance indicators along a control word.

    Bit t of the mask is set when the state occupied before slot t is
    accepting.  The state trajectory ignores the data input, so this is the
    whole memory the block channel has.
    """
    vs = _v_structure(ch)
    n = len(vs.states)
    if start is None:
        start = tuple(ONE if i == vs.s0 else ZERO for i in range(n))
    frontier: dict[int, Vector] = {0: tuple(start)}
    for t, c in enumerate(controls):
        m = vs.matrices[c]
        acc_set = set(vs.accepting)
        nxt: dict[int, Vector] = {}
        for mask, vec in frontier.items():
            acc = tuple(vec[i] if i in acc_set else ZERO for i in range(n))
            non = tuple(vec[i] if i not in acc_set else ZERO for i in range(n))
            if any(acc):
                nxt[mask | (1 << t)] = mat_vec(m, acc)
            if any(non):
                nxt[mask] = mat_vec(m, non)
        frontier = nxt
    return {mask: sum(vec, ZERO) for mask, vec in frontier.items()}


def agreement_profile(pattern_dist: dict[int, Fraction], length: int) -> list[Fraction]:
    """g[E] = p(y|x) for any x, y agreeing exactly on the slot set E:
    2^-L sum over patterns inside E of P(pattern) 2^{|pattern|}."""
    size = 1 << length
    g = [ZERO] * size
    for mask, pr in pattern_dist.items():
        g[mask] = pr * (1 << bin(mask).count("1"))
    for bit in range(length):
        step = 1 << bit
        for e in range(size):
            if e & step:
                g[e] += g[e ^ step]
    scale = Fraction(1, size)
    return [x * scale for x in g]


def block_profile(ch: Fsmc, sched: ControlSchedule,
                  max_period: int = DEFAULT_BLOCK_BUDGET) -> list[Fraction]:
    """Agreement profile of one schedule period, with the block-stationarity
    check: the law of the second period must equal the first exactly."""
    n = sched.period
    if n > max_period:
        raise CapacityError(f"period {n} exceeds the block budget {max_period}")
    controls = sched.controls()
    vs = _v_structure(ch)
    first = accept_pattern_dist(ch, controls)
    start = tuple(ONE if i == vs.s0 else ZERO for i in range(len(vs.states)))
    end = start
    for c in controls:
        end = mat_vec(vs.matrices[c], end)
    second = accept_pattern_dist(ch, controls, start=end)
    if first != second:
        raise CapacityError("consecutive blocks are not identically distributed "
                            "(schedule does not end in a reset?)")
    return agreement_profile(first, n)


def induced_block_channel(ch: Fsmc, sched: ControlSchedule,
                          max_period: int = DEFAULT_BLOCK_BUDGET) -> DiscreteChannel:
    """Memoryless channel on data blocks of one schedule period: inputs and
    outputs are bit sequences of length m+n, transition probabilities exact
    until the final float conversion.  Memory grows as 4^(m+n)."""
    prof = block_profile(ch, sched, max_period=max_period)
    n = sched.period
    gf = np.array([float(x) for x in prof])
    idx = np.arange(1 << n)
    agree = (~(idx[:, None] ^ idx[None, :])) & ((1 << n) - 1)
    return DiscreteChannel(gf[agree])


def _row_distribution(prof: Sequence[Fraction], n: int) -> np.ndarray:
    """p(y|x=0...0) over outputs y encoded as bit masks (slot t = bit t)."""
    full = (1 << n) - 1
    return np.array([float(prof[(~y) & full]) for y in range(1 << n)])


def block_rate_uniform(ch: Fsmc, sched: ControlSchedule,
                       max_period: int = DEFAULT_BLOCK_BUDGET) -> float:
    """Exact block mutual information per channel use under uniform data.

    The block channel is symmetric (every row and column is a permutation of
    the agreement profile), so the output is uniform and the rate is
    (period - row entropy) / period; uniform data achieves the block
    capacity.
    """
    prof = block_profile(ch, sched, max_period=max_period)
    n = sched.period
    row = _row_distribution(prof, n)
    return (n - entropy(row)) / n


@dataclass(frozen=True)
class ChainReport:
    """The achievability entropy chain, evaluated on one block channel."""

    m: int
    n: int
    word_value: float
    h_total: float                # H(Y_block | X_block, controls)
    h_prefix: float               # H(first m outputs | X)
    h_suffix_given_prefix: float
    h_suffix: float
    final_bound: float            # 1 + (1 - word_value) * n

    @property
    def chain_holds(self) -> bool:
        tol = 1e-9
        return (self.h_prefix <= self.m + tol
                and self.h_suffix_given_prefix <= self.h_suffix + tol
                and self.h_suffix <= self.final_bound + tol
                and self.h_total <= self.m + 1 + (1 - self.word_value) * self.n + tol)


def achievability_chain(ch: Fsmc, sched: ControlSchedule,
                        max_period: int = DEFAULT_BLOCK_BUDGET) -> ChainReport:
    prof = block_profile(ch, sched, max_period=max_period)
    vs = _v_structure(ch)
    m = len(sched.word)
    n_free = sched.free_slots
    period = sched.period
    row = _row_distribution(prof, period)
    # slot t is bit t, so the word prefix is the low m bits
    table = row.reshape(1 << n_free, 1 << m)   # axis 0: suffix, axis 1: prefix
    h_total = entropy(row)
    prefix_marginal = table.sum(axis=0)
    suffix_marginal = table.sum(axis=1)
    h_prefix = entropy(prefix_marginal)
    h_suffix = entropy(suffix_marginal)
    val_w = float(_word_value(vs, sched.word))
    return ChainReport(m=m, n=n_free, word_value=val_w, h_total=h_total,
                       h_prefix=h_prefix, h_suffix_given_prefix=h_total - h_prefix,
                       h_suffix=h_suffix, final_bound=1 + (1 - val_w) * n_free)


def achievable_rate(ch: Fsmc, word: Sequence[str], free_slots: int,
                    input_mode: str = "uniform",
                    max_period: int = DEFAULT_BLOCK_BUDGET,
                    ba_tol: float = 1e-6) -> float:
    """Block mutual information per use for the schedule (word, free_slots).

    'uniform' evaluates the exact symmetric-channel formula and verifies the
    entropy chain bound; 'ba' materializes the block table and optimizes the
    input, which can only improve the rate.
    """
    sched = ControlSchedule(word=tuple(word), free_slots=free_slots)
    if input_mode == "uniform":
        rate = block_rate_uniform(ch, sched, max_period=max_period)
        chain = achievability_chain(ch, sched, max_period=max_period)
        if not chain.chain_holds:
            raise CapacityError(f"entropy chain violated: {chain}")
        return rate
    if input_mode == "ba":
        block = induced_block_channel(ch, sched, max_period=max_period)
        result = blahut_arimoto(block, tol=ba_tol * sched.period)
        return result.capacity / sched.period
    raise CapacityError(f"unknown input mode {input_mode!r}")


# ---------------------------------------------------------------------------
# Converse checks.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConverseReport:
    n: int
    trials: int
    horizon: int
    val_horizon: float
    entropy_bound: float          # n * (1 - val_horizon)
    min_conditional_entropy: float
    max_rate: float
    violations: int
    raised_horizon: Optional[int]
    raised_val: Optional[float]

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _converse_trial_stats(ch: Fsmc, n: int, trials: int, seed: int):
    """Conditional entropies and rates for random product input laws."""
    vs = _v_structure(ch)
    controls = vs.controls
    n_c = len(controls)
    import itertools
    control_words = list(itertools.product(range(n_c), repeat=n))
    rows = {}
    g_tables = {}
    full = (1 << n) - 1
    for cw in control_words:
        prof = agreement_profile(
            accept_pattern_dist(ch, [controls[i] for i in cw]), n)
        gf = np.array([float(x) for x in prof])
        d = np.arange(1 << n)
        g_tables[cw] = gf[(~(d[:, None] ^ d[None, :])) & full]
        rows[cw] = entropy(_row_distribution(prof, n))
    rng = np.random.default_rng(seed)
    stats = []
    for _ in range(trials):
        # per-slot joint law over (data bit, control symbol)
        slot = rng.random((n, 2, n_c))
        slot /= slot.sum(axis=(1, 2), keepdims=True)
        h_y_given_x = 0.0
        p_y = np.zeros(1 << n)
        for cw, g in g_tables.items():
            p_c = 1.0
            p_d = np.ones(1)
            for t in range(n):
                p_c *= slot[t, :, cw[t]].sum()
                p_d = np.concatenate([p_d * (slot[t, 0, cw[t]] / slot[t, :, cw[t]].sum()),
                                      p_d * (slot[t, 1, cw[t]] / slot[t, :, cw[t]].sum())])
            # p_d indexes data words with slot t at bit t (LSB first)
            if p_c <= 0:
                continue
            h_y_given_x += p_c * rows[cw]
            p_y += p_c * (p_d @ g)
        h_y = entropy(p_y)
        stats.append((h_y_given_x, (h_y - h_y_given_x) / n))
    return stats


def converse_check(ch: Fsmc, n: int, trials: int, seed: int = 0,
                   horizon: Optional[int] = None, tol: float = 1e-9) -> ConverseReport:
    """For random product input laws, verify H(Y^n|X^n C^n) >= n (1 - val)
    and rate <= val, with val the brute-force value at the given horizon.

    A violation means the horizon underestimated the value or the engine is
    wrong; the report re-runs the search with a deeper horizon to tell the
    two apart.
    """
    if n > 6:
        raise CapacityError(f"converse check is exact-enumeration only (n <= 6), got {n}")
    vs = _v_structure(ch)
    pfa = _v_pfa(vs)
    horizon = n if horizon is None else horizon
    val = float(brute_force_value(pfa, horizon).best_value)
    stats = _converse_trial_stats(ch, n, trials, seed)
    bound = n * (1 - val)
    violations = sum(1 for h, rate in stats
                     if h < bound - tol or rate > val + tol)
    raised_horizon = raised_val = None
    if violations:
        raised_horizon = horizon + 2
        raised_val = float(brute_force_value(pfa, raised_horizon).best_value)
    return ConverseReport(
        n=n, trials=trials, horizon=horizon, val_horizon=val,
        entropy_bound=bound,
        min_conditional_entropy=min(h for h, _ in stats),
        max_rate=max(rate for _, rate in stats),
        violations=violations, raised_horizon=raised_horizon, raised_val=raised_val)


# ---------------------------------------------------------------------------
# Capacity brackets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BracketBudget:
    word_len: int = 8
    block: int = 12
    words: int = 200_000


@dataclass(frozen=True)
class CapacityBracket:
    lower: float
    upper: float
    gap: float
    val_estimate: float
    certificate: str            # 'value-1 word' | 'supplied exact value' |
                                # 'supplied value bound' | 'trivial'
    provenance: dict


def capacity_bracket(a: Pfa, delta, budget: BracketBudget = BracketBudget(),
                     val_bound=None, val_exact=None) -> CapacityBracket:
    """Certified achievable rate and upper bound for the channel lift of `a`.

    The lower bound is the best exact block rate over schedules built from
    the brute-force search word; the upper bound is 1 unless certified
    tighter (a value-1 word saturates it; gadget builders can pass the value
    bound their parameters prove).  The raw search value is reported as the
    heuristic estimate either way.
    """
    from .fsmc import build_V
    from .pfa import gamma as lift_gamma

    delta = float(delta)
    if delta <= 0:
        raise CapacityError(f"delta {delta} must be positive")
    search_len = min(budget.word_len, max(0, budget.block - 1))
    result = brute_force_value(a, search_len, budget=budget.words)
    val_estimate = float(result.best_value)

    if result.best_value == 1:
        upper, certificate = 1.0, "value-1 word"
    elif val_exact is not None:
        upper, certificate = float(val_exact), "supplied exact value"
    elif val_bound is not None:
        upper, certificate = float(val_bound), "supplied value bound"
    else:
        upper, certificate = 1.0, "trivial"

    lifted = a
    if FREEZE_SYMBOL not in a.alphabet or RESET_SYMBOL not in a.alphabet:
        lifted = lift_gamma(a)
    ch = build_V(lifted)

    word = result.best_word
    m = len(word)
    v = val_estimate
    n_max = budget.block - m
    candidates = {n_max}
    suggested = math.ceil((1 + max(0.0, v - 2 * delta) * m) / delta)
    candidates.add(max(1, min(n_max, suggested)))
    lower = 0.0
    provenance = {"m": m, "n": 0, "delta": delta, "word": "".join(word)}
    for n_free in sorted(candidates):
        if n_free < 1:
            continue
        rate = achievable_rate(ch, word, n_free, max_period=budget.block)
        if rate > lower:
            lower = rate
            provenance = {"m": m, "n": n_free, "delta": delta, "word": "".join(word)}
    if lower > upper + 1e-9:
        # the search horizon undershot the value; the achieved rate is itself
        # a sound estimate from below
        upper = lower
        certificate += " (raised to the achieved rate)"
    return CapacityBracket(lower=lower, upper=upper, gap=upper - lower,
                           val_estimate=val_estimate, certificate=certificate,
                           provenance=provenance)


# ---------------------------------------------------------------------------
# Stability schedules and the concentration demo.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityStage:
    t: int
    n_t: int
    m_t: int
    m_formula: int
    m_floor: int      # (n_{t+1})^2


@dataclass(frozen=True)
class StabilitySchedule:
    val: float
    delta: float
    stages: tuple[StabilityStage, ...]


def stability_schedule(val, delta, n_list: Sequence[int]) -> StabilitySchedule:
    """Stage sizes m_t = max(ceil((2^t/(n_t delta)) (sum_{i<t} m_i n_i delta
    (2^-i - 2^-(t-1)) + n_{t+1} (val - delta 2^-(t-1)))), (n_{t+1})^2)."""
    val = float(val)
    delta = float(delta)
    if not (0 < val <= 1):
        raise CapacityError(f"val {val} outside (0, 1]")
    if delta <= 0:
        raise CapacityError(f"delta {delta} must be positive")
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise CapacityError("need n_t for at least two stages (t and t+1)")
    if any(b < a for a, b in zip(n_list, n_list[1:])):
        raise CapacityError(f"stage lengths {n_list} must be nondecreasing")
    stages = []
    ms: list[int] = []
    for t in range(1, len(n_list)):
        n_t = n_list[t - 1]
        n_next = n_list[t]
        acc = sum(ms[i - 1] * n_list[i - 1] * delta * (2.0 ** -i - 2.0 ** -(t - 1))
                  for i in range(1, t))
        acc += n_next * (val - delta * 2.0 ** -(t - 1))
        m_formula = math.ceil((2.0 ** t / (n_t * delta)) * acc)
        m_floor = n_next ** 2
        m_t = max(m_formula, m_floor)
        ms.append(m_t)
        stages.append(StabilityStage(t=t, n_t=n_t, m_t=m_t,
                                     m_formula=m_formula, m_floor=m_floor))
    return StabilitySchedule(val=val, delta=delta, stages=tuple(stages))


def block_spectrum(ch: Fsmc, sched: ControlSchedule,
                   max_period: int = DEFAULT_BLOCK_BUDGET):
    """Information-density atoms of one block under uniform data: the output
    is uniform, so the density at agreement set E is period + log2 g(E) with
    probability g(E)."""
    prof = block_profile(ch, sched, max_period=max_period)
    n = sched.period
    groups: dict[Fraction, Fraction] = {}
    for g in prof:
        if g > 0:
            groups[g] = groups.get(g, ZERO) + g
    values = np.array([n + math.log2(float(g)) for g in groups])
    probs = np.array([float(p) for p in groups.values()])
    probs = probs / probs.sum()
    return values, probs


@dataclass(frozen=True)
class SpectrumDemoReport:
    eta: float
    delta: float
    t: int
    n_total: int
    samples: int
    block_rate: float            # exact block mutual information per use
    val: float                   # normalizer supplied by the caller
    empirical_tail_val: float    # P[|i/(n val) - 1| >= eta delta], sampled
    empirical_tail_rate: float   # same with the block rate as normalizer
    analytic_val: float
    analytic_rate: float


def _hoeffding_bound(n: int, c_n: float, delta: float, eta: float,
                     val: float, t: int) -> float:
    margin = eta - 1.0 / (val * 2.0 ** (t - 1))
    if margin <= 0:
        return 2.0
    return min(2.0, 2.0 * math.exp(-2.0 * (n * c_n * delta * margin) ** 2 / n ** 1.5))


def spectrum_concentration_demo(ch: Fsmc, sched: ControlSchedule, m_blocks: int,
                                eta, delta, samples: int, seed: int,
                                val: Optional[float] = None, t: int = 1,
                                max_period: int = DEFAULT_BLOCK_BUDGET) -> SpectrumDemoReport:
    """Sample the staged source's information density (t=1 prefix: m_blocks
    i.i.d. copies of one block) and compare the deviation tail against the
    two-sided Hoeffding expression, normalized both by the supplied value
    and by the exact block rate."""
    if t > 2:
        raise CapacityError("demo is restricted to stages t <= 2")
    if m_blocks < 1 or samples < 1:
        raise CapacityError("need at least one block and one sample")
    eta = float(eta)
    delta = float(delta)
    values, probs = block_spectrum(ch, sched, max_period=max_period)
    n_block = sched.period
    mean_block = float((values * probs).sum())
    c_n = mean_block / n_block
    if val is None:
        val = c_n
    val = float(val)
    n_total = m_blocks * n_block
    rng = np.random.default_rng(seed)
    sums = np.zeros(samples)
    chunk = max(1, min(m_blocks, (1 << 22) // samples))
    done = 0
    while done < m_blocks:
        take = min(chunk, m_blocks - done)
        draws = rng.choice(values, size=(samples, take), p=probs)
        sums += draws.sum(axis=1)
        done += take
    tail_val = float(np.mean(np.abs(sums / (n_total * val) - 1.0) >= eta * delta))
    tail_rate = float(np.mean(np.abs(sums / (n_total * c_n) - 1.0) >= eta * delta))
    return SpectrumDemoReport(
        eta=eta, delta=delta, t=t, n_total=n_total, samples=samples,
        block_rate=c_n, val=val,
        empirical_tail_val=tail_val, empirical_tail_rate=tail_rate,
        analytic_val=_hoeffding_bound(n_total, c_n, delta, eta, val, t),
        analytic_rate=_hoeffding_bound(n_total, c_n, delta, eta, c_n, t))
