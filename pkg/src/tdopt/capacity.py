"""Single-user capacity with a certified bracket, plus the divergence geometry
around the optimizer: the unique optimal output distribution, the per-input
divergence profile, the peak set of inputs whose divergence attains capacity,
and the union of supports over all capacity-achieving inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import LN2, Channel, Distribution
from .simplex import OPTIMAL, lp_solve_max_coordinate

DEFAULT_TOL = 1e-10       # bits, bracket width
DEFAULT_MAX_ITER = 100_000
DEFAULT_PEAK_TOL = 1e-6   # bits, slack below capacity still counted as peak
DEFAULT_LP_TOL = 1e-9     # mass threshold deciding support-union membership

_P_FLOOR = 1e-300  # keeps reachable outputs strictly positive during iteration


class ConvergenceError(RuntimeError):
    """Capacity iteration ran out of iterations before the bracket closed."""

    def __init__(self, bracket_bits: tuple[float, float], iterations: int):
        lo, hi = bracket_bits
        super().__init__(
            f"capacity bracket [{lo!r}, {hi!r}] bits still wider than requested "
            f"after {iterations} iterations"
        )
        self.bracket_bits = (lo, hi)
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class CapacityReport:
    """Capacity certificate for one channel.

    `capacity` is the midpoint of the final bracket and `gap` its width, both
    in bits. `peak_set`, `support_union`, and `divergence_profile` are filled
    by `analyze_channel`; `compute_capacity` alone leaves them None.
    """

    channel: Channel
    capacity: float
    achieving_input: Distribution
    optimal_output: Distribution
    iterations: int
    gap: float
    divergence_profile: np.ndarray | None = None
    peak_set: tuple[str, ...] | None = None
    support_union: tuple[str, ...] | None = None


def _row_divergences(rows: np.ndarray, row_neg_ent: np.ndarray, q: np.ndarray) -> np.ndarray:
    """D(row_x || q) in nats for every row; q must be positive where rows are."""
    logq = np.where(q > 0.0, np.log(np.maximum(q, _P_FLOOR)), 0.0)
    return row_neg_ent - rows @ logq


def _newton_refine(rows, row_neg_ent, p_start, support):
    """Solve D(row_x || q) = const for x in `support` with q the pushforward
    of p supported there. Returns (p, iterations_used) or None if the system
    misbehaves (singular Jacobian, mass escaping the simplex)."""
    sub = rows[support]
    k = len(support)
    p = p_start[support].astype(float)
    total = p.sum()
    if total <= 0.0:
        return None
    p /= total
    c = None
    for _ in range(60):
        q = p @ sub
        if not np.all(np.isfinite(q)) or np.any((q <= 0.0) & (sub.max(axis=0) > 0.0)):
            return None
        d = _row_divergences(sub, row_neg_ent[support], q)
        if c is None:
            c = float(p @ d)
        f = np.concatenate([d - c, [p.sum() - 1.0]])
        if np.abs(f).max() < 1e-14:
            break
        jac = np.zeros((k + 1, k + 1))
        jac[:k, :k] = -(sub / q) @ sub.T
        jac[:k, k] = -1.0
        jac[k, :k] = 1.0
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        p = p + step[:k]
        c = c + step[k]
        if not np.all(np.isfinite(p)) or p.min() < -1e-6:
            return None
    else:
        return None
    if p.min() < -1e-12:
        return None
    return np.maximum(p, 0.0)


def _polish(rows, row_neg_ent, p_ba, gap_nats):
    """Try to sharpen the alternating-maximization iterate by solving the
    stationarity system on the near-peak support. Returns a refined full-length
    input vector or None."""
    q = p_ba @ rows
    d = _row_divergences(rows, row_neg_ent, q)
    upper = d.max()
    kappa = max(1e-5, 1e3 * gap_nats)
    support = np.flatnonzero(d >= upper - kappa)
    refined = None
    for _ in range(3):
        if support.size == 0:
            return None
        refined = _newton_refine(rows, row_neg_ent, p_ba, support)
        if refined is None or refined.sum() <= 0.0:
            return None
        keep = refined > 0.0
        if keep.all():
            break
        # zero mass on some candidate symbols: drop them and re-solve
        support = support[keep]
        refined = refined[keep]
    full = np.zeros(rows.shape[0])
    full[support] = refined / refined.sum()
    return full


def compute_capacity(
    ch: Channel,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    init: Distribution | None = None,
) -> CapacityReport:
    """Channel capacity by alternating maximization with a certified bracket.

    Every iteration yields a lower bound (the current input's information
    rate) and an upper bound (the worst-case divergence to the current output
    iterate); iteration stops once the bracket is narrower than `tol` bits and
    the midpoint is reported. Raises ConvergenceError if `max_iter` passes
    are not enough.
    """
    reachable = ch.reachable_outputs()
    rows = ch.rows[:, reachable]
    n_x = rows.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        row_neg_ent = np.where(rows > 0.0, rows * np.log(np.maximum(rows, _P_FLOOR)), 0.0).sum(axis=1)

    if init is None:
        p = np.full(n_x, 1.0 / n_x)
    else:
        if init.alphabet != ch.input:
            raise ValueError("initial distribution must live on the channel input alphabet")
        if init.probs.min() <= 0.0:
            raise ValueError("initial distribution must have full support")
        p = init.probs.copy()

    def try_polish(p_cur, gap_cur):
        """Newton-sharpened iterate, or None if it does not beat the bracket."""
        refined = _polish(rows, row_neg_ent, p_cur, gap_cur)
        if refined is None:
            return None
        q2 = refined @ rows
        d2 = _row_divergences(rows, row_neg_ent, q2)
        up2, lo2 = float(d2.max()), float(refined @ d2)
        if 0.0 <= up2 - lo2 <= min(tol_nats, gap_cur):
            return refined, q2, lo2, up2
        return None

    tol_nats = tol * LN2
    lower = upper = math.nan
    converged_at = 0
    for it in range(1, max_iter + 1):
        q = p @ rows
        d = _row_divergences(rows, row_neg_ent, q)
        upper = float(d.max())
        lower = float(p @ d)
        if upper - lower <= tol_nats:
            converged_at = it
            polished = try_polish(p, upper - lower)
            if polished is not None:
                p, q, lower, upper = polished
            break
        # The multiplicative update closes the bracket slowly on nearly
        # degenerate channels, so periodically hand the iterate to the
        # stationarity solver, keeping it only when its bracket certifies.
        if it & (it - 1) == 0 and it >= 4:
            polished = try_polish(p, upper - lower)
            if polished is not None:
                p, q, lower, upper = polished
                converged_at = it
                break
        p = p * np.exp(d - upper)
        p = np.maximum(p, _P_FLOOR)
        p /= p.sum()
    else:
        raise ConvergenceError((lower / LN2, upper / LN2), max_iter)

    out_full = np.zeros(len(ch.output))
    out_full[reachable] = q
    return CapacityReport(
        channel=ch,
        capacity=(lower + upper) / 2.0 / LN2,
        achieving_input=Distribution(ch.input, p),
        optimal_output=Distribution(ch.output, out_full),
        iterations=converged_at,
        gap=(upper - lower) / LN2,
    )


def divergence_profile(ch: Channel, r_star: Distribution) -> np.ndarray:
    """Vector of D(ch(.|x) || r_star) in bits, one entry per input symbol.

    Raises if any entry is infinite: a reference that misses a reachable
    output cannot be an optimal output distribution.
    """
    if r_star.alphabet != ch.output:
        raise ValueError("reference distribution must live on the channel output alphabet")
    reachable = ch.reachable_outputs()
    rows = ch.rows[:, reachable]
    ref = r_star.probs[reachable]
    bad = (rows > 0.0) & (ref == 0.0)[None, :]
    if bad.any():
        x = int(np.flatnonzero(bad.any(axis=1))[0])
        raise ValueError(
            f"reference assigns zero mass to an output reachable from input "
            f"{ch.input.symbols[x]!r}; divergence is infinite"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        row_neg_ent = np.where(rows > 0.0, rows * np.log(np.maximum(rows, _P_FLOOR)), 0.0).sum(axis=1)
    return _row_divergences(rows, row_neg_ent, ref) / LN2


def compute_peak_set(report: CapacityReport, tol_peak: float = DEFAULT_PEAK_TOL) -> tuple[str, ...]:
    """Input symbols whose divergence to the optimal output attains capacity.

    The effective tolerance never drops below 10x the capacity bracket, since
    symbols cannot be classified more finely than capacity itself is known.
    """
    if report.divergence_profile is None:
        raise ValueError("report carries no divergence profile; run analyze_channel")
    eff = max(tol_peak, 10.0 * report.gap)
    mask = report.divergence_profile >= report.capacity - eff
    if not mask.any():
        raise ValueError(
            f"no input reaches capacity within {eff!r} bits; raise the peak tolerance"
        )
    return tuple(s for s, m in zip(report.channel.input, mask) if m)


def _support_union_lp(ch: Channel, peak: tuple[str, ...], r_star: Distribution, lp_tol: float):
    """Per-symbol LP probes over capacity-achieving inputs supported on the
    peak set; returns (union symbols, averaged witness vector)."""
    idx = [ch.input.index(s) for s in peak]
    reachable = ch.reachable_outputs()
    a_eq = np.vstack([ch.rows[idx][:, reachable].T, np.ones(len(idx))])
    b_eq = np.concatenate([r_star.probs[reachable], [1.0]])

    member = []
    witnesses = []
    for j in range(len(idx)):
        res = lp_solve_max_coordinate(a_eq, b_eq, j)
        if res.status != OPTIMAL:
            raise RuntimeError(
                "no input supported on the peak set reproduces the optimal output; "
                "the capacity certificate is inconsistent"
            )
        witnesses.append(res.x)
        if res.value > lp_tol:
            member.append(peak[j])
    avg = np.mean(witnesses, axis=0)
    full = np.zeros(len(ch.input))
    full[idx] = avg
    return tuple(member), full


def compute_support_union(
    ch: Channel,
    peak: tuple[str, ...],
    r_star: Distribution,
    lp_tol: float = DEFAULT_LP_TOL,
) -> tuple[str, ...]:
    """Union of supports over all capacity-achieving input distributions.

    A symbol belongs iff some distribution supported on the peak set whose
    pushforward equals the optimal output gives it mass above `lp_tol`.
    """
    return _support_union_lp(ch, peak, r_star, lp_tol)[0]


def support_union_witness(
    ch: Channel,
    peak: tuple[str, ...],
    r_star: Distribution,
    lp_tol: float = DEFAULT_LP_TOL,
) -> Distribution:
    """A single capacity-achieving input whose support is the whole union
    (equal-weight average of the per-symbol LP vertices)."""
    return Distribution(ch.input, _support_union_lp(ch, peak, r_star, lp_tol)[1])


def is_capacity_achieving(p: Distribution, report: CapacityReport, tol: float = 1e-6) -> bool:
    """True iff supp(p) sits inside the peak set and p reproduces the optimal
    output within `tol` in max norm."""
    if report.peak_set is None:
        raise ValueError("report carries no peak set; run analyze_channel")
    if p.alphabet != report.channel.input:
        raise ValueError("distribution must live on the channel input alphabet")
    if not set(p.support()) <= set(report.peak_set):
        return False
    pushed = p.probs @ report.channel.rows
    return bool(np.abs(pushed - report.optimal_output.probs).max() <= tol)


def analyze_channel(
    ch: Channel,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    tol_peak: float = DEFAULT_PEAK_TOL,
    lp_tol: float = DEFAULT_LP_TOL,
) -> CapacityReport:
    """Full capacity certificate: bracketed capacity, optimal output,
    divergence profile, peak set, support union, and an achieving input whose
    support is exactly the union."""
    base = compute_capacity(ch, tol=tol, max_iter=max_iter)
    profile = divergence_profile(ch, base.optimal_output)
    staged = replace(base, divergence_profile=profile)
    peak = compute_peak_set(staged, tol_peak)
    union, witness = _support_union_lp(ch, peak, base.optimal_output, lp_tol)
    return replace(
        staged,
        peak_set=peak,
        support_union=union,
        achieving_input=Distribution(ch.input, witness),
    )
