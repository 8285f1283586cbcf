"""Global checks of channel-ordering conditions over the input simplex.

Each check minimizes a difference of concave information functionals with a
seeded multistart projected-gradient search plus a deterministic simplex grid,
and reports either a violating input distribution or that the condition
survived the search budget. Also here: the exact per-symbol divergence screen
for point-mass inputs and the small-mixture expansion linking information
rates to output divergences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .capacity import CapacityReport
from .core import (
    LN2,
    AlphabetMismatchError,
    Channel,
    Distribution,
    kl_divergence,
    push_forward,
)

HOLDS_UP_TO_SEARCH = "HOLDS_UP_TO_SEARCH"
VIOLATED = "VIOLATED"

_GRID_LIMIT = 1_000_000
_AUTO_SUBDIVISIONS = {1: 1, 2: 1000, 3: 100, 4: 40, 5: 20, 6: 10, 7: 8, 8: 7}


class AssumptionNotMetError(RuntimeError):
    """A check was invoked outside the regime where its statement applies."""


@dataclass(frozen=True)
class SearchConfig:
    """Budget and tolerances for simplex minimization."""

    starts: int = 64
    seed: int = 0
    max_iters: int = 400
    grid_step: float | None = None  # None picks a per-dimension default
    violation_tol: float = 1e-7     # bits below zero that count as a violation
    fd_step: float = 1e-6


@dataclass(frozen=True, eq=False)
class MinimizationResult:
    value: float
    argmin: np.ndarray
    starts: int
    evaluations: int


@dataclass(frozen=True, eq=False)
class SearchVerdict:
    """Outcome of one condition check; `gap` is the most negative objective
    value found (>= 0 means no violation was ever seen)."""

    status: str
    gap: float
    witness: Distribution | None
    starts: int
    evaluations: int


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, v.size + 1)
    cond = u + (1.0 - css) / ks > 0.0
    rho = int(np.nonzero(cond)[0][-1])
    tau = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + tau, 0.0)


def _simplex_grid(dim: int, subdivisions: int) -> np.ndarray:
    """All points of the simplex with coordinates that are multiples of
    1/subdivisions, in a fixed lexicographic order."""
    m = subdivisions
    combos = combinations(range(m + dim - 1), dim - 1)
    pts = []
    for bars in combos:
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(m + dim - 2 - prev)
        pts.append(parts)
    return np.asarray(pts, dtype=float) / m


def _grid_size(dim: int, subdivisions: int) -> int:
    return math.comb(subdivisions + dim - 1, dim - 1)


def _projected_gradient(objective, gradient, x0, max_iters):
    """Armijo-backtracked projected gradient descent; returns (x, f(x), evals)."""
    x = project_to_simplex(np.asarray(x0, dtype=float))
    fx = objective(x)
    evals = 1
    scale = 1.0
    for _ in range(max_iters):
        g = np.nan_to_num(gradient(x), nan=0.0, posinf=1e6, neginf=-1e6)
        alpha = scale
        accepted = False
        move = 0.0
        for _ in range(50):
            y = project_to_simplex(x - alpha * g)
            diff = x - y
            move = float(diff @ diff)
            if move == 0.0:
                break
            fy = objective(y)
            evals += 1
            if fy <= fx - 1e-4 * move / alpha:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
        x, fx = y, fy
        scale = min(alpha * 2.0, 64.0)
        if move < 1e-20:
            break
    return x, fx, evals


def dc_minimize(
    objective,
    dim: int,
    cfg: SearchConfig = SearchConfig(),
    gradient=None,
    batch_objective=None,
) -> MinimizationResult:
    """Minimize a (typically difference-of-concave) function over the simplex.

    Runs projected gradient descent from the uniform point, every vertex,
    `cfg.starts` seeded Dirichlet draws, and the best point of a deterministic
    grid (included whenever its size stays under a megapoint). Gradients fall
    back to central finite differences when no formula is supplied. Ties are
    broken toward the lexicographically smallest minimizer, so results are
    reproducible regardless of evaluation order.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    evals = 0

    if gradient is None:
        h = cfg.fd_step

        def gradient(x, _f=objective):
            g = np.empty(dim)
            for i in range(dim):
                bump = np.zeros(dim)
                bump[i] = h
                up = np.maximum(x + bump, 0.0)
                dn = np.maximum(x - bump, 0.0)
                g[i] = (_f(up / up.sum()) - _f(dn / dn.sum())) / (2.0 * h)
            return g

    rng = np.random.default_rng(cfg.seed)
    starts = [np.full(dim, 1.0 / dim)]
    starts.extend(np.eye(dim))
    if cfg.starts > 0:
        starts.extend(rng.dirichlet(np.ones(dim), size=cfg.starts))

    candidates = []

    subdivisions = (
        _AUTO_SUBDIVISIONS.get(dim, 6) if cfg.grid_step is None
        else max(1, round(1.0 / cfg.grid_step))
    )
    if _grid_size(dim, subdivisions) <= _GRID_LIMIT:
        grid = _simplex_grid(dim, subdivisions)
        if batch_objective is not None:
            values = np.asarray(batch_objective(grid), dtype=float)
        else:
            values = np.array([objective(p) for p in grid])
        evals += len(grid)
        best = int(values.argmin())
        candidates.append((float(values[best]), grid[best]))
        starts.append(grid[best])

    for x0 in starts:
        x, fx, used = _projected_gradient(objective, gradient, x0, cfg.max_iters)
        evals += used
        candidates.append((float(fx), x))

    value, argmin = min(candidates, key=lambda c: (c[0], tuple(c[1])))
    return MinimizationResult(value, argmin, len(starts), evals)


def _info_pieces(ch: Channel):
    """(rows restricted to reachable outputs, per-row negative entropy)."""
    rows = ch.rows[:, ch.reachable_outputs()]
    rne = np.where(rows > 0.0, rows * np.log(np.maximum(rows, 1e-300)), 0.0).sum(axis=1)
    return rows, rne


def _mi_bits(rows, rne, p):
    q = p @ rows
    ent = -np.where(q > 0.0, q * np.log(np.maximum(q, 1e-300)), 0.0).sum()
    return (float(p @ rne) + float(ent)) / LN2


def _mi_bits_batch(rows, rne, pts):
    q = pts @ rows
    ent = -np.where(q > 0.0, q * np.log(np.maximum(q, 1e-300)), 0.0).sum(axis=1)
    return (pts @ rne + ent) / LN2


def _div_vector_bits(rows, rne, p):
    """D(row_x || pushforward of p) for every x, in bits; +inf clipped later."""
    q = p @ rows
    with np.errstate(divide="ignore", invalid="ignore"):
        logq = np.where(q > 0.0, np.log(np.maximum(q, 1e-300)), -np.inf)
        out = rne - rows @ np.where(np.isfinite(logq), logq, -1e9)
    return out / LN2


def _check_from_minimum(res: MinimizationResult, alphabet, violation_tol) -> SearchVerdict:
    if res.value < -violation_tol:
        witness = Distribution(alphabet, res.argmin)
        return SearchVerdict(VIOLATED, res.value, witness, res.starts, res.evaluations)
    return SearchVerdict(HOLDS_UP_TO_SEARCH, res.value, None, res.starts, res.evaluations)


def _require_shared_input(ch1: Channel, ch2: Channel):
    if ch1.input != ch2.input:
        raise AlphabetMismatchError("checks need channels with a shared input alphabet")


def more_capable_check(ch1: Channel, ch2: Channel, cfg: SearchConfig = SearchConfig()) -> SearchVerdict:
    """Does I(X;Y) >= I(X;Z) hold for every input distribution?

    Minimizes the difference; a minimum below -violation_tol refutes the
    ordering and the witness input is returned.
    """
    _require_shared_input(ch1, ch2)
    rows1, rne1 = _info_pieces(ch1)
    rows2, rne2 = _info_pieces(ch2)

    def objective(p):
        return _mi_bits(rows1, rne1, p) - _mi_bits(rows2, rne2, p)

    def batch(pts):
        return _mi_bits_batch(rows1, rne1, pts) - _mi_bits_batch(rows2, rne2, pts)

    def gradient(p):
        return _div_vector_bits(rows1, rne1, p) - _div_vector_bits(rows2, rne2, p)

    res = dc_minimize(objective, len(ch1.input), cfg, gradient=gradient, batch_objective=batch)
    return _check_from_minimum(res, ch1.input, cfg.violation_tol)


def ratio_condition_check(
    ch1: Channel,
    ch2: Channel,
    c1: float,
    c2: float,
    cfg: SearchConfig = SearchConfig(),
) -> SearchVerdict:
    """Does I(X;Y)/c1 <= I(X;Z)/c2 hold for every input distribution?

    Minimizes I(X;Z)/c2 - I(X;Y)/c1, so the reported gap is dimensionless
    (information rates normalized by the respective capacities).
    """
    _require_shared_input(ch1, ch2)
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("the per-capacity ratio condition needs positive capacities")
    rows1, rne1 = _info_pieces(ch1)
    rows2, rne2 = _info_pieces(ch2)

    def objective(p):
        return _mi_bits(rows2, rne2, p) / c2 - _mi_bits(rows1, rne1, p) / c1

    def batch(pts):
        return _mi_bits_batch(rows2, rne2, pts) / c2 - _mi_bits_batch(rows1, rne1, pts) / c1

    def gradient(p):
        return _div_vector_bits(rows2, rne2, p) / c2 - _div_vector_bits(rows1, rne1, p) / c1

    res = dc_minimize(objective, len(ch1.input), cfg, gradient=gradient, batch_objective=batch)
    return _check_from_minimum(res, ch1.input, cfg.violation_tol)


def divergence_form_check(
    ch1: Channel,
    ch2: Channel,
    rep1: CapacityReport,
    rep2: CapacityReport,
    cfg: SearchConfig = SearchConfig(),
) -> SearchVerdict:
    """Capacity-normalized output-divergence form of the ratio condition:
    minimize D(p_Y || r*)/c1 - D(p_Z || s*)/c2.

    Only valid when every input symbol participates in some optimizer of each
    channel (full support union), which is exactly when the two objectives
    coincide pointwise with the ratio form.
    """
    _require_shared_input(ch1, ch2)
    for name, rep, ch in (("first", rep1, ch1), ("second", rep2, ch2)):
        if rep.support_union is None:
            raise ValueError(f"{name} report lacks a support union; run analyze_channel")
        if len(rep.support_union) != len(ch.input):
            raise AssumptionNotMetError(
                f"the {name} channel's optimizers miss part of the input alphabet; "
                "the divergence form does not apply"
            )
    c1, c2 = rep1.capacity, rep2.capacity
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("the divergence form needs positive capacities")
    mask1 = ch1.reachable_outputs()
    mask2 = ch2.reachable_outputs()
    rows1, rows2 = ch1.rows[:, mask1], ch2.rows[:, mask2]
    ref1 = rep1.optimal_output.probs[mask1]
    ref2 = rep2.optimal_output.probs[mask2]
    log_ref1, log_ref2 = np.log(ref1), np.log(ref2)

    def _dout(rows, log_ref, p):
        q = p @ rows
        mask = q > 0.0
        return float((q[mask] * (np.log(q[mask]) - log_ref[mask])).sum()) / LN2

    def objective(p):
        return _dout(rows1, log_ref1, p) / c1 - _dout(rows2, log_ref2, p) / c2

    def batch(pts):
        q1 = pts @ rows1
        q2 = pts @ rows2
        d1 = np.where(q1 > 0.0, q1 * (np.log(np.maximum(q1, 1e-300)) - log_ref1), 0.0).sum(axis=1)
        d2 = np.where(q2 > 0.0, q2 * (np.log(np.maximum(q2, 1e-300)) - log_ref2), 0.0).sum(axis=1)
        return (d1 / c1 - d2 / c2) / LN2

    def gradient(p):
        q1 = p @ rows1
        q2 = p @ rows2
        with np.errstate(divide="ignore"):
            t1 = rows1 @ np.where(q1 > 0.0, np.log(np.maximum(q1, 1e-300)) - log_ref1, -1e9)
            t2 = rows2 @ np.where(q2 > 0.0, np.log(np.maximum(q2, 1e-300)) - log_ref2, -1e9)
        return (t1 / c1 - t2 / c2) / LN2

    res = dc_minimize(objective, len(ch1.input), cfg, gradient=gradient, batch_objective=batch)
    return _check_from_minimum(res, ch1.input, cfg.violation_tol)


def _profile_allow_inf(ch: Channel, ref: Distribution) -> np.ndarray:
    """Per-input divergence to `ref` in bits, +inf where support escapes."""
    out = np.empty(len(ch.input))
    for i in range(len(ch.input)):
        row = ch.rows[i]
        mask = row > 0.0
        if np.any(ref.probs[mask] == 0.0):
            out[i] = np.inf
        else:
            out[i] = float((row[mask] * np.log(row[mask] / ref.probs[mask])).sum()) / LN2
    return out


@dataclass(frozen=True, eq=False)
class VertexScreen:
    """Exact point-mass divergence tables for the two sufficient-condition
    inequality families, one row per input symbol.

    Family one compares each symbol's first-channel divergence, taken against
    the first-channel image of the *second* channel's optimizer, with its
    second-channel peak divergence. Family two compares, after dividing by
    the respective capacities, each symbol's second-channel divergence against
    the first-channel peak divergence, anchored at the *first* channel's
    optimizer.
    """

    symbols: tuple[str, ...]
    c1: float
    c2: float
    div_first_at_second_mix: np.ndarray   # D(p(y|x) || s_Y)
    div_second_peak: np.ndarray           # D(p(z|x) || s*_Z)
    div_second_at_first_mix: np.ndarray   # D(p(z|x) || r_Z)
    div_first_peak: np.ndarray            # D(p(y|x) || r*_Y)
    first_family_holds: bool
    second_family_holds: bool
    mixed_output_gap: float               # max |r_Z - s*_Z|
    mixed_output_is_optimal: bool


def vertex_screen(
    ch1: Channel,
    ch2: Channel,
    rep1: CapacityReport,
    rep2: CapacityReport,
    tol: float = 1e-9,
) -> VertexScreen:
    """Evaluate both point-mass inequality families exactly (no search).

    When family two holds, the second-channel image of the first channel's
    optimizer can be checked against the second channel's optimal output;
    agreement is reported in `mixed_output_gap`.
    """
    _require_shared_input(ch1, ch2)
    for name, rep in (("first", rep1), ("second", rep2)):
        if rep.divergence_profile is None:
            raise ValueError(f"{name} report lacks a divergence profile; run analyze_channel")

    s_y = push_forward(rep2.achieving_input, ch1)
    r_z = push_forward(rep1.achieving_input, ch2)

    div1_mix = _profile_allow_inf(ch1, s_y)
    div2_mix = _profile_allow_inf(ch2, r_z)
    div1_peak = rep1.divergence_profile
    div2_peak = rep2.divergence_profile

    first_holds = bool(np.all(div1_mix <= div2_peak + tol))
    second_holds = bool(
        np.all(div2_mix / rep2.capacity <= div1_peak / rep1.capacity + tol)
    )
    gap = float(np.abs(r_z.probs - rep2.optimal_output.probs).max())
    return VertexScreen(
        symbols=ch1.input.symbols,
        c1=rep1.capacity,
        c2=rep2.capacity,
        div_first_at_second_mix=div1_mix,
        div_second_peak=div2_peak,
        div_second_at_first_mix=div2_mix,
        div_first_peak=div1_peak,
        first_family_holds=first_holds,
        second_family_holds=second_holds,
        mixed_output_gap=gap,
        mixed_output_is_optimal=second_holds and gap <= 1e-6,
    )


@dataclass(frozen=True, eq=False)
class PerturbationProbe:
    """Inputs for the small-mixture expansion: write the mixing distribution
    as mixing = eps * base + (1 - eps) * complement and measure how much a
    binary selector of the two branches tells the receiver."""

    base: Distribution
    mixing: Distribution
    epsilons: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    epsilons: tuple[float, ...]
    rates: tuple[float, ...]        # I(V;Y) per epsilon, bits
    slopes: tuple[float, ...]       # I(V;Y)/eps per epsilon
    remainders: tuple[float, ...]   # |I(V;Y) - eps * divergence|
    fitted_slope: float             # slopes extrapolated to eps -> 0
    remainder_exponent: float       # log-log growth rate of the remainder
    divergence: float               # D(base_Y || mixing_Y), the predicted slope


def perturbation_feasibility_bound(base: Distribution, mixing: Distribution) -> float:
    """Largest mixture weight of `base` that keeps the complement a
    distribution: min over the base's support of mixing(x)/base(x)."""
    if base.alphabet != mixing.alphabet:
        raise AlphabetMismatchError("base and mixing must share an alphabet")
    mask = base.probs > 0.0
    return float((mixing.probs[mask] / base.probs[mask]).min())


def perturbation_identity_check(probe: PerturbationProbe, ch: Channel) -> PerturbationResult:
    """First-order expansion of the selector information rate.

    With V indicating the base branch (weight eps) of the mixture, I(V;Y)
    equals eps * D(base_Y || mixing_Y) up to a quadratic remainder; the
    result carries the measured slopes and the empirical remainder exponent.
    """
    base, mixing = probe.base, probe.mixing
    if base.alphabet != ch.input:
        raise AlphabetMismatchError("probe distributions must live on the channel input alphabet")
    bound = perturbation_feasibility_bound(base, mixing)
    for eps in probe.epsilons:
        if not 0.0 < eps < bound:
            raise ValueError(
                f"mixture weight {eps} outside (0, {bound!r}), the feasible range "
                "for this base/mixing pair"
            )

    base_y = push_forward(base, ch).probs
    mix_y = push_forward(mixing, ch).probs
    d_ref = _kl_bits(base_y, mix_y)

    rates, slopes, remainders = [], [], []
    for eps in probe.epsilons:
        comp = (mixing.probs - eps * base.probs) / (1.0 - eps)
        comp_y = np.maximum(comp, 0.0) @ ch.rows
        joint = np.vstack([eps * base_y, (1.0 - eps) * comp_y])
        marg_y = joint.sum(axis=0)
        pv = joint.sum(axis=1)
        nz = joint > 0.0
        ratio = joint[nz] / (np.outer(pv, marg_y)[nz])
        rate = float((joint[nz] * np.log(ratio)).sum()) / LN2
        rates.append(rate)
        slopes.append(rate / eps)
        remainders.append(abs(rate - eps * d_ref))

    eps_arr = np.asarray(probe.epsilons, dtype=float)
    if len(eps_arr) >= 2:
        fitted = float(np.polyfit(eps_arr, slopes, 1)[1])
        if min(remainders) > 0.0:
            exponent = float(np.polyfit(np.log(eps_arr), np.log(remainders), 1)[0])
        else:
            exponent = math.inf
    else:
        fitted = slopes[0]
        exponent = math.nan

    return PerturbationResult(
        epsilons=tuple(probe.epsilons),
        rates=tuple(rates),
        slopes=tuple(slopes),
        remainders=tuple(remainders),
        fitted_slope=fitted,
        remainder_exponent=exponent,
        divergence=d_ref,
    )


def _kl_bits(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0.0
    if np.any(q[mask] == 0.0):
        return math.inf
    return float((p[mask] * np.log(p[mask] / q[mask])).sum()) / LN2
