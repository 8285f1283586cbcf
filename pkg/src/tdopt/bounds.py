"""Rate-region machinery for two-receiver broadcast pairs.

Covers the time-division region test, evaluation of the inner-bound and
outer-bound constraint triples induced by auxiliary joints, the explicit
time-sharing auxiliary construction with its exact mixture identities, and
seeded region sampling that mixes Dirichlet draws with structured probes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import CapacityReport, compute_capacity
from .core import (
    Alphabet,
    AlphabetMismatchError,
    Channel,
    Distribution,
    JointDistribution,
    extend_with_channel,
    mutual_information_pair,
)

MARTON = "MARTON"
UV = "UV"
TD = "TD"

U_STAR = "__u_star"
V_STAR = "__v_star"

_CELL_LIMIT = 1_000_000
_BATCH = 512
_CONTAIN_TOL = 1e-12


@dataclass(frozen=True)
class RatePoint:
    """A pair of nonnegative rates in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ValueError(f"rates must be nonnegative, got ({self.r1}, {self.r2})")


def td_region_contains(pt: RatePoint, c1: float, c2: float) -> tuple[bool, float]:
    """Membership in {R1/c1 + R2/c2 <= 1} plus the slack 1 - R1/c1 - R2/c2."""
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("the time-division region needs positive capacities")
    slack = 1.0 - pt.r1 / c1 - pt.r2 / c2
    return slack >= -_CONTAIN_TOL, slack


@dataclass(frozen=True)
class RateConstraints:
    """Pentagon {R1 <= max_r1, R2 <= max_r2, R1+R2 <= max_sum} for one
    auxiliary choice."""

    max_r1: float
    max_r2: float
    max_sum: float

    def corners(self) -> tuple[RatePoint, RatePoint]:
        """The two Pareto corner points, coordinates clamped at 0.

        Clamping can lift a corner off the pentagon only onto an axis
        segment already dominated by a single-user point, so the corners
        are always safe inputs to time-division slack checks.
        """
        a = RatePoint(
            max(self.max_r1, 0.0),
            max(min(self.max_r2, self.max_sum - self.max_r1), 0.0),
        )
        b = RatePoint(
            max(min(self.max_r1, self.max_sum - self.max_r2), 0.0),
            max(self.max_r2, 0.0),
        )
        return a, b


def _require_pair(ch1: Channel, ch2: Channel, joint: JointDistribution, x_axis: int):
    if ch1.input != ch2.input:
        raise AlphabetMismatchError("channels must share the input alphabet")
    if joint.alphabets[x_axis] != ch1.input:
        raise AlphabetMismatchError(
            f"joint axis {x_axis} must carry the shared channel input alphabet"
        )


def marton_rates(aux_joint: JointDistribution, ch1: Channel, ch2: Channel) -> RateConstraints:
    """Inner-bound constraint triple for an auxiliary joint over (U, V, W, X).

    Outputs are appended through each channel; the sum constraint is
    min{I(W;Y), I(W;Z)} + I(U;Y|W) + I(V;Z|W) - I(U;V|W).
    """
    if aux_joint.ndim != 4:
        raise ValueError("inner-bound evaluation needs a 4-axis joint (U, V, W, X)")
    _require_pair(ch1, ch2, aux_joint, 3)
    jy = extend_with_channel(aux_joint, 3, ch1)
    jz = extend_with_channel(aux_joint, 3, ch2)
    iw_y = mutual_information_pair(jy, (2,), (4,))
    iw_z = mutual_information_pair(jz, (2,), (4,))
    max_r1 = mutual_information_pair(jy, (0, 2), (4,))
    max_r2 = mutual_information_pair(jz, (1, 2), (4,))
    max_sum = (
        min(iw_y, iw_z)
        + mutual_information_pair(jy, (0,), (4,), (2,))
        + mutual_information_pair(jz, (1,), (4,), (2,))
        - mutual_information_pair(aux_joint, (0,), (1,), (2,))
    )
    return RateConstraints(max_r1, max_r2, max_sum)


def uv_bound_rates(aux_joint: JointDistribution, ch1: Channel, ch2: Channel) -> RateConstraints:
    """Outer-bound constraint triple for an auxiliary joint over (U, V, X):
    I(U;Y), I(V;Z), min{I(U;Y) + I(V;Z|U), I(V;Z) + I(U;Y|V)}."""
    if aux_joint.ndim != 3:
        raise ValueError("outer-bound evaluation needs a 3-axis joint (U, V, X)")
    _require_pair(ch1, ch2, aux_joint, 2)
    jy = extend_with_channel(aux_joint, 2, ch1)
    jz = extend_with_channel(aux_joint, 2, ch2)
    iu_y = mutual_information_pair(jy, (0,), (3,))
    iv_z = mutual_information_pair(jz, (1,), (3,))
    max_sum = min(
        iu_y + mutual_information_pair(jz, (1,), (3,), (0,)),
        iv_z + mutual_information_pair(jy, (0,), (3,), (1,)),
    )
    return RateConstraints(iu_y, iv_z, max_sum)


@dataclass(frozen=True, eq=False)
class TimeshareConstruction:
    """Auxiliary joint over (Q, W, U', V', X) built from two transmission
    plans: with probability `first_fraction` the selector Q is 0, W carries
    the first plan's auxiliary, U' copies X and V' is pinned to a reserved
    symbol; on Q = 1 the roles swap to the second plan.

    By construction the active private auxiliary is a copy of X and the idle
    one is constant on every (Q, W) slice, so I(U';V'|Q,W) vanishes exactly
    rather than up to rounding.
    """

    first_fraction: float
    first_plan: JointDistribution   # (X, first auxiliary)
    second_plan: JointDistribution  # (X, second auxiliary)
    joint: JointDistribution        # (Q, W, U', V', X)

    def marton_joint(self) -> JointDistribution:
        """Reshape to the (U, V, W, X) arity with W = (Q, W) merged."""
        arr = self.joint.probs
        q_alpha, w_alpha, u_alpha, v_alpha, x_alpha = self.joint.alphabets
        merged = Alphabet(
            tuple(f"{q}:{w}" for q in q_alpha.symbols for w in w_alpha.symbols)
        )
        moved = np.transpose(arr, (2, 3, 0, 1, 4))
        moved = moved.reshape(len(u_alpha), len(v_alpha), len(merged), len(x_alpha))
        return JointDistribution((u_alpha, v_alpha, merged, x_alpha), moved)


def timeshare_construction(
    first_plan: JointDistribution,
    second_plan: JointDistribution,
    first_fraction: float,
) -> TimeshareConstruction:
    """Assemble the time-sharing auxiliary joint from two (X, auxiliary)
    plans and the fraction of uses devoted to the first receiver."""
    if not 0.0 <= first_fraction <= 1.0:
        raise ValueError(f"first_fraction must lie in [0, 1], got {first_fraction}")
    for name, plan in (("first", first_plan), ("second", second_plan)):
        if plan.ndim != 2:
            raise ValueError(f"{name} plan must be a 2-axis joint (input, auxiliary)")
    x_alpha = first_plan.alphabets[0]
    if second_plan.alphabets[0] != x_alpha:
        raise AlphabetMismatchError("plans must share the input alphabet")
    if U_STAR in x_alpha.symbols or V_STAR in x_alpha.symbols:
        raise ValueError(f"input alphabet may not use the reserved labels {U_STAR!r}, {V_STAR!r}")

    aux1 = first_plan.alphabets[1]
    aux2 = second_plan.alphabets[1]
    lam = float(first_fraction)
    nx, n1, n2 = len(x_alpha), len(aux1), len(aux2)

    q_alpha = Alphabet(("0", "1"))
    w_alpha = Alphabet(
        tuple(f"u:{s}" for s in aux1.symbols) + tuple(f"v:{s}" for s in aux2.symbols)
    )
    u_alpha = Alphabet(x_alpha.symbols + (U_STAR,))
    v_alpha = Alphabet(x_alpha.symbols + (V_STAR,))

    arr = np.zeros((2, n1 + n2, nx + 1, nx + 1, nx))
    xs = np.arange(nx)
    for a in range(n1):
        arr[0, a, xs, nx, xs] = lam * first_plan.probs[xs, a]
    for b in range(n2):
        arr[1, n1 + b, nx, xs, xs] = (1.0 - lam) * second_plan.probs[xs, b]

    joint = JointDistribution((q_alpha, w_alpha, u_alpha, v_alpha, x_alpha), arr)
    return TimeshareConstruction(lam, first_plan, second_plan, joint)


def timeshare_identities(
    tc: TimeshareConstruction, ch1: Channel, ch2: Channel
) -> dict[str, tuple[float, float]]:
    """Both sides of the construction's mixture identities, in bits.

    Keys map to (value on the full construction, value predicted from the
    two plans): the composite-auxiliary rate decomposes as
    I(Q,W;Y) = I(Q;Y) + lam*I(U;Y) + (1-lam)*I(V;Y), the private rates scale
    the plans' conditional informations by their time fractions, and the
    cross term I(U';V'|Q,W) is identically zero.
    """
    lam = tc.first_fraction
    ext1 = extend_with_channel(tc.joint, 4, ch1)   # (Q, W, U', V', X, Y)
    ext2 = extend_with_channel(tc.joint, 4, ch2)
    plan1_y = extend_with_channel(tc.first_plan, 0, ch1)   # (X, U, Y)
    plan1_z = extend_with_channel(tc.first_plan, 0, ch2)
    plan2_y = extend_with_channel(tc.second_plan, 0, ch1)
    plan2_z = extend_with_channel(tc.second_plan, 0, ch2)

    return {
        "first_aux_rate": (
            mutual_information_pair(ext1, (0, 1), (5,)),
            mutual_information_pair(ext1, (0,), (5,))
            + lam * mutual_information_pair(plan1_y, (1,), (2,))
            + (1.0 - lam) * mutual_information_pair(plan2_y, (1,), (2,)),
        ),
        "second_aux_rate": (
            mutual_information_pair(ext2, (0, 1), (5,)),
            mutual_information_pair(ext2, (0,), (5,))
            + lam * mutual_information_pair(plan1_z, (1,), (2,))
            + (1.0 - lam) * mutual_information_pair(plan2_z, (1,), (2,)),
        ),
        "first_private_rate": (
            mutual_information_pair(ext1, (2,), (5,), (0, 1)),
            lam * mutual_information_pair(plan1_y, (0,), (2,), (1,)),
        ),
        "second_private_rate": (
            mutual_information_pair(ext2, (3,), (5,), (0, 1)),
            (1.0 - lam) * mutual_information_pair(plan2_z, (0,), (2,), (1,)),
        ),
        "aux_cross_information": (
            mutual_information_pair(tc.joint, (2,), (3,), (0, 1)),
            0.0,
        ),
    }


@dataclass(frozen=True, eq=False)
class RegionSample:
    """Sampled rate points from one bound, reproducible from the metadata."""

    points: tuple[RatePoint, ...]
    source: str  # MARTON, UV or TD
    seed: int
    cardinalities: tuple[int, int, int]
    samples: int

    def csv_text(self) -> str:
        lines = ["source,R1,R2"]
        lines.extend(
            f"{self.source},{pt.r1:.12g},{pt.r2:.12g}" for pt in self.points
        )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class SampleReport:
    """A RegionSample plus its worst time-division slack and, when that
    slack is negative, the auxiliary joint that produced it (replayable
    through the rate evaluators)."""

    sample: RegionSample
    min_slack: float
    worst_point: RatePoint | None
    worst_aux: JointDistribution | None


def _copy_plan(p: Distribution) -> JointDistribution:
    """(X, U) joint with U a noiseless copy of X distributed as `p`."""
    return JointDistribution((p.alphabet, p.alphabet), np.diag(p.probs))


def _resolve_reports(ch1, ch2, reports):
    rep1, rep2 = reports if reports is not None else (compute_capacity(ch1), compute_capacity(ch2))
    if rep1.capacity <= 0.0 or rep2.capacity <= 0.0:
        raise ValueError("region sampling against time division needs positive capacities")
    return rep1, rep2


def _check_cells(cardinalities, nx: int, arity: int):
    cards = tuple(int(c) for c in cardinalities)
    if len(cards) != 3 or any(c < 1 for c in cards):
        raise ValueError(f"cardinalities must be three counts >= 1, got {cardinalities}")
    cells = int(np.prod(cards[:arity], dtype=np.int64)) * nx
    if cells > _CELL_LIMIT:
        raise ValueError(
            f"auxiliary joint would need {cells} cells (limit {_CELL_LIMIT}); "
            "reduce the cardinalities"
        )
    return cards, cells


class _WorstTracker:
    def __init__(self, c1: float, c2: float):
        self.c1, self.c2 = c1, c2
        self.min_slack = 1.0
        self.point: RatePoint | None = None
        self.aux: JointDistribution | None = None

    def offer(self, pts, aux: JointDistribution):
        for pt in pts:
            _, slack = td_region_contains(pt, self.c1, self.c2)
            if slack < self.min_slack:
                self.min_slack = slack
                self.point = pt
                self.aux = aux


def _timeshare_probe_fractions() -> np.ndarray:
    return np.linspace(0.0, 1.0, 11)


def sample_marton(
    ch1: Channel,
    ch2: Channel,
    cardinalities: tuple[int, int, int] = (2, 2, 2),
    n_samples: int = 2000,
    seed: int = 0,
    reports: tuple[CapacityReport, CapacityReport] | None = None,
) -> SampleReport:
    """Sample the inner bound: Dirichlet-random auxiliary joints at the given
    (|U|, |V|, |W|) cardinalities plus structured time-sharing probes built
    from capacity-achieving inputs. Deterministic given the seed; with
    n_samples = 0 the sample is empty and the slack defaults to +1."""
    if ch1.input != ch2.input:
        raise AlphabetMismatchError("channels must share the input alphabet")
    nx = len(ch1.input)
    cards, cells = _check_cells(cardinalities, nx, 3)
    rep1, rep2 = _resolve_reports(ch1, ch2, reports)
    tracker = _WorstTracker(rep1.capacity, rep2.capacity)
    points: list[RatePoint] = []

    if n_samples > 0:
        plan1 = _copy_plan(rep1.achieving_input)
        plan2 = _copy_plan(rep2.achieving_input)
        for lam in _timeshare_probe_fractions():
            aux = timeshare_construction(plan1, plan2, float(lam)).marton_joint()
            corners = marton_rates(aux, ch1, ch2).corners()
            points.extend(corners)
            tracker.offer(corners, aux)

        alphas = tuple(
            Alphabet.of_size(cards[i], prefix) for i, prefix in enumerate(("u", "v", "w"))
        )
        shape = (cards[0], cards[1], cards[2], nx)
        done, batch_index = 0, 0
        while done < n_samples:
            take = min(_BATCH, n_samples - done)
            rng = np.random.default_rng([seed, batch_index])
            draws = rng.dirichlet(np.ones(cells), size=take)
            for row in draws:
                aux = JointDistribution(alphas + (ch1.input,), row.reshape(shape))
                corners = marton_rates(aux, ch1, ch2).corners()
                points.extend(corners)
                tracker.offer(corners, aux)
            done += take
            batch_index += 1

    sample = RegionSample(tuple(points), MARTON, seed, cards, n_samples)
    return SampleReport(sample, tracker.min_slack, tracker.point, tracker.aux)


def sample_uv(
    ch1: Channel,
    ch2: Channel,
    cardinalities: tuple[int, int, int] = (2, 2, 2),
    n_samples: int = 2000,
    seed: int = 0,
    reports: tuple[CapacityReport, CapacityReport] | None = None,
) -> SampleReport:
    """Sample the outer bound's constraint pentagons the same way, with
    single-user probes (one auxiliary copying X at a capacity-achieving
    input, the other constant) in place of the time-sharing probes.

    Sampled outer-bound points witness what the converse permits; they do
    not certify achievability.
    """
    if ch1.input != ch2.input:
        raise AlphabetMismatchError("channels must share the input alphabet")
    nx = len(ch1.input)
    cards, cells = _check_cells(cardinalities, nx, 2)
    rep1, rep2 = _resolve_reports(ch1, ch2, reports)
    tracker = _WorstTracker(rep1.capacity, rep2.capacity)
    points: list[RatePoint] = []
    const = Alphabet(("c0",))

    if n_samples > 0:
        p1 = rep1.achieving_input
        first = JointDistribution(
            (p1.alphabet, const, p1.alphabet), np.diag(p1.probs)[:, None, :]
        )
        p2 = rep2.achieving_input
        second = JointDistribution(
            (const, p2.alphabet, p2.alphabet), np.diag(p2.probs)[None, :, :]
        )
        for aux in (first, second):
            corners = uv_bound_rates(aux, ch1, ch2).corners()
            points.extend(corners)
            tracker.offer(corners, aux)

        alphas = tuple(
            Alphabet.of_size(cards[i], prefix) for i, prefix in enumerate(("u", "v"))
        )
        shape = (cards[0], cards[1], nx)
        done, batch_index = 0, 0
        while done < n_samples:
            take = min(_BATCH, n_samples - done)
            rng = np.random.default_rng([seed, batch_index])
            draws = rng.dirichlet(np.ones(cells), size=take)
            for row in draws:
                aux = JointDistribution(alphas + (ch1.input,), row.reshape(shape))
                corners = uv_bound_rates(aux, ch1, ch2).corners()
                points.extend(corners)
                tracker.offer(corners, aux)
            done += take
            batch_index += 1

    sample = RegionSample(tuple(points), UV, seed, cards, n_samples)
    return SampleReport(sample, tracker.min_slack, tracker.point, tracker.aux)


def td_boundary_sample(c1: float, c2: float, count: int = 101) -> RegionSample:
    """The line R1/c1 + R2/c2 = 1 traced at `count` evenly spaced points,
    from the first receiver's corner to the second's."""
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("the time-division boundary needs positive capacities")
    if count < 2:
        raise ValueError("need at least the two corner points")
    alphas = np.linspace(1.0, 0.0, count)
    points = tuple(RatePoint(float(a * c1), float((1.0 - a) * c2)) for a in alphas)
    return RegionSample(points, TD, 0, (1, 1, 1), count)
