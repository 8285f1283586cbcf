"""Finite-alphabet probability primitives: alphabets, distributions, channels,
joints, and the information quantities everything else is built from.

All information quantities are computed in natural log internally and reported
in bits. Conventions: 0*log(0) = 0 and 0*log(0/0) = 0; a strictly positive
probability against a zero reference yields +inf (never an exception).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LN2 = math.log(2.0)

# Validity tolerances for probability vectors: accept as-is within EXACT_TOL,
# renormalize when within RENORM_TOL, reject beyond that.
EXACT_TOL = 1e-12
RENORM_TOL = 1e-9


class AlphabetMismatchError(ValueError):
    """Raised when two objects that must share an alphabet do not."""


def _clean_probs(values, what: str) -> np.ndarray:
    """Validate a probability array (any shape), returning a normalized copy.

    Entries below -RENORM_TOL or total mass off by more than RENORM_TOL are
    rejected; small negatives are clamped to zero and near-unit mass is left
    untouched so that clean inputs round-trip bit-for-bit.
    """
    arr = np.array(values, dtype=float)
    if arr.size == 0:
        raise ValueError(f"{what} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    low = arr.min()
    if low < -RENORM_TOL:
        idx = np.unravel_index(int(arr.argmin()), arr.shape)
        raise ValueError(f"{what} has negative entry {float(low):.12g} at position {tuple(idx)}")
    if low < 0.0:
        arr[arr < 0.0] = 0.0
    total = arr.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise ValueError(f"{what} sums to {float(total):.12g}, not 1")
    # accept-as-is band grows with width: rounding every entry to 12
    # significant digits can shift the sum by up to ~5e-13 per entry, and
    # such vectors must survive a save/load cycle untouched
    if abs(total - 1.0) > max(EXACT_TOL, 5e-13 * arr.size):
        arr = arr / total
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Alphabet:
    """Ordered, duplicate-free collection of symbol labels."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(str(s) for s in self.symbols)
        if not syms:
            raise ValueError("alphabet must not be empty")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet has duplicate symbols")
        object.__setattr__(self, "symbols", syms)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise KeyError(f"symbol {symbol!r} not in alphabet") from None

    @staticmethod
    def of_size(n: int, prefix: str = "x") -> "Alphabet":
        if n < 1:
            raise ValueError("alphabet size must be >= 1")
        return Alphabet(tuple(f"{prefix}{i}" for i in range(n)))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability distribution over an Alphabet."""

    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self):
        arr = _clean_probs(self.probs, "distribution")
        if arr.ndim != 1 or arr.shape[0] != len(self.alphabet):
            raise ValueError(
                f"distribution has {arr.size} entries for alphabet of size {len(self.alphabet)}"
            )
        object.__setattr__(self, "probs", arr)

    @staticmethod
    def uniform(alphabet: Alphabet) -> "Distribution":
        n = len(alphabet)
        return Distribution(alphabet, np.full(n, 1.0 / n))

    @staticmethod
    def point_mass(alphabet: Alphabet, symbol: str) -> "Distribution":
        probs = np.zeros(len(alphabet))
        probs[alphabet.index(symbol)] = 1.0
        return Distribution(alphabet, probs)

    def prob(self, symbol: str) -> float:
        return float(self.probs[self.alphabet.index(symbol)])

    def support(self) -> tuple[str, ...]:
        return tuple(s for s, p in zip(self.alphabet, self.probs) if p > 0.0)


@dataclass(frozen=True, eq=False)
class Channel:
    """Discrete memoryless channel: a stochastic matrix indexed by
    (input symbol, output symbol)."""

    input: Alphabet
    output: Alphabet
    rows: np.ndarray

    def __post_init__(self):
        arr = np.array(self.rows, dtype=float)
        if arr.ndim != 2 or arr.shape != (len(self.input), len(self.output)):
            raise ValueError(
                f"channel matrix shape {arr.shape} does not match "
                f"{len(self.input)} inputs x {len(self.output)} outputs"
            )
        cleaned = np.empty_like(arr)
        for i, sym in enumerate(self.input):
            cleaned[i] = _clean_probs(arr[i], f"channel row {i} (input {sym!r})")
        cleaned.setflags(write=False)
        object.__setattr__(self, "rows", cleaned)

    def row(self, symbol: str) -> Distribution:
        return Distribution(self.output, self.rows[self.input.index(symbol)])

    def reachable_outputs(self) -> np.ndarray:
        """Boolean mask of outputs with positive probability under some input."""
        return self.rows.max(axis=0) > 0.0


@dataclass(frozen=True, eq=False)
class BroadcastPair:
    """Two channels fed by one input terminal; marginals fully determine the
    capacity region, so no joint conditional is kept."""

    first: Channel
    second: Channel

    def __post_init__(self):
        if self.first.input != self.second.input:
            raise AlphabetMismatchError("broadcast pair channels must share the input alphabet")


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint distribution over a product of alphabets, stored densely."""

    alphabets: tuple[Alphabet, ...]
    probs: np.ndarray

    def __post_init__(self):
        alphs = tuple(self.alphabets)
        arr = _clean_probs(self.probs, "joint distribution")
        expected = tuple(len(a) for a in alphs)
        if arr.shape != expected:
            raise ValueError(f"joint shape {arr.shape} does not match alphabets {expected}")
        object.__setattr__(self, "alphabets", alphs)
        object.__setattr__(self, "probs", arr)

    @property
    def ndim(self) -> int:
        return self.probs.ndim

    def marginal(self, axes: tuple[int, ...]) -> "JointDistribution":
        """Marginal joint over `axes`, kept in the given order."""
        axes = tuple(axes)
        _check_axes(self, axes)
        drop = tuple(i for i in range(self.ndim) if i not in axes)
        reduced = self.probs.sum(axis=drop) if drop else self.probs
        order = tuple(sorted(axes)).index  # reduced axes appear in sorted order
        reduced = np.transpose(reduced, tuple(order(a) for a in axes))
        return JointDistribution(tuple(self.alphabets[a] for a in axes), reduced)

    def marginal_distribution(self, axis: int) -> Distribution:
        return Distribution(self.alphabets[axis], self.marginal((axis,)).probs)


def _check_axes(joint: JointDistribution, axes: tuple[int, ...]):
    if len(set(axes)) != len(axes):
        raise ValueError(f"repeated axes in {axes}")
    for a in axes:
        if not 0 <= a < joint.ndim:
            raise ValueError(f"axis {a} out of range for {joint.ndim}-axis joint")


def entropy(dist: Distribution) -> float:
    """Shannon entropy in bits."""
    p = dist.probs
    mask = p > 0.0
    return float(-(p[mask] * np.log(p[mask])).sum() / LN2)


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """Relative entropy D(p || q) in bits; +inf when supp(p) escapes supp(q)."""
    if p.alphabet != q.alphabet:
        raise AlphabetMismatchError("KL divergence needs a common alphabet")
    return _kl_vectors(p.probs, q.probs)


def _kl_vectors(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0.0
    if np.any(q[mask] == 0.0):
        return math.inf
    return float((p[mask] * np.log(p[mask] / q[mask])).sum() / LN2)


def push_forward(p: Distribution, ch: Channel) -> Distribution:
    """Output distribution of `ch` when fed `p`."""
    if p.alphabet != ch.input:
        raise AlphabetMismatchError("input distribution does not match channel input alphabet")
    return Distribution(ch.output, p.probs @ ch.rows)


def mutual_information(p: Distribution, ch: Channel) -> float:
    """I(X;Y) in bits between `p` and the output of `ch`."""
    if p.alphabet != ch.input:
        raise AlphabetMismatchError("input distribution does not match channel input alphabet")
    q = p.probs @ ch.rows
    total = 0.0
    for i in range(len(p.alphabet)):
        if p.probs[i] > 0.0:
            total += p.probs[i] * _kl_vectors(ch.rows[i], q)
    return total


def expected_divergence(p: Distribution, ref: Distribution, ch: Channel) -> float:
    """Average divergence sum_x p(x) D(ch(.|x) || ref) in bits; may be +inf.

    Decomposes as I(X;Y) + D(p_Y || ref), which is what makes a reference
    output distribution a capacity certificate.
    """
    if p.alphabet != ch.input:
        raise AlphabetMismatchError("input distribution does not match channel input alphabet")
    if ref.alphabet != ch.output:
        raise AlphabetMismatchError("reference distribution does not match channel output alphabet")
    total = 0.0
    for i in range(len(p.alphabet)):
        if p.probs[i] > 0.0:
            d = _kl_vectors(ch.rows[i], ref.probs)
            if math.isinf(d):
                return math.inf
            total += p.probs[i] * d
    return total


def extend_with_channel(joint: JointDistribution, axis: int, ch: Channel) -> JointDistribution:
    """Append a channel-output axis: the new last axis is ch applied to `axis`."""
    _check_axes(joint, (axis,))
    if joint.alphabets[axis] != ch.input:
        raise AlphabetMismatchError(f"joint axis {axis} does not match channel input alphabet")
    moved = np.moveaxis(joint.probs, axis, -1)
    ext = moved[..., :, None] * ch.rows
    ext = np.moveaxis(ext, -2, axis)
    return JointDistribution(joint.alphabets + (ch.output,), ext)


def mutual_information_pair(
    joint: JointDistribution,
    axes_a: tuple[int, ...],
    axes_b: tuple[int, ...],
    axes_cond: tuple[int, ...] = (),
) -> float:
    """Mutual information I(A;B|C) in bits between axis groups of a joint.

    Slices of the conditioning product where either group is almost surely
    constant contribute exactly 0.0, so independence that holds by structure
    (not by cancellation) is reported without float noise.
    """
    axes_a, axes_b, axes_cond = tuple(axes_a), tuple(axes_b), tuple(axes_cond)
    all_axes = axes_cond + axes_a + axes_b
    _check_axes(joint, all_axes)
    if not axes_a or not axes_b:
        raise ValueError("both axis groups must be non-empty")

    reduced = joint.marginal(all_axes).probs
    nc = int(np.prod([len(joint.alphabets[a]) for a in axes_cond], dtype=int)) if axes_cond else 1
    na = int(np.prod([len(joint.alphabets[a]) for a in axes_a], dtype=int))
    nb = int(np.prod([len(joint.alphabets[a]) for a in axes_b], dtype=int))
    cube = reduced.reshape(nc, na, nb)

    total_nats = 0.0
    for ic in range(nc):
        m = cube[ic]
        nz = m > 0.0
        if not nz.any():
            continue
        # Structural independence: a slice where A or B is constant carries no
        # information, and saying so exactly avoids spurious 1e-16 residue.
        if nz.any(axis=1).sum() <= 1 or nz.any(axis=0).sum() <= 1:
            continue
        pa = m.sum(axis=1)
        pb = m.sum(axis=0)
        s = m.sum()
        ratio = (m[nz] * s) / (np.outer(pa, pb)[nz])
        total_nats += float((m[nz] * np.log(ratio)).sum())
    return total_nats / LN2
