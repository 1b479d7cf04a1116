"""
Seedable Monte Carlo simulator of the wireless-powered status-update link.

Two modes produce the same per-cycle records:

``physical``
    Slot by slot: draw the power-transfer fading gain each slot, accumulate
    harvested energy until the capacitor is full, then transmit once with an
    MRC combining gain over N receive antennas and decode iff
    ``log2(1 + snr) >= R``. Residual energy is discarded after a transmission.
``analytic``
    Draw each charging period directly as ``X = 1 + Poisson(g)`` and each
    decode outcome as Bernoulli(1 - p).

A renewal cycle runs from one successful decode to the next. Within it the
AoI climbs 1, 2, ..., Y, so the area under the tooth is ``Q = Y(Y+1)/2``.

Random streams come from numpy's PCG64 seeded through ``SeedSequence``;
replication ``r`` of master seed ``s`` uses ``SeedSequence(s, spawn_key=(r,))``.
A direct run with seed ``s`` is replication 0. Fading gains are unit-mean
exponentials drawn by inverse CDF, ``-log1p(-U)``.
"""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Tuple

import numpy as np

from .model import SystemParams, derive
from .specfun import DomainError

__all__ = [
    "ChannelDraw",
    "EnergyState",
    "CycleRecord",
    "SimStats",
    "SimulationError",
    "RunConfig",
    "run_physical",
    "run_physical_slots",
    "run_analytic_sampling",
    "run",
    "replicate_and_merge",
    "merge_stats",
    "block_maxima",
    "sawtooth_trajectory",
    "trajectory_csv",
    "peaks_csv",
    "stream",
]

CHUNK = 1 << 15
MAX_SLOTS = 2 ** 62


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ChannelDraw:
    """Fading power gains of one slot: power-transfer link and the N receive branches."""

    energy_gain_u2: float
    comm_gains_h2: Tuple[float, ...]


@dataclass
class EnergyState:
    """Stored energy, always clamped to ``[0, S]``."""

    capacity: float
    stored_energy_E: float = 0.0

    def harvest(self, amount):
        """Add one slot of harvest; return True when the capacitor is full."""
        self.stored_energy_E = min(self.stored_energy_E + amount, self.capacity)
        return self.stored_energy_E >= self.capacity

    def discharge(self):
        self.stored_energy_E = 0.0


@dataclass(frozen=True)
class CycleRecord:
    charge_slots_X: Tuple[int, ...]
    attempts_L: int
    interarrival_Y: int
    area_Q: int


def stream(seed, replication=0):
    """Independent generator for ``(seed, replication)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.PCG64(ss))


def _power_sums(y):
    """Exact ``(sum Y, sum Y^2, sum Y^3, sum Y^4)`` as Python ints."""
    values, counts = np.unique(y, return_counts=True)
    sums = [0, 0, 0, 0]
    for v, c in zip(values.tolist(), counts.tolist()):
        vk = 1
        for k in range(4):
            vk *= v
            sums[k] += vk * c
    return tuple(sums)


@dataclass
class SimStats:
    """
    Results of a simulation run, restricted to complete renewal cycles.

    Sums are exact integers, so merging replications is exact and every
    derived statistic is deterministic.
    """

    cycles_K: int
    total_slots_M: int
    attempts: int
    y_power_sums: Tuple[int, int, int, int]
    peak_samples: np.ndarray
    attempts_per_cycle: np.ndarray
    charge_slots: np.ndarray
    mode: str = "analytic"
    seed: Optional[int] = None
    replications: Tuple[int, ...] = (0,)
    block_B: int = 1

    @classmethod
    def from_arrays(cls, x, attempts_per_cycle, y, **meta):
        y = np.asarray(y, dtype=np.int64)
        sums = _power_sums(y)
        if sums[0] >= MAX_SLOTS:
            raise SimulationError(f"total slot count {sums[0]} exceeds the 2**62 guard")
        return cls(cycles_K=int(y.size), total_slots_M=sums[0], attempts=int(np.sum(attempts_per_cycle)),
                   y_power_sums=sums, peak_samples=y,
                   attempts_per_cycle=np.asarray(attempts_per_cycle, dtype=np.int64),
                   charge_slots=np.asarray(x, dtype=np.int64), **meta)

    @property
    def success_rate(self):
        """Fraction of decode attempts that succeeded."""
        return self.cycles_K / self.attempts

    @property
    def area_sum(self):
        """``sum Q = (sum Y^2 + sum Y) / 2``."""
        s1, s2, _, _ = self.y_power_sums
        return (s2 + s1) // 2

    def _mean_fraction(self):
        return Fraction(self.area_sum, self.total_slots_M)

    @property
    def empirical_mean_aoi(self):
        """Time-average AoI, ``sum Q / sum Y``."""
        return float(self._mean_fraction())

    @property
    def empirical_var_cycle(self):
        """``(sum Q^2 / K) / (sum Y / K) - mean^2``, the estimator matching :func:`aoi_variance`."""
        s1, s2, s3, s4 = self.y_power_sums
        sum_q2 = Fraction(s4 + 2 * s3 + s2, 4)
        return float(sum_q2 / s1 - self._mean_fraction() ** 2)

    @property
    def empirical_var_sawtooth(self):
        """Per-slot variance of the AoI sawtooth (diagnostic; validation uses the cycle-weighted estimator)."""
        s1, s2, s3, _ = self.y_power_sums
        # sum over slots of Delta^2 = sum Y(Y+1)(2Y+1)/6
        sum_d2 = Fraction(2 * s3 + 3 * s2 + s1, 6)
        return float(sum_d2 / s1 - self._mean_fraction() ** 2)

    @property
    def block_maxima(self):
        return block_maxima(self.peak_samples, self.block_B)

    def records(self) -> Iterator[CycleRecord]:
        """Per-cycle records in simulation order."""
        start = 0
        for L, y in zip(self.attempts_per_cycle.tolist(), self.peak_samples.tolist()):
            xs = tuple(self.charge_slots[start:start + L].tolist())
            start += L
            yield CycleRecord(charge_slots_X=xs, attempts_L=L, interarrival_Y=y,
                              area_Q=y * (y + 1) // 2)


class _CycleAssembler:
    """Cut an attempt stream (X per attempt, success flag) into complete cycles."""

    def __init__(self, cycles):
        self.cycles = cycles
        self.x_parts = []
        self.ok_parts = []
        self.found = 0

    def feed(self, x, ok):
        need = self.cycles - self.found
        hits = np.flatnonzero(ok)
        if hits.size >= need:
            cut = hits[need - 1] + 1
            x, ok = x[:cut], ok[:cut]
            self.found = self.cycles
        else:
            self.found += hits.size
        self.x_parts.append(x)
        self.ok_parts.append(ok)
        return self.found >= self.cycles

    def finish(self):
        x = np.concatenate(self.x_parts).astype(np.int64)
        ok = np.concatenate(self.ok_parts)
        ends = np.flatnonzero(ok)
        csum = np.cumsum(x)
        y = np.diff(np.concatenate(([0], csum[ends])))
        attempts = np.diff(np.concatenate(([-1], ends)))
        return x, attempts, y


def _check_cycles(cycles):
    if int(cycles) != cycles or cycles < 1:
        raise DomainError(f"cycles must be a positive integer, got {cycles!r}")
    return int(cycles)


def _exp_unit(rng, shape):
    return -np.log1p(-rng.random(shape))


def run_analytic_sampling(g, p, cycles, seed, replication=0, block_B=1):
    """
    Simulate with ``X = 1 + Poisson(g)`` and Bernoulli(1 - p) decodes.

    Returns
    -------
    SimStats
    """
    cycles = _check_cycles(cycles)
    if not g > 0:
        raise DomainError(f"g must be > 0, got {g!r}")
    if not 0.0 <= p < 1.0:
        raise DomainError(f"p must lie in [0, 1), got {p!r}")
    rng = stream(seed, replication)
    asm = _CycleAssembler(cycles)
    done = False
    while not done:
        x = 1 + rng.poisson(g, CHUNK)
        ok = rng.random(CHUNK) >= p
        done = asm.feed(x, ok)
    x, attempts, y = asm.finish()
    return SimStats.from_arrays(x, attempts, y, mode="analytic", seed=seed,
                                replications=(replication,), block_B=block_B)


def _charge_slots(rng, n, capacity, mean_harvest, width):
    """
    Slots needed to fill the capacitor, for `n` independent charges.

    Each row draws per-slot harvests ``mean_harvest * |u|^2`` and finds the
    first slot where the running energy reaches `capacity`; rows that have
    not reached it get further columns.
    """
    x = np.zeros(n, dtype=np.int64)
    stored = np.zeros(n)
    pending = np.arange(n)
    offset = 0
    while pending.size:
        harvest = mean_harvest * _exp_unit(rng, (pending.size, width))
        level = stored[pending, None] + np.cumsum(harvest, axis=1)
        full = level >= capacity
        hit = full.any(axis=1)
        first = np.argmax(full, axis=1)
        x[pending[hit]] = offset + first[hit] + 1
        stored[pending[~hit]] = level[~hit, -1]
        pending = pending[~hit]
        offset += width
    return x


def run_physical(params: SystemParams, cycles, seed, replication=0, block_B=1,
                 harvest_pathloss=True):
    """
    Simulate the physical link slot by slot.

    Parameters
    ----------
    params : SystemParams
    cycles : int
        Number of complete renewal cycles to record.
    seed : int
    harvest_pathloss : bool
        Divide the per-slot harvest by ``w d_e^alpha``. Only a negative
        control turns this off.
    """
    cycles = _check_cycles(cycles)
    derived = derive(params)  # rejects p == 1
    capacity = params.capacitor_size_S
    mean_harvest = params.conversion_eta * params.tx_power_Pt
    if harvest_pathloss:
        mean_harvest /= params.energy_pathloss
    g_eff = capacity / mean_harvest
    width = int(min(4096, math.ceil(g_eff + 6.0 * math.sqrt(g_eff) + 8.0)))
    snr_per_gain = params.effective_snr_scale / params.comm_pathloss
    n_ant = params.antennas_N

    rng = stream(seed, replication)
    asm = _CycleAssembler(cycles)
    done = False
    while not done:
        gains = _exp_unit(rng, (CHUNK, n_ant)).sum(axis=1)
        snr = snr_per_gain * gains
        ok = np.log2(1.0 + snr) >= params.rate_R
        x = _charge_slots(rng, CHUNK, capacity, mean_harvest, width)
        done = asm.feed(x, ok)
        if not done and asm.found == 0 and sum(len(o) for o in asm.ok_parts) > 1e9:
            raise SimulationError(f"no successful decode in 1e9 attempts (p={derived.p:.6g})")
    x, attempts, y = asm.finish()
    return SimStats.from_arrays(x, attempts, y, mode="physical", seed=seed,
                                replications=(replication,), block_B=block_B)


def run_physical_slots(params: SystemParams, cycles, seed, replication=0):
    """
    Literal slot-by-slot version of :func:`run_physical`, one Python step per slot.

    Orders of magnitude slower; kept as an executable statement of the
    slot semantics and as a cross-check of the vectorised path. Draws are
    taken in a different order, so results agree in distribution only.
    """
    cycles = _check_cycles(cycles)
    derive(params)
    rng = stream(seed, replication)
    capacity = params.capacitor_size_S
    mean_harvest = params.conversion_eta * params.tx_power_Pt / params.energy_pathloss
    snr_per_gain = params.effective_snr_scale / params.comm_pathloss
    energy = EnergyState(capacity)
    xs, attempts, ys = [], [], []
    slots_in_charge = slots_in_cycle = tries = 0
    while len(ys) < cycles:
        draw = ChannelDraw(float(_exp_unit(rng, ())),
                           tuple(_exp_unit(rng, params.antennas_N).tolist()))
        slots_in_charge += 1
        slots_in_cycle += 1
        if not energy.harvest(mean_harvest * draw.energy_gain_u2):
            continue
        # full: transmit this slot with all stored energy, then start over
        energy.discharge()
        xs.append(slots_in_charge)
        slots_in_charge = 0
        tries += 1
        snr = snr_per_gain * sum(draw.comm_gains_h2)
        if math.log2(1.0 + snr) >= params.rate_R:
            attempts.append(tries)
            ys.append(slots_in_cycle)
            tries = slots_in_cycle = 0
    return SimStats.from_arrays(xs, attempts, ys, mode="physical", seed=seed,
                                replications=(replication,))


@dataclass(frozen=True)
class RunConfig:
    """What to simulate: physical params, or a direct ``(g, p)`` pair."""

    mode: str = "analytic"
    params: Optional[SystemParams] = None
    g: Optional[float] = None
    p: Optional[float] = None
    block_B: int = 1

    def resolved_gp(self):
        if self.params is not None:
            d = derive(self.params)
            return d.g, d.p
        return self.g, self.p


def run(config: RunConfig, cycles, seed, replication=0):
    """Dispatch one replication of `config`."""
    if config.mode == "physical":
        if config.params is None:
            raise DomainError("physical mode needs SystemParams, not a (g, p) override")
        return run_physical(config.params, cycles, seed, replication, config.block_B)
    if config.mode == "analytic":
        g, p = config.resolved_gp()
        return run_analytic_sampling(g, p, cycles, seed, replication, config.block_B)
    raise DomainError(f"unknown mode {config.mode!r}")


def merge_stats(parts):
    """
    Combine replications.

    Sums and counts add exactly; sample arrays are concatenated in
    replication-index order, so the result does not depend on the order
    of `parts`.
    """
    parts = sorted(parts, key=lambda s: s.replications)
    if not parts:
        raise DomainError("nothing to merge")
    sums = tuple(sum(s.y_power_sums[k] for s in parts) for k in range(4))
    first = parts[0]
    return SimStats(
        cycles_K=sum(s.cycles_K for s in parts),
        total_slots_M=sums[0],
        attempts=sum(s.attempts for s in parts),
        y_power_sums=sums,
        peak_samples=np.concatenate([s.peak_samples for s in parts]),
        attempts_per_cycle=np.concatenate([s.attempts_per_cycle for s in parts]),
        charge_slots=np.concatenate([s.charge_slots for s in parts]),
        mode=first.mode, seed=first.seed,
        replications=tuple(r for s in parts for r in s.replications),
        block_B=first.block_B,
    )


def _split(total, parts):
    base, extra = divmod(total, parts)
    return [base + (1 if r < extra else 0) for r in range(parts)]


def _run_task(args):
    config, cycles, seed, r = args
    return run(config, cycles, seed, r)


def replicate_and_merge(config: RunConfig, cycles, replications, master_seed, workers=None):
    """
    Run `replications` independent replications totalling `cycles` cycles and merge.

    Replication ``r`` gets ``cycles // replications`` cycles (the first
    ``cycles % replications`` get one more). With ``workers > 1`` the
    replications run in a process pool; the merged result is identical
    either way.
    """
    cycles = _check_cycles(cycles)
    replications = int(replications)
    if replications < 1 or replications > cycles:
        raise DomainError(f"replications must lie in 1..cycles, got {replications!r}")
    tasks = [(config, c, master_seed, r) for r, c in enumerate(_split(cycles, replications))]
    if workers and workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_task, tasks))
    else:
        parts = [_run_task(t) for t in tasks]
    return merge_stats(parts)


def block_maxima(records, block_B):
    """
    Maximum interarrival time over consecutive blocks of `block_B` cycles.

    Accepts a sequence of :class:`CycleRecord` or of raw ``Y`` values. A
    trailing partial block is dropped.

    >>> block_maxima([3, 7, 2, 9], 2).tolist()
    [7, 9]
    """
    if int(block_B) != block_B or block_B < 1:
        raise DomainError(f"block size must be a positive integer, got {block_B!r}")
    block_B = int(block_B)
    if isinstance(records, np.ndarray):
        y = records
    else:
        y = np.asarray([r.interarrival_Y if isinstance(r, CycleRecord) else r for r in records])
    if y.size < block_B:
        raise DomainError(f"need at least one full block of {block_B}, got {y.size} cycles")
    n = (y.size // block_B) * block_B
    return y[:n].reshape(-1, block_B).max(axis=1)


def sawtooth_trajectory(stats: SimStats, limit_slots):
    """
    AoI sawtooth of the first complete cycles, up to `limit_slots` slots.

    Returns
    -------
    slots, aoi : ndarray
        Slot index ``m`` (starting at 1) and ``Delta(m)``; within each cycle
        the AoI runs 1, 2, ..., Y. Only whole cycles are included.
    """
    limit_slots = int(limit_slots)
    y = stats.peak_samples
    ends = np.cumsum(y)
    k = int(np.searchsorted(ends, limit_slots, side="right"))
    y = y[:k]
    total = int(ends[k - 1]) if k else 0
    starts = np.repeat(np.cumsum(y) - y, y)
    slots = np.arange(1, total + 1, dtype=np.int64)
    aoi = slots - starts
    return slots, aoi


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trajectory_csv(stats, limit_slots):
    """CSV text with header ``slot,aoi``; LF line endings."""
    slots, aoi = sawtooth_trajectory(stats, limit_slots)
    return _csv_text(("slot", "aoi"), zip(slots.tolist(), aoi.tolist()))


def peaks_csv(stats):
    """CSV text with header ``cycle,Y`` (cycle counted from 1); LF line endings."""
    y = stats.peak_samples.tolist()
    return _csv_text(("cycle", "Y"), zip(range(1, len(y) + 1), y))
