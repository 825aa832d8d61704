"""Monte Carlo driver: per-point trial loops, metrics, CSV export, selftest.

Every trial gets its own generator seeded from (master_seed, point_index,
trial), so a sweep is bit-reproducible regardless of how trials are
scheduled.  Workers return per-trial records; the driver truncates the
ordered record stream at the stopping point (target logical-error count or
the trial cap, whichever comes first), which makes serial and parallel runs
byte-identical.
"""

from __future__ import annotations

import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .bp import BpConfig, TannerGraph, bp_decode
from .channel import (
    NoiseModel,
    PauliVector,
    init_llrs,
    measure_syndrome,
    sample_error,
    trial_rng,
)
from .codes import build_surface_code, five_qubit_code
from .gf2 import BitMatrix, nullspace_basis, symplectic_syndrome
from .lcosd import LcosdConfig, enumerate_candidates, lcosd_decode, reencode, select_mris
from .mwpm import mwpm_decode
from .pipeline import (
    PipelineConfig,
    bp_lcosd_decode,
    extend_parity,
    extract,
    is_logical_error,
    marginalize,
)

DECODERS = ("bp", "nms", "bp-lcosd", "mwpm")

CSV_HEADER = (
    "decoder,d,p,q,trials,logical_errors,logical_error_rate,"
    "syndrome_errors,syndrome_error_rate,avg_iterations,avg_list_size,seed"
)

_PATH_CODES = {"bp-stage1": 0, "bp-stage2": 1, "lcosd": 2, "mwpm": 3}
_BATCH_TRIALS = 512


@dataclass(frozen=True)
class SimConfig:
    """One sweep: decoder choice, noise grid, and stopping rules.

    Defaults are the reference operating point: d = 5, alpha = (5/8, 1),
    beta = 7.5, t_max = 32, delta = 8, l_max = 2**10, q = 1e-5.
    """

    d: int = 5
    decoder: str = "bp-lcosd"
    p_grid: tuple[float, ...] = field(default_factory=lambda: p_grid_from_range(1e-4, 1.0))
    q: float = 1e-5
    t_max: int = 32
    alpha1: float = 5.0 / 8.0
    alpha2: float = 1.0
    beta: float = 7.5
    delta: int = 8
    l_max: int = 1024
    master_seed: int = 0
    max_trials: int = 1_000_000
    target_errors: int = 100
    out: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {DECODERS}")
        if not self.p_grid:
            raise ValueError("p grid is empty")
        if self.max_trials < 1:
            raise ValueError("max_trials must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single decode trial."""

    logical_error: bool
    syndrome_error: bool
    iterations: int
    list_size: int
    path: str


@dataclass(frozen=True)
class AggregateStats:
    """Per-operating-point Monte Carlo aggregates."""

    p: float
    q: float
    trials: int
    logical_errors: int
    logical_error_rate: float
    syndrome_errors: int
    syndrome_error_rate: float
    avg_iterations: float
    avg_list_size: float
    wall_time: float


def p_grid_from_range(p_min: float, p_max: float, points_per_decade: int = 4) -> tuple[float, ...]:
    """Log-spaced grid from p_max down to p_min, points_per_decade per decade."""
    if not (0 < p_min <= p_max <= 1):
        raise ValueError("need 0 < p_min <= p_max <= 1")
    hi = math.log10(p_max)
    lo = math.log10(p_min)
    count = int(round((hi - lo) * points_per_decade)) + 1
    return tuple(10.0 ** (hi - i / points_per_decade) for i in range(count))


def wilson_interval(successes: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    """Wilson 95% (by default) score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


class _TrialContext:
    """Per-process decoder state reused across trials."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.code = build_surface_code(config.d)
        self.graph = TannerGraph.from_code(self.code)
        self.pipeline = PipelineConfig(
            bp_stage1=BpConfig(t_max=config.t_max, alpha=config.alpha1),
            bp_stage2=BpConfig(t_max=config.t_max, alpha=config.alpha2),
            beta=config.beta,
            lcosd=LcosdConfig(delta=config.delta, l_max=config.l_max),
        )
        alpha = 1.0 if config.decoder == "bp" else config.alpha1
        self.bp_config = BpConfig(t_max=config.t_max, alpha=alpha)

    def run_trial(self, point_index: int, p: float, trial: int) -> TrialRecord:
        cfg = self.config
        rng = trial_rng(cfg.master_seed, point_index, trial)
        noise = NoiseModel(p, cfg.q)
        e = sample_error(self.code, p, rng)
        sample = measure_syndrome(self.code, e, cfg.q, rng)
        if cfg.decoder == "mwpm":
            e_hat = mwpm_decode(self.code, sample.z)
            sigma_hat = sample.z
            iterations, list_size, path = 0, 0, "mwpm"
        elif cfg.decoder == "bp-lcosd":
            res = bp_lcosd_decode(self.code, sample.z, noise, self.pipeline, self.graph)
            e_hat, sigma_hat = res.e_hat, res.sigma_hat
            iterations = sum(res.iterations)
            list_size, path = res.list_size_used, res.path
        else:  # bp / nms
            out = bp_decode(self.graph, init_llrs(self.code, noise, sample.z), self.bp_config)
            e_hat, sigma_hat = out.hard_pauli, out.hard_syndrome
            iterations, list_size, path = out.iterations_used, 0, "bp-stage1"
        return TrialRecord(
            is_logical_error(self.code, e, e_hat),
            not np.array_equal(sigma_hat, sample.sigma_true),
            iterations,
            list_size,
            path,
        )


_CONTEXT_CACHE: dict[tuple, _TrialContext] = {}


def _context_for(config: SimConfig) -> _TrialContext:
    key = (
        config.d,
        config.decoder,
        config.q,
        config.t_max,
        config.alpha1,
        config.alpha2,
        config.beta,
        config.delta,
        config.l_max,
        config.master_seed,
    )
    ctx = _CONTEXT_CACHE.get(key)
    if ctx is None:
        ctx = _TrialContext(config)
        _CONTEXT_CACHE[key] = ctx
    return ctx


def _run_batch(config: SimConfig, point_index: int, p: float, start: int, count: int):
    ctx = _context_for(config)
    logical = np.zeros(count, dtype=bool)
    syndrome = np.zeros(count, dtype=bool)
    iters = np.zeros(count, dtype=np.int64)
    lsizes = np.zeros(count, dtype=np.int64)
    for i in range(count):
        rec = ctx.run_trial(point_index, p, start + i)
        logical[i] = rec.logical_error
        syndrome[i] = rec.syndrome_error
        iters[i] = rec.iterations
        lsizes[i] = rec.list_size
    return logical, syndrome, iters, lsizes


def run_point(config: SimConfig, p: float, point_index: int = 0) -> AggregateStats:
    """Monte Carlo estimate at one operating point.

    Stops at max_trials or once target_errors logical errors have occurred,
    whichever comes first.  Trial t draws from a generator seeded with
    (master_seed, point_index, t).
    """
    start_time = time.perf_counter()
    batch_starts = list(range(0, config.max_trials, _BATCH_TRIALS))
    batches: list[tuple] = []
    running_errors = 0

    def _collect(batch_results: Iterable[tuple]) -> bool:
        """Append results; True once the stopping condition is known met."""
        nonlocal running_errors
        for b in batch_results:
            batches.append(b)
            running_errors += int(b[0].sum())
            if running_errors >= config.target_errors:
                return True
        return False

    if config.threads == 1:
        for s in batch_starts:
            count = min(_BATCH_TRIALS, config.max_trials - s)
            if _collect([_run_batch(config, point_index, p, s, count)]):
                break
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            wave = 2 * config.threads
            idx = 0
            done = False
            while idx < len(batch_starts) and not done:
                futures = []
                for s in batch_starts[idx : idx + wave]:
                    count = min(_BATCH_TRIALS, config.max_trials - s)
                    futures.append(pool.submit(_run_batch, config, point_index, p, s, count))
                idx += wave
                done = _collect(f.result() for f in futures)

    logical = np.concatenate([b[0] for b in batches])
    syndrome = np.concatenate([b[1] for b in batches])
    iters = np.concatenate([b[2] for b in batches])
    lsizes = np.concatenate([b[3] for b in batches])
    # Truncate the ordered trial stream at the exact stopping trial.
    cum = np.cumsum(logical)
    hits = np.nonzero(cum >= config.target_errors)[0]
    n_trials = int(hits[0]) + 1 if hits.size else min(logical.size, config.max_trials)
    n_trials = min(n_trials, config.max_trials)

    logical = logical[:n_trials]
    syndrome = syndrome[:n_trials]
    le = int(logical.sum())
    se = int(syndrome.sum())
    return AggregateStats(
        p=p,
        q=config.q,
        trials=n_trials,
        logical_errors=le,
        logical_error_rate=le / n_trials,
        syndrome_errors=se,
        syndrome_error_rate=se / n_trials,
        avg_iterations=float(iters[:n_trials].sum()) / n_trials,
        avg_list_size=float(lsizes[:n_trials].sum()) / n_trials,
        wall_time=time.perf_counter() - start_time,
    )


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def csv_rows(config: SimConfig, stats: list[AggregateStats]) -> list[str]:
    rows = [CSV_HEADER]
    for st in stats:
        rows.append(
            ",".join(
                [
                    config.decoder,
                    str(config.d),
                    _fmt(st.p),
                    _fmt(st.q),
                    str(st.trials),
                    str(st.logical_errors),
                    _fmt(st.logical_error_rate),
                    str(st.syndrome_errors),
                    _fmt(st.syndrome_error_rate),
                    _fmt(st.avg_iterations),
                    _fmt(st.avg_list_size),
                    str(config.master_seed),
                ]
            )
        )
    return rows


def run_sweep(config: SimConfig) -> list[AggregateStats]:
    """Map run_point over the p grid; write CSV if configured.

    Progress goes to stderr only, so stdout stays machine-readable.
    """
    stats = []
    for i, p in enumerate(config.p_grid):
        st = run_point(config, p, point_index=i)
        stats.append(st)
        print(
            f"[{i + 1}/{len(config.p_grid)}] {config.decoder} d={config.d} "
            f"p={st.p:.6g}: {st.logical_errors}/{st.trials} logical "
            f"({st.logical_error_rate:.3e}), {st.wall_time:.1f}s",
            file=sys.stderr,
            flush=True,
        )
    if config.out:
        with open(config.out, "w") as fh:
            fh.write("\n".join(csv_rows(config, stats)) + "\n")
    return stats


# ---------------------------------------------------------------------------
# Built-in verification of the frozen reference vectors.

_FIVE_QUBIT_H_DENSE = [
    [1, 0, 0, 1, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 1, 1, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 0, 0, 1],
]

_HAMMING_H = [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
]
_HAMMING_LLRS = [-2.0, 3.0, 4.0, -6.0, 7.0, 10.0, 14.0]

_MARGINAL_TUPLES = [
    # (X, Y, Z) LLR tuple per qubit
    [2.0, 1.0, 2.0],
    [0.0, -3.0, -3.0],
    [4.0, 4.0, 4.0],
    [0.0, 0.0, 0.0],
    [4.0, 1.0, 1.0],
]
_MARGINAL_X = [0.35, 0.0, 1.44, 0.0, 0.55]
_MARGINAL_Z = [0.35, -1.30, 1.44, 0.0, 0.14]


@dataclass(frozen=True)
class SelftestCheck:
    name: str
    passed: bool
    detail: str = ""


def selftest() -> list[SelftestCheck]:
    """Run the frozen reference vectors end to end; all should pass."""
    checks: list[SelftestCheck] = []

    def add(name, passed, detail=""):
        checks.append(SelftestCheck(name, bool(passed), detail))

    code = five_qubit_code()
    ok = np.array_equal(code.H.to_dense(), np.array(_FIVE_QUBIT_H_DENSE, dtype=np.uint8))
    add("five-qubit parity-check matrix", ok)

    surf = build_surface_code(5)
    add(
        "surface code d=5 dimensions",
        surf.n == 41 and surf.num_checks == 40,
        f"n={surf.n} checks={surf.num_checks}",
    )

    s = symplectic_syndrome(code.H, PauliVector.from_string("IYIII"))
    add("syndrome of IYIII", np.array_equal(s, [1, 1, 0, 1]), f"got {s.tolist()}")

    z1 = np.array([0, 1, 0, 0], dtype=np.uint8)
    init = init_llrs(code, NoiseModel(0.75, 1e-5), z1)
    llr_ok = np.allclose(init.channel_tuples, 0.0)
    llr_ok &= np.allclose(np.abs(init.syndrome_llrs), math.log((1 - 1e-5) / 1e-5))
    llr_ok &= bool(np.all((init.syndrome_llrs > 0) == (z1 == 0)))
    add("channel/syndrome LLR initialization", llr_ok)

    H = BitMatrix.from_dense(_HAMMING_H)
    llrs = np.array(_HAMMING_LLRS)
    ws = select_mris(H, np.abs(llrs), delta=1)
    add("Hamming MRIS", ws.mris.tolist() == [2, 3, 4, 5, 6], f"got {ws.mris.tolist()}")
    con_ok = ws.delta_eff == 1 and np.array_equal(
        np.nonzero(ws.constraint_rows[0])[0], [3, 4, 5, 6]
    )
    add("Hamming local constraint", con_ok)

    patterns, costs = enumerate_candidates(ws, llrs, l_max=3)
    expect = [[0, 0, 0, 0, 0], [0, 1, 1, 0, 0], [1, 0, 0, 0, 0]]
    add(
        "Hamming candidate list",
        patterns.tolist() == expect and costs.tolist() == [6.0, 7.0, 10.0],
        f"got {patterns.tolist()} costs={costs.tolist()}",
    )
    add(
        "Hamming re-encoded codewords",
        reencode(ws, expect[1]).tolist() == [1, 0, 0, 1, 1, 0, 0]
        and reencode(ws, expect[2]).tolist() == [1, 1, 1, 0, 0, 0, 0],
    )
    res = lcosd_decode(H, llrs, LcosdConfig(delta=1, l_max=3))
    add(
        "Hamming LCOSD winner",
        res.codeword.tolist() == [1, 0, 0, 1, 1, 0, 0] and abs(res.quality - (-1.0)) < 1e-12,
        f"got {res.codeword.tolist()} quality={res.quality}",
    )

    lam_z, lam_x = marginalize(np.array(_MARGINAL_TUPLES))
    ln10 = math.log(10.0)
    tol = 0.01 * ln10
    marg_ok = np.allclose(lam_x, np.array(_MARGINAL_X) * ln10, atol=tol) and np.allclose(
        lam_z, np.array(_MARGINAL_Z) * ln10, atol=tol
    )
    add("marginal LLRs", marg_ok, f"lambda_x={lam_x.round(4).tolist()}")

    c = np.array([0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1], dtype=np.uint8)
    e, sigma = extract(c, 5)
    add(
        "virtual codeword extraction",
        e.to_string() == "IYIII" and sigma.tolist() == [1, 1, 0, 1],
        f"got {e.to_string()} sigma={sigma.tolist()}",
    )
    add(
        "extracted syndrome self-consistency",
        np.array_equal(symplectic_syndrome(code.H, e), sigma),
    )

    rng = np.random.default_rng(20240305)
    ok = True
    for hcode in (code, surf):
        Hp = extend_parity(hcode.H)
        basis = np.array(nullspace_basis(Hp), dtype=np.uint8)
        coeffs = rng.integers(0, 2, size=(500, basis.shape[0]), dtype=np.uint8)
        vectors = (coeffs.astype(np.int64) @ basis.astype(np.int64)) & 1
        for v in vectors.astype(np.uint8):
            ev, sv = extract(v, hcode.n)
            if not np.array_equal(symplectic_syndrome(hcode.H, ev), sv):
                ok = False
                break
    add("null-space extraction consistency (1000 samples)", ok)
    return checks
