"""Process-variation sampling and Monte-Carlo gate campaigns.

Every trial gets its own counter-based random stream keyed by
(seed, pattern index, trial index), so campaigns are bit-reproducible
independent of execution order and worker count. Device mismatch and
process variation are collapsed into independent per-cell sampling; the
varied quantities are the oxide thickness, the free-layer thickness and
the TMR ratio (plus an optional RA knob for sensitivity studies).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .array import ArraySpec, CellState, MramArray, Topology
from .device import DeviceParams, MagState
from .gates import GateOp, boolean_output, execute_gate, pattern_bits, pattern_label
from .report import HistogramTable, Table

TRUNCATION_SIGMA = 4.0
_MAX_INDEX = 2 ** 32


@dataclass(frozen=True)
class VariationSpec:
    """Relative standard deviations of the varied parameters, plus the seed.

    Deviates are Gaussian, truncated at +/- 4 sigma, applied as
    multiplicative (1 + sigma z) factors. ``sigma_ra`` defaults to off;
    resistance then varies only through TMR on the anti-parallel state.
    """

    sigma_t_ox: float = 0.03
    sigma_t_f: float = 0.03
    sigma_tmr: float = 0.03
    sigma_ra: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("sigma_t_ox", "sigma_t_f", "sigma_tmr", "sigma_ra"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
            if getattr(self, name) * TRUNCATION_SIGMA >= 1.0:
                raise ValueError(f"{name} too large: truncated deviates would "
                                 "allow nonpositive parameters")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


def trial_rng(seed: int, pattern_index: int, trial_index: int) -> np.random.Generator:
    """Independent Philox stream for one (pattern, trial) pair."""
    if not (0 <= pattern_index < _MAX_INDEX and 0 <= trial_index < _MAX_INDEX):
        raise ValueError("pattern and trial indices must fit in 32 bits")
    key = np.array([seed, (pattern_index << 32) | trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def truncated_normal(rng: np.random.Generator) -> float:
    """Standard normal deviate, redrawn until within +/- 4 sigma."""
    z = rng.standard_normal()
    while abs(z) > TRUNCATION_SIGMA:
        z = rng.standard_normal()
    return float(z)


def sample_cell(nominal: DeviceParams, spec: VariationSpec,
                rng: np.random.Generator) -> DeviceParams:
    """Draw one cell's parameters; deterministic given the stream state.

    Draw order is fixed (t_ox, t_f, TMR0, then RA when enabled) so streams
    stay comparable across configurations.
    """
    changes = {
        "t_ox": nominal.t_ox * (1.0 + spec.sigma_t_ox * truncated_normal(rng)),
        "t_f": nominal.t_f * (1.0 + spec.sigma_t_f * truncated_normal(rng)),
        "TMR0": nominal.TMR0 * (1.0 + spec.sigma_tmr * truncated_normal(rng)),
    }
    if spec.sigma_ra > 0.0:
        changes["RA"] = nominal.RA * (1.0 + spec.sigma_ra * truncated_normal(rng))
    return nominal.replace(**changes)


@dataclass
class PatternStats:
    """Per-input-pattern trial outcomes and sampled analog observables."""

    bits: tuple
    expected: int
    trials: int
    successes: int
    success_flags: np.ndarray  # per-trial verdicts, length ``trials``
    observables: dict          # name -> np.ndarray of length ``trials``

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def label(self) -> str:
        return pattern_label(self.bits)


@dataclass
class MCResult:
    """Aggregated Monte-Carlo campaign for one gate operation."""

    topology: Topology
    op: GateOp
    variation: VariationSpec
    trials: int
    patterns: tuple  # of PatternStats, in pattern-index order

    @property
    def seed(self) -> int:
        return self.variation.seed

    @property
    def primary_observable(self) -> str:
        # Output channel current in the read-current scheme; the effective
        # threshold in the voltage-gated one (its failures are threshold-side).
        return "i_out" if self.topology is Topology.TWO_T_ONE_R else "i_crit"

    def pattern(self, bits) -> PatternStats:
        for p in self.patterns:
            if p.bits == tuple(bits):
                return p
        raise KeyError(f"no pattern {bits!r}")


def _template_array(array_spec: ArraySpec) -> MramArray:
    # Non-participating cells never enter the solved network, so one
    # nominal template serves every trial; only the gate's cells are replaced.
    return MramArray.uniform(array_spec)


def _run_trial(template: MramArray, array_spec: ArraySpec, op: GateOp,
               vspec: VariationSpec, pattern_index: int, trial_index: int):
    rng = trial_rng(vspec.seed, pattern_index, trial_index)
    bits = pattern_bits(pattern_index, op.n_inputs)
    arr = template
    for row, bit in zip(op.input_rows, bits):
        dev = sample_cell(array_spec.nominal, vspec, rng)
        arr = arr.with_cell(row, op.col, CellState(MagState.from_bit(bit), dev))
    out_dev = sample_cell(array_spec.nominal, vspec, rng)
    arr = arr.with_cell(op.output_row, op.col, CellState(op.out_init, out_dev))

    trace = execute_gate(arr, op)
    actual = trace.post.cell(op.output_row, op.col).mag.bit
    success = actual == boolean_output(op.kind, bits)
    if array_spec.topology is Topology.TWO_T_ONE_R:
        obs = (trace.solution.current("out"), trace.i_crit)
    else:
        obs = (trace.v_bl, trace.i_crit)
    return success, obs


def _run_chunk(args):
    array_spec, op, vspec, pattern_index, start, stop = args
    template = _template_array(array_spec)
    flags = []
    columns = [[], []]
    for trial in range(start, stop):
        success, obs = _run_trial(template, array_spec, op, vspec,
                                  pattern_index, trial)
        flags.append(success)
        columns[0].append(obs[0])
        columns[1].append(obs[1])
    return pattern_index, start, np.asarray(flags, dtype=bool), np.asarray(columns)


def run_mc(array_spec: ArraySpec, op: GateOp, n: int, spec: VariationSpec,
           n_workers: int = 1) -> MCResult:
    """Monte-Carlo campaign: n independent trials per input pattern.

    Each trial resamples every participating cell, executes the gate, and
    counts success iff the output matches the gate's boolean value. The
    result is bit-identical for any ``n_workers``.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    names = ("i_out", "i_crit") if array_spec.topology is Topology.TWO_T_ONE_R \
        else ("v_bl", "i_crit")

    n_patterns = 2 ** op.n_inputs
    chunk = max(1, -(-n // max(1, n_workers)))  # ceil division
    tasks = [(array_spec, op, spec, p, start, min(start + chunk, n))
             for p in range(n_patterns) for start in range(0, n, chunk)]

    if n_workers <= 1:
        parts = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(_run_chunk, tasks))
    parts.sort(key=lambda item: (item[0], item[1]))

    patterns = []
    for p in range(n_patterns):
        own = [part for part in parts if part[0] == p]
        flags = np.concatenate([part[2] for part in own])
        data = np.concatenate([part[3] for part in own], axis=1)
        bits = pattern_bits(p, op.n_inputs)
        patterns.append(PatternStats(
            bits=bits, expected=boolean_output(op.kind, bits), trials=n,
            successes=int(flags.sum()), success_flags=flags,
            observables={name: data[i].copy() for i, name in enumerate(names)}))
    return MCResult(topology=array_spec.topology, op=op, variation=spec,
                    trials=n, patterns=tuple(patterns))


# --- histograms -----------------------------------------------------------------

@dataclass(frozen=True)
class HistogramReport:
    """Fixed-width histogram of one observable, per input pattern.

    ``overlap_fraction`` is the fraction of all-zero-pattern samples that
    exceed the minimum sample of the single-one patterns: the tell-tale of
    unintentional switching in the read-current scheme.
    """

    observable: str
    bin_edges: np.ndarray
    counts: dict  # pattern label -> np.ndarray of per-bin counts
    overlap_fraction: float


def current_histogram(result: MCResult, bins: int = 32,
                      observable: str | None = None) -> HistogramReport:
    """Histogram the campaign's analog observable over fixed-width bins."""
    if bins < 1:
        raise ValueError("need at least one bin")
    observable = observable or result.primary_observable
    series = {p.label: np.asarray(p.observables[observable])
              for p in result.patterns}
    if not series or any(len(v) == 0 for v in series.values()):
        raise ValueError("result has no sampled observables")

    pooled = np.concatenate(list(series.values()))
    lo, hi = float(pooled.min()), float(pooled.max())
    if hi <= lo:  # degenerate (e.g. zero variation): one occupied bin
        pad = max(abs(lo) * 1e-9, 1e-30)
        lo, hi = lo - pad, lo + pad
    edges = np.linspace(lo, hi, bins + 1)
    counts = {label: np.histogram(values, bins=edges)[0]
              for label, values in series.items()}

    zero = next((p for p in result.patterns if not any(p.bits)), None)
    singles = [p for p in result.patterns if sum(p.bits) == 1]
    if zero is not None and singles:
        reference = min(float(np.min(p.observables[observable])) for p in singles)
        values = np.asarray(zero.observables[observable])
        overlap = float(np.mean(values > reference))
    else:
        overlap = 0.0
    return HistogramReport(observable=observable, bin_edges=edges,
                           counts=counts, overlap_fraction=overlap)


# --- CSV-shaped exports ------------------------------------------------------------

def mc_tables(result: MCResult, bins: int = 32):
    """Serializable views of a campaign: summary, per-trial rows, histogram.

    The summary has one row per input pattern (inputs rendered
    most-significant first, expected output, trials, successes, rate); the
    trials table has one row per (pattern, trial) with the sampled
    observables and the verdict. Returns (summary, trials, histogram
    table, histogram report).
    """
    n_inputs = result.op.n_inputs
    in_cols = [f"IN{j}" for j in reversed(range(n_inputs))]

    summary_rows = [tuple(reversed(p.bits)) +
                    (p.expected, p.trials, p.successes, p.success_rate)
                    for p in result.patterns]
    summary = Table("summary",
                    tuple(in_cols + ["OUT", "trials", "successes",
                                     "success_rate"]),
                    tuple(summary_rows))

    obs_names = sorted(result.patterns[0].observables)
    trial_rows = []
    for p in result.patterns:
        for t in range(p.trials):
            trial_rows.append((p.label, t) +
                              tuple(float(p.observables[n][t]) for n in obs_names) +
                              (bool(p.success_flags[t]),))
    trials = Table("trials",
                   tuple(["pattern", "trial"] + obs_names + ["success"]),
                   tuple(trial_rows))

    hist = current_histogram(result, bins=bins)
    histogram = HistogramTable(
        "histogram", tuple(float(e) for e in hist.bin_edges),
        tuple((label, tuple(int(c) for c in counts))
              for label, counts in sorted(hist.counts.items())))
    return summary, trials, histogram, hist
