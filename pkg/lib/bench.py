"""
Baseline-contrast benchmark: common-neighbor sampling against bond percolation.

Budgets are fractions of the default sample count m* = ceil(8 alpha n ln(n) / eps^2).
For a budget fraction f the common-neighbor sampler draws ceil(f m*) edges; the
percolation baseline keeps every edge with the probability that retains, in
expectation, as many distinct edges as that sampler does.

Every (scheme, budget, seed) cell is one task in a worker pool. Completed rows
can be kept in a JSON checkpoint so an interrupted bench resumes where it
stopped.
"""

import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import polars as pl

from lib.errors import ParameterError
from lib.graph_core import laplacian
from lib.local_stats import common_neighbor_counts
from lib.pool import run_batches
from lib.sampler import (
    SampleConfig,
    edge_probabilities,
    percolate,
    percolation_keep_prob,
    sample_count,
    sparsify,
)
from lib.spectral import verify_spectral

SCHEMES = ("common-neighbor", "percolation")
ROW_SCHEMA = {
    "scheme": pl.Utf8,
    "budget": pl.Float64,
    "m": pl.Int64,
    "seed": pl.Int64,
    "retained_edges": pl.Int64,
    "distortion": pl.Float64,
    "passed": pl.Boolean,
}


def expected_distinct_edges(dist, m):
    """Expected number of distinct edges hit by m draws."""
    return math.fsum(1.0 - (1.0 - dist.probs) ** m)


def load_checkpoint(checkpoint_file):
    if checkpoint_file is None or not Path(checkpoint_file).exists():
        return {}
    try:
        with open(checkpoint_file, "r") as f:
            return json.load(f)
    except json.JSONDecodeError:
        print("Checkpoint file is corrupted or empty. Starting fresh.", file=sys.stderr)
        return {}


def save_checkpoint(checkpoint_file, checkpoint_data):
    with open(checkpoint_file, "w") as f:
        json.dump(checkpoint_data, f, indent=4)


def _cell_key(row):
    return (row["scheme"], float(row["budget"]), int(row["seed"]))


def run_bench(g, epsilon, budgets, seeds, schemes=SCHEMES, parallel_workers=1,
              checkpoint_file=None, checkpoint_key=None, verbose=False):
    """Run every (scheme, budget, seed) cell.

    Returns the rows as a polars DataFrame sorted by (scheme, budget, seed), and m*.
    """
    start_time = time.time()
    counts = common_neighbor_counts(g, parallel_workers)
    dist = edge_probabilities(g, counts)
    m_star = sample_count(g, epsilon, counts)
    L_G = laplacian(g)

    checkpoint_data = load_checkpoint(checkpoint_file)
    key = f"{checkpoint_key or 'bench'}|epsilon={epsilon!r}"
    done_rows = checkpoint_data.get(key, {}).get("rows", [])
    done = {_cell_key(r) for r in done_rows}

    requested = [(scheme, float(budget), int(seed)) for scheme in schemes for budget in budgets for seed in seeds]
    wanted = set(requested)
    # the checkpoint may hold cells from other runs; only requested ones are returned
    restored = [r for r in done_rows if _cell_key(r) in wanted]
    tasks = [cell for cell in requested if cell not in done]
    if verbose:
        print(f"Bench: m*={m_star}, {len(tasks)} cells to run, {len(restored)} restored from checkpoint", file=sys.stderr)

    def run_cell(scheme, budget, seed):
        m = max(1, math.ceil(budget * m_star))
        if scheme == "common-neighbor":
            h = sparsify(g, SampleConfig(epsilon=epsilon, m_override=m, seed=seed), counts)
        else:
            keep_prob = percolation_keep_prob(g, expected_distinct_edges(dist, m))
            h = percolate(g, keep_prob, seed)
        report = verify_spectral(L_G, laplacian(h), epsilon)
        return {
            "scheme": scheme,
            "budget": budget,
            "m": m,
            "seed": seed,
            "retained_edges": h.num_edges,
            "distortion": report.distortion,
            "passed": report.passed,
        }

    def run_task_batch(start, end):
        return [run_cell(*task) for task in tasks[start:end]]

    new_rows = run_batches(run_task_batch, len(tasks), parallel_workers, verbose, label="bench batch", min_batch_size=1)
    rows = restored + new_rows

    if checkpoint_file is not None:
        saved = list(done_rows) + new_rows
        checkpoint_data[key] = {"m_star": m_star, "rows": saved}
        save_checkpoint(checkpoint_file, checkpoint_data)
        if verbose:
            print(f"Checkpoint updated: {len(saved)} rows in {checkpoint_file}", file=sys.stderr)

    if verbose:
        print(f"Bench completed in {time.time() - start_time:.2f} seconds", file=sys.stderr)

    return pl.from_dicts(rows, schema=ROW_SCHEMA).sort(["scheme", "budget", "seed"]), m_star


def summarize(rows):
    """Median distortion, pass rate and mean retained edges per (scheme, budget)."""
    return (
        rows.group_by(["scheme", "budget"])
        .agg(
            pl.col("m").first().alias("m"),
            pl.len().alias("runs"),
            pl.col("retained_edges").mean().alias("mean_retained_edges"),
            pl.col("distortion").median().alias("median_distortion"),
            pl.col("passed").mean().alias("pass_rate"),
        )
        .sort(["scheme", "budget"])
    )


def parse_budget_grid(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        values = []
    if not values or any(not (v > 0 and np.isfinite(v)) for v in values):
        raise ParameterError(f"budget grid must be a comma-separated list of positive numbers, got '{text}'")
    return sorted(set(values))
