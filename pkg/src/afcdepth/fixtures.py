"""Deterministic synthetic histogram fixtures for the analysis chain.

Real raw histograms are not distributable, so fixtures are engineered to
land on reference contrast triples: a Gaussian echo of true width
~203 ps smeared by 354 ps detector jitter over a flat emission floor and a
flat uncorrelated background of 0.9 counts per 80 ps bin.  Given raw and
background-subtracted contrast targets, the echo amplitude and floor follow
in closed form; Poisson noise is applied with a fixed seed.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .echoanalysis import DETECTOR_FWHM_DEFAULT, TimeHistogram

BIN_WIDTH = 80e-12
BACKGROUND_RATE = 0.9
TRUE_ECHO_FWHM = 202.79e-12
OBSERVED_ECHO_FWHM = math.sqrt(TRUE_ECHO_FWHM**2 + DETECTOR_FWHM_DEFAULT**2)
COMB_BANDWIDTH = 6e9
PRE_HERALD_BINS = 150

_GAUSS_AREA = math.sqrt(math.pi / (4.0 * math.log(2.0)))  # integral/(E*fwhm)

# (tooth count label, raw contrast target, subtracted contrast target);
# raw peaks at N = 408 and saturates, subtracted keeps growing to N = 564
SWEEP_TARGETS = (
    (94, 24.0, 30.0),
    (188, 45.0, 62.0),
    (282, 60.0, 90.0),
    (376, 67.5, 113.0),
    (408, 70.6, 118.0),
    (470, 67.8, 122.0),
    (564, 65.8, 127.6),
)

HEADLINE_N = 564


def storage_time(n_teeth: int, bandwidth: float = COMB_BANDWIDTH) -> float:
    """Echo delay 2*pi/Delta = N / bandwidth for an N-tooth comb."""
    return n_teeth / bandwidth


def solve_fixture(raw_target: float, sub_target: float, t_storage: float,
                  background: float = BACKGROUND_RATE):
    """Echo amplitude and emission floor hitting the two contrast targets."""
    if sub_target <= raw_target:
        raise ValueError("subtracted contrast must exceed the raw value")
    amplitude = background / (1.0 / raw_target - 1.0 / sub_target)
    gauss_avg = amplitude * OBSERVED_ECHO_FWHM * _GAUSS_AREA / t_storage
    floor = amplitude / sub_target - gauss_avg
    if floor <= 0:
        raise ValueError("targets need a negative emission floor; infeasible")
    return amplitude, floor


def synthetic_histogram(n_teeth: int, raw_target: float, sub_target: float,
                        seed: int = 0, scale: float = 1.0, poisson: bool = True):
    """Build one fixture histogram; returns (TimeHistogram, truth dict).

    ``scale`` multiplies every intensity (Poisson noise shrinks as
    1/sqrt(scale) while all contrast ratios stay put); ``poisson=False``
    rounds the expectation instead of sampling.
    """
    t_e = storage_time(n_teeth)
    amplitude, floor = solve_fixture(raw_target, sub_target, t_e)
    herald_time = (PRE_HERALD_BINS + 0.5) * BIN_WIDTH
    t0 = herald_time + t_e
    n_bins = PRE_HERALD_BINS + int(math.ceil(1.7 * t_e / BIN_WIDTH))
    t = (np.arange(n_bins) + 0.5) * BIN_WIDTH
    expected = np.full(n_bins, BACKGROUND_RATE)
    after = t >= herald_time
    expected[after] += floor
    expected += amplitude * np.exp(
        -4.0 * math.log(2.0) * (t - t0) ** 2 / OBSERVED_ECHO_FWHM**2)
    expected *= scale
    if poisson:
        counts = np.random.default_rng(seed).poisson(expected)
    else:
        counts = np.round(expected).astype(np.int64)
    hist = TimeHistogram(bin_width=BIN_WIDTH, counts=counts,
                         herald_index=PRE_HERALD_BINS, storage_time=t_e)
    factor = math.sqrt(OBSERVED_ECHO_FWHM**2 /
                       (OBSERVED_ECHO_FWHM**2 - DETECTOR_FWHM_DEFAULT**2))
    truth = {
        "n_teeth": n_teeth,
        "r_raw": raw_target,
        "r_subtracted": sub_target,
        "r_deconvolved": factor * sub_target,
        "amplitude": amplitude * scale,
        "floor": floor * scale,
        "echo_fwhm": OBSERVED_ECHO_FWHM,
        "true_echo_fwhm": TRUE_ECHO_FWHM,
        "deconvolution_factor": factor,
        "t_echo": t_e,
        "scale": scale,
    }
    return hist, truth


def headline_fixture(seed: int = 11, scale: float = 1.0, poisson: bool = True):
    """The N = 564 fixture whose corrected chain lands near (66, 128, 257)."""
    raw, sub = next((r, s) for n, r, s in SWEEP_TARGETS if n == HEADLINE_N)
    return synthetic_histogram(HEADLINE_N, raw, sub, seed=seed, scale=scale,
                               poisson=poisson)


def sweep_fixtures(seed: int = 11, scale: float = 8.0):
    """One fixture per sweep row; returns [(label, TimeHistogram, truth)].

    The default scale keeps Poisson scatter below the engineered gap between
    neighbouring raw-contrast targets, so the saturation shape survives noise.
    """
    out = []
    for n_teeth, raw, sub in SWEEP_TARGETS:
        hist, truth = synthetic_histogram(n_teeth, raw, sub, seed=seed + n_teeth,
                                          scale=scale)
        out.append((str(n_teeth), hist, truth))
    return out


def write_fixture_files(outdir, seed: int = 11):
    """Write the sweep fixtures as CSV + sidecar pairs plus a manifest."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {"bin_width": BIN_WIDTH, "detector_fwhm": DETECTOR_FWHM_DEFAULT,
                "seed": seed, "histograms": []}
    for label, hist, truth in sweep_fixtures(seed=seed):
        csv_name = f"hist_{label}.csv"
        sidecar_name = f"hist_{label}.json"
        starts = np.arange(hist.counts.size) * hist.bin_width
        with open(outdir / csv_name, "w") as fh:
            fh.write("# bin_start_s,counts\n")
            for t, c in zip(starts, hist.counts):
                fh.write(f"{t:.12e},{int(c)}\n")
        sidecar = {"bin_width": hist.bin_width, "herald_index": hist.herald_index,
                   "storage_time": hist.storage_time,
                   "detector_fwhm": DETECTOR_FWHM_DEFAULT}
        (outdir / sidecar_name).write_text(json.dumps(sidecar, indent=1, sort_keys=True))
        manifest["histograms"].append({"label": label, "csv": csv_name,
                                       "sidecar": sidecar_name, "truth": truth})
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return manifest


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    written = write_fixture_files(target)
    print(f"wrote {len(written['histograms'])} fixtures to {target}")
