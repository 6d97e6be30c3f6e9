"""Independent reference implementations used to cross-check the fast paths.

Everything here favours brute force over cleverness: explicit tensor-product
state vectors, Monte-Carlo sampling of tooth detunings, and dense grid
searches.  Tests compare the production code against these.
"""

from __future__ import annotations

import math

import numpy as np

from afcdepth.depthbound import BoundProblem, MixedBlockState
from afcdepth.dicke import w_ket
from afcdepth.echosim import CombSpec


def block_factor(size: int, excitation_weight: float) -> np.ndarray:
    """State vector sqrt(1-b)|0...0> + sqrt(b)|W_size> over 2^size dims."""
    vec = math.sqrt(1.0 - excitation_weight) * _vacuum(size)
    if excitation_weight > 0:
        vec = vec + math.sqrt(excitation_weight) * w_ket(size)
    return vec


def _vacuum(size: int) -> np.ndarray:
    vec = np.zeros(2**size, dtype=complex)
    vec[0] = 1.0
    return vec


def block_product_state(depth: int, n_blocks: int, beta_sq: float,
                        k_prime: int = 0, beta_kprime_sq: float = 0.0) -> np.ndarray:
    """Explicit tensor state of n_blocks identical blocks plus a remainder."""
    psi = np.array([1.0 + 0.0j])
    for _ in range(n_blocks):
        psi = np.kron(psi, block_factor(depth, beta_sq))
    if k_prime:
        psi = np.kron(psi, block_factor(k_prime, beta_kprime_sq))
    return psi


def sector_data(psi: np.ndarray):
    """(weights by excitation number, single-excitation amplitude sum)."""
    n_qubits = int(round(math.log2(psi.size)))
    weights = np.zeros(n_qubits + 1)
    single_sum = 0.0 + 0.0j
    for idx, amp in enumerate(psi):
        if amp == 0:
            continue
        pop = bin(idx).count("1")
        weights[pop] += abs(amp) ** 2
        if pop == 1:
            single_sum += amp
    return weights, single_sum


def direct_family_values(state: MixedBlockState, prob: BoundProblem):
    """(P1, P2, contrast numerator) from explicit tensor states, N <= 12."""
    from afcdepth.depthbound import slaved_remainder_weight

    p1 = p2 = numerator = 0.0
    k = prob.k
    for i, (q, b) in enumerate(zip(state.weights, state.beta_sq), start=1):
        if q == 0:
            continue
        if i == k and prob.k_prime:
            v = state.beta_kprime_sq
            if v is None:
                v = slaved_remainder_weight(float(b), prob.depth, prob.k_prime)
            psi = block_product_state(prob.depth, i, float(b), prob.k_prime, float(v))
        else:
            psi = block_product_state(prob.depth, i, float(b))
        weights, single_sum = sector_data(psi)
        p1 += q * weights[1]
        p2 += q * (weights[2] if weights.size > 2 else 0.0)
        numerator += q * abs(single_sum) ** 2
    return p1, p2, numerator


def grid_search_max(prob: BoundProblem, points: int = 10_000) -> float:
    """Dense grid search over the reduced variables via the public family API.

    For each tail excitation weight w, the two equality constraints pin the
    remaining reduced variables algebraically; the best feasible contrast
    over the grid lower-bounds the true maximum.
    """
    from afcdepth.depthbound import _k1_eval, _reduced_eval

    if prob.p2 <= 0 or (prob.k == 1 and prob.k_prime == 0):
        return prob.depth * prob.p1 / (prob.p1 + 2.0 * prob.p2)
    best = -math.inf
    if prob.k == 1:
        lo = 1.0 / (prob.p1 / prob.p2 + 1.0)
        grid = np.linspace(lo * (1 + 1e-9), 1.0 - 1e-9, points)
        for u in grid:
            out = _k1_eval(prob, float(u), prob.p2)
            if out is not None:
                best = max(best, out[0])
        return best
    grid = np.unique(np.concatenate([
        np.geomspace(1e-12, 1.0 - 1e-9, points // 2),
        np.linspace(1e-9, 1.0 - 1e-9, points // 2),
    ]))
    for w in grid:
        out = _reduced_eval(prob, float(w), prob.p2)
        if out is not None:
            best = max(best, out[0])
    return best


def mc_emission_probability(amps, comb: CombSpec, times, n_samples: int = 10_000,
                            seed: int = 0) -> np.ndarray:
    """Emission probability with tooth dephasing sampled per atom.

    Each tooth's detuning spread is drawn from its lineshape; the analytic
    envelope is the sample average of exp(i 2 pi f t).
    """
    rng = np.random.default_rng(seed)
    c = amps.c if hasattr(amps, "c") else np.asarray(amps, dtype=complex)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    n = c.size
    if comb.tooth_shape == "gaussian":
        spread = rng.normal(0.0, comb.gamma / (2.0 * math.sqrt(2.0 * math.log(2.0))),
                            size=(n, n_samples))
    elif comb.tooth_shape == "lorentzian":
        spread = comb.gamma / 2.0 * rng.standard_cauchy(size=(n, n_samples))
    else:
        spread = rng.uniform(-comb.gamma / 2.0, comb.gamma / 2.0, size=(n, n_samples))
    out = np.empty(times.size)
    j = np.arange(n)
    for idx, t in enumerate(times):
        tooth_phase = np.exp(1j * j * comb.delta * t)
        envelope = np.exp(2j * math.pi * spread * t).mean(axis=1)
        out[idx] = abs(np.sum(c * tooth_phase * envelope)) ** 2
    return out
