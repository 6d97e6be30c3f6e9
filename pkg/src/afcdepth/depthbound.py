"""Certified lower bounds on entanglement depth from echo contrast.

For a candidate depth M, the achievable contrast is maximised over mixtures
of block-product states: each pure component is a tensor product of i blocks
``alpha|0> + beta|W_M>`` padded with vacuum, the last component augmented by a
remainder block of size N mod M.  Maximising the contrast subject to the
measured single- and two-excitation probabilities (P1, P2) yields max_R(M);
the certified depth is the smallest M whose max_R reaches the measured value.

Two solvers are provided: a fast constraint-elimination solver on the
two-component reduced family (the numerically observed optimum structure),
and a full multi-start SLSQP solver over all component weights used to verify
that structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import ContrastInconsistencyError, InfeasibleBoundError

_REL_TOL = 1e-12
_CONSTRAINT_TOL = 1e-10
_GRID_SIZE = 4000
_INFEASIBLE = -1e300


@dataclass(frozen=True)
class BoundProblem:
    """Inputs of one bound evaluation: teeth N, candidate depth M, P1, P2."""

    n_teeth: int
    depth: int
    p1: float
    p2: float

    def __post_init__(self):
        if self.n_teeth < 1:
            raise ValueError("n_teeth must be >= 1")
        if not 1 <= self.depth <= self.n_teeth:
            raise ValueError("depth must satisfy 1 <= M <= N")
        if self.p1 <= 0:
            raise ValueError("p1 must be positive")
        if self.p2 < 0 or self.p2 > self.p1:
            raise ValueError("need 0 <= p2 <= p1")
        if self.p1 + self.p2 > 1:
            raise ValueError("p1 + p2 must not exceed 1")

    @property
    def k(self) -> int:
        return self.n_teeth // self.depth

    @property
    def k_prime(self) -> int:
        return self.n_teeth - self.k * self.depth


@dataclass(frozen=True)
class MixedBlockState:
    """Weights q_i and per-component excitation weights beta_i^2, i = 1..k.

    ``beta_kprime_sq`` is the excitation weight of the remainder block of the
    last component; None means it is slaved to beta_k so that the
    single-excitation content of that component is the symmetric state over
    all N teeth.  Weights may sum to less than one; the shortfall is vacuum
    (needed only when k = 1, where no other component can carry it).
    """

    weights: np.ndarray
    beta_sq: np.ndarray
    beta_kprime_sq: float | None = None

    def __post_init__(self):
        q = np.asarray(self.weights, dtype=float).ravel()
        b = np.asarray(self.beta_sq, dtype=float).ravel()
        object.__setattr__(self, "weights", q)
        object.__setattr__(self, "beta_sq", b)
        if q.size != b.size or q.size < 1:
            raise ValueError("weights and beta_sq must have equal length >= 1")
        if np.any(q < -1e-12) or q.sum() > 1 + 1e-9:
            raise ValueError("weights must be non-negative and sum to at most 1")
        if np.any((b < -1e-12) | (b > 1 + 1e-12)):
            raise ValueError("beta_sq entries must lie in [0, 1]")
        if self.beta_kprime_sq is not None and not 0 <= self.beta_kprime_sq <= 1:
            raise ValueError("beta_kprime_sq must lie in [0, 1]")


def slaved_remainder_weight(beta_k_sq: float, depth: int, k_prime: int) -> float:
    """Remainder excitation weight making all N tooth amplitudes equal.

    Solves beta'/alpha' = (beta_k/alpha_k) * sqrt(k'/M), so the last
    component's single-excitation part is exactly the N-tooth symmetric state.
    """
    if k_prime == 0:
        return 0.0
    rho = k_prime / depth
    return rho * beta_k_sq / (1.0 - beta_k_sq * (1.0 - rho))


def _component_terms(prob: BoundProblem, i: int, w: float, v: float | None = None):
    """(s, p2, r) of component i at excitation weight w = beta_i^2.

    s is the single-excitation probability, p2 the two-excitation
    probability, and r the component's contribution |sum_j c_j|^2 to the
    contrast numerator (already including the depth factor).
    """
    m, k, kp = prob.depth, prob.k, prob.k_prime
    one = 1.0 - w
    if i < k or kp == 0:
        s = i * w * one ** (i - 1)
        p2 = 0.5 * i * (i - 1) * w * w * one ** (i - 2) if i >= 2 else 0.0
        return s, p2, m * i * i * w * one ** (i - 1)
    if v is None:
        v = slaved_remainder_weight(w, m, kp)
    a = w * one ** (k - 1)
    s = k * a * (1.0 - v) + v * one**k
    p2 = (0.5 * k * (k - 1) * w * w * one ** (k - 2) if k >= 2 else 0.0) * (1.0 - v) \
        + k * a * v
    amp = k * math.sqrt(m * w * (1.0 - v)) * one ** ((k - 1) / 2.0) \
        + math.sqrt(kp * v) * one ** (k / 2.0)
    return s, p2, amp * amp


def _component_terms_d(prob: BoundProblem, i: int, w: float):
    """As ``_component_terms`` (slaved remainder) plus d/dw of each value."""
    m, n, k, kp = prob.depth, prob.n_teeth, prob.k, prob.k_prime
    one = 1.0 - w
    if i < k or kp == 0:
        s = i * w * one ** (i - 1)
        ds = 1.0 if i == 1 else i * one ** (i - 2) * (1.0 - i * w)
        if i >= 2:
            p2 = 0.5 * i * (i - 1) * w * w * one ** (i - 2)
            dp2 = 2.0 * w if i == 2 else 0.5 * i * (i - 1) * w * one ** (i - 3) * (2.0 - i * w)
        else:
            p2, dp2 = 0.0, 0.0
        return s, p2, m * i * s, ds, dp2, m * i * ds
    rho = kp / m
    den = 1.0 - w * (1.0 - rho)
    v = rho * w / den
    dv = rho / (den * den)
    a = w * one ** (k - 1)
    da = one ** (k - 2) * (1.0 - k * w)
    c = one**k
    dc = -k * one ** (k - 1)
    s = k * a * (1.0 - v) + v * c
    ds = k * (da * (1.0 - v) - a * dv) + dv * c + v * dc
    hk = 0.5 * k * (k - 1)
    b = w * w * one ** (k - 2)
    db = 2.0 * w if k == 2 else w * one ** (k - 3) * (2.0 - k * w)
    p2 = hk * b * (1.0 - v) + k * a * v
    dp2 = hk * (db * (1.0 - v) - b * dv) + k * (da * v + a * dv)
    # with the slaved remainder the component's numerator is exactly N * s
    return s, p2, n * s, ds, dp2, n * ds


def _state_sums(state: MixedBlockState, prob: BoundProblem):
    if state.weights.size != prob.k:
        raise ValueError(f"state has {state.weights.size} components, expected k={prob.k}")
    s_terms, p2_terms, r_terms = [], [], []
    for idx, (q, w) in enumerate(zip(state.weights, state.beta_sq), start=1):
        v = state.beta_kprime_sq if idx == prob.k else None
        s, p2, r = _component_terms(prob, idx, float(w), v)
        s_terms.append(q * s)
        p2_terms.append(q * p2)
        r_terms.append(q * r)
    return math.fsum(s_terms), math.fsum(p2_terms), math.fsum(r_terms)


def family_p1(state: MixedBlockState, prob: BoundProblem) -> float:
    """Single-excitation probability of the mixed block state."""
    return _state_sums(state, prob)[0]


def family_p2(state: MixedBlockState, prob: BoundProblem) -> float:
    """Two-excitation probability of the mixed block state."""
    return _state_sums(state, prob)[1]


def family_contrast(state: MixedBlockState, prob: BoundProblem) -> float:
    """Echo contrast of the state, normalised by the problem's P1 + 2 P2."""
    return _state_sums(state, prob)[2] / (prob.p1 + 2.0 * prob.p2)


@dataclass
class SolverDiagnostics:
    """Bookkeeping of one max-contrast solve."""

    mode: str
    n_starts: int
    start_objectives: list = field(default_factory=list)
    best_objective: float = math.nan
    constraint_residuals: tuple = (math.nan, math.nan)
    active_constraints: list = field(default_factory=list)
    p2_target: float = math.nan


@dataclass
class MaxContrastResult:
    value: float
    state: MixedBlockState
    diagnostics: SolverDiagnostics

    def __float__(self):
        return self.value


def _p2_ceiling(prob: BoundProblem) -> float:
    """Largest two-excitation probability the family reaches at the given P1."""
    k, kp = prob.k, prob.k_prime
    if k == 1 and kp == 0:
        return 0.0
    best = 0.0
    grid = np.linspace(1e-6, 1.0 - 1e-6, 2000)
    if k == 1:
        for u in grid:
            for v in np.linspace(1e-6, 1.0 - 1e-6, 200):
                s, p2, _ = _component_terms(prob, 1, float(u), float(v))
                if s <= 0 or p2 <= 0:
                    continue
                q = min(1.0, prob.p1 / s)
                best = max(best, q * p2)
        return best
    for w in grid:
        s, p2, _ = _component_terms(prob, k, float(w))
        if p2 <= 0:
            continue
        caps = [1.0]
        if s > 0:
            caps.append(prob.p1 / s)
        if s < 1.0:
            caps.append((1.0 - prob.p1) / (1.0 - s))
        best = max(best, max(min(caps), 0.0) * p2)
    return best


def _vacuum_state(prob: BoundProblem) -> MixedBlockState:
    q = np.zeros(prob.k)
    b = np.zeros(prob.k)
    q[0] = 1.0
    b[0] = prob.p1
    return MixedBlockState(weights=q, beta_sq=b,
                           beta_kprime_sq=0.0 if prob.k_prime else None)


def _reduced_eval(prob: BoundProblem, w: float, p2_target: float):
    """Contrast with live weight on components 1 and k only; None if infeasible."""
    s_k, p2_k, r_k = _component_terms(prob, prob.k, w)
    if p2_k <= 0.0:
        return None
    q_k = p2_target / p2_k
    if q_k > 1.0 + _REL_TOL:
        return None
    q_k = min(q_k, 1.0)
    q1 = 1.0 - q_k
    x = prob.p1 - q_k * s_k
    if x < -1e-15 * prob.p1:
        return None
    x = max(x, 0.0)
    if x > q1 * (1.0 + _REL_TOL):
        return None
    b1 = min(x / q1, 1.0) if q1 > 0 else 0.0
    value = (prob.depth * x + q_k * r_k) / (prob.p1 + 2.0 * prob.p2)
    return value, q1, b1, q_k


def _k1_eval(prob: BoundProblem, u: float, p2_target: float):
    """k = 1 branch: free remainder weight v plus an explicit vacuum share."""
    ratio = prob.p1 / p2_target
    den = u * (ratio + 2.0) - 1.0
    if den <= 0.0:
        return None
    v = u / den
    if not 0.0 < v <= 1.0:
        return None
    q = p2_target / (u * v)
    if q > 1.0 + _REL_TOL:
        return None
    q = min(q, 1.0)
    _, _, r = _component_terms(prob, 1, u, v)
    return q * r / (prob.p1 + 2.0 * prob.p2), q, v


def _scan_grid(lo: float, hi: float, size: int) -> np.ndarray:
    return np.unique(np.concatenate([
        np.geomspace(max(lo, 1e-14), hi, size),
        np.linspace(lo, hi, size),
    ]))


def _maximise_scalar(f, lo, hi, n_starts, rng, start_objectives):
    """Grid scan + bracketed refinement + the contracted random starts.

    f returns the large negative ``_INFEASIBLE`` sentinel outside the
    feasible region, which the bounded Brent search simply avoids.
    """
    grid = _scan_grid(lo, hi, _GRID_SIZE)
    vals = np.array([f(w) for w in grid])
    best_w, best_v = None, _INFEASIBLE
    feasible = np.where(vals > _INFEASIBLE)[0]
    if feasible.size:
        order = feasible[np.argsort(vals[feasible])][-8:]
        for idx in order:
            a = grid[max(idx - 1, 0)]
            b = grid[min(idx + 1, grid.size - 1)]
            res = optimize.minimize_scalar(lambda w: -f(w), bounds=(a, b),
                                           method="bounded",
                                           options={"xatol": 1e-15})
            cand_w = float(res.x)
            cand_v = f(cand_w)
            if cand_v > best_v:
                best_w, best_v = cand_w, cand_v
    for _ in range(n_starts):
        w0 = 10.0 ** rng.uniform(math.log10(max(lo, 1e-14)), math.log10(hi))
        a, b = max(lo, w0 / 30.0), min(hi, w0 * 30.0)
        res = optimize.minimize_scalar(lambda w: -f(w), bounds=(a, b),
                                       method="bounded", options={"xatol": 1e-15})
        cand_w = float(res.x)
        cand_v = f(cand_w)
        start_objectives.append(cand_v if cand_v > _INFEASIBLE else -math.inf)
        if cand_v > best_v:
            best_w, best_v = cand_w, cand_v
    if best_v <= _INFEASIBLE:
        return None, best_v
    return best_w, best_v


def _reduced_max(prob: BoundProblem, p2_target: float, n_starts: int, seed: int):
    """Maximum contrast over the two-live-component (reduced) family."""
    rng = np.random.default_rng(seed)
    diag = SolverDiagnostics(mode="reduced", n_starts=n_starts, p2_target=p2_target)

    if p2_target <= 0.0:
        state = _vacuum_state(prob)
        value = prob.depth * prob.p1 / (prob.p1 + 2.0 * prob.p2)
        diag.best_objective = value
        diag.constraint_residuals = (0.0, 0.0)
        diag.active_constraints = ["p2_exhausted" if prob.p2 > 0 else "p2_zero"]
        return MaxContrastResult(value, state, diag)

    if prob.k == 1:
        def f(u):
            out = _k1_eval(prob, float(u), p2_target)
            return _INFEASIBLE if out is None else out[0]

        lo = 1.0 / (prob.p1 / p2_target + 1.0)
        best_u, best_v = _maximise_scalar(f, lo * (1 + 1e-12), 1.0 - 1e-12,
                                          n_starts, rng, diag.start_objectives)
        if best_u is None:
            raise InfeasibleBoundError(
                f"no feasible state at depth {prob.depth} for the given P1, P2")
        _, q, v = _k1_eval(prob, best_u, p2_target)
        state = MixedBlockState(weights=np.array([q]), beta_sq=np.array([best_u]),
                                beta_kprime_sq=v)
    else:
        def f(w):
            out = _reduced_eval(prob, float(w), p2_target)
            return _INFEASIBLE if out is None else out[0]

        best_w, best_v = _maximise_scalar(f, 1e-14, 1.0 - 1e-12, n_starts, rng,
                                          diag.start_objectives)
        if best_w is None:
            raise InfeasibleBoundError(
                f"no feasible state at depth {prob.depth} for the given P1, P2")
        _, q1, b1, q_k = _reduced_eval(prob, best_w, p2_target)
        q = np.zeros(prob.k)
        b = np.zeros(prob.k)
        q[0], b[0] = q1, b1
        q[-1], b[-1] = q_k, best_w
        state = MixedBlockState(weights=q, beta_sq=b)

    s, p2, _ = _state_sums(state, prob)
    diag.best_objective = best_v
    diag.constraint_residuals = (abs(s - prob.p1) / prob.p1,
                                 abs(p2 - p2_target) / p2_target)
    diag.active_constraints = _active_constraints(state)
    return MaxContrastResult(best_v, state, diag)


def _active_constraints(state: MixedBlockState):
    active = []
    for i, (q, b) in enumerate(zip(state.weights, state.beta_sq), start=1):
        if q >= 1.0 - 1e-9:
            active.append(f"q{i}_upper")
        if b >= 1.0 - 1e-9:
            active.append(f"beta{i}_upper")
    return active


def _embed_reduced(state: MixedBlockState) -> np.ndarray:
    return np.concatenate([state.weights, state.beta_sq])


def _full_max(prob: BoundProblem, p2_target: float, n_starts: int, seed: int,
              reduced: MaxContrastResult):
    """Multi-start SLSQP over all k weights and k excitation weights."""
    k = prob.k
    norm = (prob.p1 + 2.0 * prob.p2) * prob.n_teeth
    diag = SolverDiagnostics(mode="full", n_starts=n_starts, p2_target=p2_target)

    memo = {"key": None, "vals": None}

    def _terms(z):
        # SLSQP queries objective/constraints/jacobians separately per
        # iterate; memoise the shared component sweep on the current z
        key = z.tobytes()
        if memo["key"] != key:
            q, w = z[:k], z[k:]
            val = s_tot = p2_tot = 0.0
            grad = np.zeros(2 * k)
            js = np.zeros(2 * k)
            jp = np.zeros(2 * k)
            for i in range(k):
                s, p2, r, ds, dp2, dr = _component_terms_d(prob, i + 1, float(w[i]))
                val += q[i] * r
                s_tot += q[i] * s
                p2_tot += q[i] * p2
                grad[i], grad[k + i] = -r / norm, -q[i] * dr / norm
                js[i], js[k + i] = s, q[i] * ds
                jp[i], jp[k + i] = p2, q[i] * dp2
            memo["key"] = key
            memo["vals"] = (val, grad, s_tot, p2_tot, js, jp)
        return memo["vals"]

    def objective(z):
        val, grad, *_ = _terms(z)
        return -val / norm, grad

    def constraint_vals(z):
        _, _, s_tot, p2_tot, js, jp = _terms(z)
        return s_tot, p2_tot, js, jp

    def c1(z):
        s_tot, _, _, _ = constraint_vals(z)
        return s_tot / prob.p1 - 1.0

    def c1_jac(z):
        _, _, js, _ = constraint_vals(z)
        return js / prob.p1

    def c2(z):
        _, p2_tot, _, _ = constraint_vals(z)
        return p2_tot / p2_target - 1.0

    def c2_jac(z):
        _, _, _, jp = constraint_vals(z)
        return jp / p2_target

    cons = [
        {"type": "eq", "fun": lambda z: z[:k].sum() - 1.0,
         "jac": lambda z: np.concatenate([np.ones(k), np.zeros(k)])},
        {"type": "eq", "fun": c1, "jac": c1_jac},
        {"type": "eq", "fun": c2, "jac": c2_jac},
    ]
    bounds = [(0.0, 1.0)] * (2 * k)

    rng = np.random.default_rng(seed)
    starts = [_embed_reduced(reduced.state)]
    for j in range(n_starts):
        q0 = rng.dirichlet(np.ones(k))
        if j % 2 == 0:
            w0 = rng.uniform(0.0, 1.0, size=k)
        else:
            w0 = 10.0 ** rng.uniform(-8.0, 0.0, size=k)
        starts.append(np.concatenate([q0, w0]))

    best_val, best_z = reduced.value, _embed_reduced(reduced.state)
    for z0 in starts:
        res = optimize.minimize(objective, z0, jac=True, method="SLSQP",
                                bounds=bounds, constraints=cons,
                                options={"maxiter": 400, "ftol": 1e-14})
        z = np.clip(res.x, 0.0, 1.0)
        r1, r2 = abs(c1(z)), abs(c2(z))
        val = -objective(z)[0] * prob.n_teeth
        diag.start_objectives.append(val if res.success else -math.inf)
        if r1 <= _CONSTRAINT_TOL and r2 <= _CONSTRAINT_TOL and val > best_val:
            best_val, best_z = val, z

    q, w = best_z[:k], best_z[k:]
    state = MixedBlockState(weights=q / q.sum(), beta_sq=w)
    s, p2, _ = _state_sums(state, prob)
    diag.best_objective = best_val
    diag.constraint_residuals = (abs(s - prob.p1) / prob.p1,
                                 abs(p2 - p2_target) / p2_target)
    diag.active_constraints = _active_constraints(state)
    return MaxContrastResult(best_val, state, diag)


def max_contrast(prob: BoundProblem, n_starts: int = 200, seed: int = 0,
                 mode: str = "auto") -> MaxContrastResult:
    """Largest echo contrast any depth-M state of the family can produce.

    The two-excitation budget is capped at what the family can reach (the
    cap binds only in degenerate corners such as M = N); using the full
    budget is always optimal, so the constraint holds with equality whenever
    attainable, to relative residual 1e-10.

    mode 'auto' uses the reduced two-component solver: placing the whole
    two-excitation budget on the largest component dominates any split
    (Cauchy-Schwarz on the component weights), so the reduced family attains
    the global optimum; the 'full' mode optimises all k weights with
    multi-start SLSQP and exists to verify that structure.  Deterministic
    for a fixed seed.
    """
    if mode not in ("auto", "reduced", "full"):
        raise ValueError("mode must be auto, reduced, or full")
    if prob.p2 <= 0 or (prob.k == 1 and prob.k_prime == 0):
        # a single full-size block never holds two excitations; capping the
        # budget at zero only enlarges the feasible set, keeping bounds valid
        p2_target = 0.0
        reduced = _reduced_max(prob, p2_target, n_starts, seed)
    else:
        p2_target = prob.p2
        try:
            reduced = _reduced_max(prob, p2_target, n_starts, seed)
        except InfeasibleBoundError:
            ceiling = _p2_ceiling(prob)
            if ceiling <= 0:
                raise
            p2_target = min(prob.p2, ceiling * (1.0 - 1e-9))
            reduced = _reduced_max(prob, p2_target, n_starts, seed)
    if mode != "full" or prob.k == 1 or p2_target == 0.0:
        return reduced
    return _full_max(prob, p2_target, n_starts, seed, reduced)


def linear_bound(contrast: float, n_teeth: int, p1: float, p2: float) -> float:
    """Closed-form depth bound M > R - sqrt(2 P2) N / P1 (real-valued)."""
    if p1 <= 0:
        raise ValueError("p1 must be positive")
    if p2 < 0:
        raise ValueError("p2 must be non-negative")
    return contrast - math.sqrt(2.0 * p2) * n_teeth / p1


@dataclass
class DepthBoundResult:
    """Certified depth with the solver evidence and the R +/- sigma interval."""

    m_lower: int
    r_max_at_m: float
    contrast: float
    sigma: float
    m_interval: tuple
    n_teeth: int
    p1: float
    p2: float
    diagnostics: SolverDiagnostics
    evaluations: int

    def to_dict(self):
        return {
            "m_lower": self.m_lower,
            "r_max_at_m": self.r_max_at_m,
            "contrast": self.contrast,
            "sigma": self.sigma,
            "m_interval": list(self.m_interval),
            "n_teeth": self.n_teeth,
            "p1": self.p1,
            "p2": self.p2,
            "solver": {
                "mode": self.diagnostics.mode,
                "n_starts": self.diagnostics.n_starts,
                "best_objective": self.diagnostics.best_objective,
                "constraint_residuals": list(self.diagnostics.constraint_residuals),
                "active_constraints": self.diagnostics.active_constraints,
            },
            "evaluations": self.evaluations,
        }


def certify_depth(contrast: float, sigma: float, n_teeth: int, p1: float,
                  p2: float, n_starts: int = 200, seed: int = 0) -> DepthBoundResult:
    """Smallest depth M whose max contrast reaches the measured value.

    Bisection over integer M (max contrast is non-decreasing in M); the
    interval entries come from repeating the search at contrast -/+ sigma.
    """
    if contrast <= 0:
        raise ValueError("contrast must be positive")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if contrast > n_teeth:
        raise ContrastInconsistencyError(
            f"contrast {contrast} exceeds the tooth count {n_teeth}")

    cache: dict[int, MaxContrastResult] = {}

    def mr(m: int) -> MaxContrastResult:
        if m not in cache:
            cache[m] = max_contrast(BoundProblem(n_teeth, m, p1, p2),
                                    n_starts=n_starts, seed=seed)
        return cache[m]

    def reaches(m: int, r: float) -> bool:
        return mr(m).value >= r * (1.0 - _REL_TOL) - _REL_TOL

    top = mr(n_teeth).value
    if contrast > top * (1.0 + _REL_TOL) + _REL_TOL:
        raise ContrastInconsistencyError(
            f"contrast {contrast} exceeds max achievable {top} at M = N = {n_teeth}")

    def smallest(r: float) -> int:
        if reaches(1, r):
            return 1
        lo, hi = 1, n_teeth
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if reaches(mid, r):
                hi = mid
            else:
                lo = mid
        return hi

    m_lower = smallest(contrast)
    if sigma > 0:
        m_lo = smallest(max(contrast - sigma, 1e-12))
        r_hi = contrast + sigma
        m_hi = n_teeth if r_hi > top else smallest(r_hi)
    else:
        m_lo = m_hi = m_lower
    best = mr(m_lower)
    return DepthBoundResult(
        m_lower=m_lower, r_max_at_m=best.value, contrast=contrast, sigma=sigma,
        m_interval=(m_lo, m_hi), n_teeth=n_teeth, p1=p1, p2=p2,
        diagnostics=best.diagnostics, evaluations=len(cache))


def bound_curve(n_teeth: int, p1: float, p2: float, depths, n_starts: int = 200,
                seed: int = 0):
    """Rows (M, max contrast) for each candidate depth, sorted by M."""
    rows = []
    for m in sorted(set(int(m) for m in depths)):
        res = max_contrast(BoundProblem(n_teeth, m, p1, p2),
                           n_starts=n_starts, seed=seed)
        rows.append((m, res.value))
    return rows
