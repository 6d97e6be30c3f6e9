"""Absorbed-excitation statistics of a heralded down-conversion source.

Models the chain: thermal pair generation with mean pair number mu per mode,
heralding by a non-number-resolving detector of efficiency eta_a, loss into
the comb (eta_b), absorption (eta_w), and conditioning on no click behind the
comb (transmission-detection efficiency eta_t).  The result is the probability
P_r that exactly r photons were absorbed.

Also hosts the count-rate estimators for mu and the channel efficiencies, and
a seedable Monte-Carlo simulation of the same channel used as an independent
cross-check of the analytic chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError

_REL_TERM_TOL = 1e-15
_N_CAP = 10**6


@dataclass(frozen=True)
class ChannelModel:
    """Source mean pair number and the loss/detection efficiencies."""

    mu: float
    eta_a: float
    eta_b: float
    eta_w: float
    eta_t: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        for name in ("eta_a", "eta_b", "eta_w", "eta_t"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")

    @property
    def absorbed_fraction(self) -> float:
        """Per-photon absorption probability eta_b * eta_w."""
        return self.eta_b * self.eta_w

    @property
    def survival_z2(self) -> float:
        """Weight Z^2 of the undetected loss modes (pre-comb loss and
        post-comb loss without a detector click)."""
        return self.eta_b * (1.0 - self.eta_w) * (1.0 - self.eta_t) + (1.0 - self.eta_b)


@dataclass(frozen=True)
class CountRates:
    """Coincidence/singles rates from the calibration configuration."""

    c_ab: float
    s_a: float
    s_b: float
    tau_p: float
    eta_db: float = 0.60

    def __post_init__(self):
        if min(self.c_ab, self.s_a, self.s_b) < 0:
            raise ValueError("rates must be non-negative")
        if self.c_ab > min(self.s_a, self.s_b) * (1 + 1e-12):
            raise ValueError("coincidence rate exceeds a singles rate")
        if not 0 < self.eta_db <= 1:
            raise ValueError("eta_db must be in (0, 1]")


@dataclass(frozen=True)
class ExcitationProbabilities:
    """P_r for r = 0..r_max plus the truncation error of the series."""

    p: np.ndarray
    truncation_error: float

    def __getitem__(self, r: int) -> float:
        return float(self.p[r])

    @property
    def r_max(self) -> int:
        return self.p.size - 1


def thermal_weight(n: int, mu: float) -> float:
    """Thermal photon-number weight mu^n / (mu+1)^(n+1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if mu <= 0:
        raise ValueError("mu must be positive")
    return mu**n / (mu + 1.0) ** (n + 1)


def poisson_weight(n: int, mu: float) -> float:
    """Poissonian alternative exp(-mu) mu^n / n! for sensitivity analysis."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if mu <= 0:
        raise ValueError("mu must be positive")
    return math.exp(-mu + n * math.log(mu) - math.lgamma(n + 1))


def _pair_weight(n: int, mu: float, stats_model: str) -> float:
    if stats_model == "thermal":
        return thermal_weight(n, mu)
    if stats_model == "poisson":
        return poisson_weight(n, mu)
    raise ValueError("stats_model must be 'thermal' or 'poisson'")


def heralded_number_distribution(ch: ChannelModel, stats_model: str = "thermal"):
    """Photon-number distribution in the comb arm after a herald click.

    The herald fires for k >= 1 detections out of n photons, so the n-pair
    weight picks up 1 - (1 - eta_a)^n.  Returns (n values, probabilities).
    """
    weights = []
    total = 0.0
    n = 1
    while n <= _N_CAP:
        w = _pair_weight(n, ch.mu, stats_model) * (1.0 - (1.0 - ch.eta_a) ** n)
        weights.append(w)
        total += w
        if w < _REL_TERM_TOL * total:
            break
        n += 1
    else:
        raise ArithmeticError("heralded distribution did not converge")
    pn = np.asarray(weights) / total
    return np.arange(1, pn.size + 1), pn


def excitation_probabilities(ch: ChannelModel, r_max: int = 4,
                             stats_model: str = "thermal") -> ExcitationProbabilities:
    """P_r that exactly r photons sit in the comb, r = 0..r_max.

    Chain: heralded number distribution, per-photon splitting into absorbed
    (eta_b*eta_w), transmitted-and-detected, and undetected-loss (Z^2) modes,
    then conditioning on no click in the transmitted mode:

        P_r = (1/Mnorm) sum_{n>=r} p_n C(n, r) (eta_b eta_w)^r Z^(2(n-r))

    with Mnorm = sum_n p_n (eta_b eta_w + Z^2)^n.  Terms are accumulated with
    compensated summation; the geometric tail bounds the truncation error.
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    ns, pn = heralded_number_distribution(ch, stats_model)
    ebw = ch.absorbed_fraction
    z2 = ch.survival_z2
    mnorm = math.fsum(p * (ebw + z2) ** n for n, p in zip(ns, pn))

    # extend r far enough that the untabulated tail is negligible
    r_hi = r_max
    probs = []
    while True:
        r = len(probs)
        terms = []
        for n, p in zip(ns, pn):
            if n < r and r > 0:
                continue
            terms.append(p * math.comb(n, r) * ebw**r * z2 ** (n - r))
        probs.append(math.fsum(terms) / mnorm)
        if r >= r_hi and (probs[-1] < 1e-18 or r >= ns[-1]):
            break
    total = math.fsum(probs)
    truncation = max(1.0 - total, 0.0)
    out = np.asarray(probs[: r_max + 1])
    # mass at r_max < r <= r_hi counts as truncation of the reported vector
    truncation += math.fsum(probs[r_max + 1:])
    return ExcitationProbabilities(p=out, truncation_error=truncation)


def monte_carlo_excitations(ch: ChannelModel, trials: int, seed: int = 0,
                            r_max: int = 4):
    """Monte-Carlo channel simulation; returns (counts[r], accepted trials).

    Each trial draws n >= 1 pairs from the thermal distribution (n = 0 never
    heralds), thins the herald arm photon-by-photon, splits the comb-arm
    photons into absorbed / transmitted-detected / lost, and keeps the trial
    when the herald fired and the transmitted mode stayed silent.
    """
    rng = np.random.default_rng(seed)
    counts = np.zeros(r_max + 1, dtype=np.int64)
    accepted = 0
    p_abs = ch.absorbed_fraction
    p_det = ch.eta_b * (1.0 - ch.eta_w) * ch.eta_t
    chunk = 2_000_000
    remaining = trials
    while remaining > 0:
        size = min(chunk, remaining)
        remaining -= size
        # thermal conditioned on n >= 1 is geometric with p = 1/(1+mu)
        n = rng.geometric(1.0 / (1.0 + ch.mu), size=size)
        heralded = rng.binomial(n, ch.eta_a) >= 1
        absorbed = rng.binomial(n, p_abs)
        rest = n - absorbed
        t_clicks = rng.binomial(rest, p_det / (1.0 - p_abs))
        keep = heralded & (t_clicks == 0)
        accepted += int(keep.sum())
        kept_r = np.minimum(absorbed[keep], r_max)
        counts += np.bincount(kept_r, minlength=r_max + 1)
    return counts, accepted


def estimate_mu_from_g2(g2_ab: float) -> float:
    """Mean pair number from the cross-correlation: mu = 1/g2 for g2 >> 1."""
    if g2_ab <= 10.0:
        raise ValueError("1/g2 approximation needs g2_ab > 10")
    return 1.0 / g2_ab


def estimate_etas(rates: CountRates):
    """Herald-arm and comb-arm efficiencies from coincidence/singles ratios.

    eta_a = C_ab / S_b and eta_b* = C_ab / (S_a * eta_Db), valid for mu << 1.
    """
    if rates.s_a <= 0 or rates.s_b <= 0:
        raise ValueError("singles rates must be positive")
    return rates.c_ab / rates.s_b, rates.c_ab / (rates.s_a * rates.eta_db)


def write_efficiency(d1: float, finesse: float) -> float:
    """Absorption probability 1 - exp(-d1/F) from the effective depth d1/F."""
    if d1 < 0:
        raise ValueError("d1 must be non-negative")
    if finesse < 1:
        raise ValueError("finesse must be >= 1")
    return 1.0 - math.exp(-d1 / finesse)


def g2_from_probabilities(p_joint: float, p_1: float, p_2: float) -> float:
    """Second-order correlation p_joint / (p_1 * p_2) from counted windows."""
    if p_1 <= 0 or p_2 <= 0:
        raise ValueError("marginal probabilities must be positive")
    return p_joint / (p_1 * p_2)


def propagate_uncertainty(ch: ChannelModel, d1: float, finesse: float,
                          sigma_mu: float, sigma_d1: float, r_max: int = 2,
                          stats_model: str = "thermal"):
    """First-order uncertainty of P_r from the dominant inputs (mu, d1).

    eta_w is tied to d1 through the write efficiency; all other efficiencies
    are treated as exact.  Returns (probabilities, sigmas) arrays.
    """
    def evaluate(mu, d1_val):
        model = ChannelModel(mu=mu, eta_a=ch.eta_a, eta_b=ch.eta_b,
                             eta_w=write_efficiency(d1_val, finesse), eta_t=ch.eta_t)
        return excitation_probabilities(model, r_max, stats_model).p

    base = evaluate(ch.mu, d1)
    var = np.zeros_like(base)
    for sig, step in ((sigma_mu, "mu"), (sigma_d1, "d1")):
        if sig <= 0:
            continue
        if step == "mu":
            hi = evaluate(ch.mu + sig, d1)
            lo = evaluate(max(ch.mu - sig, ch.mu * 1e-3), d1)
        else:
            hi = evaluate(ch.mu, d1 + sig)
            lo = evaluate(ch.mu, max(d1 - sig, 0.0))
        var += ((hi - lo) / 2.0) ** 2
    return base, np.sqrt(var)


_CHANNEL_KEYS = ("mu", "eta_a", "eta_b", "eta_b_star", "eta_ci", "eta_w", "eta_t",
                 "stats_model")


def load_channel_config(path):
    """Read a key-value channel config; returns (ChannelModel, stats_model).

    Keys: mu, eta_a, eta_w, eta_t and either eta_b directly or the pair
    eta_b_star, eta_ci (eta_b = eta_b_star * eta_ci).  Optional stats_model.
    Lines are ``key = value``; '#' starts a comment.
    """
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CHANNEL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val.strip()
    stats_model = values.pop("stats_model", "thermal")
    if stats_model not in ("thermal", "poisson"):
        raise ConfigError(f"stats_model must be thermal or poisson, got {stats_model}")
    try:
        numbers = {k: float(v) for k, v in values.items()}
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric value ({exc})") from None
    if "eta_b" in numbers:
        eta_b = numbers["eta_b"]
    else:
        try:
            eta_b = numbers["eta_b_star"] * numbers["eta_ci"]
        except KeyError as exc:
            raise ConfigError(f"{path}: need eta_b or eta_b_star+eta_ci") from None
    try:
        model = ChannelModel(mu=numbers["mu"], eta_a=numbers["eta_a"], eta_b=eta_b,
                             eta_w=numbers["eta_w"], eta_t=numbers["eta_t"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc}") from None
    return model, stats_model


def load_count_rates(path):
    """Read count-rate rows from CSV with header C_ab,S_a,S_b,tau_p[,eta_Db]."""
    rows = []
    with open(path) as fh:
        header = [h.strip() for h in fh.readline().split(",")]
        required = ["C_ab", "S_a", "S_b", "tau_p"]
        if header[: len(required)] != required:
            raise ConfigError(f"{path}: expected columns {required}, got {header}")
        has_db = len(header) > 4 and header[4] == "eta_Db"
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = [float(x) for x in line.split(",")]
            kwargs = {}
            if has_db and len(parts) > 4:
                kwargs["eta_db"] = parts[4]
            rows.append(CountRates(c_ab=parts[0], s_a=parts[1], s_b=parts[2],
                                   tau_p=parts[3], **kwargs))
    return rows
