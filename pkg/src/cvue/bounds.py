"""Closed-form quantities: bit error rate, decryption-failure bound, monogamy
bounds, the security exponent, the asymptotic security region, and the data
behind the parameter-study figures.

Everything involving binomial coefficients at codeword lengths ~1000 is
computed through log-gamma to stay overflow-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gammaln, logsumexp, xlogy

from .channel import ChannelParams, noisy_ber

FIGURE_IDS = ("fig1", "fig2a", "fig2b", "fig4")

LOG2_E = math.log2(math.e)


def ber_analytic(alpha: float, squeezing: float):
    """Bit error rate of honest decryption: erfc(alpha * sqrt(cosh r)) / 2."""
    alpha = np.asarray(alpha, dtype=float)
    squeezing = np.asarray(squeezing, dtype=float)
    if np.any(alpha <= 0):
        raise ValueError("alpha must be positive")
    if np.any(squeezing < 0):
        raise ValueError("squeezing must be nonnegative")
    out = 0.5 * erfc(alpha * np.sqrt(np.cosh(squeezing)))
    return float(out) if out.ndim == 0 else out


def binary_entropy(x):
    """Binary entropy in bits; defined as 0 at the endpoints."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("binary_entropy needs x in [0, 1]")
    out = -(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / math.log(2.0)
    return float(out) if out.ndim == 0 else out


def dkl_binary(a: float, b: float) -> float:
    """Binary Kullback-Leibler divergence a*ln(a/b) + (1-a)*ln((1-a)/(1-b)) (nats)."""
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise ValueError("dkl_binary needs arguments strictly inside (0, 1)")
    return a * math.log(a / b) + (1.0 - a) * math.log((1.0 - a) / (1.0 - b))


def eps_df(num_modes: int, max_errors: int, alpha: float, squeezing: float) -> float:
    """Chernoff bound on the decryption-failure probability,
    exp[-N * D_KL((t+1)/N || beta)]; reports 1 when the bound is inapplicable
    (beta >= (t+1)/N)."""
    if max_errors + 1 > num_modes:
        raise ValueError("need max_errors + 1 <= num_modes")
    beta = ber_analytic(alpha, squeezing)
    threshold = (max_errors + 1) / num_modes
    if beta >= threshold:
        return 1.0
    return math.exp(-num_modes * dkl_binary(threshold, beta))


def _log_comb(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _check_monogamy_args(num_modes: int, delta: float, eps: float) -> None:
    if num_modes < 2 or num_modes % 2 != 0:
        raise ValueError("num_modes must be a positive even integer")
    if delta <= 0 or eps <= 0:
        raise ValueError("error-neighborhood half-widths must be positive")


def monogamy_bound_exact(num_modes: int, delta: float, eps: float) -> float:
    """Winning-probability bound for the restricted monogamy game:
    sum_k C(M,k)^2 (2 sqrt(delta*eps))^k / C(N, M) with M = N/2.

    Computed in log space; equals 1 exactly at 2 sqrt(delta*eps) = 1 by the
    Vandermonde identity sum_k C(M,k)^2 = C(2M, M).
    """
    _check_monogamy_args(num_modes, delta, eps)
    x = 2.0 * math.sqrt(delta * eps)
    if x == 1.0:
        return 1.0
    half = num_modes // 2
    ks = np.arange(half + 1)
    log_terms = 2.0 * _log_comb(half, ks)
    if x == 0.0:
        log_terms = log_terms[:1]
    else:
        log_terms = log_terms + ks * math.log(x)
    return float(math.exp(logsumexp(log_terms) - _log_comb(num_modes, half)))


def monogamy_bound_relaxed(num_modes: int, delta: float, eps: float) -> float:
    """Relaxed closed form sqrt(e) * (1/2 + sqrt(delta*eps))^(N/2)."""
    _check_monogamy_args(num_modes, delta, eps)
    half_exponent = (num_modes / 2.0) * math.log(0.5 + math.sqrt(delta * eps))
    return math.exp(0.5 + half_exponent)


def tau(num_modes: int, max_errors: int, alpha: float) -> float:
    """Security exponent N/2 + (N/2 - t) log2(1 + 2 alpha) + t + log2(e)/2."""
    if max_errors > num_modes / 2:
        raise ValueError("need max_errors <= num_modes / 2")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    half = num_modes / 2.0
    return half + (half - max_errors) * math.log2(1.0 + 2.0 * alpha) + max_errors + 0.5 * LOG2_E


def win_prob_bound(msg_len: int, tau_value: float) -> float:
    """Adversarial winning-probability bound min(1, 2^(tau - n))."""
    exponent = tau_value - msg_len
    if exponent >= 0:
        return 1.0
    return 2.0 ** exponent


def asymptotic_margin(alpha: float, squeezing: float):
    """h(beta) - (1/2 - beta)(1 - log2(1 + 2 alpha)); negative iff the
    parameter point is asymptotically securable."""
    alpha = np.asarray(alpha, dtype=float)
    beta = ber_analytic(alpha, squeezing)
    out = binary_entropy(beta) - (0.5 - beta) * (1.0 - np.log2(1.0 + 2.0 * alpha))
    return float(out) if np.ndim(out) == 0 else out


def conjugate_coding_bound(msg_len: int):
    """Cloning-game bound (1/2 + 1/(2 sqrt 2))^n for bitwise conjugate coding."""
    msg_len = np.asarray(msg_len)
    if np.any(msg_len < 1):
        raise ValueError("message length must be at least 1")
    out = np.exp(msg_len * math.log(0.5 + 0.5 / math.sqrt(2.0)))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MonogamyParams:
    """Monogamy-game setup: even mode count and guess half-widths."""

    num_modes: int
    delta: float
    eps: float

    def __post_init__(self):
        _check_monogamy_args(self.num_modes, self.delta, self.eps)

    def exact_bound(self) -> float:
        return monogamy_bound_exact(self.num_modes, self.delta, self.eps)

    def relaxed_bound(self) -> float:
        return monogamy_bound_relaxed(self.num_modes, self.delta, self.eps)


@dataclass(frozen=True)
class SecurityReport:
    """All closed-form figures of merit for one parameter set."""

    beta: float
    eps_df: float
    tau: float
    win_bound: float
    asymptotic_margin: float
    msg_len: int
    num_modes: int
    max_errors: int
    alpha: float
    squeezing: float

    def __post_init__(self):
        for name in ("beta", "eps_df", "win_bound"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability, got {value}")

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "eps_df": self.eps_df,
            "tau": self.tau,
            "win_bound": self.win_bound,
            "asymptotic_margin": self.asymptotic_margin,
            "msg_len": self.msg_len,
            "num_modes": self.num_modes,
            "max_errors": self.max_errors,
            "alpha": self.alpha,
            "squeezing": self.squeezing,
        }


def security_report(params) -> SecurityReport:
    """Evaluate every closed-form quantity for a ProtocolParams value."""
    t_value = tau(params.num_modes, params.max_errors, params.alpha)
    return SecurityReport(
        beta=ber_analytic(params.alpha, params.squeezing),
        eps_df=eps_df(params.num_modes, params.max_errors, params.alpha, params.squeezing),
        tau=t_value,
        win_bound=win_prob_bound(params.msg_len, t_value),
        asymptotic_margin=asymptotic_margin(params.alpha, params.squeezing),
        msg_len=params.msg_len,
        num_modes=params.num_modes,
        max_errors=params.max_errors,
        alpha=params.alpha,
        squeezing=params.squeezing,
    )


def _grid_triple(spec, default):
    if spec is None:
        spec = default
    try:
        start, stop, count = spec
        return float(start), float(stop), int(count)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"grid entry must be a [start, stop, count] triple, got {spec!r}") from exc


def _linspace_spec(spec, default):
    start, stop, count = _grid_triple(spec, default)
    return np.linspace(start, stop, count)


def figure_data(figure_id: str, grid: dict | None = None):
    """Tabulate the data behind one of the parameter-study figures.

    Returns (column_names, rows); grid coordinates come first, the value
    last. ``grid`` entries are [start, stop, count] triples (or a plain list
    for fig2a's transmittance values), with sensible defaults per figure.

    * fig1  - asymptotic-security margin over the (alpha, squeezing) plane.
    * fig2a - noisy BER vs squeezing for several transmittances, excess
              noise 0.001, alpha 0.4.
    * fig2b - noisy BER over the (transmittance, excess-noise) plane at
              squeezing 3.6, alpha 0.4.
    * fig4  - cloning-game winning-probability curves vs message length:
              ideal guessing 2^-n, bitwise conjugate coding, and this
              scheme's bound at squeezing 3.6, alpha 0.4, 3.5% correctable
              errors, with the codeword length set by n = N(1 - h(beta)).
    """
    grid = dict(grid or {})
    if figure_id == "fig1":
        alphas = _linspace_spec(grid.get("alpha"), (0.02, 1.2, 60))
        squeezings = _linspace_spec(grid.get("squeezing"), (2.0, 5.0, 61))
        rows = [
            (float(a), float(r), float(asymptotic_margin(a, r)))
            for a in alphas
            for r in squeezings
        ]
        return ["alpha", "squeezing", "margin"], rows
    if figure_id == "fig2a":
        squeezings = _linspace_spec(grid.get("squeezing"), (2.0, 4.5, 101))
        transmittances = grid.get("transmittance", [1.0, 0.95, 0.9, 0.8])
        alpha = float(grid.get("alpha", 0.4))
        xi = float(grid.get("excess_noise", 0.001))
        rows = [
            (float(r), float(t), noisy_ber(alpha, r, ChannelParams(t, xi)))
            for t in transmittances
            for r in squeezings
        ]
        return ["squeezing", "transmittance", "beta_noisy"], rows
    if figure_id == "fig2b":
        transmittances = _linspace_spec(grid.get("transmittance"), (0.5, 1.0, 51))
        noises = _linspace_spec(grid.get("excess_noise"), (0.0, 0.05, 51))
        alpha = float(grid.get("alpha", 0.4))
        squeezing = float(grid.get("squeezing", 3.6))
        rows = [
            (float(t), float(xi), noisy_ber(alpha, squeezing, ChannelParams(t, xi)))
            for t in transmittances
            for xi in noises
        ]
        return ["transmittance", "excess_noise", "beta_noisy"], rows
    if figure_id == "fig4":
        start, stop, count = _grid_triple(grid.get("msg_len"), (8, 1200, 120))
        msg_lens = np.unique(np.rint(np.geomspace(start, stop, count)).astype(int))
        alpha = float(grid.get("alpha", 0.4))
        squeezing = float(grid.get("squeezing", 3.6))
        error_fraction = float(grid.get("error_fraction", 0.035))
        rate = 1.0 - binary_entropy(ber_analytic(alpha, squeezing))
        rows = []
        for n in msg_lens:
            num_modes = int(round(n / rate))
            num_modes += num_modes % 2  # balanced direction string needs even N
            errors = int(round(error_fraction * num_modes))
            bound = win_prob_bound(int(n), tau(num_modes, errors, alpha))
            rows.append(
                (int(n), 2.0 ** -int(n), conjugate_coding_bound(int(n)), bound)
            )
        return ["msg_len", "ideal", "conjugate_coding", "cv_scheme"], rows
    raise ValueError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
