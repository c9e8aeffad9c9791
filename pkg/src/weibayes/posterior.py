"""Posterior-mean estimation of (x_R, beta) by quadrature over the shape.

For a censored sample the reliable life integrates out of the joint posterior
in closed form, leaving three one-dimensional integrals over the shape
interval:

    I_h = integral over [beta1, beta2] of
          beta**r_h * a**(beta*w) * P**beta * A**(-(r + w - m_h))
          * Gamma(r + w - m_h) / Gamma(w)  d beta,

with A = a**beta + K*S(beta), r_0 = r_1 = r, r_2 = r + 1, m_0 = m_2 = 0 and
m_1 = 1/beta.  The posterior means are then x_R ~ I_1/I_0 and beta ~ I_2/I_0.
The A exponent is negative: that is the only sign under which the h = 0
integral normalizes the joint posterior and the no-data case collapses to the
prior mean and prior midpoint (both covered by tests).

Both w and a are functions of beta (the weight rule is evaluated at the
integration variable), so they are recomputed at every node.  Everything is
evaluated in log space; each integral is a composite Gauss-Legendre sum with
the node maximum factored out per panel, refined by panel doubling until two
successive estimates agree to the requested tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gammaln, logsumexp

from .censoring import CensoredSample
from .errors import ElicitationConstraintError, PriorDominanceWarning, QuadratureConvergenceWarning
from .prior import PriorSpec

__all__ = [
    "QuadratureSettings",
    "PosteriorEstimate",
    "log_integrand",
    "integrate_Ih",
    "estimate",
    "joint_posterior_pdf",
]


@dataclass(frozen=True)
class QuadratureSettings:
    """Panel layout and refinement policy for the shape integrals."""

    panels: int = 16
    nodes_per_panel: int = 10
    rel_tol: float = 1e-8
    max_refinements: int = 8

    def __post_init__(self) -> None:
        if self.panels < 1 or self.nodes_per_panel < 1 or self.max_refinements < 0:
            raise ValueError("panel counts and refinement limit must be positive")
        if not (self.rel_tol > 0.0):
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True)
class PosteriorEstimate:
    """Point estimates plus the log-integral diagnostics that produced them."""

    x_R_tilde: float
    beta_tilde: float
    log_I: tuple[float, float, float]
    node_count: int
    converged: bool


_leggauss_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_nodes(count: int) -> tuple[np.ndarray, np.ndarray]:
    if count not in _leggauss_cache:
        _leggauss_cache[count] = leggauss(count)
    return _leggauss_cache[count]


def _log_integrands(betas: np.ndarray, spec: PriorSpec, sample: CensoredSample) -> np.ndarray:
    """Log integrands of I_0, I_1, I_2 at an array of shape values, shape (3, m)."""
    betas = np.asarray(betas, dtype=float)
    st = sample.stats
    r = st.r
    w = np.asarray(spec.w_rule(betas), dtype=float)
    margin = w - 1.0 / betas
    if np.any(margin <= 0.0):
        bad = float(betas[np.argmin(margin)])
        raise ElicitationConstraintError(
            f"weight rule violates w > 1/beta at beta = {bad:.6g} inside the integrand"
        )
    log_a = math.log(spec.xbar_R) + gammaln(w) - gammaln(w - 1.0 / betas)
    if st.n:
        log_A = np.logaddexp(betas * log_a, math.log(spec.K) + st.log_pow_sum(betas))
    else:
        log_A = betas * log_a
    log_beta = np.log(betas)
    c0 = w + r
    c1 = c0 - 1.0 / betas  # positive because w > 1/beta
    base = r * log_beta + betas * w * log_a + betas * st.log_P - gammaln(w)
    out = np.empty((3, betas.size), dtype=float)
    out[0] = base - c0 * log_A + gammaln(c0)
    out[1] = base - c1 * log_A + gammaln(c1)
    out[2] = out[0] + log_beta
    return out


def log_integrand(beta: float, h: int, spec: PriorSpec, sample: CensoredSample) -> float:
    """Log integrand of I_h at a single shape value."""
    if h not in (0, 1, 2):
        raise ValueError(f"h must be 0, 1 or 2, got {h!r}")
    return float(_log_integrands(np.array([float(beta)]), spec, sample)[h, 0])


def _composite_log_integrals(
    spec: PriorSpec, sample: CensoredSample, panels: int, nodes: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    iv = spec.interval
    edges = np.linspace(iv.beta1, iv.beta2, panels + 1)
    half = 0.5 * (iv.beta2 - iv.beta1) / panels
    centers = 0.5 * (edges[:-1] + edges[1:])
    betas = (centers[:, None] + half * nodes[None, :]).ravel()
    logf = _log_integrands(betas, spec, sample).reshape(3, panels, nodes.size)
    # per-panel log-sum-exp (max factored out), then combine panels the same way
    per_panel = logsumexp(logf + np.log(weights * half)[None, None, :], axis=2)
    return logsumexp(per_panel, axis=1)


def _integrate_all(
    spec: PriorSpec, sample: CensoredSample, settings: QuadratureSettings
) -> tuple[np.ndarray, int, bool]:
    nodes, weights = _gauss_nodes(settings.nodes_per_panel)
    panels = settings.panels
    current = _composite_log_integrals(spec, sample, panels, nodes, weights)
    node_count = panels * settings.nodes_per_panel
    converged = False
    for _ in range(settings.max_refinements):
        panels *= 2
        refined = _composite_log_integrals(spec, sample, panels, nodes, weights)
        node_count += panels * settings.nodes_per_panel
        # log-value differences are relative differences of the integrals
        if float(np.max(np.abs(refined - current))) < settings.rel_tol:
            current = refined
            converged = True
            break
        current = refined
    return current, node_count, converged


def _warn_if_prior_dominant(spec: PriorSpec, sample: CensoredSample) -> None:
    r = sample.r
    if r == 0:
        return
    iv = spec.interval
    grid = np.linspace(iv.beta1, iv.beta2, 33)
    if iv.beta1 < 1.0 < iv.beta2:
        grid = np.append(grid, 1.0)
    w_max = float(np.max(spec.w_rule(grid)))
    if w_max >= r:
        warnings.warn(
            f"prior weight w reaches {w_max:.3g} >= r = {r} failures; "
            "the prior may dominate what the sample can contribute",
            PriorDominanceWarning,
            stacklevel=3,
        )


def integrate_Ih(
    h: int, spec: PriorSpec, sample: CensoredSample, settings: QuadratureSettings | None = None
) -> float:
    """Log of I_h over the shape interval; warns if refinement did not converge."""
    if h not in (0, 1, 2):
        raise ValueError(f"h must be 0, 1 or 2, got {h!r}")
    settings = settings or QuadratureSettings()
    log_I, _, converged = _integrate_all(spec, sample, settings)
    if not converged:
        warnings.warn(
            f"integral I_{h} did not reach rel_tol = {settings.rel_tol:g} within "
            f"{settings.max_refinements} refinements",
            QuadratureConvergenceWarning,
            stacklevel=2,
        )
    return float(log_I[h])


def estimate(
    spec: PriorSpec, sample: CensoredSample, settings: QuadratureSettings | None = None
) -> PosteriorEstimate:
    """Posterior means of the reliable life and the shape, with diagnostics."""
    settings = settings or QuadratureSettings()
    _warn_if_prior_dominant(spec, sample)
    log_I, node_count, converged = _integrate_all(spec, sample, settings)
    return PosteriorEstimate(
        x_R_tilde=float(np.exp(log_I[1] - log_I[0])),
        beta_tilde=float(np.exp(log_I[2] - log_I[0])),
        log_I=(float(log_I[0]), float(log_I[1]), float(log_I[2])),
        node_count=node_count,
        converged=converged,
    )


def joint_posterior_pdf(
    x_R, beta, spec: PriorSpec, sample: CensoredSample, settings: QuadratureSettings | None = None
):
    """Joint posterior density at (x_R, beta); zero outside the shape interval.

    Accepts scalars or broadcastable arrays; the normalizing integral is
    computed once per call.
    """
    settings = settings or QuadratureSettings()
    scalar = np.ndim(x_R) == 0 and np.ndim(beta) == 0
    x = np.asarray(x_R, dtype=float)
    b = np.asarray(beta, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("x_R must be positive")
    x, b = np.broadcast_arrays(x, b)
    iv = spec.interval
    inside = (b >= iv.beta1) & (b <= iv.beta2)
    out = np.zeros(b.shape, dtype=float)
    if np.any(inside):
        bi = b[inside]
        xi = x[inside]
        st = sample.stats
        r = st.r
        w = np.asarray(spec.w_rule(bi), dtype=float)
        log_a = math.log(spec.xbar_R) + gammaln(w) - gammaln(w - 1.0 / bi)
        if st.n:
            log_A = np.logaddexp(bi * log_a, math.log(spec.K) + st.log_pow_sum(bi))
        else:
            log_A = bi * log_a
        log_x = np.log(xi)
        with np.errstate(over="ignore"):
            log_num = (
                (r + 1.0) * np.log(bi)
                + bi * w * log_a
                - ((r + w) * bi + 1.0) * log_x
                + bi * st.log_P
                - np.exp(log_A - bi * log_x)
                - gammaln(w)
            )
        log_I0, _, converged = _integrate_all(spec, sample, settings)
        if not converged:
            warnings.warn(
                "posterior normalization did not converge to the requested tolerance",
                QuadratureConvergenceWarning,
                stacklevel=2,
            )
        out[inside] = np.exp(log_num - log_I0[0])
    return float(out[()]) if scalar else out
