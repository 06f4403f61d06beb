"""Independent verification of the closed-form squared H2 norm.

Assembles the swing dynamics in LTI form, solves the (singular)
observability Lyapunov equation with an explicit nullspace correction,
and estimates the steady-state output variance by Euler-Maruyama
simulation under unit-intensity white noise at every node. None of this
shares code with the closed-form route in :mod:`gridtopo.costs`, so
agreement between the two is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .costs import CostMatrices, topology_cost
from .errors import NumericalError, ValidationError
from .graphs import LaplacianView, build_laplacian
from .network import Network, Topology

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Swing dynamics as (A, B, C): state is phases stacked over frequencies.

    ``ctc`` is the exact block-diagonal of (L_w, diag(s)); ``c`` is its
    matrix square root, kept for completeness.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    ctc: np.ndarray
    inertia: np.ndarray
    damping: float

    @property
    def n_nodes(self) -> int:
        return self.b.shape[1]


@dataclass(frozen=True, eq=False)
class Gramian:
    """Observability Gramian with the rigid-phase mode pinned to zero."""

    q: np.ndarray
    residual: float
    rigid_mode_norm: float

    @property
    def n_nodes(self) -> int:
        return self.q.shape[0] // 2

    @property
    def q1(self) -> np.ndarray:
        n = self.n_nodes
        return self.q[:n, :n]

    @property
    def q0(self) -> np.ndarray:
        n = self.n_nodes
        return self.q[:n, n:]

    @property
    def q2(self) -> np.ndarray:
        n = self.n_nodes
        return self.q[n:, n:]


def state_space_from_matrices(
    inertia: Sequence[float], damping: float, lb: np.ndarray, lw: np.ndarray, s: Sequence[float]
) -> StateSpace:
    """Low-level assembly from explicit matrices (any node count >= 1)."""
    m = np.asarray(inertia, dtype=float)
    n = m.shape[0]
    lb = np.asarray(lb, dtype=float)
    lw = np.asarray(lw, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(m <= 0) or damping <= 0:
        raise ValidationError("inertias and damping must be positive")
    a = np.zeros((2 * n, 2 * n))
    a[:n, n:] = np.eye(n)
    a[n:, :n] = -lb / m[:, None]
    a[n:, n:] = -damping * np.diag(1.0 / m)
    b = np.vstack([np.zeros((n, n)), np.diag(1.0 / m)])
    c = np.zeros((2 * n, 2 * n))
    c[:n, :n] = _symmetric_sqrt(lw)
    c[n:, n:] = np.diag(np.sqrt(s))
    ctc = np.zeros((2 * n, 2 * n))
    ctc[:n, :n] = lw
    ctc[n:, n:] = np.diag(s)
    return StateSpace(a=a, b=b, c=c, ctc=ctc, inertia=m, damping=float(damping))


def assemble_state_space(
    network: Network, topology: Topology | Sequence[int], cost: CostMatrices
) -> StateSpace:
    if cost.n != network.n:
        raise ValidationError(f"cost is for {cost.n} nodes, network has {network.n}")
    lap = build_laplacian(network, topology)
    if not lap.connected:
        raise ValidationError("state-space assembly needs a connected topology")
    return state_space_from_matrices(
        network.inertia, network.damping, lap.matrix, cost.lw, cost.s
    )


def _symmetric_sqrt(mat: np.ndarray) -> np.ndarray:
    """Spectral square root; eigenvalue noise below zero is clamped."""
    vals, vecs = np.linalg.eigh(mat)
    vals = np.where(vals < 0, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.T


def solve_observability_lyapunov(ss: StateSpace, tol: float = RESIDUAL_TOL) -> Gramian:
    """Solve A'Q + QA = -C'C and pin the rigid-phase mode.

    The Lyapunov operator is singular: the uniform phase shift is marginally
    stable and unobservable, so symmetric solutions form a one-parameter
    family Q* + alpha w w' with w = [d 1; M 1] (the left null vector of A').
    We take the least-squares solution of the vectorized system and subtract
    the unique multiple of w w' that zeroes the rigid-mode energy, which
    recovers the solution with Q [1; 0] = 0.
    """
    a = ss.a
    n2 = a.shape[0]
    n = ss.n_nodes
    eye = np.eye(n2)
    op = np.kron(eye, a.T) + np.kron(a.T, eye)
    rhs = -ss.ctc.flatten(order="F")
    vec, *_ = np.linalg.lstsq(op, rhs, rcond=None)
    q = vec.reshape((n2, n2), order="F")
    q = 0.5 * (q + q.T)
    u = np.concatenate([np.ones(n), np.zeros(n)])
    w = np.concatenate([ss.damping * np.ones(n), ss.inertia])
    q = q - ((u @ q @ u) / (w @ u) ** 2) * np.outer(w, w)
    residual = float(np.abs(a.T @ q + q @ a + ss.ctc).max())
    rigid = float(np.abs(q @ u).max())
    if residual > tol or rigid > tol:
        raise NumericalError(
            f"Lyapunov solve failed: residual {residual:.3e}, rigid-mode norm {rigid:.3e}"
        )
    return Gramian(q=q, residual=residual, rigid_mode_norm=rigid)


def h2_squared_via_gramian(ss: StateSpace, gram: Gramian) -> float:
    """Tr(B'QB), cross-checked against the inertia-scaled lower block."""
    t_input = float(np.trace(ss.b.T @ gram.q @ ss.b))
    t_block = float(np.sum(np.diag(gram.q2) / ss.inertia**2))
    scale = max(abs(t_input), abs(t_block), 1.0)
    if abs(t_input - t_block) > 1e-9 * scale:
        raise NumericalError(
            f"Gramian block identity violated: {t_input!r} vs {t_block!r}"
        )
    return t_input


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the two trace identities linking Gramian and closed form."""

    coupling_trace: float
    topology_trace: float
    h2_gramian: float
    h2_closed_form: float
    coupling_residual: float
    h2_residual: float
    tolerance: float = 1e-7

    @property
    def passed(self) -> bool:
        return self.coupling_residual <= self.tolerance and self.h2_residual <= self.tolerance


def verify_gramian_identities(
    ss: StateSpace, gram: Gramian, cost: CostMatrices, lap: LaplacianView
) -> IdentityReport:
    """Check 2 Tr(Q0 M^-1) = Tr(L_w L_b+) and the closed-form H2 identity."""
    coupling = float(2.0 * np.trace(gram.q0 @ np.diag(1.0 / ss.inertia)))
    topo = topology_cost(cost, lap)
    h2_gram = float(np.sum(np.diag(gram.q2) / ss.inertia**2))
    s_term = float(np.sum(np.diag(ss.ctc)[ss.n_nodes :] / ss.inertia))
    h2_closed = (topo + s_term) / (2.0 * ss.damping)
    return IdentityReport(
        coupling_trace=coupling,
        topology_trace=topo,
        h2_gramian=h2_gram,
        h2_closed_form=h2_closed,
        coupling_residual=_rel(coupling, topo),
        h2_residual=_rel(h2_gram, h2_closed),
    )


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1.0)


@dataclass(frozen=True)
class AmbientEstimate:
    """Steady-state output variance estimate with a batch-means error bar."""

    value: float
    stderr: float
    horizon: float
    dt: float
    n_blocks: int

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.stderr


def simulate_ambient(
    ss: StateSpace,
    horizon: float,
    dt: float,
    seed: int,
    burn_in: float | None = None,
    recenter_every: int = 1000,
    n_blocks: int = 100,
) -> AmbientEstimate:
    """Euler-Maruyama estimate of the steady-state E[y'y].

    Integrates dx = Ax dt + B dW with independent unit-intensity white noise
    per node, discards ``burn_in`` time units (default horizon/10), then
    time-averages the output quadratic form. The phase mean is subtracted
    every ``recenter_every`` steps to stop the marginal rigid mode from
    drifting; the output is invariant to that shift. Deterministic per seed.
    """
    n = ss.n_nodes
    lb = -(np.asarray(ss.inertia)[:, None] * ss.a[n:, :n])
    lam_max = float(np.linalg.eigvalsh(0.5 * (lb + lb.T)).max())
    dt_limit = 0.1 * float(np.min(ss.inertia)) / max(ss.damping, lam_max)
    if dt > dt_limit:
        raise ValidationError(f"dt {dt} too large for stability; need dt <= {dt_limit:.3e}")
    if horizon <= 0 or dt <= 0:
        raise ValidationError("horizon and dt must be positive")
    if burn_in is None:
        burn_in = horizon / 10.0
    n_steps = int(round(horizon / dt))
    burn_steps = int(round(burn_in / dt))
    meas_steps = n_steps - burn_steps
    if meas_steps < n_blocks:
        raise ValidationError("horizon too short for the requested burn-in and block count")
    block_len = meas_steps // n_blocks

    stepper = _get_stepper()
    a_d = np.eye(2 * n) + dt * ss.a
    g_diag = np.sqrt(dt) / np.asarray(ss.inertia)
    ctc = np.asarray(ss.ctc)
    rng = np.random.default_rng(seed)
    x = np.zeros(2 * n)

    def run(length: int, start: int) -> float:
        nonlocal x
        noise = rng.standard_normal((length, n))
        x, total, ok = stepper(a_d, g_diag, ctc, x, noise, start, recenter_every, n)
        if not ok:
            raise NumericalError("simulation diverged (state overflow); reduce dt")
        return total

    step = 0
    chunk = 200_000
    while step < burn_steps:
        m = min(chunk, burn_steps - step)
        run(m, step)
        step += m
    block_means = np.empty(n_blocks)
    for bi in range(n_blocks):
        block_means[bi] = run(block_len, step) / block_len
        step += block_len

    value = float(block_means.mean())
    stderr = float(block_means.std(ddof=1) / np.sqrt(n_blocks))
    return AmbientEstimate(
        value=value, stderr=stderr, horizon=horizon, dt=dt, n_blocks=n_blocks
    )


_STEPPER = None


def _get_stepper():
    """Compile the inner integration loop once per process."""
    global _STEPPER
    if _STEPPER is None:
        from numba import njit

        @njit(cache=True)
        def stepper(a_d, g_diag, ctc, x, noise, start_step, recenter_every, n_nodes):
            total = 0.0
            x = x.copy()
            for k in range(noise.shape[0]):
                x = a_d @ x
                for i in range(n_nodes):
                    x[n_nodes + i] += g_diag[i] * noise[k, i]
                if (start_step + k + 1) % recenter_every == 0:
                    mean_theta = 0.0
                    for i in range(n_nodes):
                        mean_theta += x[i]
                    mean_theta /= n_nodes
                    for i in range(n_nodes):
                        x[i] -= mean_theta
                    bound = 0.0
                    for i in range(2 * n_nodes):
                        bound = max(bound, abs(x[i]))
                    if not np.isfinite(bound) or bound > 1e9:
                        return x, total, False
                total += x @ (ctc @ x)
            return x, total, True

        _STEPPER = stepper
    return _STEPPER
