"""Extremisation of frame functionals over orthonormal frames.

The optimizer is projected gradient descent on the Stiefel manifold with a QR retraction,
run from many random starts at once, working on two-forms. Reported values are re-evaluated
by full contraction of the tensor against the frame. The brute-force sampler spells each
functional out from sampled curvature components independently and serves as the oracle.

Restart seeds are ``numpy.random.SeedSequence(seed).spawn(restarts)``: restart ``i`` always
starts from the frame drawn with child ``i``, whatever the batching.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, InvalidDimension, InvalidInput
from .frames import Frame, random_frame_array
from .tensor import CurvatureTensor, _restrict, project_array

#: Step halvings before a restart is declared stalled.
MAX_HALVINGS = 30
#: Accepted steps double, up to this multiple of the initial step.
MAX_STEP_GROWTH = 2.0**8


class FunctionalKind(enum.Enum):
    A_SUM = "a-sum"
    B_SUM = "b-sum"
    CONDITION = "condition"
    ISOTROPIC = "isotropic"
    SECTIONAL = "sectional"
    FLAG = "flag"


def _coefficients(k: int, terms) -> np.ndarray:
    c = np.zeros((k, k, k, k))
    for coef, (a, b, cc, d) in terms:
        c[a, b, cc, d] += coef
    # Only the part in curvature space pairs with a restricted tensor; projecting makes the
    # gradient a single contraction.
    return project_array(c)


def _K(a, b):
    return (a, b, a, b)


@dataclass(frozen=True)
class FrameFunctional:
    """A scalar function of (tensor, frame), linear in the tensor.

    ``CONDITION`` is ``a_sum - gamma * b_sum``. ``FLAG`` acts on a triple ``(v, w1, w2)``
    plus an angle ``theta`` and equals ``K(v, w1) - K(v, cos(theta) w1 + sin(theta) w2) / 4``.
    """

    kind: FunctionalKind
    gamma: float = 0.5

    @classmethod
    def a_sum(cls):
        return cls(FunctionalKind.A_SUM)

    @classmethod
    def b_sum(cls):
        return cls(FunctionalKind.B_SUM)

    @classmethod
    def condition(cls, gamma: float = 0.5):
        return cls(FunctionalKind.CONDITION, float(gamma))

    @classmethod
    def isotropic(cls):
        return cls(FunctionalKind.ISOTROPIC)

    @classmethod
    def sectional(cls):
        return cls(FunctionalKind.SECTIONAL)

    @classmethod
    def flag(cls):
        return cls(FunctionalKind.FLAG)

    @property
    def frame_size(self) -> int:
        return {FunctionalKind.SECTIONAL: 2, FunctionalKind.FLAG: 3}.get(self.kind, 4)

    @property
    def uses_angle(self) -> bool:
        return self.kind is FunctionalKind.FLAG

    @property
    def label(self) -> str:
        if self.kind is FunctionalKind.CONDITION:
            return f"condition(gamma={self.gamma!r})"
        return self.kind.value

    @cached_property
    def _parts(self) -> np.ndarray:
        """Stacked coefficient tensors; the functional is ``sum_m w_m(theta) <C_m, r>``."""
        a_terms = [(1.0, _K(0, 2)), (1.0, _K(0, 3)), (1.0, _K(1, 2)), (1.0, _K(1, 3))]
        b_terms = [(1.0, _K(0, 1)), (1.0, _K(2, 3))]
        kind = self.kind
        if kind is FunctionalKind.A_SUM:
            parts = [a_terms]
        elif kind is FunctionalKind.B_SUM:
            parts = [b_terms]
        elif kind is FunctionalKind.CONDITION:
            parts = [a_terms + [(-self.gamma * c, t) for c, t in b_terms]]
        elif kind is FunctionalKind.ISOTROPIC:
            parts = [a_terms + [(-2.0, (0, 1, 2, 3))]]
        elif kind is FunctionalKind.SECTIONAL:
            parts = [[(1.0, _K(0, 1))]]
        else:
            parts = [[(1.0, _K(0, 1))], [(1.0, _K(0, 1))], [(1.0, (0, 1, 0, 2))], [(1.0, _K(0, 2))]]
        k = self.frame_size
        out = np.stack([_coefficients(k, p) for p in parts])
        out.setflags(write=False)
        return out

    def _weights(self, theta: np.ndarray):
        """Weights and their theta-derivatives, each of shape ``theta.shape + (m,)``."""
        if not self.uses_angle:
            one = np.ones(theta.shape + (1,))
            return one, np.zeros_like(one)
        c, s = np.cos(theta), np.sin(theta)
        w = np.stack([np.ones_like(c), -0.25 * c * c, -0.5 * s * c, -0.25 * s * s], axis=-1)
        dw = np.stack([np.zeros_like(c), 0.5 * s * c, -0.5 * (c * c - s * s), -0.5 * s * c], axis=-1)
        return w, dw

    def value_on(self, R: CurvatureTensor, vectors, theta: float = 0.0) -> float:
        """Value of the polynomial extension on arbitrary ``(k, n)`` vectors, by full contraction."""
        rows = np.asarray(vectors, dtype=float)
        if rows.shape != (self.frame_size, R.dim):
            raise DimensionMismatch(f"{self.label} needs ({self.frame_size}, {R.dim}) vectors, got {rows.shape}")
        r = _restrict(R.components, rows)
        w, _ = self._weights(np.array(float(theta)))
        return float(w @ np.einsum("mabcd,abcd->m", self._parts, r))

    def evaluate(self, R: CurvatureTensor, frame: Frame, theta: float = 0.0) -> float:
        if frame.size != self.frame_size:
            raise InvalidInput(f"{self.label} needs a {self.frame_size}-frame, got {frame.size}")
        if frame.dim != R.dim:
            raise DimensionMismatch(f"frame lives in R^{frame.dim}, tensor in R^{R.dim}")
        return self.value_on(R, frame.vectors, theta)

    def gradient(self, R: CurvatureTensor, vectors, theta: float = 0.0):
        """Euclidean gradient of the polynomial extension with respect to the ``(k, n)`` vectors.

        Returns ``(value, d/dvectors, d/dtheta)``; the vectors need not be orthonormal.
        """
        E = np.asarray(vectors, dtype=float)[None]
        plan = _Plan(self, R)
        f, g, gt = plan.value_and_grad(E, np.array([float(theta)]), 1.0)
        return float(f[0]), g[0], float(gt[0])


class _Plan:
    """Two-form evaluation of one functional for one tensor.

    With ``w_p = e_a ^ e_b`` over frame pairs ``p = (a < b)`` and ``M`` the curvature operator,
    ``R(e_a, e_b, e_c, e_d) = w_p . M w_q``. All batched contractions go through :func:`_dot`,
    so each restart's arithmetic is identical whatever the batch composition.
    """

    def __init__(self, functional: FrameFunctional, R: CurvatureTensor):
        k, n = functional.frame_size, R.dim
        self.functional = functional
        self.pairs = list(combinations(range(k), 2))
        self.pa = np.array([a for a, _ in self.pairs])
        self.pb = np.array([b for _, b in self.pairs])
        self.iu, self.ju = np.triu_indices(n, k=1)
        self.op = R.curvature_operator()
        parts = functional._parts
        pa, pb = self.pa, self.pb
        # 4 * C over ordered pairs reproduces the sum over all index quadruples
        cp = 4.0 * parts[:, pa[:, None], pb[:, None], pa[None, :], pb[None, :]]
        self.cp_flat = cp.reshape(cp.shape[0], -1)
        self.cp_last = np.ascontiguousarray(np.moveaxis(cp, 0, -1))
        self.n, self.k = n, k

    def value_and_grad(self, E, theta, sign):
        z = E.shape[0]
        iu, ju = self.iu, self.ju
        A, B = E[:, self.pa], E[:, self.pb]
        W = A[:, :, iu] * B[:, :, ju] - A[:, :, ju] * B[:, :, iu]
        U = _dot(W[:, :, None, :], self.op[None, None])              # M w_p (op is symmetric)
        rp = _dot(U[:, :, None, :], W[:, None, :, :])                 # R(e_a, e_b, e_c, e_d)
        pv = _dot(rp.reshape(z, 1, -1), self.cp_flat[None])           # <C_m, r>
        w, dw = self.functional._weights(theta)
        value = sign * _dot(w, pv)
        dtheta = sign * _dot(dw, pv)
        ceff = _dot(w[:, None, None, :], self.cp_last[None])
        dW = (2.0 * sign) * _dot(ceff[:, :, None, :], np.swapaxes(U, 1, 2)[:, None])
        # F depends on w_p through e_a^T H_p e_b with H_p the antisymmetric matrix of dF/dw_p
        H = np.zeros((z, len(self.pairs), self.n, self.n))
        H[:, :, iu, ju] = dW
        H[:, :, ju, iu] = -dW
        ga = _dot(H, B[:, :, None, :])
        gb = _dot(H, A[:, :, None, :])
        grad = np.zeros_like(E)
        for p, (a, b) in enumerate(self.pairs):
            grad[:, a] += ga[:, p]
            grad[:, b] -= gb[:, p]
        return value, grad, dtheta


def _dot(a, b):
    """Broadcast product summed over the last axis, accumulated left to right.

    numpy reductions switch between pairwise and sequential summation depending on array
    shape, so a restart's rounding would depend on its batch. Elementwise accumulation over
    the (short) contracted axis does not.
    """
    acc = a[..., 0] * b[..., 0]
    for i in range(1, max(a.shape[-1], b.shape[-1])):
        acc = acc + a[..., i] * b[..., i]
    return acc


def _tangent(G, E):
    """Project row-gradients onto the tangent space of the Stiefel manifold at ``E``."""
    s = _dot(G[:, :, None, :], E[:, None, :, :])
    s = 0.5 * (s + np.swapaxes(s, 1, 2))
    return G - _dot(s[:, :, None, :], np.swapaxes(E, 1, 2)[:, None, :, :])


def _retract(E):
    q, r = np.linalg.qr(np.swapaxes(E, 1, 2))
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    return np.swapaxes(q * signs[:, None, :], 1, 2)


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 64
    max_iterations: int = 2000
    step_size: float = 0.05
    gradient_tolerance: float = 1e-9
    seed: int = 0
    #: Restarts per vectorised batch; ``None`` runs them all together. Results do not depend on it.
    batch_size: int | None = None

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise InvalidInput("restarts and max_iterations must be positive")
        if not (self.step_size > 0 and self.gradient_tolerance > 0):
            raise InvalidInput("step_size and gradient_tolerance must be positive")
        if self.seed < 0:
            raise InvalidInput("seed must be non-negative")
        if self.batch_size is not None and self.batch_size < 1:
            raise InvalidInput("batch_size must be positive")

    def as_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "max_iterations": self.max_iterations,
            "step_size": self.step_size,
            "gradient_tolerance": self.gradient_tolerance,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class MinimizationResult:
    """Best restart of a frame search. ``value`` is the extremum of the functional itself
    (a maximum when maximising), re-evaluated at ``frame``."""

    value: float
    frame: Frame
    iterations: int
    restarts_used: int
    converged: bool
    gradient_norm: float
    theta: float | None = None
    restart_index: int = 0
    maximize: bool = False
    restart_values: tuple = field(default=(), repr=False)

    @property
    def second_plane(self) -> tuple[np.ndarray, np.ndarray]:
        """For flag searches, the orthonormal basis ``(v, cos(theta) w1 + sin(theta) w2)``."""
        if self.theta is None:
            raise AttributeError("only flag searches have a second plane")
        v, w1, w2 = self.frame.vectors
        return v, np.cos(self.theta) * w1 + np.sin(self.theta) * w2


def _initial_points(functional: FrameFunctional, n: int, seeds):
    k = functional.frame_size
    frames, angles = [], []
    for child in seeds:
        rng = np.random.default_rng(child)
        frames.append(random_frame_array(rng, n, k))
        angles.append(rng.uniform(0.0, np.pi) if functional.uses_angle else 0.0)
    return np.stack(frames), np.array(angles)


def _descend_batch(plan: _Plan, E, theta, cfg: SearchConfig, sign, scale):
    """Run independent descents for every row of the batch; returns per-restart state."""
    batch = E.shape[0]
    t0 = cfg.step_size / scale
    tmax = t0 * MAX_STEP_GROWTH
    gtol = cfg.gradient_tolerance * scale
    angle = plan.functional.uses_angle

    f, G, gth = plan.value_and_grad(E, theta, sign)
    G = _tangent(G, E)
    if not angle:
        gth = np.zeros(batch)
    gnorm = np.sqrt(_dot(G.reshape(batch, -1), G.reshape(batch, -1)) + gth * gth)

    step = np.full(batch, t0)
    halvings = np.zeros(batch, dtype=int)
    iterations = np.zeros(batch, dtype=int)
    active = gnorm > gtol

    for _ in range(cfg.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ts = step[idx]
        E_try = _retract(E[idx] - ts[:, None, None] * G[idx])
        th_try = theta[idx] - ts * gth[idx]
        f_try, G_try, gth_try = plan.value_and_grad(E_try, th_try, sign)
        iterations[idx] += 1

        ok = f_try < f[idx]
        acc, rej = idx[ok], idx[~ok]
        if acc.size:
            G_acc = _tangent(G_try[ok], E_try[ok])
            gt_acc = gth_try[ok] if angle else np.zeros(acc.size)
            E[acc], theta[acc], f[acc] = E_try[ok], th_try[ok], f_try[ok]
            G[acc], gth[acc] = G_acc, gt_acc
            gnorm[acc] = np.sqrt(_dot(G_acc.reshape(acc.size, -1), G_acc.reshape(acc.size, -1)) + gt_acc * gt_acc)
            step[acc] = np.minimum(2.0 * step[acc], tmax)
            halvings[acc] = 0
        if rej.size:
            step[rej] *= 0.5
            halvings[rej] += 1
        active[idx] = (gnorm[idx] > gtol) & (halvings[idx] < MAX_HALVINGS)

    converged = (gnorm <= gtol) | ((halvings >= MAX_HALVINGS) & (gnorm <= np.sqrt(cfg.gradient_tolerance) * scale))
    return E, theta, f, gnorm, iterations, converged


def _search(R: CurvatureTensor, functional: FrameFunctional, cfg: SearchConfig | None, maximize: bool):
    cfg = cfg or SearchConfig()
    n, k = R.dim, functional.frame_size
    if n < k:
        raise InvalidDimension(f"{functional.label} needs dimension >= {k}, got {n}")
    sign = -1.0 if maximize else 1.0
    scale = R.max_abs() or 1.0
    plan = _Plan(functional, R)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    size = cfg.batch_size or cfg.restarts

    chunks = []
    for lo in range(0, cfg.restarts, size):
        E, theta = _initial_points(functional, n, seeds[lo:lo + size])
        chunks.append(_descend_batch(plan, E, theta, cfg, sign, scale))
    E, theta, f, gnorm, iterations, converged = (np.concatenate(parts) for parts in zip(*chunks))

    # argmin returns the first occurrence, so ties go to the lower restart index
    best = int(np.argmin(f))
    frame = Frame(E[best])
    th = float(theta[best]) if functional.uses_angle else None
    value = functional.evaluate(R, frame, th or 0.0)
    return MinimizationResult(
        value=value,
        frame=frame,
        iterations=int(iterations[best]),
        restarts_used=cfg.restarts,
        converged=bool(converged[best]),
        gradient_norm=float(gnorm[best]),
        theta=th,
        restart_index=best,
        maximize=maximize,
        restart_values=tuple(float(sign * v) for v in f),
    )


def minimize_over_four_frames(R: CurvatureTensor, functional: FrameFunctional,
                              cfg: SearchConfig | None = None, *, maximize: bool = False) -> MinimizationResult:
    """Global minimum (or maximum) of a four-frame functional, best of ``cfg.restarts`` descents."""
    if functional.frame_size != 4:
        raise InvalidInput(f"{functional.label} is not a four-frame functional")
    if R.dim < 4:
        raise InvalidDimension(f"four-frames need dimension >= 4, got {R.dim}")
    return _search(R, functional, cfg, maximize)


def minimize_sectional(R: CurvatureTensor, maximize: bool = False, cfg: SearchConfig | None = None) -> MinimizationResult:
    if R.dim < 2:
        raise InvalidDimension(f"two-planes need dimension >= 2, got {R.dim}")
    return _search(R, FrameFunctional.sectional(), cfg, maximize)


def min_flag_pinching(R: CurvatureTensor, cfg: SearchConfig | None = None) -> MinimizationResult:
    """Minimum of ``K(s1) - K(s2)/4`` over pairs of two-planes sharing a line (equal planes included)."""
    if R.dim < 3:
        raise InvalidDimension(f"flags need dimension >= 3, got {R.dim}")
    return _search(R, FrameFunctional.flag(), cfg, False)


def extremize(R: CurvatureTensor, functional: FrameFunctional, cfg: SearchConfig | None = None,
              *, maximize: bool = False) -> MinimizationResult:
    """Dispatch on frame size."""
    if functional.kind is FunctionalKind.SECTIONAL:
        return minimize_sectional(R, maximize, cfg)
    if functional.kind is FunctionalKind.FLAG:
        if maximize:
            return _search(R, functional, cfg, True)
        return min_flag_pinching(R, cfg)
    return minimize_over_four_frames(R, functional, cfg, maximize=maximize)


# --- brute-force oracle -------------------------------------------------------------

def _sampled_values(functional: FrameFunctional, op: np.ndarray, E: np.ndarray, theta: np.ndarray):
    """Functional values on sampled frames via two-forms: ``R(a,b,c,d) = w(a,b)^T op w(c,d)``."""
    n = E.shape[-1]
    iu, ju = np.triu_indices(n, k=1)
    k = E.shape[1]
    pairs = list(combinations(range(k), 2))
    W = np.stack([E[:, a, iu] * E[:, b, ju] - E[:, a, ju] * E[:, b, iu] for a, b in pairs], axis=1)
    rp = np.einsum("zpi,ij,zqj->zpq", W, op, W, optimize=True)
    pos = {p: m for m, p in enumerate(pairs)}

    def R(a, b, c, d):
        return rp[:, pos[(a, b)], pos[(c, d)]]

    kind = functional.kind
    if kind is FunctionalKind.SECTIONAL:
        return R(0, 1, 0, 1)
    if kind is FunctionalKind.FLAG:
        cs, sn = np.cos(theta), np.sin(theta)
        k2 = cs * cs * R(0, 1, 0, 1) + 2.0 * cs * sn * R(0, 1, 0, 2) + sn * sn * R(0, 2, 0, 2)
        return R(0, 1, 0, 1) - 0.25 * k2
    a = R(0, 2, 0, 2) + R(0, 3, 0, 3) + R(1, 2, 1, 2) + R(1, 3, 1, 3)
    b = R(0, 1, 0, 1) + R(2, 3, 2, 3)
    if kind is FunctionalKind.A_SUM:
        return a
    if kind is FunctionalKind.B_SUM:
        return b
    if kind is FunctionalKind.CONDITION:
        return a - functional.gamma * b
    return a - 2.0 * R(0, 1, 2, 3)


def brute_force_extremum(R: CurvatureTensor, functional: FrameFunctional, samples: int, seed: int,
                         minimize: bool = True, *, chunk: int = 1 << 15) -> float:
    """Best value of ``functional`` over ``samples`` Haar-random frames (deterministic in ``seed``).

    Any local optimizer must land at or below this value (for minimisation), up to round-off.
    """
    if samples < 1:
        raise InvalidInput("samples must be positive")
    k = functional.frame_size
    if R.dim < k:
        raise InvalidDimension(f"{functional.label} needs dimension >= {k}, got {R.dim}")
    rng = np.random.default_rng(seed)
    op = R.curvature_operator()
    best = np.inf if minimize else -np.inf
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        E = random_frame_array(rng, R.dim, k, batch=m)
        theta = rng.uniform(0.0, np.pi, size=m) if functional.uses_angle else None
        vals = _sampled_values(functional, op, E, theta)
        best = min(best, float(vals.min())) if minimize else max(best, float(vals.max()))
        done += m
    return best
