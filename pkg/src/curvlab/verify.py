"""Curvature-condition checkers, exact identities, and implication harnesses."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .errors import InvalidDimension, InvalidInput
from .frames import Frame, random_frame_array, rotate_frame_double_prime, rotate_frame_prime
from .models import constant_curvature, fubini_study
from .search import FrameFunctional, SearchConfig, extremize
from .tensor import (
    CurvatureTensor,
    a_sum,
    b_sum,
    curvature_scalars,
    isotropic_quantity,
    random_curvature_tensor,
)

#: Relative margin separating strict from weak verdicts: ``1e-6 * (1 + |R|_F)``.
STRICTNESS_RTOL = 1e-6
#: Identity residual bounds, per unit Frobenius norm.
IDENTITY_BOUND = 1e-9
FRAME_IDENTITY_BOUND = 1e-10


# --- pinching constants -------------------------------------------------------------

def gamma_n(n: int, exact: bool = False):
    """The upper pinching constant: ``n(n-1)/(n^2-n-6)``, except ``20/17`` when ``n = 5``."""
    if n < 4:
        raise InvalidDimension(f"gamma_n needs n >= 4, got {n}")
    value = Fraction(20, 17) if n == 5 else Fraction(n * (n - 1), n * n - n - 6)
    return value if exact else float(value)


def eta_n(n: int, exact: bool = False):
    """The lower pinching constant ``n(n-1)/(n^2-n+12)``."""
    if n < 4:
        raise InvalidDimension(f"eta_n needs n >= 4, got {n}")
    value = Fraction(n * (n - 1), n * n - n + 12)
    return value if exact else float(value)


# --- condition checks ---------------------------------------------------------------

class Condition(enum.Enum):
    MAIN_CONDITION = "main"
    MAIN_CONDITION_WEAK = "main-weak"
    PIC = "pic"
    NONNEG_ISOTROPIC = "nonneg-isotropic"
    QUARTER_SECTIONAL = "quarter-sectional"
    QUARTER_FLAG = "quarter-flag"
    YAU_LOWER = "yau-lower"
    YAU_UPPER = "yau-upper"
    BIORTHOGONAL_4D = "biorthogonal"


class Verdict(enum.Enum):
    HOLDS_STRICT = "holds-strict"
    HOLDS_WEAK = "holds-weak"
    FAILS = "fails"


def strictness_tolerance(R: CurvatureTensor) -> float:
    return STRICTNESS_RTOL * (1.0 + R.norm())


def verdict_for(margin: float, tol: float) -> Verdict:
    if margin > tol:
        return Verdict.HOLDS_STRICT
    if margin >= -tol:
        return Verdict.HOLDS_WEAK
    return Verdict.FAILS


@dataclass(frozen=True, eq=False)
class ConditionReport:
    """Outcome of one condition check.

    ``extremal_value`` is the raw extremum of the functional the condition quantifies over
    (e.g. the minimum of ``a_sum`` for YAU_LOWER); ``margin`` is its signed distance to the
    threshold, positive when the condition holds.
    """

    condition: Condition
    verdict: Verdict
    extremal_value: float
    margin: float
    threshold: float
    extremal_frame: Frame
    constants: dict
    tolerance: float
    nonpositive_scalar: bool = False
    searches: tuple = field(default=(), repr=False)

    def as_dict(self) -> dict:
        out = {
            "condition": self.condition.value,
            "verdict": self.verdict.value,
            "extremal_value": self.extremal_value,
            "margin": self.margin,
            "threshold": self.threshold,
            "tolerance": self.tolerance,
            "constants": dict(self.constants),
            "extremal_frame": self.extremal_frame.vectors.tolist(),
            "nonpositive_scalar": self.nonpositive_scalar,
        }
        search = self.searches[0] if self.searches else None
        if search is not None and search.theta is not None:
            out["theta"] = search.theta
        if search is not None:
            out["converged"] = all(s.converged for s in self.searches)
        return out


def check_condition(R: CurvatureTensor, condition: Condition | str, cfg: SearchConfig | None = None,
                    *, gamma: float | None = None) -> ConditionReport:
    """Extremise the functional behind ``condition`` and compare it with its threshold.

    ``gamma`` overrides the 1/2 of the main condition (``a_sum > gamma * b_sum``).
    """
    condition = Condition(condition)
    n = R.dim
    tol = strictness_tolerance(R)
    s0 = curvature_scalars(R).normalized_scalar
    constants = {"s0": s0}
    flagged = False

    if condition is Condition.BIORTHOGONAL_4D and n != 4:
        raise InvalidDimension(f"biorthogonal curvature is defined here for n = 4 only, got {n}")
    if condition in (Condition.QUARTER_FLAG,) and n < 3:
        raise InvalidDimension(f"flags need dimension >= 3, got {n}")
    if condition not in (Condition.QUARTER_SECTIONAL, Condition.QUARTER_FLAG) and n < 4:
        raise InvalidDimension(f"{condition.value} needs dimension >= 4, got {n}")

    if condition in (Condition.MAIN_CONDITION, Condition.MAIN_CONDITION_WEAK):
        g = 0.5 if gamma is None else float(gamma)
        constants["gamma"] = g
        res = extremize(R, FrameFunctional.condition(g), cfg)
        searches, value, threshold = (res,), res.value, 0.0
        margin = value
    elif condition in (Condition.PIC, Condition.NONNEG_ISOTROPIC):
        res = extremize(R, FrameFunctional.isotropic(), cfg)
        searches, value, threshold = (res,), res.value, 0.0
        margin = value
    elif condition is Condition.QUARTER_SECTIONAL:
        lo = extremize(R, FrameFunctional.sectional(), cfg)
        hi = extremize(R, FrameFunctional.sectional(), cfg, maximize=True)
        searches = (lo, hi)
        value = lo.value - 0.25 * hi.value
        threshold, margin = 0.0, value
        constants.update(k_min=lo.value, k_max=hi.value)
    elif condition is Condition.QUARTER_FLAG:
        res = extremize(R, FrameFunctional.flag(), cfg)
        searches, value, threshold = (res,), res.value, 0.0
        margin = value
    elif condition is Condition.YAU_LOWER:
        eta = eta_n(n)
        constants["eta_n"] = eta
        res = extremize(R, FrameFunctional.a_sum(), cfg)
        threshold = 4.0 * eta * s0
        searches, value = (res,), res.value
        margin = value - threshold
        flagged = s0 < -tol
    elif condition is Condition.YAU_UPPER:
        gam = gamma_n(n)
        constants["gamma_n"] = gam
        res = extremize(R, FrameFunctional.b_sum(), cfg, maximize=True)
        threshold = 2.0 * gam * s0
        searches, value = (res,), res.value
        margin = threshold - value
        flagged = s0 < -tol
    else:
        # In R^4 the plane orthogonal to span(e1, e2) is span(e3, e4), so
        # (K(s) + K(s^perp)) / 2 is half the b-sum of the completed frame.
        res = extremize(R, FrameFunctional.b_sum(), cfg, maximize=True)
        searches, value = (res,), 0.5 * res.value
        threshold = 2.0 * s0
        margin = threshold - value

    verdict = Verdict.FAILS if flagged else verdict_for(margin, tol)
    return ConditionReport(
        condition=condition,
        verdict=verdict,
        extremal_value=float(value),
        margin=float(margin),
        threshold=float(threshold),
        extremal_frame=searches[0].frame,
        constants=constants,
        tolerance=tol,
        nonpositive_scalar=flagged,
        searches=searches,
    )


# --- identities ---------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    identity: str
    max_abs_residual: float
    relative_residual: float
    bound: float
    lhs: float
    rhs: float
    basis_seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.relative_residual < self.bound

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "max_abs_residual": self.max_abs_residual,
            "relative_residual": self.relative_residual,
            "bound": self.bound,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "basis_seed": self.basis_seed,
            "ok": self.ok,
        }


def _report(name, lhs, rhs, R, bound, basis_seed=None, residual=None) -> IdentityReport:
    res = abs(lhs - rhs) if residual is None else residual
    norm = R.norm()
    rel = res / norm if norm > 0 else res
    return IdentityReport(name, float(res), float(rel), bound, float(lhs), float(rhs), basis_seed)


def _in_random_basis(R: CurvatureTensor, basis_seed: int | None) -> CurvatureTensor:
    if basis_seed is None:
        return R
    q = random_frame_array(np.random.default_rng(basis_seed), R.dim, R.dim)
    return R.in_basis(q)


def _require_dim(R: CurvatureTensor, lo: int, what: str):
    if R.dim < lo:
        raise InvalidDimension(f"{what} needs dimension >= {lo}, got {R.dim}")


@lru_cache(maxsize=None)
def _quadruples(n: int, offset: int = 0) -> np.ndarray:
    """All ordered quadruples of mutually distinct indices from ``offset .. n-1``."""
    return np.array(list(permutations(range(offset, n), 4)), dtype=int).reshape(-1, 4)


def _quadruple_sums(K: np.ndarray, offset: int = 0):
    """Sums over distinct ordered (i, j, k, l) of the a-type and b-type sectional terms."""
    q = _quadruples(K.shape[0], offset)
    if q.size == 0:
        return 0.0, 0.0
    i, j, k, l = q.T
    a_terms = K[i, k] + K[i, l] + K[j, k] + K[j, l]
    b_terms = K[i, j] + K[k, l]
    return float(a_terms.sum()), float(b_terms.sum())


def _pair_sum(K: np.ndarray, offset: int = 0) -> float:
    sub = K[offset:, offset:]
    return float(sub[np.triu_indices(sub.shape[0], k=1)].sum())


def check_identity_2_2(R: CurvatureTensor, basis_seed: int | None = None) -> IdentityReport:
    """Sum of ``K_ik + K_il + K_jk + K_jl`` over distinct quadruples is ``8(n-3)(n-2) sum_{i<j} K_ij``."""
    _require_dim(R, 4, "the a-type quadruple average")
    K = _in_random_basis(R, basis_seed).sectional_matrix()
    n = R.dim
    lhs, _ = _quadruple_sums(K)
    rhs = 8 * (n - 3) * (n - 2) * _pair_sum(K)
    return _report("a-average", lhs, rhs, R, IDENTITY_BOUND, basis_seed)


def check_identity_2_3(R: CurvatureTensor, basis_seed: int | None = None) -> IdentityReport:
    """Sum of ``K_ij + K_kl`` over distinct quadruples is ``4(n-3)(n-2) sum_{i<j} K_ij``."""
    _require_dim(R, 4, "the b-type quadruple average")
    K = _in_random_basis(R, basis_seed).sectional_matrix()
    n = R.dim
    _, lhs = _quadruple_sums(K)
    rhs = 4 * (n - 3) * (n - 2) * _pair_sum(K)
    return _report("b-average", lhs, rhs, R, IDENTITY_BOUND, basis_seed)


def check_scalar_identity(R: CurvatureTensor, gamma: float, basis_seed: int | None = None) -> IdentityReport:
    """``2(2-gamma)(n-3)(n-2) S`` equals the quadruple sum of ``a-terms - gamma * b-terms``."""
    _require_dim(R, 4, "the scalar identity")
    K = _in_random_basis(R, basis_seed).sectional_matrix()
    n = R.dim
    a, b = _quadruple_sums(K)
    lhs = 2.0 * (2.0 - gamma) * (n - 3) * (n - 2) * curvature_scalars(R).scalar
    rhs = a - gamma * b
    return _report(f"scalar(gamma={gamma!r})", lhs, rhs, R, IDENTITY_BOUND, basis_seed)


def check_identity_4d(R: CurvatureTensor, frame: Frame) -> IdentityReport:
    """``6 S_0 = b_sum + a_sum`` on any four-frame of R^4."""
    if R.dim != 4:
        raise InvalidDimension(f"the 4D identity needs n = 4, got {R.dim}")
    lhs = 6.0 * curvature_scalars(R).normalized_scalar
    rhs = b_sum(R, frame) + a_sum(R, frame)
    return _report("4d", lhs, rhs, R, FRAME_IDENTITY_BOUND)


def q_quantity(R: CurvatureTensor, frame: Frame) -> float:
    """``4 a_sum - 2 b_sum``, positive on every frame under the main condition."""
    return 4.0 * a_sum(R, frame) - 2.0 * b_sum(R, frame)


def check_prop_main_decomposition(R: CurvatureTensor, frame: Frame) -> IdentityReport:
    """``Q(F) + Q(F') + Q(F'') = 9 * isotropic(F)`` for the two rotated frames."""
    _require_dim(R, 4, "the rotated-frame decomposition")
    lhs = q_quantity(R, frame) + q_quantity(R, rotate_frame_prime(frame)) + q_quantity(R, rotate_frame_double_prime(frame))
    rhs = 9.0 * isotropic_quantity(R, frame)
    return _report("rotated-frames", lhs, rhs, R, FRAME_IDENTITY_BOUND)


# --- dimension-specific decompositions ----------------------------------------------
#
# Each identity is stored with 1-based plane labels: "13" is K_{13} = R_{1313}.
# lhs = lhs_s0 * S0 + sum(coef * K); rhs = rhs_s0 * S0 + sum(coef * (sum of bracket planes)).

@dataclass(frozen=True)
class Decomposition:
    n: int
    which: str
    lhs_s0: Fraction
    lhs_terms: tuple
    rhs_s0: Fraction
    brackets: tuple

    def bracket_weight(self) -> Fraction:
        return sum((abs(c) for c, _ in self.brackets), Fraction(0))


def _p(label: str) -> tuple:
    return int(label[0]), int(label[1])


def _bk(coef, *labels):
    return Fraction(coef), tuple(_p(x) for x in labels)


_A_TERMS = ((Fraction(1), (1, 3)), (Fraction(1), (1, 4)), (Fraction(1), (2, 3)), (Fraction(1), (2, 4)))
_HALF_B = ((Fraction(-1, 2), (1, 2)), (Fraction(-1, 2), (3, 4)))


def _lower_7_brackets():
    out = [_bk(Fraction(1, 4), "13", "24", "14", "23")]
    pq = list(combinations((5, 6, 7), 2))
    out += [(Fraction(1, 4), ((1, p), (1, q), (2, p), (2, q))) for p, q in pq]
    out += [(Fraction(1, 4), ((3, p), (3, q), (4, p), (4, q))) for p, q in pq]
    # ordered (i, j), i != j in 1..4, excluding the planes {1,2} and {3,4} in either order
    ij = [(i, j) for i in range(1, 5) for j in range(1, 5)
          if i != j and {i, j} not in ({1, 2}, {3, 4})]
    out += [(Fraction(1, 8), ((i, j), (i, q), (p, j), (p, q))) for i, j in ij for p, q in pq]
    return tuple(out)


@lru_cache(maxsize=None)
def decomposition(n: int, which: str) -> Decomposition:
    """The transcribed linear identity behind the n = 5, 6, 7 case of a Yau-type bound."""
    which = which.upper().replace("-", "_")
    if which in ("YAU_LOWER", "LOWER"):
        if n == 5:
            # 20 S0 - 2(K12 + K34) as four brackets
            return Decomposition(5, "YAU_LOWER", Fraction(20), ((Fraction(-2), (1, 2)), (Fraction(-2), (3, 4))),
                                 Fraction(0), (
                _bk(1, "13", "14", "35", "45"),
                _bk(1, "23", "24", "35", "45"),
                _bk(1, "13", "15", "23", "25"),
                _bk(1, "14", "15", "24", "25"),
            ))
        if n == 6:
            # 15 S0 - (K12 + K34): three 3/4-brackets and eight 1/8-brackets
            q34, e8 = Fraction(3, 4), Fraction(1, 8)
            return Decomposition(6, "YAU_LOWER", Fraction(15), ((Fraction(-1), (1, 2)), (Fraction(-1), (3, 4))),
                                 Fraction(0), (
                _bk(q34, "13", "24", "14", "23"),
                _bk(q34, "15", "16", "25", "26"),
                _bk(q34, "35", "36", "45", "46"),
                _bk(e8, "13", "16", "35", "56"),
                _bk(e8, "14", "16", "45", "56"),
                _bk(e8, "23", "26", "35", "56"),
                _bk(e8, "24", "26", "45", "56"),
                _bk(e8, "13", "36", "15", "56"),
                _bk(e8, "14", "46", "15", "56"),
                _bk(e8, "23", "36", "25", "56"),
                _bk(e8, "24", "46", "25", "56"),
            ))
        if n == 7:
            # 21 S0 - (K12 + K34): 1/4 and 1/8 bracket families
            return Decomposition(7, "YAU_LOWER", Fraction(21), ((Fraction(-1), (1, 2)), (Fraction(-1), (3, 4))),
                                 Fraction(0), _lower_7_brackets())
    elif which in ("YAU_UPPER", "UPPER"):
        if n == 5:
            # a_sum = 20 S0 minus eight pair-of-planes brackets
            return Decomposition(5, "YAU_UPPER", Fraction(0), _A_TERMS, Fraction(20), (
                _bk(-1, "12", "35"), _bk(-1, "12", "45"), _bk(-1, "34", "15"), _bk(-1, "34", "25"),
                _bk(-1, "13", "25"), _bk(-1, "14", "35"), _bk(-1, "23", "45"), _bk(-1, "24", "15"),
            ))
        if n == 6:
            # a_sum - b_sum/2 = 15 S0 minus five full and two half brackets
            h = Fraction(-1, 2)
            return Decomposition(6, "YAU_UPPER", Fraction(0), _A_TERMS + _HALF_B, Fraction(15), (
                _bk(-1, "12", "34"), _bk(-1, "15", "26"), _bk(-1, "16", "25"),
                _bk(-1, "35", "46"), _bk(-1, "36", "45"),
                _bk(h, "12", "56"), _bk(h, "34", "56"),
            ))
        if n == 7:
            # a_sum - b_sum/2 = 21 S0 minus eight full and two half brackets
            h = Fraction(-1, 2)
            return Decomposition(7, "YAU_UPPER", Fraction(0), _A_TERMS + _HALF_B, Fraction(21), (
                _bk(-1, "12", "56"), _bk(-1, "34", "57"), _bk(-1, "15", "26"), _bk(-1, "47", "25"),
                _bk(-1, "35", "46"), _bk(-1, "17", "45"), _bk(-1, "16", "37"), _bk(-1, "36", "27"),
                _bk(h, "12", "67"), _bk(h, "34", "67"),
            ))
    else:
        raise InvalidInput(f"unknown decomposition family {which!r}")
    raise InvalidDimension(f"dimension-specific decompositions exist for n in 5..7, got {n}")


def _evaluate_decomposition(d: Decomposition, K: np.ndarray, s0: float):
    def k(pl):
        return K[pl[0] - 1, pl[1] - 1]

    lhs = float(d.lhs_s0) * s0 + sum(float(c) * k(pl) for c, pl in d.lhs_terms)
    rhs = float(d.rhs_s0) * s0 + sum(float(c) * sum(k(pl) for pl in planes) for c, planes in d.brackets)
    return lhs, rhs


def check_dim_specific_decomposition(R: CurvatureTensor, n: int, which: str,
                                     basis_seed: int | None = None) -> IdentityReport:
    if R.dim != n:
        raise InvalidDimension(f"decomposition for n = {n} applied to a tensor of dimension {R.dim}")
    d = decomposition(n, which)
    K = _in_random_basis(R, basis_seed).sectional_matrix()
    lhs, rhs = _evaluate_decomposition(d, K, curvature_scalars(R).normalized_scalar)
    return _report(f"{d.which.lower()}-n{n}", lhs, rhs, R, IDENTITY_BOUND, basis_seed)


def check_general_decomposition(R: CurvatureTensor, which: str, basis_seed: int | None = None) -> IdentityReport:
    """The n >= 8 argument: the two identities splitting the scalar sum over ``e_5 .. e_n``.

    The residual is the largest of the two; its lhs/rhs are those of the mixed-block identity.
    """
    _require_dim(R, 8, "the general-dimension decomposition")
    which = which.upper().replace("-", "_")
    if which not in ("YAU_LOWER", "YAU_UPPER"):
        raise InvalidInput(f"unknown decomposition family {which!r}")
    K = _in_random_basis(R, basis_seed).sectional_matrix()
    n = R.dim
    k = lambda i, j: K[i - 1, j - 1]  # noqa: E731  (1-based planes)
    tail_a, tail_b = _quadruple_sums(K, offset=4)
    tail_pairs = _pair_sum(K, offset=4)
    pq = list(combinations(range(5, n + 1), 2))
    mixed = (n - 5) * sum(k(i, j) for i in range(1, 5) for j in range(5, n + 1))
    if which == "YAU_LOWER":
        block = 8 * (n - 6) * (n - 7) * tail_pairs
        block_res = abs(block - tail_a)
        rhs = sum(k(1, p) + k(1, q) + k(2, p) + k(2, q) + k(3, p) + k(3, q) + k(4, p) + k(4, q) for p, q in pq)
    else:
        block_res = abs(tail_pairs - tail_b / (4 * (n - 7) * (n - 6)))
        rhs = sum((k(1, p) + k(2, q)) + (k(3, p) + k(4, q)) + (k(1, q) + k(2, p)) + (k(3, q) + k(4, p))
                  for p, q in pq)
    res = max(block_res, abs(mixed - rhs))
    return _report(f"{which.lower()}-general", mixed, rhs, R, IDENTITY_BOUND, basis_seed, residual=res)


def pinching_constant_closes(n: int, which: str) -> bool:
    """Exact check that the bracket counts of a case analysis produce its pinching constant.

    YAU_LOWER: the bound left on ``b_sum`` equals ``8 eta_n S0``. YAU_UPPER: the bound left on
    ``a_sum - b_sum/2`` (on ``a_sum`` versus ``gamma_5 S0`` when n = 5) is exactly zero.
    """
    which = which.upper().replace("-", "_")
    if which == "YAU_LOWER":
        eta = eta_n(n, exact=True)
        if n == 4:
            # a_sum + b_sum = 6 S0 and a_sum >= 4 eta S0 leave b_sum <= (6 - 4 eta) S0
            return 6 - 4 * eta == 8 * eta
        if n in (5, 6, 7):
            d = decomposition(n, which)
            b_coef = -d.lhs_terms[0][0]
            return (d.lhs_s0 - 4 * d.bracket_weight() * eta) / b_coef == 8 * eta
        used = 4 + 4 * (n - 4) + Fraction((n - 5) * (n - 4), 2)
        return Fraction(n * (n - 1), 2) - used * eta == 8 * eta
    if which == "YAU_UPPER":
        gam = gamma_n(n, exact=True)
        if n == 4:
            # a_sum - b_sum/2 = 6 S0 - 3/2 b_sum > 6 S0 - 3 gamma_4 S0
            return 6 - 3 * gam == 0
        if n == 5:
            d = decomposition(5, which)
            return d.rhs_s0 - 2 * d.bracket_weight() * gam == gam
        if n in (6, 7):
            d = decomposition(n, which)
            return d.rhs_s0 - 2 * d.bracket_weight() * gam == 0
        return Fraction(n * (n - 1), 2) - Fraction(n * n - n - 8, 2) * gam == gam
    raise InvalidInput(f"unknown decomposition family {which!r}")


# --- implication harness ------------------------------------------------------------

class Family(enum.Enum):
    LEMMA_QUARTER = "lemma-quarter"
    PROP_MAIN = "prop-main"
    PROP_YAU_LOWER = "prop-yau-lower"
    PROP_YAU_UPPER = "prop-yau-upper"


# hypothesis, conclusion, k: strict hypotheses with margin h must give conclusion >= k*h
_FAMILIES = {
    Family.LEMMA_QUARTER: (Condition.QUARTER_FLAG, Condition.MAIN_CONDITION, 4.0),
    Family.PROP_MAIN: (Condition.MAIN_CONDITION, Condition.PIC, 4.0 / 3.0),
    Family.PROP_YAU_LOWER: (Condition.YAU_LOWER, Condition.MAIN_CONDITION, 0.0),
    Family.PROP_YAU_UPPER: (Condition.YAU_UPPER, Condition.MAIN_CONDITION, 0.0),
}

HARNESS_DIMENSIONS = (4, 5, 6)
HARNESS_MAX_MIX = 0.3
#: Slack on the quantitative bound ``conclusion >= k * hypothesis``.
BOUND_SLACK = 1e-6


def harness_tensor(seed: int, trial: int) -> tuple[CurvatureTensor, dict]:
    """Trial tensor ``(1 - t) * base + t * noise`` with ``t`` uniform in ``[0, 0.3]``.

    The base is the unit sphere, or CP^{n/2} for a third of the even-dimensional trials;
    the noise is a projected uniform tensor. Everything is drawn from ``default_rng([seed, trial])``.
    """
    rng = np.random.default_rng([seed, trial])
    n = int(rng.choice(HARNESS_DIMENSIONS))
    use_cp = n % 2 == 0 and rng.random() < 1.0 / 3.0
    t = float(rng.uniform(0.0, HARNESS_MAX_MIX))
    noise_seed = int(rng.integers(2**63 - 1))
    base = fubini_study(n // 2)[0] if use_cp else constant_curvature(n, 1.0)
    noise = random_curvature_tensor(n, noise_seed, 1.0)
    R = CurvatureTensor((1.0 - t) * base.components + t * noise.components)
    return R, {"n": n, "base": "fubini-study" if use_cp else "sphere", "t": t, "noise_seed": noise_seed}


@dataclass(frozen=True)
class HarnessSummary:
    family: Family
    trials: int
    seed: int
    hypothesis_satisfying: int
    weakly_satisfying: int
    violations: tuple
    records: tuple = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "trials": self.trials,
            "seed": self.seed,
            "hypothesis_satisfying": self.hypothesis_satisfying,
            "weakly_satisfying": self.weakly_satisfying,
            "violation_count": len(self.violations),
            "violations": list(self.violations),
            "records": list(self.records),
        }


def implication_record(family: Family | str, R: CurvatureTensor, cfg: SearchConfig | None = None) -> dict:
    """Hypothesis and conclusion margins for one tensor, and whether the implication held.

    ``status`` is ``strict`` (hypothesis margin above ten strictness tolerances), ``weak``
    (within tolerance of zero or barely above), or ``vacuous``.
    """
    family = Family(family)
    hyp_cond, concl_cond, k = _FAMILIES[family]
    tol = strictness_tolerance(R)
    hyp = check_condition(R, hyp_cond, cfg)
    h = hyp.margin
    if hyp.nonpositive_scalar or h < -tol:
        return {"status": "vacuous", "hypothesis": h, "conclusion": None, "violation": False, "tolerance": tol}
    concl = check_condition(R, concl_cond, cfg).margin
    if h > 10.0 * tol:
        status = "strict"
        violated = concl <= 0.0 or concl < k * h - BOUND_SLACK
    else:
        status = "weak"
        violated = concl < max(k, 1.0) * min(h, 0.0) - 10.0 * tol
    return {"status": status, "hypothesis": h, "conclusion": concl, "violation": bool(violated), "tolerance": tol}


def implication_harness(family: Family | str, trials: int, seed: int, cfg: SearchConfig | None = None,
                        *, workers: int = 1) -> HarnessSummary:
    """Check an implication on ``trials`` perturbed model tensors (see :func:`harness_tensor`).

    Trials are independent; with ``workers > 1`` they run on a thread pool and are merged
    by trial index, so the summary does not depend on scheduling.
    """
    family = Family(family)
    if trials < 1:
        raise InvalidInput("trials must be positive")

    def run(trial: int) -> dict:
        R, meta = harness_tensor(seed, trial)
        rec = implication_record(family, R, cfg)
        return {"trial": trial, **meta, **rec}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run, range(trials)))
    else:
        records = [run(i) for i in range(trials)]
    records.sort(key=lambda r: r["trial"])
    return HarnessSummary(
        family=family,
        trials=trials,
        seed=seed,
        hypothesis_satisfying=sum(r["status"] == "strict" for r in records),
        weakly_satisfying=sum(r["status"] == "weak" for r in records),
        violations=tuple(r for r in records if r["violation"]),
        records=tuple(records),
    )
