from fractions import Fraction

import numpy as np
import pytest

from curvlab import (
    Condition,
    Frame,
    InvalidDimension,
    SearchConfig,
    Verdict,
    check_condition,
    check_dim_specific_decomposition,
    check_general_decomposition,
    check_identity_2_2,
    check_identity_2_3,
    check_identity_4d,
    check_prop_main_decomposition,
    check_scalar_identity,
    constant_curvature,
    curvature_scalars,
    direct_sum,
    eta_n,
    flat,
    fubini_study,
    gamma_n,
    implication_harness,
    random_curvature_tensor,
    random_frame,
    sphere,
    sphere_cross_circle,
)
from curvlab.frames import rotate_frame_double_prime, rotate_frame_prime
from curvlab.verify import (
    Family,
    decomposition,
    harness_tensor,
    implication_record,
    pinching_constant_closes,
    q_quantity,
    strictness_tolerance,
    verdict_for,
)


def test_gamma_values():
    assert gamma_n(5) == 20 / 17
    assert gamma_n(4) == 2.0
    assert gamma_n(6) == 1.25
    assert gamma_n(7, exact=True) == Fraction(42, 36)


def test_eta_values():
    assert eta_n(4) == 0.5
    assert eta_n(5) == 0.625
    assert abs(eta_n(100) - 9900 / 9912) < 1e-12
    assert eta_n(6, exact=True) == Fraction(30, 42)


@pytest.mark.parametrize("fn", [gamma_n, eta_n])
def test_constants_need_n_at_least_four(fn):
    with pytest.raises(InvalidDimension):
        fn(3)


def test_verdict_thresholds():
    assert verdict_for(1e-3, 1e-6) is Verdict.HOLDS_STRICT
    assert verdict_for(5e-7, 1e-6) is Verdict.HOLDS_WEAK
    assert verdict_for(-5e-7, 1e-6) is Verdict.HOLDS_WEAK
    assert verdict_for(-2e-6, 1e-6) is Verdict.FAILS
    assert strictness_tolerance(flat(4)) == 1e-6


def test_cp2_main_condition_is_weak(fast_cfg):
    rep = check_condition(fubini_study(2)[0], Condition.MAIN_CONDITION, fast_cfg)
    assert rep.verdict is Verdict.HOLDS_WEAK
    assert abs(rep.extremal_value) < 1e-6


def test_sphere_cross_circle_main_condition_strict(fast_cfg):
    rep = check_condition(sphere_cross_circle(5), "main", fast_cfg)
    assert rep.verdict is Verdict.HOLDS_STRICT


def test_sphere_product_weak_condition_fails(fast_cfg):
    rep = check_condition(direct_sum(sphere(2), sphere(2)), Condition.MAIN_CONDITION_WEAK, fast_cfg)
    assert rep.verdict is Verdict.FAILS
    assert rep.extremal_value == pytest.approx(-1.0, abs=1e-6)


def test_yau_lower_on_sphere(fast_cfg):
    for n in (4, 5, 6):
        rep = check_condition(sphere(n), Condition.YAU_LOWER, fast_cfg)
        assert rep.margin == pytest.approx(4 - 4 * eta_n(n), abs=1e-9)
        assert rep.constants["eta_n"] == eta_n(n) and rep.constants["s0"] == pytest.approx(1.0)


def test_yau_upper_nonpositive_scalar_is_flagged(fast_cfg):
    rep = check_condition(constant_curvature(5, -1.0), Condition.YAU_UPPER, fast_cfg)
    assert rep.verdict is Verdict.FAILS and rep.nonpositive_scalar
    flat_rep = check_condition(flat(5), Condition.YAU_UPPER, fast_cfg)
    assert flat_rep.verdict is Verdict.HOLDS_WEAK and not flat_rep.nonpositive_scalar


def test_quarter_conditions(fast_cfg):
    rep = check_condition(fubini_study(2)[0], Condition.QUARTER_SECTIONAL, fast_cfg)
    assert rep.verdict is Verdict.HOLDS_WEAK
    assert rep.constants["k_min"] == pytest.approx(1.0) and rep.constants["k_max"] == pytest.approx(4.0)
    flag = check_condition(sphere(3), Condition.QUARTER_FLAG, fast_cfg)
    assert flag.verdict is Verdict.HOLDS_STRICT and flag.extremal_value == pytest.approx(0.75)


def test_biorthogonal_needs_four_dimensions(fast_cfg):
    with pytest.raises(InvalidDimension):
        check_condition(sphere(5), Condition.BIORTHOGONAL_4D, fast_cfg)
    rep = check_condition(sphere(4), Condition.BIORTHOGONAL_4D, fast_cfg)
    assert rep.extremal_value == pytest.approx(1.0) and rep.margin == pytest.approx(1.0)


def test_gamma_override(fast_cfg):
    rep = check_condition(sphere(4), Condition.MAIN_CONDITION, fast_cfg, gamma=1.9)
    assert rep.extremal_value == pytest.approx(4 - 3.8)


def test_report_serialises(fast_cfg):
    d = check_condition(sphere(4), "pic", fast_cfg).as_dict()
    assert d["condition"] == "pic" and d["verdict"] == "holds-strict"
    assert np.array(d["extremal_frame"]).shape == (4, 4)


# --- identities ---


def test_identity_2_2_and_2_3_on_sphere():
    R = sphere(5)
    r22, r23 = check_identity_2_2(R), check_identity_2_3(R)
    assert r22.lhs == pytest.approx(480.0) and r23.lhs == pytest.approx(240.0)
    assert r22.rhs / r23.rhs == 2.0
    assert r22.ok and r23.ok


def test_identities_exact_on_flat():
    R = flat(6)
    for rep in (check_identity_2_2(R), check_identity_2_3(R), check_scalar_identity(R, 0.5),
                check_prop_main_decomposition(R, Frame.standard(6))):
        assert rep.max_abs_residual == 0.0


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_identities_on_random_tensors(n):
    for seed in range(5):
        R = random_curvature_tensor(n, seed)
        assert check_identity_2_2(R, basis_seed=seed).ok
        assert check_identity_2_3(R, basis_seed=seed).ok
        for g in (0.0, 0.5, 1.9):
            assert check_scalar_identity(R, g).ok
        assert check_prop_main_decomposition(R, random_frame(n, 4, seed)).ok


def test_identities_reject_small_dimension():
    for check in (check_identity_2_2, check_identity_2_3):
        with pytest.raises(InvalidDimension):
            check(sphere(3))
    with pytest.raises(InvalidDimension):
        check_identity_4d(sphere(5), Frame.standard(5))


def test_identity_4d_examples():
    R, J = fubini_study(2)
    e = np.eye(4)
    rep = check_identity_4d(R, Frame([e[0], J(e[0]), e[2], J(e[2])]))
    assert (rep.lhs, rep.rhs) == (pytest.approx(12.0), pytest.approx(12.0))
    rep = check_identity_4d(sphere(4), random_frame(4, 4, 3))
    assert rep.lhs == pytest.approx(6.0) and rep.ok
    assert check_identity_4d(random_curvature_tensor(4, 9), random_frame(4, 4, 1)).max_abs_residual < 1e-10


def test_scalar_identity_examples():
    R = random_curvature_tensor(6, 2)
    rep = check_scalar_identity(R, 2.0)
    assert rep.lhs == 0.0 and abs(rep.rhs) < 1e-9 * R.norm()
    rep = check_scalar_identity(sphere(4), 0.0)
    assert rep.lhs == pytest.approx(96.0) and rep.rhs == pytest.approx(96.0)


def test_rotated_frame_decomposition_examples():
    F = random_frame(6, 4, 5)
    R = sphere(6)
    assert q_quantity(R, F) == pytest.approx(12.0)
    assert check_prop_main_decomposition(R, F).lhs == pytest.approx(36.0)
    C, J = fubini_study(2)
    e = np.eye(4)
    H = Frame([e[0], J(e[0]), e[2], J(e[2])])
    for G in (H, rotate_frame_prime(H), rotate_frame_double_prime(H)):
        assert q_quantity(C, G) == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("n", [5, 6, 7])
@pytest.mark.parametrize("which", ["YAU_LOWER", "YAU_UPPER"])
def test_dim_specific_decompositions(n, which):
    for seed in range(5):
        rep = check_dim_specific_decomposition(random_curvature_tensor(n, seed), n, which, basis_seed=seed)
        assert rep.ok, rep


def test_lower_decomposition_n7_on_sphere():
    rep = check_dim_specific_decomposition(sphere(7), 7, "YAU_LOWER")
    assert rep.lhs == pytest.approx(19.0) and rep.rhs == pytest.approx(19.0)
    assert 4 * decomposition(7, "YAU_LOWER").bracket_weight() == 19


def test_decomposition_errors():
    with pytest.raises(InvalidDimension):
        check_dim_specific_decomposition(sphere(6), 5, "YAU_LOWER")
    with pytest.raises(InvalidDimension):
        decomposition(8, "YAU_UPPER")


@pytest.mark.parametrize("n", [8, 9, 10])
def test_general_decomposition(n):
    R = random_curvature_tensor(n, n)
    for which in ("YAU_LOWER", "YAU_UPPER"):
        assert check_general_decomposition(R, which, basis_seed=1).ok


@pytest.mark.parametrize("n", range(4, 21))
def test_pinching_constants_close_exactly(n):
    assert pinching_constant_closes(n, "YAU_LOWER")
    assert pinching_constant_closes(n, "YAU_UPPER")


# --- implications between conditions ---


def test_main_implies_pic_and_scalar_sign(fast_cfg):
    for seed in range(6):
        R, _ = harness_tensor(5, seed)
        main = check_condition(R, Condition.MAIN_CONDITION, fast_cfg)
        pic = check_condition(R, Condition.PIC, fast_cfg)
        if main.verdict is Verdict.HOLDS_STRICT:
            assert pic.verdict is Verdict.HOLDS_STRICT
            assert curvature_scalars(R).scalar > 0
        if main.verdict is Verdict.HOLDS_WEAK:
            assert pic.verdict is not Verdict.FAILS


def test_four_dimensional_verdicts_agree(fast_cfg):
    tensors = [sphere(4), flat(4), sphere_cross_circle(4), fubini_study(2)[0], direct_sum(sphere(2), sphere(2)),
               random_curvature_tensor(4, 1)]
    for R in tensors:
        verdicts = {check_condition(R, c, fast_cfg).verdict
                    for c in (Condition.MAIN_CONDITION, Condition.YAU_LOWER, Condition.BIORTHOGONAL_4D)}
        assert len(verdicts) == 1


def test_yau_lower_record_on_sphere(fast_cfg):
    for n in (4, 5, 6):
        rec = implication_record(Family.PROP_YAU_LOWER, sphere(n), fast_cfg)
        assert rec["status"] == "strict" and not rec["violation"]
        assert rec["hypothesis"] == pytest.approx(4 - 4 * eta_n(n))
        assert rec["conclusion"] == pytest.approx(3.0)


def test_quarter_record_on_cp2_is_weak(fast_cfg):
    rec = implication_record(Family.LEMMA_QUARTER, fubini_study(2)[0], fast_cfg)
    assert rec["status"] == "weak" and not rec["violation"]
    assert rec["conclusion"] >= -1e-6


def test_vacuous_record(fast_cfg):
    rec = implication_record("prop-main", direct_sum(sphere(2), sphere(2)), fast_cfg)
    assert rec["status"] == "vacuous" and rec["conclusion"] is None


def test_harness_tensor_is_seeded():
    a, meta = harness_tensor(3, 4)
    b, _ = harness_tensor(3, 4)
    assert a == b and 0 <= meta["t"] <= 0.3 and meta["n"] in (4, 5, 6)


def test_harness_small_run_and_workers():
    cfg = SearchConfig(restarts=8, seed=1)
    one = implication_harness("prop-main", 6, 11, cfg)
    many = implication_harness("prop-main", 6, 11, cfg, workers=3)
    assert one.as_dict() == many.as_dict()
    assert one.violations == () and one.hypothesis_satisfying >= 1
    assert [r["trial"] for r in one.records] == list(range(6))
