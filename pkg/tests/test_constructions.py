import pytest

from seqnorm.constructions import (
    BudgetExceededError,
    GridParams,
    LocalizedParams,
    build_chain,
    build_localized_vector,
    build_matrix_grid,
    equal_split_check,
    faithful_localization_scales,
    grid_requirements,
    plan_chain,
)
from seqnorm.core import FiniteVector, f


# ----------------------------------------------------------------------
# chains
# ----------------------------------------------------------------------


def test_plan_chain_sizes():
    assert plan_chain(1).sizes == (2,)
    assert plan_chain(2).sizes == (2, 4)
    assert plan_chain(3).sizes == (2, 4, 64)
    assert plan_chain(3).min_support == 70
    p4 = plan_chain(4)
    assert p4.sizes == (2, 4, 64, 1 << 70)
    assert p4.min_support == 70 + (1 << 70)
    p5 = plan_chain(5)
    assert p5.min_support is None
    assert "2**" in p5.min_support_desc


def test_build_chain_certificates(seg_engine):
    c1 = build_chain(1, 100, seg_engine)
    assert c1.value == pytest.approx(1.0, abs=1e-12) and c1.bound == 1.0
    c2 = build_chain(2, 100, seg_engine)
    assert c2.value >= 2 / f(2) - 1e-9
    assert c2.value == pytest.approx(2 / f(2), abs=1e-12)
    c3 = build_chain(3, 100, seg_engine)
    assert c3.value >= 1.5 - 1e-9
    assert c3.bound == pytest.approx(1.5, abs=1e-15)
    # certificate is a genuine lower bound for the norm
    x = FiniteVector.ones(70)
    assert c3.value <= seg_engine.norm(x) + 1e-12
    # blocks are honest sup-norm averages; their norms are reported
    assert c3.block_norms[0] == 1.0 and c3.block_norms[1] == 1.0
    assert c3.block_norms[2] > 1.0


def test_build_chain_budget(seg_engine):
    with pytest.raises(BudgetExceededError) as exc:
        build_chain(4, 100, seg_engine)
    assert exc.value.min_support == 70 + (1 << 70)
    with pytest.raises(BudgetExceededError) as exc:
        build_chain(5, 100, seg_engine)
    assert exc.value.min_support is None


# ----------------------------------------------------------------------
# localized vectors
# ----------------------------------------------------------------------


def test_faithful_scales_are_out_of_reach():
    L1, log2_L1p = faithful_localization_scales(2, 0.25)
    assert L1 is not None and L1 > 10
    assert log2_L1p > 60  # the upper scale is astronomically large


def test_localized_relaxed_build(seg_engine):
    params = LocalizedParams(L0=2, eps=0.25, m0=2, relaxed=True, L1=3, L1_prime=16,
                             budget=100)
    res = build_localized_vector(params, seg_engine)
    assert res.stack_sizes == (2, 4, 64)
    assert seg_engine.norm(res.x) == pytest.approx(1.0, abs=1e-9)
    # the witness family certifies the mid-level value from below
    assert res.witness_value <= seg_engine.norm_ell_m0(res.x, 3, 2) + 1e-12
    mid = next(b for b in res.report.bounds if b.name == "mid_level_lower")
    assert mid.margin >= -1e-9  # holds at this scale even though unasserted
    lows = [b for b in res.report.bounds if b.name.startswith("low_level")]
    assert len(lows) == 2 and all(b.margin >= -1e-9 for b in lows)
    highs = [b for b in res.report.bounds if b.name.startswith("high_level")]
    assert highs and all(not b.asserted for b in highs)
    assert res.ok  # no asserted failures in relaxed mode


def test_localized_respects_m0(seg_engine):
    params = LocalizedParams(L0=1, eps=0.25, m0=4, relaxed=True, L1=2, L1_prime=12,
                             budget=64)
    res = build_localized_vector(params, seg_engine)
    assert res.stack_sizes[0] == 4  # first stack carries the m0 floor
    assert res.witness_family.pairs[0][0] >= 4
    validate = res.witness_family.validate()  # admissible by construction
    assert validate is None


def test_localized_budget_capping_recorded(seg_engine):
    params = LocalizedParams(L0=2, eps=0.25, m0=2, relaxed=True, L1=4, L1_prime=20,
                             budget=100)
    res = build_localized_vector(params, seg_engine)
    grow = next(p for p in res.report.premises if p.name == "exact_stack_growth")
    assert not grow.holds
    assert any("capped" in n for n in res.report.notes)


# ----------------------------------------------------------------------
# the grid
# ----------------------------------------------------------------------


def test_grid_requirements_magnitudes():
    req = grid_requirements(2, 0.5)
    assert req["log2_k0"] > 48  # the stated infeasibility scale
    assert req["log2_L0_prime"] > req["log2_k0"]


def test_grid_single_cell_reduces_to_average(seg_engine):
    res = build_matrix_grid(GridParams(n=1, eps=0.5, k0=1, budget=100, samples=3),
                            seg_engine)
    # one cell: the ratio report compares ||a x(1,1)|| with |a|
    assert res.worst_lower_ratio == pytest.approx(res.worst_upper_ratio, abs=1e-12)
    assert res.worst_upper_ratio == pytest.approx(
        seg_engine.norm(res.cells[(1, 1)]), abs=1e-9
    )
    assert res.ok


def test_grid_two_by_two(seg_engine):
    res = build_matrix_grid(GridParams(n=2, eps=0.5, k0=2, budget=400, samples=3),
                            seg_engine)
    assert len(res.cells) == 4
    assert res.ok  # relaxed: diagnostics only
    assert 0 < res.worst_lower_ratio <= res.worst_upper_ratio
    names = {b.name for b in res.report.bounds}
    assert "column_lower_bound[j=1]" in names and "equivalence_upper" in names
    assert not any(b.asserted for b in res.report.bounds)
    # faithful premises are reported as unmet
    assert not res.report.all_premises_hold


def test_grid_budget(seg_engine):
    with pytest.raises(BudgetExceededError):
        build_matrix_grid(GridParams(n=3, eps=0.5, k0=4, budget=50), seg_engine)


# ----------------------------------------------------------------------
# the equal-split maximization fact
# ----------------------------------------------------------------------


def test_equal_split_examples():
    # center beats the integer endpoint split for (2, 4)
    margin = equal_split_check(2, 4.0, resolution=4001)
    center = 4 / f(2)
    assert center > 1 + 3 / f(3) - 1e-12  # endpoint value 2.5
    assert margin <= 1e-9
    assert equal_split_check(2, 2.0) == 0.0
    assert equal_split_check(3, 9.0, resolution=4000) <= 1e-9
    with pytest.raises(ValueError):
        equal_split_check(1, 5.0)
    with pytest.raises(ValueError):
        equal_split_check(3, 2.0)


def test_equal_split_grid():
    for ell in (2, 3, 4):
        for m in range(ell, 21, 3):
            assert equal_split_check(ell, float(m), resolution=2000) <= 1e-9
