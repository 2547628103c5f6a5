import math

import pytest

from ptb.errors import BadParameter, InadmissibleAlpha
from ptb.mass_ratio import RatioRow, analyze, limit_report, offset_limit
from ptb.mass_shell import mass_shell_from_lambda


def test_closed_form_matches_general_solver():
    for eps in (1.0, 0.3, 1e-2, 1e-6):
        for alpha in (0.0, 0.5, 2.0, -eps / 2.0):
            a = analyze(1.7, alpha, eps)
            sh = mass_shell_from_lambda(math.sqrt(eps) * 1.7, 1.7, alpha * 1.7 ** 2)
            assert a.M2 == pytest.approx(sh.M2, rel=1e-13)
            assert a.nu == pytest.approx(sh.nu, rel=1e-14)
            assert a.lambda_ == pytest.approx(sh.lambda_, rel=1e-15, abs=1e-300)


def test_offset_definition():
    a = analyze(2.0, 0.7, 0.04)
    assert a.offset == pytest.approx(0.5 + a.nu / a.M2, rel=1e-15)
    assert a.gamma == pytest.approx(0.2, rel=1e-15)


def test_free_case_offset_is_gamma_fraction():
    # alpha = 0: M = m1 + m2 and the offset is exactly gamma/(1 + gamma)
    for eps in (1.0, 0.25, 1e-4, 1e-10):
        a = analyze(1.0, 0.0, eps)
        g = math.sqrt(eps)
        assert a.offset == pytest.approx(g / (1.0 + g), rel=1e-13)
        assert offset_limit(a) == pytest.approx(g / (1.0 + g), rel=1e-15)


def test_alpha_one_limit_value():
    # beta = 2 + 2 sqrt(2): limit = beta/(2(1+beta)) = (sqrt(2)+1)/(sqrt(2)+... )
    a = analyze(1.0, 1.0, 1e-12)
    beta = 2.0 + 2.0 * math.sqrt(2.0)
    want = beta / (2.0 * (1.0 + beta))
    assert offset_limit(a) == pytest.approx(want, rel=1e-15)
    assert a.offset == pytest.approx(want, abs=1e-6)


def test_residual_shrinks_linearly_in_eps():
    # offset -> limit with residual O(eps): consecutive decades of eps
    # shrink the residual by about 100x
    rows = limit_report(1.0, 1.0, [1e-2, 1e-4, 1e-6, 1e-8])
    for lead, trail in zip(rows, rows[1:]):
        ratio = lead.residual / trail.residual
        assert ratio == pytest.approx(100.0, rel=0.1)


def test_exact_offsets_at_alpha_zero():
    rows = limit_report(1.0, 0.0, [1e-2, 1e-4, 1e-6])
    offsets = [r.offset for r in rows]
    assert offsets[0] == pytest.approx(0.1 / 1.1, rel=1e-12)
    assert offsets[1] == pytest.approx(0.01 / 1.01, rel=1e-12)
    assert offsets[2] == pytest.approx(0.001 / 1.001, rel=1e-12)
    for r in rows:
        assert r.residual < 1e-12


def test_callable_alpha_probes_negative_lambda():
    rows = limit_report(1.0, lambda eps: -eps / 2.0, [1e-2, 1e-4, 1e-6])
    for r in rows:
        assert r.alpha == pytest.approx(-r.eps / 2.0)
        assert r.limit == 0.0
        assert r.offset > 0.0
    # the offset itself tends to zero as the light particle vanishes
    assert rows[-1].offset < rows[0].offset


def test_negative_alpha_requires_general_solver_branch():
    a = analyze(1.0, -0.3, 0.5)
    sh = mass_shell_from_lambda(math.sqrt(0.5), 1.0, -0.3)
    assert a.M2 == pytest.approx(sh.M2, rel=1e-14)
    assert a.beta is None


def test_inadmissible_alpha():
    with pytest.raises(InadmissibleAlpha):
        analyze(1.0, -0.5, 0.5)
    with pytest.raises(InadmissibleAlpha):
        analyze(1.0, -1e-2, 1e-2)
    # just inside is fine
    a = analyze(1.0, -1e-2 + 1e-6, 1e-2)
    assert a.M2 > 0.0


def test_parameter_validation():
    with pytest.raises(BadParameter):
        analyze(0.0, 0.0, 0.5)
    with pytest.raises(BadParameter):
        analyze(-1.0, 0.0, 0.5)
    with pytest.raises(BadParameter):
        analyze(1.0, 0.0, 0.0)
    with pytest.raises(BadParameter):
        analyze(1.0, 0.0, 1.5)


def test_row_fields_consistent():
    rows = limit_report(2.5, 0.8, [1e-3])
    (r,) = rows
    assert isinstance(r, RatioRow)
    assert r.residual == pytest.approx(abs(r.offset - r.limit), abs=1e-18)
    assert r.gamma == pytest.approx(math.sqrt(r.eps), rel=1e-15)


def test_offset_bounded_by_half():
    # nu <= 0 keeps the offset in [0, 1/2]
    for eps in (1.0, 0.1, 1e-5):
        for alpha in (0.0, 0.3, 10.0, -eps / 3.0):
            a = analyze(1.0, alpha, eps)
            assert 0.0 <= a.offset <= 0.5 + 1e-15
    # equal masses: nu = 0 puts the center of energy midway
    assert analyze(1.0, 0.5, 1.0).offset == pytest.approx(0.5, abs=1e-15)
