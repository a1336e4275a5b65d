import math

import pytest

import quartic_rg as qr


def test_import_and_version():
    assert isinstance(qr.__version__, str)


def test_beta_branches_solve_the_matching_condition():
    for omega in (-2.0, 0.3, 4.0):
        for n in (1, 2, 3):
            b = qr.beta_n(omega, n)
            assert b / math.tan(b) == pytest.approx(1.0 / omega, rel=1e-10)


def test_hard_core_weakest_state():
    rc = qr.hardcore_radius(1.0, 1.0, 1)
    st = qr.weakest_state(qr.HardCore(rc, 1.0))
    assert st.kappa == pytest.approx(0.834, rel=0.01)
    assert st.nodes == 1


def test_c60_report():
    rep = qr.c60_report(558.0, phi=1.0)
    assert abs(rep["binding_meV"] - 17.0) <= 1.0


def test_rmin_violation_carries_the_cutoff():
    p = qr.ModelParams(1.0, 1.0)
    with pytest.raises(qr.RMinViolation) as info:
        qr.continuous_flow(p, 1, [0.5, 1.0])
    assert info.value.r_min == pytest.approx(0.6344, abs=1e-3)
    assert isinstance(info.value, qr.DomainError)
