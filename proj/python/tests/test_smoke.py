import math

import pytest

import dunklsb


def test_gamma_factor():
    assert dunklsb.gamma_factor(0.0, 3) == 6.0
    assert dunklsb.gamma_factor(1.0, 2) == 6.0


def test_kernel_values():
    assert abs(dunklsb.dunkl_kernel([0.0], [2], [3]) - math.exp(6)) < 1e-12 * math.exp(6)
    assert abs(dunklsb.dunkl_kernel([1.0], [1], [1]) - math.cosh(1)) < 1e-14
    assert dunklsb.dunkl_kernel([1.0], [2 + 1j], [0]) == 1


def test_heat_kernel_k0_is_gaussian():
    v = dunklsb.heat_kernel([0.0], [0.3], [-1.1], 1.5)
    assert v == pytest.approx(math.exp(-(1.4**2) / 3.0), rel=1e-14)


def test_gauss_rule():
    nodes, weights = dunklsb.gauss_rule(1.0, 1.0, 2)
    assert nodes[1] == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert sum(weights) == pytest.approx(1.0)


def test_mms_constant():
    assert dunklsb.mms_constant([0.0]) == pytest.approx(math.sqrt(2 * math.pi))


def test_run_suite_kernels():
    rep = dunklsb.run_suite(suite="kernels", k=[0.0], t=1.0, kernel_samples=100)
    assert rep["schema"] == "dunklsb-report/1"
    assert rep["summary"]["failed"] == 0
    with pytest.raises(ValueError):
        dunklsb.run_suite(bogus=1)


def test_restriction_report_small():
    r = dunklsb.restriction_report([1.0], 1.0, basis=4, degree=20, nodes=40)
    assert r["sigma_max"] <= 1 + 1e-8
    assert r["cross_parity_max"] < 1e-12
