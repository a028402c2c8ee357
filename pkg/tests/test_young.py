import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlab.young import (
    BRho,
    ConvergenceError,
    Custom,
    DomainError,
    GrowthFunction,
    Partner,
    PhiRho,
    Power,
    PsiConjugate,
    Rescaled,
    conjugate_defect,
    conjugate_identity_defect,
    has_lower_type_above_one,
    lower_type_constant,
    probe_grid,
    solve_increasing,
    submultiplicativity_constant,
)

BUILTINS = [
    Power(2.0),
    Power(0.5),
    PhiRho(1.0),
    PhiRho(2.0),
    BRho(1.0),
    BRho(2.0),
    Rescaled(PhiRho(1.0), 2.0),
    PsiConjugate(1.0, 2.0),
    Partner(Rescaled(PhiRho(1.0), 2.0)),
    Custom((0.0, 1.0, 2.0, 5.0), (0.0, 0.5, 3.0, 4.0)),
]
IDS = [repr(A) for A in BUILTINS]


def test_eval_examples():
    assert PhiRho(1.0).eval(0.0) == 0.0
    assert Power(2.0).eval(3.0) == 9.0
    assert BRho(2.0).eval(1.0) == pytest.approx(1.0 / math.log(math.e + 1.0) ** 2, rel=1e-15)


def test_eval_is_vectorised_and_scalar_in_scalar_out():
    out = PhiRho(1.0).eval(np.array([0.0, 1.0, 2.0]))
    assert out.shape == (3,)
    assert isinstance(PhiRho(1.0).eval(2.0), float)


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_eval_domain_errors(bad):
    with pytest.raises(DomainError):
        PhiRho(1.0).eval(bad)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -2.0])
def test_inverse_domain_errors(bad):
    with pytest.raises(DomainError):
        BRho(1.0).inverse(bad)


def test_inverse_examples():
    assert Power(2.0).inverse(9.0) == 3.0
    assert PhiRho(1.0).inverse(PhiRho(1.0).eval(5.0)) == pytest.approx(5.0, rel=1e-14)
    assert BRho(1.0).inverse(BRho(1.0).eval(0.25)) == pytest.approx(0.25, rel=1e-14)


@pytest.mark.parametrize("A", BUILTINS, ids=IDS)
def test_inverse_residual(A):
    y = np.geomspace(1e-12, 1e12, 400)
    t = A.inverse(y)
    assert np.all(np.abs(A.eval(t) - y) <= 1e-12 * np.maximum(1.0, y) + 1e-12 * y)


@pytest.mark.parametrize("A", BUILTINS, ids=IDS)
def test_round_trip_on_probe_range(A):
    t = np.geomspace(1e-8, 1e8, 300)
    assert np.allclose(A.inverse(A.eval(t)), t, rtol=1e-10, atol=0)


@pytest.mark.parametrize("A", BUILTINS, ids=IDS)
def test_strictly_increasing_and_zero_at_zero(A):
    t = np.geomspace(1e-8, 1e8, 500)
    assert np.all(np.diff(A.eval(t)) > 0)
    assert A.eval(0.0) == 0.0
    assert A.inverse(0.0) == 0.0


def test_b_rho_is_reciprocal_of_phi_rho():
    t = probe_grid()
    for rho in (0.5, 1.0, 2.0):
        prod = BRho(rho).eval(t) * PhiRho(rho).eval(1.0 / t)
        assert np.max(np.abs(prod - 1.0)) <= 1e-14


def test_rescaled_is_exact_composition():
    A = PhiRho(1.0)
    t = np.geomspace(1e-6, 1e6, 100)
    for r in (2.0, 3.5):
        assert np.array_equal(Rescaled(A, r).eval(t), A.eval(t**r))
        y = np.geomspace(1e-6, 1e6, 100)
        assert np.allclose(Rescaled(A, r).inverse(y), A.inverse(y) ** (1.0 / r), rtol=1e-10, atol=0)


def test_rescaled_requires_r_above_one():
    with pytest.raises(ValueError):
        Rescaled(PhiRho(1.0), 1.0)


def test_partner_identity_is_exact():
    A = Rescaled(PhiRho(1.0), 2.0)
    y = np.geomspace(1e-8, 1e8, 200)
    assert np.allclose(A.inverse(y) * Partner(A).inverse(y), y, rtol=1e-15, atol=0)
    assert conjugate_defect(A, Partner(A)) == pytest.approx(1.0, abs=1e-14)


def test_psi_conjugate_exponents():
    psi = PsiConjugate.from_conjugate_exponent(1.0, 11.0)
    assert psi.r_prime == pytest.approx(11.0, rel=1e-14)
    assert psi.r == pytest.approx(1.1, rel=1e-14)


def test_custom_table_validation():
    with pytest.raises(ValueError):
        Custom((0.0, 1.0), (0.0, 0.0))
    with pytest.raises(ValueError):
        Custom((1.0, 2.0), (0.0, 1.0))
    A = Custom((0.0, 1.0, 2.0), (0.0, 1.0, 3.0))
    assert A.eval(1.5) == 2.0
    assert A.eval(3.0) == 5.0
    assert A.inverse(5.0) == 3.0


@pytest.mark.parametrize("A", BUILTINS, ids=IDS)
def test_json_round_trip(A):
    obj = json.loads(json.dumps(A.to_json()))
    B = GrowthFunction.from_json(obj)
    assert B == A
    t = np.geomspace(1e-3, 1e3, 7)
    assert np.array_equal(B.eval(t), A.eval(t))


def test_json_errors_name_valid_kinds():
    with pytest.raises(ValueError, match="phi_rho"):
        GrowthFunction.from_json({"kind": "nope", "params": {}})
    with pytest.raises(ValueError):
        GrowthFunction.from_json({"params": {}})


def test_solve_increasing_reports_out_of_bracket():
    with pytest.raises(ConvergenceError):
        solve_increasing(lambda t: np.minimum(t, 1.0), 2.0)


def test_submultiplicativity_power_is_one():
    assert submultiplicativity_constant(Power(2.0)) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("rho,upper", [(1.0, 4.0), (2.0, math.inf)])
def test_submultiplicativity_phi_rho_stable(rho, upper):
    coarse = submultiplicativity_constant(PhiRho(rho), probe_grid(1e-6, 1e6, 200))
    fine = submultiplicativity_constant(PhiRho(rho), probe_grid(1e-6, 1e6, 200, refine=1))
    assert 1.0 <= coarse <= upper
    assert abs(fine / coarse - 1.0) < 0.05


def test_lower_type_examples():
    assert lower_type_constant(Power(2.0), 2.0).constant == pytest.approx(1.0, rel=1e-12)
    phi = lower_type_constant(PhiRho(1.0), 1.0)
    assert phi.stable and 1.0 <= phi.constant < math.inf
    resc = lower_type_constant(Rescaled(PhiRho(1.0), 2.0), 2.0)
    assert resc.stable and math.isfinite(resc.constant)


def test_lower_type_flags_failure():
    # t^2 is not of lower type 3: A(st)/(s^3 A(t)) = 1/s blows up
    assert not lower_type_constant(Power(2.0), 3.0).stable
    assert has_lower_type_above_one(Rescaled(PhiRho(1.0), 2.0))
    assert not has_lower_type_above_one(PhiRho(1.0))


def test_conjugate_identity_defect_examples():
    assert conjugate_identity_defect(1.0, 2.0, [1.0]) <= 4.0
    d12 = conjugate_identity_defect(1.0, 2.0, probe_grid())
    d12_fine = conjugate_identity_defect(1.0, 2.0, probe_grid(refine=1))
    assert math.isfinite(d12) and abs(d12_fine / d12 - 1.0) < 0.05
    d210 = conjugate_identity_defect(2.0, 10.0, probe_grid())
    assert d210 <= 2.0 * d12 and d12 <= 2.0 * d210


@given(
    t=st.floats(min_value=1e-6, max_value=1e6),
    idx=st.integers(min_value=0, max_value=len(BUILTINS) - 1),
)
def test_round_trip_property(t, idx):
    A = BUILTINS[idx]
    assert A.inverse(A.eval(t)) == pytest.approx(t, rel=1e-10)


@given(s=st.floats(min_value=1e-4, max_value=1e4), t=st.floats(min_value=1e-4, max_value=1e4))
def test_phi_submultiplicative_property(s, t):
    A = PhiRho(1.0)
    c = submultiplicativity_constant(A)
    assert A.eval(s * t) <= c * A.eval(s) * A.eval(t) * (1 + 1e-12)
