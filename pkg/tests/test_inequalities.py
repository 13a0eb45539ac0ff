# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from core import spectral
from core.ensembles import InstanceShape, OperatorInstance, sample_instance, trial_rng
from core.errors import InvalidParameters, ShapeMismatch, UnknownInequality
from core.evaluator import evaluate
from core.inequalities import (
    REGISTRY,
    FnFamily,
    InequalityParams,
    Status,
    get_descriptor,
    list_ids,
    random_decreasing_fn,
    random_increasing_fn,
    random_nonnegative_fn,
)
from core.linalg import ComplexMatrix
from core.spectral import ScalarFn, StateVector

# 驗收清單中的 established 不等式
ACCEPTANCE_IDS = [
    "I1.1L", "I1.1R", "I1.2", "I1.3L", "I1.3R", "I1.4", "T1.1", "T2.1", "C2.2α",
    "SCHWARZ", "REID", "HALMOS", "KATO", "KITT", "KEY", "FK3", "KITT-SQ", "CORDES",
]


def single(matrix, x=None):
    x = StateVector(x if x is not None else [1, 0])
    return OperatorInstance(
        shape=InstanceShape.SINGLE,
        matrices=(ComplexMatrix(np.asarray(matrix, dtype=complex)),),
        states=(x, x),
    )


def with_state(matrix, x, y=None):
    x = StateVector(x)
    return OperatorInstance(
        shape=InstanceShape.OPERATOR_STATE,
        matrices=(ComplexMatrix(np.asarray(matrix, dtype=complex)),),
        states=(x, StateVector(y) if y is not None else x),
    )


class TestRegistry:
    def test_acceptance_ids_are_established(self):
        for key in ACCEPTANCE_IDS:
            assert get_descriptor(key).status is Status.ESTABLISHED

    def test_novel_and_as_printed(self):
        assert get_descriptor("I1.5").status is Status.AS_PRINTED
        for key in ("E4.2", "E4.9", "EQ2.11", "EQ2.18", "EQ2.23", "EQ2.24"):
            assert get_descriptor(key).status is Status.NOVEL

    def test_list_ids_sorted_and_filtered(self):
        ids = list_ids()
        assert ids == sorted(REGISTRY)
        established = list_ids(Status.ESTABLISHED)
        assert set(established) <= set(ids)
        assert "EQ2.23" not in established

    def test_alias(self):
        assert get_descriptor("C2.2a").id == "C2.2α"

    def test_unknown(self):
        with pytest.raises(UnknownInequality):
            get_descriptor("I9.9")

    def test_violation_verdict(self):
        assert Status.ESTABLISHED.violation_verdict == "FAIL"
        assert Status.NOVEL.violation_verdict == "FINDING"
        assert Status.AS_PRINTED.violation_verdict == "FINDING"

    def test_inhomogeneous_flags(self):
        assert get_descriptor("I1.5").inhomogeneous
        assert get_descriptor("EQ2.23").inhomogeneous
        assert not get_descriptor("I1.1L").inhomogeneous

    def test_descriptor_json(self):
        data = get_descriptor("EQ2.18").to_json()
        assert data["params"] == {"alpha": [0.0, 1.0], "n": [1, 8]}
        assert data["status"] == "paper-novel"


class TestParams:
    def test_defaults(self):
        params = get_descriptor("EQ2.18").resolve_params(None)
        assert params.alpha == 0.5
        assert params.n == 2

    def test_monotone_defaults(self):
        params = get_descriptor("T1.1").resolve_params({})
        assert params.mode == "sync"
        assert params.f == ScalarFn.identity()
        assert params.g == ScalarFn.power(2.0)

    @pytest.mark.parametrize("key, params", [
        ("EQ2.23", {"alpha": 1.5}),
        ("C2.2α", {"alpha": 0.75}),
        ("E4.6", {"p": 0.0}),
        ("EQ2.18", {"n": 0}),
        ("T1.1", {"mode": "sideways"}),
    ])
    def test_out_of_range(self, key, params):
        with pytest.raises(InvalidParameters):
            get_descriptor(key).resolve_params(params)

    def test_unparsable_function(self):
        with pytest.raises(InvalidParameters):
            InequalityParams.from_json({"f": {"kind": "cosine"}})

    def test_params_json(self):
        params = InequalityParams(alpha=0.25, f=ScalarFn.poly([1.0, 2.0]), mode="async")
        assert InequalityParams.from_json(params.to_json()) == params

    def test_sampled_params_in_range(self, rng):
        for key in list_ids():
            descriptor = get_descriptor(key)
            for _ in range(5):
                resolved = descriptor.resolve_params(descriptor.sample_params(rng))
                if descriptor.params.fns is FnFamily.MONOTONE:
                    assert resolved.mode in ("sync", "async")

    def test_function_families(self, rng):
        t = np.linspace(0.0, 16.0, 200)
        for _ in range(50):
            inc = random_increasing_fn(rng)(t)
            dec = random_decreasing_fn(rng)(t)
            assert np.all(np.diff(inc) >= -1e-12)
            assert np.all(np.diff(dec) <= 1e-12)
            assert np.all(random_nonnegative_fn(rng)(t) >= 0)


class TestCannedExamples:
    def test_norm_bound_equality(self):
        report = evaluate("I1.1R", single(np.diag([1, -3])))
        assert report.lhs == pytest.approx(3.0, abs=1e-10)
        assert report.rhs == pytest.approx(3.0, abs=1e-12)
        assert abs(report.slack) <= 1e-9
        assert not report.violated

    def test_j2_lower_bound_equality(self, J2):
        report = evaluate("I1.3L", single(J2.entries))
        assert report.lhs == pytest.approx(0.25, abs=1e-12)
        assert report.rhs == pytest.approx(0.25, abs=1e-8)
        assert not report.violated

    def test_power_bound_violation(self):
        report = evaluate("EQ2.23", single(4 * np.eye(2)), {"alpha": 0.5})
        assert report.lhs == pytest.approx(4.0, abs=1e-12)
        assert report.rhs == pytest.approx(2.0, abs=1e-12)
        assert report.slack == pytest.approx(-2.0, abs=1e-12)
        assert report.violated
        assert report.status is Status.NOVEL

    def test_as_printed_violation(self):
        # 4I：w² = 16 > ½(4 + 16)
        report = evaluate("I1.5", single(4 * np.eye(2)))
        assert report.lhs == pytest.approx(16.0, abs=1e-9)
        assert report.rhs == pytest.approx(10.0, abs=1e-9)
        assert report.violated

    def test_key_equality(self):
        e = np.array([1, 0], dtype=complex)
        inst = OperatorInstance(shape=InstanceShape.VECTOR_TRIPLE, vectors=(e, e, e))
        report = evaluate("KEY", inst)
        assert report.lhs == pytest.approx(1.0)
        assert report.rhs == pytest.approx(1.0)
        assert not report.violated

    def test_key_requires_unit_e(self):
        e = np.array([1, 0], dtype=complex)
        inst = OperatorInstance(shape=InstanceShape.VECTOR_TRIPLE, vectors=(e, e, 2 * e))
        with pytest.raises(InvalidParameters):
            evaluate("KEY", inst)

    def test_monotone_sync(self, half_state):
        report = evaluate("T1.1", with_state(np.diag([0, 1]), half_state))
        assert report.lhs == 0.0
        assert report.rhs == pytest.approx(0.25, abs=1e-12)

    def test_monotone_async(self, half_state):
        params = {"mode": "async", "f": {"kind": "identity"}, "g": {"kind": "poly", "coeffs": [1.0, -1.0]}}
        report = evaluate("T1.1", with_state(np.diag([0, 1]), half_state), params)
        assert report.lhs == pytest.approx(-0.25, abs=1e-12)
        assert report.rhs == 0.0
        assert not report.violated

    def test_pre_gruss_two_atoms_is_tight(self, half_state):
        # 兩個原子時 f, g 在譜上仿射相關，等號成立
        report = evaluate("T2.1", with_state(np.diag([1, 3]), half_state))
        assert report.slack == pytest.approx(0.0, abs=1e-9)
        assert report.details["double_sum"] == pytest.approx(report.lhs, abs=1e-12)

    def test_chain_details(self, J2):
        report = evaluate("I1.4", single(J2.entries))
        assert {"aluthge.lhs", "aluthge.rhs", "square.lhs", "square.rhs"} <= set(report.details)
        assert report.slack == pytest.approx(
            min(report.details["aluthge.rhs"] - report.details["aluthge.lhs"],
                report.details["square.rhs"] - report.details["square.lhs"])
        )

    def test_cordes_commuting_equality(self):
        a = ComplexMatrix.diag([1, 4])
        inst = OperatorInstance(shape=InstanceShape.PAIR, matrices=(a, a),
                                states=(StateVector([1, 0]), StateVector([0, 1])))
        report = evaluate("CORDES", inst)
        assert report.lhs == pytest.approx(4.0, abs=1e-10)
        assert report.rhs == pytest.approx(4.0, abs=1e-12)

    def test_eq224_closed_form(self):
        report = evaluate("EQ2.24", single(np.eye(2)))
        assert report.details["closed_form.rhs"] == pytest.approx(0.25 * (1 + 1 + math.sqrt(4)))


class TestEvaluateErrors:
    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            evaluate("REID", single(np.eye(2)))

    def test_requires_psd(self, J2, half_state):
        with pytest.raises(ShapeMismatch):
            evaluate("T2.1", with_state(J2.entries, half_state))

    def test_invalid_params(self):
        with pytest.raises(InvalidParameters):
            evaluate("EQ2.23", single(np.eye(2)), {"alpha": 2.0})

    def test_domain_error_is_inconclusive(self):
        params = {"f": {"kind": "sqrt_of", "inner": {"kind": "poly", "coeffs": [-1.0]}}}
        report = evaluate("E4.5", single(np.diag([1.0, 2.0])), params)
        assert report.inconclusive
        assert report.outcome == "INCONCLUSIVE"
        assert report.error.startswith("DomainError")
        assert report.lhs is None and not report.violated

    def test_negative_variance_is_inconclusive(self, monkeypatch, half_state):
        monkeypatch.setattr(spectral, "_cheb_parts", lambda f, g, A, x: (-1e-6, 1.0))
        report = evaluate("T2.1", with_state(np.diag([1, 3]), half_state))
        assert report.inconclusive
        assert report.error.startswith("ConsistencyError")
        assert not report.violated


class TestRandomInstances:
    @pytest.mark.parametrize("key", list_ids())
    def test_every_id_evaluates(self, key, rng):
        descriptor = get_descriptor(key)
        for ensemble in descriptor.default_ensembles:
            inst = sample_instance(descriptor.shape, ensemble, 3, rng)
            report = evaluate(key, inst, descriptor.sample_params(rng))
            if not report.inconclusive:
                assert math.isfinite(report.lhs) and math.isfinite(report.rhs)
                assert report.slack == report.rhs - report.lhs
                assert report.tol > 0

    @pytest.mark.parametrize("key", list_ids(Status.ESTABLISHED))
    def test_established_hold(self, key):
        descriptor = get_descriptor(key)
        for t in range(30):
            rng = trial_rng(7, key, t)
            ensemble = descriptor.default_ensembles[t % len(descriptor.default_ensembles)]
            inst = sample_instance(descriptor.shape, ensemble, int(rng.integers(2, 6)), rng)
            report = evaluate(key, inst, descriptor.sample_params(rng))
            assert not report.violated, report.to_json()
