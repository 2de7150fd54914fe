import json

import numpy as np
import pytest

from uhlfid import (
    DomainError,
    RankError,
    StateSeed,
    check_block_structure,
    commuting_oracle,
    maximally_mixed,
    random_density,
    run_property_suite,
    validate,
)
from uhlfid.verify import DEFAULT_PROFILE, PROFILES, PROPERTY_NAMES, STRICT_PROFILE


class TestBlockStructure:
    def test_exact_null_row(self):
        rho = validate(np.diag([1.0, 0.0]))
        sigma = random_density(2, 2, StateSeed(50, 1))
        report = check_block_structure(rho, sigma)
        assert report.p == 1 and report.q == 1
        assert report.max_lower_left <= 1e-12

    def test_rank_two_of_four(self):
        rho = random_density(4, 2, StateSeed(51, 0))
        sigma = random_density(4, 4, StateSeed(51, 1))
        report = check_block_structure(rho, sigma)
        assert report.p == 2 and report.q == 2
        assert report.spec_distance <= 1e-8
        assert report.m_offdiag <= 1e-9
        assert report.max_lower_left <= 1e-9

    def test_full_rank_rejected(self):
        rho = random_density(3, 3, StateSeed(52, 0))
        with pytest.raises(RankError):
            check_block_structure(rho, maximally_mixed(3))

    def test_bulk_rank_dim_combinations(self):
        # 100 (n, rank) combinations across n in {2, 4, 8}
        count = 0
        k = 0
        while count < 100:
            n = (2, 4, 8)[k % 3]
            rank = 1 + k % (n - 1) if n > 2 else 1
            rho = random_density(n, rank, StateSeed(53, 2 * k))
            sigma = random_density(n, n, StateSeed(53, 2 * k + 1))
            report = check_block_structure(rho, sigma)
            assert report.p + report.q == n
            assert report.m_offdiag <= 1e-9
            assert report.max_lower_left <= 1e-9
            assert report.spec_distance <= 1e-8
            count += 1
            k += 1


class TestCommutingOracle:
    def test_identical_vectors(self):
        assert commuting_oracle([0.2, 0.8], [0.2, 0.8]) == pytest.approx(1.0, abs=1e-15)

    def test_disjoint_support(self):
        assert commuting_oracle([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_value(self):
        expected = 0.5 + np.sqrt(3.0) / 4.0
        assert abs(commuting_oracle([0.75, 0.25], [0.5, 0.5]) - expected) <= 1e-15

    def test_rejects_negative_entry(self):
        with pytest.raises(DomainError):
            commuting_oracle([1.1, -0.1], [0.5, 0.5])

    def test_rejects_bad_sum(self):
        with pytest.raises(DomainError):
            commuting_oracle([0.6, 0.6], [0.5, 0.5])

    def test_rejects_length_mismatch(self):
        with pytest.raises(DomainError):
            commuting_oracle([1.0], [0.5, 0.5])


class TestPropertySuite:
    def test_smoke_runs_all_properties(self):
        report = run_property_suite(1, [2], 123)
        assert [p.name for p in report.properties] == list(PROPERTY_NAMES)
        assert all(p.evaluations >= 1 for p in report.properties)

    def test_determinism_byte_identical(self):
        a = run_property_suite(2, [2, 4], 7)
        b = run_property_suite(2, [2, 4], 7)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_default_profile_passes(self):
        report = run_property_suite(3, [2, 4, 8], 99)
        failed = [p.name for p in report.properties if not p.passed]
        assert report.all_passed, f"failed properties: {failed}"

    def test_fault_injection_fails_suite(self):
        report = run_property_suite(1, [2], 1, fault_property="symmetry")
        assert not report.all_passed
        by_name = {p.name: p for p in report.properties}
        assert not by_name["symmetry"].passed
        assert by_name["symmetry"].detail == "injected fault (test hook)"

    def test_unknown_fault_name_rejected(self):
        with pytest.raises(DomainError):
            run_property_suite(1, [2], 1, fault_property="nope")

    def test_bad_trials_rejected(self):
        with pytest.raises(DomainError):
            run_property_suite(0, [2], 1)

    def test_bad_dims_rejected(self):
        with pytest.raises(DomainError):
            run_property_suite(1, [1], 1)
        with pytest.raises(DomainError):
            run_property_suite(1, [], 1)

    def test_profiles_registered(self):
        assert PROFILES["default"] is DEFAULT_PROFILE
        assert PROFILES["strict"] is STRICT_PROFILE
        assert STRICT_PROFILE.symmetry == pytest.approx(DEFAULT_PROFILE.symmetry / 10)

    @pytest.mark.slow
    def test_acceptance_defaults_pass(self):
        # the documented default run: dims 2,4,8,16 at 50 trials per property
        report = run_property_suite(50, [2, 4, 8, 16], 0)
        failed = [(p.name, p.worst_residual, p.threshold)
                  for p in report.properties if not p.passed]
        assert report.all_passed, f"failed properties: {failed}"
