import json

import pytest
from hypothesis import given, settings, strategies as st

from qcong.congruences import (
    CongruenceClaim,
    ScanCeilingError,
    ScanConfig,
    ScanReport,
    VerificationResult,
    builtin_catalog,
    catalog_lists,
    scan,
    select_catalog,
    verify_catalog,
    verify_claim,
    verify_frobenius_congruence,
)
from qcong.partitions import a_bruteforce, a_table_series
from qcong.series import EXACT

# Catalog entries that fail numerically, with witnesses re-derived below by brute force.
REFUTED = {
    "T3[alpha=0]:a_5(9n+19) mod 3": (2, 1),
    "T3[alpha=1]:a_5(81n+172) mod 3": (2, 1),
    "T8.1:a_5(7n+3) mod 2": (0, 1),
    "T8.1:a_5(11n+3) mod 2": (0, 1),
    "T8.1:a_5(13n+3) mod 2": (0, 1),
    "T8.1:a_5(17n+3) mod 2": (0, 1),
    "T8.1:a_5(19n+3) mod 2": (0, 1),
    "S5:a_5(13n+3) mod 2": (0, 1),
    "S5:a_5(17n+3) mod 2": (0, 1),
    "S5:a_5(19n+3) mod 2": (0, 1),
}


class TestClaim:
    def test_two_power_coupling(self):
        CongruenceClaim(k0=8, A=2, B=1, M=8, modulus_family="two_power")
        with pytest.raises(ValueError):
            CongruenceClaim(k0=6, A=2, B=1, M=6, modulus_family="two_power")
        with pytest.raises(ValueError):
            CongruenceClaim(k0=4, A=2, B=1, M=2, modulus_family="two_power")

    def test_fixed_modulus_needs_two(self):
        with pytest.raises(ValueError):
            CongruenceClaim(k0=3, A=2, B=1, M=1)

    def test_json_round_trip(self):
        c = CongruenceClaim(k0=4, c=11, A=11, B=10, M=11)
        d = c.to_json()
        assert d == {"k": {"c": 11, "k0": 4}, "A": 11, "B": 10, "M": 11}
        assert CongruenceClaim.from_json(json.loads(json.dumps(d))) == c


class TestVerifyClaim:
    def test_two_power_r2(self):
        r = verify_claim(CongruenceClaim(k0=4, A=2, B=1, M=4, modulus_family="two_power"), 1000)
        assert r.verified and r.checked_n_up_to == 499

    def test_negative_control(self):
        assert a_bruteforce(3, 2) == 7
        r = verify_claim(CongruenceClaim(k0=3, A=5, B=2, M=2), 100)
        assert r.status == "counterexample"
        assert (r.witness.j, r.witness.k, r.witness.n, r.witness.residue) == (0, 3, 0, 1)

    def test_a5_mod5(self):
        assert verify_claim(CongruenceClaim(k0=5, A=5, B=3, M=5), 2000).verified

    def test_r0_vacuous(self):
        r = verify_claim(CongruenceClaim(k0=1, A=2, B=1, M=1, modulus_family="two_power"), 100)
        assert r.verified

    def test_family_reports_j(self):
        # p(1) = 1 is odd, so the family dies at j = 0
        r = verify_claim(CongruenceClaim(k0=1, c=2, A=2, B=1, M=2), 50, j_max=2)
        assert r.witness.j == 0 and r.witness.k == 1
        assert r.checked_j_up_to == 2

    def test_precision_must_reach_offset(self):
        with pytest.raises(ValueError):
            verify_claim(CongruenceClaim(k0=3, A=5, B=10, M=2), 10)

    def test_result_json_round_trip(self):
        r = verify_claim(CongruenceClaim(k0=3, A=5, B=2, M=2), 100)
        assert VerificationResult.from_json(json.loads(json.dumps(r.to_json()))) == r


class TestCatalog:
    def test_size_and_distinct(self):
        cat = builtin_catalog()
        assert len(cat) >= 40
        assert len({name for name, _ in cat}) == len(cat)

    def test_mod3_offsets(self):
        claims = {(c.k0, c.A, c.B, c.M) for _, c in builtin_catalog()}
        assert (153 * 3**0 - 1) // 8 == 19
        assert (5, 9, 19, 3) in claims
        assert (5, 81, 172, 3) in claims

    def test_identity_13(self):
        claims = {(c.k0, c.A, c.B, c.M) for _, c in builtin_catalog()}
        assert (5, 6, 5, 2) in claims

    def test_group_counts(self):
        def count(prefix):
            return len(select_catalog(prefix))

        assert count("T1") == 5
        assert count("T5") == 7
        assert count("T6") == 8
        assert count("T7") == 10
        assert count("T8") == 8
        assert count("T9") == 5
        assert count("S5") == 6

    def test_select_unknown(self):
        with pytest.raises(KeyError):
            select_catalog("T99")

    def test_catalog_findings(self):
        results = verify_catalog(2000, 3, workers=1)
        failures = {name: (r.witness.n, r.witness.residue) for name, r in results if not r.verified}
        assert failures == REFUTED

    @pytest.mark.parametrize("name", sorted(REFUTED))
    def test_refutations_confirmed_independently(self, name):
        claim = dict(builtin_catalog())[name]
        n, residue = REFUTED[name]
        index = claim.A * n + claim.B
        value = a_bruteforce(claim.k0, index) if index <= 40 else a_table_series(claim.k0, EXACT, index + 1)[index]
        assert value % claim.M == residue

    def test_mod3_holds_with_next_power_of_three(self):
        # the refuted progression 9n+19 does hold on the sub-progression 27n+19
        assert verify_claim(CongruenceClaim(k0=5, A=27, B=19, M=3), 6000).verified

    def test_deterministic_across_workers(self):
        one = [(n, r.to_json()) for n, r in verify_catalog(800, 2, workers=1)]
        many = [(n, r.to_json()) for n, r in verify_catalog(800, 2, workers=4)]
        assert one == many

    def test_catalog_lists(self):
        assert catalog_lists(3, 2, 13, 6) == ["T7:a_3(13n+6) mod 2", "S5:a_3(13n+6) mod 2"]
        assert catalog_lists(25, 11, 11, 1) == []
        assert catalog_lists(22, 11, 11, 1) == ["T9:a_{11j+11}(11n+1) mod 11"]


class TestSoundness:
    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(st.integers(1, 6), st.integers(2, 7), st.integers(2, 13), st.data())
    def test_counterexamples_reproduce(self, k, M, A, data):
        B = data.draw(st.integers(0, A - 1))
        r = verify_claim(CongruenceClaim(k0=k, A=A, B=B, M=M), 200)
        if r.status == "counterexample":
            idx = A * r.witness.n + B
            exact = a_bruteforce(k, idx) if idx <= 40 else a_table_series(k, EXACT, idx + 1)[idx]
            assert exact % M == r.witness.residue != 0
            for m in range(r.witness.n):
                assert a_table_series(k, EXACT, idx + 1)[A * m + B] % M == 0

    @pytest.mark.parametrize("name,claim", [(n, c) for n, c in builtin_catalog() if n not in REFUTED][:20])
    def test_monotone_in_precision(self, name, claim):
        if verify_claim(claim, 1500, 1).verified:
            for n in (claim.B + 1, 500, 1000):
                if n > claim.B:
                    assert verify_claim(claim, n, 1).verified


class TestScan:
    def test_mod2_progressions_rediscovered(self):
        primes = (5, 7, 11, 13, 17)
        report = scan(ScanConfig(k_values=(3,), moduli=(2,), A_values=primes, n=3000), workers=1)
        found = {(e.A, e.B) for e in report.survivors}
        expected = {(5, 3), (7, 3), (11, 3), (13, 3), (17, 3), (5, 4), (7, 4), (7, 6), (11, 6), (13, 6)}
        assert expected <= found
        assert all(e.listed for e in report.survivors if (e.A, e.B) in expected)

    def test_a5_3n_plus_2(self):
        report = scan(ScanConfig((5,), (2,), (3,), n=1000))
        assert [(e.A, e.B) for e in report.survivors] == [(3, 2)]

    def test_ramanujan(self):
        report = scan(ScanConfig((1,), (11,), (11,), n=2000))
        assert [(e.A, e.B) for e in report.survivors] == [(11, 6)]

    def test_no_survivor_mod2_step2(self):
        report = scan(ScanConfig((3,), (2,), (2,), n=500))
        assert report.survivors == []
        assert len(report.entries) == 2

    def test_grid_exact_cover(self):
        cfg = ScanConfig((1, 2), (2, 3), (4, 5), n=200)
        report = scan(cfg)
        assert len(report.entries) == cfg.grid_size() == 2 * 2 * 9
        keys = {(e.k, e.M, e.A, e.B) for e in report.entries}
        assert keys == set(cfg.grid())

    def test_survivors_sorted(self):
        report = scan(ScanConfig((5, 3), (2, 3), (3, 5, 7), n=600))
        keys = [(e.M, e.k, e.A, e.B) for e in report.survivors]
        assert keys == sorted(keys)

    def test_ceiling(self):
        with pytest.raises(ScanCeilingError) as info:
            scan(ScanConfig((3,), (2,), (13,), n=3000, ceiling=1000))
        assert info.value.cost == 13 * 3000

    def test_scanner_verifier_coherence(self):
        report = scan(ScanConfig((3, 4), (2, 3), (5, 7), n=700))
        for e in report.entries:
            r = verify_claim(CongruenceClaim(k0=e.k, A=e.A, B=e.B, M=e.M), 700)
            assert r.status == e.status
            if e.witness:
                assert (r.witness.n, r.witness.residue) == (e.witness["n"], e.witness["residue"])

    def test_report_round_trip(self):
        report = scan(ScanConfig((3,), (2,), (5, 7), n=300))
        data = json.loads(json.dumps(report.to_json()))
        again = ScanReport.from_json(data)
        assert again.to_json() == report.to_json()

    def test_config_from_json_ranges(self):
        cfg = ScanConfig.from_json({"k": 3, "moduli": [2], "A": {"min": 2, "max": 5}, "N": 100})
        assert cfg.A_values == (2, 3, 4, 5) and cfg.k_values == (3,)


class TestFrobenius:
    @pytest.mark.parametrize("m,p,k", [(1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 1), (2, 11, 1), (1, 7, 1)])
    def test_holds(self, m, p, k):
        assert verify_frobenius_congruence(m, p, k, 500) == (True, None)

    def test_not_true_mod_higher_power(self):
        from qcong.eta import f_ell
        from qcong.series import Mod, power

        # f_1^2 == f_2 holds mod 2 only; mod 4 they differ at q^1 (-2 vs 0)
        a, b = power(f_ell(1, Mod(4), 50), 2), f_ell(2, Mod(4), 50)
        assert (a[1], b[1]) == (2, 0)

    def test_requires_prime(self):
        with pytest.raises(ValueError):
            verify_frobenius_congruence(1, 4, 1, 10)
