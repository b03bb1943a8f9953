import dataclasses
import io

import pytest

from framesynth import (
    DiscreteDistribution,
    GenerationConfig,
    GuardPredicate,
    InfeasibleRulesetError,
    apply_label_overrides,
    check,
    emit_row,
    encode_csv,
    enforce_quotas,
    generate,
    match_percent,
    reference_ruleset,
    shuffle_dataset,
)
from framesynth.generator import (
    RULE_BAND_FLAGS,
    RULE_CONTROL_DURATION,
    RULE_DS_BY_TYPE,
    RULE_FRAME_LENGTH,
    RULE_SUBTYPE_ALLOWLIST,
    RULE_TSFT_AT_64,
    round_half_up,
)
from framesynth.ruleset import MissingRuleError, scaled_ruleset
from framesynth.sampling import Prng
from framesynth.schema import Dataset

from .conftest import make_doc, make_record, parse_doc


def single(value):
    return DiscreteDistribution(entries=((value, 100.0),))


def degenerate_doc():
    """All single-entry distributions: emit_row output is fully determined."""
    doc = make_doc()
    doc["label_distribution"]["counts"] = {"0": 5, "1": 0, "2": 0}
    doc["type_mix_by_label_percent"] = {"0": {"0": 100}}
    doc["wlan_fc_subtype_by_label_and_type_percent"] = {"0": {"0": {"8": 100}}}
    doc["channel_frequency_by_label_percent"] = {"0": {"2412": 100}}
    doc["radiotap"]["observed_24_flags_percent"] = {"1,0": 100}
    doc["radiotap"]["length_mix_percent"] = {"36": 100}
    doc["radiotap"]["tsft_for_length"] = {"36": 0.0}
    doc["rssi_rules"] = {"0": {"-50": 100}}
    doc["frame_length_rules"] = {"0": {"100": 100}}
    doc["duration_rules"]["by_label_percent"] = {"0": {"44": 100}}
    doc["protected_joint_policy"]["quota_targets"] = {
        "mgmt_percent": {"0": 0},
        "overall_percent": {"0": 0},
    }
    doc["post_flags_quota"] = {
        "retry_by_label_pct": {},
        "pwrmgt_by_label_pct": {},
        "moredata_by_label_pct": {},
        "forbid": {},
    }
    return doc


class TestEmitRow:
    def test_fully_determined_record(self):
        rs = parse_doc(degenerate_doc())
        for seed in range(10):
            r = emit_row(rs, 0, Prng(seed))
            assert (r.wlan_fc_type, r.wlan_fc_subtype, r.wlan_fc_ds) == (0, 8, 1)
            assert (r.frame_len, r.wlan_duration, r.radiotap_channel_freq) == (100, 44, 2412)
            assert (r.radiotap_flags_cck, r.radiotap_flags_ofdm) == (1, 0)
            assert (r.radiotap_length, r.radiotap_present_tsft) == (36, 0)
            assert r.radiotap_dbm_antsignal == -50
            assert (r.wlan_fc_frag, r.wlan_fc_retry, r.wlan_fc_pwrmgt) == (0, 0, 0)
            assert (r.wlan_fc_moredata, r.wlan_fc_protected, r.label) == (0, 0, 0)

    def test_5ghz_forces_ofdm_regardless_of_flag_mix(self):
        doc = degenerate_doc()
        doc["channel_frequency_by_label_percent"] = {"0": {"5180": 100}}
        rs = parse_doc(doc)
        # Flag mix says (1, 0) with certainty, but 5180 MHz must override it.
        assert rs.flags24_mix.entries == (((1, 0), 100.0),)
        for seed in range(20):
            r = emit_row(rs, 0, Prng(seed))
            assert (r.radiotap_flags_cck, r.radiotap_flags_ofdm) == (0, 1)

    def test_management_forces_ds_one(self, tiny_rs):
        rng = Prng(3)
        for _ in range(200):
            r = emit_row(tiny_rs, 0, rng)
            if r.wlan_fc_type in (0, 1):
                assert r.wlan_fc_ds == 1
            else:
                assert r.wlan_fc_ds in (2, 3)

    def test_missing_subtype_distribution(self, tiny_rs):
        rs = dataclasses.replace(tiny_rs, subtype_mix={})
        with pytest.raises(MissingRuleError):
            emit_row(rs, 0, Prng(0))


class TestCheck:
    def test_tsft_at_64_rejected(self, tiny_rs):
        r = make_record(radiotap_length=64, radiotap_present_tsft=1)
        report = check(tiny_rs, r)
        assert not report.valid
        assert RULE_TSFT_AT_64 in [rule for rule, _ in report.violations]

    def test_5ghz_with_cck_rejected(self, tiny_rs):
        r = make_record(radiotap_channel_freq=5180, radiotap_flags_cck=1, radiotap_flags_ofdm=0)
        report = check(tiny_rs, r)
        assert RULE_BAND_FLAGS in [rule for rule, _ in report.violations]

    def test_both_flags_rejected(self, tiny_rs):
        r = make_record(radiotap_flags_cck=1, radiotap_flags_ofdm=1)
        assert RULE_BAND_FLAGS in [rule for rule, _ in check(tiny_rs, r).violations]

    def test_subtype_allowlist(self, tiny_rs):
        r = make_record(wlan_fc_subtype=13)  # 13 is control-only in the tiny ruleset
        assert RULE_SUBTYPE_ALLOWLIST in [rule for rule, _ in check(tiny_rs, r).violations]

    def test_ds_rule(self, tiny_rs):
        r = make_record(wlan_fc_ds=2)
        assert RULE_DS_BY_TYPE in [rule for rule, _ in check(tiny_rs, r).violations]

    def test_control_duration(self, tiny_rs):
        r = make_record(wlan_fc_type=1, wlan_fc_subtype=13, wlan_duration=999, frame_len=100)
        assert RULE_CONTROL_DURATION in [rule for rule, _ in check(tiny_rs, r).violations]

    def test_frame_length_support(self, tiny_rs):
        r = make_record(frame_len=4444)
        assert RULE_FRAME_LENGTH in [rule for rule, _ in check(tiny_rs, r).violations]

    def test_reports_every_violation(self, tiny_rs):
        r = make_record(
            radiotap_length=64,
            radiotap_present_tsft=1,
            frame_len=4444,
            wlan_fc_ds=3,
        )
        rules = [rule for rule, _ in check(tiny_rs, r).violations]
        assert set(rules) == {RULE_TSFT_AT_64, RULE_FRAME_LENGTH, RULE_DS_BY_TYPE}

    def test_emit_then_check_always_valid(self, tiny_rs):
        # Generate-then-check oracle over every label.
        rng = Prng(12)
        for label in (0, 1, 2):
            for _ in range(3000):
                assert check(tiny_rs, emit_row(tiny_rs, label, rng)).valid

    def test_valid_record(self, tiny_rs):
        assert check(tiny_rs, make_record()).valid


class TestOverrides:
    def test_lock_sets_both_fields(self):
        rs = reference_ruleset()
        r = make_record(label=1, frame_len=26, radiotap_length=48, radiotap_present_tsft=0)
        locked = apply_label_overrides(rs, r)
        assert locked.radiotap_length == 56
        assert locked.radiotap_present_tsft == 1

    def test_no_locks_no_change(self):
        rs = reference_ruleset()
        r = make_record(label=0)
        assert apply_label_overrides(rs, r) is r

    def test_locked_row_still_valid(self):
        rs = reference_ruleset()
        rng = Prng(4)
        for _ in range(500):
            r = emit_row(rs, 1, rng)
            assert check(rs, apply_label_overrides(rs, r)).valid


class TestMatchPercent:
    def test_target_equals_current_no_changes(self):
        rows = [make_record(wlan_fc_retry=1) for _ in range(25)]
        rows += [make_record() for _ in range(75)]
        ds = Dataset(rows=list(rows))
        out, n, want, got = match_percent(
            ds, "wlan_fc_retry", 25.0, lambda r: True, (), Prng(0)
        )
        assert (n, want, got) == (100, 25, 25)
        assert out.rows == rows
        assert all(a is b for a, b in zip(out.rows, rows))

    def test_sets_exact_count(self):
        ds = Dataset(rows=[make_record() for _ in range(100)])
        out, n, want, got = match_percent(ds, "wlan_fc_retry", 25.0, lambda r: True, (), Prng(1))
        assert (n, want, got) == (100, 25, 25)
        assert sum(r.wlan_fc_retry for r in out.rows) == 25

    def test_clears_down_to_target(self):
        ds = Dataset(rows=[make_record(wlan_fc_retry=1) for _ in range(100)])
        out, _, want, got = match_percent(ds, "wlan_fc_retry", 10.0, lambda r: True, (), Prng(2))
        assert want == got == 10
        assert sum(r.wlan_fc_retry for r in out.rows) == 10

    def test_guard_shortfall(self):
        # 100 eligible rows, 90 guarded: target 20 but only 10 modifiable.
        guarded = [make_record(wlan_duration=44) for _ in range(90)]
        free = [make_record(wlan_duration=0) for _ in range(10)]
        guards = (GuardPredicate(conjunctions=(("wlan_duration", 44),)),)
        ds = Dataset(rows=guarded + free)
        out, n, want, got = match_percent(ds, "wlan_fc_retry", 20.0, lambda r: True, guards, Prng(3))
        assert (n, want, got) == (100, 20, 10)
        assert all(r.wlan_fc_retry == 0 for r in out.rows[:90])
        assert all(r.wlan_fc_retry == 1 for r in out.rows[90:])

    def test_round_half_up(self):
        assert round_half_up(24.5) == 25
        assert round_half_up(24.49999) == 24
        assert round_half_up(0.0) == 0


class TestEnforceQuotas:
    def test_all_zero_targets_no_locks_unchanged(self):
        doc = degenerate_doc()
        rs = parse_doc(doc)
        ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=5, seed=1))
        out, shortfalls = enforce_quotas(rs, ds, Prng(99))
        assert out.rows == ds.rows
        assert shortfalls == []

    def test_locks_enforced_on_every_labeled_row(self):
        rs = reference_ruleset()
        rs = scaled_ruleset(rs, 2000)
        ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=2000, seed=21))
        for r in ds.rows:
            if r.label == 1:
                assert r.radiotap_length == 56
                assert r.radiotap_present_tsft == 1

    def test_quota_recount_exact(self, tiny_rs):
        rs = scaled_ruleset(tiny_rs, 2000)
        ds, stats = generate(GenerationConfig(ruleset=rs, total_rows=2000, seed=8))
        assert stats.quota_shortfalls == []
        policy = rs.quota_policy
        for label in (0, 1, 2):
            mgmt = [r for r in ds.rows if r.label == label and r.wlan_fc_type == 0]
            want = round_half_up(policy.protected_mgmt_percent[label] * len(mgmt) / 100)
            assert sum(r.wlan_fc_protected for r in mgmt) == want
            data = [r for r in ds.rows if r.label == label and r.wlan_fc_type == 2]
            want = round_half_up(policy.protected_overall_percent[label] * len(data) / 100)
            assert sum(r.wlan_fc_protected for r in data) == want
            eligible = [r for r in ds.rows if r.label == label]
            want = round_half_up(policy.post_flag_percent["retry"].get(label, 0.0) * len(eligible) / 100)
            assert sum(r.wlan_fc_retry for r in eligible) == want

    def test_guarded_rows_bit_identical(self):
        doc = make_doc()
        doc["protected_joint_policy"]["never_touch_when"] = [{"wlan_fc_subtype": 4}]
        rs = scaled_ruleset(parse_doc(doc), 1000)
        ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=1000, seed=13))
        # Re-run only the flag stages over a pre-quota copy to compare guards.
        pre_rows = [r for r in ds.rows if r.wlan_fc_subtype == 4]
        for r in pre_rows:
            assert r.wlan_fc_retry == 0
            assert r.wlan_fc_protected == 0

    def test_forbid_excluded_from_eligibility(self):
        doc = make_doc()
        doc["post_flags_quota"]["retry_by_label_pct"] = {"0": 100, "1": 0, "2": 0}
        doc["post_flags_quota"]["forbid"] = {"retry": [[0, 4]]}
        rs = scaled_ruleset(parse_doc(doc), 1000)
        ds, stats = generate(GenerationConfig(ruleset=rs, total_rows=1000, seed=17))
        assert stats.quota_shortfalls == []
        for r in ds.rows:
            if r.label == 0 and (r.wlan_fc_type, r.wlan_fc_subtype) == (0, 4):
                assert r.wlan_fc_retry == 0
            elif r.label == 0:
                assert r.wlan_fc_retry == 1


class TestGenerate:
    def test_exact_counts_class_ratio(self, tiny_doc):
        tiny_doc["label_distribution"]["counts"] = {"0": 970, "1": 20, "2": 10}
        rs = parse_doc(tiny_doc)
        ds, stats = generate(GenerationConfig(ruleset=rs, total_rows=1000, seed=7))
        counts = {label: 0 for label in (0, 1, 2)}
        for r in ds.rows:
            counts[r.label] += 1
        assert counts == {0: 970, 1: 20, 2: 10}
        assert stats.rows_by_label == counts

    def test_determinism_byte_identical(self, tiny_rs):
        rs = scaled_ruleset(tiny_rs, 1000)

        def run() -> bytes:
            ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=1000, seed=5))
            buf = io.BytesIO()
            encode_csv(ds, buf)
            return buf.getvalue()

        assert run() == run()

    def test_rows_ordered_by_label(self, tiny_rs):
        rs = scaled_ruleset(tiny_rs, 500)
        ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=500, seed=5))
        labels = [r.label for r in ds.rows]
        assert labels == sorted(labels)

    def test_total_mismatch_rejected(self, tiny_rs):
        with pytest.raises(ValueError, match="does not match"):
            generate(GenerationConfig(ruleset=tiny_rs, total_rows=1, seed=0))

    def test_infeasible_ruleset_raises(self, tiny_rs):
        # Hand-built pathology: the only 2.4 GHz flag pair is (1, 1), which the
        # band/flag rule always rejects, so label 0 can never emit a valid row.
        rs = dataclasses.replace(
            tiny_rs,
            flags24_mix=DiscreteDistribution(entries=(((1, 1), 100.0),)),
            label_counts={0: 100, 1: 0, 2: 0},
        )
        cfg = GenerationConfig(ruleset=rs, total_rows=100, seed=0, max_attempts_per_row=50)
        with pytest.raises(InfeasibleRulesetError, match="label 0"):
            generate(cfg)

    def test_rejections_counted(self, tiny_rs):
        rs = dataclasses.replace(
            tiny_rs,
            flags24_mix=DiscreteDistribution(entries=(((1, 1), 50.0), ((1, 0), 50.0))),
            label_counts={0: 50, 1: 0, 2: 0},
        )
        ds, stats = generate(GenerationConfig(ruleset=rs, total_rows=50, seed=3))
        assert len(ds.rows) == 50
        assert stats.rejections_by_rule.get(RULE_BAND_FLAGS, 0) > 0
        assert stats.attempts_by_label[0] > 50

    def test_shuffle_preserves_multiset(self, tiny_rs):
        rs = scaled_ruleset(tiny_rs, 300)
        ds, _ = generate(GenerationConfig(ruleset=rs, total_rows=300, seed=5))
        shuffled = shuffle_dataset(ds, Prng(5).derive("shuffle"))
        assert shuffled.rows != ds.rows
        assert sorted(map(repr, shuffled.rows)) == sorted(map(repr, ds.rows))

    def test_max_attempts_validation(self, tiny_rs):
        with pytest.raises(ValueError, match="max_attempts"):
            generate(
                GenerationConfig(
                    ruleset=tiny_rs, total_rows=tiny_rs.total_rows(), seed=0, max_attempts_per_row=0
                )
            )
