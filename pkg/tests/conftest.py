import json

import pytest

from framesynth import parse_ruleset
from framesynth.schema import FrameRecord


def make_doc() -> dict:
    """A small, complete, lint-clean ruleset document for unit tests.

    Tests mutate the returned dict to produce targeted failures, then
    round-trip through JSON.
    """
    return {
        "version": 1,
        "label_distribution": {
            "counts": {"0": 60, "1": 25, "2": 15},
            "class_names": {"0": "Normal", "1": "Flooding", "2": "Impersonation"},
        },
        "type_mix_by_label_percent": {
            "0": {"0": 50, "2": 50},
            "1": {"0": 100},
            "2": {"1": 50, "2": 50},
        },
        "wlan_fc_subtype_by_label_and_type_percent": {
            "0": {"0": {"4": 50, "8": 50}, "2": {"0": 100}},
            "1": {"0": {"12": 100}},
            "2": {"1": {"13": 100}, "2": {"8": 100}},
        },
        "encodings": {
            "type_to_subtype_allowlists_numeric": {"0": [4, 8, 12], "1": [13], "2": [0, 8]}
        },
        "channel_frequency_by_label_percent": {
            "0": {"2412": 100},
            "1": {"2412": 50, "5180": 50},
            "2": {"5180": 100},
        },
        "radiotap": {
            "observed_24_flags_percent": {"1,0": 50, "0,1": 50},
            "length_mix_percent": {"36": 60, "64": 40},
            "radiotap_length_by_label_percent": {},
            "tsft_for_length": {"36": 0.5, "64": 0.0},
            "tsft_for_length_by_label": {},
        },
        "rssi_rules": {
            "0": {"-50": 100},
            "1": {"-40": 50, "-60": 50},
            "2": {"-45": 100},
        },
        "wlan_fc_ds_rules": {"data_quota_percent": {"2": 50, "3": 50}},
        "frame_length_rules": {
            "0": {"100": 100},
            "1": {"60": 50, "80": 50},
            "2": {"120": 100},
        },
        "duration_rules": {
            "control_by_subtype_percent": {"13": {"0": 100}},
            "by_label_percent": {"0": {"0": 50, "44": 50}, "1": {"10": 100}, "2": {"0": 100}},
        },
        "protected_joint_policy": {
            "quota_targets": {
                "mgmt_percent": {"0": 10, "1": 40, "2": 0},
                "overall_percent": {"0": 50, "1": 0, "2": 20},
            },
            "locks": [],
            "never_touch_when": [],
        },
        "post_flags_quota": {
            "retry_by_label_pct": {"0": 10, "1": 20, "2": 0},
            "pwrmgt_by_label_pct": {"0": 0, "1": 0, "2": 0},
            "moredata_by_label_pct": {},
            "forbid": {},
        },
    }


def parse_doc(doc: dict):
    return parse_ruleset(json.dumps(doc))


def make_record(**overrides) -> FrameRecord:
    base = dict(
        wlan_fc_type=0,
        wlan_fc_subtype=8,
        wlan_fc_ds=1,
        frame_len=100,
        wlan_duration=0,
        radiotap_channel_freq=2412,
        radiotap_flags_cck=1,
        radiotap_flags_ofdm=0,
        radiotap_length=36,
        radiotap_present_tsft=0,
        radiotap_dbm_antsignal=-50,
        wlan_fc_frag=0,
        wlan_fc_retry=0,
        wlan_fc_pwrmgt=0,
        wlan_fc_moredata=0,
        wlan_fc_protected=0,
        label=0,
    )
    base.update(overrides)
    return FrameRecord(**base)


@pytest.fixture
def tiny_doc():
    return make_doc()


@pytest.fixture
def tiny_rs():
    return parse_doc(make_doc())
