"""Exactly-N rule-compliant dataset generation.

The pipeline separates three concerns so that target distributions and
multi-field invariants survive together: per-row sampling (emit), hard
constraint validation with rejection (check + resample), and a post-hoc
quota stage (locks first, then protected-flag targets, then the remaining
flag quotas) that never touches guarded rows. A single seed determines the
output bytes; every stage draws from its own derived child stream, so
stages cannot perturb each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .ruleset import GuardPredicate, MissingRuleError, Ruleset
from .sampling import Prng, draw_bernoulli, draw_categorical, draw_rssi
from .schema import Dataset, FrameRecord

# Rule identifiers in fixed order; histograms and reports key off these.
RULE_SUBTYPE_ALLOWLIST = "subtype-allowlist"
RULE_BAND_FLAGS = "band-flags"
RULE_DS_BY_TYPE = "ds-by-type"
RULE_TSFT_AT_64 = "tsft-at-64"
RULE_CONTROL_DURATION = "control-duration"
RULE_FRAME_LENGTH = "frame-length"
CHECK_RULE_IDS = (
    RULE_SUBTYPE_ALLOWLIST,
    RULE_BAND_FLAGS,
    RULE_DS_BY_TYPE,
    RULE_TSFT_AT_64,
    RULE_CONTROL_DURATION,
    RULE_FRAME_LENGTH,
)

DEFAULT_MAX_ATTEMPTS_PER_ROW = 10_000


class GenerationError(Exception):
    pass


class InfeasibleRulesetError(GenerationError):
    """A row for some label kept failing validation past the attempt budget."""


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class GenerationConfig:
    ruleset: Ruleset
    total_rows: int
    seed: int
    max_attempts_per_row: int = DEFAULT_MAX_ATTEMPTS_PER_ROW


@dataclass
class QuotaShortfall:
    """A quota stage that could not reach its rounded target count."""

    stage: str
    flag: str
    label: int
    eligible: int
    target_count: int
    achieved_count: int

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "flag": self.flag,
            "label": self.label,
            "eligible": self.eligible,
            "target_count": self.target_count,
            "achieved_count": self.achieved_count,
        }


@dataclass
class GenerationStats:
    rows_by_label: dict[int, int] = field(default_factory=dict)
    attempts_by_label: dict[int, int] = field(default_factory=dict)
    rejections_by_rule: dict[str, int] = field(default_factory=dict)
    quota_shortfalls: list[QuotaShortfall] = field(default_factory=list)

    @property
    def total_rows(self) -> int:
        return sum(self.rows_by_label.values())

    @property
    def total_attempts(self) -> int:
        return sum(self.attempts_by_label.values())

    def to_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "total_attempts": self.total_attempts,
            "rows_by_label": {str(k): v for k, v in sorted(self.rows_by_label.items())},
            "attempts_by_label": {str(k): v for k, v in sorted(self.attempts_by_label.items())},
            "rejections_by_rule": {k: self.rejections_by_rule.get(k, 0) for k in CHECK_RULE_IDS},
            "quota_shortfalls": [s.to_dict() for s in self.quota_shortfalls],
        }


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves away from zero toward +inf."""
    return math.floor(x + 0.5)


def emit_row(rs: Ruleset, label: int, rng: Prng) -> FrameRecord:
    """Sample one candidate record for a label.

    Fixed draw order: type, subtype, channel frequency, 2.4 GHz flag pair
    (skipped and forced to (0,1) at 5180 MHz), radiotap length (per-label
    override else global mix), TSFT presence, signal strength, DS direction
    (forced to 1 for management/control, drawn over {2,3} for data), frame
    length, then duration (per-subtype table for control frames, per-label
    table otherwise). The five post-hoc flag bits start at 0.
    """
    ftype = draw_categorical(rs.type_mix[label], rng)
    try:
        subtype_dist = rs.subtype_mix[(label, ftype)]
    except KeyError:
        raise MissingRuleError(f"no subtype distribution for label {label}, type {ftype}") from None
    subtype = draw_categorical(subtype_dist, rng)

    freq = draw_categorical(rs.channel_freq_mix[label], rng)
    if freq == 5180:
        cck, ofdm = 0, 1
    else:
        cck, ofdm = draw_categorical(rs.flags24_mix, rng)

    rtlen = draw_categorical(rs.radiotap_length_mix.for_label(label), rng)
    tsft = draw_bernoulli(rs.tsft_policy.probability_for(label, rtlen), rng)
    rssi = draw_rssi(rs.rssi_rules[label], rng)

    if ftype in (0, 1):
        ds = 1
    else:
        ds = draw_categorical(rs.ds_data_quota, rng)
    frame_len = draw_categorical(rs.frame_length_rules[label], rng)

    if ftype == 1:
        try:
            duration_dist = rs.duration_control_by_subtype[subtype]
        except KeyError:
            raise MissingRuleError(f"no control-duration table for subtype {subtype}") from None
        duration = draw_categorical(duration_dist, rng)
    else:
        duration = draw_categorical(rs.duration_by_label[label], rng)

    return FrameRecord(
        wlan_fc_type=ftype,
        wlan_fc_subtype=subtype,
        wlan_fc_ds=ds,
        frame_len=frame_len,
        wlan_duration=duration,
        radiotap_channel_freq=freq,
        radiotap_flags_cck=cck,
        radiotap_flags_ofdm=ofdm,
        radiotap_length=rtlen,
        radiotap_present_tsft=tsft,
        radiotap_dbm_antsignal=rssi,
        wlan_fc_frag=0,
        wlan_fc_retry=0,
        wlan_fc_pwrmgt=0,
        wlan_fc_moredata=0,
        wlan_fc_protected=0,
        label=label,
    )


def check(rs: Ruleset, r: FrameRecord) -> ValidationReport:
    """Validate a record against all six hard rules; reports every violation.

    Accepts arbitrary records, including decoded external data. "Support"
    means the values listed in a distribution, zero-percent entries included,
    so rulesets can whitelist values for external validation that the
    generator itself never draws.
    """
    violations: list[tuple[str, str]] = []

    allowed = rs.allowlists.get(r.wlan_fc_type, frozenset())
    if r.wlan_fc_subtype not in allowed:
        violations.append(
            (RULE_SUBTYPE_ALLOWLIST, f"subtype {r.wlan_fc_subtype} not allowed for type {r.wlan_fc_type}")
        )

    if r.radiotap_channel_freq == 5180 and not (r.radiotap_flags_ofdm == 1 and r.radiotap_flags_cck == 0):
        violations.append(
            (RULE_BAND_FLAGS, f"5180 MHz requires (cck, ofdm) = (0, 1), got ({r.radiotap_flags_cck}, {r.radiotap_flags_ofdm})")
        )
    elif r.radiotap_flags_cck == 1 and r.radiotap_flags_ofdm == 1:
        violations.append((RULE_BAND_FLAGS, "cck and ofdm both set"))

    if r.wlan_fc_type in (0, 1) and r.wlan_fc_ds != 1:
        violations.append((RULE_DS_BY_TYPE, f"type {r.wlan_fc_type} requires ds=1, got {r.wlan_fc_ds}"))
    elif r.wlan_fc_type == 2 and r.wlan_fc_ds not in (2, 3):
        violations.append((RULE_DS_BY_TYPE, f"data frames require ds in {{2, 3}}, got {r.wlan_fc_ds}"))

    if r.radiotap_length == 64 and r.radiotap_present_tsft == 1:
        violations.append((RULE_TSFT_AT_64, "tsft must be 0 when radiotap length is 64"))

    if r.wlan_fc_type == 1:
        table = rs.duration_control_by_subtype.get(r.wlan_fc_subtype)
        legal = table.support() if table is not None else frozenset()
        if r.wlan_duration not in legal:
            violations.append(
                (RULE_CONTROL_DURATION, f"duration {r.wlan_duration} not legal for control subtype {r.wlan_fc_subtype}")
            )

    length_rule = rs.frame_length_rules.get(r.label)
    supported = length_rule.support() if length_rule is not None else frozenset()
    if r.frame_len not in supported:
        violations.append(
            (RULE_FRAME_LENGTH, f"frame length {r.frame_len} unsupported for label {r.label}")
        )

    return ValidationReport(valid=not violations, violations=tuple(violations))


def apply_label_overrides(rs: Ruleset, r: FrameRecord) -> FrameRecord:
    """Apply every hard lock registered for the record's label."""
    updates: dict[str, int] = {}
    for lock in rs.quota_policy.locks:
        if lock.label == r.label:
            updates.update(lock.assignments)
    if not updates:
        return r
    return replace(r, **updates)


def _is_guarded(r: FrameRecord, guards: tuple[GuardPredicate, ...]) -> bool:
    return any(g.matches(r) for g in guards)


def match_percent(
    ds: Dataset,
    flag_field: str,
    target: float,
    eligible: Callable[[FrameRecord], bool],
    guards: tuple[GuardPredicate, ...],
    rng: Prng,
) -> tuple[Dataset, int, int, int]:
    """Set or clear a flag bit until its count over the eligible rows hits target.

    The target count is round-half-up(target% x |eligible|), counted over the
    whole eligible set; guarded rows contribute their current value but are
    never modified. Rows to flip are chosen in a seeded-shuffle order from the
    unguarded eligible rows. Returns (dataset, eligible_count, target_count,
    achieved_count); a caller records a shortfall when achieved != target.
    """
    if not 0.0 <= target <= 100.0:
        raise ValueError(f"target percent {target} outside [0, 100]")
    rows = list(ds.rows)
    eligible_idx = [i for i, r in enumerate(rows) if eligible(r)]
    n_eligible = len(eligible_idx)
    target_count = round_half_up(target * n_eligible / 100.0)
    current = sum(1 for i in eligible_idx if getattr(rows[i], flag_field) == 1)
    delta = target_count - current

    if delta != 0:
        want_value = 1 if delta > 0 else 0
        have_value = 1 - want_value
        candidates = [
            i
            for i in eligible_idx
            if getattr(rows[i], flag_field) == have_value and not _is_guarded(rows[i], guards)
        ]
        rng.shuffle(candidates)
        for i in candidates[: abs(delta)]:
            rows[i] = replace(rows[i], **{flag_field: want_value})

    achieved = sum(1 for i in eligible_idx if getattr(rows[i], flag_field) == 1)
    return Dataset(rows=rows, schema_version=ds.schema_version), n_eligible, target_count, achieved


def enforce_quotas(rs: Ruleset, ds: Dataset, rng: Prng) -> tuple[Dataset, list[QuotaShortfall]]:
    """Run the quota stage: locks first, then protected targets, then flag quotas.

    Stage order is fixed: (1) per-label hard locks; (2) for each label, the
    protected bit on management rows to the mgmt target, then on data rows to
    the overall target; (3) for retry, pwrmgt, moredata in that order, per
    label, with the flag's forbid list excluded from eligibility. Guarded rows
    are never modified by any stage. Every stage owns a child RNG stream keyed
    by (seed, flag, label, stage), so stages are order-independent.
    """
    policy = rs.quota_policy
    shortfalls: list[QuotaShortfall] = []

    rows = [apply_label_overrides(rs, r) for r in ds.rows]
    out = Dataset(rows=rows, schema_version=ds.schema_version)

    for label in sorted(rs.label_counts):
        for stage, target, type_value in (
            ("mgmt", policy.protected_mgmt_percent.get(label, 0.0), 0),
            ("overall", policy.protected_overall_percent.get(label, 0.0), 2),
        ):
            out, n_eligible, target_count, achieved = match_percent(
                out,
                "wlan_fc_protected",
                target,
                lambda r, lbl=label, tv=type_value: r.label == lbl and r.wlan_fc_type == tv,
                policy.guards,
                rng.derive(f"quota/wlan_fc_protected/{stage}/label{label}"),
            )
            if achieved != target_count:
                shortfalls.append(
                    QuotaShortfall(stage, "wlan_fc_protected", label, n_eligible, target_count, achieved)
                )

    for flag in ("retry", "pwrmgt", "moredata"):
        flag_field = f"wlan_fc_{flag}"
        forbidden = frozenset(policy.forbid.get(flag, ()))
        for label in sorted(rs.label_counts):
            target = policy.post_flag_percent.get(flag, {}).get(label, 0.0)
            out, n_eligible, target_count, achieved = match_percent(
                out,
                flag_field,
                target,
                lambda r, lbl=label, fb=forbidden: r.label == lbl
                and (r.wlan_fc_type, r.wlan_fc_subtype) not in fb,
                policy.guards,
                rng.derive(f"quota/{flag_field}/flag/label{label}"),
            )
            if achieved != target_count:
                shortfalls.append(
                    QuotaShortfall("flag", flag_field, label, n_eligible, target_count, achieved)
                )

    return out, shortfalls


def generate(cfg: GenerationConfig) -> tuple[Dataset, GenerationStats]:
    """Produce exactly the configured number of rule-compliant rows per label.

    Rows are emitted per label by rejection sampling (emit, check, resample),
    then the quota stage runs over the assembled dataset. Output order is by
    label, then emission order. Raises InfeasibleRulesetError when a single
    row exceeds the per-row attempt budget, which signals an inconsistent
    ruleset rather than looping forever.
    """
    rs = cfg.ruleset
    if cfg.total_rows != rs.total_rows():
        raise ValueError(
            f"total_rows {cfg.total_rows} does not match ruleset label counts ({rs.total_rows()})"
        )
    if cfg.max_attempts_per_row < 1:
        raise ValueError("max_attempts_per_row must be >= 1")

    master = Prng(cfg.seed)
    stats = GenerationStats()
    rows: list[FrameRecord] = []

    for label in sorted(rs.label_counts):
        wanted = rs.label_counts[label]
        emitted = 0
        attempts_for_label = 0
        rng = master.derive(f"emit/label{label}")
        while emitted < wanted:
            attempts_this_row = 0
            while True:
                attempts_this_row += 1
                attempts_for_label += 1
                candidate = emit_row(rs, label, rng)
                report = check(rs, candidate)
                if report.valid:
                    rows.append(candidate)
                    emitted += 1
                    break
                for rule_id, _ in report.violations:
                    stats.rejections_by_rule[rule_id] = stats.rejections_by_rule.get(rule_id, 0) + 1
                if attempts_this_row >= cfg.max_attempts_per_row:
                    raise InfeasibleRulesetError(
                        f"label {label}: {attempts_this_row} consecutive rejections for one row; "
                        "the ruleset cannot satisfy its own constraints"
                    )
        stats.rows_by_label[label] = emitted
        stats.attempts_by_label[label] = attempts_for_label

    ds = Dataset(rows=rows)
    ds, shortfalls = enforce_quotas(rs, ds, master)
    stats.quota_shortfalls = shortfalls

    counts: dict[int, int] = {}
    for r in ds.rows:
        counts[r.label] = counts.get(r.label, 0) + 1
        post = check(rs, r)
        if not post.valid:
            raise GenerationError(f"internal error: post-quota row violates {post.violations[0][0]}")
    if counts != {l: c for l, c in rs.label_counts.items() if c > 0}:
        raise GenerationError("internal error: per-label counts drifted during the quota stage")

    return ds, stats


def shuffle_dataset(ds: Dataset, rng: Prng) -> Dataset:
    """Seeded full shuffle of row order (for ML consumers; contents unchanged)."""
    rows = list(ds.rows)
    rng.shuffle(rows)
    return Dataset(rows=rows, schema_version=ds.schema_version)
