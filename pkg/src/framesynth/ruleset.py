"""Ruleset document: parsing, serialization, and authoring-time lint.

A ruleset is a versioned JSON document holding every statistical input the
generator consumes: per-class row counts, per-class feature distributions,
protocol allowlists, hard per-class field locks, guard predicates, and
post-hoc flag quota targets. Parsing is strict (unknown keys are rejected)
so documents stay exchangeable between tools; lint checks the semantic
cross-references that decide whether the generator can actually satisfy
the document. The grammar is documented in docs/ruleset.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Union

from . import schema

RULESET_VERSION = 1
CLASSES = (0, 1, 2)
DEFAULT_CLASS_NAMES = {0: "Normal", 1: "Flooding", 2: "Impersonation"}
POST_FLAGS = ("retry", "pwrmgt", "moredata")

PERCENT_SUM_TOLERANCE = 1e-6

Value = Union[int, tuple[int, int]]


class RulesetError(Exception):
    """Base class for ruleset document failures."""


class RulesetParseError(RulesetError):
    """The document is not well-formed JSON."""


class RulesetSchemaError(RulesetError):
    """Missing required section, unknown key, or wrong node type."""


class RulesetDomainError(RulesetError):
    """A value is outside its legal domain (percent range, sum, duplicates)."""


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite support with occurrence percentages; the atomic sampling unit.

    Entry order is document order and is significant: categorical draws scan
    cumulative percentages in exactly this order.
    """

    entries: tuple[tuple[Value, float], ...]

    def values(self) -> tuple[Value, ...]:
        return tuple(v for v, _ in self.entries)

    def support(self) -> frozenset:
        """All listed values, including zero-percent entries."""
        return frozenset(v for v, _ in self.entries)

    def percent_of(self, value: Value) -> float:
        for v, p in self.entries:
            if v == value:
                return p
        return 0.0


@dataclass(frozen=True)
class TsftPolicy:
    """Bernoulli probabilities for the TSFT presence bit, keyed by radiotap length."""

    by_length: dict[int, float]
    by_label_override: dict[int, dict[int, float]] = field(default_factory=dict)

    def probability_for(self, label: int, length: int) -> float:
        override = self.by_label_override.get(label)
        if override is not None and length in override:
            return override[length]
        try:
            return self.by_length[length]
        except KeyError:
            raise MissingRuleError(
                f"no tsft probability for radiotap length {length} (label {label})"
            ) from None


@dataclass(frozen=True)
class RadiotapLengthMix:
    """Global radiotap-length distribution with optional per-label overrides."""

    global_mix: DiscreteDistribution
    by_label: dict[int, DiscreteDistribution] = field(default_factory=dict)

    def for_label(self, label: int) -> DiscreteDistribution:
        return self.by_label.get(label, self.global_mix)


@dataclass(frozen=True)
class LockRule:
    """Hard per-class field assignments applied before any flag quota."""

    label: int
    assignments: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class GuardPredicate:
    """Conjunction of field equalities; a row is guarded when all pairs hold."""

    conjunctions: tuple[tuple[str, int], ...]

    def matches(self, record: schema.FrameRecord) -> bool:
        return all(getattr(record, f) == v for f, v in self.conjunctions)


@dataclass(frozen=True)
class QuotaPolicy:
    """Quota targets, forbid lists, locks, and guards for the post-hoc flag stage."""

    protected_mgmt_percent: dict[int, float]
    protected_overall_percent: dict[int, float]
    post_flag_percent: dict[str, dict[int, float]]
    forbid: dict[str, tuple[tuple[int, int], ...]]
    locks: tuple[LockRule, ...]
    guards: tuple[GuardPredicate, ...]


@dataclass(frozen=True)
class Ruleset:
    """Complete statistical specification driving generation.

    Immutable after parsing; safe to share across threads.
    """

    version: int
    label_counts: dict[int, int]
    class_names: dict[int, str]
    type_mix: dict[int, DiscreteDistribution]
    subtype_mix: dict[tuple[int, int], DiscreteDistribution]
    allowlists: dict[int, frozenset[int]]
    channel_freq_mix: dict[int, DiscreteDistribution]
    flags24_mix: DiscreteDistribution
    radiotap_length_mix: RadiotapLengthMix
    tsft_policy: TsftPolicy
    rssi_rules: dict[int, DiscreteDistribution]
    ds_data_quota: DiscreteDistribution
    frame_length_rules: dict[int, DiscreteDistribution]
    duration_control_by_subtype: dict[int, DiscreteDistribution]
    duration_by_label: dict[int, DiscreteDistribution]
    quota_policy: QuotaPolicy

    def active_labels(self) -> tuple[int, ...]:
        return tuple(l for l in CLASSES if self.label_counts.get(l, 0) > 0)

    def total_rows(self) -> int:
        return sum(self.label_counts.values())


class MissingRuleError(RulesetError, KeyError):
    """A draw needed a (label, type) or subtype entry the ruleset does not define."""


# ---------------------------------------------------------------------------
# parsing


def _expect_object(node: Any, where: str) -> dict:
    if not isinstance(node, dict):
        raise RulesetSchemaError(f"{where}: expected an object")
    return dict(node)


def _take(node: dict, key: str, where: str, required: bool = True, default: Any = None) -> Any:
    if key in node:
        return node.pop(key)
    if required:
        raise RulesetSchemaError(f"{where}: missing required key '{key}'")
    return default


def _reject_unknown(node: dict, where: str) -> None:
    if node:
        name = sorted(node)[0]
        raise RulesetSchemaError(f"{where}: unknown key '{name}'")


def _parse_number(node: Any, where: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise RulesetSchemaError(f"{where}: expected a number")
    return float(node)


def _parse_int(node: Any, where: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise RulesetSchemaError(f"{where}: expected an integer")
    return node


def _parse_label_key(key: str, where: str) -> int:
    try:
        label = int(key)
    except ValueError:
        raise RulesetSchemaError(f"{where}: label key {key!r} is not an integer") from None
    if label not in CLASSES:
        raise RulesetSchemaError(f"{where}: label {label} outside {{0, 1, 2}}")
    return label


def _parse_int_key(key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise RulesetSchemaError(f"{where}: key {key!r} is not an integer") from None


def _parse_flag_pair_key(key: str, where: str) -> tuple[int, int]:
    parts = key.split(",")
    if len(parts) == 2:
        try:
            pair = (int(parts[0]), int(parts[1]))
        except ValueError:
            pair = None
        if pair in ((1, 0), (0, 1)):
            return pair
    raise RulesetSchemaError(f"{where}: flag pair key {key!r} must be '1,0' or '0,1'")


def _parse_distribution(node: Any, where: str, key_parser=_parse_int_key) -> DiscreteDistribution:
    obj = _expect_object(node, where)
    if not obj:
        raise RulesetDomainError(f"{where}: distribution has no entries")
    entries: list[tuple[Value, float]] = []
    seen: set[Value] = set()
    total = 0.0
    for key, raw in obj.items():
        value = key_parser(key, where)
        percent = _parse_number(raw, f"{where}[{key}]")
        if percent < 0:
            raise RulesetDomainError(f"{where}[{key}]: percent {percent} is negative")
        if value in seen:
            raise RulesetDomainError(f"{where}: duplicate value {key}")
        seen.add(value)
        total += percent
        entries.append((value, percent))
    if abs(total - 100.0) > PERCENT_SUM_TOLERANCE:
        raise RulesetDomainError(f"{where}: percents sum to {total!r}, expected 100")
    return DiscreteDistribution(entries=tuple(entries))


def _parse_per_label(node: Any, where: str, parser, *, allow_partial: bool = False) -> dict:
    obj = _expect_object(node, where)
    out = {}
    for key, raw in obj.items():
        label = _parse_label_key(key, where)
        out[label] = parser(raw, f"{where}[{key}]")
    return out


def _parse_percent(node: Any, where: str) -> float:
    value = _parse_number(node, where)
    if not 0.0 <= value <= 100.0:
        raise RulesetDomainError(f"{where}: percent {value} outside [0, 100]")
    return value


def _parse_probability(node: Any, where: str) -> float:
    value = _parse_number(node, where)
    if not 0.0 <= value <= 1.0:
        raise RulesetDomainError(f"{where}: probability {value} outside [0, 1]")
    return value


def _parse_field_name(key: str, where: str) -> str:
    name = schema.HEADER_ALIASES.get(key)
    if name is None or name == schema.LABEL_FIELD:
        raise RulesetSchemaError(f"{where}: {key!r} is not a frame schema field")
    return name


def _parse_tsft_lengths(node: Any, where: str) -> dict[int, float]:
    obj = _expect_object(node, where)
    return {
        _parse_int_key(k, where): _parse_probability(v, f"{where}[{k}]") for k, v in obj.items()
    }


def _parse_locks(node: Any, where: str) -> tuple[LockRule, ...]:
    if not isinstance(node, list):
        raise RulesetSchemaError(f"{where}: expected a list")
    locks = []
    for i, raw in enumerate(node):
        lock_where = f"{where}[{i}]"
        obj = _expect_object(raw, lock_where)
        label = _parse_int(_take(obj, "label", lock_where), f"{lock_where}.label")
        if label not in CLASSES:
            raise RulesetSchemaError(f"{lock_where}.label: {label} outside {{0, 1, 2}}")
        assignments_obj = _expect_object(_take(obj, "set", lock_where), f"{lock_where}.set")
        _reject_unknown(obj, lock_where)
        assignments = tuple(
            (_parse_field_name(k, f"{lock_where}.set"), _parse_int(v, f"{lock_where}.set[{k}]"))
            for k, v in assignments_obj.items()
        )
        if not assignments:
            raise RulesetSchemaError(f"{lock_where}.set: empty lock")
        locks.append(LockRule(label=label, assignments=assignments))
    return tuple(locks)


def _parse_guards(node: Any, where: str) -> tuple[GuardPredicate, ...]:
    if not isinstance(node, list):
        raise RulesetSchemaError(f"{where}: expected a list")
    guards = []
    for i, raw in enumerate(node):
        guard_where = f"{where}[{i}]"
        obj = _expect_object(raw, guard_where)
        if not obj:
            raise RulesetSchemaError(f"{guard_where}: empty guard")
        guards.append(
            GuardPredicate(
                conjunctions=tuple(
                    (_parse_field_name(k, guard_where), _parse_int(v, f"{guard_where}[{k}]"))
                    for k, v in obj.items()
                )
            )
        )
    return tuple(guards)


def _parse_forbid(node: Any, where: str) -> dict[str, tuple[tuple[int, int], ...]]:
    obj = _expect_object(node, where)
    out: dict[str, tuple[tuple[int, int], ...]] = {}
    for flag in POST_FLAGS:
        raw = obj.pop(flag, [])
        if not isinstance(raw, list):
            raise RulesetSchemaError(f"{where}.{flag}: expected a list of [type, subtype] pairs")
        pairs = []
        for i, item in enumerate(raw):
            if not (isinstance(item, list) and len(item) == 2):
                raise RulesetSchemaError(f"{where}.{flag}[{i}]: expected [type, subtype]")
            pairs.append(
                (
                    _parse_int(item[0], f"{where}.{flag}[{i}][0]"),
                    _parse_int(item[1], f"{where}.{flag}[{i}][1]"),
                )
            )
        out[flag] = tuple(pairs)
    _reject_unknown(obj, where)
    return out


def parse_ruleset(document: str) -> Ruleset:
    """Parse a JSON ruleset document into a fully populated Ruleset.

    Strict: unknown keys anywhere are schema errors; distributions must sum
    to 100 within 1e-6; every label with a nonzero row count must have all
    its per-label tables.
    """
    try:
        root_node = json.loads(document)
    except json.JSONDecodeError as exc:
        raise RulesetParseError(f"not valid JSON: {exc}") from exc
    root = _expect_object(root_node, "ruleset")

    version = _parse_int(_take(root, "version", "ruleset"), "version")
    if version != RULESET_VERSION:
        raise RulesetSchemaError(f"version: unsupported ruleset version {version}")

    ld = _expect_object(_take(root, "label_distribution", "ruleset"), "label_distribution")
    counts_obj = _expect_object(_take(ld, "counts", "label_distribution"), "label_distribution.counts")
    label_counts: dict[int, int] = {}
    for key, raw in counts_obj.items():
        label = _parse_label_key(key, "label_distribution.counts")
        count = _parse_int(raw, f"label_distribution.counts[{key}]")
        if count < 0:
            raise RulesetDomainError(f"label_distribution.counts[{key}]: negative count")
        label_counts[label] = count
    if set(label_counts) != set(CLASSES):
        raise RulesetSchemaError("label_distribution.counts: must cover exactly labels 0, 1, 2")
    if sum(label_counts.values()) <= 0:
        raise RulesetDomainError("label_distribution.counts: total row count must be positive")
    names_obj = _take(ld, "class_names", "label_distribution", required=False, default=None)
    if names_obj is None:
        class_names = dict(DEFAULT_CLASS_NAMES)
    else:
        names = _expect_object(names_obj, "label_distribution.class_names")
        class_names = {}
        for key, raw in names.items():
            label = _parse_label_key(key, "label_distribution.class_names")
            if not isinstance(raw, str):
                raise RulesetSchemaError(f"label_distribution.class_names[{key}]: expected a string")
            class_names[label] = raw
    _reject_unknown(ld, "label_distribution")
    active = tuple(l for l in CLASSES if label_counts[l] > 0)

    def require_active(table: dict, where: str) -> None:
        for label in active:
            if label not in table:
                raise RulesetSchemaError(f"{where}: missing table for active label {label}")

    type_mix = _parse_per_label(
        _take(root, "type_mix_by_label_percent", "ruleset"),
        "type_mix_by_label_percent",
        _parse_distribution,
    )
    require_active(type_mix, "type_mix_by_label_percent")
    for label, dist in type_mix.items():
        for value in dist.values():
            if value not in (0, 1, 2):
                raise RulesetDomainError(
                    f"type_mix_by_label_percent[{label}]: frame type {value} outside {{0, 1, 2}}"
                )

    subtype_root = _expect_object(
        _take(root, "wlan_fc_subtype_by_label_and_type_percent", "ruleset"),
        "wlan_fc_subtype_by_label_and_type_percent",
    )
    subtype_mix: dict[tuple[int, int], DiscreteDistribution] = {}
    for lkey, per_type in subtype_root.items():
        label = _parse_label_key(lkey, "wlan_fc_subtype_by_label_and_type_percent")
        per_type_obj = _expect_object(
            per_type, f"wlan_fc_subtype_by_label_and_type_percent[{lkey}]"
        )
        for tkey, node in per_type_obj.items():
            where = f"wlan_fc_subtype_by_label_and_type_percent[{lkey}][{tkey}]"
            ftype = _parse_int_key(tkey, where)
            if ftype not in (0, 1, 2):
                raise RulesetSchemaError(f"{where}: frame type outside {{0, 1, 2}}")
            subtype_mix[(label, ftype)] = _parse_distribution(node, where)
    for label in active:
        for ftype, percent in type_mix[label].entries:
            if percent > 0 and (label, ftype) not in subtype_mix:
                raise RulesetSchemaError(
                    "wlan_fc_subtype_by_label_and_type_percent: missing subtype table"
                    f" for label {label}, type {ftype}"
                )

    enc = _expect_object(_take(root, "encodings", "ruleset"), "encodings")
    allow_obj = _expect_object(
        _take(enc, "type_to_subtype_allowlists_numeric", "encodings"),
        "encodings.type_to_subtype_allowlists_numeric",
    )
    _reject_unknown(enc, "encodings")
    allowlists: dict[int, frozenset[int]] = {}
    for tkey, raw in allow_obj.items():
        where = f"encodings.type_to_subtype_allowlists_numeric[{tkey}]"
        ftype = _parse_int_key(tkey, where)
        if ftype not in (0, 1, 2):
            raise RulesetSchemaError(f"{where}: frame type outside {{0, 1, 2}}")
        if not isinstance(raw, list):
            raise RulesetSchemaError(f"{where}: expected a list of subtypes")
        subtypes = [_parse_int(v, where) for v in raw]
        if len(set(subtypes)) != len(subtypes):
            raise RulesetDomainError(f"{where}: duplicate subtype")
        allowlists[ftype] = frozenset(subtypes)
    for ftype in (0, 1, 2):
        if ftype not in allowlists:
            raise RulesetSchemaError(
                f"encodings.type_to_subtype_allowlists_numeric: missing type {ftype}"
            )

    channel_freq_mix = _parse_per_label(
        _take(root, "channel_frequency_by_label_percent", "ruleset"),
        "channel_frequency_by_label_percent",
        _parse_distribution,
    )
    require_active(channel_freq_mix, "channel_frequency_by_label_percent")

    rt = _expect_object(_take(root, "radiotap", "ruleset"), "radiotap")
    flags24_mix = _parse_distribution(
        _take(rt, "observed_24_flags_percent", "radiotap"),
        "radiotap.observed_24_flags_percent",
        key_parser=_parse_flag_pair_key,
    )
    length_global = _parse_distribution(
        _take(rt, "length_mix_percent", "radiotap"), "radiotap.length_mix_percent"
    )
    length_by_label = _parse_per_label(
        _take(rt, "radiotap_length_by_label_percent", "radiotap", required=False, default={}),
        "radiotap.radiotap_length_by_label_percent",
        _parse_distribution,
    )
    tsft_global = _parse_tsft_lengths(
        _take(rt, "tsft_for_length", "radiotap"), "radiotap.tsft_for_length"
    )
    tsft_by_label = _parse_per_label(
        _take(rt, "tsft_for_length_by_label", "radiotap", required=False, default={}),
        "radiotap.tsft_for_length_by_label",
        _parse_tsft_lengths,
    )
    _reject_unknown(rt, "radiotap")

    rssi_rules = _parse_per_label(_take(root, "rssi_rules", "ruleset"), "rssi_rules", _parse_distribution)
    require_active(rssi_rules, "rssi_rules")
    for label, dist in rssi_rules.items():
        for value in dist.values():
            if not isinstance(value, int) or value >= 0:
                raise RulesetDomainError(f"rssi_rules[{label}]: {value} is not a negative dBm integer")

    ds_rules = _expect_object(_take(root, "wlan_fc_ds_rules", "ruleset"), "wlan_fc_ds_rules")
    ds_data_quota = _parse_distribution(
        _take(ds_rules, "data_quota_percent", "wlan_fc_ds_rules"),
        "wlan_fc_ds_rules.data_quota_percent",
    )
    _reject_unknown(ds_rules, "wlan_fc_ds_rules")
    for value in ds_data_quota.values():
        if value not in (2, 3):
            raise RulesetDomainError(f"wlan_fc_ds_rules.data_quota_percent: ds value {value} outside {{2, 3}}")

    frame_length_rules = _parse_per_label(
        _take(root, "frame_length_rules", "ruleset"), "frame_length_rules", _parse_distribution
    )
    require_active(frame_length_rules, "frame_length_rules")
    for label, dist in frame_length_rules.items():
        for value in dist.values():
            if not isinstance(value, int) or value <= 0:
                raise RulesetDomainError(f"frame_length_rules[{label}]: length {value} must be positive")

    dur = _expect_object(_take(root, "duration_rules", "ruleset"), "duration_rules")
    control_obj = _expect_object(
        _take(dur, "control_by_subtype_percent", "duration_rules"),
        "duration_rules.control_by_subtype_percent",
    )
    duration_control_by_subtype = {
        _parse_int_key(k, "duration_rules.control_by_subtype_percent"): _parse_distribution(
            v, f"duration_rules.control_by_subtype_percent[{k}]"
        )
        for k, v in control_obj.items()
    }
    duration_by_label = _parse_per_label(
        _take(dur, "by_label_percent", "duration_rules"),
        "duration_rules.by_label_percent",
        _parse_distribution,
    )
    require_active(duration_by_label, "duration_rules.by_label_percent")
    _reject_unknown(dur, "duration_rules")

    pjp = _expect_object(_take(root, "protected_joint_policy", "ruleset"), "protected_joint_policy")
    targets = _expect_object(
        _take(pjp, "quota_targets", "protected_joint_policy"), "protected_joint_policy.quota_targets"
    )
    mgmt_percent = _parse_per_label(
        _take(targets, "mgmt_percent", "protected_joint_policy.quota_targets"),
        "protected_joint_policy.quota_targets.mgmt_percent",
        _parse_percent,
    )
    overall_percent = _parse_per_label(
        _take(targets, "overall_percent", "protected_joint_policy.quota_targets"),
        "protected_joint_policy.quota_targets.overall_percent",
        _parse_percent,
    )
    _reject_unknown(targets, "protected_joint_policy.quota_targets")
    locks = _parse_locks(
        _take(pjp, "locks", "protected_joint_policy", required=False, default=[]),
        "protected_joint_policy.locks",
    )
    guards = _parse_guards(
        _take(pjp, "never_touch_when", "protected_joint_policy", required=False, default=[]),
        "protected_joint_policy.never_touch_when",
    )
    _reject_unknown(pjp, "protected_joint_policy")

    pfq = _expect_object(_take(root, "post_flags_quota", "ruleset"), "post_flags_quota")
    post_flag_percent: dict[str, dict[int, float]] = {}
    for flag in POST_FLAGS:
        post_flag_percent[flag] = _parse_per_label(
            _take(pfq, f"{flag}_by_label_pct", "post_flags_quota", required=False, default={}),
            f"post_flags_quota.{flag}_by_label_pct",
            _parse_percent,
        )
    forbid = _parse_forbid(
        _take(pfq, "forbid", "post_flags_quota", required=False, default={}), "post_flags_quota.forbid"
    )
    _reject_unknown(pfq, "post_flags_quota")

    _reject_unknown(root, "ruleset")

    return Ruleset(
        version=version,
        label_counts=label_counts,
        class_names=class_names,
        type_mix=type_mix,
        subtype_mix=subtype_mix,
        allowlists=allowlists,
        channel_freq_mix=channel_freq_mix,
        flags24_mix=flags24_mix,
        radiotap_length_mix=RadiotapLengthMix(global_mix=length_global, by_label=length_by_label),
        tsft_policy=TsftPolicy(by_length=tsft_global, by_label_override=tsft_by_label),
        rssi_rules=rssi_rules,
        ds_data_quota=ds_data_quota,
        frame_length_rules=frame_length_rules,
        duration_control_by_subtype=duration_control_by_subtype,
        duration_by_label=duration_by_label,
        quota_policy=QuotaPolicy(
            protected_mgmt_percent=mgmt_percent,
            protected_overall_percent=overall_percent,
            post_flag_percent=post_flag_percent,
            forbid=forbid,
            locks=locks,
            guards=guards,
        ),
    )


# ---------------------------------------------------------------------------
# serialization


def _number_out(x: float):
    return int(x) if float(x).is_integer() else x


def _dist_out(dist: DiscreteDistribution) -> dict:
    out = {}
    for value, percent in dist.entries:
        key = f"{value[0]},{value[1]}" if isinstance(value, tuple) else str(value)
        out[key] = _number_out(percent)
    return out


def serialize_ruleset(rs: Ruleset) -> str:
    """Render a Ruleset back to its canonical JSON document form.

    parse(serialize(parse(doc))) == parse(doc) for any valid document.
    """
    doc: dict[str, Any] = {
        "version": rs.version,
        "label_distribution": {
            "counts": {str(l): rs.label_counts[l] for l in sorted(rs.label_counts)},
            "class_names": {str(l): rs.class_names[l] for l in sorted(rs.class_names)},
        },
        "type_mix_by_label_percent": {str(l): _dist_out(d) for l, d in sorted(rs.type_mix.items())},
        "wlan_fc_subtype_by_label_and_type_percent": {},
        "encodings": {
            "type_to_subtype_allowlists_numeric": {
                str(t): sorted(rs.allowlists[t]) for t in sorted(rs.allowlists)
            }
        },
        "channel_frequency_by_label_percent": {
            str(l): _dist_out(d) for l, d in sorted(rs.channel_freq_mix.items())
        },
        "radiotap": {
            "observed_24_flags_percent": _dist_out(rs.flags24_mix),
            "length_mix_percent": _dist_out(rs.radiotap_length_mix.global_mix),
            "radiotap_length_by_label_percent": {
                str(l): _dist_out(d) for l, d in sorted(rs.radiotap_length_mix.by_label.items())
            },
            "tsft_for_length": {
                str(k): _number_out(v) for k, v in rs.tsft_policy.by_length.items()
            },
            "tsft_for_length_by_label": {
                str(l): {str(k): _number_out(v) for k, v in m.items()}
                for l, m in sorted(rs.tsft_policy.by_label_override.items())
            },
        },
        "rssi_rules": {str(l): _dist_out(d) for l, d in sorted(rs.rssi_rules.items())},
        "wlan_fc_ds_rules": {"data_quota_percent": _dist_out(rs.ds_data_quota)},
        "frame_length_rules": {str(l): _dist_out(d) for l, d in sorted(rs.frame_length_rules.items())},
        "duration_rules": {
            "control_by_subtype_percent": {
                str(st): _dist_out(d) for st, d in rs.duration_control_by_subtype.items()
            },
            "by_label_percent": {str(l): _dist_out(d) for l, d in sorted(rs.duration_by_label.items())},
        },
        "protected_joint_policy": {
            "quota_targets": {
                "mgmt_percent": {
                    str(l): _number_out(p) for l, p in sorted(rs.quota_policy.protected_mgmt_percent.items())
                },
                "overall_percent": {
                    str(l): _number_out(p)
                    for l, p in sorted(rs.quota_policy.protected_overall_percent.items())
                },
            },
            "locks": [
                {"label": lock.label, "set": {f: v for f, v in lock.assignments}}
                for lock in rs.quota_policy.locks
            ],
            "never_touch_when": [
                {f: v for f, v in guard.conjunctions} for guard in rs.quota_policy.guards
            ],
        },
        "post_flags_quota": {
            **{
                f"{flag}_by_label_pct": {
                    str(l): _number_out(p)
                    for l, p in sorted(rs.quota_policy.post_flag_percent.get(flag, {}).items())
                }
                for flag in POST_FLAGS
            },
            "forbid": {
                flag: [list(pair) for pair in rs.quota_policy.forbid.get(flag, ())]
                for flag in POST_FLAGS
            },
        },
    }
    subtype_out: dict[str, dict[str, dict]] = {}
    for (label, ftype), dist in sorted(rs.subtype_mix.items()):
        subtype_out.setdefault(str(label), {})[str(ftype)] = _dist_out(dist)
    doc["wlan_fc_subtype_by_label_and_type_percent"] = subtype_out
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# lint


def scale_label_counts(counts: dict[int, int], total: int) -> dict[int, int]:
    """Rescale per-label counts to a new total with largest-remainder rounding."""
    if total <= 0:
        raise ValueError("total must be positive")
    old_total = sum(counts.values())
    if old_total <= 0:
        raise ValueError("cannot scale an all-zero count map")
    labels = sorted(counts)
    exact = {l: counts[l] * total / old_total for l in labels}
    scaled = {l: int(exact[l]) for l in labels}
    leftover = total - sum(scaled.values())
    # Ties broken by label order for determinism.
    by_remainder = sorted(labels, key=lambda l: (-(exact[l] - scaled[l]), l))
    for l in by_remainder[:leftover]:
        scaled[l] += 1
    return scaled


def scaled_ruleset(rs: Ruleset, total: int) -> Ruleset:
    """Copy of the ruleset with label counts rescaled to a new total."""
    return replace(rs, label_counts=scale_label_counts(rs.label_counts, total))


def lint_ruleset(rs: Ruleset) -> list[str]:
    """Authoring-time diagnostics: every rule that could only emit rejected rows.

    An empty list means the generator can satisfy the document. Diagnostics
    are human-readable strings; order is stable.
    """
    diags: list[str] = []

    for length, p in rs.tsft_policy.by_length.items():
        if length == 64 and p > 0:
            diags.append("tsft must be 0 at radiotap length 64 (global tsft_for_length)")
    for label, table in sorted(rs.tsft_policy.by_label_override.items()):
        for length, p in table.items():
            if length == 64 and p > 0:
                diags.append(f"tsft must be 0 at radiotap length 64 (override for label {label})")

    for (label, ftype), dist in sorted(rs.subtype_mix.items()):
        allowed = rs.allowlists.get(ftype, frozenset())
        for subtype in dist.values():
            if subtype not in allowed:
                diags.append(
                    f"subtype {subtype} under type {ftype} (label {label}) is not in the type allowlist"
                )

    # Radiotap lengths that can be drawn must have a tsft probability.
    def lengths_for(label: int) -> tuple[int, ...]:
        return tuple(
            v for v, p in rs.radiotap_length_mix.for_label(label).entries if isinstance(v, int)
        )

    for label in rs.active_labels():
        override = rs.tsft_policy.by_label_override.get(label, {})
        for length in lengths_for(label):
            if length not in override and length not in rs.tsft_policy.by_length:
                diags.append(f"no tsft probability for drawable radiotap length {length} (label {label})")

    # Control subtypes that can be drawn need legal durations.
    for (label, ftype), dist in sorted(rs.subtype_mix.items()):
        if ftype != 1:
            continue
        for subtype, percent in dist.entries:
            if percent <= 0:
                continue
            table = rs.duration_control_by_subtype.get(subtype)
            if table is None or not table.entries:
                diags.append(
                    f"control subtype {subtype} (label {label}) has no legal-duration table"
                )

    for flag, pairs in sorted(rs.quota_policy.forbid.items()):
        for ftype, subtype in pairs:
            if subtype not in rs.allowlists.get(ftype, frozenset()):
                diags.append(
                    f"forbid list for '{flag}' references subtype {subtype} not in type {ftype} allowlist"
                )

    # Quota feasibility: a positive target needs at least a possible eligible row.
    for label in rs.active_labels():
        mix = rs.type_mix.get(label)
        if mix is None:
            continue
        mgmt_possible = mix.percent_of(0) > 0
        data_possible = mix.percent_of(2) > 0
        if rs.quota_policy.protected_mgmt_percent.get(label, 0.0) > 0 and not mgmt_possible:
            diags.append(
                f"protected mgmt quota for label {label} is positive but the label draws no management rows"
            )
        if rs.quota_policy.protected_overall_percent.get(label, 0.0) > 0 and not data_possible:
            diags.append(
                f"protected overall quota for label {label} is positive but the label draws no data rows"
            )
        for flag in POST_FLAGS:
            target = rs.quota_policy.post_flag_percent.get(flag, {}).get(label, 0.0)
            if target <= 0:
                continue
            forbidden = set(rs.quota_policy.forbid.get(flag, ()))
            eligible_possible = False
            for ftype, tpercent in mix.entries:
                if tpercent <= 0:
                    continue
                subtypes = rs.subtype_mix.get((label, ftype))
                if subtypes is None:
                    continue
                for subtype, spercent in subtypes.entries:
                    if spercent > 0 and (ftype, subtype) not in forbidden:
                        eligible_possible = True
            if not eligible_possible:
                diags.append(
                    f"'{flag}' quota for label {label} is positive but every drawable row is forbidden"
                )

    # Lock probe: emit a valid row per locked label, apply the lock, recheck.
    from .generator import apply_label_overrides, check, emit_row
    from .sampling import Prng

    probe_rng_seed = 0x5EED
    for label in sorted({lock.label for lock in rs.quota_policy.locks}):
        if rs.label_counts.get(label, 0) <= 0:
            continue
        rng = Prng(probe_rng_seed).derive(f"lint-probe/label{label}")
        probe = None
        for _ in range(1000):
            try:
                candidate = emit_row(rs, label, rng)
            except RulesetError:
                break
            if check(rs, candidate).valid:
                probe = candidate
                break
        if probe is None:
            diags.append(f"could not emit any rule-satisfying probe row for label {label}")
            continue
        locked = apply_label_overrides(rs, probe)
        report = check(rs, locked)
        if not report.valid:
            for rule_id, detail in report.violations:
                diags.append(f"lock for label {label} violates rule {rule_id}: {detail}")

    return diags
