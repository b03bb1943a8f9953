"""Built-in reference ruleset: a complete, lint-clean example document.

Ships with the package so desk-scale runs work out of the box. Native label
counts are 97000/2000/1000 (the 97/2/1 class imbalance at 100k rows); use
the generator's scaling support for other totals.
"""

from __future__ import annotations

from importlib import resources

from .ruleset import Ruleset, parse_ruleset

_RESOURCE = "reference_ruleset.json"


def reference_ruleset_text() -> str:
    return (resources.files("framesynth") / "data" / _RESOURCE).read_text("utf-8")


def reference_ruleset() -> Ruleset:
    return parse_ruleset(reference_ruleset_text())
