"""Phishing classifier evasion workbench."""

import json

from ._phishlab import (
    Classifier,
    NotPhishing,
    Page,
    PhishlabError,
    PhishlabIOError,
    Pool,
    SchemaError,
    hash_feature,
    invert,
    preserved,
    run_cli,
    similarity_baseline,
    similarity_pelican,
)
from ._phishlab import _attack


def attack(level, model, page, knowledge=None, pool=None, seed=0, budget=2000, batch=3):
    """Attack `page` against `model`; returns (report dict, final Page)."""
    report, final = _attack(level, model, page, knowledge, pool, seed, budget, batch)
    return json.loads(report), final


__all__ = [
    "Classifier",
    "NotPhishing",
    "Page",
    "PhishlabError",
    "PhishlabIOError",
    "Pool",
    "SchemaError",
    "attack",
    "hash_feature",
    "invert",
    "preserved",
    "run_cli",
    "similarity_baseline",
    "similarity_pelican",
]
