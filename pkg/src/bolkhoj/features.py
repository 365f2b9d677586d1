"""Attribute-value feature sets and unification.

A feature set is a frozenset of (attribute, value) pairs.  Unification
is set union that fails when any attribute ends up with two different
values; absent attributes unify freely.
"""

from __future__ import annotations

FeatureSet = frozenset

FEATURE_ATTRIBUTES = ("gender", "number", "person", "case", "tense", "aspect")

EMPTY: FeatureSet = frozenset()


class FeatureError(ValueError):
    pass


def feature_set(pairs) -> FeatureSet:
    fs = frozenset((str(k), str(v)) for k, v in pairs)
    for attr, _ in fs:
        if attr not in FEATURE_ATTRIBUTES:
            raise FeatureError(f"unknown feature attribute '{attr}'")
    return fs


def parse_features(text: str) -> FeatureSet:
    """Parse 'k=v;k=v' (empty string allowed)."""
    text = text.strip()
    if not text:
        return EMPTY
    pairs = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise FeatureError(f"malformed feature '{part}', expected k=v")
        k, v = part.split("=", 1)
        pairs.append((k.strip(), v.strip()))
    return feature_set(pairs)


def format_features(fs: FeatureSet) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(fs))


def is_consistent(fs: FeatureSet) -> bool:
    attrs = [k for k, _ in fs]
    return len(attrs) == len(set(attrs))


def unify(a: FeatureSet, b: FeatureSet) -> FeatureSet | None:
    """Union of both sets, or None when an attribute clashes."""
    merged = a | b
    return merged if is_consistent(merged) else None


def as_dict(fs: FeatureSet) -> dict[str, str]:
    return dict(sorted(fs))
