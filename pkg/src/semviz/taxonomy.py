"""Relation-type universe: metatype grouping, polarity signs, and their algebra.

Relation types are grouped into two biological metatypes (activity regulation
with Subject/Object roles, protein modification with Enzyme/Substrate roles)
plus a catch-all. Every relation carries a polarity sign: increase (++),
decrease (--), or the unsigned affect (->). The sign algebra here is what
lets chained relations keep a net direction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigError


class Polarity(enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"
    AFFECT = "affect"

    @property
    def symbol(self) -> str:
        return _POLARITY_SYMBOL[self]


class Metatype(enum.Enum):
    REGULATE_ACTIVITY = "regulate_activity"
    MODIFICATION = "modification"
    OTHER = "other"


_POLARITY_SYMBOL = {
    Polarity.INCREASE: "++",
    Polarity.DECREASE: "--",
    Polarity.AFFECT: "→",
}

_ROLES = {
    Metatype.REGULATE_ACTIVITY: ("Subject", "Object"),
    Metatype.MODIFICATION: ("Enzyme", "Substrate"),
    Metatype.OTHER: ("Subject", "Object"),
}


def opposite(p: Polarity) -> Polarity:
    """Flip a sign; affect is its own opposite."""
    if p is Polarity.INCREASE:
        return Polarity.DECREASE
    if p is Polarity.DECREASE:
        return Polarity.INCREASE
    return Polarity.AFFECT


def compose_polarity(p1: Polarity, p2: Polarity) -> Polarity:
    """Sign multiplication with affect as the absorbing element.

    An unsigned edge anywhere in a chain destroys the net direction, so
    affect absorbs rather than acting as identity.
    """
    if p1 is Polarity.AFFECT or p2 is Polarity.AFFECT:
        return Polarity.AFFECT
    if p1 is p2:
        return Polarity.INCREASE
    return Polarity.DECREASE


@dataclass(frozen=True)
class RelationType:
    name: str
    metatype: Metatype
    polarity: Polarity

    @property
    def roles(self) -> tuple[str, str]:
        """Role nouns for the subject/object positions, fixed by metatype."""
        return _ROLES[self.metatype]


FALLBACK = RelationType("", Metatype.OTHER, Polarity.AFFECT)


class Taxonomy:
    """Immutable name -> RelationType map with a total lookup.

    Unknown names resolve to a fallback (Other, Affect) copy carrying the
    queried name, so ingestion never fails on long-tail relation types.
    Lookup is case-insensitive; the configured spelling is preserved.
    """

    def __init__(self, types: list[RelationType]):
        self._types: dict[str, RelationType] = {}
        for rt in types:
            key = rt.name.casefold()
            if key in self._types:
                raise ConfigError(f"duplicate relation type name: {rt.name!r}")
            self._types[key] = rt

    def lookup(self, name: str) -> RelationType:
        rt = self._types.get(name.strip().casefold())
        if rt is None:
            return RelationType(name.strip(), FALLBACK.metatype, FALLBACK.polarity)
        return rt

    def known(self, name: str) -> bool:
        return name.strip().casefold() in self._types

    @property
    def types(self) -> list[RelationType]:
        return sorted(self._types.values(), key=lambda rt: rt.name.casefold())

    def to_config(self) -> dict:
        return {
            "relation_types": [
                {"name": rt.name, "metatype": rt.metatype.value, "polarity": rt.polarity.value}
                for rt in self.types
            ]
        }


def _parse_entry(entry: dict, position: int) -> RelationType:
    if not isinstance(entry, dict):
        raise ConfigError(f"relation_types[{position}] is not a mapping: {entry!r}")
    try:
        name = entry["name"]
    except KeyError:
        raise ConfigError(f"relation_types[{position}] has no name") from None
    if not isinstance(name, str) or not name.strip():
        raise ConfigError(f"relation_types[{position}] name is empty")
    try:
        metatype = Metatype(str(entry.get("metatype", "")).strip().casefold())
    except ValueError:
        raise ConfigError(
            f"unknown metatype {entry.get('metatype')!r} in relation type {name!r}"
        ) from None
    try:
        polarity = Polarity(str(entry.get("polarity", "")).strip().casefold())
    except ValueError:
        raise ConfigError(
            f"unknown polarity {entry.get('polarity')!r} in relation type {name!r}"
        ) from None
    return RelationType(name.strip(), metatype, polarity)


def load_taxonomy(source: str | Path) -> Taxonomy:
    """Load a taxonomy from a YAML/JSON config document.

    The document must carry a top-level ``relation_types`` list whose entries
    have ``name``, ``metatype`` and ``polarity``. An empty document yields a
    taxonomy where every lookup hits the fallback.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    doc = yaml.safe_load(text)
    if doc is None:
        return Taxonomy([])
    if not isinstance(doc, dict):
        raise ConfigError("taxonomy config must be a key-value document")
    entries = doc.get("relation_types", [])
    if not isinstance(entries, list):
        raise ConfigError("relation_types must be a list")
    return Taxonomy([_parse_entry(e, i) for i, e in enumerate(entries)])


def default_taxonomy() -> Taxonomy:
    """Built-in taxonomy covering the common assertion and chemical-gene types.

    Deployments with richer type inventories extend or replace this via the
    config document; anything unlisted falls back to (Other, Affect).
    """
    I, D, A = Polarity.INCREASE, Polarity.DECREASE, Polarity.AFFECT
    RA, MOD, OTH = Metatype.REGULATE_ACTIVITY, Metatype.MODIFICATION, Metatype.OTHER
    return Taxonomy(
        [
            RelationType("Activation", RA, I),
            RelationType("Inhibition", RA, D),
            RelationType("Phosphorylation", MOD, A),
            RelationType("Dephosphorylation", MOD, A),
            RelationType("Ubiquitination", MOD, A),
            RelationType("Complex", OTH, A),
            RelationType("Increase Expression", OTH, I),
            RelationType("Decrease Expression", OTH, D),
            RelationType("Increase Reaction", OTH, I),
            RelationType("Decrease Reaction", OTH, D),
            RelationType("Affect Expression", OTH, A),
            RelationType("Affect Reaction", OTH, A),
        ]
    )
