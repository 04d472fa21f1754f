"""Parameter reduction: functional types and second-order inference.

Collapsing a relation (subject, relation, object) onto its object yields a
type-level entity keyed by (object, polarity, metatype) whose members are
the subjects: from (ocrelizumab, COVID-19, Activation) the functional type
"COVID-19 Activator" is grounded with member ocrelizumab. Grounded types are
first-class: filterable, taggable, and the anchor for upstream-regulator
inference and chemical-gene-disease triplet joins.
"""

from __future__ import annotations

from dataclasses import dataclass

from .indexing import Index
from .ingest import PairKind
from .taxonomy import Metatype, Polarity, opposite


@dataclass(frozen=True)
class Member:
    entity: str
    display: str
    record_ids: tuple[str, ...]


@dataclass(frozen=True)
class FunctionalType:
    object: str
    object_display: str
    polarity: Polarity
    metatype: Metatype
    specific_relation: str | None
    display_name: str
    members: tuple[Member, ...]
    doc_ids: tuple[str, ...]

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.object, self.polarity.value, self.metatype.value)

    def member_entities(self) -> tuple[str, ...]:
        return tuple(m.entity for m in self.members)

    def record_ids(self) -> tuple[str, ...]:
        ids: set[str] = set()
        for m in self.members:
            ids.update(m.record_ids)
        return tuple(sorted(ids))


@dataclass(frozen=True)
class RegulatorHit:
    entity: str
    via_member: str
    record_ids: tuple[str, ...]


@dataclass(frozen=True)
class RegulatorSet:
    hits: tuple[RegulatorHit, ...]
    note: str | None = None


@dataclass(frozen=True)
class TripletRelation:
    chemical: str
    gene: str
    disease: str
    cg_relation: str
    gd_relation: str
    evidence: tuple[str, ...]


def functional_type_name(
    object_display: str,
    polarity: Polarity,
    metatype: Metatype,
    specific_type: str | None = None,
) -> str:
    """Grounded display name for a (object, polarity, metatype) triple.

    Activation/Inhibition regulate-activity types read naturally
    ("COVID-19 Activator"); everything else falls back to the symbolic
    form ("--CASP3 Regulator") or, for modifications, a target phrasing.
    """
    specific = (specific_type or "").strip()
    if metatype is Metatype.MODIFICATION:
        if specific:
            return f"{object_display} {specific} target"
        return f"{object_display} Modifier"
    if metatype is Metatype.REGULATE_ACTIVITY and specific.casefold() == "activation":
        return f"{object_display} Activator"
    if metatype is Metatype.REGULATE_ACTIVITY and specific.casefold() == "inhibition":
        return f"{object_display} Inhibitor"
    return f"{polarity.symbol}{object_display} Regulator"


def ground_functional_types(index: Index) -> list[FunctionalType]:
    """Ground one functional type per distinct (object, polarity, metatype).

    Membership is first order: exactly the subjects of records landing on
    the object with that polarity/metatype. Chained contributors surface
    through upstream_regulators instead. The result is registered into the
    index type layer, making ``functional_type`` filterable.
    """
    groups: dict[tuple[str, Polarity, Metatype], dict[str, list[str]]] = {}
    relations: dict[tuple[str, Polarity, Metatype], set[str]] = {}
    for rec in index.records():
        rt = index.taxonomy.lookup(rec.relation)
        key = (rec.object, rt.polarity, rt.metatype)
        groups.setdefault(key, {}).setdefault(rec.subject, []).append(rec.id)
        name = rt.name if index.taxonomy.known(rec.relation) else rec.relation
        relations.setdefault(key, set()).add(name)

    fts = []
    for (obj, polarity, metatype), member_map in groups.items():
        rel_names = relations[(obj, polarity, metatype)]
        specific = next(iter(rel_names)) if len(rel_names) == 1 else None
        members = tuple(
            Member(entity, index.entity_display(entity), tuple(sorted(rids)))
            for entity, rids in sorted(member_map.items())
        )
        all_record_ids = sorted(rid for m in members for rid in m.record_ids)
        fts.append(
            FunctionalType(
                object=obj,
                object_display=index.entity_display(obj),
                polarity=polarity,
                metatype=metatype,
                specific_relation=specific,
                display_name=functional_type_name(
                    index.entity_display(obj), polarity, metatype, specific
                ),
                members=members,
                doc_ids=index.evidence_of(all_record_ids),
            )
        )
    fts.sort(key=lambda ft: ft.key)
    index.register_functional_types(fts)
    return fts


def _second_order(index: Index, ft: FunctionalType, polarity: Polarity) -> RegulatorSet:
    if ft.polarity is Polarity.AFFECT:
        return RegulatorSet(
            (), note="functional type has affect polarity; no signed upstream set exists"
        )
    grouped: dict[tuple[str, str], set[str]] = {}
    for member in ft.members:
        for rid in index.record_ids_with_object(member.entity):
            rec = index.record_by_id(rid)
            rt = index.taxonomy.lookup(rec.relation)
            if rt.metatype is Metatype.REGULATE_ACTIVITY and rt.polarity is polarity:
                grouped.setdefault((rec.subject, member.entity), set()).add(rid)
    hits = tuple(
        RegulatorHit(entity, via, tuple(sorted(rids)))
        for (entity, via), rids in sorted(grouped.items())
    )
    return RegulatorSet(hits)


def upstream_regulators(index: Index, ft: FunctionalType) -> RegulatorSet:
    """Entities with a same-polarity regulate-activity edge onto a member."""
    return _second_order(index, ft, ft.polarity)


def opposite_upstream_regulators(index: Index, ft: FunctionalType) -> RegulatorSet:
    """Entities with an opposite-polarity regulate-activity edge onto a member."""
    return _second_order(index, ft, opposite(ft.polarity))


def join_triplets(index: Index) -> list[TripletRelation]:
    """Natural join of chemical-gene and gene-disease records on the gene.

    One triplet per distinct (chemical, gene, disease, cg relation,
    gd relation); evidence unions the record ids of both sides.
    """
    cg_by_gene: dict[str, list] = {}
    gd_by_gene: dict[str, list] = {}
    for rec in index.records():
        if rec.pair_kind is PairKind.CHEMICAL_GENE:
            cg_by_gene.setdefault(rec.object, []).append(rec)
        elif rec.pair_kind is PairKind.GENE_DISEASE:
            gd_by_gene.setdefault(rec.subject, []).append(rec)

    merged: dict[tuple[str, str, str, str, str], set[str]] = {}
    display: dict[tuple[str, str, str, str, str], tuple[str, str]] = {}
    for gene, cg_recs in cg_by_gene.items():
        gd_recs = gd_by_gene.get(gene)
        if not gd_recs:
            continue
        for cg in cg_recs:
            for gd in gd_recs:
                key = (cg.subject, gene, gd.object, cg.relation.casefold(), gd.relation.casefold())
                merged.setdefault(key, set()).update((cg.id, gd.id))
                display.setdefault(
                    key,
                    (
                        index.display_term("relation_type", cg.relation.casefold()),
                        index.display_term("relation_type", gd.relation.casefold()),
                    ),
                )
    triplets = [
        TripletRelation(
            chemical=chem,
            gene=gene,
            disease=disease,
            cg_relation=display[key][0],
            gd_relation=display[key][1],
            evidence=tuple(sorted(ids)),
        )
        for key, ids in merged.items()
        for (chem, gene, disease, _, _) in [key]
    ]
    triplets.sort(key=lambda t: (t.chemical, t.gene, t.disease, t.cg_relation, t.gd_relation))
    return triplets
