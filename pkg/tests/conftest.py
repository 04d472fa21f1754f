import json
import random
from dataclasses import dataclass, field

import pytest

from semviz.indexing import Index
from semviz.ingest import (
    AliasMap,
    align_by_pmid,
    canonicalize,
    parse_article_metadata,
    parse_causal_assertions,
    parse_kg_relations,
)
from semviz.taxonomy import Taxonomy, default_taxonomy


def ca_line(subject, obj, relation, evidence):
    return json.dumps(
        {"subject": subject, "object": obj, "relation_type": relation, "evidence": evidence}
    )


def kg_line(subject, obj, relation, pair_kind, sentence, pmid=None):
    return json.dumps(
        {
            "subject": subject,
            "object": obj,
            "relation_type": relation,
            "pair_kind": pair_kind,
            "sentence": sentence,
            "pmid": pmid,
        }
    )


@dataclass
class Corpus:
    records: list
    docs: list
    articles: list
    taxonomy: Taxonomy
    index: Index
    ca_text: str = ""
    kg_text: str = ""
    meta_text: str = ""
    stopwords: tuple = ()
    rejects: list = field(default_factory=list)


def build_corpus(ca_text="", kg_text="", meta_text="", taxonomy=None,
                 aliases: AliasMap | None = None, stopwords=()) -> Corpus:
    taxonomy = taxonomy or default_taxonomy()
    ca = parse_causal_assertions(ca_text) if ca_text else None
    kg = parse_kg_relations(kg_text) if kg_text else None
    records = (ca.records if ca else []) + (kg.records if kg else [])
    docs = (ca.docs if ca else []) + (kg.docs if kg else [])
    rejects = (ca.rejects if ca else []) + (kg.rejects if kg else [])
    articles = parse_article_metadata(meta_text).articles if meta_text else []
    records = canonicalize(records, aliases)
    align_by_pmid(docs, articles)
    index = Index.build(records, docs, articles, taxonomy, stopwords)
    return Corpus(records, docs, articles, taxonomy, index,
                  ca_text, kg_text, meta_text, tuple(stopwords), rejects)


# --- the worked-example fixture: exactly the published tuples ---------------

PAPER_CA_TEXT = "\n".join(
    [
        ca_line(
            "ocrelizumab",
            "COVID-19",
            "Activation",
            [
                {
                    "sentence": "Alemtuzumab, ocrelizumab, rituximab, and Cladribine "
                    "may increase the risk of acquiring and severity of COVID-19.",
                    "pmid": "p1",
                }
            ],
        ),
        ca_line(
            "Interferon",
            "SH2D3A",
            "Activation",
            [{"sentence": "Type I interferon response is mediated through NSP1.", "pmid": "p2"}],
        ),
    ]
)

PAPER_KG_TEXT = "\n".join(
    [
        kg_line(
            "10074-G5",
            "MYC",
            "Decrease Expression",
            "chemical_gene",
            "10074-G5 results in decreased expression of MYC protein.",
            "p3",
        ),
        kg_line(
            "D014013",
            "CASP3",
            "Decrease Reaction",
            "chemical_gene",
            "D014013 results in decreased reaction of CASP3.",
            "p3",
        ),
    ]
)

PAPER_META_TEXT = (
    "pmid,title,abstract,authors,publish_time,journal\n"
    'p1,Coronavirus therapies,"Risk profile of antibody therapies for coronavirus '
    'disease","Doe J; Roe R",2020-03,Emerg Microbes Infect\n'
    'p2,Interferon response,"Coronavirus proteins suppress the interferon induction '
    'pathway","Fung S",2020-03,Emerg Microbes Infect\n'
    'p3,MYC chemistry,"Small molecule effects on MYC and CASP3 expression","Li Q",'
    "2020-04,PLoS One\n"
)


@pytest.fixture(scope="session")
def paper_corpus() -> Corpus:
    return build_corpus(PAPER_CA_TEXT, PAPER_KG_TEXT, PAPER_META_TEXT)


# --- a richer corpus for dashboard-facing behaviour -------------------------

DEMO_CA_TEXT = "\n".join(
    [
        ca_line("TBK1", "MAVS", "Activation",
                [{"sentence": "TBK1 activates MAVS signaling.", "pmid": "p1"},
                 {"sentence": "TBK1 is required for MAVS activity.", "pmid": "p2"}]),
        ca_line("RIGI", "MAVS", "Activation",
                [{"sentence": "RIG-I engages MAVS after viral sensing.", "pmid": "p2"}]),
        ca_line("IFNA", "TBK1", "Activation",
                [{"sentence": "IFNA stimulates TBK1 phosphorylation cascades.", "pmid": "p4"}]),
        ca_line("IFNA", "RIGI", "Activation",
                [{"sentence": "IFNA boosts RIG-I expression.", "pmid": "p4"}]),
        ca_line("NLRX1", "MAVS", "Inhibition",
                [{"sentence": "NLRX1 blocks MAVS oligomerization.", "pmid": "p5"}]),
        ca_line("EIF2AK2", "EIF2S1", "Phosphorylation",
                [{"sentence": "EIF2AK2 phosphorylates EIF2S1 during stress.", "pmid": "p5"}]),
        ca_line("ocrelizumab", "COVID-19", "Activation",
                [{"sentence": "Ocrelizumab may increase severity of COVID-19.", "pmid": "p1"}]),
    ]
)

DEMO_KG_TEXT = "\n".join(
    [
        kg_line("D014013", "CASP3", "Decrease Reaction", "chemical_gene",
                "D014013 results in decreased reaction of CASP3.", "p3"),
        kg_line("aspirin", "CASP3", "Increase Expression", "chemical_gene",
                "Aspirin results in increased expression of CASP3.", "p3"),
        kg_line("CASP3", "apoptosis disorder", "Increase Reaction", "gene_disease",
                "CASP3 drives apoptosis disorders.", "p6"),
        kg_line("aspirin", "inflammation", "Decrease Reaction", "chemical_disease",
                "Aspirin reduces inflammation markers.", None),
    ]
)

DEMO_META_TEXT = (
    "pmid,title,abstract,authors,publish_time,journal\n"
    'p1,Antibody therapy risks,"Coronavirus risk of antibody therapy","Doe J; Roe R",'
    "2020-03,Emerg Microbes Infect\n"
    'p2,MAVS signaling,"Innate immune coronavirus sensing through MAVS","Fung S; Doe J",'
    "2020-03,PLoS One\n"
    'p3,CASP3 chemistry,"Chemical control of CASP3 expression","Li Q",2020-04,PLoS One\n'
    'p4,Interferon priming,"Interferon priming of viral sensors","Smith A",2020-04,'
    "Virus Research\n"
    'p5,MAVS regulation,"Negative regulation of MAVS and coronavirus stress kinases",'
    '"Roe R",2019,Nature\n'
)


@pytest.fixture(scope="session")
def demo_corpus() -> Corpus:
    return build_corpus(DEMO_CA_TEXT, DEMO_KG_TEXT, DEMO_META_TEXT)


# --- randomized corpora ------------------------------------------------------

CA_RELATIONS = ["Activation", "Inhibition", "Phosphorylation", "Complex", "BindsTo"]
KG_RELATIONS = [
    "Increase Expression",
    "Decrease Expression",
    "Decrease Reaction",
    "Affect Reaction",
    "Odd Longtail Link",
]
PAIR_KINDS = ["chemical_gene", "chemical_gene", "gene_disease", "chemical_disease"]
WORDS = (
    "virus protein lung cell response binding infection pathway expression "
    "inflammation model assay kinase receptor signal tissue serum antibody"
).split()
JOURNALS = ["PLoS One", "Virus Research", "Emerg Microbes Infect", "Nature"]
AUTHORS = ["Doe J", "Roe R", "Fung S", "Li Q", "Smith A"]
DATES = ["2020-03", "2020-04", "2020-12", "2019", "2021-01-15", ""]


def _entity(rng: random.Random, pool: list[str]) -> str:
    name = rng.choice(pool)
    return name.lower() if rng.random() < 0.3 else name


def synth_corpus(seed: int, n_ca: int = 60, n_kg: int = 40,
                 n_entities: int = 14, n_pmids: int = 18) -> Corpus:
    rng = random.Random(seed)
    pool = [f"{p}{i}" for i, p in enumerate(
        rng.choices(["TNF", "IL", "CASP", "MAVS", "ACE", "NSP"], k=n_entities))]
    pmids = [f"pm{i}" for i in range(n_pmids)]

    def sentence(subject, obj):
        extra = " ".join(rng.choices(WORDS, k=rng.randint(3, 7)))
        return f"{subject} affects {obj} via {extra}"

    ca_lines = []
    for _ in range(n_ca):
        s, o = _entity(rng, pool), _entity(rng, pool)
        evidence = [
            {"sentence": sentence(s, o),
             "pmid": rng.choice(pmids) if rng.random() > 0.1 else None}
            for _ in range(rng.randint(1, 3))
        ]
        ca_lines.append(ca_line(s, o, rng.choice(CA_RELATIONS), evidence))

    kg_lines = []
    for _ in range(n_kg):
        s, o = _entity(rng, pool), _entity(rng, pool)
        kg_lines.append(
            kg_line(s, o, rng.choice(KG_RELATIONS), rng.choice(PAIR_KINDS),
                    sentence(s, o), rng.choice(pmids) if rng.random() > 0.1 else None)
        )

    meta_rows = ["pmid,title,abstract,authors,publish_time,journal"]
    for pmid in pmids:
        if rng.random() < 0.2:
            continue  # leave some evidence unaligned
        title = " ".join(rng.choices(WORDS, k=3))
        abstract = " ".join(rng.choices(WORDS + pool, k=rng.randint(5, 10)))
        authors = "; ".join(rng.sample(AUTHORS, k=rng.randint(0, 3)))
        meta_rows.append(
            f'{pmid},{title},"{abstract}","{authors}",{rng.choice(DATES)},'
            f"{rng.choice(JOURNALS)}"
        )

    return build_corpus("\n".join(ca_lines), "\n".join(kg_lines), "\n".join(meta_rows) + "\n")
