"""semviz: semantic-relation exploration engine.

Ingests extracted biomedical relations plus article metadata, builds a
three-layer faceted index, grounds functional types by parameter
reduction, and answers aggregation and bounded pathway queries over HTTP
or the CLI.
"""

from .aggregate import HeatMatrix, Metrics, TablePage, TermCount, data_table, date_histogram, heat_map, metrics, tag_cloud
from .errors import BuildError, ConfigError, FormatError, NotFoundError, QueryError, SemvizError
from .indexing import EvidenceSet, FilterContext, Index, tokenize
from .ingest import (
    AliasMap,
    ArticleMeta,
    EvidenceDoc,
    PairKind,
    RelationRecord,
    Source,
    align_by_pmid,
    canonicalize,
    load_aliases,
    parse_article_metadata,
    parse_causal_assertions,
    parse_kg_relations,
)
from .pathways import (
    Pathway,
    RegulationGraph,
    build_graph,
    effective_depth,
    enumerate_pathways,
    first_edge_evidence,
    top_members,
    walk_count_estimate,
)
from .semantics import (
    FunctionalType,
    TripletRelation,
    functional_type_name,
    ground_functional_types,
    join_triplets,
    opposite_upstream_regulators,
    upstream_regulators,
)
from .taxonomy import (
    Metatype,
    Polarity,
    RelationType,
    Taxonomy,
    compose_polarity,
    default_taxonomy,
    load_taxonomy,
    opposite,
)

__version__ = "0.1.0"
