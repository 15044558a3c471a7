"""Rhetorical-role labelling of legal sentences over sentence-similarity graphs.

Thin bindings over the C++ core: graph construction, label diffusion, a
two-layer GCN, context windows, evaluation and the command line.
"""

from ._rolegraph import (
    ROLES,
    ConfigError,
    CorpusError,
    DimensionError,
    FormatError,
    GcnModel,
    IoError,
    NumericalError,
    RolegraphError,
    SentenceGraph,
    TaxonomyError,
    build_graph,
    cosine,
    diffuse,
    evaluate,
    gcn_forward,
    gcn_predict,
    gcn_train,
    parse_graph,
    read_embeddings,
    read_graph,
    read_labels,
    run_cli,
    strip_stopwords,
    windowize,
    write_embeddings,
    write_graph,
    write_labels,
)

__all__ = [
    "ROLES",
    "ConfigError",
    "CorpusError",
    "DimensionError",
    "FormatError",
    "GcnModel",
    "IoError",
    "NumericalError",
    "RolegraphError",
    "SentenceGraph",
    "TaxonomyError",
    "build_graph",
    "cosine",
    "diffuse",
    "evaluate",
    "gcn_forward",
    "gcn_predict",
    "gcn_train",
    "parse_graph",
    "read_embeddings",
    "read_graph",
    "read_labels",
    "run_cli",
    "strip_stopwords",
    "windowize",
    "write_embeddings",
    "write_graph",
    "write_labels",
]
