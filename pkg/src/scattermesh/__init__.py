"""scattermesh: document clustering with expert-label evaluation and
scatter/gather exploration.

The pipeline turns a document collection into a weighted term-document
matrix, prunes the vocabulary, optionally reduces dimensionality, partitions
the documents, and scores the partition against withheld subject labels.
"""

from .corpus import (
    Corpus,
    DocumentRecord,
    FieldSubset,
    LabeledDataset,
    build_labeled_dataset,
    compose_text,
    load_corpus,
    read_truth_csv,
    save_corpus,
    write_truth_csv,
)
from .vectorizer import (
    TermDocMatrix,
    Vocabulary,
    WeightScheme,
    build_vocabulary,
    load_stopwords,
    tokenize,
    weight_matrix,
)
from .featselect import DfParams, VcgsParams, df_select, restrict, vcgs_select, zero_rows
from .lsa import EmbeddingMatrix, SvdFactors, back_transform, project_documents, truncated_svd
from .cluster import (
    Clustering,
    KmeansParams,
    MaximinParams,
    cosine_distance,
    kmeans_pp,
    maximin,
)
from .metrics import (
    ContingencyTable,
    MetricReport,
    ami,
    contingency,
    entropy,
    expected_mi,
    homogeneity,
    mutual_information,
    purity,
    silhouette,
)
from .descriptors import DescriptorList, cluster_descriptors, plot_projection
from .harness import (
    ExperimentResult,
    PipelineConfig,
    emit_report,
    grid_sweep,
    run_experiment,
    run_pipeline,
)
from .datasets import PlantedCorpus, make_planted_corpus, reference_class_labels

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "DocumentRecord",
    "FieldSubset",
    "LabeledDataset",
    "build_labeled_dataset",
    "compose_text",
    "load_corpus",
    "read_truth_csv",
    "save_corpus",
    "write_truth_csv",
    "TermDocMatrix",
    "Vocabulary",
    "WeightScheme",
    "build_vocabulary",
    "load_stopwords",
    "tokenize",
    "weight_matrix",
    "DfParams",
    "VcgsParams",
    "df_select",
    "restrict",
    "vcgs_select",
    "zero_rows",
    "EmbeddingMatrix",
    "SvdFactors",
    "back_transform",
    "project_documents",
    "truncated_svd",
    "Clustering",
    "KmeansParams",
    "MaximinParams",
    "cosine_distance",
    "kmeans_pp",
    "maximin",
    "ContingencyTable",
    "MetricReport",
    "ami",
    "contingency",
    "entropy",
    "expected_mi",
    "homogeneity",
    "mutual_information",
    "purity",
    "silhouette",
    "DescriptorList",
    "cluster_descriptors",
    "plot_projection",
    "ExperimentResult",
    "PipelineConfig",
    "emit_report",
    "grid_sweep",
    "run_experiment",
    "run_pipeline",
    "PlantedCorpus",
    "make_planted_corpus",
    "reference_class_labels",
]
