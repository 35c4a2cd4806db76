"""Exception types shared across the pipeline."""


class ScatterMeshError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(ScatterMeshError):
    """Raised when a corpus file cannot be read or violates record invariants."""


class DatasetError(ScatterMeshError):
    """Raised when a labeled dataset cannot be built as requested."""


class EmptyVocabularyError(ScatterMeshError):
    """Raised when vocabulary construction or filtering leaves no terms."""


class EmptySelectionError(ScatterMeshError):
    """Raised when feature selection keeps no terms."""


class ClusteringError(ScatterMeshError):
    """Raised for invalid clustering inputs (zero vectors, k too large, ...)."""


class MetricError(ScatterMeshError):
    """Raised for invalid metric inputs (id mismatch, single cluster, ...)."""


class StageError(ScatterMeshError):
    """Wraps an error from one pipeline stage with the stage name attached."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
