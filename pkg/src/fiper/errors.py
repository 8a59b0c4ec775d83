"""Exception types shared across the package.

Every error carries a machine-readable ``code`` and, where it makes sense,
a ``path`` locating the offending field or file. The service layer maps
these onto the ``{code, message, path}`` wire shape.
"""

from __future__ import annotations


class FiperError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "path": self.path}


class SchemaMismatchError(FiperError):
    """A rule, instance or summary refers to a feature the schema does not define."""

    code = "schema_mismatch"


class RuleTextError(FiperError):
    """Rule-text parsing failed. Carries 1-based line and column of the failure."""

    code = "rule_text_error"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DocumentError(FiperError):
    """A bundle, schema, dataset or study document is malformed."""

    code = "document_error"


class BundleValidationError(FiperError):
    """A parsed bundle failed validation; ``violations`` holds the full report."""

    code = "bundle_invalid"

    def __init__(self, message: str, violations, path: str = ""):
        super().__init__(message, path)
        self.violations = tuple(violations)


class StatsError(FiperError):
    """Invalid input to a distribution summary or geometry computation."""

    code = "stats_error"


class ViewError(FiperError):
    """A view could not be assembled or rendered."""

    code = "view_error"


class StudyError(FiperError):
    """Invalid study-scoring input (mismatched vectors, out-of-range ratings...)."""

    code = "study_error"


class StoreLoadError(FiperError):
    """The data directory could not be loaded; message names the offending files."""

    code = "store_load_error"
