"""Exception hierarchy. The CLI maps these onto exit codes."""

from __future__ import annotations


class MetrographError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MetrographError):
    """Bad input data or configuration (CLI exit code 2)."""


class ParseError(InputError):
    """A document could not be parsed.

    ``offset`` is the byte offset of the failure when known,
    ``feature_index`` the index of the offending GeoJSON feature.
    """

    def __init__(self, message: str, *, offset: int | None = None,
                 feature_index: int | None = None):
        super().__init__(message)
        self.offset = offset
        self.feature_index = feature_index


class ConfigError(InputError):
    """Invalid parameter values (non-positive speeds, bad radii, ...)."""


class AnalysisError(MetrographError):
    """An analysis is undefined on the given input (CLI exit code 1)."""


class MissingWeightError(AnalysisError):
    """An edge lacks the weight attribute an analysis requires."""


class NegativeWeightError(AnalysisError):
    """An edge carries a negative cost where non-negative is required."""


class EmptyLayerError(AnalysisError):
    """An operation needs at least one node in the requested layer."""


class UndefinedModularityError(AnalysisError):
    """Modularity is undefined (graph has no edges)."""


class UndefinedWalkabilityError(AnalysisError):
    """The walkability ratio is undefined for the given area."""


class GraphError(MetrographError):
    """Structural graph violation (unknown node, frozen mutation, ...)."""


class BundleVersionError(MetrographError):
    """On-disk graph bundle has an incompatible format version (exit 3)."""
