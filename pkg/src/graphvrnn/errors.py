"""Exception taxonomy shared across the package.

The CLI maps these onto its exit codes: DataError -> 2, NumericError -> 3;
usage problems (bad flags, unknown subcommands) are click's domain and
exit 1.
"""


class GraphVrnnError(Exception):
    """Base class for all package errors."""


class DataError(GraphVrnnError):
    """Invalid, malformed, or inconsistent input data."""


class DisconnectedGraphError(DataError):
    """A graph operation that requires connectivity met an unreachable node."""


class BandwidthError(DataError):
    """An encoding would drop a true edge that falls outside the lookback window."""


class FormatError(DataError):
    """A file does not conform to the graph-set or checkpoint format."""


class NumericError(GraphVrnnError):
    """A non-finite value surfaced where the computation requires finiteness."""
