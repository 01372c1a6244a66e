"""
Exception hierarchy for curvkit
"""

from typing import Optional, Tuple


class CurvkitError(Exception):
    """Base class for all curvkit errors"""


class MetricFormatError(CurvkitError, ValueError):
    """A distance-matrix or point-cloud file could not be parsed"""


class MetricValidationError(CurvkitError, ValueError):
    """Metric data violates an invariant (negative entry, diagonal, size, index)"""


class GraphFormatError(CurvkitError, ValueError):
    """An edge-list file is malformed or ambiguous"""


class GraphDisconnectedError(CurvkitError):
    """Shortest paths requested on a graph with more than one component"""

    def __init__(self, pair: Tuple[int, int], n_components: int, k: Optional[int] = None):
        self.pair = pair
        self.n_components = n_components
        hint = f"try a larger k than {k}" if k is not None else "try a larger k"
        super().__init__(
            f"graph is disconnected ({n_components} components): no path between "
            f"nodes {pair[0]} and {pair[1]}; {hint}"
        )


class DensityError(CurvkitError, ValueError):
    """Density estimation produced a non-positive value"""


class ScheduleError(CurvkitError, ValueError):
    """Radius schedule is degenerate or empty"""


class SamplerError(CurvkitError, ValueError):
    """Invalid sampler request"""


class ConfigError(CurvkitError, ValueError):
    """Invalid experiment configuration"""


class StageError(CurvkitError):
    """A pipeline stage failed; carries the stage label"""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {type(cause).__name__}: {cause}")


class OutputError(CurvkitError, ValueError):
    """A result artifact cannot be produced from the given values"""
