"""Exception types raised across the package."""


class PathgradError(Exception):
    """Base class for all package errors."""


class OutOfDomain(PathgradError, ValueError):
    pass


class InvalidStep(PathgradError, ValueError):
    pass


class InvalidParameter(PathgradError, ValueError):
    pass


class DimensionMismatch(PathgradError, ValueError):
    pass


class ParameterOutOfRange(PathgradError, ValueError):
    pass


class IndexOutOfRange(PathgradError, IndexError):
    pass


class InvalidBreakpoints(InvalidParameter):
    pass


class SpecParseError(PathgradError, ValueError):
    """Raised by spec validation; ``errors`` lists every problem found."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PathLeavesDomain(PathgradError, ValueError):
    def __init__(self, t, point):
        self.t = float(t)
        self.point = point
        super().__init__(f"path leaves the field domain at t={self.t!r}")


class AllNodesNondifferentiable(PathgradError):
    """Every quadrature node hit the field's kink set."""

    def __init__(self, report):
        self.report = report
        super().__init__("every quadrature node lies on the kink set of the field")


class NotConverged(PathgradError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            f"residual {report.residual!r} above tolerance after {report.quadrature.nodes} nodes"
        )


class EndpointMismatch(PathgradError, ValueError):
    pass


class NoViolation(PathgradError):
    pass


class NotMonotonic(PathgradError):
    pass
