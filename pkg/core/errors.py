from __future__ import annotations


class GrowthLabError(RuntimeError):
    pass


class ExprParseError(GrowthLabError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(message)
        self.offset = offset


class EvaluationError(GrowthLabError):
    pass


class DivisionByZeroError(EvaluationError):
    def __init__(self, message: str, point: complex | None = None) -> None:
        super().__init__(message)
        self.point = point


class RangeOverflowError(EvaluationError):
    pass


class QuadratureError(GrowthLabError):
    def __init__(self, message: str, worst: tuple[float, float]) -> None:
        super().__init__(message)
        self.worst = worst


class ZeroCountError(GrowthLabError):
    pass


class ContourTooCloseError(ZeroCountError):
    def __init__(self, message: str, radius: float, raw: complex | None = None) -> None:
        super().__init__(message)
        self.radius = radius
        self.raw = raw


class EstimationError(GrowthLabError):
    pass


class UnsupportedMeromorphicError(GrowthLabError):
    pass


class ZeroRayError(GrowthLabError):
    pass


class PreconditionError(GrowthLabError):
    pass


class ConfigError(GrowthLabError):
    pass


class ReportIOError(GrowthLabError):
    def __init__(self, message: str, path: str) -> None:
        super().__init__(message)
        self.path = path
