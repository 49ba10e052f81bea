"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class FlipCubeError(Exception):
    code = "error"


class InputError(FlipCubeError):
    code = "input_error"


class DuplicatePointError(InputError):
    code = "duplicate_point"


class ParseError(InputError):
    code = "parse_error"


class CollinearCircleError(FlipCubeError):
    code = "collinear_circle"


class DegenerateInputError(InputError):
    code = "degenerate_input"


class CrossingInputError(InputError):
    code = "crossing_input"


class InvalidTriangulationError(InputError):
    code = "invalid_triangulation"


class NotFlippableError(FlipCubeError):
    code = "not_flippable"


class AlreadyDelaunayError(FlipCubeError):
    code = "already_delaunay"


class NotInTriangulationError(FlipCubeError):
    code = "not_in_triangulation"


class NotADiagonalError(InputError):
    code = "not_a_diagonal"


class PentagonExistsError(InputError):
    code = "pentagon_exists"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAForestError(FlipCubeError):
    code = "not_a_forest"


class MismatchedPointSetsError(InputError):
    code = "mismatched_point_sets"


class BudgetExceededError(FlipCubeError):
    code = "budget_exceeded"


class DisconnectedError(FlipCubeError):
    code = "disconnected"


class InvalidParamsError(InputError):
    code = "invalid_params"


class MaskNotOnHullError(InvalidParamsError):
    code = "mask_not_on_hull"
