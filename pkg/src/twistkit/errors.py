"""Exception types shared by all modules.

Each error carries a short machine-readable ``code`` so that the CLI can
report it without parsing messages.
"""


class TwistkitError(Exception):
    code = "error"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InvalidInput(TwistkitError):
    code = "invalid-input"


class InvalidDimension(InvalidInput):
    code = "invalid-dimension"


class InvalidIndex(InvalidInput):
    code = "invalid-index"


class MalformedMap(TwistkitError):
    code = "malformed-map"


class CompositionError(TwistkitError):
    code = "composition-error"


class WrongDegree(TwistkitError):
    code = "wrong-degree"


class NotElementary(TwistkitError):
    code = "not-elementary"


class NotSplittable(TwistkitError):
    code = "not-splittable"


class NoInverse(TwistkitError):
    code = "no-inverse"


class UnsupportedShape(TwistkitError):
    code = "unsupported-shape"


class IncompleteLabelling(TwistkitError):
    code = "incomplete-labelling"


class ShapeError(TwistkitError):
    code = "shape-error"


class ConversionRefused(TwistkitError):
    code = "conversion-refused"

    def __init__(self, message="", report=None):
        super().__init__(message)
        self.report = report


class HornShapeError(TwistkitError):
    code = "horn-shape-error"


class Refused(TwistkitError):
    code = "refused"


class NotInvertible(TwistkitError):
    code = "not-invertible"


class FormatError(TwistkitError):
    code = "format-error"
