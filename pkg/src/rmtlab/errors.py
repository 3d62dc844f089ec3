"""Error taxonomy shared across the package.

FormatError      malformed input document (JSON syntax or schema)
ValidationError  well-formed model that violates a structural constraint
NumericalError   a solver, quadrature or recurrence failed to reach target
"""


class FormatError(ValueError):
    pass


class ValidationError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass
