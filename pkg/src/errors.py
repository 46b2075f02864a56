class MtsError(Exception):
    """Base class for every error raised by the m-TSNE pipeline."""

    exit_code = 1


class InputError(MtsError):
    exit_code = 2


class SchemaError(InputError):
    pass


class ParseError(InputError):
    """A cell that is not a number. `row` and `column` are 1-based."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ValidationError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class MissingLabelError(InputError):
    pass


class ContractViolationError(MtsError):
    pass


class DimensionError(ContractViolationError):
    exit_code = 2


class CalibrationError(MtsError):
    def __init__(self, message, row=None, entropy=None):
        super().__init__(message)
        self.row = row
        self.entropy = entropy


class DivergenceError(MtsError):
    def __init__(self, message, iteration=None, learning_rate=None):
        super().__init__(message)
        self.iteration = iteration
        self.learning_rate = learning_rate


class StaleCacheError(MtsError):
    pass
