class FronthaulException(Exception):
    pass


class InvalidConfigurationException(FronthaulException):
    pass


class InfeasibleParameterException(InvalidConfigurationException):
    pass


class ValidationException(InvalidConfigurationException):
    pass


class GeometryException(FronthaulException):
    pass


class CompressionException(FronthaulException):
    pass


class InfeasibleSpectrumException(CompressionException):
    pass


class SolverException(CompressionException):
    pass


class EstimationException(FronthaulException):
    pass


class SpecLoaderException(FronthaulException):
    def __init__(self, message: str, line: int = None, field: str = None):
        super().__init__(message)
        self.line = line
        self.field = field

    def __str__(self):
        msg = super().__str__()
        if self.line is not None:
            msg = f'line {self.line}: {msg}'

        if self.field is not None:
            msg = f'{msg} (field: {self.field})'

        return msg


class SpecNotFoundException(SpecLoaderException):
    pass


class UnknownPresetException(SpecLoaderException):
    pass


class ReportException(FronthaulException):
    pass
