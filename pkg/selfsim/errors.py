class SelfSimError(ValueError):
    pass


class DomainError(SelfSimError):
    pass


class BoundaryError(SelfSimError):
    pass


class SingularPointError(SelfSimError):
    pass


class DegeneracyError(SelfSimError):
    pass


class ArityError(SelfSimError):
    pass


class NonFiniteError(SelfSimError):
    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class RegularityError(SelfSimError):
    pass


class DegenerateStartError(SelfSimError):
    pass


class StepFloorError(SelfSimError):
    pass


class ConfigError(SelfSimError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
