class ProbDelError(Exception):
    pass


class ProbDelValueError(ProbDelError, ValueError):
    pass


class ProbDelNormalizationError(ProbDelValueError):
    pass


class ProbDelFrozenError(ProbDelError, AttributeError):
    pass


class ProbDelLayoutError(ProbDelError):
    pass


class ProbDelDomainError(ProbDelValueError):
    pass


class ProbDelVerificationError(ProbDelError):
    def __init__(self, check, message=None):
        self.check = check
        super().__init__(message or "Verification check {!r} failed".format(check))


class ProbDelOutputError(ProbDelError):
    pass
