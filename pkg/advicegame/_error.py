from typing import Optional


class AdviceGameError(Exception):
    def __init__(
        self,
        message: Optional[str] = None,
        details: Optional[object] = None,
        code: Optional[str] = None,
    ):
        self.message: Optional[str] = message
        self.details: Optional[object] = details
        self.code: Optional[str] = code

    def __str__(self):
        msg = self.message or "<empty message>"
        return msg


class AdviceGameValueError(AdviceGameError):
    pass


class AdviceGameDomainError(AdviceGameValueError):
    pass


class AdviceGameNotFoundError(AdviceGameError):
    pass


class AdviceGamePermissionError(AdviceGameError):
    pass


class AdviceGameIOError(AdviceGameError):
    pass


class AdviceGameInternalError(AdviceGameError):
    pass


class AdviceGameOracleError(AdviceGameInternalError):
    pass
