from __future__ import annotations

import logging
from typing import Any, Callable, TypeVar

import pydantic

import advicegame._error as advicegame_error

logger = logging.getLogger(__name__)

T = TypeVar("T")


class AdviceGameBaseClient:
    """Base client for dispatching calls to the analysis services.

    Every service call goes through ``_call`` so that callers only ever see
    the library's own exception hierarchy.

    Raises
    ------
    AdviceGameValueError
        If inputs fail validation, including pydantic type errors.
    AdviceGameNotFoundError
        If an input file does not exist.
    AdviceGamePermissionError
        If a file cannot be read or written for lack of permission.
    AdviceGameIOError
        If any other operating-system error happens while reading or
        writing files.
    AdviceGameInternalError
        If an unexpected error happens inside a computation.

    """

    def _call(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        logger.debug("calling %s", getattr(func, "__qualname__", func))
        try:
            return func(*args, **kwargs)
        except advicegame_error.AdviceGameError as ex:
            raise ex
        except pydantic.ValidationError as ex:
            raise advicegame_error.AdviceGameValueError(
                message=str(ex), details=ex.errors(include_url=False)
            )
        except FileNotFoundError as ex:
            raise advicegame_error.AdviceGameNotFoundError(message=str(ex))
        except PermissionError as ex:
            raise advicegame_error.AdviceGamePermissionError(message=str(ex))
        except OSError as ex:
            raise advicegame_error.AdviceGameIOError(message=str(ex))
        except (TypeError, ValueError) as ex:
            raise advicegame_error.AdviceGameValueError(message=str(ex))
        except Exception as e:
            raise advicegame_error.AdviceGameInternalError(message=str(e))
