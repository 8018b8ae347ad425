"""Retry helpers for randomized numerical procedures."""

import logging
from typing import Callable, Tuple, Type, TypeVar, Any

from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt, wait_none

logger = logging.getLogger(__name__)

T = TypeVar('T')


def with_retry(
    func: Callable[..., T],
    *args: Any,
    max_attempts: int = 3,
    retryable_exceptions: Tuple[Type[BaseException], ...] = (Exception,),
    **kwargs: Any,
) -> T:
    """
    Call ``func`` until it succeeds or ``max_attempts`` calls have failed.

    Randomized procedures draw fresh randomness on every call, so no delay
    is applied between attempts. The last exception is re-raised unchanged.

    Args:
        func: Callable to invoke
        max_attempts: Maximum number of calls
        retryable_exceptions: Exception types that trigger another attempt
    """
    retrying = Retrying(
        stop=stop_after_attempt(max_attempts),
        wait=wait_none(),
        retry=retry_if_exception_type(retryable_exceptions),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    )
    return retrying(func, *args, **kwargs)
