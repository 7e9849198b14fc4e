# -*- coding: utf-8 -*-
"""
    Exception hierarchy shared by every subpackage.
"""

import functools
import traceback


class PsCausalError(Exception):
    """Base class for all errors raised by pscausal."""
    pass


class ValidationError(PsCausalError, ValueError):
    """Invalid input or configuration."""
    pass


class RankDeficiencyError(PsCausalError):
    """A design matrix is numerically rank deficient."""

    def __init__(self, message, rank=None, columns=None):
        PsCausalError.__init__(self, message)
        self.rank = rank
        self.columns = columns


class SingularCovarianceError(PsCausalError):
    """A covariance matrix could not be factorized."""
    pass


class SamplerError(PsCausalError):
    """The log posterior became non-finite inside a chain."""

    def __init__(self, message, chain=None, iteration=None, block=None):
        PsCausalError.__init__(self, message)
        self.chain = chain
        self.iteration = iteration
        self.block = block


class ConvergenceError(PsCausalError):
    """The R-hat gate rejected a fit."""

    def __init__(self, message, report=None):
        PsCausalError.__init__(self, message)
        self.report = report


class NonConvergenceAbort(PsCausalError):
    """Too many Monte Carlo replicates failed the convergence gate."""

    def __init__(self, message, excluded=0, total=0):
        PsCausalError.__init__(self, message)
        self.excluded = excluded
        self.total = total


class IngestError(PsCausalError):
    """Malformed input file, missing columns or missing centroids."""
    pass


class OutputExistsError(PsCausalError):
    """Refusing to overwrite an existing output file."""
    pass


def raise_with_context(context):
    """
    Decorator for better reporting of failures inside worker processes.

    The wrapped function's exception is re-raised as the same type when it
    is a PsCausalError, with `context` (formatted with the call arguments)
    and the failing source line prepended to the message.
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapped(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except PsCausalError as err:
                where = _failing_line(err)
                err.args = ('{0}: {1}{2}'.format(context.format(*args, **kwargs), err.args[0] if err.args else '', where),) + tuple(err.args[1:])
                raise
            except Exception as err:
                raise PsCausalError('{0}: {1!r}{2}'.format(context.format(*args, **kwargs), err, _failing_line(err)))

        return wrapped
    return decorator


def _failing_line(err):
    frames = traceback.extract_tb(err.__traceback__)
    if not frames:
        return ''

    last = frames[-1]
    return ' [in {0}:{1}]'.format(last.filename, last.lineno)
