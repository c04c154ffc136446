"""Exception hierarchy shared by every stage of the pipeline."""


class TraceGroupError(Exception):
    """Base class for all errors raised by :mod:`tracegroup`."""


class TraceInputError(TraceGroupError, ValueError):
    """Input trace data could not be loaded or failed validation."""


class MalformedJsonError(TraceInputError):
    pass


class SchemaViolationError(TraceInputError):
    pass


class DuplicateSpanIdError(TraceInputError):
    pass


class DanglingParentError(TraceInputError):
    pass


class CycleDetectedError(TraceInputError):
    pass


class EmptyTraceError(TraceInputError):
    pass


class DuplicateTraceIdError(TraceInputError):
    pass


class KindMismatchError(TraceGroupError, ValueError):
    """Two encodings of different kinds were compared."""


class EmptyGroupError(TraceGroupError, ValueError):
    pass


class EmptyTraceSetError(TraceGroupError, ValueError):
    pass


class UnknownServiceError(TraceGroupError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
