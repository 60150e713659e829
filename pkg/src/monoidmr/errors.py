"""Exception types shared across the package."""


class MonoidError(Exception):
    """Base class for errors raised by monoid operations."""


class MonoidTypeError(MonoidError, TypeError):
    """An operand is not an element of the monoid's carrier type."""


class EmptyGroupError(MonoidError, ValueError):
    """A mean was requested for a group with no observations."""


class IncompatibleSketchError(MonoidError, ValueError):
    """Two sketches with different parameters were merged."""


class UnsupportedMonoidError(MonoidError, ValueError):
    """The monoid cannot be used for automatic combining."""


class MapReduceError(Exception):
    """Base class for engine failures."""


class ConfigError(MapReduceError, ValueError):
    """Invalid engine or job configuration."""


class JobRegistrationError(MapReduceError, TypeError):
    """A job's declared value types violate the combiner contract."""


class RecordError(MapReduceError, ValueError):
    """An intermediate record is malformed (e.g. it has an empty key)."""


class EncodingError(MapReduceError, ValueError):
    """A value has no canonical byte encoding."""


class MapPhaseError(MapReduceError):
    def __init__(self, split_index: int, cause: BaseException):
        self.split_index = split_index
        self.cause = cause
        super().__init__(f"map task for split {split_index} failed: {cause!r}")


class CombinerTypeError(MapReduceError, TypeError):
    """A combiner emitted a value outside the declared intermediate type."""


class CombinePhaseError(MapReduceError):
    def __init__(self, split_index: int, key: str, cause: BaseException):
        self.split_index = split_index
        self.key = key
        self.cause = cause
        super().__init__(
            f"combiner failed on key {key!r} in split {split_index}: {cause!r}"
        )


class ReducePhaseError(MapReduceError):
    def __init__(self, key: str, cause: BaseException):
        self.key = key
        self.cause = cause
        super().__init__(f"reducer failed on key {key!r}: {cause!r}")
