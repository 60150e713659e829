"""Record and task types shared by the engine and the combining layer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, NamedTuple, Protocol


class Record(NamedTuple):
    key: str
    value: Any


MapFn = Callable[[Any, Any], Iterable[tuple]]


@dataclass(frozen=True)
class Combiner:
    """A combine function together with its declared value types.

    ``fn(key, values)`` returns an iterable of ``(key, value)`` pairs. A valid
    combiner has ``input_type == output_type`` equal to the job's
    intermediate type.
    """

    fn: Callable[[str, list], Iterable[tuple]]
    input_type: Any
    output_type: Any
    derived: bool = False

    def __call__(self, key, values):
        return self.fn(key, values)


class MapTask(Protocol):
    def initialize(self) -> None: ...

    def map(self, key, value) -> Iterable[tuple]: ...

    def close(self) -> Iterable[tuple]: ...


class PlainMapTask:
    """Adapts a stateless ``map_fn(key, value)`` to the task lifecycle."""

    def __init__(self, map_fn: MapFn):
        self.map_fn = map_fn

    def initialize(self) -> None:
        pass

    def map(self, key, value):
        return self.map_fn(key, value)

    def close(self):
        return ()
