"""Located connection parameters and sigma-sorted collections of them."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

LE, LI, EI = "LE", "LI", "EI"
MARKS = (LE, LI, EI)
LETTER = {LE: "E", LI: "I", EI: "X"}


@dataclass(frozen=True)
class ConnectionEvent:
    """A saddle connection at ``sigma``.

    ``n`` counts turns of the exterior separatrix, ``k`` turns of the
    interior one; LE events carry only ``n``, LI only ``k``, EI both.
    ``offset`` is the distance from an EI parameter to the right end of its
    interval, resolved even when it is below the ulp of ``sigma``.
    """

    sigma: object
    mark: str
    n: int | None = None
    k: int | None = None
    offset: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.mark not in MARKS:
            raise DomainError(f"unknown mark {self.mark!r}")
        has_n, has_k = self.n is not None, self.k is not None
        expected = {LE: (True, False), LI: (False, True), EI: (True, True)}[self.mark]
        if (has_n, has_k) != expected:
            raise DomainError(f"{self.mark} event has malformed indices n={self.n}, k={self.k}")

    @property
    def letter(self) -> str:
        return LETTER[self.mark]


def precedes(a: ConnectionEvent, b: ConnectionEvent) -> bool:
    """Strict order of events; an EI may share its sigma with the next event
    when its resolved offset is positive."""
    if a.sigma < b.sigma:
        return True
    return (
        a.sigma == b.sigma
        and a.mark == EI
        and b.mark != EI
        and a.offset is not None
        and a.offset > 0
    )


@dataclass(frozen=True)
class MarkedSequence:
    events: tuple = ()
    horizon: object = None
    prec: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        for a, b in zip(self.events, self.events[1:]):
            if not precedes(a, b):
                raise DomainError(
                    f"events not strictly increasing: {a.mark}@{a.sigma} then {b.mark}@{b.sigma}"
                )

    @property
    def depth(self) -> int:
        """Number of LE and LI events."""
        return sum(1 for e in self.events if e.mark != EI)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def only(self, *marks) -> list:
        return [e for e in self.events if e.mark in marks]

    def word(self) -> str:
        return "".join(e.letter for e in self.events)
