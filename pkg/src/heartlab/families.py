"""Named parameter tuples used by the experiments, the tests and the CLI.

``P0`` is the reference family.  The others change one coefficient:

* ``P1`` shrinks ``B1`` so that ``c_I`` grows by ``ln 3``, i.e. ``tau`` moves by 1;
* ``Pq`` shrinks ``B1`` so that ``c_I`` grows by ``ln 2``, i.e. ``tau`` moves by ``A``;
* ``P2`` moves ``c_I`` by 0.37, which is no lattice shift;
* ``P0mu`` perturbs ``mu`` by ``1e-3``, which changes ``A``.
"""
from __future__ import annotations

from .errors import DomainError
from .model import FamilyParams

P0 = FamilyParams(lam="1/2", mu="12", B1="1", B2="1", C1="e", C2="e", name="P0")
P1 = P0.replace(B1="exp(-4)", name="P1")
Pq = P0.replace(B1="exp(-2)", name="Pq")
P2 = P0.replace(B1="exp(2 - 2*exp(0.37))", name="P2")
P0mu = P0.replace(mu="12.001", name="P0mu")

BUILTIN = {f.name: f for f in (P0, P1, Pq, P2, P0mu)}


def builtin(name: str) -> FamilyParams:
    try:
        return BUILTIN[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; builtins are {', '.join(BUILTIN)}") from None
