"""Indexed coefficient sequences with per-term provenance.

Exact terms are Python ints. Approximate and extended terms are ``Decimal``
so that every digit read from a source file survives a save/load cycle;
arithmetic happens in mpmath at an explicit working precision.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Iterator

import mpmath as mp

DEFAULT_DPS = 120


class Provenance(enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approximate"
    EXTENDED = "extended"


@dataclass(frozen=True)
class Term:
    index: int
    value: int | Decimal
    provenance: Provenance = Provenance.EXACT


class SeriesError(ValueError):
    pass


@dataclass
class Series:
    name: str
    terms: list[Term] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        idx = [t.index for t in self.terms]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise SeriesError(f"{self.name}: indices must be strictly increasing")
        seen_inexact = False
        for t in self.terms:
            if t.provenance is Provenance.EXACT:
                if seen_inexact:
                    raise SeriesError(f"{self.name}: exact term at L={t.index} follows an approximate one")
                if not isinstance(t.value, int):
                    raise SeriesError(f"{self.name}: exact term at L={t.index} is not an integer")
            else:
                seen_inexact = True

    @classmethod
    def from_ints(cls, name: str, values: Iterable[int], start: int = 1, **meta) -> "Series":
        return cls(name, [Term(start + i, int(v)) for i, v in enumerate(values)], dict(meta))

    @classmethod
    def from_mapping(cls, name: str, values: dict, provenance: Provenance = Provenance.APPROXIMATE,
                     dps: int = DEFAULT_DPS) -> "Series":
        terms = []
        for k in sorted(values):
            v = values[k]
            if isinstance(v, int) and provenance is Provenance.EXACT:
                terms.append(Term(k, v))
            else:
                terms.append(Term(k, to_decimal(v, dps), provenance))
        return cls(name, terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    @property
    def indices(self) -> list[int]:
        return [t.index for t in self.terms]

    def exact_part(self) -> "Series":
        return Series(self.name, [t for t in self.terms if t.provenance is Provenance.EXACT], dict(self.meta))

    def truncated(self, max_index: int) -> "Series":
        return Series(self.name, [t for t in self.terms if t.index <= max_index], dict(self.meta))

    def mp_values(self, dps: int = DEFAULT_DPS) -> dict[int, mp.mpf]:
        """Values as mpf; call inside a ``mp.workdps`` block of at least ``dps``."""
        with mp.workdps(dps):
            return {t.index: to_mpf(t.value) for t in self.terms}

    def __getitem__(self, index: int):
        for t in self.terms:
            if t.index == index:
                return t.value
        raise KeyError(index)


def to_mpf(v) -> mp.mpf:
    if isinstance(v, Decimal):
        return mp.mpf(str(v))
    return mp.mpf(v)


def to_decimal(v, dps: int = DEFAULT_DPS) -> Decimal:
    if isinstance(v, Decimal):
        return v
    if isinstance(v, int):
        return Decimal(v)
    if isinstance(v, str):
        return Decimal(v)
    return Decimal(mp.nstr(mp.mpf(v), dps))
