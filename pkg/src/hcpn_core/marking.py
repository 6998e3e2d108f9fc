"""
Fichas e marcações canônicas
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple


@dataclass(frozen=True)
class Token:
    color: str
    timestamp: Optional[int] = None

    def sort_key(self) -> Tuple[str, int]:
        return (self.color, -1 if self.timestamp is None else self.timestamp)

    def __str__(self) -> str:
        return self.color if self.timestamp is None else f"{self.color}@{self.timestamp}"


@dataclass(frozen=True)
class Marking:
    """
    Marcação imutável: tupla ordenada de (lugar, fichas ordenadas) sem lugares vazios,
    mais o relógio global. Duas marcações iguais têm a mesma representação.
    """
    tokens: Tuple[Tuple[str, Tuple[Token, ...]], ...] = ()
    clock: int = 0

    @classmethod
    def from_dict(cls, tokens: Mapping[str, Iterable[Token]], clock: int = 0) -> "Marking":
        items = []
        for place in sorted(tokens):
            bag = tuple(sorted(tokens[place], key=Token.sort_key))
            if bag:
                items.append((place, bag))
        return cls(tuple(items), clock)

    def as_dict(self) -> Dict[str, Tuple[Token, ...]]:
        return dict(self.tokens)

    def get(self, place: str) -> Tuple[Token, ...]:
        for name, bag in self.tokens:
            if name == place:
                return bag
        return ()

    def count(self, place: str) -> int:
        return len(self.get(place))

    @property
    def marked_places(self) -> Tuple[str, ...]:
        return tuple(p for p, _ in self.tokens)

    @property
    def total(self) -> int:
        return sum(len(bag) for _, bag in self.tokens)

    @property
    def is_empty(self) -> bool:
        return not self.tokens

    def with_clock(self, clock: int) -> "Marking":
        return Marking(self.tokens, clock)

    def untimed(self) -> Dict[str, Tuple[str, ...]]:
        """Projeção sem carimbos de tempo nem relógio"""
        return {p: tuple(t.color for t in bag) for p, bag in self.tokens}

    def to_dict(self) -> Dict[str, object]:
        return {
            "clock": self.clock,
            "tokens": {p: [str(t) for t in bag] for p, bag in self.tokens},
        }

    def __str__(self) -> str:
        body = ", ".join(f"{p}: {' '.join(str(t) for t in bag)}" for p, bag in self.tokens)
        return f"{{{body}}}@{self.clock}"
