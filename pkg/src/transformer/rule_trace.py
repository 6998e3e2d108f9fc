"""
Trilha de auditoria: regra aplicada -> entidade de origem -> elementos produzidos
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from config.settings import SCHEMA_VERSIONS

RULE_PREFIXES = ("T1.", "T2.", "Φ.", "T3.")


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    source: str
    produced: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"rule": self.rule, "source": self.source, "produced": list(self.produced)}


@dataclass(frozen=True)
class RuleTrace:
    entries: Tuple[TraceEntry, ...] = ()

    def rules(self) -> List[str]:
        return sorted({e.rule for e in self.entries})

    def sources(self) -> List[str]:
        return sorted({e.source for e in self.entries})

    def by_rule(self, rule: str) -> Tuple[TraceEntry, ...]:
        return tuple(e for e in self.entries if e.rule == rule)

    def entry_of(self, element_id: str) -> Optional[TraceEntry]:
        """Entrada que produziu um elemento da rede"""
        for entry in self.entries:
            if element_id in entry.produced:
                return entry
        return None

    def source_of(self, element_id: str) -> Optional[str]:
        entry = self.entry_of(element_id)
        return entry.source if entry else None

    def produced(self) -> List[str]:
        return [p for e in self.entries for p in e.produced]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSIONS["trace"],
            "kind": "trace",
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RuleTrace":
        return cls(tuple(TraceEntry(e["rule"], e["source"], tuple(e["produced"]))
                         for e in data.get("entries", ())))
