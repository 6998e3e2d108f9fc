"""
Verificações comportamentais sobre o grafo de alcançabilidade
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from config.settings import SCHEMA_VERSIONS
from src.analyzer.state_space import ReachabilityGraph
from src.hcpn_core.marking import Marking
from src.hcpn_core.net import FlatNet
from src.hcpn_core.simulator import is_final
from src.hcpn_core.token_game import Binding, format_binding
from src.logger import debug
from src.transformer.rule_trace import RuleTrace

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown-truncated"

DEADLOCK = "deadlock"
RESETTABLE = "resettable"
DEAD_TRANSITIONS = "dead-transitions"
BOUNDED = "bounded"


@dataclass(frozen=True)
class Witness:
    """Caminho a partir da raiz até a marcação que justifica o veredito"""
    steps: Tuple[Tuple[str, Binding], ...]
    marking: Marking

    def to_dict(self) -> Dict[str, Any]:
        return {
            "steps": [{"transition": t, "binding": format_binding(b)} for t, b in self.steps],
            "marking": self.marking.to_dict(),
        }


@dataclass(frozen=True)
class PropertyReport:
    name: str
    verdict: str
    witness: Optional[Witness] = None
    details: Tuple[str, ...] = ()
    statistics: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "details": list(self.details),
        }


@dataclass(frozen=True)
class AnalysisReport:
    properties: Tuple[PropertyReport, ...]
    statistics: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        verdicts = {p.verdict for p in self.properties}
        if FAILS in verdicts:
            return FAILS
        if UNKNOWN in verdicts:
            return UNKNOWN
        return HOLDS

    def get(self, name: str) -> PropertyReport:
        return next(p for p in self.properties if p.name == name)

    def to_dict(self) -> Dict[str, Any]:
        stable_stats = {k: v for k, v in self.statistics.items() if k != "seconds"}
        return {
            "schema_version": SCHEMA_VERSIONS["report"],
            "kind": "report",
            "verdict": self.verdict,
            "statistics": stable_stats,
            "properties": [p.to_dict() for p in self.properties],
        }


def _witness(g: ReachabilityGraph, node: int) -> Witness:
    return Witness(tuple(g.path_to(node)), g.marking(node))


def _stats(g: ReachabilityGraph) -> Dict[str, Any]:
    return {"nodes": g.node_count, "edges": g.edge_count}


def check_deadlock(g: ReachabilityGraph, net: FlatNet) -> PropertyReport:
    """
    Falha se alguma marcação sem sucessores não for de término próprio

    Marcações com fichas apenas nos lugares finais do nível 0 são término próprio.
    """
    if g.truncated:
        return PropertyReport(DEADLOCK, UNKNOWN, statistics=_stats(g))
    for node in range(g.node_count):
        if g.graph.out_degree(node) == 0 and not is_final(net, g.marking(node)):
            debug(f"Deadlock na marcação {node}")
            return PropertyReport(DEADLOCK, FAILS, _witness(g, node),
                                  (f"marcação sem sucessores: {g.marking(node)}",), _stats(g))
    return PropertyReport(DEADLOCK, HOLDS, statistics=_stats(g))


def check_resettable(g: ReachabilityGraph) -> PropertyReport:
    """Verifica se a marcação inicial é home marking (alcançável de toda marcação alcançável)"""
    if g.truncated:
        return PropertyReport(RESETTABLE, UNKNOWN, statistics=_stats(g))
    back_to_root = nx.ancestors(g.graph, g.root) | {g.root}
    for node in range(g.node_count):
        if node not in back_to_root:
            return PropertyReport(RESETTABLE, FAILS, _witness(g, node),
                                  (f"marcação inicial inalcançável a partir de {g.marking(node)}",), _stats(g))
    return PropertyReport(RESETTABLE, HOLDS, statistics=_stats(g))


def describe_element(element_id: str, trace: Optional[RuleTrace]) -> str:
    """Descreve a entidade do diagrama que originou um elemento da rede"""
    entry = trace.entry_of(element_id) if trace else None
    if entry is None:
        return f"transição {element_id} nunca dispara"
    return f"{entry.source} ({entry.rule}) é inalcançável: transição {element_id} nunca dispara"


def dead_transitions(g: ReachabilityGraph, net: FlatNet, trace: Optional[RuleTrace] = None) -> PropertyReport:
    """Lista as transições que não aparecem em nenhuma aresta do grafo"""
    if g.truncated:
        return PropertyReport(DEAD_TRANSITIONS, UNKNOWN, statistics=_stats(g))
    fired = g.fired_transitions()
    dead = [t.id for t in net.transitions if t.id not in fired]
    details = tuple(describe_element(t, trace) for t in dead)
    return PropertyReport(DEAD_TRANSITIONS, FAILS if dead else HOLDS, details=details, statistics=_stats(g))


def check_bounded(g: ReachabilityGraph, k: int = 1) -> PropertyReport:
    """
    Verifica se nenhum lugar excede k fichas

    Em grafos truncados uma violação é definitiva; a ausência dela não.
    """
    for node in range(g.node_count):
        marking = g.marking(node)
        over = [p for p, bag in marking.tokens if len(bag) > k]
        if over:
            return PropertyReport(BOUNDED, FAILS, _witness(g, node),
                                  tuple(f"{p} com {marking.count(p)} fichas (k={k})" for p in over), _stats(g))
    return PropertyReport(BOUNDED, UNKNOWN if g.truncated else HOLDS, details=(f"k={k}",), statistics=_stats(g))


def analyze(net: FlatNet, g: ReachabilityGraph, trace: Optional[RuleTrace] = None, k: int = 1) -> AnalysisReport:
    """
    Executa as quatro verificações na ordem: deadlock, resettable, dead-transitions, bounded

    Returns:
        AnalysisReport com os vereditos e as estatísticas da exploração
    """
    reports = (
        check_deadlock(g, net),
        check_resettable(g),
        dead_transitions(g, net, trace),
        check_bounded(g, k),
    )
    return AnalysisReport(reports, dict(g.stats) or _stats(g))
