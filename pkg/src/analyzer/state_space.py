"""
Geração do espaço de estados (grafo de alcançabilidade) sobre a rede achatada
"""
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from config.settings import ANALYSIS_CONFIG, SCHEMA_VERSIONS
from src.hcpn_core.flattener import initial_marking
from src.hcpn_core.marking import Marking
from src.hcpn_core.net import FlatNet, TimeDeadlockError
from src.hcpn_core.simulator import is_final
from src.hcpn_core.token_game import Binding, UNIT_BINDING, advance_time, enabled, fire, format_binding
from src.logger import debug, info, warning

RESET = "@reset"
TICK = "@tick"
UNTIMED = "untimed"
DISCRETE = "discrete"

Successor = Tuple[str, Binding, Marking]


class AnalyzerError(Exception):
    """Erro base do analisador"""
    code = "analyzer"


class InvalidBoundError(AnalyzerError):
    code = "invalid-bound"


class ReachabilityGraph:
    """
    Marcações canônicas exploradas e arestas de disparo

    Os nós do grafo networkx são inteiros na ordem de descoberta (BFS); o
    atributo `marking` guarda a marcação e cada aresta guarda transição e ligação.
    """

    def __init__(self, net: FlatNet, root: Marking, bound: int, time_mode: str = UNTIMED):
        self.net = net
        self.bound = bound
        self.time_mode = time_mode
        self.graph = nx.MultiDiGraph()
        self.markings: List[Marking] = []
        self.index: Dict[Marking, int] = {}
        self.truncated = False
        self.truncation_reason: Optional[str] = None
        self.stats: Dict[str, Any] = {}
        self.root = self.add_marking(root)[0]

    def add_marking(self, m: Marking) -> Tuple[int, bool]:
        if m in self.index:
            return self.index[m], False
        node = len(self.markings)
        self.markings.append(m)
        self.index[m] = node
        self.graph.add_node(node, marking=m)
        return node, True

    def add_edge(self, source: int, transition: str, binding: Binding, target: int) -> None:
        self.graph.add_edge(source, target, key=(transition, binding), transition=transition, binding=binding)

    def mark_truncated(self, reason: str) -> None:
        if not self.truncated:
            self.truncated = True
            self.truncation_reason = reason

    @property
    def node_count(self) -> int:
        return len(self.markings)

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def marking(self, node: int) -> Marking:
        return self.markings[node]

    def edges(self) -> List[Tuple[int, str, Binding, int]]:
        return sorted((u, d["transition"], d["binding"], v) for u, v, d in self.graph.edges(data=True))

    def node_set(self) -> set:
        return set(self.markings)

    def edge_set(self) -> set:
        return {(self.markings[u], t, b, self.markings[v]) for u, t, b, v in self.edges()}

    def fired_transitions(self) -> set:
        return {t for _, t, _, _ in self.edges() if t not in (RESET, TICK)}

    def path_to(self, target: int, source: Optional[int] = None) -> List[Tuple[str, Binding]]:
        """Caminho mais curto (em disparos) entre dois nós"""
        source = self.root if source is None else source
        nodes = nx.shortest_path(self.graph, source, target)
        steps = []
        for u, v in zip(nodes, nodes[1:]):
            transition, binding = min(self.graph[u][v])
            steps.append((transition, binding))
        return steps

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSIONS["graph"],
            "kind": "reachability-graph",
            "time_mode": self.time_mode,
            "root": self.root,
            "truncated": self.truncated,
            "truncation_reason": self.truncation_reason,
            "nodes": [{"id": i, "marking": m.to_dict()} for i, m in enumerate(self.markings)],
            "edges": [{"source": u, "transition": t, "binding": format_binding(b), "target": v}
                      for u, t, b, v in self.edges()],
        }


def clock_horizon(net: FlatNet) -> int:
    """Soma dos limites superiores de atrasos e janelas de tempo"""
    total = sum(hi for _, hi in net.delays.values())
    total += sum(g.window[1] for g in net.guards.values() if g.window is not None)
    return total


class _Explorer:
    def __init__(self, net: FlatNet, time_mode: str, reset_on_final: bool, root: Marking):
        self.net = net
        self.timed = time_mode == DISCRETE
        self.reset_on_final = reset_on_final
        self.root = root
        self.horizon = clock_horizon(net) if self.timed else None

    def expand(self, m: Marking) -> List[Successor]:
        if self.horizon is not None and m.clock > self.horizon:
            return []
        successors = [(t, b, fire(self.net, m, t, b, timed=self.timed))
                      for t, b in sorted(enabled(self.net, m, timed=self.timed, expand_delays=self.timed))]
        if not successors and self.timed and self.net.is_timed:
            try:
                successors.append((TICK, UNIT_BINDING, advance_time(self.net, m)))
            except TimeDeadlockError:
                pass
        if self.reset_on_final and is_final(self.net, m):
            successors.append((RESET, UNIT_BINDING, self.root))
        return successors


def build_state_space(net: FlatNet, bound: int = ANALYSIS_CONFIG["default_bound"], time_mode: str = UNTIMED,
                      workers: int = 1, reset_on_final: bool = False) -> ReachabilityGraph:
    """
    Explora em largura as marcações alcançáveis

    Args:
        net: Rede achatada
        bound: Número máximo de marcações
        time_mode: `untimed` (carimbos apagados) ou `discrete` (pares marcação/relógio)
        workers: Threads que expandem cada camada da busca
        reset_on_final: Acrescenta arestas @reset das marcações finais para a raiz

    Returns:
        ReachabilityGraph, com `truncated` marcado quando alguma marcação ficou de fora

    Raises:
        InvalidBoundError: bound < 1
        AnalyzerError: modo de tempo desconhecido
    """
    if bound < 1:
        raise InvalidBoundError(f"o limite de marcações deve ser >= 1 (recebido {bound})")
    if time_mode not in (UNTIMED, DISCRETE):
        raise AnalyzerError(f"modo de tempo desconhecido: {time_mode}")
    if workers < 1:
        raise AnalyzerError(f"número de workers inválido: {workers}")

    started = time.perf_counter()
    root = initial_marking(net)
    graph = ReachabilityGraph(net, root, bound, time_mode)
    explorer = _Explorer(net, time_mode, reset_on_final, root)
    info(f"Gerando espaço de estados (modo {time_mode}, limite {bound}, {workers} worker(s))")

    frontier: Sequence[int] = [graph.root]
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            markings = [graph.marking(n) for n in frontier]
            if executor is not None:
                expansions = list(executor.map(explorer.expand, markings))
            else:
                expansions = [explorer.expand(m) for m in markings]
            next_frontier: List[int] = []
            for source, successors in zip(frontier, expansions):
                if explorer.horizon is not None and graph.marking(source).clock > explorer.horizon:
                    graph.mark_truncated("horizon")
                for transition, binding, target in successors:
                    if target not in graph.index and graph.node_count >= bound:
                        graph.mark_truncated("bound")
                        continue
                    node, new = graph.add_marking(target)
                    graph.add_edge(source, transition, binding, node)
                    if new:
                        next_frontier.append(node)
            frontier = next_frontier
            debug(f"Camada explorada: {graph.node_count} marcações")
    finally:
        if executor is not None:
            executor.shutdown()

    graph.stats = {
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "seconds": round(time.perf_counter() - started, 4),
        "workers": workers,
        "truncated": graph.truncated,
        "truncation_reason": graph.truncation_reason,
    }
    if graph.truncated:
        warning(f"Exploração truncada ({graph.truncation_reason}) com {graph.node_count} marcações")
    return graph


def replay(net: FlatNet, path: Sequence[Tuple[str, Binding]], time_mode: str = UNTIMED) -> Marking:
    """
    Reexecuta um caminho de testemunha a partir da marcação inicial

    Returns:
        Marcação final do caminho

    Raises:
        NotEnabledError: algum passo do caminho não está habilitado
    """
    timed = time_mode == DISCRETE
    root = initial_marking(net)
    m = root
    for transition, binding in path:
        if transition == RESET:
            m = root
        elif transition == TICK:
            m = advance_time(net, m)
        else:
            m = fire(net, m, transition, binding, timed=timed)
    return m
