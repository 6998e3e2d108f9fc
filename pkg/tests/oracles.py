"""
Oráculos independentes do analisador e do achatador

- `naive_reachability`: enumeração recursiva ingênua sobre os dados da FlatNet
- `hierarchical_reachability`: interpretador que expande as transições de
  substituição sob demanda, direto sobre o HcpnModel

Ambos usam a abstração sem tempo: carimbos são ignorados e guardas só
bloqueiam quando são o literal `false`.
"""
import sys
from collections import Counter
from typing import Dict, FrozenSet, List, Set, Tuple

from src.hcpn_core.net import FlatNet, HcpnModel, TransitionRole

State = FrozenSet[Tuple[Tuple[str, str], int]]
Edge = Tuple[State, str, State]
Flow = Tuple[Tuple[str, str], ...]


def _state(counter: Counter) -> State:
    return frozenset((key, n) for key, n in counter.items() if n > 0)


def marking_state(marking) -> State:
    """Converte uma Marking do núcleo para o formato dos oráculos"""
    counter: Counter = Counter()
    for place, bag in marking.tokens:
        for token in bag:
            counter[(place, token.color)] += 1
    return _state(counter)


def _blocked(guard) -> bool:
    return guard is not None and guard.label == "false"


def _fire_all(flows: Dict[str, Tuple[Flow, Flow]], state: State) -> List[Tuple[str, State]]:
    current = Counter(dict(state))
    result = []
    for transition_id in sorted(flows):
        consume, produce = flows[transition_id]
        need = Counter(consume)
        if any(current[key] < n for key, n in need.items()):
            continue
        after = current.copy()
        after.subtract(need)
        after.update(produce)
        result.append((transition_id, _state(after)))
    return result


def _explore(flows: Dict[str, Tuple[Flow, Flow]], root: State, limit: int) -> Tuple[Set[State], Set[Edge]]:
    seen: Set[State] = set()
    edges: Set[Edge] = set()

    def visit(state: State) -> None:
        if state in seen:
            return
        if len(seen) >= limit:
            raise RuntimeError(f"oráculo excedeu {limit} marcações")
        seen.add(state)
        for transition_id, nxt in _fire_all(flows, state):
            edges.add((state, transition_id, nxt))
            visit(nxt)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), limit + 500))
    visit(root)
    return seen, edges


def _root(initial: Dict[str, Tuple[str, ...]]) -> State:
    counter: Counter = Counter()
    for place, colors in initial.items():
        for color in colors:
            counter[(place, color)] += 1
    return _state(counter)


def naive_reachability(net: FlatNet, limit: int = 10_000) -> Tuple[Set[State], Set[Edge]]:
    """Todas as marcações e arestas alcançáveis da FlatNet, por recursão em profundidade"""
    flows: Dict[str, Tuple[Flow, Flow]] = {}
    for t in net.transitions:
        if _blocked(t.guard):
            continue
        consume = tuple((a.source, c) for a in net.arcs if a.target == t.id for c in a.expression)
        produce = tuple((a.target, c) for a in net.arcs if a.source == t.id for c in a.expression)
        flows[t.id] = (consume, produce)
    return _explore(flows, _root(net.initial_marking), limit)


def hierarchical_reachability(h: HcpnModel, limit: int = 10_000) -> Set[State]:
    """
    Marcações alcançáveis interpretando a hierarquia sem achatá-la

    A In-transition de uma página consome dos soquetes de entrada da transição
    de substituição que a referencia e herda a sua guarda; cada Out-transition
    produz nos soquetes de saída.
    """
    owner = {page: sub for sub, page in h.page_assignment.items()}
    flows: Dict[str, Tuple[Flow, Flow]] = {}
    for t in h.transitions:
        if t.is_substitution:
            continue
        consume = [(a.source, c) for a in h.arcs if a.target == t.id for c in a.expression]
        produce = [(a.target, c) for a in h.arcs if a.source == t.id for c in a.expression]
        blocked = _blocked(t.guard)
        sub = owner.get(t.page)
        if sub is not None and t.role is TransitionRole.IN:
            consume += [(a.source, c) for a in h.arcs if a.target == sub for c in a.expression]
            blocked = blocked or _blocked(h.transition_map[sub].guard)
        if sub is not None and t.role is TransitionRole.OUT:
            produce += [(a.target, c) for a in h.arcs if a.source == sub for c in a.expression]
        if not blocked:
            flows[t.id] = (tuple(consume), tuple(produce))
    seen, _ = _explore(flows, _root(h.initial_marking), limit)
    return seen
