"""
Representação em memória do modelo de interação hierárquico (IOD + SD + TD)

Todos os tipos são imutáveis. Os spans de origem não participam da igualdade
estrutural, de modo que dois modelos com o mesmo conteúdo são iguais mesmo
vindo de arquivos diferentes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union


class DiagramKind(str, Enum):
    IOD = "iod"
    SD = "sd"
    TD = "td"


class NodeKind(str, Enum):
    INITIAL = "initial"
    FINAL = "final"
    INTERACTION = "interaction"
    FORK = "fork"
    JOIN = "join"
    DECISION = "decision"
    MERGE = "merge"

    @property
    def is_bar(self) -> bool:
        return self in (NodeKind.FORK, NodeKind.JOIN)

    @property
    def is_diamond(self) -> bool:
        return self in (NodeKind.DECISION, NodeKind.MERGE)


class MessageKind(str, Enum):
    ASYNC = "async"
    SYNC = "sync"
    REPLY = "reply"


class FragmentKind(str, Enum):
    ALT = "alt"
    OPT = "opt"
    PAR = "par"
    LOOP = "loop"


class DiagramModelError(Exception):
    """Erro base do modelo de diagramas"""
    code = "diagram-model"

    def __init__(self, message: str, entity: Optional[str] = None):
        super().__init__(message)
        self.entity = entity


class UnknownDiagramError(DiagramModelError):
    code = "unknown-diagram"


class UnknownNodeError(DiagramModelError):
    code = "unknown-node"


class MissingRefError(DiagramModelError):
    code = "missing-ref"


@dataclass(frozen=True)
class TimeBounds:
    """Intervalo [lo, hi] em unidades abstratas de tempo"""
    lo: int
    hi: int

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


# --------------------------------------------------------------------------
# IOD
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramRef:
    kind: DiagramKind
    target: str


@dataclass(frozen=True)
class IodNode:
    id: str
    kind: NodeKind
    ref: Optional[DiagramRef] = None
    span: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IodEdge:
    source: str
    target: str
    guard: Optional[str] = None
    span: Any = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> str:
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class IodGraph:
    id: str
    nodes: Tuple[IodNode, ...] = ()
    edges: Tuple[IodEdge, ...] = ()
    span: Any = field(default=None, compare=False, repr=False)

    kind = DiagramKind.IOD

    def _ids(self, *kinds: NodeKind) -> Tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.kind in kinds)

    @property
    def initial_nodes(self) -> Tuple[str, ...]:
        return self._ids(NodeKind.INITIAL)

    @property
    def final_nodes(self) -> Tuple[str, ...]:
        return self._ids(NodeKind.FINAL)

    @property
    def interaction_nodes(self) -> Tuple[str, ...]:
        return self._ids(NodeKind.INTERACTION)

    @property
    def bar_nodes(self) -> Dict[str, NodeKind]:
        return {n.id: n.kind for n in self.nodes if n.kind.is_bar}

    @property
    def diamond_nodes(self) -> Dict[str, NodeKind]:
        return {n.id: n.kind for n in self.nodes if n.kind.is_diamond}

    def node(self, node_id: str) -> Optional[IodNode]:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def outgoing(self, node_id: str) -> List[IodEdge]:
        return [e for e in self.edges if e.source == node_id]

    def incoming(self, node_id: str) -> List[IodEdge]:
        return [e for e in self.edges if e.target == node_id]


# --------------------------------------------------------------------------
# SD
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SdMessage:
    """Mensagem de SD; sender None = mensagem found, receiver None = lost"""
    name: str
    kind: MessageKind
    sender: Optional[str]
    receiver: Optional[str]
    send_point: Optional[int] = None
    recv_point: Optional[int] = None
    span: Any = field(default=None, compare=False, repr=False)

    @property
    def is_found(self) -> bool:
        return self.sender is None

    @property
    def is_lost(self) -> bool:
        return self.receiver is None

    @property
    def flag(self) -> str:
        if self.is_found:
            return "found"
        if self.is_lost:
            return "lost"
        return "none"


@dataclass(frozen=True)
class SdOperand:
    guard: Optional[str]
    items: Tuple["SdItem", ...] = ()


@dataclass(frozen=True)
class SdFragment:
    kind: FragmentKind
    operands: Tuple[SdOperand, ...]
    span: Any = field(default=None, compare=False, repr=False)

    @property
    def guards(self) -> Tuple[Optional[str], ...]:
        return tuple(op.guard for op in self.operands)


SdItem = Union[SdMessage, SdFragment]


@dataclass(frozen=True)
class FragmentRange:
    """Fragmento com o intervalo [first, last] de índices de mensagens cobertas"""
    kind: FragmentKind
    guards: Tuple[Optional[str], ...]
    first: int
    last: int
    depth: int


def iter_messages(items: Tuple[SdItem, ...]) -> Iterator[SdMessage]:
    for item in items:
        if isinstance(item, SdMessage):
            yield item
        else:
            for operand in item.operands:
                yield from iter_messages(operand.items)


def fragment_lifelines(fragment: SdFragment) -> Tuple[str, ...]:
    """Lifelines cobertas por um fragmento (as que aparecem em alguma mensagem dele)"""
    seen: List[str] = []
    for operand in fragment.operands:
        for msg in iter_messages(operand.items):
            for lf in (msg.sender, msg.receiver):
                if lf is not None and lf not in seen:
                    seen.append(lf)
    return tuple(seen)


def assign_points(items: Tuple[SdItem, ...], counters: Optional[Dict[str, int]] = None) -> Tuple[SdItem, ...]:
    """
    Numera os pontos de interação de cada lifeline na ordem de escrita

    Args:
        items: Itens do SD (mensagens e fragmentos)
        counters: Contadores por lifeline (uso interno na recursão)

    Returns:
        Itens com send_point/recv_point preenchidos
    """
    if counters is None:
        counters = {}
    result: List[SdItem] = []
    for item in items:
        if isinstance(item, SdMessage):
            send_point = recv_point = None
            if item.sender is not None:
                counters[item.sender] = counters.get(item.sender, 0) + 1
                send_point = counters[item.sender]
            if item.receiver is not None:
                counters[item.receiver] = counters.get(item.receiver, 0) + 1
                recv_point = counters[item.receiver]
            result.append(SdMessage(item.name, item.kind, item.sender, item.receiver,
                                    send_point, recv_point, item.span))
        else:
            operands = tuple(SdOperand(op.guard, assign_points(op.items, counters))
                             for op in item.operands)
            result.append(SdFragment(item.kind, operands, item.span))
    return tuple(result)


@dataclass(frozen=True)
class SdGraph:
    id: str
    lifelines: Tuple[str, ...] = ()
    items: Tuple[SdItem, ...] = ()
    span: Any = field(default=None, compare=False, repr=False)

    kind = DiagramKind.SD

    @property
    def messages(self) -> Tuple[SdMessage, ...]:
        return tuple(iter_messages(self.items))

    @property
    def fragments(self) -> Tuple[FragmentRange, ...]:
        ranges: List[FragmentRange] = []
        counter = [0]

        def walk(items: Tuple[SdItem, ...], depth: int):
            for item in items:
                if isinstance(item, SdMessage):
                    counter[0] += 1
                    continue
                first = counter[0]
                for operand in item.operands:
                    walk(operand.items, depth + 1)
                ranges.append(FragmentRange(item.kind, item.guards, first, counter[0] - 1, depth))

        walk(self.items, 0)
        return tuple(sorted(ranges, key=lambda r: (r.first, -r.last, r.depth)))


# --------------------------------------------------------------------------
# TD
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TdLifeline:
    name: str
    states: Tuple[str, ...]
    span: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TdSegment:
    lifeline: str
    state: str
    duration: Optional[TimeBounds] = None
    span: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TdTransition:
    lifeline: str
    from_state: str
    to_state: str
    time_constraint: Optional[TimeBounds] = None
    event: Optional[str] = None
    point: int = 0
    span: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TdMessage:
    name: str
    sender: str
    send_point: int
    receiver: str
    recv_point: int
    span: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TdGraph:
    id: str
    lifelines: Tuple[TdLifeline, ...] = ()
    segments: Tuple[TdSegment, ...] = ()
    transitions_at: Tuple[TdTransition, ...] = ()
    messages: Tuple[TdMessage, ...] = ()
    span: Any = field(default=None, compare=False, repr=False)

    kind = DiagramKind.TD

    @property
    def states(self) -> Dict[str, Tuple[str, ...]]:
        return {lf.name: lf.states for lf in self.lifelines}

    def timeline(self, lifeline: str) -> Tuple[TdSegment, ...]:
        return tuple(s for s in self.segments if s.lifeline == lifeline)

    def transitions_of(self, lifeline: str) -> Tuple[TdTransition, ...]:
        return tuple(t for t in self.transitions_at if t.lifeline == lifeline)

    def transition_at(self, lifeline: str, point: int) -> Optional[TdTransition]:
        for t in self.transitions_at:
            if t.lifeline == lifeline and t.point == point:
                return t
        return None

    def lifeline(self, name: str) -> Optional[TdLifeline]:
        for lf in self.lifelines:
            if lf.name == name:
                return lf
        return None


def number_td_points(transitions: Tuple[TdTransition, ...]) -> Tuple[TdTransition, ...]:
    """Atribui ao k-ésimo `at` de cada lifeline o ponto k (base 1)"""
    counters: Dict[str, int] = {}
    numbered = []
    for t in transitions:
        counters[t.lifeline] = counters.get(t.lifeline, 0) + 1
        numbered.append(TdTransition(t.lifeline, t.from_state, t.to_state, t.time_constraint,
                                     t.event, counters[t.lifeline], t.span))
    return tuple(numbered)


# --------------------------------------------------------------------------
# Modelo completo
# --------------------------------------------------------------------------

Diagram = Union[IodGraph, SdGraph, TdGraph]


@dataclass(frozen=True)
class InteractionModel:
    """Modelo M = M_IOD ∪ M_SD ∪ M_TD com a função Ref"""
    name: str = ""
    iods: Tuple[IodGraph, ...] = ()
    sds: Tuple[SdGraph, ...] = ()
    tds: Tuple[TdGraph, ...] = ()
    span: Any = field(default=None, compare=False, repr=False)

    @property
    def diagrams(self) -> Tuple[Diagram, ...]:
        return self.iods + self.sds + self.tds

    @property
    def ref_map(self) -> Dict[str, str]:
        """Função Ref: nó de interação -> identidade do diagrama referenciado"""
        refs: Dict[str, str] = {}
        for iod in self.iods:
            for node in iod.nodes:
                if node.kind is NodeKind.INTERACTION and node.ref is not None:
                    refs.setdefault(node.id, node.ref.target)
        return refs

    def diagram(self, diagram_id: str) -> Optional[Diagram]:
        for d in self.diagrams:
            if d.id == diagram_id:
                return d
        return None

    def require_diagram(self, diagram_id: str) -> Diagram:
        d = self.diagram(diagram_id)
        if d is None:
            raise UnknownDiagramError(f"diagrama desconhecido: {diagram_id}", diagram_id)
        return d

    def owner_of(self, node_id: str) -> Optional[IodGraph]:
        """IOD dono de um nó de interação (IODcomp⁻¹)"""
        for iod in self.iods:
            node = iod.node(node_id)
            if node is not None and node.kind is NodeKind.INTERACTION:
                return iod
        return None

    def interaction_nodes(self) -> List[Tuple[IodGraph, IodNode]]:
        return [(iod, n) for iod in self.iods for n in iod.nodes if n.kind is NodeKind.INTERACTION]
