"""
Gerador semeado de modelos de interação válidos para os testes de propriedade
"""
import random
from typing import Dict, List, Optional, Tuple

from src.diagram_model.model import (
    DiagramKind, DiagramRef, FragmentKind, InteractionModel, IodEdge, IodGraph, IodNode,
    MessageKind, NodeKind, SdFragment, SdGraph, SdItem, SdMessage, SdOperand, TdGraph,
    TdLifeline, TdMessage, TdSegment, TdTransition, TimeBounds, assign_points, number_td_points,
)


class ModelGenerator:
    """
    Gera modelos válidos e pequenos (espaço de estados modesto) a partir de uma semente

    Args:
        seed: Semente do gerador
        max_depth: Profundidade máxima da árvore de Ref
        with_td: Permite diagramas de tempo como folhas
        fragments: Permite fragmentos combinados nos SDs
    """

    def __init__(self, seed: int, max_depth: int = 2, with_td: bool = False, fragments: bool = True):
        self.seed = seed
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.with_td = with_td
        self.fragments = fragments
        self.iods: List[IodGraph] = []
        self.sds: List[SdGraph] = []
        self.tds: List[TdGraph] = []
        self.levels: Dict[str, int] = {}
        self._count = 0

    def _next(self, prefix: str) -> str:
        self._count += 1
        return f"{prefix}{self._count}"

    def generate(self) -> InteractionModel:
        self._iod("Main", 0)
        return InteractionModel(f"gen{self.seed}", tuple(self.iods), tuple(self.sds), tuple(self.tds))

    # ------------------------------------------------------------------
    # IOD
    # ------------------------------------------------------------------

    def _iod(self, iod_id: str, depth: int) -> None:
        self.levels[iod_id] = depth
        position = len(self.iods)
        self.iods.append(IodGraph(iod_id))
        nodes = [IodNode("start", NodeKind.INITIAL), IodNode("done", NodeKind.FINAL)]
        edges: List[IodEdge] = []
        prev = "start"
        for _ in range(self.rng.randint(1, 3)):
            block = self.rng.choice(("interaction", "interaction", "choice", "parallel"))
            if block == "interaction":
                node = self._interaction(depth, nodes)
                edges.append(IodEdge(prev, node))
                prev = node
            elif block == "choice":
                decision, merge = self._next("d"), self._next("m")
                nodes += [IodNode(decision, NodeKind.DECISION), IodNode(merge, NodeKind.MERGE)]
                edges.append(IodEdge(prev, decision))
                first = self._interaction(depth, nodes)
                edges += [IodEdge(decision, first, f"{decision}_a"), IodEdge(first, merge)]
                if self.rng.random() < 0.5:
                    second = self._interaction(depth, nodes)
                    edges += [IodEdge(decision, second, f"{decision}_b"), IodEdge(second, merge)]
                else:
                    edges.append(IodEdge(decision, merge, f"{decision}_b"))
                prev = merge
            else:
                fork, join = self._next("f"), self._next("j")
                nodes += [IodNode(fork, NodeKind.FORK), IodNode(join, NodeKind.JOIN)]
                edges.append(IodEdge(prev, fork))
                for _ in range(2):
                    node = self._interaction(depth, nodes)
                    edges += [IodEdge(fork, node), IodEdge(node, join)]
                prev = join
        edges.append(IodEdge(prev, "done"))
        self.iods[position] = IodGraph(iod_id, tuple(nodes), tuple(edges))

    def _interaction(self, depth: int, nodes: List[IodNode]) -> str:
        node_id = self._next("N")
        roll = self.rng.random()
        if depth < self.max_depth and roll < 0.25:
            target = f"Iod{node_id}"
            ref = DiagramRef(DiagramKind.IOD, target)
            nodes.append(IodNode(node_id, NodeKind.INTERACTION, ref))
            self._iod(target, depth + 1)
        elif self.with_td and roll < 0.5:
            target = f"Td{node_id}"
            nodes.append(IodNode(node_id, NodeKind.INTERACTION, DiagramRef(DiagramKind.TD, target)))
            self.tds.append(self._td(target))
            self.levels[target] = depth + 1
        else:
            target = f"Sd{node_id}"
            nodes.append(IodNode(node_id, NodeKind.INTERACTION, DiagramRef(DiagramKind.SD, target)))
            self.sds.append(self._sd(target))
            self.levels[target] = depth + 1
        return node_id

    # ------------------------------------------------------------------
    # SD
    # ------------------------------------------------------------------

    def _message(self, lifelines: Tuple[str, ...], kind: MessageKind = MessageKind.ASYNC) -> SdMessage:
        sender, receiver = self.rng.sample(lifelines, 2)
        return SdMessage(self._next("msg"), kind, sender, receiver)

    def _sd(self, sd_id: str) -> SdGraph:
        lifelines = tuple(f"L{i}" for i in range(1, self.rng.randint(2, 3) + 1))
        items: List[SdItem] = []
        for _ in range(self.rng.randint(1, 3)):
            roll = self.rng.random()
            if self.fragments and roll < 0.3:
                items.append(self._fragment(lifelines))
            elif roll < 0.45:
                call = self._message(lifelines, MessageKind.SYNC)
                items.append(call)
                if self.rng.random() < 0.5:
                    items.append(SdMessage(self._next("msg"), MessageKind.REPLY, call.receiver, call.sender))
            else:
                items.append(self._message(lifelines))
        return SdGraph(sd_id, lifelines, assign_points(tuple(items)))

    def _fragment(self, lifelines: Tuple[str, ...]) -> SdFragment:
        kind = self.rng.choice(tuple(FragmentKind))
        count = 2 if kind in (FragmentKind.ALT, FragmentKind.PAR) else 1
        operands = []
        for i in range(count):
            guard = None if kind is FragmentKind.PAR else self._next("c")
            operands.append(SdOperand(guard, (self._message(lifelines),)))
        return SdFragment(kind, tuple(operands))

    # ------------------------------------------------------------------
    # TD
    # ------------------------------------------------------------------

    def _td(self, td_id: str) -> TdGraph:
        lifelines, segments, transitions = [], [], []
        for i in range(1, self.rng.randint(1, 2) + 1):
            name = f"T{i}"
            states = tuple(f"s{k}" for k in range(self.rng.randint(2, 3)))
            lifelines.append(TdLifeline(name, states))
            path = states[:self.rng.randint(2, len(states))]
            for state in path:
                duration = None
                if self.rng.random() < 0.5:
                    lo = self.rng.randint(0, 2)
                    duration = TimeBounds(lo, lo + self.rng.randint(0, 2))
                segments.append(TdSegment(name, state, duration))
            for a, b in zip(path, path[1:]):
                event = "go" if self.rng.random() < 0.3 else None
                transitions.append(TdTransition(name, a, b, None, event))
        numbered = number_td_points(tuple(transitions))
        messages = []
        if len(lifelines) == 2 and self.rng.random() < 0.5:
            messages.append(TdMessage(self._next("sig"), "T1", 1, "T2", 1))
        return TdGraph(td_id, tuple(lifelines), tuple(segments), numbered, tuple(messages))


def generate_model(seed: int, **options) -> InteractionModel:
    return ModelGenerator(seed, **options).generate()


def generate_ref_tree(seed: int, max_depth: int = 5) -> Tuple[InteractionModel, Dict[str, int]]:
    """
    Árvore de IODs (mais SDs como folhas) com profundidade até `max_depth`

    Returns:
        Modelo e o nível esperado de cada diagrama
    """
    rng = random.Random(seed)
    iods: List[IodGraph] = []
    sds: List[SdGraph] = []
    expected: Dict[str, int] = {}
    counter = [0]

    def build(iod_id: str, depth: int) -> None:
        expected[iod_id] = depth
        nodes = [IodNode("start", NodeKind.INITIAL), IodNode("done", NodeKind.FINAL)]
        edges: List[IodEdge] = []
        prev = "start"
        children: List[Tuple[str, Optional[str]]] = []
        for _ in range(rng.randint(1, 3)):
            counter[0] += 1
            node_id = f"N{counter[0]}"
            if depth < max_depth and rng.random() < 0.6:
                target = f"Iod{counter[0]}"
                nodes.append(IodNode(node_id, NodeKind.INTERACTION, DiagramRef(DiagramKind.IOD, target)))
                children.append((target, None))
            else:
                target = f"Sd{counter[0]}"
                nodes.append(IodNode(node_id, NodeKind.INTERACTION, DiagramRef(DiagramKind.SD, target)))
                children.append((target, "sd"))
            edges.append(IodEdge(prev, node_id))
            prev = node_id
        edges.append(IodEdge(prev, "done"))
        iods.append(IodGraph(iod_id, tuple(nodes), tuple(edges)))
        for target, kind in children:
            if kind == "sd":
                expected[target] = depth + 1
                message = SdMessage("ping", MessageKind.ASYNC, "A", "B")
                sds.append(SdGraph(target, ("A", "B"), assign_points((message,))))
            else:
                build(target, depth + 1)

    build("Root", 0)
    return InteractionModel(f"tree{seed}", tuple(iods), tuple(sds)), expected
