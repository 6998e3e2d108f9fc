"""
IOD -> página HCPN (regras de nós T1.1-T1.9 e de arestas T2.10.1-T2.10.4)
"""
from typing import TYPE_CHECKING, Dict, Optional

from src.diagram_model.model import IodGraph, NodeKind
from src.hcpn_core.net import CTRL, UNIT, Guard, TransitionKind, TransitionRole
from src.logger import debug
from src.transformer.builder import TransformError

if TYPE_CHECKING:
    from src.transformer.transformer import TransformContext

PLACE_LIKE_SOURCES = {NodeKind.INITIAL, NodeKind.DECISION, NodeKind.MERGE}
TRANSITION_LIKE_SOURCES = {NodeKind.INTERACTION, NodeKind.FORK, NodeKind.JOIN}
PLACE_LIKE_TARGETS = {NodeKind.FINAL, NodeKind.DECISION, NodeKind.MERGE}
TRANSITION_LIKE_TARGETS = {NodeKind.INTERACTION, NodeKind.FORK, NodeKind.JOIN}


def edge_rule(source: NodeKind, target: NodeKind) -> Optional[str]:
    """Classifica uma aresta pela natureza (lugar/transição) das suas extremidades"""
    if source in PLACE_LIKE_SOURCES:
        if target in TRANSITION_LIKE_TARGETS:
            return "T2.10.1"
        if target in PLACE_LIKE_TARGETS:
            return "T2.10.2"
    elif source in TRANSITION_LIKE_SOURCES:
        if target in PLACE_LIKE_TARGETS:
            return "T2.10.3"
        if target in TRANSITION_LIKE_TARGETS:
            return "T2.10.4"
    return None


def map_iod(iod: IodGraph, level: int, ctx: "TransformContext",
            page_id: str, parent: Optional[str] = None) -> Dict[str, str]:
    """
    Cria a página de um IOD e, recursivamente, as páginas dos diagramas referenciados

    Args:
        iod: Diagrama de visão geral
        level: Nível hierárquico do IOD
        ctx: Contexto da transformação
        page_id: Caminho da página
        parent: Página mãe (None para a página principal)

    Returns:
        Imagem de cada nó (id do nó -> id do lugar/transição)
    """
    b = ctx.builder
    prime = parent is None
    page_scope = b.scope("T1.1" if prime else "T1.2", iod.id)
    page_scope.page(page_id, parent, iod.id, "iod", level)
    if prime:
        page_scope.produced.append(CTRL)
    entry = None if prime else page_scope.transition(page_id, "in", role=TransitionRole.IN)

    images: Dict[str, str] = {}
    for node in iod.nodes:
        source = f"{iod.id}:{node.id}"
        if node.kind is NodeKind.INITIAL:
            images[node.id] = b.scope("T1.4", source).place(page_id)
            if prime:
                b.initial_marking[images[node.id]] = (UNIT,)
        elif node.kind is NodeKind.FINAL:
            images[node.id] = b.scope("T1.5", source).place(page_id)
            if prime:
                b.final_places.append(images[node.id])
        elif node.kind is NodeKind.INTERACTION:
            images[node.id] = b.scope("T1.3", source).transition(
                page_id, kind=TransitionKind.SUBSTITUTION, label=node.id)
        elif node.kind.is_bar:
            images[node.id] = b.scope("T1.6", source).transition(page_id, label=node.kind.value)
        else:
            images[node.id] = b.scope("T1.7", source).place(page_id, label=node.kind.value)

    if not prime:
        for node_id in iod.initial_nodes:
            b.scope("T1.8", f"{iod.id}:{node_id}").arc(entry, images[node_id])
        for node_id in iod.final_nodes:
            exit_scope = b.scope("T1.9", f"{iod.id}:{node_id}")
            out = exit_scope.transition(page_id, f"{node_id}.out", role=TransitionRole.OUT)
            exit_scope.arc(images[node_id], out)

    map_edges(iod, page_id, images, ctx)

    for node in iod.nodes:
        if node.kind is NodeKind.INTERACTION:
            child = ctx.map_child(node, page_id)
            b.page_assignment[images[node.id]] = child
    debug(f"Página {page_id} gerada a partir do IOD {iod.id}")
    return images


def map_edges(iod: IodGraph, page_id: str, images: Dict[str, str], ctx: "TransformContext") -> None:
    """
    Aplica uma das regras 10.1-10.4 a cada aresta

    Raises:
        TransformError: aresta que não se encaixa em nenhuma regra
    """
    b = ctx.builder
    for edge in iod.edges:
        source_kind = iod.node(edge.source).kind
        target_kind = iod.node(edge.target).kind
        rule = edge_rule(source_kind, target_kind)
        if rule is None:
            raise TransformError(f"aresta não classificável: {iod.id}:{edge.label}", f"{iod.id}:{edge.label}")
        scope = b.scope(rule, f"{iod.id}:{edge.label}", edge.label)
        src, dst = images[edge.source], images[edge.target]
        guard = Guard(edge.guard) if edge.guard is not None else None

        if rule == "T2.10.1":
            scope.arc(src, dst)
            if guard is not None:
                b.set_guard(dst, guard)
        elif rule == "T2.10.2":
            t = scope.transition(page_id, guard=guard, label=edge.guard or "")
            scope.arc(src, t)
            scope.arc(t, dst)
        elif rule == "T2.10.3":
            scope.arc(src, dst)
        else:
            p = scope.place(page_id)
            scope.arc(src, p)
            scope.arc(p, dst)
