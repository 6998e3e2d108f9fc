"""
Níveis hierárquicos de diagramas e nós de interação
"""
from typing import Dict, List, Optional

from src.diagram_model.model import (
    InteractionModel, IodGraph, UnknownDiagramError, UnknownNodeError, MissingRefError,
)


def referenced_by(model: InteractionModel) -> Dict[str, str]:
    """
    Inverso de Ref restrito ao dono: diagrama -> IOD que o referencia

    Args:
        model: Modelo de interação

    Returns:
        Dicionário diagrama filho -> diagrama pai
    """
    parents: Dict[str, str] = {}
    for iod, node in model.interaction_nodes():
        if node.ref is not None:
            parents.setdefault(node.ref.target, iod.id)
    return parents


def root_iods(model: InteractionModel) -> List[IodGraph]:
    """IODs não referenciados por nenhum nó de interação"""
    referenced = set(model.ref_map.values())
    return [iod for iod in model.iods if iod.id not in referenced]


def root_iod(model: InteractionModel) -> Optional[IodGraph]:
    roots = root_iods(model)
    return roots[0] if len(roots) == 1 else None


def children(model: InteractionModel, diagram_id: str) -> List[str]:
    """Diagramas referenciados pelos nós de interação de um IOD, na ordem de escrita"""
    diagram = model.diagram(diagram_id)
    if not isinstance(diagram, IodGraph):
        return []
    return [n.ref.target for n in diagram.nodes if n.ref is not None]


def hierarchy_level(model: InteractionModel, diagram_id: str) -> int:
    """
    Nível hierárquico de um diagrama: raiz = 0, filho = pai + 1

    Args:
        model: Modelo válido
        diagram_id: Identidade do diagrama

    Returns:
        Nível do diagrama na árvore de Ref
    """
    model.require_diagram(diagram_id)
    parents = referenced_by(model)
    level = 0
    current = diagram_id
    visited = {current}
    while current in parents:
        current = parents[current]
        if current in visited:
            raise UnknownDiagramError(f"ciclo de referências a partir de {diagram_id}", diagram_id)
        visited.add(current)
        level += 1
    return level


def node_level(model: InteractionModel, node_id: str) -> int:
    """Nível de um nó de interação = nível do IOD que o contém"""
    owner = model.owner_of(node_id)
    if owner is None:
        raise UnknownNodeError(f"nó de interação desconhecido: {node_id}", node_id)
    return hierarchy_level(model, owner.id)


def referenced_diagram(model: InteractionModel, node_id: str) -> str:
    """Aplica Ref a um nó de interação"""
    owner = model.owner_of(node_id)
    if owner is None:
        raise UnknownNodeError(f"nó de interação desconhecido: {node_id}", node_id)
    node = owner.node(node_id)
    if node.ref is None:
        raise MissingRefError(f"nó {node_id} sem referência", node_id)
    return node.ref.target


def levels(model: InteractionModel) -> Dict[str, int]:
    """Nível de todos os diagramas do modelo"""
    return {d.id: hierarchy_level(model, d.id) for d in model.diagrams}
