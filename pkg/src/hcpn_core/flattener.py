"""
Expansão de transições de substituição e marcação inicial
"""
from dataclasses import replace
from typing import Dict, List, Set, Union

from src.hcpn_core.marking import Marking, Token
from src.hcpn_core.net import (
    Arc, FlatNet, HcpnModel, PageCycleError, Transition, UnboundSocketError,
)
from src.logger import debug


def _check_page_tree(h: HcpnModel) -> None:
    seen: Set[str] = set()

    def visit(page_id: str, path: List[str]):
        if page_id in path:
            raise PageCycleError(f"ciclo de páginas: {' -> '.join(path + [page_id])}", page_id)
        seen.add(page_id)
        for child in h.child_pages(page_id):
            visit(child, path + [page_id])

    visit(h.prime_page, [])


def flatten(h: HcpnModel) -> FlatNet:
    """
    Substitui cada transição de substituição pelo conteúdo da sua página

    Os soquetes de entrada passam a alimentar a In-transition da página e cada
    Out-transition passa a produzir nos soquetes de saída. A guarda da transição
    de substituição é herdada pela In-transition.

    Args:
        h: Modelo hierárquico bem formado

    Returns:
        FlatNet sem transições de substituição

    Raises:
        UnboundSocketError: transição de substituição sem página ou sem ligação de soquetes
        PageCycleError: referência cíclica entre páginas
    """
    for sub in h.substitution_transitions():
        if sub.id not in h.page_assignment:
            raise UnboundSocketError(f"{sub.id} não está atribuída a nenhuma página", sub.id)
        if sub.id not in h.socket_bindings:
            raise UnboundSocketError(f"{sub.id} sem ligação de soquetes", sub.id)
    _check_page_tree(h)

    substituted = {t.id for t in h.substitution_transitions()}
    arcs: List[Arc] = [a for a in h.arcs if a.source not in substituted and a.target not in substituted]
    inherited_guards: Dict[str, Transition] = {}

    for sub in h.substitution_transitions():
        page = h.page_assignment[sub.id]
        binding = h.socket_bindings[sub.id]
        ins = h.in_transitions(page)
        outs = h.out_transitions(page)
        if len(ins) != 1 or not outs:
            raise UnboundSocketError(f"página {page} sem In/Out-transition para {sub.id}", sub.id)
        entry = ins[0]
        expressions = {(a.source, a.target): a.expression for a in h.pre[sub.id] + h.post[sub.id]}
        for socket in binding.inputs:
            arcs.append(Arc(f"{sub.id}/in:{socket}", socket, entry.id, expressions.get((socket, sub.id), ("unit",))))
        for socket in binding.outputs:
            for out in outs:
                arcs.append(Arc(f"{sub.id}/out:{out.id}:{socket}", out.id, socket,
                                expressions.get((sub.id, socket), ("unit",))))
        if sub.guard is not None:
            inherited_guards[entry.id] = replace(entry, guard=sub.guard.combine(entry.guard))
        debug(f"Página {page} expandida no lugar de {sub.id}")

    transitions = tuple(inherited_guards.get(t.id, t) for t in h.transitions if not t.is_substitution)
    prime_places = tuple(p.id for p in h.places_of(h.prime_page))
    return FlatNet(
        name=h.name,
        places=h.places,
        transitions=transitions,
        arcs=tuple(arcs),
        color_sets=h.color_sets,
        initial_marking=dict(h.initial_marking),
        final_places=h.final_places,
        prime_places=prime_places,
    )


def initial_marking(net: Union[HcpnModel, FlatNet]) -> Marking:
    """
    Marcação inicial: uma ficha de controle em cada lugar derivado de nó inicial
    do IOD de nível 0; fichas em lugares temporizados recebem carimbo 0
    """
    tokens = {}
    for place_id, colors in net.initial_marking.items():
        stamp = 0 if net.is_timed_place(place_id) else None
        tokens[place_id] = [Token(color, stamp) for color in colors]
    return Marking.from_dict(tokens, 0)
