"""
Jogo de fichas: habilitação, disparo e avanço do relógio global
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple, Union

from src.hcpn_core.marking import Marking, Token
from src.hcpn_core.net import (
    FlatNet, HcpnModel, IllTypedMarkingError, NotEnabledError, NotTimedError,
    TimeDeadlockError, Transition,
)

Binding = Tuple[Tuple[str, Any], ...]
UNIT_BINDING: Binding = ()
DELAY = "delay"

Net = Union[FlatNet, HcpnModel]


@dataclass
class SimulationContext:
    """Estado de uma execução semeada; o gerador nunca é compartilhado entre execuções"""
    seed: int = 0
    timed: bool = True
    rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self.rng = random.Random(self.seed)

    def draw_delay(self, lo: int, hi: int) -> int:
        return self.rng.randint(lo, hi)


def binding_delay(binding: Binding) -> Optional[int]:
    for key, value in binding:
        if key == DELAY:
            return value
    return None


def format_binding(binding: Binding) -> str:
    if not binding:
        return "unit"
    return ",".join(f"{k}={v}" for k, v in binding)


def check_marking(net: Net, m: Marking) -> None:
    """
    Verifica se a marcação respeita os conjuntos de cores da rede

    Raises:
        IllTypedMarkingError: lugar desconhecido, cor fora do conjunto ou carimbo incoerente
    """
    for place_id, bag in m.tokens:
        if place_id not in net.place_map:
            raise IllTypedMarkingError(f"lugar desconhecido na marcação: {place_id}", place_id)
        colors = net.color_set_of(place_id)
        for token in bag:
            if token.color not in colors.colors:
                raise IllTypedMarkingError(f"cor {token.color} fora de {colors.name} em {place_id}", place_id)
            if (token.timestamp is not None) != colors.timed:
                raise IllTypedMarkingError(f"carimbo de tempo incoerente em {place_id}", place_id)
            if token.timestamp is not None and token.timestamp < 0:
                raise IllTypedMarkingError(f"carimbo negativo em {place_id}", place_id)
    if m.clock < 0:
        raise IllTypedMarkingError("relógio negativo")


def _demand(net: Net, transition_id: str) -> Dict[str, Counter]:
    """Cores exigidas por lugar de entrada"""
    demand: Dict[str, Counter] = {}
    for arc in net.pre[transition_id]:
        demand.setdefault(arc.source, Counter()).update(arc.expression)
    return demand


def _take(bag: Tuple[Token, ...], needed: Counter, clock: Optional[int]) -> Optional[List[Token]]:
    """Escolhe as fichas consumidas (carimbos mais antigos primeiro) ou None se faltar alguma"""
    chosen: List[Token] = []
    for color, count in sorted(needed.items()):
        available = [t for t in bag if t.color == color
                     and (clock is None or t.timestamp is None or t.timestamp <= clock)]
        if len(available) < count:
            return None
        chosen.extend(available[:count])
    return chosen


def _inputs_available(net: Net, m: Marking, transition: Transition, timed: bool) -> bool:
    clock = m.clock if timed else None
    for place, needed in _demand(net, transition.id).items():
        if _take(m.get(place), needed, clock) is None:
            return False
    return True


def _guard_holds(transition: Transition, m: Marking, timed: bool) -> bool:
    if transition.guard is None:
        return True
    return transition.guard.holds(m.clock if timed else None)


def enabled(net: Net, m: Marking, timed: bool = False, expand_delays: bool = False) -> Set[Tuple[str, Binding]]:
    """
    Calcula os pares (transição, ligação) habilitados

    Args:
        net: Rede achatada
        m: Marcação bem tipada
        timed: Avalia carimbos de tempo e janelas das guardas contra o relógio
        expand_delays: Cada atraso inteiro possível vira uma ligação distinta

    Returns:
        Conjunto de pares habilitados
    """
    check_marking(net, m)
    result: Set[Tuple[str, Binding]] = set()
    for transition in net.transitions:
        if transition.is_substitution:
            continue
        if not _guard_holds(transition, m, timed) or not _inputs_available(net, m, transition, timed):
            continue
        if expand_delays and timed and transition.delay is not None:
            lo, hi = transition.delay
            result.update((transition.id, ((DELAY, d),)) for d in range(lo, hi + 1))
        else:
            result.add((transition.id, UNIT_BINDING))
    return result


def _is_enabled(net: Net, m: Marking, transition: Transition, binding: Binding, timed: bool) -> bool:
    if transition.is_substitution:
        return False
    delay = binding_delay(binding)
    if delay is not None:
        if transition.delay is None or not timed:
            return False
        lo, hi = transition.delay
        if not lo <= delay <= hi:
            return False
    elif binding:
        return False
    return _guard_holds(transition, m, timed) and _inputs_available(net, m, transition, timed)


def fire(net: Net, m: Marking, transition_id: str, binding: Binding = UNIT_BINDING,
         ctx: Optional[SimulationContext] = None, timed: bool = False) -> Marking:
    """
    Dispara uma transição habilitada

    Args:
        net: Rede achatada
        m: Marcação atual
        transition_id: Transição a disparar
        binding: Ligação (vazia ou com o atraso escolhido)
        ctx: Contexto semeado para sortear atrasos não fixados pela ligação
        timed: Semântica temporizada

    Returns:
        Nova marcação (a original não é alterada)

    Raises:
        NotEnabledError: par (transição, ligação) não habilitado
    """
    check_marking(net, m)
    transition = net.transition_map.get(transition_id)
    if transition is None or not _is_enabled(net, m, transition, binding, timed):
        raise NotEnabledError(f"{transition_id} não está habilitada com {format_binding(binding)}", transition_id)

    clock = m.clock if timed else None
    tokens = {place: list(bag) for place, bag in m.tokens}
    for place, needed in _demand(net, transition_id).items():
        for token in _take(m.get(place), needed, clock):
            tokens[place].remove(token)

    delay = binding_delay(binding)
    if delay is None and timed and transition.delay is not None:
        lo, hi = transition.delay
        delay = ctx.draw_delay(lo, hi) if ctx is not None else lo
    stamp = m.clock + (delay or 0) if timed else 0

    for arc in net.post[transition_id]:
        place_timed = net.is_timed_place(arc.target)
        bag = tokens.setdefault(arc.target, [])
        bag.extend(Token(color, stamp if place_timed else None) for color in arc.expression)
    return Marking.from_dict(tokens, m.clock)


def _ready_time(net: Net, m: Marking, transition: Transition) -> Optional[int]:
    """Instante mais cedo em que a transição pode ficar habilitada, ou None"""
    if transition.is_substitution or (transition.guard is not None and not transition.guard.satisfiable):
        return None
    ready = m.clock
    for place, needed in _demand(net, transition.id).items():
        bag = m.get(place)
        for color, count in needed.items():
            stamps = sorted(t.timestamp or 0 for t in bag if t.color == color)
            if len(stamps) < count:
                return None
            ready = max(ready, stamps[count - 1])
    window = transition.guard.window if transition.guard is not None else None
    if window is not None:
        lo, hi = window
        ready = max(ready, lo)
        if ready > hi:
            return None
    return ready


def advance_time(net: Net, m: Marking) -> Marking:
    """
    Avança o relógio até o menor instante que habilita alguma transição

    Raises:
        NotTimedError: rede sem lugares temporizados
        TimeDeadlockError: nenhuma transição poderá ser habilitada no futuro
    """
    if not net.is_timed:
        raise NotTimedError("a rede não possui conjuntos de cores temporizados")
    candidates = [r for r in (_ready_time(net, m, t) for t in net.transitions)
                  if r is not None and r > m.clock]
    if not candidates:
        raise TimeDeadlockError(f"nenhuma transição habilitável após o instante {m.clock}")
    return m.with_clock(min(candidates))
