"""
Estrutura de redes de Petri coloridas hierárquicas (HCPN) e da rede achatada

Os arcos carregam expressões constantes (multiconjunto de cores); as guardas
são opacas: um rótulo é satisfazível, o literal `false` nunca é, e janelas de
tempo só são avaliadas na execução temporizada.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

UNIT = "unit"
CTRL = "CTRL"
FALSE_GUARD = "false"
TRUE_GUARD = "true"


class HcpnError(Exception):
    """Erro base do núcleo HCPN"""
    code = "hcpn"

    def __init__(self, message: str, entity: Optional[str] = None):
        super().__init__(message)
        self.entity = entity


class InvalidNetError(HcpnError):
    code = "invalid-net"


class NotEnabledError(HcpnError):
    code = "not-enabled"


class IllTypedMarkingError(HcpnError):
    code = "ill-typed-marking"


class NotTimedError(HcpnError):
    code = "not-timed"


class TimeDeadlockError(HcpnError):
    code = "time-deadlock"


class UnboundSocketError(HcpnError):
    code = "unbound-socket"


class PageCycleError(HcpnError):
    code = "page-cycle"


@dataclass(frozen=True)
class ColorSet:
    name: str
    colors: Tuple[str, ...]
    timed: bool = False


CTRL_COLORS = ColorSet(CTRL, (UNIT,), False)


@dataclass(frozen=True)
class Guard:
    """Guarda opaca: rótulo e/ou janela de tempo [lo, hi] sobre o relógio global"""
    label: Optional[str] = None
    window: Optional[Tuple[int, int]] = None

    @property
    def satisfiable(self) -> bool:
        return self.label != FALSE_GUARD

    def holds(self, clock: Optional[int]) -> bool:
        """Avalia a guarda; clock None = abstração sem tempo (janela apagada)"""
        if not self.satisfiable:
            return False
        if self.window is not None and clock is not None:
            lo, hi = self.window
            return lo <= clock <= hi
        return True

    def combine(self, other: Optional["Guard"]) -> "Guard":
        """Conjunção de duas guardas"""
        if other is None:
            return self
        if not self.satisfiable or not other.satisfiable:
            return Guard(FALSE_GUARD)
        labels = [g.label for g in (self, other) if g.label and g.label != TRUE_GUARD]
        label = " & ".join(labels) if labels else None
        window = self.window or other.window
        if self.window and other.window:
            lo = max(self.window[0], other.window[0])
            hi = min(self.window[1], other.window[1])
            if lo > hi:
                return Guard(FALSE_GUARD)
            window = (lo, hi)
        return Guard(label, window)

    def __str__(self) -> str:
        parts = []
        if self.label is not None:
            parts.append(self.label)
        if self.window is not None:
            parts.append(f"{self.window[0]} <= clock <= {self.window[1]}")
        return " & ".join(parts) if parts else TRUE_GUARD


class TransitionKind(str, Enum):
    ORDINARY = "ordinary"
    SUBSTITUTION = "substitution"


class TransitionRole(str, Enum):
    NONE = "none"
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class Place:
    id: str
    page: str
    color_set: str = CTRL
    label: str = ""


@dataclass(frozen=True)
class Transition:
    id: str
    page: str
    kind: TransitionKind = TransitionKind.ORDINARY
    role: TransitionRole = TransitionRole.NONE
    guard: Optional[Guard] = None
    delay: Optional[Tuple[int, int]] = None
    label: str = ""

    @property
    def is_substitution(self) -> bool:
        return self.kind is TransitionKind.SUBSTITUTION


@dataclass(frozen=True)
class Arc:
    id: str
    source: str
    target: str
    expression: Tuple[str, ...] = (UNIT,)


@dataclass(frozen=True)
class Page:
    id: str
    parent: Optional[str]
    source: str
    source_kind: str
    level: int


@dataclass(frozen=True)
class SocketBinding:
    """Lugares-soquete de uma transição de substituição (entrada e saída)"""
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]


class _NetIndex:
    """Consultas comuns a HcpnModel e FlatNet (pré/pós-condições por transição)"""

    places: Tuple[Place, ...]
    transitions: Tuple[Transition, ...]
    arcs: Tuple[Arc, ...]
    color_sets: Tuple[ColorSet, ...]

    @cached_property
    def place_map(self) -> Dict[str, Place]:
        return {p.id: p for p in self.places}

    @cached_property
    def transition_map(self) -> Dict[str, Transition]:
        return {t.id: t for t in self.transitions}

    @cached_property
    def color_set_map(self) -> Dict[str, ColorSet]:
        return {c.name: c for c in self.color_sets}

    @cached_property
    def pre(self) -> Dict[str, Tuple[Arc, ...]]:
        result: Dict[str, List[Arc]] = {t.id: [] for t in self.transitions}
        for arc in self.arcs:
            if arc.target in result:
                result[arc.target].append(arc)
        return {k: tuple(v) for k, v in result.items()}

    @cached_property
    def post(self) -> Dict[str, Tuple[Arc, ...]]:
        result: Dict[str, List[Arc]] = {t.id: [] for t in self.transitions}
        for arc in self.arcs:
            if arc.source in result:
                result[arc.source].append(arc)
        return {k: tuple(v) for k, v in result.items()}

    def place(self, place_id: str) -> Place:
        try:
            return self.place_map[place_id]
        except KeyError:
            raise InvalidNetError(f"lugar desconhecido: {place_id}", place_id) from None

    def transition(self, transition_id: str) -> Transition:
        try:
            return self.transition_map[transition_id]
        except KeyError:
            raise InvalidNetError(f"transição desconhecida: {transition_id}", transition_id) from None

    def color_set_of(self, place_id: str) -> ColorSet:
        return self.color_set_map[self.place(place_id).color_set]

    def is_timed_place(self, place_id: str) -> bool:
        cs = self.color_set_map.get(self.place(place_id).color_set)
        return bool(cs and cs.timed)

    @property
    def is_timed(self) -> bool:
        return any(self.is_timed_place(p.id) for p in self.places)


@dataclass(frozen=True, eq=True)
class HcpnModel(_NetIndex):
    name: str
    prime_page: str
    pages: Tuple[Page, ...]
    places: Tuple[Place, ...]
    transitions: Tuple[Transition, ...]
    arcs: Tuple[Arc, ...]
    color_sets: Tuple[ColorSet, ...]
    page_assignment: Dict[str, str] = field(default_factory=dict)
    socket_bindings: Dict[str, SocketBinding] = field(default_factory=dict)
    initial_marking: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    final_places: Tuple[str, ...] = ()

    @cached_property
    def page_map(self) -> Dict[str, Page]:
        return {p.id: p for p in self.pages}

    def places_of(self, page_id: str) -> Tuple[Place, ...]:
        return tuple(p for p in self.places if p.page == page_id)

    def transitions_of(self, page_id: str) -> Tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.page == page_id)

    def ordinary_transitions(self, page_id: str) -> Tuple[Transition, ...]:
        return tuple(t for t in self.transitions_of(page_id) if not t.is_substitution)

    def substitution_transitions(self, page_id: Optional[str] = None) -> Tuple[Transition, ...]:
        return tuple(t for t in self.transitions
                     if t.is_substitution and (page_id is None or t.page == page_id))

    def in_transitions(self, page_id: str) -> Tuple[Transition, ...]:
        return tuple(t for t in self.transitions_of(page_id) if t.role is TransitionRole.IN)

    def out_transitions(self, page_id: str) -> Tuple[Transition, ...]:
        return tuple(t for t in self.transitions_of(page_id) if t.role is TransitionRole.OUT)

    def arcs_of(self, page_id: str) -> Tuple[Arc, ...]:
        ids = {p.id for p in self.places_of(page_id)} | {t.id for t in self.transitions_of(page_id)}
        return tuple(a for a in self.arcs if a.source in ids or a.target in ids)

    def child_pages(self, page_id: str) -> Tuple[str, ...]:
        return tuple(self.page_assignment[t.id] for t in self.substitution_transitions(page_id)
                     if t.id in self.page_assignment)

    def page_depth(self) -> int:
        def depth(page_id: str) -> int:
            children = self.child_pages(page_id)
            return 0 if not children else 1 + max(depth(c) for c in children)
        return depth(self.prime_page)


@dataclass(frozen=True, eq=True)
class FlatNet(_NetIndex):
    """Rede de uma página só, sem transições de substituição"""
    name: str
    places: Tuple[Place, ...]
    transitions: Tuple[Transition, ...]
    arcs: Tuple[Arc, ...]
    color_sets: Tuple[ColorSet, ...]
    initial_marking: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    final_places: Tuple[str, ...] = ()
    prime_places: Tuple[str, ...] = ()

    @property
    def delays(self) -> Dict[str, Tuple[int, int]]:
        return {t.id: t.delay for t in self.transitions if t.delay is not None}

    @property
    def guards(self) -> Dict[str, Guard]:
        return {t.id: t.guard for t in self.transitions if t.guard is not None}


def simple_net(places: Iterable[str], transitions: Iterable[str], arcs: Iterable[Tuple[str, str]],
               marking: Optional[Dict[str, int]] = None, final_places: Iterable[str] = (),
               guards: Optional[Dict[str, Guard]] = None,
               delays: Optional[Dict[str, Tuple[int, int]]] = None,
               timed_places: Iterable[str] = ()) -> FlatNet:
    """
    Monta uma FlatNet de controle (cor CTRL) a partir de listas simples

    Args:
        places: Identificadores dos lugares
        transitions: Identificadores das transições
        arcs: Pares (origem, destino)
        marking: Fichas iniciais por lugar
        final_places: Lugares de término próprio
        guards: Guardas por transição
        delays: Atrasos [lo, hi] por transição
        timed_places: Lugares com conjunto de cores temporizado

    Returns:
        FlatNet pronta para o jogo de fichas
    """
    guards = guards or {}
    delays = delays or {}
    timed = set(timed_places)
    color_sets = [CTRL_COLORS]
    if timed:
        color_sets.append(ColorSet("CTRL_T", (UNIT,), True))
    place_objs = tuple(Place(p, "net", "CTRL_T" if p in timed else CTRL) for p in places)
    trans_objs = tuple(Transition(t, "net", guard=guards.get(t), delay=delays.get(t)) for t in transitions)
    arc_objs = tuple(Arc(f"a{i}:{s}->{d}", s, d) for i, (s, d) in enumerate(arcs))
    initial = {p: (UNIT,) * n for p, n in (marking or {}).items() if n > 0}
    return FlatNet("net", place_objs, trans_objs, arc_objs, tuple(color_sets), initial,
                   tuple(final_places), tuple(places))


def check_hcpn(h: HcpnModel) -> List[str]:
    """
    Verifica as invariantes estruturais de um HcpnModel

    Returns:
        Lista de violações (vazia = modelo bem formado)
    """
    problems: List[str] = []
    page_ids = {p.id for p in h.pages}
    primes = [p for p in h.pages if p.parent is None]
    if len(primes) != 1 or primes[0].id != h.prime_page:
        problems.append(f"deve haver exatamente uma página principal ({h.prime_page})")

    place_ids = {p.id for p in h.places}
    trans_ids = {t.id for t in h.transitions}
    if place_ids & trans_ids:
        problems.append(f"identificadores compartilhados por lugares e transições: {sorted(place_ids & trans_ids)}")

    for place in h.places:
        if place.color_set not in h.color_set_map:
            problems.append(f"conjunto de cores não declarado em {place.id}")
        if place.page not in page_ids:
            problems.append(f"lugar {place.id} em página inexistente")

    for arc in h.arcs:
        if arc.source in place_ids and arc.target in trans_ids:
            p, t = h.place_map[arc.source], h.transition_map[arc.target]
        elif arc.source in trans_ids and arc.target in place_ids:
            t, p = h.transition_map[arc.source], h.place_map[arc.target]
        else:
            problems.append(f"arco {arc.id} não liga lugar e transição")
            continue
        if p.page != t.page:
            problems.append(f"arco {arc.id} cruza páginas")
        colors = h.color_set_map.get(p.color_set)
        if colors and any(c not in colors.colors for c in arc.expression):
            problems.append(f"arco {arc.id} com cor fora de {p.color_set}")

    assigned: Dict[str, str] = {}
    for t in h.substitution_transitions():
        target = h.page_assignment.get(t.id)
        if target is None:
            problems.append(f"transição de substituição {t.id} sem página")
            continue
        if target == h.prime_page or target not in page_ids:
            problems.append(f"{t.id} aponta para página inválida {target}")
        if target in assigned:
            problems.append(f"página {target} referenciada por {assigned[target]} e {t.id}")
        assigned[target] = t.id
        if h.page_map.get(target) and h.page_map[target].parent != t.page:
            problems.append(f"página {target} não é filha de {t.page}")
        binding = h.socket_bindings.get(t.id)
        if binding is None:
            problems.append(f"{t.id} sem ligação de soquetes")
        else:
            inputs = {a.source for a in h.pre.get(t.id, ())}
            outputs = {a.target for a in h.post.get(t.id, ())}
            if set(binding.inputs) != inputs or set(binding.outputs) != outputs:
                problems.append(f"ligação de soquetes de {t.id} não corresponde aos lugares adjacentes")

    for page in h.pages:
        if page.id == h.prime_page:
            continue
        if page.id not in assigned:
            problems.append(f"página {page.id} não referenciada")
        if len(h.in_transitions(page.id)) != 1:
            problems.append(f"página {page.id} deve ter exatamente uma In-transition")
        if not h.out_transitions(page.id):
            problems.append(f"página {page.id} sem Out-transition")

    timed_pages = {h.place_map[pid].page for pid in place_ids if h.is_timed_place(pid)}
    for t in h.transitions:
        timed_guard = t.guard is not None and t.guard.window is not None
        if (t.delay is not None or timed_guard) and t.page not in timed_pages:
            problems.append(f"anotação temporal em {t.id} fora de página temporizada")
    return problems
