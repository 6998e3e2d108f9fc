"""
Construção incremental do HcpnModel com registro de regras

Cada elemento é criado dentro de um escopo (regra, entidade de origem), que vira
uma entrada da RuleTrace. Identificadores seguem `<página>/<regra>/<entidade>[#k]`.
"""
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from src.hcpn_core.net import (
    CTRL, CTRL_COLORS, UNIT, Arc, ColorSet, Guard, HcpnModel, Page, Place, SocketBinding,
    Transition, TransitionKind, TransitionRole,
)
from src.transformer.rule_trace import RuleTrace, TraceEntry


class TransformError(Exception):
    """Erro base da transformação"""
    code = "transform"

    def __init__(self, message: str, entity: Optional[str] = None):
        super().__init__(message)
        self.entity = entity


class InvalidModelError(TransformError):
    code = "invalid-model"

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedConstructError(TransformError):
    """Construção sem regra de transformação (mensagens found/lost, IOD folha)"""

    def __init__(self, construct: str, entity: str):
        super().__init__(f"unsupported: {construct} ({entity})", entity)
        self.code = f"unsupported: {construct}"


class NetBuilder:
    def __init__(self, name: str):
        self.name = name
        self.prime_page: Optional[str] = None
        self.pages: List[Page] = []
        self.places: Dict[str, Place] = {}
        self.transitions: Dict[str, Transition] = {}
        self.arcs: Dict[str, Arc] = {}
        self.color_sets: Dict[str, ColorSet] = {CTRL: CTRL_COLORS}
        self.page_assignment: Dict[str, str] = {}
        self.initial_marking: Dict[str, Tuple[str, ...]] = {}
        self.final_places: List[str] = []
        self._ids: set = set()
        self._entries: Dict[Tuple[str, str], List[str]] = {}

    def scope(self, rule: str, source: str, entity: Optional[str] = None) -> "RuleScope":
        return RuleScope(self, rule, source, entity)

    def fresh_id(self, base: str) -> str:
        candidate, k = base, 1
        while candidate in self._ids:
            k += 1
            candidate = f"{base}#{k}"
        self._ids.add(candidate)
        return candidate

    def page_of(self, element_id: str) -> str:
        if element_id in self.places:
            return self.places[element_id].page
        return self.transitions[element_id].page

    def set_guard(self, transition_id: str, guard: Guard) -> None:
        current = self.transitions[transition_id]
        combined = guard.combine(current.guard) if current.guard else guard
        self.transitions[transition_id] = replace(current, guard=combined)

    def set_delay(self, transition_id: str, delay: Tuple[int, int]) -> None:
        self.transitions[transition_id] = replace(self.transitions[transition_id], delay=delay)

    def socket_bindings(self) -> Dict[str, SocketBinding]:
        bindings = {}
        for t in self.transitions.values():
            if not t.is_substitution:
                continue
            inputs = tuple(a.source for a in self.arcs.values() if a.target == t.id)
            outputs = tuple(a.target for a in self.arcs.values() if a.source == t.id)
            bindings[t.id] = SocketBinding(tuple(dict.fromkeys(inputs)), tuple(dict.fromkeys(outputs)))
        return bindings

    def build(self) -> Tuple[HcpnModel, RuleTrace]:
        model = HcpnModel(
            name=self.name,
            prime_page=self.prime_page or "",
            pages=tuple(self.pages),
            places=tuple(self.places.values()),
            transitions=tuple(self.transitions.values()),
            arcs=tuple(self.arcs.values()),
            color_sets=tuple(self.color_sets.values()),
            page_assignment=dict(self.page_assignment),
            socket_bindings=self.socket_bindings(),
            initial_marking=dict(self.initial_marking),
            final_places=tuple(self.final_places),
        )
        trace = RuleTrace(tuple(TraceEntry(rule, source, tuple(produced))
                                for (rule, source), produced in self._entries.items()))
        return model, trace


class RuleScope:
    """Aplicação de uma regra a uma entidade; acumula os elementos produzidos"""

    def __init__(self, builder: NetBuilder, rule: str, source: str, entity: Optional[str] = None):
        self.builder = builder
        self.rule = rule
        self.source = source
        self.entity = entity or source.split(":", 1)[-1]
        self.produced = builder._entries.setdefault((rule, source), [])

    def _new_id(self, page: str, entity: Optional[str]) -> str:
        element_id = self.builder.fresh_id(f"{page}/{self.rule}/{entity or self.entity}")
        self.produced.append(element_id)
        return element_id

    def page(self, page_id: str, parent: Optional[str], source: str, source_kind: str, level: int) -> str:
        self.builder._ids.add(page_id)
        self.builder.pages.append(Page(page_id, parent, source, source_kind, level))
        if parent is None:
            self.builder.prime_page = page_id
        self.produced.append(page_id)
        return page_id

    def place(self, page: str, entity: Optional[str] = None, color_set: str = CTRL, label: str = "") -> str:
        place_id = self._new_id(page, entity)
        self.builder.places[place_id] = Place(place_id, page, color_set, label)
        return place_id

    def transition(self, page: str, entity: Optional[str] = None, guard: Optional[Guard] = None,
                   role: TransitionRole = TransitionRole.NONE,
                   kind: TransitionKind = TransitionKind.ORDINARY, label: str = "") -> str:
        transition_id = self._new_id(page, entity)
        self.builder.transitions[transition_id] = Transition(transition_id, page, kind, role, guard, None, label)
        return transition_id

    def arc(self, source: str, target: str, expression: Tuple[str, ...] = (UNIT,),
            entity: Optional[str] = None) -> str:
        page = self.builder.page_of(source)
        arc_id = self._new_id(page, f"{entity or self.entity}.arc")
        self.builder.arcs[arc_id] = Arc(arc_id, source, target, tuple(expression))
        return arc_id

    def color_set(self, name: str, timed: bool = True) -> str:
        self.builder.color_sets[name] = ColorSet(name, (), timed)
        self.produced.append(name)
        return name

    def color(self, color_set: str, color: str) -> str:
        current = self.builder.color_sets[color_set]
        if color not in current.colors:
            self.builder.color_sets[color_set] = replace(current, colors=current.colors + (color,))
        color_id = f"{color_set}:{color}"
        self.produced.append(color_id)
        return color_id

    def guard(self, transition_id: str, guard: Guard) -> str:
        self.builder.set_guard(transition_id, guard)
        return self._annotation(transition_id, "guard")

    def delay(self, transition_id: str, delay: Tuple[int, int]) -> str:
        self.builder.set_delay(transition_id, delay)
        return self._annotation(transition_id, "delay")

    def _annotation(self, transition_id: str, kind: str) -> str:
        annotation_id = self.builder.fresh_id(f"{transition_id}/{kind}")
        self.produced.append(annotation_id)
        return annotation_id
