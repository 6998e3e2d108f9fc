"""
TD -> página temporizada (regras T3.11-T3.18)
"""
from typing import TYPE_CHECKING, Dict, Tuple

from src.diagram_model.model import TdGraph, TdLifeline
from src.hcpn_core.net import UNIT, ColorSet, Guard, TransitionRole
from src.logger import debug

if TYPE_CHECKING:
    from src.transformer.transformer import TransformContext

TIMED_CTRL = "CTRL_T"


def initial_state(td: TdGraph, lifeline: TdLifeline) -> str:
    segments = td.timeline(lifeline.name)
    if segments:
        return segments[0].state
    transitions = td.transitions_of(lifeline.name)
    if transitions:
        return transitions[0].from_state
    return lifeline.states[0]


def final_state(td: TdGraph, lifeline: TdLifeline) -> str:
    transitions = td.transitions_of(lifeline.name)
    return transitions[-1].to_state if transitions else initial_state(td, lifeline)


def map_td(td: TdGraph, ctx: "TransformContext", page_id: str, parent: str, level: int) -> str:
    """
    Gera a página temporizada de um TD

    Cada lifeline vira um lugar cujo conjunto de cores é o alfabeto de estados;
    cada `at` vira uma transição que troca a cor do estado. Durações de
    segmento viram atrasos, restrições de tempo viram guardas sobre o relógio.

    Args:
        td: Diagrama de tempo
        ctx: Contexto da transformação
        page_id: Caminho da página
        parent: Página mãe
        level: Nível hierárquico do TD

    Returns:
        Identificador da página criada
    """
    b = ctx.builder
    page_scope = b.scope("T3.11", td.id)
    page_scope.page(page_id, parent, td.id, "td", level)
    if TIMED_CTRL not in b.color_sets:
        b.color_sets[TIMED_CTRL] = ColorSet(TIMED_CTRL, (UNIT,), True)
        page_scope.produced.append(TIMED_CTRL)
    entry = page_scope.transition(page_id, "in", role=TransitionRole.IN)
    exit_ = page_scope.transition(page_id, "out", role=TransitionRole.OUT)

    if not td.lifelines:
        idle = page_scope.place(page_id, "idle", color_set=TIMED_CTRL)
        page_scope.arc(entry, idle)
        page_scope.arc(idle, exit_)
        return page_id

    places: Dict[str, str] = {}
    steps: Dict[str, str] = {}
    for lifeline in td.lifelines:
        scope = b.scope("T3.12", f"{td.id}:{lifeline.name}")
        colors = scope.color_set(f"{page_id}:{lifeline.name}", timed=True)
        places[lifeline.name] = scope.place(page_id, color_set=colors, label=lifeline.name)
        # Ficha de controle sem tempo: só a transição do próximo ponto da lifeline a consome
        steps[lifeline.name] = scope.place(page_id, f"{lifeline.name}.ready", label=lifeline.name)
        scope.arc(entry, steps[lifeline.name], entity=f"{lifeline.name}.ready")
        first, last = initial_state(td, lifeline), final_state(td, lifeline)
        for state in lifeline.states:
            entity = f"{lifeline.name}.{state}"
            st = b.scope("T3.15", f"{td.id}:{entity}", entity)
            st.color(colors, state)
            if state == first:
                st.arc(entry, places[lifeline.name], (state,), entity=f"{entity}.in")
            if state == last:
                st.arc(places[lifeline.name], exit_, (state,), entity=f"{entity}.out")

    points: Dict[Tuple[str, int], str] = {}
    for at in td.transitions_at:
        entity = f"{at.lifeline}@{at.point}"
        scope = b.scope("T3.13", f"{td.id}:{entity}", entity)
        t = scope.transition(page_id, label=f"{at.from_state}->{at.to_state}")
        scope.arc(places[at.lifeline], t, (at.from_state,))
        scope.arc(t, places[at.lifeline], (at.to_state,))
        done = scope.place(page_id, f"{entity}.done", label=entity)
        scope.arc(steps[at.lifeline], t, entity=f"{entity}.seq")
        scope.arc(t, done, entity=f"{entity}.done")
        steps[at.lifeline] = done
        points[(at.lifeline, at.point)] = t

        segments = td.timeline(at.lifeline)
        if at.point <= len(segments) and segments[at.point - 1].duration is not None:
            duration = segments[at.point - 1].duration
            segment = f"{at.lifeline}.{segments[at.point - 1].state}#{at.point}"
            b.scope("T3.16", f"{td.id}:{segment}", segment).delay(t, (duration.lo, duration.hi))
        if at.time_constraint is not None:
            window = (at.time_constraint.lo, at.time_constraint.hi)
            b.scope("T3.17", f"{td.id}:{entity}.time", entity).guard(t, Guard(window=window))
        if at.event is not None:
            event = f"{entity}.{at.event}"
            ev = b.scope("T3.18", f"{td.id}:{event}", event)
            p = ev.place(page_id, color_set=TIMED_CTRL, label=at.event)
            ev.arc(entry, p)
            ev.arc(p, t)

    # A Out-transition só fica habilitada depois do último ponto de cada lifeline
    for lifeline in td.lifelines:
        transitions = td.transitions_of(lifeline.name)
        if transitions:
            entity = f"{lifeline.name}@{transitions[-1].point}"
            scope = b.scope("T3.13", f"{td.id}:{entity}", entity)
        else:
            entity = f"{lifeline.name}.ready"
            scope = b.scope("T3.12", f"{td.id}:{lifeline.name}")
        scope.arc(steps[lifeline.name], exit_, entity=f"{entity}.out")

    for msg in td.messages:
        scope = b.scope("T3.14", f"{td.id}:{msg.name}", msg.name)
        p = scope.place(page_id, color_set=TIMED_CTRL, label=msg.name)
        scope.arc(points[(msg.sender, msg.send_point)], p)
        scope.arc(p, points[(msg.receiver, msg.recv_point)])

    debug(f"Página temporizada {page_id} gerada a partir do TD {td.id}")
    return page_id
