"""
Validação estrutural do modelo de interação

As violações são dados (ValidationReport), nunca exceções.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.diagram_model.model import (
    DiagramKind, InteractionModel, IodGraph, MessageKind, NodeKind, SdFragment, SdGraph,
    SdItem, SdMessage, TdGraph, TimeBounds,
)
from src.diagram_model.hierarchy import referenced_by, root_iods
from src.logger import debug

ERROR = "error"
WARNING = "warning"

SOURCE_KINDS = {NodeKind.INITIAL, NodeKind.INTERACTION, NodeKind.FORK, NodeKind.JOIN,
                NodeKind.DECISION, NodeKind.MERGE}
TARGET_KINDS = {NodeKind.FINAL, NodeKind.INTERACTION, NodeKind.FORK, NodeKind.JOIN,
                NodeKind.DECISION, NodeKind.MERGE}


@dataclass(frozen=True)
class Violation:
    level: str
    rule: str
    diagram: str
    node: str
    message: str
    span: Any = field(default=None, compare=False, repr=False)

    def to_line(self) -> str:
        return f"{self.level.upper()} {self.rule} {self.diagram}:{self.node} {self.message}"

    def to_dict(self) -> Dict[str, str]:
        return {"level": self.level, "rule": self.rule, "diagram": self.diagram,
                "node": self.node, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def errors(self) -> Tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.level == ERROR)

    @property
    def warnings(self) -> Tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.level == WARNING)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def rules(self) -> List[str]:
        return [v.rule for v in self.violations]

    def to_text(self) -> str:
        return "".join(v.to_line() + "\n" for v in self.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {"valid": self.is_valid, "violations": [v.to_dict() for v in self.violations]}


class _Collector:
    def __init__(self):
        self.items: List[Violation] = []

    def error(self, rule: str, diagram: str, node: str, message: str, span=None):
        self.items.append(Violation(ERROR, rule, diagram, node, message, span))

    def warning(self, rule: str, diagram: str, node: str, message: str, span=None):
        self.items.append(Violation(WARNING, rule, diagram, node, message, span))


def validate(model: InteractionModel) -> ValidationReport:
    """
    Valida todas as invariantes do modelo

    Args:
        model: Modelo de interação (qualquer modelo analisado)

    Returns:
        Relatório com todas as violações; vazio de erros = modelo válido
    """
    out = _Collector()
    _check_diagram_ids(model, out)
    _check_refs(model, out)
    for iod in model.iods:
        _check_iod(iod, out)
    for sd in model.sds:
        _check_sd(sd, out)
    for td in model.tds:
        _check_td(td, out)
    report = ValidationReport(tuple(out.items))
    debug(f"Validação de '{model.name}': {len(report.errors)} erros, {len(report.warnings)} avisos")
    return report


def _check_diagram_ids(model: InteractionModel, out: _Collector):
    counts = Counter(d.id for d in model.diagrams)
    for diagram_id, count in counts.items():
        if count > 1:
            out.error("duplicate-diagram", diagram_id, "-", f"diagrama declarado {count} vezes")


def _check_refs(model: InteractionModel, out: _Collector):
    targets: Dict[str, List[str]] = {}
    owners: Dict[str, List[str]] = {}

    for iod, node in model.interaction_nodes():
        owners.setdefault(node.id, []).append(iod.id)
        if node.ref is None:
            out.error("missing-ref", iod.id, node.id, "nó de interação sem referência", node.span)
            continue
        target = model.diagram(node.ref.target)
        if target is None:
            out.error("dangling-ref", iod.id, node.id,
                      f"referência a diagrama inexistente '{node.ref.target}'", node.span)
            continue
        if target.kind is not node.ref.kind:
            out.error("ref-kind-mismatch", iod.id, node.id,
                      f"'{node.ref.target}' é {target.kind.value}, não {node.ref.kind.value}", node.span)
        targets.setdefault(node.ref.target, []).append(node.id)

    for node_id, iod_ids in owners.items():
        if len(iod_ids) > 1:
            out.error("duplicate-interaction-node", iod_ids[1], node_id,
                      f"nó de interação presente em {', '.join(iod_ids)}")

    for target, nodes in targets.items():
        if len(nodes) > 1:
            out.error("ref-not-injective", target, nodes[1],
                      f"diagrama referenciado por {', '.join(nodes)}")

    roots = root_iods(model)
    if not roots and model.iods:
        out.error("no-root", "-", "-", "nenhum IOD raiz (todos são referenciados)")
    elif not model.iods and (model.sds or model.tds):
        out.error("no-root", "-", "-", "modelo sem IOD raiz")
    elif len(roots) > 1:
        out.error("multiple-roots", roots[1].id, "-",
                  f"IODs não referenciados: {', '.join(r.id for r in roots)}")

    for d in model.sds + model.tds:
        if d.id not in targets:
            out.error("unreferenced-diagram", d.id, "-", f"{d.kind.value} não referenciado por nenhum nó")

    # A relação Ref deve formar uma árvore: sem ciclos
    parents = referenced_by(model)
    for d in model.iods:
        seen = {d.id}
        current = d.id
        while current in parents:
            current = parents[current]
            if current in seen:
                out.error("ref-cycle", d.id, "-", "ciclo na hierarquia de referências")
                break
            seen.add(current)


def _check_iod(iod: IodGraph, out: _Collector):
    counts = Counter(n.id for n in iod.nodes)
    for node_id, count in counts.items():
        if count > 1:
            out.error("duplicate-node", iod.id, node_id, "identificador de nó repetido")
    kinds = {n.id: n.kind for n in iod.nodes}

    if not iod.initial_nodes:
        out.error("no-initial", iod.id, "-", "IOD sem nó inicial", iod.span)
    if not iod.final_nodes:
        out.error("no-final", iod.id, "-", "IOD sem nó final", iod.span)

    for edge in iod.edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in kinds:
                out.error("dangling-edge", iod.id, endpoint,
                          f"aresta {edge.label} usa nó não declarado", edge.span)
        if edge.source in kinds and kinds[edge.source] not in SOURCE_KINDS:
            out.error("edge-from-final", iod.id, edge.source,
                      "nó final não pode ter arestas de saída", edge.span)
        if edge.target in kinds and kinds[edge.target] not in TARGET_KINDS:
            out.error("edge-into-initial", iod.id, edge.target,
                      "nó inicial não pode ter arestas de entrada", edge.span)
        if edge.guard is not None and kinds.get(edge.source) is not NodeKind.DECISION:
            out.warning("guard-outside-decision", iod.id, edge.source,
                        f"guarda '{edge.guard}' em aresta que não sai de decisão", edge.span)

    for node in iod.nodes:
        if node.kind is NodeKind.DECISION and len(iod.outgoing(node.id)) < 2:
            out.warning("decision-arity", iod.id, node.id, "decisão com menos de 2 saídas", node.span)
        if node.kind is not NodeKind.FINAL and not iod.outgoing(node.id):
            out.warning("dead-end-node", iod.id, node.id, "nó sem arestas de saída", node.span)
        if node.kind is not NodeKind.INITIAL and not iod.incoming(node.id):
            out.warning("unreachable-node", iod.id, node.id, "nó sem arestas de entrada", node.span)


def _check_sd(sd: SdGraph, out: _Collector):
    lifelines = set(sd.lifelines)
    for lf, count in Counter(sd.lifelines).items():
        if count > 1:
            out.error("duplicate-lifeline", sd.id, lf, "lifeline repetida")

    points: Dict[str, List[int]] = {}
    messages = sd.messages
    for index, msg in enumerate(messages):
        for lf, point, role in ((msg.sender, msg.send_point, "send"), (msg.receiver, msg.recv_point, "recv")):
            if lf is None:
                if point is not None:
                    out.error("unexpected-point", sd.id, msg.name, f"ponto {role} em mensagem {msg.flag}", msg.span)
                continue
            if lf not in lifelines:
                out.error("unknown-lifeline", sd.id, msg.name, f"lifeline '{lf}' não declarada", msg.span)
            if point is None:
                out.error("missing-point", sd.id, msg.name, f"mensagem sem ponto {role}", msg.span)
                continue
            points.setdefault(lf, []).append(point)
        if msg.is_found and msg.is_lost:
            out.error("found-and-lost", sd.id, msg.name, "mensagem sem origem nem destino", msg.span)
        elif msg.is_found or msg.is_lost:
            out.warning("unsupported-by-transformer", sd.id, msg.name,
                        f"mensagem {msg.flag} não possui regra de transformação", msg.span)
        if msg.kind is MessageKind.SYNC and not msg.is_found and not msg.is_lost:
            replied = any(m.kind is MessageKind.REPLY and m.sender == msg.receiver and m.receiver == msg.sender
                          for m in messages[index + 1:])
            if not replied:
                out.warning("sync-without-reply", sd.id, msg.name,
                            "mensagem síncrona sem resposta explícita", msg.span)

    for lf, pts in points.items():
        if len(set(pts)) != len(pts):
            out.error("duplicate-point", sd.id, lf, "pontos de interação repetidos")
        elif pts != sorted(pts):
            out.error("point-order", sd.id, lf, "pontos fora da ordem de cima para baixo")

    ranges = sd.fragments
    for i, a in enumerate(ranges):
        for b in ranges[i + 1:]:
            overlap = a.first <= b.last and b.first <= a.last
            nested = (a.first <= b.first and b.last <= a.last) or (b.first <= a.first and a.last <= b.last)
            if overlap and not nested:
                out.error("fragment-overlap", sd.id, a.kind.value, "fragmentos com sobreposição parcial")

    _check_fragments(sd, sd.items, out)


def _check_fragments(sd: SdGraph, items: Tuple[SdItem, ...], out: _Collector):
    for item in items:
        if not isinstance(item, SdFragment):
            continue
        if not item.operands:
            out.error("empty-fragment", sd.id, item.kind.value, "fragmento sem operandos", item.span)
        if item.kind.value in ("opt", "loop") and len(item.operands) != 1:
            out.error("fragment-operands", sd.id, item.kind.value,
                      f"{item.kind.value} aceita exatamente um operando", item.span)
        for operand in item.operands:
            _check_fragments(sd, operand.items, out)


def _check_bounds(bounds: Optional[TimeBounds], rule: str, td: TdGraph, node: str, out: _Collector, span=None):
    if bounds is not None and not (0 <= bounds.lo <= bounds.hi):
        out.error(rule, td.id, node, f"limites inválidos {bounds}", span)


def _check_td(td: TdGraph, out: _Collector):
    alphabets = td.states
    for lf in td.lifelines:
        if not lf.states:
            out.error("empty-alphabet", td.id, lf.name, "lifeline sem estados", lf.span)
        for state, count in Counter(lf.states).items():
            if count > 1:
                out.error("duplicate-state", td.id, lf.name, f"estado '{state}' repetido", lf.span)

    for seg in td.segments:
        if seg.lifeline not in alphabets:
            out.error("unknown-lifeline", td.id, seg.lifeline, "lifeline não declarada", seg.span)
        elif seg.state not in alphabets[seg.lifeline]:
            out.error("unknown-state", td.id, seg.lifeline, f"estado '{seg.state}' fora do alfabeto", seg.span)
        _check_bounds(seg.duration, "bad-duration", td, seg.lifeline, out, seg.span)

    for lf in td.lifelines:
        timeline = td.timeline(lf.name)
        for prev, cur in zip(timeline, timeline[1:]):
            if prev.state == cur.state:
                out.error("repeated-state", td.id, lf.name,
                          f"segmentos consecutivos no estado '{cur.state}'", cur.span)

    for t in td.transitions_at:
        node = f"{t.lifeline}@{t.point}"
        if t.lifeline not in alphabets:
            out.error("unknown-lifeline", td.id, node, "lifeline não declarada", t.span)
            continue
        for state in (t.from_state, t.to_state):
            if state not in alphabets[t.lifeline]:
                out.error("unknown-state", td.id, node, f"estado '{state}' fora do alfabeto", t.span)
        if t.from_state == t.to_state:
            out.error("repeated-state", td.id, node, "transição sem mudança de estado", t.span)
        _check_bounds(t.time_constraint, "bad-time-constraint", td, node, out, t.span)
        timeline = td.timeline(t.lifeline)
        if t.point <= len(timeline) and timeline[t.point - 1].state != t.from_state:
            out.warning("segment-mismatch", td.id, node,
                        f"segmento {t.point} está em '{timeline[t.point - 1].state}'", t.span)

    for lf in td.lifelines:
        pts = [t.point for t in td.transitions_of(lf.name)]
        if pts != list(range(1, len(pts) + 1)):
            out.error("point-order", td.id, lf.name, "pontos de interação fora de ordem")

    for msg in td.messages:
        for lf, point in ((msg.sender, msg.send_point), (msg.receiver, msg.recv_point)):
            if td.transition_at(lf, point) is None:
                out.error("dangling-point", td.id, msg.name, f"ponto {lf}@{point} inexistente", msg.span)
