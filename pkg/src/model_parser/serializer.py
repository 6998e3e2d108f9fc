"""
Serializador canônico: InteractionModel -> texto .iom
"""
from typing import List, Optional

from src.diagram_model.model import (
    InteractionModel, IodGraph, NodeKind, SdFragment, SdGraph, SdItem, SdMessage, TdGraph, TimeBounds,
)

INDENT = "  "


def quote(value: str) -> str:
    return '"' + value.replace('\\', '\\\\').replace('"', '\\"') + '"'


def _bounds(bounds: TimeBounds) -> str:
    return f"[{bounds.lo},{bounds.hi}]"


def _iod_lines(iod: IodGraph) -> List[str]:
    lines = [f"{INDENT}iod {iod.id} {{"]
    for node in iod.nodes:
        if node.kind is NodeKind.INTERACTION:
            lines.append(f"{INDENT * 2}interaction {node.id} ref {node.ref.kind.value} {node.ref.target};")
        else:
            lines.append(f"{INDENT * 2}{node.kind.value} {node.id};")
    for edge in iod.edges:
        guard = f" guard {quote(edge.guard)}" if edge.guard is not None else ""
        lines.append(f"{INDENT * 2}edge {edge.source} -> {edge.target}{guard};")
    lines.append(f"{INDENT}}}")
    return lines


def _endpoint(lifeline: Optional[str]) -> str:
    return "*" if lifeline is None else lifeline


def _sd_item_lines(item: SdItem, depth: int) -> List[str]:
    pad = INDENT * depth
    if isinstance(item, SdMessage):
        return [f"{pad}msg {item.name} from {_endpoint(item.sender)} to {_endpoint(item.receiver)} {item.kind.value};"]
    joiner = {"alt": "else", "par": "and"}.get(item.kind.value, "")
    lines: List[str] = []
    for index, operand in enumerate(item.operands):
        head = item.kind.value if index == 0 else f"}} {joiner}"
        guard = f" {quote(operand.guard)}" if operand.guard is not None else ""
        lines.append(f"{pad}{head}{guard} {{")
        for inner in operand.items:
            lines.extend(_sd_item_lines(inner, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def _sd_lines(sd: SdGraph) -> List[str]:
    lines = [f"{INDENT}sd {sd.id} {{"]
    lines.extend(f"{INDENT * 2}lifeline {lf};" for lf in sd.lifelines)
    for item in sd.items:
        lines.extend(_sd_item_lines(item, 2))
    lines.append(f"{INDENT}}}")
    return lines


def _td_lines(td: TdGraph) -> List[str]:
    lines = [f"{INDENT}td {td.id} {{"]
    for lf in td.lifelines:
        lines.append(f"{INDENT * 2}lifeline {lf.name} states {', '.join(lf.states)};")
    for seg in td.segments:
        dur = f" dur {_bounds(seg.duration)}" if seg.duration is not None else ""
        lines.append(f"{INDENT * 2}segment {seg.lifeline} {seg.state}{dur};")
    for t in td.transitions_at:
        time = f" time {_bounds(t.time_constraint)}" if t.time_constraint is not None else ""
        event = f" on {t.event}" if t.event is not None else ""
        lines.append(f"{INDENT * 2}at {t.lifeline} {t.from_state} -> {t.to_state}{time}{event};")
    for msg in td.messages:
        lines.append(f"{INDENT * 2}msg {msg.name} from {msg.sender}@{msg.send_point} "
                     f"to {msg.receiver}@{msg.recv_point};")
    lines.append(f"{INDENT}}}")
    return lines


def serialize(model: InteractionModel) -> str:
    """
    Gera o texto canônico de um modelo

    Args:
        model: Modelo válido

    Returns:
        Texto .iom determinístico (IODs, depois SDs, depois TDs)
    """
    if not model.diagrams:
        return f"model {quote(model.name)} {{}}\n"
    lines = [f"model {quote(model.name)} {{"]
    for iod in model.iods:
        lines.extend(_iod_lines(iod))
    for sd in model.sds:
        lines.extend(_sd_lines(sd))
    for td in model.tds:
        lines.extend(_td_lines(td))
    lines.append("}")
    return "\n".join(lines) + "\n"
