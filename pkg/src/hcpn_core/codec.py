"""
Conversão de HcpnModel / FlatNet para dicionários JSON e de volta
"""
from typing import Any, Dict, Optional

from config.settings import SCHEMA_VERSIONS
from src.hcpn_core.net import (
    Arc, ColorSet, FlatNet, Guard, HcpnError, HcpnModel, Page, Place, SocketBinding,
    Transition, TransitionKind, TransitionRole,
)


class CodecError(HcpnError):
    code = "invalid-document"


def _guard_to_dict(guard: Optional[Guard]) -> Optional[Dict[str, Any]]:
    if guard is None:
        return None
    return {"label": guard.label, "window": list(guard.window) if guard.window else None}


def _guard_from_dict(data: Optional[Dict[str, Any]]) -> Optional[Guard]:
    if data is None:
        return None
    window = tuple(data["window"]) if data.get("window") else None
    return Guard(data.get("label"), window)


def _elements_to_dict(net) -> Dict[str, Any]:
    return {
        "color_sets": [{"name": c.name, "colors": list(c.colors), "timed": c.timed} for c in net.color_sets],
        "places": [{"id": p.id, "page": p.page, "color_set": p.color_set, "label": p.label} for p in net.places],
        "transitions": [
            {
                "id": t.id,
                "page": t.page,
                "kind": t.kind.value,
                "role": t.role.value,
                "guard": _guard_to_dict(t.guard),
                "delay": list(t.delay) if t.delay else None,
                "label": t.label,
            }
            for t in net.transitions
        ],
        "arcs": [{"id": a.id, "source": a.source, "target": a.target, "expression": list(a.expression)}
                 for a in net.arcs],
        "initial_marking": {p: list(colors) for p, colors in net.initial_marking.items()},
        "final_places": list(net.final_places),
    }


def _elements_from_dict(data: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "color_sets": tuple(ColorSet(c["name"], tuple(c["colors"]), bool(c.get("timed", False)))
                            for c in data["color_sets"]),
        "places": tuple(Place(p["id"], p["page"], p.get("color_set", "CTRL"), p.get("label", ""))
                        for p in data["places"]),
        "transitions": tuple(
            Transition(
                id=t["id"],
                page=t["page"],
                kind=TransitionKind(t.get("kind", "ordinary")),
                role=TransitionRole(t.get("role", "none")),
                guard=_guard_from_dict(t.get("guard")),
                delay=tuple(t["delay"]) if t.get("delay") else None,
                label=t.get("label", ""),
            )
            for t in data["transitions"]
        ),
        "arcs": tuple(Arc(a["id"], a["source"], a["target"], tuple(a.get("expression", ["unit"])))
                      for a in data["arcs"]),
        "initial_marking": {p: tuple(c) for p, c in data.get("initial_marking", {}).items()},
        "final_places": tuple(data.get("final_places", ())),
    }


def hcpn_to_dict(h: HcpnModel) -> Dict[str, Any]:
    document = {
        "schema_version": SCHEMA_VERSIONS["hcpn"],
        "kind": "hcpn",
        "name": h.name,
        "prime_page": h.prime_page,
        "pages": [{"id": p.id, "parent": p.parent, "source": p.source,
                   "source_kind": p.source_kind, "level": p.level} for p in h.pages],
        "page_assignment": dict(h.page_assignment),
        "socket_bindings": {t: {"inputs": list(b.inputs), "outputs": list(b.outputs)}
                            for t, b in h.socket_bindings.items()},
    }
    document.update(_elements_to_dict(h))
    return document


def hcpn_from_dict(data: Dict[str, Any]) -> HcpnModel:
    """
    Reconstrói um HcpnModel a partir de um documento `.hcpn.json`

    Raises:
        CodecError: documento de outro tipo ou campos ausentes
    """
    if data.get("kind") != "hcpn":
        raise CodecError(f"documento do tipo {data.get('kind')!r}, esperado 'hcpn'")
    try:
        elements = _elements_from_dict(data)
        return HcpnModel(
            name=data["name"],
            prime_page=data["prime_page"],
            pages=tuple(Page(p["id"], p.get("parent"), p["source"], p["source_kind"], int(p["level"]))
                        for p in data["pages"]),
            page_assignment=dict(data.get("page_assignment", {})),
            socket_bindings={t: SocketBinding(tuple(b["inputs"]), tuple(b["outputs"]))
                             for t, b in data.get("socket_bindings", {}).items()},
            **elements,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CodecError(f"documento HCPN inválido: {e}") from e


def flat_to_dict(net: FlatNet) -> Dict[str, Any]:
    document = {
        "schema_version": SCHEMA_VERSIONS["flat"],
        "kind": "flat",
        "name": net.name,
        "prime_places": list(net.prime_places),
    }
    document.update(_elements_to_dict(net))
    return document


def flat_from_dict(data: Dict[str, Any]) -> FlatNet:
    if data.get("kind") != "flat":
        raise CodecError(f"documento do tipo {data.get('kind')!r}, esperado 'flat'")
    try:
        return FlatNet(name=data["name"], prime_places=tuple(data.get("prime_places", ())),
                       **_elements_from_dict(data))
    except (KeyError, TypeError, ValueError) as e:
        raise CodecError(f"documento de rede achatada inválido: {e}") from e
