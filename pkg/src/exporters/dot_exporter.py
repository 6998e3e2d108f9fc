"""
Exportação GraphViz DOT de HCPN, rede achatada e grafo de alcançabilidade
"""
from typing import Any, Dict, List, Union

from config.settings import EXPORT_CONFIG
from src.analyzer.state_space import ReachabilityGraph
from src.exporters.template_engine import get_engine
from src.hcpn_core.net import UNIT, Arc, FlatNet, HcpnModel
from src.hcpn_core.token_game import format_binding


def _short(element_id: str, page: str) -> str:
    """Rótulo curto: id sem o caminho da página"""
    prefix = page + "/"
    return element_id[len(prefix):] if element_id.startswith(prefix) else element_id


def _arc_label(arc: Arc) -> str:
    return "" if tuple(arc.expression) == (UNIT,) else " + ".join(arc.expression)


def _transition_label(t, page: str) -> str:
    label = t.label or _short(t.id, page)
    if t.guard is not None:
        label += f"\n[{t.guard}]"
    if t.delay is not None:
        label += f"\n@[{t.delay[0]},{t.delay[1]}]"
    return label


def net_to_dot(net: Union[HcpnModel, FlatNet]) -> str:
    """
    Renderiza a rede com um cluster por página

    Lugares são elipses, transições caixas e transições de substituição caixas duplas.
    """
    if isinstance(net, HcpnModel):
        page_ids = [p.id for p in net.pages]
    else:
        page_ids = list(dict.fromkeys([p.page for p in net.places] + [t.page for t in net.transitions]))
    pages: List[Dict[str, Any]] = []
    for page in page_ids:
        places = [p for p in net.places if p.page == page]
        transitions = [t for t in net.transitions if t.page == page]
        pages.append({
            "label": page,
            "places": [{"id": p.id, "label": p.label or _short(p.id, page),
                        "marked": p.id in net.initial_marking} for p in places],
            "transitions": [{"id": t.id, "label": _transition_label(t, page),
                             "substitution": t.is_substitution} for t in transitions],
        })
    arcs = [{"source": a.source, "target": a.target, "label": _arc_label(a)} for a in net.arcs]
    return get_engine().render_template("net.dot.j2", {"name": net.name or "net", "pages": pages, "arcs": arcs})


def graph_to_dot(g: ReachabilityGraph, limit: int = EXPORT_CONFIG["dot_node_limit"]) -> str:
    """Renderiza o grafo de alcançabilidade, limitado aos primeiros `limit` nós (ordem BFS)"""
    shown = min(limit, g.node_count)
    nodes = [{"id": n, "label": f"M{n}\n{g.marking(n)}", "root": n == g.root} for n in range(shown)]
    edges = [{"source": u, "target": v, "label": t if not b else f"{t} [{format_binding(b)}]"}
             for u, t, b, v in g.edges() if u < shown and v < shown]
    context = {"nodes": nodes, "edges": edges, "omitted": g.node_count - shown}
    return get_engine().render_template("graph.dot.j2", context)
