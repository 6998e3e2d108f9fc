"""
Tabelas de texto: vereditos, trilha de regras e relatório de validação
"""
from src.analyzer.properties import AnalysisReport
from src.diagram_model.validator import ValidationReport
from src.exporters.template_engine import get_engine
from src.hcpn_core.net import HcpnModel
from src.hcpn_core.token_game import format_binding
from src.transformer.rule_trace import RuleTrace


def report_to_text(report: AnalysisReport) -> str:
    properties = []
    for p in report.properties:
        witness = None
        if p.witness is not None:
            witness = {
                "steps": [{"transition": t, "binding": format_binding(b)} for t, b in p.witness.steps],
                "marking": str(p.witness.marking),
            }
        properties.append({"name": p.name, "verdict": p.verdict, "details": list(p.details), "witness": witness})
    statistics = {
        "nodes": report.statistics.get("nodes", 0),
        "edges": report.statistics.get("edges", 0),
        "truncated": report.statistics.get("truncated", False),
        "truncation_reason": report.statistics.get("truncation_reason"),
    }
    return get_engine().render_template("report.txt.j2", {"properties": properties, "statistics": statistics})


def trace_to_text(trace: RuleTrace) -> str:
    return get_engine().render_template("trace.txt.j2", {"entries": trace.entries})


def validation_to_text(report: ValidationReport) -> str:
    context = {
        "violations": report.violations,
        "errors": len(report.errors),
        "warnings": len(report.warnings),
    }
    return get_engine().render_template("validation.txt.j2", context)


def pages_to_text(hcpn: HcpnModel) -> str:
    """Resumo por página: tipo de diagrama de origem, nível e contagens"""
    pages = []
    for page in hcpn.pages:
        pages.append({
            "id": page.id,
            "kind": page.source_kind,
            "level": page.level,
            "places": len(hcpn.places_of(page.id)),
            "transitions": len(hcpn.transitions_of(page.id)),
            "arcs": len(hcpn.arcs_of(page.id)),
        })
    return get_engine().render_template("pages.txt.j2", {"name": hcpn.name, "prime": hcpn.prime_page,
                                                         "pages": pages})
