"""
Parser da linguagem .iom: texto -> InteractionModel + diagnósticos
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from lark import Lark, Token, Transformer, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from src.diagram_model.model import (
    DiagramKind, DiagramRef, FragmentKind, InteractionModel, IodEdge, IodGraph, IodNode,
    MessageKind, NodeKind, SdFragment, SdGraph, SdMessage, SdOperand, TdGraph, TdLifeline,
    TdMessage, TdSegment, TdTransition, TimeBounds, assign_points, number_td_points,
)
from src.model_parser.diagnostics import ERROR, ParseDiagnostic, ParseError, SourceSpan
from src.model_parser.grammar import IOM_GRAMMAR
from src.logger import debug

MAX_SYNTAX_ERRORS = 50
_ESCAPE = re.compile(r'\\(.)')


@lru_cache(maxsize=1)
def _get_lark() -> Lark:
    return Lark(IOM_GRAMMAR, parser="lalr", lexer="contextual", propagate_positions=True)


def unquote(token: str) -> str:
    return _ESCAPE.sub(r'\1', token[1:-1])


@dataclass
class ParseResult:
    model: Optional[InteractionModel]
    diagnostics: Tuple[ParseDiagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return self.model is not None

    def unwrap(self) -> InteractionModel:
        if self.model is None:
            raise ParseError(self.diagnostics)
        return self.model


# --------------------------------------------------------------------------
# Árvore lark -> registros intermediários (ainda com tokens)
# --------------------------------------------------------------------------

@dataclass
class _Raw:
    kind: str
    token: Token
    parts: List[Any] = field(default_factory=list)


class _TreeToRaw(Transformer):
    """Converte a árvore lark em registros simples, preservando os tokens"""

    def model(self, children):
        return _Raw("model", children[0], children[1:])

    def iod(self, children):
        return _Raw("iod", children[0], children[1:])

    def initial_decl(self, children):
        return _Raw("node", children[0], [NodeKind.INITIAL])

    def final_decl(self, children):
        return _Raw("node", children[0], [NodeKind.FINAL])

    def interaction_decl(self, children):
        node, kind, target = children
        return _Raw("node", node, [NodeKind.INTERACTION, DiagramKind(str(kind)), target])

    def bar_decl(self, children):
        kind, node = children
        return _Raw("node", node, [NodeKind(str(kind))])

    def diamond_decl(self, children):
        kind, node = children
        return _Raw("node", node, [NodeKind(str(kind))])

    def edge_decl(self, children):
        guard = children[2] if len(children) > 2 else None
        return _Raw("edge", children[0], [children[1], guard])

    def guard_clause(self, children):
        return children[0]

    def sd(self, children):
        return _Raw("sd", children[0], children[1:])

    def lifeline_decl(self, children):
        return _Raw("lifeline", children[0])

    def msg_decl(self, children):
        name, sender, receiver, kind = children
        return _Raw("msg", name, [sender, receiver, MessageKind(str(kind))])

    def endpoint(self, children):
        return children[0]

    def operand(self, children):
        if children and isinstance(children[0], Token) and children[0].type == "STRING":
            return (children[0], children[1:])
        return (None, children)

    def alt_frag(self, children):
        return _Raw("fragment", None, [FragmentKind.ALT, children])

    def opt_frag(self, children):
        return _Raw("fragment", None, [FragmentKind.OPT, children])

    def loop_frag(self, children):
        return _Raw("fragment", None, [FragmentKind.LOOP, children])

    def par_frag(self, children):
        return _Raw("fragment", None, [FragmentKind.PAR, children])

    def td(self, children):
        return _Raw("td", children[0], children[1:])

    def td_lifeline_decl(self, children):
        return _Raw("td_lifeline", children[0], children[1:])

    def segment_decl(self, children):
        duration = children[2] if len(children) > 2 else None
        return _Raw("segment", children[0], [children[1], duration])

    def dur_clause(self, children):
        return children[0]

    def at_decl(self, children):
        lifeline, from_state, to_state = children[:3]
        time_constraint = event = None
        for extra in children[3:]:
            if extra[0] == "time":
                time_constraint = extra[1]
            else:
                event = extra[1]
        return _Raw("at", lifeline, [from_state, to_state, time_constraint, event])

    def time_clause(self, children):
        return ("time", children[0])

    def on_clause(self, children):
        return ("on", children[0])

    def td_msg_decl(self, children):
        name, sender, send_point, receiver, recv_point = children
        return _Raw("td_msg", name, [sender, int(send_point), receiver, int(recv_point)])

    def bounds(self, children):
        lo, hi = children
        return (TimeBounds(int(lo), int(hi)), lo)


# --------------------------------------------------------------------------
# Resolução: registros -> InteractionModel, com diagnósticos semânticos
# --------------------------------------------------------------------------

class _Resolver:
    def __init__(self, filename: str):
        self.filename = filename
        self.diagnostics: List[ParseDiagnostic] = []

    def span(self, token: Optional[Token]) -> Optional[SourceSpan]:
        if token is None or getattr(token, "line", None) is None:
            return None
        return SourceSpan(self.filename, token.line, token.column, len(str(token)))

    def report(self, code: str, token: Optional[Token], message: str):
        span = self.span(token) or SourceSpan(self.filename, 1, 1, 0)
        self.diagnostics.append(ParseDiagnostic(ERROR, span, message, code))

    def resolve(self, raw: _Raw) -> InteractionModel:
        iods, sds, tds = [], [], []
        declared: Dict[str, Token] = {}
        for diagram in raw.parts:
            name = str(diagram.token)
            if name in declared:
                self.report("duplicate-identifier", diagram.token, f"diagrama '{name}' já declarado")
                continue
            declared[name] = diagram.token
            if diagram.kind == "iod":
                iods.append(self.resolve_iod(diagram))
            elif diagram.kind == "sd":
                sds.append(self.resolve_sd(diagram))
            else:
                tds.append(self.resolve_td(diagram))

        interaction_owner: Dict[str, str] = {}
        for iod, raw_iod in zip(iods, [d for d in raw.parts if d.kind == "iod"]):
            for stmt in raw_iod.parts:
                if stmt.kind != "node" or stmt.parts[0] is not NodeKind.INTERACTION:
                    continue
                target = stmt.parts[2]
                if str(target) not in declared:
                    self.report("dangling-diagram-ref", target, f"diagrama '{target}' não declarado")
                node = str(stmt.token)
                if node in interaction_owner and interaction_owner[node] != iod.id:
                    self.report("duplicate-identifier", stmt.token,
                                f"nó de interação '{node}' já declarado em '{interaction_owner[node]}'")
                interaction_owner.setdefault(node, iod.id)

        return InteractionModel(unquote(str(raw.token)), tuple(iods), tuple(sds), tuple(tds), self.span(raw.token))

    def resolve_iod(self, raw: _Raw) -> IodGraph:
        nodes: List[IodNode] = []
        edges: List[IodEdge] = []
        seen = set()
        for stmt in raw.parts:
            if stmt.kind != "node":
                continue
            node_id = str(stmt.token)
            if node_id in seen:
                self.report("duplicate-identifier", stmt.token, f"nó '{node_id}' já declarado em '{raw.token}'")
                continue
            seen.add(node_id)
            kind = stmt.parts[0]
            ref = DiagramRef(stmt.parts[1], str(stmt.parts[2])) if kind is NodeKind.INTERACTION else None
            nodes.append(IodNode(node_id, kind, ref, self.span(stmt.token)))
        for stmt in raw.parts:
            if stmt.kind != "edge":
                continue
            target, guard = stmt.parts
            ok = True
            for endpoint in (stmt.token, target):
                if str(endpoint) not in seen:
                    self.report("dangling-node-ref", endpoint, f"nó '{endpoint}' não declarado em '{raw.token}'")
                    ok = False
            if ok:
                edges.append(IodEdge(str(stmt.token), str(target), unquote(str(guard)) if guard else None,
                                     self.span(stmt.token)))
        return IodGraph(str(raw.token), tuple(nodes), tuple(edges), self.span(raw.token))

    def resolve_sd(self, raw: _Raw) -> SdGraph:
        lifelines: List[str] = []
        self._collect_lifelines(raw.parts, lifelines, raw.token)
        items = self._sd_items(raw.parts, set(lifelines), raw.token)
        return SdGraph(str(raw.token), tuple(lifelines), assign_points(tuple(items)), self.span(raw.token))

    def _collect_lifelines(self, stmts, lifelines: List[str], diagram: Token):
        for stmt in stmts:
            if stmt.kind == "lifeline":
                if str(stmt.token) in lifelines:
                    self.report("duplicate-identifier", stmt.token, f"lifeline '{stmt.token}' já declarada")
                else:
                    lifelines.append(str(stmt.token))
            elif stmt.kind == "fragment":
                for _, operand_stmts in stmt.parts[1]:
                    self._collect_lifelines(operand_stmts, lifelines, diagram)

    def _sd_items(self, stmts, lifelines, diagram: Token) -> List[Union[SdMessage, SdFragment]]:
        items: List[Union[SdMessage, SdFragment]] = []
        for stmt in stmts:
            if stmt.kind == "msg":
                sender, receiver, kind = stmt.parts
                ends = []
                for endpoint in (sender, receiver):
                    if endpoint.type == "STAR":
                        ends.append(None)
                        continue
                    if str(endpoint) not in lifelines:
                        self.report("dangling-lifeline-ref", endpoint,
                                    f"lifeline '{endpoint}' não declarada em '{diagram}'")
                    ends.append(str(endpoint))
                items.append(SdMessage(str(stmt.token), kind, ends[0], ends[1], span=self.span(stmt.token)))
            elif stmt.kind == "fragment":
                kind, operands = stmt.parts
                built = tuple(
                    SdOperand(unquote(str(guard)) if guard is not None else None,
                              tuple(self._sd_items(operand_stmts, lifelines, diagram)))
                    for guard, operand_stmts in operands
                )
                first_guard = operands[0][0] if operands else None
                items.append(SdFragment(kind, built, self.span(first_guard)))
        return items

    def resolve_td(self, raw: _Raw) -> TdGraph:
        lifelines: List[TdLifeline] = []
        names = set()
        for stmt in raw.parts:
            if stmt.kind == "td_lifeline":
                if str(stmt.token) in names:
                    self.report("duplicate-identifier", stmt.token, f"lifeline '{stmt.token}' já declarada")
                    continue
                names.add(str(stmt.token))
                lifelines.append(TdLifeline(str(stmt.token), tuple(str(s) for s in stmt.parts),
                                            self.span(stmt.token)))

        def known(token: Token) -> bool:
            if str(token) not in names:
                self.report("dangling-lifeline-ref", token, f"lifeline '{token}' não declarada em '{raw.token}'")
                return False
            return True

        segments, transitions, messages = [], [], []
        for stmt in raw.parts:
            if stmt.kind == "segment" and known(stmt.token):
                state, duration = stmt.parts
                segments.append(TdSegment(str(stmt.token), str(state), duration[0] if duration else None,
                                          self.span(stmt.token)))
            elif stmt.kind == "at" and known(stmt.token):
                from_state, to_state, time_constraint, event = stmt.parts
                transitions.append(TdTransition(str(stmt.token), str(from_state), str(to_state),
                                                time_constraint[0] if time_constraint else None,
                                                str(event) if event is not None else None,
                                                span=self.span(stmt.token)))
        transitions = list(number_td_points(tuple(transitions)))
        points = {(t.lifeline, t.point) for t in transitions}
        for stmt in raw.parts:
            if stmt.kind != "td_msg":
                continue
            sender, send_point, receiver, recv_point = stmt.parts
            if not (known(sender) and known(receiver)):
                continue
            for lf, point, tok in ((sender, send_point, sender), (receiver, recv_point, receiver)):
                if (str(lf), point) not in points:
                    self.report("dangling-point-ref", tok, f"ponto {lf}@{point} não existe em '{raw.token}'")
            messages.append(TdMessage(str(stmt.token), str(sender), send_point, str(receiver), recv_point,
                                      self.span(stmt.token)))
        return TdGraph(str(raw.token), tuple(lifelines), tuple(segments), tuple(transitions), tuple(messages),
                       self.span(raw.token))


# --------------------------------------------------------------------------
# API pública
# --------------------------------------------------------------------------

def _syntax_diagnostic(e: UnexpectedInput, filename: str, text: str) -> ParseDiagnostic:
    line = getattr(e, "line", None)
    column = getattr(e, "column", None)
    if not line or line < 1 or not column or column < 1:
        line = max(1, text.count("\n") + (0 if text.endswith("\n") else 1))
        column = 1
    if isinstance(e, UnexpectedCharacters):
        char = text[e.pos_in_stream] if 0 <= e.pos_in_stream < len(text) else "?"
        return ParseDiagnostic(ERROR, SourceSpan(filename, line, column, 1),
                               f"caractere inesperado {char!r}", "lexical-error")
    if isinstance(e, UnexpectedToken) and e.token.type != "$END":
        expected = ", ".join(sorted(e.expected)[:6])
        return ParseDiagnostic(ERROR, SourceSpan(filename, line, column, len(str(e.token))),
                               f"token inesperado {str(e.token)!r}; esperado: {expected}", "syntax-error")
    return ParseDiagnostic(ERROR, SourceSpan(filename, line, column, 0),
                           "fim de arquivo inesperado", "unexpected-eof")


def parse(text: str, filename: str = "<string>") -> ParseResult:
    """
    Analisa um texto .iom

    Args:
        text: Conteúdo da fonte
        filename: Nome usado nos spans e diagnósticos

    Returns:
        ParseResult com o modelo (None se houver erros) e os diagnósticos
    """
    errors: List[UnexpectedInput] = []

    def on_error(e: UnexpectedInput) -> bool:
        errors.append(e)
        return len(errors) < MAX_SYNTAX_ERRORS

    tree: Optional[Tree] = None
    try:
        tree = _get_lark().parse(text, on_error=on_error)
    except UnexpectedInput as e:
        if not errors or errors[-1] is not e:
            errors.append(e)

    if errors:
        diagnostics: List[ParseDiagnostic] = []
        lines_seen = set()
        for e in errors:
            diag = _syntax_diagnostic(e, filename, text)
            # um diagnóstico por linha: erros em cascata da recuperação são descartados
            if diag.span.line in lines_seen:
                continue
            lines_seen.add(diag.span.line)
            diagnostics.append(diag)
        debug(f"{filename}: {len(diagnostics)} erro(s) de sintaxe")
        return ParseResult(None, tuple(diagnostics))

    raw = _TreeToRaw().transform(tree).children[0]
    resolver = _Resolver(filename)
    model = resolver.resolve(raw)
    if resolver.diagnostics:
        return ParseResult(None, tuple(resolver.diagnostics))
    return ParseResult(model, ())


def parse_file(path: Union[str, Path]) -> ParseResult:
    """Lê e analisa um arquivo .iom (UTF-8)"""
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path))
