"""
SD -> página HCPN

Cada lifeline vira uma cadeia de lugares alternados com transições de evento,
na ordem dos seus pontos. Mensagens ligam a transição de envio à de recepção
por um lugar de mensagem. Fragmentos sincronizam as lifelines que cobrem.
"""
from typing import TYPE_CHECKING, Dict, Optional, Set, Tuple

from src.diagram_model.model import (
    FragmentKind, MessageKind, SdFragment, SdGraph, SdItem, SdMessage, fragment_lifelines,
)
from src.hcpn_core.net import Guard, TransitionRole
from src.logger import debug
from src.transformer.builder import NetBuilder, RuleScope

if TYPE_CHECKING:
    from src.transformer.transformer import TransformContext

Chains = Dict[str, str]


def replied_sync_messages(sd: SdGraph) -> Set[Tuple[str, int]]:
    """Mensagens síncronas com `reply` posterior do receptor ao emissor, por (emissor, ponto)"""
    messages = sd.messages
    replied = set()
    for index, msg in enumerate(messages):
        if msg.kind is not MessageKind.SYNC:
            continue
        if any(m.kind is MessageKind.REPLY and m.sender == msg.receiver and m.receiver == msg.sender
               for m in messages[index + 1:]):
            replied.add((msg.sender, msg.send_point))
    return replied


def _negate(guard: Optional[str]) -> Optional[Guard]:
    return Guard(f"not {guard}") if guard else None


class _SdEmitter:
    def __init__(self, builder: NetBuilder, sd: SdGraph, page_id: str):
        self.b = builder
        self.sd = sd
        self.page = page_id
        self.replied = replied_sync_messages(sd)
        self.fragments = 0

    def items(self, items: Tuple[SdItem, ...], cur: Chains) -> None:
        for item in items:
            if isinstance(item, SdMessage):
                self.message(item, cur)
            else:
                self.fragment(item, cur)

    def _step(self, scope: RuleScope, transition: str, lifeline: str, entity: str, cur: Chains) -> None:
        """Avança a cadeia da lifeline: cur -> transição -> novo lugar"""
        scope.arc(cur[lifeline], transition)
        nxt = scope.place(self.page, entity)
        scope.arc(transition, nxt)
        cur[lifeline] = nxt

    def message(self, msg: SdMessage, cur: Chains) -> None:
        source = f"{self.sd.id}:{msg.name}"
        s = self.b.scope("Φ.msg", source, msg.name)
        send = s.transition(self.page, f"{msg.name}.send", label=msg.name)
        carrier = s.place(self.page, msg.name, label=msg.name)
        s.arc(send, carrier)
        self._step(s, send, msg.sender, f"{msg.sender}.{msg.send_point}", cur)

        recv = s.transition(self.page, f"{msg.name}.recv", label=msg.name)
        s.arc(carrier, recv)
        self._step(s, recv, msg.receiver, f"{msg.receiver}.{msg.recv_point}", cur)

        if msg.kind is MessageKind.SYNC and (msg.sender, msg.send_point) not in self.replied:
            y = self.b.scope("Φ.sync", source, msg.name)
            ack = y.place(self.page, f"{msg.name}.ack", label=msg.name)
            y.arc(recv, ack)
            wait = y.transition(self.page, f"{msg.name}.await", label=msg.name)
            y.arc(ack, wait)
            self._step(y, wait, msg.sender, f"{msg.sender}.{msg.send_point}.ack", cur)

    def fragment(self, fragment: SdFragment, cur: Chains) -> None:
        self.fragments += 1
        name = f"{fragment.kind.value}{self.fragments}"
        scope = self.b.scope(f"Φ.{fragment.kind.value}", f"{self.sd.id}:{name}", name)
        covered = [lf for lf in fragment_lifelines(fragment) if lf in cur] or list(self.sd.lifelines)
        if not covered:
            return
        if fragment.kind in (FragmentKind.ALT, FragmentKind.OPT):
            self._choice(fragment, name, scope, covered, cur)
        elif fragment.kind is FragmentKind.PAR:
            self._parallel(fragment, name, scope, covered, cur)
        else:
            self._loop(fragment, name, scope, covered, cur)

    def _collect(self, scope: RuleScope, entity: str, covered, cur: Chains) -> str:
        t = scope.transition(self.page, entity)
        for lf in covered:
            scope.arc(cur[lf], t)
        return t

    def _spread(self, scope: RuleScope, transition: str, prefix: str, covered, cur: Chains) -> Chains:
        local = dict(cur)
        for lf in covered:
            p = scope.place(self.page, f"{prefix}.{lf}")
            scope.arc(transition, p)
            local[lf] = p
        return local

    def _choice(self, fragment, name, scope, covered, cur: Chains) -> None:
        enter = self._collect(scope, f"{name}.enter", covered, cur)
        decision = scope.place(self.page, f"{name}.decision", label="decision")
        scope.arc(enter, decision)
        merge = scope.place(self.page, f"{name}.merge", label="merge")
        for i, operand in enumerate(fragment.operands, 1):
            guard = Guard(operand.guard) if operand.guard is not None else None
            branch = scope.transition(self.page, f"{name}.branch{i}", guard=guard, label=operand.guard or "")
            scope.arc(decision, branch)
            local = self._spread(scope, branch, f"{name}.{i}", covered, cur)
            self.items(operand.items, local)
            end = self._collect(scope, f"{name}.end{i}", covered, local)
            scope.arc(end, merge)
        if fragment.kind is FragmentKind.OPT:
            skip = scope.transition(self.page, f"{name}.skip", guard=_negate(fragment.operands[0].guard))
            scope.arc(decision, skip)
            scope.arc(skip, merge)
        leave = scope.transition(self.page, f"{name}.leave")
        scope.arc(merge, leave)
        cur.update(self._spread(scope, leave, f"{name}.after", covered, cur))

    def _parallel(self, fragment, name, scope, covered, cur: Chains) -> None:
        fork = self._collect(scope, f"{name}.fork", covered, cur)
        branches = []
        for i, operand in enumerate(fragment.operands, 1):
            local = self._spread(scope, fork, f"{name}.{i}", covered, cur)
            self.items(operand.items, local)
            branches.append(local)
        join = scope.transition(self.page, f"{name}.join")
        for local in branches:
            for lf in covered:
                scope.arc(local[lf], join)
        cur.update(self._spread(scope, join, f"{name}.after", covered, cur))

    def _loop(self, fragment, name, scope, covered, cur: Chains) -> None:
        operand = fragment.operands[0]
        enter = self._collect(scope, f"{name}.enter", covered, cur)
        head = scope.place(self.page, f"{name}.head", label="loop")
        scope.arc(enter, head)
        guard = Guard(operand.guard) if operand.guard is not None else None
        body = scope.transition(self.page, f"{name}.body", guard=guard, label=operand.guard or "")
        scope.arc(head, body)
        local = self._spread(scope, body, f"{name}.body", covered, cur)
        self.items(operand.items, local)
        back = self._collect(scope, f"{name}.back", covered, local)
        scope.arc(back, head)
        leave = scope.transition(self.page, f"{name}.exit", guard=_negate(operand.guard))
        scope.arc(head, leave)
        cur.update(self._spread(scope, leave, f"{name}.after", covered, cur))


def map_sd(sd: SdGraph, ctx: "TransformContext", page_id: str, parent: str, level: int) -> str:
    """
    Gera a página de um SD com In-transition, Out-transition e uma cadeia por lifeline

    Returns:
        Identificador da página criada
    """
    b = ctx.builder
    page_scope = b.scope("Φ.page", sd.id)
    page_scope.page(page_id, parent, sd.id, "sd", level)
    entry = page_scope.transition(page_id, "in", role=TransitionRole.IN)
    exit_ = page_scope.transition(page_id, "out", role=TransitionRole.OUT)

    if not sd.lifelines:
        idle = page_scope.place(page_id, "idle")
        page_scope.arc(entry, idle)
        page_scope.arc(idle, exit_)
        return page_id

    cur: Chains = {}
    for lf in sd.lifelines:
        s = b.scope("T1.8", f"{sd.id}:{lf}")
        cur[lf] = s.place(page_id, f"{lf}.entry", label=lf)
        s.arc(entry, cur[lf])

    _SdEmitter(b, sd, page_id).items(sd.items, cur)

    # Saída espelha a entrada: as cadeias convergem num lugar de conexão da Out-transition
    exit_scope = b.scope("T1.9", sd.id, "exit")
    leave = exit_scope.transition(page_id, "leave")
    done = exit_scope.place(page_id, "exit")
    exit_scope.arc(leave, done)
    exit_scope.arc(done, exit_)
    for lf in sd.lifelines:
        b.scope("T1.9", f"{sd.id}:{lf}").arc(cur[lf], leave)
    debug(f"Página {page_id} gerada a partir do SD {sd.id}")
    return page_id
