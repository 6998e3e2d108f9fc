"""
Simulação semeada sobre a rede achatada
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from src.hcpn_core.marking import Marking
from src.hcpn_core.net import FlatNet, TimeDeadlockError
from src.hcpn_core.token_game import (
    DELAY, Binding, SimulationContext, advance_time, enabled, fire, format_binding,
)
from src.logger import debug

TERMINATED = "terminated"
DEADLOCK = "deadlock"
TIME_DEADLOCK = "time-deadlock"
STEP_LIMIT = "step-limit"


def is_final(net: FlatNet, m: Marking) -> bool:
    """Término próprio: marcação não vazia com fichas apenas em lugares finais do nível 0"""
    finals = set(net.final_places)
    return not m.is_empty and all(p in finals for p in m.marked_places)


def marking_delta(before: Marking, after: Marking) -> str:
    old, new = before.as_dict(), after.as_dict()
    parts: List[str] = []
    for place in sorted(set(old) | set(new)):
        removed = list(old.get(place, ()))
        added = list(new.get(place, ()))
        for token in list(removed):
            if token in added:
                added.remove(token)
                removed.remove(token)
        parts.extend(f"-{place}({t})" for t in removed)
        parts.extend(f"+{place}({t})" for t in added)
    return " ".join(parts)


@dataclass(frozen=True)
class FiringRecord:
    clock: int
    transition: str
    binding: Binding
    delta: str

    def to_line(self) -> str:
        return f"{self.clock} | {self.transition} | {format_binding(self.binding)} | {self.delta}"


@dataclass
class SimulationLog:
    seed: int
    records: List[FiringRecord] = field(default_factory=list)
    status: str = STEP_LIMIT
    final_marking: Optional[Marking] = None

    def lines(self) -> List[str]:
        body = [r.to_line() for r in self.records]
        body.append(f"# {self.status} | {self.final_marking}")
        return body

    def to_text(self) -> str:
        return "".join(line + "\n" for line in self.lines())


class Simulator:
    """Executa a rede escolhendo uniformemente entre os pares habilitados"""

    def __init__(self, net: FlatNet, ctx: SimulationContext):
        self.net = net
        self.ctx = ctx

    def _choose(self, m: Marking) -> Optional[Tuple[str, Binding]]:
        candidates = sorted(enabled(self.net, m, timed=self.ctx.timed))
        if not candidates:
            return None
        transition_id, binding = self.ctx.rng.choice(candidates)
        delay = self.net.transition(transition_id).delay
        if self.ctx.timed and delay is not None:
            binding = ((DELAY, self.ctx.draw_delay(*delay)),)
        return transition_id, binding

    def run(self, m0: Marking, steps: int) -> SimulationLog:
        """
        Executa até `steps` disparos

        Args:
            m0: Marcação inicial
            steps: Número máximo de disparos

        Returns:
            Log com os disparos e o motivo da parada
        """
        log = SimulationLog(self.ctx.seed)
        m = m0
        while len(log.records) < steps:
            choice = self._choose(m)
            if choice is None:
                if is_final(self.net, m):
                    log.status = TERMINATED
                    break
                if not (self.ctx.timed and self.net.is_timed):
                    log.status = DEADLOCK
                    break
                try:
                    m = advance_time(self.net, m)
                except TimeDeadlockError:
                    log.status = TIME_DEADLOCK
                    break
                debug(f"Relógio avançado para {m.clock}")
                continue
            transition_id, binding = choice
            after = fire(self.net, m, transition_id, binding, self.ctx, timed=self.ctx.timed)
            log.records.append(FiringRecord(m.clock, transition_id, binding, marking_delta(m, after)))
            m = after
        else:
            if not enabled(self.net, m, timed=self.ctx.timed) and is_final(self.net, m):
                log.status = TERMINATED
        log.final_marking = m
        return log
