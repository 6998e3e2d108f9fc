import json
from dataclasses import replace

import pytest

from src.analyzer.state_space import build_state_space
from src.hcpn_core.codec import CodecError, flat_from_dict, flat_to_dict, hcpn_from_dict, hcpn_to_dict
from src.hcpn_core.flattener import flatten, initial_marking
from src.hcpn_core.marking import Marking, Token
from src.hcpn_core.net import (
    FALSE_GUARD, Guard, IllTypedMarkingError, NotEnabledError, NotTimedError, PageCycleError,
    TimeDeadlockError, TransitionRole, UnboundSocketError, check_hcpn, simple_net,
)
from src.hcpn_core.simulator import (
    DEADLOCK, STEP_LIMIT, TERMINATED, TIME_DEADLOCK, Simulator, is_final,
)
from src.hcpn_core.token_game import (
    DELAY, SimulationContext, advance_time, enabled, fire, format_binding,
)


def _chain(**options):
    return simple_net(["p", "q"], ["t"], [("p", "t"), ("t", "q")], marking={"p": 1}, **options)


def _timed_chain(**options):
    return _chain(timed_places=["p", "q"], **options)


# ----------------------------------------------------------------------
# Marcações
# ----------------------------------------------------------------------

def test_marking_is_canonical():
    a = Marking.from_dict({"q": [Token("unit")], "p": [Token("b"), Token("a")], "empty": []})
    b = Marking.from_dict({"p": [Token("a"), Token("b")], "q": [Token("unit")]})
    assert a == b
    assert hash(a) == hash(b)
    assert a.marked_places == ("p", "q")
    assert a.total == 3
    assert str(a) == "{p: a b, q: unit}@0"


def test_marking_untimed_projection():
    m = Marking.from_dict({"p": [Token("unit", 4)]}, clock=2)
    assert m.untimed() == {"p": ("unit",)}
    assert m.to_dict() == {"clock": 2, "tokens": {"p": ["unit@4"]}}


# ----------------------------------------------------------------------
# Jogo de fichas sem tempo
# ----------------------------------------------------------------------

def test_enabled_and_fire():
    net = _chain()
    m0 = initial_marking(net)
    assert enabled(net, m0) == {("t", ())}
    m1 = fire(net, m0, "t")
    assert m1.untimed() == {"q": ("unit",)}
    assert m0.untimed() == {"p": ("unit",)}
    assert enabled(net, m1) == set()


@pytest.mark.parametrize("net_fixture", ["atm_flat", "sensor_flat"])
def test_enabled_agrees_with_fire_on_every_reachable_marking(request, net_fixture):
    net = request.getfixturevalue(net_fixture)
    g = build_state_space(net)
    assert not g.truncated
    reachable = g.node_set()
    for m in g.markings:
        on = enabled(net, m)
        for t in net.transitions:
            if (t.id, ()) in on:
                assert fire(net, m, t.id) in reachable
            else:
                with pytest.raises(NotEnabledError):
                    fire(net, m, t.id)


def test_fire_disabled_transition_raises():
    net = _chain()
    m1 = fire(net, initial_marking(net), "t")
    with pytest.raises(NotEnabledError) as info:
        fire(net, m1, "t")
    assert info.value.code == "not-enabled"
    with pytest.raises(NotEnabledError):
        fire(net, m1, "ghost")


def test_false_guard_is_never_enabled():
    net = _chain(guards={"t": Guard(FALSE_GUARD)})
    assert enabled(net, initial_marking(net)) == set()


def test_label_guard_is_satisfiable():
    net = _chain(guards={"t": Guard("valid")})
    assert enabled(net, initial_marking(net)) == {("t", ())}


def test_ill_typed_marking():
    net = _chain()
    with pytest.raises(IllTypedMarkingError):
        enabled(net, Marking.from_dict({"nowhere": [Token("unit")]}))
    with pytest.raises(IllTypedMarkingError):
        enabled(net, Marking.from_dict({"p": [Token("red")]}))
    with pytest.raises(IllTypedMarkingError):
        enabled(net, Marking.from_dict({"p": [Token("unit", 3)]}))


def test_guard_combination():
    assert Guard("a").combine(Guard("b")).label == "a & b"
    assert not Guard("a").combine(Guard(FALSE_GUARD)).satisfiable
    assert Guard(window=(1, 6)).combine(Guard(window=(4, 9))).window == (4, 6)
    assert not Guard(window=(1, 2)).combine(Guard(window=(4, 9))).satisfiable
    assert str(Guard("ok", (3, 5))) == "ok & 3 <= clock <= 5"


# ----------------------------------------------------------------------
# Semântica temporizada
# ----------------------------------------------------------------------

def test_delay_samples_cover_interval():
    net = _timed_chain(delays={"t": (2, 4)})
    m0 = initial_marking(net)
    ctx = SimulationContext(seed=0)
    stamps = [fire(net, m0, "t", ctx=ctx, timed=True).get("q")[0].timestamp for _ in range(1000)]
    assert all(2 <= s <= 4 for s in stamps)
    assert set(stamps) == {2, 3, 4}


def test_delay_is_reproducible_under_seed():
    net = _timed_chain(delays={"t": (2, 5)})
    m0 = initial_marking(net)
    first = fire(net, m0, "t", ctx=SimulationContext(seed=42), timed=True)
    second = fire(net, m0, "t", ctx=SimulationContext(seed=42), timed=True)
    assert first == second
    assert 2 <= first.get("q")[0].timestamp <= 5


def test_explicit_delay_binding():
    net = _timed_chain(delays={"t": (2, 4)})
    m0 = initial_marking(net)
    assert enabled(net, m0, timed=True, expand_delays=True) == {("t", ((DELAY, d),)) for d in (2, 3, 4)}
    m1 = fire(net, m0, "t", ((DELAY, 3),), timed=True)
    assert m1.get("q") == (Token("unit", 3),)
    assert format_binding(((DELAY, 3),)) == "delay=3"
    with pytest.raises(NotEnabledError):
        fire(net, m0, "t", ((DELAY, 5),), timed=True)


def test_time_window_guard():
    net = _timed_chain(guards={"t": Guard(window=(3, 5))})
    m0 = initial_marking(net)
    for clock in range(11):
        allowed = bool(enabled(net, m0.with_clock(clock), timed=True))
        assert allowed == (3 <= clock <= 5)
    assert enabled(net, m0, timed=False) == {("t", ())}
    assert advance_time(net, m0).clock == 3
    with pytest.raises(TimeDeadlockError):
        advance_time(net, m0.with_clock(6))


def test_future_tokens_wait_for_the_clock():
    net = _timed_chain()
    m = Marking.from_dict({"p": [Token("unit", 3)]})
    assert enabled(net, m, timed=True) == set()
    assert enabled(net, m) == {("t", ())}
    later = advance_time(net, m)
    assert later.clock == 3
    assert enabled(net, later, timed=True) == {("t", ())}


def test_advance_time_requires_timed_net():
    net = _chain()
    with pytest.raises(NotTimedError):
        advance_time(net, initial_marking(net))


@pytest.mark.parametrize("seed", range(20))
def test_clock_never_decreases(sensor_flat, seed):
    ctx = SimulationContext(seed)
    m = initial_marking(sensor_flat)
    for _ in range(60):
        candidates = sorted(enabled(sensor_flat, m, timed=True))
        if candidates:
            transition, binding = ctx.rng.choice(candidates)
            after = fire(sensor_flat, m, transition, binding, ctx=ctx, timed=True)
        else:
            try:
                after = advance_time(sensor_flat, m)
            except TimeDeadlockError:
                break
        assert after.clock >= m.clock
        m = after


# ----------------------------------------------------------------------
# Simulação
# ----------------------------------------------------------------------

def test_simulation_terminates_on_final_marking():
    net = _timed_chain(delays={"t": (2, 4)}, final_places=["q"])
    log = Simulator(net, SimulationContext(seed=1)).run(initial_marking(net), 10)
    assert log.status == TERMINATED
    [record] = log.records
    stamp = log.final_marking.get("q")[0].timestamp
    assert record.to_line() == f"0 | t | delay={stamp} | -p(unit@0) +q(unit@{stamp})"
    assert log.lines()[-1] == f"# terminated | {{q: unit@{stamp}}}@0"


def test_simulation_time_deadlock():
    net = _timed_chain(delays={"t": (1, 1)})
    log = Simulator(net, SimulationContext(seed=0)).run(initial_marking(net), 10)
    assert log.status == TIME_DEADLOCK


def test_simulation_untimed_deadlock_and_step_limit():
    net = _chain()
    log = Simulator(net, SimulationContext(seed=0, timed=False)).run(initial_marking(net), 10)
    assert log.status == DEADLOCK
    loop = simple_net(["p"], ["t"], [("p", "t"), ("t", "p")], marking={"p": 1})
    log = Simulator(loop, SimulationContext(seed=0, timed=False)).run(initial_marking(loop), 5)
    assert log.status == STEP_LIMIT
    assert len(log.records) == 5


def test_simulation_is_deterministic(atm_flat):
    m0 = initial_marking(atm_flat)
    for seed in range(10):
        first = Simulator(atm_flat, SimulationContext(seed)).run(m0, 50).to_text()
        second = Simulator(atm_flat, SimulationContext(seed)).run(m0, 50).to_text()
        assert first == second


def test_sensor_simulation_clock_moves_by_sampled_delay(sensor_flat):
    log = Simulator(sensor_flat, SimulationContext(seed=0)).run(initial_marking(sensor_flat), 100)
    idle_exit = next(r for r in log.records if r.binding and r.transition.endswith("Sensor@1"))
    delay = dict(idle_exit.binding)[DELAY]
    assert 2 <= delay <= 4
    assert log.status == TERMINATED


# ----------------------------------------------------------------------
# Achatamento
# ----------------------------------------------------------------------

def test_atm_hcpn_is_well_formed(atm_hcpn):
    assert check_hcpn(atm_hcpn) == []


def test_flat_place_count_is_sum_of_pages(atm_hcpn, atm_flat):
    per_page = sum(len(atm_hcpn.places_of(p.id)) for p in atm_hcpn.pages)
    assert len(atm_flat.places) == per_page == len(atm_hcpn.places)
    assert not any(t.is_substitution for t in atm_flat.transitions)
    subs = len(atm_hcpn.substitution_transitions())
    assert subs == 4
    assert len(atm_flat.transitions) == len(atm_hcpn.transitions) - subs


def test_flat_arcs_replace_socket_arcs(atm_hcpn, atm_flat):
    subs = {t.id for t in atm_hcpn.substitution_transitions()}
    assert not any(a.source in subs or a.target in subs for a in atm_flat.arcs)
    sub = "Main/T1.3/Identification"
    entry = atm_hcpn.in_transitions("Main/Identification")[0]
    redirected = [a for a in atm_flat.arcs if a.id.startswith(f"{sub}/in:")]
    assert [(a.source, a.target) for a in redirected] == [("Main/T1.4/start", entry.id)]


def test_substitution_guard_moves_to_in_transition(atm_flat):
    entry = atm_flat.transition("Main/Identification/WelcomeMessage/Φ.page/in")
    assert entry.guard.label == "valid"


def test_atm_initial_marking(atm_flat):
    m0 = initial_marking(atm_flat)
    assert m0.untimed() == {"Main/T1.4/start": ("unit",)}
    assert m0.clock == 0
    assert enabled(atm_flat, m0) == {("Main/Identification/T1.2/in", ())}
    assert atm_flat.transition("Main/Identification/T1.2/in").role is TransitionRole.IN
    assert not is_final(atm_flat, m0)
    assert is_final(atm_flat, Marking.from_dict({"Main/T1.5/done": [Token("unit")]}))


def test_flatten_requires_page_assignment(atm_hcpn):
    with pytest.raises(UnboundSocketError) as info:
        flatten(replace(atm_hcpn, page_assignment={}))
    assert info.value.code == "unbound-socket"


def test_flatten_rejects_page_cycles(atm_hcpn):
    assignment = dict(atm_hcpn.page_assignment)
    assignment["Main/T1.3/Identification"] = "Main"
    with pytest.raises(PageCycleError):
        flatten(replace(atm_hcpn, page_assignment=assignment))


def test_initial_token_sits_on_untimed_prime_place(sensor_flat):
    m0 = initial_marking(sensor_flat)
    assert m0.untimed() == {"Main/T1.4/start": ("unit",)}
    assert m0.get("Main/T1.4/start")[0].timestamp is None
    assert sensor_flat.is_timed


# ----------------------------------------------------------------------
# Codec JSON
# ----------------------------------------------------------------------

def test_hcpn_codec_round_trip(atm_hcpn):
    document = json.loads(json.dumps(hcpn_to_dict(atm_hcpn)))
    assert document["kind"] == "hcpn"
    assert document["schema_version"] == "1.0"
    assert hcpn_from_dict(document) == atm_hcpn


def test_flat_codec_round_trip(sensor_flat):
    document = json.loads(json.dumps(flat_to_dict(sensor_flat)))
    assert flat_from_dict(document) == sensor_flat


def test_codec_rejects_wrong_kind(atm_hcpn):
    with pytest.raises(CodecError):
        hcpn_from_dict({"kind": "flat"})
    with pytest.raises(CodecError):
        flat_from_dict(hcpn_to_dict(atm_hcpn))
    with pytest.raises(CodecError):
        hcpn_from_dict({"kind": "hcpn", "name": "x"})
