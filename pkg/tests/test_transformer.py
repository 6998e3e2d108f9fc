from collections import Counter

import pytest

from src.diagram_model.hierarchy import hierarchy_level
from src.diagram_model.model import NodeKind
from src.diagram_model.validator import validate
from src.hcpn_core.flattener import flatten, initial_marking
from src.hcpn_core.net import TransitionRole, check_hcpn
from src.hcpn_core.token_game import enabled, fire
from src.model_parser.parser import parse, parse_file
from src.transformer.builder import InvalidModelError, UnsupportedConstructError
from src.transformer.iod_mapper import edge_rule
from src.transformer.rule_trace import RULE_PREFIXES, RuleTrace
from src.transformer.transformer import TransformOptions, transform
from tests.model_generators import generate_model


def _elements(hcpn):
    return ([p.id for p in hcpn.pages] + [p.id for p in hcpn.places]
            + [t.id for t in hcpn.transitions] + [a.id for a in hcpn.arcs])


def _assert_trace_covers(hcpn, trace):
    counts = Counter(trace.produced())
    duplicated = [element for element, n in counts.items() if n > 1]
    assert duplicated == []
    missing = [element for element in _elements(hcpn) if element not in counts]
    assert missing == []
    assert all(e.rule.startswith(RULE_PREFIXES) for e in trace.entries)


def test_atm_page_tree(atm_hcpn):
    assert atm_hcpn.prime_page == "Main"
    assert [p.id for p in atm_hcpn.pages] == [
        "Main",
        "Main/Identification",
        "Main/Identification/PinTest",
        "Main/Identification/WelcomeMessage",
        "Main/Identification/EjectCard",
    ]
    assert atm_hcpn.page_depth() == 2
    assert atm_hcpn.child_pages("Main") == ("Main/Identification",)


def test_page_levels_follow_hierarchy(atm_model, atm_hcpn):
    for page in atm_hcpn.pages:
        assert page.level == hierarchy_level(atm_model, page.source)


def test_atm_is_well_formed(atm_hcpn):
    assert check_hcpn(atm_hcpn) == []
    assert atm_hcpn.initial_marking == {"Main/T1.4/start": ("unit",)}
    assert atm_hcpn.final_places == ("Main/T1.5/done",)


def test_every_page_below_prime_has_one_in_transition(atm_hcpn):
    for page in atm_hcpn.pages[1:]:
        assert len(atm_hcpn.in_transitions(page.id)) == 1
        assert atm_hcpn.out_transitions(page.id)


def test_minimal_model(minimal_path):
    hcpn, trace = transform(parse_file(minimal_path).unwrap())
    assert len(hcpn.places) == 2
    assert len(hcpn.transitions) == 1
    assert len(hcpn.arcs) == 2
    assert trace.rules() == ["T1.1", "T1.4", "T1.5", "T2.10.2"]


def test_found_message_is_unsupported(found_path):
    with pytest.raises(UnsupportedConstructError) as info:
        transform(parse_file(found_path).unwrap())
    assert info.value.code == "unsupported: found-message"
    assert info.value.entity == "Alarm:ring"


def test_lost_message_is_unsupported():
    text = ('model "m" { iod Main { initial s; interaction P ref sd S; final f; edge s -> P; edge P -> f; } '
            'sd S { lifeline A; msg gone from A to * async; } }')
    with pytest.raises(UnsupportedConstructError) as info:
        transform(parse(text).unwrap())
    assert info.value.code == "unsupported: lost-message"


def test_leaf_iod_without_behavior_is_unsupported():
    text = ('model "m" { iod Main { initial s; interaction Sub ref iod Sub; final f; '
            'edge s -> Sub; edge Sub -> f; } iod Sub { initial a; final b; edge a -> b; } }')
    model = parse(text).unwrap()
    assert validate(model).is_valid
    with pytest.raises(UnsupportedConstructError) as info:
        transform(model)
    assert info.value.code == "unsupported: leaf-iod"
    assert info.value.entity == "Sub"
    assert "Sub" in str(info.value)


def test_invalid_model_is_rejected():
    model = parse('model "m" { iod Main { initial s; } }').unwrap()
    with pytest.raises(InvalidModelError) as info:
        transform(model)
    assert "no-final" in info.value.report.rules()


def test_transformation_is_deterministic(atm_model):
    first = transform(atm_model)
    second = transform(atm_model)
    assert first == second
    assert [p.id for p in first[0].places] == [p.id for p in second[0].places]


def test_atm_trace_covers_every_element(atm_hcpn, atm_trace):
    _assert_trace_covers(atm_hcpn, atm_trace)
    assert atm_trace.source_of("Main/T1.3/Identification") == "Main:Identification"
    assert RuleTrace.from_dict(atm_trace.to_dict()) == atm_trace


@pytest.mark.parametrize("seed", range(20))
def test_generated_models_transform_cleanly(seed):
    model = generate_model(seed, with_td=seed % 3 == 0)
    hcpn, trace = transform(model)
    assert check_hcpn(hcpn) == []
    _assert_trace_covers(hcpn, trace)


def test_edge_rule_classification():
    assert edge_rule(NodeKind.INITIAL, NodeKind.INTERACTION) == "T2.10.1"
    assert edge_rule(NodeKind.DECISION, NodeKind.MERGE) == "T2.10.2"
    assert edge_rule(NodeKind.FORK, NodeKind.FINAL) == "T2.10.3"
    assert edge_rule(NodeKind.JOIN, NodeKind.FORK) == "T2.10.4"
    assert edge_rule(NodeKind.FINAL, NodeKind.FORK) is None


# ----------------------------------------------------------------------
# Páginas de SD
# ----------------------------------------------------------------------

ONE_ASYNC = """model "sd" {
  iod Main { initial s; interaction P ref sd S; final f; edge s -> P; edge P -> f; }
  sd S { lifeline A; lifeline B; msg ping from A to B async; }
}"""


def test_single_async_message_page():
    hcpn, trace = transform(parse(ONE_ASYNC).unwrap())
    places = sorted(p.id for p in hcpn.places_of("Main/P"))
    assert len(places) == 6
    assert places == [
        "Main/P/T1.8/A.entry",
        "Main/P/T1.8/B.entry",
        "Main/P/T1.9/exit",
        "Main/P/Φ.msg/A.1",
        "Main/P/Φ.msg/B.1",
        "Main/P/Φ.msg/ping",
    ]
    roles = Counter(t.role for t in hcpn.transitions_of("Main/P"))
    assert roles == {TransitionRole.IN: 1, TransitionRole.OUT: 1, TransitionRole.NONE: 3}
    [entry] = trace.by_rule("Φ.msg")
    assert entry.source == "S:ping"


def test_unreplied_sync_waits_for_acknowledgement():
    text = ONE_ASYNC.replace("async", "sync")
    hcpn, trace = transform(parse(text).unwrap())
    [entry] = trace.by_rule("Φ.sync")
    assert "Main/P/Φ.sync/ping.ack" in entry.produced
    assert "Main/P/Φ.sync/ping.await" in entry.produced
    assert check_hcpn(hcpn) == []


def test_replied_sync_has_no_acknowledgement(atm_trace):
    assert atm_trace.by_rule("Φ.sync") == ()


def test_alt_fragment_branches_carry_guards(atm_hcpn, atm_trace):
    [entry] = atm_trace.by_rule("Φ.alt")
    assert entry.source == "PinTest:alt1"
    page = "Main/Identification/PinTest"
    assert atm_hcpn.transition(f"{page}/Φ.alt/alt1.branch1").guard.label == "valid"
    assert atm_hcpn.transition(f"{page}/Φ.alt/alt1.branch2").guard.label == "invalid"


@pytest.mark.parametrize("fragment, rule", [
    ('opt "c" { msg y from A to B async; }', "Φ.opt"),
    ('loop "more" { msg y from A to B async; }', "Φ.loop"),
    ('par { msg y from A to B async; } and { msg z from B to A async; }', "Φ.par"),
])
def test_fragments_produce_well_formed_pages(fragment, rule):
    text = ONE_ASYNC.replace("async; }\n}", f"async; {fragment} }}\n}}")
    hcpn, trace = transform(parse(text).unwrap())
    assert check_hcpn(hcpn) == []
    assert len(trace.by_rule(rule)) == 1
    _assert_trace_covers(hcpn, trace)


def test_empty_sd_keeps_in_out_connected():
    text = ('model "e" { iod Main { initial s; interaction P ref sd S; final f; '
            'edge s -> P; edge P -> f; } sd S { } }')
    hcpn, _ = transform(parse(text).unwrap(), TransformOptions(validate=True))
    assert [p.id for p in hcpn.places_of("Main/P")] == ["Main/P/Φ.page/idle"]


# ----------------------------------------------------------------------
# Páginas de TD
# ----------------------------------------------------------------------

def test_single_lifeline_td_page():
    text = ('model "td" { iod Main { initial s; interaction P ref td T; final f; '
            'edge s -> P; edge P -> f; } td T { lifeline S states idle, busy; '
            'segment S idle dur [2,4]; segment S busy; at S idle -> busy; } }')
    hcpn, _ = transform(parse(text).unwrap())
    timed = [p.id for p in hcpn.places if hcpn.is_timed_place(p.id)]
    assert timed == ["Main/P/T3.12/S"]
    [t] = [t for t in hcpn.transitions_of("Main/P") if t.role is TransitionRole.NONE]
    assert t.delay == (2, 4)


def test_sensor_timed_places(sensor_path):
    hcpn, trace = transform(parse_file(sensor_path).unwrap())
    timed = sorted(p.id for p in hcpn.places if hcpn.is_timed_place(p.id))
    assert timed == [
        "Main/Sampling/T3.12/Logger",
        "Main/Sampling/T3.12/Sensor",
        "Main/Sampling/T3.14/sample",
        "Main/Sampling/T3.18/Sensor@1.trigger",
    ]
    assert hcpn.transition("Main/Sampling/T3.13/Sensor@2").delay == (1, 1)
    assert hcpn.transition("Main/Sampling/T3.13/Logger@1").guard.window == (3, 9)
    _assert_trace_covers(hcpn, trace)


def test_cyclic_lifeline_runs_its_timeline_before_leaving():
    text = ('model "td" { iod Main { initial s; interaction P ref td T; final f; '
            'edge s -> P; edge P -> f; } td T { lifeline L states a, b; at L a -> b; at L b -> a; } }')
    net = flatten(transform(parse(text).unwrap())[0])
    m = initial_marking(net)
    fired = []
    while enabled(net, m):
        [(transition, binding)] = enabled(net, m)
        fired.append(transition)
        m = fire(net, m, transition, binding)
    assert fired == ["Main/P/T3.11/in", "Main/P/T3.13/L@1", "Main/P/T3.13/L@2", "Main/P/T3.11/out"]
    assert m.untimed() == {"Main/T1.5/f": ("unit",)}
