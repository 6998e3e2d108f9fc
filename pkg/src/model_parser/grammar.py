"""
Gramática lark da linguagem .iom
"""

IOM_GRAMMAR = r"""
    start: model

    model: "model" STRING "{" diagram* "}"

    ?diagram: iod | sd | td

    // ---------------- IOD ----------------
    iod: "iod" ID "{" iod_stmt* "}"

    ?iod_stmt: initial_decl
             | final_decl
             | interaction_decl
             | bar_decl
             | diamond_decl
             | edge_decl

    initial_decl: "initial" ID ";"
    final_decl: "final" ID ";"
    interaction_decl: "interaction" ID "ref" DIAGRAM_KIND ID ";"
    bar_decl: BAR_KIND ID ";"
    diamond_decl: DIAMOND_KIND ID ";"
    edge_decl: "edge" ID "->" ID guard_clause? ";"
    guard_clause: "guard" STRING

    // ---------------- SD ----------------
    sd: "sd" ID "{" sd_stmt* "}"

    ?sd_stmt: lifeline_decl
            | msg_decl
            | alt_frag
            | opt_frag
            | par_frag
            | loop_frag

    lifeline_decl: "lifeline" ID ";"
    msg_decl: "msg" ID "from" endpoint "to" endpoint MSG_KIND ";"
    endpoint: ID | STAR
    alt_frag: "alt" operand ("else" operand)*
    opt_frag: "opt" operand
    loop_frag: "loop" operand
    par_frag: "par" operand ("and" operand)*
    operand: STRING? "{" sd_stmt* "}"

    // ---------------- TD ----------------
    td: "td" ID "{" td_stmt* "}"

    ?td_stmt: td_lifeline_decl
            | segment_decl
            | at_decl
            | td_msg_decl

    td_lifeline_decl: "lifeline" ID "states" ID ("," ID)* ";"
    segment_decl: "segment" ID ID dur_clause? ";"
    dur_clause: "dur" bounds
    at_decl: "at" ID ID "->" ID time_clause? on_clause? ";"
    time_clause: "time" bounds
    on_clause: "on" ID
    td_msg_decl: "msg" ID "from" ID "@" INT "to" ID "@" INT ";"
    bounds: "[" INT "," INT "]"

    DIAGRAM_KIND.2: /(iod|sd|td)\b/
    BAR_KIND.2: /(fork|join)\b/
    DIAMOND_KIND.2: /(decision|merge)\b/
    MSG_KIND.2: /(async|sync|reply)\b/
    STAR: "*"
    ID: /[A-Za-z_][A-Za-z0-9_]*/
    INT: /[0-9]+/
    STRING: /"(\\.|[^"\\\n])*"/

    COMMENT: /#[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

# Palavras reservadas (não podem ser usadas como identificadores pelo serializador)
KEYWORDS = frozenset({
    "model", "iod", "sd", "td", "initial", "final", "interaction", "ref", "fork", "join",
    "decision", "merge", "edge", "guard", "lifeline", "msg", "from", "to", "async", "sync",
    "reply", "alt", "else", "opt", "loop", "par", "and", "states", "segment", "dur", "at",
    "time", "on",
})
