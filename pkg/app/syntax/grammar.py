"""Lark grammars for term programs and read-arc net files."""

from lark import Lark

TERM_GRAMMAR = r"""
    program: equation* "main" "=" term  -> equations
           | term                        -> bare

    equation: UNAME "<=" term

    ?term: sum

    ?sum: sum "+" par                   -> choice
        | par

    ?par: par "|[" [names] "]|" prefixed -> parallel
        | prefixed

    ?prefixed: action "." prefixed          -> prefix
             | action "|>" prefixed         -> read_prefix
             | "{" [actions] "}" "|>" prefixed -> read_set
             | "rec" (NAME | UNAME) "." prefixed -> rec
             | relabelled

    ?relabelled: relabelled "[" [renames] "]" -> relabel
               | atom

    ?atom: "0"                          -> nil
         | NAME                         -> ref
         | UNAME                        -> ref
         | "(" term ")"

    action: BANG? (NAME | TAU)
    actions: action ("," action)*
    names: NAME ("," NAME)*
    renames: rename ("," rename)*
    rename: NAME "->" (NAME | TAU)

    BANG: "!"
    TAU: "tau"
    NAME: /[a-z_][A-Za-z0-9_]*/
    UNAME: /[A-Z][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

NET_GRAMMAR = r"""
    net: (_item)*

    _item: place | transition | flow | read_arc

    place: "place" ID MARKED?
    transition: "trans" ID ("label" "=" ID)?
    flow: "arc" ID "->" ID
    read_arc: "read" ID "--" ID

    MARKED: "marked"
    ID: /[A-Za-z_][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

term_parser = Lark(
    TERM_GRAMMAR,
    start="program",
    parser="lalr",
    propagate_positions=True,
    maybe_placeholders=True,
)

net_parser = Lark(NET_GRAMMAR, start="net", parser="lalr", propagate_positions=True)
