"""Surjectivity of the infinite automaton via subset-graph closure.

Implements the decision procedure of Amoroso & Patt (1972) in two
variants: the original one, whose graph nodes are sets of k-sequences,
and an optimized one whose nodes store only the suffixes, i.e. sets of
(k-1)-sequences.  Replacing every k-sequence by its suffix preserves the
verdict (successor construction only ever reads the rightmost k-1
elements) while merging nodes, so the optimized graph is never larger.

The suffix-node successor computed here is reused verbatim by the
null-boundary deciders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_WIDTH_CAP, LocalRule, Node
from .errors import CapacityError, InvalidArgumentError

FULL = "full"
OPTIMIZED = "optimized"

REASON_UNBALANCED = "unbalanced-image"
REASON_EMPTY_NODE = "empty-node-reached"
REASON_CLOSED = "graph-closed"

GRAPH_FORMAT_VERSION = 1


def check_image_covering(rule: LocalRule) -> bool:
    """True iff every state is attained by the rule on some k-sequence.

    A state with no preimage k-sequence makes any configuration that
    contains it a Garden of Eden, so failing this check already settles
    non-surjectivity.
    """
    return len(set(rule.table)) == rule.p


def build_step_masks(table, p: int, width: int) -> list[list[int]]:
    """Per-label successor masks over suffix bitsets.

    ``step[a][beta]`` is the bitset of (k-1)-sequences gamma such that
    appending some d to beta yields a k-sequence alpha with
    ``table[alpha] == a`` and ``gamma = suffix(alpha)``.  A node's
    successor under label a is the union of ``step[a][beta]`` over its
    members beta.
    """
    step = [[0] * width for _ in range(p)]
    for beta in range(width):
        base = beta * p
        for d in range(p):
            alpha = base + d
            step[table[alpha]][beta] |= 1 << (alpha % width)
    return step


def successor_bits(step_for_label, x_bits: int) -> int:
    """Union of per-member successor masks for one label."""
    out = 0
    while x_bits:
        lsb = x_bits & -x_bits
        out |= step_for_label[lsb.bit_length() - 1]
        x_bits ^= lsb
    return out


def successor_node(rule: LocalRule, x: Node, a: int) -> Node:
    """Successor of a suffix node under label a."""
    if x.width != rule.node_width:
        raise InvalidArgumentError(
            f"node width {x.width} does not match rule width {rule.node_width}"
        )
    if not 0 <= a < rule.p:
        raise InvalidArgumentError(f"label {a} outside alphabet")
    step = build_step_masks(rule.table, rule.p, rule.node_width)
    return Node(x.width, successor_bits(step[a], x.bits))


def successor_node_full(rule: LocalRule, x, a: int) -> set[int]:
    """Successor of a k-sequence node under label a (original variant).

    `x` is a set of k-sequence indices; the result contains every
    k-sequence mapping to `a` that overlaps a member of `x` by k-1
    elements.
    """
    if not 0 <= a < rule.p:
        raise InvalidArgumentError(f"label {a} outside alphabet")
    p = rule.p
    suffix_mod = rule.node_width
    table = rule.table
    out = set()
    for member in x:
        base = (member % suffix_mod) * p
        for d in range(p):
            alpha = base + d
            if table[alpha] == a:
                out.add(alpha)
    return out


@dataclass(frozen=True)
class SurjectivityVerdict:
    surjective: bool
    reason: str
    node_count: int


@dataclass(frozen=True)
class AmorosoGraph:
    """Closure graph in discovery order; node ids index into `nodes`."""

    variant: str
    node_width: int
    initial_state_b: int
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (from_id, label, to_id)


def _full_step_masks(table, p: int, k: int) -> list[list[int]]:
    # step[a][suffix_class] over k-sequence bitsets
    width = p**k
    suffix_mod = p ** (k - 1)
    step = [[0] * suffix_mod for _ in range(p)]
    for gamma in range(suffix_mod):
        base = gamma * p
        for d in range(p):
            alpha = base + d
            step[table[alpha]][gamma] |= 1 << alpha
    return step


def decide_surjective(rule: LocalRule, variant: str = OPTIMIZED, b: int = 0,
                      complete_graph: bool = False,
                      width_cap: int = DEFAULT_WIDTH_CAP):
    """Decide surjectivity of the infinite automaton.

    Runs a breadth-first closure from the initial node seeded by state
    `b`, deduplicating nodes by set equality, labels explored in
    ascending order.  Hitting an empty node proves non-surjectivity and
    stops construction right after that node is recorded, so node counts
    of truncated graphs include the empty node; a completed closure
    proves surjectivity.

    With ``complete_graph=True`` the construction does not stop at an
    empty node: the empty set becomes an ordinary node (its successors
    are all empty), so the closure always finishes and node counts do
    not depend on traversal cut-off.  Verdicts are identical either way.

    Returns ``(SurjectivityVerdict, AmorosoGraph)``.
    """
    if variant not in (FULL, OPTIMIZED):
        raise InvalidArgumentError(f"unknown variant {variant!r}")
    if not 0 <= b < rule.p:
        raise InvalidArgumentError(f"seed state {b} outside alphabet")
    p, k = rule.p, rule.k

    if not check_image_covering(rule):
        verdict = SurjectivityVerdict(False, REASON_UNBALANCED, 0)
        width = p**k if variant == FULL else rule.node_width
        return verdict, AmorosoGraph(variant, width, b, (), ())

    if variant == FULL:
        width = p**k
        if width > width_cap:
            raise CapacityError(
                f"full-variant node width {width} exceeds cap {width_cap}"
            )
        step = _full_step_masks(rule.table, p, k)
        init = 0
        for alpha, out in enumerate(rule.table):
            if out == b:
                init |= 1 << alpha
        suffix_mod = rule.node_width

        def successor(bits: int, a: int) -> int:
            acc = 0
            while bits:
                lsb = bits & -bits
                alpha = lsb.bit_length() - 1
                acc |= step[a][alpha % suffix_mod]
                bits ^= lsb
            return acc

    else:
        width = rule.node_width
        step = build_step_masks(rule.table, p, width)
        init = 0
        for alpha, out in enumerate(rule.table):
            if out == b:
                init |= 1 << (alpha % width)

        def successor(bits: int, a: int) -> int:
            return successor_bits(step[a], bits)

    nodes: list[int] = [init]
    ids: dict[int, int] = {init: 0}
    edges: list[tuple[int, int, int]] = []
    empty_seen = False
    head = 0
    while head < len(nodes):
        bits = nodes[head]
        from_id = head
        head += 1
        for a in range(p):
            succ = successor(bits, a)
            to_id = ids.get(succ)
            if to_id is None:
                to_id = len(nodes)
                ids[succ] = to_id
                nodes.append(succ)
            edges.append((from_id, a, to_id))
            if succ == 0:
                empty_seen = True
                if not complete_graph:
                    # the empty node just appended counts like any other
                    verdict = SurjectivityVerdict(False, REASON_EMPTY_NODE,
                                                  len(nodes))
                    return verdict, AmorosoGraph(variant, width, b,
                                                 tuple(nodes), tuple(edges))

    if empty_seen:
        verdict = SurjectivityVerdict(False, REASON_EMPTY_NODE, len(nodes))
    else:
        verdict = SurjectivityVerdict(True, REASON_CLOSED, len(nodes))
    return verdict, AmorosoGraph(variant, width, b, tuple(nodes), tuple(edges))


def graph_to_text(graph: AmorosoGraph) -> str:
    """Versioned line-oriented dump: a node table followed by edges.

    Node lines read ``id : {sorted member indices}``; edge lines read
    ``from_id label to_id``.
    """
    lines = [
        f"carev-amoroso-graph {GRAPH_FORMAT_VERSION}",
        f"variant {graph.variant} b {graph.initial_state_b} width {graph.node_width}",
        f"nodes {len(graph.nodes)}",
    ]
    for node_id, bits in enumerate(graph.nodes):
        members = Node(graph.node_width, bits).members()
        lines.append(f"{node_id} : {{{','.join(map(str, members))}}}")
    lines.append(f"edges {len(graph.edges)}")
    for from_id, label, to_id in graph.edges:
        lines.append(f"{from_id} {label} {to_id}")
    return "\n".join(lines) + "\n"
