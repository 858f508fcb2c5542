"""Reversibility of finite automata under null boundary conditions.

Two deciders over the suffix-node graph:

* `strictly_reversible` -- breadth-first closure from the boundary node;
  the automaton is reversible for every cell count iff every generated
  node contains exactly one sequence ending in r_r zeros.
* `reversibility_function` -- groups nodes by their distance from the
  boundary node into a chain of "buckets".  Bucket n decides
  reversibility for cell count n, and because the bucket chain must
  eventually repeat, the resulting boolean function of n is eventually
  periodic and can be returned in closed form.

Why the right-zero count: paths of length n from the boundary node spell
out the n-cell images, and the node at the end of a path collects the
trailing (k-1)-sequences of all compatible preimages.  A preimage is
valid under null boundaries only if it ends in r_r zeros, so a node
without such a member certifies a configuration with no preimage, and a
node with two certifies one with two.  The boundary node itself sits
outside the cell space (it encodes the zeros left of cell 0) and is
exempt.
"""

from __future__ import annotations

from dataclasses import dataclass

from .amoroso import build_step_masks, successor_bits
from .core import Alphabet, LocalRule, Node
from .errors import BudgetError, InvalidArgumentError

DEFAULT_MAX_BUCKETS = 100_000


def initial_node(rule: LocalRule) -> Node:
    """The boundary node: all (k-1)-sequences starting with r_l zeros.

    Exactly the sequences compatible with the zero region left of the
    lattice; there are p**r_r of them.
    """
    count = rule.p**rule.neighborhood.r_r
    return Node(rule.node_width, (1 << count) - 1)


def right_zero_mask(p: int, width: int, r_r: int) -> int:
    """Bitset of (k-1)-sequence indices ending in r_r zeros.

    For r_r = 0 the condition is vacuous and the mask covers everything,
    so the "exactly one right-zero member" test degenerates to
    cardinality 1.
    """
    stride = p**r_r
    mask = 0
    for i in range(0, width, stride):
        mask |= 1 << i
    return mask


def count_right_zero(node: Node, r_r: int, alphabet: Alphabet) -> int:
    """Number of member sequences whose rightmost r_r elements are 0."""
    stride = alphabet.p**r_r
    if stride > node.width:
        raise InvalidArgumentError(
            f"r_r={r_r} exceeds sequence length for node width {node.width}"
        )
    return (node.bits & right_zero_mask(alphabet.p, node.width, r_r)).bit_count()


@dataclass(frozen=True)
class StrictWitness:
    """First offending node found, at its minimal distance from the boundary
    node; that distance is a cell count on which the oracle refutes
    reversibility."""

    depth: int
    node: Node
    defect: str  # "empty" or "zero-sequence-count"


@dataclass(frozen=True)
class StrictVerdict:
    strictly_reversible: bool
    witness: StrictWitness | None = None


def _strict_scan(table, p: int, r_l: int, r_r: int):
    """Raw strict check; returns (ok, depth, node_bits, zero_count)."""
    width = p ** (r_l + r_r)
    step = build_step_masks(table, p, width)
    zmask = right_zero_mask(p, width, r_r)
    init = (1 << p**r_r) - 1
    seen = {init}
    frontier = [(init, 0)]
    head = 0
    while head < len(frontier):
        bits, depth = frontier[head]
        head += 1
        for a in range(p):
            succ = successor_bits(step[a], bits)
            if (succ & zmask).bit_count() != 1:
                return False, depth + 1, succ, (succ & zmask).bit_count()
            if succ not in seen:
                seen.add(succ)
                frontier.append((succ, depth + 1))
    return True, -1, 0, 0


def strictly_reversible(rule: LocalRule) -> StrictVerdict:
    """Decide reversibility for every cell count at once."""
    ok, depth, bits, zcount = _strict_scan(
        rule.table, rule.p, rule.neighborhood.r_l, rule.neighborhood.r_r
    )
    if ok:
        return StrictVerdict(True)
    defect = "empty" if bits == 0 else "zero-sequence-count"
    witness = StrictWitness(depth, Node(rule.node_width, bits), defect)
    return StrictVerdict(False, witness)


@dataclass(frozen=True)
class ReversibilityFunction:
    """Eventually periodic boolean function of the cell count.

    ``transient`` holds R(1..T); afterwards the values repeat `cycle`
    with period q = len(cycle).  A chain that died out (an empty node
    appeared, so no later count is reversible) is encoded as
    ``cycle = (False,)``.
    """

    transient: tuple[bool, ...]
    cycle: tuple[bool, ...]
    distinct_buckets: int

    def __post_init__(self):
        if not self.cycle:
            raise InvalidArgumentError("cycle must be non-empty")

    @property
    def transient_length(self) -> int:
        return len(self.transient)

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def bucket_stats(self) -> tuple[int, int, int]:
        return (self.distinct_buckets, self.transient_length, self.period)

    def __call__(self, n: int) -> bool:
        if n < 1:
            raise InvalidArgumentError(f"cell count must be >= 1, got {n}")
        if n <= len(self.transient):
            return self.transient[n - 1]
        return self.cycle[(n - len(self.transient) - 1) % len(self.cycle)]

    def all_ones(self) -> bool:
        return all(self.transient) and all(self.cycle)

    def any_true(self, n_from: int = 1) -> bool:
        horizon = max(len(self.transient) + len(self.cycle),
                      n_from + len(self.cycle) - 1)
        return any(self(n) for n in range(n_from, horizon + 1))

    def serialize(self) -> str:
        t = "".join("1" if v else "0" for v in self.transient)
        c = "".join("1" if v else "0" for v in self.cycle)
        return f"transient={t}; cycle={c}; buckets={self.distinct_buckets}"

    def canonical(self) -> tuple[int, int, tuple[bool, ...], tuple[bool, ...]]:
        """Minimal transient length and period describing the same function.

        Different bucket chains can realize the same function with
        different (transient, cycle) splits; grouping and pretty-printing
        go through this normal form.
        """
        q = len(self.cycle)
        best_q = q
        for d in range(1, q):
            if q % d == 0 and all(
                self.cycle[i] == self.cycle[(i + d) % q] for i in range(q)
            ):
                best_q = d
                break
        t = len(self.transient)
        values = [self(n) for n in range(1, t + best_q + 1)]
        while t > 0 and values[t - 1] == values[t - 1 + best_q]:
            t -= 1
        return (t, best_q, tuple(values[:t]), tuple(values[t:t + best_q]))

    def describe(self) -> str:
        """Piecewise description when one exists, else the raw encoding."""
        t, q, trans, cyc = self.canonical()
        ones = [i + 1 for i, v in enumerate(trans) if v]
        if q == 1:
            if cyc[0]:
                if t == 0:
                    return "R(n)=1 for all n"
                if not ones:
                    return f"R(n)=1 iff n > {t}"
                return f"R(n)=1 iff n > {t} or n ∈ {{{_fmt_set(ones)}}}"
            if not ones:
                return "R(n)=0 for all n"
            return f"R(n)=1 iff n ∈ {{{_fmt_set(ones)}}}"
        if t == 0:
            residues = sorted({(m + 1) % q for m, v in enumerate(cyc) if v})
            return f"R(n)=1 iff n ≡ {_fmt_set(residues)} (mod {q})"
        return self.serialize()


def _fmt_set(values) -> str:
    return ",".join(map(str, values))


def _bucket_chain(table, p: int, r_l: int, r_r: int, max_buckets: int):
    """Raw bucket chain; returns (transient, cycle, distinct_buckets).

    Buckets are canonical ascending tuples of node bitsets.  The chain
    stops at the first repeated bucket (fixing the period) or at the
    first bucket containing the empty node (after which every cell count
    is irreversible).
    """
    if max_buckets < 1:
        raise InvalidArgumentError("max_buckets must be >= 1")
    width = p ** (r_l + r_r)
    step = build_step_masks(table, p, width)
    zmask = right_zero_mask(p, width, r_r)
    init = (1 << p**r_r) - 1

    chain = [(init,)]
    chain_index = {(init,): 0}
    rvals = []  # rvals[i] = R(i+1)
    while True:
        i = len(chain)
        succs = set()
        for bits in chain[i - 1]:
            for a in range(p):
                succs.add(successor_bits(step[a], bits))
        bucket = tuple(sorted(succs))

        ok = True
        extinct = False
        for bits in bucket:
            if bits == 0:
                extinct = True
            if (bits & zmask).bit_count() != 1:
                ok = False
        rvals.append(ok)

        if extinct:
            # empty nodes only beget empty nodes: R(n) = 0 from here on
            return tuple(rvals[:-1]), (False,), i + 1

        j = chain_index.get(bucket)
        if j is not None:
            # period is i - j; R repeats from cell count j + 1 on
            return tuple(rvals[:j]), tuple(rvals[j:]), i

        chain_index[bucket] = i
        chain.append(bucket)
        if len(chain) > max_buckets:
            raise BudgetError(
                f"bucket chain exceeded max_buckets={max_buckets}"
            )


def reversibility_function(rule: LocalRule,
                           max_buckets: int = DEFAULT_MAX_BUCKETS
                           ) -> ReversibilityFunction:
    """Compute R(n) for all n >= 1 via the bucket chain."""
    transient, cycle, buckets = _bucket_chain(
        rule.table, rule.p, rule.neighborhood.r_l, rule.neighborhood.r_r,
        max_buckets,
    )
    return ReversibilityFunction(transient, cycle, buckets)


def strict_equals_allones(rule: LocalRule,
                          max_buckets: int = DEFAULT_MAX_BUCKETS) -> bool:
    """Self-check: the strict verdict must match an all-ones R."""
    verdict = strictly_reversible(rule)
    func = reversibility_function(rule, max_buckets)
    return verdict.strictly_reversible == func.all_ones()
