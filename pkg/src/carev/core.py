"""Domain types and encodings for one-dimensional cellular automata.

Conventions used everywhere in this package:

* States are the integers ``0 .. p-1``; state 0 doubles as the boundary
  state outside the finite lattice.
* A length-``L`` sequence of states is identified with the base-``p``
  integer whose *most significant* digit is the leftmost element.
* A local rule over neighbourhood size ``k`` is a lookup table of length
  ``p**k``; entry ``i`` is the rule applied to the ``k``-sequence with
  index ``i``.  The Wolfram number of the rule is the base-``p`` integer
  whose digit ``i`` (least significant first) equals ``table[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    InvalidArgumentError,
    InvalidStateError,
    RuleNumberOverflowError,
)

#: Largest admitted bitset width p**(k-1); construction beyond this is refused.
DEFAULT_WIDTH_CAP = 1 << 20


@dataclass(frozen=True)
class Alphabet:
    """The state set {0, .., p-1}."""

    p: int

    def __post_init__(self):
        if self.p < 2:
            raise InvalidArgumentError(f"alphabet size must be >= 2, got {self.p}")

    def states(self) -> range:
        return range(self.p)


@dataclass(frozen=True)
class Neighborhood:
    """A contiguous window reaching r_l cells left and r_r cells right."""

    r_l: int
    r_r: int

    def __post_init__(self):
        if self.r_l < 0 or self.r_r < 0:
            raise InvalidArgumentError(
                f"radii must be non-negative, got ({self.r_l}, {self.r_r})"
            )

    @property
    def k(self) -> int:
        return self.r_l + self.r_r + 1


@dataclass(frozen=True)
class SequenceIndex:
    """A state sequence packed as a base-p integer (leftmost digit most
    significant).  Length 0 denotes the unique empty sequence."""

    length: int
    index: int

    def __post_init__(self):
        if self.length < 0:
            raise InvalidArgumentError(f"negative sequence length {self.length}")
        if self.index < 0:
            raise InvalidArgumentError(f"negative sequence index {self.index}")


def encode_sequence(digits, alphabet: Alphabet) -> SequenceIndex:
    """Pack a list of states into a SequenceIndex.

    Raises InvalidStateError if any digit falls outside the alphabet.
    """
    p = alphabet.p
    value = 0
    for d in digits:
        if not 0 <= d < p:
            raise InvalidStateError(f"digit {d} outside alphabet of size {p}")
        value = value * p + d
    return SequenceIndex(length=len(digits), index=value)


def decode_sequence(seq: SequenceIndex, alphabet: Alphabet) -> list[int]:
    """Unpack a SequenceIndex back into its list of states."""
    p = alphabet.p
    if seq.index >= p**seq.length:
        raise InvalidStateError(
            f"index {seq.index} does not fit a length-{seq.length} sequence over p={p}"
        )
    out = [0] * seq.length
    v = seq.index
    for pos in range(seq.length - 1, -1, -1):
        out[pos] = v % p
        v //= p
    return out


def is_left_zero(seq: SequenceIndex, m: int, alphabet: Alphabet) -> bool:
    """True iff the leftmost m elements are all 0 (vacuously true for m=0)."""
    if not 0 <= m <= seq.length:
        raise InvalidArgumentError(f"m={m} outside [0, {seq.length}]")
    return seq.index < alphabet.p ** (seq.length - m)


def is_right_zero(seq: SequenceIndex, m: int, alphabet: Alphabet) -> bool:
    """True iff the rightmost m elements are all 0 (vacuously true for m=0)."""
    if not 0 <= m <= seq.length:
        raise InvalidArgumentError(f"m={m} outside [0, {seq.length}]")
    return seq.index % alphabet.p**m == 0


@dataclass(frozen=True)
class LocalRule:
    """A local update rule: table of next states indexed by k-sequence."""

    alphabet: Alphabet
    neighborhood: Neighborhood
    table: tuple[int, ...]

    def __post_init__(self):
        p = self.alphabet.p
        expected = p**self.neighborhood.k
        if len(self.table) != expected:
            raise InvalidArgumentError(
                f"table length {len(self.table)} != p**k = {expected}"
            )
        if any(not 0 <= t < p for t in self.table):
            raise InvalidStateError("table entry outside alphabet")

    @property
    def p(self) -> int:
        return self.alphabet.p

    @property
    def k(self) -> int:
        return self.neighborhood.k

    @property
    def node_width(self) -> int:
        """Number of (k-1)-sequences, i.e. the bitset width of graph nodes."""
        return self.p ** (self.k - 1)

    def table_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)


def check_capacity(alphabet: Alphabet, neighborhood: Neighborhood,
                   width_cap: int = DEFAULT_WIDTH_CAP) -> None:
    """Refuse geometries whose node bitsets would exceed width_cap bits."""
    width = alphabet.p ** (neighborhood.k - 1)
    if width > width_cap:
        raise CapacityError(
            f"node width p**(k-1) = {width} exceeds cap {width_cap} "
            f"(p={alphabet.p}, k={neighborhood.k})"
        )


def rule_from_number(number: int, alphabet: Alphabet, neighborhood: Neighborhood,
                     width_cap: int = DEFAULT_WIDTH_CAP) -> LocalRule:
    """Build the rule whose Wolfram number is `number`.

    Digit i of `number` in base p (least significant first) becomes
    ``table[i]``.  Numbers are arbitrary precision; anything outside
    [0, p**(p**k)) raises RuleNumberOverflowError.
    """
    check_capacity(alphabet, neighborhood, width_cap)
    p = alphabet.p
    entries = p**neighborhood.k
    if not 0 <= number < p**entries:
        raise RuleNumberOverflowError(
            f"rule number {number} outside [0, {p}**{entries})"
        )
    table = []
    v = number
    for _ in range(entries):
        table.append(v % p)
        v //= p
    return LocalRule(alphabet, neighborhood, tuple(table))


def rule_to_number(rule: LocalRule) -> int:
    """Exact inverse of rule_from_number."""
    number = 0
    for entry in reversed(rule.table):
        number = number * rule.p + entry
    return number


def rule_from_digits(digits, alphabet: Alphabet, neighborhood: Neighborhood,
                     width_cap: int = DEFAULT_WIDTH_CAP) -> LocalRule:
    """Build a rule from its table written in Wolfram order.

    `digits` lists the table entries from index p**k - 1 down to 0, the
    order in which the base-p expansion of the rule number is written;
    a plain digit string like "10010110" works too.
    """
    check_capacity(alphabet, neighborhood, width_cap)
    p = alphabet.p
    entries = p**neighborhood.k
    try:
        digits = [int(d) for d in digits]
    except (TypeError, ValueError):
        raise InvalidStateError(f"cannot read table digits from {digits!r}")
    if len(digits) != entries:
        raise InvalidArgumentError(
            f"expected {entries} table digits, got {len(digits)}"
        )
    if any(not 0 <= d < p for d in digits):
        raise InvalidStateError("table digit outside alphabet")
    return LocalRule(alphabet, neighborhood, tuple(reversed(digits)))


def mirror_rule(rule: LocalRule) -> LocalRule:
    """Reflect a rule left-to-right.

    The mirrored rule lives on swapped radii (r_r, r_l); its entry for a
    k-sequence equals the original entry for the digit-reversed sequence.
    Applying mirror_rule twice restores the original rule.
    """
    p, k = rule.p, rule.k
    table = [0] * len(rule.table)
    for idx, entry in enumerate(rule.table):
        rev = 0
        v = idx
        for _ in range(k):
            rev = rev * p + v % p
            v //= p
        table[rev] = entry
    mirrored_nb = Neighborhood(rule.neighborhood.r_r, rule.neighborhood.r_l)
    return LocalRule(rule.alphabet, mirrored_nb, tuple(table))


@dataclass(frozen=True)
class Node:
    """A set of (k-1)-sequences stored as a bitset.

    Bit i is set iff the (k-1)-sequence with index i belongs to the set.
    """

    width: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise InvalidArgumentError("node bits outside declared width")

    def members(self) -> list[int]:
        """Sorted indices of the member sequences."""
        out = []
        v = self.bits
        while v:
            lsb = v & -v
            out.append(lsb.bit_length() - 1)
            v ^= lsb
        return out

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def is_empty(self) -> bool:
        return self.bits == 0


@dataclass(frozen=True)
class Bucket:
    """A duplicate-free set of nodes in canonical (ascending bitset) order."""

    width: int
    nodes: tuple[int, ...] = field(default=())

    @staticmethod
    def from_bits(width: int, bits_iter) -> "Bucket":
        return Bucket(width, tuple(sorted(set(bits_iter))))

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, bits: int) -> bool:
        return bits in self.nodes
