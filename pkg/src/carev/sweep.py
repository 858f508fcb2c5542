"""Exhaustive and sampled sweeps over rule spaces.

Work is split into contiguous rule-number blocks.  Blocks are pure
functions of the sweep spec, so they can run on a thread pool (the hot
kernels release the GIL) and be journalled to an append-only checkpoint
file for kill-and-resume; reports are assembled in block order and are
byte-identical regardless of parallelism or interruption.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np

from . import _backend
from .amoroso import FULL, OPTIMIZED, decide_surjective
from .core import Alphabet, Neighborhood, check_capacity, rule_from_number
from .errors import BudgetError, CheckpointError, InvalidArgumentError
from .nullboundary import (
    DEFAULT_MAX_BUCKETS,
    ReversibilityFunction,
    reversibility_function,
)

MODES = ("strict", "revfun", "surjectivity", "node-count-compare")

JOURNAL_VERSION = 1

#: Rules used by default for the full-vs-optimized node-count comparison.
DEFAULT_NODE_COUNT_RULES = (22, 37, 41, 85, 86, 101, 104, 106, 149, 169)

CSV_HEADER = ("rule_number,verdict,transient_bits,cycle_bits,bucket_count,"
              "node_count_full,node_count_opt")

_M64 = (1 << 64) - 1


def _splitmix64(state: int):
    """SplitMix64 step: returns (next_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & _M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return state, z ^ (z >> 31)


def sample_rule_numbers(space_size: int, count: int, seed: int) -> list[int]:
    """Deterministic distinct rule numbers in [0, space_size).

    Values are assembled from SplitMix64 outputs (least significant
    64-bit word first), masked to the bit length of space_size - 1 and
    rejection-sampled; duplicates are skipped until `count` distinct
    numbers exist.  The procedure is documented so other implementations
    can reproduce the same sample from the same seed.
    """
    if count < 1 or count > space_size:
        raise InvalidArgumentError(
            f"sample count {count} outside [1, {space_size}]"
        )
    bits = max((space_size - 1).bit_length(), 1)
    words = (bits + 63) // 64
    mask = (1 << bits) - 1
    state = seed & _M64
    chosen: set[int] = set()
    while len(chosen) < count:
        value = 0
        for w in range(words):
            state, out = _splitmix64(state)
            value |= out << (64 * w)
        value &= mask
        if value < space_size:
            chosen.add(value)
    return sorted(chosen)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep; identity excludes jobs/checkpoint/format knobs."""

    p: int
    r_l: int
    r_r: int
    mode: str
    lo: int | None = None
    hi: int | None = None
    sample_count: int | None = None
    sample_seed: int = 0
    block_size: int = 4096
    jobs: int = 1
    checkpoint_path: str | None = None
    max_buckets: int = DEFAULT_MAX_BUCKETS

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.p)

    @property
    def neighborhood(self) -> Neighborhood:
        return Neighborhood(self.r_l, self.r_r)

    @property
    def space_size(self) -> int:
        return self.p ** (self.p**self.neighborhood.k)

    def resolved_range(self) -> tuple[int, int]:
        lo = 0 if self.lo is None else self.lo
        hi = self.space_size if self.hi is None else self.hi
        return lo, hi

    def validate(self) -> None:
        if self.mode not in MODES:
            raise InvalidArgumentError(f"unknown sweep mode {self.mode!r}")
        check_capacity(self.alphabet, self.neighborhood)
        if self.block_size < 1:
            raise InvalidArgumentError("block_size must be >= 1")
        if self.jobs < 1:
            raise InvalidArgumentError("jobs must be >= 1")
        if self.max_buckets < 1:
            raise InvalidArgumentError("max_buckets must be >= 1")
        if self.sample_count is not None:
            if self.lo is not None or self.hi is not None:
                raise InvalidArgumentError(
                    "give either a rule range or a sample, not both"
                )
            if not 1 <= self.sample_count <= self.space_size:
                raise InvalidArgumentError("sample count outside rule space")
        else:
            lo, hi = self.resolved_range()
            if not 0 <= lo < hi <= self.space_size:
                raise InvalidArgumentError(
                    f"rule range [{lo}, {hi}) invalid for space of size "
                    f"{self.space_size}"
                )

    def identity(self) -> dict:
        """Fields that define the sweep's results (hashable for resume)."""
        return {
            "p": self.p,
            "r_l": self.r_l,
            "r_r": self.r_r,
            "mode": self.mode,
            "lo": self.lo,
            "hi": self.hi,
            "sample_count": self.sample_count,
            "sample_seed": self.sample_seed,
            "block_size": self.block_size,
            "max_buckets": self.max_buckets,
        }

    def spec_hash(self) -> str:
        blob = json.dumps(self.identity(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class SweepReport:
    spec: SweepSpec
    records: list[tuple]
    aggregate: dict
    wall_seconds: float  # informational only; never rendered


def _sample_numbers(spec: SweepSpec) -> list[int]:
    return sample_rule_numbers(spec.space_size, spec.sample_count,
                               spec.sample_seed)


def _num_blocks(spec: SweepSpec, universe_len: int) -> int:
    return (universe_len + spec.block_size - 1) // spec.block_size


def _tables_matrix(numbers, p: int, k: int) -> np.ndarray:
    entries = p**k
    out = np.zeros((len(numbers), entries), dtype=np.int64)
    if numbers and max(numbers) < (1 << 62):
        vec = np.asarray(numbers, dtype=np.int64)
        if p == 2:
            for e in range(entries):
                out[:, e] = (vec >> e) & 1
        else:
            work = vec.copy()
            for e in range(entries):
                out[:, e] = work % p
                work //= p
    else:
        for row, number in enumerate(numbers):
            v = number
            for e in range(entries):
                out[row, e] = v % p
                v //= p
    return out


def _classify(func: ReversibilityFunction) -> str:
    if func.all_ones():
        return "always"
    if func.any_true():
        return "sometimes"
    return "never"


def _bits_str(values) -> str:
    return "".join("1" if v else "0" for v in values)


def func_from_bits(transient_bits: str, cycle_bits: str,
                   buckets: int) -> ReversibilityFunction:
    """Rebuild a reversibility function from its serialized bit strings."""
    return ReversibilityFunction(
        tuple(c == "1" for c in transient_bits),
        tuple(c == "1" for c in cycle_bits),
        buckets,
    )


def _strict_block(spec: SweepSpec, numbers, rng: tuple[int, int] | None):
    kern = _backend.kernels()
    width = spec.p ** (spec.neighborhood.k - 1)
    limit = kern.STRICT_WIDTH_LIMIT
    if limit is not None and width > limit:
        kern = _backend.numpy_kernels()
        limit = None
    if rng is not None and (limit is None or rng[1] < (1 << 62)):
        flags = kern.strict_flags_for_range(rng[0], rng[1], spec.p,
                                            spec.r_l, spec.r_r)
        return [(rng[0] + int(i),) for i in np.nonzero(flags)[0]]
    numbers = list(numbers)
    tables = _tables_matrix(numbers, spec.p, spec.neighborhood.k)
    flags = kern.strict_flags_for_tables(tables, spec.p, spec.r_l, spec.r_r)
    return [(numbers[int(i)],) for i in np.nonzero(flags)[0]]


def _revfun_block(spec: SweepSpec, numbers):
    kern = _backend.kernels()
    width = spec.p ** (spec.neighborhood.k - 1)
    limit = kern.REVFUN_WIDTH_LIMIT
    if limit is not None and width > limit:
        kern = _backend.numpy_kernels()
    numbers = list(numbers)
    tables = _tables_matrix(numbers, spec.p, spec.neighborhood.k)
    status, n_buckets, t_len, period, t_bits, c_bits = kern.revfun_for_tables(
        tables, spec.p, spec.r_l, spec.r_r, spec.max_buckets
    )
    records = []
    for i, number in enumerate(numbers):
        if status[i] == 0:
            trans = tuple(bool((int(t_bits[i]) >> j) & 1)
                          for j in range(int(t_len[i])))
            cyc = tuple(bool((int(c_bits[i]) >> j) & 1)
                        for j in range(int(period[i])))
            func = ReversibilityFunction(trans, cyc, int(n_buckets[i]))
        elif status[i] == kern.REV_BITS_OVERFLOW:
            rule = rule_from_number(number, spec.alphabet, spec.neighborhood)
            func = reversibility_function(rule, spec.max_buckets)
        else:
            raise BudgetError(
                f"rule {number}: bucket budget {spec.max_buckets} exceeded"
            )
        records.append((number, _classify(func), _bits_str(func.transient),
                        _bits_str(func.cycle), func.distinct_buckets))
    return records


def _surjectivity_block(spec: SweepSpec, numbers):
    records = []
    for number in numbers:
        rule = rule_from_number(number, spec.alphabet, spec.neighborhood)
        verdict, _ = decide_surjective(rule, OPTIMIZED, b=0)
        records.append((
            number,
            "surjective" if verdict.surjective else "non-surjective",
            verdict.node_count,
        ))
    return records


def _node_count_block(spec: SweepSpec, numbers):
    records = []
    for number in numbers:
        rule = rule_from_number(number, spec.alphabet, spec.neighborhood)
        full_v, _ = decide_surjective(rule, FULL, b=0)
        opt_v, _ = decide_surjective(rule, OPTIMIZED, b=0)
        verdict = "surjective" if full_v.surjective else "non-surjective"
        records.append((number, verdict, full_v.node_count,
                        opt_v.node_count))
    return records


def _compute_block(spec: SweepSpec, numbers, rng=None):
    if spec.mode == "strict":
        return _strict_block(spec, numbers, rng)
    if spec.mode == "revfun":
        return _revfun_block(spec, numbers)
    if spec.mode == "surjectivity":
        return _surjectivity_block(spec, numbers)
    return _node_count_block(spec, numbers)


def _load_journal(path: str, expected_hash: str) -> dict[int, list[tuple]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        return {}
    if not lines:
        return {}
    done: dict[int, list[tuple]] = {}
    for lineno, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            if lineno == len(lines) - 1:
                break  # torn final write from a killed run; recompute it
            raise CheckpointError(f"{path}: corrupt journal line {lineno + 1}")
        if lineno == 0:
            if (obj.get("kind") != "header"
                    or obj.get("format") != JOURNAL_VERSION):
                raise CheckpointError(f"{path}: not a sweep journal")
            if obj.get("spec_hash") != expected_hash:
                raise CheckpointError(
                    f"{path}: journal belongs to a different sweep spec"
                )
        elif obj.get("kind") == "block":
            done[int(obj["index"])] = [tuple(r) for r in obj["records"]]
        else:
            raise CheckpointError(f"{path}: unexpected journal line {lineno + 1}")
    return done


def _aggregate(spec: SweepSpec, records, universe_len: int) -> dict:
    counts: dict[str, int] = {}
    max_buckets_seen = None
    if spec.mode == "strict":
        counts["strict"] = len(records)
        counts["not-strict"] = universe_len - len(records)
    else:
        for rec in records:
            counts[rec[1]] = counts.get(rec[1], 0) + 1
        if spec.mode == "revfun":
            max_buckets_seen = max((rec[4] for rec in records), default=0)
    agg = {"rules": universe_len, "counts": counts}
    if max_buckets_seen is not None:
        agg["max_buckets_seen"] = max_buckets_seen
    return agg


def sweep(spec: SweepSpec, block_callback=None) -> SweepReport:
    """Run a sweep; returns the deterministic report.

    `block_callback(block_index, records)` is invoked in ascending block
    order (including blocks restored from the checkpoint journal), which
    lets the CLI stream rows while keeping output byte-identical across
    parallelism and resume.
    """
    spec.validate()
    started = time.perf_counter()

    if spec.sample_count is not None:
        universe = _sample_numbers(spec)
        universe_len = len(universe)

        def block_numbers(i):
            return universe[i * spec.block_size:(i + 1) * spec.block_size]

        def block_range(i):
            return None
    else:
        lo, hi = spec.resolved_range()
        universe_len = hi - lo

        def block_numbers(i):
            return range(lo + i * spec.block_size,
                         min(lo + (i + 1) * spec.block_size, hi))

        def block_range(i):
            return (lo + i * spec.block_size,
                    min(lo + (i + 1) * spec.block_size, hi))

    nblocks = _num_blocks(spec, universe_len)
    results: dict[int, list[tuple]] = {}
    journal = None
    if spec.checkpoint_path:
        results = _load_journal(spec.checkpoint_path, spec.spec_hash())
        results = {i: recs for i, recs in results.items() if i < nblocks}
        journal = open(spec.checkpoint_path, "a", encoding="utf-8")
        if journal.tell() == 0:
            journal.write(json.dumps({
                "kind": "header", "format": JOURNAL_VERSION,
                "spec_hash": spec.spec_hash(),
            }) + "\n")
            journal.flush()

    next_emit = 0

    def flush_ready():
        nonlocal next_emit
        while next_emit in results:
            if block_callback is not None:
                block_callback(next_emit, results[next_emit])
            next_emit += 1

    def record_done(index, records):
        results[index] = records
        if journal is not None:
            journal.write(json.dumps({
                "kind": "block", "index": index,
                "records": [list(r) for r in records],
            }) + "\n")
            journal.flush()
        flush_ready()

    try:
        flush_ready()
        pending = [i for i in range(nblocks) if i not in results]
        if spec.jobs <= 1 or len(pending) <= 1:
            for i in pending:
                record_done(i, _compute_block(spec, block_numbers(i),
                                              block_range(i)))
        else:
            with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
                futures = {
                    pool.submit(_compute_block, spec, block_numbers(i),
                                block_range(i)): i
                    for i in pending
                }
                for fut in as_completed(futures):
                    record_done(futures[fut], fut.result())
    finally:
        if journal is not None:
            journal.close()

    records = [rec for i in range(nblocks) for rec in results[i]]
    aggregate = _aggregate(spec, records, universe_len)
    return SweepReport(spec, records, aggregate,
                       time.perf_counter() - started)


def strict_rule_set(spec: SweepSpec) -> set[int]:
    """Convenience: the set of strictly reversible rule numbers found."""
    if spec.mode != "strict":
        raise InvalidArgumentError("strict_rule_set needs a strict-mode spec")
    return {rec[0] for rec in sweep(spec).records}


# ---------------------------------------------------------------------------
# report rendering

def record_to_csv_fields(mode: str, rec: tuple) -> tuple:
    if mode == "strict":
        return (rec[0], "strict", "", "", "", "", "")
    if mode == "revfun":
        return (rec[0], rec[1], rec[2], rec[3], rec[4], "", "")
    if mode == "surjectivity":
        return (rec[0], rec[1], "", "", "", "", rec[2])
    return (rec[0], rec[1], "", "", "", rec[2], rec[3])


def render_report(report: SweepReport, fmt: str = "csv") -> str:
    mode = report.spec.mode
    if fmt == "csv":
        lines = [CSV_HEADER]
        for rec in report.records:
            lines.append(",".join(str(f) for f in
                                  record_to_csv_fields(mode, rec)))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "spec": report.spec.identity(),
            "records": [list(rec) for rec in report.records],
            "aggregate": report.aggregate,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "plain":
        lines = [f"mode {mode}  rules {report.aggregate['rules']}"]
        for rec in report.records:
            lines.append("  " + "  ".join(str(f) for f in rec))
        for key, val in sorted(report.aggregate["counts"].items()):
            lines.append(f"{key}: {val}")
        if "max_buckets_seen" in report.aggregate:
            lines.append(
                f"max buckets seen: {report.aggregate['max_buckets_seen']}"
            )
        return "\n".join(lines) + "\n"
    raise InvalidArgumentError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# paper-style comparison reports

@dataclass(frozen=True)
class NodeCountRow:
    rule: int
    b: int
    verdict: str
    nodes_full: int
    nodes_opt: int


def table2_report(rules=DEFAULT_NODE_COUNT_RULES, p: int = 2, r_l: int = 1,
                  r_r: int = 1) -> list[NodeCountRow]:
    """Full-vs-optimized node counts, per rule and per seed state b.

    Counts are taken at the construction's natural stopping point: full
    closure for surjective rules, the first empty node (which is itself
    counted) otherwise.
    """
    alphabet = Alphabet(p)
    nb = Neighborhood(r_l, r_r)
    rows = []
    for number in rules:
        rule = rule_from_number(number, alphabet, nb)
        for b in range(p):
            full_v, _ = decide_surjective(rule, FULL, b)
            opt_v, _ = decide_surjective(rule, OPTIMIZED, b)
            verdict = "surjective" if full_v.surjective else "non-surjective"
            rows.append(NodeCountRow(number, b, verdict, full_v.node_count,
                                     opt_v.node_count))
    return rows


@dataclass(frozen=True)
class FunctionClass:
    description: str
    canonical: tuple
    members: tuple[int, ...]


def table5_report(p: int = 2, r_l: int = 1, r_r: int = 1,
                  max_buckets: int = DEFAULT_MAX_BUCKETS
                  ) -> list[FunctionClass]:
    """Rules reversible for some cell count >= 2, grouped by identical
    reversibility function; groups ordered by smallest member."""
    spec = SweepSpec(p=p, r_l=r_l, r_r=r_r, mode="revfun",
                     max_buckets=max_buckets)
    report = sweep(spec)
    groups: dict[tuple, list[int]] = {}
    descriptions: dict[tuple, str] = {}
    for number, _, t_bits, c_bits, buckets in report.records:
        func = func_from_bits(t_bits, c_bits, buckets)
        if not func.any_true(n_from=2):
            continue
        key = func.canonical()
        groups.setdefault(key, []).append(number)
        descriptions.setdefault(key, func.describe())
    ordered = sorted(groups.items(), key=lambda item: min(item[1]))
    return [FunctionClass(descriptions[key], key, tuple(sorted(members)))
            for key, members in ordered]
