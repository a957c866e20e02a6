"""Deque and two-stacks-in-parallel machines.

Operation sequences are words over I1, I2, O1, O2 (input to / output from
end 1 or end 2).  On the deque, end 1 is the top and end 2 the bottom; on
two parallel stacks the subscript names the stack.  Words serialize over
the alphabet ``a b A B`` = I1 I2 O1 O2.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import OracleScaleError


class Operation(enum.Enum):
    I1 = "a"
    I2 = "b"
    O1 = "A"
    O2 = "B"

    @property
    def is_input(self) -> bool:
        return self.value in "ab"

    @property
    def end(self) -> int:
        return 1 if self.value in "aA" else 2


_BY_NAME = {op.name: op for op in Operation}
_BAD_PAIRS = ("aB", "bA")


class InvalidSequence(ValueError):
    pass


@dataclass(frozen=True)
class OperationSequence:
    word: str

    def __post_init__(self):
        if set(self.word) - set("abAB"):
            raise ValueError(f"letters outside a, b, A, B in {self.word!r}")

    @classmethod
    def parse(cls, text: str) -> "OperationSequence":
        """Accept either ``"I1 I2 O2 O1"`` or the compact ``"abBA"``."""
        parts = text.split()
        if parts and all(p in _BY_NAME for p in parts):
            return cls("".join(_BY_NAME[p].value for p in parts))
        return cls("".join(parts))

    @classmethod
    def of(cls, ops: Iterable[Operation]) -> "OperationSequence":
        return cls("".join(op.value for op in ops))

    @property
    def ops(self) -> tuple[Operation, ...]:
        return tuple(Operation(c) for c in self.word)

    def __str__(self) -> str:
        return " ".join(op.name for op in self.ops)

    def __len__(self) -> int:
        return len(self.word)

    def __add__(self, other: "OperationSequence") -> "OperationSequence":
        return OperationSequence(self.word + other.word)


Word = str | OperationSequence


def _w(seq: Word) -> str:
    return seq.word if isinstance(seq, OperationSequence) else seq


def is_operation_sequence(seq: Word) -> bool:
    height = 0
    for c in _w(seq):
        height += 1 if c in "ab" else -1
        if height < 0:
            return False
    return height == 0


def _require_valid(w: str) -> None:
    if not is_operation_sequence(w):
        raise InvalidSequence("invalid operation sequence")


def apply_deque(seq: Word) -> tuple[int, ...]:
    """Output permutation when inputs 1, 2, ... are fed through the deque."""
    from collections import deque
    w = _w(seq)
    _require_valid(w)
    dq: deque[int] = deque()
    nxt, out = 1, []
    for c in w:
        if c == "a":
            dq.appendleft(nxt)
            nxt += 1
        elif c == "b":
            dq.append(nxt)
            nxt += 1
        elif c == "A":
            out.append(dq.popleft())
        else:
            out.append(dq.pop())
    return tuple(out)


def apply_tsip(seq: Word) -> tuple[int, ...]:
    """Output permutation on two parallel stacks; the word must be a tsip word."""
    w = _w(seq)
    if not is_tsip_word(w):
        raise InvalidSequence("invalid operation sequence")
    stacks = {1: [], 2: []}
    nxt, out = 1, []
    for c in w:
        op = Operation(c)
        if op.is_input:
            stacks[op.end].append(nxt)
            nxt += 1
        else:
            out.append(stacks[op.end].pop())
    return tuple(out)


def is_tsip_word(seq: Word) -> bool:
    """Balanced and prefix-dominant separately in subscript 1 and subscript 2."""
    c1 = c2 = 0
    for c in _w(seq):
        if c == "a":
            c1 += 1
        elif c == "A":
            c1 -= 1
            if c1 < 0:
                return False
        elif c == "b":
            c2 += 1
        else:
            c2 -= 1
            if c2 < 0:
                return False
    return c1 == 0 and c2 == 0


def outputs_eagerly(seq: Word) -> bool:
    w = _w(seq)
    return not any(p in w for p in _BAD_PAIRS)


def is_top_happy(seq: Word) -> bool:
    height = 0
    for c in _w(seq):
        if c in "bB" and height < 2:
            return False
        height += 1 if c in "ab" else -1
    return True


def is_standard_naive(seq: Word) -> bool:
    """Every nonempty tsip factor starts with I1, by scanning all factors."""
    w = _w(seq)
    n = len(w)
    for i in range(n):
        for j in range(i + 1, n + 1):
            if is_tsip_word(w[i:j]) and w[i] != "a":
                return False
    return True


def is_canonical_naive(seq: Word) -> bool:
    w = _w(seq)
    _require_valid(w)
    return outputs_eagerly(w) and is_top_happy(w) and is_standard_naive(w)


@dataclass(frozen=True)
class Decomposition:
    skeleton: str
    insertions: tuple[str, ...]
    tail: str

    def reassemble(self) -> str:
        parts = []
        for i, x in enumerate(self.skeleton):
            parts.append(x)
            if i < len(self.insertions):
                parts.append(self.insertions[i])
        return "".join(parts) + self.tail


def _longest_tsip_from(w: str, start: int, stop: int) -> int:
    """End index of the longest tsip factor w[start:end] with end <= stop."""
    c1 = c2 = 0
    best = start
    for j in range(start, stop):
        c = w[j]
        if c == "a":
            c1 += 1
        elif c == "b":
            c2 += 1
        elif c == "A":
            c1 -= 1
        else:
            c2 -= 1
        if c1 < 0 or c2 < 0:
            break
        if c1 == 0 and c2 == 0:
            best = j + 1
    return best


def decompose(seq: Word) -> Decomposition:
    """Split at the first return to an empty deque, then peel maximal tsip factors."""
    w = _w(seq)
    if not w:
        raise InvalidSequence("cannot decompose the empty sequence")
    _require_valid(w)
    height, cut = 0, 0
    for i, c in enumerate(w):
        height += 1 if c in "ab" else -1
        if height == 0:
            cut = i + 1
            break
    skeleton, inserts = [], []
    pos = 0
    while pos < cut:
        skeleton.append(w[pos])
        pos += 1
        if pos == cut:
            break
        end = _longest_tsip_from(w, pos, cut)
        inserts.append(w[pos:end])
        pos = end
    return Decomposition("".join(skeleton), tuple(inserts), w[cut:])


def _has_i2_tsip_prefix(w: str) -> bool:
    if not w or w[0] != "b":
        return False
    return _longest_tsip_from(w, 0, len(w)) > 0


def _standard_and_eager(w: str) -> bool:
    """Standard and outputs eagerly, recursing through the decomposition.

    Every tsip factor that is not a prefix lies inside an insertion or the
    tail, and an I-then-O factor can only straddle the skeleton where an
    insertion is empty.
    """
    if not w:
        return True
    if _has_i2_tsip_prefix(w):
        return False
    d = decompose(w)
    for i, ins in enumerate(d.insertions):
        if not ins and d.skeleton[i:i + 2] in _BAD_PAIRS:
            return False
        if not _standard_and_eager(ins):
            return False
    return _standard_and_eager(d.tail)


def is_canonical(seq: Word) -> bool:
    """Canonicality through the four decomposition conditions."""
    w = _w(seq)
    _require_valid(w)
    while w:
        d = decompose(w)
        if not is_top_happy(d.skeleton):
            return False
        for i, ins in enumerate(d.insertions):
            if not ins and d.skeleton[i:i + 2] in _BAD_PAIRS:
                return False
            if not _standard_and_eager(ins):
                return False
        w = d.tail
    return True


def operation_type(seq: Word) -> str:
    """The I/O pattern of a word, e.g. ``"IIOO"``."""
    return "".join("I" if c in "ab" else "O" for c in _w(seq))


def all_operation_sequences(length: int) -> Iterator[str]:
    """Every valid operation sequence of the given (even) length."""
    if length % 2:
        return
    n = length // 2
    for pattern in _dyck_patterns(n):
        for subs in itertools.product("12", repeat=length):
            yield "".join(("a" if s == "1" else "b") if p == "I" else ("A" if s == "1" else "B")
                          for p, s in zip(pattern, subs))


def _dyck_patterns(n: int) -> Iterator[str]:
    def rec(prefix: str, up: int, down: int):
        if up == n and down == n:
            yield prefix
            return
        if up < n:
            yield from rec(prefix + "I", up + 1, down)
        if down < up:
            yield from rec(prefix + "O", up, down + 1)
    yield from rec("", 0, 0)


SORTABLE_LIMIT = 10
CANONICAL_LIMIT = 9
M_LIMIT = 7


def _extend_deque(state: tuple[tuple[int, ...], int], v: int) -> Iterator[tuple[tuple[int, ...], int]]:
    dq, nxt = state
    if v < nxt:
        if dq and dq[0] == v:
            yield dq[1:], nxt
        if dq and dq[-1] == v:
            yield dq[:-1], nxt
        return
    # push nxt..v, each at either end, then pop v from the end it went to
    for ends in itertools.product((0, 1), repeat=v - nxt):
        cur = list(dq)
        for value, e in zip(range(nxt, v), ends):
            if e == 0:
                cur.insert(0, value)
            else:
                cur.append(value)
        yield tuple(cur), v + 1


def _extend_tsip(state, v):
    (s1, s2), nxt = state
    if v < nxt:
        if s1 and s1[-1] == v:
            yield (s1[:-1], s2), nxt
        if s2 and s2[-1] == v:
            yield (s1, s2[:-1]), nxt
        return
    for ends in itertools.product((0, 1), repeat=v - nxt):
        a, b = list(s1), list(s2)
        for value, e in zip(range(nxt, v), ends):
            (a if e == 0 else b).append(value)
        yield (tuple(a), tuple(b)), v + 1


def count_sortable(n: int, machine: str = "deque") -> int:
    """Number of permutations of length n the machine can produce.

    Output prefixes are grown one value at a time; for each prefix the set
    of reachable machine states (contents, next input) is kept without
    duplicates, and a prefix survives while that set is nonempty.  Nothing
    about canonical words is used.
    """
    if n > SORTABLE_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    if machine == "deque":
        extend, start = _extend_deque, ((), 1)
    elif machine == "tsip":
        extend, start = _extend_tsip, (((), ()), 1)
    else:
        raise ValueError(f"unknown machine {machine!r}")

    def grow(states: frozenset, used: int) -> int:
        if used == (1 << n) - 1:
            return 1
        total = 0
        for v in range(1, n + 1):
            if used >> (v - 1) & 1:
                continue
            nxt_states = frozenset(s for st in states for s in extend(st, v))
            if nxt_states:
                total += grow(nxt_states, used | 1 << (v - 1))
        return total

    return grow(frozenset([start]), 0)


def _closes_tsip_from_i2(w: list[str]) -> bool:
    """Does the last letter complete a tsip factor that starts with I2?"""
    end = len(w)
    c1 = c2 = 0
    # walk backwards; a factor w[j:end] is tsip iff its totals vanish and
    # every prefix of it is dominant, checked forward once totals vanish
    for j in range(end - 1, -1, -1):
        c = w[j]
        if c == "a":
            c1 += 1
        elif c == "A":
            c1 -= 1
        elif c == "b":
            c2 += 1
        else:
            c2 -= 1
        if c1 == 0 and c2 == 0 and c == "b" and is_tsip_word("".join(w[j:end])):
            return True
    return False


def _generate(n: int, *, tsip: bool, top_happy: bool) -> Iterator[str]:
    """Eager, standard words of length 2n, optionally tsip or top happy."""
    w: list[str] = []

    def rec(inputs: int, height: int, c1: int, c2: int):
        if len(w) == 2 * n:
            yield "".join(w)
            return
        for c in "abAB":
            if c in "ab":
                if inputs == n:
                    continue
            elif height == 0:
                continue
            if top_happy and c in "bB" and height < 2:
                continue
            if tsip and ((c == "A" and c1 == 0) or (c == "B" and c2 == 0)):
                continue
            if w and (w[-1] + c) in _BAD_PAIRS:
                continue
            w.append(c)
            if not (c in "AB" and _closes_tsip_from_i2(w)):
                yield from rec(inputs + (c in "ab"), height + (1 if c in "ab" else -1),
                               c1 + (c == "a") - (c == "A"), c2 + (c == "b") - (c == "B"))
            w.pop()

    yield from rec(0, 0, 0, 0)


def canonical_sequences(n: int) -> Iterator[str]:
    return _generate(n, tsip=False, top_happy=True)


def count_canonical(n: int) -> int:
    if n > CANONICAL_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    return sum(1 for _ in canonical_sequences(n))


def count_eager_standard_tsip(n: int) -> int:
    if n > CANONICAL_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    return sum(1 for _ in _generate(n, tsip=True, top_happy=False))


def is_unbreakable(seq: Word) -> bool:
    w = _w(seq)
    if not w or not is_operation_sequence(w):
        return False
    height = 0
    for c in w[:-1]:
        height += 1 if c in "ab" else -1
        if height == 0:
            return False
    for i in range(len(w)):
        for j in range(i + 2, len(w) + 1):
            if (i, j) != (0, len(w)) and is_tsip_word(w[i:j]):
                return False
    return True


def m_statistics(seq: Word) -> tuple[int, int]:
    """(q, r): I1O2/I2O1 factors, and gaps after a letter with one item held."""
    w = _w(seq)
    q = sum(w[i:i + 2] in _BAD_PAIRS for i in range(len(w) - 1))
    height, r = 0, 0
    for c in w[:-1]:
        height += 1 if c in "ab" else -1
        r += height == 1
    return q, r


def enumerate_M(half_len_max: int) -> dict[int, dict[tuple[int, int], int]]:
    """Top happy unbreakable words: m -> {(q, r): count}."""
    if half_len_max > M_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    table: dict[int, dict[tuple[int, int], int]] = {m: {} for m in range(1, half_len_max + 1)}
    w: list[str] = []

    def proper_tsip_suffix() -> bool:
        for j in range(1, len(w) - 1):
            if is_tsip_word("".join(w[j:])):
                return True
        return False

    def rec(height: int, inputs: int):
        if w and height == 0:
            m = len(w) // 2
            key = m_statistics("".join(w))
            table[m][key] = table[m].get(key, 0) + 1
            return
        for c in "abAB":
            if c in "ab" and inputs == half_len_max:
                continue
            if c in "AB" and height == 0:
                continue
            if c in "bB" and height < 2:
                continue
            w.append(c)
            if not proper_tsip_suffix():
                rec(height + (1 if c in "ab" else -1), inputs + (c in "ab"))
            w.pop()

    rec(0, 0)
    return {m: dict(sorted(v.items())) for m, v in table.items()}
