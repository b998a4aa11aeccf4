"""Terms over a single binary operation symbol, positions, and valuations.

A term is either a variable leaf ``x_i`` (``Var``) or an application of the
one binary symbol ``f`` to two terms (``Node``).  Positions are tuples over
{1, 2} addressing nodes of the term tree; the empty tuple is the root.
Everything here is immutable and pure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import (
    InvalidPositionError,
    MalformedArraysError,
    ParseError,
)

Position = tuple  # tuple of ints over {1, 2}; () is the root
ROOT: Position = ()


class Term:
    """Base class; instances are Var or Node."""

    __slots__ = ()

    # populated by subclasses
    length: int
    size: int
    depth: int

    def __repr__(self):
        return f"Term({term_to_text(self)!r})"

    def __str__(self):
        return term_to_text(self)


class Var(Term):
    """A variable leaf x_i with index i >= 1."""

    __slots__ = ("index",)

    length = 1
    size = 0
    depth = 0

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 1:
            raise ValueError(f"variable index must be a positive integer, got {index!r}")
        object.__setattr__(self, "index", index)

    def __setattr__(self, name, value):
        raise AttributeError("Var is immutable")

    def __eq__(self, other):
        return isinstance(other, Var) and other.index == self.index

    def __hash__(self):
        return hash((0x5661, self.index))


class Node(Term):
    """An application f(left, right); valuations are cached at construction."""

    __slots__ = ("left", "right", "length", "size", "depth", "_hash")

    def __init__(self, left: Term, right: Term):
        if not isinstance(left, Term) or not isinstance(right, Term):
            raise TypeError("Node children must be terms")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "length", left.length + right.length)
        object.__setattr__(self, "size", left.size + right.size + 1)
        object.__setattr__(self, "depth", max(left.depth, right.depth) + 1)
        object.__setattr__(self, "_hash", hash((0x4e4f, hash(left), hash(right))))

    def __setattr__(self, name, value):
        raise AttributeError("Node is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node):
            return False
        if self._hash != other._hash or self.length != other.length:
            return False
        return self.left == other.left and self.right == other.right

    def __hash__(self):
        return self._hash


def v(index: int) -> Var:
    """Shorthand constructor for a variable leaf."""
    return Var(index)


def f(left: Term, right: Term) -> Node:
    """Shorthand constructor for an application node."""
    return Node(left, right)


# ---------------------------------------------------------------------------
# positions and orders


def positions(t: Term):
    """All positions of t, sorted by the padded-lexicographic order.

    For positions over {1, 2} that order coincides with plain tuple
    comparison (a proper prefix sorts before its extensions).
    """
    out = []

    def walk(u, prefix):
        out.append(prefix)
        if isinstance(u, Node):
            walk(u.left, prefix + (1,))
            walk(u.right, prefix + (2,))

    walk(t, ())
    out.sort()
    return tuple(out)


def is_valid_position(t: Term, p: Position) -> bool:
    for d in p:
        if not isinstance(t, Node):
            return False
        t = t.left if d == 1 else t.right
    return True


def subterm_at(t: Term, p: Position) -> Term:
    """The subterm of t rooted at position p."""
    u = t
    for d in p:
        if not isinstance(u, Node) or d not in (1, 2):
            raise InvalidPositionError(
                f"position {position_to_text(p)} is not valid for {term_to_text(t)}"
            )
        u = u.left if d == 1 else u.right
    return u


def replace_at(t: Term, p: Position, s: Term) -> Term:
    """t with the subterm at position p replaced by s (single position)."""
    if not p:
        return s
    if not isinstance(t, Node):
        raise InvalidPositionError(
            f"position {position_to_text(p)} is not valid for {term_to_text(t)}"
        )
    d = p[0]
    if d == 1:
        return Node(replace_at(t.left, p[1:], s), t.right)
    if d == 2:
        return Node(t.left, replace_at(t.right, p[1:], s))
    raise InvalidPositionError(f"bad digit {d} in position")


def prefix_leq(p: Position, q: Position) -> bool:
    """True iff p is a prefix of q (including p == q)."""
    return len(p) <= len(q) and q[: len(p)] == p


def proper_prefix(p: Position, q: Position) -> bool:
    return len(p) < len(q) and q[: len(p)] == p


def lex_compare(p: Position, q: Position) -> int:
    """Padded-lexicographic comparison: -1, 0 or 1.

    The shorter position is conceptually right-padded with 0 before the
    digitwise comparison, so a proper prefix compares below its extensions.
    Over digits {1, 2} this is exactly Python tuple comparison.
    """
    if p == q:
        return 0
    return -1 if p < q else 1


# ---------------------------------------------------------------------------
# valuations and variables


def valuations(t: Term):
    """(Len, Siz, Depth) of t."""
    return (t.length, t.size, t.depth)


def variables(t: Term):
    """Variable indexes at the leaves of t, in left-to-right order."""
    out = []

    def walk(u):
        if isinstance(u, Var):
            out.append(u.index)
        else:
            walk(u.left)
            walk(u.right)

    walk(t)
    return tuple(out)


def kth_variable(t: Term, k: int) -> int:
    """The index of the k-th variable of t in left-to-right leaf order (1-based)."""
    seq = variables(t)
    if not 1 <= k <= len(seq):
        raise IndexError(f"k={k} out of range for a term of length {len(seq)}")
    return seq[k - 1]


def var_set(t: Term):
    """Set of variable indexes occurring in t."""
    return set(variables(t))


def max_var_index(*terms: Term) -> int:
    """Largest variable index occurring in any of the terms (0 if none given)."""
    m = 0
    for t in terms:
        for i in var_set(t):
            if i > m:
                m = i
    return m


def fresh_var_index(*terms: Term) -> int:
    """max index in scope + 1; the x_{n+1} convention."""
    return max_var_index(*terms) + 1


def subterm_set(t: Term):
    """Sub(t): the set of distinct subterms of t."""
    out = set()

    def walk(u):
        if u in out:
            return
        out.add(u)
        if isinstance(u, Node):
            walk(u.left)
            walk(u.right)

    walk(t)
    return out


def substitute(t: Term, mapping) -> Term:
    """Replace each variable x_i with mapping[i] (variables not in mapping stay)."""
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    return Node(substitute(t.left, mapping), substitute(t.right, mapping))


def rename_canonical(t: Term) -> Term:
    """Rename variables to x1, x2, ... by first left-to-right occurrence."""
    seen = {}
    for i in variables(t):
        if i not in seen:
            seen[i] = len(seen) + 1
    return substitute(t, {i: Var(j) for i, j in seen.items()})


# ---------------------------------------------------------------------------
# the array encoding


@dataclass(frozen=True)
class TermArrays:
    """A term as its sorted position list plus its leaf variable indexes."""

    positions: tuple
    var_indexes: tuple


def to_arrays(t: Term) -> TermArrays:
    return TermArrays(positions(t), variables(t))


def from_arrays(a: TermArrays) -> Term:
    """Rebuild a term from its arrays; raises MalformedArraysError on bad input."""
    pos = list(a.positions)
    pos_set = set(pos)
    if len(pos_set) != len(pos) or () not in pos_set:
        raise MalformedArraysError("position list must contain the root and no duplicates")
    for p in pos_set:
        if any(d not in (1, 2) for d in p):
            raise MalformedArraysError(f"bad digit in position {position_to_text(p)}")
        if p and p[:-1] not in pos_set:
            raise MalformedArraysError(f"position list is not prefix-closed at {position_to_text(p)}")
    leaves = []
    for p in sorted(pos_set):
        c1, c2 = p + (1,), p + (2,)
        has1, has2 = c1 in pos_set, c2 in pos_set
        if has1 != has2:
            raise MalformedArraysError(f"node at {position_to_text(p)} has exactly one child")
        if not has1:
            leaves.append(p)
    if len(leaves) != len(a.var_indexes):
        raise MalformedArraysError(
            f"{len(leaves)} leaves but {len(a.var_indexes)} variable indexes"
        )
    if tuple(a.positions) != tuple(sorted(pos_set)):
        raise MalformedArraysError("positions are not in padded-lexicographic order")
    leaf_vars = dict(zip(leaves, a.var_indexes))

    def build(p):
        if p in leaf_vars:
            return Var(leaf_vars[p])
        return Node(build(p + (1,)), build(p + (2,)))

    return build(())


# ---------------------------------------------------------------------------
# text syntax: f(A,B) nodes, x<digits> leaves; positions as digit strings, e = root


def term_to_text(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    return f"f({term_to_text(t.left)},{term_to_text(t.right)})"


def parse_term(text: str) -> Term:
    s = "".join(text.split())
    term, rest = _parse_term(s)
    if rest:
        raise ParseError(f"trailing input {rest!r} after term")
    return term


def _parse_term(s: str):
    if s.startswith("f("):
        left, rest = _parse_term(s[2:])
        if not rest.startswith(","):
            raise ParseError(f"expected ',' at {rest!r}")
        right, rest = _parse_term(rest[1:])
        if not rest.startswith(")"):
            raise ParseError(f"expected ')' at {rest!r}")
        return Node(left, right), rest[1:]
    if s.startswith("x"):
        i = 1
        while i < len(s) and s[i].isdigit():
            i += 1
        if i == 1:
            raise ParseError(f"expected digits after 'x' at {s!r}")
        return Var(int(s[1:i])), s[i:]
    raise ParseError(f"expected term at {s!r}")


def position_to_text(p: Position) -> str:
    return "e" if not p else "".join(str(d) for d in p)


def parse_position(text: str) -> Position:
    s = text.strip()
    if s == "e" or s == "":
        return ()
    if not all(c in "12" for c in s):
        raise ParseError(f"position must be over digits 1/2 or 'e', got {text!r}")
    return tuple(int(c) for c in s)


# ---------------------------------------------------------------------------
# enumeration and random generation helpers


def enumerate_terms(max_depth: int, num_vars: int):
    """All terms of depth <= max_depth over variables x1..x_num_vars."""
    by_depth = [tuple(Var(i) for i in range(1, num_vars + 1))]
    yield from by_depth[0]
    for d in range(1, max_depth + 1):
        upto_prev = tuple(itertools.chain.from_iterable(by_depth))
        exact_prev = by_depth[d - 1]
        level = []
        # at least one child must have depth exactly d-1
        for a in exact_prev:
            for b in upto_prev:
                level.append(Node(a, b))
        for a in upto_prev:
            if a.depth < d - 1:
                for b in exact_prev:
                    level.append(Node(a, b))
        by_depth.append(tuple(level))
        yield from level


def enumerate_terms_by_length(max_length: int, num_vars: int):
    """All terms with Len <= max_length over x1..x_num_vars."""
    by_len = {1: tuple(Var(i) for i in range(1, num_vars + 1))}
    yield from by_len[1]
    for n in range(2, max_length + 1):
        level = []
        for k in range(1, n):
            for a in by_len[k]:
                for b in by_len[n - k]:
                    level.append(Node(a, b))
        by_len[n] = tuple(level)
        yield from level


def random_term(rng: random.Random, max_depth: int, num_vars: int, leaf_prob: float = 0.4) -> Term:
    """A random term of depth <= max_depth; leaves drawn uniformly."""
    if max_depth == 0 or rng.random() < leaf_prob:
        return Var(rng.randint(1, num_vars))
    return Node(
        random_term(rng, max_depth - 1, num_vars, leaf_prob),
        random_term(rng, max_depth - 1, num_vars, leaf_prob),
    )
