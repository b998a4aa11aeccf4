"""The four composition operators.

* inductive: t(r1<-s1, ..., rm<-sm), simultaneous replacement of every
  occurrence of each pattern term;
* positional: t(S;T), replacement at an explicit tuple of pairwise
  incomparable positions;
* theory composition: replace at the prefix-minimal positions of subterms
  provably equal to r;
* star (essential) composition: like theory composition, but only at the
  prefix-minimal match positions whose whole subtree consists of essential
  positions.

Replacement position sets are always computed on the input term first and
rewritten in one pass; nothing cascades.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncomparablePositionsError, NestedPatternsError, UndecidedError
from .essentiality import essentiality_report
from .terms import (
    Node,
    Position,
    Term,
    Var,
    is_valid_position,
    position_to_text,
    positions,
    prefix_leq,
    replace_at,
    subterm_at,
    subterm_set,
)
from .theories import Theory


def inductive_compose(t: Term, pairs) -> Term:
    """Simultaneously replace every occurrence of each r_i in t by s_i.

    Patterns must be distinct and mutually non-nested; occurrences inside the
    substituted terms are not rescanned.
    """
    pairs = list(pairs)
    patterns = [r for r, _ in pairs]
    for i, r in enumerate(patterns):
        for j, r2 in enumerate(patterns):
            if i == j:
                continue
            if r == r2:
                raise NestedPatternsError(f"pattern {r} listed twice")
            if r in subterm_set(r2):
                raise NestedPatternsError(f"pattern {r} is a subterm of pattern {r2}")
    replacement = dict(pairs)

    def rec(u):
        got = replacement.get(u)
        if got is not None:
            return got
        if isinstance(u, Var):
            return u
        return Node(rec(u.left), rec(u.right))

    return rec(t)


def check_incomparable(entries) -> tuple:
    """Validate pairwise prefix-incomparability of a position tuple."""
    entries = tuple(tuple(p) for p in entries)
    for i, p in enumerate(entries):
        for q in entries[i + 1 :]:
            if prefix_leq(p, q) or prefix_leq(q, p):
                raise IncomparablePositionsError(
                    f"positions {position_to_text(p)} and {position_to_text(q)} "
                    "are prefix-comparable"
                )
    return entries


def positional_compose(t: Term, s, replacements) -> Term:
    """t with subterm_at(t, p_i) replaced by replacements[i] at each p_i in s."""
    entries = check_incomparable(s)
    replacements = list(replacements)
    if len(entries) != len(replacements):
        raise ValueError(
            f"{len(entries)} positions but {len(replacements)} replacement terms"
        )
    for p in entries:
        subterm_at(t, p)  # raises InvalidPositionError on bad positions
    out = t
    for p, r in zip(entries, replacements):
        out = replace_at(out, p, r)
    return out


@dataclass(frozen=True)
class SigmaPositionSets:
    """Positions of subterms of t equal to r in the theory.

    all_matches is the full set; minimal its prefix-minimal elements;
    essential_minimal the members of minimal all of whose subtree positions
    are essential.  A deeper all-essential match nested inside a rejected
    minimal match does not qualify: the essential filter applies to the
    minimal set, it does not re-minimize.
    """

    all_matches: frozenset
    minimal: frozenset
    essential_minimal: frozenset


def _prefix_minimal(ps) -> frozenset:
    return frozenset(
        p for p in ps if not any(q != p and prefix_leq(q, p) for q in ps)
    )


def sigma_match_positions(t: Term, r: Term, theory: Theory) -> frozenset:
    """All positions of subterms of t the theory proves equal to r."""
    matches = set()
    for p in positions(t):
        verdict = theory.equal(subterm_at(t, p), r)
        if verdict is None:
            raise UndecidedError(
                f"equivalence of subterm at {position_to_text(p)} and {r} undecided",
                query=(subterm_at(t, p), r),
            )
        if verdict:
            matches.add(p)
    return frozenset(matches)


def sigma_position_sets(t: Term, r: Term, theory: Theory) -> SigmaPositionSets:
    pos = positions(t)
    matches = sigma_match_positions(t, r, theory)

    report = essentiality_report(t, theory)
    if report.undecided_positions:
        raise UndecidedError(
            f"essentiality undecided at {sorted(report.undecided_positions)} of {t}",
            query=(t, sorted(report.undecided_positions)),
        )
    essential = report.essential_positions
    minimal = _prefix_minimal(matches)
    essential_minimal = frozenset(
        p for p in minimal if all(q in essential for q in pos if prefix_leq(p, q))
    )
    return SigmaPositionSets(frozenset(matches), minimal, essential_minimal)


def sigma_compose(t: Term, r: Term, u: Term, theory: Theory) -> Term:
    """Replace u at the prefix-minimal positions of subterms equal to r."""
    minimal = _prefix_minimal(sigma_match_positions(t, r, theory))
    if not minimal:
        return t
    entries = sorted(minimal)
    return positional_compose(t, entries, [u] * len(entries))


def star_compose(t: Term, r: Term, s: Term, theory: Theory) -> Term:
    """Replace s at the essential prefix-minimal match positions of r in t.

    A term provably equal to the whole pattern becomes the replacement even
    when some of its positions are fictive; otherwise an empty essential
    match set leaves the term unchanged.  The precedence matters: the other
    order would let a replacement rewrite one side of a proved identity while
    fixing the other, breaking soundness of star replacement.
    """
    whole = theory.equal(t, r)
    if whole is None:
        raise UndecidedError(
            f"equivalence of {t} and the pattern {r} undecided", query=(t, r)
        )
    if whole:
        return s
    sets = sigma_position_sets(t, r, theory)
    if not sets.essential_minimal:
        return t
    entries = sorted(sets.essential_minimal)
    return positional_compose(t, entries, [s] * len(entries))
