"""The length-reducing abstract reduction system and its normal forms.

Two reductions on terms, both strictly decreasing Len:

* S-steps contract a reducible pair (p, q): nested positions whose subterms
  the theory proves equal, with outermost head p and maximal tail q; the
  subterm at p is replaced by the one at q.
* E-steps remove the parent of a removable (fictive) position, replacing it
  by the sibling subterm.

normal_form drives either reduction with the minimal-redex strategy; the
seeded strategy runner exists to test uniqueness of normal forms.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import NotReducibleError, NotRemovableError, UndecidedError
from .essentiality import essentiality_report
from .terms import (
    Position,
    Term,
    position_to_text,
    positions,
    prefix_leq,
    proper_prefix,
    replace_at,
    subterm_at,
    term_to_text,
)
from .theories import Theory


@dataclass(frozen=True)
class ReduciblePair:
    p: Position
    q: Position

    def __post_init__(self):
        if not proper_prefix(self.p, self.q):
            raise ValueError(
                f"{position_to_text(self.p)} is not a proper prefix of "
                f"{position_to_text(self.q)}"
            )


@dataclass
class ReductionTrace:
    start: Term
    steps: list = field(default_factory=list)  # (kind, datum, result) triples

    def record(self, kind, datum, result):
        self.steps.append((kind, datum, result))

    @property
    def final(self):
        return self.steps[-1][2] if self.steps else self.start

    def to_json(self):
        def datum_text(kind, datum):
            if kind == "S":
                return {
                    "p": position_to_text(datum.p),
                    "q": position_to_text(datum.q),
                }
            return {"position": position_to_text(datum)}

        return {
            "start": term_to_text(self.start),
            "steps": [
                {"kind": kind, **datum_text(kind, datum), "result": term_to_text(result)}
                for kind, datum, result in self.steps
            ],
        }

    def to_json_text(self):
        return json.dumps(self.to_json(), indent=2)


def _theory_cache(theory: Theory, name: str):
    cache = getattr(theory, name, None)
    if cache is None:
        cache = {}
        setattr(theory, name, cache)
    return cache


def reducible_pairs(t: Term, theory: Theory) -> frozenset:
    """Rd(t): all reducible pairs, outermost heads with maximal tails, plus
    the nested pairs obtained by composing through a pair's tail subterm."""
    cache = _theory_cache(theory, "_rd_cache")
    got = cache.get(t)
    if got is not None:
        return got

    pos = positions(t)
    if theory.exact:
        key = {p: theory._cached_key(subterm_at(t, p)) for p in pos}

        def eq(a, b):
            return key[a] == key[b]

    else:

        def eq(a, b):
            verdict = theory.equal(subterm_at(t, a), subterm_at(t, b))
            if verdict is None:
                raise UndecidedError(
                    f"equivalence of subterms at {position_to_text(a)} and "
                    f"{position_to_text(b)} undecided",
                    query=(subterm_at(t, a), subterm_at(t, b)),
                )
            return verdict

    heads = set()
    for p in pos:
        if any(proper_prefix(p, q) and eq(p, q) for q in pos):
            heads.add(p)
    minimal_heads = {p for p in heads if not any(proper_prefix(h, p) for h in heads)}

    pairs = set()
    for p in minimal_heads:
        for q in pos:
            if not proper_prefix(p, q) or not eq(p, q):
                continue
            if any(proper_prefix(q, q2) and eq(q2, p) for q2 in pos):
                continue  # tail not maximal
            pairs.add(ReduciblePair(p, q))

    # nested clause: compose through the tail subterm of every pair
    queue = list(pairs)
    while queue:
        pair = queue.pop()
        for inner in reducible_pairs(subterm_at(t, pair.q), theory):
            composed = ReduciblePair(pair.q + inner.p, pair.q + inner.q)
            if composed not in pairs:
                pairs.add(composed)
                queue.append(composed)

    result = frozenset(pairs)
    cache[t] = result
    return result


def removable_positions(t: Term, theory: Theory) -> frozenset:
    """Rm(t): minimal fictive positions, plus positions reachable through the
    sibling branch of a removable position."""
    cache = _theory_cache(theory, "_rm_cache")
    got = cache.get(t)
    if got is not None:
        return got

    report = essentiality_report(t, theory)
    if report.undecided_positions:
        raise UndecidedError(
            f"essentiality undecided at {sorted(report.undecided_positions)} of {t}",
            query=(t, sorted(report.undecided_positions)),
        )
    fictive = report.fictive_positions
    removable = {
        p
        for p in fictive
        if p and not any(proper_prefix(q, p) for q in fictive)
    }

    changed = True
    while changed:
        changed = False
        for x in sorted(removable):
            sibling = x[:-1] + (3 - x[-1],)
            for q2 in removable_positions(subterm_at(t, sibling), theory):
                candidate = sibling + q2
                if candidate not in removable:
                    removable.add(candidate)
                    changed = True

    result = frozenset(removable)
    cache[t] = result
    return result


def step_S(t: Term, pair: ReduciblePair, theory: Theory | None = None) -> Term:
    """One S-step: replace the subterm at pair.p by the one at pair.q."""
    if theory is not None and pair not in reducible_pairs(t, theory):
        raise NotReducibleError(
            f"({position_to_text(pair.p)},{position_to_text(pair.q)}) is not a "
            f"reducible pair of {t}"
        )
    result = replace_at(t, pair.p, subterm_at(t, pair.q))
    assert result.length < t.length
    return result


def step_E(t: Term, removable: Position, theory: Theory | None = None) -> Term:
    """One E-step: replace the parent of a removable position by its sibling."""
    removable = tuple(removable)
    if not removable:
        raise NotRemovableError("the root has no parent to remove")
    if theory is not None and removable not in removable_positions(t, theory):
        raise NotRemovableError(
            f"{position_to_text(removable)} is not removable in {t}"
        )
    parent, alpha = removable[:-1], removable[-1]
    survivor = subterm_at(t, parent + (3 - alpha,))
    result = replace_at(t, parent, survivor)
    assert result.length < t.length
    return result


def _minimal_fictive(t: Term, theory: Theory):
    report = essentiality_report(t, theory)
    if report.undecided_positions:
        raise UndecidedError(
            f"essentiality undecided at {sorted(report.undecided_positions)} of {t}",
            query=(t, sorted(report.undecided_positions)),
        )
    fictive = [p for p in report.fictive_positions if p]
    return min(fictive) if fictive else None


def normal_form(t: Term, theory: Theory, mode: str):
    """(normal form, trace) under the minimal-redex strategy.

    Mode "S" contracts the lexicographically minimal reducible pair; mode "E"
    removes the parent of the minimal fictive position.
    """
    if mode not in ("S", "E"):
        raise ValueError(f"mode must be 'S' or 'E', got {mode!r}")
    trace = ReductionTrace(t)
    current = t
    while True:
        if mode == "S":
            pairs = reducible_pairs(current, theory)
            if not pairs:
                return current, trace
            pair = min(pairs, key=lambda x: (x.p, x.q))
            current = step_S(current, pair)
            trace.record("S", pair, current)
        else:
            p = _minimal_fictive(current, theory)
            if p is None:
                return current, trace
            current = step_E(current, p)
            trace.record("E", p, current)


def sr(t: Term, theory: Theory) -> Term:
    return normal_form(t, theory, "S")[0]


def er(t: Term, theory: Theory) -> Term:
    return normal_form(t, theory, "E")[0]


def reduce_with_strategy(t: Term, theory: Theory, mode: str, seed: int) -> Term:
    """Reduce to a normal form taking seed-chosen steps instead of minimal ones."""
    if mode not in ("S", "E"):
        raise ValueError(f"mode must be 'S' or 'E', got {mode!r}")
    rng = random.Random(seed)
    current = t
    while True:
        if mode == "S":
            choices = sorted(reducible_pairs(current, theory), key=lambda x: (x.p, x.q))
            if not choices:
                return current
            current = step_S(current, rng.choice(choices))
        else:
            choices = sorted(removable_positions(current, theory))
            if not choices:
                return current
            current = step_E(current, rng.choice(choices))
