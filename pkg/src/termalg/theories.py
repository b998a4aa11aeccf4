"""Equational theories and the three-valued equivalence oracle.

Each built-in theory ships an exact decider (a canonical key such that two
terms are equal in the theory iff their keys coincide).  Arbitrary axiom
sets degrade to a bounded oracle: refutation by finite counter-model search,
proof by bounded bidirectional rewriting, Unknown otherwise.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .algebras import (
    FiniteAlgebra,
    distinguish_over_models,
    enumerate_tables,
)
from .errors import NonOrientableError, ParseError
from .terms import (
    Node,
    Term,
    Var,
    enumerate_terms_by_length,
    fresh_var_index,
    max_var_index,
    parse_term,
    positions,
    replace_at,
    subterm_at,
    subterm_set,
    term_to_text,
    var_set,
    variables,
)

PROVED = "proved"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Identity:
    """An identity lhs ~ rhs between two terms."""

    lhs: Term
    rhs: Term

    def flipped(self):
        return Identity(self.rhs, self.lhs)

    def text(self):
        return f"{term_to_text(self.lhs)} = {term_to_text(self.rhs)}"

    @classmethod
    def parse(cls, text: str) -> "Identity":
        for sep in ("=", "~"):
            if sep in text:
                l, r = text.split(sep, 1)
                return cls(parse_term(l), parse_term(r))
        raise ParseError(f"identity must be written lhs=rhs, got {text!r}")


@dataclass(frozen=True)
class OracleConfig:
    max_model_size: int = 3
    max_deduction_term_size: int = 12
    max_deduction_steps: int = 100_000

    def __post_init__(self):
        if min(self.max_model_size, self.max_deduction_term_size, self.max_deduction_steps) < 1:
            raise ValueError("oracle bounds must be positive")


# --- verdict certificates ---------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    """Why an identity is proved: a method tag plus a chain of term texts."""

    method: str
    steps: tuple


@dataclass(frozen=True)
class CounterModel:
    """A finite algebra plus an assignment on which the two terms differ."""

    algebra: FiniteAlgebra
    assignment: tuple  # sorted (var_index, value) pairs


@dataclass(frozen=True)
class DistinctCanonicalKeys:
    """Refutation by an exact decider when no small counter-model was found."""

    left_key: str
    right_key: str


@dataclass(frozen=True)
class ExhaustedBounds:
    max_model_size: int
    max_deduction_term_size: int
    max_deduction_steps: int


@dataclass(frozen=True)
class Verdict:
    outcome: str
    certificate: object = None

    @property
    def proved(self):
        return self.outcome == PROVED

    @property
    def refuted(self):
        return self.outcome == REFUTED

    @property
    def unknown(self):
        return self.outcome == UNKNOWN


# --- pattern matching, substitution, unification ----------------------------


def match_pattern(pattern: Term, term: Term, binding=None):
    """Match pattern against term; returns {var_index: Term} or None."""
    if binding is None:
        binding = {}
    if isinstance(pattern, Var):
        bound = binding.get(pattern.index)
        if bound is None:
            binding[pattern.index] = term
            return binding
        return binding if bound == term else None
    if not isinstance(term, Node):
        return None
    binding = match_pattern(pattern.left, term.left, binding)
    if binding is None:
        return None
    return match_pattern(pattern.right, term.right, binding)


def apply_binding(pattern: Term, binding) -> Term:
    if isinstance(pattern, Var):
        return binding[pattern.index]
    return Node(apply_binding(pattern.left, binding), apply_binding(pattern.right, binding))


def _occurs(i: int, t: Term, sub) -> bool:
    if isinstance(t, Var):
        if t.index == i:
            return True
        return t.index in sub and _occurs(i, sub[t.index], sub)
    return _occurs(i, t.left, sub) or _occurs(i, t.right, sub)


def _walk(t: Term, sub) -> Term:
    while isinstance(t, Var) and t.index in sub:
        t = sub[t.index]
    return t


def unify(a: Term, b: Term, sub=None):
    """Most general unifier of a and b as {var_index: Term}, or None."""
    if sub is None:
        sub = {}
    a, b = _walk(a, sub), _walk(b, sub)
    if isinstance(a, Var):
        if isinstance(b, Var) and b.index == a.index:
            return sub
        if _occurs(a.index, b, sub):
            return None
        sub[a.index] = b
        return sub
    if isinstance(b, Var):
        return unify(b, a, sub)
    sub = unify(a.left, b.left, sub)
    if sub is None:
        return None
    return unify(a.right, b.right, sub)


def resolve(t: Term, sub) -> Term:
    """Apply a (possibly chained) unifier substitution exhaustively."""
    t = _walk(t, sub)
    if isinstance(t, Var):
        return t
    return Node(resolve(t.left, sub), resolve(t.right, sub))


def shift_vars(t: Term, offset: int) -> Term:
    if isinstance(t, Var):
        return Var(t.index + offset)
    return Node(shift_vars(t.left, offset), shift_vars(t.right, offset))


# --- single-rule rewriting ---------------------------------------------------


def rule_orientable(rule: Identity) -> bool:
    return rule.lhs.size > rule.rhs.size and var_set(rule.rhs) <= var_set(rule.lhs)


def _multiplicities(t: Term):
    out = {}
    for i in variables(t):
        out[i] = out.get(i, 0) + 1
    return out


def rule_size_decreasing(rule: Identity) -> bool:
    """True when every rewrite instance strictly shrinks the term."""
    if not rule_orientable(rule):
        return False
    ml, mr = _multiplicities(rule.lhs), _multiplicities(rule.rhs)
    return all(mr.get(i, 0) <= ml.get(i, 0) for i in ml)


def rewrite_nf(t: Term, lhs: Term, rhs: Term, memo=None) -> Term:
    """Innermost normal form of t under the single rule lhs -> rhs."""
    if memo is None:
        memo = {}
    got = memo.get(t)
    if got is not None:
        return got
    if isinstance(t, Var):
        memo[t] = t
        return t
    u = Node(rewrite_nf(t.left, lhs, rhs, memo), rewrite_nf(t.right, lhs, rhs, memo))
    binding = match_pattern(lhs, u)
    result = u if binding is None else rewrite_nf(apply_binding(rhs, binding), lhs, rhs, memo)
    memo[t] = result
    return result


def critical_pair_check(rule: Identity):
    """Check joinability of all self-overlaps of an oriented rule.

    Returns (joinable, report) where report lists each overlap position with
    the two derivatives and their normal forms.
    """
    if not rule_orientable(rule):
        raise NonOrientableError(
            f"rule {rule.text()} is not orientable (need Siz(lhs) > Siz(rhs) "
            "and var(rhs) within var(lhs))"
        )
    lhs, rhs = rule.lhs, rule.rhs
    offset = max_var_index(lhs, rhs)
    lhs2, rhs2 = shift_vars(lhs, offset), shift_vars(rhs, offset)
    report = []
    all_join = True
    memo = {}
    for p in positions(lhs):
        if p == ():
            continue  # root self-overlap is the trivially joinable renaming
        sub = subterm_at(lhs, p)
        if isinstance(sub, Var):
            continue
        mgu = unify(sub, lhs2, dict())
        if mgu is None:
            continue
        peak = resolve(lhs, mgu)
        inner = replace_at(peak, p, resolve(rhs2, mgu))
        outer = resolve(rhs, mgu)
        nf_inner = rewrite_nf(inner, lhs, rhs, memo)
        nf_outer = rewrite_nf(outer, lhs, rhs, memo)
        joins = nf_inner == nf_outer
        all_join = all_join and joins
        report.append(
            {
                "overlap": p,
                "peak": term_to_text(peak),
                "derivatives": (term_to_text(inner), term_to_text(outer)),
                "normal_forms": (term_to_text(nf_inner), term_to_text(nf_outer)),
                "joins": joins,
            }
        )
    return all_join, report


# --- word machinery for semigroup + absorption theories ----------------------


def _word_reduce(word: tuple, i: int, j: int) -> tuple:
    """Shrink a word to length <= 2 with front instances of x1x2x3 -> xi xj."""
    w = list(word)
    while len(w) > 2:
        triple = (w[0], w[1], w[2])
        w[0:3] = [triple[i - 1], triple[j - 1]]
    return tuple(w)


@lru_cache(maxsize=None)
def _two_letter_patterns(i: int, j: int):
    """Equivalence patterns between two-letter words under assoc + absorption.

    Computed once per (i, j) by a bounded congruence closure over words of
    length <= 6 over a 5-letter alphabet; returns the set of first-occurrence
    patterns (a, b, c, d) for which the words ab and cd are equal in the
    theory.  Validated against the bounded deduction oracle in the tests.
    """
    alphabet = range(5)
    max_len = 6
    words = []
    for n in range(2, max_len + 1):
        words.extend(itertools.product(alphabet, repeat=n))
    index = {w: k for k, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for w in words:
        n = len(w)
        for start in range(n):
            for end in range(start + 3, n + 1):
                factor = w[start:end]
                # all 3-way splits of the factor into nonempty blocks
                m = len(factor)
                for c1 in range(1, m - 1):
                    for c2 in range(c1 + 1, m):
                        blocks = (factor[:c1], factor[c1:c2], factor[c2:])
                        phi = blocks[i - 1] + blocks[j - 1]
                        new = w[:start] + phi + w[end:]
                        if 2 <= len(new) <= max_len:
                            union(index[w], index[new])
    patterns = set()
    for a, b in itertools.product(alphabet, repeat=2):
        for c, d in itertools.product(alphabet, repeat=2):
            if find(index[(a, b)]) == find(index[(c, d)]):
                patterns.add(_occurrence_pattern((a, b, c, d)))
    return frozenset(patterns)


def _occurrence_pattern(seq):
    seen = {}
    out = []
    for x in seq:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


# --- theories ----------------------------------------------------------------

def _ground_collapse_proved(rule: Identity) -> bool:
    """Bounded proof that a rule merges all composite terms into one class.

    Runs congruence closure over every term of size <= 4 built from four
    leaf symbols, seeding with all syntactic instances of the rule (unbound
    variables range over the leaves), and asks whether f(a,b) and f(c,d)
    with four distinct leaves end up identified.  Sound: every union is a
    rule instance or a congruence step; the leaves act as free variables.
    """
    leaves = [Var(i) for i in range(1, 5)]
    universe = [t for t in enumerate_terms_by_length(5, 4)]
    index = {t: k for k, t in enumerate(universe)}
    parent = list(range(len(universe)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for t in universe:
        k = index[t]
        for p in positions(t):
            sub = subterm_at(t, p)
            for src, dst in ((rule.lhs, rule.rhs), (rule.rhs, rule.lhs)):
                binding = match_pattern(src, sub)
                if binding is None:
                    continue
                missing = sorted(var_set(dst) - binding.keys())
                for combo in itertools.product(leaves, repeat=len(missing)):
                    b = dict(binding)
                    b.update(zip(missing, combo))
                    new = replace_at(t, p, apply_binding(dst, b))
                    j = index.get(new)
                    if j is not None:
                        union(k, j)

    nodes = [(k, t) for k, t in enumerate(universe) if isinstance(t, Node)]
    while True:
        changed = False
        sig = {}
        for k, t in nodes:
            s = (find(index[t.left]), find(index[t.right]))
            first = sig.setdefault(s, k)
            if find(first) != find(k):
                union(first, k)
                changed = True
        if not changed:
            return find(index[Node(leaves[0], leaves[1])]) == find(
                index[Node(leaves[2], leaves[3])]
            )


_X1, _X2, _X3 = Var(1), Var(2), Var(3)
ASSOC = Identity(Node(Node(_X1, _X2), _X3), Node(_X1, Node(_X2, _X3)))
IDEMPOTENT_AXIOM = Identity(Node(_X1, _X1), _X1)
COMMUTATIVE_AXIOM = Identity(Node(_X1, _X2), Node(_X2, _X1))


def absorption_axiom(i: int, j: int) -> Identity:
    return Identity(Node(Node(_X1, _X2), _X3), Node(Var(i), Var(j)))


class Theory:
    """Base class: named axioms plus an equivalence-decision strategy."""

    name = "theory"
    exact = False  # exact deciders never answer Unknown

    def __init__(self, config: OracleConfig | None = None):
        self.config = config or OracleConfig()
        self._equal_cache = {}
        self._key_cache = {}
        self._models_by_size = {}
        self._refute_cache = {}

    @property
    def axioms(self):
        raise NotImplementedError

    def canonical_key(self, t: Term):
        """Hashable key with key(t) == key(s) iff the theory proves t = s.

        None when the theory has no exact decider.
        """
        return None

    # -- equality -------------------------------------------------------------

    def equal(self, t: Term, s: Term):
        """Three-valued equality: True, False, or None (undecided)."""
        if t == s:
            return True
        if self.exact:
            return self._cached_key(t) == self._cached_key(s)
        got = self._equal_cache.get((t, s))
        if got is not None:
            return got[0]
        answer, _payload = self._equal_bounded(t, s)
        self._equal_cache[(t, s)] = (answer, _payload)
        self._equal_cache[(s, t)] = (answer, _payload)
        return answer

    def _cached_key(self, t: Term):
        key = self._key_cache.get(t)
        if key is None:
            key = self.canonical_key(t)
            self._key_cache[t] = key
        return key

    def _equal_bounded(self, t, s):
        raise NotImplementedError

    def decide(self, t: Term, s: Term) -> Verdict:
        """Full verdict with a certificate attached."""
        answer = self.equal(t, s)
        if answer is True:
            return Verdict(PROVED, self._proof_certificate(t, s))
        if answer is False:
            found = self.refute(t, s)
            if found is not None:
                algebra, assignment = found
                return Verdict(
                    REFUTED, CounterModel(algebra, tuple(sorted(assignment.items())))
                )
            return Verdict(
                REFUTED,
                DistinctCanonicalKeys(repr(self._cached_key(t)), repr(self._cached_key(s))),
            )
        return Verdict(
            UNKNOWN,
            ExhaustedBounds(
                self.config.max_model_size,
                self.config.max_deduction_term_size,
                self.config.max_deduction_steps,
            ),
        )

    def _proof_certificate(self, t, s):
        if t == s:
            return Derivation("reflexivity", (term_to_text(t),))
        if self.exact:
            key = self._cached_key(t)
            key_text = term_to_text(key) if isinstance(key, Term) else repr(key)
            return Derivation("canonical-form", (term_to_text(t), key_text, term_to_text(s)))
        payload = self._equal_cache.get((t, s), (None, None))[1]
        steps = tuple(term_to_text(u) for u in payload) if payload else ()
        return Derivation("rewrite-path", steps)

    # -- finite models ----------------------------------------------------------

    def axiom_pairs(self):
        return tuple((ax.lhs, ax.rhs) for ax in self.axioms)

    def models(self, max_size: int | None = None):
        """All models of the axioms with carrier size <= max_size (cached)."""
        if max_size is None:
            max_size = self.config.max_model_size
        out = []
        for size in range(1, max_size + 1):
            if size not in self._models_by_size:
                self._models_by_size[size] = _models_of_size(self.axiom_pairs(), size)
            out.extend(self._models_by_size[size])
        return out

    def refute(self, t: Term, s: Term):
        """(model, assignment) distinguishing t and s, or None."""
        got = self._refute_cache.get((t, s))
        if got is not None:
            return got[0]
        found = None
        for size in range(2, self.config.max_model_size + 1):
            if size not in self._models_by_size:
                self._models_by_size[size] = _models_of_size(self.axiom_pairs(), size)
            found = distinguish_over_models(self._models_by_size[size], t, s)
            if found is not None:
                break
        self._refute_cache[(t, s)] = (found,)
        return found

    # -- misc -------------------------------------------------------------------

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    def _ident(self):
        return (type(self).__name__, self.name, self.config)

    def __eq__(self, other):
        return isinstance(other, Theory) and other._ident() == self._ident()

    def __hash__(self):
        return hash(self._ident())


def _models_of_size(axiom_pairs, size):
    if size <= 1:
        return list(enumerate_tables(axiom_pairs, size))
    return _models_vectorized(axiom_pairs, size)


def _models_vectorized(axiom_pairs, size):
    """All satisfying tables of one size, via numpy over every flat table."""
    import numpy as np

    n = size
    cells = n * n
    count = n**cells
    if count > 4_000_000:
        # 4x4 and beyond cannot be exhausted; fall back to the generator so
        # callers that really want it still get a stream.
        return list(enumerate_tables(axiom_pairs, size))
    digits = np.arange(count)
    flat = np.empty((count, cells), dtype=np.int64)
    for c in range(cells - 1, -1, -1):
        flat[:, c] = digits % n
        digits = digits // n
    tables = flat.reshape(count, n, n)
    rows = np.arange(count)
    mask = np.ones(count, dtype=bool)
    for lhs, rhs in axiom_pairs:
        vs = sorted(var_set(lhs) | var_set(rhs))
        k = len(vs)
        grids = np.meshgrid(*([np.arange(n)] * k), indexing="ij")
        cols = {x: g.reshape(-1) for x, g in zip(vs, grids)}
        na = n**k

        def ev(u):
            if isinstance(u, Var):
                return np.broadcast_to(cols[u.index], (count, na))
            return tables[rows[:, None], ev(u.left), ev(u.right)]

        mask &= (ev(lhs) == ev(rhs)).all(axis=1)
    return [
        FiniteAlgebra.from_flat(size, flat[k].tolist()) for k in np.flatnonzero(mask)
    ]


class IdempotentTheory(Theory):
    """f(x1,x1) = x1; decided by the collapse normal form."""

    name = "idempotent"
    exact = True

    def __init__(self, config=None):
        super().__init__(config)
        self._nf_memo = {}

    @property
    def axioms(self):
        return (IDEMPOTENT_AXIOM,)

    def normal_form(self, t: Term) -> Term:
        got = self._nf_memo.get(t)
        if got is not None:
            return got
        if isinstance(t, Var):
            result = t
        else:
            l, r = self.normal_form(t.left), self.normal_form(t.right)
            result = l if l == r else Node(l, r)
        self._nf_memo[t] = result
        return result

    def canonical_key(self, t: Term):
        return self.normal_form(t)


_SORT_KEY_MEMO = {}


def term_sort_key(t: Term):
    """A cheap deterministic total order on terms: (Len, leaves, positions)."""
    got = _SORT_KEY_MEMO.get(t)
    if got is None:
        got = (t.length, variables(t), positions(t))
        _SORT_KEY_MEMO[t] = got
    return got


class CommutativeTheory(Theory):
    """f(x1,x2) = f(x2,x1); decided by recursively sorting children."""

    name = "commutative"
    exact = True

    def __init__(self, config=None):
        super().__init__(config)
        self._nf_memo = {}

    @property
    def axioms(self):
        return (COMMUTATIVE_AXIOM,)

    def normal_form(self, t: Term) -> Term:
        got = self._nf_memo.get(t)
        if got is not None:
            return got
        if isinstance(t, Var):
            result = t
        else:
            l, r = self.normal_form(t.left), self.normal_form(t.right)
            if term_sort_key(r) < term_sort_key(l):
                l, r = r, l
            result = Node(l, r)
        self._nf_memo[t] = result
        return result

    def canonical_key(self, t: Term):
        return self.normal_form(t)


class SemigroupAbsorptionTheory(Theory):
    """Associativity plus f(f(x1,x2),x3) = f(x_i,x_j), i,j in {1,2,3}.

    Terms flatten to words; every word of length >= 3 shrinks to length 2,
    and the residual equivalence on two-letter words is a finite pattern
    table computed by bounded congruence closure.
    """

    exact = True

    def __init__(self, i: int, j: int, config=None):
        if i not in (1, 2, 3) or j not in (1, 2, 3):
            raise ValueError("absorption indexes must lie in {1,2,3}")
        self.i, self.j = i, j
        self.name = f"sg-abs-{i}-{j}"
        super().__init__(config)

    @property
    def axioms(self):
        return (ASSOC, absorption_axiom(self.i, self.j))

    def canonical_key(self, t: Term):
        word = variables(t)
        if len(word) == 1:
            return ("var", word[0])
        a, b = _word_reduce(word, self.i, self.j)
        patterns = _two_letter_patterns(self.i, self.j)
        # canonical representative of the two-letter class; fresh placeholder
        # letters (None, 1) / (None, 2) sort below concrete variable indexes
        candidates = []
        f1, f2 = max(a, b) + 1, max(a, b) + 2
        for c in (f1, a, b):
            for d in (f1, f2, a, b, c):
                if _occurrence_pattern((a, b, c, d)) in patterns:
                    candidates.append((self._slot(c, a, b, f1, f2), self._slot(d, a, b, f1, f2)))
        return ("word", min(candidates))

    @staticmethod
    def _slot(x, a, b, f1, f2):
        if x == f1:
            return (0, 1)
        if x == f2:
            return (0, 2)
        return (1, x)


class GroupoidSingleRuleTheory(Theory):
    """A single size-decreasing rule.

    Exact when the rewrite system is convergent (normal forms decide), or when
    the rule provably collapses all composite terms into one class (the rule's
    own bounded prover derives f(x1,x2) = f(x3,x4), e.g. f(f(x1,x2),x3) =
    f(x2,x1)); otherwise falls back to the bounded three-valued oracle.
    """

    def __init__(self, rule: Identity, config=None):
        self.rule = rule
        self.name = f"grp-rule:{rule.text()}"
        super().__init__(config)
        self.convergent = False
        self.node_collapse = False
        self._fallback = AxiomsTheory((rule,), config)
        if rule_size_decreasing(rule):
            joinable, self._cp_report = critical_pair_check(rule)
            self.convergent = joinable
        else:
            self._cp_report = []
        if not self.convergent and isinstance(rule.lhs, Node) and isinstance(rule.rhs, Node):
            self.node_collapse = _ground_collapse_proved(rule)
        self.exact = self.convergent or self.node_collapse
        self._nf_memo = {}

    @property
    def axioms(self):
        return (self.rule,)

    def normal_form(self, t: Term) -> Term:
        return rewrite_nf(t, self.rule.lhs, self.rule.rhs, self._nf_memo)

    def canonical_key(self, t: Term):
        if self.convergent:
            return self.normal_form(t)
        if self.node_collapse:
            # any composite term is provably equal to any other; a rule with
            # composite terms on both sides never merges a variable in
            return ("node",) if isinstance(t, Node) else ("var", t.index)
        return None

    def _equal_bounded(self, t, s):
        return self._fallback._equal_bounded(t, s)


class AxiomsTheory(Theory):
    """Arbitrary finite axiom list with the bounded three-valued oracle."""

    def __init__(self, axioms, config=None, name=None):
        axioms = tuple(axioms)
        self._axioms = axioms
        self.name = name or "axioms:" + ";".join(ax.text() for ax in axioms)
        super().__init__(config)
        self._assoc_only = len(axioms) == 1 and _is_associativity(axioms[0])
        self.exact = self._assoc_only

    @property
    def axioms(self):
        return self._axioms

    def canonical_key(self, t: Term):
        if self._assoc_only:
            return ("word", variables(t))
        return None

    def _equal_bounded(self, t, s):
        if self.refute(t, s) is not None:
            return False, None
        path = self._bfs_prove(t, s)
        if path is not None:
            return True, path
        return None, None

    def _neighbors(self, t: Term):
        out = []
        cap = self.config.max_deduction_term_size
        pool = [Var(i) for i in sorted(var_set(t))[:3] + [fresh_var_index(t)]]
        # axioms with free right-side variables may need whole subterms
        # plugged in, not just variables
        pool += sorted(
            (u for u in subterm_set(t) if isinstance(u, Node)),
            key=lambda u: u.size,
        )[:3]
        for p in positions(t):
            sub = subterm_at(t, p)
            for ax in self._axioms:
                for src, dst in ((ax.lhs, ax.rhs), (ax.rhs, ax.lhs)):
                    binding = match_pattern(src, sub)
                    if binding is None:
                        continue
                    missing = sorted(var_set(dst) - binding.keys())
                    if not missing:
                        new = replace_at(t, p, apply_binding(dst, binding))
                        if new.size <= cap:
                            out.append(new)
                    else:
                        for combo in itertools.product(pool, repeat=len(missing)):
                            b = dict(binding)
                            b.update({m: c for m, c in zip(missing, combo)})
                            new = replace_at(t, p, apply_binding(dst, b))
                            if new.size <= cap:
                                out.append(new)
        return out

    def _bfs_prove(self, t, s):
        """Bidirectional bounded search over single axiom replacements."""
        if t == s:
            return (t,)
        steps = 0
        limit = self.config.max_deduction_steps
        side_a = {t: (t,)}
        side_b = {s: (s,)}
        frontier_a, frontier_b = deque([t]), deque([s])
        while frontier_a and frontier_b and steps < limit:
            # expand the smaller frontier
            if len(frontier_a) <= len(frontier_b):
                frontier, seen, other = frontier_a, side_a, side_b
            else:
                frontier, seen, other = frontier_b, side_b, side_a
            for _ in range(len(frontier)):
                u = frontier.popleft()
                steps += 1
                if steps >= limit:
                    break
                for n in self._neighbors(u):
                    if n in seen:
                        continue
                    seen[n] = seen[u] + (n,)
                    if n in other:
                        left = side_a.get(n)
                        right = side_b.get(n)
                        return left + tuple(reversed(right[:-1]))
                    frontier.append(n)
        return None


def _is_associativity(ax: Identity) -> bool:
    for cand in (ax, ax.flipped()):
        b = match_pattern(cand.lhs, ASSOC.lhs)
        if b is None:
            continue
        if not all(isinstance(v, Var) for v in b.values()):
            continue
        if len({v.index for v in b.values()}) != len(b):
            continue
        remap = {k: v for k, v in b.items()}
        if apply_binding(cand.rhs, remap) == ASSOC.rhs:
            return True
    return False


# --- public operations --------------------------------------------------------


def decide_equiv(theory: Theory, t: Term, s: Term) -> Verdict:
    return theory.decide(t, s)


def enumerate_models(theory: Theory, size: int):
    """Stream every model of the theory's axioms of exactly the given size."""
    yield from enumerate_tables(theory.axiom_pairs(), size)


# --- names and files ------------------------------------------------------------


def theory_from_name(name: str, config: OracleConfig | None = None) -> Theory:
    """Resolve a built-in theory name.

    idempotent | commutative | assoc | sg-abs-I-J | grp-rule:<lhs>=<rhs>
    """
    if name == "idempotent":
        return IdempotentTheory(config)
    if name == "commutative":
        return CommutativeTheory(config)
    if name in ("assoc", "associative"):
        return AxiomsTheory((ASSOC,), config, name="assoc")
    if name.startswith("sg-abs-"):
        parts = name.split("-")
        if len(parts) == 4 and parts[2].isdigit() and parts[3].isdigit():
            return SemigroupAbsorptionTheory(int(parts[2]), int(parts[3]), config)
    if name.startswith("grp-rule:"):
        return GroupoidSingleRuleTheory(Identity.parse(name[len("grp-rule:") :]), config)
    raise ParseError(f"unknown theory name {name!r}")


def _config_from_json(obj):
    if not obj:
        return None
    return OracleConfig(
        max_model_size=obj.get("maxModelSize", 3),
        max_deduction_term_size=obj.get("maxDeductionTermSize", 12),
        max_deduction_steps=obj.get("maxDeductionSteps", 100_000),
    )


def theory_from_json(obj, config: OracleConfig | None = None) -> Theory:
    """Theory from the JSON file schema: {"kind": ..., ...}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    config = config or _config_from_json(obj.get("oracle"))
    kind = obj.get("kind")
    if kind == "idempotent":
        return IdempotentTheory(config)
    if kind == "commutative":
        return CommutativeTheory(config)
    if kind == "semigroup-absorption":
        return SemigroupAbsorptionTheory(int(obj["i"]), int(obj["j"]), config)
    if kind == "groupoid-single-rule":
        rule = obj["rule"]
        return GroupoidSingleRuleTheory(
            Identity(parse_term(rule["lhs"]), parse_term(rule["rhs"])), config
        )
    if kind == "axioms":
        axioms = tuple(
            Identity(parse_term(a["lhs"]), parse_term(a["rhs"])) for a in obj["axioms"]
        )
        return AxiomsTheory(axioms, config)
    raise ParseError(f"unknown theory kind {kind!r}")


def load_theory_file(path, config: OracleConfig | None = None) -> Theory:
    with open(path) as fh:
        return theory_from_json(json.load(fh), config)


def load_algebra_file(path) -> FiniteAlgebra:
    with open(path) as fh:
        obj = json.load(fh)
    return FiniteAlgebra.from_flat(int(obj["size"]), obj["table"])
