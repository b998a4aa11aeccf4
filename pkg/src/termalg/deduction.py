"""Derivation rules, bounded closures, and the stability sweep checkers.

The classical rules D1-D5 (reflexivity, symmetry, transitivity, single-variable
substitution, positional replacement) plus the two replacement rules that
characterize stability:

* SigmaR1 replaces a shared essential subterm on both sides of a proved
  identity via theory composition;
* SR1 does the same via star (essential) composition.

check_stability sweeps all small terms for violations: proved identities whose
replaced versions the theory refutes.  A validated violation is a concrete
counterexample to closure under the rule; absence of violations is evidence
only up to the sweep bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebras import eval_term
from .compose import sigma_compose, star_compose
from .errors import SideConditionError, UndecidedError
from .essentiality import essential_positions, is_essential_subterm
from .terms import (
    Node,
    Term,
    Var,
    enumerate_terms,
    enumerate_terms_by_length,
    max_var_index,
    replace_at,
    subterm_at,
    subterm_set,
    substitute,
    term_to_text,
    var_set,
)
from .theories import (
    REFUTED,
    UNKNOWN,
    CounterModel,
    Derivation,
    DistinctCanonicalKeys,
    ExhaustedBounds,
    Identity,
    Theory,
    term_sort_key,
)

RULE_TAGS = ("D1", "D2", "D3", "D4", "D5", "SigmaR1", "SR1")


def apply_rule(rule: str, premises, data=None, theory: Theory | None = None) -> Identity:
    """Apply one derivation rule to premise identities and rule-specific data.

    data keys: D1 "term"; D4 "var" (index) and "term"; D5 "context" and
    "position"; SigmaR1/SR1 "pattern" (the subterm r) and "replacement" (u).
    Side-condition failures raise SideConditionError naming the condition.
    """
    data = data or {}
    premises = tuple(premises)
    if rule not in RULE_TAGS:
        raise SideConditionError(f"unknown rule {rule!r}")

    if rule == "D1":
        t = data["term"]
        return Identity(t, t)

    if rule == "D2":
        _need_premises(rule, premises, 1)
        return premises[0].flipped()

    if rule == "D3":
        _need_premises(rule, premises, 2)
        first, second = premises
        if first.rhs != second.lhs:
            raise SideConditionError(
                "D3: middle terms differ "
                f"({term_to_text(first.rhs)} vs {term_to_text(second.lhs)})"
            )
        return Identity(first.lhs, second.rhs)

    if rule == "D4":
        _need_premises(rule, premises, 1)
        index, r = data["var"], data["term"]
        ident = premises[0]
        return Identity(
            substitute(ident.lhs, {index: r}), substitute(ident.rhs, {index: r})
        )

    if rule == "D5":
        _need_premises(rule, premises, 1)
        context, p = data["context"], tuple(data["position"])
        ident = premises[0]
        if subterm_at(context, p) != ident.lhs:
            raise SideConditionError(
                f"D5: subterm of the context at {p} is not the premise left side"
            )
        return Identity(replace_at(context, p, ident.rhs), context)

    # SigmaR1 / SR1
    _need_premises(rule, premises, 1)
    if theory is None:
        raise SideConditionError(f"{rule}: a theory is required")
    t, s = premises[0].lhs, premises[0].rhs
    r, u = data["pattern"], data["replacement"]
    premise_holds = theory.equal(t, s)
    if premise_holds is None:
        raise SideConditionError(f"{rule}: premise {premises[0].text()} is undecided")
    if premise_holds is False:
        raise SideConditionError(
            f"{rule}: premise {premises[0].text()} does not hold in the theory"
        )
    for side_name, side in (("left", t), ("right", s)):
        if not is_essential_subterm(r, side, theory):
            raise SideConditionError(
                f"{rule}: {term_to_text(r)} is not an essential subterm of the "
                f"{side_name} side {term_to_text(side)}"
            )
    compose = sigma_compose if rule == "SigmaR1" else star_compose
    return Identity(compose(t, r, u, theory), compose(s, r, u, theory))


def _need_premises(rule, premises, count):
    if len(premises) != count:
        raise SideConditionError(f"{rule}: expected {count} premise(s), got {len(premises)}")


# --- bounded closure ----------------------------------------------------------


@dataclass(frozen=True)
class ClosureBounds:
    max_term_length: int = 6
    max_vars: int = 4
    max_rounds: int = 6
    max_identities: int = 5000

    def __post_init__(self):
        if min(self.max_term_length, self.max_vars, self.max_rounds, self.max_identities) < 1:
            raise ValueError("closure bounds must be positive")


def _closure_pool(max_vars):
    """Substitution/context pool: all variables and two-leaf terms."""
    variables = [Var(i) for i in range(1, max_vars + 1)]
    return variables + [Node(a, b) for a in variables for b in variables]


def bounded_closure(axioms, rules=RULE_TAGS[:5], bounds: ClosureBounds | None = None,
                    theory: Theory | None = None):
    """Least fixpoint of the given rules over the axioms, within bounds.

    Substitutions (D4) and contexts (D5) draw from the pool of variables and
    two-leaf terms; deep contexts arise by iterating rounds.  Returns the
    derived identities in a deterministic order.
    """
    bounds = bounds or ClosureBounds()
    rules = tuple(rules)
    pool = _closure_pool(bounds.max_vars)

    def fits(ident):
        return (
            ident.lhs.length <= bounds.max_term_length
            and ident.rhs.length <= bounds.max_term_length
        )

    known = {}  # insertion-ordered set
    for ax in axioms:
        if fits(ax):
            known[ax] = None
    if "D1" in rules:
        for w in pool:
            known.setdefault(Identity(w, w), None)

    for _ in range(bounds.max_rounds):
        if len(known) >= bounds.max_identities:
            break
        current = list(known)
        by_lhs = {}
        for ident in current:
            by_lhs.setdefault(ident.lhs, []).append(ident)
        fresh = []

        def emit(ident):
            if fits(ident) and ident not in known:
                known[ident] = None
                fresh.append(ident)
            return len(known) < bounds.max_identities

        for ident in current:
            if len(known) >= bounds.max_identities:
                break
            if "D2" in rules:
                if not emit(ident.flipped()):
                    break
            if "D3" in rules:
                for follower in by_lhs.get(ident.rhs, ()):
                    if not emit(Identity(ident.lhs, follower.rhs)):
                        break
            if "D4" in rules:
                for index in sorted(var_set(ident.lhs) | var_set(ident.rhs)):
                    for r in pool:
                        if not emit(apply_rule("D4", (ident,), {"var": index, "term": r})):
                            break
            if "D5" in rules:
                for w in pool:
                    for context, p in (
                        (Node(ident.lhs, w), (1,)),
                        (Node(w, ident.lhs), (2,)),
                    ):
                        derived = apply_rule(
                            "D5", (ident,), {"context": context, "position": p}
                        )
                        if not emit(derived):
                            break
            for tag in ("SigmaR1", "SR1"):
                if tag not in rules:
                    continue
                reps = _essential_subterm_reps(ident.lhs, ident.rhs, theory)
                for r in reps:
                    for u in pool[: bounds.max_vars]:
                        try:
                            derived = apply_rule(
                                tag, (ident,), {"pattern": r, "replacement": u}, theory
                            )
                        except (SideConditionError, UndecidedError):
                            continue
                        if not emit(derived):
                            break
        if not fresh:
            break
    return tuple(known)


def _essential_subterm_reps(t, s, theory):
    """Representatives of the equivalence classes of SEss(t) ∩ SEss(s)."""
    reps = []
    for candidate in sorted(subterm_set(t) | subterm_set(s), key=term_sort_key):
        if any(theory.equal(candidate, seen) is True for seen in reps):
            continue
        if is_essential_subterm(candidate, t, theory) and is_essential_subterm(
            candidate, s, theory
        ):
            reps.append(candidate)
    return reps


# --- stability sweeps ---------------------------------------------------------


@dataclass(frozen=True)
class SweepBounds:
    max_depth: int = 3
    max_vars: int = 3
    max_u_size: int = 3

    def __post_init__(self):
        if min(self.max_depth, self.max_vars, self.max_u_size) < 1:
            raise ValueError("sweep bounds must be positive")


@dataclass(frozen=True)
class Violation:
    t: Term
    s: Term
    r: Term
    u: Term
    left: Term
    right: Term
    certificate: object

    def to_json(self):
        return {
            "t": term_to_text(self.t),
            "s": term_to_text(self.s),
            "r": term_to_text(self.r),
            "u": term_to_text(self.u),
            "left": term_to_text(self.left),
            "right": term_to_text(self.right),
            "certificate": certificate_to_json(self.certificate),
        }


@dataclass
class StabilityReport:
    theory: Theory
    mode: str  # "SigmaR1" | "SR1"
    bounds: SweepBounds
    violations: list = field(default_factory=list)
    unknowns: list = field(default_factory=list)  # (t, s, r or None, reason)
    candidates: int = 0
    exhaustive: bool = True

    @property
    def unknown_fraction(self):
        return len(self.unknowns) / self.candidates if self.candidates else 0.0

    def to_json(self):
        return {
            "theory": self.theory.name,
            "mode": self.mode,
            "bounds": {
                "maxDepth": self.bounds.max_depth,
                "maxVars": self.bounds.max_vars,
                "maxReplacementSize": self.bounds.max_u_size,
            },
            "exhaustive": self.exhaustive,
            "candidates": self.candidates,
            "violations": [v.to_json() for v in self.violations],
            "unknowns": [
                {
                    "t": term_to_text(t),
                    "s": term_to_text(s),
                    "r": term_to_text(r) if r is not None else None,
                    "reason": reason,
                }
                for t, s, r, reason in self.unknowns
            ],
        }

    def to_json_text(self):
        return json.dumps(self.to_json(), indent=2)


def certificate_to_json(certificate):
    if certificate is None:
        return None
    if isinstance(certificate, CounterModel):
        return {
            "kind": "counter-model",
            "size": certificate.algebra.size,
            "table": list(certificate.algebra.to_flat()),
            "assignment": [[i, v] for i, v in certificate.assignment],
        }
    if isinstance(certificate, Derivation):
        return {
            "kind": "derivation",
            "method": certificate.method,
            "steps": list(certificate.steps),
        }
    if isinstance(certificate, DistinctCanonicalKeys):
        return {
            "kind": "distinct-canonical-keys",
            "left": str(certificate.left_key),
            "right": str(certificate.right_key),
        }
    if isinstance(certificate, ExhaustedBounds):
        return {
            "kind": "exhausted-bounds",
            "maxModelSize": certificate.max_model_size,
            "maxDeductionTermSize": certificate.max_deduction_term_size,
            "maxDeductionSteps": certificate.max_deduction_steps,
        }
    return {"kind": type(certificate).__name__, "detail": repr(certificate)}


def replacement_pool(bounds: SweepBounds):
    """A fresh variable followed by all terms up to max_u_size over {x1, fresh}."""
    fresh = Var(bounds.max_vars + 1)
    pool = [fresh]
    for u in enumerate_terms_by_length(bounds.max_u_size, 2):
        w = substitute(u, {2: fresh})
        if w not in pool:
            pool.append(w)
    return pool


def check_stability(theory: Theory, mode: str, bounds: SweepBounds | None = None,
                    closure_bounds: ClosureBounds | None = None,
                    u_terms=None) -> StabilityReport:
    """Sweep small proved identities for rule violations.

    mode "SigmaR1" tests closure under theory composition, mode "SR1" under
    star composition.  Exact theories get a complete sweep of all terms within
    bounds (grouped by canonical form); theories with only a bounded oracle
    get candidates from a bounded derivation closure and exhaustive=False.

    u_terms defaults to the single fresh variable, which already decides
    whether violations exist: any violating replacement u factors through the
    fresh variable by substitution, so a violation for some u is a violation
    for the fresh variable too.  Pass replacement_pool(bounds) to also record
    instances with larger replacement terms.
    """
    if mode not in ("SigmaR1", "SR1"):
        raise ValueError(f"mode must be 'SigmaR1' or 'SR1', got {mode!r}")
    bounds = bounds or SweepBounds()
    if u_terms is None:
        u_terms = (Var(bounds.max_vars + 1),)
    report = StabilityReport(theory, mode, bounds)
    if theory.exact:
        _sweep_exact(theory, mode, bounds, report, u_terms)
    else:
        report.exhaustive = False
        _sweep_bounded(theory, mode, bounds, closure_bounds, report, u_terms)
    return report


def _compose_for(mode):
    return sigma_compose if mode == "SigmaR1" else star_compose


def _sweep_exact(theory, mode, bounds, report, u_pool):
    compose = _compose_for(mode)
    buckets = {}
    for t in enumerate_terms(bounds.max_depth, bounds.max_vars):
        buckets.setdefault(theory._cached_key(t), []).append(t)

    for key in sorted(buckets, key=lambda k: term_sort_key(min(buckets[k], key=term_sort_key))):
        members = sorted(buckets[key], key=term_sort_key)
        if len(members) < 2:
            continue
        # essential-subterm classes per member, keyed by canonical form
        rep_for_class = {}
        classes_of = {}
        for t in members:
            keys = set()
            for p in essential_positions(t, theory):
                sub = subterm_at(t, p)
                sub_key = theory._cached_key(sub)
                keys.add(sub_key)
                prior = rep_for_class.get(sub_key)
                if prior is None or term_sort_key(sub) < term_sort_key(prior):
                    rep_for_class[sub_key] = sub
            classes_of[t] = keys

        for sub_key in sorted(rep_for_class, key=lambda k: term_sort_key(rep_for_class[k])):
            r = rep_for_class[sub_key]
            group = [t for t in members if sub_key in classes_of[t]]
            if len(group) < 2:
                continue
            for u in u_pool:
                report.candidates += len(group)
                composed = {}
                for t in group:
                    result = compose(t, r, u, theory)
                    composed.setdefault(theory._cached_key(result), (t, result))
                if len(composed) > 1:
                    outcomes = sorted(composed.values(), key=lambda pair: term_sort_key(pair[1]))
                    (t0, left), rest = outcomes[0], outcomes[1:]
                    for s0, right in rest:
                        verdict = theory.decide(left, right)
                        assert verdict.outcome == REFUTED
                        report.violations.append(
                            Violation(t0, s0, r, u, left, right, verdict.certificate)
                        )


def _sweep_bounded(theory, mode, bounds, closure_bounds, report, u_pool):
    compose = _compose_for(mode)
    closure_bounds = closure_bounds or ClosureBounds(
        max_term_length=2 ** bounds.max_depth,
        max_vars=bounds.max_vars,
        max_rounds=3,
        max_identities=400,
    )
    candidates = []
    seen = set()
    for ident in bounded_closure(theory.axioms, RULE_TAGS[1:5], closure_bounds):
        t, s = ident.lhs, ident.rhs
        if t == s:
            continue
        if t.depth > bounds.max_depth or s.depth > bounds.max_depth:
            continue
        if max(max_var_index(t), max_var_index(s)) > bounds.max_vars:
            continue
        key = frozenset((t, s))
        if key in seen:
            continue
        seen.add(key)
        candidates.append((t, s))

    for t, s in candidates:
        try:
            reps = _essential_subterm_reps(t, s, theory)
        except UndecidedError as exc:
            report.candidates += 1
            report.unknowns.append((t, s, None, str(exc)))
            continue
        for r in reps:
            for u in u_pool:
                report.candidates += 1
                try:
                    left = compose(t, r, u, theory)
                    right = compose(s, r, u, theory)
                except UndecidedError as exc:
                    report.unknowns.append((t, s, r, str(exc)))
                    continue
                verdict = theory.decide(left, right)
                if verdict.outcome == REFUTED:
                    report.violations.append(
                        Violation(t, s, r, u, left, right, verdict.certificate)
                    )
                elif verdict.outcome == UNKNOWN:
                    report.unknowns.append((t, s, r, "composed identity undecided"))


def validate_report(report: StabilityReport) -> bool:
    """Re-check every recorded violation from scratch.

    The premise must be proved, r essential in both sides, and the composed
    identity refuted; a counter-model certificate must actually distinguish
    the composed terms.
    """
    theory = report.theory
    compose = _compose_for(report.mode)
    for v in report.violations:
        if theory.equal(v.t, v.s) is not True:
            return False
        if not (
            is_essential_subterm(v.r, v.t, theory)
            and is_essential_subterm(v.r, v.s, theory)
        ):
            return False
        if compose(v.t, v.r, v.u, theory) != v.left:
            return False
        if compose(v.s, v.r, v.u, theory) != v.right:
            return False
        if theory.equal(v.left, v.right) is not False:
            return False
        if isinstance(v.certificate, CounterModel):
            assignment = dict(v.certificate.assignment)
            algebra = v.certificate.algebra
            if eval_term(algebra, v.left, assignment) == eval_term(algebra, v.right, assignment):
                return False
    return True


from .scenarios import Scenario, named_scenarios  # noqa: E402  (registry lives alongside the sweeps)
