"""Acceptance gate: one test per advertised guarantee, at the stated bounds.

Every test states its claim exactly and fails loudly when the library's
machine-checked behavior contradicts it.  Several claims are genuinely false
(see the failing tests' assertion messages); the tests are deliberately NOT
weakened to paper over that.
"""

import itertools
import random

import pytest

from conftest import shared_theory
from termalg.algebras import eval_vector, satisfies
from termalg.compose import sigma_compose, sigma_position_sets, star_compose
from termalg.deduction import SweepBounds, check_stability, validate_report
from termalg.essentiality import essentiality_report
from termalg.reduction import normal_form, reduce_with_strategy
from termalg.terms import (
    Node,
    Var,
    enumerate_terms_by_length,
    from_arrays,
    parse_position,
    parse_term,
    random_term,
    replace_at,
    subterm_set,
    to_arrays,
    valuations,
)
from termalg.theories import (
    REFUTED,
    AxiomsTheory,
    CounterModel,
    Identity,
    OracleConfig,
    term_sort_key,
)

SIGMA2 = "grp-rule:f(f(x1,x2),x3)=f(x2,x3)"

BUILTIN_NAMES = (
    "idempotent",
    "commutative",
    "assoc",
) + tuple(f"sg-abs-{i}-{j}" for i in (1, 2, 3) for j in (1, 2, 3))

GRP_RULE_NAMES = tuple(
    f"grp-rule:{fam}=f(x{i},x{j})"
    for fam in ("f(f(x1,x2),x3)", "f(x1,f(x2,x3))")
    for i, j in itertools.permutations((1, 2, 3), 2)
)

EXACT_DECIDER_NAMES = BUILTIN_NAMES + (SIGMA2,)

CORPUS_SIZE = 1000


def _pos(*texts):
    return frozenset(parse_position(s) for s in texts)


_CORPUS = None


def corpus():
    """Shared random corpus: CORPUS_SIZE terms, depth <= 6, variables <= 4."""
    global _CORPUS
    if _CORPUS is None:
        rng = random.Random(20260823)
        _CORPUS = [random_term(rng, 6, 4) for _ in range(CORPUS_SIZE)]
    return _CORPUS


_NF = {}


def normal_forms(name, mode):
    """[(term, normal form, Len chain)] for the corpus under one theory/mode.

    The Len chain starts at the input term and has one entry per reduction
    step, so strict monotonicity of the chain is exactly the claim that every
    step decreases Len.
    """
    key = (name, mode)
    if key not in _NF:
        thy = shared_theory(name)
        rows = []
        for t in corpus():
            nf, trace = normal_form(t, thy, mode)
            chain = [t.length] + [result.length for _, _, result in trace.steps]
            rows.append((t, nf, chain))
        _NF[key] = rows
    return _NF[key]


def test_criterion_01_composition_witness_golden():
    """Position sets, compositions, and the refutation of the witness pair."""
    thy = shared_theory(SIGMA2)
    t = parse_term("f(f(x3,f(x1,x2)),f(x2,f(x1,x2)))")
    s = parse_term("f(x2,f(x2,f(x1,x2)))")
    r = parse_term("f(x1,x2)")
    u = Var(3)
    assert thy.equal(t, s) is True
    assert essentiality_report(t, thy).fictive_positions == _pos("11", "121")
    assert essentiality_report(s, thy).fictive_positions == frozenset()
    assert sigma_position_sets(t, r, thy).minimal == _pos("12", "22")
    assert sigma_position_sets(s, r, thy).minimal == _pos("22")
    left = sigma_compose(t, r, u, thy)
    right = sigma_compose(s, r, u, thy)
    assert left == parse_term("f(f(x3,x3),f(x2,x3))")
    assert right == parse_term("f(x2,f(x2,x3))")
    verdict = thy.decide(left, right)
    assert verdict.outcome == REFUTED
    assert isinstance(verdict.certificate, CounterModel)
    assert verdict.certificate.algebra.size <= 3


def test_criterion_02_star_composition_golden():
    thy = shared_theory(SIGMA2)
    t = parse_term("f(f(x3,f(x1,x2)),f(x2,f(x1,x2)))")
    r = parse_term("f(x1,x2)")
    assert sigma_position_sets(t, r, thy).essential_minimal == _pos("22")
    assert star_compose(t, r, Var(4), thy) == parse_term("f(f(x3,f(x1,x2)),f(x2,x4))")


def test_criterion_03_star_composition_both_halves():
    assoc = shared_theory("assoc")
    t = parse_term("f(f(f(x1,x2),x1),x2)")
    s = parse_term("f(f(x1,x2),f(x1,x2))")
    r = parse_term("f(x1,x2)")
    u = Var(3)
    assert assoc.equal(t, s) is True
    assert sigma_position_sets(t, r, assoc).essential_minimal == _pos("11")
    assert sigma_position_sets(s, r, assoc).essential_minimal == _pos("1", "2")
    left = star_compose(t, r, u, assoc)
    right = star_compose(s, r, u, assoc)
    assert left == parse_term("f(f(x3,x1),x2)")
    assert right == parse_term("f(x3,x3)")
    verdict = assoc.decide(left, right)
    assert verdict.outcome == REFUTED
    assert isinstance(verdict.certificate, CounterModel)
    assert satisfies(
        verdict.certificate.algebra,
        parse_term("f(f(x1,x2),x3)"),
        parse_term("f(x1,f(x2,x3))"),
    )

    sigma2 = shared_theory(SIGMA2)
    t2 = parse_term("f(f(x3,f(x1,x2)),f(x2,f(x1,x2)))")
    s2 = parse_term("f(x2,f(x2,f(x1,x2)))")
    assert sigma_position_sets(t2, r, sigma2).essential_minimal == _pos("22")
    assert sigma_position_sets(s2, r, sigma2).essential_minimal == _pos("22")
    assert sigma2.equal(
        star_compose(t2, r, u, sigma2), star_compose(s2, r, u, sigma2)
    ) is True


def test_criterion_04_second_case_composition_golden():
    assoc = shared_theory("assoc")
    t = parse_term("f(f(x1,x2),x2)")
    s = parse_term("f(f(f(x1,x2),x2),x3)")
    r = parse_term("f(x1,x2)")
    u = Var(4)
    assert sigma_position_sets(t, r, assoc).minimal == _pos("1")
    assert sigma_position_sets(s, r, assoc).minimal == _pos("11")
    assert sigma_compose(t, r, u, assoc) == parse_term("f(x4,x2)")
    assert sigma_compose(s, r, u, assoc) == parse_term("f(f(x4,x2),x3)")


def test_criterion_05_valuations_and_arrays():
    t = parse_term("f(x3,f(f(x1,x2),x2))")
    arrays = to_arrays(t)
    assert arrays.positions == tuple(
        parse_position(p) for p in ("e", "1", "2", "21", "211", "212", "22")
    )
    assert arrays.var_indexes == (3, 1, 2, 2)
    assert from_arrays(arrays) == t
    # The claimed Depth of 4 is wrong: the deepest leaf of this term sits
    # under five nested applications, so Depth is 5 and this fails honestly.
    assert valuations(parse_term("f(f(x1,f(f(f(x3,x4),x3),x1)),x2)")) == (6, 5, 4)


def test_criterion_06_every_reduction_step_decreases_length():
    failures = []
    for name in BUILTIN_NAMES:
        for mode in ("S", "E"):
            for t, _, chain in normal_forms(name, mode):
                if any(b >= a for a, b in zip(chain, chain[1:])):
                    failures.append(f"{name}/{mode}: non-decreasing step from {t}")
    assert failures == [], f"{len(failures)} non-decreasing steps: " + "; ".join(
        failures[:5]
    )


def test_criterion_07_unique_normal_forms():
    failures = []
    for name in BUILTIN_NAMES:
        thy = shared_theory(name)
        for mode in ("S", "E"):
            for t, nf, _ in normal_forms(name, mode):
                for seed in range(10):
                    got = reduce_with_strategy(t, thy, mode, seed)
                    if got != nf:
                        failures.append(
                            f"{name}/{mode}/seed={seed}: {t} -> {got} != {nf}"
                        )
                        break

    # equivalent idempotent start terms must share the same S-normal form
    idem = shared_theory("idempotent")
    rng = random.Random(7)
    s_nf = {t: nf for t, nf, _ in normal_forms("idempotent", "S")}
    for t in corpus()[:200]:
        # duplicate one subterm occurrence: t2 = t with u replaced by f(u,u)
        subs = sorted(subterm_set(t), key=term_sort_key)
        u = subs[rng.randrange(len(subs))]
        pos = [p for p in to_arrays(t).positions if _subterm_is(t, p, u)]
        p = pos[rng.randrange(len(pos))]
        t2 = replace_at(t, p, Node(u, u))
        assert idem.equal(t, t2) is True
        if normal_form(t2, idem, "S")[0] != s_nf[t]:
            failures.append(f"idempotent pair: {t} vs {t2} disagree on Sr")
    assert failures == [], f"{len(failures)} mismatches: " + "; ".join(failures[:5])


def _subterm_is(t, p, u):
    from termalg.terms import subterm_at

    return subterm_at(t, p) == u


def _is_right_comb(t):
    while isinstance(t, Node):
        if isinstance(t.left, Node):
            return False
        t = t.right
    return True


def _is_left_comb(t):
    while isinstance(t, Node):
        if isinstance(t.right, Node):
            return False
        t = t.left
    return True


def test_criterion_08_normal_forms_sound_and_comb_shaped():
    failures = []
    for name in BUILTIN_NAMES:
        thy = shared_theory(name)
        for mode in ("S", "E"):
            bad = sum(
                1
                for t, nf, _ in normal_forms(name, mode)
                if thy.equal(t, nf) is not True
            )
            if bad:
                failures.append(f"{name}/{mode}: {bad} normal forms not provably equal")

    for name in GRP_RULE_NAMES:
        thy = shared_theory(name)
        left_family = name.startswith("grp-rule:f(f")
        comb = _is_right_comb if left_family else _is_left_comb
        bad_shape = bad_eq = 0
        for t in corpus():
            nf_e, _ = normal_form(t, thy, "E")
            if not comb(nf_e):
                bad_shape += 1
            if thy.equal(t, nf_e) is not True:
                bad_eq += 1
            if thy.equal(t, normal_form(t, thy, "S")[0]) is not True:
                bad_eq += 1
        if bad_shape:
            failures.append(f"{name}: {bad_shape} non-comb Er normal forms")
        if bad_eq:
            failures.append(f"{name}: {bad_eq} normal forms not provably equal")
    assert failures == [], "; ".join(failures)


def test_criterion_09_stability_sweeps():
    bounds = SweepBounds(3, 3, 3)
    failures = []
    unknown_lines = []

    def run(thy, mode, expect_violations):
        report = check_stability(thy, mode, bounds)
        assert validate_report(report), f"{thy.name}/{mode}: validation failed"
        for t, s, r, reason in report.unknowns:
            unknown_lines.append(f"{thy.name}/{mode}: {t} = {s} (r={r}): {reason}")
        if report.unknown_fraction > 0.05:
            failures.append(
                f"{thy.name}/{mode}: unknown fraction "
                f"{report.unknown_fraction:.1%} exceeds 5%"
            )
        n = len(report.violations)
        if expect_violations and n == 0:
            failures.append(f"{thy.name}/{mode}: expected a violation, found none")
        if not expect_violations and n:
            sample = report.violations[0]
            failures.append(
                f"{thy.name}/{mode}: {n} validated violations, e.g. "
                f"t={sample.t} s={sample.s} r={sample.r} u={sample.u} -> "
                f"{sample.left} != {sample.right}"
            )

    run(shared_theory("idempotent"), "SigmaR1", False)
    run(shared_theory("commutative"), "SigmaR1", False)
    for i, j, k, m in itertools.product((1, 2), repeat=4):
        axiom = Identity.parse(f"f(f(x{i},x{j}),x{k})=f(x{m},x{m})")
        theory = AxiomsTheory(
            (axiom,),
            config=OracleConfig(max_deduction_steps=5000),
            name="axioms:" + axiom.text(),
        )
        run(theory, "SigmaR1", False)
    for name in ("sg-abs-1-2", "sg-abs-2-3", "sg-abs-1-3"):
        run(shared_theory(name), "SigmaR1", False)
    run(shared_theory("assoc"), "SigmaR1", True)
    run(shared_theory(SIGMA2), "SigmaR1", True)
    for name in GRP_RULE_NAMES:
        run(shared_theory(name), "SR1", False)

    if unknown_lines:
        print(f"\n{len(unknown_lines)} unknown-verdict instances:")
        for line in unknown_lines:
            print("  " + line)
    assert failures == [], f"{len(failures)} sweep failures:\n" + "\n".join(failures)


def test_criterion_10_star_composition_factors_through_removal_normal_form():
    rng = random.Random(10)
    failures = []
    for name in GRP_RULE_NAMES:
        thy = shared_theory(name)
        bad = 0
        sample = None
        for _ in range(200):
            t = random_term(rng, 4, 3)
            subs = sorted(subterm_set(t), key=term_sort_key)
            r = subs[rng.randrange(len(subs))]
            u = random_term(rng, 2, 3)
            left = star_compose(t, r, u, thy)
            right = sigma_compose(normal_form(t, thy, "E")[0], r, u, thy)
            if thy.equal(left, right) is not True:
                bad += 1
                if sample is None:
                    sample = f"t={t} r={r} u={u}: {left} != {right}"
        if bad:
            failures.append(f"{name}: {bad}/200 violations, e.g. {sample}")
    assert failures == [], "\n".join(failures)


def test_criterion_11_exact_deciders_agree_with_model_checking():
    terms = list(enumerate_terms_by_length(4, 3))
    vs = (1, 2, 3)
    disagreements = []
    for name in EXACT_DECIDER_NAMES:
        thy = shared_theory(name)
        assert thy.exact, f"{name} is expected to ship an exact decider"
        models = thy.models(3)
        caches = [dict() for _ in models]
        signature = {
            t: tuple(
                tuple(eval_vector(m, t, vs, c).tolist())
                for m, c in zip(models, caches)
            )
            for t in terms
        }
        classes = {}
        for t in terms:
            classes.setdefault(thy._cached_key(t), []).append(t)
        for members in classes.values():
            sigs = {signature[t] for t in members}
            if len(sigs) > 1:
                disagreements.append(
                    f"{name}: proved-equal terms distinguished by a model: {members}"
                )
        reps = sorted(
            (min(ms, key=term_sort_key) for ms in classes.values()), key=term_sort_key
        )
        for a, b in itertools.combinations(reps, 2):
            verdict = thy.decide(a, b)
            if verdict.outcome != REFUTED:
                disagreements.append(f"{name}: {a} vs {b} not refuted ({verdict.outcome})")
                continue
            cert = verdict.certificate
            if isinstance(cert, CounterModel):
                lhs_vals = tuple(eval_vector(cert.algebra, a, vs).tolist())
                rhs_vals = tuple(eval_vector(cert.algebra, b, vs).tolist())
                if lhs_vals == rhs_vals:
                    disagreements.append(
                        f"{name}: attached counter-model fails to separate {a} and {b}"
                    )
                if not all(satisfies(cert.algebra, ax.lhs, ax.rhs) for ax in thy.axioms):
                    disagreements.append(
                        f"{name}: attached counter-model violates the axioms"
                    )
            elif signature[a] != signature[b]:
                disagreements.append(
                    f"{name}: refuted without a counter-model although one of "
                    f"size <= 3 separates {a} and {b}"
                )
    assert disagreements == [], f"{len(disagreements)}: " + "; ".join(disagreements[:5])
