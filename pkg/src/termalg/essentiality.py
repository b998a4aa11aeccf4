"""Essential and fictive variables, positions, and subterms of a term.

A position p is fictive in t with respect to a theory when the theory proves
t(p; x_a) = t(p; x_b) for two fresh distinct variables; a variable x_i is
fictive when t is provably unchanged by renaming x_i to a fresh variable.
Fictive positions are upward-closed under extension, which the computation
exploits: descendants of a fictive position are classified without queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UndecidedError
from .terms import (
    Term,
    Var,
    max_var_index,
    positions,
    rename_canonical,
    replace_at,
    substitute,
    subterm_at,
    subterm_set,
    var_set,
    variables,
)
from .theories import Theory


@dataclass(frozen=True)
class EssentialityReport:
    term: Term
    essential_vars: frozenset
    fictive_vars: frozenset
    undecided_vars: frozenset
    essential_positions: frozenset
    fictive_positions: frozenset
    undecided_positions: frozenset

    @property
    def decided(self):
        return not self.undecided_vars and not self.undecided_positions


def _report_cache(theory: Theory):
    cache = getattr(theory, "_essentiality_cache", None)
    if cache is None:
        cache = {}
        theory._essentiality_cache = cache
    return cache


def essentiality_report(t: Term, theory: Theory) -> EssentialityReport:
    """Classify every variable and position of t as essential/fictive/undecided."""
    cache = _report_cache(theory)
    canon = rename_canonical(t)
    cached = cache.get(canon)
    if cached is not None:
        return _rename_report(cached, t)
    report = _compute_report(canon, theory)
    cache[canon] = report
    return _rename_report(report, t)


def _rename_report(report: EssentialityReport, t: Term) -> EssentialityReport:
    if report.term == t:
        return report
    # positions are shared; variable verdicts transfer along the renaming
    mapping = dict(zip(variables(report.term), variables(t)))

    def remap(s):
        return frozenset(mapping[i] for i in s)

    return EssentialityReport(
        t,
        remap(report.essential_vars),
        remap(report.fictive_vars),
        remap(report.undecided_vars),
        report.essential_positions,
        report.fictive_positions,
        report.undecided_positions,
    )


def _compute_report(t: Term, theory: Theory) -> EssentialityReport:
    n = max_var_index(t)
    xa, xb = Var(n + 1), Var(n + 2)

    ess_p, fic_p, und_p = set(), set(), set()
    for p in sorted(positions(t)):
        if any(q in fic_p for q in (p[:k] for k in range(len(p)))):
            # extensions of fictive positions are fictive (monotone structure)
            fic_p.add(p)
            continue
        verdict = theory.equal(replace_at(t, p, xa), replace_at(t, p, xb))
        if verdict is True:
            fic_p.add(p)
        elif verdict is False:
            ess_p.add(p)
        else:
            und_p.add(p)

    ess_v, fic_v, und_v = set(), set(), set()
    for i in sorted(var_set(t)):
        verdict = theory.equal(t, substitute(t, {i: xa}))
        if verdict is True:
            fic_v.add(i)
        elif verdict is False:
            ess_v.add(i)
        else:
            und_v.add(i)

    return EssentialityReport(
        t,
        frozenset(ess_v),
        frozenset(fic_v),
        frozenset(und_v),
        frozenset(ess_p),
        frozenset(fic_p),
        frozenset(und_p),
    )


def essential_positions(t: Term, theory: Theory) -> frozenset:
    report = essentiality_report(t, theory)
    if report.undecided_positions:
        raise UndecidedError(
            "essentiality undecided at positions "
            f"{sorted(report.undecided_positions)} of {t}",
            query=(t, sorted(report.undecided_positions)),
        )
    return report.essential_positions


def essential_subterms(t: Term, theory: Theory) -> set:
    """SEss(t): subterms of t at some essential position, closed under
    theory-equivalence among the subterms of t."""
    at_essential = {subterm_at(t, p) for p in essential_positions(t, theory)}
    out = set()
    for u in subterm_set(t):
        if u in at_essential:
            out.add(u)
            continue
        for w in at_essential:
            verdict = theory.equal(u, w)
            if verdict is None:
                raise UndecidedError(
                    f"equivalence of subterm {u} and {w} undecided", query=(u, w)
                )
            if verdict:
                out.add(u)
                break
    return out


def is_essential_subterm(r: Term, t: Term, theory: Theory) -> bool:
    """Whether r is theory-equivalent to some subterm at an essential position."""
    for p in essential_positions(t, theory):
        verdict = theory.equal(r, subterm_at(t, p))
        if verdict is None:
            raise UndecidedError(
                f"equivalence of {r} and subterm at {p} undecided",
                query=(r, subterm_at(t, p)),
            )
        if verdict:
            return True
    return False
