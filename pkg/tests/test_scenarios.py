"""The golden scenario registry must be complete and green."""

from termalg.scenarios import named_scenarios, run_all

EXPECTED_NAMES = {
    "valuations",
    "remark-4.1-arrays",
    "lemma-3.1-stable-sweep",
    "lemma-3.2-condition-gap",
    "lemma-3.3-consequence",
    "thm-3.1-case-1",
    "thm-3.1-case-2",
    "thm-5.1-idempotent-sweep",
    "thm-5.2-commutative-sweep",
    "thm-5.3-axioms-sweep",
    "prop-6.1",
    "def-6.1-example",
    "prop-6.2-semigroup",
    "prop-6.2-sigma2",
    "thm-6.1-d5-instance",
    "lemma-6.2-er-compose",
    "lemma-6.3-er",
    "lemma-6.4-er",
    "thm-6.2-sr1-sweep",
    "closure-d5",
}


def test_registry_names():
    assert {s.name for s in named_scenarios()} == EXPECTED_NAMES


def test_all_scenarios_pass():
    failures = [(name, detail) for name, ok, detail in run_all() if not ok]
    assert failures == []


def test_scenario_details_are_reported():
    scenario = next(s for s in named_scenarios() if s.name == "prop-6.1")
    passed, detail = scenario.run()
    assert passed
    assert detail  # each check contributes a line
