import pytest

from termalg.theories import theory_from_name

# theory instances are shared session-wide so oracle/essentiality caches
# accumulate across tests instead of being rebuilt
_THEORIES = {}


def shared_theory(name):
    got = _THEORIES.get(name)
    if got is None:
        got = theory_from_name(name)
        _THEORIES[name] = got
    return got


@pytest.fixture
def idempotent():
    return shared_theory("idempotent")


@pytest.fixture
def commutative():
    return shared_theory("commutative")


@pytest.fixture
def assoc():
    return shared_theory("assoc")


@pytest.fixture
def sigma2():
    return shared_theory("grp-rule:f(f(x1,x2),x3)=f(x2,x3)")
