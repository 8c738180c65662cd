import pytest

from shadowtrace.laws import ALL_LAWS, APPLICABLE, INSTANCES, verify_law

CASES = [(law, inst) for law in ALL_LAWS for inst in APPLICABLE.get(law, INSTANCES)]


@pytest.mark.parametrize("law, instance", CASES, ids=[f"{a}-{b}" for a, b in CASES])
def test_law_holds(law, instance):
    rep = verify_law(law, instance, trials=8, seed=3)
    assert rep.ok, list(rep.lines())
    assert rep.trials == 8


def test_reports_are_deterministic():
    a = list(verify_law("mate", "grbimod-q", trials=10, seed=5).lines())
    b = list(verify_law("mate", "grbimod-q", trials=10, seed=5).lines())
    assert a == b


def test_unknown_law_and_inapplicable_instance():
    with pytest.raises(ValueError, match="unknown law"):
        verify_law("nonsense")
    with pytest.raises(ValueError, match="applies to"):
        verify_law("cube", "span")


def test_short_instance_names():
    assert verify_law("unit", "matmod", trials=2).name == "unit[matmod-z]"
