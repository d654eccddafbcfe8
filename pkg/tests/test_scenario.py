import pytest

from eponlab.core import compute_max_cycle
from eponlab.scenario import ScenarioError, default_scenario, parse_scenario
from eponlab.sim import Fidelity
from eponlab.traffic import Normalization


def test_defaults():
    sc = default_scenario()
    assert sc.system.n_onus == 16 and sc.system.w_max[0] == 15000
    assert compute_max_cycle(sc.system) == pytest.approx(2e-3, rel=1e-12)
    assert sc.profile.normalization is Normalization.CHANNEL
    assert sc.sim.fidelity is Fidelity.QUEUEING
    loads = sc.loads()
    assert len(loads) == 8 and loads[0] == 0.05 and loads[-1] == pytest.approx(0.4)


def test_several_pairs_per_line_and_comments():
    sc = parse_scenario(
        "# uneven mix\nmix_ef=0.2  mix_af=0.3  mix_be=0.5\nload_steps = 1  # one point\n"
    )
    assert tuple(sc.profile.mix.values()) == (0.2, 0.3, 0.5)
    assert sc.loads() == [0.05]


def test_w_max_instead_of_cycle():
    sc = parse_scenario("w_max_bytes = 9000")
    assert sc.system.w_max == (9000,) * 16


def test_choice_keys():
    sc = parse_scenario("normalization = guaranteed\nfidelity = protocol")
    assert sc.profile.normalization is Normalization.GUARANTEED
    assert sc.sim.fidelity is Fidelity.PROTOCOL


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("bogus = 1", "unknown key"),
        ("seed = 1\nseed = 2", "line 2"),
        ("t_max_s = 0.002\nw_max_bytes = 15000", "mutually exclusive"),
        ("mix_ef = 0.5", r"mix_\* must sum to 1"),
        ("delta_ef = 0.1 delta_af = 0.1 delta_be = 0.1", r"delta_\* must sum to 1"),
        ("n_onus = 1.5", "bad value"),
        ("fidelity = exact", "must be one of"),
        ("load_start = 0.5 load_end = 0.1", "load_start"),
        ("just words", "expected key = value"),
        ("t_max_s = 0.00001", "guard"),
    ],
)
def test_errors(text, fragment):
    with pytest.raises(ScenarioError, match=fragment):
        parse_scenario(text)
