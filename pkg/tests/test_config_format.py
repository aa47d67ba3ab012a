import pytest

from skewlab.exceptions import ConfigError
from skewlab.models import RelationForm, RingFamily
from skewlab.services.config_format import base_precision_cap, parse_config

from tests.conftest import PLANE_CONFIG, TRUNCPOLY_CONFIG, ZMOD_CONFIG

MATRICES_CONFIG = """
# completed quantum 2x2 matrices
[base]
family = quantum-matrices
prime = 5
n = 2
lambda = 2
p12 = 3
precision = 3

[suite]
names = quantum-relations, ring-axioms

[budget]
samples = 50
seed = 11
"""


def test_parse_zmod():
    config = parse_config(ZMOD_CONFIG)
    assert config.base.family == RingFamily.ZMOD
    assert config.base.exponent == 3
    assert [layer.var for layer in config.layers] == ["y"]
    assert config.layers[0].tau == "id"
    assert config.layers[0].delta == "zero"
    assert config.source == ZMOD_CONFIG


def test_parse_truncpoly_layer():
    layer = parse_config(TRUNCPOLY_CONFIG).layers[0]
    assert layer.tau == "map x + x^2"
    assert layer.delta == "tau-minus-id"
    assert layer.line == 7


def test_parse_quantum_matrices():
    config = parse_config(MATRICES_CONFIG)
    assert config.base.lam == 2
    assert config.base.p_upper == {"12": 3}
    assert config.base.relation_form == RelationForm.STANDARD
    assert config.suites == ["quantum-relations", "ring-axioms"]
    assert config.budget.samples == 50
    assert config.budget.seed == 11
    assert base_precision_cap(config.base) == 3


def test_plane_has_no_layers():
    config = parse_config(PLANE_CONFIG)
    assert config.layers == []
    assert config.base.q == 2


@pytest.mark.parametrize(
    "text,line",
    [
        ("[base]\nfamily = zmod\nprime = 2\n", 1),
        ("[base]\nfamily = ring\nprime = 2\n", 2),
        ("[base]\nfamily = zmod\nprime = two\nexponent = 3\n", 3),
        ("[base]\nfamily = zmod\nprime = 2\nexponent = 3\nlength = 4\n", 5),
        ("[base]\nfamily = zmod\nprime = 2\nexponent = 2\n[layer]\nprecision = 3\n", 5),
        ("[base]\nfamily = zmod\nprime = 2\nexponent = 2\n[layer]\nprecision = 2\ntau = twist\n", 7),
        ("[base]\nfamily = zmod\nprime = 2\nexponent = 2\n[layer]\nvar = y\n", 5),
        ("[base]\nfamily = zmod\nprime = 2\nprime = 3\n", 4),
        ("prime = 2\n", 1),
        ("[base]\nfamily = zmod\nprime = 2\nexponent = 2\n[extras]\n", 5),
        ("[base]\nfamily = quantum-matrices\nprime = 5\nn = 2\nlambda = 2\np21 = 3\nprecision = 2\n", 6),
    ],
)
def test_config_errors_carry_lines(text, line):
    with pytest.raises(ConfigError) as excinfo:
        parse_config(text)
    assert excinfo.value.line == line


def test_missing_base():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[layer]\nprecision = 2\n")
    assert excinfo.value.line is None
