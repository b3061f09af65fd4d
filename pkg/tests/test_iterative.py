import pytest
from hypothesis import given, strategies as st

from hybridmod.errors import ConfigurationError
from hybridmod.iterative import IterConfig, conditional_subtract_shift, reduce_iterative
from hybridmod.modmath import Modulus, Operand

from .conftest import msb_moduli, random_modulus


def test_examples():
    assert reduce_iterative(Operand(100, 8), Modulus(9, 4), IterConfig(8, 4))[0] == 100 % 9 == 1
    assert reduce_iterative(Operand(0, 8), Modulus(13, 4), IterConfig(8, 4))[0] == 0
    a = 13 * 16 - 1
    assert a == 207 == 13 * 15 + 12
    assert reduce_iterative(Operand(a, 8), Modulus(13, 4), IterConfig(8, 4))[0] == 12


def test_conditional_subtract():
    assert conditional_subtract_shift(10, 16) == (10, False)
    assert conditional_subtract_shift(20, 16) == (4, True)
    with pytest.raises(ConfigurationError):
        conditional_subtract_shift(1, 0)


@given(st.integers(1, 1 << 40), st.data())
def test_single_subtract_bound(shifted, data):
    state = data.draw(st.integers(0, 2 * shifted - 1))
    assert conditional_subtract_shift(state, shifted)[0] < shifted


def test_exhaustive_w8_n4():
    cfg = IterConfig(8, 4)
    for m in msb_moduli(4):
        for a in range(256):
            r, tr = reduce_iterative(Operand(a, 8), m, cfg)
            assert r == a % m.value
            assert tr.total_cycles == cfg.iterations == 4
            assert tr.stats["pre_adjust"] < 2 * m.value


@pytest.mark.parametrize("w,n", [(256, 128), (143, 128)])
def test_random_wide(rng, w, n):
    cfg = IterConfig(w, n)
    for _ in range(10_000):
        m = random_modulus(rng, n)
        a = rng.getrandbits(w)
        r, tr = reduce_iterative(Operand(a, w), m, cfg)
        assert r == a % m.value
        assert tr.total_cycles == w - n


def test_without_final_adjust_stays_below_2m():
    m = Modulus(9, 4)
    for a in range(256):
        r, _ = reduce_iterative(Operand(a, 8), m, IterConfig(8, 4), final_adjust=False)
        assert r < 18 and r % 9 == a % 9


def test_config_validation():
    with pytest.raises(ConfigurationError):
        IterConfig(4, 4)
    with pytest.raises(ConfigurationError):
        reduce_iterative(Operand(1, 7), Modulus(9, 4), IterConfig(8, 4))
