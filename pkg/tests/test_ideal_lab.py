import pytest

from skewlab.exceptions import IdealError
from skewlab.models import IdealOperation
from skewlab.services.examples import build_swap_product, product_skew
from skewlab.services.ideal_lab import (
    all_ideals,
    contract,
    cutting_down_orbit,
    ideal_generate,
    ideal_ops,
    ideals_by_subgroups,
    image_in_quotient,
    induced_ideal_truncated,
    is_alpha_prime,
    is_alpha_prime_by_ideals,
    is_prime,
    is_tau_delta_prime,
    lying_over,
    minimal_primes_over,
    prime_ideals,
    prime_witness,
    tau_orbit_decomposition,
    tau_segment,
    tau_primes,
    unit_ideal,
    zero_ideal,
)
from skewlab.services.skew_series import SeriesRing


def test_ideals_of_zmod(zmod8):
    ring, _ = zmod8
    ideals = all_ideals(ring)
    assert [len(I) for I in ideals] == [1, 2, 4, 8]
    assert {I.elements for I in ideals} == {I.elements for I in ideals_by_subgroups(ring)}
    assert all_ideals(ring) is ideals


def test_primes_of_zmod(zmod8):
    ring, _ = zmod8
    two = ideal_generate(ring, (2,))
    assert prime_ideals(ring) == [two]
    witness = prime_witness(zero_ideal(ring))
    assert witness is not None
    a, b = witness
    assert ring.mul(a, b) == 0
    assert minimal_primes_over(ideal_generate(ring, (4,))) == [two]
    with pytest.raises(IdealError):
        is_prime(unit_ideal(ring))


def test_ideal_operations(zmod8):
    ring, _ = zmod8
    two, four = ideal_generate(ring, (2,)), ideal_generate(ring, (4,))
    assert ideal_ops(IdealOperation.PRODUCT, two, two) == four
    assert ideal_ops(IdealOperation.INTERSECTION, two, four) == four
    assert ideal_ops(IdealOperation.SUM, two, four) == two
    assert four <= two
    assert zero_ideal(ring).describe() == "<0>"


def test_series_ring_primes(zmod8_series):
    algebra = zmod8_series
    j = ideal_generate(algebra, algebra.ideal_generators)
    assert len(j) == 32
    assert prime_ideals(algebra) == [j]
    assert tau_primes(algebra) == [j]
    assert contract(j).elements == frozenset({0, 2, 4, 6})


def test_induced_ideal_and_lying_over(zmod8_series):
    algebra = zmod8_series
    ring = algebra.base
    two = ideal_generate(ring, (2,))
    induced = induced_ideal_truncated(two, algebra)
    assert len(induced) == 8
    over = lying_over(two, algebra)
    assert len(over) == 1
    assert len(over[0]) == 32
    assert contract(over[0]) == two


def test_lying_over_needs_tau_delta_prime(zmod8_series):
    algebra = zmod8_series
    zero = zero_ideal(algebra.base)
    assert not is_tau_delta_prime(zero, algebra.skew)
    with pytest.raises(IdealError):
        lying_over(zero, algebra)


def test_cutting_down(zmod8_series):
    algebra = zmod8_series
    j = ideal_generate(algebra, algebra.ideal_generators)
    assert cutting_down_orbit(j) == [ideal_generate(algebra.base, (2,))]


def test_contraction_lands_in_truncated_constants(zmod8):
    ring, skew = zmod8
    algebra = SeriesRing(ring, skew, 2)
    j = ideal_generate(algebra, algebra.ideal_generators)
    contraction = contract(j)
    assert contraction.ambient is algebra.constant_ring
    assert len(contraction) == 2
    assert image_in_quotient(ideal_generate(ring, (2,)), algebra.constant_ring) == contraction
    with pytest.raises(IdealError):
        contract(ideal_generate(ring, (2,)))


def test_swap_zero_ideal_is_alpha_prime(swap):
    ring, alpha = swap
    zero = zero_ideal(ring)
    assert not is_prime(zero)
    assert is_alpha_prime(zero, alpha)
    assert is_alpha_prime_by_ideals(zero, alpha)
    orbit = tau_orbit_decomposition(zero, alpha)
    assert len(orbit) == 2
    assert all(is_prime(P) for P in orbit)


def test_unstable_ideal_is_rejected(swap):
    ring, alpha = swap
    first = ideal_generate(ring, (ring.idempotent(0),))
    with pytest.raises(IdealError) as excinfo:
        is_alpha_prime(first, alpha)
    assert excinfo.value.witness is not None
    algebra = SeriesRing(ring, product_skew(ring), 2)
    with pytest.raises(IdealError):
        induced_ideal_truncated(first, algebra)


def test_cutting_down_accepts_a_single_prime_of_the_orbit(swap):
    ring, _ = swap
    algebra = SeriesRing(ring, product_skew(ring), 2)
    primes = prime_ideals(algebra)
    assert len(primes) == 2
    for P in primes:
        contraction = contract(P, check_stability=False)
        assert cutting_down_orbit(P) == [contraction]


def test_tau_segment():
    ring, alpha = build_swap_product(2, 4)
    first = ideal_generate(ring, (ring.idempotent(0),))
    second = ideal_generate(ring, (ring.idempotent(1),))
    third = ideal_generate(ring, (ring.idempotent(2),))
    assert tau_segment([first], alpha) == [first]
    segment = tau_segment([second, first], alpha)
    assert segment is not None and set(segment) == {first, second}
    assert tau_segment([first, third], alpha) is None
