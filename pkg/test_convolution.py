#!/usr/bin/env python3
"""
Test script for convolution products, units and exact inverses.
"""

import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

import pytest

from kcat.convolution import (ConvolutionContext, ConvolutionElement, convolution_invert,
                              convolution_invert_diagnosed, convolution_product, convolution_unit,
                              power_context)
from kcat.errors import ContextMismatch
from kcat.lincat import TwoCell, equal, identity
from kcat.structures import structurally_equal
from kcat.zoo import (cyclic_group, group_algebra, sweedler_h4, trivial_coquasi,
                      z2_bicharacter_sigma)


def test_unit_is_neutral():
    """Test that the convolution unit is a two-sided unit."""
    print("Testing convolution unit...")

    monad, comonad, _ = sweedler_h4()
    ctx = ConvolutionContext([comonad], [monad])
    f = ConvolutionElement(identity(monad.carrier), ctx)
    one = convolution_unit(ctx)
    assert equal((one * f).cell, f.cell).passed
    assert equal((f * one).cell, f.cell).passed

    print("✓ Convolution unit tests passed!")


def test_antipode_is_inverse_of_identity():
    """Test that the inverse of id_H4 is the antipode."""
    print("Testing antipode as a convolution inverse...")

    monad, comonad, antipode = sweedler_h4()
    ctx = ConvolutionContext([comonad], [monad])
    inverse, reason = convolution_invert_diagnosed(ConvolutionElement(identity(monad.carrier), ctx))
    assert reason == "two-sided"
    assert structurally_equal(inverse.cell, antipode)

    s = ConvolutionElement(antipode, ctx)
    product = convolution_product(s, ConvolutionElement(identity(monad.carrier), ctx))
    assert equal(product.cell, ctx.unit_cell()).passed

    print("✓ Antipode inverse tests passed!")


def test_bicharacter_is_self_inverse():
    """Test sigma^-1 = sigma for the sign bicharacter on kZ/2."""
    print("Testing bicharacter inverse...")

    monad, comonad = group_algebra(cyclic_group(2))
    q = trivial_coquasi(monad, comonad)
    sigma = z2_bicharacter_sigma(q, monad)
    ctx = ConvolutionContext([comonad, comonad], [monad])
    inverse = convolution_invert(ConvolutionElement(sigma, ctx))
    assert inverse is not None
    assert structurally_equal(inverse.cell, sigma)

    print("✓ Bicharacter inverse tests passed!")


def test_zero_has_no_inverse():
    """Test the diagnosis for a non-invertible element."""
    print("Testing non-invertible elements...")

    monad, comonad = group_algebra(cyclic_group(3))
    ctx = ConvolutionContext([comonad], [monad])
    zero = TwoCell(ctx.dom, ctx.cod, {}, ctx.field)
    inverse, reason = convolution_invert_diagnosed(ConvolutionElement(zero, ctx))
    assert inverse is None
    assert reason == "no left inverse"

    print("✓ Non-invertible element tests passed!")


def test_context_mismatch():
    """Test that elements must fit their algebra."""
    print("Testing context checks...")

    m2, c2 = group_algebra(cyclic_group(2))
    m3, c3 = group_algebra(cyclic_group(3), space_name="G")
    ctx2 = ConvolutionContext([c2], [m2])
    ctx3 = ConvolutionContext([c3], [m3])
    with pytest.raises(ContextMismatch):
        ConvolutionElement(identity(m3.carrier), ctx2)
    with pytest.raises(ContextMismatch):
        convolution_product(ConvolutionElement(identity(m2.carrier), ctx2),
                            ConvolutionElement(identity(m3.carrier), ctx3))
    with pytest.raises(ContextMismatch):
        ConvolutionContext()

    print("✓ Context check tests passed!")


def test_power_context():
    """Test the split comultiplication of F.F.F."""
    print("Testing power contexts...")

    monad, comonad = group_algebra(cyclic_group(2))
    ctx = power_context(comonad, 3)
    split = ctx.comultiplication()
    assert split.dom == ctx.dom and len(split.cod) == 6
    # group-like basis: a b c -> a b c a b c
    assert split.get((1, 0, 1, 1, 0, 1), (1, 0, 1)) == monad.field.one
    assert split.nnz == 8
    up = power_context(monad, 2, on_domain=False)
    assert up.unit_cell().cod == monad.carrier * 2

    print("✓ Power context tests passed!")


if __name__ == "__main__":
    print("Running Convolution Tests...\n")

    try:
        test_unit_is_neutral()
        test_antipode_is_inverse_of_identity()
        test_bicharacter_is_self_inverse()
        test_zero_has_no_inverse()
        test_context_mismatch()
        test_power_context()

        print("\n🎉 All convolution tests passed!")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
