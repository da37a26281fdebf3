"""Designing a stepped Nyquist filter and reading off its overshoot.

A layered filter is a weighted sum of trapezoids sharing one flat edge.
The overshoot bound is the weighted sum of per-layer bounds.  The L1 norm
of the kernel is a rate-free benchmark for comparison.
"""

import math

from overshoot import KernelSpec, LayeredFilter, kernel_l1, layered_overshoot_bound

B = math.pi
designs = {
    "one layer, 2x": LayeredFilter((B, 2 * B), (1.0, 0.0)),
    "two layers": LayeredFilter((B, 1.5 * B, 2 * B), (1.0, 0.5, 0.0)),
    "three layers": LayeredFilter((B, 1.25 * B, 1.5 * B, 2 * B), (1.0, 0.6, 0.25, 0.0)),
}
for name, filt in designs.items():
    b = layered_overshoot_bound(filt, 2)
    l1 = kernel_l1(KernelSpec.layered(filt))
    print(f"{name:14s} bound at L=2: {b.value:.6f}   L1 norm: {l1.value:.6f}")
    for layer in b.details["layers"]:
        print(f"    leps={layer['leps']:.3f} weight={layer['weight']:.2f} "
              f"{layer['method']:>9s} {layer['bound']:.6f}")
