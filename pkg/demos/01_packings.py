# Half-sum-free disjoint packings: construction, verification, optimisation.

from nhsdp import (
    Nhsdp,
    block_params,
    choose_params_closed_form,
    construct_nhsdp,
    half_sum_set,
    solve_problem1_exact,
    verify_nhsdp,
)

# A hand-made (15, 4, 2) packing: blocks {±1, ±2} and {±4, ±5} mod 15.
packing = Nhsdp.from_blocks(15, [{-1, 1, -2, 2}, {-4, 4, -5, 5}])
print("blocks:", packing.blocks)
print("verdict:", verify_nhsdp(packing.v, packing.blocks).detail)

# The defining property: no within-block half-sum lands in any block.
print("half-sums:", sorted(half_sum_set(packing.v, packing.blocks)))
print("elements: ", sorted(packing.element_set()))

# A bad candidate is rejected with a concrete witness.
bad = verify_nhsdp(15, [{1, 2, 3}])
print("bad candidate:", bad.detail)

# The product construction: scales f(i) grow fast enough that signed
# combinations of the base points x_i = f(i)/m_i never collide.
params = block_params((2, 2, 2))
print("f =", params.f, " x =", params.x, " phi =", params.phi)
print("minimum modulus:", params.min_modulus)

big = construct_nhsdp(125, (2, 2, 2))
print("constructed:", (big.v, big.g, big.b), "first block:", big.blocks[0])

# Choosing the block counts m: the all-equal closed form versus exhaustion.
v, n = 63, 2
print("closed form:", choose_params_closed_form(v, n))
print("exhaustive: ", solve_problem1_exact(v, n))
