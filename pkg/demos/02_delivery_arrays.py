# Placement delivery arrays: lifting packings, conjugating, grouping.

from nhsdp import (
    Nhsdp,
    conjugate_pda,
    construct_nhsdp,
    drop_columns,
    group_pda_divisible,
    mn_pda,
    pda_from_nhsdp,
    pda_stats,
    verify_pda,
)
from nhsdp.serialize import pda_to_text

# Lift the (15, 4, 2) packing: one row and one column per ring element.
packing = Nhsdp.from_blocks(15, [{-1, 1, -2, 2}, {-4, 4, -5, 5}])
arr = pda_from_nhsdp(packing)
print("parameters (K, F, Z, S):", arr.params())
print(pda_to_text(arr))

stats = pda_stats(arr)
print("memory ratio:", stats.memory_ratio, " load:", stats.load, " gain:", stats.gain)
print("verdict:", verify_pda(arr).detail)

# Swapping rows and symbols gives the dual trade-off point.
conj = conjugate_pda(arr)
print("conjugate:", conj.params(), "->", pda_stats(conj).memory_ratio, pda_stats(conj).load)

# Replication serves a multiple of the users at the same subpacketization.
grouped = group_pda_divisible(arr, 45)
print("grouped to 45 users:", grouped.params())

# Even user counts: build for v = K + 1 and drop the virtual column.
even = drop_columns(arr, range(14))
print("14-user array:", even.params(), verify_pda(even).code)

# The classic subset-indexed array, for comparison: exponential rows in K.
classic = mn_pda(8, 4)
print("subset array at K=8, t=4:", classic.params())

# Low-rate regime: a difference-set packing gives gain g = K - Z at load 1.
tiny = pda_from_nhsdp(construct_nhsdp(27, (1, 1, 1)))
print("27-user unit-load array:", tiny.params(), pda_stats(tiny).load)
