# Scheme comparison: exact-rational table rows, grouping, trade-off sweeps.

from nhsdp import (
    apply_grouping_formula,
    evaluate_nhsdp_scheme,
    evaluate_scheme,
    ratio_report,
    tradeoff_sweep,
)
from nhsdp.serialize import scheme_points_to_csv

# One table row per call; ratios stay exact until rendered.
ours = evaluate_nhsdp_scheme(125, 3)
print("packing scheme:", ours.K, ours.memory_ratio, ours.load, ours.subpacketization)

competitors = [
    ("ZCW", {"m": 5, "w": 2}),
    ("AST", {"r": 2, "k": 13}),
    ("WCWL", {"K": 125, "t": 61}),
    ("CKSM2", {"q": 2, "k": 5, "m": 2, "t": 1}),
    ("MN", {"K": 125, "t": 61}),
]
for name, params in competitors:
    point = evaluate_scheme(name, params)
    print(f"{name:6s} K={point.K:<5d} M/N={float(point.memory_ratio):.4f} "
          f"R={float(point.load):.4f} F={point.subpacketization}")

# Exponential versus linear subpacketization at the same memory point.
mn = evaluate_scheme("MN", {"K": 125, "t": 61})
gap = ratio_report(mn, ours)
print("F_MN / F_ours =", float(gap.f_ratio), " R_MN / R_ours =", float(gap.r_ratio))

# Grouping re-targets a small array to more users at unchanged memory.
grouped = apply_grouping_formula(evaluate_scheme("MN", {"K": 10, "t": 5}), 125)
print("grouped subset scheme:", grouped.subpacketization, grouped.load)

# A sweep produces plot-ready rows near a chosen user count.
points = tradeoff_sweep(85, ["NHSDP", "WCWL", "MN"], slack=0)
print(scheme_points_to_csv(points[:6]))
