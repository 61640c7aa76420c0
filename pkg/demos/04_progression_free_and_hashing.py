# Side structures: progression-free sets and perfect hash families.

from nhsdp import (
    NtapSet,
    cdp_to_nhsdp,
    ds_search,
    ntap_bound_report,
    ntap_construct,
    phf_column_comparison,
    phf_from_ntap,
    verify_ntap,
    verify_phf,
)

# A single-block packing is exactly a set with no 3-term progression.
ntap = ntap_construct(3)  # 2^3 signed ternary sums inside Z_27
print("elements:", ntap.elements)
print("verdict:", verify_ntap(ntap.v, ntap.elements).detail)
print("an AP is caught:", verify_ntap(9, {1, 2, 3}).detail)

# The 2^n family beats the probabilistic lower bound up to n = 52.
for n in (10, 52, 53):
    report = ntap_bound_report(n)
    print(f"n={n}: rho1=2^{n}, ln(rho2/rho1)={report.ln_ratio:+.2f},",
          "construction wins" if report.rho1_wins else "bound wins")

# Planar difference sets are single-block packings too.
ds = ds_search(3)
print("difference set:", ds.elements, "in Z_13, perfect:", ds.is_difference_set)
packing = cdp_to_nhsdp(ds)
print("as a packing:", (packing.v, packing.g, packing.b))

# Any odd-modulus progression-free set expands into a 3-row hash family:
# column (i, x) reads x, x + b_i, x + 2 b_i down its three rows.
phf = phf_from_ntap(NtapSet.from_packing(packing))
print("hash family: rows", phf.r, "columns", phf.m, "alphabet", phf.q)
print("verdict:", verify_phf(phf).detail)

# Column-count comparison against the projective-geometry families.
print(phf_column_comparison(4, "vs_quadrics"))
print(phf_column_comparison(6, "vs_hermitian"))
