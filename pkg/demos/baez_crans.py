"""Two-term chain complexes over F_2 and the comparison map sigma.

Builds the weak 2-category of normal-form complexes with dim B at most 1,
passes to homotopy classes of homotopies, and checks the homology
functor and the colax law for sigma before and after the quotient.
"""
from twobundle import examples as ex

B2 = ex.build_2B("weak", 1, 1, 2, 1)
q = ex.quotient_to_Ho(B2)
Ho = q.category
print(f"2B:    {len(B2.objects)} objects, {len(B2.one_cells)} 1-cells, {len(B2.two_cells)} 2-cells")
print(f"2B^Ho: {len(Ho.one_cells)} 1-cells, {len(Ho.two_cells)} 2-cells, quotient well defined: {q.well_defined}")

H = ex.homology_functor(ex.build_2B("weak", 1, 1, 2, 0))
print(f"H after i is the identity on {H.elements} elements: {H.hi_identity}")

for name, C in (("2B^Ho", Ho), ("2B", B2)):
    r = ex.verify_sigma_colax(C)
    print(f"sigma on {name}: {r.pairs_checked} composable pairs, "
          f"{len(r.colax_failures)} colax failures, {len(r.naturality_failures)} naturality failures")
