"""Bundles of a cyclic gerbe over the boundary of a tetrahedron.

Every bundle is enumerated, sorted into concordance classes, and the
classes are compared with the degree-2 cohomology of the base.
"""
from collections import Counter

from twobundle import bundle as bd
from twobundle import simplicial as S
from twobundle import twocat as T

K = S.boundary(3)
for n in (2, 3):
    C = T.cyclic_gerbe(n)
    cls = bd.concordance_classes(C, K)
    print(f"Z/{n} gerbe over the 2-sphere: {len(cls.bundles)} bundles, {len(cls.classes)} classes")
    h2 = n ** S.cochain_cohomology(K, n, 2)
    print(f"  |H^2(S^2; Z/{n})| = {h2}")
    # the alternating sum of the four 2-cell labels separates the classes
    for i, members in enumerate(cls.classes):
        inv = Counter(bd.gerbe_invariant(cls.bundles[j], n) for j in members)
        print(f"  class {i}: {len(members)} bundles, invariant values {dict(inv)}")
