"""Gluing bundles on two halves of a 2-sphere.

The boundary of a tetrahedron is split into two discs of two triangles.
Bundles of a weak 2-group on the halves that agree on the shared square
glue to a bundle on the whole sphere.
"""
from twobundle import bundle as bd
from twobundle import simplicial as S
from twobundle import twocat as T

C = T.twisted_two_group(2, 1)
north = S.CombinatorialBase.from_maximal([0, 1, 2, 3], [(0, 1, 2), (0, 1, 3)], name="north")
south = S.CombinatorialBase.from_maximal([0, 1, 2, 3], [(0, 2, 3), (1, 2, 3)], name="south")
equator = north.subcomplex([(0, 2), (1, 2), (1, 3), (0, 3)])
f = S.BaseMap(equator, south, (0, 1, 2, 3))

glued, clashes = [], 0
for a in bd.enumerate_bundles(C, north):
    for b in bd.enumerate_bundles(C, south):
        try:
            glued.append(bd.glue(a, b, f, equator).bundle)
        except bd.MismatchOnA:
            clashes += 1
sphere = glued[0].base
print(f"glued base: {len(sphere.vertices)} vertices, {len(sphere.triangles)} triangles")
print(f"{len(glued)} compatible pairs glued, {clashes} pairs disagree on the equator")
print(f"bundles on the sphere: {bd.count_bundles(C, sphere)}")
print(f"all glued bundles valid: {all(bd.validate_bundle(B) == [] for B in glued)}")
