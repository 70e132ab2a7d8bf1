"""Nerves of a 2-groupoid and of a monoid, side by side.

The groupoid nerve fills every horn. The monoid nerve has a 2-dimensional
horn with no filler, and the script prints it.
"""
from twobundle import nerve as N
from twobundle import simplicial as S
from twobundle import twocat as T

for C in (T.cyclic_gerbe(3), T.twisted_two_group(2, 1), T.idempotent_monoid()):
    X = N.duskin_nerve(C, 4)
    rep = S.check_discrete_kan(X)
    cosk = S.is_coskeletal(X, 3)
    print(f"{C.meta['name']}: simplices {X.counts}, Kan through dim 4: {rep.passed}, 3-coskeletal: {cosk}")
    if not rep.passed:
        n, k, c = rep.first_failure
        faces = {i: X.label(n - 1, z) for i, z in zip(c.I, c.entries)}
        print(f"  horn ({n},{k}) without filler; faces {faces}")
