"""Canonical filtrations of truncated polynomial rings and a monomial quotient."""
from canfilt import builders, canonical_filtration, verify_canonical


def show(name, a):
    res = canonical_filtration(a)
    print(f"{name:28s} {res.method.value:12s} {res.weight_by_label()}")
    assert verify_canonical(a, res.filtration)


for n in range(2, 7):
    show(f"k[x]/(x^{n})", builders.truncated_poly(1, n))

# x^4, x^2 y, x y^2, y^4: staircase basis 1, x, x^2, x^3, y, xy, y^2, y^3
show("k[x,y]/(x^4,x^2y,xy^2,y^4)", builders.monomial_quotient(2, [(4, 0), (2, 1), (1, 2), (0, 4)]))

# S_{n,4}: weights are constant on each degree, so print one per degree
for n in (3, 5, 6):
    a = builders.truncated_poly(n, 4)
    res = canonical_filtration(a)
    by_deg = {g[0]: w for g, w in zip(a.grading, res.weights)}
    print(f"{'S_' + str(n) + ',4':28s} {res.method.value:12s} by degree {by_deg}")
