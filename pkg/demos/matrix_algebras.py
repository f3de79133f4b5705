"""Upper-triangular and block-triangular matrix algebras, plus a semisimple check."""
from canfilt import builders, canonical_filtration
from canfilt.radical import is_semistable

for n in range(2, 5):
    res = canonical_filtration(builders.upper_triangular(n))
    print(f"T_{n}: {res.weight_by_label()}")

res = canonical_filtration(builders.block_triangular([1, 2]))
print("T_(1,2):", res.weight_by_label(), res.method.value)

for name, a in [("Mat_2", builders.full_matrix(2)), ("T_2", builders.upper_triangular(2))]:
    print(f"{name} semistable: {is_semistable(a)}")
