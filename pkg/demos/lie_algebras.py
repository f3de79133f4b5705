"""Nilpotent Lie algebras: model filiform, strictly upper sl_n, and a sum with sl_2."""
from canfilt import builders, canonical_filtration, direct_sum

for n in range(3, 7):
    res = canonical_filtration(builders.model_filiform(n))
    print(f"M_{n}: {res.weights}")

for n in range(2, 5):
    res = canonical_filtration(builders.sl_nilpotent(n))
    print(f"n_{n + 1}: {res.weight_by_label()}")

res = canonical_filtration(direct_sum(builders.heisenberg(), builders.sl2()))
print("heis + sl2:", res.weight_by_label(), res.method.value)
