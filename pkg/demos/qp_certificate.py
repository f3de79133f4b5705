"""Look inside one solve: constraints, optimum, KKT certificate and the oracle."""
from canfilt import build_constraints, builders, enumerate_active_sets_oracle, solve, verify_kkt
from canfilt.canonical import default_grouping

a = builders.monomial_quotient(2, [(4, 0), (2, 1), (1, 2), (0, 4)])
cs = build_constraints(a, default_grouping(a))
print(f"{len(cs.rows)} constraint rows on {a.dim} variables")

cert = solve(cs)
print("w* =", ", ".join(str(x) for x in cert.w_star))
print("kkt holds:", verify_kkt(cs, cert))
print("oracle agrees:", enumerate_active_sets_oracle(cs).w_star == cert.w_star)
