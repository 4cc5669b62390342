"""Group cardinalities, keyspace sizes and irreducible-polynomial counts.

Reproduces the published set-size table for p = 251, d = 8 with exact
integer arithmetic, then shows the same formulas validated by brute-force
enumeration at tiny parameters.
"""

import itertools

from tdpkex import (
    FieldParams,
    SplitMix64,
    companion_matrix,
    count_irreducible,
    element_order,
    gl_order,
    keyspace_size,
    matrix_space_size,
    nilpotent_count,
    random_irreducible,
    singular_count,
)


def sci(n):
    s = str(n)
    return f"{s[0]}.{s[1:16]}e{len(s) - 1}" if len(s) > 16 else s


params = FieldParams()
print(f"--- set sizes for d = {params.d}, p = {params.p} ---")
print(f"all d x d matrices      {sci(matrix_space_size(params))}")
print(f"invertible (GL order)   {sci(gl_order(params))}")
print(f"singular                {sci(singular_count(params))}")
print(f"nilpotent               {sci(nilpotent_count(params))}")
print(f"singular fraction       {singular_count(params) / matrix_space_size(params):.4%}")

ks = keyspace_size(params)
print(f"\n--- private keyspace (four lists of {params.d} nonzero eigenvalues) ---")
print(f"(p-2)-symbol convention {sci(ks.restricted)}  (~2^{ks.restricted_bits:.1f})")
print(f"(p-1)-symbol convention {sci(ks.nonzero)}  (~2^{ks.nonzero_bits:.1f})")
print(f"quantum (square root)   2^{ks.restricted_quantum_bits:.1f} / 2^{ks.nonzero_quantum_bits:.1f}")

print("\n--- formulas vs. enumeration at toy sizes ---")
for p, d in ((2, 2), (3, 2), (5, 2)):
    toy = FieldParams(p=p, d=d)
    brute = 0
    for entries in itertools.product(range(p), repeat=d * d):
        a, b, c, e = entries
        if (a * e - b * c) % p:
            brute += 1
    print(f"GL({d}, F_{p}): formula {gl_order(toy)}, enumerated {brute}")

print("\n--- monic irreducible polynomial counts ---")
for p in (2, 3, 5, 251):
    row = ", ".join(f"d={d}: {sci(count_irreducible(d, p))}" for d in (2, 4, 8))
    print(f"p={p}: {row}")

print("\n--- a random irreducible polynomial and its cyclic subgroup ---")
rs = SplitMix64(7)
f, trials = random_irreducible(rs, 4, 251)
comp = companion_matrix(f)
order = element_order(comp)
group = 251 ** 4 - 1
print(f"f(x) = {f}   (found in {trials} trials)")
print(f"companion matrix generates a cyclic subgroup of order {order}")
print(f"primitive: {'yes' if order == group else f'no (fraction {order}/{group})'}")
