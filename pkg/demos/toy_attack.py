"""Pseudo-key recovery by exhaustive search at toy parameters.

At p = 5, d = 2 the private eigenvalue space is tiny: 4^2 choices for the
x1 family times 4^2 for x2 = 256 candidates.  The search completes the
remaining factors from the public token and keeps any candidate landing in
the right commuting families.  The recovered tuple is generally NOT the
original private key, yet it derives the same session key, which is the
whole point: every solution of the public equations works as a key.
"""

from tdpkex import FieldParams, SplitMix64, brute_force_pseudo_key, run_session

params = FieldParams(p=5, d=2)
print(f"toy parameters: p = {params.p}, d = {params.d}, "
      f"search space {(params.p - 1) ** (2 * params.d)} candidates\n")

for seed in (1, 2, 3):
    result = run_session(SplitMix64(seed), params)
    pk = brute_force_pseudo_key(result.setup, result.alice_pub, result.bob_pub, result.alice_key)
    same = (
        pk.a1 == result.alice.a1
        and pk.x1 == result.alice.x1
        and pk.x2 == result.alice.x2
    )
    print(f"seed {seed}: accepted after {pk.candidates_tested} candidates; "
          f"equals Alice's actual key: {'yes' if same else 'no'}; "
          f"reproduces session key: yes (verified)")
    print("  x1' =", pk.x1.a.tolist(), " actual x1 =", result.alice.x1.a.tolist())

print("\nAt p = 251, d = 8 the same search would need 250^16 ~ 2^127 candidates.")
