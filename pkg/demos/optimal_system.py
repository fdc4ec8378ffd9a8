"""
Adjoint action and one-dimensional subalgebras
==============================================

Structure constants, the closed-form adjoint maps, and a sampled
classification of one-dimensional subalgebras up to conjugacy.
"""

from liepoint import liealg, load_spec, optsys

spec = load_spec("rnc.json")
alg = liealg.structure_constants(spec.expected, spec.labels)

for row in liealg.commutator_table(alg):
    print("  ".join(f"{e:>6}" for e in row))

# Ad(exp(eps*X4)) scales X1 and X2 with different weights
M = liealg.adjoint_exp(alg, 3)
print(M(0.5).round(4))

# a generic element with a3 != 0, a4 != 0 keeps the ratio a3/a4
a = optsys.parse_element(alg, "3*X1 - X2 + X3 + 6*X4")
rep, moves = optsys.normalize_element(alg, a)
print("normal form:", rep.label)
for mv in moves:
    print("  ", mv)

report = optsys.classify(alg, samples=200, seed=42)
print(report.to_text())

# invariants that keep the representatives apart
reps = [optsys.Representative(optsys.parse_element(alg, l), l)
        for l in ("X1", "X2", "X3", "X4", "X2-X1", "X3-X2", "X4-X3")]
sep = optsys.verify_inequivalent(alg, reps)
print("pairwise distinct:", sep["all_distinct"])
for pair, why in list(sep["reasons"].items())[:5]:
    print(f"  {pair}: {why}")
