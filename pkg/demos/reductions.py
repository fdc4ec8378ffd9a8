"""
Similarity reductions
=====================

Invariants of a generator give a similarity variable and prefactors;
substituting them turns the PDE system into ODEs in one variable.
"""

from liepoint import liealg, load_spec, optsys, reduce

spec = load_spec("rnc.json")
sys = spec.system
alg = liealg.structure_constants(spec.expected, spec.labels)

for label in ("X2", "X4", "X4-X3", "X2+X3"):
    X = alg.element_field(optsys.parse_element(alg, label))
    ans = reduce.invariants(X, sys)
    print(f"{label}: s = {ans.s}   [{ans.domain}]")
    for k, dep in enumerate(sys.dependents):
        print(f"    {dep} = {ans.form(k)}")
    # the characteristics vanish identically on the ansatz
    assert all(q.is_zero() for q in reduce.check_ansatz(X, ans, sys))
    rs = reduce.reduce_system(sys, ans)
    print(rs.to_text())
    print()
