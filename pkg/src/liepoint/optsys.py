"""One-dimensional subalgebras under the adjoint action.

A greedy normalizer moves an element towards a simple representative by
exact adjoint moves; orbit invariants then separate the representatives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exppoly import ExpPoly
from .liealg import AdjointMap, LieAlgebra, LogEps, adjoint_exp, format_combination
from .linalg import rank, rref

REFERENCE = "reference"
DERIVED = "derived"


@dataclass(frozen=True)
class Representative:
    element: tuple
    label: str
    provenance: str = DERIVED

    def __post_init__(self):
        if not any(self.element):
            raise ValueError("a representative must be nonzero")


@dataclass(frozen=True)
class Move:
    """One normalization step: an overall rescaling or an adjoint map."""

    kind: str                 # "scale" | "adjoint"
    value: Fraction | LogEps
    direction: int | None = None

    def __str__(self):
        if self.kind == "scale":
            return f"scale by {self.value}"
        return f"Ad(exp(eps*X{self.direction + 1})) with eps = {self.value}"


def _maps(alg: LieAlgebra, sign: str) -> list:
    cache = alg.__dict__.setdefault("_adjoint_maps", {})
    if sign not in cache:
        cache[sign] = [adjoint_exp(alg, i, sign) for i in range(alg.dim)]
    return cache[sign]


def adjoint_apply(alg: LieAlgebra, i: int, eps, a: Sequence, sign: str = "eq6"):
    """Apply ``Ad(exp(eps X_i))`` to ``a``.

    Returns
    -------
    (tuple, bool)
        The new coefficients and whether they are exact rationals.
    """
    vec, exact = _maps(alg, sign)[i].apply(list(a), eps)
    return tuple(vec), exact


def replay(alg: LieAlgebra, a: Sequence, transcript: Sequence[Move], sign: str = "eq6"):
    vec = tuple(Fraction(x) for x in a)
    exact = True
    for mv in transcript:
        if mv.kind == "scale":
            vec = tuple(x * mv.value for x in vec)
        else:
            vec, ok = adjoint_apply(alg, mv.direction, mv.value, vec, sign)
            exact = exact and ok
    return vec, exact


def _image(M: AdjointMap, a: Sequence) -> list:
    """Coordinates of ``Ad(exp(eps X)) a`` as ExpPoly functions of eps."""
    n = len(a)
    out = []
    for r in range(n):
        acc = ExpPoly()
        for c in range(n):
            if a[c]:
                acc = acc + M.entries[r][c] * a[c]
        out.append(acc)
    return out


def _translation_eps(comp: ExpPoly):
    # affine in eps with nonzero slope
    if not comp.is_polynomial():
        return None
    p = comp.poly()
    if len(p) != 2:
        return None
    return -p[0] / p[1]


def _scaling_eps(comp: ExpPoly, target: Fraction):
    # single term c*exp(lam*eps), bring |value| to 1
    if len(comp.terms) != 1:
        return None
    (lam, p), = comp.terms.items()
    if lam == 0 or len(p) != 1:
        return None
    return LogEps(-1 / lam, abs(target))


def normalize_element(alg: LieAlgebra, a: Sequence, sign: str = "eq6"):
    """Greedy normal form of ``span(a)``.

    The last nonzero coefficient is scaled to 1. Then, from the top
    coordinate down, each coefficient is killed by an adjoint move that is
    affine in eps, or else brought to magnitude 1 by a pure scaling move;
    moves are only used when they leave the coordinates already fixed alone.

    Returns
    -------
    (Representative, list of Move)
    """
    vec = [Fraction(x) for x in a]
    if not any(vec):
        raise ValueError("cannot normalize the zero element")
    maps = _maps(alg, sign)
    n = alg.dim
    pivot = max(k for k in range(n) if vec[k])
    transcript = []
    if vec[pivot] != 1:
        s = 1 / vec[pivot]
        transcript.append(Move("scale", s))
        vec = [x * s for x in vec]
    for k in range(pivot - 1, -1, -1):
        if vec[k] == 0:
            continue
        step = None
        images = [_image(M, vec) for M in maps]
        for i, img in enumerate(images):
            if any(img[j] != vec[j] for j in range(k + 1, n)):
                continue
            eps = _translation_eps(img[k])
            if eps is not None:
                step = Move("adjoint", eps, i)
                break
        if step is None and abs(vec[k]) != 1:
            for i, img in enumerate(images):
                if any(img[j] != vec[j] for j in range(k + 1, n)):
                    continue
                eps = _scaling_eps(img[k], vec[k])
                if eps is None:
                    continue
                new, exact = maps[i].apply(vec, eps)
                if exact:
                    step = Move("adjoint", eps, i)
                    break
        if step is None:
            continue
        new, exact = maps[step.direction].apply(vec, step.value)
        assert exact
        vec = list(new)
        transcript.append(step)
    vec = tuple(vec)
    return Representative(vec, format_combination(vec, alg.labels), DERIVED), transcript


# -- orbit invariants -------------------------------------------------------

@dataclass(frozen=True)
class OrbitInvariant:
    description: str
    evaluator: Callable

    def __call__(self, a):
        return self.evaluator(a)


@dataclass(frozen=True)
class Splitting:
    """``g = C + D`` with ``D = [g, g]`` abelian, ``C`` an abelian subalgebra and
    every ``ad X_c`` diagonal on ``D``; both spanned by basis vectors."""

    complement: tuple
    derived: tuple
    weights: dict     # (c, k) -> eigenvalue of ad X_c on X_k


def splitting(alg: LieAlgebra) -> Splitting | None:
    n = alg.dim
    c = alg.structure
    vecs = [c[i][j] for i in range(n) for j in range(n) if any(c[i][j])]
    D = tuple(k for k in range(n) if any(v[k] for v in vecs))
    if rank([dict(enumerate(v)) for v in vecs], n) != len(D):
        return None
    C = tuple(k for k in range(n) if k not in D)
    for i in D:
        for j in D:
            if any(c[i][j]):
                return None
    for i in C:
        for j in C:
            if any(c[i][j]):
                return None
    weights = {}
    for i in C:
        for k in D:
            col = c[i][k]
            if any(col[m] for m in range(n) if m != k):
                return None
            weights[(i, k)] = col[k]
    return Splitting(C, D, weights)


def _projective(v):
    nz = [x for x in v if x]
    if not nz:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(x) / nz[-1] for x in v)


def _bracket_rank(alg: LieAlgebra, a) -> int:
    cols = []
    for i in range(alg.dim):
        e = [Fraction(int(i == j)) for j in range(alg.dim)]
        cols.append(dict(enumerate(alg.bracket_coords(e, a))))
    return rank(cols, alg.dim)


def _ideal(alg: LieAlgebra, i: int) -> list:
    n = alg.dim
    span = [[Fraction(int(i == j)) for j in range(n)]]
    while True:
        cand = list(span)
        for s in span:
            for j in range(n):
                e = [Fraction(int(j == m)) for m in range(n)]
                cand.append(alg.bracket_coords(e, s))
        r = rank([dict(enumerate(v)) for v in cand], n)
        if r == len(span):
            return span
        rows, _ = rref([dict(enumerate(v)) for v in cand], n)
        span = [[r_.get(m, Fraction(0)) for m in range(n)] for r_ in rows]


def orbit_invariants(alg: LieAlgebra) -> list:
    """Invariants of ``span(a)`` under inner automorphisms.

    Always available: the rank of ``ad a`` and membership in the ideal
    generated by each basis vector. When :func:`splitting` succeeds, also
    the projective class of the ``g/[g,g]`` part (exactly invariant since
    every bracket lands in ``[g,g]``) and the signs of the coordinates that
    no adjoint move can translate.
    """
    from .linalg import in_span

    out = [OrbitInvariant("rank of ad(a)", lambda a: (_bracket_rank(alg, a),))]
    ideals = [_ideal(alg, i) for i in range(alg.dim)]

    def members(a):
        return tuple(int(in_span(I, list(a))) for I in ideals)

    out.append(OrbitInvariant("membership in the ideal generated by each X_i", members))
    sp = splitting(alg)
    if sp is None:
        return out

    def quotient(a):
        return _projective([Fraction(a[k]) for k in sp.complement])

    def signs(a):
        a = [Fraction(x) for x in a]
        w = [a[k] for k in sp.complement]
        ref = [x for x in (w if any(w) else [a[k] for k in sp.derived]) if x]
        flip = 1 if ref[-1] > 0 else -1
        fixed = []
        for k in sp.derived:
            mu = sum(a[c] * sp.weights[(c, k)] for c in sp.complement)
            if mu == 0:
                fixed.append(Fraction((a[k] > 0) - (a[k] < 0)) * flip)
        return tuple(fixed)

    labels = alg.labels
    qdesc = "projective class of (" + ", ".join(labels[k] for k in sp.complement) + ") coefficients"
    out.append(OrbitInvariant(qdesc, quotient))
    out.append(OrbitInvariant("signs of untranslatable coordinates", signs))
    return out


def invariant_signature(alg: LieAlgebra, a, invs=None) -> tuple:
    invs = invs if invs is not None else orbit_invariants(alg)
    return tuple(inv(a) for inv in invs)


def verify_inequivalent(alg: LieAlgebra, reps: Sequence[Representative]) -> dict:
    """Pairwise separation report: ``distinct`` when some invariant differs."""
    invs = orbit_invariants(alg)
    sigs = [invariant_signature(alg, r.element, invs) for r in reps]
    matrix = []
    reasons = {}
    for i, si in enumerate(sigs):
        row = []
        for j, sj in enumerate(sigs):
            sep = [inv.description for inv, x, y in zip(invs, si, sj) if x != y]
            row.append("distinct" if sep else "not-separated")
            if sep and i < j:
                reasons[f"{reps[i].label} vs {reps[j].label}"] = sep[0]
        matrix.append(row)
    all_distinct = all(matrix[i][j] == "distinct"
                       for i in range(len(reps)) for j in range(len(reps)) if i != j)
    return {"labels": [r.label for r in reps], "matrix": matrix, "reasons": reasons,
            "all_distinct": all_distinct,
            "invariants": [inv.description for inv in invs]}


# -- sampling and classification --------------------------------------------

def random_element(rng: random.Random, n: int, support: Sequence[int] | None = None) -> tuple:
    """Random rational element; numerators in [-9, 9] without 0, denominators in [1, 9]."""
    if support is None:
        while True:
            support = [k for k in range(n) if rng.random() < 0.5]
            if support:
                break
    vec = [Fraction(0)] * n
    for k in support:
        vec[k] = Fraction(rng.choice([x for x in range(-9, 10) if x]), rng.randint(1, 9))
    return tuple(vec)


def proof_case(a: Sequence) -> str | None:
    """Branch of the four-dimensional case tree that ``a`` falls in."""
    if len(a) != 4:
        return None
    a1, a2, a3, a4 = a
    if a4:
        return "1-a" if a3 else "1-b"
    if a3:
        return "2-a-1" if a2 else "2-a-2"
    return "2-b-1" if a2 else "2-b-2"


def parse_element(alg: LieAlgebra, text: str) -> tuple:
    """Coefficients of a label such as ``"X4-X3"`` or ``"(2/3)*X3+X4"``."""
    from .exprcore import parse_expr, poly_normalize

    p = poly_normalize(parse_expr(text))
    extra = p.symbols() - set(alg.labels)
    if extra or p.total_degree() != 1 or p.terms.get((), 0):
        raise ValueError(f"not a linear combination of {', '.join(alg.labels)}: {text!r}")
    return tuple(p.terms.get(((l, 1),), Fraction(0)) for l in alg.labels)


def reference_representatives(alg: LieAlgebra, labels: Sequence[str]) -> list:
    reps = []
    for lab in labels:
        vec = parse_element(alg, lab)
        reps.append(Representative(vec, lab, REFERENCE))
    return reps


@dataclass
class ClassificationReport:
    seed: int
    samples: int
    buckets: dict = field(default_factory=dict)      # label -> count
    case_counts: dict = field(default_factory=dict)
    family: dict = field(default_factory=dict)       # family label -> sorted moduli
    confirmed: list = field(default_factory=list)
    unobserved: list = field(default_factory=list)
    additions: list = field(default_factory=list)
    fixed_points: dict = field(default_factory=dict)
    inequivalence: dict = field(default_factory=dict)
    derived_inequivalence: dict = field(default_factory=dict)
    replay_ok: bool = True

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "representatives": {
                "reference": self.inequivalence.get("labels", []),
                "derived": sorted(self.buckets),
            },
            "bucket_counts": dict(sorted(self.buckets.items())),
            "case_counts": dict(sorted(self.case_counts.items())),
            "families": {k: [str(x) for x in v] for k, v in sorted(self.family.items())},
            "reference_diff": {
                "confirmed": self.confirmed,
                "not_observed_in_samples": self.unobserved,
                "additions": self.additions,
                "fixed_points": self.fixed_points,
            },
            "inequivalence": self.inequivalence,
            "derived_inequivalence": self.derived_inequivalence,
            "replay_ok": self.replay_ok,
        }

    def to_text(self) -> str:
        lines = [f"samples: {self.samples} (seed {self.seed})", "normal forms:"]
        for lab, cnt in sorted(self.buckets.items()):
            lines.append(f"  {lab:<16} {cnt}")
        for lab, mods in sorted(self.family.items()):
            lines.append(f"  family {lab}: {len(mods)} moduli, e.g. "
                         + ", ".join(str(m) for m in mods[:5]))
        lines.append("proof cases:")
        for c, cnt in sorted(self.case_counts.items()):
            lines.append(f"  {c:<6} {cnt}")
        lines.append("reference list:")
        for lab in self.inequivalence.get("labels", []):
            tag = "confirmed" if lab in self.confirmed else "not observed"
            fp = "fixed point" if self.fixed_points.get(lab) else "NOT a fixed point"
            lines.append(f"  {lab:<8} {tag}, {fp}")
        lines.append("derived additions: " + (", ".join(self.additions) or "none"))
        ok = self.inequivalence.get("all_distinct")
        lines.append("reference representatives pairwise distinct: " + ("yes" if ok else "no"))
        return "\n".join(lines)


def _bucket_label(alg: LieAlgebra, vec: tuple, sp: Splitting | None):
    """Label for a normal form; continuous families share one label."""
    if sp is not None:
        z = [vec[k] for k in sp.derived]
        w = [k for k in sp.complement if vec[k]]
        if not any(z) and len(w) == 2 and abs(vec[w[0]]) != 1:
            lo, hi = w
            return f"{alg.labels[hi]}+a*{alg.labels[lo]}", vec[lo]
    return format_combination(vec, alg.labels), None


def classify(alg: LieAlgebra, samples: int = 200, seed: int = 42, sign: str = "eq6",
             reference_labels: Sequence[str] = ()) -> ClassificationReport:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    sp = splitting(alg)
    rep = ClassificationReport(seed, samples)
    for _ in range(samples):
        a = random_element(rng, alg.dim)
        nf, transcript = normalize_element(alg, a, sign)
        back, exact = replay(alg, a, transcript, sign)
        rep.replay_ok = rep.replay_ok and exact and back == nf.element
        case = proof_case(a)
        if case is not None:
            rep.case_counts[case] = rep.case_counts.get(case, 0) + 1
        label, modulus = _bucket_label(alg, nf.element, sp)
        rep.buckets[label] = rep.buckets.get(label, 0) + 1
        if modulus is not None:
            rep.family.setdefault(label, set()).add(modulus)
    rep.family = {k: sorted(v) for k, v in rep.family.items()}
    ref = reference_representatives(alg, reference_labels)
    seen = set(rep.buckets)
    by_vec = {}
    for r in ref:
        nf, _ = normalize_element(alg, r.element, sign)
        rep.fixed_points[r.label] = nf.element == r.element
        by_vec[format_combination(r.element, alg.labels)] = r.label
    rep.confirmed = [r.label for r in ref if format_combination(r.element, alg.labels) in seen]
    rep.unobserved = [r.label for r in ref if r.label not in rep.confirmed]
    rep.additions = sorted(lab for lab in seen if lab not in by_vec)
    rep.inequivalence = verify_inequivalent(alg, ref)
    derived = []
    for lab in sorted(seen):
        if "+a*" in lab:
            continue
        derived.append(Representative(parse_element(alg, lab), lab, DERIVED))
    rep.derived_inequivalence = verify_inequivalent(alg, derived)
    return rep
