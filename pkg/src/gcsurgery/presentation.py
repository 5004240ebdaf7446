"""
Finitely presented groups: free reduction, Tietze simplification and
abelianization.

Words are tuples of nonzero ints; ``k`` is generator ``k`` (1-based) and
``-k`` its inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .smith import AbelianGroup, cokernel


def free_reduce(word) -> tuple:
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert(word) -> tuple:
    return tuple(-g for g in reversed(word))


def power(word, k: int) -> tuple:
    if k < 0:
        return tuple(invert(word)) * (-k)
    return tuple(word) * k


def commutator(u, v) -> tuple:
    return free_reduce(tuple(u) + tuple(v) + invert(u) + invert(v))


def canonical_cyclic(word) -> tuple:
    """Representative of a relator up to rotation and inversion."""
    w = cyclic_reduce(word)
    if not w:
        return w
    cands = []
    for base in (w, invert(w)):
        for k in range(len(base)):
            cands.append(base[k:] + base[:k])
    return min(cands, key=lambda c: (len(c), [abs(g) for g in c], c))


@dataclass(frozen=True)
class GroupPresentation:
    n_generators: int
    relators: tuple = ()
    notes: tuple = ()
    names: tuple = ()
    exhausted: bool = False

    def __post_init__(self):
        rels = tuple(free_reduce(r) for r in self.relators)
        for r in rels:
            for g in r:
                if g == 0 or abs(g) > self.n_generators:
                    raise ValueError("generator %d out of range" % g)
        object.__setattr__(self, "relators", rels)
        notes = tuple(self.notes) if self.notes else ("",) * len(rels)
        if len(notes) != len(rels):
            raise ValueError("one provenance note per relator")
        object.__setattr__(self, "notes", notes)
        if not self.names:
            object.__setattr__(self, "names", tuple("g%d" % i for i in range(1, self.n_generators + 1)))

    def spell(self, word) -> str:
        if not word:
            return "1"
        parts = []
        for g in word:
            name = self.names[abs(g) - 1]
            parts.append(name if g > 0 else name + "^-1")
        return "*".join(parts)

    def __str__(self):
        rels = ", ".join(self.spell(r) for r in self.relators)
        return "< %s | %s >" % (", ".join(self.names), rels)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.names),
            "relators": [self.spell(r) for r in self.relators],
            "simplified": False,
        }

    def exponent_matrix(self) -> list:
        rows = []
        for r in self.relators:
            row = [0] * self.n_generators
            for g in r:
                row[abs(g) - 1] += 1 if g > 0 else -1
            rows.append(row)
        return rows


def abelianization(g: GroupPresentation) -> AbelianGroup:
    if g.n_generators == 0:
        return AbelianGroup()
    rows = g.exponent_matrix()
    if not rows:
        return AbelianGroup(g.n_generators)
    return cokernel(rows, g.n_generators)


# ---------------------------------------------------------------------------
# Tietze simplification


class _State:
    def __init__(self, pres: GroupPresentation):
        self.alive = list(range(1, pres.n_generators + 1))
        self.names = dict(zip(self.alive, pres.names))
        self.rels = [cyclic_reduce(r) for r in pres.relators]
        self.notes = list(pres.notes)

    def tidy(self) -> None:
        """Drop trivial and duplicate relators; merge powers of one generator."""
        seen, rels, notes = set(), [], []
        powers = {}
        for r, note in zip(self.rels, self.notes):
            r = cyclic_reduce(r)
            if not r:
                continue
            if len(set(r)) == 1:
                gen, k = abs(r[0]), len(r)
                if gen in powers:
                    idx = powers[gen]
                    rels[idx] = (gen,) * gcd(len(rels[idx]), k)
                    continue
                powers[gen] = len(rels)
                r = (gen,) * k
            key = canonical_cyclic(r)
            if key in seen:
                continue
            seen.add(key)
            rels.append(r)
            notes.append(note)
        # a merged power may now duplicate another relator
        self.rels, self.notes = rels, notes

    def eliminate(self, max_growth: int) -> bool:
        best = None
        for idx, r in enumerate(self.rels):
            counts = {}
            for g in r:
                counts[abs(g)] = counts.get(abs(g), 0) + 1
            for gen, c in counts.items():
                if c != 1:
                    continue
                occ = sum(1 for rr in self.rels for g in rr if abs(g) == gen) - 1
                cost = (len(r) - 2) * occ
                key = (len(r), cost, gen, idx)
                if best is None or key < best[0]:
                    best = (key, idx, gen)
        if best is None or best[0][1] > max_growth:
            return False
        _, idx, gen = best
        r = self.rels[idx]
        k = next(i for i, g in enumerate(r) if abs(g) == gen)
        rot = r[k:] + r[:k]
        rest = rot[1:]
        # gen^e * rest = 1  =>  gen = rest^-1 (e = 1) or rest (e = -1)
        value = invert(rest) if rot[0] > 0 else rest
        inv_value = invert(value)
        del self.rels[idx]
        del self.notes[idx]
        new = []
        for rr in self.rels:
            out = []
            for g in rr:
                if g == gen:
                    out.extend(value)
                elif g == -gen:
                    out.extend(inv_value)
                else:
                    out.append(g)
            new.append(cyclic_reduce(out))
        self.rels = new
        self.alive.remove(gen)
        return True

    def shorten(self) -> bool:
        """Replace a relator by a shorter one using more than half of another."""
        order = sorted(range(len(self.rels)), key=lambda i: len(self.rels[i]))
        for i in order:
            ri = self.rels[i]
            L = len(ri)
            if L == 0:
                continue
            for base in (ri, invert(ri)):
                for rot in range(L):
                    u = base[rot:] + base[:rot]
                    for k in range(L, L // 2, -1):
                        p, q = u[:k], u[k:]
                        for j in order:
                            if j == i:
                                continue
                            rj = self.rels[j]
                            m = len(rj)
                            if m < k:
                                continue
                            doubled = rj + rj
                            for s in range(m):
                                if doubled[s:s + k] == p:
                                    rest = doubled[s + k:s + m]
                                    cand = cyclic_reduce(invert(q) + rest)
                                    if len(cand) < m:
                                        self.rels[j] = cand
                                        return True
        return False


def tietze_simplify(g: GroupPresentation, budget: int = 10000,
                    max_growth: int = 400) -> GroupPresentation:
    """Simplify by Tietze moves in a fixed order: tidy, eliminate a
    generator appearing once in some relator, then shorten relators.

    ``budget`` bounds the number of eliminations and substitutions; when
    it runs out the current presentation is returned with
    ``exhausted=True``. Generators are renumbered densely at the end.
    """
    st = _State(g)
    steps = 0
    exhausted = False
    while True:
        st.tidy()
        if steps >= budget:
            exhausted = True
            break
        if st.eliminate(max_growth):
            steps += 1
            continue
        if st.shorten():
            steps += 1
            continue
        break
    st.tidy()
    renum = {old: new for new, old in enumerate(st.alive, start=1)}
    rels = tuple(tuple((renum[abs(x)] if x > 0 else -renum[abs(x)]) for x in r) for r in st.rels)
    names = tuple(st.names[old] for old in st.alive)
    return GroupPresentation(len(st.alive), rels, tuple(st.notes), names, exhausted)


def presentations_match(p: GroupPresentation, q: GroupPresentation) -> bool:
    """Exact match up to renaming/inverting generators and rotating or
    inverting relators. A sufficient, not necessary, isomorphism test.

    Backtracks over relator pairings, growing a signed generator map
    letter by letter, so it stays fast for a dozen generators."""
    if p.n_generators != q.n_generators or len(p.relators) != len(q.relators):
        return False
    src = sorted((cyclic_reduce(r) for r in p.relators), key=len, reverse=True)
    dst = [cyclic_reduce(r) for r in q.relators]
    if sorted(map(len, src)) != sorted(map(len, dst)):
        return False
    variants = []
    for r in dst:
        vs = set()
        for base in (r, invert(r)):
            for k in range(len(base)):
                vs.add(base[k:] + base[:k])
        variants.append(sorted(vs))
    fwd, back = {}, {}

    def unify(word, target, added):
        for x, y in zip(word, target):
            g, s = abs(x), (1 if x > 0 else -1)
            want = y * s  # image of generator g
            if g in fwd:
                if fwd[g] != want:
                    return False
                continue
            if abs(want) in back:
                return False
            fwd[g] = want
            back[abs(want)] = g
            added.append(g)
        return True

    def undo(added):
        for g in added:
            del back[abs(fwd.pop(g))]

    used = [False] * len(dst)

    def go(i):
        if i == len(src):
            return True
        w = src[i]
        for j, vs in enumerate(variants):
            if used[j] or len(dst[j]) != len(w):
                continue
            used[j] = True
            for v in vs:
                added = []
                if unify(w, v, added) and go(i + 1):
                    return True
                undo(added)
            used[j] = False
        return False

    # generators absent from every relator are free and match each other
    return go(0)


def is_power_relator(word) -> int:
    """Return k if ``word`` is (a rotation of) g^k for a single generator, else 0."""
    w = cyclic_reduce(word)
    if w and len(set(w)) == 1:
        return len(w)
    return 0


# canonical presentations used by recognition

def trivial_group() -> GroupPresentation:
    return GroupPresentation(0)


def cyclic_group(p: int) -> GroupPresentation:
    if p == 0:
        return GroupPresentation(1, (), names=("m",))
    return GroupPresentation(1, ((1,) * abs(p),), names=("m",))


def surface_times_circle(g: int) -> GroupPresentation:
    """< c, u_1, v_1, ... | [c, u_i], [c, v_i], prod [u_i, v_i] >"""
    n = 2 * g + 1
    rels = []
    for k in range(2, n + 1):
        rels.append(commutator((1,), (k,)))
    prod = ()
    for i in range(g):
        prod += commutator((2 + 2 * i,), (3 + 2 * i,))
    if g:
        rels.append(free_reduce(prod))
    names = ("c",) + tuple(x for i in range(1, g + 1) for x in ("u%d" % i, "v%d" % i))
    return GroupPresentation(n, tuple(rels), names=names)


def symmetric_group(n: int) -> list:
    return list(itertools.permutations(range(n)))


def _compose(p, q):  # p after q
    return tuple(p[i] for i in q)


def _inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def count_homomorphisms(g: GroupPresentation, elements) -> int:
    """Number of homomorphisms from ``g`` into a permutation group given by
    its list of elements. Exponential in the generator count; meant as an
    invariant for small presentations."""
    elements = list(elements)
    if not elements:
        return 0
    ident = tuple(range(len(elements[0])))
    n = g.n_generators
    rels = [cyclic_reduce(r) for r in g.relators]
    # check each relator once all its generators are assigned
    due = [[] for _ in range(n + 1)]
    for r in rels:
        if r:
            due[max(abs(x) for x in r)].append(r)
    inv = {e: _inverse(e) for e in elements}
    image = [None] * (n + 1)

    def holds(r):
        acc = ident
        for x in r:
            e = image[abs(x)]
            acc = _compose(acc, e if x > 0 else inv[e])
        return acc == ident

    def go(k):
        if k > n:
            return 1
        total = 0
        for e in elements:
            image[k] = e
            if all(holds(r) for r in due[k]):
                total += go(k + 1)
        return total

    return go(1)
