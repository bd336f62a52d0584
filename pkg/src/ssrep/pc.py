"""Polycyclic presentations, collection, and induced generating sequences.

A PcGroup is given by generators g_0..g_{n-1} with relative orders (int >= 2
or None for infinite), power relations g_i^{r_i} = word(g_{i+1}..) and
conjugation relations g_j^{g_i^{+-1}} = word (i < j).  Elements are exponent
vectors in normal form; collection-from-the-left computes normal forms.

Presentations used by the structure algorithms must be supersolvable-adapted:
every conjugation word starts at g_j with exponent +-1, so every tail
subgroup <g_i..g_{n-1}> is normal in G with cyclic layer quotients.
"""

from __future__ import annotations

from math import gcd

from .errors import (InconsistentPresentation, MalformedSource, MixedParents,
                     NotASubgroup, UnknownGenerator)
from .intlattice import _xgcd

_COLLECT_CAP = 2_000_000


def _word_inv(word):
    return tuple((i, -e) for i, e in reversed(word))


def _word_pow(word, k):
    if k == 0:
        return ()
    if k < 0:
        return _word_pow(_word_inv(word), -k)
    return tuple(word) * k


class PcGroup:
    """A consistent polycyclic presentation."""

    def __init__(self, names, orders, power_relations, conjugate_relations,
                 check=True):
        self.names = tuple(names)
        self.orders = tuple(orders)
        self.n = len(self.names)
        self.index_of = {nm: i for i, nm in enumerate(self.names)}
        if len(self.index_of) != self.n:
            raise MalformedSource("duplicate generator names")
        for i, r in enumerate(self.orders):
            if r is not None and r < 2:
                raise MalformedSource(f"relative order of {self.names[i]} must be >= 2")
        # power_relations: {i: word}; conjugate_relations: {(j, i, s): word}
        self.power_relations = {}
        for i, w in power_relations.items():
            if self.orders[i] is None:
                raise MalformedSource(f"power relation on infinite generator {self.names[i]}")
            self._check_word_indices(w, i + 1)
            self.power_relations[i] = tuple(w)
        for i, r in enumerate(self.orders):
            if r is not None and i not in self.power_relations:
                self.power_relations[i] = ()
        self.conjugate_relations = {}
        for (j, i, s), w in conjugate_relations.items():
            if not (0 <= i < j < self.n) or s not in (1, -1):
                raise MalformedSource("bad conjugation relation key")
            self._check_word_indices(w, i + 1)
            self.conjugate_relations[(j, i, s)] = tuple(w)
        for (j, i, s), w in list(self.conjugate_relations.items()):
            if self.orders[i] is None and w != ((j, 1),):
                if (j, i, -s) not in self.conjugate_relations:
                    raise MalformedSource(
                        f"conjugation of {self.names[j]} by {self.names[i]}^{-s} "
                        "must be given (infinite-order conjugator)")
        self.supersolvable_adapted = self._check_adapted()
        self._sign = self._sign_table() if self.supersolvable_adapted else None
        self._dp_cache = None
        self._tail_cache = {}
        if check:
            self.check_consistency()
            self.consistent = True
        else:
            self.consistent = None

    # -- presentation plumbing ------------------------------------------------

    def _check_word_indices(self, word, lo):
        for i, e in word:
            if not (0 <= i < self.n):
                raise MalformedSource(f"generator index {i} out of range")
            if i < lo:
                raise MalformedSource("relation word reaches below its tail")

    def _check_adapted(self):
        for (j, i, s), w in self.conjugate_relations.items():
            if not w:
                return False
            if any(k < j for k, _ in w):
                return False
            lead = 0
            for k, e in w:
                if k == j:
                    lead += e
            if lead not in (1, -1):
                return False
        return True

    def _sign_table(self):
        # sign[i][d]: exponent (+1/-1) of g_d in g_d^{g_i}, for i < d
        sign = [[1] * self.n for _ in range(self.n)]
        for (j, i, s), w in self.conjugate_relations.items():
            if s == 1:
                sign[i][j] = sum(e for k, e in w if k == j)
        return sign

    def conj_word(self, j, i, s):
        """Word for g_j^{g_i^s} (i < j)."""
        w = self.conjugate_relations.get((j, i, s))
        if w is not None:
            return w
        w1 = self.conjugate_relations.get((j, i, 1))
        if w1 is None or w1 == ((j, 1),):
            return ((j, 1),)
        if self.orders[i] is not None:
            # derive g_j^{g_i^{-1}} = g_j^{g_i^{r_i - 1}} by iterating
            word = ((j, 1),)
            for _ in range(self.orders[i] - 1):
                word = self._substitute_conj(word, i, 1)
            self.conjugate_relations[(j, i, -1)] = tuple(self.collect_word(word))
            return self.conjugate_relations[(j, i, -1)]
        raise MalformedSource("missing inverse conjugation relation")

    def _substitute_conj(self, word, i, s):
        out = []
        for k, e in word:
            if k <= i:
                raise MalformedSource("conjugation word reaches below conjugator")
            out.extend(_word_pow(self.conj_word(k, i, s), e) if e != 1
                       else self.conj_word(k, i, s))
        return tuple(out)

    def _commute(self, a, b):
        # True when the stored relation says g_a and g_b commute
        if a == b:
            return True
        lo, hi = min(a, b), max(a, b)
        return self.conj_word(hi, lo, 1) == ((hi, 1),)

    # -- collection ------------------------------------------------------------

    def collect_exponents(self, word):
        """Exponent vector of the normal form of a word [(gen_index, exp), ...]."""
        work = [(i, e) for i, e in word if e]
        steps = 0
        while True:
            steps += 1
            if steps > _COLLECT_CAP:
                raise InconsistentPresentation("collection did not terminate",
                                               word=str(word[:8]))
            # clean: merge adjacent equal generators, drop zeros
            cleaned = []
            for i, e in work:
                if e == 0:
                    continue
                if cleaned and cleaned[-1][0] == i:
                    e2 = cleaned[-1][1] + e
                    cleaned.pop()
                    if e2:
                        cleaned.append((i, e2))
                else:
                    cleaned.append((i, e))
            work = cleaned
            # first range violation
            viol = None
            for idx, (i, e) in enumerate(work):
                r = self.orders[i]
                if r is not None and not 0 <= e < r:
                    viol = ("R", idx)
                    break
            if viol is None:
                for idx in range(len(work) - 1):
                    if work[idx][0] > work[idx + 1][0]:
                        viol = ("O", idx)
                        break
            if viol is None:
                exps = [0] * self.n
                for i, e in work:
                    exps[i] = e
                return tuple(exps)
            kind, idx = viol
            if kind == "R":
                i, e = work[idx]
                r = self.orders[i]
                q, rem = divmod(e, r)
                repl = ([(i, rem)] if rem else []) + list(_word_pow(self.power_relations[i], q))
                work[idx:idx + 1] = repl
            else:
                b, e = work[idx]
                a, d = work[idx + 1]
                s = 1 if d > 0 else -1
                cw = self.conj_word(b, a, s)
                if cw == ((b, 1),):
                    expanded = [(b, e)]
                elif len(cw) == 2 and cw[0][0] == b and self._commute(cw[0][0], cw[1][0]):
                    expanded = [(cw[0][0], cw[0][1] * e), (cw[1][0], cw[1][1] * e)]
                else:
                    expanded = list(_word_pow(cw, e))
                work[idx:idx + 2] = [(a, s)] + expanded + [(a, d - s)]

    def collect_word(self, word):
        exps = self.collect_exponents(word)
        return tuple((i, e) for i, e in enumerate(exps) if e)

    def collect(self, word):
        for i, _ in word:
            if not 0 <= i < self.n:
                raise UnknownGenerator(f"index {i}")
        return Element(self, self.collect_exponents(word))

    # -- elements ---------------------------------------------------------------

    def identity(self):
        return Element(self, (0,) * self.n)

    def gen(self, key):
        if isinstance(key, str):
            if key not in self.index_of:
                raise UnknownGenerator(key)
            key = self.index_of[key]
        exps = [0] * self.n
        exps[key] = 1
        return Element(self, tuple(exps))

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def element(self, exps):
        return self.collect([(i, e) for i, e in enumerate(exps) if e])

    def from_name_word(self, pairs):
        """Element from [(name, exp), ...]."""
        word = []
        for nm, e in pairs:
            if nm not in self.index_of:
                raise UnknownGenerator(nm)
            word.append((self.index_of[nm], e))
        return self.collect(word)

    # -- layer data ---------------------------------------------------------------

    def layer_sign(self, i, d):
        """Action sign of g_i on the layer <g_d> tail quotient (+1 for i >= d)."""
        if i >= d:
            return 1
        return self._sign[i][d]

    def element_layer_sign(self, g, d):
        s = 1
        for i in range(min(d, self.n)):
            if g.exps[i] and self._sign[i][d] == -1 and g.exps[i] % 2:
                s = -s
        return s

    # -- consistency ---------------------------------------------------------------

    def check_consistency(self):
        """Standard overlap tests; raises InconsistentPresentation on failure."""
        n = self.n

        def nf(word):
            return self.collect_exponents(word)

        def cmp(w1, w2, tag):
            if nf(w1) != nf(w2):
                raise InconsistentPresentation(
                    "overlap test failed", test=tag,
                    left=str(w1), right=str(w2))

        for k in range(n):
            for j in range(k):
                for i in range(j):
                    # g_k g_j g_i, two association orders
                    w1 = [(j, 1)] + list(self.conj_word(k, j, 1)) + [(i, 1)]
                    w2 = [(k, 1), (i, 1)] + list(self.conj_word(j, i, 1))
                    cmp(w1, w2, f"assoc({k},{j},{i})")
        for j in range(n):
            for i in range(j):
                rj, ri = self.orders[j], self.orders[i]
                if rj is not None:
                    w1 = list(self.power_relations[j]) + [(i, 1)]
                    w2 = [(j, rj - 1), (i, 1)] + list(self.conj_word(j, i, 1))
                    cmp(w1, w2, f"power-left({j},{i})")
                if ri is not None:
                    w1 = [(j, 1)] + list(self.power_relations[i])
                    w2 = [(i, 1)] + list(self.conj_word(j, i, 1)) + [(i, ri - 1)]
                    cmp(w1, w2, f"power-right({j},{i})")
                else:
                    w1 = [(i, 1)] + list(self.conj_word(j, i, 1)) + [(i, -1)]
                    cmp(w1, [(j, 1)], f"inv-conj({j},{i})")
                    w2 = [(i, -1)] + list(self.conj_word(j, i, -1)) + [(i, 1)]
                    cmp(w2, [(j, 1)], f"inv-conj-neg({j},{i})")
        for i in range(n):
            if self.orders[i] is not None:
                w1 = [(i, 1)] + list(self.power_relations[i])
                w2 = list(self.power_relations[i]) + [(i, 1)]
                cmp(w1, w2, f"power-comm({i})")

    # -- subgroups -------------------------------------------------------------------

    def subgroup(self, gens, track_words=False):
        return Subgroup.from_generators(self, gens, track_words=track_words)

    def trivial_subgroup(self):
        return Subgroup(self, ())

    def whole_group(self):
        key = "_whole"
        if key not in self._tail_cache:
            self._tail_cache[key] = self.subgroup(self.gens())
        return self._tail_cache[key]

    def tail_subgroup(self, d):
        """<g_d, ..., g_{n-1}>, normal for adapted presentations."""
        if d not in self._tail_cache:
            self._tail_cache[d] = self.subgroup([self.gen(i) for i in range(d, self.n)])
        return self._tail_cache[d]

    def direct_square(self):
        """(GxG, embed1, embed2, proj1, proj2) with block generator order."""
        if self._dp_cache is not None:
            return self._dp_cache
        n = self.n
        names = [nm + ".1" for nm in self.names] + [nm + ".2" for nm in self.names]
        orders = list(self.orders) * 2
        pows = {}
        conjs = {}
        for i, w in self.power_relations.items():
            pows[i] = w
            pows[i + n] = tuple((k + n, e) for k, e in w)
        for (j, i, s), w in self.conjugate_relations.items():
            conjs[(j, i, s)] = w
            conjs[(j + n, i + n, s)] = tuple((k + n, e) for k, e in w)
        GG = PcGroup(names, orders, pows, conjs, check=False)
        GG.consistent = self.consistent

        def e1(g):
            return Element(GG, tuple(g.exps) + (0,) * n)

        def e2(g):
            return Element(GG, (0,) * n + tuple(g.exps))

        def p1(x):
            return Element(self, x.exps[:n])

        def p2(x):
            return Element(self, x.exps[n:])

        self._dp_cache = (GG, e1, e2, p1, p2)
        return self._dp_cache

    def __repr__(self):
        return f"PcGroup({','.join(self.names)})"


class Element:
    """Normal-form group element: an exponent vector bound to its PcGroup."""

    __slots__ = ("group", "exps", "_h")

    def __init__(self, group, exps):
        self.group = group
        self.exps = tuple(exps)
        self._h = None

    def _check(self, other):
        if self.group is not other.group:
            raise MixedParents()

    def __mul__(self, other):
        self._check(other)
        word = [(i, e) for i, e in enumerate(self.exps) if e] + \
               [(i, e) for i, e in enumerate(other.exps) if e]
        return Element(self.group, self.group.collect_exponents(word))

    def inv(self):
        word = [(i, -e) for i, e in reversed(list(enumerate(self.exps))) if e]
        return Element(self.group, self.group.collect_exponents(word))

    def __pow__(self, k):
        if k == 0:
            return self.group.identity()
        base = self if k > 0 else self.inv()
        k = abs(k)
        out = None
        while k:
            if k & 1:
                out = base if out is None else out * base
            base = base * base
            k >>= 1
        return out

    def conj(self, g):
        """g^{-1} * self * g."""
        self._check(g)
        return g.inv() * self * g

    def comm(self, g):
        """[self, g] = self^{-1} g^{-1} self g."""
        return self.inv() * g.inv() * self * g

    def is_identity(self):
        return not any(self.exps)

    def depth(self):
        for i, e in enumerate(self.exps):
            if e:
                return i
        return self.group.n

    def lead(self):
        return self.exps[self.depth()]

    def order(self, bound):
        p = self
        for k in range(1, bound + 1):
            if p.is_identity():
                return k
            p = p * self
        return None

    def word(self):
        return tuple((i, e) for i, e in enumerate(self.exps) if e)

    def __eq__(self, other):
        return isinstance(other, Element) and self.group is other.group \
            and self.exps == other.exps

    def __hash__(self):
        if self._h is None:
            self._h = hash((id(self.group), self.exps))
        return self._h

    def __repr__(self):
        return f"<{format_element(self)}>"


def format_element(g):
    if g.is_identity():
        return "1"
    parts = []
    for i, e in enumerate(g.exps):
        if e == 0:
            continue
        nm = g.group.names[i]
        parts.append(nm if e == 1 else f"{nm}^{e}")
    return "*".join(parts)


class Subgroup:
    """A subgroup given by a canonical induced generating sequence.

    One generator per occupied depth; leading exponents positive and, on
    finite layers, dividing the relative order; trailing entries reduced.
    Two Subgroup objects of the same parent are equal iff their igs match.
    """

    def __init__(self, parent, igs, words=None):
        self.parent = parent
        self.igs = tuple(igs)
        self.words = tuple(words) if words is not None else None
        self._by_depth = {u.depth(): k for k, u in enumerate(self.igs)}
        self._pc = None

    # -- construction ------------------------------------------------------------

    @staticmethod
    def from_generators(G, gens, track_words=False):
        for g in gens:
            if g.group is not G:
                raise MixedParents()
        table = {}   # depth -> (element, word)
        words0 = [((k, 1),) for k in range(len(gens))] if track_words else \
                 [None] * len(gens)
        queue = list(zip(gens, words0))

        def wmul(w1, w2):
            return None if w1 is None else tuple(w1) + tuple(w2)

        def winv(w):
            return None if w is None else _word_inv(w)

        def wpow(w, k):
            return None if w is None else _word_pow(w, k)

        def enqueue_obligations(d):
            u, wu = table[d]
            r = G.orders[d]
            if r is not None:
                m = r // u.exps[d]
                queue.append((u ** m, wpow(wu, m)))
            for e, (v, wv) in list(table.items()):
                if e == d:
                    continue
                queue.append((v.conj(u), wmul(winv(wu), wmul(wv, wu))))
                queue.append((v.conj(u.inv()), wmul(wu, wmul(wv, winv(wu)))))
                queue.append((u.conj(v), wmul(winv(wv), wmul(wu, wv))))
                queue.append((u.conj(v.inv()), wmul(wv, wmul(wu, winv(wv)))))

        while queue:
            h, wh = queue.pop()
            while not h.is_identity():
                d = h.depth()
                lead = h.exps[d]
                r = G.orders[d]
                if r is None and lead < 0:
                    h, wh = h.inv(), winv(wh)
                    lead = -lead
                if d not in table:
                    if r is not None:
                        g0 = gcd(lead, r)
                        if g0 != lead:
                            # power down to the canonical lead g0
                            g_, t, _ = _xgcd(lead // g0, r // g0)
                            assert g_ == 1
                            t %= r // g0
                            h2, wh2 = h ** t, wpow(wh, t)
                            queue.append((h, wh))
                            h, wh = h2, wh2
                            assert h.exps[d] == g0
                    table[d] = (h, wh)
                    enqueue_obligations(d)
                    break
                u, wu = table[d]
                alead = u.exps[d]
                if lead % alead == 0:
                    q = lead // alead
                    h, wh = (u ** (-q)) * h, wmul(wpow(wu, -q), wh)
                    continue
                if r is not None:
                    g0, x, y = _xgcd(alead, lead)
                    v, wv = (u ** x) * (h ** y), wmul(wpow(wu, x), wpow(wh, y))
                    assert v.exps[d] % g0 == 0 and gcd(v.exps[d], r) == g0
                    del table[d]
                    queue.append((u, wu))
                    queue.append((h, wh))
                    h, wh = v, wv
                else:
                    q = lead // alead
                    h, wh = (u ** (-q)) * h, wmul(wpow(wu, -q), wh)
                    # smaller positive lead at the same depth: swap in
                    del table[d]
                    queue.append((u, wu))

        # canonical trailing reduction
        depths = sorted(table)
        for d in depths:
            u, wu = table[d]
            for e in depths:
                if e <= d:
                    continue
                v, wv = table[e]
                lead = v.exps[e]
                r = G.orders[e]
                cur = u.exps[e]
                tgt = cur % lead
                if tgt == cur:
                    continue
                if r is None:
                    q = (tgt - cur) // lead
                    cand, wc = u * v ** q, wmul(wu, wpow(wv, q))
                    if cand.exps[e] != tgt:
                        cand, wc = u * v ** (-q), wmul(wu, wpow(wv, -q))
                else:
                    q = ((tgt - cur) // lead) % (r // lead)
                    cand, wc = u * v ** q, wmul(wu, wpow(wv, q))
                    if cand.exps[e] != tgt:
                        q = ((cur - tgt) // lead) % (r // lead)
                        cand, wc = u * v ** q, wmul(wu, wpow(wv, q))
                assert cand.exps[e] == tgt, "trailing reduction failed"
                u, wu = cand, wc
                table[d] = (u, wu)
        igs = [table[d][0] for d in depths]
        words = [table[d][1] for d in depths] if track_words else None
        return Subgroup(G, igs, words)

    # -- membership -------------------------------------------------------------

    def sift(self, h):
        """(residue, witness); witness is [(igs_index, exponent), ...] with
        h = prod igs[i]^e in order when the residue is the identity."""
        if h.group is not self.parent:
            raise MixedParents()
        wit = []
        while not h.is_identity():
            d = h.depth()
            k = self._by_depth.get(d)
            if k is None:
                return h, None
            u = self.igs[k]
            lead = u.exps[d]
            e = h.exps[d]
            if e % lead:
                return h, None
            q = e // lead
            h = (u ** (-q)) * h
            if q:
                wit.append((k, q))
        return h, wit

    def contains(self, h):
        res, _ = self.sift(h)
        return res.is_identity()

    def membership_witness(self, h):
        res, wit = self.sift(h)
        return wit if res.is_identity() else None

    def __contains__(self, h):
        return self.contains(h)

    def contains_subgroup(self, other):
        return all(self.contains(u) for u in other.igs)

    def is_trivial(self):
        return not self.igs

    # -- invariants ----------------------------------------------------------------

    def depths(self):
        return tuple(u.depth() for u in self.igs)

    def hirsch_length(self):
        return sum(1 for u in self.igs if self.parent.orders[u.depth()] is None)

    def size(self):
        """Order of the subgroup, or None when infinite."""
        total = 1
        for u in self.igs:
            d = u.depth()
            r = self.parent.orders[d]
            if r is None:
                return None
            total *= r // u.exps[d]
        return total

    def index_in(self, K):
        """[K : self]; a positive int or None for infinite.  self <= K required."""
        if not K.contains_subgroup(self):
            raise NotASubgroup()
        G = self.parent
        total = 1
        for v in K.igs:
            d = v.depth()
            r = G.orders[d]
            k_lead = v.exps[d]
            km = self._by_depth.get(d)
            if km is None:
                if r is None:
                    return None
                total *= r // k_lead
            else:
                h_lead = self.igs[km].exps[d]
                assert h_lead % k_lead == 0
                total *= h_lead // k_lead
        return total

    def elements(self, bound=None):
        """All elements (finite subgroups only)."""
        size = self.size()
        if size is None or (bound and size > bound):
            raise NotASubgroup("infinite subgroup enumeration")
        out = [self.parent.identity()]
        for u in reversed(self.igs):
            r = self.parent.orders[u.depth()]
            m = r // u.exps[u.depth()]
            out = [u ** k * x for k in range(m) for x in out]
        return out

    # -- conjugation -------------------------------------------------------------

    def conjugate(self, g):
        """g^{-1} * self * g."""
        return Subgroup.from_generators(self.parent, [u.conj(g) for u in self.igs])

    def join(self, other):
        return Subgroup.from_generators(self.parent, list(self.igs) + list(other.igs))

    def normalized_by(self, g):
        return all(self.contains(u.conj(g)) for u in self.igs)

    def is_normal_in(self, K):
        return all(self.normalized_by(v) and self.normalized_by(v.inv())
                   for v in K.igs)

    # -- coset machinery ----------------------------------------------------------

    def coset_rep(self, g):
        """Canonical representative of the right coset (self)g."""
        G = self.parent
        for u in self.igs:
            d = u.depth()
            lead = u.exps[d]
            r = G.orders[d]
            e = g.exps[d]
            tgt = e % lead
            if tgt == e:
                continue
            if r is None:
                q = (tgt - e) // lead
                cand = u ** q * g
                if cand.exps[d] != tgt:
                    cand = u ** (-q) * g
            else:
                q = ((tgt - e) // lead) % (r // lead)
                cand = u ** q * g
                if cand.exps[d] != tgt:
                    q = ((e - tgt) // lead) % (r // lead)
                    cand = u ** q * g
            assert cand.exps[d] == tgt, "coset canonicalization failed"
            g = cand
        return g

    def same_coset(self, a, b):
        return self.contains(a * b.inv())

    # -- value semantics -----------------------------------------------------------

    def key(self):
        return tuple(u.exps for u in self.igs)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent \
            and self.key() == other.key()

    def __hash__(self):
        return hash((id(self.parent), self.key()))

    def __repr__(self):
        if not self.igs:
            return "Subgroup(1)"
        return "Subgroup(" + ", ".join(format_element(u) for u in self.igs) + ")"

    # -- the subgroup as a pc group --------------------------------------------------

    def as_pc_group(self):
        """(PcGroup Q, to_parent, from_parent) presenting this subgroup on its
        igs.  from_parent raises NotASubgroup on non-members."""
        if self._pc is not None:
            return self._pc
        G = self.parent
        k = len(self.igs)
        names = [f"s{i}" for i in range(k)]
        orders = []
        pows = {}
        conjs = {}

        def express(x):
            wit = self.membership_witness(x)
            if wit is None:
                raise NotASubgroup("element escapes subgroup during presentation",
                                   element=format_element(x))
            return tuple(wit)

        for i, u in enumerate(self.igs):
            d = u.depth()
            r = G.orders[d]
            if r is None:
                orders.append(None)
            else:
                m = r // u.exps[d]
                orders.append(m)
                pows[i] = express(u ** m)
        for j in range(k):
            for i in range(j):
                uj, ui = self.igs[j], self.igs[i]
                w = express(uj.conj(ui))
                if w != ((j, 1),):
                    conjs[(j, i, 1)] = w
                    conjs[(j, i, -1)] = express(uj.conj(ui.inv()))
        Q = PcGroup(names, orders, pows, conjs, check=False)
        Q.consistent = True  # presents an actual subgroup

        def to_parent(x):
            out = G.identity()
            for i, e in enumerate(x.exps):
                if e:
                    out = out * self.igs[i] ** e
            return out

        def from_parent(g):
            wit = self.membership_witness(g)
            if wit is None:
                raise NotASubgroup(element=format_element(g))
            word = list(wit)
            return Q.collect(word)

        self._pc = (Q, to_parent, from_parent)
        return self._pc


# ---------------------------------------------------------------------------
# presentation source format
# ---------------------------------------------------------------------------

def parse_word(text, index_of):
    """`*`-separated gen^±int factors; `1` is the empty word."""
    text = text.strip()
    if text == "1":
        return ()
    out = []
    for factor in text.split("*"):
        factor = factor.strip()
        if not factor:
            raise MalformedSource("empty factor in word")
        if "^" in factor:
            nm, _, ex = factor.partition("^")
            nm = nm.strip()
            try:
                e = int(ex.strip())
            except ValueError as exc:
                raise MalformedSource(f"bad exponent in {factor!r}") from exc
        else:
            nm, e = factor, 1
        if nm not in index_of:
            raise UnknownGenerator(nm)
        out.append((index_of[nm], e))
    return tuple(out)


def parse_presentation(text):
    """Parse the line-oriented presentation format into a PcGroup.

    Lines: `group <name>` / `gens a b ...` / `order g <int|inf>` /
    `pow g = word` / `conj gj^gi = word` / `conj gj^gi- = word`.
    `#` starts a comment.  Stray stanzas (subgroup/character) are ignored
    here; the cli layer consumes them.
    """
    name = None
    names = None
    orders = {}
    pows = {}
    conjs = {}
    index_of = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "group":
                name = parts[1]
            elif parts[0] == "gens":
                names = parts[1:]
                index_of = {nm: i for i, nm in enumerate(names)}
            elif parts[0] == "order":
                if names is None:
                    raise MalformedSource("order before gens")
                nm, val = parts[1], parts[2]
                if nm not in index_of:
                    raise UnknownGenerator(nm)
                orders[index_of[nm]] = None if val in ("inf", "infinity") else int(val)
            elif parts[0] == "pow":
                nm, eq, word = parts[1], parts[2], " ".join(parts[3:])
                if eq != "=":
                    raise MalformedSource("pow syntax: pow g = word")
                pows[index_of[nm]] = parse_word(word, index_of)
            elif parts[0] == "conj":
                spec, eq, word = parts[1], parts[2], " ".join(parts[3:])
                if eq != "=":
                    raise MalformedSource("conj syntax: conj gj^gi = word")
                gj, _, gi = spec.partition("^")
                s = 1
                if gi.endswith("-"):
                    s = -1
                    gi = gi[:-1]
                if gj not in index_of or gi not in index_of:
                    raise UnknownGenerator(spec)
                j, i = index_of[gj], index_of[gi]
                if not i < j:
                    raise MalformedSource("conjugation must act on a later generator")
                conjs[(j, i, s)] = parse_word(word, index_of)
            elif parts[0] in ("subgroup", "character", "value", "matrixrep", "mat"):
                continue
            else:
                raise MalformedSource(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise MalformedSource(f"line {lineno}: {raw.strip()!r}") from exc
        except MalformedSource as exc:
            raise MalformedSource(f"line {lineno}: {exc}") from exc
    if names is None:
        raise MalformedSource("no gens line")
    order_list = [orders.get(i) for i in range(len(names))]
    for i, r in enumerate(order_list):
        if r is None and i not in orders:
            raise MalformedSource(f"missing order for generator {names[i]}")
    G = PcGroup(names, order_list, pows, conjs)
    G.name = name or "G"
    return G
