"""Stabilizer engines over polycyclic groups.

Everything here reduces to two exact primitives:
  * Schreier orbit-stabilizer for a right action with hashable points and a
    finite orbit, and
  * kernel computation for (possibly sign-twisted) homomorphisms into Z^r,
    via integer-lattice algebra plus the derived subgroup.

On top of these sit subgroup intersection (a fiber-product descent along the
adapted layer series of G x G) and the normalizer (a layered descent refining
one igs condition at a time).
"""

from __future__ import annotations

from math import gcd

from .errors import NotAdapted, SearchExhausted
from .intlattice import kernel_basis, solve_left
from .pc import Subgroup, format_element


# ---------------------------------------------------------------------------
# Schreier orbit-stabilizer
# ---------------------------------------------------------------------------

def orbit_stabilizer(C, base, act, bound, context=""):
    """Stabilizer of `base` under the right action `act(point, element)` of
    the subgroup C.  Points must be hashable; raises SearchExhausted when the
    orbit exceeds `bound`."""
    gens = []
    for u in C.igs:
        gens.append(u)
        gens.append(u.inv())
    transversal = {base: None}   # point -> element mapping base to it; None = identity
    order = [base]
    head = 0
    G = C.parent
    ident = G.identity()

    def t_of(p):
        t = transversal[p]
        return ident if t is None else t

    stab_gens = []
    while head < len(order):
        p = order[head]
        head += 1
        for g in gens:
            q = act(p, g)
            if q not in transversal:
                if len(transversal) >= bound:
                    raise SearchExhausted("orbit bound exceeded",
                                          bound=bound, where=context)
                transversal[q] = t_of(p) * g
                order.append(q)
            else:
                sg = t_of(p) * g * t_of(q).inv()
                if not sg.is_identity():
                    stab_gens.append(sg)
    stab = Subgroup.from_generators(G, stab_gens) if stab_gens \
        else G.trivial_subgroup()
    return transversal, stab


# ---------------------------------------------------------------------------
# homomorphism kernels
# ---------------------------------------------------------------------------

def normal_closure(C, seeds, passes=64):
    """Smallest subgroup of C containing `seeds` and closed under conjugation
    by the igs generators of C."""
    S = Subgroup.from_generators(C.parent, list(seeds))
    for _ in range(passes):
        new = []
        for s in S.igs:
            for u in C.igs:
                for c in (s.conj(u), s.conj(u.inv())):
                    if not S.contains(c):
                        new.append(c)
        if not new:
            return S
        S = Subgroup.from_generators(C.parent, list(S.igs) + new)
    raise SearchExhausted("normal closure did not stabilize", bound=passes)


def derived_subgroup(C):
    comms = []
    for i, u in enumerate(C.igs):
        for v in C.igs[i + 1:]:
            c = u.comm(v)
            if not c.is_identity():
                comms.append(c)
    if not comms:
        return C.parent.trivial_subgroup()
    return normal_closure(C, comms)


def hom_kernel_Zr(C, values):
    """Kernel of the homomorphism C -> Z^r given by `values` on igs(C).

    Correctness requires that the map really is a homomorphism (it then
    factors through the abelianization, so the kernel is the derived subgroup
    together with the lattice combinations of the igs generators)."""
    D = derived_subgroup(C)
    if not values:
        return C
    rows = [list(v) for v in values]
    L = kernel_basis(rows)
    gens = list(D.igs)
    for comb in L:
        g = C.parent.identity()
        for i, e in enumerate(comb):
            if e:
                g = g * C.igs[i] ** e
        gens.append(g)
    return Subgroup.from_generators(C.parent, gens)


def hom_image_solve(C, values, target):
    """An element y of C with phi(y) == target for the homomorphism with the
    given igs `values` in Z^r, or None."""
    rows = [list(v) for v in values]
    x = solve_left(rows, list(target))
    if x is None:
        return None
    y = C.parent.identity()
    for i, e in enumerate(x):
        if e:
            y = y * C.igs[i] ** e
    return y


def crossed_kernel(C, sign, value, verify=True, context=""):
    """{c in C : value(c) == 0} for a crossed homomorphism into Z obeying
    value(xy) = value(x) + sign(x) * value(y) with sign a {+-1} character.

    The law is verified on generator pairs when `verify` is set; a violation
    raises SearchExhausted (the caller picked a non-crossed map)."""
    G = C.parent
    if verify:
        test = list(C.igs[:4])
        for x in test:
            for y in test:
                lhs = value(x * y)
                if lhs != value(x) + sign(x) * value(y) or \
                        sign(x * y) != sign(x) * sign(y):
                    raise SearchExhausted("crossed-homomorphism law fails",
                                          where=context)
    plus = [u for u in C.igs if sign(u) == 1]
    minus = [u for u in C.igs if sign(u) == -1]
    if not minus:
        Cp = C
    else:
        # kernel of the sign character: index 2
        m0 = minus[0]
        gens = plus + [m0 * m, m * m0] if False else \
            plus + [m0 * m for m in minus] + [m0 * m0]
        Cp = Subgroup.from_generators(G, gens)
    vals = [(value(u),) for u in Cp.igs]
    K = hom_kernel_Zr(Cp, vals)
    if minus:
        # extend by one sign -1 solution if it exists:
        # value(m0 * y) = value(m0) - value(y) for y in Cp
        y = hom_image_solve(Cp, vals, (value(minus[0]),))
        if y is not None:
            w = minus[0] * y
            assert value(w) == 0 and sign(w) == -1
            K = K.join(Subgroup.from_generators(G, [w]))
    return K


# ---------------------------------------------------------------------------
# intersection: fiber-product descent in G x G
# ---------------------------------------------------------------------------

def intersection(A, B):
    """A ∩ B for subgroups of one adapted PcGroup.  Exact.

    Descend the layer series: D_d = {(a,b) in A x B : a b^{-1} in T_d} is a
    subgroup of G x G; the refinement D_d -> D_{d+1} is the kernel of a
    sign-twisted defect map into the layer-d cyclic group (Schreier orbit on
    finite layers, crossed-homomorphism kernel on infinite ones)."""
    G = A.parent
    if B.parent is not G:
        from .errors import MixedParents
        raise MixedParents()
    if not G.supersolvable_adapted:
        raise NotAdapted("intersection requires an adapted presentation")
    if A == B:
        return A
    if A.is_trivial() or B.is_trivial():
        return G.trivial_subgroup()
    GG, e1, e2, p1, p2 = G.direct_square()
    D = Subgroup(GG, _merged_product_igs(GG, A, B, e1, e2))
    for d in range(G.n):
        D = _fiber_refine(D, G, d, p1, p2)
        if D.is_trivial():
            break
    gens = [p1(w) for w in D.igs]
    return Subgroup.from_generators(G, gens)


def _merged_product_igs(GG, A, B, e1, e2):
    # igs(A x B) is the concatenation: blocks occupy disjoint depth ranges
    return tuple([e1(u) for u in A.igs] + [e2(v) for v in B.igs])


def _fiber_refine(D, G, d, p1, p2):
    r = G.orders[d]

    def defect(w):
        u = p1(w) * p2(w).inv()
        assert all(u.exps[i] == 0 for i in range(d)), "fiber invariant broken"
        return u.exps[d]

    if all(defect(w) == 0 for w in D.igs):
        return D

    def sig(w):
        return G.element_layer_sign(p2(w), d)

    if r is not None:
        # finite layer: affine orbit of 0 under act(t, w) = sig(w)*(t - defect(w))
        def act(t, w):
            return (sig(w) * (t - defect(w))) % r

        _, stab = orbit_stabilizer(D, 0, act, r + 1,
                                   context=f"intersection layer {d}")
        return stab
    return crossed_kernel(D, sig, defect, context=f"intersection layer {d}")


# ---------------------------------------------------------------------------
# normalizer: layered descent
# ---------------------------------------------------------------------------

def normalizer(G, S, cfg):
    """N_G(S) for an adapted PcGroup G.  Exact; raises SearchExhausted on the
    (corpus-free) combination of an infinite defect space with a non-crossed
    twist."""
    if not G.supersolvable_adapted:
        raise NotAdapted("normalizer requires an adapted presentation")
    M = G.whole_group()
    if S.is_trivial() or S == M:
        return M
    n = G.n
    order = sorted(range(len(S.igs)), key=lambda i: -S.igs[i].depth())
    for k in range(n):
        tail = G.tail_subgroup(k + 1)
        for i in order:
            s = S.igs[i]
            if s.depth() > k:
                continue  # condition trivial: s^g and target both inside tail
            W = Subgroup.from_generators(
                G, [S.igs[j] for j in order if S.igs[j].depth() >= s.depth()]
                + list(tail.igs))
            M = _refine(M, G, s, W, k, cfg)
        # assert invariant: generators now normalize pi_k(S)
    for u in S.igs:
        assert all(S.contains(u.conj(v)) and S.contains(u.conj(v.inv()))
                   for v in M.igs), "normalizer postcheck failed"
    for g in G.gens():
        if not M.contains(g):
            assert not all(S.contains(u.conj(g)) for u in S.igs) or \
                not all(S.contains(u.conj(g.inv())) for u in S.igs), \
                "normalizer misses a normalizing pc generator"
    return M


def _refine(M, G, s, W, k, cfg):
    """{g in M : s^g in W}, where the caller guarantees s^g in W*<g_k>*tail
    for all g in M and that M normalizes the deeper part of W."""
    if all(W.contains(s.conj(u)) and W.contains(s.conj(u.inv()))
           for u in M.igs):
        return M
    r = G.orders[k]
    km = W._by_depth.get(k)
    m = W.igs[km].exps[k] if km is not None else 0
    if r is not None or m != 0:
        # finite defect space: Schreier on conjugates of W
        def act(key, g):
            sub = Subgroup(G, [G.element(e) for e in key])
            return sub.conjugate(g).key()

        _, stab = orbit_stabilizer(M, W.key(), act,
                                   cfg.orbit_bound, context=f"normalizer layer {k}")
        # stabilizing W == the member condition at this point of the sweep
        return _meet_groups(M, stab, G)
    # infinite defect: sign-twisted crossed homomorphism
    d_i = s.depth()
    chi_k_s = G.element_layer_sign(s, k)

    def defect(g):
        x = s.conj(g)
        res, _ = W.sift(x)
        if res.is_identity():
            return 0
        assert res.depth() == k, "defect escaped the layer"
        return res.exps[k]

    def tau(g):
        return G.element_layer_sign(g, k) * defect(g)

    def eps(g):
        alpha = 1 if (s.conj(g)).exps[d_i] * s.exps[d_i] > 0 else -1
        lam = alpha if chi_k_s == 1 else 1
        return lam * G.element_layer_sign(g, k)

    K = crossed_kernel(M, eps, tau, context=f"normalizer layer {k}")
    return K


def _meet_groups(M, stab, G):
    # stab was generated inside M by Schreier generators, so stab <= M already
    assert M.contains_subgroup(stab)
    return stab
