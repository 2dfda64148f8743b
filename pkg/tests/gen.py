"""Random models and functions shared by the test modules."""

import random

from dyncu import ActionModel, Budgets, FiniteSpace, LscFun, PartialBijection, PathSpace, PrefixExchange

EDGE_NAMES = "abcd"


def random_finite_model(rng: random.Random, max_points=5, max_gens=2):
    n = rng.randint(2, max_points)
    X = FiniteSpace(tuple(f"p{i}" for i in range(n)))
    gens = []
    for g in range(rng.randint(1, max_gens)):
        dom = rng.sample(range(n), rng.randint(1, n))
        ran = rng.sample(range(n), len(dom))
        gens.append(PartialBijection(X, tuple(zip(dom, ran)), name=f"g{g}"))
    return ActionModel(X, gens, name="random-finite")


def random_graph(rng: random.Random, max_vertices=2, max_edges=3):
    nv = rng.randint(1, max_vertices)
    verts = tuple(f"v{i}" for i in range(nv))
    edges = []
    names = iter(EDGE_NAMES)
    for v in verts:  # every vertex emits an edge
        edges.append((next(names), v, rng.choice(verts)))
    while len(edges) < max_edges and rng.random() < 0.6:
        edges.append((next(names), rng.choice(verts), rng.choice(verts)))
    return PathSpace(verts, tuple(edges))


def random_path_model(rng: random.Random, budgets=None, max_gens=2):
    sp = random_graph(rng)
    words = sp.words(0) + sp.words(1)
    gens = []
    for g in range(rng.randint(1, max_gens)):
        q, p = rng.choice(words), rng.choice(words)
        gens.append(PrefixExchange(sp, q, p, None, f"t{g}"))
    return ActionModel(sp, gens, budgets or Budgets(depth=2, len=2, mult=2), name="random-path")


def random_lsc(rng: random.Random, space, vmax=3, depth=2, density=0.6):
    if isinstance(space, FiniteSpace):
        return LscFun.from_values(space, [rng.randint(0, vmax) if rng.random() < density else 0
                                          for _ in range(len(space))])
    level = rng.randint(0, depth)
    cells = space.partition(space.words(level)) if level else [""]
    return LscFun.from_pairs(space, [(c, rng.randint(0, vmax) if rng.random() < density else 0) for c in cells])


def planted_instance(rng: random.Random, model, moves=2, vmax=2):
    """F, H with H built from images of random moves, so that F <= H
    usually holds only up to the dynamics."""
    from dyncu import OpenSet
    from dyncu.lsc import lsc_sum

    sp = model.space
    elems = model.semigroup.nonzero()
    if isinstance(sp, FiniteSpace):
        cells = list(range(len(sp)))
    else:
        cells = [w for w in sp.cylinders_upto(model.budgets.depth)]
    F_parts, H_parts = [], []
    for _ in range(moves):
        for _ in range(20):
            s = rng.choice(elems)
            c = rng.choice(cells)
            piece = OpenSet.from_atoms(sp, [c])
            if piece <= s.dom():
                k = rng.randint(1, vmax)
                F_parts.append(piece.indicator(k))
                H_parts.append(s.image(piece).indicator(k))
                break
    F = lsc_sum(F_parts, sp)
    H = lsc_sum(H_parts, sp)
    if rng.random() < 0.5:  # extra demand, sometimes infeasible
        F = lsc_sum([F, random_lsc(rng, sp, 1, density=0.2)], sp)
    if rng.random() < 0.3:
        H = lsc_sum([H, random_lsc(rng, sp, 1, density=0.3)], sp)
    return F, H
