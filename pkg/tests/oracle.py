"""Independent word-rewriting normalizer for checking extension products.

Rules are written directly from hand-expanded commutation relations, so
nothing here touches the library's sigma/delta machinery.
"""

from fractions import Fraction


def h_rules(f=1):
    return {
        ("x2", "x1"): {("x1", "x2"): 1, ("x1", "x1"): 1},
        ("y1", "x1"): {("x1", "y2"): 1},
        ("y1", "x2"): {("x1", "y2"): f, ("x2", "y2"): 1},
        ("y2", "x1"): {("x1", "y1"): 1},
        ("y2", "x2"): {("x1", "y1"): f, ("x2", "y1"): 1},
        ("y2", "y1"): {("y1", "y2"): -1},
    }


def l_rules(f=1, g=1, h=1, m=1):
    return {
        ("x2", "x1"): {("x1", "x2"): 1, ("x1", "x1"): 1},
        ("y1", "x1"): {("x1", "y1"): f},
        ("y1", "x2"): {("x1", "y1"): g, ("x2", "y1"): f},
        ("y2", "x1"): {("x1", "y1"): h, ("x1", "y2"): f},
        ("y2", "x2"): {("x1", "y1"): m, ("x2", "y1"): h, ("x1", "y2"): g, ("x2", "y2"): f},
        ("y2", "y1"): {("y1", "y2"): 1, ("y1", "y1"): 1},
    }


def normalize(poly, rules):
    out = {}
    todo = {w: Fraction(c) for w, c in poly.items()}
    while todo:
        w, c = todo.popitem()
        for k in range(len(w) - 1):
            rhs = rules.get((w[k], w[k + 1]))
            if rhs is not None:
                for rep, d in rhs.items():
                    nw = w[:k] + rep + w[k + 2:]
                    todo[nw] = todo.get(nw, 0) + c * d
                    if not todo[nw]:
                        del todo[nw]
                break
        else:
            out[w] = out.get(w, 0) + c
            if not out[w]:
                del out[w]
    return out


def product(a, b, rules):
    raw = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            raw[wa + wb] = raw.get(wa + wb, 0) + ca * cb
    return normalize(raw, rules)


def from_ext(e):
    """Convert a library element to the oracle's word dictionary."""
    out = {}
    for (i, j), r in e.terms.items():
        for w, c in r.terms.items():
            word = tuple(r.ring.gens[g] for g in w) + ("y1",) * i + ("y2",) * j
            out[word] = Fraction(c)
    return out
