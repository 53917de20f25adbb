"""Search rotation systems for the regime templates and print them as frozen data.

Run once; the printed literal is frozen in ``src/heartlab/_template_data.py``.

Phase portrait being encoded (eps > 0, no connection): saddles L and M keep
the two heart connections L->M and M->L; the free separatrices of M end at a
sink a3 and a source r3 inside the heart.  The unstable separatrices of I, E
and the former loop separatrix of L go to the sink a; the stable separatrices
of E, I and L come from the source r.  E's other unstable separatrix goes to
an outer sink a2, I's other stable one comes from a source r2 inside the tear.
For eps < 0 the winding separatrices are truncated on transversal loops
around the two limit cycles instead.

Every saddle keeps one cyclic order of its separatrices in all regimes; the
search keeps the assignments under which every regime graph embeds in the
sphere, then picks the first in a fixed enumeration order.
"""
import itertools
import pprint
import sys

from heartlab.lmf import (
    HEAD, ITL, LC, OTL, SADDLE, SC, SINK, SOURCE, SS, STS, TAIL, TV, US, UTS, VLC,
    LmfGraph, isotopic, mirror, validate,
)

SADDLES = ("E", "I", "L", "M")

GENERIC_V = {
    "E": SADDLE, "I": SADDLE, "L": SADDLE, "M": SADDLE,
    "a": SINK, "a2": SINK, "a3": SINK, "r": SOURCE, "r2": SOURCE, "r3": SOURCE,
}
GENERIC_E = {
    "hLM": ("L", "M", SC), "hML": ("M", "L", SC),
    "uM": ("M", "a3", US), "sM": ("r3", "M", SS),
    "uL": ("L", "a", US), "sL": ("r", "L", SS),
    "uI1": ("I", "a", US), "uI2": ("I", "a", US),
    "sIw": ("r", "I", SS), "sIo": ("r2", "I", SS),
    "sE1": ("r", "E", SS), "sE2": ("r", "E", SS),
    "uEw": ("E", "a", US), "uEo": ("E", "a2", US),
}
SURGERIES = {
    "LE": (("uEw", "sL"), ("cEL", "E", "L")),
    "LI": (("uL", "sIw"), ("cLI", "L", "I")),
    "EI": (("uEw", "sIw"), ("cEI", "E", "I")),
}


def incident(edges, v):
    out = []
    for e, (s, t, _) in sorted(edges.items()):
        if s == v:
            out.append((e, TAIL))
        if t == v:
            out.append((e, HEAD))
    return out


def cyclic_orders(darts):
    if len(darts) <= 2:
        yield tuple(darts)
        return
    first, rest = darts[0], darts[1:]
    for p in itertools.permutations(rest):
        yield (first, *p)


def saddle_orders(edges, v):
    darts = incident(edges, v)
    outs = [d for d in darts if (d[1] == TAIL)]
    ins = [d for d in darts if (d[1] == HEAD)]
    yield (outs[0], ins[0], outs[1], ins[1])
    yield (outs[0], ins[1], outs[1], ins[0])


def surgery(rot, edges, remove, add):
    sc, src, dst = add
    out_src = next(e for e in remove if edges[e][0] == src)
    in_dst = next(e for e in remove if edges[e][1] == dst)
    new = {}
    for v, r in rot.items():
        lst = []
        for d in r:
            if d == (out_src, TAIL):
                lst.append((sc, TAIL))
            elif d == (in_dst, HEAD):
                lst.append((sc, HEAD))
            elif d[0] not in remove:
                lst.append(d)
        new[v] = tuple(lst)
    e2 = {e: x for e, x in edges.items() if e not in remove}
    e2[sc] = (src, dst, SC)
    return e2, new


def tear_is_clockwise(rot_L):
    """The loop leaves L along uL and returns along sL; if sL is followed by uL
    counterclockwise, the tear interior is on the right of the loop."""
    i = rot_L.index(("sL", HEAD))
    return rot_L[(i + 1) % 4] == ("uL", TAIL)


def _left_of(rot, out_dart, in_dart):
    """Darts strictly counterclockwise between the outgoing and incoming darts of a path."""
    i, j = rot.index(out_dart), rot.index(in_dart)
    k, out = (i + 1) % len(rot), set()
    while k != j:
        out.add(rot[k][0])
        k = (k + 1) % len(rot)
    return out


def heart_separates(rot):
    """The heart L->M->L keeps M's free separatrices on the side away from the tear."""
    left_L = _left_of(rot["L"], ("hLM", TAIL), ("hML", HEAD))
    left_M = _left_of(rot["M"], ("hML", TAIL), ("hLM", HEAD))
    return (left_L == {"uL", "sL"}) != (left_M == {"uM", "sM"})


def negeps(saddle_rot):
    V = {
        "I": SADDLE, "a": SINK, "r2": SOURCE, "t4": TV,
        "c_in": VLC,
        "L": SADDLE, "M": SADDLE, "a3": SINK, "r3": SOURCE, "t1": TV, "t3": TV,
        "c_out": VLC,
        "E": SADDLE, "r": SOURCE, "a2": SINK, "t2": TV,
    }
    E = {
        "uI1": ("I", "a", US), "uI2": ("I", "a", US), "sIo": ("r2", "I", SS),
        "sIw": ("t4", "I", STS), "l4": ("t4", "t4", OTL),
        "lc_in": ("c_in", "c_in", LC),
        "hLM": ("L", "M", SC), "hML": ("M", "L", SC),
        "uM": ("M", "a3", US), "sM": ("r3", "M", SS),
        "uL": ("L", "t1", UTS), "l1": ("t1", "t1", ITL),
        "sL": ("t3", "L", STS), "l3": ("t3", "t3", OTL),
        "lc_out": ("c_out", "c_out", LC),
        "sE1": ("r", "E", SS), "sE2": ("r", "E", SS),
        "uEw": ("E", "t2", UTS), "uEo": ("E", "a2", US), "l2": ("t2", "t2", ITL),
    }
    R = {v: saddle_rot[v] for v in SADDLES}
    R.update({
        "a": (("uI1", HEAD), ("uI2", HEAD)), "r2": (("sIo", TAIL),),
        "a3": (("uM", HEAD),), "r3": (("sM", TAIL),),
        "r": (("sE1", TAIL), ("sE2", TAIL)), "a2": (("uEo", HEAD),),
        "c_in": (("lc_in", TAIL), ("lc_in", HEAD)), "c_out": (("lc_out", TAIL), ("lc_out", HEAD)),
        "t4": (("l4", TAIL), ("l4", HEAD), ("sIw", TAIL)),
        "t1": (("l1", TAIL), ("l1", HEAD), ("uL", HEAD)),
        "t2": (("l2", TAIL), ("l2", HEAD), ("uEw", HEAD)),
        "t3": (("l3", TAIL), ("l3", HEAD), ("sL", TAIL)),
    })
    # Both cycles run the way the tear loop ran.  The face right of a dart is
    # its face, so for a clockwise cycle the enclosed disk is right of the tail dart.
    cw = tear_is_clockwise(saddle_rot["L"])
    inner, outer = (TAIL, HEAD) if cw else (HEAD, TAIL)
    inside_in, outside_in = ("lc_in", inner), ("lc_in", outer)
    inside_out, outside_out = ("lc_out", inner), ("lc_out", outer)
    # the limit-set side of a transversal loop is right of its head dart
    toward_cin, toward_cout = ("l3", HEAD), ("l1", HEAD)
    beyond_in, beyond_out = ("l4", HEAD), ("l2", HEAD)
    reps = {"in": "I", "cin": "c_in", "mid": "L", "cout": "c_out", "out": "E"}
    faces = {
        ("in", "cin"): inside_in, ("mid", "cin"): outside_in,
        ("cout", "cin"): outside_in, ("out", "cin"): outside_in,
        ("in", "cout"): inside_out, ("cin", "cout"): inside_out,
        ("mid", "cout"): inside_out, ("out", "cout"): outside_out,
        ("in", "mid"): toward_cin, ("cin", "mid"): toward_cin,
        ("cout", "mid"): toward_cout, ("out", "mid"): toward_cout,
        ("cin", "in"): beyond_in, ("mid", "in"): beyond_in,
        ("cout", "in"): beyond_in, ("out", "in"): beyond_in,
        ("in", "out"): beyond_out, ("cin", "out"): beyond_out,
        ("mid", "out"): beyond_out, ("cout", "out"): beyond_out,
    }
    nest = {(reps[a], reps[b]): d for (a, b), d in faces.items()}
    return LmfGraph(V, E, R, nest)


def candidates():
    per_vertex = []
    for v in sorted(GENERIC_V):
        if GENERIC_V[v] == SADDLE:
            per_vertex.append([(v, o) for o in saddle_orders(GENERIC_E, v)])
        else:
            per_vertex.append([(v, o) for o in cyclic_orders(incident(GENERIC_E, v))])
    for combo in itertools.product(*per_vertex):
        rot = dict(combo)
        if not heart_separates(rot):
            continue
        g = LmfGraph(dict(GENERIC_V), dict(GENERIC_E), rot)
        if validate(g):
            continue
        out = {"PosEpsGeneric": g}
        for tag, (remove, add) in SURGERIES.items():
            e2, r2 = surgery(rot, GENERIC_E, remove, add)
            h = LmfGraph(dict(GENERIC_V), e2, r2)
            if validate(h):
                break
            out[f"PosEps{tag}"] = h
        else:
            neg = negeps({v: rot[v] for v in SADDLES})
            if not validate(neg):
                out["NegEps"] = neg
                yield out


def main():
    found = list(candidates())
    print(f"# {len(found)} consistent rotation systems", file=sys.stderr)
    chosen = None
    for c in found:
        names = sorted(c)
        distinct = all(isotopic(c[a], c[b]) is None for a, b in itertools.combinations(names, 2))
        chiral = [n for n in names if isotopic(c[n], mirror(c[n])) is None]
        print(f"# distinct={distinct} chiral={chiral} L={c['NegEps'].rotation['L']}", file=sys.stderr)
        if distinct and chosen is None:
            chosen = c
    if chosen is None:
        sys.exit("no rotation system separates all five regimes")
    data = {
        name: {"vertices": g.vertices, "edges": g.edges, "rotation": g.rotation, "nesting": g.nesting}
        for name, g in sorted(chosen.items())
    }
    print("TEMPLATE_DATA = ", end="")
    pprint.pprint(data, width=100, sort_dicts=True)


if __name__ == "__main__":
    main()
