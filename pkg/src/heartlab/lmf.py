"""Labelled oriented graphs embedded in the sphere (LMF graphs).

An embedding is stored combinatorially.  Every edge ``e`` has two darts,
``(e, 0)`` at its source and ``(e, 1)`` at its target; ``rotation[v]`` lists
the darts at ``v`` in counterclockwise order.  Faces are the orbits of
``phi = sigma . theta`` (``theta`` swaps the two darts of an edge, ``sigma``
steps counterclockwise around a vertex); the face of a dart lies on its
right.  Disconnected graphs also need the relative position of their
components: ``nesting`` maps every ordered pair of distinct components to the
face of the second that contains the first, recorded as ``(v, dart)`` with
``v`` any vertex of the contained component and ``dart`` any dart of the face.

Two such graphs are isotopic on the oriented sphere exactly when a bijection
of darts preserves labels, edge orientation, ``theta``, ``sigma`` and the
nesting faces.

Transversal loops are oriented counterclockwise around the disk holding their
limit set, so that disk is the face on the right of the loop's head darts.
At a truncation vertex the darts run ``loop out, loop in, separatrix``
counterclockwise; the separatrix therefore leaves on the side away from the
limit set.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from ._template_data import TEMPLATE_DATA
from .arithmetic import DEFAULT_LATTICE_BOUND, ViolationsFound, diophantine_check, equiv_mod_lattice
from .errors import ConsistencyError, DomainError
from .model import as_family, derive
from .orderings import DEFAULT_MAX_DROP, Equivalent, build_base_homeo, lemma1_experiment, lemma3_extension

SADDLE, SINK, SOURCE = "SP:saddle", "SP:sink", "SP:source"
TV, VLC, VETL = "TV", "VLC", "VETL"
VERTEX_LABELS = (SADDLE, SINK, SOURCE, TV, VLC, VETL)
SS, US, SC, STS, UTS, LC, OTL, ITL = "SS", "US", "SC", "STS", "UTS", "LC", "OTL", "ITL"
EDGE_LABELS = (SS, US, SC, STS, UTS, LC, OTL, ITL)
LOOP_LABELS = (OTL, ITL)

TAIL, HEAD = 0, 1


def twin(d):
    return (d[0], 1 - d[1])


@dataclass(frozen=True)
class LmfGraph:
    vertices: dict  # id -> label
    edges: dict  # id -> (src, dst, label)
    rotation: dict  # vertex id -> tuple of darts, counterclockwise
    nesting: dict = field(default_factory=dict)  # (child vertex, container vertex) -> dart

    def dart_vertex(self, d):
        src, dst, _ = self.edges[d[0]]
        return src if d[1] == TAIL else dst

    def darts(self):
        return [(e, end) for e in self.edges for end in (TAIL, HEAD)]

    def sigma(self, d):
        rot = self.rotation[self.dart_vertex(d)]
        return rot[(rot.index(d) + 1) % len(rot)]

    def phi(self, d):
        return self.sigma(twin(d))

    def faces(self) -> list:
        """Face orbits, each as a tuple of darts starting at its least dart."""
        seen, out = set(), []
        for d in sorted(self.darts()):
            if d in seen:
                continue
            orbit, x = [], d
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = self.phi(x)
            out.append(tuple(orbit))
        return out

    def face_of(self) -> dict:
        return {d: i for i, f in enumerate(self.faces()) for d in f}

    def components(self) -> list:
        """Vertex sets of the connected components, ordered by least vertex id."""
        adj = {v: set() for v in self.vertices}
        for src, dst, _ in self.edges.values():
            adj[src].add(dst)
            adj[dst].add(src)
        seen, out = set(), []
        for v in sorted(self.vertices):
            if v in seen:
                continue
            comp, stack = set(), [v]
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def component_index(self) -> dict:
        return {v: i for i, c in enumerate(self.components()) for v in c}

    def count(self, label) -> int:
        if label in EDGE_LABELS:
            return sum(1 for *_, lab in self.edges.values() if lab == label)
        return sum(1 for lab in self.vertices.values() if lab == label)

    def edges_between(self, src, dst, label=None) -> list:
        return sorted(
            e for e, (s, t, lab) in self.edges.items()
            if s == src and t == dst and (label is None or lab == label)
        )


# -- validation ---------------------------------------------------------------

_SEP_IN = {SS, STS}
_SEP_OUT = {US, UTS}


def _dart_sense(g, d) -> str | None:
    """'in'/'out' for a separatrix dart at a saddle, ``None`` otherwise."""
    lab = g.edges[d[0]][2]
    if lab == SC:
        return "out" if d[1] == TAIL else "in"
    if lab in _SEP_OUT:
        return "out" if d[1] == TAIL else None
    if lab in _SEP_IN:
        return "in" if d[1] == HEAD else None
    return None


def _loop_label_at(g, v):
    labs = {g.edges[d[0]][2] for d in g.rotation.get(v, ()) if g.edges[d[0]][2] in LOOP_LABELS}
    return labs.pop() if len(labs) == 1 else None


def validate(g: LmfGraph) -> list:
    """Violations of the labelling, orientation and embedding rules (empty when valid)."""
    out = []
    for v, lab in g.vertices.items():
        if lab not in VERTEX_LABELS:
            out.append(f"vertex {v}: unknown label {lab!r}")
    for e, (src, dst, lab) in g.edges.items():
        if lab not in EDGE_LABELS:
            out.append(f"edge {e}: unknown label {lab!r}")
        for end in (src, dst):
            if end not in g.vertices:
                out.append(f"edge {e}: endpoint {end!r} is not a vertex")
    if out:
        return out
    vl = g.vertices

    for e, (src, dst, lab) in sorted(g.edges.items()):
        s, t = vl[src], vl[dst]
        if lab == LC and not (s == VLC and t == VLC):
            out.append(f"edge {e}: LC endpoint not VLC")
        elif lab == SC and not (s == SADDLE and t == SADDLE):
            out.append(f"edge {e}: SC must join two saddles")
        elif lab == US and not (s == SADDLE and t == SINK):
            out.append(f"edge {e}: US must run from a saddle to a sink")
        elif lab == SS and not (s == SOURCE and t == SADDLE):
            out.append(f"edge {e}: SS must run from a source to a saddle")
        elif lab == UTS and not (s == SADDLE and t == TV):
            out.append(f"edge {e}: UTS must run from a saddle to a truncation vertex")
        elif lab == STS and not (s == TV and t == SADDLE):
            out.append(f"edge {e}: STS must run from a truncation vertex to a saddle")
        elif lab in LOOP_LABELS and not (s in (TV, VETL) and t in (TV, VETL)):
            out.append(f"edge {e}: transversal loop endpoint not TV/VETL")

    # rotation is a permutation of the incident darts
    incident = {v: set() for v in g.vertices}
    for d in g.darts():
        incident[g.dart_vertex(d)].add(d)
    for v in g.vertices:
        rot = g.rotation.get(v, ())
        if len(set(rot)) != len(rot) or set(rot) != incident[v]:
            out.append(f"vertex {v}: rotation does not list its incident darts")
    for v in set(g.rotation) - set(g.vertices):
        out.append(f"rotation for unknown vertex {v!r}")
    if out:
        return out

    for v, lab in sorted(vl.items()):
        rot = g.rotation[v]
        labs = [g.edges[d[0]][2] for d in rot]
        if not rot:
            out.append(f"vertex {v}: isolated")
        elif lab == SADDLE:
            senses = [_dart_sense(g, d) for d in rot]
            if len(rot) != 4 or None in senses:
                out.append(f"vertex {v}: saddle needs four separatrix ends")
            elif any(senses[i] == senses[(i + 1) % 4] for i in range(4)):
                out.append(f"vertex {v}: saddle separatrices must alternate in/out")
        elif lab == SINK and any(x != US for x in labs):
            out.append(f"vertex {v}: sink accepts only incoming US edges")
        elif lab == SOURCE and any(x != SS for x in labs):
            out.append(f"vertex {v}: source emits only SS edges")
        elif lab == VLC and (len(rot) != 2 or any(x != LC for x in labs)):
            out.append(f"vertex {v}: VLC carries exactly one LC edge")
        elif lab == VETL and (len(rot) != 2 or len({x for x in labs}) != 1 or labs[0] not in LOOP_LABELS):
            out.append(f"vertex {v}: VETL carries exactly one empty transversal loop")
        elif lab == TV:
            out.extend(_check_tv(g, v, rot))

    # each loop edge label is constant along its loop
    for v, lab in vl.items():
        if lab in (TV, VETL) and _loop_label_at(g, v) is None:
            out.append(f"vertex {v}: mixed or missing transversal loop label")

    comp = g.component_index()
    faces = g.face_of()
    face_count = {}
    for d, f in faces.items():
        face_count.setdefault(comp[g.dart_vertex(d)], set()).add(f)
    for i, c in enumerate(g.components()):
        n_e = sum(1 for s, _, _ in g.edges.values() if s in c)
        chi = len(c) - n_e + len(face_count.get(i, ()))
        if chi != 2:
            out.append(f"component of {min(c)}: V - E + F = {chi}, not 2 (not a sphere embedding)")
    out.extend(_check_nesting(g, comp, faces))
    return out


def _check_tv(g, v, rot):
    out = []
    if len(rot) != 3:
        return [f"vertex {v}: truncation vertex needs degree 3"]
    labs = [g.edges[d[0]][2] for d in rot]
    loop_out = [i for i, d in enumerate(rot) if labs[i] in LOOP_LABELS and d[1] == TAIL]
    loop_in = [i for i, d in enumerate(rot) if labs[i] in LOOP_LABELS and d[1] == HEAD]
    sep = [i for i in range(3) if labs[i] in (STS, UTS)]
    if not (len(loop_out) == len(loop_in) == len(sep) == 1):
        return [f"vertex {v}: truncation vertex needs one loop in, one loop out, one separatrix"]
    i = loop_out[0]
    if loop_in[0] != (i + 1) % 3:
        out.append(f"vertex {v}: separatrix must leave the loop away from its limit set")
    loop_lab, sep_lab = labs[i], labs[sep[0]]
    if sep_lab == UTS and loop_lab != ITL:
        out.append(f"vertex {v}: unstable separatrix truncated on an outgoing loop")
    if sep_lab == STS and loop_lab != OTL:
        out.append(f"vertex {v}: stable separatrix truncated on an ingoing loop")
    return out


def _check_nesting(g, comp, faces):
    out = []
    ncomp = len(set(comp.values()))
    where = {}
    for (child, container), d in g.nesting.items():
        if child not in g.vertices or container not in g.vertices:
            out.append(f"nesting entry ({child}, {container}) names an unknown vertex")
            continue
        if d not in faces or comp[g.dart_vertex(d)] != comp[container]:
            out.append(f"nesting entry ({child}, {container}): dart {d} not in the container component")
            continue
        key = (comp[child], comp[container])
        if key[0] == key[1]:
            out.append(f"nesting entry ({child}, {container}) inside one component")
            continue
        if key in where and where[key] != faces[d]:
            out.append(f"nesting entries disagree for components {key}")
        where[key] = faces[d]
    if out:
        return out
    for a in range(ncomp):
        for b in range(ncomp):
            if a != b and (a, b) not in where:
                out.append(f"nesting incomplete: component {a} has no face in component {b}")
    if out:
        return out
    # if B separates A from C then, seen from A, B and C share a face
    for a in range(ncomp):
        for b in range(ncomp):
            for c in range(ncomp):
                if len({a, b, c}) == 3 and where[(a, b)] != where[(c, b)]:
                    if where[(b, a)] != where[(c, a)]:
                        out.append(f"nesting of components {a}, {b}, {c} is not realisable on the sphere")
    return out


# -- isotopy ------------------------------------------------------------------

def _component_darts(g, comp_vertices):
    return [d for v in sorted(comp_vertices) for d in g.rotation[v]]


def _extend(g1, g2, d1, d2):
    """Dart map of one component forced by ``d1 -> d2``, or ``None``."""
    m = {}
    stack = [(d1, d2)]
    while stack:
        a, b = stack.pop()
        if a in m:
            if m[a] != b:
                return None
            continue
        if a[1] != b[1] or g1.edges[a[0]][2] != g2.edges[b[0]][2]:
            return None
        if g1.vertices[g1.dart_vertex(a)] != g2.vertices[g2.dart_vertex(b)]:
            return None
        if len(g1.rotation[g1.dart_vertex(a)]) != len(g2.rotation[g2.dart_vertex(b)]):
            return None
        m[a] = b
        stack.append((twin(a), twin(b)))
        stack.append((g1.sigma(a), g2.sigma(b)))
    if len(set(m.values())) != len(m):
        return None
    return m


def _component_maps(g1, c1, g2, c2) -> list:
    darts1 = _component_darts(g1, c1)
    darts2 = _component_darts(g2, c2)
    if len(c1) != len(c2) or len(darts1) != len(darts2):
        return []
    if not darts1:
        return []
    anchor = darts1[0]
    maps = []
    for b in darts2:
        m = _extend(g1, g2, anchor, b)
        if m is not None and len(m) == len(darts1):
            maps.append(m)
    return maps


@dataclass(frozen=True)
class Isotopy:
    vertex_map: dict
    edge_map: dict


def isotopic(g1: LmfGraph, g2: LmfGraph):
    """Orientation-preserving isotopy ``g1 -> g2`` as vertex and edge maps, or ``None``."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    comps1, comps2 = g1.components(), g2.components()
    if len(comps1) != len(comps2):
        return None
    options = [
        [(j, m) for j, c2 in enumerate(comps2) for m in _component_maps(g1, c1, g2, c2)]
        for c1 in comps1
    ]
    if any(not o for o in options):
        return None
    ci1, ci2 = g1.component_index(), g2.component_index()
    f1, f2 = g1.face_of(), g2.face_of()
    nest1 = {}
    for (child, container), d in g1.nesting.items():
        nest1[(ci1[child], ci1[container])] = d
    nest2 = {}
    for (child, container), d in g2.nesting.items():
        nest2[(ci2[child], ci2[container])] = f2[d]

    chosen = [None] * len(comps1)
    used = set()

    def consistent(i):
        j, m = chosen[i]
        for k in range(i):
            jk, mk = chosen[k]
            for a, b, ja, jb, mb in ((i, k, j, jk, mk), (k, i, jk, j, m)):
                d = nest1.get((a, b))
                if d is None or nest2.get((ja, jb)) != f2[mb[d]]:
                    return False
        return True

    def search(i):
        if i == len(comps1):
            return True
        for j, m in options[i]:
            if j in used:
                continue
            chosen[i] = (j, m)
            used.add(j)
            if consistent(i) and search(i + 1):
                return True
            used.discard(j)
        chosen[i] = None
        return False

    if not search(0):
        return None
    darts = {}
    for _, m in chosen:
        darts.update(m)
    vmap = {g1.dart_vertex(a): g2.dart_vertex(b) for a, b in darts.items()}
    emap = {a[0]: b[0] for a, b in darts.items()}
    return Isotopy(vmap, emap)


# -- transformations ----------------------------------------------------------

def mirror(g: LmfGraph) -> LmfGraph:
    """The reflected embedding: rotations reversed, nesting faces taken across their edges."""
    rot = {v: tuple(reversed(r)) for v, r in g.rotation.items()}
    nest = {k: twin(d) for k, d in g.nesting.items()}
    return LmfGraph(dict(g.vertices), dict(g.edges), rot, nest)


def relabel(g: LmfGraph, rng: random.Random | None = None) -> LmfGraph:
    """Copy with shuffled vertex/edge ids and each rotation list cyclically shifted."""
    rng = rng or random.Random(0)
    vids = list(g.vertices)
    eids = list(g.edges)
    vnew = [f"v{i}" for i in range(len(vids))]
    enew = [f"e{i}" for i in range(len(eids))]
    rng.shuffle(vnew)
    rng.shuffle(enew)
    vm, em = dict(zip(vids, vnew)), dict(zip(eids, enew))
    vertices = {vm[v]: lab for v, lab in g.vertices.items()}
    edges = {em[e]: (vm[s], vm[t], lab) for e, (s, t, lab) in g.edges.items()}
    rotation = {}
    for v, rot in g.rotation.items():
        k = rng.randrange(len(rot)) if rot else 0
        rot = rot[k:] + rot[:k]
        rotation[vm[v]] = tuple((em[e], end) for e, end in rot)
    nesting = {(vm[a], vm[b]): (em[d[0]], d[1]) for (a, b), d in g.nesting.items()}
    return LmfGraph(vertices, edges, rotation, nesting)


# -- text format --------------------------------------------------------------

def _dart_str(d):
    return f"{d[0]}{'+' if d[1] == TAIL else '-'}"


def _parse_dart(tok):
    if len(tok) < 2 or tok[-1] not in "+-":
        raise DomainError(f"malformed dart {tok!r}")
    return tok[:-1], TAIL if tok[-1] == "+" else HEAD


def _canonical_rotation(rot):
    if not rot:
        return rot
    k = rot.index(min(rot))
    return rot[k:] + rot[:k]


def _canonical_nesting(g):
    """One entry per ordered component pair: least child vertex, least container dart of the face."""
    comps = g.components()
    ci = g.component_index()
    faces = g.faces()
    fo = {d: f for f in faces for d in f}
    out = {}
    for (child, container), d in g.nesting.items():
        key = (min(comps[ci[child]]), min(comps[ci[container]]))
        out[key] = min(fo[d])
    return out


def dumps(g: LmfGraph) -> str:
    """Deterministic text form: ``V``, ``E``, ``R`` and ``N`` lines sorted by id."""
    lines = [f"V {v} {g.vertices[v]}" for v in sorted(g.vertices)]
    lines += [f"E {e} {s} {t} {lab}" for e, (s, t, lab) in sorted(g.edges.items())]
    for v in sorted(g.rotation):
        rot = _canonical_rotation(tuple(g.rotation[v]))
        lines.append(" ".join(["R", v, *map(_dart_str, rot)]))
    for (child, container), d in sorted(_canonical_nesting(g).items()):
        lines.append(f"N {child} {_dart_str(d)}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> LmfGraph:
    vertices, edges, rotation, nest_lines = {}, {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        kind, rest = parts[0], parts[1:]
        if kind == "V" and len(rest) == 2:
            vertices[rest[0]] = rest[1]
        elif kind == "E" and len(rest) == 4:
            edges[rest[0]] = (rest[1], rest[2], rest[3])
        elif kind == "R" and rest:
            rotation[rest[0]] = tuple(_parse_dart(t) for t in rest[1:])
        elif kind == "N" and len(rest) == 2:
            nest_lines.append((rest[0], _parse_dart(rest[1])))
        else:
            raise DomainError(f"line {lineno}: cannot parse {raw!r}")
    for v in vertices:
        rotation.setdefault(v, ())
    g = LmfGraph(vertices, edges, rotation, {})
    nesting = {}
    for child, d in nest_lines:
        if d[0] not in edges:
            raise DomainError(f"nesting dart {d} names an unknown edge")
        nesting[(child, g.dart_vertex(d))] = d
    return LmfGraph(vertices, edges, rotation, nesting)


# -- regime templates and surgery ---------------------------------------------

class Regime(str, Enum):
    NegEps = "NegEps"
    PosEpsGeneric = "PosEpsGeneric"
    PosEpsLE = "PosEpsLE"
    PosEpsLI = "PosEpsLI"
    PosEpsEI = "PosEpsEI"


REGIMES = tuple(Regime)
CONNECTION_REGIME = {"LE": Regime.PosEpsLE, "LI": Regime.PosEpsLI, "EI": Regime.PosEpsEI}
HEART_EDGES = ("hLM", "hML")

# connection tag -> (removed separatrices, (new SC edge, source saddle, target saddle))
_SURGERIES = {
    "LE": (("uEw", "sL"), ("cEL", "E", "L")),
    "LI": (("uL", "sIw"), ("cLI", "L", "I")),
    "EI": (("uEw", "sIw"), ("cEI", "E", "I")),
}


def template(regime) -> LmfGraph:
    """A fresh copy of the frozen graph of one regime of the standard family."""
    try:
        data = TEMPLATE_DATA[Regime(regime).value]
    except ValueError:
        raise DomainError(f"unknown regime {regime!r}") from None
    return LmfGraph(
        dict(data["vertices"]),
        dict(data["edges"]),
        {v: tuple(r) for v, r in data["rotation"].items()},
        dict(data["nesting"]),
    )


def sc_edges(g: LmfGraph) -> list:
    return sorted(e for e, (_, _, lab) in g.edges.items() if lab == SC)


def sparkling_sc_count(g: LmfGraph) -> int:
    """Saddle connections other than the two heart connections that persist in every regime.

    A heart connection is an SC edge that is one half of a 2-cycle of SC
    edges; any other SC edge is a sparkling connection.
    """
    sc = {e: g.edges[e][:2] for e in sc_edges(g)}
    heart = {e for e, (s, t) in sc.items() if any((t, s) == st for st in sc.values())}
    return len(sc) - len(heart)


def surgery(g: LmfGraph, connection: str) -> LmfGraph:
    """Replace the two separatrices that merge at a connection by one SC edge.

    ``g`` must be isotopic to the generic template; it may carry any ids.
    The new edge takes over the rotation slots of the removed unstable
    separatrix (at the source saddle) and stable separatrix (at the target).
    """
    if connection not in _SURGERIES:
        raise DomainError(f"connection must be one of {sorted(_SURGERIES)}, got {connection!r}")
    iso = isotopic(template(Regime.PosEpsGeneric), g)
    if iso is None:
        extra = sparkling_sc_count(g)
        why = f"it already carries {extra} sparkling connection(s)" if extra else "it is not the generic graph"
        raise DomainError(f"surgery needs the generic regime graph; {why}")
    (out_name, in_name), (new_name, src_name, dst_name) = _SURGERIES[connection]
    out_e, in_e = iso.edge_map[out_name], iso.edge_map[in_name]
    src, dst = iso.vertex_map[src_name], iso.vertex_map[dst_name]
    sc = new_name
    while sc in g.edges:
        sc += "'"
    rotation = {}
    for v, rot in g.rotation.items():
        new = []
        for d in rot:
            if d == (out_e, TAIL):
                new.append((sc, TAIL))
            elif d == (in_e, HEAD):
                new.append((sc, HEAD))
            elif d[0] not in (out_e, in_e):
                new.append(d)
        rotation[v] = tuple(new)
    edges = {e: x for e, x in g.edges.items() if e not in (out_e, in_e)}
    edges[sc] = (src, dst, SC)
    # the generic graph is connected, so there is no nesting to carry over
    return LmfGraph(dict(g.vertices), edges, rotation, {})


# -- end-to-end classification ------------------------------------------------

@dataclass(frozen=True)
class WeaklyEquivalent:
    """Both families realise the same regime graphs in the same order.

    ``h`` matches the LE/LI events of the first family to those of the
    second, ``certificates`` holds one template isotopy per regime and
    ``drops`` the positional drops of the word comparison.
    """
    h: object
    certificates: dict
    drops: tuple
    lemma1: object = field(repr=False, compare=False, default=None)
    lemma3: object = field(repr=False, compare=False, default=None)
    not_diophantine: bool = False

    @property
    def shift(self):
        """Net lattice shift ``(p, q)`` read off the drops (see :func:`lemma1_experiment`)."""
        return None if self.lemma1 is None else self.lemma1.observed_shift


@dataclass(frozen=True)
class Distinct:
    """The families are not weakly equivalent; ``reason`` is ``A``, ``tau`` or ``word``."""
    reason: str
    witness: object
    lemma1: object = field(repr=False, compare=False, default=None)
    not_diophantine: bool = False


ClassificationVerdict = WeaklyEquivalent | Distinct


def _diophantine_flag(fams, n_max, prec):
    for fam in fams:
        report = diophantine_check(fam, n_max, prec=prec)
        if isinstance(report.verdict, ViolationsFound):
            return True
    return False


def classify_pair(params1, params2, depth: int = 30, bounds=(DEFAULT_LATTICE_BOUND, DEFAULT_LATTICE_BOUND),
                  *, max_drop: int = DEFAULT_MAX_DROP, n_max: int = 200, tol=None,
                  prec: int | None = None, word_evidence: bool = True) -> ClassificationVerdict:
    """Decide weak equivalence of two standard families as far as ``depth`` events allow.

    Invariants first: a mismatch of ``A`` or of ``tau`` modulo the lattice
    ``(1, A)`` (bounded by ``bounds``) is final.  Otherwise both families are
    scanned; their LE/LI words must match with the lattice shift, every gap
    interval must carry one EI, and the event-matching base homeomorphism is
    built.  With ``word_evidence`` a ``tau`` mismatch also carries the
    word comparison of the two scans.  The regime graphs themselves depend only on the regime, so the
    per-regime certificates are the template isotopies.
    """
    fam1, fam2 = as_family(params1, prec), as_family(params2, prec)
    inv1, inv2 = derive(fam1), derive(fam2)
    tol = 1e-9 * inv1.gamma if tol is None else tol
    flag = _diophantine_flag((fam1, fam2), n_max, fam1.prec)
    if abs(inv1.A - inv2.A) > tol:
        return Distinct("A", {"A": (inv1.A, inv2.A)}, not_diophantine=flag)
    p_bound, q_bound = bounds
    witness = equiv_mod_lattice(inv1.tau_model, inv2.tau_model, inv1.A, p_bound, q_bound, tol)
    report = None
    if witness is not None or word_evidence:
        report = lemma1_experiment(fam1, fam2, depth, max_drop=max_drop, p_bound=p_bound,
                                   q_bound=q_bound, tol=tol)
    if witness is None:
        evidence = {"tau": (inv1.tau_model, inv2.tau_model), "A": inv1.A}
        if report is not None:
            evidence["words"] = report.verdict
        return Distinct("tau", evidence, lemma1=report, not_diophantine=flag)
    if not report.ok:
        return Distinct("word", report.verdict, lemma1=report, not_diophantine=flag)
    ms1, ms2 = report.sequences
    h = build_base_homeo(ms1, ms2, (report.verdict.d1, report.verdict.d2))
    ext = lemma3_extension(ms1, ms2, h)
    if not ext.ok:
        evidence = ext.bad_intervals if isinstance(ext.verdict, Equivalent) else ext.verdict
        return Distinct("word", evidence, lemma1=report, not_diophantine=flag)
    certificates = {}
    for regime in REGIMES:
        iso = isotopic(template(regime), template(regime))
        if iso is None:
            raise ConsistencyError(f"template {regime.value} is not isotopic to itself")
        certificates[regime.value] = iso
    return WeaklyEquivalent(h, certificates, (report.verdict.d1, report.verdict.d2),
                            report, ext, flag)
