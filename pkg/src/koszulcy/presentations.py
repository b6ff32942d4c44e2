"""Quadratic algebras, coalgebras with co-Frobenius pairings, and quivers.

Documents are TOML. A word over a base ring of vertices is composable
when the head of each letter is the tail of the next one; ordinary
algebras use a single vertex "*".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Echelon, rank

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


class PresentationError(ValueError):
    """Malformed document or failed axiom."""


class UnsupportedInput(PresentationError):
    pass


@dataclass(frozen=True)
class GradedSymbol:
    id: str
    degree: int
    weight: int
    tail: str = "*"
    head: str = "*"


def composable(symbols, word) -> bool:
    return all(symbols[x].head == symbols[y].tail for x, y in zip(word, word[1:]))


@dataclass
class QuadraticPresentation:
    generators: list
    relations: list  # each {(x, y): Fraction}
    vertices: list = field(default_factory=lambda: ["*"])

    def __post_init__(self):
        self.symbols = {g.id: g for g in self.generators}

    def validate(self):
        if len(self.symbols) != len(self.generators):
            raise PresentationError("generator ids are not unique")
        for g in self.generators:
            if g.tail not in self.vertices or g.head not in self.vertices:
                raise PresentationError(f"generator {g.id} has an unknown endpoint")
        for i, rel in enumerate(self.relations):
            if not any(rel.values()):
                raise PresentationError(f"relation {i} is zero")
            for (x, y) in rel:
                if x not in self.symbols or y not in self.symbols:
                    raise PresentationError(f"relation {i} uses an unknown generator")
                if not composable(self.symbols, (x, y)):
                    raise PresentationError(f"relation {i} term {x}{y} does not compose")
        if rank(self.relations) != len(self.relations):
            raise PresentationError("relations are linearly dependent")
        return self


@dataclass
class CoalgebraPresentation:
    basis: list
    coproduct: dict  # id -> {(x, y): Fraction}
    counit: dict  # id -> Fraction
    pairing: dict | None = None  # (x, y) -> Fraction
    pairing_degree: int | None = None
    name: str = ""

    def __post_init__(self):
        self.symbols = {b.id: b for b in self.basis}
        self.order = {b.id: i for i, b in enumerate(self.basis)}
        self._reduced = {}

    def degree(self, x) -> int:
        return self.symbols[x].degree

    def weight(self, x) -> int:
        return self.symbols[x].weight

    @property
    def units(self):
        """Coaugmentation idempotents: the weight-zero basis elements."""
        return [b.id for b in self.basis if b.weight == 0]

    @property
    def reduced_basis(self):
        return [b.id for b in self.basis if b.weight > 0]

    def pair(self, x, y) -> Fraction:
        if not self.pairing:
            return Fraction(0)
        return self.pairing.get((x, y), Fraction(0))

    def reduced_coproduct(self, x) -> dict:
        """Coproduct with every term having a weight-zero factor removed."""
        if x not in self._reduced:
            if self.weight(x) == 0:
                out = {}
            else:
                out = {k: c for k, c in self.coproduct.get(x, {}).items()
                       if self.weight(k[0]) > 0 and self.weight(k[1]) > 0}
            self._reduced[x] = out
        return self._reduced[x]

    def apply_left(self, vec: dict) -> dict:
        """(Delta x id) on {word: coeff}, acting on the first letter."""
        out = {}
        for word, c in vec.items():
            for (a, b), d in self.coproduct.get(word[0], {}).items():
                key = (a, b) + word[1:]
                out[key] = out.get(key, 0) + c * d
        return {k: v for k, v in out.items() if v}

    def validate(self):
        ids = [b.id for b in self.basis]
        if len(set(ids)) != len(ids):
            raise PresentationError("basis ids are not unique")
        for x in ids:
            for (a, b) in self.coproduct.get(x, {}):
                if a not in self.symbols or b not in self.symbols:
                    raise PresentationError(f"coproduct of {x} uses an unknown element")
                if self.degree(a) + self.degree(b) != self.degree(x):
                    raise PresentationError(f"coproduct of {x} is not homogeneous in degree")
                if self.weight(a) + self.weight(b) != self.weight(x):
                    raise PresentationError(f"coproduct of {x} is not homogeneous in weight")
        for x in ids:
            delta = {k: c for k, c in self.coproduct.get(x, {}).items() if c}
            left, right = {}, {}
            for (a, b), c in delta.items():
                for (p, q), d in self.coproduct.get(a, {}).items():
                    key = (p, q, b)
                    left[key] = left.get(key, 0) + c * d
                for (p, q), d in self.coproduct.get(b, {}).items():
                    key = (a, p, q)
                    right[key] = right.get(key, 0) + c * d
            left = {k: v for k, v in left.items() if v}
            right = {k: v for k, v in right.items() if v}
            if left != right:
                raise PresentationError(f"coassociativity fails on basis element {x}")
            lc, rc = {}, {}
            for (a, b), c in delta.items():
                ea, eb = self.counit.get(a, 0), self.counit.get(b, 0)
                if ea:
                    lc[b] = lc.get(b, 0) + c * ea
                if eb:
                    rc[a] = rc.get(a, 0) + c * eb
            target = {x: 1}
            if {k: v for k, v in lc.items() if v} != target or \
                    {k: v for k, v in rc.items() if v} != target:
                raise PresentationError(f"counit axiom fails on basis element {x}")
        for x in ids:
            # iterated reduced coproduct must die once it would split into
            # more pieces than the weight allows
            vec = {(x,): Fraction(1)}
            for _ in range(max(self.weight(x), 1)):
                nxt = {}
                for word, c in vec.items():
                    for (a, b), d in self.reduced_coproduct(word[0]).items():
                        key = (a, b) + word[1:]
                        nxt[key] = nxt.get(key, 0) + c * d
                vec = {k: v for k, v in nxt.items() if v}
            if vec:
                raise PresentationError(f"conilpotence fails on basis element {x}")
        if self.pairing:
            n = self.pairing_degree
            if n is None:
                raise PresentationError("pairing given without a degree")
            for (x, y), c in self.pairing.items():
                if x not in self.symbols or y not in self.symbols:
                    raise PresentationError(f"pairing uses unknown element {x} or {y}")
                if c and self.degree(x) + self.degree(y) != n:
                    raise PresentationError(f"pairing <{x},{y}> is not of degree {n}")
                sign = -1 if (self.degree(x) * self.degree(y)) % 2 else 1
                if self.pair(y, x) != sign * c:
                    raise PresentationError(f"pairing is not graded symmetric on <{x},{y}>")
        return self


@dataclass
class QuiverSpec:
    vertices: list
    arrows: list  # (id, tail, head)

    def validate(self):
        ids = [a[0] for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise PresentationError("arrow ids are not unique")
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("vertex ids are not unique")
        for a, t, h in self.arrows:
            if t not in self.vertices or h not in self.vertices:
                raise PresentationError(f"arrow {a} has an unknown endpoint")
        return self


# --- documents -------------------------------------------------------------

def _rational(value, where) -> Fraction:
    try:
        if isinstance(value, float):
            raise ValueError
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise PresentationError(f"bad rational {value!r} in {where}") from None


def _pairs(table, where) -> dict:
    if not isinstance(table, dict):
        raise PresentationError(f"{where} must be a table of \"x|y\" = \"p/q\" entries")
    out = {}
    for key, val in table.items():
        parts = key.split("|")
        if len(parts) != 2:
            raise PresentationError(f"bad pair key {key!r} in {where}")
        out[(parts[0].strip(), parts[1].strip())] = _rational(val, where)
    return out


def _symbols(doc) -> list:
    gens = doc.get("generators")
    if not isinstance(gens, dict):
        raise PresentationError("missing [generators] section")
    out = []
    for gid, spec in gens.items():
        if not isinstance(spec, dict) or "degree" not in spec or "weight" not in spec:
            raise PresentationError(f"generator {gid} needs integer degree and weight")
        deg, wt = spec["degree"], spec["weight"]
        if not isinstance(deg, int) or not isinstance(wt, int) or wt < 0:
            raise PresentationError(f"generator {gid} has a bad degree or weight")
        out.append(GradedSymbol(gid, deg, wt, str(spec.get("tail", "*")), str(spec.get("head", "*"))))
    return out


def load_presentation(text: str):
    """Parse and validate a presentation document.

    Returns a QuadraticPresentation, a CoalgebraPresentation or, for
    kind = "quiver", a QuiverSpec.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise PresentationError(f"parse error: {exc}") from None
    head = doc.get("presentation", {})
    kind = head.get("kind")
    if kind is None:
        kind = "quiver" if "quiver" in doc else ("coalgebra" if "coproduct" in doc else "algebra")
    if kind == "quiver":
        q = doc.get("quiver")
        if not isinstance(q, dict):
            raise PresentationError("missing [quiver] section")
        verts = [str(v) for v in q.get("vertices", [])]
        arrows = []
        for a in q.get("arrows", []):
            if not isinstance(a, list) or len(a) != 3:
                raise PresentationError(f"arrow {a!r} must be [id, tail, head]")
            arrows.append(tuple(str(x) for x in a))
        return QuiverSpec(verts, arrows).validate()
    if kind == "algebra":
        gens = _symbols(doc)
        rels = [_pairs(r, f"relation {name}") for name, r in doc.get("relations", {}).items()]
        verts = doc.get("vertices", {}).get("ids", None)
        if verts is None:
            verts = sorted({g.tail for g in gens} | {g.head for g in gens}) or ["*"]
        return QuadraticPresentation(gens, rels, [str(v) for v in verts]).validate()
    if kind == "coalgebra":
        basis = _symbols(doc)
        cop = {x: _pairs(t, f"coproduct of {x}") for x, t in doc.get("coproduct", {}).items()}
        counit = {x: _rational(v, "counit") for x, v in doc.get("counit", {}).items()}
        pairing, pdeg = None, None
        if "pairing" in doc:
            p = doc["pairing"]
            pdeg = p.get("degree")
            if not isinstance(pdeg, int):
                raise PresentationError("pairing needs an integer degree")
            pairing = _pairs(p.get("entries", {}), "pairing")
        return CoalgebraPresentation(basis, cop, counit, pairing, pdeg, head.get("name", "")).validate()
    raise PresentationError(f"unknown presentation kind {kind!r}")


def read_presentation(path):
    with open(path, encoding="utf-8") as fh:
        return load_presentation(fh.read())


def cy_dimension_of(text: str, default=2) -> int:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError:
        return default
    return int(doc.get("presentation", {}).get("cy_dimension", default))


# --- quivers ---------------------------------------------------------------

def _components(q: QuiverSpec):
    parent = {v: v for v in q.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for _, t, h in q.arrows:
        parent[find(t)] = find(h)
    comps = {}
    for v in q.vertices:
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _is_ade(verts, arrows) -> bool:
    if len(arrows) != len(verts) - 1:
        return False
    adj = {v: [] for v in verts}
    for _, t, h in arrows:
        if t == h:
            return False
        adj[t].append(h)
        adj[h].append(t)
    if any(len(set(n)) != len(n) for n in adj.values()):
        return False
    # connected with |E| = |V| - 1, so a tree
    branch = [v for v in verts if len(adj[v]) >= 3]
    if not branch:
        return True
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        return False
    c = branch[0]
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length + 1)
    p, r, s = sorted(arms)
    return Fraction(1, p) + Fraction(1, r) + Fraction(1, s) > 1


def is_dynkin(q: QuiverSpec) -> bool:
    """True if some connected component is a simply laced Dynkin diagram."""
    for comp in _components(q):
        cs = set(comp)
        arrows = [a for a in q.arrows if a[1] in cs]
        if _is_ade(comp, arrows):
            return True
    return False


def double_quiver(q: QuiverSpec):
    """Arrows of the double quiver as (id, tail, head, sign, dual id)."""
    out = []
    for a, t, h in q.arrows:
        out.append((a, t, h, 1, a + "*"))
    for a, t, h in q.arrows:
        out.append((a + "*", h, t, -1, a))
    return out


def vertex_names(q: QuiverSpec):
    if len(q.vertices) == 1:
        return {q.vertices[0]: ("e", "o")}
    return {v: (f"e{v}", f"o{v}") for v in q.vertices}


def preprojective_from_quiver(q: QuiverSpec):
    """Preprojective presentation and its Koszul dual coalgebra."""
    q.validate()
    if is_dynkin(q):
        raise UnsupportedInput("Dynkin quivers are not supported (the preprojective algebra is not Koszul)")
    doubled = double_quiver(q)
    gens = [GradedSymbol(a, 0, 1, t, h) for a, t, h, _, _ in doubled]
    rels = []
    for v in q.vertices:
        rel = {(a, dual): Fraction(s) for a, t, h, s, dual in doubled if t == v}
        if rel:
            rels.append(rel)
    alg = QuadraticPresentation(gens, rels, list(q.vertices)).validate()

    names = vertex_names(q)
    basis = [GradedSymbol(names[v][0], 0, 0, v, v) for v in q.vertices]
    basis += [GradedSymbol(a, 1, 1, t, h) for a, t, h, _, _ in doubled]
    basis += [GradedSymbol(names[v][1], 2, 2, v, v) for v in q.vertices]
    cop, counit, pairing = {}, {}, {}
    for v in q.vertices:
        e, o = names[v]
        cop[e] = {(e, e): Fraction(1)}
        counit[e] = Fraction(1)
        d = {(o, e): Fraction(1), (e, o): Fraction(1)}
        for a, t, h, s, dual in doubled:
            if t == v:
                d[(a, dual)] = Fraction(s)
        cop[o] = d
        pairing[(e, o)] = Fraction(1)
        pairing[(o, e)] = Fraction(1)
    for a, t, h, s, dual in doubled:
        cop[a] = {(names[t][0], a): Fraction(1), (a, names[h][0]): Fraction(1)}
        pairing[(a, dual)] = Fraction(s)
    coalg = CoalgebraPresentation(basis, cop, counit, pairing, 2).validate()
    return alg, coalg


# --- the induced product ----------------------------------------------------

def _solve_dual(coalg: CoalgebraPresentation):
    """Matrix inverse of the pairing, per degree block: z -> the element w
    with <w, u> = delta(u, z)."""
    ids = [b.id for b in coalg.basis]
    inverse = {}
    n = coalg.pairing_degree
    by_degree = {}
    for x in ids:
        by_degree.setdefault(coalg.degree(x), []).append(x)
    for d, xs in by_degree.items():
        partners = by_degree.get(n - d, [])
        if len(partners) != len(xs):
            raise PresentationError(f"pairing is degenerate between degrees {d} and {n - d}")
        # rows: w in xs, columns: u in partners; solve W P = I
        mat = [[coalg.pair(w, u) for u in partners] for w in xs]
        m = len(xs)
        aug = [row[:] + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(
            [[mat[w][u] for w in range(m)] for u in range(m)])]
        # solve P^T X = I, X columns give coefficients
        for col in range(m):
            piv = next((r for r in range(col, m) if aug[r][col]), None)
            if piv is None:
                raise PresentationError(f"pairing is degenerate between degrees {d} and {n - d}")
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(m):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        for j, z in enumerate(partners):
            inverse[z] = {xs[i]: aug[i][m + j] for i in range(m) if aug[i][m + j]}
    return inverse


def induced_product(coalg: CoalgebraPresentation, check=True):
    """Product dual to the coalgebra structure under the pairing.

    <x . y, z> = (-1)^{|x||y|} sum <y, z'> <x, z''>. The product has
    degree -n and its unit is the element dual to the counit (the sum of
    the top classes, o for the Jordan quiver). This is the sign choice for
    which associativity, invariance <xy, z> = <x, yz> and the Frobenius
    compatibility all hold.
    """
    if not coalg.pairing:
        raise PresentationError("coalgebra has no pairing")
    inverse = _solve_dual(coalg)
    ids = [b.id for b in coalg.basis]
    table = {}
    for x in ids:
        for y in ids:
            out = {}
            for z in ids:
                val = Fraction(0)
                for (z1, z2), c in coalg.coproduct.get(z, {}).items():
                    p1 = coalg.pair(y, z1)
                    if not p1:
                        continue
                    p2 = coalg.pair(x, z2)
                    if p2:
                        sign = -1 if (coalg.degree(x) * coalg.degree(y)) % 2 else 1
                        val += sign * c * p1 * p2
                if val:
                    for w, k in inverse[z].items():
                        out[w] = out.get(w, 0) + val * k
            out = {k: v for k, v in out.items() if v}
            if out:
                table[(x, y)] = out
    if check:
        failure = product_compatibility_failure(coalg, table)
        if failure:
            raise PresentationError(f"Frobenius compatibility fails on the pair {failure}")
    return table


def _mult(table, x, y):
    return table.get((x, y), {})


def product_compatibility_failure(coalg, table):
    """First pair (x, y) violating Delta(xy) = x Delta(y) = Delta(x) y.

    Tensor actions carry Koszul signs: x (y' ⊗ y'') = (-1)^{|x||y''|}
    (x y') ⊗ y'' and (x' ⊗ x'') y = (-1)^{|x'||y|} x' ⊗ (x'' y).
    """
    deg = coalg.degree
    ids = [b.id for b in coalg.basis]
    for x in ids:
        for y in ids:
            lhs = {}
            for w, c in _mult(table, x, y).items():
                for k, d in coalg.coproduct.get(w, {}).items():
                    lhs[k] = lhs.get(k, 0) + c * d
            mid = {}
            for (y1, y2), c in coalg.coproduct.get(y, {}).items():
                sign = -1 if (deg(x) * deg(y2)) % 2 else 1
                for w, d in _mult(table, x, y1).items():
                    mid[(w, y2)] = mid.get((w, y2), 0) + sign * c * d
            right = {}
            for (x1, x2), c in coalg.coproduct.get(x, {}).items():
                sign = -1 if (deg(x1) * deg(y)) % 2 else 1
                for w, d in _mult(table, x2, y).items():
                    right[(x1, w)] = right.get((x1, w), 0) + sign * c * d
            clean = [{k: v for k, v in m.items() if v} for m in (lhs, mid, right)]
            if not (clean[0] == clean[1] == clean[2]):
                return (x, y)
    return None
