"""Tableau-based satisfiability for the supported ontology fragment.

The fragment is ALC plus unqualified number restrictions, general inclusion
axioms and single-valued data properties with literal values.  There are no
inverse roles and no nominals, which keeps a few things simple: completion
graphs are trees, node labels are final before successors are generated, and
subset blocking against ancestors guarantees termination.

General axioms are internalized: every axiom becomes a disjunction that must
hold at every node.  Domain and range axioms are applied lazily when edges
appear instead, which avoids useless universal branching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import owl
from .model import DataType
from .owl import (Complement, DataExactCard, DataHasValue, ExactCard,
                  Intersection, MaxCard, MinCard, Named, Some, Union,
                  UnsupportedAxiomError, canon_value)

MAX_NODES = 5000
MAX_STEPS = 500000


class ReasonerLimitError(Exception):
    """Search exceeded the safety limits; treated as an internal failure."""


# --- normal form -------------------------------------------------------------


@dataclass(frozen=True)
class _Top:
    pass


@dataclass(frozen=True)
class _Bot:
    pass


@dataclass(frozen=True)
class _All:
    """Universal restriction, only ever produced by negating Some."""

    prop: str
    filler: "owl.ClassExpr | _Top | _Bot | _All | _NoValue"


@dataclass(frozen=True)
class _NoValue:
    """The node carries no value for this data property."""

    prop: str


TOP = _Top()
BOT = _Bot()


def _and(args) -> object:
    flat: list = []
    for a in args:
        if isinstance(a, _Top):
            continue
        if isinstance(a, _Bot):
            return BOT
        if isinstance(a, Intersection):
            flat.extend(x for x in a.args if x not in flat)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return TOP
    if len(flat) == 1:
        return flat[0]
    return Intersection(tuple(flat))


def _or(args) -> object:
    flat: list = []
    for a in args:
        if isinstance(a, _Bot):
            continue
        if isinstance(a, _Top):
            return TOP
        if isinstance(a, Union):
            flat.extend(x for x in a.args if x not in flat)
        elif a not in flat:
            flat.append(a)
    if not flat:
        return BOT
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def nnf(expr, positive: bool = True):
    """Negation normal form with constant folding."""
    if isinstance(expr, _Top):
        return TOP if positive else BOT
    if isinstance(expr, _Bot):
        return BOT if positive else TOP
    if isinstance(expr, Named):
        return expr if positive else Complement(expr)
    if isinstance(expr, Complement):
        return nnf(expr.arg, not positive)
    if isinstance(expr, Intersection):
        parts = [nnf(a, positive) for a in expr.args]
        return _and(parts) if positive else _or(parts)
    if isinstance(expr, Union):
        parts = [nnf(a, positive) for a in expr.args]
        return _or(parts) if positive else _and(parts)
    if isinstance(expr, Some):
        filler = nnf(expr.filler, positive)
        if positive:
            return BOT if isinstance(filler, _Bot) else Some(expr.prop, filler)
        # no successor may satisfy the filler's negation... i.e. all do
        if isinstance(filler, _Bot):
            return MaxCard(0, expr.prop)
        if isinstance(filler, _Top):
            return TOP
        return _All(expr.prop, filler)
    if isinstance(expr, _All):
        filler = nnf(expr.filler, positive)
        if positive:
            if isinstance(filler, _Top):
                return TOP
            if isinstance(filler, _Bot):
                return MaxCard(0, expr.prop)
            return _All(expr.prop, filler)
        if isinstance(filler, _Top):
            return BOT
        return Some(expr.prop, filler)
    if isinstance(expr, MinCard):
        if positive:
            return TOP if expr.n == 0 else expr
        return BOT if expr.n == 0 else MaxCard(expr.n - 1, expr.prop)
    if isinstance(expr, MaxCard):
        if positive:
            return expr
        return MinCard(expr.n + 1, expr.prop)
    if isinstance(expr, ExactCard):
        if positive:
            return _and([nnf(MinCard(expr.n, expr.prop)), MaxCard(expr.n, expr.prop)])
        low = BOT if expr.n == 0 else MaxCard(expr.n - 1, expr.prop)
        return _or([low, MinCard(expr.n + 1, expr.prop)])
    if isinstance(expr, DataHasValue):
        return expr if positive else Complement(expr)
    if isinstance(expr, DataExactCard):
        # data properties are attributes, single-valued everywhere, so the
        # cardinality can only say whether a value exists
        if expr.n == 0:
            return _NoValue(expr.prop) if positive else DataExactCard(1, expr.prop)
        if expr.n == 1:
            return expr if positive else _NoValue(expr.prop)
        return BOT if positive else TOP
    if isinstance(expr, _NoValue):
        return expr if positive else DataExactCard(1, expr.prop)
    raise TypeError(f"not a class expression: {expr!r}")


# --- compiled TBox -----------------------------------------------------------


@dataclass(frozen=True)
class TBox:
    classes: tuple[str, ...]
    object_props: tuple[str, ...]
    data_props: tuple[str, ...]
    axioms_nnf: tuple       # concepts every node must satisfy
    obj_domain: dict
    obj_range: dict
    data_domain: dict
    data_range: dict        # prop -> frozenset[DataType]


def compile_tbox(ontology: owl.Ontology) -> TBox:
    """Compile an ontology for the tableau.

    Inclusion, equivalence and disjointness axioms are internalized into
    per-node constraints; domains and ranges are kept as edge rules.
    """
    classes: list[str] = []
    object_props: list[str] = []
    data_props: list[str] = []
    globals_: list = []
    obj_domain: dict[str, list] = {}
    obj_range: dict[str, list] = {}
    data_domain: dict[str, list] = {}
    data_range: dict[str, set] = {}

    def register(seq: list[str], name: str):
        if name not in seq:
            seq.append(name)

    def inclusion(sub, sup):
        c = _or([nnf(sub, False), nnf(sup, True)])
        if not isinstance(c, _Top):
            globals_.append(c)

    for ax in ontology.axioms:
        if isinstance(ax, owl.Declaration):
            target = {owl.EntityKind.CLASS: classes,
                      owl.EntityKind.OBJECT_PROPERTY: object_props,
                      owl.EntityKind.DATA_PROPERTY: data_props}[ax.entity]
            register(target, ax.name)
        elif isinstance(ax, owl.SubClassOf):
            inclusion(ax.sub, ax.sup)
        elif isinstance(ax, owl.EquivalentClasses):
            ring = ax.args + (ax.args[0],)
            for a, b in zip(ring, ring[1:]):
                inclusion(a, b)
        elif isinstance(ax, owl.DisjointClasses):
            for i, a in enumerate(ax.args):
                for b in ax.args[i + 1:]:
                    c = _or([nnf(a, False), nnf(b, False)])
                    if not isinstance(c, _Top):
                        globals_.append(c)
        elif isinstance(ax, owl.ObjectPropertyDomain):
            obj_domain.setdefault(ax.prop, []).append(nnf(ax.expr))
        elif isinstance(ax, owl.ObjectPropertyRange):
            obj_range.setdefault(ax.prop, []).append(nnf(ax.expr))
        elif isinstance(ax, owl.DataPropertyDomain):
            data_domain.setdefault(ax.prop, []).append(nnf(ax.expr))
        elif isinstance(ax, owl.DataPropertyRange):
            data_range.setdefault(ax.prop, set()).add(ax.datatype)
        else:
            raise UnsupportedAxiomError(f"unsupported axiom {ax!r}")

    for e in ontology.class_exprs():
        for sub in owl.walk(e):
            if isinstance(sub, (Some, MinCard, MaxCard, ExactCard)):
                register(object_props, sub.prop)
            elif isinstance(sub, (DataHasValue, DataExactCard)):
                register(data_props, sub.prop)

    return TBox(tuple(classes), tuple(object_props), tuple(data_props),
                tuple(globals_),
                {k: tuple(v) for k, v in obj_domain.items()},
                {k: tuple(v) for k, v in obj_range.items()},
                {k: tuple(v) for k, v in data_domain.items()},
                {k: frozenset(v) for k, v in data_range.items()})


# --- completion graph --------------------------------------------------------


class _Node:
    __slots__ = ("labels", "queue", "parent", "alive", "blocker", "todo_roles",
                 "succ", "distinct", "pos", "neg", "req", "novalue")

    def __init__(self, parent: int | None):
        self.labels: dict = {}
        self.queue: list = []
        self.parent = parent
        self.alive = True
        self.blocker: int | None = None
        self.todo_roles: list[str] | None = None
        self.succ: dict[str, list[int]] = {}
        self.distinct: dict[str, list[int]] = {}
        self.pos: dict[str, dict] = {}
        self.neg: dict[str, set] = {}
        self.req: set[str] = set()
        self.novalue: set[str] = set()

    def copy(self) -> "_Node":
        n = _Node(self.parent)
        n.labels = dict(self.labels)
        n.queue = list(self.queue)
        n.alive = self.alive
        n.blocker = self.blocker
        n.todo_roles = None if self.todo_roles is None else list(self.todo_roles)
        n.succ = {k: list(v) for k, v in self.succ.items()}
        n.distinct = {k: list(v) for k, v in self.distinct.items()}
        n.pos = {k: dict(v) for k, v in self.pos.items()}
        n.neg = {k: set(v) for k, v in self.neg.items()}
        n.req = set(self.req)
        n.novalue = set(self.novalue)
        return n


@dataclass
class Witness:
    """A finite structure extracted from a completed graph."""

    size: int
    classes: dict[str, frozenset[int]]
    roles: dict[str, frozenset[tuple[int, int]]]
    values: dict[str, dict[int, owl.OwlLiteral]]
    faithful: bool  # false when the graph could not be folded into a structure


@dataclass(frozen=True)
class SatResult:
    sat: bool
    witness: Witness | None = field(default=None, compare=False)


class _Engine:
    def __init__(self, tbox: TBox):
        self.tbox = tbox
        self.nodes: list[_Node] = []
        self.steps = 0

    def clone(self) -> "_Engine":
        other = _Engine(self.tbox)
        other.nodes = [n.copy() for n in self.nodes]
        other.steps = self.steps
        return other

    # -- label management

    def add(self, nid: int, concept) -> bool:
        """Assert a concept at a node; False means the label clashed."""
        node = self.nodes[nid]
        if isinstance(concept, _Top):
            return True
        if isinstance(concept, _Bot):
            return False
        if concept in node.labels:
            return True
        if isinstance(concept, Intersection):
            return all(self.add(nid, a) for a in concept.args)
        node.labels[concept] = None
        if isinstance(concept, Named):
            return Complement(concept) not in node.labels
        if isinstance(concept, Complement):
            inner = concept.arg
            if isinstance(inner, Named):
                return inner not in node.labels
            if isinstance(inner, DataHasValue):
                return self._add_neg_value(nid, inner)
            raise TypeError(f"unexpected complement in label: {concept!r}")
        if isinstance(concept, Union):
            if not any(a in node.labels for a in concept.args):
                node.queue.append(concept)
            return True
        if isinstance(concept, Some):
            if any(isinstance(c, MaxCard) and c.n == 0 and c.prop == concept.prop
                   for c in node.labels):
                return False
            return self._add_domains(nid, self.tbox.obj_domain.get(concept.prop, ()))
        if isinstance(concept, MinCard):
            for c in node.labels:
                if isinstance(c, MaxCard) and c.prop == concept.prop and c.n < concept.n:
                    return False
            return self._add_domains(nid, self.tbox.obj_domain.get(concept.prop, ()))
        if isinstance(concept, MaxCard):
            for c in node.labels:
                if isinstance(c, MinCard) and c.prop == concept.prop and c.n > concept.n:
                    return False
                if isinstance(c, Some) and c.prop == concept.prop and concept.n == 0:
                    return False
            return True
        if isinstance(concept, _All):
            return True
        if isinstance(concept, DataHasValue):
            return self._add_pos_value(nid, concept)
        if isinstance(concept, DataExactCard):
            return self._add_required(nid, concept.prop)
        if isinstance(concept, _NoValue):
            node.novalue.add(concept.prop)
            return not node.pos.get(concept.prop) and concept.prop not in node.req
        raise TypeError(f"cannot assert {concept!r}")

    def _add_domains(self, nid: int, concepts) -> bool:
        return all(self.add(nid, c) for c in concepts)

    def _ranges_of(self, prop: str) -> frozenset:
        return self.tbox.data_range.get(prop, frozenset())

    def _add_pos_value(self, nid: int, concept: DataHasValue) -> bool:
        node = self.nodes[nid]
        prop, value = concept.prop, concept.value
        key = canon_value(value)
        ranges = self._ranges_of(prop)
        if any(dt is not value.datatype for dt in ranges):
            return False
        if key in node.neg.get(prop, ()):
            return False
        if prop in node.novalue:
            return False
        bucket = node.pos.setdefault(prop, {})
        if bucket and key not in bucket:
            return False
        bucket[key] = value
        return self._add_domains(nid, self.tbox.data_domain.get(prop, ()))

    def _add_neg_value(self, nid: int, inner: DataHasValue) -> bool:
        node = self.nodes[nid]
        key = canon_value(inner.value)
        if key in node.pos.get(inner.prop, {}):
            return False
        node.neg.setdefault(inner.prop, set()).add(key)
        return not self._boolean_exhausted(nid, inner.prop)

    def _add_required(self, nid: int, prop: str) -> bool:
        node = self.nodes[nid]
        node.req.add(prop)
        if prop in node.novalue:
            return False
        if len(self._ranges_of(prop)) > 1:
            return False
        if self._boolean_exhausted(nid, prop):
            return False
        return self._add_domains(nid, self.tbox.data_domain.get(prop, ()))

    def _boolean_exhausted(self, nid: int, prop: str) -> bool:
        # a required boolean with both truth values excluded cannot be filled
        node = self.nodes[nid]
        if prop not in node.req or node.pos.get(prop):
            return False
        if self._ranges_of(prop) != frozenset({DataType.BOOLEAN}):
            return False
        excluded = node.neg.get(prop, set())
        return ("boolean", "true") in excluded and ("boolean", "false") in excluded

    # -- search

    def new_node(self, parent: int | None) -> int:
        if len(self.nodes) >= MAX_NODES:
            raise ReasonerLimitError("completion graph grew past the node limit")
        self.nodes.append(_Node(parent))
        return len(self.nodes) - 1

    def solve(self):
        while True:
            step = self._step()
            if step[0] == "clash":
                return None
            if step[0] == "done":
                return self
            if step[0] == "or":
                _, nid, alts = step
                for alt in alts:
                    branch = self.clone()
                    if branch.add(nid, alt) and (found := branch.solve()) is not None:
                        return found
                return None
            _, nid, role, pairs = step
            for keep, drop in pairs:
                branch = self.clone()
                if branch._merge(nid, role, keep, drop) and (found := branch.solve()) is not None:
                    return found
            return None

    def _step(self):
        while True:
            self.steps += 1
            if self.steps > MAX_STEPS:
                raise ReasonerLimitError("search exceeded the step limit")
            for nid, node in enumerate(self.nodes):
                if not node.alive:
                    continue
                if node.queue:
                    union = node.queue.pop(0)
                    if any(a in node.labels for a in union.args):
                        break
                    return ("or", nid, list(union.args))
                if node.todo_roles is None or node.todo_roles:
                    result = self._generate(nid)
                    if result is not None:
                        return result
                    break
            else:
                return ("done",)

    def _generate(self, nid: int):
        """One micro-step of successor construction; None means progress."""
        node = self.nodes[nid]
        if node.todo_roles is None:
            blocker = self._blocked_by(nid)
            if blocker is not None:
                node.blocker = blocker
                node.todo_roles = []
                return None
            wanted: list[str] = []
            for c in node.labels:
                if isinstance(c, (Some, MinCard)) and c.prop not in wanted:
                    wanted.append(c.prop)
            node.todo_roles = wanted
            return None
        role = node.todo_roles[0]
        if role not in node.succ:
            return self._create_successors(nid, role)
        cap = self._cap(node, role)
        live = [s for s in node.succ[role] if self.nodes[s].alive]
        if cap is not None and len(live) > cap:
            group = set(node.distinct.get(role, ()))
            pairs = []
            for i, a in enumerate(live):
                for b in live[i + 1:]:
                    if a in group and b in group:
                        continue
                    pairs.append((a, b))
            if not pairs:
                return ("clash",)
            # newest pair first; survivors keep any distinctness marking
            pairs.sort(key=lambda p: (max(p), min(p)), reverse=True)
            ordered = [self._orient(role, node, a, b) for a, b in pairs]
            if len(ordered) == 1:
                keep, drop = ordered[0]
                return None if self._merge(nid, role, keep, drop) else ("clash",)
            return ("merge", nid, role, ordered)
        return self._finalize_role(nid, role)

    def _orient(self, role: str, node: _Node, a: int, b: int) -> tuple[int, int]:
        group = set(node.distinct.get(role, ()))
        if b in group:
            return (b, a)
        if a in group:
            return (a, b)
        return (min(a, b), max(a, b))

    def _cap(self, node: _Node, role: str):
        caps = [c.n for c in node.labels if isinstance(c, MaxCard) and c.prop == role]
        return min(caps) if caps else None

    def _create_successors(self, nid: int, role: str):
        node = self.nodes[nid]
        fillers = []
        need = 0
        for c in node.labels:
            if isinstance(c, Some) and c.prop == role and c.filler not in fillers:
                fillers.append(c.filler)
            elif isinstance(c, MinCard) and c.prop == role:
                need = max(need, c.n)
        created: list[int] = []
        for f in fillers:
            child = self.new_node(nid)
            created.append(child)
            if not self.add(child, f):
                return ("clash",)
        group: list[int] = []
        for _ in range(need):
            child = self.new_node(nid)
            created.append(child)
            group.append(child)
        node.succ[role] = created
        if group:
            node.distinct[role] = group
        return None

    def _finalize_role(self, nid: int, role: str):
        node = self.nodes[nid]
        props = [c.filler for c in node.labels
                 if isinstance(c, _All) and c.prop == role]
        props.extend(self.tbox.obj_range.get(role, ()))
        for s in node.succ[role]:
            child = self.nodes[s]
            if not child.alive:
                continue
            for c in props:
                if not self.add(s, c):
                    return ("clash",)
            for c in self.tbox.axioms_nnf:
                if not self.add(s, c):
                    return ("clash",)
        node.todo_roles.pop(0)
        return None

    def _merge(self, nid: int, role: str, keep: int, drop: int) -> bool:
        # successors are merged before they are expanded, so the victim's
        # whole state is reachable from its label set
        node = self.nodes[nid]
        victim = self.nodes[drop]
        victim.alive = False
        node.succ[role] = [s for s in node.succ[role] if s != drop]
        return all(self.add(keep, c) for c in victim.labels)

    def _blocked_by(self, nid: int):
        mine = frozenset(self.nodes[nid].labels)
        anc = self.nodes[nid].parent
        while anc is not None:
            if mine <= frozenset(self.nodes[anc].labels):
                return anc
            anc = self.nodes[anc].parent
        return None

    # -- witness extraction

    def extract_witness(self) -> Witness:
        ids = [i for i, n in enumerate(self.nodes) if n.alive]
        index = {node_id: k for k, node_id in enumerate(ids)}
        classes: dict[str, set[int]] = {}
        roles: dict[str, set[tuple[int, int]]] = {}
        values: dict[str, dict[int, owl.OwlLiteral]] = {}
        faithful = True
        for node_id in ids:
            node = self.nodes[node_id]
            k = index[node_id]
            for c in node.labels:
                if isinstance(c, Named):
                    classes.setdefault(c.name, set()).add(k)
            # a blocked node never expanded its own successors; it borrows its
            # blocker's, legal because its label is a subset of the blocker's
            src = self.nodes[node.blocker] if node.blocker is not None else node
            for role, succs in src.succ.items():
                for s in succs:
                    if self.nodes[s].alive:
                        roles.setdefault(role, set()).add((k, index[s]))
            for prop in sorted(set(node.pos) | node.req):
                bucket = node.pos.get(prop, {})
                if bucket:
                    values.setdefault(prop, {})[k] = next(iter(bucket.values()))
                elif prop in node.req:
                    lit = self._pick_value(node, prop)
                    if lit is None:
                        faithful = False
                    else:
                        values.setdefault(prop, {})[k] = lit
        return Witness(len(ids),
                       {c: frozenset(v) for c, v in classes.items()},
                       {r: frozenset(v) for r, v in roles.items()},
                       values, faithful)

    def _pick_value(self, node: _Node, prop: str):
        ranges = self._ranges_of(prop)
        dt = next(iter(ranges)) if len(ranges) == 1 else DataType.STRING
        excluded = node.neg.get(prop, set())
        if dt is DataType.BOOLEAN:
            candidates = ["true", "false"]
        elif dt in (DataType.INTEGER, DataType.DECIMAL):
            candidates = [str(i) for i in range(len(excluded) + 1)]
        else:
            candidates = [f"v{i}" for i in range(len(excluded) + 1)]
        for lex in candidates:
            lit = owl.OwlLiteral(lex, dt)
            if canon_value(lit) not in excluded:
                return lit
        return None


# --- public entry points -----------------------------------------------------


def is_satisfiable(tbox: TBox, concept) -> SatResult:
    """Decide satisfiability of a class (fragment name or expression)."""
    if isinstance(concept, str):
        concept = Named(concept)
    engine = _Engine(tbox)
    root = engine.new_node(None)
    query = nnf(concept)
    ok = engine.add(root, query)
    for c in tbox.axioms_nnf:
        ok = ok and engine.add(root, c)
    if not ok:
        return SatResult(False)
    completed = engine.solve()
    if completed is None:
        return SatResult(False)
    return SatResult(True, completed.extract_witness())


def classify_all(tbox: TBox) -> list[tuple[str, SatResult]]:
    """Satisfiability of every declared class, in declaration order."""
    return [(name, is_satisfiable(tbox, name)) for name in tbox.classes]
