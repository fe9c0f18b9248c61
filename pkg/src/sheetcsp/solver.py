"""Native finite-domain constraint solver.

Constraint store: linear relations over integer variables, pairwise
disequality, binary multiplication, and a 1-based element constraint.
Propagation runs each constraint's filter to a fixpoint (linear and
multiplication achieve bounds consistency, element is domain-consistent on
a ground list). Search is depth-first labeling in a fixed variable order
with ascending values, so solutions stream out in lexicographic order;
optimization is branch-and-bound over the same search.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .domain import EMPTY, MAX_MAGNITUDE, Domain
from .ops import ArithOp, DomainSpec, RelOp

MIN = "min"
MAX = "max"


class Var(int):
    """Variable id; an int subclass so ids index arrays directly while
    staying distinguishable from literal integers in constraint arguments."""

    __slots__ = ()

    def __repr__(self):
        return f"Var({int(self)})"


class ModelError(ValueError):
    """Ill-formed constraint: bad variable id, empty domain, or overflow risk."""


class BudgetExceeded(RuntimeError):
    """Search node budget exhausted before the search space was."""

    def __init__(self, nodes: int, incumbent: tuple[int, ...] | None = None):
        super().__init__(f"search budget exceeded after {nodes} nodes")
        self.nodes = nodes
        self.incumbent = incumbent


@dataclass(frozen=True)
class LinearRel:
    """sum(coef * var) rel constant."""

    terms: tuple[tuple[int, Var], ...]
    rel: RelOp
    constant: int


@dataclass(frozen=True)
class Diseq:
    a: Var
    b: Var


@dataclass(frozen=True)
class Mul:
    """x * y = z."""

    x: Var
    y: Var
    z: Var


@dataclass(frozen=True)
class Element:
    """items[index] = value, 1-based; items entries are Var or int literal."""

    index: Var | int
    items: tuple[Var | int, ...]
    value: Var | int


Constraint = LinearRel | Diseq | Mul | Element


def _val(x: Var | int, assign: Sequence[int]) -> int:
    return assign[x] if isinstance(x, Var) else x


def constraint_holds(c: Constraint, assign: Sequence[int]) -> bool:
    """Direct evaluation of a constraint under a total assignment."""
    if isinstance(c, LinearRel):
        total = sum(coef * assign[v] for coef, v in c.terms)
        return c.rel.holds(total, c.constant)
    if isinstance(c, Diseq):
        return assign[c.a] != assign[c.b]
    if isinstance(c, Mul):
        return assign[c.x] * assign[c.y] == assign[c.z]
    if isinstance(c, Element):
        idx = _val(c.index, assign)
        if not 1 <= idx <= len(c.items):
            return False
        return _val(c.items[idx - 1], assign) == _val(c.value, assign)
    raise TypeError(f"not a constraint: {c!r}")


class Model:
    """Variables with finite domains, a constraint list, an optional labeling
    order (defaults to creation order) and an optional optimization objective."""

    def __init__(self):
        self.domains: list[Domain] = []
        self.constraints: list[Constraint] = []
        self._label_order: list[Var] | None = None
        self.objective: tuple[str, Var] | None = None

    def new_var(self, dom: DomainSpec | Domain) -> Var:
        d = dom.copy() if isinstance(dom, Domain) else Domain.from_spec(dom)
        self.domains.append(d)
        return Var(len(self.domains) - 1)

    @property
    def n_vars(self) -> int:
        return len(self.domains)

    @property
    def label_order(self) -> list[Var]:
        if self._label_order is None:
            return [Var(i) for i in range(self.n_vars)]
        return self._label_order

    @label_order.setter
    def label_order(self, order: list[Var]) -> None:
        self._label_order = list(order)

    def set_objective(self, direction: str, var: Var) -> None:
        if direction not in (MIN, MAX):
            raise ModelError(f"objective direction must be {MIN!r} or {MAX!r}")
        self._check_var(var)
        self.objective = (direction, var)

    def _check_var(self, v) -> None:
        if not isinstance(v, Var) or not 0 <= v < self.n_vars:
            raise ModelError(f"unknown variable {v!r}")

    def _maxabs(self, v: Var) -> int:
        d = self.domains[v]
        return max(abs(d.lo), abs(d.hi))

    def post(self, c: Constraint) -> None:
        """Record a constraint. No propagation happens until solving."""
        if isinstance(c, LinearRel):
            reach = abs(c.constant)
            for coef, v in c.terms:
                self._check_var(v)
                reach += abs(coef) * self._maxabs(v)
            if reach > MAX_MAGNITUDE:
                raise ModelError("linear constraint exceeds 2^62 interval bound")
        elif isinstance(c, Diseq):
            self._check_var(c.a)
            self._check_var(c.b)
        elif isinstance(c, Mul):
            for v in (c.x, c.y, c.z):
                self._check_var(v)
            if self._maxabs(c.x) * self._maxabs(c.y) > MAX_MAGNITUDE:
                raise ModelError("multiplication exceeds 2^62 interval bound")
        elif isinstance(c, Element):
            for x in (c.index, c.value, *c.items):
                if isinstance(x, Var):
                    self._check_var(x)
        else:
            raise ModelError(f"not a constraint: {c!r}")
        self.constraints.append(c)

    def check(self, assign: Sequence[int]) -> bool:
        return all(constraint_holds(c, assign) for c in self.constraints)

    def copy(self) -> "Model":
        m = Model()
        m.domains = [d.copy() for d in self.domains]
        m.constraints = list(self.constraints)
        m._label_order = list(self._label_order) if self._label_order else None
        m.objective = self.objective
        return m


def post_all_different(m: Model, vars: Sequence[Var]) -> None:
    """Pairwise disequality over the group (no-op for a single variable)."""
    for i in range(len(vars)):
        for j in range(i + 1, len(vars)):
            m.post(Diseq(vars[i], vars[j]))


def mul_bounds(xlo: int, xhi: int, ylo: int, yhi: int) -> tuple[int, int]:
    products = (xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi)
    return min(products), max(products)


def fold_aggregate(
    m: Model,
    op: ArithOp,
    items: Sequence[Var | int],
    rel: RelOp,
    rhs: Var | int,
) -> None:
    """Left-fold of items under op, related to rhs. Accepts literal integers
    mixed into the group; they fold into the constant part."""
    if not items:
        raise ModelError("empty aggregation group")
    if op is ArithOp.ADD:
        terms: list[tuple[int, Var]] = []
        const = 0
        for x in items:
            if isinstance(x, Var):
                terms.append((1, x))
            else:
                const += x
        _post_linear(m, terms, const, rel, rhs)
        return
    if op is not ArithOp.MUL:
        raise ModelError(f"aggregation operator must be + or *, not {op.value!r}")
    factor = 1
    chain: list[Var] = []
    for x in items:
        if isinstance(x, Var):
            chain.append(x)
        else:
            factor *= x
    if not chain or factor == 0:
        const = factor if not chain else 0
        _post_linear(m, [], const, rel, rhs)
        return
    acc = chain[0]
    for nxt in chain[1:]:
        d1, d2 = m.domains[acc], m.domains[nxt]
        lo, hi = mul_bounds(d1.lo, d1.hi, d2.lo, d2.hi)
        aux = m.new_var(Domain(lo, hi))
        m.post(Mul(acc, nxt, aux))
        acc = aux
    _post_linear(m, [(factor, acc)], 0, rel, rhs)


def post_fold_aggregate(
    m: Model,
    op: ArithOp,
    vars: Sequence[Var],
    rel: RelOp,
    rhs: Var | int,
) -> None:
    fold_aggregate(m, op, vars, rel, rhs)


def _post_linear(
    m: Model,
    terms: Sequence[tuple[int, Var]],
    const: int,
    rel: RelOp,
    rhs: Var | int,
) -> None:
    """sum(terms) + const rel rhs, normalized to a LinearRel."""
    terms = list(terms)
    if isinstance(rhs, Var):
        terms.append((-1, rhs))
        constant = -const
    else:
        constant = rhs - const
    if not terms:
        if not rel.holds(0, constant):
            m.post(FALSE_CONSTRAINT)
        return
    m.post(LinearRel(tuple(terms), rel, constant))


# A constant contradiction: 0 = 1. Posting it makes the model unsatisfiable.
FALSE_CONSTRAINT = LinearRel((), RelOp.EQ, 1)


# ---------------------------------------------------------------------------
# Propagators
# ---------------------------------------------------------------------------

def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


class _FalseProp:
    __slots__ = ("vars",)
    self_requeue = False

    def __init__(self):
        self.vars = ()

    def run(self, eng) -> bool:
        return False


class _LinearProp:
    """need_lo <= sum(coef * var) <= need_hi (None = unbounded side).

    run() iterates internally until its own fixpoint, so the engine never
    needs to re-queue a linear propagator for changes it caused itself.
    """

    __slots__ = ("pairs", "vars", "need_lo", "need_hi")
    self_requeue = False

    def __init__(self, pairs, need_lo, need_hi):
        self.pairs = pairs
        self.vars = tuple(v for _, v in pairs)
        self.need_lo = need_lo
        self.need_hi = need_hi

    def run(self, eng) -> bool:
        los = eng.lo
        his = eng.hi
        pairs = self.pairs
        hi_req = self.need_hi
        lo_req = self.need_lo
        while True:
            smin = 0
            smax = 0
            for a, v in pairs:
                if a > 0:
                    smin += a * los[v]
                    smax += a * his[v]
                else:
                    smin += a * his[v]
                    smax += a * los[v]
            if hi_req is not None and smin > hi_req:
                return False
            if lo_req is not None and smax < lo_req:
                return False
            changed = False
            if hi_req is not None and smax > hi_req:
                gap = hi_req - smin
                for a, v in pairs:
                    if a > 0:
                        nb = (gap + a * los[v]) // a
                        if nb < his[v]:
                            if not eng.tighten_hi(v, nb):
                                return False
                            changed = True
                    else:
                        num = gap + a * his[v]
                        nb = -((-num) // a)
                        if nb > los[v]:
                            if not eng.tighten_lo(v, nb):
                                return False
                            changed = True
            if lo_req is not None and smin < lo_req:
                gap = lo_req - smax
                for a, v in pairs:
                    if a > 0:
                        num = gap + a * his[v]
                        nb = -((-num) // a)
                        if nb > los[v]:
                            if not eng.tighten_lo(v, nb):
                                return False
                            changed = True
                    else:
                        nb = (gap + a * los[v]) // a
                        if nb < his[v]:
                            if not eng.tighten_hi(v, nb):
                                return False
                            changed = True
            if not changed:
                return True


class _SumProp:
    """Plain sum (all coefficients 1), the dominant constraint shape for
    row/column/diagonal aggregates; same contract as _LinearProp. Reads
    bounds from the engine's flat lo/hi arrays, which is what makes large
    boolean-matrix models (n-queens boards) fast enough."""

    __slots__ = ("vars", "need_lo", "need_hi")
    self_requeue = False

    def __init__(self, vars, need_lo, need_hi):
        self.vars = vars
        self.need_lo = need_lo
        self.need_hi = need_hi

    def run(self, eng) -> bool:
        los = eng.lo
        his = eng.hi
        vs = self.vars
        hi_req = self.need_hi
        lo_req = self.need_lo
        while True:
            smin = 0
            smax = 0
            for v in vs:
                smin += los[v]
                smax += his[v]
            if hi_req is not None and smin > hi_req:
                return False
            if lo_req is not None and smax < lo_req:
                return False
            changed = False
            if hi_req is not None and smax > hi_req:
                gap = hi_req - smin
                for v in vs:
                    nb = los[v] + gap
                    if nb < his[v]:
                        if not eng.tighten_hi(v, nb):
                            return False
                        changed = True
            if lo_req is not None and smin < lo_req:
                gap = lo_req - smax
                for v in vs:
                    nb = his[v] + gap
                    if nb > los[v]:
                        if not eng.tighten_lo(v, nb):
                            return False
                        changed = True
            if not changed:
                return True


class _LinearNeqProp:
    """sum(coef * var) != c; fires once at most one variable is unfixed."""

    __slots__ = ("coefs", "vars", "c")
    self_requeue = False

    def __init__(self, coefs, vars, c):
        self.coefs = coefs
        self.vars = vars
        self.c = c

    def run(self, eng) -> bool:
        doms = eng.doms
        unfixed = -1
        total = self.c
        for k in range(len(self.vars)):
            d = doms[self.vars[k]]
            if d.lo == d.hi:
                total -= self.coefs[k] * d.lo
            elif unfixed >= 0:
                return True  # two unfixed vars: nothing to do yet
            else:
                unfixed = k
        if unfixed < 0:
            return total != 0
        coef = self.coefs[unfixed]
        if total % coef == 0:
            return eng.remove_value(self.vars[unfixed], total // coef)
        return True


class _DiseqProp:
    __slots__ = ("a", "b")
    self_requeue = False

    def __init__(self, a, b):
        self.a = a
        self.b = b

    @property
    def vars(self):
        return (self.a, self.b)

    def run(self, eng) -> bool:
        da = eng.doms[self.a]
        db = eng.doms[self.b]
        if da.lo == da.hi:
            return eng.remove_value(self.b, da.lo)
        if db.lo == db.hi:
            return eng.remove_value(self.a, db.lo)
        return True


class _MulProp:
    """x * y = z with bounds reasoning (real-relaxation interval division)."""

    __slots__ = ("x", "y", "z")
    self_requeue = True  # pruning one operand can enable more pruning here

    def __init__(self, x, y, z):
        self.x = x
        self.y = y
        self.z = z

    @property
    def vars(self):
        return (self.x, self.y, self.z)

    def run(self, eng) -> bool:
        doms = eng.doms
        x, y, z = self.x, self.y, self.z
        dx, dy, dz = doms[x], doms[y], doms[z]
        lo, hi = mul_bounds(dx.lo, dx.hi, dy.lo, dy.hi)
        if not (eng.tighten_lo(z, lo) and eng.tighten_hi(z, hi)):
            return False
        if not self._divide(eng, x, doms[z], doms[y]):
            return False
        return self._divide(eng, y, doms[z], doms[x])

    @staticmethod
    def _divide(eng, target, dz, dy) -> bool:
        """Narrow target to hull{ z / y : z in dz, y in dy, y != 0 }."""
        if dy.contains(0) and dz.lo <= 0 <= dz.hi:
            return True  # y = 0, z = 0 supports any target value
        lo = None
        hi = None
        for ylo, yhi in ((dy.lo, min(dy.hi, -1)), (max(dy.lo, 1), dy.hi)):
            if ylo > yhi:
                continue
            corners = ((dz.lo, ylo), (dz.lo, yhi), (dz.hi, ylo), (dz.hi, yhi))
            qlo = min(_ceil_div(p, q) for p, q in corners)
            qhi = max(p // q for p, q in corners)
            if qlo > qhi:
                continue
            lo = qlo if lo is None else min(lo, qlo)
            hi = qhi if hi is None else max(hi, qhi)
        if lo is None:
            return False
        return eng.tighten_lo(target, lo) and eng.tighten_hi(target, hi)


class _ElementProp:
    """items[index] = value, 1-based. Domain-consistent when items are all
    literals, bounds reasoning otherwise."""

    __slots__ = ("index", "items", "value", "all_const")
    self_requeue = True

    def __init__(self, index, items, value):
        self.index = index
        self.items = items
        self.value = value
        self.all_const = not any(isinstance(it, Var) for it in items)

    @property
    def vars(self):
        out = [it for it in self.items if isinstance(it, Var)]
        if isinstance(self.index, Var):
            out.append(self.index)
        if isinstance(self.value, Var):
            out.append(self.value)
        return tuple(out)

    def _value_bounds(self, eng) -> tuple[int, int]:
        if isinstance(self.value, Var):
            d = eng.doms[self.value]
            return d.lo, d.hi
        return self.value, self.value

    def _value_contains(self, eng, v: int) -> bool:
        if isinstance(self.value, Var):
            return eng.doms[self.value].contains(v)
        return self.value == v

    def run(self, eng) -> bool:
        doms = eng.doms
        n = len(self.items)
        if isinstance(self.index, Var):
            if not (eng.tighten_lo(self.index, 1) and eng.tighten_hi(self.index, n)):
                return False
            candidates = doms[self.index].values()
        else:
            if not 1 <= self.index <= n:
                return False
            candidates = [self.index]
        vlo, vhi = self._value_bounds(eng)
        valid = []
        for i in candidates:
            it = self.items[i - 1]
            if isinstance(it, Var):
                d = doms[it]
                if d.hi < vlo or d.lo > vhi:
                    continue
                if d.lo == d.hi and not self._value_contains(eng, d.lo):
                    continue
            else:
                if not self._value_contains(eng, it):
                    continue
            valid.append(i)
        if not valid:
            return False
        if isinstance(self.index, Var):
            ok = set(valid)
            for i in candidates:
                if i not in ok and not eng.remove_value(self.index, i):
                    return False
        # narrow the value side
        if isinstance(self.value, Var):
            if self.all_const:
                allowed = {self.items[i - 1] for i in valid}
                for v in doms[self.value].values():
                    if v not in allowed and not eng.remove_value(self.value, v):
                        return False
            else:
                lo = None
                hi = None
                for i in valid:
                    it = self.items[i - 1]
                    ilo, ihi = (
                        (doms[it].lo, doms[it].hi) if isinstance(it, Var) else (it, it)
                    )
                    lo = ilo if lo is None else min(lo, ilo)
                    hi = ihi if hi is None else max(hi, ihi)
                if not (eng.tighten_lo(self.value, lo) and eng.tighten_hi(self.value, hi)):
                    return False
        if len(valid) == 1:
            it = self.items[valid[0] - 1]
            if isinstance(it, Var):
                vlo, vhi = self._value_bounds(eng)
                if not (eng.tighten_lo(it, vlo) and eng.tighten_hi(it, vhi)):
                    return False
                if isinstance(self.value, Var):
                    d = doms[it]
                    if not (
                        eng.tighten_lo(self.value, d.lo)
                        and eng.tighten_hi(self.value, d.hi)
                    ):
                        return False
            else:
                if isinstance(self.value, Var):
                    if not eng.fix_var(self.value, it):
                        return False
                elif self.value != it:
                    return False
        return True


class _BoundProp:
    """Branch-and-bound objective cut: strictly better than the incumbent."""

    __slots__ = ("var", "direction")
    self_requeue = False

    def __init__(self, var, direction):
        self.var = var
        self.direction = direction

    @property
    def vars(self):
        return (self.var,)

    def run(self, eng) -> bool:
        best = eng.best_value
        if best is None:
            return True
        if self.direction == MIN:
            return eng.tighten_hi(self.var, best - 1)
        return eng.tighten_lo(self.var, best + 1)


def _build_propagators(c: Constraint):
    """Compile one declarative constraint into zero or more propagators."""
    if isinstance(c, LinearRel):
        merged: dict[Var, int] = {}
        for coef, v in c.terms:
            merged[v] = merged.get(v, 0) + coef
        pairs = [(a, v) for v, a in merged.items() if a != 0]
        coefs = tuple(a for a, _ in pairs)
        vs = tuple(v for _, v in pairs)
        if not pairs:
            return [] if c.rel.holds(0, c.constant) else [_FalseProp()]
        if c.rel is RelOp.NEQ:
            return [_LinearNeqProp(coefs, vs, c.constant)]
        need_lo, need_hi = {
            RelOp.EQ: (c.constant, c.constant),
            RelOp.LE: (None, c.constant),
            RelOp.LT: (None, c.constant - 1),
            RelOp.GE: (c.constant, None),
            RelOp.GT: (c.constant + 1, None),
        }[c.rel]
        if all(a == 1 for a in coefs):
            return [_SumProp(vs, need_lo, need_hi)]
        return [_LinearProp(tuple(pairs), need_lo, need_hi)]
    if isinstance(c, Diseq):
        if c.a == c.b:
            return [_FalseProp()]
        return [_DiseqProp(c.a, c.b)]
    if isinstance(c, Mul):
        return [_MulProp(c.x, c.y, c.z)]
    if isinstance(c, Element):
        if not isinstance(c.index, Var) and not 1 <= c.index <= len(c.items):
            return [_FalseProp()]
        return [_ElementProp(c.index, c.items, c.value)]
    raise TypeError(f"not a constraint: {c!r}")


# ---------------------------------------------------------------------------
# Engine: propagation to fixpoint + trailing for backtrack
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, model: Model, budget: int | None = None):
        self.model = model
        self.doms = [d.copy() for d in model.domains]
        # flat bound mirrors of doms, kept in sync by every mutator below;
        # the hot propagation loops index these instead of domain objects
        self.lo = [d.lo for d in self.doms]
        self.hi = [d.hi for d in self.doms]
        self.props = []
        self.watch: list[list[int]] = [[] for _ in range(len(self.doms))]
        for c in model.constraints:
            for p in _build_propagators(c):
                self._add_prop(p)
        self.queue: deque[int] = deque()
        self.in_queue = bytearray(len(self.props))
        self.trail: list[tuple[int, Domain]] = []
        self.level_marks: list[int] = []
        self.stamp = [-1] * len(self.doms)
        self.level_seq = 0
        self.nodes = 0
        self.budget = budget
        self.best_value: int | None = None
        self.bound_prop_id: int | None = None
        self.skip_pid = -1  # running propagator that already reached its own fixpoint

    def _add_prop(self, p) -> int:
        pid = len(self.props)
        self.props.append(p)
        for v in p.vars:
            self.watch[v].append(pid)
        return pid

    def enable_bound(self) -> None:
        direction, var = self.model.objective  # type: ignore[misc]
        pid = self._add_prop(_BoundProp(var, direction))
        self.in_queue = bytearray(len(self.props))
        self.bound_prop_id = pid

    # -- domain narrowing with trailing ------------------------------------

    def _save(self, v: int) -> None:
        if self.stamp[v] != self.level_seq:
            self.stamp[v] = self.level_seq
            self.trail.append((v, self.doms[v].copy()))

    def _notify(self, v: int) -> None:
        in_queue = self.in_queue
        queue = self.queue
        skip = self.skip_pid
        for pid in self.watch[v]:
            if pid != skip and not in_queue[pid]:
                in_queue[pid] = 1
                queue.append(pid)

    def tighten_lo(self, v: int, lo: int) -> bool:
        d = self.doms[v]
        if lo <= d.lo:
            return True
        self._save(v)
        if d.tighten_lo(lo) == EMPTY:
            return False
        self.lo[v] = d.lo
        self._notify(v)
        return True

    def tighten_hi(self, v: int, hi: int) -> bool:
        d = self.doms[v]
        if hi >= d.hi:
            return True
        self._save(v)
        if d.tighten_hi(hi) == EMPTY:
            return False
        self.hi[v] = d.hi
        self._notify(v)
        return True

    def remove_value(self, v: int, val: int) -> bool:
        d = self.doms[v]
        if not d.contains(val):
            return True
        self._save(v)
        if d.remove(val) == EMPTY:
            return False
        self.lo[v] = d.lo
        self.hi[v] = d.hi
        self._notify(v)
        return True

    def fix_var(self, v: int, val: int) -> bool:
        d = self.doms[v]
        if not d.contains(val):
            return False
        if d.lo == val and d.hi == val:
            return True
        self._save(v)
        d.fix(val)
        self.lo[v] = val
        self.hi[v] = val
        self._notify(v)
        return True

    # -- search bookkeeping --------------------------------------------------

    def push_level(self) -> None:
        self.level_seq += 1
        self.level_marks.append(len(self.trail))

    def pop_level(self) -> None:
        mark = self.level_marks.pop()
        trail = self.trail
        doms = self.doms
        los = self.lo
        his = self.hi
        while len(trail) > mark:
            v, old = trail.pop()
            doms[v] = old
            los[v] = old.lo
            his[v] = old.hi
            self.stamp[v] = -1
        self.level_seq += 1

    # -- propagation ----------------------------------------------------------

    def propagate_all(self) -> bool:
        self.queue.clear()
        for pid in range(len(self.props)):
            self.in_queue[pid] = 1
            self.queue.append(pid)
        return self._fixpoint()

    def propagate(self) -> bool:
        if self.bound_prop_id is not None and not self.in_queue[self.bound_prop_id]:
            self.in_queue[self.bound_prop_id] = 1
            self.queue.append(self.bound_prop_id)
        return self._fixpoint()

    def _fixpoint(self) -> bool:
        queue = self.queue
        in_queue = self.in_queue
        props = self.props
        while queue:
            pid = queue.popleft()
            in_queue[pid] = 0
            p = props[pid]
            self.skip_pid = -1 if p.self_requeue else pid
            ok = p.run(self)
            self.skip_pid = -1
            if not ok:
                while queue:
                    in_queue[queue.popleft()] = 0
                return False
        return True

    # -- depth-first labeling --------------------------------------------------

    def search_order(self) -> list[int]:
        order = list(self.model.label_order)
        seen = set(order)
        for v in range(len(self.doms)):
            if v not in seen:
                order.append(v)
        return order

    def search(self) -> Iterator[tuple[int, ...]]:
        if not self.propagate_all():
            return
        order = self.search_order()
        n = len(order)
        doms = self.doms
        los = self.lo
        his = self.hi
        model = self.model
        frames: list[list] = []  # [pos, var, values, next_index]
        pos = 0
        while True:
            while pos < n and los[order[pos]] == his[order[pos]]:
                pos += 1
            if pos == n:
                solution = tuple(los)
                if not model.check(solution):
                    raise RuntimeError(
                        "internal error: emitted assignment violates a constraint"
                    )
                yield solution
                descend = False
            else:
                v = order[pos]
                frame = [pos, v, doms[v].values(), 0]
                frames.append(frame)
                descend = self._advance(frame, fresh=True)
                if not descend:
                    frames.pop()
            while not descend:
                if not frames:
                    return
                descend = self._advance(frames[-1], fresh=False)
                if not descend:
                    frames.pop()
            pos = frames[-1][0] + 1

    def _advance(self, frame, fresh: bool) -> bool:
        """Try this frame's next values until one survives propagation."""
        values = frame[2]
        if not fresh:
            self.pop_level()
        while frame[3] < len(values):
            val = values[frame[3]]
            frame[3] += 1
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(self.nodes)
            self.push_level()
            if self.fix_var(frame[1], val) and self.propagate():
                return True
            self.pop_level()
        return False


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def propagate(model: Model) -> list[Domain] | None:
    """Run all propagators to a fixpoint. Returns the narrowed domains,
    or None if some domain would become empty (inconsistent model)."""
    eng = _Engine(model)
    if not eng.propagate_all():
        return None
    return [d.copy() for d in eng.doms]


def solve_iter(model: Model, budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Enumerate all solutions depth-first: variable order is label_order,
    values ascending, so solutions arrive in lexicographic order. Raises
    BudgetExceeded if a node budget is given and exhausted."""
    return _Engine(model, budget).search()


def optimize(model: Model, budget: int | None = None) -> tuple[int, ...] | None:
    """Branch-and-bound: enumerate solutions, tightening a strict bound on
    the objective after each, and return the last (provably optimal) one.
    Returns None when unsatisfiable."""
    if model.objective is None:
        raise ModelError("model has no objective")
    direction, var = model.objective
    eng = _Engine(model, budget)
    eng.enable_bound()
    best = None
    try:
        for solution in eng.search():
            best = solution
            eng.best_value = solution[var]
    except BudgetExceeded as e:
        raise BudgetExceeded(e.nodes, incumbent=best) from None
    return best
