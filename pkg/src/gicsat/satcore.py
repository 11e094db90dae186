"""CNF formulas and a bundled incremental SAT engine.

The engine is a conflict-driven clause-learning solver with two-literal
watching, first-UIP learning, VSIDS-style branching, phase saving and Luby
restarts.  It accepts assumption literals and a conflict budget per call,
and keeps learned clauses across calls (learned clauses are entailed by the
clause database alone, never by assumptions, so reuse is sound).

Everything here is deterministic: no randomness, stable tie-breaking by
variable index, insertion-ordered containers only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import IO, Callable, Iterable, Sequence

_NO_BUDGET = 1 << 62


class SolveStatus(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one budgeted solve call.

    model is a list indexed by variable (entry 0 unused); present iff SAT.
    """

    status: SolveStatus
    model: list[bool] | None
    conflicts_used: int

    def __post_init__(self):
        assert (self.model is not None) == (self.status is SolveStatus.SAT)


class CnfFormula:
    """Clause container with contiguous variable ids starting at 1."""

    def __init__(self, num_vars: int = 0):
        self.num_vars = num_vars
        self.clauses: list[list[int]] = []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, count: int) -> list[int]:
        return [self.new_var() for _ in range(count)]

    def add_clause(self, lits: Iterable[int]) -> None:
        """Append a clause; duplicate literals dropped, tautologies skipped."""
        seen: set[int] = set()
        clause: list[int] = []
        for lit in lits:
            var = abs(lit)
            if lit == 0 or var > self.num_vars:
                raise ValueError(f"literal {lit} references an unallocated variable")
            if -lit in seen:
                return  # tautology (x or not-x)
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        if not clause:
            raise ValueError("empty clause")
        self.clauses.append(clause)

    def add_clauses(self, clause_list: Iterable[Iterable[int]]) -> None:
        for lits in clause_list:
            self.add_clause(lits)

    def copy(self) -> "CnfFormula":
        dup = CnfFormula(self.num_vars)
        dup.clauses = [list(c) for c in self.clauses]
        return dup

    def __len__(self) -> int:
        return len(self.clauses)


def clause_satisfied(clause: Sequence[int], model: Sequence[bool]) -> bool:
    return any(model[abs(l)] == (l > 0) for l in clause)


def check_model(f: CnfFormula, model: Sequence[bool]) -> bool:
    """Direct evaluation of a full assignment against every clause."""
    return all(clause_satisfied(c, model) for c in f.clauses)


class CdclSolver:
    """Bundled CDCL engine; one instance is one single-threaded context."""

    def __init__(self, formula: CnfFormula | None = None):
        self.num_vars = 0
        self.clauses: list[list[int] | None] = []
        self.watches: dict[int, list[int]] = {}
        self.assign: list[bool | None] = [None]
        self.level: list[int] = [0]
        self.reason: list[int | None] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[bool] = [False]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.learned_ids: list[int] = []
        self.num_original = 0
        self.total_conflicts = 0
        if formula is not None:
            for _ in range(formula.num_vars):
                self.new_var()
            for clause in formula.clauses:
                self.add_clause(clause)

    # ---- variable and clause management -------------------------------

    def new_var(self) -> int:
        self.num_vars += 1
        self.assign.append(None)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(False)
        heappush(self.heap, (0.0, self.num_vars))
        return self.num_vars

    def _value(self, lit: int) -> bool | None:
        v = self.assign[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause at the root level; usable between solve calls."""
        self._cancel_until(0)
        clause: list[int] = []
        seen: set[int] = set()
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} references an unallocated variable")
            if -lit in seen:
                return  # tautology
            if lit in seen:
                continue
            seen.add(lit)
            val = self._value(lit)
            if val is True:
                return  # satisfied at root forever
            if val is False:
                continue  # falsified at root forever
            clause.append(lit)
        self.num_original += 1
        if not clause:
            self.ok = False
        elif len(clause) == 1:
            self._enqueue(clause[0], None)
        else:
            self._attach(clause)

    def _attach(self, clause: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(clause)
        self.watches.setdefault(clause[0], []).append(ci)
        self.watches.setdefault(clause[1], []).append(ci)
        return ci

    # ---- trail --------------------------------------------------------

    def _enqueue(self, lit: int, reason_ci: int | None) -> None:
        v = abs(lit)
        self.assign[v] = lit > 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason_ci
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        assign, phase, reason = self.assign, self.phase, self.reason
        for i in range(len(self.trail) - 1, lim - 1, -1):
            lit = self.trail[i]
            v = abs(lit)
            phase[v] = lit > 0
            assign[v] = None
            reason[v] = None
            heappush(self.heap, (-self.activity[v], v))
        del self.trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    # ---- propagation ---------------------------------------------------

    def _propagate(self) -> int | None:
        clauses = self.clauses
        assign = self.assign
        watches = self.watches
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            neg = -p
            ws = watches.get(neg)
            if not ws:
                continue
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue  # deleted clause: drop the stale watch
                if c[0] == neg:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = assign[abs(first)]
                if fv is not None and fv == (first > 0):
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for kk in range(2, len(c)):
                    lk = c[kk]
                    lv = assign[abs(lk)]
                    if lv is None or lv == (lk > 0):
                        c[1], c[kk] = lk, neg
                        watches.setdefault(lk, []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if fv is not None:  # first watch falsified too: conflict
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return None

    # ---- conflict analysis ----------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > 1e100:
            self._rescale()
        elif self.assign[v] is None:
            heappush(self.heap, (-act, v))

    def _rescale(self) -> None:
        for v in range(1, self.num_vars + 1):
            self.activity[v] *= 1e-100
        self.var_inc *= 1e-100
        self.heap = [(-self.activity[v], v)
                     for v in range(1, self.num_vars + 1)
                     if self.assign[v] is None]
        self.heap.sort()

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        learnt: list[int] = [0]
        seen = bytearray(self.num_vars + 1)
        cur_level = len(self.trail_lim)
        counter = 0
        p = 0
        index = len(self.trail) - 1
        c = self.clauses[confl]
        while True:
            assert c is not None
            for pos in range(0 if p == 0 else 1, len(c)):
                q = c[pos]
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            v = abs(p)
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            c = self.clauses[self.reason[v]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        # watch the asserting literal and a literal from the backjump level
        best = 1
        for pos in range(2, len(learnt)):
            if self.level[abs(learnt[pos])] > self.level[abs(learnt[best])]:
                best = pos
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _record_learnt(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
        else:
            ci = self._attach(learnt)
            self.learned_ids.append(ci)
            self._enqueue(learnt[0], ci)

    def _reduce_db(self) -> None:
        keep_limit = max(2000, 2 * self.num_original)
        if len(self.learned_ids) <= keep_limit:
            return
        active_reasons = {self.reason[abs(l)] for l in self.trail}
        # drop the longest (oldest first among equals), keep binaries
        order = sorted(self.learned_ids,
                       key=lambda ci: (-len(self.clauses[ci]), ci))
        kept: set[int] = set(self.learned_ids)
        to_remove = len(self.learned_ids) // 2
        for ci in order:
            if to_remove == 0:
                break
            clause = self.clauses[ci]
            if len(clause) <= 2 or ci in active_reasons:
                continue
            self.clauses[ci] = None
            kept.discard(ci)
            to_remove -= 1
        self.learned_ids = [ci for ci in self.learned_ids if ci in kept]

    # ---- decisions -------------------------------------------------------

    def _pick_branch_var(self) -> int:
        heap, assign, activity = self.heap, self.assign, self.activity
        while heap:
            na, v = heappop(heap)
            if assign[v] is None and -na == activity[v]:
                return v
        return 0

    # ---- main loop -------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = (),
              budget: int | None = None) -> SolveOutcome:
        """Decide the clause database under assumptions, within a conflict budget.

        budget=None means effectively unbounded.
        """
        if budget is None:
            budget = _NO_BUDGET
        if budget < 1:
            raise ValueError("budget must be >= 1")
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"assumption {lit} references an unallocated variable")
        self._cancel_until(0)
        if not self.ok:
            return SolveOutcome(SolveStatus.UNSAT, None, 0)

        conflicts = 0
        restart_count = 0
        restart_limit = 128 * _luby(restart_count + 1)
        conflicts_since_restart = 0

        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                self.total_conflicts += 1
                conflicts_since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveOutcome(SolveStatus.UNSAT, None, conflicts)
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                self._record_learnt(learnt)
                self.var_inc /= 0.95
                if conflicts >= budget:
                    self._cancel_until(0)
                    return SolveOutcome(SolveStatus.BUDGET_EXHAUSTED, None, conflicts)
                if conflicts_since_restart >= restart_limit:
                    restart_count += 1
                    restart_limit = 128 * _luby(restart_count + 1)
                    conflicts_since_restart = 0
                    self._cancel_until(0)
                continue

            self._reduce_db()

            next_lit = 0
            while len(self.trail_lim) < len(assumptions):
                p = assumptions[len(self.trail_lim)]
                val = self._value(p)
                if val is True:
                    self.trail_lim.append(len(self.trail))  # placeholder level
                elif val is False:
                    self._cancel_until(0)
                    return SolveOutcome(SolveStatus.UNSAT, None, conflicts)
                else:
                    next_lit = p
                    break
            if next_lit == 0:
                v = self._pick_branch_var()
                if v == 0:
                    model: list[bool] = [False] * (self.num_vars + 1)
                    for u in range(1, self.num_vars + 1):
                        model[u] = bool(self.assign[u])
                    self._cancel_until(0)
                    return SolveOutcome(SolveStatus.SAT, model, conflicts)
                next_lit = v if self.phase[v] else -v
            self.trail_lim.append(len(self.trail))
            self._enqueue(next_lit, None)


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    if i == (1 << k) - 1:
        return 1 << (k - 1)
    return _luby(i - (1 << (k - 1)) + 1)


# A solver engine is anything matching the CdclSolver call surface:
# new_var() -> int, add_clause(lits), solve(assumptions, budget) -> SolveOutcome.
# External high-performance solvers can be plugged in by registering a
# factory taking the base CnfFormula.
EngineFactory = Callable[[CnfFormula], "CdclSolver"]

ENGINES: dict[str, EngineFactory] = {"bundled": CdclSolver}


def make_engine(formula: CnfFormula, name: str = "bundled"):
    try:
        factory = ENGINES[name]
    except KeyError:
        raise ValueError(f"unknown solver engine {name!r}; "
                         f"available: {sorted(ENGINES)}") from None
    return factory(formula)


def solve(f: CnfFormula, assumptions: Sequence[int] = (),
          budget: int | None = None, engine: str = "bundled") -> SolveOutcome:
    """One-shot solve of a formula in a fresh context."""
    return make_engine(f, engine).solve(assumptions, budget)


class ModelCapExceeded(RuntimeError):
    """Projected enumeration found more models than the caller's cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} projected models")
        self.cap = cap


def enumerate_models_projected(f: CnfFormula, proj: Iterable[int],
                               cap: int = 1 << 20,
                               engine: str = "bundled") -> list[tuple[int, ...]]:
    """All distinct models projected on proj, as tuples of signed literals.

    Implemented as a blocking-clause loop over the projection set; intended
    for desk-scale formulas.  Raises ModelCapExceeded instead of silently
    truncating.
    """
    proj_vars = sorted(set(proj))
    for v in proj_vars:
        if not 1 <= v <= f.num_vars:
            raise ValueError(f"projection variable {v} not allocated")
    ctx = make_engine(f, engine)
    out: list[tuple[int, ...]] = []
    while True:
        res = ctx.solve()
        if res.status is not SolveStatus.SAT:
            return out
        assert res.model is not None
        row = tuple(v if res.model[v] else -v for v in proj_vars)
        if len(out) >= cap:
            raise ModelCapExceeded(cap)
        out.append(row)
        ctx.add_clause([-lit for lit in row])


# ---- DIMACS ---------------------------------------------------------------


def write_dimacs(f: CnfFormula, fp: IO[str],
                 comments: Iterable[str] = (),
                 groups: Iterable[tuple[str, int, int]] = ()) -> None:
    """Write DIMACS CNF; group annotations become 'c group <label> <v> <v>'."""
    for text in comments:
        fp.write(f"c {text}\n")
    for label, v1, v2 in groups:
        fp.write(f"c group {label} {v1} {v2}\n")
    fp.write(f"p cnf {f.num_vars} {len(f.clauses)}\n")
    for clause in f.clauses:
        fp.write(" ".join(str(l) for l in clause) + " 0\n")


def read_dimacs(fp: IO[str]) -> tuple[CnfFormula, dict[str, tuple[int, int]]]:
    """Read DIMACS CNF, returning the formula and any 'c group' annotations."""
    groups: dict[str, tuple[int, int]] = {}
    num_vars = num_clauses = None
    tokens: list[str] = []
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 5 and parts[1] == "group":
                groups[parts[2]] = (int(parts[3]), int(parts[4]))
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        tokens.extend(line.split())
    if num_vars is None:
        raise ValueError("missing problem line")
    f = CnfFormula(num_vars)
    clause: list[int] = []
    for tok in tokens:
        lit = int(tok)
        if lit == 0:
            f.add_clause(clause)
            clause = []
        else:
            clause.append(lit)
    if clause:
        raise ValueError("trailing clause not terminated by 0")
    if len(f.clauses) != num_clauses:
        raise ValueError(f"declared {num_clauses} clauses, found {len(f.clauses)}")
    return f, groups
