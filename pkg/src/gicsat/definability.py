"""Single-variable definability queries against two linked formula copies.

The base formula conjoins the instance formula F with a renamed copy
(every variable, auxiliaries included, shifted by the original variable
count) and, per projected variable z, an indicator e_z whose assumption
forces z and its copy equal:

    base = F  and  F[renamed]  and  AND_z (e_z -> (z <-> z')).

Asking whether a candidate set C defines a target variable z is then one
incremental call: assume {e_c : c in C} plus z and -z'.  UNSAT means every
pair of models agreeing on C agrees on z; SAT hands back a witness pair.

The auxiliary variables are deliberately renamed as well: sharing the
cardinality-counter registers between the two copies can couple otherwise
independent models through counter state and turn satisfiable queries
unsatisfiable, which would be unsound here.
"""

from __future__ import annotations

from typing import IO, Iterable

from .encoder import EncodedInstance
from .satcore import CnfFormula, SolveOutcome, make_engine, write_dimacs


class DefinabilityContext:
    """One shared incremental solver over the doubled formula.

    With fresh_per_query=True every query runs in a brand-new engine on a
    copy of the base formula (slower, but independent of any incremental
    state of the bundled engine).
    """

    def __init__(self, inst: EncodedInstance, engine: str = "bundled",
                 fresh_per_query: bool = False):
        f = inst.formula
        shift = f.num_vars
        z_order = inst.z_vars  # x_1..x_n then y_1..y_n

        base = CnfFormula()
        base.new_vars(2 * shift + len(z_order))
        for clause in f.clauses:
            base.add_clause(clause)
        for clause in f.clauses:
            base.add_clause([l + shift if l > 0 else l - shift for l in clause])
        indicators: dict[int, int] = {}
        for i, z in enumerate(z_order):
            e = 2 * shift + 1 + i
            indicators[z] = e
            zh = z + shift
            base.add_clause([-e, -z, zh])
            base.add_clause([-e, z, -zh])

        self.instance = inst
        self.base = base
        self.z_order = z_order
        self.hat = {z: z + shift for z in z_order}
        self.hat_aux = [a + shift for a in inst.varmap.aux]
        self.indicators = indicators
        self.engine_name = engine
        self.fresh_per_query = fresh_per_query
        self._engine = None if fresh_per_query else make_engine(base, engine)

    def query(self, defining: Iterable[int], target: int,
              budget: int | None = None) -> SolveOutcome:
        """Padoa-style check: is target functionally defined by `defining`?

        UNSAT: defined.  SAT: two models agree on `defining` but differ on
        target.  BUDGET_EXHAUSTED: undetermined within the conflict budget.
        """
        defining = set(defining)
        if target not in self.indicators:
            raise ValueError(f"target variable {target} is not a projected variable")
        if target in defining:
            raise ValueError("target variable must not be in the defining set")
        bad = defining - set(self.indicators)
        if bad:
            raise ValueError(f"defining variables {sorted(bad)} are not projected")
        assumptions = [self.indicators[z] for z in self.z_order if z in defining]
        assumptions += [target, -self.hat[target]]
        if self.fresh_per_query:
            engine = make_engine(self.base, self.engine_name)
        else:
            engine = self._engine
        return engine.solve(assumptions, budget)

    def dump_dimacs(self, fp: IO[str]) -> None:
        """Debug dump of the base formula with the z/copy/indicator id map."""
        comments = ["zmap <z> <copy> <indicator>"]
        comments += [f"zmap {z} {self.hat[z]} {self.indicators[z]}"
                     for z in self.z_order]
        write_dimacs(self.base, fp, comments=comments)


def build_definability_base(inst: EncodedInstance, engine: str = "bundled",
                            fresh_per_query: bool = False) -> DefinabilityContext:
    return DefinabilityContext(inst, engine=engine, fresh_per_query=fresh_per_query)


def padoa_query(ctx: DefinabilityContext, defining: Iterable[int], target: int,
                budget: int | None = None) -> SolveOutcome:
    return ctx.query(defining, target, budget)
