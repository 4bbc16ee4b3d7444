"""CNF formulas, DIMACS exchange and solver invocation.

The default engine is embedded (pysat). Setting ``NONTERM_SAT_SOLVER`` (or
passing ``command``) runs an external solver that reads a DIMACS file given
as its last argument and prints ``s``/``v`` lines in SAT competition style.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

SOLVER_ENV = "NONTERM_SAT_SOLVER"
DEFAULT_ENGINE = "glucose4"


@dataclass
class CNF:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Iterable[int]) -> None:
        clause = list(clause)
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} outside 1..{self.num_vars}")
        self.clauses.append(clause)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> CNF:
        cnf = cls()
        pending: list[int] = []
        declared = None
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValueError(f"bad problem line {line!r}")
                cnf.num_vars = int(parts[2])
                declared = int(parts[3])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    cnf.add(pending)
                    pending = []
                else:
                    pending.append(lit)
        if pending:
            raise ValueError("last clause not terminated by 0")
        if declared is not None and declared != len(cnf.clauses):
            raise ValueError(f"header declares {declared} clauses, found {len(cnf.clauses)}")
        return cnf


class Outcome(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolverResult:
    outcome: Outcome
    model: frozenset[int] = frozenset()
    detail: str = ""

    def value(self, var: int) -> bool:
        return var in self.model


def parse_solver_output(text: str) -> SolverResult:
    status = None
    true_vars: set[int] = set()
    for line in text.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit > 0:
                    true_vars.add(lit)
    if status == "SATISFIABLE":
        return SolverResult(Outcome.SAT, frozenset(true_vars))
    if status == "UNSATISFIABLE":
        return SolverResult(Outcome.UNSAT)
    return SolverResult(Outcome.UNKNOWN, detail=f"solver status {status!r}")


def format_solver_output(result: SolverResult, num_vars: int) -> str:
    """Inverse of :func:`parse_solver_output`, used by the bundled DIMACS front end."""
    if result.outcome is Outcome.UNSAT:
        return "s UNSATISFIABLE\n"
    if result.outcome is Outcome.UNKNOWN:
        return "s UNKNOWN\n"
    lits = [v if v in result.model else -v for v in range(1, num_vars + 1)]
    lines = ["s SATISFIABLE"]
    for i in range(0, len(lits), 20):
        lines.append("v " + " ".join(map(str, lits[i : i + 20])))
    lines.append("v 0")
    return "\n".join(lines) + "\n"


def _run_external(cnf: CNF, command: Sequence[str], timeout: float | None) -> SolverResult:
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as f:
        f.write(cnf.to_dimacs())
        path = f.name
    try:
        proc = subprocess.run(
            [*command, path], capture_output=True, text=True, timeout=timeout, check=False
        )
    except subprocess.TimeoutExpired:
        return SolverResult(Outcome.UNKNOWN, detail="timeout")
    except OSError as e:
        return SolverResult(Outcome.UNKNOWN, detail=f"cannot run solver: {e}")
    finally:
        os.unlink(path)
    result = parse_solver_output(proc.stdout)
    if result.outcome is Outcome.UNKNOWN:
        return SolverResult(Outcome.UNKNOWN, detail=f"exit code {proc.returncode}: {proc.stderr.strip()[:200]}")
    return result


def _run_embedded(cnf: CNF, engine: str, timeout: float | None) -> SolverResult:
    from pysat.solvers import Solver

    with Solver(name=engine, bootstrap_with=cnf.clauses) as solver:
        if timeout is None:
            sat = solver.solve()
        else:
            timer = threading.Timer(timeout, solver.interrupt)
            timer.start()
            try:
                sat = solver.solve_limited(expect_interrupt=True)
            finally:
                timer.cancel()
        if sat is None:
            return SolverResult(Outcome.UNKNOWN, detail="timeout")
        if not sat:
            return SolverResult(Outcome.UNSAT)
        return SolverResult(Outcome.SAT, frozenset(l for l in solver.get_model() if l > 0))


def solver_command() -> list[str] | None:
    value = os.environ.get(SOLVER_ENV)
    return shlex.split(value) if value else None


def run_solver(
    cnf: CNF,
    timeout: float | None = None,
    command: Sequence[str] | None = None,
    engine: str = DEFAULT_ENGINE,
) -> SolverResult:
    """Solve ``cnf``. Crashes and timeouts are reported as UNKNOWN, never UNSAT."""
    command = command or solver_command()
    if timeout is not None and timeout <= 0:
        return SolverResult(Outcome.UNKNOWN, detail="timeout")
    if command:
        return _run_external(cnf, command, timeout)
    return _run_embedded(cnf, engine, timeout)


def main(argv: Sequence[str] | None = None) -> int:
    """Minimal DIMACS front end for the embedded engine: ``python -m nonterm.sat FILE``."""
    import sys

    args = list(sys.argv[1:] if argv is None else argv)
    if len(args) != 1:
        print("usage: python -m nonterm.sat FILE.cnf", file=sys.stderr)
        return 1
    with open(args[0], encoding="utf-8") as f:
        cnf = CNF.from_dimacs(f.read())
    result = _run_embedded(cnf, DEFAULT_ENGINE, None)
    sys.stdout.write(format_solver_output(result, cnf.num_vars))
    return {Outcome.SAT: 10, Outcome.UNSAT: 20}.get(result.outcome, 0)


if __name__ == "__main__":
    raise SystemExit(main())
