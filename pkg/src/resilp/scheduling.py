"""Makespan scheduling with adversarial machine delays.

Jobs come in types; all jobs of a type take the same time on a given
machine (times may differ across machines).  An adversary hands each
machine a start-up delay, spending at most ``K`` time units in total;
the plain side must then assign every job so each machine finishes by
``cmax`` including its delay.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .engine import ResiliencySystem
from .errors import ValidationError
from .ilp import IntAssignment, LinearRow, Rel, VarBounds, VarId


@dataclass(frozen=True)
class SchedulingInstance:
    """``ptimes[t][i]`` is the processing time of a type-``t`` job on
    machine ``i``; ``counts[t]`` is how many such jobs exist."""

    machines: int
    ptimes: Tuple[Tuple[int, ...], ...]
    counts: Tuple[int, ...]
    K: int
    cmax: int

    def __post_init__(self):
        object.__setattr__(
            self, "ptimes", tuple(tuple(row) for row in self.ptimes)
        )
        object.__setattr__(self, "counts", tuple(self.counts))
        for label, value in (
            ("machines", self.machines),
            ("K", self.K),
            ("cmax", self.cmax),
        ):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"{label} must be an integer")
        if self.machines < 1:
            raise ValidationError("need at least one machine")
        if not self.ptimes:
            raise ValidationError("need at least one job type")
        if len(self.counts) != len(self.ptimes):
            raise ValidationError("one job count per type required")
        for t, row in enumerate(self.ptimes):
            if len(row) != self.machines:
                raise ValidationError(
                    f"type {t} needs a time for each of {self.machines} machines"
                )
            for v in row:
                if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                    raise ValidationError("processing times must be integers >= 0")
        for n in self.counts:
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise ValidationError("job counts must be integers >= 0")
        if self.K < 0 or self.cmax < 0:
            raise ValidationError("K and cmax must be non-negative")

    @property
    def ntypes(self) -> int:
        return len(self.ptimes)

    @staticmethod
    def from_dict(doc) -> "SchedulingInstance":
        if not isinstance(doc, dict):
            raise ValidationError("instance must be an object")
        wanted = {"machines", "ptimes", "counts", "K", "cmax"}
        extra = set(doc) - wanted
        if extra:
            raise ValidationError(f"unknown instance keys: {sorted(extra)}")
        missing = wanted - set(doc)
        if missing:
            raise ValidationError(f"missing instance keys: {sorted(missing)}")
        ptimes = doc["ptimes"]
        if not isinstance(ptimes, list) or not all(
            isinstance(r, list) for r in ptimes
        ):
            raise ValidationError("ptimes must be a list of per-type lists")
        counts = doc["counts"]
        if not isinstance(counts, list):
            raise ValidationError("counts must be a list")
        return SchedulingInstance(
            doc["machines"],
            tuple(tuple(r) for r in ptimes),
            tuple(counts),
            doc["K"],
            doc["cmax"],
        )

    def to_dict(self) -> dict:
        return {
            "machines": self.machines,
            "ptimes": [list(r) for r in self.ptimes],
            "counts": list(self.counts),
            "K": self.K,
            "cmax": self.cmax,
        }


def _dname(i: int) -> str:
    return f"d{i}"


def _xname(t: int, i: int) -> str:
    return f"x[{t},{i}]"


def encode(inst: SchedulingInstance) -> ResiliencySystem:
    """One delay variable per machine, one count variable per
    (type, machine) pair.

    Capacity rows carry a coefficient for every type on the machine even
    when the processing time is zero, so each machine's row mentions its
    full column of assignment variables.
    """
    z_vars = tuple(
        (VarId(i, _dname(i)), VarBounds(0, inst.K))
        for i in range(inst.machines)
    )
    did = {i: vid for i, (vid, _) in enumerate(z_vars)}

    x_vars = []
    xid: Dict[Tuple[int, int], VarId] = {}
    for t in range(inst.ntypes):
        for i in range(inst.machines):
            vid = VarId(len(x_vars), _xname(t, i))
            xid[(t, i)] = vid
            x_vars.append((vid, VarBounds(0, inst.counts[t])))

    # total delay the adversary may hand out
    rows_z = (
        LinearRow({vid: 1 for vid, _ in z_vars}, Rel.LEQ, inst.K),
    )

    # every job of every type is placed somewhere
    rows_x = tuple(
        LinearRow(
            {xid[(t, i)]: 1 for i in range(inst.machines)},
            Rel.EQ,
            inst.counts[t],
        )
        for t in range(inst.ntypes)
    )

    # machine load plus its delay fits under the makespan
    rows_xz = []
    for i in range(inst.machines):
        coeffs = {xid[(t, i)]: inst.ptimes[t][i] for t in range(inst.ntypes)}
        coeffs[did[i]] = 1
        rows_xz.append(LinearRow(coeffs, Rel.LEQ, inst.cmax))

    return ResiliencySystem(
        tuple(x_vars), z_vars, rows_x, tuple(rows_xz), tuple(rows_z)
    )


def decode_scenario(inst: SchedulingInstance, scenario: IntAssignment) -> Tuple[int, ...]:
    """Scenario -> per-machine delay vector, validated against the budget."""
    values = scenario.by_name()
    expected = {_dname(i) for i in range(inst.machines)}
    if set(values) != expected:
        raise ValidationError("scenario names do not match the delay variables")
    delays = tuple(values[_dname(i)] for i in range(inst.machines))
    if any(d < 0 or d > inst.K for d in delays):
        raise ValidationError("delay outside [0, K]")
    if sum(delays) > inst.K:
        raise ValidationError(f"delays total {sum(delays)} > {inst.K}")
    return delays


def decode_schedule(
    inst: SchedulingInstance,
    delays: Tuple[int, ...],
    x_values: IntAssignment,
) -> List[List[int]]:
    """Assignment counts -> ``table[i][t]`` jobs of type t on machine i.

    Asserts the count rows (solver output is trusted to be a solution) and
    validates the finish-time contract for every machine.
    """
    values = x_values.by_name()
    table = [
        [values.get(_xname(t, i), 0) for t in range(inst.ntypes)]
        for i in range(inst.machines)
    ]
    for t in range(inst.ntypes):
        placed = sum(table[i][t] for i in range(inst.machines))
        assert placed == inst.counts[t], (
            f"type {t}: placed {placed} of {inst.counts[t]} jobs"
        )
    for i in range(inst.machines):
        load = delays[i] + sum(
            inst.ptimes[t][i] * table[i][t] for t in range(inst.ntypes)
        )
        if load > inst.cmax:
            raise ValidationError(
                f"machine {i} finishes at {load} > {inst.cmax}"
            )
    return table
