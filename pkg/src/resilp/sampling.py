"""Seeded random instances at desk scale.

Each generator takes a ``random.Random`` and draws from the envelope the
test suite sweeps: small enough for the brute-force deciders, varied
enough that both verdicts actually occur.  Determinism comes from the
caller owning the RNG.
"""

from __future__ import annotations

import random
from typing import Tuple

from .bribery import BriberyInstance, Election
from .closest_string import Alphabet, RcsInstance, StringMatrix, normalize
from .engine import ResiliencySystem
from .ilp import LinearRow, Rel, VarBounds, VarId
from .scheduling import SchedulingInstance
from .setcover import RdscpInstance

_AB = Alphabet(("a", "b"))


def random_system(rng: random.Random) -> ResiliencySystem:
    """Raw partitioned system: up to 3 variables per side in [0,3] boxes,
    up to 4 rows per block, coefficients and right sides in [-3,3]."""
    nx = rng.randint(0, 3)
    nz = rng.randint(0, 3)

    def boxes(prefix, count):
        out = []
        for i in range(count):
            lo = rng.randint(0, 3)
            hi = rng.randint(lo, 3)
            out.append((VarId(i, f"{prefix}{i}"), VarBounds(lo, hi)))
        return tuple(out)

    x_vars = boxes("x", nx)
    z_vars = boxes("z", nz)

    def row(pool, must_touch=()):
        coeffs = {}
        for vid, _ in pool:
            if rng.random() < 0.6:
                coeffs[vid] = rng.randint(-3, 3)
        for vid, _ in must_touch:
            coeffs.setdefault(vid, rng.choice([-3, -2, -1, 1, 2, 3]))
        rel = Rel.EQ if rng.random() < 0.2 else Rel.LEQ
        return LinearRow(coeffs, rel, rng.randint(-3, 3))

    rows_x = tuple(row(x_vars) for _ in range(rng.randint(0, 4)))
    rows_z = tuple(
        row(z_vars) for _ in range(rng.randint(0, 4) if nz else 0)
    )
    rows_xz = ()
    if nx and nz:
        # a mixed row must actually mention both sides to stay mixed
        rows_xz = tuple(
            row(
                x_vars + z_vars,
                must_touch=(
                    x_vars[rng.randrange(nx)],
                    z_vars[rng.randrange(nz)],
                ),
            )
            for _ in range(rng.randint(0, 4))
        )
    return ResiliencySystem(x_vars, z_vars, rows_x, rows_xz, rows_z)


def random_rdscp(rng: random.Random) -> RdscpInstance:
    n = rng.randint(1, 3)
    m = rng.randint(1, 5)
    family = []
    for _ in range(m):
        size = rng.randint(0, n)
        family.append(tuple(sorted(rng.sample(range(1, n + 1), size))))
    return RdscpInstance(
        n, tuple(family), rng.randint(0, 2), rng.randint(1, 2), rng.randint(1, 3)
    )


def random_rcs(rng: random.Random) -> RcsInstance:
    k = rng.randint(1, 3)
    length = rng.randint(1, 3)
    raw = StringMatrix(
        _AB,
        tuple(
            "".join(rng.choice("ab") for _ in range(length)) for _ in range(k)
        ),
    )
    matrix, _ = normalize(raw)
    return RcsInstance(
        matrix, rng.randint(0, 2), rng.randint(0, min(2, k * length))
    )


def random_sched(rng: random.Random) -> SchedulingInstance:
    machines = rng.randint(1, 3)
    ntypes = rng.randint(1, 2)
    ptimes = tuple(
        tuple(rng.randint(0, 3) for _ in range(machines))
        for _ in range(ntypes)
    )
    counts = tuple(rng.randint(0, 4) for _ in range(ntypes))
    return SchedulingInstance(
        machines, ptimes, counts, rng.randint(0, 3), rng.randint(0, 8)
    )


def random_bribery(rng: random.Random) -> BriberyInstance:
    m = rng.randint(2, 3)
    census = {}
    for _ in range(rng.randint(0, 4)):
        order = tuple(rng.sample(range(1, m + 1), m))
        census[order] = census.get(order, 0) + 1
    plurality: Tuple[int, ...] = tuple([1] + [0] * (m - 1))
    borda: Tuple[int, ...] = tuple(range(m - 1, -1, -1))
    scoring = plurality if rng.random() < 0.5 else borda
    return BriberyInstance(
        Election(m, census, scoring), rng.randint(0, 2), rng.randint(0, 2)
    )
