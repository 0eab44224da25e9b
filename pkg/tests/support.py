"""Shared chains, element strategies and helpers for the test suite."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from lexchain.chains import (
    EMPTY_MAP,
    Fin,
    FinIdx,
    Fix,
    HetProd,
    Kind,
    Nat,
    Omega,
    OmegaStar,
    Pow,
    SegLE,
    SegLT,
    StarIdx,
)
from lexchain.sampling import sample

f = FinIdx
n = Nat
s = StarIdx

ZOO = {
    "fin3": Fin(3),
    "omega": Omega(),
    "omegastar": OmegaStar(),
    "pow2_omega": Pow(Fin(2), f(0), Omega()),
    "pow3_fin3": Pow(Fin(3), f(1), Fin(3)),
    "pow_star_omega": Pow(OmegaStar(), s(0), Omega()),
    "pow_nested": Pow(Fin(2), f(0), Pow(Fin(2), f(1), Fin(2))),
    "le0_pow": SegLE(Pow(Fin(3), f(1), Omega()), EMPTY_MAP),
    "lt0_pow": SegLT(Pow(Fin(2), f(1), Fin(3)), EMPTY_MAP),
    "het": HetProd(((Fin(2), f(0)), (Omega(), n(0)), (Fin(3), f(1)))),
    "fix1_fin2": Fix(Kind.EQ1, Fin(2), f(1)),
    "fix2_star": Fix(Kind.EQ2, OmegaStar(), s(0)),
    "fix3_fin3": Fix(Kind.EQ3, Fin(3), f(2)),
    "pow_over_fix": Pow(Fin(2), f(1), Fix(Kind.EQ1, Fin(2), f(1))),
}

FINITE_ZOO = {
    "fin1": Fin(1),
    "fin4": Fin(4),
    "pow2_fin2": Pow(Fin(2), f(0), Fin(2)),
    "pow3_fin2": Pow(Fin(3), f(2), Fin(2)),
    "pow2_pow": Pow(Fin(2), f(1), Pow(Fin(2), f(0), Fin(2))),
    "le0": SegLE(Pow(Fin(3), f(1), Fin(2)), EMPTY_MAP),
    "lt0": SegLT(Pow(Fin(3), f(1), Fin(2)), EMPTY_MAP),
    "het": HetProd(((Fin(2), f(0)), (Fin(3), f(1)))),
    "fix_trivial": Fix(Kind.EQ1, Fin(2), f(0)),
}


def elements(chain, depth: int = 3):
    """Hypothesis strategy drawing seeded samples of ``chain``."""
    return st.integers(0, 2**32 - 1).map(lambda seed: sample(chain, random.Random(seed), depth))


def zoo_params(zoo: dict):
    import pytest

    return [pytest.param(c, id=name) for name, c in zoo.items()]


def random_chain(rng: random.Random, depth: int = 2):
    """A random well-formed chain descriptor with at most ``depth`` nested constructors."""
    from lexchain.errors import InvariantError

    while True:
        pick = rng.choice(["fin", "omega", "omegastar"] if depth <= 0 else
                          ["fin", "omega", "omegastar", "pow", "le0", "lt0", "solve"])
        try:
            if pick == "fin":
                return Fin(rng.randint(1, 5))
            if pick == "omega":
                return Omega()
            if pick == "omegastar":
                return OmegaStar()
            inner = random_chain(rng, depth - 1)
            point = sample(inner, rng, depth=1, max_support=2)
            if pick == "pow":
                return Pow(inner, point, random_chain(rng, depth - 1))
            if pick == "le0":
                return SegLE(inner, point)
            if pick == "lt0":
                return SegLT(inner, point)
            return Fix(Kind(rng.randint(1, 3)), inner, point)
        except (InvariantError, ValueError):
            continue  # solve2 with zero not last, or an empty strict segment


def random_expressions(count: int, seed: int = 0):
    """(chain, element) pairs for round-trip testing."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        c = random_chain(rng, rng.randint(0, 2))
        try:
            e = sample(c, rng, depth=2, max_support=3)
        except ValueError:
            continue  # empty strict segment
        out.append((c, e))
    return out


GOLDEN_DIR = __import__("pathlib").Path(__file__).parent / "golden"

# name -> (argv, expected exit status); expected stdout lives in golden/<name>.out
GOLDEN = {
    "cmp_power": (["cmp", "pow(fin(2),f0,fin(2))", "{}", "{f1:f1}"], 0),
    "solve_eq2_fin2": (["solve", "2", "fin(2)", "f0"], 2),
    "solve_eq3_fin3": (["solve", "3", "fin(3)", "f2"], 0),
    "solve_eq3_omega": (["solve", "3", "omega", "n0"], 2),
    "solve_eq2_omegastar": (["solve", "2", "omegastar", "s0"], 0),
    "refute_convex_prefix": (["refute-convex", "fin(2)", "f0", "omega", "f1", "--family", "prefix",
                              "--budget", "20"], 2),
    "refute_eq2_fin4": (["refute-eq2", "fin(2)", "f0", "fin(4)", "f1", "{}", "{f0:f1}",
                         "{f0:f1, f1:f1}", "{f0:f1, f1:f1, f2:f1}", "--budget", "10"], 2),
}


def run_cli(argv):
    """Run the CLI in-process; returns (status, stdout, stderr)."""
    import contextlib
    import io

    from lexchain.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()
