"""Python bindings for the diffgal C++ core."""

import json

from . import _core
from ._core import DomainError, GuardExceeded, ParseError, Unsupported

__all__ = [
    "DomainError",
    "GuardExceeded",
    "ParseError",
    "Unsupported",
    "run",
    "structure_group",
    "brute_force_group",
    "random_structure",
    "multiplicative_lattice",
    "invariants",
]


def run(*args):
    """Run a CLI subcommand; returns (exit_code, stdout, stderr)."""
    return _core.run([str(a) for a in args])


def structure_group(structure):
    return json.loads(_core.structure_group(json.dumps(structure)))


def brute_force_group(structure, max_size=6):
    return json.loads(_core.structure_brute_group(json.dumps(structure), max_size))


def random_structure(seed, max_q=4, max_d=2, max_x=5):
    return json.loads(_core.random_structure(seed, max_q, max_d, max_x))


def multiplicative_lattice(values):
    return _core.multiplicative_lattice([str(v) for v in values])


def invariants(system, d=4, k=2, m=4):
    return json.loads(_core.invariants(json.dumps(system), d, k, m))
