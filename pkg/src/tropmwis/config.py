"""Size caps for the exact oracles and the size margins asserted for compilers.

Caps can be raised through the ``TROPIC_MWIS_CAPS`` environment variable,
e.g. ``TROPIC_MWIS_CAPS="treewidth=14,balanced_separation=25"``.  The caps
guard test oracles; they are not meant to make the oracles production solvers.
"""
import dataclasses
import os

ENV_VAR = "TROPIC_MWIS_CAPS"


@dataclasses.dataclass(frozen=True)
class Caps:
    treewidth: int = 12
    treedepth: int = 14
    balanced_separation: int = 16
    hitting_exact: int = 22
    uniform_is: int = 24
    bruteforce: int = 24
    mwis_oracle: int = 30
    monomials: int = 2 ** 20
    max_rounds: int = 10 ** 6


# Multiplicative slack c in the size guarantees of the compilers:
#   treedepth formula   <= c * n * 2**depth
#   brute-force formula <= c * 2**n
#   cluster expander    <= c * d * 2**(w/d)
SIZE_MARGINS = {"treedepth": 8, "bruteforce": 4, "expander": 3}


def caps():
    """Current caps: defaults overridden by the environment variable."""
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return Caps()
    known = {f.name for f in dataclasses.fields(Caps)}
    overrides = {}
    for item in raw.split(","):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"{ENV_VAR}: unknown cap {key!r}")
        overrides[key] = int(value)
    return Caps(**overrides)
