"""Search budgets and route switches for the factorization pipeline."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from ..elemdecomp import DecompBudget
from ..errors import ParseError

ENV_BUDGET = "IDEMFACTOR_BUDGET"


@dataclass(frozen=True)
class PipelineOptions:
    height_budget: int = 10**6       # |v| limit in norm-form enumeration (principality, divisors)
    f_max: int = 10**6               # prime search window before the doubling retry
    e_max: int = 10**5               # Case 2 shift scan limit
    gamma_radius: int = 4            # kernel-shift window for the rational-entry split
    gamma_candidates: int = 8        # unimodular kernel shifts compared by word length
    swap_mode: str = "idempotent"    # or "column": route (0 0; 1 0) through column_unit_cert
    early_reduction: bool = True     # unit/principal/strip tests before integerization
    decomp: DecompBudget = field(default_factory=DecompBudget)

    def __post_init__(self):
        if self.swap_mode not in ("idempotent", "column"):
            raise ValueError(f"swap_mode must be 'idempotent' or 'column', not {self.swap_mode!r}")


_DECOMP_KEYS = {f.name for f in fields(DecompBudget)}


def _coerce(value: str, like):
    if isinstance(like, bool):
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ParseError(f"expected a boolean, got {value!r}")
    if isinstance(like, int):
        try:
            return int(value)
        except ValueError as exc:
            raise ParseError(f"expected an integer, got {value!r}") from exc
    return value


def apply_overrides(opts: PipelineOptions, items) -> PipelineOptions:
    """Apply `key=value` strings; decomposition keys may be written bare or as `decomp.key`."""
    top, dec = {}, {}
    for item in items:
        if not item:
            continue
        if "=" not in item:
            raise ParseError(f"budget override must look like key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        key = key.removeprefix("decomp.")
        if key in _DECOMP_KEYS:
            dec[key] = _coerce(value, getattr(opts.decomp, key))
        elif key in {f.name for f in fields(PipelineOptions)} and key != "decomp":
            top[key] = _coerce(value, getattr(opts, key))
        else:
            raise ParseError(f"unknown budget key {key!r}")
    if dec:
        top["decomp"] = replace(opts.decomp, **dec)
    return replace(opts, **top)


def options_from_env(environ=None) -> PipelineOptions:
    env = os.environ if environ is None else environ
    raw = env.get(ENV_BUDGET, "")
    return apply_overrides(PipelineOptions(), [s for s in raw.split(",") if s.strip()])
