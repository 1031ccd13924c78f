"""Versioned JSON instance and result files, CSV sweep rows.

Instance and result files are JSON with a fixed key order and an explicit
version field, so goldens diff cleanly and other tooling can parse them.
Floats are serialized through repr and round-trip exactly; re-reading a
result record and re-running the feasibility check reproduces the recorded
residuals bit for bit.
"""

from __future__ import annotations

import json
from typing import Any, TextIO

from .errors import ParseError
from .groups import make_group
from .lp import (
    DelsarteInstance,
    DelsarteSolution,
    MembershipReport,
    Status,
)

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


def _coord_list(raw: Any, rank: int, label: str) -> list[tuple[int, ...]]:
    if not isinstance(raw, list):
        raise ParseError(f"{label} must be a list of coordinate tuples")
    out = []
    for pos, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != rank:
            raise ParseError(f"{label}[{pos}] must be a list of {rank} integers")
        coords = []
        for c in item:
            if not isinstance(c, int) or isinstance(c, bool):
                raise ParseError(f"{label}[{pos}] contains a non-integer coordinate")
            coords.append(c)
        out.append(tuple(coords))
    return out


def parse_instance_dict(data: Any) -> tuple[DelsarteInstance, float | None]:
    if not isinstance(data, dict):
        raise ParseError("instance file must contain a JSON object")
    if data.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported or missing version (expected {FORMAT_VERSION})")
    raw_group = data.get("group")
    if (
        not isinstance(raw_group, list)
        or not raw_group
        or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in raw_group)
    ):
        raise ParseError("group must be a nonempty list of integers >= 1")
    spec = make_group(raw_group)
    w_coords = _coord_list(data.get("W"), spec.rank, "W")
    q_coords = _coord_list(data.get("Q"), spec.rank, "Q")
    if not w_coords:
        raise ParseError("W must be nonempty")
    w = frozenset(spec.element(c) for c in w_coords)
    q = frozenset(spec.dual(c) for c in q_coords)
    if spec.zero() not in w:
        raise ParseError("W must contain the zero element")
    tolerance = data.get("tolerance")
    if tolerance is not None and not isinstance(tolerance, (int, float)):
        raise ParseError("tolerance must be a number")
    # an empty Q is representable and analytically infeasible; the solver
    # reports it as such rather than failing the parse
    inst = DelsarteInstance(spec, w, q, allow_empty_q=True)
    return inst, (float(tolerance) if tolerance is not None else None)


def parse_instance_text(text: str) -> tuple[DelsarteInstance, float | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_instance_dict(data)


def load_instance(path: str) -> tuple[DelsarteInstance, float | None]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_instance_text(text)


def instance_to_dict(inst: DelsarteInstance, tolerance: float | None = None) -> dict:
    out = {
        "version": FORMAT_VERSION,
        "group": list(inst.group.orders),
        "W": [list(g.coords) for g in inst.w_sorted()],
        "Q": [list(c.coords) for c in inst.q_sorted()],
    }
    if tolerance is not None:
        out["tolerance"] = tolerance
    return out


# ---------------------------------------------------------------------------
# result records
# ---------------------------------------------------------------------------


def _residuals_dict(rep: MembershipReport | None) -> dict | None:
    if rep is None:
        return None
    return {
        "is_member": rep.is_member,
        "min_spectrum": rep.posdef.min_spectrum,
        "max_imag_spectrum": rep.posdef.max_imag,
        "normalization_error": rep.normalization_error,
        "off_support_violation": rep.off_support_violation,
        "off_spectrum_violation": rep.off_spectrum_violation,
        "tol": rep.tol,
    }


def result_record(
    inst: DelsarteInstance,
    sol: DelsarteSolution,
    tolerance: float | None = None,
    oracle: dict | None = None,
    timing_seconds: float | None = None,
) -> dict:
    record: dict[str, Any] = {
        "version": FORMAT_VERSION,
        "instance_digest": inst.digest(),
        "instance": instance_to_dict(inst, tolerance),
        "status": sol.status.value,
        "value": sol.value,
        "f": None if sol.f is None else [float(v) for v in sol.f.values],
        "fourier_coeffs": None,
        "dual": None,
        "residuals": _residuals_dict(sol.residuals),
        "exact_recheck": None,
    }
    if sol.fourier_coeffs is not None and sol.basis is not None:
        record["fourier_coeffs"] = [
            {
                "orbit": [list(chi.coords) for chi in orbit],
                "weight": weight,
                "coeff": float(coeff),
            }
            for orbit, weight, coeff in zip(sol.basis.orbits, sol.basis.weights, sol.fourier_coeffs)
        ]
    if sol.dual is not None:
        record["dual"] = {
            "normalization_multiplier": sol.dual.normalization_multiplier,
            "off_support": [list(g.coords) for g in sol.dual.off_support],
            "multipliers": list(sol.dual.multipliers),
            "certified_upper_bound": sol.dual.certified_upper_bound,
        }
    if sol.exact is not None:
        record["exact_recheck"] = {
            "performed": sol.exact.performed,
            "consistent": sol.exact.consistent,
            "max_primal_violation": sol.exact.max_primal_violation,
            "max_dual_violation": sol.exact.max_dual_violation,
            "value_gap": sol.exact.value_gap,
        }
    if oracle is not None:
        record["oracle"] = oracle
    record["timing_seconds"] = timing_seconds
    return record


def read_result_function(record: dict) -> tuple[DelsarteInstance, "FunctionOnG | None"]:
    """Rebuild the instance and the recorded extremal function from a record."""
    from .fourier import FunctionOnG

    inst, _ = parse_instance_dict(record["instance"])
    if record.get("f") is None:
        return inst, None
    return inst, FunctionOnG(inst.group, record["f"])


def dump_json(obj: Any, fh: TextIO) -> None:
    json.dump(obj, fh, indent=2)
    fh.write("\n")


def write_json(path: str | None, obj: Any, default_fh: TextIO) -> None:
    if path is None:
        dump_json(obj, default_fh)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            dump_json(obj, fh)


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
