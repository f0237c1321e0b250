"""Command-line front end: ``pgo <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import click

from pgo import checks
from pgo import quadratic_forms as qf
from pgo import realizations as R
from pgo.catalog import dim_vplus, lookup
from pgo.diagrams import WeightedSatakeDiagram, descent_classify
from pgo.errors import DomainError
from pgo.orbits import character_data, summarize
from pgo.padic import PadicContext

TAGS = click.Choice(sorted(R.MODELS))


def _emit(payload: Any, table: bool) -> None:
    if not table:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
        return
    for line in _table_lines(payload):
        click.echo(line)


def _table_lines(payload: Any, prefix: str = "") -> list:
    if isinstance(payload, dict):
        out = []
        for key in sorted(payload):
            out.extend(_table_lines(payload[key], f"{prefix}{key}."))
        return out
    if isinstance(payload, list) and any(isinstance(v, (dict, list)) for v in payload):
        out = []
        for i, v in enumerate(payload):
            out.extend(_table_lines(v, f"{prefix}{i}."))
        return out
    value = " ".join(str(v) for v in payload) if isinstance(payload, list) else payload
    return [f"{prefix.rstrip('.'):<40} {value}"]


def _context(prime: int) -> PadicContext:
    return PadicContext(prime)


def _output_options(fn: Callable) -> Callable:
    fn = click.option("--json", "mode", flag_value="json", default=True, help="JSON output (default).")(fn)
    fn = click.option("--table", "mode", flag_value="table", help="Flat key/value output.")(fn)
    return fn


def _prime_option(fn: Callable) -> Callable:
    return click.option("--prime", type=int, default=5, show_default=True, envvar="PGO_PRIME",
                        help="Odd prime p of the p-adic field (env PGO_PRIME).")(fn)


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON ({exc})") from exc


@click.group()
def main() -> None:
    """p-adic graded Lie algebras: diagrams, quadratic forms and orbits."""


@main.command()
@click.option("--diagram", "diagram_path", type=click.Path(exists=True, dir_okay=False), required=True)
@_prime_option
@_output_options
def classify(diagram_path: str, prime: int, mode: str) -> None:
    """Classify a weighted Satake diagram against the catalog."""
    _context(prime)
    diagram = WeightedSatakeDiagram.from_json(_load_json(diagram_path))
    desc = lookup(diagram)
    rank, one = descent_classify(diagram)
    _emit({
        "descriptor": desc.to_json(),
        "descent": {"rank": rank, "one_type": one.label()},
        "dim_vplus": dim_vplus(desc),
        "orbits": summarize(desc).to_json(),
        "characters": character_data(desc).to_json(),
    }, mode == "table")


@main.group()
def qform() -> None:
    """Quadratic forms over the p-adic field."""


@qform.command("classify")
@click.option("--coeffs", required=True, help="Comma-separated diagonal, e.g. 1,-u,-pi,upi.")
@_prime_option
@_output_options
def qform_classify(coeffs: str, prime: int, mode: str) -> None:
    ctx = _context(prime)
    q = qf.QForm.parse(coeffs, ctx)
    _emit({"prime": prime, "coeffs": [str(c) for c in q.coeffs]} | qf.describe(q), mode == "table")


@main.group()
def orbit() -> None:
    """Orbits of the matrix models."""


def _size_for(tag: str, n: Optional[int]) -> int:
    if tag == "ortho1":
        return 0
    if n is None:
        raise click.UsageError("--n is required for this tag")
    return n


@orbit.command("classify")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), required=True)
@_prime_option
@_output_options
def orbit_classify(matrix_path: str, prime: int, mode: str) -> None:
    """Orbit invariants of one element of V+."""
    data = _load_json(matrix_path)
    x = R.element_from_json(data, _context(int(data.get("prime", prime))))
    inv = R.orbit_invariants(x)
    _emit({"tag": x.tag, "invariant": inv.to_json(),
           "representative": R.element_to_json(x.model.representative(inv))}, mode == "table")


@orbit.command("enumerate")
@click.option("--tag", type=TAGS, required=True)
@click.option("--n", type=int, help="Matrix size n (gl/sp/unitary) or k (type3).")
@_prime_option
@_output_options
def orbit_enumerate(tag: str, n: Optional[int], prime: int, mode: str) -> None:
    """Brute-force list of nonzero orbit classes."""
    m = R.model(tag, _size_for(tag, n), _context(prime))
    classes = m.enumerate_orbit_classes()
    _emit({"tag": tag, "size": n, "prime": prime, "nonzero_classes": len(classes),
           "classes": [c.to_json() for c in classes]}, mode == "table")


@main.group()
def invariants() -> None:
    """Relative invariants Delta_j, nabla_j and the map psi."""


@invariants.command("eval")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), required=True)
@_prime_option
@_output_options
def invariants_eval(matrix_path: str, prime: int, mode: str) -> None:
    data = _load_json(matrix_path)
    x = R.element_from_json(data, _context(int(data.get("prime", prime))))
    m = x.model
    if x.sign > 0:
        values = {f"Delta_{j}": str(m.delta(j, x)) for j in range(m.k + 1)}
    else:
        values = {f"nabla_{j}": str(m.nabla(j, x)) for j in range(m.k + 1)}
    _emit({"tag": x.tag, "k": m.k, "side": "+" if x.sign > 0 else "-", "values": values}, mode == "table")


@invariants.command("psi-check")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), required=True)
@_prime_option
@_output_options
def invariants_psi_check(matrix_path: str, prime: int, mode: str) -> None:
    """Check nabla_j(psi X) Delta_0(X) = Delta_{k+1-j}(X) and the sl2-triple."""
    data = _load_json(matrix_path)
    x = R.element_from_json(data, _context(int(data.get("prime", prime))))
    m = x.model
    y = m.psi(x)
    d0 = m.delta(0, x)
    rows, ok = [], True
    for j in range(m.k + 1):
        lhs = m.nabla(j, y) * d0
        rhs = 1 if j == 0 else m.delta(m.k + 1 - j, x)
        ok &= lhs == rhs
        rows.append({"j": j, "lhs": str(lhs), "rhs": str(rhs), "equal": lhs == rhs})
    triple = m.triple_holds(x)
    _emit({"tag": x.tag, "psi": R.element_to_json(y), "identities": rows,
           "triple": triple, "ok": bool(ok and triple)}, mode == "table")
    if not (ok and triple):
        sys.exit(1)


@main.command("enumerate")
@click.option("--tag", type=TAGS, required=True)
@click.option("--n", type=int, help="Matrix size n (gl/sp/unitary) or k (type3).")
@_prime_option
@_output_options
def enumerate_cmd(tag: str, n: Optional[int], prime: int, mode: str) -> None:
    """Orbit classes with representatives, plus open P-orbit labels."""
    m = R.model(tag, _size_for(tag, n), _context(prime))
    classes = m.enumerate_orbit_classes()
    p_classes = m.enumerate_p_orbit_classes()
    desc = m.descriptor()
    _emit({
        "tag": tag, "size": n, "prime": prime,
        "descriptor": desc.to_json(),
        "orbits": [{"invariant": c.to_json(), "representative": R.element_to_json(m.representative(c))}
                   for c in classes],
        "p_orbit_classes": [list(c) for c in p_classes],
        "predicted": summarize(desc).to_json(),
    }, mode == "table")


@main.command()
@_prime_option
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")
@click.option("--only", type=int, multiple=True, help="Run only these criterion numbers.")
@click.option("--fixtures", "fixture_dir", type=click.Path(file_okay=False), default=None)
def selftest(prime: int, seed: int, only: Sequence[int], fixture_dir: Optional[str]) -> None:
    """Run the acceptance criteria; exit 1 if any fails."""
    ctx = _context(prime)
    bad = 0
    for number in only or sorted(checks.TITLES):
        if number not in checks.TITLES:
            raise click.UsageError(f"no criterion {number}")
        result = checks.run_criterion(number, ctx, seed,
                                      fixture_dir=Path(fixture_dir) if fixture_dir else None)
        click.echo(result.line())
        bad += not result.passed
    if bad:
        click.echo(f"{bad} criterion(s) failed")
        sys.exit(1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the exit code instead of exiting."""
    try:
        main.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def entry() -> None:
    sys.exit(run())
