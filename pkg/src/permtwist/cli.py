"""Command-line driver: parse a lattice file, run verification suites, report.

Machine format emits one ``key=value`` line per report so runs can be
diffed; text format is a human-readable pass/fail table.  Exit status is 0
exactly when every executed check passes.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import characters, coeffs, isomap
from .cocycle import TwistSystem
from .exact import lemma_root_sum
from .fock import weight_basis
from .lattice import Lattice, LatticeError
from .report import Report

SUBCOMMANDS = ("lemma", "coeffs", "chars", "thm41", "iso", "verify-all")


@dataclass
class RunConfig:
    lattice_path: str | None = None
    k: int = 2
    q_order: Fraction = Fraction(10)
    weight_cutoff: Fraction = Fraction(2)
    mode_bound: Fraction = Fraction(2)
    fmt: str = "text"
    lattice: Lattice | None = field(default=None, repr=False)


class LatticeFileError(ValueError):
    pass


def parse_lattice_file(path: str) -> Lattice:
    """Read the lattice text format: name, rank, gram with '#' comments."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    fields: dict[str, str] = {}
    pending_key = None
    pending_val: list[str] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if pending_key is None:
            if "=" not in stripped:
                raise LatticeFileError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (part.strip() for part in stripped.split("=", 1))
            if not key:
                raise LatticeFileError(f"{path}:{lineno}: empty key")
            if key in fields:
                raise LatticeFileError(f"{path}:{lineno}: duplicate key {key!r}")
        else:
            key, val = pending_key, " ".join(pending_val + [stripped])
        if key == "gram" and val.count("[") != val.count("]"):
            pending_key, pending_val = key, val.split()
            continue
        pending_key, pending_val = None, []
        fields[key] = val
    if pending_key is not None:
        raise LatticeFileError(f"{path}: unterminated value for {pending_key!r}")
    for required in ("rank", "gram"):
        if required not in fields:
            raise LatticeFileError(f"{path}: missing field {required!r}")
    try:
        rank = int(fields["rank"])
    except ValueError:
        raise LatticeFileError(f"{path}: rank must be an integer") from None
    import json
    try:
        gram = json.loads(fields["gram"])
    except json.JSONDecodeError as exc:
        raise LatticeFileError(
            f"{path}: gram parse error at line offset {exc.lineno}, column {exc.colno}"
        ) from None
    if (not isinstance(gram, list) or len(gram) != rank
            or any(not isinstance(r, list) or len(r) != rank for r in gram)
            or any(not isinstance(x, int) for r in gram for x in r)):
        raise LatticeFileError(f"{path}: gram must be a {rank}x{rank} integer matrix")
    return Lattice(gram, name=fields.get("name", ""))


# -- sub-checks ---------------------------------------------------------------


def run_lemma(cfg: RunConfig) -> list[Report]:
    out = []
    for m in range(1, 25):
        value = lemma_root_sum(m)
        expected = Fraction(-(m * m - 1), 12)
        ok = value.is_rational() and value.as_rational() == expected
        out.append(Report(
            check_id=f"root-sum[m={m}]",
            anchor="root-of-unity-sum-identity",
            status="pass" if ok else "fail",
            witness="" if ok else f"value {value} expected {expected}"))
    return out


def run_coeffs(cfg: RunConfig) -> list[Report]:
    out = []
    k = cfg.k
    system = TwistSystem(cfg.lattice, k)
    series = coeffs.c_coeffs(system, 0, 4)
    c110 = series.get(1, 1)
    closed = coeffs.c110_closed_form(system)
    expected = Fraction(k * k - 1, 24 * k * k)
    ok = (c110.is_rational() and c110.as_rational() == closed == expected
          and series.get(0, 0).is_zero())
    out.append(Report(
        check_id=f"c110[k={k}]",
        anchor="log-series-weight-shift",
        status="pass" if ok else "fail",
        witness="" if ok else f"series {c110} closed {closed} expected {expected}"))
    avals = coeffs.a_coeffs(k, 9)
    ok_a = avals[0] == Fraction(1 - k, 2) and avals[1] == Fraction(k * k - 1, 12)
    out.append(Report(
        check_id=f"a-coeffs[k={k}]",
        anchor="change-of-variables-coefficients",
        status="pass" if ok_a else "fail",
        witness="" if ok_a else f"a1={avals[0]} a2={avals[1]}"))
    got = coeffs.substitute_flow(avals, 10)
    want = [Fraction(0)] * 11
    for t in range(1, 11):
        want[t] = coeffs.rational_binomial(k, t) / k
    ok_rt = got[:11] == want
    out.append(Report(
        check_id=f"a-roundtrip[k={k}]",
        anchor="change-of-variables-roundtrip",
        status="pass" if ok_rt else "fail",
        witness="" if ok_rt else f"flow {got} target {want}"))
    return out


def run_chars(cfg: RunConfig) -> list[Report]:
    out = []
    K, k, order = cfg.lattice, cfg.k, cfg.q_order
    base = characters.char_voa(K, order)
    twisted = characters.char_twisted(K, k, order)
    theta = characters.theta_series(K, order)
    etad = characters.eta_power(K.rank, order + Fraction(K.rank, 24) + 1)
    for name, series in (("theta", theta), ("eta-power", etad),
                         ("char-base", base), ("char-twisted", twisted)):
        out.append(Report(
            check_id=f"series[{name}]",
            anchor="graded-dimension-series",
            status="pass",
            witness=repr(series)))
    shift = characters.twisted_lead_exponent(K, k)
    ok_counts = all(
        c == int(c) and c >= 0
        for _, c in twisted.items())
    out.append(Report(
        check_id=f"twisted-coefficients-integral[k={k}]",
        anchor="state-counting",
        status="pass" if ok_counts else "fail",
        witness="" if ok_counts else repr(twisted)))
    ok_lead = twisted.leading_exponent() == shift
    out.append(Report(
        check_id=f"twisted-leading-exponent[k={k}]",
        anchor="twisted-vacuum-grade",
        status="pass" if ok_lead else "fail",
        witness="" if ok_lead else f"lead {twisted.leading_exponent()} expected {shift}"))
    return out


def run_thm41(cfg: RunConfig) -> list[Report]:
    return characters.compare_thm41(cfg.lattice, cfg.k, cfg.q_order)


def run_iso(cfg: RunConfig) -> list[Report]:
    system = TwistSystem(cfg.lattice, cfg.k)
    basis = weight_basis(system, "T", cfg.weight_cutoff)
    modes = isomap.default_mode_set(system, cfg.mode_bound)
    out = []
    for name, u in isomap.generator_family(system):
        failures = []
        count = 0
        for v in basis:
            for rep in isomap.intertwine_check(system, u, v, modes, label=name):
                count += 1
                if not rep.passed:
                    failures.append(rep.witness)
        ok = not failures
        out.append(Report(
            check_id=f"intertwine[{name}]",
            anchor="twisted-operator-intertwining",
            status="pass" if ok else "fail",
            witness=f"{count} modes checked" if ok else failures[0]))
    return out


_RUNNERS = {
    "lemma": run_lemma,
    "coeffs": run_coeffs,
    "chars": run_chars,
    "thm41": run_thm41,
    "iso": run_iso,
}


def cmd(name: str, cfg: RunConfig) -> tuple[list[Report], int]:
    """Run one subcommand (or all); returns reports and exit status."""
    if name not in SUBCOMMANDS:
        raise ValueError(f"unknown subcommand {name!r}")
    needs_lattice = name != "lemma"
    if needs_lattice and cfg.lattice is None:
        if not cfg.lattice_path:
            raise LatticeFileError("subcommand requires --lattice")
        cfg.lattice = parse_lattice_file(cfg.lattice_path)
    reports: list[Report] = []
    if name == "verify-all":
        for sub in ("lemma", "coeffs", "chars", "thm41", "iso"):
            reports.extend(_RUNNERS[sub](cfg))
    else:
        reports = _RUNNERS[name](cfg)
    status = 0 if all(r.passed for r in reports) else 1
    return reports, status


def emit(reports: list[Report], fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "machine":
        for r in reports:
            stream.write(r.machine_line() + "\n")
    else:
        for r in reports:
            stream.write(r.text_line() + "\n")
        failed = sum(0 if r.passed else 1 for r in reports)
        stream.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="permtwist",
        description="exact verification of the two twisted-module constructions")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--lattice", help="path to a lattice spec file")
    parser.add_argument("--k", type=int, default=2, help="number of tensor factors")
    parser.add_argument("--q-order", type=Fraction, default=Fraction(10))
    parser.add_argument("--weight-cutoff", type=Fraction, default=Fraction(2))
    parser.add_argument("--mode-bound", type=Fraction, default=Fraction(2))
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    args = parser.parse_args(argv)
    cfg = RunConfig(lattice_path=args.lattice, k=args.k, q_order=args.q_order,
                    weight_cutoff=args.weight_cutoff, mode_bound=args.mode_bound,
                    fmt=args.format)
    try:
        reports, status = cmd(args.subcommand, cfg)
    except (LatticeFileError, LatticeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(reports, cfg.fmt)
    return status


if __name__ == "__main__":
    sys.exit(main())
