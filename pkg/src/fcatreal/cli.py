"""Command-line front end: ``fcatreal COMMAND --config NAME``.

Commands: check-axioms, ext-table, realize, verify-equivalence, functoriality.
The exit status is 0 when no check failed and none came back unknown.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import Mat, fmt_scalar
from .quiverrep import Rep, RepMor, TorsionPairError
from .complexes import Complex, cohomology_dims, derived_hom_dim, find_iso, is_acyclic
from .fcat import CheckRecord, FilteredComplex, check_f_axioms, check_gr_shift, check_omega_props, gr, random_samples
from .tstruct import check_cf_shift_law, check_trivial_heart, cohomology_t
from .realization import (
    RealizationError,
    eta_round_trip,
    functoriality_square,
    heart_cohomology,
    real_functor,
    verify_equivalence,
)
from .config import Config, ConfigError, parse_config

COMMANDS = ("check-axioms", "ext-table", "realize", "verify-equivalence", "functoriality")


@dataclass
class Report:
    command: str
    config: str
    seed: int
    samples: int
    quiver: str = ""
    tstructure: str = ""
    records: list = field(default_factory=list)   # CheckRecord
    timings: dict = field(default_factory=dict)   # record name -> seconds
    extra: dict = field(default_factory=dict)

    def add(self, rec: CheckRecord, seconds: float = 0.0):
        self.records.append(rec)
        self.timings[rec.name] = self.timings.get(rec.name, 0.0) + seconds

    def summary(self) -> str:
        statuses = {r.status for r in self.records}
        if "fail" in statuses:
            return "fail"
        if "unknown" in statuses:
            return "unknown"
        return "pass"


# -- plain data for the machine report --------------------------------------------------------

def to_plain(obj):
    if isinstance(obj, Fraction):
        return fmt_scalar(obj)
    if isinstance(obj, Mat):
        return obj.to_strings()
    if isinstance(obj, Rep):
        return {"dims": list(obj.dims),
                "maps": {l: m.to_strings() for (l, _, _), m in zip(obj.quiver.arrows, obj.maps)}}
    if isinstance(obj, RepMor):
        return {v: c.to_strings() for v, c in zip(obj.source.quiver.vertices, obj.comps)}
    if isinstance(obj, Complex):
        return {
            "terms": [{"degree": n, **to_plain(obj.term(n))} for n in obj.degrees()],
            "diffs": [{"degree": n, "comps": to_plain(obj.diff(n))} for n in obj.degrees() if n < obj.hi],
        }
    if isinstance(obj, FilteredComplex):
        return {"a": obj.a, "underlying": to_plain(obj.underlying),
                "gr": {str(p): to_plain(gr(obj, p)) for p in obj.filtration_range()}}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_plain(v) for v in obj)
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def machine_report(rep: Report) -> str:
    doc = {
        "command": rep.command,
        "config": rep.config,
        "seed": rep.seed,
        "samples": rep.samples,
        "quiver": rep.quiver,
        "tstructure": rep.tstructure,
        "records": [
            {"name": r.name, "status": r.status, "witnesses": to_plain(r.witnesses), "details": to_plain(r.details)}
            for r in rep.records
        ],
        "extra": to_plain(rep.extra),
        "summary": rep.summary(),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _short(w) -> str:
    s = json.dumps(to_plain(w), ensure_ascii=False)
    return s if len(s) <= 160 else s[:157] + "..."


def _complex_lines(x: Complex, indent: str) -> list:
    if x.is_zero():
        return [indent + "0"]
    out = []
    for n in x.degrees():
        m = x.term(n)
        maps = " ".join(f"{l}={json.dumps(mat.to_strings())}" for (l, _, _), mat in zip(m.quiver.arrows, m.maps)
                        if 0 not in mat.shape)
        out.append(f"{indent}degree {n}: dims {list(m.dims)}" + (f"  {maps}" if maps else ""))
        if n < x.hi and not x.diff(n).is_zero():
            comps = {v: c.to_strings() for v, c in zip(m.quiver.vertices, x.diff(n).comps) if 0 not in c.shape}
            out.append(f"{indent}  d: {json.dumps(comps)}")
    return out


def human_report(rep: Report) -> str:
    out = [f"{rep.command} on {rep.config}: quiver {rep.quiver}, t-structure {rep.tstructure}, "
           f"seed {rep.seed}, samples {rep.samples}"]
    for r in rep.records:
        clock = f"  ({rep.timings[r.name]:.2f}s)" if r.name in rep.timings else ""
        out.append(f"  [{r.status.upper():7}] {r.name}{clock}")
        for w in r.witnesses[:5]:
            out.append(f"      witness: {_short(w)}")
        if len(r.witnesses) > 5:
            out.append(f"      ... {len(r.witnesses) - 5} more")
        for k, v in r.details.items():
            if k == "result":
                out.append("      result:")
                out.extend(_complex_lines(v, "        "))
                continue
            out.append(f"      {k}: {_short(v)}")
    if "table" in rep.extra:
        out.append("  dim Hom(M, N[p])")
        for row in rep.extra["table"]:
            out.append(f"    {row['source']:>8} -> {row['target']:<8} p={row['p']}  {row['dim']}")
    if "conclusion" in rep.extra:
        out.append(f"  conclusion: {rep.extra['conclusion']}")
    out.append(f"summary: {rep.summary()}")
    return "\n".join(out) + "\n"


# -- commands ------------------------------------------------------------------------------

def _timed(report: Report, fn, *args):
    start = time.perf_counter()
    recs = fn(*args)
    took = time.perf_counter() - start
    recs = recs if isinstance(recs, (list, tuple)) else [recs]
    # a group of records shares one clock reading, shown on its first record
    report.add(recs[0], took)
    for r in recs[1:]:
        report.records.append(r)


def cmd_check_axioms(cfg: Config, report: Report):
    samples = random_samples(cfg.quiver, report.samples, report.seed) + [x for _, x in cfg.filtered]
    objects = [c for _, c in cfg.probes]
    named = cfg.probes + cfg.generators
    _timed(report, check_f_axioms, samples)
    _timed(report, check_gr_shift, samples)
    _timed(report, check_omega_props, samples, objects)
    _timed(report, check_cf_shift_law, samples, cfg.tstructure)
    _timed(report, check_trivial_heart, named, cfg.tstructure)


def cmd_ext_table(cfg: Config, report: Report):
    start = time.perf_counter()
    rows = []
    for mn, m in cfg.probes:
        for nn, n in cfg.probes:
            for p in (0, 1, 2):
                rows.append({"source": mn, "target": nn, "p": p, "dim": derived_hom_dim(m, n, p)})
    report.extra["table"] = rows
    report.add(CheckRecord("ext-table", "pass", [], {"entries": len(rows)}), time.perf_counter() - start)


def _t_cohomology_matches(real, k, t) -> list:
    bad = []
    lo = min(k.lo, -2) - 2
    hi = max(k.hi, 2) + 2
    for n in range(lo, hi + 1):
        a = cohomology_t(real, n, t).value
        b = heart_cohomology(k, n, t)
        if find_iso(a, b) is None:
            bad.append(n)
    return bad


def cmd_realize(cfg: Config, report: Report):
    t = cfg.tstructure
    for case in cfg.realize:
        start = time.perf_counter()
        k = case.complex
        r = real_functor(k, t)
        problems = []
        details = {"result": r, "cohomology": cohomology_dims(r), "acyclic": is_acyclic(r)}
        if case.expect_object is not None:
            ok = find_iso(r, case.expect_object) is not None
            details["expect"] = case.expect
            details["isomorphic_to_expect"] = ok
            if not ok:
                problems.append(f"not isomorphic to {case.expect}")
        ok, why = eta_round_trip(k, t)
        details["round_trip"] = ok
        if not ok:
            problems.append(f"round trip: {why}")
        bad = _t_cohomology_matches(r, k, t)
        details["t_exact"] = not bad
        if bad:
            problems.append(f"t-cohomology differs in degrees {bad}")
        rec = CheckRecord(f"realize: {case.name}", "fail" if problems else "pass", problems, details)
        report.add(rec, time.perf_counter() - start)


def cmd_verify_equivalence(cfg: Config, report: Report):
    start = time.perf_counter()
    v = verify_equivalence(cfg.tstructure, cfg.generators, cfg.probes)
    report.add(v.ext2, time.perf_counter() - start)
    report.records.extend([v.extensions, v.generation])
    report.extra["conclusion"] = v.conclusion


def cmd_functoriality(cfg: Config, report: Report):
    for case in cfg.functoriality:
        start = time.perf_counter()
        d = cfg.subcats[case.subcat]
        name = f"functoriality: {case.name}"
        verdicts = {n: d.contains(m) for n, m in case.complex.terms.items()}
        if "false" in verdicts.values():
            rec = CheckRecord(name, "fail", ["probe not in subcategory"], {"membership": verdicts})
        elif "unknown" in verdicts.values():
            rec = CheckRecord(name, "unknown", ["membership undecided at search depth"], {"membership": verdicts})
        else:
            sq = functoriality_square(d, cfg.tstructure, case.complex)
            rec = CheckRecord(name, "pass" if sq["commutes"] else "fail", [] if sq["commutes"] else ["routes differ"],
                              {"subcat": case.subcat, "subquiver": sq["subquiver"],
                               "cohomology": cohomology_dims(sq["outside"])})
        report.add(rec, time.perf_counter() - start)


HANDLERS = {
    "check-axioms": cmd_check_axioms,
    "ext-table": cmd_ext_table,
    "realize": cmd_realize,
    "verify-equivalence": cmd_verify_equivalence,
    "functoriality": cmd_functoriality,
}


def run_command(cmd: str, cfg: Config, seed: int = None, samples: int = None) -> Report:
    if cmd not in HANDLERS:
        raise ValueError(f"unknown command {cmd!r}")
    report = Report(cmd, cfg.name, cfg.seed if seed is None else seed, cfg.samples if samples is None else samples,
                    cfg.quiver_name, cfg.tstructure.label())
    HANDLERS[cmd](cfg, report)
    return report


def exit_status(report: Report, allow_unknown: bool = False) -> int:
    s = report.summary()
    if s == "pass" or (s == "unknown" and allow_unknown):
        return 0
    return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fcatreal", description="Filtered derived categories of quiver representations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="path to an instance file or a shipped name")
    ap.add_argument("--seed", type=int, default=None, help="seed for random samples (default: the config's [random] seed)")
    ap.add_argument("--samples", type=int, default=None, help="random samples per suite (default: the config's [random] samples)")
    ap.add_argument("--report", choices=("human", "machine"), default="human")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("--allow-unknown", action="store_true", help="exit 0 even when some checks are unknown")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        report = run_command(args.command, cfg, args.seed, args.samples)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RealizationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except TorsionPairError as e:
        print(f"error: {e}: {e.obj}", file=sys.stderr)
        return 3
    text = machine_report(report) if args.report == "machine" else human_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_status(report, args.allow_unknown)


if __name__ == "__main__":
    sys.exit(main())
