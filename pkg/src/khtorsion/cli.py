"""``khtor``: homology tables, pattern detection and torsion certificates.

Exit status: 0 success, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .builtins import BUILTIN_NAMES, builtin
from .complex import viro_complex
from .diagram import DiagramError, LinkDiagram, a_smoothing_chord_diagram, load_diagram
from .homology import default_jobs, homology_table
from .pattern import find_patterns
from .torsion import CertificationError, certify_torsion

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
DEFAULT_MAX_CROSSINGS = 14
ENV_GUARD = "KHTOR_MAX_CROSSINGS"


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    pd: str | None = None
    builtin: str | None = None
    fmt: str = "table"
    mod2: bool = False
    max_crossings: int = DEFAULT_MAX_CROSSINGS
    jobs: int = 1
    r: int | None = None
    match: int | None = None
    i: int | None = None
    j: int | None = None
    out: str | None = None
    only: list | None = None

    def diagram(self) -> LinkDiagram:
        try:
            if self.builtin:
                d = builtin(self.builtin)
            elif self.pd:
                d = load_diagram(self.pd)
            else:
                raise InputError("give --pd FILE or --builtin NAME")
        except (OSError, DiagramError) as exc:
            raise InputError(str(exc)) from exc
        if d.n_crossings > self.max_crossings:
            raise InputError(f"{d.n_crossings} crossings exceeds the guard of {self.max_crossings} "
                             f"(raise --max-crossings or {ENV_GUARD})")
        return d


def _guard_default() -> int:
    raw = os.environ.get(ENV_GUARD)
    if raw is None:
        return DEFAULT_MAX_CROSSINGS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{ENV_GUARD} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pd", metavar="FILE", help="PD code or JSON diagram file")
    src.add_argument("--builtin", metavar="NAME", choices=BUILTIN_NAMES,
                     help="one of: " + ", ".join(BUILTIN_NAMES))
    common.add_argument("--format", dest="fmt", choices=("table", "json"), default="table")
    common.add_argument("--max-crossings", type=int, default=None,
                        help=f"refuse larger diagrams (default {DEFAULT_MAX_CROSSINGS}, or ${ENV_GUARD})")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for homology")

    p = argparse.ArgumentParser(prog="khtor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("table", parents=[common], help="Khovanov homology table")
    t.add_argument("--mod2", action="store_true", help="coefficients in Z/2")
    sub.add_parser("detect", parents=[common], help="list torsion patterns in the A-smoothing")
    c = sub.add_parser("certify", parents=[common], help="build and verify a torsion certificate")
    c.add_argument("--r", type=int, required=True, help="number of inner chords surgered (odd)")
    c.add_argument("--match", type=int, default=None, help="index into the detect listing")
    c.add_argument("--out", metavar="FILE", help="also write the certificate JSON here")
    m = sub.add_parser("matrix", parents=[common], help="export a boundary matrix as triplets")
    m.add_argument("--i", type=int, required=True)
    m.add_argument("--j", type=int, required=True)
    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=int, nargs="+", metavar="N", help="criterion numbers to run")
    return p


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    guard = ns.max_crossings if ns.max_crossings is not None else _guard_default()
    return RunConfig(
        command=ns.command, pd=ns.pd, builtin=ns.builtin, fmt=ns.fmt,
        mod2=getattr(ns, "mod2", False), max_crossings=guard,
        jobs=ns.jobs if ns.jobs is not None else default_jobs(),
        r=getattr(ns, "r", None), match=getattr(ns, "match", None),
        i=getattr(ns, "i", None), j=getattr(ns, "j", None),
        out=getattr(ns, "out", None), only=getattr(ns, "only", None))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_table(cfg: RunConfig, out=sys.stdout) -> int:
    d = cfg.diagram()
    table = homology_table(d, mod2=cfg.mod2, jobs=cfg.jobs)
    if cfg.fmt == "json":
        print(json.dumps(table.to_records(), indent=1), file=out)
        return EXIT_OK
    coeff = "Z/2" if cfg.mod2 else "Z"
    print(f"{d.name or 'diagram'}: {d.n_crossings} crossings, n+={d.positive_count} "
          f"n-={d.negative_count}, coefficients {coeff}", file=out)
    print("\ndiagram gradings (i, j):", file=out)
    print(table.render(), file=out, end="")
    print("\nlink gradings (h, q):", file=out)
    print(table.render(link_gradings=True), file=out, end="")
    return EXIT_OK


def _matches(d: LinkDiagram):
    return find_patterns(a_smoothing_chord_diagram(d))


def cmd_detect(cfg: RunConfig, out=sys.stdout) -> int:
    d = cfg.diagram()
    ms = _matches(d)
    records = []
    for k, m in enumerate(ms):
        rec = m.summary()
        rec["index"] = k
        rec["external_count"] = len(m.external)
        rec["predicted"] = [{"r": r, "i": i, "j": j} for r, i, j in m.torsion_bidegrees()]
        records.append(rec)
    if cfg.fmt == "json":
        print(json.dumps(records, indent=1), file=out)
        return EXIT_OK
    if not ms:
        print("no matches", file=out)
    for rec in records:
        print(f"[{rec['index']}] g={rec['g']} h={rec['h']} externals={rec['external_count']} "
              f"bipartite={'yes' if rec['bipartite'] else 'no'} "
              f"outer={rec['outer_crossings']} inner={rec['inner_crossings']}", file=out)
        for p in rec["predicted"]:
            print(f"     r={p['r']}: torsion predicted at (i,j)=({p['i']},{p['j']})", file=out)
    return EXIT_OK


def cmd_certify(cfg: RunConfig, out=sys.stdout) -> int:
    d = cfg.diagram()
    ms = _matches(d)
    if cfg.match is not None:
        if not 0 <= cfg.match < len(ms):
            raise InputError(f"--match {cfg.match} out of range ({len(ms)} matches)")
        candidates = [ms[cfg.match]]
    else:
        candidates = [m for m in ms if m.bipartite_ok and cfg.r < m.h] or ms
    if not candidates:
        raise InputError("no torsion pattern found in this diagram")
    try:
        cert = certify_torsion(d, candidates[0], cfg.r)
    except CertificationError as exc:
        raise InputError(f"cannot certify: {exc}") from exc
    text = cert.to_json(indent=1)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    if cfg.fmt == "json":
        print(text, file=out)
    else:
        print(cert.summary(), file=out)
    return EXIT_OK if cert.valid else EXIT_VERIFY


def cmd_matrix(cfg: RunConfig, out=sys.stdout) -> int:
    d = cfg.diagram()
    cx = viro_complex(d)
    bm = cx.boundary_matrix(cfg.i, cfg.j)
    if cfg.fmt == "json":
        print(json.dumps({"source": list(bm.source), "target": list(bm.target),
                          "shape": list(bm.shape), "rows": [sorted(r.items()) for r in bm.rows()]}),
              file=out)
    else:
        print(f"# d: C^{{{cfg.i},{cfg.j}}} -> C^{{{cfg.i + 1},{cfg.j}}}  shape {bm.shape}", file=out)
        print(bm.triplets(), file=out, end="")
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, out=sys.stdout) -> int:
    from .acceptance import run_all
    outcomes = run_all(cfg.max_crossings, cfg.only)
    for o in outcomes:
        print(o.line(), file=out, flush=True)
    counts = {s: sum(o.status == s for o in outcomes) for s in ("PASS", "FAIL", "SKIP")}
    print(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped", file=out)
    return EXIT_VERIFY if counts["FAIL"] else EXIT_OK


COMMANDS = {"table": cmd_table, "detect": cmd_detect, "certify": cmd_certify,
            "matrix": cmd_matrix, "selftest": cmd_selftest}


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return COMMANDS[cfg.command](cfg, sys.stdout)
    except InputError as exc:
        print(f"khtor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # argparse usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
