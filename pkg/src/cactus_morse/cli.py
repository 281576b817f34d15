"""Command-line entry point: ``cactus-morse``.

Exit codes: 0 success, 1 a verified property failed (witnesses printed),
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from cactus_morse import __version__, graphs, morse, quotient, verify
from cactus_morse.complexes import betti
from cactus_morse.faults import FAULTS, inject_fault

CACHE_ENV = "CACTUS_MORSE_CACHE"
FORMATS = ("table", "json", "csv")
SUITE_DEFAULT_RANK = {"morse": 4, "links": 4, "detect": 6, "homology": 4, "stability": 4}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    rank: int | None = None
    coweight: int | None = None
    cache_dir: Path | None = None
    output_format: str = "table"
    jobs: int = 1

    def __post_init__(self):
        if self.rank is not None and self.rank < 1:
            raise UsageError("rank must be at least 1")
        if self.coweight is not None and self.rank is not None and not 0 <= self.coweight <= self.rank - 1:
            raise UsageError(f"coweight must lie in [0, {self.rank - 1}]")
        if self.output_format not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")


@dataclass
class Table:
    """What a command prints: a title, typed rows and free-form metadata."""

    title: str
    columns: list[str]
    rows: list[dict]
    meta: dict

    def to_json(self) -> str:
        return json.dumps({"title": self.title, "columns": self.columns, "rows": self.rows,
                           "meta": self.meta}, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _csv_cell(row[k]) for k in self.columns})
        return buf.getvalue()

    def to_text(self) -> str:
        cells = [[str(_csv_cell(r[c])) for c in self.columns] for r in self.rows]
        widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(self.columns)]
        lines = [self.title, "  ".join(c.ljust(w) for c, w in zip(self.columns, widths))]
        lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)) for r in cells]
        lines += [f"{k}: {v}" for k, v in self.meta.items()]
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "table": self.to_text}[fmt]()


def _csv_cell(x):
    if isinstance(x, (list, dict, bool)) or x is None:
        return json.dumps(x)
    return x


def _parse_cell(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def read_rows(text: str, fmt: str) -> list[dict]:
    """Parse rows emitted in ``json`` or ``csv`` format back into Python values."""
    if fmt == "json":
        return json.loads(text)["rows"]
    if fmt == "csv":
        return [{k: _parse_cell(v) for k, v in row.items()}
                for row in csv.DictReader(io.StringIO(text))]
    raise ValueError(f"cannot parse format {fmt!r}")


def resolve_cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    return Path.home() / ".cache" / "cactus-morse"


def _ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create cache directory {path}: {exc.strerror}") from exc
    if not os.access(path, os.W_OK):
        raise OSError(f"cache directory {path} is not writable")
    return path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_enumerate(cfg: RunConfig) -> tuple[Table, int]:
    n = cfg.rank
    cache = _ensure_dir(cfg.cache_dir)
    path = cache / f"catalog-v{__version__}-rank{n}.txt"
    if path.exists():
        _, codes = graphs.read_catalog(path)
        source = "cache"
    else:
        graphs.write_catalog(path, n)
        codes = graphs.enumerate_cactus_graphs(n)
        source = "computed"
    rows = []
    for code in codes:
        g = graphs.from_code(code)
        b, c = graphs.weight_coweight(g)
        rows.append({"code": code, "vertices": g.num_vertices, "weight": b, "coweight": c,
                     "thin": morse.is_thin(g)})
    meta = {"rank": n, "count": len(codes), "catalog": str(path), "source": source}
    return Table(f"cactus graphs of rank {n}: {len(codes)}",
                 ["code", "vertices", "weight", "coweight", "thin"], rows, meta), 0


def _betti_rows(q, b):
    top = max(len(b.unreduced), len(q.counts))
    return [{"dim": i, "cells": q.counts[i] if i < len(q.counts) else 0,
             "betti": b.unreduced_at(i), "reduced_betti": b.reduced_at(i)} for i in range(top)]


def cmd_homology(cfg: RunConfig) -> tuple[Table, int]:
    n, c = cfg.rank, cfg.coweight
    q = quotient.cached_sigma_q(n, c, _ensure_dir(cfg.cache_dir))
    b = betti(q.complex)
    label = f"ΣQ_{n}" if c is None else f"ΣQ_{n},{c}"
    meta = {"rank": n, "coweight": c, "unreduced": list(b.unreduced),
            "reduced": list(b.reduced), "acyclic": b.is_acyclic(),
            "euler_characteristic": q.complex.euler_characteristic()}
    return Table(f"rational homology of {label}", ["dim", "cells", "betti", "reduced_betti"],
                 _betti_rows(q, b), meta), 0


def cmd_stability(cfg: RunConfig) -> tuple[Table, int]:
    n, c = cfg.rank, cfg.coweight
    if c is None:
        raise UsageError("stability needs --coweight")
    cache = _ensure_dir(cfg.cache_dir)
    m = quotient.iota(n, c, quotient.cached_sigma_q(n, c, cache),
                      quotient.cached_sigma_q(n + 1, c, cache))
    bs, bt = betti(m.source.complex), betti(m.target.complex)
    rel = m.relative_betti()
    top = max(len(m.source.counts), len(m.target.counts), len(rel))
    rows = [{"dim": i,
             "source_cells": m.source.counts[i] if i < len(m.source.counts) else 0,
             "target_cells": m.target.counts[i] if i < len(m.target.counts) else 0,
             "source_betti": bs.unreduced_at(i), "target_betti": bt.unreduced_at(i),
             "relative_betti": rel[i] if i < len(rel) else 0} for i in range(top)]
    bijection_range, equivalence_range = 2 * c < n + 1, 3 * c < 2 * (n + 1)
    meta = {"rank": n, "coweight": c, "injective": m.is_injective(),
            "preserves_dimension": m.preserves_dimension(),
            "chain_map": not m.chain_map_failures(),
            "bijective": m.bijective_in_each_dimension(),
            "in_bijection_range": bijection_range, "in_equivalence_range": equivalence_range}
    ok = meta["injective"] and meta["preserves_dimension"] and meta["chain_map"]
    if bijection_range:
        ok = ok and meta["bijective"]
    if equivalence_range:
        ok = ok and bs.unreduced == bt.unreduced and not any(rel)
    return Table(f"stabilisation ΣQ_{n},{c} -> ΣQ_{n + 1},{c}",
                 ["dim", "source_cells", "target_cells", "source_betti", "target_betti",
                  "relative_betti"], rows, meta), 0 if ok else 1


def run_suite(name: str, max_n: int | None, cfg: RunConfig) -> verify.VerificationReport:
    n = max_n or SUITE_DEFAULT_RANK[name]
    cache = _ensure_dir(cfg.cache_dir) if name in ("homology", "stability") else None
    if name == "links":
        return verify.verify_links(n, jobs=cfg.jobs)
    if name in ("homology", "stability"):
        return verify.SUITES[name](n, cache_dir=cache)
    return verify.SUITES[name](n)


def cmd_verify(cfg: RunConfig, suite: str, max_n: int | None, fault: str | None,
               timing: bool) -> tuple[str, int]:
    names = list(verify.SUITES) if suite == "all" else [suite]
    if max_n is not None and max_n < 1:
        raise UsageError("max-rank must be at least 1")
    if suite == "stability" and max_n is not None and max_n < 2:
        raise UsageError("the stability suite needs max-rank at least 2")
    reports, skipped = [], []
    with inject_fault(fault):
        for name in names:
            if name == "stability" and max_n == 1:
                skipped.append(name)
                continue
            reports.append(run_suite(name, max_n, cfg))
    code = 0 if all(r.passed for r in reports) else 1
    fmt = cfg.output_format
    if fmt == "json":
        payload = [r.to_dict(timing) for r in reports]
        text = json.dumps(payload[0] if suite != "all" else
                          {"reports": payload, "skipped": skipped}, sort_keys=True)
    elif fmt == "csv":
        rows = [{"suite": r.suite, "status": r.status, "params": r.params,
                 "failures": len(r.counterexamples), "witness": r.witness,
                 **({"seconds": round(r.seconds, 3)} if timing else {})} for r in reports]
        cols = ["suite", "status", "params", "failures", "witness"] + (["seconds"] if timing else [])
        text = Table("", cols, rows, {}).to_csv()
    else:
        parts = [r.table() + f"\n  seconds: {r.seconds:.2f}" for r in reports]
        parts += [f"{name}: skipped (needs max-rank >= 2)" for name in skipped]
        if fault:
            parts.append(f"fault injected: {fault}")
        text = "\n".join(parts)
    return text, code


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help=f"cache directory (default: ${CACHE_ENV} or ~/.cache/cactus-morse)")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(prog="cactus-morse", parents=[common],
                                description="Cactus graph Morse theory and rational homology of ΣQ_n.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="list reduced cactus graphs of a rank")
    e.add_argument("--rank", type=int, required=True)

    h = sub.add_parser("homology", parents=[common], help="Betti numbers of ΣQ_n or ΣQ_{n,c}")
    h.add_argument("--rank", type=int, required=True)
    h.add_argument("--coweight", type=int)

    s = sub.add_parser("stability", parents=[common], help="check the map ΣQ_{n,c} -> ΣQ_{n+1,c}")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--coweight", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    v.add_argument("--max-rank", type=int)
    v.add_argument("--inject-fault", choices=FAULTS, help="corrupt a primitive to test the suites")
    v.add_argument("--timing", action="store_true", help="include run times in json/csv output")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(command=args.command, rank=getattr(args, "rank", None),
                        coweight=getattr(args, "coweight", None),
                        cache_dir=resolve_cache_dir(getattr(args, "cache_dir", None)),
                        output_format=getattr(args, "format", "table"),
                        jobs=getattr(args, "jobs", 1))
        if args.command == "verify":
            text, code = cmd_verify(cfg, args.suite, args.max_rank, args.inject_fault, args.timing)
        else:
            command = {"enumerate": cmd_enumerate, "homology": cmd_homology,
                       "stability": cmd_stability}[args.command]
            table, code = command(cfg)
            text = table.render(cfg.output_format)
    except UsageError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"cactus-morse: error: {exc}", file=sys.stderr)
        return 2
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))
    return code


if __name__ == "__main__":
    sys.exit(main())
