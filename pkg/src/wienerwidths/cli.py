"""Command-line interface: batch tables for every library operation.

Subcommands and their output columns (CSV by default, ``--format json``
for the same data as one JSON object):

    sigma            n, sigma, cum_inv_sq [, sigma_oracle]
    width            n, lower, upper, exact
    converge         n, raw, normalizer, ratio, target
    constants        name, value
    count            kind, s, r, dim, j, r_ell, count
    appendix-verify  section, r, ell, j, r_ell, count, ratio, target, ok
    integral         n, value, limit, abs_dev

Floats print with 17 significant digits and '.' decimal separator; output
is byte-identical across runs and thread counts (threads only fan out
independent rows through an order-preserving map).  Progress notes, if any,
go to stderr.  Exit codes: 0 success, 2 domain/usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .asymptotics import (
    CONSTANT_NAMES,
    ConstantSpec,
    ResourceLimitError,
    aux_integral,
    constant,
    convergence_table,
)
from .lattice_count import (
    count_A,
    count_A_split,
    count_C,
    lambda_split_exponent,
    sandwich_check,
    verify_appendix_limits,
)
from .sigma import (
    BoxTooSmallError,
    CumSumOverflowError,
    sigma_bruteforce,
    sigma_prefix,
)
from .weights import Family, WeightSpec
from .widths import Embedding, PrefixTooShortError, WidthKind, WidthQuery, width

__all__ = ["RunConfig", "main"]

_PREFIX_CAP = 30_000_000
_PROGRESS_AT = 1_000_000


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs; round-trips through to_dict/from_dict."""

    command: str
    family: str | None = None
    s: str | None = None
    r: str | None = None
    d: int | None = None
    n: str | None = None
    n_grid: str | None = None
    r_grid: str | None = None
    embedding: str | None = None
    kind: str | None = None
    p: float | None = None
    alpha: float | None = None
    beta: float | None = None
    target: float | None = None
    name: str | None = None
    ell: int | None = None
    j: int | None = None
    r_ell: str | None = None
    a: float | None = None
    tol: float | None = None
    threads: int = 1
    output: str | None = None
    format: str = "csv"
    prefix_n: int | None = None
    check_box_radius: int | None = None
    sandwich_r: str | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)

    def validate(self) -> None:
        """Reject invalid combinations before any computation starts."""
        required = {
            "sigma": ("family", "s", "d", "n"),
            "width": ("family", "s", "d", "n", "embedding", "kind"),
            "converge": (
                "family", "s", "d", "n_grid", "embedding", "kind",
                "alpha", "beta", "target",
            ),
            "constants": ("name",),
            "count": ("s", "r_grid"),
            "appendix-verify": ("s", "d", "r_grid"),
            "integral": ("s", "beta", "a", "n_grid"),
        }
        if self.command not in required:
            raise ValueError(f"unknown command {self.command!r}")
        for field in required[self.command]:
            if getattr(self, field) is None:
                raise ValueError(f"{self.command} requires --{field.replace('_', '-')}")
        if self.command == "count" and self.ell is None and self.d is None:
            raise ValueError("count requires --d (for C) or --ell (for A)")
        if self.command == "count" and self.j is not None and self.ell is None:
            raise ValueError("count --j requires --ell")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


# -- parsing helpers ---------------------------------------------------------


def _parse_int_list(text: str) -> list[int]:
    """Grids: comma-separated integers, 'a..b' inclusive ranges, 1e6 forms."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(float(lo)), int(float(hi)) + 1))
        elif part:
            out.append(int(float(part)))
    if not out:
        raise ValueError(f"empty grid: {text!r}")
    return out


def _parse_s_float(s: str) -> float:
    return float(Fraction(s))  # accepts "1.5" and "3/2"


def _make_spec(cfg: RunConfig) -> WeightSpec:
    try:
        family = Family(cfg.family)
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise ValueError(f"unknown family {cfg.family!r}; valid: {names}") from None
    r = None
    if cfg.r is not None:
        if cfg.r.lower() in ("inf", "infinity"):
            raise ValueError(
                "r=inf is spelled as the family variant "
                "(mixed-inf / isotropic-inf), not as a number"
            )
        r = _parse_s_float(cfg.r)
    return WeightSpec(family, s=_parse_s_float(cfg.s), d=cfg.d, r=r)


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("WIDTHS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- output ------------------------------------------------------------------


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _emit(cfg: RunConfig, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    if cfg.format == "json":
        payload = {
            "command": cfg.command,
            "columns": list(columns),
            "rows": [list(row) for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    out = open(cfg.output, "w", newline="") if cfg.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt_cell(x) for x in row])
    finally:
        if cfg.output:
            out.close()


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands -------------------------------------------------------------


def _cmd_sigma(cfg: RunConfig) -> int:
    spec = _make_spec(cfg)
    n_max = int(float(cfg.n))
    if n_max < 1:
        raise ValueError("--n must be >= 1")
    if n_max >= _PROGRESS_AT:
        _note(f"computing rearrangement prefix, N={n_max} ...")
    prefix = sigma_prefix(spec, n_max)
    columns = ["n", "sigma", "cum_inv_sq"]
    oracle = None
    if cfg.check_box_radius is not None:
        oracle = sigma_bruteforce(spec, n_max, cfg.check_box_radius)
        columns.append("sigma_oracle")
    rows = []
    for i in range(n_max):
        row = [i + 1, float(prefix.values[i]), float(prefix.cum_inv_sq[i])]
        if oracle is not None:
            row.append(float(oracle.values[i]))
        rows.append(row)
    _emit(cfg, columns, rows)
    return 0


def _needs_sup(embedding: Embedding, kind: WidthKind) -> bool:
    return kind in (WidthKind.APPROXIMATION, WidthKind.KOLMOGOROV) and embedding in (
        Embedding.A_TO_L2,
        Embedding.A_TO_LINF,
        Embedding.A_TO_LP,
        Embedding.CMIX_TO_L2,
        Embedding.AMIX_TO_H1,
    )


def _prefix_with_retry(cfg: RunConfig, spec: WeightSpec, n_hi: int, sup: bool, compute):
    """Run `compute(prefix)`, growing the prefix until the sup certificate
    fits; the starting size comes from --prefix-n when given."""
    if cfg.prefix_n is not None:
        n = max(cfg.prefix_n, n_hi)
    else:
        n = max(64, 4 * n_hi) if sup else n_hi
    while True:
        if n >= _PROGRESS_AT:
            _note(f"computing rearrangement prefix, N={n} ...")
        prefix = sigma_prefix(spec, n)
        try:
            return compute(prefix)
        except PrefixTooShortError as exc:
            n = max(2 * n, exc.required)
            if n > _PREFIX_CAP:
                raise ResourceLimitError(
                    f"prefix cap {_PREFIX_CAP} exceeded while growing toward "
                    f"the sup certificate ({exc})"
                ) from exc


def _cmd_width(cfg: RunConfig) -> int:
    spec = _make_spec(cfg)
    embedding = Embedding(cfg.embedding)
    kind = WidthKind(cfg.kind)
    ns = _parse_int_list(cfg.n)

    def compute(prefix):
        rows = []
        for n in ns:
            wv = width(prefix, WidthQuery(embedding, kind, n, p=cfg.p))
            rows.append([n, wv.lower, wv.upper, wv.exact])
        return rows

    rows = _prefix_with_retry(cfg, spec, max(ns), _needs_sup(embedding, kind), compute)
    _emit(cfg, ["n", "lower", "upper", "exact"], rows)
    return 0


def _cmd_converge(cfg: RunConfig) -> int:
    spec = _make_spec(cfg)
    embedding = Embedding(cfg.embedding)
    kind = WidthKind(cfg.kind)
    grid = _parse_int_list(cfg.n_grid)

    def compute(prefix):
        return convergence_table(
            prefix, embedding, kind, grid, cfg.alpha, cfg.beta, cfg.target,
            threads=cfg.threads,
        )

    table = _prefix_with_retry(cfg, spec, max(grid), _needs_sup(embedding, kind), compute)
    rows = [[r.n, r.raw, r.normalizer, r.ratio, r.target] for r in table.rows]
    _emit(cfg, ["n", "raw", "normalizer", "ratio", "target"], rows)
    return 0


def _cmd_constants(cfg: RunConfig) -> int:
    spec = ConstantSpec(
        cfg.name,
        s=None if cfg.s is None else _parse_s_float(cfg.s),
        d=cfg.d,
        tol=cfg.tol if cfg.tol is not None else 1e-10,
    )
    _emit(cfg, ["name", "value"], [[cfg.name, constant(spec)]])
    return 0


def _cmd_count(cfg: RunConfig) -> int:
    s_frac = Fraction(cfg.s)
    grid = _parse_int_list(cfg.r_grid)

    def row(r: int):
        if cfg.ell is None:
            return ["C", cfg.s, r, cfg.d, None, None, count_C(s_frac, r, cfg.d)]
        if cfg.j is None:
            return ["A", cfg.s, r, cfg.ell, None, None, count_A(s_frac, r, cfg.ell)]
        if cfg.r_ell is None or cfg.r_ell == "auto":
            r_ell = max(1, math.floor(r ** lambda_split_exponent(s_frac, cfg.ell)))
        else:
            r_ell = int(cfg.r_ell)
        cnt = count_A_split(s_frac, r, cfg.ell, cfg.j, r_ell)
        return ["A-split", cfg.s, r, cfg.ell, cfg.j, r_ell, cnt]

    rows = _ordered_map(row, grid, cfg.threads)
    _emit(cfg, ["kind", "s", "r", "dim", "j", "r_ell", "count"], rows)
    return 0


def _cmd_appendix_verify(cfg: RunConfig) -> int:
    s_frac = Fraction(cfg.s)
    grid = _parse_int_list(cfg.r_grid)
    tol = cfg.tol if cfg.tol is not None else 1e-10
    report = verify_appendix_limits(s_frac, cfg.d, grid, tol=tol, threads=cfg.threads)
    rows = []
    for row in report.rows:
        rows.append(
            ["c", row.r, None, None, None, row.count_c, row.c_over_r,
             report.c_over_r_target, None]
        )
        for cell in row.cells:
            section = "a" if cell.j is None else "a-split"
            rows.append(
                [section, row.r, cell.ell, cell.j, cell.r_ell, cell.count,
                 cell.ratio, cell.target, None]
            )
    if cfg.sandwich_r:
        for r in _parse_int_list(cfg.sandwich_r):
            ok = sandwich_check(s_frac, cfg.d, r)
            rows.append(["sandwich", r, None, None, None, None, None, None, ok])
    _emit(
        cfg,
        ["section", "r", "ell", "j", "r_ell", "count", "ratio", "target", "ok"],
        rows,
    )
    return 0


def _cmd_integral(cfg: RunConfig) -> int:
    s = _parse_s_float(cfg.s)
    limit = 1.0 / (s + 1.0)
    rows = []
    for n in _parse_int_list(cfg.n_grid):
        val = aux_integral(s, cfg.beta, cfg.a, n)
        rows.append([n, val, limit, abs(val - limit)])
    _emit(cfg, ["n", "value", "limit", "abs_dev"], rows)
    return 0


def _ordered_map(fn, items, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


_DISPATCH = {
    "sigma": _cmd_sigma,
    "width": _cmd_width,
    "converge": _cmd_converge,
    "constants": _cmd_constants,
    "count": _cmd_count,
    "appendix-verify": _cmd_appendix_verify,
    "integral": _cmd_integral,
}


# -- argument parsing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiener-widths",
        description="Exact widths of weighted Wiener and mixed-smoothness "
        "Sobolev embeddings; asymptotic and lattice-count verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", help="write to file instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for independent rows "
                       "(default: WIDTHS_THREADS or cpu count)")

    def weight_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", required=True,
                       choices=[f.value for f in Family])
        p.add_argument("--s", required=True, help="smoothness, e.g. 1.5 or 3/2")
        p.add_argument("--r", help="inner exponent for the -sr families")
        p.add_argument("--d", type=int, required=True, help="lattice dimension")

    p = sub.add_parser("sigma", help="rearrangement prefix table")
    weight_args(p)
    p.add_argument("--n", required=True, help="prefix length")
    p.add_argument("--check-box-radius", type=int,
                   help="also compute the brute-force oracle on this box and "
                   "emit it as a fourth column")
    common(p)

    p = sub.add_parser("width", help="width values/brackets on an n range")
    weight_args(p)
    p.add_argument("--embedding", required=True,
                   choices=[e.value for e in Embedding])
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in WidthKind])
    p.add_argument("--n", required=True, help="single n, list, or a..b")
    p.add_argument("--p", type=float, help="target exponent for a-to-lp")
    p.add_argument("--prefix-n", type=int, help="override prefix length")
    common(p)

    p = sub.add_parser("converge", help="normalized width ratios on an n grid")
    weight_args(p)
    p.add_argument("--embedding", required=True,
                   choices=[e.value for e in Embedding])
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in WidthKind])
    p.add_argument("--n-grid", required=True, dest="n_grid")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--prefix-n", type=int, help="override prefix length")
    common(p)

    p = sub.add_parser("constants", help="print a named constant")
    p.add_argument("--name", required=True, choices=list(CONSTANT_NAMES))
    p.add_argument("--s", help="smoothness, e.g. 1.5 or 3/2")
    p.add_argument("--d", type=int)
    p.add_argument("--tol", type=float, help="series tolerance where used")
    common(p)

    p = sub.add_parser("count", help="exact lattice counts C / A / A-split")
    p.add_argument("--s", required=True, help="smoothness, e.g. 2 or 3/2")
    p.add_argument("--d", type=int, help="dimension for C counts")
    p.add_argument("--ell", type=int, help="support size for A counts")
    p.add_argument("--j", type=int, help="split index for A-split counts")
    p.add_argument("--r-ell", dest="r_ell",
                   help="split cut (integer or 'auto' for floor(r^lambda))")
    p.add_argument("--r-grid", required=True, dest="r_grid",
                   help="thresholds, e.g. 1..50 or 100,200,400")
    common(p)

    p = sub.add_parser("appendix-verify",
                       help="all count ratios against their proven limits")
    p.add_argument("--s", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r-grid", required=True, dest="r_grid")
    p.add_argument("--sandwich-r", dest="sandwich_r",
                   help="also check rearrangement sandwich on these r, e.g. 2..8")
    p.add_argument("--tol", type=float, help="series tolerance")
    common(p)

    p = sub.add_parser("integral", help="sup-formula limit integral on an n grid")
    p.add_argument("--s", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--n-grid", required=True, dest="n_grid")
    common(p)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    data = {k: v for k, v in vars(args).items() if k in fields}
    data["threads"] = _resolve_threads(data.get("threads"))
    if data.get("format") is None:
        data["format"] = "csv"
    return RunConfig(**data)


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        cfg.validate()
        return _DISPATCH[cfg.command](cfg)
    except (CumSumOverflowError, ResourceLimitError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
