"""Command-line front end: one JSON record per computation, CSV for table and figure data."""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import DomainError, NumericalError
from .records import ResultCache, ResultRecord, amplitude_entries, cache_key, dumps

log = logging.getLogger("ringconc")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

_S5 = math.sqrt(5.0)

# known closed forms for p = 2; n = 5 only has a numerical root
P2_CLOSED_FORMS = {
    2: 0.0,
    3: 2 / 3,
    4: 0.5,
    5: None,
    6: math.sqrt(2.0) / 3,
    7: (1 + _S5) / 7,
    8: math.sqrt(3.0) / 4,
    9: 4 * math.cos(math.pi / 7) / 9,
    10: math.sqrt(2 + math.sqrt(2.0)) / 5,
    11: 4 * math.cos(math.pi / 9) / 11,
    12: math.sqrt((5 + _S5) / 2) / 6,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# computations; each returns a ResultRecord and is safe to run in a worker


def _timed(fn):
    t0 = time.perf_counter()
    rec = fn()
    rec.runtime_ms = round((time.perf_counter() - t0) * 1e3, 3)
    return rec


def compute_ow(n: int, p: int, **_) -> ResultRecord:
    from .ow import ow_closed_form, ow_solve

    sol = ow_solve(n, p)
    extra = {}
    try:
        extra["closed_form"] = ow_closed_form(n, p)
    except DomainError:
        pass
    return ResultRecord(n=n, p=p, method="ow", c=sol.c, amplitudes=amplitude_entries(sol.amplitudes), extra=extra)


def _grid(spec):
    from .xxz import SGrid
    return SGrid.parse(spec) if spec else SGrid()


def compute_exact(n: int, p: int, grid: str | None = None, **_) -> ResultRecord:
    from .basis import check_sites
    from .xxz import sweep

    check_sites(n, p)
    small = min(p, n - p)
    if small == 0:
        return ResultRecord(n=n, p=p, method="exact", c=0.0, extra={"grid": _grid(grid).spec()})
    res = sweep(n, small, _grid(grid))
    extra = {"ow_limit": res.ow_limit, "grid": res.grid.spec(), "points": len(res.points)}
    if small != p:
        extra["amplitudes_ups"] = small
    return ResultRecord(n=n, p=p, method="exact", c=res.c_max, s_opt=res.s_opt,
                        amplitudes=amplitude_entries(res.optimal_amplitudes), extra=extra)


def compute_sweep(n: int, p: int, grid: str | None = None, **_) -> ResultRecord:
    from .xxz import sweep

    res = sweep(n, p, _grid(grid))
    points = [{"s": pt.s, "minus_e0": pt.c_of_s, "concurrence": pt.concurrence} for pt in res.points]
    return ResultRecord(n=n, p=p, method="exact", c=res.c_max, s_opt=res.s_opt,
                        amplitudes=amplitude_entries(res.optimal_amplitudes),
                        extra={"ow_limit": res.ow_limit, "grid": res.grid.spec(), "sweep": points})


def compute_stability(n: int, p: int, **_) -> ResultRecord:
    from .ow import ow_closed_form
    from .stability import stability_test

    v = stability_test(n, p)
    return ResultRecord(n=n, p=p, method="stability", c=ow_closed_form(n, p), lhs=v.lhs, rhs=v.rhs,
                        extra={"locally_optimal": v.locally_optimal, "margin": v.margin,
                               "marginal": v.marginal})


def compute_lagrange(n: int, p: int = 2, **_) -> ResultRecord:
    from .lagrange import lagrange_polynomial, lagrange_solve

    sol = lagrange_solve(n)
    return ResultRecord(n=n, p=2, method="lagrange", c=sol.c, amplitudes=amplitude_entries(sol.amplitudes),
                        extra={"lambda": sol.lam, "residual": sol.residual,
                               "polynomial": lagrange_polynomial(n).coef.tolist()})


def compute_oracle(n: int, p: int, q: int = 1, seed: int = 0, restarts: int = 64,
                   zero_gap: int | None = None, complex_amps: bool = False, **_) -> ResultRecord:
    from .basis import build_symmetric_basis
    from .oracle import elements_with_gap, optimize_direct, optimize_direct_complex

    extra: dict = {"restarts": restarts}
    if complex_amps:
        if q != 1:
            raise DomainError("the complex oracle only handles q = 1")
        res = optimize_direct_complex(n, p, restarts=restarts, seed=seed)
        extra["complex"] = True
    else:
        zero = ()
        if zero_gap is not None:
            zero = elements_with_gap(build_symmetric_basis(n, p), zero_gap)
            extra["zero_gap"] = zero_gap
        res = optimize_direct(n, p, separation=q, restarts=restarts, seed=seed, zero_elements=zero)
    extra["start_index"] = res.start_index
    return ResultRecord(n=n, p=p, q=q, method="oracle", c=res.c, seed=seed,
                        amplitudes=amplitude_entries(res.amplitudes), extra=extra)


def compute_qneighbor(n: int, q: int, grid: str | None = None, **_) -> ResultRecord:
    from .qneighbor import qth_neighbor_max

    res = qth_neighbor_max(n, q, _grid(grid))
    plan, w = res.plan, res.witness
    return ResultRecord(
        n=n, p=w.total_ups, q=q, method="qneighbor", c=res.c,
        extra={"gcd": plan.g, "subring_size": plan.subring_size, "subring_count": plan.subring_count,
               "witness": w.describe(), "subring_ups": w.subring_ups,
               "subring_amplitudes": [{"gaps": list(g), "value": a}
                                      for g, a in w.subring_amplitudes.items()]},
    )


COMPUTE = {
    "ow": compute_ow,
    "exact": compute_exact,
    "sweep": compute_sweep,
    "stability": compute_stability,
    "lagrange": compute_lagrange,
    "oracle": compute_oracle,
    "qneighbor": compute_qneighbor,
}


def _run_job(job):
    command, kwargs = job
    return _timed(lambda: COMPUTE[command](**kwargs))


class Runner:
    """Cache-aware dispatcher with an optional process pool for batches."""

    def __init__(self, cache: ResultCache, jobs: int = 1):
        self.cache = cache
        self.jobs = max(1, jobs)

    @staticmethod
    def _key(command, kw):
        tag = command
        if command == "oracle":
            tag = f"oracle:{kw.get('restarts')}:{kw.get('zero_gap')}:{kw.get('complex_amps')}"
        return cache_key(tag, kw["n"], kw.get("p", -1), kw.get("q", 1), kw.get("grid"), kw.get("seed"))

    def run(self, command: str, **kw) -> ResultRecord:
        return self.run_many([(command, kw)])[0]

    def run_many(self, jobs: list[tuple[str, dict]]) -> list[ResultRecord]:
        out: list[ResultRecord | None] = [None] * len(jobs)
        todo = []
        for i, (command, kw) in enumerate(jobs):
            hit = self.cache.get(self._key(command, kw))
            if hit is not None:
                out[i] = hit
            else:
                todo.append(i)
        if self.jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                fresh = list(pool.map(_run_job, [jobs[i] for i in todo]))
        else:
            fresh = [_run_job(jobs[i]) for i in todo]
        for i, rec in zip(todo, fresh):
            self.cache.put(self._key(*jobs[i]), rec)
            out[i] = rec
        return out  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# output


SCALAR_FIELDS = ("n", "p", "q", "method", "c", "s_opt", "lhs", "rhs", "seed", "runtime_ms")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_csv(records: list[ResultRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCALAR_FIELDS)
    for r in records:
        w.writerow([_fmt(getattr(r, f)) for f in SCALAR_FIELDS])
    return buf.getvalue()


def rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# batch commands


def table_rows(runner: Runner, grid: str | None = None) -> list[dict]:
    """p = 2 rows for n = 2 ... 12: exact value, closed form and nonzero coefficients."""
    recs = runner.run_many([("exact", {"n": n, "p": 2, "grid": grid}) for n in range(2, 13)])
    rows = []
    for rec in recs:
        coeffs = [{"gaps": e["gaps"], "value": e["value"]} for e in (rec.amplitudes or [])
                  if abs(e["value"]) > 1e-9]
        rows.append({"N": rec.n, "p": rec.p, "C_exact": rec.c, "C_closed_form": P2_CLOSED_FORMS[rec.n],
                     "coefficients": coeffs})
    return rows


def figure_data(runner: Runner, n_max: int, grid: str | None = None) -> dict[str, tuple[list, list]]:
    from math import gcd

    from .ow import ow_closed_form

    pairs = [(n, p) for n in range(2, n_max + 1) for p in range(1, n // 2 + 1)]
    exact = runner.run_many([("exact", {"n": n, "p": p, "grid": grid}) for n, p in pairs])
    by_np = {(r.n, r.p): r for r in exact}
    stab_pairs = [(n, p) for n, p in pairs if p >= 2 and gcd(n, p) == 1]
    stab = {(r.n, r.p): r for r in runner.run_many([("stability", {"n": n, "p": p}) for n, p in stab_pairs])}

    fig1 = [(n, p, by_np[n, p].c) for n, p in pairs]
    fig2 = []
    for n, p in pairs:
        if n - p < 2:
            continue
        flag = None
        if (n, p) in stab:
            flag = int(not stab[n, p].extra["locally_optimal"])
        elif p == 1:
            flag = 0
        fig2.append((n, p, ow_closed_form(n, p), flag, by_np[n, p].c))
    fig3 = [(n, p, by_np[n, p].s_opt) for n, p in pairs]
    return {
        "fig1.csv": (["N", "p", "C_max"], fig1),
        "fig2.csv": (["N", "p", "C_ow", "C_perturb_improved_flag", "C_exact"], fig2),
        "fig3.csv": (["N", "p", "s_opt"], fig3),
    }


def basis_dump(n: int, p: int) -> list[dict]:
    from .basis import build_symmetric_basis

    b = build_symmetric_basis(n, p)
    return [
        {"index": k, "representative": str(members[0].representative), "orbit_size": int(b.orbit_sizes[k]),
         "pair_count": int(b.pair_counts[k]), "gaps": list(b.gap_signatures[k]),
         "necklaces": [str(m.representative) for m in members]}
        for k, members in enumerate(b.elements)
    ]


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output to this file (directory for figures)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    common.add_argument("--cache-dir", help="cache directory (overrides $RINGCONC_CACHE_DIR)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch commands")
    common.add_argument("--s-grid", dest="grid", metavar="LO:HI:POINTS", help="s sweep grid (default 0.02:50:64)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="ringconc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def np_parser(name, help_, p_required=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--p", type=int, required=p_required, default=2)
        return sp

    np_parser("ow", "optimum with no adjacent up-spins")
    np_parser("exact", "exact maximum via the XXZ ground-state sweep")
    np_parser("sweep", "full s sweep with every evaluated point")
    np_parser("stability", "local stability of the no-adjacent-ups optimum")
    np_parser("lagrange", "p = 2 Lagrange-multiplier solution (n >= 8)", p_required=False)
    sp = np_parser("oracle", "direct nonlinear maximization (small n)")
    sp.add_argument("--q", type=int, default=1, help="separation of the two sites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=64)
    sp.add_argument("--zero-gap", type=int, help="pin to zero every element with two ups this far apart")
    sp.add_argument("--complex", dest="complex_amps", action="store_true",
                    help="complex amplitudes over all necklaces (validation)")
    sp = sub.add_parser("qneighbor", parents=[common], help="concurrence at separation q via subrings")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sub.add_parser("table", parents=[common], help="p = 2 rows for n = 2 ... 12")
    sp = sub.add_parser("figures", parents=[common], help="write fig1.csv, fig2.csv, fig3.csv")
    sp.add_argument("--n-max", type=int, default=12)
    sp = sub.add_parser("basis-dump", parents=[common], help="list the symmetric basis elements")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    return parser


def _dispatch(args) -> None:
    cache = ResultCache(args.cache_dir, enabled=not args.no_cache)
    runner = Runner(cache, args.jobs)
    cmd = args.command

    if cmd in COMPUTE:
        kw = {"n": args.n, "grid": args.grid}
        if cmd != "qneighbor":
            kw["p"] = args.p
        if cmd in ("oracle", "qneighbor"):
            kw["q"] = args.q
        if cmd == "oracle":
            kw.update(seed=args.seed, restarts=args.restarts, zero_gap=args.zero_gap,
                      complex_amps=args.complex_amps)
            kw.pop("grid")
        if cmd in ("ow", "stability", "lagrange"):
            kw.pop("grid")
        rec = runner.run(cmd, **kw)
        if args.format == "csv":
            if cmd == "sweep":
                rows = [(pt["s"], pt["minus_e0"], pt["concurrence"]) for pt in rec.extra["sweep"]]
                _emit(rows_csv(["s", "minus_e0", "concurrence"], rows), args.out)
            else:
                _emit(records_csv([rec]), args.out)
        else:
            _emit(dumps(rec), args.out)
    elif cmd == "table":
        rows = table_rows(runner, args.grid)
        if args.format == "csv":
            out = [(r["N"], r["p"], r["C_exact"], r["C_closed_form"],
                    " ".join(f"{tuple(c['gaps'])}={c['value']!r}" for c in r["coefficients"])) for r in rows]
            _emit(rows_csv(["N", "p", "C_exact", "C_closed_form", "coefficients"], out), args.out)
        else:
            _emit(dumps(rows), args.out)
    elif cmd == "figures":
        outdir = Path(args.out or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        for name, (header, rows) in figure_data(runner, args.n_max, args.grid).items():
            (outdir / name).write_text(rows_csv(header, rows))
            log.info("wrote %s (%d rows)", outdir / name, len(rows))
    elif cmd == "basis-dump":
        rows = basis_dump(args.n, args.p)
        if args.format == "csv":
            out = [(r["index"], r["representative"], r["orbit_size"], r["pair_count"],
                    " ".join(map(str, r["gaps"]))) for r in rows]
            _emit(rows_csv(["index", "representative", "orbit_size", "pair_count", "gaps"], out), args.out)
        else:
            _emit(dumps(rows), args.out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"ringconc: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _dispatch(args)
    except DomainError as exc:
        sys.stderr.write(f"ringconc: error: {exc}\n")
        return EXIT_USAGE
    except NumericalError as exc:
        sys.stderr.write(dumps({"error": str(exc), "diagnostics": exc.diagnostics}))
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
