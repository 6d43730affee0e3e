"""Command-line entry point: one binary, module-per-subcommand, deterministic
CSV/JSON/text output with the run configuration embedded in every artifact.

Exit codes: 0 success, 1 reproduction-gate failure (e.g. witness misses),
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import __version__
from .arith import liouville
from .multfn import (
    CONSTANT_ONE,
    LIOUVILLE,
    MultFn,
    RealCharacter,
    omega_mod_fn,
    pretentious_distance,
)
from .polynomial import IntPolynomial, parse_polynomial
from . import correlation as corr_mod
from . import cubic as cubic_mod
from . import funceq as funceq_mod
from . import pell as pell_mod
from . import search as search_mod
from . import sieve as sieve_mod


@dataclass
class RunConfig:
    command: str
    parameters: dict
    format: str
    seed: int
    threads: int

    def to_dict(self) -> dict:
        from .funceq import ENUMERATION_LIMIT

        return {
            "command": self.command,
            "parameters": self.parameters,
            "format": self.format,
            "seed": self.seed,
            "threads": self.threads,
            "guards": {
                "max_range": sieve_mod.max_range_length(),
                "max_enum_q": ENUMERATION_LIMIT,
                "max_u3_n": 10**4,
            },
            "version": __version__,
        }


@dataclass
class Output:
    header: list[str]
    rows: list[tuple]
    payload: dict
    bare_text: Optional[str] = None  # single-value commands print just this
    extra_text: list[str] = field(default_factory=list)
    exit_code: int = 0
    plot: Optional[Callable[[str], None]] = None


def _emit(out: Output, cfg: RunConfig, stream) -> None:
    config_json = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    if cfg.format == "json":
        doc = {"config": cfg.to_dict(), **out.payload}
        stream.write(json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n")
        return
    if cfg.format == "csv":
        stream.write(f"# {config_json}\n")
        stream.write(",".join(out.header) + "\n")
        for row in out.rows:
            stream.write(",".join("" if v is None else str(v) for v in row) + "\n")
        for line in out.extra_text:
            stream.write(f"# {line}\n")
        return
    # text
    if out.bare_text is not None:
        stream.write(out.bare_text + "\n")
        return
    stream.write(f"# {config_json}\n")
    widths = [
        max(len(str(h)), *(len("" if r[i] is None else str(r[i])) for r in out.rows))
        if out.rows
        else len(str(h))
        for i, h in enumerate(out.header)
    ]
    stream.write("  ".join(str(h).ljust(w) for h, w in zip(out.header, widths)) + "\n")
    for row in out.rows:
        stream.write(
            "  ".join(("" if v is None else str(v)).ljust(w) for v, w in zip(row, widths))
            + "\n"
        )
    for line in out.extra_text:
        stream.write(line + "\n")


def _parse_function(name: str, allow_character: bool = False):
    if name == "liouville":
        return LIOUVILLE
    if name == "one":
        return CONSTANT_ONE
    if name.startswith("omega-mod:"):
        return omega_mod_fn(int(name.split(":", 1)[1]))
    if name.startswith("jacobi:"):
        if not allow_character:
            raise ValueError("jacobi:<q> is only usable where zeros are allowed (dist)")
        return RealCharacter(int(name.split(":", 1)[1]))
    if name.startswith("file:"):
        with open(name.split(":", 1)[1], "r", encoding="utf-8") as fh:
            desc = json.load(fh)
        return MultFn(
            int(desc["q"]),
            int(desc.get("default", 0)),
            tuple((int(p), int(e)) for p, e in desc.get("overrides", {}).items()),
            name="file",
        )
    raise ValueError(
        f"unknown function {name!r}; use liouville, one, omega-mod:<q>, jacobi:<q>, file:<path>"
    )


def _parse_forms(text: str) -> list[tuple[int, int]]:
    forms = []
    for chunk in text.split(";"):
        a, h = chunk.split(",")
        forms.append((int(a), int(h)))
    if not forms:
        raise ValueError("need at least one a,h form")
    return forms


def _poly_str(p: IntPolynomial) -> str:
    return str(p).replace(" ", "")


# ---------------------------------------------------------------- handlers


def _cmd_lambda(args) -> Output:
    value = liouville(args.n)
    return Output(
        ["n", "lambda"],
        [(args.n, value)],
        {"n": args.n, "lambda": value},
        bare_text=str(value),
    )


def _cmd_sieve_lambda(args) -> Output:
    seg = sieve_mod.lambda_range(args.start, args.end)
    lam = seg.lambda_
    rows = [(n, int(v)) for n, v in zip(range(args.start, args.end + 1), lam)]
    out = Output(
        ["n", "lambda"],
        rows,
        {"start": args.start, "end": args.end, "lambda": lam.tolist()},
    )
    if args.rle:
        out.extra_text.append("rle " + sieve_mod.run_length_encode(lam))
        out.payload["rle"] = sieve_mod.run_length_encode(lam)
    if args.signs_out:
        sieve_mod.write_sign_cache(args.signs_out, lam)
    return out


def _cmd_sieve_poly(args) -> Output:
    poly = parse_polynomial(args.poly)
    factors = (
        [parse_polynomial(t) for t in args.factors.split(";")] if args.factors else None
    )
    lam = sieve_mod.lambda_poly_range(poly, args.start, args.end, factors=factors)
    ns = range(args.start, args.end + 1)
    rows = [(n, poly(n), int(v)) for n, v in zip(ns, lam)]
    out = Output(
        ["n", "P_of_n", "lambda"],
        rows,
        {
            "poly": _poly_str(poly),
            "start": args.start,
            "end": args.end,
            "lambda": lam.tolist(),
        },
    )
    if args.rle:
        out.extra_text.append("rle " + sieve_mod.run_length_encode(lam))
        out.payload["rle"] = sieve_mod.run_length_encode(lam)
    if args.signs_out:
        sieve_mod.write_sign_cache(args.signs_out, lam)
    if args.plot:
        from . import plotting

        out.plot = lambda path: plotting.running_sign_mean(
            path, lam, title=f"signs of P(n) = {poly} on [{args.start}, {args.end}]"
        )
    return out


def _cmd_smooth_density(args) -> Output:
    poly = parse_polynomial(args.poly)
    dens = sieve_mod.property_s_density(poly, args.q, args.b, args.x)
    count = int(dens * args.x)
    rows = [(args.q, args.b, args.x, count, str(dens), float(dens))]
    out = Output(
        ["q", "b", "x", "count", "density", "density_float"],
        rows,
        {
            "poly": _poly_str(poly),
            "q": args.q,
            "b": args.b,
            "x": args.x,
            "count": count,
            "density": str(dens),
            "density_float": float(dens),
        },
    )
    if args.plot:
        from . import plotting

        xs, ys = [], []
        count = 0
        step = max(1, args.x // 400)
        checkpoints = set(range(step, args.x + 1, step)) | {args.x}
        running = []
        for n in range(args.b, args.x + 1, args.q):
            val = poly(n)
            if val >= 1 and sieve_mod.is_smooth(val, n):
                count += 1
            running.append((n, count))
        for n, c in running:
            if n in checkpoints or n == running[-1][0]:
                xs.append(n)
                ys.append(c / n)
        out.plot = lambda path: plotting.line_plot(
            path,
            xs,
            ys,
            title=f"running smooth-value density for {poly}",
            xlabel="x",
            ylabel="density",
        )
    return out


def _cmd_smooth_check(args) -> Output:
    val = sieve_mod.is_smooth(args.n, args.bound)
    return Output(
        ["n", "bound", "smooth"],
        [(args.n, args.bound, int(val))],
        {"n": args.n, "bound": args.bound, "smooth": val},
        bare_text=str(val).lower(),
    )


def _solution_dict(rec) -> dict:
    return {
        "values": list(rec.table.values),
        "primitive": rec.primitive,
        "induced_from": rec.induced_from,
        "character_q": rec.character_modulus if rec.character_modulus is not None else 0,
        "r": rec.r if rec.r is not None else -1,
        "sign": rec.sign if rec.sign is not None else 0,
    }


def _cmd_funceq_enum(args) -> Output:
    records = funceq_mod.enumerate_solutions(args.q)
    rows = [
        (
            args.q,
            "".join("+" if v > 0 else "-" for v in rec.table.values),
            int(rec.primitive),
            rec.induced_from,
            rec.character_modulus,
            rec.r,
            rec.sign,
        )
        for rec in records
    ]
    return Output(
        ["q", "values", "primitive", "induced_from", "character_q", "r", "sign"],
        rows,
        {"q": args.q, "solutions": [_solution_dict(rec) for rec in records]},
    )


def _cmd_funceq_classify(args) -> Output:
    table = funceq_mod.PsiTable.parse(args.table)
    match = funceq_mod.classify_solution(table)
    payload = {
        "q": table.q,
        "values": list(table.values),
        "primitive": table.is_primitive,
        "induced_from": table.minimal_period(),
        "matched": match is not None,
        "character_q": match[0] if match else 0,
        "r": match[1] if match else -1,
        "sign": match[2] if match else 0,
    }
    rows = [
        (
            table.q,
            payload["primitive"] and 1 or 0,
            payload["character_q"],
            payload["r"],
            payload["sign"],
        )
    ]
    return Output(["q", "primitive", "character_q", "r", "sign"], rows, payload)


def _cmd_funceq_divsolve(args) -> Output:
    a1, a2, a3 = (int(t) for t in args.a.split(","))
    x1, x2, x3 = funceq_mod.solve_divisibility(
        args.q, a1, a2, a3, args.min_abs, prime_search_bound=args.prime_bound
    )
    den = 4 * (x1 * x2 + x2 * x3 + x3 * x1) - 1
    num = 4 * x1 * x2 * x3 - x1 - x2 - x3
    payload = {
        "q": args.q,
        "residues": [a1, a2, a3],
        "min_abs": args.min_abs,
        "x": [x1, x2, x3],
        "denominator": den,
        "quotient": num // den,
    }
    return Output(
        ["x1", "x2", "x3", "denominator", "quotient"],
        [(x1, x2, x3, den, num // den)],
        payload,
    )


def _cmd_funceq_falsify(args) -> Output:
    poly = parse_polynomial(args.poly)
    rows_raw = funceq_mod.falsify_periodicity(poly, args.qmax, args.x)
    rows = [(w.modulus, w.phase, w.n1, w.n2) for w in rows_raw]
    missing = sum(1 for w in rows_raw if w.n1 is None)
    payload = {
        "poly": _poly_str(poly),
        "qmax": args.qmax,
        "x": args.x,
        "witnesses": [
            {"q": w.modulus, "phase": w.phase, "n1": w.n1, "n2": w.n2} for w in rows_raw
        ],
        "classes_without_witness": missing,
    }
    return Output(["q", "phase", "n1", "n2"], rows, payload)


def _cmd_funceq_hyperbola(args) -> Output:
    from .sieve import primes_up_to

    ps = (
        [args.p]
        if args.p
        else [int(p) for p in primes_up_to(args.bound) if p % 4 == 3]
    )
    rows = []
    for p in ps:
        count = funceq_mod.hyperbola_point_count(p)
        rows.append((p, count, (p - 1) // 2))
    payload = {"rows": [{"p": p, "count": c, "expected": e} for p, c, e in rows]}
    return Output(["p", "count", "expected"], rows, payload)


def _cmd_pell_cf(args) -> Output:
    a0, period = pell_mod.sqrt_cf(args.d)
    return Output(
        ["d", "a0", "period"],
        [(args.d, a0, " ".join(map(str, period)))],
        {"d": args.d, "a0": a0, "period": list(period)},
    )


def _cmd_pell_fund(args) -> Output:
    sol = pell_mod.fundamental_solution(args.d, args.sign)
    if sol is None:
        return Output(
            ["d", "sign", "x", "y"],
            [(args.d, args.sign, None, None)],
            {"d": args.d, "sign": args.sign, "solvable": False},
            bare_text="none",
        )
    return Output(
        ["d", "sign", "x", "y"],
        [(args.d, args.sign, sol.x, sol.y)],
        {"d": args.d, "sign": args.sign, "solvable": True, "x": sol.x, "y": sol.y},
    )


def _cmd_pell_generate(args) -> Output:
    ctx = pell_mod.PellContext.for_d(args.d)
    base = pell_mod.PellSolution(args.d, args.x, args.y, args.x**2 - args.d * args.y**2)
    sols = pell_mod.generate_solutions(base, ctx, args.count)
    rows = [(i + 1, s.x, s.y) for i, s in enumerate(sols)]
    return Output(
        ["index", "x", "y"],
        rows,
        {
            "d": args.d,
            "n": base.n,
            "base": {"x": args.x, "y": args.y},
            "solutions": [{"x": s.x, "y": s.y} for s in sols],
        },
    )


def _cmd_pell_census(args) -> Output:
    rows_raw = pell_mod.negative_pell_census(args.bound, threads=args.threads)
    rows = [(r.p, r.x, r.y, r.n, r.n_mod_2) for r in rows_raw]
    payload = {
        "bound": args.bound,
        "rows": [
            {"p": r.p, "x": str(r.x), "y": str(r.y), "n": str(r.n), "n_mod_2": r.n_mod_2}
            for r in rows_raw
        ],
    }
    out = Output(["p", "x", "y", "n", "n_mod_2"], rows, payload)
    if args.plot:
        from . import plotting

        out.plot = lambda path: plotting.scatter_plot(
            path,
            [r.p for r in rows_raw],
            [float(r.y) for r in rows_raw],
            title="fundamental negative-Pell y against p",
            xlabel="p",
            ylabel="y",
            logy=True,
        )
    return out


def _cmd_cubic_reduce(args) -> Output:
    red = cubic_mod.build_reduction(args.b, args.c)
    poly, shifts = cubic_mod.four_term_product(red)
    payload = {
        "B": red.b,
        "C": red.c,
        "delta": red.delta,
        "k": red.k,
        "y": red.y,
        "n0": red.n0,
        "t1": red.t1,
        "t2": red.t2,
        "lambda_k": red.lambda_k,
        "shifts": list(shifts),
        "product": _poly_str(poly),
    }
    rows = [(red.b, red.c, red.delta, red.k, red.y, red.n0, red.t1, red.t2, red.lambda_k)]
    return Output(
        ["B", "C", "delta", "k", "y", "n0", "t1", "t2", "lambda_k"], rows, payload
    )


def _cmd_cubic_census(args) -> Output:
    census = cubic_mod.cubic_sign_census(args.b, args.c, args.x)
    rows = [
        (
            census.b,
            census.c,
            census.x,
            census.plus_count,
            census.minus_count,
            census.progression_plus,
            census.progression_minus,
        )
    ]
    payload = {
        "B": census.b,
        "C": census.c,
        "x": census.x,
        "plus": census.plus_count,
        "minus": census.minus_count,
        "progression_plus": census.progression_plus,
        "progression_minus": census.progression_minus,
        "n0": census.reduction.n0 if census.reduction else None,
        "modulus": 2 * census.reduction.k if census.reduction else None,
    }
    out = Output(
        ["B", "C", "x", "plus", "minus", "progression_plus", "progression_minus"],
        rows,
        payload,
    )
    if args.plot:
        from . import plotting

        poly = IntPolynomial((0, args.c, -args.b, 1))
        lam = sieve_mod.lambda_poly_range(
            poly, 1, args.x, factors=[IntPolynomial((0, 1)), IntPolynomial((args.c, -args.b, 1))]
        )
        out.plot = lambda path: plotting.running_sign_mean(
            path, lam, title=f"signs of n(n^2 - {args.b}n + {args.c})"
        )
    return out


def _cmd_corr_avg(args) -> Output:
    forms = _parse_forms(args.forms)
    fn = _parse_function(args.fn)
    spec = corr_mod.CorrelationSpec(
        tuple([fn] * len(forms)),
        tuple(a for a, _ in forms),
        tuple(h for _, h in forms),
        args.x,
        kind="log" if args.log else "cesaro",
    )
    value = corr_mod.correlation_average(spec)
    payload = {
        "fn": args.fn,
        "forms": [{"a": a, "h": h} for a, h in forms],
        "x": args.x,
        "kind": spec.kind,
        "linearly_independent": spec.linearly_independent,
        "re": value.real,
        "im": value.imag,
        "abs": abs(value),
    }
    out = Output(
        ["re", "im", "abs", "linearly_independent"],
        [(value.real, value.imag, abs(value), int(spec.linearly_independent))],
        payload,
    )
    if args.plot:
        from . import plotting

        ns, means = corr_mod.correlation_running(spec)
        out.plot = lambda path: plotting.line_plot(
            path,
            ns,
            means,
            title=f"|running mean| for {args.fn} at {args.forms}",
            xlabel="x",
            ylabel="|mean|",
            logx=True,
        )
    return out


def _cmd_corr_gowers(args) -> Output:
    fn = _parse_function(args.fn)
    values = [fn.value(n) for n in range(1, args.n + 1)]
    norm = corr_mod.gowers_norm(values, args.k)
    return Output(
        ["fn", "n", "k", "norm"],
        [(args.fn, args.n, args.k, norm)],
        {"fn": args.fn, "n": args.n, "k": args.k, "norm": norm},
        bare_text=repr(norm),
    )


def _cmd_corr_dist(args) -> Output:
    f = _parse_function(args.f, allow_character=True)
    g = _parse_function(args.g, allow_character=True)
    value = pretentious_distance(f, g, args.x, t=args.t)
    return Output(
        ["f", "g", "x", "t", "distance"],
        [(args.f, args.g, args.x, args.t, value)],
        {"f": args.f, "g": args.g, "x": args.x, "t": args.t, "distance": value},
        bare_text=repr(value),
    )


def _cmd_corr_delta(args) -> Output:
    qs = [args.q] if args.q else list(range(2, args.qmax + 1))
    rows = [(q, corr_mod.delta_for_q(q)) for q in qs]
    return Output(
        ["q", "delta"],
        rows,
        {"rows": [{"q": q, "delta": d} for q, d in rows]},
    )


def _cmd_corr_maxexp(args) -> Output:
    res = corr_mod.max_exp_sum_check(args.n, args.m, args.trials, seed=args.seed)
    payload = {
        "n": res.n,
        "m": res.m,
        "rhs": res.rhs,
        "max_lhs": res.max_lhs,
        "ok": res.ok,
    }
    return Output(
        ["n", "m", "rhs", "max_lhs", "ok"],
        [(res.n, res.m, res.rhs, res.max_lhs, int(res.ok))],
        payload,
        exit_code=0 if res.ok else 1,
    )


def _witness_output(table, args) -> Output:
    rows = [
        (a, b, table.entries[(a, b)][0], table.entries[(a, b)][1])
        for a in range(1, table.amax + 1)
        for b in range(1, table.bmax + 1)
    ]
    payload = {
        "exponent": table.exponent,
        "amax": table.amax,
        "bmax": table.bmax,
        "mbound": table.mbound,
        "misses": [
            {"a": a, "b": b, "sign": sign} for a, b, sign in table.misses
        ],
        "rows": [
            {"a": a, "b": b, "m_plus": mp, "m_minus": mm} for a, b, mp, mm in rows
        ],
    }
    out = Output(
        ["a", "b", "m_plus", "m_minus"],
        rows,
        payload,
        exit_code=0 if table.complete else 1,
    )
    if getattr(args, "plot", None):
        from . import plotting
        import numpy as np

        grid = np.zeros((table.amax, table.bmax))
        for (a, b), (mp, _) in table.entries.items():
            grid[a - 1, b - 1] = mp if mp is not None else -1
        out.plot = lambda path: plotting.heatmap(
            path,
            grid,
            title=f"least m with positive sign (exponent {table.exponent})",
            xlabel="b - 1",
            ylabel="a - 1",
            colorbar_label="m_plus",
        )
    return out


def _cmd_search_cubic(args) -> Output:
    return _witness_output(
        search_mod.multivariate_cubic_table(args.amax, args.bmax, args.mbound), args
    )


def _cmd_search_quad(args) -> Output:
    return _witness_output(
        search_mod.multivariate_quadratic_table(args.amax, args.bmax, args.mbound), args
    )


def _cmd_search_almost_all(args) -> Output:
    res = search_mod.almost_all_experiment(
        args.degree,
        args.height,
        args.horizon,
        order=args.order,
        target_exponent=args.target,
        sample=args.sample,
        seed=args.seed,
    )
    payload = {
        "degree": res.degree,
        "height": res.height,
        "horizon": res.horizon,
        "order": res.order,
        "target_exponent": res.target_exponent,
        "total": res.total,
        "missed": res.fraction_missed.numerator,
        "fraction_missed": str(res.fraction_missed),
        "fraction_float": float(res.fraction_missed),
        "exhaustive": res.exhaustive,
    }
    rows = [
        (
            res.degree,
            res.height,
            res.horizon,
            res.total,
            res.fraction_missed.numerator,
            str(res.fraction_missed),
        )
    ]
    return Output(
        ["degree", "height", "horizon", "total", "missed", "fraction"], rows, payload
    )


def _cmd_search_lift(args) -> Output:
    e1, e2 = (int(t) for t in args.exps.split(","))
    lift = search_mod.coprime_witness_lift(args.a, args.b, (e1, e2), args.m, args.n)
    payload = {
        "a": lift.a,
        "b": lift.b,
        "e1": lift.e1,
        "e2": lift.e2,
        "m": lift.m,
        "n": lift.n,
        "h": lift.h,
        "z": lift.z,
        "lambda_h": lift.lambda_h,
    }
    return Output(
        ["a", "b", "m", "n", "h", "z", "lambda_h"],
        [(lift.a, lift.b, lift.m, lift.n, lift.h, lift.z, lift.lambda_h)],
        payload,
    )


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liouville-lab",
        description="Liouville signs at polynomial arguments: sieves, Pell, "
        "functional equations, correlations, witness searches.",
    )
    parser.add_argument("--format", choices=("text", "csv", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized internals")
    parser.add_argument("--threads", type=int, default=1, help="worker cap (outputs are order-deterministic)")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="Liouville value of one integer")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_lambda)

    sieve_p = sub.add_parser("sieve", help="bulk Liouville values")
    ssub = sieve_p.add_subparsers(dest="action", required=True)
    p = ssub.add_parser("lambda", help="lambda on an integer range")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.add_argument("--rle", action="store_true")
    p.add_argument("--signs-out", help="write the binary sign cache here")
    p.set_defaults(handler=_cmd_sieve_lambda)
    p = ssub.add_parser("poly", help="lambda(P(n)) on a range")
    p.add_argument("--poly", required=True)
    p.add_argument("--factors", help="declared factorization, ';'-separated")
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.add_argument("--rle", action="store_true")
    p.add_argument("--signs-out")
    p.add_argument("--plot", help="write a running-mean figure here")
    p.set_defaults(handler=_cmd_sieve_poly)

    smooth_p = sub.add_parser("smooth", help="smooth-value statistics")
    msub = smooth_p.add_subparsers(dest="action", required=True)
    p = msub.add_parser("density", help="density of n-smooth P(n) on a progression")
    p.add_argument("--poly", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--plot")
    p.set_defaults(handler=_cmd_smooth_density)
    p = msub.add_parser("check", help="is n B-smooth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(handler=_cmd_smooth_check)

    funceq_p = sub.add_parser("funceq", help="the Z_q functional equation")
    fsub = funceq_p.add_subparsers(dest="action", required=True)
    p = fsub.add_parser("enum", help="all solutions with psi(0)=+1")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(handler=_cmd_funceq_enum)
    p = fsub.add_parser("classify", help="match a table to the character family")
    p.add_argument("--table", required=True, help='e.g. "+,-,-"')
    p.set_defaults(handler=_cmd_funceq_classify)
    p = fsub.add_parser("divsolve", help="constructive divisibility solver")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", required=True, help="a1,a2,a3")
    p.add_argument("--min-abs", type=int, default=1)
    p.add_argument("--prime-bound", type=int, default=10**7)
    p.set_defaults(handler=_cmd_funceq_divsolve)
    p = fsub.add_parser("falsify", help="sign-disagreement witnesses per (q, phase)")
    p.add_argument("--poly", required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_funceq_falsify)
    p = fsub.add_parser("hyperbola", help="count x with 4x^2+1 a square mod p")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--bound", type=int)
    p.set_defaults(handler=_cmd_funceq_hyperbola)

    pell_p = sub.add_parser("pell", help="Pell equation machinery")
    psub = pell_p.add_subparsers(dest="action", required=True)
    p = psub.add_parser("cf", help="continued fraction of sqrt(D)")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(handler=_cmd_pell_cf)
    p = psub.add_parser("fund", help="fundamental solution of x^2 - D y^2 = sign")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sign", type=int, choices=(-1, 1), required=True)
    p.set_defaults(handler=_cmd_pell_fund)
    p = psub.add_parser("generate", help="compose a base solution with the unit")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--count", type=int, default=3)
    p.set_defaults(handler=_cmd_pell_generate)
    p = psub.add_parser("census", help="negative Pell over primes p = 1 (mod 4)")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--plot")
    p.set_defaults(handler=_cmd_pell_census)

    cubic_p = sub.add_parser("cubic", help="reducible cubic toolkit")
    csub = cubic_p.add_subparsers(dest="action", required=True)
    p = csub.add_parser("reduce", help="k-selection and congruence data")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(handler=_cmd_cubic_reduce)
    p = csub.add_parser("census", help="sign counts of lambda(n(n^2-Bn+C))")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--plot")
    p.set_defaults(handler=_cmd_cubic_census)

    corr_p = sub.add_parser("corr", help="correlation and uniformity statistics")
    osub = corr_p.add_subparsers(dest="action", required=True)
    p = osub.add_parser("avg", help="correlation average over linear forms")
    p.add_argument("--fn", default="liouville")
    p.add_argument("--forms", required=True, help='e.g. "1,0;1,1"')
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic averaging")
    p.add_argument("--plot")
    p.set_defaults(handler=_cmd_corr_avg)
    p = osub.add_parser("gowers", help="interval-normalized U^k norm")
    p.add_argument("--fn", default="liouville")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, choices=(1, 2, 3), required=True)
    p.set_defaults(handler=_cmd_corr_gowers)
    p = osub.add_parser("dist", help="pretentious distance")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.set_defaults(handler=_cmd_corr_dist)
    p = osub.add_parser("delta", help="the (q/pi) sin(pi/q) margin constant")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=int)
    g.add_argument("--qmax", type=int)
    p.set_defaults(handler=_cmd_corr_delta)
    p = osub.add_parser("maxexp", help="weighted exponential-sum inequality check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=10**4)
    p.set_defaults(handler=_cmd_corr_maxexp)

    search_p = sub.add_parser("search", help="brute-force witness searches")
    hsub = search_p.add_subparsers(dest="action", required=True)
    for name, handler, default_m in (
        ("cubic-table", _cmd_search_cubic, 20),
        ("quad-table", _cmd_search_quad, 30),
    ):
        p = hsub.add_parser(name, help=f"least-witness table ({name})")
        p.add_argument("--amax", type=int, required=True)
        p.add_argument("--bmax", type=int, required=True)
        p.add_argument("--mbound", type=int, default=default_m)
        p.add_argument("--plot")
        p.set_defaults(handler=handler)
    p = hsub.add_parser("almost-all", help="fraction of polynomials missing a value")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--target", type=int, default=1, help="target exponent in Z_order")
    p.add_argument("--sample", type=int)
    p.set_defaults(handler=_cmd_search_almost_all)
    p = hsub.add_parser("lift", help="squarefree-kernel witness lift")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--exps", default="3,4")
    p.set_defaults(handler=_cmd_search_lift)

    return parser


_FORMAT_ALIASES = {"--json": "json", "--csv": "csv", "--text": "text"}


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    """Allow --json/--csv/--text anywhere as aliases for --format."""
    out: list[str] = []
    fmt = None
    for tok in argv:
        if tok in _FORMAT_ALIASES:
            fmt = _FORMAT_ALIASES[tok]
        else:
            out.append(tok)
    if fmt is not None and "--format" not in out:
        out = ["--format", fmt] + out
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_normalize_argv(list(argv if argv is not None else sys.argv[1:])))
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    skip = {"command", "action", "handler", "format", "seed", "threads", "out"}
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }
    cfg = RunConfig(command, params, args.format, args.seed, args.threads)
    try:
        out: Output = args.handler(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if out.plot is not None and getattr(args, "plot", None):
        out.plot(args.plot)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            _emit(out, cfg, fh)
    else:
        _emit(out, cfg, sys.stdout)
    return out.exit_code


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
