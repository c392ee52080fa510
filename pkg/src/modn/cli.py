"""Batch experiment runner: one subcommand per experiment, CSV or JSON out.

Exit codes: 0 when every row passes, 2 on a violated identity or bound,
1 on a usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    def __init__(self, message: str, owner: str = "cli"):
        super().__init__(message)
        self.owner = owner


@dataclass
class Outcome:
    anchor: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    passed: bool = True


# --- argument handling ------------------------------------------------------


DEFAULTS = {
    "n": 2, "s": 2.0, "rprime": 4.0, "gamma": 1.0, "alpha": 2.0, "k": 1, "l": 1, "p": 5, "L": 1,
    "rho": 3, "seed": None, "format": "csv", "output": "-", "jobs": 1, "method": "fft", "trials": 4096,
    "samples": 100, "levels": 2,
}


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    out = []
    for v in str(text).split(","):
        v = v.strip()
        if v:
            out.append(float(Fraction(v)) if "/" in v else float(v))
    return out


def read_config(path: str) -> dict:
    """key=value lines; '#' starts a comment; dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--N", type=str, help="modulus or comma list")
    g.add_argument("--N-range", dest="N_range", type=str, help="lo..hi inclusive")
    g.add_argument("--odd-only", action="store_const", const=True, dest="odd_only")
    g.add_argument("--prime-power", action="store_const", const=True, dest="prime_power")
    g.add_argument("--factors-above-n", action="store_const", const=True, dest="factors_above_n")
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--cap", type=int, help="enumeration cap (overrides MODN_CAP)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", "-o", type=str)
    g.add_argument("--config", type=str, help="key=value file; flags win")
    g.add_argument("--jobs", type=int, help="worker processes for modulus sweeps")

    parser = _Parser(prog="modn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, *opts):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        for flag, kw in opts:
            sp.add_argument(flag, **kw)
        return sp

    f = lambda t: {"type": t}  # noqa: E731
    add("gauss", "Gauss sums against their closed form", ("--method", {"choices": ("fft", "direct")}),
        ("--summary", {"action": "store_const", "const": True}))
    add("knapp", "Knapp example numerology", ("--d", f(str)), ("--s", f(str)), ("--rprime", f(str)))
    add("constant-test", "l^{r'} mass of E1 against the divisor sum", ("--rprime", f(str)))
    add("tomas-scan", "restriction ratios over test families", ("--r", f(str)), ("--families", f(str)),
        ("--max-slope", f(float)), ("--min-slope", f(float)))
    add("moment-sharpness", "moment-curve mass against the analytic lower bound", ("--p", f(int)),
        ("--L", f(int)), ("--rprime", f(str)))
    add("wave-packets", "packet reconstruction, tubes and packet images", ("--d", f(str)))
    add("khintchine", "random-sign packet sums", ("--d", f(int)), ("--trials", f(int)),
        ("--distribution", {"choices": ("rademacher", "steinhaus")}))
    add("kakeya-maximal", "maximal functional for one line per direction", ("--q", f(str)),
        ("--samples", f(int)))
    add("cordoba", "l^2 norm of a line family by angle classes", ("--family", {"choices": ("concurrent", "random")}))
    add("sawyer", "digit-twisted small Kakeya sets", ("--p", f(int)), ("--s", f(int)),
        ("--verify-lines", {"action": "store_const", "const": True}),
        ("--slices", {"action": "store_const", "const": True}))
    add("directions", "projective cardinalities and the angle bound",
        ("--angle-sweep", {"action": "store_const", "const": True}))
    add("count-solutions", "power-sum congruence counts and bounds", ("--y", f(str)),
        ("--method", {"choices": ("auto", "brute", "crt")}))
    add("multilinear", "gcd-weighted multilinear form and its witnesses", ("--gamma", f(float)),
        ("--alpha", f(float)))
    add("padic-check", "lifting-map norm identities and transform commutation", ("--p", f(str)),
        ("--k", f(str)), ("--l", f(str)), ("--r", f(str)),
        ("--dual-measure", {"choices": ("counting", "normalized"), "dest": "dual_measure"}))
    add("lp-condition-f", "ball multiplier decay off dual balls", ("--rho", f(str)))
    return parser


@dataclass
class RunConfig:
    command: str
    values: dict

    def get(self, key, default=None):
        v = self.values.get(key)
        if v is None:
            v = DEFAULTS.get(key, default) if default is None else default
        return v

    def moduli(self, required: bool = True) -> list[int]:
        if self.values.get("N_range"):
            Ns = _parse_range(self.values["N_range"])
        elif self.values.get("N"):
            Ns = _parse_range(str(self.values["N"]))
        elif required:
            raise UsageError("a modulus is required (--N or --N-range)")
        else:
            return []
        n = int(self.get("n"))
        from .zmod import ring

        if _truthy(self.values.get("odd_only")):
            Ns = [N for N in Ns if N % 2]
        if _truthy(self.values.get("prime_power")):
            Ns = [N for N in Ns if N > 1 and ring(N).is_prime_power()]
        if _truthy(self.values.get("factors_above_n")):
            Ns = [N for N in Ns if all(p > n for p in ring(N).primes)]
        if any(N < 1 for N in Ns):
            raise UsageError("moduli must be positive", "zmod")
        return Ns

    def seed(self) -> int:
        s = self.values.get("seed")
        if s is None:
            s = os.environ.get("MODN_SEED", 0)
        return int(s)


def _truthy(v) -> bool:
    if isinstance(v, str):
        return v.strip().lower() in ("1", "true", "yes", "on")
    return bool(v)


def resolve(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    if args.config:
        merged = read_config(args.config)
        merged.update(values)
        values = merged
    if values.get("cap") is not None:
        os.environ["MODN_CAP"] = str(values["cap"])
    return RunConfig(values.pop("command"), values)


# --- subcommands --------------------------------------------------------------


def _fmt(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _sweep(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _gauss_rows(args):
    N, method, summary = args
    from .exp_sums import gauss_closed_form_table, gauss_table

    direct = np.abs(gauss_table(N, method=method))
    closed = gauss_closed_form_table(N)
    diff = np.abs(direct - closed)
    if summary:
        k = int(np.argmax(diff))
        a, b = divmod(k, N)
        return [[N, a, b, direct[a, b], closed[a, b], diff[a, b]]]
    return [[N, a, b, direct[a, b], closed[a, b], diff[a, b]] for a in range(N) for b in range(N)]


def cmd_gauss(cfg: RunConfig) -> Outcome:
    Ns = cfg.moduli()
    if any(N % 2 == 0 for N in Ns):
        raise UsageError("the closed form holds for odd N; add --odd-only", "exp_sums")
    out = Outcome("|G_N(a,b)|^2 = gcd(b,N)/N when gcd(b,N) | a, else 0 (odd N)",
                  ["N", "a", "b", "abs_direct", "abs_closed", "abs_diff"])
    parts = _sweep(_gauss_rows, [(N, cfg.get("method"), _truthy(cfg.values.get("summary"))) for N in Ns],
                   int(cfg.get("jobs")))
    for rows in parts:
        for row in rows:
            out.rows.append(row)
            out.passed &= row[-1] < 1e-9
    return out


def cmd_knapp(cfg: RunConfig) -> Outcome:
    from .extension import conjugate_exponent, knapp_function
    from .zmod import divisors

    n = int(cfg.get("n"))
    s = float(Fraction(str(cfg.get("s"))))
    rprime = float(Fraction(str(cfg.get("rprime"))))
    r = float(conjugate_exponent(rprime))
    out = Outcome("Knapp box: restricted average d^{-(n-1)/s}, input norm d^{-(n+1)/r'}",
                  ["N", "d", "n", "s", "rprime", "lhs", "lhs_predicted", "rhs", "rhs_predicted", "max_abs_error"])
    for N in cfg.moduli():
        ds = _int_list(cfg.values["d"]) if cfg.values.get("d") else [d for d in divisors(N) if d > 1 and N % (d * d) == 0]
        for d in ds:
            try:
                ex = knapp_function(d, N, n)
            except ValueError as exc:
                raise UsageError(str(exc), "extension") from exc
            lhs, rhs = ex.measured_lhs(s), ex.measured_rhs(r)
            plhs, prhs = ex.predicted_lhs(s), ex.predicted_rhs(rprime)
            err = max(abs(lhs - plhs), abs(rhs - prhs))
            out.rows.append([N, d, n, s, rprime, lhs, plhs, rhs, prhs, err])
            out.passed &= err < 1e-9
    return out


def _constant_row(args):
    N, n, rprime = args
    from .extension import constant_test

    t = constant_test(rprime, N, n)
    return [N, n, float(rprime), t.exact, t.direct, t.relative_error]


def cmd_constant_test(cfg: RunConfig) -> Outcome:
    n = int(cfg.get("n"))
    Ns = cfg.moduli()
    if any(N % 2 == 0 for N in Ns):
        raise UsageError("constant test is stated for odd N; add --odd-only", "extension")
    out = Outcome("||E1||_{r'}^{r'} = sum_{d|N} phi(d) d^{-(n-1)(r'/2-1)} on the paraboloid",
                  ["N", "n", "rprime", "closed_form", "direct", "relative_error"])
    for rp in (Fraction(v) for v in str(cfg.get("rprime")).split(",") if v.strip()):
        for row in _sweep(_constant_row, [(N, n, rp) for N in Ns], int(cfg.get("jobs"))):
            out.rows.append(row)
            out.passed &= row[-1] < 1e-8
    return out


def cmd_tomas_scan(cfg: RunConfig) -> Outcome:
    from .extension import tomas_endpoint, tomas_scan

    n = int(cfg.get("n"))
    r = float(Fraction(cfg.values["r"])) if cfg.values.get("r") else float(tomas_endpoint(n))
    families = tuple(cfg.values.get("families", "knapp,constant,delta,random").split(","))
    res = tomas_scan(cfg.moduli(), n, r, families=families, seed=cfg.seed())
    out = Outcome("restriction ratio ||F^|_S||_2 / ||F||_r at the l^2 endpoint, s=2",
                  ["N", "family", "ratio", "detail"])
    for row in res.rows:
        out.rows.append([row.N, row.family, row.ratio, row.detail])
    for fam in families:
        slope = res.slope((fam,)) if len(res.max_by_N((fam,))) > 1 else float("nan")
        out.rows.append(["slope", fam, slope, f"r={r!r}"])
    overall = res.slope() if len(res.max_by_N()) > 1 else float("nan")
    out.rows.append(["slope", "max", overall, f"r={r!r}"])
    if cfg.values.get("max_slope") is not None:
        out.passed &= overall < float(cfg.values["max_slope"])
    if cfg.values.get("min_slope") is not None:
        out.passed &= overall >= float(cfg.values["min_slope"])
    return out


def cmd_moment_sharpness(cfg: RunConfig) -> Outcome:
    from .extension import moment_growth, moment_lowerbound

    p, n, L = int(cfg.get("p")), int(cfg.get("n")), int(cfg.get("L"))
    if p <= n:
        raise UsageError(f"need p > n (p={p}, n={n})", "extension")
    out = Outcome("||E1||_{r'}^{r'} on the moment curve mod p^{nL} >= sum_m p^{(L-m)(n(n+1)/2+1-r')}",
                  ["p", "n", "L", "rprime", "direct", "lower_bound", "dominates", "chain_ok", "increment_ratio"])
    for rp in _float_list(cfg.get("rprime")):
        rep = moment_lowerbound(p, n, L, rp)
        _, inc = moment_growth(p, n, rp)
        out.rows.append([p, n, L, rp, rep.direct, rep.lower_bound, rep.dominates, rep.chain_ok, inc])
        out.passed &= rep.dominates
    return out


def _packet_rows(args):
    N, n, ds, seed = args
    from .fourier import DUAL, GroupFunction
    from .surfaces import paraboloid
    from .wave_packets import PacketIndex, Tube, decompose, packet_image_deviation, reconstruct
    from .zmod import divisors

    rng = np.random.default_rng(seed + N)
    m = n - 1
    H = GroupFunction(rng.standard_normal((N,) * m) + 1j * rng.standard_normal((N,) * m), N, DUAL)
    rows = []
    for d in ds or divisors(N):
        if N % d:
            continue
        err = float(np.max(np.abs(reconstruct(decompose(H, d), d, N).values - H.values)))
        idx = PacketIndex(tuple(int(v) for v in rng.integers(0, d, m)), tuple(int(v) for v in rng.integers(0, N // d, m)), d, N)
        tube = Tube(idx, paraboloid(n))
        card, want = tube.cardinality(), tube.expected_cardinality()
        dev = packet_image_deviation(idx) if (d * d) % N == 0 else float("nan")
        rows.append([N, d, n, err, card, want, dev])
    return rows


def cmd_wave_packets(cfg: RunConfig) -> Outcome:
    n = int(cfg.get("n"))
    ds = _int_list(cfg.values["d"]) if cfg.values.get("d") else []
    out = Outcome("H = sum of packets; E psi_{theta,v} is a modulated tube of size N d^{n-1} when N | d^2",
                  ["N", "d", "n", "reconstruction_error", "tube_size", "expected_tube_size", "image_deviation"])
    for rows in _sweep(_packet_rows, [(N, n, ds, cfg.seed()) for N in cfg.moduli()], int(cfg.get("jobs"))):
        for row in rows:
            out.rows.append(row)
            out.passed &= row[3] < 1e-9 and row[4] == row[5] and not (row[6] > 1e-9)
    return out


def cmd_khintchine(cfg: RunConfig) -> Outcome:
    from .wave_packets import khintchine_experiment

    n = int(cfg.get("n"))
    if not cfg.values.get("d"):
        raise UsageError("--d is required", "wave_packets")
    out = Outcome("E|sum eps_T E psi_T| >= 2^{-1/2} (sum chi_T)^{1/2} pointwise, N = d^2",
                  ["N", "d", "n", "tubes", "norm_closed", "norm_direct", "min_slack", "min_ratio", "exhaustive"])
    try:
        rep = khintchine_experiment(int(cfg.values["d"]), n, distribution=cfg.values.get("distribution", "rademacher"),
                                    trials=int(cfg.get("trials")), seed=cfg.seed())
    except ValueError as exc:
        raise UsageError(str(exc), "wave_packets") from exc
    out.rows.append([rep.N, rep.d, rep.n, rep.thetas, rep.norm_closed, rep.norm_direct, rep.min_slack, rep.min_ratio,
                     rep.exhaustive])
    out.passed = rep.passed
    return out


def cmd_kakeya_maximal(cfg: RunConfig) -> Outcome:
    from .kakeya import Line, enumerate_directions, maximal_functional

    n = int(cfg.get("n"))
    q = float(Fraction(cfg.values["q"])) if cfg.values.get("q") else None
    rng = np.random.default_rng(cfg.seed())
    out = Outcome("||sum_w chi_{l_w}||_q against (sum |l_w|)^{(n-1)/n}, one line per direction",
                  ["N", "n", "family", "lhs", "rhs", "ratio"])
    for N in cfg.moduli():
        dirs = enumerate_directions(N, n)
        lines = [Line.through(w, (0,) * n, N) for w in dirs]
        lhs, rhs = maximal_functional(lines, N, n, q)
        out.rows.append([N, n, "concurrent", lhs, rhs, lhs / rhs])
        for i in range(int(cfg.get("samples"))):
            lines = [Line.through(w, tuple(int(c) for c in rng.integers(0, N, n)), N) for w in dirs]
            lhs, rhs = maximal_functional(lines, N, n, q)
            out.rows.append([N, n, f"random_{i}", lhs, rhs, lhs / rhs])
    return out


def cmd_cordoba(cfg: RunConfig) -> Outcome:
    from .kakeya import Line, cordoba_l2, enumerate_directions

    n = int(cfg.get("n"))
    family = cfg.values.get("family", "concurrent")
    rng = np.random.default_rng(cfg.seed())
    out = Outcome("||sum chi_l||_2^2 = sum |l cap l'| <= sum N/angle(w,w')",
                  ["N", "n", "family", "l2_squared", "pair_sum", "angle_bound", "prime_bound", "class_ratio"])
    for N in cfg.moduli():
        dirs = enumerate_directions(N, n)
        if family == "concurrent":
            lines = [Line.through(w, (0,) * n, N) for w in dirs]
        else:
            lines = [Line.through(w, tuple(int(c) for c in rng.integers(0, N, n)), N) for w in dirs]
        rep = cordoba_l2(lines, N, n)
        out.rows.append([N, n, family, rep.l2_squared, rep.pair_sum, rep.angle_bound,
                         "" if rep.prime_bound is None else rep.prime_bound, rep.cap_ratio])
        out.passed &= rep.consistent and (rep.prime_bound is None or rep.l2_squared <= rep.prime_bound)
    return out


def cmd_sawyer(cfg: RunConfig) -> Outcome:
    from .kakeya import sawyer_construct

    p, s = int(cfg.get("p", 2)), int(cfg.values.get("s", 1))
    try:
        rep = sawyer_construct(p, s, verify_lines=_truthy(cfg.values.get("verify_lines")))
    except ValueError as exc:
        raise UsageError(str(exc), "kakeya") from exc
    if _truthy(cfg.values.get("slices")):
        out = Outcome("|{phi_w(t) : w}| <= p^{alpha-s} for every slice t", ["t", "image_size", "bound"])
        for t, c in enumerate(rep.slice_counts):
            out.rows.append([t, int(c), rep.slice_bound])
    else:
        out = Outcome("digit-twisted Kakeya set: slices <= p^{alpha-s}, density <= p^{-s}",
                      ["p", "s", "alpha", "max_slice", "slice_bound", "size", "density", "density_bound",
                       "lines_contained"])
        out.rows.append([p, s, rep.alpha, rep.max_slice, rep.slice_bound, rep.size, rep.density, rep.density_bound,
                         "" if rep.lines_contained is None else rep.lines_contained])
    out.passed = rep.passed
    return out


def _direction_row(args):
    N, n, sweep = args
    from .kakeya import angle_lemma_sweep, enumerate_directions, projective_size, sphere_size, sphere_zero_size
    from .zmod import totient

    count = len(enumerate_directions(N, n))
    row = [N, n, count, projective_size(N, n), sphere_size(N, n), projective_size(N, n) * totient(N),
           sphere_zero_size(N)]
    if sweep:
        rep = angle_lemma_sweep(N, n)
        row += [rep.line_pairs, rep.violations, rep.tight_pairs]
    else:
        row += ["", "", ""]
    return row


def cmd_directions(cfg: RunConfig) -> Outcome:
    n = int(cfg.get("n"))
    sweep = _truthy(cfg.values.get("angle_sweep"))
    out = Outcome("|P^{n-1}(N)| = N^{n-1} prod_p sum_{j<n} p^{-j}; |S^0(N)| = N prod_p (1-1/p); |l cap l'| <= N/angle",
                  ["N", "n", "directions", "projective_formula", "sphere", "sphere_formula", "units",
                   "line_pairs", "angle_violations", "tight_pairs"])
    for row in _sweep(_direction_row, [(N, n, sweep) for N in cfg.moduli()], int(cfg.get("jobs"))):
        out.rows.append(row)
        out.passed &= row[2] == row[3] and row[4] == row[5] and (row[8] in ("", 0))
    return out


def cmd_count_solutions(cfg: RunConfig) -> Outcome:
    from .congruences import BoundViolation, count_solutions

    if not cfg.values.get("y"):
        raise UsageError("--y is required", "congruences")
    y = tuple(_int_list(cfg.values["y"]))
    out = Outcome("N(y;N) = #{t : sum t_i^j = sum y_i^j, j <= n}; <= n! prod gcd(y_j-y_k, p^alpha) when delta < alpha/2",
                  ["N", "n", "y", "exact", "hensel_bound", "regime", "planar_bound", "gcd_product", "method"])
    for N in cfg.moduli():
        try:
            rep = count_solutions(y, N, method=cfg.values.get("method", "auto"))
        except BoundViolation as exc:
            out.passed = False
            out.rows.append([N, len(y), " ".join(map(str, y)), "", "", str(exc), "", "", ""])
            continue
        h = rep.hensel
        regime = "n/a" if h is None else ("applicable" if h.applicable else "not applicable")
        out.rows.append([N, len(y), " ".join(map(str, rep.y)), rep.count,
                         "" if h is None or h.bound is None else h.bound, regime,
                         "" if h is None or h.planar_bound is None else h.planar_bound, rep.gcd_product, rep.method])
    return out


def cmd_multilinear(cfg: RunConfig) -> Outcome:
    from .congruences import multilinear_witnesses

    n = int(cfg.get("n"))
    gamma, alpha = float(cfg.get("gamma")), float(cfg.get("alpha"))
    out = Outcome("N^{-n} sum prod F(t_i) prod gcd(t_j-t_k,N)^gamma against ||F||_alpha^n",
                  ["N", "n", "gamma", "alpha", "witness", "lhs", "rhs", "ratio", "in_range"])
    for N in cfg.moduli():
        for name, v in multilinear_witnesses(N, gamma, alpha, n).items():
            out.rows.append([N, n, gamma, alpha, name, v.lhs, v.rhs, v.ratio, v.in_range])
    return out


def cmd_padic_check(cfg: RunConfig) -> Outcome:
    from .padic import random_truncated, verify_ft_commutation, verify_norm_identities

    n = int(cfg.get("n"))
    primes = _int_list(cfg.values.get("p", "2,3,5"))
    ks = _int_list(cfg.values.get("k", "0,1,2"))
    ls = _int_list(cfg.values.get("l", "0,1,2"))
    rs = _float_list(cfg.values.get("r", "1,1.5,2,3,inf"))
    measure = cfg.values.get("dual_measure", "counting")
    rng = np.random.default_rng(cfg.seed())
    out = Outcome("||F_{k,l} f|| = p^{-kn/r'} ||f||_r, ||F^_{l,k} g|| = p^{ln/r} ||g||_r, F commutes with transforms",
                  ["p", "k", "l", "n", "r", "group_error", "dual_error", "commutation_error"])
    from .zmod import check_cap

    for p in primes:
        for k in ks:
            for l in ls:
                check_cap(p ** ((k + l) * n), "padic table")
                f = random_truncated(p, k, l, n, rng)
                comm = verify_ft_commutation(f)
                for r in rs:
                    a, b = verify_norm_identities(f, r, measure)
                    out.rows.append([p, k, l, n, r, a.relative_error, b.relative_error, comm])
                    out.passed &= a.passed and b.passed and comm < 1e-9
    return out


def cmd_lp_condition_f(cfg: RunConfig) -> Outcome:
    from .exp_sums import condition_f_report, condition_f_supremum

    n = int(cfg.get("n"))
    rho = Fraction(str(cfg.get("rho")))
    out = Outcome("|phi^_rho(xi)| s^n bounded off the dual ball of radius s, s >= 1/rho",
                  ["N", "n", "rho", "kind", "s", "admissible", "constant", "divisor_count", "dominated"])
    for N in cfg.moduli():
        if rho.denominator == 1 and N % rho.numerator:
            raise UsageError(f"rho={rho} must divide N={N}", "zmod")
        for kind, rows in (("breakpoint", condition_f_report(rho, N, n)), ("supremum", condition_f_supremum(rho, N, n))):
            for row in rows:
                out.rows.append([N, n, rho, kind, row.s, row.admissible, row.constant, row.divisor_count, row.dominated])
    return out


COMMANDS = {
    "gauss": (cmd_gauss, "exp_sums"),
    "knapp": (cmd_knapp, "extension"),
    "constant-test": (cmd_constant_test, "extension"),
    "tomas-scan": (cmd_tomas_scan, "extension"),
    "moment-sharpness": (cmd_moment_sharpness, "extension"),
    "wave-packets": (cmd_wave_packets, "wave_packets"),
    "khintchine": (cmd_khintchine, "wave_packets"),
    "kakeya-maximal": (cmd_kakeya_maximal, "kakeya"),
    "cordoba": (cmd_cordoba, "kakeya"),
    "sawyer": (cmd_sawyer, "kakeya"),
    "directions": (cmd_directions, "kakeya"),
    "count-solutions": (cmd_count_solutions, "congruences"),
    "multilinear": (cmd_multilinear, "congruences"),
    "padic-check": (cmd_padic_check, "padic"),
    "lp-condition-f": (cmd_lp_condition_f, "exp_sums"),
}


# --- output ---------------------------------------------------------------------


def render(outcome: Outcome, cfg: RunConfig) -> str:
    rows = [[_fmt(v) for v in row] for row in outcome.rows]
    if cfg.get("format") == "json":
        config = {k: v for k, v in sorted(cfg.values.items()) if k not in ("output", "jobs", "config")}
        doc = {"config": {"command": cfg.command, **config}, "anchor": outcome.anchor,
               "rows": [dict(zip(outcome.columns, r)) for r in rows], "pass": bool(outcome.passed)}
        return json.dumps(doc, sort_keys=True, default=str, allow_nan=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(outcome.columns)
    w.writerow([f"# {outcome.anchor}"])
    w.writerows(rows)
    return buf.getvalue()


def run(argv=None) -> int:
    saved_cap = os.environ.get("MODN_CAP")
    try:
        return _run(argv)
    finally:  # --cap only applies to this invocation
        if saved_cap is None:
            os.environ.pop("MODN_CAP", None)
        else:
            os.environ["MODN_CAP"] = saved_cap


def _run(argv) -> int:
    from .zmod import EnumerationCapError

    try:
        cfg = resolve(argv)
        fn, owner = COMMANDS[cfg.command]
        try:
            outcome = fn(cfg)
        except (EnumerationCapError, ValueError) as exc:
            raise UsageError(str(exc), owner) from exc
    except UsageError as exc:
        print(f"modn: usage error [{exc.owner}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"modn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(outcome, cfg)
    dest = cfg.get("output")
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_PASS if outcome.passed else EXIT_VIOLATION


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
