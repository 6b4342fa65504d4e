"""Command-line front end: ``dirops <subcommand> [flags]``.

Every subcommand writes a table (CSV with a header row, or JSON) to stdout or
``--out`` and one ``PASS``/``FAIL`` line per asserted bound to stderr.

Exit codes: 0 all checks passed, 1 invalid arguments, 2 a bound failed,
3 numerics did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from dirops import counting, matrix, series, spectrum, special, symbols, verification
from dirops.errors import DomainError, NonConvergenceError, NumericRangeError

EXIT_OK, EXIT_INVALID, EXIT_BOUND, EXIT_NONCONV = 0, 1, 2, 3

TOLERANCES = {
    "lower_slack": 0.98,
    "upper_slack": 1e-9,
    "approx_slack": 1e-9,
    "hs_slack": 0.0,
    "hermitian": 1e-14,
    "nonhermitian": 1e-6,
    "kernel": 1e-13,
    "majorant": 1e-12,
    "cov": 1e-4,
    "lp": 1e-12,
    "monotone": 1e-10,
    "spectrum_ratio": 0.1,
    "translation_rel": 0.01,
    "diverge_lo": 1.7,
    "diverge_hi": 2.1,
}

SCHEMAS = {
    "bounds": "c1_re,c1_im,c2_re,c2_im,K,N,lower,upper,sigma1_sq",
    "approx": "index,sigma,analytic_bound",
    "remainder": "n,remainder,analytic_bound",
    "hs": "K,N,frobenius_sq,closed_form_sq,row_tail,abs_diff",
    "spectrum": "m,estimate",
    "selfadjoint": "kind,c1_re,c1_im,N,hermitian_residual",
    "kernels": "a_re,a_im,max_dev,kernel_norm,deriv_kernel_norm",
    "counting": ",".join(counting.SCAN_HEADER),
    "cov": "seed,length,lhs,rhs,rel_err,K,radial_nodes,angular_nodes,tail_budget",
    "lp": "draw,length,rel_err",
    "classify": "label,c0,samples,seed,min_real_part,witness_re,witness_im",
    "diverge": "delta,epsilon,I_delta,I_half_delta,ratio",
    "dump": "k,n,re,im",
}

HELP = {
    "bounds": "norm sandwich: largest singular value against the two closed-form bounds",
    "approx": "singular values against the approximation-number bound",
    "remainder": "norm of the rank-n remainder against the same bound",
    "hs": "Frobenius norm against the closed form and its row-tail budget",
    "spectrum": "normalised power norms ||A^m||^(1/m), m = 1, 2, 4, ..",
    "selfadjoint": "Frobenius norm of S - S^H on the square embedding",
    "kernels": "adjoint action on reproducing kernels at grid points a",
    "counting": "mean counting function: closed form, oracle, majorant, compactness ratio",
    "cov": "change-of-variables identity on random polynomials",
    "lp": "Littlewood-Paley norm identity on random polynomials",
    "classify": "sampled class evidence for a general symbol",
    "diverge": "growth of the divergence integral as delta halves",
    "dump": "matrix entries of the truncated operator",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@dataclass
class Grid:
    re: tuple[float, float, int]
    im: tuple[float, float, int]

    def points(self) -> list[complex]:
        rs = _axis(*self.re)
        ims = _axis(*self.im)
        return [complex(r, i) for r in rs for i in ims]


def _axis(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [lo]
    return [float(x) for x in np.linspace(lo, hi, steps)]


def parse_grid(text: str) -> Grid:
    try:
        re_part, im_part = text.split(",")
        axes = []
        for part in (re_part, im_part):
            lo, hi, steps = part.split(":")
            steps = int(steps)
            if steps < 1:
                raise ValueError("steps must be positive")
            axes.append((float(lo), float(hi), steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    return Grid(*axes)


def parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"bad tolerance {text!r}; known names: {', '.join(sorted(TOLERANCES))}"
        )
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from None


def parse_symbol_arg(text: str):
    try:
        return symbols.parse_symbol(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    epilog = "CSV schemas (header row first):\n" + "\n".join(
        f"  {name:<12} {cols}" for name, cols in SCHEMAS.items()
    )
    epilog += (
        "\n\nSymbols: affine:c1_re,c1_im,c2_re,c2_im | translate:c1_re,c1_im"
        " | general:c0;re,im;re,im;..\n"
        "Exit codes: 0 pass, 1 invalid arguments, 2 bound failed, 3 no convergence.\n"
        "DIROPS_THREADS caps worker threads for grid scans."
    )
    p = _Parser(prog="dirops", description="Composition-differentiation operators on H^2 of "
                "Dirichlet series.", epilog=epilog,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SCHEMAS:
        sp = sub.add_parser(name, help=HELP[name],
                            description=f"{HELP[name]}.\nCSV columns: {SCHEMAS[name]}",
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("--symbol", type=parse_symbol_arg, default=None,
                        help="symbol literal, e.g. affine:1,0,0.25,0")
        sp.add_argument("--K", type=_positive_int, default=None, help="rows kept (dyadic index)")
        sp.add_argument("--N", type=_positive_int, default=None, help="columns kept")
        sp.add_argument("--n-max", type=int, default=16, help="largest n for approx/remainder")
        sp.add_argument("--m-max", type=_positive_int, default=64, help="largest power (spectrum)")
        sp.add_argument("--grid", type=parse_grid, default=None,
                        help="re0:re1:steps,im0:im1:steps")
        sp.add_argument("--T", type=_positive_float, default=1e4, help="counting window height")
        sp.add_argument("--delta", type=_positive_float, default=1e-3)
        sp.add_argument("--epsilon", type=_positive_float, default=0.1)
        sp.add_argument("--radial", type=int, default=128, help="radial quadrature nodes")
        sp.add_argument("--angular", type=int, default=256, help="angular quadrature nodes")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--draws", type=_positive_int, default=None,
                        help="random polynomials (cov 5, lp 100)")
        sp.add_argument("--out", default=None, help="write the table here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--tol", type=parse_tol, action="append", default=[],
                        metavar="NAME=VALUE", help="override a check tolerance")
    return p


@dataclass
class Result:
    header: list[str]
    rows: list[tuple] = field(default_factory=list)
    checks: list[tuple[bool, str]] = field(default_factory=list)
    document: object = None  # JSON payload overriding the row list

    def check(self, ok: bool, message: str) -> None:
        self.checks.append((bool(ok), message))


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def render(res: Result, fmt: str) -> str:
    if fmt == "json":
        if res.document is not None:
            payload = res.document
        else:
            payload = [dict(zip(res.header, (None if c is None else _json_val(c) for c in row)))
                       for row in res.rows]
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(res.header)
    for row in res.rows:
        w.writerow([_cell(c) for c in row])
    return buf.getvalue()


def _json_val(v):
    if isinstance(v, (np.floating,)):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


# -- subcommands --------------------------------------------------------------

def _need_symbol(args, *kinds):
    sym = args.symbol
    if sym is None:
        raise UsageError("--symbol is required")
    if kinds and not isinstance(sym, kinds):
        names = "/".join(k.__name__ for k in kinds)
        raise UsageError(f"this subcommand needs a {names}")
    return sym


def _need_strict(args) -> symbols.AffineSymbol:
    sym = _need_symbol(args, symbols.AffineSymbol)
    verdict = symbols.validate_affine(sym.c1, sym.c2)
    if verdict is not symbols.AffineVerdict.STRICT_INTERIOR:
        raise UsageError(
            f"affine symbol is {verdict.value}: need Re c1 > 1/2 + |c2| "
            f"({sym.c1.real} vs {0.5 + abs(sym.c2)})"
        )
    return sym


def _need_real_params(sym) -> tuple[float, float]:
    if sym.c1.imag or sym.c2.imag:
        raise UsageError("the approximation-number bound needs real c1, c2")
    if not 2 * sym.c1.real - 2 * abs(sym.c2.real) - 1 > 0:
        raise UsageError("the approximation-number bound needs 2 c1 - 2|c2| - 1 > 0")
    return sym.c1.real, sym.c2.real


def cmd_bounds(args, tol) -> Result:
    sym = _need_strict(args)
    K, N = args.K or 96, args.N or 96
    M = matrix.build_affine_matrix(sym, K, N)
    s1 = float(matrix.singular_values(M).sigmas[0])
    lower = special.norm_lower_bound(sym.c1.real)
    upper = special.norm_upper_bound(sym.c1.real)
    sq = s1 * s1
    res = Result(SCHEMAS["bounds"].split(","))
    res.rows.append((sym.c1.real, sym.c1.imag, sym.c2.real, sym.c2.imag, K, N, lower, upper, sq))
    res.check(sq >= tol["lower_slack"] * lower,
              f"norm lower bound: sigma1^2={sq:.10g} >= {tol['lower_slack']}*{lower:.10g}")
    res.check(sq <= upper + tol["upper_slack"],
              f"norm upper bound: sigma1^2={sq:.10g} <= {upper:.10g}")
    return res


def cmd_approx(args, tol) -> Result:
    sym = _need_strict(args)
    _need_real_params(sym)
    K, N = args.K or 96, args.N or 96
    rep = matrix.singular_values(matrix.build_affine_matrix(sym, K, N))
    n_max = min(args.n_max, rep.sigmas.size - 1)
    if n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    res = Result(SCHEMAS["approx"].split(","))
    for i, s, b in rep.rows():
        if i > n_max:
            break
        res.rows.append((i, s, b))
        res.check(s <= b + tol["approx_slack"], f"a_{i + 1}: sigma={s:.6e} <= bound={b:.6e}")
    return res


def cmd_remainder(args, tol) -> Result:
    sym = _need_strict(args)
    c1, c2 = _need_real_params(sym)
    K, N = args.K or 96, args.N or 96
    if not 0 <= args.n_max <= K:
        raise UsageError(f"--n-max must lie in [0, {K}]")
    M = matrix.build_affine_matrix(sym, K, N)
    res = Result(SCHEMAS["remainder"].split(","))
    for n in range(args.n_max + 1):
        r = matrix.remainder_norm(M, n)
        b = matrix.approx_bound(c1, c2, n)
        res.rows.append((n, r, b))
        res.check(r <= b + tol["approx_slack"], f"remainder n={n}: {r:.6e} <= {b:.6e}")
    return res


def cmd_hs(args, tol) -> Result:
    sym = _need_strict(args)
    K, N = args.K or 120, args.N or 96
    fro = matrix.hs_norm(matrix.build_affine_matrix(sym, K, N)) ** 2
    closed = matrix.hs_closed_form(sym, N)
    cf_sq = closed.value ** 2
    tail = matrix.hs_row_tail(sym, N, K)
    budget = tail + 2 * closed.value * closed.tail_bound + 64 * np.finfo(float).eps * cf_sq
    diff = abs(cf_sq - fro)
    res = Result(SCHEMAS["hs"].split(","))
    res.rows.append((K, N, fro, cf_sq, tail, diff))
    res.check(math.isfinite(fro) and math.isfinite(cf_sq), "Hilbert-Schmidt norm finite")
    res.check(diff <= budget + tol["hs_slack"],
              f"Frobenius^2 vs closed form: |diff|={diff:.3e} <= budget {budget:.3e}")
    return res


def _spectrum_matrix(args):
    sym = _need_symbol(args, symbols.AffineSymbol, symbols.TranslationSymbol)
    N = args.N or 64
    if isinstance(sym, symbols.TranslationSymbol):
        return sym, matrix.build_translation_matrix(sym, N)
    _need_strict(args)
    k_fit = int(math.floor(math.log2(N))) + 1
    K = args.K or k_fit
    if K > k_fit:
        raise UsageError(f"--K {K} has no square embedding at N={N}; need K <= {k_fit}")
    return sym, matrix.build_affine_matrix(sym, K, N)


def cmd_spectrum(args, tol) -> Result:
    sym, M = _spectrum_matrix(args)
    m_max = args.m_max
    if m_max & (m_max - 1):
        raise UsageError("--m-max must be a power of 2")
    seq = spectrum.spectral_radius_est(M, m_max)
    res = Result(SCHEMAS["spectrum"].split(","))
    res.rows.extend(seq)
    vals = [v for _, v in seq]
    mono = all(b <= a + tol["monotone"] for a, b in zip(vals, vals[1:]))
    res.check(mono, "power-norm sequence nonincreasing")
    if isinstance(sym, symbols.TranslationSymbol):
        logn = np.log(np.arange(1, M.N + 1, dtype=np.float64))
        rho = float(np.max(np.exp(-sym.c1.real * logn) * logn))
        rel = abs(vals[-1] - rho) / rho
        res.check(rel <= tol["translation_rel"],
                  f"translation spectral radius: {vals[-1]:.6g} vs max n^-c1 ln n = {rho:.6g}")
    else:
        res.check(vals[-1] < tol["spectrum_ratio"] * vals[0],
                  f"quasinilpotence: estimate at m={seq[-1][0]} is {vals[-1]:.4g} "
                  f"< {tol['spectrum_ratio']}*sigma1 = {tol['spectrum_ratio'] * vals[0]:.4g}")
    return res


def cmd_selfadjoint(args, tol) -> Result:
    sym = _need_symbol(args, symbols.AffineSymbol, symbols.TranslationSymbol)
    N = args.N or 64
    if isinstance(sym, symbols.TranslationSymbol):
        M = matrix.build_translation_matrix(sym, N)
        expect = sym.c1.imag == 0
        kind = "translation"
    else:
        _need_strict(args)
        k_fit = int(math.floor(math.log2(N))) + 1
        M = matrix.build_affine_matrix(sym, min(args.K or k_fit, k_fit), N)
        expect = False
        kind = "affine"
    r = spectrum.hermitian_residual(M)
    res = Result(SCHEMAS["selfadjoint"].split(","))
    res.rows.append((kind, sym.c1.real, sym.c1.imag, N, r))
    if expect:
        res.check(r <= tol["hermitian"], f"self-adjoint: residual {r:.3e} <= {tol['hermitian']}")
    else:
        res.check(r >= tol["nonhermitian"],
                  f"not self-adjoint: residual {r:.3e} >= {tol['nonhermitian']}")
    return res


def cmd_kernels(args, tol) -> Result:
    sym = _need_symbol(args, symbols.AffineSymbol, symbols.TranslationSymbol)
    if isinstance(sym, symbols.AffineSymbol):
        _need_strict(args)
    grid = args.grid or Grid((0.75, 2.0, 3), (-1.0, 1.0, 3))
    pts = grid.points()
    for a in pts:
        if not a.real > 0.5:
            raise UsageError(f"kernel point {a} needs Re(a) > 1/2")
    K, N = args.K or 96, args.N or 96
    res = Result(SCHEMAS["kernels"].split(","))
    for a in pts:
        dev = matrix.adjoint_kernel_check(sym, a, K, N)
        kn, kdn = series.kernel_norms(a)
        res.rows.append((a.real, a.imag, dev, kn, kdn))
        res.check(dev <= tol["kernel"], f"adjoint kernel identity at a={a}: {dev:.3e}")
    return res


def cmd_counting(args, tol) -> Result:
    sym = _need_strict(args)
    grid = args.grid or Grid((0.55, 1.2, 14), (-0.3, 0.3, 7))
    pts = [p for p in grid.points() if p != sym.c1]
    for p in pts:
        if not p.real > 0.5:
            raise UsageError(f"grid point {p} needs Re(w) > 1/2")
    samples = counting.scan_grid(sym, pts, args.T)
    res = Result(list(counting.SCAN_HEADER))
    worst_oracle = worst_major = True
    for s in samples:
        res.rows.append(s.row())
        re0 = counting.preimage_real_part(sym, complex(*s.w))
        if re0 is not None and s.abs_err > 3 * math.pi * re0 / args.T:
            worst_oracle = False
        if s.m_closed > 0 and s.m_closed > s.majorant + tol["majorant"]:
            worst_major = False
    res.check(worst_oracle, f"oracle within 3*pi*Re(s0)/T at T={args.T:g} on {len(pts)} points")
    res.check(worst_major, f"closed form dominated by majorant on {len(pts)} points")
    return res


def _random_poly(rng: np.random.Generator, n: int) -> series.DirichletPolynomial:
    return series.DirichletPolynomial(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def cmd_cov(args, tol) -> Result:
    sym = _need_strict(args)
    length = args.N or 8
    if length > 16:
        raise UsageError("cov polynomials have length at most 16")
    quad = verification.QuadratureSpec(args.radial, args.angular)
    K = args.K or verification.DEFAULT_K
    rng = np.random.default_rng(args.seed)
    res = Result(SCHEMAS["cov"].split(","))
    reports = []
    for d in range(args.draws or 5):
        P = _random_poly(rng, length)
        rep = verification.cov_check(sym, P, K, quad)
        reports.append(rep.to_json())
        res.rows.append((d, length, rep.lhs, rep.rhs, rep.rel_err, rep.K, rep.radial_nodes,
                         rep.angular_nodes, rep.tail_budget))
        res.check(rep.rel_err <= tol["cov"], f"change of variables draw {d}: {rep.rel_err:.3e}")
    res.document = reports
    return res


def cmd_lp(args, tol) -> Result:
    rng = np.random.default_rng(args.seed)
    length = args.N or 32
    res = Result(SCHEMAS["lp"].split(","))
    draws = args.draws or 100
    ok = True
    worst = 0.0
    for d in range(draws):
        e = series.lp_identity_check(_random_poly(rng, length))
        worst = max(worst, e)
        ok &= e <= tol["lp"]
        res.rows.append((d, length, e))
    res.check(ok, f"Littlewood-Paley identity on {draws} draws: worst {worst:.3e}")
    return res


def cmd_classify(args, tol) -> Result:
    sym = _need_symbol(args)
    count = args.N or 4096
    ev = symbols.classify_sampled(sym, count, args.seed)
    w = ev.witness
    res = Result(SCHEMAS["classify"].split(","))
    res.rows.append((ev.label, ev.c0, ev.samples, ev.seed, ev.min_real_part,
                     None if w is None else w.real, None if w is None else w.imag))
    res.document = ev.as_dict()
    return res


def cmd_diverge(args, tol) -> Result:
    d, e = args.delta, args.epsilon
    if not d < e:
        raise UsageError("need --delta < --epsilon")
    i_d = counting.divergence_demo(d, e)
    i_h = counting.divergence_demo(d / 2, e)
    ratio = i_h / i_d
    res = Result(SCHEMAS["diverge"].split(","))
    res.rows.append((d, e, i_d, i_h, ratio))
    res.check(tol["diverge_lo"] <= ratio <= tol["diverge_hi"],
              f"I(delta/2)/I(delta) = {ratio:.4f} in [{tol['diverge_lo']}, {tol['diverge_hi']}]")
    return res


def cmd_dump(args, tol) -> Result:
    sym = _need_symbol(args, symbols.AffineSymbol, symbols.TranslationSymbol)
    if isinstance(sym, symbols.TranslationSymbol):
        M = matrix.build_translation_matrix(sym, args.N or 16)
    else:
        _need_strict(args)
        M = matrix.build_affine_matrix(sym, args.K or 8, args.N or 16)
    res = Result(SCHEMAS["dump"].split(","))
    res.rows.extend(M.rows())
    return res


COMMANDS = {
    "bounds": cmd_bounds,
    "approx": cmd_approx,
    "remainder": cmd_remainder,
    "hs": cmd_hs,
    "spectrum": cmd_spectrum,
    "selfadjoint": cmd_selfadjoint,
    "kernels": cmd_kernels,
    "counting": cmd_counting,
    "cov": cmd_cov,
    "lp": cmd_lp,
    "classify": cmd_classify,
    "diverge": cmd_diverge,
    "dump": cmd_dump,
}


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    tol = dict(TOLERANCES)
    tol.update(dict(args.tol))
    try:
        if args.radial < 8 or args.angular < 8:
            raise UsageError("--radial and --angular need at least 8 nodes")
        res = COMMANDS[args.command](args, tol)
    except (UsageError, DomainError) as exc:
        print(f"dirops {args.command}: invalid: {exc}", file=stderr)
        return EXIT_INVALID
    except (NonConvergenceError, NumericRangeError) as exc:
        print(f"dirops {args.command}: no convergence: {exc}", file=stderr)
        return EXIT_NONCONV
    text = render(res, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    for ok, msg in res.checks:
        print(f"{'PASS' if ok else 'FAIL'} {args.command}: {msg}", file=stderr)
    return EXIT_OK if all(ok for ok, _ in res.checks) else EXIT_BOUND


def main() -> None:
    sys.exit(run_command())
