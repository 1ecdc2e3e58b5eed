"""Command-line entry point: eiscong <subcommand> [options]."""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .congruence import (
    c_constant,
    check_fourier_congruence,
    congruence_module_order,
    criterion_report,
)
from .eisenstein import EisensteinSeries
from .errors import EiscongError, UsageError
from .lvalues import l_value_nonpositive, l_value_numeric
from .quadfield import make_field
from .rayclass import (
    all_primitive_characters,
    characters_of_conductor,
    gauss_sum,
    named_character,
    ray_class_group,
)
from .specialvalues import (
    admissible,
    eisenstein_special_value,
    mod_p_nonvanishing,
    verify_special_value_numeric,
)
from .store import CacheStore, fixture_path, parse_eigenvalue_file

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, obj, text_lines):
    if args.json:
        print(json.dumps(obj, indent=1, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


def _ideal(F, text: str):
    text = text.strip()
    if text.startswith("[") or text == "O_F":
        return F.parse_ideal(text)
    return F.principal(int(text))


def _character(F, args, prefix=""):
    cond = getattr(args, prefix + "cond", None)
    if cond is not None:
        idx = getattr(args, prefix + "char_index", 0) or 0
        chars = characters_of_conductor(F, _ideal(F, cond))
        if not 0 <= idx < len(chars):
            raise UsageError(f"character index {idx} out of range: {len(chars)} primitive characters of conductor {cond}")
        return chars[idx]
    return None


def _series(F, args) -> EisensteinSeries:
    try:
        phi = named_character(F, args.phi)
        psi = named_character(F, args.psi)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    return EisensteinSeries(phi, psi, args.k)


# -- subcommands ------------------------------------------------------------------

def cmd_field(args):
    F = make_field(args.d)
    info = F.describe()
    _emit(args, info, [f"{k}: {v}" for k, v in info.items()])
    return EXIT_OK


def cmd_ray_class(args):
    F = make_field(args.d)
    G = ray_class_group(F, _ideal(F, args.modulus))
    chars = G.characters()
    obj = {"modulus": str(G.modulus), "invariants": list(G.invariants), "order": G.order,
           "characters": [c.summary() for c in chars]}
    lines = [f"modulus {G.modulus}", f"invariants {list(G.invariants)}", f"order {G.order}"]
    for i, c in enumerate(chars):
        lines.append(f"{i}\t{c.label()}\torder={c.order}\tconductor={c.conductor}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_lvalue(args):
    F = make_field(args.d)
    chi = _character(F, args) or named_character(F, args.char or "triv")
    val = l_value_nonpositive(chi, args.s)
    obj = {"character": chi.label(), "s": args.s, "value": str(val), "pretty": val.pretty()}
    lines = [val.pretty()]
    status = EXIT_OK
    if args.numeric:
        num, err = l_value_numeric(chi, args.s, terms=args.terms)
        num = complex(num)
        diff = float(abs(num - complex(val.embed())))
        obj.update({"numeric": f"{num.real:.15g}{num.imag:+.15g}j", "numeric_error_estimate": float(err), "difference": diff})
        lines.append(f"numeric {num.real:.15g}{num.imag:+.15g}i  |diff| {diff:.3e} (tolerance {args.tolerance:g})")
        if diff > args.tolerance:
            status = EXIT_FAIL
    _emit(args, obj, lines)
    return status


def cmd_gauss_sum(args):
    F = make_field(args.d)
    chi = _character(F, args) or named_character(F, args.char or "chi5")
    tau = gauss_sum(chi)
    z = complex(tau.embed())
    obj = {"character": chi.label(), "value": str(tau), "pretty": tau.pretty(), "abs2": abs(z) ** 2,
           "conductor_norm": int(chi.modulus.norm())}
    _emit(args, obj, [tau.pretty(), f"|tau|^2 = {abs(z) ** 2:.12g}  N(m) = {int(chi.modulus.norm())}"])
    return EXIT_OK


def cmd_eis(args):
    F = make_field(args.d)
    E = _series(F, args)
    rows = [(I.label(), E.coefficient(I, fac)) for I, fac in F.ideals_up_to(args.bound)]
    obj = {"series": repr(E), "level": str(E.level), "coefficients": [{"ideal": i, "value": str(v)} for i, v in rows]}
    _emit(args, obj, [f"{i}\t{v.pretty()}" for i, v in rows])
    return EXIT_OK


def cmd_const_terms(args):
    F = make_field(args.d)
    E = _series(F, args)
    reps = E.constant_terms(args.p)
    obj = {"series": repr(E), "constant_terms": [r.to_json() for r in reps]}
    lines = []
    for r in reps:
        v = "" if r.valuation is None else f"\tv_{args.p}={r.valuation}"
        lines.append(f"{r.cusp.label}\t{r.value.pretty()}\t{r.case}{v}")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_c_constant(args):
    F = make_field(args.d)
    E = _series(F, args)
    cc = c_constant(E, args.p)
    order = congruence_module_order(E, args.p)
    obj = cc.to_json()
    obj["congruence_module_order"] = order
    _emit(args, obj, [f"cusp {cc.cusp.label}", f"C {cc.value.pretty()}", f"v_{args.p}(C) {cc.valuation}",
                      f"|O/C| {order}"])
    return EXIT_OK


def _load_data(args):
    return parse_eigenvalue_file(args.data or fixture_path())


def cmd_check_congruence(args):
    F = make_field(args.d)
    E = _series(F, args)
    f = _load_data(args)
    rep = check_fourier_congruence(E, f, args.p, args.bound)
    lines = [f"{r['ideal']}\t{r['eisenstein']}\t{r['form']}\t{'ok' if r['match'] else 'MISMATCH'}" for r in rep.rows]
    lines.append(f"verdict {'congruent' if rep.verdict else 'not congruent'} mod a prime above {args.p}")
    if rep.first_mismatch:
        lines.append(f"first mismatch at {rep.first_mismatch['ideal']} (norm {rep.first_mismatch['norm']})")
    _emit(args, rep.to_json(), lines)
    return EXIT_OK if rep.verdict else EXIT_FAIL


def _quadratic_char_of_level(F, level):
    cands = [c for c in characters_of_conductor(F, level) if c.order == 2 and c.is_totally_even()]
    if not cands:
        raise UsageError(f"no totally even quadratic character of conductor {level}; pass --phi")
    return cands[0]


def cmd_criterion(args):
    F = make_field(args.d)
    level = _ideal(F, args.level)
    phi = named_character(F, args.phi) if args.phi else _quadratic_char_of_level(F, level)
    psi = named_character(F, args.psi)
    E = EisensteinSeries(phi, psi, 2)
    f = parse_eigenvalue_file(args.data) if args.data else None
    mu = None if args.mu_zero is None else args.mu_zero == "yes"
    rep = criterion_report(E, args.p, f, mu)
    lines = [f"criterion for {rep['series']} at p={args.p}"]
    for r in rep["rows"]:
        flag = f"  [{r['flag']}]" if "flag" in r else ""
        lines.append(f"{r['id']:<24} {r['status'].upper():<15} {json.dumps(r['witness'], sort_keys=True)}{flag}")
    lines.append(f"mu-invariants zero: {rep['mu_invariants_zero']}")
    lines.append(f"torsion-freeness hypotheses: {rep['torsion_free_hypotheses']}")
    if "fourier_congruence" in rep:
        lines.append(f"fourier congruence: {rep['fourier_congruence']['verdict']}")
    _emit(args, rep, lines)
    return EXIT_FAIL if any(r["status"] == "fail" for r in rep["rows"]) else EXIT_OK


def cmd_special_value(args):
    F = make_field(args.d)
    E = _series(F, args)
    if args.theta:
        thetas = [named_character(F, args.theta)]
    else:
        thetas = [t for t in all_primitive_characters(F, args.max_norm) if admissible(E, t)]
    cache = CacheStore()
    status = EXIT_OK
    out, lines = [], []
    for th in thetas:
        key = f"special-value:{E!r}:{th.label()}:{args.terms}:{','.join(map(str, args.p))}:{args.debug}"

        def compute():
            rec = eisenstein_special_value(E, th, debug=args.debug)
            verify_special_value_numeric(rec, args.terms)
            for p in args.p:
                mod_p_nonvanishing(rec, p)
            return json.dumps(rec.to_json(), sort_keys=True)

        data = json.loads(cache.get_or_compute(key, compute))
        out.append(data)
        flags = " ".join(f"p={p}:{'unit' if v else 'divisible'}" for p, v in data["nonvanishing"].items())
        lines.append(f"{data['theta']}\t{data['pretty']}\tresidual {data['residual']:.3e}\t{flags}".rstrip())
        if data["residual"] > args.tolerance:
            status = EXIT_FAIL
    _emit(args, {"series": repr(E), "records": out}, lines)
    return status


def cmd_cache(args):
    cache = CacheStore()
    if args.action == "list":
        keys = cache.keys()
        _emit(args, {"root": str(cache.root), "keys": keys}, [str(cache.root)] + keys)
    elif args.action == "clear":
        n = cache.clear()
        _emit(args, {"removed": n}, [f"removed {n} entries"])
    else:
        if not args.key:
            raise UsageError("cache show needs a key")
        hit = cache.get(args.key)
        if hit is None:
            _emit(args, {"key": args.key, "hit": False}, ["miss"])
            return EXIT_FAIL
        print(hit)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tolerance", type=float, default=1e-6)
    common.add_argument("--terms", type=int, default=10**4)

    p = _Parser(prog="eiscong", description="Hilbert Eisenstein series over real quadratic fields.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def field_cmd(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--d", type=int, required=True, help="squarefree d > 1")
        sp.set_defaults(fn=fn)
        return sp

    def char_opts(sp, default=None):
        sp.add_argument("--cond", help="conductor: a rational integer or an HNF ideal")
        sp.add_argument("--char-index", type=int, default=0)
        sp.add_argument("--char", default=default, help="named character (triv, chi5, cond=<n>:<i>)")

    def series_opts(sp):
        sp.add_argument("--phi", default="chi5")
        sp.add_argument("--psi", default="triv")
        sp.add_argument("--k", type=int, default=2)

    field_cmd("field", cmd_field, "field invariants")
    sp = field_cmd("ray-class", cmd_ray_class, "narrow ray class group and its characters")
    sp.add_argument("--modulus", required=True)
    sp = field_cmd("lvalue", cmd_lvalue, "exact L(s, chi) at s <= 0")
    char_opts(sp)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--numeric", action="store_true", help="also run the functional-equation oracle")
    sp = field_cmd("gauss-sum", cmd_gauss_sum, "Gauss sum of a primitive character")
    char_opts(sp)
    sp = field_cmd("eis", cmd_eis, "Fourier coefficients C(m, E) for N(m) <= bound")
    series_opts(sp)
    sp.add_argument("--bound", type=int, required=True)
    sp = field_cmd("const-terms", cmd_const_terms, "constant terms at all cusps")
    series_opts(sp)
    sp.add_argument("--p", type=int)
    sp = field_cmd("c-constant", cmd_c_constant, "C-constant and congruence module order")
    series_opts(sp)
    sp.add_argument("--p", type=int, required=True)
    sp = field_cmd("check-congruence", cmd_check_congruence, "compare E with eigenform data mod p")
    series_opts(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--bound", type=int, default=100)
    sp.add_argument("--data", help="eiscong.hmf.v1 file (default: bundled fixture)")
    sp = field_cmd("criterion", cmd_criterion, "conditions of the congruence criterion")
    sp.add_argument("--level", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--phi")
    sp.add_argument("--psi", default="triv")
    sp.add_argument("--data")
    sp.add_argument("--mu-zero", choices=["yes", "no"])
    sp = field_cmd("special-value", cmd_special_value, "twisted special values, exact and numeric")
    series_opts(sp)
    sp.add_argument("--theta", help="named twisting character (default: sweep)")
    sp.add_argument("--max-norm", type=int, default=60)
    sp.add_argument("--p", type=int, action="append", default=[])
    sp.add_argument("--debug", action="store_true", help="allow parity-violating theta")
    sp = sub.add_parser("cache", parents=[common], help="inspect the result cache")
    sp.add_argument("action", choices=["list", "clear", "show"])
    sp.add_argument("key", nargs="?")
    sp.set_defaults(fn=cmd_cache)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("a subcommand is required")
        return args.fn(args)
    except UsageError as exc:
        print(f"eiscong: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EiscongError as exc:
        print(f"eiscong: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
