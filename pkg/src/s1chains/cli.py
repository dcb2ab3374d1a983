"""Command-line front end.

Exit codes: 0 success, 1 invalid input or usage, 2 a mathematical check failed.
Every command builds its full report before printing, so invalid input never
produces partial output.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import join_morse as jm
from .chain_complex import ChainComplex, cone, homology_group, is_quasi_isomorphism, les_from_ses
from .errors import S1ChainsError, ValidationError
from .exact_linear import QQ, ring_from_tag
from .io import dump_complex, dump_spectrum, load_chain_map, load_complex, load_spectrum, parse_json
from .models import (
    AbelianGroup,
    FillingHomology,
    model_cbad,
    model_ck,
    random_invariant_pair,
    random_multicomplex,
    random_spectrum,
    sc_from_spectrum,
    sphere_spectrum,
    subcritical_sh,
    tensor_with_BS1,
    vanishing_check,
    verify_pi_iso,
)
from .s1_complex import S1Complex, equivariant_homology, gysin_les, quotient, verify_relations
from .spectral import check_convergence, check_E2_gysin, compute_pages, u_filtration

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


@dataclass
class Outcome:
    payload: dict[str, Any]
    lines: list[str] = field(default_factory=list)
    status: int = EXIT_OK
    raw: str | None = None  # printed verbatim in human mode (CSV, JSON data)


# ---------------------------------------------------------------------------
# helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None


def _complex_arg(args: argparse.Namespace, *, check: bool = True) -> S1Complex:
    where = "<stdin>" if args.file == "-" else args.file
    C = load_complex(parse_json(_read(args.file), where), where, check=False)
    ring = getattr(args, "ring", None)
    if ring:
        C = C.change_ring(ring_from_tag(ring, getattr(args, "p", None)))
    if check:
        C.require_valid()
    return C


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[str]:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]


def _group_json(g) -> dict[str, Any]:
    return {"rank": g.rank, "torsion": list(g.torsion), "group": g.describe()}


def _homology_outcome(title: str, H, ring_name: str) -> Outcome:
    payload = {"ring": ring_name, "homology": {str(k): _group_json(g) for k, g in sorted(H.items())}}
    rows = [(k, g.describe()) for k, g in sorted(H.items())]
    nz = [str(k) for k, g in sorted(H.items()) if not g.is_zero()]
    lines = [f"{title} over {ring_name}"] + _table(("degree", "group"), rows)
    lines.append("nonzero in degrees: " + (", ".join(nz) if nz else "none"))
    return Outcome(payload, lines)


def _window(C: S1Complex, args: argparse.Namespace) -> tuple[int, int]:
    lo = C.module.min_degree
    hi = C.module.max_degree
    if lo is None:
        return (0, -1)
    if getattr(args, "min_degree", None) is not None:
        lo = args.min_degree
    if getattr(args, "max_degree", None) is not None:
        hi = args.max_degree
    return lo, hi


def _seed(args: argparse.Namespace) -> int:
    env = os.environ.get("S1CHAINS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"S1CHAINS_SEED must be an integer, got {env!r}") from None
    return args.seed


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"{what}: expected comma-separated integers") from None


def _float_list(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"{what}: expected comma-separated numbers") from None


def _complex_list(text: str) -> np.ndarray:
    try:
        return np.array([complex(x.replace(" ", "")) for x in text.split(",")], dtype=complex)
    except ValueError:
        raise ValidationError("--z: expected comma-separated complex numbers such as 1,0.5j") from None


def _groups(specs: Sequence[str]) -> dict[int, AbelianGroup]:
    """``DEG:RANK`` or ``DEG:RANK:T1/T2`` per group."""
    out: dict[int, AbelianGroup] = {}
    for spec in specs:
        parts = spec.split(":")
        try:
            deg, rank = int(parts[0]), int(parts[1])
            tors = [int(t) for t in parts[2].split("/")] if len(parts) > 2 and parts[2] else []
        except (ValueError, IndexError):
            raise ValidationError(f"--group {spec!r}: expected DEG:RANK or DEG:RANK:T1/T2") from None
        if len(parts) > 3 or rank < 0:
            raise ValidationError(f"--group {spec!r}: expected DEG:RANK or DEG:RANK:T1/T2")
        out[deg] = out.get(deg, AbelianGroup()) + AbelianGroup.make(rank, tors)
    return out


def _groups_outcome(title: str, groups: dict[int, AbelianGroup]) -> Outcome:
    payload = {str(k): {"rank": g.rank, "torsion": list(g.torsion), "group": str(g)} for k, g in groups.items()}
    lines = [title] + _table(("degree", "group"), [(k, str(g)) for k, g in sorted(groups.items())])
    return Outcome({"groups": payload}, lines)


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{x:.15g}" if isinstance(x, float) else x for x in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# algebra commands


def _homology_degree(args: tuple[ChainComplex, int]):
    C, k = args
    return homology_group(C, k)


def cmd_homology(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args, check=False)
    base = C.base
    lo, hi = _window(C, args)
    degrees = list(range(lo, hi + 1))
    if args.jobs and args.jobs > 1 and len(degrees) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            groups = list(ex.map(_homology_degree, [(base, k) for k in degrees]))
    else:
        groups = [homology_group(base, k) for k in degrees]
    return _homology_outcome("H", dict(zip(degrees, groups)), C.ring.name)


def cmd_equivariant(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args)
    H = equivariant_homology(C, args.max_degree)
    lo = args.min_degree
    if lo is not None:
        H = {k: g for k, g in H.items() if k >= lo}
    return _homology_outcome("H^S1", H, C.ring.name)


def cmd_gysin(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args)
    rep = gysin_les(C, args.max_degree)
    rows = rep.rows()
    payload = {
        "ring": C.ring.name,
        "nodes": [{"label": a, "group": b, "status": c} for a, b, c in rows],
        "exact": rep.exact,
        "b_matches_connecting": {str(k): v for k, v in sorted(rep.b_matches_connecting.items())},
        "ok": rep.ok,
    }
    lines = [f"Gysin sequence over {C.ring.name}"] + _table(("node", "group", "status"), rows)
    lines.append(f"exact: {rep.exact}; B agrees with connecting map: {all(rep.b_matches_connecting.values())}")
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


def cmd_spectral(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args)
    if not C.ring.is_field:
        raise ValidationError("spectral: choose a field with --ring Q or --ring Fp --p P")
    lo = C.module.min_degree if C.module.min_degree is not None else 0
    F = u_filtration(C, args.max_degree)
    pages = compute_pages(F, args.pages, (lo, args.max_degree), with_differentials=False)
    e2 = check_E2_gysin(C, args.max_degree)
    conv = check_convergence(C, args.max_degree)
    payload = {
        "ring": C.ring.name,
        "pages": {
            str(p.r): [{"p": a, "q": b, "dim": d} for (a, b), d in sorted(p.nonzero().items())] for p in pages
        },
        "e2_matches_homology": e2.ok,
        "convergence": {str(n): {"e_infinity": a, "equivariant": b} for n, (a, b) in sorted(conv.totals.items())},
        "converges": conv.ok,
    }
    lines = []
    for p in pages:
        lines.append(f"E^{p.r} (nonzero entries)")
        lines += _table(("p", "q", "dim"), [(a, b, d) for (a, b), d in sorted(p.nonzero().items())])
    lines.append(f"E2 = H(C) on even columns: {e2.ok}")
    lines.append(f"E-infinity totals match H^S1: {conv.ok}")
    return Outcome(payload, lines, EXIT_OK if e2.ok and conv.ok else EXIT_CHECK)


def cmd_verify(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args, check=False)
    rep = verify_relations(C)
    results = {str(k): v for k, v in sorted(rep.results.items())}
    payload = {"ok": rep.ok, "relations": results, "first_failure": rep.first_failure}
    lines = _table(("k", "relation holds"), sorted(rep.results.items()))
    if rep.ok:
        lines.append("all relations hold")
    else:
        lines.append(f"relation k={rep.first_failure} fails: sum over i+j={rep.first_failure} of phi_i phi_j is nonzero")
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


def cmd_quotient(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args)
    names = [n.strip() for n in args.sub.split(",") if n.strip()]
    res = quotient(C, names, args.max_degree)
    fails = res.grid.failures()
    payload = {
        "subcomplex": dump_complex(res.sub),
        "quotient": dump_complex(res.quotient),
        "squares_checked": len(res.grid.squares),
        "failures": [{"degree": s.degree, "row": s.row, "col": s.col, "kind": s.kind} for s in fails],
        "ok": res.grid.ok,
    }
    lines = [
        f"subcomplex generators: {len(res.sub.module)}; quotient generators: {len(res.quotient.module)}",
        f"grid squares checked: {len(res.grid.squares)}; failures: {len(fails)}",
    ]
    lines += _table(("degree", "row", "col", "kind"), [(s.degree, s.row, s.col, s.kind) for s in fails]) if fails else []
    return Outcome(payload, lines, EXIT_OK if res.grid.ok else EXIT_CHECK)


def cmd_cone(args: argparse.Namespace) -> Outcome:
    where = "<stdin>" if args.file == "-" else args.file
    f = load_chain_map(parse_json(_read(args.file), where), where)
    Cf, ses = cone(f)
    sup = Cf.support()
    lo, hi = sup if sup is not None else (0, -1)
    H = {k: homology_group(Cf, k) for k in range(lo, hi + 1)}
    les = les_from_ses(ses, range(lo, hi + 2), labels=("B[1]", "cone", "A"))
    acyclic = all(g.is_zero() for g in H.values())
    quasi = is_quasi_isomorphism(f)
    payload = {
        "homology": {str(k): _group_json(g) for k, g in H.items()},
        "acyclic": acyclic,
        "quasi_isomorphism": quasi,
        "les_exact": les.exact,
        "les_failures": les.failures(),
    }
    out = _homology_outcome("H(cone)", H, Cf.ring.name)
    out.lines += [f"acyclic: {acyclic}; map is a quasi-isomorphism: {quasi}", f"cone sequence exact: {les.exact}"]
    ok = les.exact and acyclic == quasi
    return Outcome(payload, out.lines, EXIT_OK if ok else EXIT_CHECK)


def cmd_model(args: argparse.Namespace) -> Outcome:
    ring = ring_from_tag(args.ring, args.p)
    C = model_ck(args.kappa, ring) if args.kind == "ck" else model_cbad(ring)
    if args.shift:
        C = C.shift(args.shift)
    data = dump_complex(C)
    return Outcome(data, raw=json.dumps(data, indent=2, sort_keys=True) + "\n")


def cmd_sphere(args: argparse.Namespace) -> Outcome:
    s = sphere_spectrum(args.n, args.cutoff)
    if args.spectrum:
        data = dump_spectrum(s)
        return Outcome(data, raw=json.dumps(data, indent=2, sort_keys=True) + "\n")
    model = sc_from_spectrum(s, QQ)
    lo = args.n + 1
    Heq = equivariant_homology(model.plus, args.cutoff)
    rows = []
    ranks = {}
    agree = True
    for k in range(lo, args.cutoff + 1):
        a = Heq[k].rank if k in Heq else 0
        b = homology_group(model.inv, k).rank
        ranks[str(k)] = {"equivariant": a, "invariant": b}
        rows.append((k, a, b))
        agree &= a == b
    nz = [k for k, a, _ in rows if a]
    payload = {"n": args.n, "cutoff": args.cutoff, "ranks": ranks, "nonzero_degrees": nz, "agree": agree}
    lines = [f"sphere n={args.n}, rational ranks"] + _table(("degree", "H^S1(SC+)", "H(SC+inv)"), rows)
    lines.append("nonzero in degrees: " + ", ".join(map(str, nz)))
    return Outcome(payload, lines, EXIT_OK if agree else EXIT_CHECK)


def cmd_subcritical(args: argparse.Namespace) -> Outcome:
    f = FillingHomology(args.n, _groups(args.group))
    return _groups_outcome(f"subcritical SH^S1 (n={args.n})", subcritical_sh(f, args.max_degree))


def cmd_tensor(args: argparse.Namespace) -> Outcome:
    return _groups_outcome("H tensor H(BS1)", tensor_with_BS1(_groups(args.group), args.max_degree))


def cmd_pi_check(args: argparse.Namespace) -> Outcome:
    where = "<stdin>" if args.file == "-" else args.file
    s = load_spectrum(parse_json(_read(args.file), where), where)
    rep = verify_pi_iso(s, args.max_degree)

    def flags(d):
        return {str(k): v for k, v in sorted(d.items())}

    payload = {
        "epsilon": rep.epsilon,
        "chain_map": rep.chain_map,
        "rational_quasi_isomorphism": rep.rational_quasi_iso,
        "first_square": flags(rep.first_square),
        "middle_square": flags(rep.middle_square),
        "third_square": flags(rep.third_square),
        "integral_quasi_isomorphism": rep.integral_quasi_iso,
        "ranks": {str(k): list(v) for k, v in sorted(rep.ranks.items())},
        "ok": rep.ok,
    }
    lines = [
        f"sign of d1 on good minima: {rep.epsilon:+d}",
        f"Pi is a chain map: {rep.chain_map}",
        f"Pi is a rational quasi-isomorphism: {rep.rational_quasi_iso}",
        f"first square commutes: {all(rep.first_square.values())}",
        f"middle square anticommutes: {all(rep.middle_square.values())}",
        f"third square commutes: {all(rep.third_square.values())}",
        f"integral quasi-isomorphism: {rep.integral_quasi_iso}",
    ]
    lines += _table(("degree", "H^S1(SC+)", "H(SC+inv)"), [(k, a, b) for k, (a, b) in sorted(rep.ranks.items())])
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


def cmd_vanishing(args: argparse.Namespace) -> Outcome:
    C = _complex_arg(args)
    rep = vanishing_check(C, args.max_degree)
    payload = {"homology_zero": rep.base_zero, "equivariant_zero": rep.equivariant_zero, "ok": rep.ok}
    lines = [
        f"H(C) vanishes up to degree {args.max_degree}: {rep.base_zero}",
        f"H^S1(C) vanishes up to degree {args.max_degree}: {rep.equivariant_zero}",
    ]
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


def cmd_random(args: argparse.Namespace) -> Outcome:
    seed = _seed(args)
    if args.kind == "multicomplex":
        data: dict[str, Any] = dump_complex(random_multicomplex(seed, args.max_generators, args.max_degree))
    elif args.kind == "pair":
        C, sub = random_invariant_pair(seed, args.max_generators, args.max_degree)
        data = {"complex": dump_complex(C), "subcomplex": sorted(sub)}
    else:
        data = dump_spectrum(random_spectrum(seed, args.max_circles, args.max_kappa))
    return Outcome(data, raw=json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# join commands


def cmd_join_coords(args: argparse.Namespace) -> Outcome:
    z = _complex_list(args.z)
    if args.normalize:
        z = z / np.linalg.norm(z)
    t, tau = jm.join_coords(z)
    back = jm.join_inverse(t, tau)
    err = float(np.max(np.abs(back - z)))
    payload = {"t": [float(x) for x in t], "tau": tau, "roundtrip_error": err}
    rows = [(j, f"{t[j]:.15g}", "-" if tau[j] is None else f"{tau[j]:.15g}") for j in range(len(t))]
    lines = _table(("j", "t_j", "tau_j"), rows) + [f"round-trip error: {err:.3g}"]
    return Outcome(payload, lines)


def cmd_join_flow(args: argparse.Namespace) -> Outcome:
    z = _complex_list(args.z)
    z = z / np.linalg.norm(z)
    a = _float_list(args.a, "--a")
    times = np.linspace(args.t0, args.t1, args.samples)
    rows = []
    for t in times:
        w = jm.morse_flow(z, a, float(t))
        rows.append([float(t), jm.morse_value(w, a)] + [float(abs(x) ** 2) for x in w])
    header = ["time", "f"] + [f"t{j}" for j in range(len(z))]
    values = [r[1] for r in rows]
    monotone = all(b >= a_ - 1e-12 for a_, b in zip(values, values[1:]))
    payload = {"header": header, "rows": rows, "monotone": monotone}
    return Outcome(payload, raw=_csv(header, rows), status=EXIT_OK if monotone else EXIT_CHECK)


def cmd_join_rep(args: argparse.Namespace) -> Outcome:
    N = args.n
    lengths = tuple(_float_list(args.lengths, "--lengths")) if args.lengths else ()
    params = jm.GluingParams(tuple([0.0] * N), lengths)
    path = jm.rho_explicit(N, params)
    ss = np.linspace(args.s0, args.s1, args.samples)
    samples = path.sample(ss)
    rows = [[float(s)] + [float(x) for x in row] for s, row in zip(ss, samples)]
    header = ["s"] + [f"t{j}" for j in range(N + 1)]
    residual = jm.simplex_residual(samples)
    payload = {"header": header, "rows": rows, "simplex_residual": residual}
    return Outcome(payload, raw=_csv(header, rows), status=EXIT_OK if residual < 1e-12 else EXIT_CHECK)


def cmd_join_gluing(args: argparse.Namespace) -> Outcome:
    a = _float_list(args.a, "--a") if args.a else None
    exps = _int_list(args.exponents, "--exponents")
    rep = jm.check_gluing(args.n, a, exps, args.window, args.tolerance, middle=args.middle)
    payload = {"distances": rep.distances, "decreasing": rep.decreasing, "ok": rep.ok}
    lines = _table(("epsilon", "distance"), [(f"1e-{k}", f"{d:.3e}") for k, d in zip(exps, rep.distances)])
    lines.append(f"decreasing: {rep.decreasing}; below tolerance {args.tolerance:g}: {rep.ok}")
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


def _test_hamiltonian(theta: float, x: np.ndarray) -> float:
    return math.cos(2 * math.pi * theta) * x[0] + x[1] ** 2


def cmd_join_grad(args: argparse.Namespace) -> Outcome:
    rng = np.random.default_rng(_seed(args))
    worst = 0.0
    for _ in range(args.count):
        n = int(rng.integers(1, args.n + 1))
        z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        z /= np.linalg.norm(z)
        rep = jm.grad_HN0_check(_test_hamiltonian, z, float(rng.random()), rng.normal(size=2), args.step)
        worst = max(worst, rep.max_error)
    ok = worst < 1e-6
    payload = {"configurations": args.count, "max_error": worst, "ok": ok}
    lines = [f"configurations: {args.count}", f"max finite-difference error: {worst:.3e}", f"ok: {ok}"]
    return Outcome(payload, lines, EXIT_OK if ok else EXIT_CHECK)


def cmd_join_strata(args: argparse.Namespace) -> Outcome:
    rep = jm.strata(args.k, args.j)
    rows = [("-".join(map(str, s.chain)), s.breaks, s.dimension) for s in rep.strata]
    payload = {
        "interior_dimension": rep.interior_dimension,
        "strata": [{"chain": list(s.chain), "breaks": s.breaks, "dimension": s.dimension} for s in rep.strata],
        "ok": rep.ok,
    }
    lines = [f"M({args.k},{args.j}): interior dimension {rep.interior_dimension}"]
    lines += _table(("chain", "codim", "dimension"), rows)
    return Outcome(payload, lines, EXIT_OK if rep.ok else EXIT_CHECK)


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, *, file: bool = True, ring: bool = True) -> None:
    if file:
        p.add_argument("file", nargs="?", default="-", help="input JSON file (default: stdin)")
    if ring:
        p.add_argument("--ring", choices=["Z", "Q", "Fp"], help="coefficient ring override")
        p.add_argument("--p", type=int, help="prime for --ring Fp")
    p.add_argument("--json", action="store_true", help="emit a single JSON document")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="s1chains", description="Multicomplexes, equivariant homology and related checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("homology", help="homology of the underlying complex")
    _add_common(p)
    p.add_argument("--min-degree", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for degreewise computation")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("equivariant", help="equivariant homology")
    _add_common(p)
    p.add_argument("--min-degree", type=int)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_equivariant)

    p = sub.add_parser("gysin", help="Gysin long exact sequence with exactness verdicts")
    _add_common(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_gysin)

    p = sub.add_parser("spectral", help="u-filtration spectral sequence")
    _add_common(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--pages", type=int, default=3)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("verify", help="check the multicomplex relations")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quotient", help="sub/quotient multicomplexes and the grid check")
    _add_common(p)
    p.add_argument("--sub", required=True, help="comma-separated generator names spanning the subcomplex")
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("cone", help="mapping cone of a chain map file")
    _add_common(p, ring=False)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("model", help="emit a circle model as a complex file")
    p.add_argument("kind", choices=["ck", "cbad"])
    p.add_argument("--kappa", type=int, default=1)
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--ring", choices=["Z", "Q", "Fp"], default="Z")
    p.add_argument("--p", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("sphere", help="orbit spectrum of the standard sphere")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--spectrum", action="store_true", help="emit the spectrum file instead of ranks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sphere)

    for name, func, help_ in (
        ("subcritical", cmd_subcritical, "equivariant homology of a subcritical filling"),
        ("tensor-bs1", cmd_tensor, "tensor graded groups with H(BS1)"),
    ):
        p = sub.add_parser(name, help=help_)
        if name == "subcritical":
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--group", action="append", default=[], help="DEG:RANK[:T1/T2] (repeatable)")
        p.add_argument("--max-degree", type=int, required=True)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("pi-check", help="verify the projection to the invariant complex")
    _add_common(p, ring=False)
    p.add_argument("--max-degree", type=int)
    p.set_defaults(func=cmd_pi_check)

    p = sub.add_parser("vanishing", help="H(C) = 0 iff H^S1(C) = 0 in a window")
    _add_common(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_vanishing)

    p = sub.add_parser("random", help="emit a seeded random instance")
    p.add_argument("kind", choices=["multicomplex", "pair", "spectrum"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-generators", type=int, default=40)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--max-circles", type=int, default=20)
    p.add_argument("--max-kappa", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_random)

    join = sub.add_parser("join", help="join coordinates and Morse flow numerics")
    jsub = join.add_subparsers(dest="join_command", required=True, parser_class=_Parser)

    p = jsub.add_parser("coords", help="join coordinates of a unit vector")
    p.add_argument("--z", required=True)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_coords)

    p = jsub.add_parser("flow", help="sample the Morse flow (CSV)")
    p.add_argument("--z", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_flow)

    p = jsub.add_parser("rep", help="sample the explicit simplex-valued path (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lengths", default="", help="L_1,...,L_(N-1)")
    p.add_argument("--s0", type=float, default=-2.0)
    p.add_argument("--s1", type=float, default=10.0)
    p.add_argument("--samples", type=int, default=13)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_rep)

    p = jsub.add_parser("gluing", help="convergence of shifted moment paths to a broken limit")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--a", default="")
    p.add_argument("--exponents", default="2,3,4,5,6")
    p.add_argument("--window", type=float, default=5.0)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--middle", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_gluing)

    p = jsub.add_parser("grad", help="finite-difference check of the z-gradient")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_grad)

    p = jsub.add_parser("strata", help="broken-trajectory strata")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_join_strata)
    return parser


def _to_json(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_json(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out: Outcome = args.func(args)
    except UsageError as e:
        print(str(e), file=stderr)
        return EXIT_INVALID
    except S1ChainsError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_INVALID
    if getattr(args, "json", False):
        text = json.dumps(_to_json(out.payload), indent=2, sort_keys=True) + "\n"
    elif out.raw is not None:
        text = out.raw
    else:
        text = "\n".join(out.lines) + "\n"
    stdout.write(text)
    return out.status


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
