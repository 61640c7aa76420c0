"""Command-line front end: every pipeline stage with file-based in/outputs.

Human-readable summaries go to stdout; machine formats are only ever written
to ``--out`` paths, so designs flow between subcommands as files.  Exit codes:
0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import designs, packing, pda as pda_mod, schemes, serialize, simulate


def _write(path: str | None, payload: str) -> None:
    if path:
        Path(path).write_text(payload)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")


class _UsageError(Exception):
    pass


def _parse_m(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise _UsageError(f"--m expects comma-separated integers, got {text!r}")


def _load_pda_file(path: str) -> pda_mod.Pda:
    try:
        return serialize.load_pda(_read(path))
    except (ValueError, KeyError) as exc:
        raise _UsageError(f"{path} is not a readable PDA file: {exc}")


def _emit_pda(pda: pda_mod.Pda, out: str | None, fmt: str) -> None:
    if out:
        payload = serialize.pda_to_json(pda) if fmt == "json" else serialize.pda_to_text(pda)
        _write(out, payload)


def _cmd_construct_nhsdp(args) -> int:
    packing_obj = packing.construct_nhsdp(args.v, _parse_m(args.m))
    verdict = packing_obj.verify()
    if not verdict.ok:
        print(f"construction failed verification: {verdict.detail}", file=sys.stderr)
        return 1
    print(f"({packing_obj.v},{packing_obj.g},{packing_obj.b}) NHSDP: valid")
    _write(args.out, serialize.nhsdp_to_json(packing_obj))
    return 0


def _cmd_verify_nhsdp(args) -> int:
    packing_obj = serialize.nhsdp_from_json(_read(args.file))
    verdict = packing_obj.verify()
    if verdict.ok:
        print(f"({packing_obj.v},{packing_obj.g},{packing_obj.b}) NHSDP: valid")
        return 0
    print(f"invalid NHSDP [{verdict.code}]: {verdict.detail}")
    return 1


def _cmd_solve_params(args) -> int:
    if args.exact:
        m, product = packing.solve_problem1_exact(args.v, args.n)
    else:
        m = packing.choose_params_closed_form(args.v, args.n)
        product = 1
        for mi in m:
            product *= mi
    params = packing.block_params(m)
    print(
        f"v={args.v} n={args.n} m={','.join(str(x) for x in m)} "
        f"product={product} phi={params.phi}"
    )
    if args.out:
        _write(
            args.out,
            json.dumps(
                {
                    "v": args.v,
                    "n": args.n,
                    "solver": "exact" if args.exact else "closed_form",
                    "m": list(m),
                    "product": product,
                    "phi": params.phi,
                }
            )
            + "\n",
        )
    return 0


def _cmd_build_pda(args) -> int:
    packing_obj = serialize.nhsdp_from_json(_read(args.file))
    arr = pda_mod.pda_from_nhsdp(packing_obj)
    K, F, Z, S = arr.params()
    print(f"built ({K},{F},{Z},{S}) PDA")
    _emit_pda(arr, args.out, args.format)
    return 0


def _cmd_verify_pda(args) -> int:
    arr = _load_pda_file(args.file)
    verdict = pda_mod.verify_pda(arr)
    if verdict.ok:
        stats = pda_mod.pda_stats(arr)
        regular = f", {stats.regular_g}-regular" if stats.regular_g else ""
        print(f"{verdict.detail}: valid{regular}")
        return 0
    print(f"invalid PDA [{verdict.code}]: {verdict.detail}")
    return 1


def _cmd_conjugate(args) -> int:
    arr = _load_pda_file(args.file)
    conj = pda_mod.conjugate_pda(arr)
    K, F, Z, S = conj.params()
    print(f"conjugate is a ({K},{F},{Z},{S}) PDA")
    _emit_pda(conj, args.out, args.format)
    return 0


def _cmd_group(args) -> int:
    arr = _load_pda_file(args.file)
    grouped = pda_mod.group_pda_divisible(arr, args.K)
    K, F, Z, S = grouped.params()
    print(f"grouped to a ({K},{F},{Z},{S}) PDA")
    _emit_pda(grouped, args.out, args.format)
    return 0


def _cmd_mn_pda(args) -> int:
    arr = pda_mod.mn_pda(args.K, args.t)
    K, F, Z, S = arr.params()
    print(f"built ({K},{F},{Z},{S}) PDA")
    _emit_pda(arr, args.out, args.format)
    return 0


def _cmd_simulate(args) -> int:
    arr = _load_pda_file(args.file)
    spec = args.demands
    if spec == "all" or spec.startswith("sample:"):
        if spec == "all":
            budget = args.max_demands
            total = args.N**arr.K
            if total > budget:
                raise _UsageError(
                    f"--demands all would sweep {total} vectors; "
                    f"use sample:COUNT or raise --max-demands"
                )
        else:
            try:
                budget = int(spec.split(":", 1)[1])
            except ValueError:
                raise _UsageError(f"bad sample count in {spec!r}")
        report = simulate.exhaustive_demand_check(
            arr, args.N, args.packet_len, demand_budget=budget, seed=args.seed
        )
        load = report.nominal_load
        print(
            f"{report.checked}/{report.total_demands} demands decoded, "
            f"load = {load.numerator / load.denominator:g}"
        )
        if report.failures:
            for demand, user, reason in report.failures[:10]:
                print(f"failure d={demand} user={user}: {reason}", file=sys.stderr)
            return 1
        return 0

    try:
        demand = tuple(int(tok) for tok in spec.split(","))
    except ValueError:
        raise _UsageError(f"--demands expects all, sample:COUNT, or a comma list; got {spec!r}")
    library = simulate.FileLibrary.random(args.N, arr.F, args.packet_len, args.seed)
    cache = simulate.place(arr, library)
    transcript = simulate.deliver(arr, library, cache, demand)
    bad = []
    for k in range(arr.K):
        got = simulate.decode(arr, cache, transcript, k)
        if got != library.file_bytes(demand[k]):
            bad.append(k)
    load = transcript.bytes_on_wire / (arr.F * args.packet_len)
    print(f"demand {spec}: {arr.K - len(bad)}/{arr.K} users decoded, load = {load:g}")
    _write(args.out, serialize.transcript_to_json(transcript))
    return 1 if bad else 0


def _cmd_ntap(args) -> int:
    ntap = designs.ntap_construct(args.n)
    print(f"NTAP set of size {ntap.size} in Z_{ntap.v}")
    _write(args.out, serialize.ntap_to_json(ntap))
    return 0


def _cmd_phf(args) -> int:
    text = _read(args.file)
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise _UsageError(f"{args.file} is not JSON: {exc}")
    if "blocks" in doc:
        packing_obj = serialize.nhsdp_from_json(text)
        ntap = designs.NtapSet.from_packing(packing_obj)
    else:
        ntap = serialize.ntap_from_json(text)
    phf = designs.phf_from_ntap(ntap)
    verdict = designs.verify_phf(phf)
    if not verdict.ok:
        print(f"constructed array failed verification: {verdict.detail}", file=sys.stderr)
        return 1
    print(f"(3;{phf.m},{phf.q},3) PHF: valid")
    _write(args.out, serialize.phf_to_json(phf))
    return 0


def _cmd_ds_search(args) -> int:
    result = packing.ds_search(args.q, max_q=args.max_q)
    if result is None:
        v = args.q**2 + args.q + 1
        print(f"no ({v},{args.q + 1}) difference set: search space exhausted")
        return 0
    kind = "DS" if result.is_difference_set else "CDP"
    print(
        f"({result.v},{result.k}) {kind}: "
        f"{{{','.join(str(x) for x in result.elements)}}}"
    )
    _write(args.out, serialize.cdp_to_json(result))
    return 0


def _cmd_compare(args) -> int:
    names = [tok.strip() for tok in args.schemes.split(",") if tok.strip()]
    points = schemes.tradeoff_sweep(args.K, names, slack=args.slack)
    print(f"{len(points)} scheme points within |K - {args.K}| <= {args.slack}")
    if args.format == "json":
        _write(args.out, serialize.scheme_points_to_json(points))
    else:
        _write(args.out, serialize.scheme_points_to_csv(points))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhsdp",
        description="Construct, verify, and simulate packing-based coded-caching designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        return p

    p = add("construct-nhsdp", _cmd_construct_nhsdp, help="build a packing from v and m")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--m", required=True, help="comma-separated m_1,...,m_n")
    p.add_argument("--out")

    p = add("verify-nhsdp", _cmd_verify_nhsdp, help="verify a packing JSON file")
    p.add_argument("file")

    p = add("solve-params", _cmd_solve_params, help="choose m for given v and n")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="exhaustive maximisation")
    p.add_argument("--out")

    p = add("build-pda", _cmd_build_pda, help="lift a packing file to a PDA")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("verify-pda", _cmd_verify_pda, help="verify a PDA file (text or JSON)")
    p.add_argument("file")

    p = add("conjugate", _cmd_conjugate, help="conjugate a PDA file")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("group", _cmd_group, help="replicate a PDA to a multiple of its users")
    p.add_argument("file")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("mn-pda", _cmd_mn_pda, help="build the t-subset PDA")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("simulate", _cmd_simulate, help="run placement/delivery/decoding")
    p.add_argument("file")
    p.add_argument("--N", type=int, required=True, help="number of files")
    p.add_argument("--packet-len", type=int, default=simulate.DEFAULT_PACKET_LEN)
    p.add_argument(
        "--demands",
        default="all",
        help="all | sample:COUNT | comma-separated 0-based file indices",
    )
    p.add_argument("--max-demands", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="transcript/report JSON path")

    p = add("ntap", _cmd_ntap, help="build the 2^n-element progression-free set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")

    p = add("phf", _cmd_phf, help="expand an NTAP/packing file into a PHF")
    p.add_argument("file")
    p.add_argument("--out")

    p = add("ds-search", _cmd_ds_search, help="search for a planar difference set")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-q", type=int, default=16)
    p.add_argument("--out")

    p = add("compare", _cmd_compare, help="tabulate scheme points near a user count")
    p.add_argument("--schemes", required=True, help="comma-separated scheme names")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--slack", type=int, default=8)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
