"""Command-line front end.

Subcommands: `sample-path` (CSV path dump), `exact` (rational-arithmetic
identities), `verify` (named verification campaigns), `blocks` (block
audit), `report` (render or plot a saved campaign report).  Exit codes:
0 pass, 1 statistical or invariant failure, 2 budget exceeded.

Flags win over the optional flat key=value config file; the default
output directory comes from FIVEWISE_OUTDIR (falling back to the
working directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import campaigns, chain, measures, process
from .chain import BudgetExceededError
from .engine import SamplerConfig

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2


def _parse_window(text: str):
    lo, _, hi = text.partition(":")
    a, b = int(lo), int(hi)
    if a > b:
        raise argparse.ArgumentTypeError("window start exceeds end")
    return a, b


def _load_config_file(path: str) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _out_path(args, default_name: str):
    if args.out:
        return Path(args.out)
    base = os.environ.get("FIVEWISE_OUTDIR", ".")
    return Path(base) / default_name


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def _cmd_sample_path(args) -> int:
    cfg = SamplerConfig(seed=args.seed, level_guard=args.budget_level,
                        max_backoff=args.budget_backward)
    path = process.sample_path(args.window, cfg)
    if args.format == "csv":
        text = path.to_csv()
        suffix = "csv"
    else:
        a, _ = path.window
        rows = [{"k": int(a + i), "x": int(path.signs[i]),
                 "n": int(path.depths[i]),
                 "anchor": (None if path.anchor_is_virtual[i]
                            else int(path.anchors[i])),
                 "j": int(path.ranks[i])}
                for i in range(len(path.signs))]
        text = json.dumps(rows, indent=1)
        suffix = "json"
    _write(_out_path(args, f"path_{args.seed}.{suffix}"), text)
    return EXIT_PASS


def _cmd_exact(args) -> int:
    ok = True
    what = args.what
    if what in ("transition-matrix", "all"):
        derived = chain.derive_transition_matrix()
        print("one-step transition matrix (exact):")
        print(derived.to_json())
        good = (derived.entries == chain.expected_transition_matrix().entries
                and derived.is_uniform_stationary())
        print(f"matches closed form, uniform stationary: {good}")
        ok &= good
    if what in ("measures", "all"):
        for kind, size in (("ord", 32), ("cen", 20), ("fri", 12), ("pos", 6)):
            d = measures.exact_distribution(1, kind)
            uniform = all(p == Fraction(1, size) for _, p in d.atoms)
            print(f"level-1 {kind}: {len(d.atoms)} atoms, uniform={uniform}")
            ok &= len(d.atoms) == size and uniform
        mix = measures.ExactDistribution.mix([
            (Fraction(5, 8), measures.exact_distribution(1, "cen")),
            (Fraction(3, 8), measures.exact_distribution(1, "fri"))])
        good = mix.atoms == measures.exact_distribution(1, "ord").atoms
        print(f"mixture identity (5/8 cen + 3/8 fri = ord): {good}")
        ok &= good
        law = measures.sum_distribution(1, "ord")
        print("sum law:", {k: str(v) for k, v in law.items()})
    if what in ("gap-identity", "all"):
        from itertools import product as _product

        e_fair = Fraction(
            sum(sum(v) ** 6 for v in _product((-1, 1), repeat=6)), 64)
        e_ord = measures.exact_distribution(1, "ord").moment_of_sum(6)
        gap = measures.sixth_moment_gap(0, (1,) * 6)
        print(f"sixth moments: independent {e_fair}, coupled {e_ord}, "
              f"gap {gap}")
        ok &= e_fair == 2256 and e_ord == 1536 and gap == 720
        for n in range(4):
            full = measures.sixth_moment_gap(n, (6**n,) * 6)
            want = 720 * Fraction(4) ** (6 * n)
            print(f"full-block gap at level {n}: {full} "
                  f"(= 720*4^(6*{n}): {full == want})")
            ok &= full == want
    if what in ("pattern", "all"):
        p = chain.identity_pattern_probability()
        print(f"identity-pattern probability: {p} = {float(p):.6e}")
    print("exact suite:", "PASS" if ok else "FAIL")
    return EXIT_PASS if ok else EXIT_FAIL


_CAMPAIGN_ARGS = {
    "measures": ("seed", "draws"),
    "chain": ("seed", "steps", "significance"),
    "pattern": ("seed", "positions"),
    "hierarchy": ("seed", "positions", "depth"),
    "tails": ("seed", "positions", "nmax", "workers"),
    "independence": ("seed", "sets", "replicates", "span", "significance",
                     "workers"),
    "moments": ("seed", "replicates", "workers"),
    "self-oracle": ("seed", "replicates"),
    "blocks": ("seed", "window_len"),
    "double-one": ("seed",),
    "cross-mode": ("seed", "significance"),
}


def _cmd_verify(args) -> int:
    names = list(campaigns.CATALOG) if args.campaign == "all" \
        else [args.campaign]
    overall = EXIT_PASS
    reports = []
    for name in names:
        kwargs = {}
        for key in _CAMPAIGN_ARGS.get(name, ()):
            flag = getattr(args, key.replace("-", "_"), None)
            if flag is not None:
                kwargs[key] = flag
        rep = campaigns.run_campaign(name, **kwargs)
        reports.append(rep)
        status = ("BUDGET-EXCEEDED" if rep.budget_exceeded
                  else "PASS" if rep.passed else "FAIL")
        print(f"[{status}] campaign {name}")
        for e in rep.estimates:
            se = "" if e.stderr is None else f" +- {e.stderr:.3g}"
            print(f"  {e.verdict:5s} {e.name}: {e.value:.6g}{se}"
                  f"  (target {e.target})")
        if rep.budget_exceeded:
            overall = max(overall, EXIT_BUDGET)
        elif not rep.passed:
            overall = max(overall, EXIT_FAIL)
    if len(reports) == 1:
        text = reports[0].to_json()
    else:
        text = json.dumps([json.loads(r.to_json()) for r in reports],
                          indent=1)
    _write(_out_path(args, f"verify_{args.campaign}.json"), text)
    return overall


def _cmd_blocks(args) -> int:
    cfg = SamplerConfig(seed=args.seed, level_guard=args.budget_level,
                        max_backoff=args.budget_backward)
    try:
        path = process.sample_path(args.window, cfg)
        dec = process.decompose_blocks(path.hierarchy)
        rep = process.audit_block_contents(path, dec)
        full = process.audit_window(path)
    except BudgetExceededError as err:
        print(f"budget exceeded: {err} {err.context}")
        return EXIT_BUDGET
    _write(_out_path(args, f"blocks_{args.seed}.json"),
           rep.to_json(blocks=rep.block_rows))
    ok = rep.ok and full.ok
    print(f"blocks audited: {rep.checked_blocks}; window invariants: "
          f"{'PASS' if ok else 'FAIL'}")
    if not full.ok:
        print(json.dumps(full.failures[:10], indent=1))
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_report(args) -> int:
    data = json.loads(Path(args.input).read_text())
    reports = data if isinstance(data, list) else [data]
    ok = all(r["pass"] for r in reports)
    for r in reports:
        print(f"campaign {r['campaign']}: "
              f"{'PASS' if r['pass'] else 'FAIL'} "
              f"({len(r['estimates'])} checks, seed {r['seed']})")
        for e in r["estimates"]:
            print(f"  {e['verdict']:5s} {e['name']}: {e['value']:.6g} "
                  f"(target {e['target']})")
    if args.plot:
        _plot_reports(reports, args.plot)
    return EXIT_PASS if ok else EXIT_FAIL


def _plot_reports(reports, out):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [(f"{r['campaign']}:{e['name']}", e) for r in reports
            for e in r["estimates"] if e["stderr"] is not None]
    if not rows:
        print("nothing to plot (no stochastic estimates)")
        return
    fig, ax = plt.subplots(figsize=(8, max(3, 0.32 * len(rows))))
    for i, (label, e) in enumerate(rows):
        color = {"pass": "tab:green", "fail": "tab:red"}.get(
            e["verdict"], "tab:gray")
        ax.errorbar(e["value"], i, xerr=4 * e["stderr"], fmt="o",
                    color=color, capsize=3)
        try:
            target = float(str(e["target"]).lstrip("<=> "))
            ax.plot(target, i, marker="|", markersize=14, color="black")
        except ValueError:
            pass
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([label for label, _ in rows], fontsize=7)
    ax.set_xlabel("estimate with 4-sigma bar; tick = target")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fivewise",
        description="Exact sampler and verification lab for a stationary, "
                    "causal, 5-tuplewise independent sign process.")
    parser.add_argument("--config", help="flat key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--budget-backward", type=int, default=1 << 22)
        p.add_argument("--budget-level", type=int, default=64)

    p = sub.add_parser("sample-path", help="emit a resolved path")
    common(p)
    p.add_argument("--window", type=_parse_window, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("exact", help="exact rational-arithmetic suite")
    p.add_argument("what", nargs="?", default="all",
                   choices=("all", "measures", "transition-matrix",
                            "gap-identity", "pattern"))

    p = sub.add_parser("verify", help="run a named verification campaign")
    common(p)
    p.add_argument("campaign", choices=tuple(campaigns.CATALOG) + ("all",))
    p.add_argument("--positions", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--draws", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--sets", type=int, default=None)
    p.add_argument("--span", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--window-len", type=int, default=None)
    p.add_argument("--significance", type=float, default=None)
    p.add_argument("--workers", type=int, default=None,
                   help="thread workers for replicate chunks (chunk "
                        "assembly is partly GIL-bound; more is not "
                        "always faster)")

    p = sub.add_parser("blocks", help="block decomposition audit")
    common(p)
    p.add_argument("--window", type=_parse_window, required=True)

    p = sub.add_parser("report", help="render a saved campaign report")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--plot", default=None)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _load_config_file(args.config)
        for key, value in defaults.items():
            if getattr(args, key, None) is None:
                try:
                    setattr(args, key, int(value))
                except ValueError:
                    setattr(args, key, value)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        if os.environ.get("FIVEWISE_CI"):
            parser.error("--seed is mandatory when FIVEWISE_CI is set")
        args.seed = 1
    handler = {
        "sample-path": _cmd_sample_path,
        "exact": _cmd_exact,
        "verify": _cmd_verify,
        "blocks": _cmd_blocks,
        "report": _cmd_report,
    }[args.command]
    try:
        return handler(args)
    except BudgetExceededError as err:
        print(f"budget exceeded: {err} {getattr(err, 'context', {})}")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
