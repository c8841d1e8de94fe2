"""Command-line front end and serialization (JSON, GAP, plain text).

Exit codes: 0 success, 1 verification or consistency mismatch, 2 invalid
input, 3 numeric tracking failure.  All defaults are overridable by flags
only; nothing is read from the environment.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .arrangement import (
    BranchPointError,
    DegenerateInputError,
    fermat_lines,
    singular_points,
)
from .invariants import (
    ResourceLimitError,
    abelianization,
    count_homomorphisms,
)
from .monodromy import (
    NumericTrackingError,
    VerificationReport,
    verify_alpha,
    verify_gamma,
)
from .presentation import (
    PresName,
    Presentation,
    cp2_minus_cx_presentation,
    formula_consistency_report,
    group_G_presentation,
    main_presentation,
    make_presentation,
    prime_product_ascending,
    prime_product_g_style,
    remark_k_table,
    semidirect_check,
    u0_minus_y_presentation,
    u0_presentation,
    uinfty_presentations,
)
from .words import DomainError, parse_word

GROUP_BUILDERS = {
    "u0": u0_presentation,
    "u0-minus-y": u0_minus_y_presentation,
    "cp2-minus-x": cp2_minus_cx_presentation,
    "u-infty": uinfty_presentations,  # returns a pair
    "main": main_presentation,
    "G": group_G_presentation,
}


# --- serialization -------------------------------------------------------------


def presentation_to_dict(p: Presentation) -> dict:
    return {
        "n": p.n,
        "name": p.name.value,
        "generators": [s.token() for s in p.generators],
        "relators": [r.tokens() for r in p.relators],
    }


def presentation_from_dict(d: dict) -> Presentation:
    n = d["n"]
    name = PresName(d["name"])
    gens = []
    for tok in d["generators"]:
        w = parse_word([tok], n)
        if len(w) != 1 or w.letters[0].sign != 1:
            raise ValueError(f"generator token must be a bare positive letter: {tok}")
        gens.append(w.letters[0].symbol)
    relators = [parse_word(tokens, n) for tokens in d["relators"]]
    return make_presentation(n, name, gens, relators)


def presentation_to_gap(p: Presentation) -> str:
    names = ", ".join(f'"{s.token()}"' for s in p.generators)
    lines = [f"F := FreeGroup({names});;"]
    for idx, s in enumerate(p.generators, start=1):
        lines.append(f"{s.token()} := F.{idx};;")
    if p.relators:
        body = ",\n".join("  " + "*".join(r.tokens()) for r in p.relators)
        lines.append(f"rels := [\n{body}\n];;")
    else:
        lines.append("rels := [];;")
    lines.append("G := F / rels;;")
    return "\n".join(lines) + "\n"


def presentation_to_txt(p: Presentation) -> str:
    lines = [
        f"{p.name.value} (n={p.n}): {len(p.generators)} generators, "
        f"{len(p.relators)} relators ({p.raw_relator_count} before reduction)",
        "generators: " + " ".join(s.token() for s in p.generators),
        "relators:",
    ]
    lines += ["  " + ".".join(r.tokens()) for r in p.relators]
    return "\n".join(lines) + "\n"


def render_presentation(p: Presentation, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(presentation_to_dict(p), indent=2) + "\n"
    if fmt == "gap":
        return presentation_to_gap(p)
    return presentation_to_txt(p)


def report_to_dict(r: VerificationReport) -> dict:
    return {
        "loop": r.loop,
        "n": r.n,
        "loop_index": r.loop_index,
        "permutation_match": r.permutation_match,
        "exact_word_match": r.exact_word_match,
        "conjugator": r.conjugator.tokens() if r.conjugator is not None else None,
        "basis_dictionary": {str(pos): tok for pos, tok in r.basis_dictionary},
        "braid": {
            "strand_count": r.braid.strand_count,
            "word": r.braid.word_str(),
            "letters": [[pos, sign] for pos, sign in r.braid.letters],
        },
        "numeric_images": {gen: list(tokens) for gen, tokens in r.numeric_images},
        "formula_images": {gen: list(tokens) for gen, tokens in r.formula_images},
        "residuals": {"min_gap": r.residual_min_gap, "max_step": r.residual_max_step},
        "notes": list(r.notes),
    }


def _complex_pair(z: complex) -> list:
    return [z.real, z.imag]


# --- subcommands ---------------------------------------------------------------


def _cmd_present(args) -> int:
    built = GROUP_BUILDERS[args.group](args.n)
    if isinstance(built, tuple):
        if args.format == "json":
            sys.stdout.write(
                json.dumps([presentation_to_dict(p) for p in built], indent=2) + "\n"
            )
        else:
            for p in built:
                sys.stdout.write(render_presentation(p, args.format))
    else:
        sys.stdout.write(render_presentation(built, args.format))
    return 0


def _cmd_verify(args) -> int:
    if args.loop == "alpha":
        report = verify_alpha(args.n, args.epsilon, args.delta, args.steps)
    else:
        try:
            k = int(args.loop)
        except ValueError:
            raise ValueError(f"--loop must be an integer 0..n or 'alpha', got {args.loop!r}")
        report = verify_gamma(args.n, k, args.epsilon, args.delta, args.steps)
    payload = json.dumps(report_to_dict(report), indent=2) + "\n"
    sys.stdout.write(payload)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(payload)
    return 0 if report.permutation_match else 1


def _cmd_invariants(args) -> int:
    built = GROUP_BUILDERS[args.group](args.n)
    targets = sorted(set(args.homs or []))

    def one(p: Presentation) -> dict:
        inv = abelianization(p)
        out = {
            "name": p.name.value,
            "free_rank": inv.free_rank,
            "torsion": list(inv.torsion),
            "hom_counts": {},
        }
        for t in targets:
            out["hom_counts"][t] = count_homomorphisms(p, int(t[1])).count
        return out

    data = [one(p) for p in built] if isinstance(built, tuple) else one(built)
    sys.stdout.write(json.dumps(data, indent=2) + "\n")
    return 0


def _cmd_arrangement(args) -> int:
    lines = fermat_lines(args.n)
    data = {
        "n": args.n,
        "line_count": len(lines),
        "lines": [
            {"tag": str(l.tag), "coefficients": [_complex_pair(c) for c in l.coefficients]}
            for l in lines
        ],
    }
    if args.singular_points:
        pts = singular_points(args.n)
        data["singular_points"] = [
            {
                "location": [_complex_pair(c) for c in sp.location.coordinates],
                "multiplicity": sp.multiplicity,
                "lines": sorted(str(t) for t in sp.incident_lines),
            }
            for sp in pts
        ]
        data["singular_point_count"] = len(pts)
    sys.stdout.write(json.dumps(data, indent=2) + "\n")
    return 0


def _cmd_check_consistency(args) -> int:
    ns = [args.n] if args.n is not None else list(range(1, 7))
    all_ok = True
    w = sys.stdout.write
    for n in ns:
        rep = formula_consistency_report(n)
        sd = semidirect_check(n)
        w(f"n={n}\n")
        if rep["ok"]:
            w("  gamma_k formula vs longhand k<=3 expansions: OK\n")
        else:
            all_ok = False
            w("  gamma_k formula vs longhand k<=3 expansions: MISMATCH\n")
            for mm in rep["mismatches"]:
                w(f"    k={mm['k']} i={mm['i']} {mm['generator']}:\n")
                w(f"      formula : {'.'.join(mm['formula'])}\n")
                w(f"      longhand: {'.'.join(mm['longhand'])}\n")
        w(f"  semidirect structure check: {'OK' if sd.passed else 'FAILED'}\n")
        if not sd.passed:
            all_ok = False
            for r in sd.deletion_failures:
                w(f"    nontrivial g''-shadow: {r}\n")
            for r in sd.g_relator_failures:
                w(f"    G relator mentions g'': {r}\n")
        counts = []
        for label, p in [
            ("u0", u0_presentation(n)),
            ("u0-minus-y", u0_minus_y_presentation(n)),
            ("cp2-minus-x", cp2_minus_cx_presentation(n)),
            ("main", main_presentation(n)),
            ("G", group_G_presentation(n)),
        ]:
            counts.append(f"{label} {len(p.relators)}/{p.raw_relator_count}")
        for p in uinfty_presentations(n):
            counts.append(f"{p.name.value} {len(p.relators)}/{p.raw_relator_count}")
        w("  relator counts (reduced/raw): " + ", ".join(counts) + "\n")
        inv_main = abelianization(main_presentation(n))
        inv_g = abelianization(group_G_presentation(n))
        w(
            f"  abelianizations: main -> {inv_main.describe()}, G -> {inv_g.describe()}\n"
            f"    note: a complement of {3 * n} projective lines classically has first"
            f" homology Z^{3 * n - 1}; the Z^{3 * n} here is flagged, not failed\n"
        )
        if n >= 2:
            a = ".".join(prime_product_ascending(n).tokens())
            b = ".".join(prime_product_g_style(n).tokens())
            same = " (equal)" if a == b else " (differ)"
            w(f"  primed cyclic products: main uses {a}; G uses {b}{same}\n")
        table = remark_k_table(n, model_i := min(1, n - 1))
        rows = ", ".join(f"k={k}: {'.'.join(wd.tokens())}" for k, wd in sorted(table.items()))
        w(f"  low-k commutator shapes (i={model_i}): {rows}\n")
    w("conventions:\n")
    w("  - y-family punctures at zeta_n^j for every n; x-family at base*zeta_n^-j\n")
    w("  - far-chart cyclic product taken as gp0.gp1...gp(n-1), not a rotation of it\n")
    return 0 if all_ok else 1


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermatgroups",
        description="Fundamental groups of Fermat line arrangement complements: "
        "presentations, numerical monodromy verification, invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    names = sorted(GROUP_BUILDERS)

    p_present = sub.add_parser("present", help="emit a presentation")
    p_present.add_argument("--n", type=int, required=True)
    p_present.add_argument("--group", choices=names, default="main")
    p_present.add_argument("--format", choices=["json", "gap", "txt"], default="json")
    p_present.set_defaults(func=_cmd_present)

    p_verify = sub.add_parser("verify", help="verify a loop action numerically")
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument("--loop", required=True, help="0..n or 'alpha'")
    p_verify.add_argument("--epsilon", type=float, default=0.1)
    p_verify.add_argument("--delta", type=float, default=0.02)
    p_verify.add_argument("--steps", type=int, default=256)
    p_verify.add_argument("--report", help="also write the JSON report to this path")
    p_verify.set_defaults(func=_cmd_verify)

    p_inv = sub.add_parser("invariants", help="abelianization and finite-quotient counts")
    p_inv.add_argument("--n", type=int, required=True)
    p_inv.add_argument("--group", choices=names, default="main")
    p_inv.add_argument("--abelianization", action="store_true",
                       help="included by default; flag kept for explicitness")
    p_inv.add_argument("--homs", action="append", choices=["S2", "S3", "S4"])
    p_inv.set_defaults(func=_cmd_invariants)

    p_arr = sub.add_parser("arrangement", help="lines and singular points")
    p_arr.add_argument("--n", type=int, required=True)
    p_arr.add_argument("--singular-points", action="store_true")
    p_arr.set_defaults(func=_cmd_arrangement)

    p_chk = sub.add_parser(
        "check-consistency",
        help="re-derive the longhand expansions and structural diagnostics",
    )
    p_chk.add_argument("--n", type=int, default=None)
    p_chk.set_defaults(func=_cmd_check_consistency)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except NumericTrackingError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (
        ValueError,
        DomainError,
        ResourceLimitError,
        DegenerateInputError,
        BranchPointError,
        KeyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
