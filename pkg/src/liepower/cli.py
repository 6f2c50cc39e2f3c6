"""Command-line front end: analyze groups, render case tables, run verification.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 unsupported
group, 4 internal consistency failure (the decision engine and the Monte
Carlo verifier disagreed, which is the most valuable signal this tool can
emit).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cartan, density, groups, regularity, roots
from .abelian import FGAbelian
from .liealg import IllConditioned

MACHINE_SCHEMA = "1"

# minimum sample count before a NotDense verdict is required to produce
# certified rootless samples (witness components carry positive but possibly
# small sampling mass)
ADEQUATE_SAMPLES = 100


class ConsistencyFailure(Exception):
    """Theory/Monte-Carlo contract breach."""


@dataclass
class AnalysisReport:
    group: str
    k_range: list
    verdicts: list          # (k, status, rule, witness_summary)
    cartan_classes: list    # (label, signature, component group text)
    weak_exponential: bool
    monte_carlo: dict = field(default_factory=dict)  # k -> MonteCarloReport

    def machine_lines(self):
        lines = [f"schema={MACHINE_SCHEMA}"]
        for (k, status, rule, witness) in self.verdicts:
            rec = {
                "group": self.group,
                "k": str(k),
                "rule": rule,
                "status": status,
                "witness": witness or "-",
            }
            if k in self.monte_carlo:
                rep = self.monte_carlo[k]
                rec["mc_rootless"] = f"{rep.certified_rootless_fraction:.6f}"
                rec["mc_roots"] = f"{rep.root_found_fraction:.6f}"
                rec["mc_inconclusive"] = f"{rep.inconclusive_fraction:.6f}"
            lines.append(" ".join(f"{key}={rec[key]}" for key in sorted(rec)))
        return lines

    def human_lines(self):
        lines = [f"group: {self.group}",
                 f"weakly exponential: {self.weak_exponential}"]
        if self.cartan_classes:
            lines.append("cartan classes:")
            for label, sig, comps in self.cartan_classes:
                lines.append(f"  {label}: signature={sig} components={comps}")
        lines.append("verdicts:")
        for (k, status, rule, witness) in self.verdicts:
            extra = f"  witness {witness}" if witness else ""
            mc = ""
            if k in self.monte_carlo:
                rep = self.monte_carlo[k]
                mc = (f"  [mc rootless={rep.certified_rootless_fraction:.3f}"
                      f" roots={rep.root_found_fraction:.3f}"
                      f" inconclusive={rep.inconclusive_fraction:.3f}]")
            lines.append(f"  k={k}: {status} ({rule}){extra}{mc}")
        return lines


def parse_machine_lines(lines):
    """Inverse of machine_lines, for round-trip checks: list of record dicts."""
    body = list(lines)
    if not body or body[0] != f"schema={MACHINE_SCHEMA}":
        raise ValueError("missing or wrong schema header")
    out = []
    for line in body[1:]:
        rec = {}
        for item in line.split(" "):
            key, _, value = item.partition("=")
            rec[key] = value
        out.append(rec)
    return out


def _parse_k_range(text: str):
    if ".." in text:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad k range {text!r}")
    return list(range(lo, hi + 1))


def _witness_summary(verdict):
    if verdict.witness is None:
        return ""
    return verdict.witness.render()


def run_analysis(desc, k_range, verify=False, samples=400, seed=7) -> AnalysisReport:
    verdicts = []
    mc = {}
    for k in k_range:
        v = density.density_verdict(desc, k)
        verdicts.append((k, v.status, v.rule, _witness_summary(v)))
        if verify and desc.is_matrix:
            rep = roots.monte_carlo_density(desc, k, samples, seed)
            mc[k] = rep
            if v.is_dense and rep.rootless_count > 0:
                raise ConsistencyFailure(
                    f"{desc.render()}, k={k}: verdict Dense but "
                    f"{rep.rootless_count} certified rootless samples"
                )
            if (not v.is_dense and v.status == density.NOT_DENSE
                    and samples >= ADEQUATE_SAMPLES and rep.rootless_count == 0):
                raise ConsistencyFailure(
                    f"{desc.render()}, k={k}: verdict NotDense but no "
                    f"certified rootless sample among {samples}"
                )
    if desc.is_matrix:
        classes = cartan.enumerate_cartan_classes(desc)
    else:
        classes = cartan.cover_cartan_classes(desc)
    class_rows = [
        (c.label, ",".join(str(x) for x in c.signature), str(c.component_group))
        for c in classes
    ]
    weak = density.weakly_exponential(desc).value
    return AnalysisReport(
        group=desc.render(),
        k_range=list(k_range),
        verdicts=verdicts,
        cartan_classes=class_rows,
        weak_exponential=weak,
        monte_carlo=mc,
    )


def cmd_analyze(args) -> int:
    desc = groups.parse_descriptor(args.descriptor)
    k_range = _parse_k_range(args.k)
    report = run_analysis(
        desc, k_range, verify=args.verify, samples=args.samples, seed=args.seed
    )
    lines = report.machine_lines() if args.machine else report.human_lines()
    print("\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# case tables
# ---------------------------------------------------------------------------

def _case_rows(tag: str, n):
    """Case-table rows: (row label, SimpleCaseDescriptor)."""
    Z = FGAbelian(1, ())
    if tag == "1":
        labels = ["A_n I (n>=2)", "B_n I", "E_6^6 I", "E_8^8 VIII", "F_4^4 I",
                  "G_2^2 I", "C_n II", "E_7^-5 VI", "E_8^-24 IX", "F_4^-22 II"]
        d = density.SimpleCaseDescriptor("1", FGAbelian(0, (2,)))
        return [(lab, d) for lab in labels]
    if tag == "2a":
        if n is None:
            raise ValueError("case 2a needs --n")
        d = density.SimpleCaseDescriptor("2a", Z, n=n)
        return [(f"E_7^-25 VII / A_1 I (n={n})", d)]
    if tag == "2b":
        if n is None:
            raise ValueError("case 2b needs --n")
        d = density.SimpleCaseDescriptor("2b", Z, n=n)
        return [(f"A_1 I / C_n I (n>=3) / D_n III (n even) (n={n})", d)]
    if tag == "3":
        d = density.SimpleCaseDescriptor("3", FGAbelian(0, (6,)))
        return [("E_6^2 II", d)]
    if tag == "4":
        return [
            ("D_n I (n odd)", density.SimpleCaseDescriptor("4", FGAbelian(0, (4,)))),
            ("D_n I (n even)", density.SimpleCaseDescriptor("4", FGAbelian(0, (8,)))),
        ]
    if tag == "5":
        return [
            ("split, pi1=Z, full cover",
             density.SimpleCaseDescriptor("5", Z, kernel_index=0)),
            ("split, pi1=Z, kernel 3Z",
             density.SimpleCaseDescriptor("5", Z, kernel_index=3)),
            ("split, pi1=Z/2, F=(Z/2)^2",
             density.SimpleCaseDescriptor("5", FGAbelian(0, (2,)), f_two_rank=2)),
        ]
    raise ValueError(f"unknown case tag {tag!r}")


def cmd_table(args) -> int:
    tags = ["1", "2a", "2b", "3", "4", "5"] if args.case == "all" else [args.case]
    k_range = _parse_k_range(args.k)
    header = "case | real form | " + " | ".join(f"k={k}" for k in k_range)
    print(header)
    print("-" * len(header))
    for tag in tags:
        if tag in ("2a", "2b") and args.n is None and args.case == "all":
            continue
        rows = _case_rows(tag, args.n)
        for label, d in rows:
            cells = [density.simple_case_verdict(d, k).status for k in k_range]
            print(f"{tag:4s} | {label} | " + " | ".join(cells))
    return 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _suite_regularity(samples, seed, out):
    """Root/regularity equivalence batch over the three reference groups."""
    fails = discards = total = 0
    for gi, name in enumerate(["SL(2,R)", "SL(3,R)", "SU(2,1)"]):
        desc = groups.parse_descriptor(name)
        for k in (2, 3, 4):
            for i in range(samples):
                h = groups.sample_element(desc, (seed, gi, k, i))
                total += 1
                try:
                    ok = regularity.check_root_regularity_equivalence(h, k)
                except (IllConditioned, regularity.BoundaryAmbiguity):
                    discards += 1
                    continue
                if not ok:
                    fails += 1
    rate = discards / total
    out.append(f"regularity: equivalence batch {total} samples, "
               f"{fails} failures, discard rate {100 * rate:.2f}%")
    if fails:
        return "root/regularity equivalence failed"
    if rate >= 0.05:
        return "discard rate above 5%"
    return None


def _suite_cartan(samples, seed, out):
    """Power-image component check on every catalog Cartan class."""
    checked = 0
    for desc in groups.catalog_descriptors():
        for c in cartan.enumerate_cartan_classes(desc):
            for k in range(1, 13):
                cartan.pk_image_components(c, k, samples=max(2, samples // 40),
                                           rng_seed=seed)
                checked += 1
    out.append(f"cartan: power-image component check on {checked} (class, k) pairs")
    return None


def _suite_density(samples, seed, out):
    """Brute-force abelian oracle and divisor-closure of verdicts."""
    from itertools import count
    checked = 0
    for order in range(1, 25):
        for tors in _abelian_groups_of_order(order):
            A = FGAbelian(0, tors)
            for k in range(1, 13):
                fast = density.pk_surjective_on_fg_abelian(A, k)
                brute = A.image_of_multiplication(k) == set(A.elements())
                if fast != brute:
                    out.append(f"density: oracle mismatch on {A}, k={k}")
                    return "abelian oracle mismatch"
                checked += 1
    out.append(f"density: abelian oracle agreed on {checked} (group, k) pairs")
    for desc in groups.catalog_descriptors():
        for k in range(1, 13):
            for m in range(1, 13):
                if k * m > 12:
                    continue
                if density.density_verdict(desc, k * m).is_dense:
                    if not (density.density_verdict(desc, k).is_dense
                            and density.density_verdict(desc, m).is_dense):
                        out.append(f"density: divisor closure failed on "
                                   f"{desc.render()} k={k} m={m}")
                        return "divisor closure failed"
    out.append("density: divisor closure holds on the catalog")
    return None


def _suite_roots(samples, seed, out):
    """Monte Carlo / decision-engine agreement on the catalog."""
    for desc in groups.catalog_descriptors():
        for k in (2, 3):
            rep = roots.monte_carlo_density(desc, k, samples, seed)
            v = density.density_verdict(desc, k)
            if v.is_dense and rep.rootless_count > 0:
                out.append(f"roots: {desc.render()} k={k} Dense but rootless "
                           f"fraction {rep.certified_rootless_fraction:.3f}")
                return "Monte Carlo contradicts a Dense verdict"
            if (not v.is_dense and samples >= ADEQUATE_SAMPLES
                    and rep.rootless_count == 0):
                out.append(f"roots: {desc.render()} k={k} NotDense but no "
                           f"rootless samples")
                return "Monte Carlo found no witness for NotDense"
    out.append(f"roots: Monte Carlo agrees with the decision engine "
               f"({samples} samples per (group, k))")
    return None


def _abelian_groups_of_order(order: int):
    """All invariant-factor chains n_1 | n_2 | ... with product = order."""
    if order == 1:
        return [()]
    chains = []

    def extend(prefix, remaining, min_factor):
        for d in range(max(2, min_factor), remaining + 1):
            if remaining % d != 0:
                continue
            # divisibility chain: every later factor is a multiple of d
            if prefix and d % prefix[-1] != 0:
                continue
            rest = remaining // d
            if rest == 1:
                chains.append(tuple(prefix) + (d,))
            else:
                extend(list(prefix) + [d], rest, d)

    extend([], order, 2)
    return chains


SUITES = {
    "regularity": _suite_regularity,
    "cartan": _suite_cartan,
    "density": _suite_density,
    "roots": _suite_roots,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.module is None or args.all else [args.module]
    out = []
    for name in names:
        failure = SUITES[name](args.samples, args.seed, out)
        if failure is not None:
            print("\n".join(out))
            print(f"FAIL {name}: {failure}")
            return 1
    print("\n".join(out))
    print("ok")
    return 0


def cmd_catalog(args) -> int:
    for desc in groups.catalog_descriptors():
        print(desc.render())
    print("universal(PSL(2,R))")
    print("quotient(universal(PSL(2,R)),<m>)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liepower",
        description="density of k-th power maps on catalog Lie groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="density verdicts for one group")
    p_an.add_argument("descriptor")
    p_an.add_argument("--k", required=True, help="k or a..b")
    p_an.add_argument("--verify", action="store_true",
                      help="cross-check verdicts by Monte Carlo root sampling")
    p_an.add_argument("--samples", type=int, default=400,
                      help="Monte Carlo samples per k (NotDense checks need >= 100)")
    p_an.add_argument("--seed", type=int, default=7)
    p_an.add_argument("--machine", action="store_true",
                      help="stable line-oriented key=value output")
    p_an.set_defaults(func=cmd_analyze)

    p_tb = sub.add_parser("table", help="simple-group case table")
    p_tb.add_argument("--case", required=True,
                      choices=["1", "2a", "2b", "3", "4", "5", "all"])
    p_tb.add_argument("--n", type=int, default=None,
                      help="cyclic invariant for cases 2a/2b")
    p_tb.add_argument("--k", required=True, help="k or a..b")
    p_tb.set_defaults(func=cmd_table)

    p_vf = sub.add_parser("verify", help="run the cross-module property suites")
    p_vf.add_argument("--module", choices=list(SUITES), default=None)
    p_vf.add_argument("--all", action="store_true")
    p_vf.add_argument("--samples", type=int, default=120)
    p_vf.add_argument("--seed", type=int, default=7)
    p_vf.set_defaults(func=cmd_verify)

    p_ct = sub.add_parser("catalog", help="list supported descriptors")
    p_ct.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except groups.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (groups.UnsupportedFamily, groups.NoMatrixModel,
            density.UnsupportedGroup) as exc:
        print(f"unsupported group: {exc}", file=sys.stderr)
        return 3
    except (ConsistencyFailure, density.TheoryConsistencyError,
            cartan.ComponentConsistencyError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
