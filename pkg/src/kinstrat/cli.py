"""Command-line front end.

Verbs: check, classify, census, count, sample, dim-verify, poset, examples.
All file formats are the JSON schemas of the library modules; every run is
deterministic given the seed (flag, else STRATA_SEED, else a fixed default).
Domain errors exit 1 with a machine-readable JSON object on stderr; I/O
errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import census as census_mod
from . import exactmat, realize
from .classify import ClassificationError, StratumLabel, classification_margin, classify_massless
from .exactmat import MatrixError, SymmetricMatrix
from .matroid import MatroidError, SignedMatroid, enumerate_signed, signed_leq
from .regioncheck import MMC4Point, MMC5Point, OUTSIDE, arrangement_census, igusa_quartic, mmc4_classify, mmc5_matrix

DEFAULT_SEED = 20240


class CliDomainError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("STRATA_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IOError(f"cannot read JSON from {path}: {exc}") from exc


def _write_json(data, path=None):
    text = json.dumps(data, indent=2, sort_keys=True, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit(data, args, pretty_fn=None):
    if getattr(args, "format", "pretty") == "json" or pretty_fn is None:
        _write_json(data)
    else:
        pretty_fn(data)


# -- check / classify -------------------------------------------------------


def cmd_check(args):
    S = SymmetricMatrix.from_json_dict(_read_json(args.input))
    try:
        verdict = exactmat.is_mandelstam(S)
    except exactmat.ZeroMatrixError as exc:
        raise CliDomainError(str(exc), witness="zero_matrix")
    data = {"mandelstam": verdict.ok, "rank": verdict.rank, "witness": verdict.witness}

    def pretty(d):
        if d["mandelstam"]:
            print(f"Mandelstam: yes (rank {d['rank']})")
        else:
            print(f"Mandelstam: no (witness: {d['witness']})")

    _emit(data, args, pretty)


def cmd_classify(args):
    S = SymmetricMatrix.from_json_dict(_read_json(args.input))
    try:
        label = classify_massless(S)
    except (ClassificationError, exactmat.ZeroMatrixError) as exc:
        raise CliDomainError(str(exc), witness=getattr(exc, "witness", None))
    data = label.to_json_dict()
    data["margin"] = classification_margin(S)

    def pretty(d):
        parts = " | ".join(",".join(map(str, p)) for p in d["parts"])
        signs = "".join(d["signs"][str(e)] for e in sorted(map(int, d["signs"])))
        print(f"stratum: parts [{parts}]  signs {signs}  rank {d['r']}  kind {d['kind']}  dim {d['d']}")
        print(f"margin: {d['margin']:.3e}")

    _emit(data, args, pretty)


# -- census / count ----------------------------------------------------------


def _census_rows(args):
    q = census_mod.CensusQuery(args.n, args.region, args.r, args.d)
    if args.check_bruteforce:
        mismatches = census_mod.check_bruteforce(q)
        if mismatches:
            raise CliDomainError(f"brute-force mismatch: {mismatches}", witness=mismatches)
    return census_mod.build_table(q)


def cmd_census(args):
    rows = _census_rows(args)
    if args.format == "csv":
        print("d,r,fixed,all")
        for row in rows:
            print(f"{row.d},{row.r},{row.count_fixed_sigma},{row.count_all_sigma}")
        return
    if args.format == "json":
        _write_json([row.__dict__ for row in rows])
        return
    # pretty: mirror the table layout, rows d and paired columns per rank
    ranks = sorted({row.r for row in rows})
    dims = sorted({row.d for row in rows})
    cells = {(row.d, row.r): row for row in rows}
    head = "d/r | " + " | ".join(f"{r:>2} fixed    all" for r in ranks)
    print(head)
    print("-" * len(head))
    for d in dims:
        line = f"{d:>3} | "
        chunks = []
        for r in ranks:
            row = cells.get((d, r))
            chunks.append(f"{row.count_fixed_sigma:>8} {row.count_all_sigma:>6}" if row else " " * 15)
        print(line + " | ".join(chunks))


def cmd_count(args):
    if args.region == "mmc":
        value = census_mod.count_mmc(args.n, args.r, args.d)
        if not args.all_sigma:
            raise CliDomainError(
                "fixed-sigma MMC counts have no closed form; use census --region mmc"
            )
    else:
        if args.region == "lorentzian" or not args.all_sigma:
            value = census_mod.count_massless(args.n, args.r, args.d, all_sigma=False)
        else:
            value = census_mod.count_massless(args.n, args.r, args.d, all_sigma=True)
    print(value)


# -- sample / dim-verify -------------------------------------------------------


def _load_signed(args) -> tuple:
    data = _read_json(args.label)
    signed = SignedMatroid.from_json_dict(data)
    r = args.r if args.r is not None else data.get("r")
    if r is None:
        raise CliDomainError("rank not given: pass --r or include 'r' in the label JSON")
    return signed, int(r)


def cmd_sample(args):
    signed, r = _load_signed(args)
    seed = _seed(args)
    try:
        if args.mmc:
            config = realize.sample_mmc(signed, r, seed=seed)
        else:
            config = realize.sample_stratum(signed, r, seed=seed)
    except (census_mod.EmptyStratumError, realize.RealizeError) as exc:
        raise CliDomainError(str(exc))
    G = realize.gram(config)
    out = {"config": config.to_json_dict(), "gram": G.to_json_dict()}
    if args.out:
        _write_json(out["config"], args.out)
    if args.gram_out:
        _write_json(out["gram"], args.gram_out)
    if not args.out and not args.gram_out:
        _write_json(out)


def cmd_dim_verify(args):
    seed = _seed(args)
    failures = 0
    rows = []
    for sm in enumerate_signed(args.n):
        ranks = list(census_mod.ranks_for(sm.matroid.m, args.n))
        for r in ranks:
            if args.r is not None and r != args.r:
                continue
            if args.mmc:
                if not census_mod.mmc_admissible(sm, r):
                    continue
                want = census_mod.dim_mmc(sm, r)
            else:
                want = census_mod.dim_massless(sm.matroid, r)
            got = realize.estimate_dimension(sm, r, mmc=args.mmc, seed=seed)
            ok = got == want
            failures += not ok
            rows.append((sm, r, want, got, ok))
    for sm, r, want, got, ok in rows:
        tag = "pass" if ok else "FAIL"
        print(f"{tag} r={r} d={want} est={got} {json.dumps(sm.to_json_dict(), sort_keys=True)}")
    print(f"{len(rows) - failures}/{len(rows)} labels verified")
    if failures:
        raise CliDomainError(f"{failures} labels failed dimension verification")


# -- poset -----------------------------------------------------------------------


def cmd_poset(args):
    if args.n > 7:
        raise CliDomainError("poset export limited to n <= 7")
    vertices = []
    for sm in enumerate_signed(args.n):
        if not census_mod.nonempty_massless(sm.matroid, args.r):
            continue
        if args.region == "lorentzian" and any(s != 1 for s in sm.sigma.signs):
            continue
        if args.region == "mmc" and not census_mod.mmc_admissible(sm, args.r):
            continue
        vertices.append(sm)
    if args.below:
        top = SignedMatroid.from_json_dict(_read_json(args.below))
        vertices = [sm for sm in vertices if signed_leq(sm, top)]
    order = {}
    for i, a in enumerate(vertices):
        for j, b in enumerate(vertices):
            if i != j and signed_leq(a, b):
                order.setdefault(i, set()).add(j)
    edges = []
    for i, ups in sorted(order.items()):
        for j in sorted(ups):
            if not any(k in order.get(i, ()) and j in order.get(k, ()) for k in ups if k != j):
                edges.append((i, j))
    data = {
        "vertices": [sm.to_json_dict() for sm in vertices],
        "edges": sorted(edges),
    }

    def pretty(d):
        print(f"{len(d['vertices'])} vertices, {len(d['edges'])} cover relations")
        for i, j in d["edges"]:
            print(f"{i} < {j}")

    _emit(data, args, pretty)


# -- worked examples ---------------------------------------------------------------


def cmd_examples(args):
    if args.which == "n4":
        if args.point is None:
            raise CliDomainError("examples n4 requires --point X Y")
        p = MMC4Point.make(Fraction(args.point[0]), Fraction(args.point[1]))
        result = mmc4_classify(p)
        if result == OUTSIDE:
            data = {"outside": True}
        else:
            data = result.to_json_dict()
        _emit(data, args, lambda d: print(json.dumps(d, sort_keys=True, default=str)))
        return
    # n5
    if args.census:
        count, rows = arrangement_census()
        data = {
            "regions": count,
            "strata": [
                {
                    "sigma": "".join("+" if s > 0 else "-" for s in row.sigma),
                    "signs": {f"s{i}{j}": ("+" if s > 0 else "-") for (i, j), s in zip_pairs(row.signs)},
                    "witness": [str(w) for w in row.witness],
                }
                for row in rows
            ],
        }

        def pretty(d):
            print(f"{d['regions']} regions; {len(d['strata'])} satisfy all triple conditions")
            header = "sigma        " + " ".join(f"s{i}{j}" for i, j in PAIR_ORDER)
            print(header)
            for s in d["strata"]:
                print(f"{s['sigma']}   " + "   ".join(s["signs"][f"s{i}{j}"] for i, j in PAIR_ORDER))

        _emit(data, args, pretty)
        return
    if args.point is None:
        raise CliDomainError("examples n5 requires --census or --point A B C D E")
    p = MMC5Point.make(*[Fraction(v) for v in args.point])
    S = mmc5_matrix(p)
    data = {
        "quartic": str(igusa_quartic(p)),
        "rank": exactmat.rank(S),
        "gram": S.to_json_dict(),
    }
    try:
        data["label"] = classify_massless(S).to_json_dict()
    except (ClassificationError, exactmat.ZeroMatrixError) as exc:
        data["label"] = None
        data["error"] = str(exc)
    _emit(data, args, lambda d: print(json.dumps(d, sort_keys=True, default=str)))


PAIR_ORDER = tuple((i, j) for i in range(1, 6) for j in range(i + 1, 6))


def zip_pairs(signs):
    return zip(PAIR_ORDER, signs)


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kinstrat", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("pretty", "json", "csv"), default="pretty")

    p = sub.add_parser("check", help="Mandelstam membership of a matrix JSON file")
    p.add_argument("--input", default="-")
    add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="stratum label of a massless matrix")
    p.add_argument("--input", default="-")
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="stratum counts by dimension and rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--region", choices=("massless", "lorentzian", "mmc"), default="massless")
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--check-bruteforce", action="store_true")
    add_format(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("count", help="one census cell")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--region", choices=("massless", "lorentzian", "mmc"), default="massless")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--all-sigma", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sample", help="sample a configuration in a stratum")
    p.add_argument("--label", required=True, help="signed matroid / label JSON file ('-' for stdin)")
    p.add_argument("--r", type=int)
    p.add_argument("--mmc", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--gram-out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("dim-verify", help="numerical rank vs dimension formula per label")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--mmc", action="store_true")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_dim_verify)

    p = sub.add_parser("poset", help="cover relations of the stratum poset at one rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--region", choices=("massless", "lorentzian", "mmc"), default="massless")
    p.add_argument("--below", help="restrict to the order ideal below this label JSON")
    add_format(p)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("examples", help="worked n=4 / n=5 region verifiers")
    p.add_argument("which", choices=("n4", "n5"))
    p.add_argument("--point", nargs="*")
    p.add_argument("--census", action="store_true")
    add_format(p)
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliDomainError as exc:
        _error_json(str(exc), getattr(exc, "witness", None))
        return 1
    except (MatrixError, MatroidError, census_mod.CensusError, ClassificationError, realize.RealizeError) as exc:
        _error_json(str(exc), getattr(exc, "witness", None))
        return 1
    except IOError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 2
    return 0


def _error_json(message, witness):
    print(
        json.dumps({"error": "domain", "message": message, "witness": witness}, default=str),
        file=sys.stderr,
    )


if __name__ == "__main__":
    sys.exit(main())
