"""``rankembed`` command line.

Exit codes: 0 success/PASS, 1 verification FAIL, 2 usage error, 3 I/O error.
Payloads go to ``--out`` (or stdout); status lines go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from rankembed.constructions import CONSTRUCTIONS, ConstructionError, build
from rankembed.embedding import dumps, embedding_dumps, embedding_loads, encode_number
from rankembed.norms import NormError, PNorm, check_norm_axioms, parse_norm
from rankembed.profile import (
    PRNG_ALGORITHM,
    SAMPLER_VERSION,
    ProfileError,
    parse_profile,
    profile_to_json,
    random_profile,
    serialize_profile,
)
from rankembed.two_voter import AnnulusError
from rankembed.verify import VerificationError, c_growth_experiment, lemma2_check, verify_embedding

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    profile: str | None = None
    embedding: str | None = None
    norm: str | None = None
    construction: str | None = None
    c: str | None = None
    seed: int | None = None
    out: str | None = None
    exact: bool = False
    strict: bool = False
    tie_break: str = "smallest"

    def validate(self) -> None:
        if self.c is not None and self.construction != "ar":
            raise UsageError("--c is only meaningful with --construction ar")
        if self.tie_break != "smallest" and self.construction != "max-rank":
            raise UsageError("--tie-break is only meaningful with --construction max-rank")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from None


def write_atomic(path: str | None, text: str) -> None:
    """Write-then-rename so readers never see a partial file; ``None`` means stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _parse_c(text: str):
    try:
        c = Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise UsageError(f"--c must be a number, got {text!r}") from None
    return c.numerator if c.denominator == 1 else c


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _fmt(x) -> str:
    return encode_number(x).strip('"')


def plot_csv(profile, emb) -> str:
    """One row per (voter, alternative) segment, ready for plotting."""
    d = emb.ambient_dim
    header = ["voter", "alternative", "rank", "distance"]
    header += [f"v{k + 1}" for k in range(d)] + [f"a{k + 1}" for k in range(d)]
    rows = [",".join(header)]
    for i, (ranking, v) in enumerate(zip(profile.rankings, emb.voters)):
        for pos, j in enumerate(ranking):
            a = emb.alternatives[j]
            dist = emb.norm([x - y for x, y in zip(v, a)])
            rows.append(",".join([str(i + 1), str(j + 1), str(pos + 1), _fmt(dist)] + [_fmt(x) for x in v + a]))
    return "\n".join(rows) + "\n"


def cmd_embed(cfg: RunConfig, plot_path: str | None = None) -> int:
    cfg.validate()
    profile = parse_profile(_read(cfg.profile))
    construction = cfg.construction
    if construction in ("max-rank", "rank-pivot"):
        norm = PNorm(1.0)
        if cfg.norm is not None and parse_norm(cfg.norm) != norm:
            raise UsageError(f"{construction} targets the 1-norm; drop --norm or pass p:1")
    else:
        norm = parse_norm(cfg.norm) if cfg.norm else PNorm(2.0)
    options = {"tie_break": cfg.tie_break}
    if cfg.c is not None:
        options["c"] = _parse_c(cfg.c)
    try:
        emb = build(profile, construction, norm, **options)
    except (ConstructionError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if cfg.seed is not None:
        emb.metadata["seed"] = cfg.seed
    report = verify_embedding(profile, emb, "exact" if cfg.exact else "float")
    write_atomic(cfg.out, embedding_dumps(emb))
    if plot_path:
        write_atomic(plot_path, plot_csv(profile, emb))
    verdict = "PASS" if report.passed else "FAIL"
    _status(f"{verdict} margin={_fmt(report.margin)} violations={len(report.violations)}")
    for v in report.violations:
        _status(
            f"  voter {v.voter + 1}: a{v.better + 1} before a{v.worse + 1} "
            f"but d={_fmt(v.d_better)} vs {_fmt(v.d_worse)}"
        )
    if report.passed:
        return EXIT_OK
    if construction == "max-rank" and not cfg.strict:
        _status("WARN: max-rank formula as printed is not rank-preserving for this profile")
        return EXIT_OK
    return EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    profile = parse_profile(_read(cfg.profile))
    try:
        emb = embedding_loads(_read(cfg.embedding))
    except (ValueError, NormError) as exc:
        raise UsageError(f"bad embedding file: {exc}") from None
    try:
        report = verify_embedding(profile, emb, "exact" if cfg.exact else "float")
    except VerificationError as exc:
        raise UsageError(str(exc)) from None
    write_atomic(cfg.out, dumps(report.to_json()) + "\n")
    _status(f"{'PASS' if report.passed else 'FAIL'} margin={_fmt(report.margin)} violations={len(report.violations)}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_gen(args) -> int:
    try:
        profile = random_profile(args.m, args.n, args.seed)
    except ProfileError as exc:
        raise UsageError(str(exc)) from None
    meta = {"seed": args.seed, "prng": PRNG_ALGORITHM, "sampler": SAMPLER_VERSION}
    if args.format == "json":
        text = dumps({**profile_to_json(profile), "metadata": meta}) + "\n"
    else:
        comment = "generated by rankembed gen " + " ".join(f"{k}={v}" for k, v in meta.items())
        text = serialize_profile(profile, header_comment=comment)
    write_atomic(args.out, text)
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        series = c_growth_experiment(args.n, args.t_min, args.t_max, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_atomic(args.out, series.to_csv())
    _status(f"slope={series.fitted_slope:.6f} target={series.target_slope:.6f} increasing={series.increasing}")
    return EXIT_OK


def cmd_check_norm(args) -> int:
    norm = parse_norm(args.norm)
    report = check_norm_axioms(norm, args.samples, args.seed, dim=args.dim)
    write_atomic(args.out, dumps(report.to_json()) + "\n")
    _status(f"{'PASS' if report.passed else 'FAIL'} norm axioms on {args.samples} samples")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lemma2(args) -> int:
    try:
        report = lemma2_check(args.m, parse_norm(f"p:{args.p}").p, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_atomic(args.out, dumps(report.to_json()) + "\n")
    _status(f"{'PASS' if report.passed else 'FAIL'} failures={report.failures}")
    return EXIT_OK if report.passed else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankembed", description="Rank-preserving embeddings of preference profiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="build an embedding and verify it")
    p.add_argument("--profile", required=True)
    p.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    p.add_argument("--norm", help="p:<value|inf> | sum:<w>*p<value>+... | poly:<path>")
    p.add_argument("--c", help="AR scale (default: automatic)")
    p.add_argument("--tie-break", choices=("smallest", "largest"), default="smallest")
    p.add_argument("--exact", action="store_true", help="verify with exact rational arithmetic")
    p.add_argument("--strict", action="store_true", help="exit 1 on a max-rank FAIL")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--plot-csv", help="also write voter-alternative segments as CSV")

    p = sub.add_parser("verify", help="verify an embedding file against a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("gen", help="generate a seeded random irreducible profile")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("experiment", help="numerical experiments")
    exp = p.add_subparsers(dest="experiment", required=True)
    q = exp.add_parser("c-growth", help="growth of the AR constant as p -> 1")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--t-min", type=float, default=20.0)
    q.add_argument("--t-max", type=float, default=40.0)
    q.add_argument("--steps", type=int, default=21)
    q.add_argument("--out")

    p = sub.add_parser("check-norm", help="sample-check the norm axioms")
    p.add_argument("--norm", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--out")

    p = sub.add_parser("lemma2", help="check the basis-vector bisector hyperplane property")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "embed":
            cfg = RunConfig(
                "embed",
                profile=args.profile,
                norm=args.norm,
                construction=args.construction,
                c=args.c,
                seed=args.seed,
                out=args.out,
                exact=args.exact,
                strict=args.strict,
                tie_break=args.tie_break,
            )
            return cmd_embed(cfg, args.plot_csv)
        if args.command == "verify":
            cfg = RunConfig("verify", profile=args.profile, embedding=args.embedding, out=args.out, exact=args.exact)
            return cmd_verify(cfg)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "experiment":
            return cmd_experiment(args)
        if args.command == "check-norm":
            return cmd_check_norm(args)
        if args.command == "lemma2":
            return cmd_lemma2(args)
    except (UsageError, ProfileError, NormError, VerificationError, AnnulusError, json.JSONDecodeError) as exc:
        _status(f"error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _status(f"error: {exc}")
        return EXIT_IO
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
