"""Command-line front end.

    curvearcs points         --field 7 --g "1:0,2;6:3,0;6:0,0"
    curvearcs special-lines  --family hyperelliptic --field 5^2 --f "x^3+1" --e 2
    curvearcs complete       --family hyperelliptic --field 5^2 --f "x^3+1" --m 3 --out r.json
    curvearcs verify         --arc points.txt --m 3 --field 5^2
    curvearcs family         --kind artin_schreier --field 3 --f "x^5+x"
    curvearcs code           --arc points.txt --field 7
    curvearcs census         --arc points.txt --field 7 --format csv

Exit status: 0 success, 1 hypothesis or verification failure, 2 input
error, 3 internal invariant breach.  Reports go to ``--out``, else to
``$CURVEARCS_OUT_DIR/<command>.<ext>`` when that variable is set, else to
stdout.  Timing lives in a ``.meta.json`` sidecar so reports themselves
are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .arcs import (
    SCHEMA_VERSION,
    ArcPropertyError,
    CompletionError,
    CompletionPolicy,
    InvariantBreach,
    census,
    complete_arc,
    is_complete,
    is_m_arc,
)
from .codes import CodeError, code_from_arc, format_code
from .curve import CurveError, PlaneCurve, curve_create, curve_from_affine, scan_tangencies
from .families import KINDS, FamilyError, artin_schreier, hyperelliptic
from .gf import FieldCtx, FieldError, parse_field_spec
from .plane import ProjPoint, format_line, format_point, parse_point, plane_of
from .poly import BivarPoly, HomogPoly, parse_sparse, parse_unipoly

OUT_DIR_ENV = "CURVEARCS_OUT_DIR"
COMMANDS = ("points", "special-lines", "complete", "verify", "family", "code", "census")


class InputError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    field: str | None = None
    curve_file: str | None = None
    family: str | None = None
    f: str | None = None
    xi: str | None = None
    g: str | None = None
    m: int | None = None
    e: int = 1
    fallback: bool = True
    debug_checks: bool = False
    arc: str | None = None
    out: str | None = None
    fmt: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.e not in (1, 2, 3):
            raise InputError("--e must be 1, 2 or 3")
        if self.command in ("points", "special-lines", "complete"):
            if not (self.curve_file or self.family or self.g):
                raise InputError("a curve is required: --curve FILE, --family ... or --g ...")
        if self.command in ("verify", "code", "census") and not self.arc:
            raise InputError("--arc FILE is required")
        if self.command == "verify" and self.m is None:
            raise InputError("--m is required")
        if self.command == "family" and not (self.family and self.f):
            raise InputError("--kind and --f are required")


# -- inputs ------------------------------------------------------------------------------------


def _field(cfg: RunConfig) -> FieldCtx:
    if not cfg.field:
        raise InputError("--field is required")
    return parse_field_spec(cfg.field)


def read_curve_file(path: str | Path) -> PlaneCurve:
    """Curve spec file: ``key: value`` lines with keys field, and homogeneous or affine (plus optional degree).

    Polynomials use the sparse form ``c:i,j,k;c:i,j,k`` (affine: ``c:i,j``).
    """
    entries = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InputError(f"{path}:{n}: expected 'key: value'")
        key, val = line.split(":", 1)
        entries[key.strip().lower()] = val.strip()
    if "field" not in entries:
        raise InputError(f"{path}: missing 'field'")
    ctx = parse_field_spec(entries["field"])
    if "homogeneous" in entries:
        return curve_create(parse_sparse(ctx, entries["homogeneous"], HomogPoly))
    if "affine" in entries:
        m = int(entries["degree"]) if "degree" in entries else None
        return curve_from_affine(parse_sparse(ctx, entries["affine"], BivarPoly), m)
    raise InputError(f"{path}: need 'homogeneous' or 'affine'")


def build_curve(cfg: RunConfig) -> tuple[PlaneCurve, dict | None]:
    if cfg.curve_file:
        return read_curve_file(cfg.curve_file), None
    ctx = _field(cfg)
    if cfg.family:
        if cfg.family not in KINDS:
            raise InputError(f"unknown family {cfg.family!r}")
        if not cfg.f:
            raise InputError("--f is required with --family")
        f = parse_unipoly(ctx, cfg.f)
        if cfg.family == "artin_schreier":
            curve, spec = artin_schreier(ctx, f)
        else:
            xi = ctx.parse(cfg.xi) if cfg.xi else None
            if cfg.family == "hyperelliptic_twist" and xi is None:
                raise InputError("--xi is required for a twist")
            curve, spec = hyperelliptic(ctx, f, xi)
        fam = spec.to_dict()
        if not spec.admissible:
            fam["note"] = "unsupported by theorem: " + ", ".join(spec.failed())
        return curve, fam
    return curve_from_affine(parse_sparse(ctx, cfg.g, BivarPoly), cfg.m), None


def ingest_points(path: str | Path, ctx: FieldCtx) -> list[ProjPoint]:
    """One point per line (x0:x1:x2); canonicalised, deduplicated, plane order."""
    seen: dict[int, ProjPoint] = {}
    dupes = 0
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            P = parse_point(ctx, line)
        except (ValueError, FieldError) as exc:
            raise InputError(f"{path}:{n}: {exc}") from None
        if P.index in seen:
            dupes += 1
        seen[P.index] = P
    if dupes:
        warnings.warn(f"{path}: {dupes} duplicate point(s) ignored", stacklevel=2)
    return [seen[i] for i in sorted(seen)]


def emit_points(points, path: str | Path) -> None:
    Path(path).write_text("".join(format_point(P) + "\n" for P in points))


# -- commands ----------------------------------------------------------------------------------


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_points(cfg: RunConfig) -> tuple[str, int]:
    curve, _ = build_curve(cfg)
    pl = plane_of(curve.ctx)
    flags = curve.singular_flags()
    rows = [[format_point(pl.point(i)), int(flags[i])] for i in curve.rational_point_indices()]
    if cfg.fmt == "csv":
        return _csv(rows, ["point", "singular"]), 0
    return _json({"schema": SCHEMA_VERSION, "field": curve.ctx.spec, "count": len(rows),
                  "points": [{"point": p, "singular": bool(s)} for p, s in rows]}), 0


def cmd_special_lines(cfg: RunConfig) -> tuple[str, int]:
    curve, _ = build_curve(cfg)
    recs = scan_tangencies(curve, cfg.e)
    if cfg.fmt == "csv":
        rows = [[format_line(r.line), "+".join(r.kinds), " ".join(f"{format_point(P)}^{k}" for P, k in r.contacts)]
                for r in recs]
        return _csv(rows, ["line", "kinds", "contacts"]), 0
    return _json({
        "schema": SCHEMA_VERSION,
        "field": curve.ctx.spec,
        "ext_degree": cfg.e,
        "lines": [{"line": format_line(r.line), "kinds": list(r.kinds),
                   "contacts": [[format_point(P), k] for P, k in r.contacts]} for r in recs],
    }), 0


def cmd_complete(cfg: RunConfig) -> tuple[str, int]:
    curve, fam = build_curve(cfg)
    policy = CompletionPolicy(fallback=cfg.fallback, debug_checks=cfg.debug_checks)
    report = complete_arc(curve, cfg.m, cfg.e, policy, family=fam)
    if cfg.fmt == "csv":
        return "".join(format_point(P) + "\n" for P in report.points()), 0
    return report.to_json(), 0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    ctx = _field(cfg)
    pts = ingest_points(cfg.arc, ctx)
    verdict = is_m_arc(pts, cfg.m, ctx)
    out = {"schema": SCHEMA_VERSION, "field": ctx.spec, "m": cfg.m, "size": len(pts), "arc": verdict.status}
    if verdict.status == "violation":
        out["witness"] = {"line": format_line(verdict.line), "count": verdict.count}
        return _json(out), 1
    comp = is_complete(pts, cfg.m, ctx)
    out["complete"] = comp.complete
    out["uncovered"] = [format_point(P) for P in comp.uncovered]
    counts = census(pts, ctx)
    out["census"] = {str(k): int((counts == k).sum()) for k in range(int(counts.max()) + 1)}
    ok = verdict.valid and comp.complete
    return _json(out), 0 if ok else 1


def cmd_family(cfg: RunConfig) -> tuple[str, int]:
    ctx = _field(cfg)
    f = parse_unipoly(ctx, cfg.f)
    if cfg.family == "artin_schreier":
        _, spec = artin_schreier(ctx, f)
    elif cfg.family in ("hyperelliptic", "hyperelliptic_twist"):
        xi = ctx.parse(cfg.xi) if cfg.xi else None
        _, spec = hyperelliptic(ctx, f, xi)
    else:
        raise InputError(f"unknown family {cfg.family!r}")
    return _json(spec.to_dict()), 0 if spec.admissible else 1


def cmd_code(cfg: RunConfig) -> tuple[str, int]:
    ctx = _field(cfg)
    return format_code(code_from_arc(ingest_points(cfg.arc, ctx))), 0


def cmd_census(cfg: RunConfig) -> tuple[str, int]:
    ctx = _field(cfg)
    pts = ingest_points(cfg.arc, ctx)
    counts = census(pts, ctx)
    pl = plane_of(ctx)
    if cfg.fmt == "csv":
        return _csv([[format_line(pl.line(j)), int(c)] for j, c in enumerate(counts)], ["line", "count"]), 0
    return _json({"schema": SCHEMA_VERSION, "field": ctx.spec, "size": len(pts),
                  "counts": [int(c) for c in counts]}), 0


HANDLERS = {
    "points": cmd_points,
    "special-lines": cmd_special_lines,
    "complete": cmd_complete,
    "verify": cmd_verify,
    "family": cmd_family,
    "code": cmd_code,
    "census": cmd_census,
}


def _destination(cfg: RunConfig) -> Path | None:
    if cfg.out:
        return Path(cfg.out)
    base = os.environ.get(OUT_DIR_ENV)
    if base:
        ext = "txt" if cfg.command == "code" else cfg.fmt
        return Path(base) / f"{cfg.command}.{ext}"
    return None


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    t0 = time.perf_counter()
    try:
        cfg.validate()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            text, status = HANDLERS[cfg.command](cfg)
        for w in caught:
            print(f"warning: {w.message}", file=stderr)
    except ArcPropertyError as exc:
        print(f"error: {exc}", file=stderr)
        if exc.line is not None:
            print(f"witness: {format_line(exc.line)} carries {exc.count} points", file=stderr)
        return 1
    except (CompletionError, VerificationFailure) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except InvariantBreach as exc:
        print(f"internal error: {exc}", file=stderr)
        return 3
    except (InputError, FieldError, CurveError, FamilyError, CodeError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=stderr)
        return 2
    dest = _destination(cfg)
    if dest is None:
        stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
        meta = {"schema": SCHEMA_VERSION, "command": cfg.command, "seconds": round(time.perf_counter() - t0, 4)}
        dest.with_name(dest.name + ".meta.json").write_text(_json(meta))
        print(f"wrote {dest}", file=stderr)
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvearcs", description="Complete m-arcs from plane curves over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field spec: q, p^k or p^k/c0,c1,..")
    common.add_argument("--out", help="output file")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    curve = argparse.ArgumentParser(add_help=False)
    curve.add_argument("--curve", dest="curve_file", help="curve spec file")
    curve.add_argument("--family", choices=KINDS)
    curve.add_argument("--f", help='polynomial in x, e.g. "x^3+1"')
    curve.add_argument("--xi", help="twist scalar")
    curve.add_argument("--g", help='affine sparse polynomial "c:i,j;..."')
    curve.add_argument("--m", type=int)
    curve.add_argument("--e", type=int, default=1, help="extension degree for tangency scans")

    sub.add_parser("points", parents=[common, curve], help="rational points of a curve")
    sub.add_parser("special-lines", parents=[common, curve], help="bitangents and inflection tangents")
    c = sub.add_parser("complete", parents=[common, curve], help="complete the curve's points to an m-arc")
    c.add_argument("--no-fallback", dest="fallback", action="store_false")
    c.add_argument("--debug-checks", action="store_true")

    for name, hlp in (("verify", "arc and completeness verdict"), ("code", "[k,3,d]_q code"), ("census", "line counts")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--arc", required=True, help="point file, one x0:x1:x2 per line")
        if name == "verify":
            p.add_argument("--m", type=int, required=True)

    fam = sub.add_parser("family", parents=[common], help="family hypothesis checklist")
    fam.add_argument("--kind", dest="family", choices=KINDS, required=True)
    fam.add_argument("--f", required=True)
    fam.add_argument("--xi")
    return ap


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
