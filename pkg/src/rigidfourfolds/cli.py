"""Command-line front end: run a pipeline stage, print its tables, check them against the golden data.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from . import expected as X
from .eisenstein import format_point, pretty_point
from .lattice import (
    HEIS_KERNELS, TABLE_ORDER, Kernel, enumerate_kernels, heis_invariant_kernels, mu_signature,
    resolve_kernel, table_kernel,
)
from .verification import CRITERIA, check

GROUP_TAGS = ("z3z3", "heis3")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    kernel: str | None = None
    equivalence: str = "bihol"
    format: str = "text"
    mode: str = "normalized"
    jobs: int = 1
    out: str | None = None
    criteria: tuple = ()

    def inputs(self) -> dict:
        d = {"group": self.group, "kernel": self.kernel, "equivalence": self.equivalence,
             "mode": self.mode}
        if self.criteria:
            d["criteria"] = list(self.criteria)
        return d


@dataclass
class Table:
    id: str
    columns: list
    rows: list

    def as_dict(self) -> dict:
        return {"id": self.id, "columns": self.columns, "rows": self.rows}


@dataclass
class Report:
    command: str
    inputs: dict
    tables: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs,
                "tables": [t.as_dict() for t in self.tables],
                "checks": [c.as_dict() for c in self.checks]}


# --- rendering ---------------------------------------------------------------------

class Vec(tuple):
    """A vector of torsion points: aliases in text and CSV, serial strings in JSON."""

    def pretty(self) -> str:
        return "(" + ",".join(pretty_point(c) for c in self) + ")"

    def serial(self) -> list:
        return [format_point(c) for c in self]


def _json_default(v):
    return v.serial() if isinstance(v, Vec) else str(v)


def _cell(v: Any) -> str:
    if isinstance(v, Vec):
        return v.pretty()
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True, default=str)
    return str(v)


def render_text(rep: Report) -> str:
    out = []
    for t in rep.tables:
        rows = [[_cell(v) for v in r] for r in t.rows]
        widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(t.columns)]
        out.append(f"== {t.id}")
        out.append("  ".join(c.ljust(w) for c, w in zip(t.columns, widths)).rstrip())
        for r in rows:
            out.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        out.append("")
    for c in rep.checks:
        line = f"{'PASS' if c.passed else 'FAIL'} {c.id}"
        if not c.passed:
            line += f"  expected={_cell(c.expected)}  actual={_cell(c.actual)}"
        out.append(line)
    if rep.checks:
        bad = sum(not c.passed for c in rep.checks)
        out.append(f"{len(rep.checks) - bad}/{len(rep.checks)} checks passed")
    return "\n".join(out) + "\n"


def render_json(rep: Report) -> str:
    d = rep.as_dict()
    for t in d["tables"]:
        t["rows"] = [[c.serial() if isinstance(c, Vec) else c for c in r] for r in t["rows"]]
    return json.dumps(d, indent=2, default=_json_default) + "\n"


def render_csv(rep: Report) -> str:
    tables = list(rep.tables)
    if rep.checks:
        tables.append(Table("checks", ["id", "expected", "actual", "pass"],
                            [[c.id, c.expected, c.actual, c.passed] for c in rep.checks]))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, t in enumerate(tables):
        if len(tables) > 1:
            if i:
                w.writerow([])
            w.writerow([f"# {t.id}"])
        w.writerow(t.columns)
        for r in t.rows:
            w.writerow([_cell(v) for v in r])
    return buf.getvalue()


RENDERERS = {"text": render_text, "json": render_json, "csv": render_csv}


# --- helpers -----------------------------------------------------------------------

def _vec(p) -> Vec:
    return Vec(p)


def _tag(cfg: RunConfig, default: str = "z3z3") -> str:
    g = (cfg.group or default).lower()
    if g not in GROUP_TAGS:
        raise UsageError(f"--group must be one of {', '.join(GROUP_TAGS)} for {cfg.command}")
    return g


def _kernels(cfg: RunConfig, tag: str) -> list[Kernel]:
    if cfg.kernel:
        try:
            return [_named(resolve_kernel(cfg.kernel), tag)]
        except (ValueError, KeyError) as e:
            raise UsageError(f"bad --kernel {cfg.kernel!r}: {e}") from None
    return [table_kernel(l) for l in _labels(tag)]


def _labels(tag: str) -> tuple:
    return TABLE_ORDER if tag == "z3z3" else tuple(HEIS_KERNELS)


def _named(K: Kernel, tag: str) -> Kernel:
    """K carrying the label it has in the tables for ``tag`` (L1 and K3 coincide as subgroups)."""
    for l in _labels(tag):
        if table_kernel(l) == K:
            return K.relabel(l)
    return K.relabel("")


def _pmap(fn, items, jobs: int) -> list:
    """Order-preserving map, in worker processes when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _label(K: Kernel) -> str:
    return K.label or str(K)


# --- commands ----------------------------------------------------------------------

def _catalog_lookup(name: str):
    from .groups import make_catalog
    alias = {"z3z3": "Z3xZ3", "heis3": "Heis3"}
    want = alias.get(name.lower(), name).lower()
    for G in make_catalog():
        if G.name.lower() == want:
            return [G]
    raise UsageError(f"{name!r} is not in the screening catalog")


def cmd_screen(cfg: RunConfig) -> Report:
    from .characters import screen
    from .groups import make_catalog
    groups = _catalog_lookup(cfg.group) if cfg.group else make_catalog()
    rep = Report("screen", cfg.inputs())
    rows = []
    for G in groups:
        r = screen(G)
        witness = " + ".join(r.witnesses[0]) if r.witnesses else ""
        rows.append([G.name, G.order, r.passed, witness, ",".join(r.closest_failure)])
        rep.checks.append(check(f"screening.{G.name}.passes", G.name in X.SCREEN_PASSING, r.passed))
    rep.tables.append(Table("screening", ["group", "order", "passes", "witness", "violated"], rows))
    return rep


def _free_count_row(args) -> list:
    from .actions import distinct_maps, free_actions
    tag, K, mode = args
    acts = free_actions(tag, K, mode)
    return [len(acts), distinct_maps(list(acts))]


def cmd_kernels(cfg: RunConfig) -> Report:
    tag = _tag(cfg)
    rep = Report("kernels", cfg.inputs())
    if tag == "z3z3":
        from .verification import table_orbits
        orbits = table_orbits()
        names = {table_kernel(l).key: l for l in TABLE_ORDER}
        rows = []
        for i, orb in enumerate(orbits):
            label = next((names[K.key] for K in orb if K.key in names), "")
            rows.append([i, label, len(orb), orb[0].order, list(mu_signature(orb[0])), str(orb[0])])
        rep.tables.append(Table("kernel_orbits", ["orbit", "label", "size", "order", "mu", "canonical"], rows))
        rep.checks.append(check("kernels.admissible", X.KERNEL_COUNTS["admissible"], len(enumerate_kernels())))
        rep.checks.append(check("kernels.orbits", X.KERNEL_COUNTS["orbits"], len(orbits)))
        return rep
    stable = [_named(K, tag) for K in heis_invariant_kernels()]
    counts = _pmap(_free_count_row, [(tag, K, cfg.mode) for K in stable], cfg.jobs)
    rows = [[_label(K), K.order, list(mu_signature(K)), n, d] for K, (n, d) in zip(stable, counts)]
    rep.tables.append(Table("heis_stable_kernels",
                            ["kernel", "order", "mu", "free_actions", "distinct_maps"], rows))
    rep.checks.append(check("kernels.heis_stable", X.KERNEL_COUNTS["heis_stable"], len(stable)))
    if cfg.mode == "exhaustive":
        free = sorted(_label(K) for K, (n, _) in zip(stable, counts) if n)
        rep.checks.append(check("kernels.heis_free", sorted(X.HEIS_FREE_LATTICES), free))
    return rep


def _expected_free(tag: str, label: str, mode: str):
    if tag == "z3z3" and label in X.Z32_TABLE:
        return X.Z32_TABLE[label][0]
    if tag == "heis3" and label in X.HEIS_FREE_NORMALIZED and mode == "normalized":
        return X.HEIS_FREE_NORMALIZED[label]
    return None


def cmd_actions(cfg: RunConfig) -> Report:
    from .actions import free_actions, holonomy, reduced_tau
    tag = _tag(cfg)
    kernels = _kernels(cfg, tag)
    rep = Report("actions", cfg.inputs())
    counts = _pmap(_free_count_row, [(tag, K, cfg.mode) for K in kernels], cfg.jobs)
    rep.tables.append(Table("free_actions", ["kernel", "free_actions", "distinct_maps"],
                            [[_label(K), n, d] for K, (n, d) in zip(kernels, counts)]))
    for K, (n, _) in zip(kernels, counts):
        want = _expected_free(tag, K.label, cfg.mode)
        if want is not None:
            rep.checks.append(check(f"z3z3_table.{K.label}.free_actions" if tag == "z3z3"
                                    else f"heis3.{K.label}.free_actions", want, n))
    if cfg.kernel:
        names = holonomy(tag).gen_names
        K = kernels[0]
        rows = [[i] + [_vec(v) for v in reduced_tau(a)] for i, a in enumerate(free_actions(tag, K, cfg.mode))]
        rep.tables.append(Table(f"actions.{_label(K)}", ["#"] + [f"tau({n})" for n in names], rows))
    return rep


def _class_rows(args) -> list:
    from .normalizers import special_classes
    tag, K, mode = args
    return [(c.class_id, len(c.members), c.cocycle) for c in special_classes(K, tag, mode)]


def cmd_classes(cfg: RunConfig) -> Report:
    from .actions import holonomy
    tag = _tag(cfg)
    kernels = _kernels(cfg, tag)
    rep = Report("classes", cfg.inputs())
    per = _pmap(_class_rows, [(tag, K, cfg.mode) for K in kernels], cfg.jobs)
    rep.tables.append(Table("special_classes", ["kernel", "classes"],
                            [[_label(K), len(rows)] for K, rows in zip(kernels, per)]))
    names = holonomy(tag).gen_names
    detail = [[_label(K), cid, size] + [_vec(v) for v in tau]
              for K, rows in zip(kernels, per) for cid, size, tau in rows]
    rep.tables.append(Table("class_representatives",
                            ["kernel", "class", "members"] + [f"tau({n})" for n in names], detail))
    for K, rows in zip(kernels, per):
        if tag == "z3z3" and K.label in X.Z32_TABLE:
            rep.checks.append(check(f"z3z3_table.{K.label}.special_classes", X.Z32_TABLE[K.label][1], len(rows)))
        elif tag == "heis3" and K.label in X.HEIS_SPECIAL_CLASSES:
            rep.checks.append(check(f"heis3.{K.label}.special_classes", X.HEIS_SPECIAL_CLASSES[K.label], len(rows)))
    return rep


def cmd_classify(cfg: RunConfig) -> Report:
    from .actions import holonomy
    from .normalizers import classify
    tag = _tag(cfg)
    res = classify(tag, cfg.equivalence)
    rep = Report("classify", cfg.inputs())
    names = holonomy(tag).gen_names
    reps_at = {}
    for name, node in res.representatives.items():
        if node is not None:
            reps_at.setdefault(node, []).append(name)
    rows = []
    for i, grp in enumerate(res.merged):
        label, cid = grp[0]
        tau = res.classes[label][cid].cocycle
        matched = sorted(n for node in grp for n in reps_at.get(node, []))
        rows.append([i, " ".join(dict.fromkeys(l for l, _ in grp)), len(grp)]
                    + [_vec(v) for v in tau] + [",".join(matched)])
    rep.tables.append(Table(f"classes.{tag}.{cfg.equivalence}",
                            ["class", "kernels", "special_classes"] + [f"tau({n})" for n in names]
                            + ["representatives"], rows))
    trows = [[a, b, T.plus, T.minus] for (a, b), T in res.transporters.items() if T.size]
    rep.tables.append(Table("transporters", ["source", "target", "det_plus", "det_minus"], trows))
    rep.checks.append(check(f"class_counts.{tag}.{cfg.equivalence}", X.CLASS_COUNTS[(tag, cfg.equivalence)],
                            res.class_count))
    if tag == "z3z3" and cfg.equivalence == "diffeo":
        merges = [g for g in res.merged_kernels() if len(g) > 1]
        rep.checks.append(check("diffeo_merges", [list(m) for m in X.DIFFEO_MERGES], [list(m) for m in merges]))
        rep.checks.append(check("transporters", {f"{a}-{b}": list(v) for (a, b), v in X.TRANSPORTERS.items()},
                                {f"{a}-{b}": [p, m] for a, b, p, m in trows}))
    for name, node in res.representatives.items():
        rep.checks.append(check(f"representatives.{tag}.{name}", "in a special class",
                                "in a special class" if node else res.mismatches.get(name, "missing")))
    return rep


def cmd_hodge(cfg: RunConfig) -> Report:
    from .characters import hodge_numbers
    tags = [_tag(cfg)] if cfg.group else list(GROUP_TAGS)
    rep = Report("hodge", cfg.inputs())
    for tag in tags:
        d = hodge_numbers(tag)
        rep.tables.append(Table(f"hodge.{tag}", ["row", "values"],
                                [[i, " ".join(map(str, r))] for i, r in enumerate(d.rows())]))
        got = {k: d[(int(k[1]), int(k[2]))] for k in X.HODGE[tag]}
        rep.checks.append(check(f"hodge.{tag}", dict(X.HODGE[tag]), got))
    return rep


def cmd_verify(cfg: RunConfig) -> Report:
    rep = Report("verify", cfg.inputs())
    rows = []
    for n in cfg.criteria or tuple(CRITERIA):
        checks = CRITERIA[n]()
        rep.checks.extend(checks)
        rows.append([n, all(c.passed for c in checks), len(checks), sum(not c.passed for c in checks)])
    rep.tables.append(Table("criteria", ["criterion", "pass", "checks", "failed"], rows))
    return rep


COMMANDS = {
    "screen": cmd_screen, "kernels": cmd_kernels, "actions": cmd_actions, "classes": cmd_classes,
    "classify": cmd_classify, "hodge": cmd_hodge, "verify": cmd_verify,
}


# --- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="z3z3 or heis3 (screen also takes catalog names such as d4)")
    common.add_argument("--kernel", help="K1..K12, Kexc, L1, L2 or generators like '0,t,t,t;0,t,-t,0'")
    common.add_argument("--equivalence", choices=("bihol", "diffeo"), default="bihol")
    common.add_argument("--format", choices=tuple(RENDERERS), default="text")
    common.add_argument("--mode", choices=("normalized", "exhaustive"), default="normalized")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="write the report here instead of stdout")
    p = argparse.ArgumentParser(prog="rigidfourfolds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("--criterion", type=int, action="append", choices=tuple(CRITERIA),
                            help="run only these criteria (repeatable)")
    return p


def run(cfg: RunConfig) -> tuple[Report, str]:
    rep = COMMANDS[cfg.command](cfg)
    return rep, RENDERERS[cfg.format](rep)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    cfg = RunConfig(args.command, args.group, args.kernel, args.equivalence, args.format, args.mode,
                    args.jobs, args.out, tuple(sorted(set(getattr(args, "criterion", None) or ()))))
    try:
        rep, text = run(cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
