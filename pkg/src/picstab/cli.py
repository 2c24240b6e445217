"""Command-line front end: JSON problem descriptions in, reports out.

Exit codes: 0 success, 1 invalid input or computation error, 2 for a
mathematically honest "ambiguous extension" answer.  Machine reports are
deterministic: identical input files give byte-identical JSON.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import sys
from pathlib import Path

import click

from .abgrp import FgAbelian
from .exactlin import Fq, ZMatrix, det, factorize, fq_make, smith_normal_form
from .groups import FiniteGroup, build_group, mono_from_generator_images
from . import components as components_mod
from . import modrep, picard, treecalc
from .recipes import build_recipe, parse_recipe, recipe_to_str

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing


def parse_field(spec) -> Fq:
    if isinstance(spec, str):
        spec = spec.strip()
        if spec.upper().startswith("F"):
            q = int(spec[1:])
            fac = factorize(q)
            if len(fac) != 1:
                raise InputError(f"{q} is not a prime power")
            ((p, e),) = fac.items()
            return fq_make(p, e)
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "p" not in spec:
        raise InputError(f"bad field description {spec!r}")
    return fq_make(int(spec["p"]), int(spec.get("deg", 1)))


def parse_group(spec) -> FiniteGroup:
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            spec = json.loads(text)
        elif text.upper() == "Q8":
            spec = {"quaternion8": True}
        elif text.upper() in ("V4", "K4", "KLEIN4"):
            spec = {"klein4": True}
        elif text.upper().startswith("C") and text[1:].isdigit():
            spec = {"cyclic": int(text[1:])}
        else:
            raise InputError(f"unknown group shorthand {spec!r}")
    return build_group(spec)


def _parse_embed(embed, edge: FiniteGroup, target: FiniteGroup):
    if embed in ("id", {"id": True}):
        if edge != target:
            raise InputError("identity embedding needs edge group equal to vertex group")
        from .groups import identity_mono

        return identity_mono(target)
    if isinstance(embed, dict) and "gen_to" in embed:
        words = embed["gen_to"]
    else:
        words = embed
    if isinstance(words, str):
        words = [words]
    return mono_from_generator_images(edge, target, list(words))


def _parse_vertex(spec):
    if isinstance(spec, dict) and "free_product" in spec:
        parts = tuple(parse_group(s) for s in spec["free_product"])
        return treecalc.ProfileVertex(parts)
    return treecalc.FiniteVertex(parse_group(spec))


def parse_construction(cons: dict):
    """Returns ('gog', GraphOfGroups), ('profile', name, group), or ('group', g)."""
    if "profile" in cons:
        return ("profile", cons["profile"], parse_group(cons["of"]))
    if "group" in cons:
        return ("group", parse_group(cons["group"]))
    kind = cons.get("type")
    if kind == "amalgam":
        left = parse_group(cons["left"])
        right = parse_group(cons["right"])
        edge = parse_group(cons["edge"])
        gog = treecalc.amalgam(
            left,
            right,
            edge,
            _parse_embed(cons["embed_left"], edge, left),
            _parse_embed(cons["embed_right"], edge, right),
        )
        return ("gog", gog)
    if kind == "hnn":
        vertex = _parse_vertex(cons["vertex"])
        if isinstance(vertex, treecalc.ProfileVertex):
            if cons.get("embed_initial", "id") != "id" or cons.get("embed_terminal", "id") != "id":
                raise InputError("profile vertices support only identity embeddings")
            return ("gog", treecalc.z_times(vertex))
        edge = parse_group(cons["edge"])
        gog = treecalc.hnn(
            vertex.group,
            edge,
            _parse_embed(cons["embed_initial"], edge, vertex.group),
            _parse_embed(cons["embed_terminal"], edge, vertex.group),
        )
        return ("gog", gog)
    if kind == "free_product":
        groups = [parse_group(s) for s in cons["factors"]]
        return ("gog", treecalc.free_product(groups))
    if kind == "graph":
        vertices = tuple(_parse_vertex(v) for v in cons["vertices"])
        edges = []
        for e in cons["edges"]:
            if e.get("edge") == "id" or e.get("identity"):
                edges.append(treecalc.Edge(None, int(e["from"]), int(e["to"]), None, None))
                continue
            edge = parse_group(e["edge"])
            iv, tv = int(e["from"]), int(e["to"])
            edges.append(
                treecalc.Edge(
                    edge,
                    iv,
                    tv,
                    _parse_embed(e["embed_from"], edge, vertices[iv].group),
                    _parse_embed(e["embed_to"], edge, vertices[tv].group),
                )
            )
        tree = tuple(int(i) for i in cons.get("tree_edges", ()))
        return ("gog", treecalc.GraphOfGroups(vertices, tuple(edges), tree))
    raise InputError(f"unknown construction {cons!r}")


def _load_input(path: str) -> tuple[dict, str]:
    raw = Path(path).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as ex:
        raise InputError(f"{path}: not valid JSON ({ex})") from None
    if not isinstance(data, dict) or data.get("schema") != SCHEMA_VERSION:
        raise InputError(f'{path}: expected an object with "schema": {SCHEMA_VERSION}')
    return data, digest


# ---------------------------------------------------------------------------
# reports


def _structure_json(s: FgAbelian) -> dict:
    out = s.to_json()
    out["pretty"] = str(s)
    return out


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = [f"picstab {report.get('command', '?')} report"]

    def walk(obj, indent=1):
        pad = "  " * indent
        if isinstance(obj, dict):
            for key in sorted(obj):
                val = obj[key]
                if isinstance(val, (dict, list)):
                    lines.append(f"{pad}{key}:")
                    walk(val, indent + 1)
                else:
                    lines.append(f"{pad}{key}: {val}")
        elif isinstance(obj, list):
            for val in obj:
                if isinstance(val, (dict, list)):
                    walk(val, indent)
                else:
                    lines.append(f"{pad}- {val}")

    walk({k: v for k, v in report.items() if k != "command"})
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, out: str | None) -> None:
    text = render_json(report) if fmt == "json" else render_text(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _verify_groups(groups, field) -> None:
    for g in groups:
        result = picard.verify_registry(g, field)
        if not result["ok"]:
            raise InputError(f"registry self-verification failed for {result['group']}")


# ---------------------------------------------------------------------------
# compute-t


def _evaluate_compute_t(path: str, verify: bool) -> tuple[dict, int]:
    data, digest = _load_input(path)
    field = parse_field(data["field"])
    kind, *rest = parse_construction(data["construction"])
    report = {
        "schema": SCHEMA_VERSION,
        "command": "compute-t",
        "input_sha256": digest,
        "field": {"p": field.p, "deg": field.e},
        "construction": data["construction"],
    }
    if kind == "profile":
        name, group = rest
        if verify:
            _verify_groups([group], field)
        t, aut = picard.infinite_profile(name, group, field)
        report["result"] = {"ambiguous": False, **_structure_json(t.structure)}
        report["profile"] = t.to_json()
        report["stable_aut"] = aut.to_json()
        return report, 0
    if kind == "group":
        raise InputError("compute-t expects a graph-of-groups construction or a profile")
    (gog,) = rest
    if verify:
        finite_groups = [v.group for v in gog.vertices if isinstance(v, treecalc.FiniteVertex)]
        finite_groups += [e.group for e in gog.edges if e.group is not None]
        _verify_groups(finite_groups, field)
    result = treecalc.compute_t(gog, field)
    if result.is_ambiguous:
        report["result"] = {
            "ambiguous": True,
            "sub": _structure_json(result.answer.sub),
            "quot": _structure_json(result.answer.quot),
        }
    else:
        report["result"] = {"ambiguous": False, **_structure_json(result.answer)}
    report["sequence"] = {
        "scalar_automorphism_cokernel": _structure_json(result.sub),
        "vertex_restriction_kernel": _structure_json(result.quot),
        "rule": result.rule,
    }
    report["provenance"] = result.provenance
    return report, 2 if result.is_ambiguous else 0


def _evaluate_compute_t_entry(args) -> tuple[str, dict | None, str | None, int]:
    path, verify = args
    try:
        report, code = _evaluate_compute_t(path, verify)
        return path, report, None, code
    except Exception as ex:  # noqa: BLE001 - converted to exit code 1 per contract
        return path, None, f"{type(ex).__name__}: {ex}", 1


@click.group()
def main() -> None:
    """Picard groups of stable module categories, by exact arithmetic."""


@main.command("compute-t")
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", default=None, help="Write the report here (single input only).")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--jobs", default=1, show_default=True, help="Evaluate input files concurrently.")
@click.option("--verify", is_flag=True, help="Run registry self-verification first.")
def cmd_compute_t(inputs, out, fmt, jobs, verify) -> None:
    """Compute T(G) for the graph of groups described in each INPUT file."""
    if out and len(inputs) > 1:
        raise click.UsageError("--out supports a single input file")
    worklist = [(path, verify) for path in inputs]
    if jobs > 1 and len(inputs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_compute_t_entry, worklist))
    else:
        results = [_evaluate_compute_t_entry(w) for w in worklist]
    exit_code = 0
    for path, report, error, code in results:
        if error is not None:
            click.echo(f"{path}: {error}", err=True)
            exit_code = 1
        else:
            _emit(report, fmt, out)
            if code == 2 and exit_code == 0:
                exit_code = 2
    sys.exit(exit_code)


@main.command("endotrivial")
@click.argument("group")
@click.argument("field")
@click.argument("recipe")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--verify", is_flag=True)
def cmd_endotrivial(group, field, recipe, out, fmt, verify) -> None:
    """Decide whether the module given by RECIPE is endotrivial."""
    try:
        g = parse_group(group)
        k = parse_field(field)
        ast = parse_recipe(recipe)
        if verify:
            _verify_groups([g], k)
        mod = build_recipe(g, k, ast)
        answer = modrep.is_endotrivial(mod)
    except Exception as ex:  # noqa: BLE001
        click.echo(f"{type(ex).__name__}: {ex}", err=True)
        sys.exit(1)
    report = {
        "schema": SCHEMA_VERSION,
        "command": "endotrivial",
        "input_sha256": _args_digest(group, field, recipe),
        "group": g.name,
        "field": {"p": k.p, "deg": k.e},
        "recipe": recipe_to_str(ast),
        "dimension": mod.dim,
        "endotrivial": bool(answer),
    }
    _emit(report, fmt, out)


def _args_digest(*args: str) -> str:
    return hashlib.sha256("\x1f".join(args).encode()).hexdigest()


@main.command("stable-end")
@click.argument("group")
@click.argument("field")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_stable_end(group, field, out, fmt) -> None:
    """Idempotent decomposition of the stable endomorphisms of k."""
    try:
        g = parse_group(group)
        k = parse_field(field)
        factors = components_mod.stable_end_decomposition(g, k)
        h0 = modrep.tate_h0(g, k)
    except Exception as ex:  # noqa: BLE001
        click.echo(f"{type(ex).__name__}: {ex}", err=True)
        sys.exit(1)
    report = {
        "schema": SCHEMA_VERSION,
        "command": "stable-end",
        "input_sha256": _args_digest(group, field),
        "group": g.name,
        "field": {"p": k.p, "deg": k.e},
        "factor_count": len(factors),
        "factors": [f"F{f.q}" for f in factors],
        "ring": " x ".join(f"F{f.q}" for f in factors) or "0",
        "tate_h0_dim": h0.dim,
    }
    _emit(report, fmt, out)


@main.command("components")
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--p", "prime", required=True, type=int)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_components(input_file, prime, out, fmt) -> None:
    """Components of non-trivial p-subgroups for a group or graph of groups."""
    try:
        data, digest = _load_input(input_file)
        kind, *rest = parse_construction(data["construction"])
        if kind == "group":
            (g,) = rest
            pc = components_mod.p_components_finite(g, prime)
            detail = {
                "count": pc.count,
                "classes": [
                    {"orders": [s.order for s in cls], "size": len(cls)} for cls in pc.classes
                ],
                "components": [list(c) for c in pc.components],
            }
            count = pc.count
        elif kind == "gog":
            (gog,) = rest
            count = components_mod.p_components_graph(gog, prime)
            detail = {"count": count}
        else:
            raise InputError("components needs a finite group or a graph of finite groups")
    except Exception as ex:  # noqa: BLE001
        click.echo(f"{type(ex).__name__}: {ex}", err=True)
        sys.exit(1)
    report = {
        "schema": SCHEMA_VERSION,
        "command": "components",
        "input_sha256": digest,
        "p": prime,
        **detail,
    }
    _emit(report, fmt, out)


@main.command("restrict-class")
@click.option("--group", required=True, help="The big group (JSON or shorthand).")
@click.option("--subgroup", required=True, help="The subgroup as a standalone group.")
@click.option("--embed", required=True, help="Generator images, e.g. \"g^2\" or \"x,y\".")
@click.option("--field", required=True)
@click.option("--module", "recipe", required=True, help="Module recipe over the big group.")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_restrict_class(group, subgroup, embed, field, recipe, out, fmt) -> None:
    """Restrict a module and identify its class in T(subgroup)."""
    try:
        g = parse_group(group)
        h = parse_group(subgroup)
        k = parse_field(field)
        words = [w.strip() for w in embed.split(",")]
        mono = mono_from_generator_images(h, g, words)
        ast = parse_recipe(recipe)
        mod = build_recipe(g, k, ast)
        tgd = picard.t_group(h, k)
        exps = tgd.identify(modrep.restrict(mod, mono))
    except Exception as ex:  # noqa: BLE001
        click.echo(f"{type(ex).__name__}: {ex}", err=True)
        sys.exit(1)
    report = {
        "schema": SCHEMA_VERSION,
        "command": "restrict-class",
        "input_sha256": _args_digest(group, subgroup, embed, field, recipe),
        "group": g.name,
        "subgroup": h.name,
        "field": {"p": k.p, "deg": k.e},
        "recipe": recipe_to_str(ast),
        "t_subgroup": _structure_json(tgd.structure),
        "class_exponents": list(exps),
        "generators": [t.label for t in tgd.gens],
        "is_trivial_class": not any(exps),
    }
    _emit(report, fmt, out)


@main.command("snf")
@click.argument("matrix_file", type=click.Path(exists=True))
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_snf(matrix_file, out, fmt) -> None:
    """Smith normal form of an integer matrix given as {"matrix": [[...]]}."""
    try:
        raw = Path(matrix_file).read_bytes()
        data = json.loads(raw)
        m = ZMatrix(data["matrix"])
        u, d, v = smith_normal_form(m)
        ok = (u @ m @ v) == d
    except Exception as ex:  # noqa: BLE001
        click.echo(f"{type(ex).__name__}: {ex}", err=True)
        sys.exit(1)
    diag = [int(x) for x in d.diagonal_entries()]
    report = {
        "schema": SCHEMA_VERSION,
        "command": "snf",
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "U": u.to_lists(),
        "D": d.to_lists(),
        "V": v.to_lists(),
        "diagonal": diag,
        "checks": {
            "u_m_v_equals_d": bool(ok),
            "det_u": det(u),
            "det_v": det(v),
            "divisibility_chain": all(
                diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i]
            ),
        },
    }
    _emit(report, fmt, out)


@main.command("verify")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cmd_verify(out, fmt) -> None:
    """Self-verify every built-in registry entry."""
    reports = [picard.verify_registry(g, f) for g, f in picard.BUILTIN_PAIRS]
    ok = all(r["ok"] for r in reports)
    report = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "ok": ok,
        "entries": reports,
    }
    _emit(report, fmt, out)
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
