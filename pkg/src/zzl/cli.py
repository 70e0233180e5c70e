"""Command-line front end.

Subcommands cover every engine capability: `check` validates a `.zzl`
file, `dual` / `ext-class` / `assemble` / `gluing` / `skeleton` run the
corresponding operations on named document items, `tables` rebuilds the
built-in reference tables from the constructors and verifies every row,
and `wfilt` / `nlog` / `pl` expose the monodromy formulas.

Exit codes: 0 on success, 1 when a validation or check fails, 2 on
parse or usage errors.  JSON output is canonical (sorted keys) and
byte-stable across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import lang
from .assembly import (
    Check,
    NodeDatum,
    Report,
    assemble,
    global_shadow,
    verify_gluing,
    verify_shadow_compat,
)
from .extension import (
    extension_class,
    make_extension,
    ext_isomorphic,
    is_self_dual,
    total_zigzag,
)
from .linalg import (
    QMatrix,
    block_assemble,
    format_rational,
    serialize_matrix,
)
from .monodromy import (
    NotNilpotent,
    NotUnipotent,
    NilpotentOperator,
    Pairing,
    nilpotent_log,
    pl_transform,
    weight_filtration,
)
from .skeleton import skeleton_of, to_dot, to_json as skeleton_json
from .zigzag import (
    MultiZigZag,
    ZigZag,
    compressed_shape,
    direct_sum,
    dualize,
    is_isomorphic,
    std_corrected,
    std_ic,
    std_skyscraper,
    validate,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    payload: str


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        raise _UsageError(f"{self.format_usage()}error: {message}")


def _json_dump(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _matrix_payload(m: QMatrix) -> list[list[str]]:
    return [[format_rational(x) for x in m.row(i)] for i in range(m.rows)]


def _space_name(n: int) -> str:
    if n == 0:
        return "0"
    return "Q" if n == 1 else f"Q^{n}"


def _map_name(m: QMatrix) -> str:
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return "0"
    if m == QMatrix.identity(m.rows):
        return "id"
    return serialize_matrix(m)


def _zigzag_tuple(z: ZigZag) -> str:
    return (
        f"({z.open_label}, {_space_name(z.a_dim)}, {_space_name(z.b_dim)}, "
        f"{_map_name(z.alpha)}, {_map_name(z.beta)}, {_map_name(z.gamma)})"
    )


def _zigzag_payload(z: ZigZag) -> dict:
    return {
        "open": z.open_label,
        "eminus": z.e_minus,
        "ezero": z.e_zero,
        "A": z.a_dim,
        "B": z.b_dim,
        "alpha": _matrix_payload(z.alpha),
        "beta": _matrix_payload(z.beta),
        "gamma": _matrix_payload(z.gamma),
    }


def _render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(report.to_payload())
    lines = []
    for check in report.checks:
        mark = "PASS" if check.passed else "FAIL"
        lines.append(f"[{mark}] {check.name}: {check.detail}")
    for notice in report.notices:
        lines.append(f"notice: {notice}")
    lines.append(f"status: {report.status}")
    return "\n".join(lines) + "\n"


def _render_diagnostics(diags: list[lang.Diagnostic], fmt: str) -> str:
    if fmt == "json":
        return _json_dump(
            {
                "status": "parse-error",
                "diagnostics": [
                    {
                        "severity": d.severity,
                        "code": d.code,
                        "message": d.message,
                        "line": d.line,
                        "column": d.column,
                    }
                    for d in diags
                ],
            }
        )
    return "\n".join(d.render() for d in diags) + "\n"


def _load_document(path: str) -> lang.Document | list[lang.Diagnostic]:
    with open(path, "rb") as handle:
        text = handle.read().decode("latin-1")
    return lang.parse(text)


def _named_item(document: lang.Document, table: dict, kind: str, name: str):
    if name not in table:
        raise _UsageError(f"error: no {kind} named {name!r} in the document")
    return table[name]


# -- subcommand handlers -----------------------------------------------


def _cmd_check(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    checks: list[Check] = []
    notices: list[str] = []
    for name, item in sorted(document.zigzags.items()):
        issues = validate(item.zigzag)
        if issues:
            for issue in issues:
                checks.append(
                    Check(f"zigzag {name}: exactness at {issue.position}", False, issue.message)
                )
        else:
            checks.append(Check(f"zigzag {name}: exactness", True, "exact at A and B"))
    for name in sorted(document.extensions):
        try:
            pres = document.build_extension(name)
            cls = extension_class(pres)
            checks.append(
                Check(
                    f"extension {name}: total and class",
                    True,
                    f"class {format_rational(cls.value)} "
                    f"(normalized {format_rational(cls.normalized)})",
                )
            )
        except ValueError as exc:
            checks.append(Check(f"extension {name}: total and class", False, str(exc)))
    for name in sorted(document.gluings):
        report = verify_gluing(document.build_gluing(name))
        for check in report.checks:
            checks.append(Check(f"gluing {name}: {check.name}", check.passed, check.detail))
        notices.extend(f"gluing {name}: {n}" for n in report.notices)
    nodes = document.nodes_item
    if nodes is not None:
        try:
            datum = _assemble_from_document(document)
            report = verify_shadow_compat(datum)
            for check in report.checks:
                checks.append(Check(f"nodes: {check.name}", check.passed, check.detail))
        except ValueError as exc:
            checks.append(Check("nodes: assembly", False, str(exc)))
    report = Report(tuple(checks), tuple(notices))
    code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    return CommandResult(code, _render_report(report, ns.format))


def _cmd_dual(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    item = _named_item(document, document.zigzags, "zigzag", ns.name)
    dual = dualize(item.zigzag)
    if ns.format == "json":
        return CommandResult(EXIT_OK, _json_dump({ns.name: _zigzag_payload(dual)}))
    stanza = lang._serialize_item(lang.ZigZagItem(ns.name, dual))
    return CommandResult(EXIT_OK, stanza + "\n")


def _cmd_ext_class(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    _named_item(document, document.extensions, "extension", ns.name)
    try:
        pres = document.build_extension(ns.name)
        cls = extension_class(pres)
    except ValueError as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"extension {ns.name}: {exc}\n")
    if ns.format == "json":
        payload = {
            "extension": ns.name,
            "value": format_rational(cls.value),
            "normalized": format_rational(cls.normalized),
            "split": cls.normalized == 0,
        }
        return CommandResult(EXIT_OK, _json_dump(payload))
    kind = "split" if cls.normalized == 0 else "non-split"
    return CommandResult(
        EXIT_OK,
        f"extension {ns.name}: class {format_rational(cls.value)}, "
        f"normalized {format_rational(cls.normalized)} ({kind})\n",
    )


def _assemble_from_document(document: lang.Document):
    nodes_item = document.nodes_item
    if nodes_item is None:
        raise ValueError("document has no nodes block")
    node_data = []
    sub_shapes = set()
    for name in nodes_item.names:
        pres = document.build_extension(name)
        sub_shapes.add((pres.sub.open_label, pres.sub.e_minus, pres.sub.e_zero))
        node_data.append(NodeDatum(name, pres))
    if len(sub_shapes) != 1:
        raise ValueError(
            f"local extensions disagree on the bulk part: {sorted(sub_shapes)}"
        )
    bulk_label, e_minus, e_zero = next(iter(sub_shapes))
    return assemble(bulk_label, node_data, e_minus=e_minus, e_zero=e_zero)


def _cmd_assemble(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    try:
        datum = _assemble_from_document(document)
    except ValueError as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"assemble: {exc}\n")
    report = verify_shadow_compat(datum)
    shadow = global_shadow(datum)
    if ns.format == "json":
        payload = {
            "bulk": datum.bulk_label,
            "nodes": list(datum.node_labels),
            "classes": [format_rational(c) for c in shadow.class_vector],
            "total": _zigzag_payload(total_zigzag(shadow)),
            "report": report.to_payload(),
        }
        code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
        return CommandResult(code, _json_dump(payload))
    lines = [
        f"bulk: {datum.bulk_label}",
        f"nodes: {', '.join(datum.node_labels)}",
        "classes: "
        + ", ".join(
            f"{label}={format_rational(c)}"
            for label, c in zip(datum.node_labels, shadow.class_vector)
        ),
        f"shadow total: {_zigzag_tuple(total_zigzag(shadow))}",
        "",
    ]
    code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    return CommandResult(code, "\n".join(lines) + _render_report(report, "text"))


def _cmd_gluing(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    _named_item(document, document.gluings, "gluing", ns.name)
    report = verify_gluing(document.build_gluing(ns.name))
    code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
    return CommandResult(code, _render_report(report, ns.format))


def _cmd_skeleton(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, "text"))
    try:
        datum = _assemble_from_document(document)
    except ValueError as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"skeleton: {exc}\n")
    sk = skeleton_of(datum)
    if ns.format == "json":
        return CommandResult(EXIT_OK, skeleton_json(sk))
    return CommandResult(EXIT_OK, to_dot(sk))


def _table1_rows() -> list[tuple[str, ZigZag, str, bool]]:
    label = "Q_U[3]"
    ic = std_ic(label, 1, 1)
    sky = std_skyscraper(1)
    corrected = std_corrected(label, 1, 1)
    multi = MultiZigZag.skyscrapers(["p1", "p2", "p3"]).total()

    ic_ok = (
        not validate(ic)
        and ic.a_dim == 0 == ic.b_dim
        and is_isomorphic(dualize(ic), ic)
    )
    sky_ok = (
        not validate(sky)
        and sky.a_dim == sky.b_dim == 1
        and sky.beta == QMatrix.identity(1)
        and sky.alpha.is_zero() and sky.gamma.is_zero()
        and is_isomorphic(dualize(sky), sky)
    )
    corrected_pres = make_extension(ic, sky, 1)
    corrected_ok = (
        not validate(corrected)
        and corrected == total_zigzag(corrected_pres)
        and extension_class(corrected_pres).normalized == 1
        and is_isomorphic(dualize(corrected), corrected)
    )
    multi_ok = (
        not validate(multi)
        and multi == std_skyscraper(3)
        and multi == direct_sum(direct_sum(sky, sky), sky)
    )
    return [
        ("minimal extension", ic, "zero point terms", ic_ok),
        ("point-supported rank-one", sky, "self-dual skyscraper", sky_ok),
        ("corrected object", corrected, "distinguished non-split class", corrected_ok),
        ("3-node point sum", multi, "one rank-one summand per node", multi_ok),
    ]


def _table2_rows() -> list[tuple[str, str, str, bool]]:
    label = "Q_U[3]"
    ic = std_ic(label, 1, 1)
    sky = std_skyscraper(1)
    split = make_extension(ic, sky, 0)
    corrected = make_extension(ic, sky, 1)

    split_total = total_zigzag(split)
    split_ok = (
        extension_class(split).normalized == 0
        and is_isomorphic(split_total, direct_sum(ic, sky))
        and is_self_dual(split)
    )
    block_sub = std_corrected(label, 1, 1)
    u = QMatrix.from_rows([[1]])
    general = make_extension(block_sub, sky, u)
    general_ok = total_zigzag(general).beta == block_assemble(
        [[block_sub.beta, u], [None, sky.beta]], [1, 1], [1, 1]
    )
    corrected_ok = (
        extension_class(corrected).normalized == 1
        and compressed_shape(total_zigzag(corrected)) == compressed_shape(split_total)
        and not ext_isomorphic(corrected, split)
        and is_self_dual(corrected)
    )
    return [
        ("split extension", _zigzag_tuple(split_total), "trivial class", split_ok),
        (
            "general extension",
            "beta block [[beta, u], [0, 1]]",
            "class is u modulo im(beta)",
            general_ok,
        ),
        (
            "corrected non-split extension",
            _zigzag_tuple(total_zigzag(corrected)),
            "same compressed shape as split, class 1, self-dual",
            corrected_ok,
        ),
    ]


def _cmd_tables(ns: argparse.Namespace) -> CommandResult:
    t1 = _table1_rows()
    t2 = _table2_rows()
    all_ok = all(ok for *_, ok in t1) and all(ok for *_, ok in t2)
    if ns.format == "json":
        payload = {
            "table1": [
                {
                    "object": name,
                    "zigzag": _zigzag_tuple(z),
                    "comment": comment,
                    "verified": ok,
                }
                for name, z, comment, ok in t1
            ],
            "table2": [
                {"object": name, "zigzag": shown, "comment": comment, "verified": ok}
                for name, shown, comment, ok in t2
            ],
            "status": "pass" if all_ok else "fail",
        }
        return CommandResult(
            EXIT_OK if all_ok else EXIT_CHECK_FAILED, _json_dump(payload)
        )
    lines = ["Table 1: standard zig-zags (ordinary double point)"]
    for name, z, comment, ok in t1:
        mark = "VERIFIED" if ok else "FAILED"
        lines.append(f"  {name:<28} {_zigzag_tuple(z):<32} {comment:<36} {mark}")
    lines.append("Table 2: extension templates")
    for name, shown, comment, ok in t2:
        mark = "VERIFIED" if ok else "FAILED"
        lines.append(f"  {name:<28} {shown:<32} {comment:<46} {mark}")
    lines.append(f"status: {'pass' if all_ok else 'fail'}")
    return CommandResult(
        EXIT_OK if all_ok else EXIT_CHECK_FAILED, "\n".join(lines) + "\n"
    )


def _square_map(document: lang.Document, name: str) -> QMatrix:
    item = _named_item(document, document.maps, "map", name)
    if not item.matrix.is_square():
        raise ValueError(f"map {name!r} is not square")
    return item.matrix


def _cmd_wfilt(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    try:
        matrix = _square_map(document, ns.name)
        operator = NilpotentOperator(matrix)
    except (ValueError, NotNilpotent) as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"wfilt: {exc}\n")
    filtration = weight_filtration(operator, ns.center)
    steps = [
        {
            "weight": w,
            "dimension": sub.dim,
            "basis": _matrix_payload(sub.basis.transpose()),
        }
        for w, sub in filtration.steps
    ]
    if ns.format == "json":
        payload = {
            "map": ns.name,
            "center": ns.center,
            "steps": steps,
            "graded": {str(w): d for w, d in filtration.graded_dims().items()},
        }
        return CommandResult(EXIT_OK, _json_dump(payload))
    lines = [f"weight filtration of {ns.name} centered at {ns.center}"]
    for entry in steps:
        lines.append(f"  W_{entry['weight']}: dim {entry['dimension']}")
    graded = ", ".join(
        f"Gr_{w}={d}" for w, d in sorted(filtration.graded_dims().items())
    )
    lines.append(f"  graded dims: {graded}")
    return CommandResult(EXIT_OK, "\n".join(lines) + "\n")


def _cmd_nlog(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    try:
        matrix = _square_map(document, ns.name)
        logarithm = nilpotent_log(matrix)
    except (ValueError, NotUnipotent) as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"nlog: {exc}\n")
    if ns.format == "json":
        payload = {"map": ns.name, "log": _matrix_payload(logarithm.matrix)}
        return CommandResult(EXIT_OK, _json_dump(payload))
    return CommandResult(
        EXIT_OK, f"log {ns.name} = {serialize_matrix(logarithm.matrix)}\n"
    )


def _cmd_pl(ns: argparse.Namespace) -> CommandResult:
    document = _load_document(ns.file)
    if isinstance(document, list):
        return CommandResult(EXIT_USAGE, _render_diagnostics(document, ns.format))
    try:
        alpha_item = _named_item(document, document.maps, "map", ns.alpha)
        delta_item = _named_item(document, document.maps, "map", ns.delta)
        gram = _square_map(document, ns.pairing)
        if alpha_item.matrix.cols != 1 or delta_item.matrix.cols != 1:
            raise ValueError("--alpha and --delta must name column vectors (n x 1 maps)")
        pairing = Pairing(gram)
        alpha = alpha_item.matrix.col(0)
        delta = delta_item.matrix.col(0)
        image = pl_transform(alpha, delta, pairing)
    except ValueError as exc:
        return CommandResult(EXIT_CHECK_FAILED, f"pl: {exc}\n")
    if ns.format == "json":
        payload = {
            "alpha": [format_rational(x) for x in alpha],
            "delta": [format_rational(x) for x in delta],
            "pairing": ns.pairing,
            "skew": pairing.is_skew,
            "transformed": [format_rational(x) for x in image],
        }
        return CommandResult(EXIT_OK, _json_dump(payload))
    rendered = ", ".join(format_rational(x) for x in image)
    return CommandResult(EXIT_OK, f"T(alpha) = [{rendered}]\n")


# -- argument plumbing --------------------------------------------------


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="zzl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_format: bool = True) -> None:
        if with_format:
            p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None, help="write the payload to this path")

    p = sub.add_parser("check", help="parse and validate every item in a file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("dual", help="dualize a named zig-zag")
    p.add_argument("file")
    p.add_argument("name")
    common(p)
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("ext-class", help="extension class of a named extension")
    p.add_argument("file")
    p.add_argument("name")
    common(p)
    p.set_defaults(func=_cmd_ext_class)

    p = sub.add_parser("assemble", help="assemble the nodes block into the global shadow")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_assemble)

    p = sub.add_parser("gluing", help="verify a named gluing quadruple")
    p.add_argument("file")
    p.add_argument("name")
    common(p)
    p.set_defaults(func=_cmd_gluing)

    p = sub.add_parser("skeleton", help="export the combinatorial skeleton")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_skeleton)

    p = sub.add_parser("tables", help="rebuild and verify the reference tables")
    common(p)
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("wfilt", help="weight filtration of a named nilpotent map")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--center", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_wfilt)

    p = sub.add_parser("nlog", help="nilpotent logarithm of a named unipotent map")
    p.add_argument("file")
    p.add_argument("name")
    common(p)
    p.set_defaults(func=_cmd_nlog)

    p = sub.add_parser("pl", help="apply the vanishing-cycle reflection formula")
    p.add_argument("file")
    p.add_argument("--alpha", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--pairing", required=True)
    common(p)
    p.set_defaults(func=_cmd_pl)

    return parser


def run(argv: list[str]) -> CommandResult:
    """Execute one command; never raises for user-level failures."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        return CommandResult(EXIT_USAGE, str(exc) + "\n")
    try:
        return ns.func(ns)
    except _UsageError as exc:
        return CommandResult(EXIT_USAGE, str(exc) + "\n")
    except FileNotFoundError as exc:
        return CommandResult(EXIT_USAGE, f"error: {exc}\n")


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    result = run(args)
    out_path = None
    if "--out" in args:
        idx = args.index("--out")
        if idx + 1 < len(args):
            out_path = args[idx + 1]
    if result.exit_code == EXIT_USAGE:
        sys.stderr.write(result.payload)
    elif out_path is not None:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(result.payload)
    else:
        sys.stdout.write(result.payload)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
