"""Parser and serializer for the `.zzl` text format.

A document is a flat list of declarations:

    space V dim 2
    map f : V -> V = [0,1;0,0]
    zigzag sky { open = 0, eminus = 0, ezero = 0, A = 1, B = 1,
                 alpha = [], beta = [1], gamma = [] }
    extension P = ext(ic, sky) class 1
    nodes { p1, p2 }
    gluing g { psi = 2, u = [1,0], v = [0;1] }

Whitespace is insignificant, `#` starts a line comment, rationals are
`p/q` in lowest terms, matrices are row-major `[a,b;c,d]` with `[]` for
an empty shape.  Open labels are identifiers with an optional `[nat]`
suffix, `0` for the zero object, or a quoted string for anything else.

Parsing never raises on bad input: it returns a resolved
:class:`Document` on success and a list of positioned
:class:`Diagnostic` values otherwise, never both.  Resolution covers
names and shapes; deeper semantic validation (exactness, gluing
relations) is the business of the individual modules and of the
`check` command, which is what lets deliberately broken fixtures be
parsed and then reported on.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .extension import ExtensionPresentation, make_extension
from .assembly import GluingQuadruple
from .linalg import QMatrix, format_rational, serialize_matrix
from .zigzag import ZERO_LABEL, ZigZag

SEVERITY_ERROR = "error"

CODE_LEX = "lexical"
CODE_SYNTAX = "syntax"
CODE_NAME = "name"
CODE_SHAPE = "shape"

_ITEM_KEYWORDS = ("space", "map", "zigzag", "extension", "nodes", "gluing")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    line: int
    column: int

    def render(self) -> str:
        return f"{self.line}:{self.column}: {self.severity} [{self.code}] {self.message}"


Span = tuple[int, int]


@dataclass(frozen=True)
class SpaceItem:
    name: str
    dim: int
    span: Span = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class MapItem:
    name: str
    source: str
    target: str
    matrix: QMatrix
    span: Span = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class ZigZagItem:
    name: str
    zigzag: ZigZag
    span: Span = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class ExtensionItem:
    name: str
    sub_name: str
    quot_name: str
    class_value: Fraction
    span: Span = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class NodesItem:
    names: tuple[str, ...]
    span: Span = field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class GluingItem:
    name: str
    psi_dim: int
    u: QMatrix
    v: QMatrix
    expected_n: QMatrix | None
    span: Span = field(compare=False, default=(0, 0))


Item = Union[SpaceItem, MapItem, ZigZagItem, ExtensionItem, NodesItem, GluingItem]


@dataclass(frozen=True)
class Document:
    items: tuple[Item, ...]

    def _by_kind(self, kind: type) -> dict[str, Item]:
        return {it.name: it for it in self.items if isinstance(it, kind)}

    @property
    def spaces(self) -> dict[str, SpaceItem]:
        return self._by_kind(SpaceItem)

    @property
    def maps(self) -> dict[str, MapItem]:
        return self._by_kind(MapItem)

    @property
    def zigzags(self) -> dict[str, ZigZagItem]:
        return self._by_kind(ZigZagItem)

    @property
    def extensions(self) -> dict[str, ExtensionItem]:
        return self._by_kind(ExtensionItem)

    @property
    def gluings(self) -> dict[str, GluingItem]:
        return self._by_kind(GluingItem)

    @property
    def nodes_item(self) -> NodesItem | None:
        for it in self.items:
            if isinstance(it, NodesItem):
                return it
        return None

    def build_extension(self, name: str) -> ExtensionPresentation:
        """Materialize an extension declaration; may raise module errors."""
        item = self.extensions[name]
        sub = self.zigzags[item.sub_name].zigzag
        quot = self.zigzags[item.quot_name].zigzag
        if sub.b_dim > 0:
            # a scalar class over a block-regime sub is expressible only
            # when it is zero: it denotes the zero u-block
            return make_extension(sub, quot, QMatrix.zero(sub.b_dim, quot.a_dim))
        if quot.a_dim != 1:
            # resolution only lets class 0 through for higher-rank quotients
            return make_extension(sub, quot, (item.class_value,) * quot.a_dim)
        return make_extension(sub, quot, item.class_value)

    def build_gluing(self, name: str) -> GluingQuadruple:
        """Materialize a gluing declaration, reading each rank row as one node.

        The per-node psi range is the contiguous hull of the supports of
        the matching u row and v column; overlapping hulls are left for
        verify_gluing to report.
        """
        item = self.gluings[name]
        decomposition = []
        for k in range(item.u.rows):
            support = [j for j in range(item.psi_dim) if item.u.entry(k, j) != 0]
            support += [i for i in range(item.psi_dim) if item.v.entry(i, k) != 0]
            if support:
                rng = (min(support), max(support) + 1)
            else:
                rng = (0, 0)
            decomposition.append((f"block_{k + 1}", rng))
        return GluingQuadruple(
            item.psi_dim,
            tuple(decomposition),
            (1,) * item.u.rows,
            item.u,
            item.v,
            item.v * item.u,
            expected_n=item.expected_n,
        )

    def structurally_equal(self, other: Document) -> bool:
        """Same declarations up to item order; node-list order still counts."""
        for kind in (SpaceItem, MapItem, ZigZagItem, ExtensionItem, GluingItem):
            if self._by_kind(kind) != other._by_kind(kind):
                return False
        return self.nodes_item == other.nodes_item


# -- tokenizer ---------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT | NAT | STRING | PUNCT | EOF
    text: str
    line: int
    column: int


_PUNCT_TWO = ("->",)
_PUNCT_ONE = "{}[](),;:=/-"
_IDENT_START = set(string.ascii_letters + "_")
_IDENT_CONT = set(string.ascii_letters + string.digits + "_")


def _tokenize(text: str, diagnostics: list[Diagnostic]) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text[i : i + 2] in _PUNCT_TWO:
            tokens.append(_Token("PUNCT", text[i : i + 2], line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT_ONE:
            tokens.append(_Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            out = []
            closed = False
            while j < n:
                c = text[j]
                if c == "\\" and j + 1 < n:
                    out.append(text[j + 1])
                    j += 2
                    continue
                if c == '"':
                    closed = True
                    j += 1
                    break
                if c == "\n":
                    break
                out.append(c)
                j += 1
            if not closed:
                diagnostics.append(
                    Diagnostic(SEVERITY_ERROR, CODE_LEX, "unterminated string", line, col)
                )
            tokens.append(_Token("STRING", "".join(out), line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("NAT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        diagnostics.append(
            Diagnostic(
                SEVERITY_ERROR, CODE_LEX, f"unexpected character {ch!r}", line, col
            )
        )
        i += 1
        col += 1
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# -- parser ------------------------------------------------------------


class _SyntaxAbort(Exception):
    """Internal: abandon the current item after a diagnostic."""


class _Parser:
    def __init__(self, tokens: list[_Token], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> _SyntaxAbort:
        tok = tok or self.peek()
        self.diagnostics.append(
            Diagnostic(SEVERITY_ERROR, CODE_SYNTAX, message, tok.line, tok.column)
        )
        return _SyntaxAbort()

    @staticmethod
    def _describe(tok: _Token) -> str:
        return repr(tok.text) if tok.text else "end of input"

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == text:
            return self.advance()
        raise self.error(f"expected {text!r}, found {self._describe(tok)}")

    def expect_ident(self, what: str = "identifier") -> _Token:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.advance()
        raise self.error(f"expected {what}, found {self._describe(tok)}")

    def expect_nat(self, what: str = "natural number") -> int:
        tok = self.peek()
        if tok.kind == "NAT":
            self.advance()
            return int(tok.text)
        raise self.error(f"expected {what}, found {self._describe(tok)}")

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    # -- leaf grammars -------------------------------------------------

    def parse_rational(self) -> Fraction:
        tok = self.peek()
        negative = False
        if self.at_punct("-"):
            self.advance()
            negative = True
        num_tok = self.peek()
        if num_tok.kind != "NAT":
            raise self.error("expected a rational literal")
        self.advance()
        num = int(num_tok.text)
        den = 1
        if self.at_punct("/"):
            self.advance()
            den_tok = self.peek()
            if den_tok.kind != "NAT":
                raise self.error("expected a denominator")
            self.advance()
            den = int(den_tok.text)
            if den == 0:
                self.diagnostics.append(
                    Diagnostic(
                        SEVERITY_ERROR, CODE_LEX,
                        "zero denominator in rational literal",
                        tok.line, tok.column,
                    )
                )
                raise _SyntaxAbort()
        value = Fraction(num, den)
        return -value if negative else value

    def parse_matrix(self) -> list[list[Fraction]]:
        self.expect_punct("[")
        rows: list[list[Fraction]] = []
        if self.at_punct("]"):
            self.advance()
            return rows
        while True:
            row = [self.parse_rational()]
            while self.at_punct(","):
                self.advance()
                row.append(self.parse_rational())
            rows.append(row)
            if self.at_punct(";"):
                self.advance()
                continue
            break
        self.expect_punct("]")
        if any(len(r) != len(rows[0]) for r in rows):
            raise self.error("ragged matrix rows")
        return rows

    def parse_label(self) -> str:
        tok = self.peek()
        if tok.kind == "NAT" and tok.text == "0":
            self.advance()
            return ZERO_LABEL
        if tok.kind == "STRING":
            self.advance()
            return tok.text
        if tok.kind == "IDENT":
            self.advance()
            label = tok.text
            if self.at_punct("["):
                self.advance()
                inner = self.expect_nat("bracket index")
                self.expect_punct("]")
                label = f"{label}[{inner}]"
            return label
        raise self.error("expected an open-part label")

    # -- items ----------------------------------------------------------

    def synchronize(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if tok.kind == "IDENT" and tok.text in _ITEM_KEYWORDS:
                return
            self.advance()

    def parse_document(self) -> list[tuple[Item | None, _Token]]:
        out: list[tuple[Item | None, _Token]] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return out
            if tok.kind != "IDENT" or tok.text not in _ITEM_KEYWORDS:
                self.diagnostics.append(
                    Diagnostic(
                        SEVERITY_ERROR, CODE_SYNTAX,
                        f"expected a declaration keyword, found {tok.text!r}",
                        tok.line, tok.column,
                    )
                )
                self.advance()
                self.synchronize()
                continue
            try:
                out.append((self._parse_item(tok.text), tok))
            except _SyntaxAbort:
                self.synchronize()
        return out

    def _parse_item(self, keyword: str) -> Item:
        start = self.advance()
        span = (start.line, start.column)
        if keyword == "space":
            name = self.expect_ident("space name").text
            dim_kw = self.expect_ident("'dim'")
            if dim_kw.text != "dim":
                raise self.error("expected 'dim'", dim_kw)
            return SpaceItem(name, self.expect_nat("space dimension"), span)
        if keyword == "map":
            name = self.expect_ident("map name").text
            self.expect_punct(":")
            source = self.expect_ident("source space").text
            self.expect_punct("->")
            target = self.expect_ident("target space").text
            self.expect_punct("=")
            rows = self.parse_matrix()
            # shape finalized during resolution against the space dims
            matrix = _matrix_from_rows(rows, None, None)
            return MapItem(name, source, target, matrix, span)
        if keyword == "zigzag":
            return self._parse_zigzag(span)
        if keyword == "extension":
            name = self.expect_ident("extension name").text
            self.expect_punct("=")
            kw = self.expect_ident("'ext'")
            if kw.text != "ext":
                raise self.error("expected 'ext'", kw)
            self.expect_punct("(")
            sub_name = self.expect_ident("sub zig-zag name").text
            self.expect_punct(",")
            quot_name = self.expect_ident("quotient zig-zag name").text
            self.expect_punct(")")
            kw = self.expect_ident("'class'")
            if kw.text != "class":
                raise self.error("expected 'class'", kw)
            value = self.parse_rational()
            return ExtensionItem(name, sub_name, quot_name, value, span)
        if keyword == "nodes":
            self.expect_punct("{")
            names = [self.expect_ident("node name").text]
            while self.at_punct(","):
                self.advance()
                names.append(self.expect_ident("node name").text)
            self.expect_punct("}")
            return NodesItem(tuple(names), span)
        if keyword == "gluing":
            return self._parse_gluing(span)
        raise AssertionError(keyword)

    def _parse_fields(
        self, allowed: tuple[str, ...]
    ) -> dict[str, tuple[_Token, object]]:
        """key = value pairs inside braces; values typed by key name."""
        self.expect_punct("{")
        fields: dict[str, tuple[_Token, object]] = {}
        while not self.at_punct("}"):
            key_tok = self.expect_ident("field name")
            key = key_tok.text
            if key not in allowed:
                raise self.error(f"unknown field {key!r}", key_tok)
            if key in fields:
                raise self.error(f"duplicate field {key!r}", key_tok)
            self.expect_punct("=")
            if key == "open":
                value: object = self.parse_label()
            elif key in ("eminus", "ezero", "A", "B", "psi"):
                value = self.expect_nat(f"value of {key}")
            else:
                value = self.parse_matrix()
            fields[key] = (key_tok, value)
            if self.at_punct(","):
                self.advance()
        self.expect_punct("}")
        return fields

    def _parse_zigzag(self, span: Span) -> ZigZagItem:
        name = self.expect_ident("zig-zag name").text
        fields = self._parse_fields(
            ("open", "eminus", "ezero", "A", "B", "alpha", "beta", "gamma")
        )
        missing = [
            k
            for k in ("open", "eminus", "ezero", "A", "B", "alpha", "beta", "gamma")
            if k not in fields
        ]
        if missing:
            raise self.error(f"zigzag {name!r} is missing fields {missing}")
        open_label = fields["open"][1]
        e_minus = fields["eminus"][1]
        e_zero = fields["ezero"][1]
        a_dim = fields["A"][1]
        b_dim = fields["B"][1]
        try:
            alpha = _matrix_from_rows(fields["alpha"][1], a_dim, e_minus)
            beta = _matrix_from_rows(fields["beta"][1], b_dim, a_dim)
            gamma = _matrix_from_rows(fields["gamma"][1], e_zero, b_dim)
            zigzag = ZigZag(open_label, e_minus, e_zero, a_dim, b_dim, alpha, beta, gamma)
        except ValueError as exc:
            self.diagnostics.append(
                Diagnostic(SEVERITY_ERROR, CODE_SHAPE, str(exc), span[0], span[1])
            )
            raise _SyntaxAbort() from exc
        return ZigZagItem(name, zigzag, span)

    def _parse_gluing(self, span: Span) -> GluingItem:
        name = self.expect_ident("gluing name").text
        fields = self._parse_fields(("psi", "u", "v", "N"))
        missing = [k for k in ("psi", "u", "v") if k not in fields]
        if missing:
            raise self.error(f"gluing {name!r} is missing fields {missing}")
        psi = fields["psi"][1]
        try:
            u = _matrix_from_rows(fields["u"][1], None, psi)
            v = _matrix_from_rows(fields["v"][1], psi, None)
            expected_n = (
                _matrix_from_rows(fields["N"][1], psi, psi) if "N" in fields else None
            )
            if u.rows != v.cols:
                raise ValueError(f"u has {u.rows} rows but v has {v.cols} columns")
        except ValueError as exc:
            self.diagnostics.append(
                Diagnostic(SEVERITY_ERROR, CODE_SHAPE, str(exc), span[0], span[1])
            )
            raise _SyntaxAbort() from exc
        return GluingItem(name, psi, u, v, expected_n, span)


def _matrix_from_rows(
    rows: list[list[Fraction]], want_rows: int | None, want_cols: int | None
) -> QMatrix:
    """Shape-check a parsed matrix literal, coercing [] into empty shapes."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if nrows == 0:
        r = want_rows if want_rows is not None else 0
        c = want_cols if want_cols is not None else 0
        if r != 0 and c != 0:
            raise ValueError(f"empty matrix where a {r}x{c} matrix is required")
        return QMatrix.zero(r, c)
    if want_rows is not None and nrows != want_rows:
        raise ValueError(f"matrix has {nrows} rows, expected {want_rows}")
    if want_cols is not None and ncols != want_cols:
        raise ValueError(f"matrix has {ncols} columns, expected {want_cols}")
    return QMatrix.from_rows(rows)


# -- resolution --------------------------------------------------------


def _resolve(
    raw_items: list[tuple[Item | None, _Token]], diagnostics: list[Diagnostic]
) -> Document | None:
    items = [it for it, _ in raw_items if it is not None]
    spans = {id(it): tok for it, tok in raw_items if it is not None}

    def err(item: Item, code: str, message: str) -> None:
        tok = spans[id(item)]
        diagnostics.append(
            Diagnostic(SEVERITY_ERROR, code, message, tok.line, tok.column)
        )

    seen: dict[tuple[type, str], Item] = {}
    nodes_seen = False
    for it in items:
        if isinstance(it, NodesItem):
            if nodes_seen:
                err(it, CODE_NAME, "multiple nodes blocks")
            nodes_seen = True
            continue
        key = (type(it), it.name)
        if key in seen:
            err(it, CODE_NAME, f"duplicate {type(it).__name__} name {it.name!r}")
        seen[key] = it

    spaces = {it.name: it for it in items if isinstance(it, SpaceItem)}
    zigzags = {it.name: it for it in items if isinstance(it, ZigZagItem)}
    extensions = {it.name: it for it in items if isinstance(it, ExtensionItem)}

    for it in items:
        if isinstance(it, MapItem):
            src = spaces.get(it.source)
            dst = spaces.get(it.target)
            if src is None:
                err(it, CODE_NAME, f"map {it.name!r}: unknown space {it.source!r}")
            if dst is None:
                err(it, CODE_NAME, f"map {it.name!r}: unknown space {it.target!r}")
            if src is None or dst is None:
                continue
            m = it.matrix
            want = (dst.dim, src.dim)
            if (m.rows, m.cols) != want:
                if m.rows == 0 and m.cols == 0 and 0 in want:
                    object.__setattr__(it, "matrix", QMatrix.zero(*want))
                else:
                    err(
                        it, CODE_SHAPE,
                        f"map {it.name!r}: matrix is {m.rows}x{m.cols}, "
                        f"spaces require {want[0]}x{want[1]}",
                    )
        elif isinstance(it, ExtensionItem):
            sub = zigzags.get(it.sub_name)
            quot = zigzags.get(it.quot_name)
            if sub is None:
                err(it, CODE_NAME, f"extension {it.name!r}: unknown zigzag {it.sub_name!r}")
            if quot is None:
                err(it, CODE_NAME, f"extension {it.name!r}: unknown zigzag {it.quot_name!r}")
            if sub is None or quot is None:
                continue
            if quot.zigzag.open_label != ZERO_LABEL:
                err(
                    it, CODE_SHAPE,
                    f"extension {it.name!r}: quotient {it.quot_name!r} must be "
                    "point-supported (open = 0)",
                )
            if sub.zigzag.b_dim > 0 and it.class_value != 0:
                err(
                    it, CODE_SHAPE,
                    f"extension {it.name!r}: a nonzero scalar class needs a sub "
                    "with B = 0 (the collapsed regime)",
                )
            if quot.zigzag.a_dim != 1 and it.class_value != 0:
                err(
                    it, CODE_SHAPE,
                    f"extension {it.name!r}: scalar class over a rank-"
                    f"{quot.zigzag.a_dim} quotient",
                )
        elif isinstance(it, NodesItem):
            dup = {n for n in it.names if it.names.count(n) > 1}
            if dup:
                err(it, CODE_NAME, f"duplicate node names {sorted(dup)}")
            for n in it.names:
                if n not in extensions:
                    err(it, CODE_NAME, f"node {n!r} does not name an extension")

    if diagnostics:
        return None
    return Document(tuple(items))


def parse(text: str) -> Document | list[Diagnostic]:
    """Parse source text into a resolved Document, or positioned diagnostics."""
    diagnostics: list[Diagnostic] = []
    tokens = _tokenize(text, diagnostics)
    parser = _Parser(tokens, diagnostics)
    raw_items = parser.parse_document()
    if diagnostics:
        return diagnostics
    document = _resolve(raw_items, diagnostics)
    if document is None:
        return diagnostics
    return document


# -- serializer --------------------------------------------------------


def _serialize_label(label: str) -> str:
    if label == ZERO_LABEL:
        return "0"
    base, bracket = label, ""
    if label.endswith("]") and "[" in label:
        head, _, inner = label[:-1].rpartition("[")
        if head and inner.isdigit():
            base, bracket = head, f"[{inner}]"
    if base and base[0] in _IDENT_START and all(c in _IDENT_CONT for c in base):
        return base + bracket
    escaped = label.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _serialize_item(it: Item) -> str:
    if isinstance(it, SpaceItem):
        return f"space {it.name} dim {it.dim}"
    if isinstance(it, MapItem):
        return (
            f"map {it.name} : {it.source} -> {it.target} = "
            f"{serialize_matrix(it.matrix)}"
        )
    if isinstance(it, ZigZagItem):
        z = it.zigzag
        return (
            f"zigzag {it.name} {{ open = {_serialize_label(z.open_label)}, "
            f"eminus = {z.e_minus}, ezero = {z.e_zero}, A = {z.a_dim}, B = {z.b_dim}, "
            f"alpha = {serialize_matrix(z.alpha)}, beta = {serialize_matrix(z.beta)}, "
            f"gamma = {serialize_matrix(z.gamma)} }}"
        )
    if isinstance(it, ExtensionItem):
        return (
            f"extension {it.name} = ext({it.sub_name}, {it.quot_name}) "
            f"class {format_rational(it.class_value)}"
        )
    if isinstance(it, NodesItem):
        return "nodes { " + ", ".join(it.names) + " }"
    if isinstance(it, GluingItem):
        parts = [
            f"psi = {it.psi_dim}",
            f"u = {serialize_matrix(it.u)}",
            f"v = {serialize_matrix(it.v)}",
        ]
        if it.expected_n is not None:
            parts.append(f"N = {serialize_matrix(it.expected_n)}")
        return f"gluing {it.name} {{ " + ", ".join(parts) + " }"
    raise AssertionError(it)


_KIND_ORDER = (SpaceItem, MapItem, ZigZagItem, ExtensionItem, NodesItem, GluingItem)


def serialize(document: Document) -> str:
    """Canonical text: kind-then-name order, lowest-term rationals, one
    item per line.  Node-list order inside the nodes block is semantic
    and preserved verbatim."""
    lines = []
    for kind in _KIND_ORDER:
        group = [it for it in document.items if isinstance(it, kind)]
        if kind is not NodesItem:
            group.sort(key=lambda it: it.name)
        for it in group:
            lines.append(_serialize_item(it))
    return "\n".join(lines) + ("\n" if lines else "")
