"""Text formats: the bracket DSL, canonical JSON, and structure files."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .lie import BracketTable, LieAlgebra
from .linalg import Endomorphism, UsageError

# ------------------------------------------------------------ errors


class FormatError(UsageError):
    """Structured parse or schema error.

    ``code`` is a stable identifier; DSL errors carry ``line``/``column``
    (1-based) and JSON errors carry a JSON-pointer ``path``.
    """

    def __init__(self, code: str, message: str, line: int | None = None, column: int | None = None, path: str | None = None):
        self.code = code
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if line is not None:
            where = f"{line}:{column}: "
        elif path is not None:
            where = f"{path or '/'}: "
        super().__init__(f"{where}{code}: {message}")


E_ENCODING = "E_ENCODING"
E_LEX = "E_LEX"
E_SYNTAX = "E_SYNTAX"
E_DUPLICATE_ID = "E_DUPLICATE_ID"
E_UNKNOWN_ID = "E_UNKNOWN_ID"
E_CONTRADICTION = "E_CONTRADICTION"
E_SELF_BRACKET = "E_SELF_BRACKET"
E_NO_BASIS = "E_NO_BASIS"
E_DUPLICATE_DIRECTIVE = "E_DUPLICATE_DIRECTIVE"
E_ZERO_DENOMINATOR = "E_ZERO_DENOMINATOR"
E_JSON = "E_JSON"
E_SCHEMA = "E_SCHEMA"

# ------------------------------------------------------------ documents

Term = tuple[Fraction, str]


@dataclass(frozen=True)
class AlgebraDocument:
    """Named basis plus relations ``[a, b] = sum coeff * id``.

    ``relations`` is a tuple of ``((a, b), terms)``; each term list has one
    entry per identifier, no zero coefficients, in basis order.
    """

    name: str
    basis: tuple[str, ...]
    relations: tuple[tuple[tuple[str, str], tuple[Term, ...]], ...]

    def to_table(self) -> BracketTable:
        return self._build(BracketTable)

    def to_algebra(self) -> LieAlgebra:
        return self._build(LieAlgebra)

    def _build(self, cls):
        idx = {n: i for i, n in enumerate(self.basis)}
        consts = {}
        for (a, b), terms in self.relations:
            consts[(idx[a], idx[b])] = {idx[k]: c for c, k in terms}
        return cls(len(self.basis), consts, self.basis)

    @classmethod
    def from_algebra(cls, L: BracketTable, name: str = "algebra") -> "AlgebraDocument":
        rels = []
        for (i, j), terms in L.constants.items():
            rels.append(((L.basis_names[i], L.basis_names[j]), tuple((c, L.basis_names[k]) for k, c in terms)))
        return cls(name, tuple(L.basis_names), tuple(rels))


@dataclass(frozen=True)
class StructureDocument:
    name: str
    basis: tuple[str, ...]
    j1: Endomorphism
    j2: Endomorphism


# ------------------------------------------------------------ DSL

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<num>[0-9]+)|(?P<ident>" + _IDENT + r")|(?P<punct>[\[\],=+\-/*])"
)
_NAME = re.compile(r"[A-Za-z0-9_.\-]+")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _lex(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise FormatError(E_LEX, f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos + 1))
        pos = m.end()
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok], lineno: int, line_len: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.end_col = line_len + 1

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def col(self) -> int:
        t = self.peek()
        return t.col if t else self.end_col

    def take(self, kind: str | None = None, text: str | None = None, what: str = "token") -> _Tok:
        t = self.peek()
        if t is None or (kind and t.kind != kind) or (text and t.text != text):
            found = "end of line" if t is None else repr(t.text)
            raise FormatError(E_SYNTAX, f"expected {what}, found {found}", self.lineno, self.col())
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.kind == "punct" and t.text == text:
            self.i += 1
            return True
        return False


MAX_DIGITS = 4000  # below the interpreter's int/str conversion limit


def _dsl_int(tok: _Tok, lineno: int) -> int:
    if len(tok.text) > MAX_DIGITS:
        raise FormatError(E_SYNTAX, "number too long", lineno, tok.col)
    return int(tok.text)


def _coefficient(cur: _Cursor) -> Fraction:
    num = _dsl_int(cur.take("num", what="number"), cur.lineno)
    if cur.accept("/"):
        tok = cur.take("num", what="denominator")
        den = _dsl_int(tok, cur.lineno)
        if den == 0:
            raise FormatError(E_ZERO_DENOMINATOR, "zero denominator", cur.lineno, tok.col)
        return Fraction(num, den)
    return Fraction(num)


def _rhs(cur: _Cursor, basis_index: dict[str, int]) -> dict[str, Fraction]:
    acc: dict[str, Fraction] = {}
    first = True
    while True:
        sign = 1
        if cur.accept("-"):
            sign = -1
        elif cur.accept("+"):
            pass
        elif not first:
            break
        t = cur.peek()
        if t is None:
            raise FormatError(E_SYNTAX, "expected a term", cur.lineno, cur.col())
        if first and t.kind == "num" and t.text == "0" and cur.i + 1 == len(cur.toks) and sign == 1:
            cur.i += 1  # "[A, B] = 0"
            return {}
        coeff = Fraction(1)
        if t.kind == "num":
            coeff = _coefficient(cur)
            cur.accept("*")
        ident = cur.take("ident", what="identifier")
        if ident.text not in basis_index:
            raise FormatError(E_UNKNOWN_ID, f"unknown identifier {ident.text!r}", cur.lineno, ident.col)
        acc[ident.text] = acc.get(ident.text, Fraction(0)) + sign * coeff
        first = False
        if cur.peek() is None:
            break
    if cur.peek() is not None:
        raise FormatError(E_SYNTAX, f"unexpected {cur.peek().text!r}", cur.lineno, cur.col())
    return acc


def parse_algebra(text: str | bytes) -> AlgebraDocument:
    """Parse the line-oriented bracket DSL.

    ::

        algebra phc5
        basis X Y Z W
        [X, Y] = X          # comment
        [X, W] = X + 2 Y - 1/2 Z
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(E_ENCODING, "input is not valid UTF-8", 1, 1) from exc
    name: str | None = None
    basis: list[str] | None = None
    index: dict[str, int] = {}
    rels: dict[frozenset, tuple[tuple[str, str], dict[str, Fraction], int]] = {}
    order: list[frozenset] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        word = stripped.split(None, 1)[0]
        if word == "algebra":
            if name is not None:
                raise FormatError(E_DUPLICATE_DIRECTIVE, "second 'algebra' line", lineno, indent + 1)
            rest = stripped[len("algebra"):]
            if rest and not rest[0].isspace():
                raise FormatError(E_SYNTAX, "expected a space after 'algebra'", lineno, indent + 8)
            nm = rest.strip()
            col = indent + 1 + len("algebra") + (len(rest) - len(rest.lstrip()))
            if not nm or not _NAME.fullmatch(nm):
                raise FormatError(E_SYNTAX, "expected an algebra name", lineno, col)
            name = nm
            continue
        if word == "basis":
            if basis is not None:
                raise FormatError(E_DUPLICATE_DIRECTIVE, "second 'basis' line", lineno, indent + 1)
            toks = _lex(line, lineno)[1:]
            if not toks:
                raise FormatError(E_SYNTAX, "basis needs at least one identifier", lineno, len(line) + 1)
            basis = []
            for t in toks:
                if t.kind != "ident" or t.text in ("algebra", "basis"):
                    raise FormatError(E_SYNTAX, f"expected identifier, found {t.text!r}", lineno, t.col)
                if t.text in index:
                    raise FormatError(E_DUPLICATE_ID, f"duplicate identifier {t.text!r}", lineno, t.col)
                index[t.text] = len(basis)
                basis.append(t.text)
            continue
        toks = _lex(line, lineno)
        cur = _Cursor(toks, lineno, len(line))
        if cur.peek() is None or cur.peek().text != "[":
            raise FormatError(E_SYNTAX, "expected 'algebra', 'basis' or '['", lineno, cur.col())
        if basis is None:
            raise FormatError(E_NO_BASIS, "relation before the basis line", lineno, cur.col())
        cur.take("punct", "[", "'['")
        a = cur.take("ident", what="identifier")
        cur.take("punct", ",", "','")
        b = cur.take("ident", what="identifier")
        cur.take("punct", "]", "']'")
        cur.take("punct", "=", "'='")
        for t in (a, b):
            if t.text not in index:
                raise FormatError(E_UNKNOWN_ID, f"unknown identifier {t.text!r}", lineno, t.col)
        if a.text == b.text:
            raise FormatError(E_SELF_BRACKET, f"[{a.text}, {a.text}] is always zero", lineno, a.col)
        rhs = _rhs(cur, index)
        key = frozenset((a.text, b.text))
        if key in rels:
            (pa, pb), prev, _ = rels[key]
            same = rhs if (pa, pb) == (a.text, b.text) else {k: -v for k, v in rhs.items()}
            if _clean(same) != _clean(prev):
                raise FormatError(E_CONTRADICTION, f"contradicts the earlier relation for [{pa}, {pb}]", lineno, a.col - 1)
            continue
        rels[key] = ((a.text, b.text), rhs, lineno)
        order.append(key)
    if basis is None:
        raise FormatError(E_NO_BASIS, "missing 'basis' line", max(1, text.count("\n") + 1), 1)
    relations = []
    for key in order:
        pair, rhs, _ = rels[key]
        terms = tuple((c, k) for k, c in sorted(_clean(rhs).items(), key=lambda kv: index[kv[0]]))
        if terms:
            relations.append((pair, terms))
    return AlgebraDocument(name or "algebra", tuple(basis), tuple(relations))


def _clean(d: dict[str, Fraction]) -> dict[str, Fraction]:
    return {k: v for k, v in d.items() if v}


def _fmt_coeff(c: Fraction, first: bool) -> str:
    mag = abs(c)
    sign = "-" if c < 0 else "+"
    body = "" if mag == 1 else (f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}") + " "
    if first:
        return ("-" if c < 0 else "") + body
    return f" {sign} {body}"


def emit_dsl(doc: AlgebraDocument) -> str:
    lines = [f"algebra {doc.name}", "basis " + " ".join(doc.basis)]
    for (a, b), terms in doc.relations:
        rhs = "".join(_fmt_coeff(c, i == 0) + k for i, (c, k) in enumerate(terms))
        lines.append(f"[{a}, {b}] = {rhs}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ JSON

_INT = re.compile(r"-?(0|[1-9][0-9]*)")
_POS_INT = re.compile(r"[1-9][0-9]*")
_RATIONAL = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")


def canonical_json(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _load(data: str | bytes) -> Any:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(E_ENCODING, "input is not valid UTF-8", path="") from exc
    try:
        return json.loads(data)
    except (ValueError, RecursionError) as exc:
        raise FormatError(E_JSON, f"invalid JSON ({exc})", path="") from exc


def _schema(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise FormatError(E_SCHEMA, message, path=path)


def _keys(obj: dict, required: set[str], path: str, optional: set[str] = frozenset()) -> None:
    missing = required - set(obj)
    _schema(not missing, path, f"missing key(s) {sorted(missing)}")
    extra = set(obj) - required - set(optional)
    _schema(not extra, path + "/" + sorted(extra)[0] if extra else path, f"unexpected key(s) {sorted(extra)}")


def _envelope(obj: Any, extra: set[str] = frozenset()) -> tuple[str, list[str]]:
    _schema(isinstance(obj, dict), "", "top level must be an object")
    _keys(obj, {"name", "basis"} | set(extra), "")
    name, basis = obj["name"], obj["basis"]
    _schema(isinstance(name, str), "/name", "name must be a string")
    _schema(isinstance(basis, list) and basis, "/basis", "basis must be a non-empty array")
    seen = set()
    for i, b in enumerate(basis):
        _schema(isinstance(b, str) and re.fullmatch(_IDENT, b) is not None, f"/basis/{i}", "basis entries must be identifiers")
        _schema(b not in seen, f"/basis/{i}", f"duplicate identifier {b!r}")
        seen.add(b)
    return name, basis


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_json(data: str | bytes) -> AlgebraDocument:
    """Parse and validate the JSON algebra schema."""
    obj = _load(data)
    name, basis = _envelope(obj, {"brackets"})
    n = len(basis)
    brackets = obj["brackets"]
    _schema(isinstance(brackets, list), "/brackets", "brackets must be an array")
    relations = []
    seen_pairs = set()
    for bi, br in enumerate(brackets):
        p = f"/brackets/{bi}"
        _schema(isinstance(br, dict), p, "bracket must be an object")
        _keys(br, {"i", "j", "terms"}, p)
        i, j, terms = br["i"], br["j"], br["terms"]
        _schema(_is_int(i) and 0 <= i < n, p + "/i", "i must be a basis index")
        _schema(_is_int(j) and 0 <= j < n, p + "/j", "j must be a basis index")
        _schema(i < j, p, "requires i < j")
        _schema((i, j) not in seen_pairs, p, f"duplicate bracket ({i}, {j})")
        seen_pairs.add((i, j))
        _schema(isinstance(terms, list) and terms, p + "/terms", "terms must be a non-empty array")
        out = []
        seen_k = set()
        for ti, term in enumerate(terms):
            tp = f"{p}/terms/{ti}"
            _schema(isinstance(term, dict), tp, "term must be an object")
            _keys(term, {"k", "num", "den"}, tp)
            k, num, den = term["k"], term["num"], term["den"]
            _schema(_is_int(k) and 0 <= k < n, tp + "/k", "k must be a basis index")
            _schema(k not in seen_k, tp + "/k", f"duplicate term index {k}")
            seen_k.add(k)
            _schema(isinstance(num, str) and _INT.fullmatch(num) is not None and num != "-0", tp + "/num", "num must be an integer string")
            _schema(isinstance(den, str) and _POS_INT.fullmatch(den) is not None, tp + "/den", "den must be a positive integer string")
            _schema(len(num) <= MAX_DIGITS and len(den) <= MAX_DIGITS, tp, "number too long")
            value = Fraction(int(num), int(den))
            _schema(value != 0, tp + "/num", "zero coefficients are not allowed")
            _schema(value.denominator == int(den), tp, "fraction must be in lowest terms")
            out.append((k, value))
        _schema([k for k, _ in out] == sorted(k for k, _ in out), p + "/terms", "terms must be sorted by k")
        relations.append(((basis[i], basis[j]), tuple((v, basis[k]) for k, v in out)))
    pairs = [(basis.index(a), basis.index(b)) for (a, b), _ in relations]
    _schema(pairs == sorted(pairs), "/brackets", "brackets must be sorted by (i, j)")
    return AlgebraDocument(name, tuple(basis), tuple(relations))


def _index_relations(doc: AlgebraDocument) -> dict[tuple[int, int], dict[int, Fraction]]:
    idx = {b: i for i, b in enumerate(doc.basis)}
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (a, b), terms in doc.relations:
        i, j = idx[a], idx[b]
        sign = 1 if i < j else -1
        slot = table.setdefault((min(i, j), max(i, j)), {})
        for c, k in terms:
            slot[idx[k]] = slot.get(idx[k], Fraction(0)) + sign * c
    return table


def json_object(doc: AlgebraDocument) -> dict:
    brackets = []
    for (i, j), slot in sorted(_index_relations(doc).items()):
        terms = [{"k": k, "num": str(c.numerator), "den": str(c.denominator)} for k, c in sorted(slot.items()) if c]
        if terms:
            brackets.append({"i": i, "j": j, "terms": terms})
    return {"name": doc.name, "basis": list(doc.basis), "brackets": brackets}


def emit_json(doc: AlgebraDocument) -> bytes:
    """Canonical bytes: sorted keys, no insignificant whitespace."""
    return canonical_json(json_object(doc))


def canonical_document(doc: AlgebraDocument) -> AlgebraDocument:
    """The document in JSON order: ``i < j``, sorted pairs and terms."""
    return parse_json(emit_json(doc))


# ------------------------------------------------------------ structures


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _matrix(obj: Any, n: int, path: str) -> Endomorphism:
    _schema(isinstance(obj, list) and len(obj) == n, path, f"expected {n} rows")
    out = []
    for r, row in enumerate(obj):
        _schema(isinstance(row, list) and len(row) == n, f"{path}/{r}", f"expected {n} entries")
        vals = []
        for c, x in enumerate(row):
            _schema(isinstance(x, str) and _RATIONAL.fullmatch(x) is not None and not x.startswith("-0"), f"{path}/{r}/{c}", "entry must be a rational string 'p' or 'p/q'")
            _schema(len(x) <= 2 * MAX_DIGITS, f"{path}/{r}/{c}", "number too long")
            v = Fraction(x)
            _schema(_fmt_rational(v) == x, f"{path}/{r}/{c}", "rational must be in lowest terms")
            vals.append(v)
        out.append(vals)
    return Endomorphism(out)


def parse_structure(data: str | bytes, dim: int | None = None) -> StructureDocument:
    obj = _load(data)
    name, basis = _envelope(obj, {"j1", "j2"})
    n = len(basis)
    if dim is not None:
        _schema(n == dim, "/basis", f"structure dimension {n} does not match algebra dimension {dim}")
    return StructureDocument(name, tuple(basis), _matrix(obj["j1"], n, "/j1"), _matrix(obj["j2"], n, "/j2"))


def structure_object(name: str, basis, j1: Endomorphism, j2: Endomorphism) -> dict:
    return {
        "name": name,
        "basis": list(basis),
        "j1": [[_fmt_rational(x) for x in r] for r in j1.rows],
        "j2": [[_fmt_rational(x) for x in r] for r in j2.rows],
    }


def emit_structure(name: str, basis, j1: Endomorphism, j2: Endomorphism) -> bytes:
    return canonical_json(structure_object(name, basis, j1, j2))


def load_algebra_text(data: str | bytes) -> AlgebraDocument:
    """JSON if the first non-blank character is ``{``, else the DSL."""
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(E_ENCODING, "input is not valid UTF-8", 1, 1) from exc
    else:
        text = data
    return parse_json(text) if text.lstrip().startswith("{") else parse_algebra(text)
