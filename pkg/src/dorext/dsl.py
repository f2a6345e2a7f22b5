"""Line-oriented spec language for rings, extensions and dcv candidates.

Grammar (``#`` starts a comment, one statement per line)::

    field Q | field F <p>
    ring <R> gens <x>... [order <x> < <x> ...]
    rel <word> = <expr>
    map [<set>.]<sigmaIJ|deltaI> <gen> = <expr>
    param [<set>.]<p12|p11> = <expr>
    [<set>.]<tau0|tau1|tau2> = <expr>
    extension <B> = double(<R>, [<set>.]sigma, [<set>.]delta, [<set>.]P, [<set>.]tau)
    dcv <q> in <B> q1 = <expr> q2 = <expr> source(<B or set>)
    check <kind> <name> [--max-degree N] [--scope S]

Unprefixed maps, parameters and tails belong to the default data set. Unset
diagonal sigma entries act as the identity; every other unset entry is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .dcv import SCOPES, DcvMatrix, SourceData
from .doubleore import DoubleOreAlgebra, build_extension
from .errors import ArityError, ResolutionError, SpecSyntaxError
from .exactfield import QQ, Field
from .expr import Token, TokenStream, names_in, parse_expr, tokenize
from .presring import make_ring
from .ringmaps import DeltaColumn, SigmaMatrix

COMPONENTS = ("sigma11", "sigma12", "sigma21", "sigma22", "delta1", "delta2")
PARAMS = ("p12", "p11")
TAUS = ("tau0", "tau1", "tau2")
CHECK_KINDS = (
    "extension", "dcv", "iterated", "graded", "change-basis", "trimmed", "iso", "hom-to-iterated",
    "multiplicative", "surjectivity",
)
DEFAULT_SET = ""


@dataclass
class DataSet:
    maps: dict = dc_field(default_factory=dict)
    params: dict = dc_field(default_factory=dict)
    tau: dict = dc_field(default_factory=dict)


@dataclass
class RingDecl:
    name: str
    gens: tuple
    order: tuple = ()
    rels: list = dc_field(default_factory=list)


@dataclass
class ExtensionDecl:
    name: str
    ring: str
    data: str


@dataclass
class DcvDecl:
    name: str
    target: str
    q1: str
    q2: str
    source: str


@dataclass
class CheckDecl:
    kind: str
    target: str
    max_degree: int | None = None
    scope: str | None = None


@dataclass
class SpecDocument:
    field: tuple = ()
    ring: RingDecl | None = None
    data: dict = dc_field(default_factory=dict)
    extensions: list = dc_field(default_factory=list)
    dcvs: list = dc_field(default_factory=list)
    checks: list = dc_field(default_factory=list)

    def dataset(self, name: str) -> DataSet:
        return self.data.setdefault(name, DataSet())


# -- canonical expression text ------------------------------------------------


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _factors(node):
    # a parenthesised single positive term is spliced into the outer product
    for f in node[1]:
        if f[0] == "add" and len(f[1]) == 1 and f[1][0][0] > 0:
            yield from _factors(f[1][0][1])
        else:
            yield f


def render_node(node, nested: bool = False) -> str:
    kind = node[0]
    if kind == "add":
        parts = []
        for k, (sign, term) in enumerate(node[1]):
            body = render_node(term)
            if k == 0:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append(("- " if sign < 0 else "+ ") + body)
        text = " ".join(parts)
        return f"({text})" if nested and (len(node[1]) > 1 or node[1][0][0] < 0) else text
    if kind == "mul":
        coeff = Fraction(1)
        rest = []
        for f in _factors(node):
            if f[0] == "num":
                coeff *= f[1]
            else:
                rest.append(render_node(f, nested=True))
        if coeff != 1 or not rest:
            rest.insert(0, _fmt_fraction(coeff))
        return "*".join(rest)
    if kind == "pow":
        return f"{render_node(node[1], nested=True)}^{node[2]}"
    if kind == "num":
        return _fmt_fraction(node[1])
    return node[1]


def _expr(ts: TokenStream, allowed, what: str) -> str:
    node = parse_expr(ts)
    for name, line, col in names_in(node):
        if name not in allowed:
            raise ResolutionError(f"unknown {what} {name!r}", line, col)
    return render_node(node)


# -- parser ---------------------------------------------------------------------


def _split_set(tok: Token):
    if "." in tok.text:
        head, tail = tok.text.split(".", 1)
        return head, tail
    return DEFAULT_SET, tok.text


class _Parser:
    def __init__(self, text: str):
        self.doc = SpecDocument()
        self.lines = text.split("\n")

    def parse(self) -> SpecDocument:
        for lineno, line in enumerate(self.lines, start=1):
            ts = TokenStream(tokenize(line, lineno))
            if ts.peek.kind == "eol":
                continue
            self.statement(ts)
            ts.expect_end()
        if not self.doc.field:
            last = len(self.lines)
            raise SpecSyntaxError("expected 'field'", 1 if not any(l.strip() for l in self.lines) else last, 1)
        return self.doc

    def _gens(self):
        return self.doc.ring.gens if self.doc.ring else ()

    def statement(self, ts: TokenStream):
        tok = ts.peek
        if not self.doc.field and tok.text != "field":
            raise SpecSyntaxError(f"expected 'field', found {tok.describe()}", tok.line, tok.column)
        head = tok.text
        if head == "field":
            self.field_stmt(ts)
        elif head == "ring":
            self.ring_stmt(ts)
        elif head in ("rel", "map", "param", "extension", "dcv", "check") or _split_set(tok)[1] in TAUS:
            if self.doc.ring is None:
                raise SpecSyntaxError(f"expected 'ring' before {tok.describe()}", tok.line, tok.column)
            getattr(self, {"rel": "rel_stmt", "map": "map_stmt", "param": "param_stmt", "extension": "ext_stmt",
                           "dcv": "dcv_stmt", "check": "check_stmt"}.get(head, "tau_stmt"))(ts)
        else:
            raise SpecSyntaxError(
                f"expected a statement (field, ring, rel, map, param, tau0..tau2, extension, dcv, check), found {tok.describe()}",
                tok.line, tok.column,
            )

    def field_stmt(self, ts):
        kw = ts.next()
        if self.doc.field:
            raise SpecSyntaxError("field is already declared", kw.line, kw.column)
        tok = ts.expect_kind("ident", "'Q' or 'F'")
        if tok.text == "Q":
            self.doc.field = ("Q",)
        elif tok.text == "F":
            p = ts.expect_kind("number", "a prime")
            try:
                Field.prime(int(p.text))
            except Exception as exc:
                raise SpecSyntaxError(str(exc), p.line, p.column) from exc
            self.doc.field = ("F", int(p.text))
        else:
            raise SpecSyntaxError(f"expected 'Q' or 'F', found {tok.describe()}", tok.line, tok.column)

    def ring_stmt(self, ts):
        kw = ts.next()
        if self.doc.ring is not None:
            raise SpecSyntaxError("only one ring may be declared", kw.line, kw.column)
        name = ts.expect_kind("ident", "a ring name").text
        ts.expect("gens")
        gens = []
        while ts.peek.kind == "ident" and ts.peek.text != "order":
            g = ts.next()
            if g.text in gens or "." in g.text:
                raise SpecSyntaxError(f"invalid generator {g.text!r}", g.line, g.column)
            gens.append(g.text)
        if not gens:
            tok = ts.peek
            raise SpecSyntaxError(f"expected a generator name, found {tok.describe()}", tok.line, tok.column)
        order = []
        if ts.accept("order"):
            order.append(self._gen_token(ts, gens))
            while ts.accept("<"):
                order.append(self._gen_token(ts, gens))
            if sorted(order) != sorted(gens):
                raise ArityError("order must list every generator exactly once", ts.peek.line, ts.peek.column)
        self.doc.ring = RingDecl(name, tuple(gens), tuple(order))

    def _gen_token(self, ts, gens):
        tok = ts.expect_kind("ident", "a generator name")
        if tok.text not in gens:
            raise ResolutionError(f"unknown generator {tok.text!r}", tok.line, tok.column)
        return tok.text

    def rel_stmt(self, ts):
        ts.next()
        lhs = _expr(ts, self._gens(), "generator")
        ts.expect("=")
        rhs = _expr(ts, self._gens(), "generator")
        self.doc.ring.rels.append((lhs, rhs))

    def map_stmt(self, ts):
        ts.next()
        tok = ts.expect_kind("ident", "a map component")
        set_name, comp = _split_set(tok)
        if comp not in COMPONENTS:
            raise ResolutionError(f"unknown map component {comp!r}", tok.line, tok.column)
        gen = self._gen_token(ts, self._gens())
        ts.expect("=")
        self.doc.dataset(set_name).maps[(comp, gen)] = _expr(ts, self._gens(), "generator")

    def param_stmt(self, ts):
        ts.next()
        tok = ts.expect_kind("ident", "p12 or p11")
        set_name, name = _split_set(tok)
        if name not in PARAMS:
            raise ResolutionError(f"unknown parameter {name!r}", tok.line, tok.column)
        ts.expect("=")
        self.doc.dataset(set_name).params[name] = _expr(ts, (), "name")

    def tau_stmt(self, ts):
        tok = ts.next()
        set_name, name = _split_set(tok)
        ts.expect("=")
        self.doc.dataset(set_name).tau[name] = _expr(ts, self._gens(), "generator")

    def ext_stmt(self, ts):
        ts.next()
        name = ts.expect_kind("ident", "an extension name").text
        ts.expect("=")
        ts.expect("double")
        open_tok = ts.expect("(")
        args = [ts.expect_kind("ident", "an argument").text]
        while ts.accept(","):
            args.append(ts.expect_kind("ident", "an argument").text)
        ts.expect(")")
        if len(args) != 5:
            raise ArityError(f"double(...) takes 5 arguments, got {len(args)}", open_tok.line, open_tok.column)
        if args[0] != self.doc.ring.name:
            raise ResolutionError(f"unknown ring {args[0]!r}", open_tok.line, open_tok.column)
        sets = set()
        for arg, role in zip(args[1:], ("sigma", "delta", "P", "tau")):
            head, tail = arg.split(".", 1) if "." in arg else (DEFAULT_SET, arg)
            if tail != role:
                raise ResolutionError(f"expected {role!r} argument, found {arg!r}", open_tok.line, open_tok.column)
            sets.add(head)
        if len(sets) != 1:
            raise ResolutionError("double(...) arguments must come from one data set", open_tok.line, open_tok.column)
        if any(e.name == name for e in self.doc.extensions):
            raise ResolutionError(f"extension {name!r} is already declared", open_tok.line, open_tok.column)
        data = sets.pop()
        self.doc.dataset(data)
        self.doc.extensions.append(ExtensionDecl(name, args[0], data))

    def dcv_stmt(self, ts):
        ts.next()
        name = ts.expect_kind("ident", "a candidate name").text
        ts.expect("in")
        tgt = ts.expect_kind("ident", "an extension name")
        if not any(e.name == tgt.text for e in self.doc.extensions):
            raise ResolutionError(f"unknown extension {tgt.text!r}", tgt.line, tgt.column)
        allowed = self._gens() + ("y1", "y2")
        ts.expect("q1")
        ts.expect("=")
        q1 = _expr(ts, allowed, "name")
        ts.expect("q2")
        ts.expect("=")
        q2 = _expr(ts, allowed, "name")
        ts.expect("source")
        ts.expect("(")
        src = ts.expect_kind("ident", "an extension or data set name")
        ts.expect(")")
        known = {e.name for e in self.doc.extensions} | set(self.doc.data)
        if src.text not in known:
            raise ResolutionError(f"unknown source {src.text!r}", src.line, src.column)
        self.doc.dcvs.append(DcvDecl(name, tgt.text, q1, q2, src.text))

    def check_stmt(self, ts):
        ts.next()
        kind_tok = ts.expect_kind("ident", "a check kind")
        kind = kind_tok.text
        # kinds with a dash tokenize as ident '-' ident
        while ts.at("-"):
            ts.next()
            kind += "-" + ts.expect_kind("ident", "a check kind").text
        if kind not in CHECK_KINDS:
            raise ResolutionError(f"unknown check {kind!r}", kind_tok.line, kind_tok.column)
        tgt = ts.expect_kind("ident", "a target name")
        known = {e.name for e in self.doc.extensions} | {d.name for d in self.doc.dcvs}
        if tgt.text not in known:
            raise ResolutionError(f"unknown check target {tgt.text!r}", tgt.line, tgt.column)
        decl = CheckDecl(kind, tgt.text)
        while ts.peek.kind == "flag":
            flag = ts.next()
            if flag.text == "--max-degree":
                decl.max_degree = int(ts.expect_kind("number", "a degree").text)
            elif flag.text == "--scope":
                s = ts.expect_kind("ident", "a scope")
                if s.text not in SCOPES:
                    raise ResolutionError(f"unknown scope {s.text!r}", s.line, s.column)
                decl.scope = s.text
            else:
                raise SpecSyntaxError(f"unknown option {flag.text}", flag.line, flag.column)
        self.doc.checks.append(decl)


def parse_spec(text: str) -> SpecDocument:
    return _Parser(text).parse()


# -- canonical rendering ----------------------------------------------------------


def _prefixed(set_name: str, name: str) -> str:
    return f"{set_name}.{name}" if set_name else name


def render(doc: SpecDocument) -> str:
    out = ["field Q" if doc.field == ("Q",) else f"field F {doc.field[1]}"]
    r = doc.ring
    if r is not None:
        line = f"ring {r.name} gens {' '.join(r.gens)}"
        if r.order:
            line += " order " + " < ".join(r.order)
        out.append(line)
        out += [f"rel {lhs} = {rhs}" for lhs, rhs in r.rels]
    for set_name in sorted(doc.data):
        ds = doc.data[set_name]
        for comp in COMPONENTS:
            for g in (r.gens if r else ()):
                if (comp, g) in ds.maps:
                    out.append(f"map {_prefixed(set_name, comp)} {g} = {ds.maps[(comp, g)]}")
        for p in PARAMS:
            if p in ds.params:
                out.append(f"param {_prefixed(set_name, p)} = {ds.params[p]}")
        for t in TAUS:
            if t in ds.tau:
                out.append(f"{_prefixed(set_name, t)} = {ds.tau[t]}")
    for e in doc.extensions:
        args = ", ".join(_prefixed(e.data, a) for a in ("sigma", "delta", "P", "tau"))
        out.append(f"extension {e.name} = double({e.ring}, {args})")
    for d in doc.dcvs:
        out.append(f"dcv {d.name} in {d.target} q1 = {d.q1} q2 = {d.q2} source({d.source})")
    for c in doc.checks:
        line = f"check {c.kind} {c.target}"
        if c.max_degree is not None:
            line += f" --max-degree {c.max_degree}"
        if c.scope is not None:
            line += f" --scope {c.scope}"
        out.append(line)
    return "\n".join(out) + "\n"


# -- building ---------------------------------------------------------------------


@dataclass
class BuiltSpec:
    doc: SpecDocument
    field: Field
    ring: object
    sources: dict
    extensions: dict
    dcvs: dict


def field_of(doc: SpecDocument) -> Field:
    return QQ if doc.field == ("Q",) else Field.prime(doc.field[1])


def source_data(doc: SpecDocument, ring, set_name: str) -> SourceData:
    ds = doc.data.get(set_name, DataSet())
    f = ring.field

    def imgs(comp):
        default = {"sigma11": "gen", "sigma22": "gen"}.get(comp)
        return [ring.element(ds.maps[(comp, g)]) if (comp, g) in ds.maps else (ring.gen(g) if default else ring.zero) for g in ring.gens]

    sigma = SigmaMatrix(ring, *(imgs(c) for c in COMPONENTS[:4]))
    delta = DeltaColumn(ring, sigma, imgs("delta1"), imgs("delta2"))

    def param(name, default):
        if name not in ds.params:
            return default
        e = ring.element(ds.params[name])
        return e.constant()

    taus = tuple(ring.element(ds.tau[t]) if t in ds.tau else ring.zero for t in TAUS)
    return SourceData(sigma, delta, param("p12", f.one), param("p11", f.zero), taus)


def build(doc: SpecDocument, check_degree: int = 3) -> BuiltSpec:
    """Instantiate every declared object; extensions are checked for well-definedness."""
    f = field_of(doc)
    r = doc.ring
    ring = make_ring(f, list(r.gens), list(r.rels), list(r.order) or None)
    sources = {name: source_data(doc, ring, name) for name in sorted(doc.data)}
    exts: dict[str, DoubleOreAlgebra] = {}
    for e in doc.extensions:
        s = sources[e.data]
        exts[e.name] = build_extension(ring, s.sigma, s.delta, s.p12, s.p11, *s.tau, check_degree=check_degree)
    dcvs = {}
    for d in doc.dcvs:
        alg = exts[d.target]
        src = SourceData.of(exts[d.source]) if d.source in exts else sources[d.source]
        dcvs[d.name] = DcvMatrix(alg.element(d.q1), alg.element(d.q2), src)
    return BuiltSpec(doc, f, ring, sources, exts, dcvs)
