"""Scenario files: JSON parsing with path diagnostics, evaluation and reports.

Two kinds exist.  ``"operator"`` scenarios declare shapes and block
operators and run a program of named operations.  ``"space"`` scenarios
declare atoms, relation facts and pairs of sums and evaluate the space
calculus.  Both produce a report dict with the fields ``inputs``,
``computed``, ``verdicts``, ``rule_trail``, ``expectations`` and ``pass``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ComputationError, SchemaError
from .coupling import (Extension, SchurCouple, Witness, eae_check, eae_construct, eae_verify,
                       perturb_kernel, perturb_witness, sc_construct, sc_extend_blockdiag,
                       sc_verify, witness_compress, witness_from_complemented, witness_power)
from .seq_operator import (BlockOp, Correction, Fin, Seq, SeqOp, SpaceShape, block_add,
                           block_compose, fredholm_data, index, is_fredholm)
from .realize import realize_sc, shift_realizable
from .space_calculus import (DEFAULT_KS, ISOMORPHIC, RELATION_NAMES, Atom, IdealZ,
                             RelationTable, SpaceScenario, VerdictKind, atoms_of,
                             describe_space, direct_sum, eae_index, iphi_of, isc_bounds,
                             sc_index, verdict)
from .symbol import LaurentSymbol

_KINDS = ("operator", "space")


def _type_name(v) -> str:
    return {dict: "object", list: "array", str: "string", bool: "boolean",
            int: "integer", float: "number"}.get(type(v), type(v).__name__)


def _expect(value, kinds, path: str):
    if isinstance(value, bool) and bool not in kinds:
        raise SchemaError(f"expected {' or '.join(_type_name(k()) for k in kinds)}, "
                          f"got boolean", path)
    if not isinstance(value, kinds):
        want = " or ".join(_type_name(k()) for k in kinds)
        raise SchemaError(f"expected {want}, got {_type_name(value)}", path)
    return value


def _field(obj: dict, key: str, kinds, path: str, default=...):
    if key not in obj:
        if default is ...:
            raise SchemaError(f"missing field {key!r}", path)
        return default
    return _expect(obj[key], kinds, f"{path}.{key}")


def _no_extra(obj: dict, allowed, path: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise SchemaError(f"unknown field {extra[0]!r}", path)


def parse_rational(v, path: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError("rationals are integers or strings \"p/q\"", path)
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"not a rational number: {v!r}", path) from None


def _int(v, path: str) -> int:
    return _expect(v, (int,), path)


def load_json(path: str):
    """Read a scenario file; JSON syntax errors become SchemaErrors with a position."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read file: {exc.strerror}", path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}",
                          f"{path}:{exc.lineno}:{exc.colno}") from None


# --- operator payloads --------------------------------------------------------------

def parse_factor(v, path: str):
    if isinstance(v, dict):
        _no_extra(v, ("fin",), path)
        n = _int(_field(v, "fin", (int,), path), f"{path}.fin")
        if n < 0:
            raise SchemaError("finite dimension must be nonnegative", f"{path}.fin")
        return Fin(n)
    s = _expect(v, (str,), path).strip()
    if s == "Seq":
        return Seq()
    if s.startswith("Fin(") and s.endswith(")"):
        try:
            n = int(s[4:-1])
        except ValueError:
            n = -1
        if n >= 0:
            return Fin(n)
    raise SchemaError(f"factor must be \"Seq\", \"Fin(n)\" or {{\"fin\": n}}, got {s!r}", path)


def parse_shape(v, path: str) -> SpaceShape:
    if isinstance(v, str):
        return SpaceShape.of(parse_factor(v, path))
    items = _expect(v, (list,), path)
    if not items:
        raise SchemaError("a shape needs at least one factor", path)
    return SpaceShape(tuple(parse_factor(f, f"{path}[{i}]") for i, f in enumerate(items)))


def parse_entry(v, path: str) -> SeqOp:
    if v == "0" or (type(v) is int and v == 0):
        return SeqOp()
    if v == "I":
        return SeqOp(LaurentSymbol.one())
    obj = _expect(v, (dict,), path)
    _no_extra(obj, ("symbol", "correction", "matrix"), path)
    if "matrix" in obj:
        if "symbol" in obj or "correction" in obj:
            raise SchemaError("\"matrix\" excludes \"symbol\" and \"correction\"", path)
        rows = _expect(obj["matrix"], (list,), f"{path}.matrix")
        corr = {}
        width = None
        for i, row in enumerate(rows):
            rp = f"{path}.matrix[{i}]"
            row = _expect(row, (list,), rp)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise SchemaError("ragged matrix rows", rp)
            for j, x in enumerate(row):
                val = parse_rational(x, f"{rp}[{j}]")
                if val:
                    corr[(i + 1, j + 1)] = val
        return SeqOp(LaurentSymbol(), Correction.from_map(corr))
    coeffs = {}
    for i, term in enumerate(_field(obj, "symbol", (list,), path, [])):
        tp = f"{path}.symbol[{i}]"
        term = _expect(term, (list,), tp)
        if len(term) != 2:
            raise SchemaError("symbol terms are [offset, \"p/q\"]", tp)
        off = _int(term[0], f"{tp}[0]")
        if off in coeffs:
            raise SchemaError(f"offset {off} repeated", tp)
        coeffs[off] = parse_rational(term[1], f"{tp}[1]")
    corr = {}
    for i, term in enumerate(_field(obj, "correction", (list,), path, [])):
        tp = f"{path}.correction[{i}]"
        term = _expect(term, (list,), tp)
        if len(term) != 3:
            raise SchemaError("correction terms are [row, col, \"p/q\"]", tp)
        r, c = _int(term[0], f"{tp}[0]"), _int(term[1], f"{tp}[1]")
        if r < 1 or c < 1:
            raise SchemaError("correction indices start at 1", tp)
        if (r, c) in corr:
            raise SchemaError(f"entry ({r}, {c}) repeated", tp)
        corr[(r, c)] = parse_rational(term[2], f"{tp}[2]")
    return SeqOp(LaurentSymbol.from_map(coeffs), Correction.from_map(corr))


def parse_operator(v, shapes: dict, path: str) -> BlockOp:
    obj = _expect(v, (dict,), path)
    _no_extra(obj, ("domain", "codomain", "blocks"), path)

    def shape_of(key):
        ref = obj.get(key, "Seq")
        if isinstance(ref, str) and ref in shapes:
            return shapes[ref]
        return parse_shape(ref, f"{path}.{key}")

    dom, cod = shape_of("domain"), shape_of("codomain")
    rows = _field(obj, "blocks", (list,), path)
    if len(rows) != len(cod):
        raise SchemaError(f"{len(rows)} block rows for a codomain with {len(cod)} factors",
                          f"{path}.blocks")
    grid = []
    for i, row in enumerate(rows):
        rp = f"{path}.blocks[{i}]"
        row = _expect(row, (list,), rp)
        if len(row) != len(dom):
            raise SchemaError(f"{len(row)} entries for a domain with {len(dom)} factors", rp)
        grid.append(tuple(parse_entry(e, f"{rp}[{j}]") for j, e in enumerate(row)))
    try:
        return BlockOp(dom, cod, tuple(grid))
    except ComputationError as exc:
        raise SchemaError(str(exc), f"{path}.blocks") from None


# --- operator programs --------------------------------------------------------------

class OperationFailed(ComputationError):
    """A program step raised; names the operation and the step."""

    def __init__(self, operation: str, path: str, cause: Exception):
        self.operation = operation
        self.path = path
        self.cause = cause
        super().__init__(f"{operation} failed at {path}: {type(cause).__name__}: {cause}")


def _shape_json(shape: SpaceShape) -> list:
    return [str(f) for f in shape]


def _op_json(t) -> dict:
    return {"domain": _shape_json(t.domain), "codomain": _shape_json(t.codomain)}


class _Ctx:
    def __init__(self, window: int, tolerance: float):
        self.window = window
        self.tolerance = tolerance

    def data(self, t):
        return fredholm_data(t, tolerance=self.tolerance)


def _status(*datas) -> str:
    return "exact" if all(d.certified for d in datas) else "non-certified"


def _run_fredholm_data(ctx, t):
    d = ctx.data(t)
    return d, {"alpha": d.alpha, "beta": d.beta, "index": d.index}, _status(d)


def _run_index(ctx, t):
    i = index(t)
    return i, i, "exact"


def _run_is_fredholm(ctx, t):
    ok = is_fredholm(t)
    return ok, ok, "exact"


def _run_eae_check(ctx, u, v):
    du, dv = ctx.data(u), ctx.data(v)
    ok = eae_check(du, dv)
    return ok, ok, _status(du, dv)


def _run_perturb_kernel(ctx, t, m):
    r = perturb_kernel(t, m)
    d = ctx.data(t + r)
    return r, {"alpha": d.alpha, "index": d.index}, _status(d)


def _run_binary(fn):
    def run(ctx, a, b):
        out = fn(a, b)
        return out, _op_json(out), "exact"
    return run


def _witness_json(ctx, w):
    d = ctx.data(w.product())
    return {"alpha": d.alpha, "beta": d.beta, "index": d.index}, _status(d)


def _run_witness(ctx, s, t):
    w = Witness(s, t)
    return (w, *_witness_json(ctx, w))


def _run_witness_from_complemented(ctx, r, z=None):
    w = witness_from_complemented(r, z)
    return (w, *_witness_json(ctx, w))


def _run_witness_swap(ctx, w):
    # I - TS has the same kernel and cokernel dimensions as I - ST
    w2 = Witness(w.t, w.s)
    return (w2, *_witness_json(ctx, w2))


def _run_perturb_witness(ctx, w, m):
    w2 = perturb_witness(w, m)
    return (w2, *_witness_json(ctx, w2))


def _run_witness_power(ctx, w, m):
    w2 = witness_power(w, m)
    return (w2, *_witness_json(ctx, w2))


def _run_witness_compress(ctx, w, u, v):
    c = witness_compress(w, u, v)
    return c, {"index": c.index}, "exact"


def _run_sc_construct(ctx, w, u, v):
    sc = sc_construct(w, u, v)
    return sc, {"a": _op_json(sc.a), "d": _op_json(sc.d)}, "exact"


def _run_sc_verify(ctx, u, v, sc):
    ok = sc_verify(u, v, sc, ctx.window)
    return ok, ok, "exact"


def _run_sc_extend(ctx, sc, x1, y1):
    out = sc_extend_blockdiag(sc, x1, y1)
    return out, {"a": _op_json(out.a), "d": _op_json(out.d)}, "exact"


def _run_eae_construct(ctx, u, v):
    ext = eae_construct(u, v)
    return ext, {"x0": _shape_json(ext.x0), "y0": _shape_json(ext.y0)}, "exact"


def _run_eae_verify(ctx, u, v, ext):
    ok = eae_verify(u, v, ext, ctx.window)
    return ok, ok, "exact"


# name -> (argument kinds, runner); "?" marks an argument that may be null or omitted
PROGRAM_OPS = {
    "fredholm_data": (("op",), _run_fredholm_data),
    "index": (("op",), _run_index),
    "is_fredholm": (("op",), _run_is_fredholm),
    "eae_check": (("op", "op"), _run_eae_check),
    "perturb_kernel": (("op", "int"), _run_perturb_kernel),
    "compose": (("op", "op"), _run_binary(block_compose)),
    "add": (("op", "op"), _run_binary(block_add)),
    "witness": (("op", "op"), _run_witness),
    "witness_from_complemented": (("op", "shape?"), _run_witness_from_complemented),
    "witness_swap": (("witness",), _run_witness_swap),
    "perturb_witness": (("witness", "int"), _run_perturb_witness),
    "witness_power": (("witness", "int"), _run_witness_power),
    "witness_compress": (("witness", "op", "op"), _run_witness_compress),
    "sc_construct": (("witness?", "op", "op"), _run_sc_construct),
    "sc_verify": (("op", "op", "couple"), _run_sc_verify),
    "sc_extend_blockdiag": (("couple", "shape", "shape"), _run_sc_extend),
    "eae_construct": (("op", "op"), _run_eae_construct),
    "eae_verify": (("op", "op", "extension"), _run_eae_verify),
}


_KIND_TYPES = {"op": BlockOp, "witness": Witness, "couple": SchurCouple,
               "extension": Extension}


def _resolve(arg, kind: str, env: dict, shapes: dict, path: str):
    optional = kind.endswith("?")
    kind = kind.rstrip("?")
    if arg is None:
        if optional:
            return None
        raise SchemaError(f"argument of kind {kind} may not be null", path)
    if kind == "int":
        return _int(arg, path)
    if kind == "shape":
        if isinstance(arg, str) and arg in shapes:
            return shapes[arg]
        return parse_shape(arg, path)
    name = _expect(arg, (str,), path)
    if name not in env:
        raise SchemaError(f"undefined name {name!r}", path)
    value = env[name]
    if not isinstance(value, _KIND_TYPES[kind]):
        raise SchemaError(f"{name!r} is not a {kind}", path)
    return value


def _matches(expected, actual) -> bool:
    if isinstance(expected, dict) and isinstance(actual, dict):
        return all(k in actual and _matches(v, actual[k]) for k, v in expected.items())
    if isinstance(expected, bool) or isinstance(actual, bool):
        return expected is actual
    return expected == actual


def _validate_program(program, shapes: dict, names: set, path: str) -> list:
    steps = []
    defined = set(names)
    for i, step in enumerate(_expect(program, (list,), path)):
        sp = f"{path}[{i}]"
        step = _expect(step, (dict,), sp)
        _no_extra(step, ("op", "args", "as", "expect", "citation"), sp)
        op = _field(step, "op", (str,), sp)
        if op not in PROGRAM_OPS:
            raise SchemaError(f"unknown operation {op!r}", f"{sp}.op")
        kinds, _ = PROGRAM_OPS[op]
        args = _field(step, "args", (list,), sp, [])
        required = sum(1 for k in kinds if not k.endswith("?"))
        if not required <= len(args) <= len(kinds):
            raise SchemaError(f"{op} takes {len(kinds)} arguments, got {len(args)}",
                              f"{sp}.args")
        for j, (a, k) in enumerate(zip(args, kinds)):
            if k.rstrip("?") not in ("int", "shape") and a is not None:
                if _expect(a, (str,), f"{sp}.args[{j}]") not in defined:
                    raise SchemaError(f"undefined name {a!r}", f"{sp}.args[{j}]")
        target = _field(step, "as", (str,), sp, None)
        if target is not None:
            if target in defined:
                raise SchemaError(f"name {target!r} already defined", f"{sp}.as")
            defined.add(target)
        _field(step, "citation", (str,), sp, "")
        steps.append(step)
    return steps


def parse_operator_scenario(doc: dict, path: str = "$") -> dict:
    _no_extra(doc, ("kind", "description", "shapes", "operators", "program"), path)
    shapes = {}
    for name, v in _field(doc, "shapes", (dict,), path, {}).items():
        shapes[name] = parse_shape(v, f"{path}.shapes.{name}")
    ops = {}
    for name, v in _expect(_field(doc, "operators", (dict,), path), (dict,),
                           f"{path}.operators").items():
        ops[name] = parse_operator(v, shapes, f"{path}.operators.{name}")
    steps = _validate_program(_field(doc, "program", (list,), path), shapes, set(ops),
                              f"{path}.program")
    return {"description": doc.get("description", ""), "shapes": shapes, "operators": ops,
            "program": steps}


def run_operator_scenario(sc: dict, window: int = 50, tolerance: float = 1e-9) -> dict:
    ctx = _Ctx(window, tolerance)
    env = dict(sc["operators"])
    computed, trail, expectations = [], [], []
    for i, step in enumerate(sc["program"]):
        sp = f"program[{i}]"
        op = step["op"]
        kinds, runner = PROGRAM_OPS[op]
        args = [_resolve(a, k, env, sc["shapes"], f"{sp}.args[{j}]")
                for j, (a, k) in enumerate(zip(step.get("args", []), kinds))]
        try:
            value, result, status = runner(ctx, *args)
        except ComputationError as exc:
            raise OperationFailed(op, sp, exc) from exc
        if step.get("as"):
            env[step["as"]] = value
        computed.append({"step": i, "op": op, "args": step.get("args", []),
                         "as": step.get("as"), "result": result, "status": status})
        if step.get("citation"):
            trail.append(f"{op}: {step['citation']}")
        if "expect" in step:
            expectations.append({"path": sp, "claim": op, "expected": step["expect"],
                                 "actual": result, "citation": step.get("citation", ""),
                                 "pass": _matches(step["expect"], result)})
    inputs = {
        "kind": "operator",
        "description": sc["description"],
        "shapes": {k: _shape_json(v) for k, v in sorted(sc["shapes"].items())},
        "operators": {k: _op_json(v) for k, v in sorted(sc["operators"].items())},
        "program": [{"op": s["op"], "args": s.get("args", []), "as": s.get("as")}
                    for s in sc["program"]],
    }
    return {"inputs": inputs, "computed": computed, "verdicts": [], "rule_trail": trail,
            "expectations": expectations, "pass": all(e["pass"] for e in expectations)}


# --- space scenarios ----------------------------------------------------------------

def _split_expr(v, path: str) -> list:
    if isinstance(v, list):
        return [_expect(n, (str,), f"{path}[{i}]").strip() for i, n in enumerate(v)]
    s = _expect(v, (str,), path)
    names = [n.strip() for n in s.replace("⊕", "+").split("+")]
    if not all(names):
        raise SchemaError(f"malformed sum {s!r}", path)
    return names


def _desc(names: list, atoms: dict, path: str):
    for n in names:
        if n not in atoms:
            raise SchemaError(f"undefined atom {n!r}", path)
    if not names:
        raise SchemaError("empty sum", path)
    return direct_sum(*(atoms[n] for n in names))


def _ideal_gen(v, path: str) -> int:
    if isinstance(v, int) and not isinstance(v, bool):
        return abs(v)
    s = _expect(v, (str, int), path).strip()
    if s in ("{0}", "0"):
        return 0
    if s == "Z":
        return 1
    if s.endswith("Z") and s[:-1].isdigit():
        return int(s[:-1])
    raise SchemaError(f"ideal must be \"{{0}}\", \"Z\", \"nZ\" or an integer, got {s!r}", path)


_CLAIMS = ("eae", "sc", "isc", "verdict")


def parse_space_scenario(doc: dict, path: str = "$") -> dict:
    _no_extra(doc, ("kind", "description", "atoms", "relations", "complemented", "sc_facts",
                    "pairs", "ks", "expectations"), path)
    atoms = {}
    for i, a in enumerate(_field(doc, "atoms", (list,), path)):
        ap = f"{path}.atoms[{i}]"
        a = _expect(a, (dict,), ap)
        _no_extra(a, ("name", "iphi", "flags", "citation"), ap)
        name = _field(a, "name", (str,), ap)
        if name in atoms:
            raise SchemaError(f"atom {name!r} declared twice", f"{ap}.name")
        if "iphi" not in a:
            raise SchemaError("missing field 'iphi' (use null when unknown)", ap)
        iphi = a["iphi"]
        if iphi is not None and (_int(iphi, f"{ap}.iphi") < 0):
            raise SchemaError("iphi generator must be nonnegative", f"{ap}.iphi")
        flags = _field(a, "flags", (dict,), ap, {})
        _no_extra(flags, ("has_complemented_square",), f"{ap}.flags")
        square = _field(flags, "has_complemented_square", (bool,), f"{ap}.flags", False)
        atoms[name] = Atom(name, iphi, square, _field(a, "citation", (str,), ap, ""))
    rel = RelationTable()
    for i, r in enumerate(_field(doc, "relations", (list,), path, [])):
        rp = f"{path}.relations[{i}]"
        r = _expect(r, (list,), rp)
        if len(r) not in (3, 4):
            raise SchemaError("relations are [atom, atom, relation, citation?]", rp)
        a, b, kind = (_expect(x, (str,), f"{rp}[{j}]") for j, x in enumerate(r[:3]))
        for j, n in enumerate((a, b)):
            if n not in atoms:
                raise SchemaError(f"undefined atom {n!r}", f"{rp}[{j}]")
        if kind != ISOMORPHIC and kind not in RELATION_NAMES:
            allowed = ", ".join(sorted(RELATION_NAMES) + [ISOMORPHIC])
            raise SchemaError(f"unknown relation {kind!r} (one of {allowed})", f"{rp}[2]")
        cite = _expect(r[3], (str,), f"{rp}[3]") if len(r) == 4 else ""
        try:
            rel.declare(a, b, kind, cite)
        except ValueError as exc:
            raise SchemaError(str(exc), rp) from None
    for i, c in enumerate(_field(doc, "complemented", (list,), path, [])):
        cp = f"{path}.complemented[{i}]"
        c = _expect(c, (list,), cp)
        if len(c) not in (2, 3):
            raise SchemaError("complemented facts are [atom, sum, citation?]", cp)
        atom = _expect(c[0], (str,), f"{cp}[0]")
        _desc([atom], atoms, f"{cp}[0]")
        within = _split_expr(c[1], f"{cp}[1]")
        _desc(within, atoms, f"{cp}[1]")
        rel.add_complemented(atom, within, _expect(c[2], (str,), f"{cp}[2]") if len(c) == 3 else "")
    for i, f in enumerate(_field(doc, "sc_facts", (list,), path, [])):
        fp = f"{path}.sc_facts[{i}]"
        f = _expect(f, (dict,), fp)
        _no_extra(f, ("x", "y", "k", "citation"), fp)
        xs = _split_expr(_field(f, "x", (str, list), fp), f"{fp}.x")
        ys = _split_expr(_field(f, "y", (str, list), fp), f"{fp}.y")
        _desc(xs, atoms, f"{fp}.x")
        _desc(ys, atoms, f"{fp}.y")
        rel.add_sc_fact(xs, ys, _field(f, "k", (int,), fp), _field(f, "citation", (str,), fp, ""))
    pairs = []
    for i, p in enumerate(_field(doc, "pairs", (list,), path)):
        pp = f"{path}.pairs[{i}]"
        p = _expect(p, (list,), pp)
        if len(p) != 2:
            raise SchemaError("pairs are [X, Y]", pp)
        pairs.append(tuple(_desc(_split_expr(e, f"{pp}[{j}]"), atoms, f"{pp}[{j}]")
                           for j, e in enumerate(p)))
    if not pairs:
        raise SchemaError("at least one pair is required", f"{path}.pairs")
    ks = [_int(k, f"{path}.ks[{i}]")
          for i, k in enumerate(_field(doc, "ks", (list,), path, list(DEFAULT_KS)))]
    expectations = []
    for i, e in enumerate(_field(doc, "expectations", (list,), path, [])):
        ep = f"{path}.expectations[{i}]"
        e = _expect(e, (dict,), ep)
        _no_extra(e, ("pair", "claim", "k", "expected", "citation"), ep)
        pair = _field(e, "pair", (int,), ep, 0)
        if not 0 <= pair < len(pairs):
            raise SchemaError(f"no pair with index {pair}", f"{ep}.pair")
        claim = _field(e, "claim", (str,), ep)
        if claim not in _CLAIMS:
            raise SchemaError(f"claim must be one of {', '.join(_CLAIMS)}", f"{ep}.claim")
        if "expected" not in e:
            raise SchemaError("missing field 'expected'", ep)
        item = {"pair": pair, "claim": claim, "citation": _field(e, "citation", (str,), ep, "")}
        if claim == "verdict":
            item["k"] = _field(e, "k", (int,), ep)
            exp = _field(e, "expected", (str,), ep)
            if exp not in {v.value for v in VerdictKind}:
                raise SchemaError(f"unknown verdict {exp!r}", f"{ep}.expected")
            item["expected"] = exp
        elif claim == "isc":
            item["expected"] = str(IdealZ(_ideal_gen(e["expected"], f"{ep}.expected")))
        else:
            item["expected"] = _int(e["expected"], f"{ep}.expected")
        expectations.append(item)
    return {"description": doc.get("description", ""), "atoms": atoms, "rel": rel,
            "pairs": pairs, "ks": ks, "expectations": expectations}


def space_document(sc: dict) -> dict:
    """JSON document for a parsed space scenario; parses back to the same scenario."""
    rel = sc["rel"]
    atoms = []
    for a in sc["atoms"].values():
        item = {"name": a.name, "iphi": a.iphi}
        if a.complemented_square:
            item["flags"] = {"has_complemented_square": True}
        if a.citation:
            item["citation"] = a.citation
        atoms.append(item)
    doc = {
        "kind": "space",
        "atoms": atoms,
        "relations": [[a, b, r, c] if c else [a, b, r] for a, b, r, c in rel.declared],
        "complemented": [[f.atom, list(f.within), f.citation] if f.citation
                         else [f.atom, list(f.within)] for f in rel.complemented],
        "sc_facts": [{"x": list(f.x), "y": list(f.y), "k": f.k, "citation": f.citation}
                     for f in rel.sc_facts],
        "pairs": [[[a.name for a in atoms_of(x)], [a.name for a in atoms_of(y)]]
                  for x, y in sc["pairs"]],
        "ks": list(sc["ks"]),
        "expectations": [dict(e) for e in sc["expectations"]],
    }
    if sc.get("description"):
        doc["description"] = sc["description"]
    return doc


def from_builtin(s: SpaceScenario) -> dict:
    atoms = {}
    for a in atoms_of(s.x) + atoms_of(s.y):
        atoms.setdefault(a.name, a)
    exp = []
    for claim in ("eae", "sc", "isc"):
        v = s.expected.get(claim)
        if v is not None:
            exp.append({"pair": 0, "claim": claim, "citation": s.citation,
                        "expected": str(IdealZ(v)) if claim == "isc" else v})
    for k, kind in s.expected_verdicts().items():
        exp.append({"pair": 0, "claim": "verdict", "k": k, "expected": kind.value,
                    "citation": s.citation})
    return {"description": f"builtin {s.name} ({s.citation})", "atoms": atoms,
            "rel": s.rel, "pairs": [(s.x, s.y)], "ks": list(s.ks), "expectations": exp}


def _number(v) -> dict:
    if isinstance(v, int):
        return {"value": v, "status": "exact"}
    return {"range": {"lo": v.lo, "hi": v.hi, "step": v.step, "may_be_zero": v.may_be_zero},
            "text": str(v), "status": "exact"}


def _bounds_json(b) -> dict:
    return {"lower": str(b.lower), "upper": str(b.upper), "exact": b.exact, "status": "exact"}


def _algorithm(x, y, rel, eae, bounds, window: int) -> tuple[list, dict | None]:
    """Decision steps: eae first, then one SC test at k = eae."""
    steps = [f"eae = {eae}"]
    check = None
    if eae == 0:
        steps.append("eae = 0: SC_k = EAE_k for every k (Prop 1.6(iii))")
        return steps, check
    if not isinstance(eae, int):
        steps.append("eae not determined: no conclusion for all k")
        return steps, check
    v = verdict(x, y, rel, eae, bounds)
    steps.append(f"SC test at k = {eae}: {v.kind.value}")
    if v.kind is VerdictKind.EQUAL_NONEMPTY:
        steps.append("sc = eae: SC_k = EAE_k for every k (Prop 1.6(iii))")
        if shift_realizable(x, y):
            r = realize_sc(x, y, eae, window)
            check = {"k": eae, "sc_verify": r.verified, "window": window, "status": "exact"}
            steps.append(f"model coupling at k = {eae} verified: {r.verified}")
    elif v.kind is VerdictKind.STRICTLY_CONTAINED:
        steps.append(f"SC_{eae} ⊊ EAE_{eae}: EAE and SC are not equivalent")
    else:
        steps.append("undecided (Question 5.10)")
    return steps, check


def run_space_scenario(sc: dict, window: int = 50) -> dict:
    rel = sc["rel"]
    computed, verdicts, trail = [], [], []
    actual: dict = {}
    for i, (x, y) in enumerate(sc["pairs"]):
        try:
            b = isc_bounds(x, y, rel)
        except ComputationError as exc:
            raise OperationFailed("isc_bounds", f"pairs[{i}]", exc) from exc
        eae = eae_index(x, y, rel)
        scv = sc_index(x, y, rel, b)
        steps, check = _algorithm(x, y, rel, eae, b, window)
        computed.append({
            "pair": i, "x": describe_space(x), "y": describe_space(y),
            "iphi_x": _bounds_json(iphi_of(x, rel)), "iphi_y": _bounds_json(iphi_of(y, rel)),
            "eae": _number(eae), "isc": _bounds_json(b), "sc": _number(scv),
            "isc_closed_under_addition": b.closed, "algorithm": steps, "model_check": check,
        })
        trail.extend(f"pair {i}: {t}" for t in b.trail)
        actual[(i, "eae")] = eae if isinstance(eae, int) else str(eae)
        actual[(i, "sc")] = scv if isinstance(scv, int) else str(scv)
        actual[(i, "isc")] = str(b.upper) if b.exact else f"{b.lower} ⊆ I_SC ⊆ {b.upper}"
        for k in sc["ks"]:
            v = verdict(x, y, rel, k, b)
            verdicts.append({"pair": i, "k": k, "verdict": v.kind.value, "trail": list(v.trail)})
            actual[(i, "verdict", k)] = v.kind.value
    expectations = []
    for e in sc["expectations"]:
        key = (e["pair"], e["claim"]) + ((e["k"],) if e["claim"] == "verdict" else ())
        if key not in actual:  # verdict at a k outside ks
            x, y = sc["pairs"][e["pair"]]
            actual[key] = verdict(x, y, rel, e["k"]).kind.value
        got = actual[key]
        expectations.append({**e, "actual": got, "pass": got == e["expected"]})
    return {"inputs": space_document(sc), "computed": computed, "verdicts": verdicts,
            "rule_trail": trail, "expectations": expectations,
            "pass": all(e["pass"] for e in expectations)}


def parse_scenario(doc, path: str = "$") -> tuple[str, dict]:
    doc = _expect(doc, (dict,), path)
    kind = _field(doc, "kind", (str,), path)
    if kind == "operator":
        return kind, parse_operator_scenario(doc, path)
    if kind == "space":
        return kind, parse_space_scenario(doc, path)
    raise SchemaError(f"kind must be one of {', '.join(_KINDS)}", f"{path}.kind")


def run_scenario(kind: str, sc: dict, window: int = 50, tolerance: float = 1e-9) -> dict:
    if kind == "operator":
        return run_operator_scenario(sc, window, tolerance)
    return run_space_scenario(sc, window)


def render_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
