"""Command-line front end: JSON problem documents in, JSON reports out.

    cwcycles theta --input doc.json
    cwcycles run --input a.json --input b.json --jobs 2 --output reports.json

Exit status: 0 ok, 2 rejected input, 3 unsupported case, 4 falsified check.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import jsonschema

from .errors import FalsifiedCheck, FieldMismatch, ParseError, RejectedInput, UnsupportedCase
from .gersten import BoundaryDatum, CWCycle, d1_boundary, homotopy_check, theta, verify_cycle_difference
from .orient import LocalOrientation, compare_orientations, validate
from .points import point_from_generators
from .polyring import PolyRing
from .scalars import get_trial_division_bound, parse_field, set_trial_division_bound
from .witt import DiagonalForm, GWClass, decide_isometry, diagonalize, fundamental_ideal_level, gw_invariants

COMMANDS = ("validate", "theta", "compare", "homotopy-check", "d1", "verify-difference", "witt")
EXIT = {"ok": 0, "rejected": 2, "unsupported": 3, "falsified": 4}
WITT_OPERATIONS = ("diagonalize", "invariants", "isometry", "sum", "level")

_strings = {"type": "array", "items": {"type": "string"}}
_orientation = {
    "type": "object",
    "properties": {
        "generators": _strings,
        "ideal": _strings,
        "decomposition": {"type": "array", "items": _strings},
    },
    "required": ["generators"],
    "additionalProperties": False,
}
_boundary = {
    "type": "object",
    "properties": {"g": _strings, "form": _strings, "t": {"type": "string"},
                   "decomposition": {"type": "array", "items": _strings}},
    "required": ["g", "form", "t"],
    "additionalProperties": False,
}
_witness = dict(_boundary, properties=dict(_boundary["properties"], sign={"enum": [1, -1]}),
                required=["sign", "g", "form", "t"])
_term = {
    "type": "object",
    "properties": {"prime": _strings, "form": _strings,
                   "hyperbolic": {"type": "integer"}, "multiplicity": {"type": "integer"}},
    "required": ["prime", "form", "multiplicity"],
    "additionalProperties": False,
}
SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "field": {"type": "string"},
        "variables": _strings,
        "homotopy_variable": {"type": "string"},
        "order": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "orientation": _orientation,
        "orientations": {"type": "array", "items": _orientation, "minItems": 2, "maxItems": 2},
        "reference": _orientation,
        "boundary": _boundary,
        "cycles": {"type": "array", "items": {"type": "array", "items": _term}, "minItems": 2, "maxItems": 2},
        "witnesses": {"type": "array", "items": _witness},
        "witt": {
            "type": "object",
            "properties": {
                "operation": {"enum": list(WITT_OPERATIONS)},
                "matrix": {"type": "array", "items": _strings},
                "forms": {"type": "array", "items": _strings},
            },
            "required": ["operation"],
            "additionalProperties": False,
        },
    },
    "required": ["field"],
    "additionalProperties": False,
}
_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _error_order(err):
    return [(isinstance(p, str), p) for p in err.absolute_path]

REQUIRED = {
    "validate": ("variables", "n", "orientation"),
    "theta": ("variables", "n", "orientation"),
    "compare": ("variables", "n", "orientations"),
    "homotopy-check": ("variables", "n", "orientation", "homotopy_variable"),
    "d1": ("variables", "boundary"),
    "verify-difference": ("variables", "n", "cycles"),
    "witt": ("witt",),
}


class SchemaError(RejectedInput):
    def __init__(self, message, key):
        self.key = key
        super().__init__(f"schema violation at '{key}': {message}")


def _key_path(parts):
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


# -- documents -------------------------------------------------------------------------

class Document:
    """A schema-checked problem document with polynomials in canonical print form."""

    def __init__(self, data, command=None):
        errors = sorted(_VALIDATOR.iter_errors(data), key=_error_order)
        if errors:
            # report the first failing key in document order
            raise SchemaError(errors[0].message, _key_path(errors[0].absolute_path))
        cmd = command or data.get("command")
        if cmd is None:
            raise SchemaError("no command given", "command")
        if command and data.get("command", command) != command:
            raise SchemaError(f"document is for {data['command']!r}, not {command!r}", "command")
        for key in REQUIRED[cmd]:
            if key not in data:
                raise SchemaError("required key missing", key)
        self.command = cmd
        self.data = data
        self.field = self._at("field", parse_field, data["field"])
        self.ring = None
        if "variables" in data:
            self.ring = self._at("variables", lambda v: PolyRing(self.field, v, data.get("order", "grevlex"),
                                                                    data.get("homotopy_variable")), data["variables"])
        self.normalized = self._normalize(data)

    def _at(self, key, fn, value):
        try:
            return fn(value)
        except ParseError as exc:
            raise ParseError(f"in '{key}': {exc}") from None
        except KeyError as exc:
            raise SchemaError(f"undeclared variable {exc}", key) from None
        except (RejectedInput, FieldMismatch, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(str(exc), key) from None

    def poly(self, key, text):
        return self._at(key, self.ring.parse, text)

    def polys(self, key, texts):
        return [self.poly(f"{key}[{i}]", s) for i, s in enumerate(texts)]

    def _normalize(self, data):
        out = {"command": self.command, "field": str(self.field)}
        for k in ("variables", "n", "homotopy_variable", "order"):
            if k in data:
                out[k] = data[k]
        if "order" in out:
            out["order"] = str(self.ring.order)

        def norm_list(key, xs):
            return [str(p) for p in self.polys(key, xs)]

        def norm_block(key, block, fields):
            res = {}
            for f in sorted(block):
                v = block[f]
                if f in fields and f == "decomposition":
                    res[f] = [norm_list(f"{key}.{f}[{i}]", gs) for i, gs in enumerate(v)]
                elif f in fields and isinstance(v, list):
                    res[f] = norm_list(f"{key}.{f}", v)
                elif f in fields:
                    res[f] = str(self.poly(f"{key}.{f}", v))
                else:
                    res[f] = v
            return res

        polyfields = ("generators", "ideal", "decomposition", "g", "form", "t", "prime")
        for k in ("orientation", "reference", "boundary"):
            if k in data:
                out[k] = norm_block(k, data[k], polyfields)
        if "orientations" in data:
            out["orientations"] = [norm_block(f"orientations[{i}]", b, polyfields)
                                   for i, b in enumerate(data["orientations"])]
        if "witnesses" in data:
            out["witnesses"] = [norm_block(f"witnesses[{i}]", b, polyfields) for i, b in enumerate(data["witnesses"])]
        if "cycles" in data:
            out["cycles"] = [[norm_block(f"cycles[{i}][{j}]", t, polyfields) for j, t in enumerate(c)]
                             for i, c in enumerate(data["cycles"])]
        if "witt" in data:
            w = dict(data["witt"])
            if "matrix" in w:
                w["matrix"] = [[self.field.format(self._elem(f"witt.matrix[{i}][{j}]", x)) for j, x in enumerate(r)]
                               for i, r in enumerate(w["matrix"])]
            if "forms" in w:
                w["forms"] = [[self.field.format(self._elem(f"witt.forms[{i}][{j}]", x)) for j, x in enumerate(f)]
                              for i, f in enumerate(w["forms"])]
            out["witt"] = w
        return out

    def _elem(self, key, text):
        return self._at(key, self.field.parse_raw, text)

    def to_json(self):
        return self.normalized

    def __eq__(self, other):
        return isinstance(other, Document) and self.normalized == other.normalized

    __hash__ = None

    # typed accessors
    def orientation(self, block, key):
        return LocalOrientation(self.ring, self.data["n"], self.polys(f"{key}.generators", block["generators"]),
                                ideal=self.polys(f"{key}.ideal", block["ideal"]) if "ideal" in block else None,
                                decomposition=block.get("decomposition"))

    def boundary(self, block, key):
        return BoundaryDatum(self.polys(f"{key}.g", block["g"]), self.polys(f"{key}.form", block["form"]),
                             self.poly(f"{key}.t", block["t"]), block.get("decomposition"))

    def cycle(self, terms, key):
        cyc = CWCycle(self.ring, self.data["n"])
        for j, t in enumerate(terms):
            k = f"{key}[{j}]"
            p = point_from_generators(self.ring, self.polys(f"{k}.prime", t["prime"]))
            entries = [p.reduce(a) for a in self.polys(f"{k}.form", t["form"])]
            if any(e.is_zero() for e in entries):
                raise SchemaError("form entry vanishes at the point", f"{k}.form")
            gw = GWClass.of(p.field, entries)
            h = t.get("hyperbolic", 0)
            if h:
                gw = gw + GWClass(DiagonalForm(p.field, []), h)
            cyc._insert(p, gw, t["multiplicity"])
        return cyc

    def forms(self):
        return [DiagonalForm(self.field, [self.field.elem(self._elem("witt.forms", x)) for x in f])
                for f in self.data["witt"].get("forms", [])]


def parse_document(text, command=None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return Document(data, command)


def dump_document(doc):
    return json.dumps(doc.to_json(), sort_keys=True, indent=2) + "\n"


# -- commands --------------------------------------------------------------------------

def _cmd_validate(doc):
    o = doc.orientation(doc.data["orientation"], "orientation")
    cert = validate(o)
    result = {"orientation": o.to_json(), "certificate": cert.to_json()}
    if not cert.ok:
        return "rejected", result, cert.reason
    return "ok", result, None


def _cmd_theta(doc):
    o = doc.orientation(doc.data["orientation"], "orientation")
    ref = doc.orientation(doc.data["reference"], "reference") if "reference" in doc.data else None
    return "ok", theta(o, ref).to_json(), None


def _cmd_compare(doc):
    o1, o2 = (doc.orientation(b, f"orientations[{i}]") for i, b in enumerate(doc.data["orientations"]))
    comp = compare_orientations(o1, o2)
    res = comp.to_json()
    res["classes_equal"] = all(u.is_square() for _, u in comp.units)
    return "ok", res, None


def _cmd_homotopy(doc):
    o = doc.orientation(doc.data["orientation"], "orientation")
    return "ok", homotopy_check(o).to_json(), None


def _cmd_d1(doc):
    b = doc.boundary(doc.data["boundary"], "boundary")
    return "ok", {"datum": b.to_json(), "cycle": d1_boundary(b).to_json()}, None


def _cmd_verify(doc):
    c1, c2 = (doc.cycle(c, f"cycles[{i}]") for i, c in enumerate(doc.data["cycles"]))
    wits = [(w["sign"], doc.boundary(w, f"witnesses[{i}]")) for i, w in enumerate(doc.data.get("witnesses", []))]
    res = verify_cycle_difference(c1, c2, wits)
    if not res.ok:
        return "falsified", res.to_json(), "c1 - c2 is not the sum of the witness boundaries"
    return "ok", res.to_json(), None


def _cmd_witt(doc):
    w = doc.data["witt"]
    op = w["operation"]
    K = doc.field
    forms = doc.forms()

    def need(k):
        if len(forms) < k:
            raise SchemaError(f"operation {op!r} needs {k} form(s)", "witt.forms")

    if op == "diagonalize":
        if "matrix" not in w:
            raise SchemaError("required key missing", "witt.matrix")
        G = [[K.elem(doc._elem("witt.matrix", x)) for x in row] for row in w["matrix"]]
        D, P = diagonalize(G, K)
        return "ok", {"form": D.to_json(), "transform": [[str(x) for x in r] for r in P]}, None
    if op == "invariants":
        need(1)
        out = gw_invariants(forms[0]).to_json()
        try:
            out["fundamental_ideal_level"] = fundamental_ideal_level(forms[0])
        except UnsupportedCase:
            pass
        return "ok", {"form": forms[0].to_json(), "invariants": out}, None
    if op == "isometry":
        need(2)
        return "ok", {"forms": [f.to_json() for f in forms[:2]], "isometric": decide_isometry(forms[0], forms[1])}, None
    if op == "sum":
        need(1)
        total = GWClass.zero(K)
        for f in forms:
            total = total + GWClass(f)
        return "ok", {"gw": total.to_json(), "witt_zero": total.is_witt_zero(),
                      "witt_representative": total.witt_canonical().to_json()}, None
    need(1)
    return "ok", {"form": forms[0].to_json(), "level": fundamental_ideal_level(forms[0])}, None


HANDLERS = {
    "validate": _cmd_validate,
    "theta": _cmd_theta,
    "compare": _cmd_compare,
    "homotopy-check": _cmd_homotopy,
    "d1": _cmd_d1,
    "verify-difference": _cmd_verify,
    "witt": _cmd_witt,
}


def run(command, text, source="<input>", omit_timing=False):
    """Process one document; returns the report dict (status inside)."""
    start = time.perf_counter()
    report = {"input": source, "command": command}
    try:
        doc = parse_document(text, None if command == "run" else command)
        report["command"] = doc.command
        status, result, reason = HANDLERS[doc.command](doc)
        report["status"] = status
        report["result"] = result
        if reason:
            report["reason"] = reason
    except FalsifiedCheck as exc:
        report.update(status="falsified", reason=str(exc), details=exc.details)
    except UnsupportedCase as exc:
        report.update(status="unsupported", reason=str(exc))
    except (RejectedInput, FieldMismatch) as exc:
        report.update(status="rejected", reason=str(exc))
        if isinstance(exc, SchemaError):
            report["key"] = exc.key
    if not omit_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report


def _worker(args):
    command, path, omit_timing, bound = args
    if bound:
        set_trial_division_bound(bound)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return {"input": path, "command": command, "status": "rejected", "reason": f"cannot read input: {exc}"}
    return run(command, text, path, omit_timing)


def render_text(report):
    lines = [f"{report['input']}: {report['command']} -> {report['status']}"]
    if "reason" in report:
        lines.append(f"  reason: {report['reason']}")
    res = report.get("result") or {}
    cycles = []
    if "cycle" in res:
        cycles.append(("cycle", res["cycle"]))
    for key in ("lhs", "rhs"):
        if key in res:
            cycles.append((key, res[key]))
    for name, cyc in cycles:
        if not cyc["terms"]:
            lines.append(f"  {name}: 0")
        for t in cyc["terms"]:
            coords = ", ".join(f"{k}={v}" for k, v in t["point"]["coordinates"].items())
            cls = t["class"]
            hyp = f" + {cls['hyperbolic']}H" if cls["hyperbolic"] else ""
            lines.append(f"  {name}: ({coords}) over {t['point']['residue_field']}: "
                         f"<{','.join(cls['entries'])}>{hyp}, m={t['multiplicity']}")
    if "steps" in res:
        for s in res["steps"]:
            lines.append(f"  T={s['at']}: det Delta = {s['det']}, degree 0 agrees: {s['degree0_agrees']}, "
                         f"boundaries equal: {s['boundary_equal']}")
    for key in ("certificate", "form", "invariants", "isometric", "level", "det", "certified", "gw", "witt_zero"):
        if key in res:
            lines.append(f"  {key}: {json.dumps(res[key], sort_keys=True)}")
    if "timing" in report:
        lines.append(f"  time: {report['timing']['seconds']:.3f}s")
    return "\n".join(lines) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(prog="cwcycles", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS + ("run",),
                    help="operation to run; 'run' takes the command from each document")
    ap.add_argument("--input", action="append", required=True, help="problem document (repeatable)")
    ap.add_argument("--output", help="write the report here instead of standard output")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--trial-division-bound", type=int, default=None)
    ap.add_argument("--jobs", type=int, default=1, help="documents processed in parallel")
    ap.add_argument("--omit-timing", action="store_true", help="leave out the timing field")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    saved = get_trial_division_bound()
    try:
        return _main(args)
    finally:
        set_trial_division_bound(saved)


def _main(args):
    if args.trial_division_bound:
        set_trial_division_bound(args.trial_division_bound)
    tasks = [(args.command, path, args.omit_timing, args.trial_division_bound) for path in args.input]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_worker, tasks))
    else:
        reports = [_worker(t) for t in tasks]
    if args.format == "json":
        payload = reports[0] if len(reports) == 1 else reports
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = "".join(render_text(r) for r in reports)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return max(EXIT[r["status"]] for r in reports)


if __name__ == "__main__":
    sys.exit(main())
