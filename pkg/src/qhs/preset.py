"""
Loading, rendering and mutating preset files.

Presets are TOML documents; every algebraic entry is a string in the word
grammar (generators, ``*``, ``^``, scalar coefficients).  The search path
for preset names is the colon-separated ``QHS_PRESET_PATH`` followed by the
``presets/`` directory shipped with the package.
"""

from __future__ import annotations

import copy
import os
import re
import sys
import warnings
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

from .calculus import CalculusPreset, DualBasis, LieData, validate_preset
from .hopf import HopfPresentation, ModuleAlgebraAction, TensorElement, deglex_key, parse_raw
from .scalar import ParseError, Scalar
from .takeuchi import CotensorElement, DualFunctional, FiberComodule, FiberMap, direct_sum, tensor

PRESET_DIR = Path(__file__).parent / "presets"
ENV_VAR = "QHS_PRESET_PATH"


class PresetError(ValueError):
    """Malformed preset input; carries a location when one is known."""

    def __init__(self, message, line=None, column=None, key=None):
        self.line, self.column, self.key = line, column, key
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if key is not None:
            where.append(f"at {key}")
        super().__init__(message + (f" ({'; '.join(where)})" if where else ""))


class PresetValidationError(ValueError):
    def __init__(self, report):
        self.report = report
        first = report.failures()[0]
        super().__init__(f"preset failed validation: {first.check}: {first.witness}")


# ---------------------------------------------------------------------------
# locating and reading
# ---------------------------------------------------------------------------

def search_path():
    dirs = [Path(p) for p in os.environ.get(ENV_VAR, "").split(os.pathsep) if p]
    return dirs + [PRESET_DIR]


def find_preset(name):
    p = Path(name)
    if p.is_file():
        return p
    for d in search_path():
        for cand in (d / name, d / f"{name}.toml"):
            if cand.is_file():
                return cand
    raise FileNotFoundError(f"preset {name!r} not found in {', '.join(map(str, search_path()))}")


def read_preset_data(text):
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        msg = getattr(exc, "msg", str(exc))
        if line is None:
            m = re.search(r"line (\d+), column (\d+)", str(exc))
            if m:
                line, col = int(m.group(1)), int(m.group(2))
        raise PresetError(f"TOML syntax error: {msg}", line, col) from None


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def _need(d, key, path):
    if key not in d:
        raise PresetError(f"missing key {key!r}", key=path)
    return d[key]


def _parse(alg, text, path):
    try:
        return alg.parse(str(text))
    except ParseError as exc:
        raise PresetError(f"cannot parse {text!r}: {exc}", key=path) from None
    except KeyError as exc:
        raise PresetError(f"unknown symbol {exc} in {text!r}", key=path) from None


def _scalar(text, path):
    try:
        return Scalar.parse(str(text))
    except ParseError as exc:
        raise PresetError(f"cannot parse scalar {text!r}: {exc}", key=path) from None


def _build_algebra(name, d):
    path = f"algebra.{name}"
    gens = _need(d, "generators", path)
    idx = {g: k for k, g in enumerate(gens)}
    rules = {}
    for lhs, rhs in d.get("rules", {}).items():
        try:
            word = tuple(idx[x] for x in lhs.split())
        except KeyError as exc:
            raise PresetError(f"unknown generator {exc} in rule", key=f"{path}.rules") from None
        try:
            rules[word] = parse_raw(str(rhs), idx)
        except ParseError as exc:
            raise PresetError(f"cannot parse {rhs!r}: {exc}", key=f"{path}.rules.{lhs}") from None
    budget = int(d.get("step_budget", 10 ** 6))
    try:
        P = HopfPresentation(name, gens, rules, step_budget=budget)
    except ValueError as exc:
        raise PresetError(str(exc), key=path) from None
    P.counit_table = {g: _scalar(v, f"{path}.counit.{g}") for g, v in d.get("counit", {}).items()}
    P.antipode_table = {g: _parse(P, v, f"{path}.antipode.{g}") for g, v in d.get("antipode", {}).items()}
    P.star_table = {g: _parse(P, v, f"{path}.star.{g}") for g, v in d.get("star", {}).items()}
    cop = {}
    for g, terms in d.get("coproduct", {}).items():
        T = TensorElement((P, P), {})
        for t in terms:
            if len(t) != 3:
                raise PresetError("coproduct terms are [coefficient, left, right]",
                                  key=f"{path}.coproduct.{g}")
            c, l, r = t
            T = T + TensorElement.pure(_parse(P, l, f"{path}.coproduct.{g}"),
                                       _parse(P, r, f"{path}.coproduct.{g}")).scale(
                _scalar(c, f"{path}.coproduct.{g}"))
        cop[g] = T
    P.coproduct_table = cop
    for table in ("counit", "antipode", "star", "coproduct"):
        missing = [g for g in gens if g not in d.get(table, {})]
        if missing:
            raise PresetError(f"{table} table misses {missing}", key=path)
    return P


def _action(name, d, U, A):
    table = {}
    for X in U.generators:
        row = _need(d, X, f"actions.{name}")
        for a in A.generators:
            table[(X, a)] = _parse(A, _need(row, a, f"actions.{name}.{X}"), f"actions.{name}.{X}.{a}")
    return ModuleAlgebraAction(U, A, table, name=name, side=d.get("side", "left"))


def _labels_combination(text, V, path):
    """Parse a linear combination of basis labels of V."""
    names = {l[0]: k for k, l in enumerate(V.basis)}
    try:
        raw = parse_raw(str(text), names)
    except (ParseError, KeyError) as exc:
        raise PresetError(f"cannot parse {text!r}: {exc}", key=path) from None
    vec = [Scalar.coerce(0)] * V.dim
    for w, c in raw.terms.items():
        if len(w) != 1:
            raise PresetError(f"{text!r} is not linear in the labels of {V.name}", key=path)
        vec[w[0]] = vec[w[0]] + c
    return vec


def _element(V, A, d, path):
    coeffs = {}
    for lab, text in d.items():
        key = (lab,)
        if key not in V:
            raise PresetError(f"unknown label {lab!r}", key=path)
        coeffs[key] = _parse(A, text, f"{path}.{lab}")
    return coeffs


def build_preset(data, source="<memory>", validate=False, force=False):
    """Turn decoded preset data into a CalculusPreset."""
    algs = {n: _build_algebra(n, d) for n, d in _need(data, "algebra", "").items()}
    for n, d in data["algebra"].items():
        if "projection" in d:
            pr = d["projection"]
            tgt = algs[_need(pr, "target", f"algebra.{n}.projection")]
            algs[n].projection_target = tgt
            algs[n].projection_table = {
                g: _parse(tgt, v, f"algebra.{n}.projection.images.{g}")
                for g, v in _need(pr, "images", f"algebra.{n}.projection").items()}
    A = next((a for a in algs.values() if a.projection_target is not None), None)
    if A is None:
        raise PresetError("no algebra declares a projection", key="algebra")
    H = A.projection_target
    acts = _need(data, "actions", "")
    U = None
    for n, a in algs.items():
        if a is not A and a is not H:
            U = a
    if U is None:
        raise PresetError("no acting algebra", key="algebra")
    tangent_action = _action("tangent", _need(acts, "tangent", "actions"), U, A)
    translation_action = _action("translation", _need(acts, "translation", "actions"), U, A)
    B_gens = [_parse(A, g, "subalgebra.generators")
              for g in _need(_need(data, "subalgebra", ""), "generators", "subalgebra")]

    fibers = {}
    for n, f in _need(data, "fibers", "").items():
        basis = [(l,) for l in _need(f, "basis", f"fibers.{n}")]
        rows = _need(f, "coaction", f"fibers.{n}")
        if len(rows) != len(basis) or any(len(r) != len(basis) for r in rows):
            raise PresetError("coaction matrix shape does not match the basis", key=f"fibers.{n}")
        C = [[_parse(H, x, f"fibers.{n}.coaction") for x in r] for r in rows]
        fibers[n] = FiberComodule(n, H, basis, C, bidegree=tuple(_need(f, "bidegree", f"fibers.{n}")))

    def by_total(k):
        fs = [f for f in fibers.values() if sum(f.bidegree) == k]
        return sorted(fs, key=lambda f: tuple(-x for x in f.bidegree))

    V1 = direct_sum("V1", *by_total(1))
    V2 = direct_sum("V2", *by_total(2))

    tangent = {}
    for lab in V1.basis:
        tangent[lab] = _parse(U, _need(_need(data, "tangent", ""), lab[0], "tangent"), f"tangent.{lab[0]}")
    exterior = {}
    ext = _need(data, "exterior", "")
    for lab in V1.basis:
        entries = _need(ext, lab[0], "exterior")
        exterior[lab] = [((t,), _parse(U, e, f"exterior.{lab[0]}.{t}")) for t, e in entries.items()
                         if (t,) in V2 or _bad_label(t, "exterior")]

    V11 = tensor(V1, V1)
    W = [[Scalar.coerce(0)] * V11.dim for _ in range(V2.dim)]
    for key, text in _need(data, "wedge", "").items():
        parts = key.split()
        if len(parts) != 2 or tuple(parts[:1]) not in V1 or tuple(parts[1:]) not in V1:
            raise PresetError(f"bad wedge key {key!r}", key="wedge")
        vec = _labels_combination(text, V2, f"wedge.{key}")
        j = V11.index(tuple(parts))
        for i, x in enumerate(vec):
            W[i][j] = x
    wedge_map = FiberMap(V11, V2, W)

    star_tables = {}
    st = _need(data, "star", "")
    for deg, V in ((1, V1), (2, V2)):
        J = [[Scalar.coerce(0)] * V.dim for _ in range(V.dim)]
        for k, lab in enumerate(V.basis):
            vec = _labels_combination(_need(st, lab[0], "star"), V, f"star.{lab[0]}")
            for i, x in enumerate(vec):
                J[i][k] = x
        star_tables[deg] = J

    dual_bases, mc = {}, {}
    mcs = _need(data, "maurer_cartan", "")
    pending = []
    for n, d in _need(data, "dual_basis", "").items():
        if "union" in d:
            pending.append((n, d["union"]))
            continue
        forms = [CotensorElement(V1, A, _element(V1, A, e, f"dual_basis.{n}.forms"))
                 for e in _need(d, "forms", f"dual_basis.{n}")]
        funcs = [DualFunctional(V1, A, _element(V1, A, e, f"dual_basis.{n}.functionals"))
                 for e in _need(d, "functionals", f"dual_basis.{n}")]
        if len(forms) != len(funcs):
            raise PresetError("forms and functionals differ in number", key=f"dual_basis.{n}")
        dual_bases[n] = DualBasis(n, forms, funcs)
        mc_list = _need(mcs, n, "maurer_cartan")
        if len(mc_list) != len(forms):
            raise PresetError("one constant per form is needed", key=f"maurer_cartan.{n}")
        mc[n] = [CotensorElement(V2, A, _element(V2, A, e, f"maurer_cartan.{n}")) for e in mc_list]
    for n, parts in pending:
        for p in parts:
            if p not in dual_bases:
                raise PresetError(f"unknown dual basis {p!r}", key=f"dual_basis.{n}")
        dual_bases[n] = DualBasis(n, [e for p in parts for e in dual_bases[p].forms],
                                  [f for p in parts for f in dual_bases[p].functionals])
        mc[n] = [x for p in parts for x in mc[p]]

    lie_d = _need(data, "lie", "")
    lie = LieData(_need(lie_d, "cartan", "lie"), int(_need(lie_d, "varpi_alpha", "lie")),
                  dict(_need(lie_d, "character", "lie")))
    samples = [Fraction(s) for s in data.get("samples", ["1/2", "9/10"])]

    preset = CalculusPreset(
        name=data.get("name", "preset"), A=A, H=H, U=U,
        tangent_action=tangent_action, translation_action=translation_action,
        B_generators=B_gens, fibers=fibers, V1=V1, V2=V2, tangent=tangent, exterior=exterior,
        wedge_map=wedge_map, star_tables=star_tables, dual_bases=dual_bases, maurer_cartan=mc,
        lie=lie, samples=samples, degree_bound=int(data.get("degree_bound", 4)),
        raw=data, source=source)
    if validate:
        rep = validate_preset(preset)
        preset.validation = rep
        if not rep.ok:
            if not force:
                raise PresetValidationError(rep)
            warnings.warn(f"{preset.name}: loading despite failed validation "
                          f"({rep.failures()[0].check})", stacklevel=2)
    return preset


def _bad_label(t, path):
    raise PresetError(f"unknown label {t!r}", key=path)


def load_preset(name, validate=False, force=False):
    path = find_preset(name)
    data = read_preset_data(path.read_text())
    return build_preset(data, source=str(path), validate=validate, force=force)


def parse_preset_text(text, source="<string>", validate=False, force=False):
    return build_preset(read_preset_data(text), source=source, validate=validate, force=force)


# ---------------------------------------------------------------------------
# rendering and mutation
# ---------------------------------------------------------------------------

def render_algebra(P):
    """The ``[algebra.<name>]`` section of a presentation as plain data."""
    out = {"generators": list(P.generators), "step_budget": P.step_budget}
    out["rules"] = {" ".join(P.generators[g] for g in lhs): _render_raw(P, rhs)
                    for lhs, rhs in sorted(P.rules.items(), key=lambda kv: deglex_key(kv[0]))}
    cop = {}
    for g in P.generators:
        T = P.coproduct_table[g]
        terms = sorted(T.terms.items(), key=lambda kv: (deglex_key(kv[0][0]), deglex_key(kv[0][1])))
        cop[g] = [[str(c), P.render_word(l), P.render_word(r)] for (l, r), c in terms]
    out["coproduct"] = cop
    out["counit"] = {g: str(P.counit_table[g]) for g in P.generators}
    out["antipode"] = {g: P.render(P.antipode_table[g]) for g in P.generators}
    out["star"] = {g: P.render(P.star_table[g]) for g in P.generators}
    if P.projection_target is not None:
        T = P.projection_target
        out["projection"] = {"target": T.name,
                             "images": {g: T.render(P.projection_table[g]) for g in P.generators}}
    return out


def _render_raw(P, raw):
    from .hopf import AlgebraElement
    # right-hand sides are already in normal form for a reduced rule set
    return P.render(AlgebraElement(P, {w: c for w, c in raw.terms.items() if c}))


def dumps(data):
    return tomli_w.dumps(data)


def mutate(data, path, value):
    """
    A deep copy of preset data with the entry at ``path`` (a sequence of
    keys and list indices) replaced by ``value``.
    """
    out = copy.deepcopy(data)
    cur = out
    for k in path[:-1]:
        cur = cur[k]
    if isinstance(cur, list) or path[-1] in cur:
        cur[path[-1]] = value
    else:
        raise KeyError(f"no entry at {path}")
    return out


def default_data(name="podles-cp1"):
    return read_preset_data(find_preset(name).read_text())
