"""Configuration schemas and command handlers behind the command line.

Configs are plain JSON.  Validation is strict: unknown fields are
rejected so that typos fail loudly rather than silently changing the
computation.  Every handler returns (text lines, json object); outputs
are deterministic (sorted keys, canonical renderings) and every
serialized value re-parses to an equal one.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import grot, igusa, series
from .cycint import CycValue
from .funfield import INF, DifferentialForm, Place, form_dt, parse_ratfun
from .grot import (IntPoly, MotClass, MotError, StratumSymbol, SymbolRegistry,
                   effectivity_certificate, parse_mot, render_mot)
from .height import HeightError, theorem_main_check, toy_end_to_end
from .igusa import (BoundaryDatum, IgusaError, VerticalComponent, clemens,
                    igusa_with_exponential, leading_constant,
                    local_Z_integral_place, local_Z_trivial)
from .local import (AffineCharacterFn, FiniteLaurent, LocalError, LocalWindow,
                    ResiduePairing, SBLocal, fourier, inversion_check,
                    oscillatory_I_brute, oscillatory_I_closed,
                    oscillatory_depth_needed, NeedsBaseCase)
from .poisson import GlobalError, poisson_check, simple_function
from .series import (Factor, RationalMotSeries, SeriesError, expand,
                     partial_fractions, series_from_json, series_to_json,
                     specialize_lambda, tauberian_report)

VALIDATION_EXIT = 2
INTERNAL_EXIT = 3


class WorkbenchError(ValueError):
    """Configuration or input validation failure (exit code 2)."""


def _require_keys(obj: dict, allowed: set[str], required: set[str],
                  where: str) -> None:
    if not isinstance(obj, dict):
        raise WorkbenchError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise WorkbenchError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise WorkbenchError(f"{where}: missing fields {sorted(missing)}")


def load_registry(obj: dict | None) -> SymbolRegistry:
    reg = SymbolRegistry()
    for name, spec in sorted((obj or {}).items()):
        _require_keys(spec, {"dim", "poincare", "counts", "effective"},
                      {"dim", "poincare"}, f"symbol {name}")
        counts = {int(k): Fraction(v) for k, v in spec.get("counts", {}).items()}
        reg.register(StratumSymbol(
            name, int(spec["dim"]), IntPoly(spec["poincare"]), counts,
            bool(spec.get("effective", True))))
    return reg


def _fraction_str(x: Fraction) -> str:
    return str(x)


def _cyc_str(v: CycValue) -> str:
    return str(v.as_fraction()) if v.is_rational() else v.render()


# -- series commands -------------------------------------------------------


def load_series_spec(cfg: dict) -> tuple[RationalMotSeries, SymbolRegistry]:
    _require_keys(cfg, {"variables", "num", "factors", "dagger", "symbols"},
                  {"num"}, "series spec")
    registry = load_registry(cfg.get("symbols"))
    try:
        ser = series_from_json(cfg, registry)
    except (MotError, SeriesError) as exc:
        raise WorkbenchError(str(exc))
    return ser, registry


def cmd_series_expand(cfg: dict, depth: int) -> tuple[list[str], dict]:
    ser, _ = load_series_spec(cfg)
    if depth < 0:
        raise WorkbenchError("depth must be >= 0")
    if not ser.is_single_variable():
        raise WorkbenchError("expand needs a single-variable series")
    coeffs = expand(ser, depth)
    lines = [f"T^{n}: {render_mot(c)}" for n, c in enumerate(coeffs)]
    return lines, {"coefficients": [render_mot(c) for c in coeffs]}


def cmd_series_pfrac(cfg: dict) -> tuple[list[str], dict]:
    ser, _ = load_series_spec(cfg)
    if not ser.is_single_variable():
        raise WorkbenchError("partial fractions need a single-variable series")
    num = ser.numerator
    try:
        pf = partial_fractions(num, ser.factors)
    except SeriesError as exc:
        raise WorkbenchError(str(exc))
    rec = pf.recombine()
    rebuilt = series.LaurentPolyMot(
        num.variables, {(e,): c for e, c in enumerate(rec)})
    if rebuilt != num:
        raise AssertionError("partial fraction recombination failed")
    lines = ["Q = " + _poly_text(pf.quotient)]
    obj: dict = {"quotient": [render_mot(c) for c in pf.quotient], "parts": []}
    for i, f in enumerate(pf.factors):
        for j, qij in enumerate(pf.parts[i], start=1):
            lines.append(
                f"Q[{i + 1},{j}] / (1 - L^{f.a} T^{f.b[0]})^{j} = "
                + _poly_text(qij))
            obj["parts"].append({
                "factor": [f.a, f.b[0]], "power": j,
                "coefficients": [render_mot(c) for c in qij]})
    return lines, obj


def _poly_text(coeffs) -> str:
    if not coeffs:
        return "0"
    parts = []
    for e, c in enumerate(coeffs):
        if c.is_zero():
            continue
        text = render_mot(c)
        if " + " in text or " - " in text or text.startswith("-"):
            text = f"({text})"
        if e == 0:
            parts.append(text)
        else:
            mono = "T" if e == 1 else f"T^{e}"
            parts.append(mono if text == "1" else f"{text}*{mono}")
    return " + ".join(parts) if parts else "0"


def cmd_series_taub(cfg: dict, a: int | None = None, d: int | None = None
                    ) -> tuple[list[str], dict]:
    full = dict(cfg)
    a = int(full.pop("a", a if a is not None else 1))
    d = int(full.pop("d", d if d is not None else 1))
    burn_in = int(full.pop("burn_in", 50))
    horizon = int(full.pop("horizon", 200))
    ser, registry = load_series_spec(full)
    try:
        report = tauberian_report(ser, a, d, burn_in=burn_in, horizon=horizon,
                                  registry=registry)
    except SeriesError as exc:
        raise WorkbenchError(str(exc))
    lines = report.summary_lines()
    obj = {
        "modulus": report.modulus,
        "pole_mult": report.pole_mult,
        "value_at_Linv": render_mot(report.value_at_Linv),
        "value_effective": report.value_effective,
        "classes": {
            str(p): {
                "case": c.case,
                "dim_minus_n": c.dim_minus_n,
                "nu_log_exponent": c.nu_log_exponent,
            } for p, c in sorted(report.classes.items())
        },
    }
    return lines, obj


# -- local commands ---------------------------------------------------------


def _load_laurent(obj, q: int) -> FiniteLaurent:
    _require_keys(obj, {"ord", "digits"}, {"ord", "digits"}, "Laurent literal")
    return FiniteLaurent.make(int(obj["ord"]), [int(d) for d in obj["digits"]], q)


def load_local_function(cfg: dict) -> tuple[SBLocal | AffineCharacterFn,
                                            ResiduePairing]:
    _require_keys(cfg, {"q", "n", "window", "omega", "function"},
                  {"q", "n", "window", "function"}, "local config")
    q = int(cfg["q"])
    n = int(cfg["n"])
    m, nn = (int(x) for x in cfg["window"])
    try:
        window = LocalWindow(q, n, m, nn)
    except LocalError as exc:
        raise WorkbenchError(str(exc))
    omega_spec = cfg.get("omega", {"ord": 0, "digits": [1]})
    omega = _load_laurent(omega_spec, q)
    if omega.is_zero():
        raise WorkbenchError("pairing form must be nonzero")
    pairing = ResiduePairing(q, omega)
    fn_spec = cfg["function"]
    _require_keys(fn_spec, {"kind", "values", "center_digits"}, {"kind"},
                  "local function")
    kind = fn_spec["kind"]
    if kind == "constant":
        return AffineCharacterFn.full_indicator(window), pairing
    if kind == "ball":
        digits = [int(d) for d in fn_spec.get("center_digits",
                                              [0] * window.ndigits)]
        if len(digits) != window.ndigits:
            raise WorkbenchError(
                f"center needs {window.ndigits} digits, got {len(digits)}")
        return AffineCharacterFn.ball(window, digits), pairing
    if kind == "table":
        values = {}
        for entry in fn_spec.get("values", []):
            point, vspec = entry
            key = tuple(int(x) for x in point)
            if len(key) != window.ndigits:
                raise WorkbenchError(f"table point {key} has the wrong arity")
            if isinstance(vspec, int):
                values[key] = CycValue.from_int(q, vspec)
            else:
                _require_keys(vspec, {"zeta_coords", "den_exp"},
                              {"zeta_coords"}, "table value")
                values[key] = CycValue.make(
                    q, [int(c) for c in vspec["zeta_coords"]],
                    int(vspec.get("den_exp", 0)))
        return SBLocal(window, values), pairing
    raise WorkbenchError(f"unknown local function kind {kind!r}")


def _table_lines(fn) -> tuple[list[str], list]:
    table = fn if isinstance(fn, SBLocal) else fn.to_sblocal()
    lines, rows = [], []
    for pt in table.window.points():
        v = table.value(pt)
        if not v.is_zero():
            lines.append(f"{list(pt)} -> {_cyc_str(v)}")
            rows.append([list(pt), v.to_json()])
    if not lines:
        lines = ["0 (identically zero)"]
    return lines, rows


def cmd_local_fourier(cfg: dict) -> tuple[list[str], dict]:
    fn, pairing = load_local_function(cfg)
    try:
        out = fourier(fn, pairing)
    except LocalError as exc:
        raise WorkbenchError(str(exc))
    lines, rows = _table_lines(out)
    w = out.window
    header = f"window ({w.M},{w.N}) conductor {pairing.conductor}"
    return [header] + lines, {"window": [w.M, w.N],
                              "conductor": pairing.conductor, "table": rows}


def cmd_local_invert(cfg: dict) -> tuple[list[str], dict]:
    fn, pairing = load_local_function(cfg)
    ok = inversion_check(fn, pairing)
    return [f"inversion exact = {str(ok).lower()}"], {"inversion_exact": ok}


def cmd_local_osc(q: int, m: int, d: int, ord_a: int | None = None,
                  a_spec: dict | None = None, depth: int | None = None
                  ) -> tuple[list[str], dict]:
    if a_spec is not None:
        a = _load_laurent(a_spec, q)
    elif ord_a is not None:
        a = FiniteLaurent(ord_a, (1,))
    else:
        raise WorkbenchError("provide ord_a or an explicit amplitude a")
    try:
        brute = oscillatory_I_brute(m, d, a, q, depth)
    except LocalError as exc:
        raise WorkbenchError(str(exc))
    closed = oscillatory_I_closed(m, d, a.ord)
    lines = [_cyc_str(brute)]
    obj: dict = {"brute": brute.to_json(),
                 "depth_needed": oscillatory_depth_needed(m, d, a.ord)}
    if isinstance(closed, NeedsBaseCase):
        lines.append("closed form: base case (boundary ord(a) + m d = 0)")
        obj["closed"] = "base-case"
    else:
        lines.append(f"closed form: {render_mot(closed)}")
        obj["closed"] = render_mot(closed)
    return lines, obj


# -- poisson command ---------------------------------------------------------


def load_poisson_config(cfg: dict):
    _require_keys(cfg, {"q", "n", "omega", "places"}, {"q", "n", "places"},
                  "poisson config")
    q = int(cfg["q"])
    n = int(cfg["n"])
    omega = DifferentialForm(parse_ratfun(str(cfg.get("omega", "1")), q))
    levels, centers, radii = {}, {}, {}
    for entry in cfg["places"]:
        _require_keys(entry, {"place", "level", "center", "radius"},
                      {"place", "level"}, "place entry")
        pl = _load_place(entry["place"])
        m, nn = (int(x) for x in entry["level"])
        levels[pl] = (m, nn)
        if "radius" in entry:
            radii[pl] = int(entry["radius"])
        if "center" in entry:
            cs = entry["center"]
            if len(cs) != n:
                raise WorkbenchError("center needs one literal per coordinate")
            centers[pl] = [_load_laurent(c, q) for c in cs]
    try:
        phi = simple_function(q, n, levels, centers, radii)
    except (GlobalError, LocalError) as exc:
        raise WorkbenchError(str(exc))
    return phi, omega


def _load_place(spec) -> Place:
    if spec == "inf":
        return INF
    if isinstance(spec, int):
        return Place.at(spec)
    if isinstance(spec, dict) and set(spec) == {"finite"}:
        return Place.at(int(spec["finite"]))
    raise WorkbenchError(f"bad place spec {spec!r}")


def cmd_poisson(cfg: dict) -> tuple[list[str], dict]:
    phi, omega = load_poisson_config(cfg)
    try:
        verdict = poisson_check(phi, omega)
    except GlobalError as exc:
        raise WorkbenchError(str(exc))
    return [verdict.render()], {
        "lhs": verdict.lhs.to_json(), "rhs": verdict.rhs.to_json(),
        "equal": verdict.equal}


# -- igusa command ------------------------------------------------------------


def load_boundary_datum(cfg: dict) -> tuple[BoundaryDatum, SymbolRegistry, dict]:
    _require_keys(cfg, {"n", "horizontal", "vertical", "strata", "b0",
                        "polar", "a", "symbols"},
                  {"n", "horizontal", "vertical", "strata"}, "igusa config")
    registry = load_registry(cfg.get("symbols"))
    horiz = {}
    for name, spec in sorted(cfg["horizontal"].items()):
        if isinstance(spec, dict):
            _require_keys(spec, {"rho"}, {"rho"}, f"horizontal {name}")
            horiz[name] = int(spec["rho"])
        else:
            horiz[name] = int(spec)
    verts = []
    for spec in cfg["vertical"]:
        _require_keys(spec, {"name", "mu", "rho", "e"}, {"name"},
                      "vertical component")
        verts.append(VerticalComponent(
            spec["name"], int(spec.get("mu", 1)), int(spec.get("rho", 0)),
            {a: int(v) for a, v in spec.get("e", {}).items()}))
    strata = {}
    for spec in cfg["strata"]:
        _require_keys(spec, {"A", "beta", "class"}, {"A", "beta", "class"},
                      "stratum")
        cls = parse_mot(str(spec["class"]), registry)
        strata[(frozenset(spec["A"]), spec["beta"])] = cls
    try:
        datum = BoundaryDatum(int(cfg["n"]), horiz, verts, strata,
                              frozenset(cfg.get("b0", [])), registry)
    except (IgusaError, MotError) as exc:
        raise WorkbenchError(str(exc))
    polar = {a: int(v) for a, v in cfg.get("polar", {}).items()}
    return datum, registry, polar


def cmd_igusa(cfg: dict) -> tuple[list[str], dict]:
    datum, registry, polar = load_boundary_datum(cfg)
    a_mult = int(cfg.get("a", 1))
    try:
        z = local_Z_trivial(datum)
        cx = clemens(datum)
        expo = igusa_with_exponential(datum, polar)
        if datum.integral:
            integral_poly = local_Z_integral_place(datum)
        else:
            integral_poly = None
        lead = leading_constant({"v": datum}, {}, a_mult, registry)
    except IgusaError as exc:
        raise WorkbenchError(str(exc))
    lines = [
        f"Z(T,0) = {z.render()}",
        f"clemens faces: {sorted(sorted(f) for f in cx.faces)}",
        f"d_v = {cx.pole_count}",
        f"denominator (trivial): {[[f.a, list(f.b)] for f in z.factors]}",
        f"denominator (exponential, polar {sorted(polar.items())}): "
        f"{[[f.a, list(f.b)] for f in expo.height_factors]}",
        f"dropped vertices: {expo.dropped}",
        f"leading constant: {render_mot(lead.value)}"
        + (" (effective)" if effectivity_certificate(lead.value, registry)
           else ""),
    ]
    if integral_poly is not None:
        lines.insert(1, f"Z integral place = {integral_poly.render()}")
    for diag in lead.diagnostics:
        lines.append(f"diagnostic: {diag}")
    obj = {
        "Z_trivial": series_to_json(z),
        "clemens": {"faces": sorted(sorted(f) for f in cx.faces),
                    "d_v": cx.pole_count},
        "denominator_trivial": [[f.a, list(f.b)] for f in z.factors],
        "denominator_exponential": [[f.a, list(f.b)]
                                    for f in expo.height_factors],
        "dropped": expo.dropped,
        "leading_constant": render_mot(lead.value),
        "diagnostics": lead.diagnostics,
    }
    if integral_poly is not None:
        obj["Z_integral"] = integral_poly.render()
    return lines, obj


# -- height command ------------------------------------------------------------


def cmd_height(q: int, n_max: int, extra_good_places=()) -> tuple[list[str], dict]:
    try:
        verdict = toy_end_to_end(q, n_max, tuple(extra_good_places))
    except (HeightError, LocalError) as exc:
        raise WorkbenchError(str(exc))
    lines = verdict.summary_lines()
    taub = verdict.theorem.tauberian
    obj = {
        "q": q,
        "coefficients": [str(c) for c in verdict.assembly.coefficients],
        "brute_counts": verdict.assembly.brute_counts,
        "match": verdict.assembly.match,
        "enlargement_stable": verdict.assembly.enlargement_stable,
        "Z": series_to_json(verdict.symbolic),
        "symbolic_counts_match": verdict.symbolic_counts_match,
        "P_U_at_Linv": render_mot(verdict.theorem.value_at_Linv),
        "effective": verdict.theorem.effective,
        "nonzero": verdict.theorem.nonzero,
        "pole_order": verdict.theorem.pole_order,
        "leading_constant_match": verdict.leading_constant_match,
        "tauberian": {str(p): {"case": c.case, "dim_minus_n": c.dim_minus_n,
                               "nu_log_exponent": c.nu_log_exponent}
                      for p, c in sorted(taub.classes.items())},
    }
    return lines, obj
