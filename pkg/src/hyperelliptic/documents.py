"""JSON input documents and deterministic report serialization.

All numbers on the wire are exact rationals written as strings "p/q" in
lowest terms ("p" when the denominator is 1); no floating point exists in the
format.  Serialization is byte-deterministic for a fixed input: dictionaries
are built in canonical order and dumped with sorted keys.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .action import (
    ActionGroup,
    AffineAut,
    HyperellipticDatum,
    ValidationReport,
    affine_from_factor_action,
    affine_raw,
    close_group,
)
from .albanese import AlbaneseReport
from .cyclotomic import RootOfUnity
from .exactlin import Sublattice, as_fractions
from .torus import (
    AlternatingForm,
    EllipticFactor,
    TorusDatum,
    build_product_torus,
    factor_automorphism_matrix,
    standard_form,
)


class InputError(ValueError):
    """Malformed document: wrong shape, unknown field values, bad rationals."""


# ---------------------------------------------------------------------------
# rationals and root-of-unity labels

def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}: {exc}") from None


def format_rational(x) -> str:
    return str(Fraction(x))


def parse_vector(items, length: int | None = None):
    if not isinstance(items, list):
        raise InputError(f"expected a list of rationals, got {items!r}")
    v = tuple(parse_rational(x) for x in items)
    if length is not None and len(v) != length:
        raise InputError(f"expected {length} coordinates, got {len(v)}")
    return v


def format_vector(v) -> list[str]:
    return [format_rational(x) for x in v]


_ROOT_SHORTHAND = {"1": (0, 1), "-1": (1, 2), "i": (1, 4), "-i": (3, 4)}


def parse_root_label(text) -> RootOfUnity:
    if not isinstance(text, str):
        raise InputError(f"expected a root-of-unity label, got {text!r}")
    label = text.strip()
    if label in _ROOT_SHORTHAND:
        return RootOfUnity.of(*_ROOT_SHORTHAND[label])
    if label.startswith("zeta"):
        body = label[4:]
        power = 1
        if "^" in body:
            body, exp = body.split("^", 1)
            try:
                power = int(exp)
            except ValueError:
                raise InputError(f"bad exponent in {text!r}") from None
        try:
            order = int(body)
        except ValueError:
            raise InputError(f"bad root-of-unity label {text!r}") from None
        if order < 1:
            raise InputError(f"bad root-of-unity order in {text!r}")
        return RootOfUnity.of(power, order)
    raise InputError(f"bad root-of-unity label {text!r}")


def format_root(z: RootOfUnity) -> str:
    if z.order == 1:
        return "1"
    if z.order == 2:
        return "-1"
    if z.order == 4:
        return "i" if z.k == 1 else "-i"
    return f"zeta{z.order}" if z.k == 1 else f"zeta{z.order}^{z.k}"


# ---------------------------------------------------------------------------
# documents -> data

_FACTOR_KINDS = ("generic", "gauss", "eisenstein")


def _parse_factor(item) -> EllipticFactor:
    if not isinstance(item, dict) or "kind" not in item:
        raise InputError(f"factor entries need a 'kind', got {item!r}")
    kind = item["kind"]
    if kind not in _FACTOR_KINDS:
        raise InputError(f"unknown factor kind {kind!r}")
    return EllipticFactor(kind, str(item.get("label", "")))


def _parse_int_matrix(rows, size: int):
    if not isinstance(rows, list) or len(rows) != size:
        raise InputError(f"expected a {size}x{size} integer matrix")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != size:
            raise InputError(f"expected a {size}x{size} integer matrix")
        try:
            out.append(tuple(int(x) for x in row))
        except (TypeError, ValueError):
            raise InputError("matrix entries must be integers") from None
    return tuple(out)


def _build_builder(doc) -> HyperellipticDatum:
    factors = [_parse_factor(f) for f in doc.get("factors", [])]
    if not factors:
        raise InputError("builder documents need at least one factor")
    rank = 2 * len(factors)
    k_gens = [parse_vector(v, rank) for v in doc.get("k_gens", [])]
    torus = build_product_torus(factors, k_gens)
    generators = []
    for spec in doc.get("generators", []):
        if not isinstance(spec, dict):
            raise InputError("generator entries must be objects")
        translation = parse_vector(spec.get("translation", ["0"] * rank), rank)
        if "zetas" in spec:
            zetas = spec["zetas"]
            if not isinstance(zetas, list) or len(zetas) != len(factors):
                raise InputError("need one root-of-unity label per factor")
            blocks = [
                factor_automorphism_matrix(f, parse_root_label(z))
                for f, z in zip(factors, zetas)
            ]
        elif "blocks" in spec:
            blocks = [_parse_int_matrix(b, 2) for b in spec["blocks"]]
            if len(blocks) != len(factors):
                raise InputError("need one 2x2 block per factor")
        else:
            raise InputError("generators need 'zetas' or 'blocks'")
        generators.append(affine_from_factor_action(torus, blocks, translation))
    group = close_group(generators, torus, cap=int(doc.get("closure_cap", 1024)))
    return HyperellipticDatum(torus, group, standard_form(torus), builder_mode=True)


def _build_raw(doc) -> HyperellipticDatum:
    try:
        rank = int(doc["rank"])
    except (KeyError, TypeError, ValueError):
        raise InputError("raw documents need an integer 'rank'") from None
    if rank < 2 or rank % 2 != 0:
        raise InputError("rank must be a positive even integer")
    if "form" not in doc:
        raise InputError("raw documents must supply an alternating 'form'")
    form_rows = doc["form"]
    if not isinstance(form_rows, list) or len(form_rows) != rank:
        raise InputError(f"form must be a {rank}x{rank} matrix")
    form = AlternatingForm(tuple(parse_vector(row, rank) for row in form_rows))
    torus = TorusDatum.raw(rank)

    def parse_element(spec):
        if not isinstance(spec, dict) or "matrix" not in spec:
            raise InputError("raw elements need a 'matrix'")
        linear = _parse_int_matrix(spec["matrix"], rank)
        translation = parse_vector(spec.get("translation", ["0"] * rank), rank)
        labels = spec.get("eigenvalues")
        if not isinstance(labels, list) or len(labels) != rank // 2:
            raise InputError(f"raw elements need {rank // 2} eigenvalue labels")
        eig = tuple(parse_root_label(z) for z in labels)
        return affine_raw(linear, translation, eig)

    generators = [parse_element(spec) for spec in doc.get("generators", [])]
    table = {}
    for spec in doc.get("elements", []):
        e = parse_element(spec)
        table[e.linear] = e.eigenvalues
    group = close_group(
        generators, torus, cap=int(doc.get("closure_cap", 1024)), eigenvalue_table=table
    )
    return HyperellipticDatum(
        torus, group, form, builder_mode=False, j_stability_assumed=True
    )


def build_datum(doc) -> HyperellipticDatum:
    """Parse an input document (builder or raw mode) into a datum."""
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    mode = doc.get("mode")
    if mode == "builder":
        return _build_builder(doc)
    if mode == "raw":
        return _build_raw(doc)
    raise InputError(f"mode must be 'builder' or 'raw', got {mode!r}")


def load_document(path: str) -> HyperellipticDatum:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return build_datum(doc)


# ---------------------------------------------------------------------------
# data -> reports

def _lattice_dict(lat: Sublattice, torus: TorusDatum | None = None) -> dict:
    out = {
        "ambient_rank": lat.ambient_rank,
        "rank": lat.rank,
        "basis": [format_vector(b) for b in lat.basis_vectors()],
    }
    if torus is not None:
        out["basis_product_coords"] = [
            format_vector(torus.to_product_coords(b)) for b in lat.basis_vectors()
        ]
    return out


def _group_dict(group, torus: TorusDatum | None = None) -> dict:
    out = {
        "invariant_factors": list(group.invariant_factors),
        "order": group.order,
        "generators": [format_vector(g) for g in group.generators],
    }
    if torus is not None:
        out["generators_product_coords"] = [
            format_vector(torus.to_product_coords(g)) for g in group.generators
        ]
    return out


def validation_dict(report: ValidationReport) -> dict:
    return {
        "passed": report.passed,
        "is_hyperelliptic": report.is_hyperelliptic,
        "group_order": report.group_order,
        "free": report.free,
        "fixed_point_elements": list(report.fixed_point_elements),
        "nonidentity_translations": list(report.nonidentity_translations),
        "form_invariant": report.form_invariant,
        "eigenvalues_consistent": report.eigenvalues_consistent,
        "faithful": report.faithful,
        "failures": list(report.failures()),
    }


def _factor_names(torus: TorusDatum, indices) -> list[str] | None:
    if indices is None or torus.factors is None:
        return None
    return [torus.factors[i].display_label() for i in indices]


def albanese_dict(report: AlbaneseReport, datum: HyperellipticDatum) -> dict:
    torus = datum.torus
    fiber_class = report.fiber_class
    out = {
        "dim": report.dim,
        "q": report.q,
        "group_order": report.group_order,
        "lambda0": _lattice_dict(report.decomposition.lambda0, torus),
        "lambda1": _lattice_dict(report.decomposition.lambda1, torus),
        "k": _group_dict(report.decomposition.k, torus),
        "k0": _group_dict(report.decomposition.k0, torus),
        "k1": _group_dict(report.decomposition.k1, torus),
        "albanese": {
            "dim": report.q,
            "lattice": _lattice_dict(report.albanese_lattice, torus),
            "isogeny_factors": list(report.albanese_isogeny_factors),
            "factor_names": _factor_names(torus, report.albanese_factor_indices),
        },
        "h": {
            "element_indices": list(report.subgroup_h),
            "order": len(report.subgroup_h),
        },
        "fiber": {
            "dim": fiber_class.dim,
            "kind": fiber_class.kind,
            "holonomy_order": fiber_class.holonomy_order,
            "cyclic": fiber_class.cyclic,
            "holonomy_invariant_factors": (
                list(fiber_class.holonomy_invariant_factors)
                if fiber_class.holonomy_invariant_factors is not None
                else None
            ),
            "element_orders": list(fiber_class.element_orders),
            "factor_names": _factor_names(torus, report.fiber_factor_indices),
            "description": fiber_class.describe(),
        },
        "flags": {
            "builder_mode": datum.builder_mode,
            "j_stability_assumed": datum.j_stability_assumed,
        },
    }
    out["fiber_report"] = (
        albanese_dict(report.fiber_report, report.fiber) if report.fiber_report else None
    )
    return out


def invariants_dict(inv) -> dict:
    return {
        "dim": inv.dim,
        "q": inv.q,
        "group_order": inv.group_order,
        "cyclic": inv.cyclic,
        "canonical_order": inv.canonical_order,
        "euler_char_structure_sheaf": inv.euler_char_structure_sheaf,
        "hodge_rows": [list(row) for row in inv.diamond.rows()],
    }


def dumps_canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_report_json(text: str) -> dict:
    return json.loads(text)
