"""JSON input documents: rings, graded spaces, structure tables.

One document declares a coefficient ring, a grading group, named generator
spaces, and any number of structures over them (algebras as m- or b-tables,
classical curved dg-algebras, modules, morphisms, bimodules, matrix
factorizations, augmentations, homotopies, and hom-elements).  Loading
validates that every referenced name exists and that every table entry is
degree-consistent; integers travel as arbitrary-precision decimal strings,
rationals as "a/b" strings, and polynomials as lists of
[exponent-vector, coefficient] monomials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .ainf import (AInfAlgebra, AInfModule, AInfMorphism, CurvedDga,
                   HomElement, TableBimodule, b_from_m, impose_unit_laws)
from .graded import GradedSpace, Grading, MultiOp, Vector, Word
from .rings import (Integers, IntegersMod, PolynomialRing, Rationals, Ring,
                    UnsupportedRing, ring_from_descriptor)
from .vanish import AugmentationMap, MatrixFactorization


class ParseError(Exception):
    """The file is not well-formed JSON; carries line and column."""


class ValidationError(Exception):
    """The document parses but names a missing entity or an inconsistent
    table entry; the message names the offending entity."""


@dataclass
class SpecDocument:
    ring: Ring
    grading: Grading
    caps: Dict[str, int]
    spaces: Dict[str, GradedSpace] = field(default_factory=dict)
    algebras: Dict[str, AInfAlgebra] = field(default_factory=dict)
    dgas: Dict[str, CurvedDga] = field(default_factory=dict)
    modules: Dict[str, AInfModule] = field(default_factory=dict)
    morphisms: Dict[str, AInfMorphism] = field(default_factory=dict)
    bimodules: Dict[str, TableBimodule] = field(default_factory=dict)
    factorizations: Dict[str, MatrixFactorization] = field(
        default_factory=dict)
    augmentations: Dict[str, Tuple[str, AugmentationMap]] = field(
        default_factory=dict)
    homotopies: List[Tuple[str, str, MultiOp]] = field(default_factory=list)
    hom_elements: Dict[str, HomElement] = field(default_factory=dict)
    inversions: List[Dict[str, str]] = field(default_factory=list)
    raw: dict = field(default_factory=dict)


def parse_coeff(ring: Ring, raw: Any) -> Any:
    """One coefficient in the declared ring."""
    if isinstance(ring, PolynomialRing):
        if isinstance(raw, (int, str)):
            return ring.from_int(int(raw))
        terms = []
        for exps, c in raw:
            terms.append((tuple(int(e) for e in exps),
                          parse_coeff(ring.base, c)))
        return ring.normalize(terms)
    if isinstance(ring, Rationals):
        return Fraction(str(raw))
    if isinstance(ring, (Integers, IntegersMod)):
        return ring.normalize(int(raw))
    raise UnsupportedRing("no coefficient syntax for %r" % (ring,))


def parse_vector(ring: Ring, raw: Any, wrap_letter: bool = False) -> Vector:
    """A list of [basis-name, coefficient] pairs; with ``wrap_letter`` each
    name becomes a one-letter word (the output alphabet of b-tables)."""
    out = Vector.zero(ring)
    for name, c in raw or []:
        key = (str(name),) if wrap_letter else _as_key(name)
        out.add_term(key, parse_coeff(ring, c))
    return out


def _as_key(name: Any) -> Any:
    return tuple(str(x) for x in name) if isinstance(name, list) else str(name)


def _word(raw: Any) -> Word:
    return tuple(str(x) for x in raw or [])


def _need(mapping: Dict[str, Any], key: str, kind: str,
          owner: str) -> Any:
    if key not in mapping:
        raise ValidationError("%s references unknown %s %r" %
                              (owner, kind, key))
    return mapping[key]


def _check_letters(space: GradedSpace, word: Word, owner: str) -> None:
    for x in word:
        if x not in space.gens:
            raise ValidationError("%s uses unknown generator %r" % (owner, x))


def _check_entry_degree(space: GradedSpace, out_name: str, want: int,
                        owner: str) -> None:
    if out_name not in space.gens:
        raise ValidationError("%s outputs unknown generator %r" %
                              (owner, out_name))
    if not space.grading.equal(space.degree(out_name), want):
        raise ValidationError(
            "%s: output %r has degree %r, expected %r" %
            (owner, out_name, space.degree(out_name), want))


def _load_space(ring: Ring, grading: Grading, name: str,
                raw: Any) -> GradedSpace:
    gens = [(str(n), int(d)) for n, d in raw]
    try:
        return GradedSpace(ring, grading, gens)
    except ValueError as exc:
        raise ValidationError("space %r: %s" % (name, exc))


def _load_algebra(doc: SpecDocument, name: str, raw: dict) -> AInfAlgebra:
    owner = "algebra %r" % name
    space = _need(doc.spaces, raw["space"], "space", owner)
    unit = str(raw["unit"])
    if unit not in space.gens:
        raise ValidationError("%s: unknown unit %r" % (owner, unit))
    cap = int(raw.get("arity_cap", doc.caps["arity"]))
    kind = raw.get("tables", "b")
    shift = space.shifted()
    if kind == "m":
        m_table: Dict[Word, Vector] = {}
        for ent in raw.get("table", []):
            w = _word(ent["in"])
            _check_letters(space, w, owner)
            val = parse_vector(doc.ring, ent["out"], wrap_letter=True)
            want = (sum(space.degree(x) for x in w) + 2 - len(w))
            for y in val.terms:
                _check_entry_degree(space, y[0],
                                    space.grading.normalize(want), owner)
            m_table[w] = val
        b = b_from_m(space, m_table, cap)
    elif kind == "b":
        b = MultiOp(doc.ring, 1, cap)
        for ent in raw.get("table", []):
            w = _word(ent["in"])
            _check_letters(space, w, owner)
            val = parse_vector(doc.ring, ent["out"], wrap_letter=True)
            want = shift.word_degree(w) + 1
            for y in val.terms:
                _check_entry_degree(shift, y[0], want, owner)
            b.set(w, val)
    else:
        raise ValidationError("%s: tables must be 'm' or 'b', got %r" %
                              (owner, kind))
    if raw.get("impose_unit", True):
        b = impose_unit_laws(space, unit, b)
    return AInfAlgebra(space, unit, b)


def _load_dga(doc: SpecDocument, name: str, raw: dict) -> CurvedDga:
    owner = "dga %r" % name
    space = _need(doc.spaces, raw["space"], "space", owner)
    unit = str(raw["unit"])
    if unit not in space.gens:
        raise ValidationError("%s: unknown unit %r" % (owner, unit))
    curv = parse_vector(doc.ring, raw.get("curvature"))
    for y in curv.terms:
        _check_entry_degree(space, y, space.grading.normalize(2), owner)
    d = {}
    for ent in raw.get("d", []):
        x = str(ent["in"])
        _check_letters(space, (x,), owner)
        val = parse_vector(doc.ring, ent["out"])
        for y in val.terms:
            _check_entry_degree(space, y, space.degree(x) + 1, owner)
        d[x] = val
    product = {}
    for ent in raw.get("product", []):
        w = _word(ent["in"])
        if len(w) != 2:
            raise ValidationError("%s: products are binary, got %r" %
                                  (owner, w))
        _check_letters(space, w, owner)
        val = parse_vector(doc.ring, ent["out"])
        want = space.degree(w[0]) + space.degree(w[1])
        for y in val.terms:
            _check_entry_degree(space, y, space.grading.normalize(want),
                                owner)
        product[(w[0], w[1])] = val
    cap = int(raw.get("arity_cap", doc.caps["arity"]))
    return CurvedDga(space, unit, curv, d, product, cap)


def _load_module(doc: SpecDocument, name: str, raw: dict) -> AInfModule:
    owner = "module %r" % name
    algebra = _resolve_algebra(doc, raw["algebra"], owner)
    space = _need(doc.spaces, raw["space"], "space", owner)
    cap = int(raw.get("arity_cap", doc.caps["arity"]))
    table: Dict[Tuple[str, Word], Vector] = {}
    for ent in raw.get("table", []):
        m = str(ent["m"])
        if m not in space.gens:
            raise ValidationError("%s: unknown module generator %r" %
                                  (owner, m))
        w = _word(ent.get("word"))
        _check_letters(algebra.space, w, owner)
        val = parse_vector(doc.ring, ent["out"])
        want = space.degree(m) + algebra.word_degree(w) + 1
        for y in val.terms:
            _check_entry_degree(space, y, space.grading.normalize(want),
                                owner)
        table[(m, w)] = val
    return AInfModule(algebra, space, table, cap)


def _resolve_algebra(doc: SpecDocument, key: str, owner: str) -> AInfAlgebra:
    if key in doc.algebras:
        return doc.algebras[key]
    if key in doc.dgas:
        return doc.dgas[key].algebra
    raise ValidationError("%s references unknown algebra %r" % (owner, key))


def _load_morphism(doc: SpecDocument, name: str, raw: dict) -> AInfMorphism:
    owner = "morphism %r" % name
    source = _resolve_algebra(doc, raw["source"], owner)
    target = _resolve_algebra(doc, raw["target"], owner)
    cap = int(raw.get("arity_cap", doc.caps["arity"]))
    f = MultiOp(doc.ring, 0, cap)
    for ent in raw.get("table", []):
        w = _word(ent["in"])
        _check_letters(source.space, w, owner)
        val = parse_vector(doc.ring, ent["out"], wrap_letter=True)
        want = source.shift.word_degree(w)
        for y in val.terms:
            _check_entry_degree(target.shift, y[0], want, owner)
        f.set(w, val)
    return AInfMorphism(source, target, f)


def _load_bimodule(doc: SpecDocument, name: str, raw: dict) -> TableBimodule:
    owner = "bimodule %r" % name
    left = _resolve_algebra(doc, raw["left"], owner)
    right = _resolve_algebra(doc, raw["right"], owner)
    space = _need(doc.spaces, raw["space"], "space", owner)
    table: Dict[Tuple[Word, str, Word], Vector] = {}
    for ent in raw.get("table", []):
        lw = _word(ent.get("left"))
        rw = _word(ent.get("right"))
        v = str(ent["v"])
        if v not in space.gens:
            raise ValidationError("%s: unknown bimodule generator %r" %
                                  (owner, v))
        _check_letters(left.space, lw, owner)
        _check_letters(right.space, rw, owner)
        val = parse_vector(doc.ring, ent["out"])
        want = (left.shift.word_degree(lw) + space.degree(v)
                + right.shift.word_degree(rw) + 1)
        for y in val.terms:
            _check_entry_degree(space, y, space.grading.normalize(want),
                                owner)
        table[(lw, v, rw)] = val
    return TableBimodule(left, right, space, table)


def _load_mf(doc: SpecDocument, name: str, raw: dict) -> MatrixFactorization:
    owner = "factorization %r" % name
    even, odd = int(raw["even_rank"]), int(raw["odd_rank"])
    d = [[parse_coeff(doc.ring, v) for v in row] for row in raw["d"]]
    pot = parse_coeff(doc.ring, raw["potential"])
    try:
        return MatrixFactorization(doc.ring, even, odd, d, pot)
    except ValueError as exc:
        raise ValidationError("%s: %s" % (owner, exc))


def _load_hom_element(doc: SpecDocument, name: str, raw: dict) -> HomElement:
    owner = "hom element %r" % name
    source = _need(doc.modules, raw["source"], "module", owner)
    target = _need(doc.modules, raw["target"], "module", owner)
    cap = int(raw.get("cap", doc.caps["weight"]))
    table: Dict[Tuple[str, Word], Vector] = {}
    for ent in raw.get("table", []):
        m = str(ent["m"])
        if m not in source.space.gens:
            raise ValidationError("%s: unknown module generator %r" %
                                  (owner, m))
        w = _word(ent.get("word"))
        _check_letters(source.algebra.space, w, owner)
        val = parse_vector(doc.ring, ent["out"])
        for y in val.terms:
            if y not in target.space.gens:
                raise ValidationError("%s outputs unknown generator %r" %
                                      (owner, y))
        table[(m, w)] = val
    return HomElement(source, target, int(raw.get("degree", 0)), table, cap)


def load(path: str) -> SpecDocument:
    """Parse and validate one document; raises ParseError on malformed
    JSON (with line and column) and ValidationError on a missing name or a
    degree-inconsistent table entry (naming the entity)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("%s: line %d column %d: %s" %
                         (path, exc.lineno, exc.colno, exc.msg))
    return load_dict(raw)


def load_dict(raw: dict) -> SpecDocument:
    if not isinstance(raw, dict):
        raise ValidationError("document root must be an object")
    if "ring" not in raw:
        raise ValidationError("document declares no ring")
    try:
        ring = ring_from_descriptor(raw["ring"])
    except (UnsupportedRing, KeyError, ValueError) as exc:
        raise ValidationError("ring descriptor: %s" % exc)
    grading_raw = raw.get("grading") or {}
    modulus = grading_raw.get("modulus", 2)
    grading = Grading(None if modulus is None else int(modulus))
    caps = {"weight": 4, "arity": 4}
    caps.update({k: int(v) for k, v in (raw.get("caps") or {}).items()})
    doc = SpecDocument(ring=ring, grading=grading, caps=caps, raw=raw)
    for name, sraw in (raw.get("spaces") or {}).items():
        doc.spaces[name] = _load_space(ring, grading, name, sraw)
    for name, araw in (raw.get("algebras") or {}).items():
        doc.algebras[name] = _load_algebra(doc, name, araw)
    for name, draw in (raw.get("dgas") or {}).items():
        doc.dgas[name] = _load_dga(doc, name, draw)
    for name, mraw in (raw.get("modules") or {}).items():
        doc.modules[name] = _load_module(doc, name, mraw)
    for name, fraw in (raw.get("morphisms") or {}).items():
        doc.morphisms[name] = _load_morphism(doc, name, fraw)
    for name, braw in (raw.get("bimodules") or {}).items():
        doc.bimodules[name] = _load_bimodule(doc, name, braw)
    for name, fraw in (raw.get("factorizations") or {}).items():
        doc.factorizations[name] = _load_mf(doc, name, fraw)
    for name, araw in (raw.get("augmentations") or {}).items():
        owner = "augmentation %r" % name
        alg_name = araw["algebra"]
        algebra = _resolve_algebra(doc, alg_name, owner)
        values = {str(k): parse_coeff(ring, v)
                  for k, v in (araw.get("values") or {}).items()}
        try:
            aug = AugmentationMap(algebra, values,
                                  check_unit=bool(araw.get("check_unit",
                                                           True)))
        except ValueError as exc:
            raise ValidationError("%s: %s" % (owner, exc))
        doc.augmentations[name] = (alg_name, aug)
    for hraw in raw.get("homotopies") or []:
        owner = "homotopy between %r and %r" % (hraw["f"], hraw["g"])
        f = _need(doc.morphisms, hraw["f"], "morphism", owner)
        g = _need(doc.morphisms, hraw["g"], "morphism", owner)
        h = MultiOp(ring, -1, f.arity_cap)
        for ent in hraw.get("h", []):
            w = _word(ent["in"])
            _check_letters(f.source.space, w, owner)
            h.set(w, parse_vector(ring, ent["out"], wrap_letter=True))
        doc.homotopies.append((hraw["f"], hraw["g"], h))
    for name, hraw in (raw.get("hom_elements") or {}).items():
        doc.hom_elements[name] = _load_hom_element(doc, name, hraw)
    for iraw in raw.get("inversions") or []:
        for key in ("phi", "psi", "h", "ell"):
            _need(doc.hom_elements, iraw[key], "hom element",
                  "inversion task")
        doc.inversions.append({k: iraw[k]
                               for k in ("phi", "psi", "h", "ell")})
    return doc
