"""JSON file formats for multicomplexes, chain maps and orbit spectra.

Complex file::

    {"ring": "Z" | "Q" | "Fp", "p": 5,
     "generators": [{"name": "a", "degree": 1}, ...],
     "differential": [{"from": "a", "to": "b", "coeff": "2"}, ...],
     "phi": [{"level": 1, "entries": [...]}, ...]}

Spectrum file::

    {"orbits": [{"name": "g", "degree": 5, "multiplicity": 2, "good": true}, ...],
     "d1": [...], "d2": [...], "d1_bad_m": [...]}

Chain-map file::

    {"source": <complex>, "target": <complex>, "degree": 0, "entries": [...]}

Coefficients are strings (``"-3"``, ``"1/2"``) so that large values survive
any JSON reader.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .chain_complex import ChainComplex, ChainMap
from .errors import ValidationError
from .exact_linear import Matrix, Ring, ring_from_tag
from .models import Orbit, OrbitSpectrum
from .s1_complex import S1Complex

__all__ = [
    "parse_json",
    "load_complex",
    "dump_complex",
    "load_spectrum",
    "dump_spectrum",
    "load_chain_map",
    "dump_chain_map",
]


def parse_json(text: str, where: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{where}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _require(obj: Any, key: str, where: str, kind: type | tuple[type, ...]) -> Any:
    if not isinstance(obj, Mapping):
        raise ValidationError(f"{where}: expected an object")
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    val = obj[key]
    if isinstance(val, bool) and kind is int:
        raise ValidationError(f"{where}.{key}: expected an integer")
    if not isinstance(val, kind):
        raise ValidationError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def _entries(raw: Any, where: str, ring: Ring | None) -> list[tuple[str, str, Any]]:
    if not isinstance(raw, list):
        raise ValidationError(f"{where}: expected a list of entries")
    out = []
    for i, e in enumerate(raw):
        loc = f"{where}[{i}]"
        src = _require(e, "from", loc, str)
        tgt = _require(e, "to", loc, str)
        coeff = _require(e, "coeff", loc, str)
        try:
            value = ring.parse(coeff) if ring is not None else coeff
        except ValidationError as err:
            raise ValidationError(f"{loc}.coeff: {err}") from None
        out.append((src, tgt, value))
    return out


def _ring(obj: Mapping[str, Any], where: str) -> Ring:
    tag = _require(obj, "ring", where, str)
    p = obj.get("p")
    if p is not None and (isinstance(p, bool) or not isinstance(p, int)):
        raise ValidationError(f"{where}.p: expected an integer")
    try:
        return ring_from_tag(tag, p)
    except ValidationError as err:
        raise ValidationError(f"{where}.ring: {err}") from None


def load_complex(obj: Any, where: str = "complex", *, check: bool = True) -> S1Complex:
    """Build an :class:`S1Complex`; with ``check`` the relations are verified."""
    ring = _ring(obj, where)
    gens_raw = _require(obj, "generators", where, list)
    gens = []
    for i, g in enumerate(gens_raw):
        loc = f"{where}.generators[{i}]"
        gens.append((_require(g, "name", loc, str), _require(g, "degree", loc, int)))
    diff = _entries(obj.get("differential", []), f"{where}.differential", ring)
    phi: dict[int, list] = {}
    for i, level in enumerate(obj.get("phi", []) or []):
        loc = f"{where}.phi[{i}]"
        lv = _require(level, "level", loc, int)
        if lv < 1:
            raise ValidationError(f"{loc}.level: must be >= 1")
        if lv in phi:
            raise ValidationError(f"{loc}.level: duplicate level {lv}")
        phi[lv] = _entries(_require(level, "entries", loc, list), f"{loc}.entries", ring)
    try:
        C = S1Complex.from_entries(ring, gens, diff, phi, check=False)
    except ValidationError as err:
        raise ValidationError(f"{where}: {err}") from None
    if check:
        C.require_valid()
    return C


def _dump_entries(M: Matrix, names: list[str], ring: Ring) -> list[dict[str, str]]:
    return [{"from": names[j], "to": names[i], "coeff": ring.format(v)} for i, j, v in M.entries()]


def dump_complex(C: S1Complex | ChainComplex) -> dict[str, Any]:
    ring = C.ring
    out: dict[str, Any] = {"ring": ring.tag}
    if ring.tag == "Fp":
        out["p"] = ring.characteristic
    names = C.module.names()
    out["generators"] = [{"name": n, "degree": d} for n, d in C.module.generators]
    if isinstance(C, S1Complex):
        out["differential"] = _dump_entries(C.phis[0], names, ring)
        out["phi"] = [
            {"level": i, "entries": _dump_entries(C.phis[i], names, ring)}
            for i in range(1, len(C.phis))
            if not C.phis[i].is_zero()
        ]
    else:
        out["differential"] = _dump_entries(C.differential, names, ring)
    return out


def load_spectrum(obj: Any, where: str = "spectrum") -> OrbitSpectrum:
    raw = _require(obj, "orbits", where, list)
    orbits = []
    for i, o in enumerate(raw):
        loc = f"{where}.orbits[{i}]"
        good = o.get("good", True) if isinstance(o, Mapping) else True
        if not isinstance(good, bool):
            raise ValidationError(f"{loc}.good: expected a boolean")
        mult = o.get("multiplicity", 1) if isinstance(o, Mapping) else 1
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ValidationError(f"{loc}.multiplicity: expected an integer")
        orbits.append(Orbit(_require(o, "name", loc, str), _require(o, "degree", loc, int), mult, good))
    blocks = {}
    for key in ("d1", "d2", "d1_bad_m"):
        entries = _entries(obj.get(key, []), f"{where}.{key}", None)
        for i, (_, _, c) in enumerate(entries):
            try:
                ring_from_tag("Q").parse(c)
            except ValidationError as err:
                raise ValidationError(f"{where}.{key}[{i}].coeff: {err}") from None
        blocks[key] = tuple(entries)
    try:
        return OrbitSpectrum(tuple(orbits), blocks["d1"], blocks["d2"], blocks["d1_bad_m"])
    except ValidationError as err:
        raise ValidationError(f"{where}: {err}") from None


def dump_spectrum(s: OrbitSpectrum) -> dict[str, Any]:
    def ent(entries):
        return [{"from": a, "to": b, "coeff": str(c)} for a, b, c in entries]

    return {
        "orbits": [
            {"name": o.name, "degree": o.degree, "multiplicity": o.multiplicity, "good": o.good}
            for o in s.orbits
        ],
        "d1": ent(s.d1),
        "d2": ent(s.d2),
        "d1_bad_m": ent(s.d1_bad_m),
    }


def load_chain_map(obj: Any, where: str = "map") -> ChainMap:
    """A chain map between two plain complexes (``phi`` data is ignored)."""
    src = load_complex(_require(obj, "source", where, dict), f"{where}.source", check=False)
    tgt = load_complex(_require(obj, "target", where, dict), f"{where}.target", check=False)
    for C, loc in ((src, "source"), (tgt, "target")):
        if not C.base.differential.__matmul__(C.base.differential).is_zero():
            raise ValidationError(f"{where}.{loc}: differential does not square to zero")
    if src.ring != tgt.ring:
        raise ValidationError(f"{where}: source and target rings differ")
    degree = obj.get("degree", 0)
    if isinstance(degree, bool) or not isinstance(degree, int):
        raise ValidationError(f"{where}.degree: expected an integer")
    entries = _entries(obj.get("entries", []), f"{where}.entries", src.ring)
    try:
        return ChainMap.from_entries(src.base, tgt.base, degree, entries)  # type: ignore[return-value]
    except ValidationError as err:
        raise ValidationError(f"{where}: {err}") from None


def dump_chain_map(f: ChainMap) -> dict[str, Any]:
    src_names = f.source.module.names()
    tgt_names = f.target.module.names()
    return {
        "source": dump_complex(f.source),
        "target": dump_complex(f.target),
        "degree": f.degree,
        "entries": [
            {"from": src_names[j], "to": tgt_names[i], "coeff": f.source.ring.format(v)}
            for i, j, v in f.matrix.entries()
        ],
    }
