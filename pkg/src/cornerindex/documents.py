"""JSON document schemas for the command-line front end.

Every input file is ``{"kind": ..., "version": 1, "payload": ...}``.  Shape
problems (bad JSON, wrong kind, wrong field types, unparsable coefficient
expressions) raise :class:`InputError` and map to exit code 2; semantic
problems in well-shaped data are domain errors and map to exit code 1.
"""

from __future__ import annotations

import json
import re

from .abelian import FGAbelianGroup, GroupElement
from .faces import FacePoset
from .families import FamilySpec, FiberAutomorphism
from .obstruction import KTheoryInput, SymbolDatum

SCHEMA_VERSION = 1
KINDS = ("poset", "family", "symbol", "ktheory")


class InputError(ValueError):
    """The document cannot be read at all (as opposed to failing validation)."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_document(path: str) -> tuple[str, dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return parse_document(obj)


def parse_document(obj) -> tuple[str, dict]:
    if not isinstance(obj, dict):
        raise InputError("document must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise InputError(f"unknown document kind {kind!r}")
    if obj.get("version") != SCHEMA_VERSION:
        raise InputError(f"unsupported document version {obj.get('version')!r}")
    payload = obj.get("payload")
    if not isinstance(payload, dict):
        raise InputError("payload must be a JSON object")
    return kind, payload


def document(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": SCHEMA_VERSION, "payload": payload}


def _expect(condition: bool, message: str):
    if not condition:
        raise InputError(message)


def _str_list(value, what: str) -> list[str]:
    _expect(isinstance(value, list) and all(isinstance(x, str) for x in value), f"{what} must be a list of strings")
    return value


def _str_map(value, what: str) -> dict[str, str]:
    _expect(
        isinstance(value, dict)
        and all(isinstance(k, str) and isinstance(v, str) for k, v in value.items()),
        f"{what} must map strings to strings",
    )
    return value


# ---------------------------------------------------------------------------
# posets


def poset_from_payload(payload: dict) -> FacePoset:
    hyps = _str_list(payload.get("hypersurfaces"), "hypersurfaces")
    connected = payload.get("connected", True)
    _expect(isinstance(connected, bool), "connected must be a boolean")
    faces_raw = payload.get("faces")
    _expect(isinstance(faces_raw, list), "faces must be a list")
    faces = []
    for entry in faces_raw:
        _expect(isinstance(entry, dict), "each face must be an object")
        fid = entry.get("id")
        codim = entry.get("codim")
        _expect(isinstance(fid, str), "face id must be a string")
        _expect(isinstance(codim, int) and not isinstance(codim, bool), f"face {fid}: codim must be an integer")
        tup = _str_list(entry.get("index_tuple"), f"face {fid}: index_tuple")
        parents = _str_map(entry.get("parents", {}), f"face {fid}: parents")
        faces.append((fid, codim, tuple(tup), parents))
    return FacePoset.build(hyps, faces, connected)


def poset_to_payload(poset: FacePoset) -> dict:
    return {
        "hypersurfaces": list(poset.hypersurfaces),
        "connected": poset.connected,
        "faces": [
            {
                "id": f.id,
                "codim": f.codim,
                "index_tuple": list(f.index_tuple),
                "parents": dict(f.parents),
            }
            for f in poset.faces
        ],
    }


# ---------------------------------------------------------------------------
# families


def family_from_payload(payload: dict) -> FamilySpec:
    fiber_raw = payload.get("fiber")
    _expect(isinstance(fiber_raw, dict), "fiber must be an object")
    fiber = poset_from_payload(fiber_raw)
    label = payload.get("base_label", "")
    _expect(isinstance(label, str), "base_label must be a string")
    gens_raw = payload.get("generators", [])
    _expect(isinstance(gens_raw, list), "generators must be a list")
    gens = []
    for entry in gens_raw:
        _expect(isinstance(entry, dict), "each generator must be an object")
        fmap = _str_map(entry.get("face_map"), "generator face_map")
        smap = _str_map(entry.get("hypersurface_map"), "generator hypersurface_map")
        gens.append(FiberAutomorphism.build(fmap, smap))
    return FamilySpec(fiber, tuple(gens), label)


def family_to_payload(spec: FamilySpec) -> dict:
    return {
        "fiber": poset_to_payload(spec.fiber),
        "base_label": spec.base_label,
        "generators": [
            {"face_map": g.faces(), "hypersurface_map": g.hypersurfaces()}
            for g in spec.generators
        ],
    }


# ---------------------------------------------------------------------------
# groups, elements, K-theory, symbols


def group_from_payload(payload, what: str = "group") -> FGAbelianGroup:
    _expect(isinstance(payload, dict), f"{what} must be an object")
    rank = payload.get("rank")
    torsion = payload.get("torsion", [])
    _expect(isinstance(rank, int) and not isinstance(rank, bool), f"{what}: rank must be an integer")
    _expect(
        isinstance(torsion, list) and all(isinstance(d, int) and not isinstance(d, bool) for d in torsion),
        f"{what}: torsion must be a list of integers",
    )
    try:
        return FGAbelianGroup(rank, tuple(torsion))
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from exc


def group_to_payload(group: FGAbelianGroup) -> dict:
    return {"rank": group.rank, "torsion": list(group.torsion)}


def ktheory_from_payload(payload: dict) -> KTheoryInput:
    preset = payload.get("preset")
    if preset is not None:
        _expect(isinstance(preset, str), "preset must be a string")
        if preset == "point":
            return KTheoryInput.point()
        if preset == "circle":
            return KTheoryInput.circle()
        raise InputError(f"unknown K-theory preset {preset!r} (available: point, circle)")
    k0 = group_from_payload(payload.get("K0B"), "K0B")
    k1 = group_from_payload(payload.get("K1B"), "K1B")
    label = payload.get("label", "")
    _expect(isinstance(label, str), "label must be a string")
    return KTheoryInput(k0, k1, label)


def ktheory_to_payload(k: KTheoryInput) -> dict:
    return {
        "K0B": group_to_payload(k.k0),
        "K1B": group_to_payload(k.k1),
        "label": k.label,
    }


def element_from_payload(payload, group: FGAbelianGroup, what: str) -> GroupElement:
    _expect(isinstance(payload, dict), f"{what} must be an object")
    free = payload.get("free", [])
    tors = payload.get("torsion", [])
    for part, name in ((free, "free"), (tors, "torsion")):
        _expect(
            isinstance(part, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in part),
            f"{what}: {name} must be a list of integers",
        )
    # length mismatches against the coefficient group are cross-file issues,
    # so they surface as domain errors, not parse errors
    return GroupElement(group, tuple(free), tuple(tors))


def element_to_payload(element: GroupElement) -> dict:
    return {"free": list(element.free), "torsion": list(element.tors)}


def symbol_from_payload(payload: dict, ktheory: KTheoryInput) -> SymbolDatum:
    raw1 = payload.get("codim1_indices")
    raw2 = payload.get("codim2_indices", {})
    _expect(isinstance(raw1, dict), "codim1_indices must be an object")
    _expect(isinstance(raw2, dict), "codim2_indices must be an object")
    codim1 = {
        str(face): element_from_payload(value, ktheory.k1, f"codim1_indices[{face}]")
        for face, value in raw1.items()
    }
    codim2 = {
        str(face): element_from_payload(value, ktheory.k0, f"codim2_indices[{face}]")
        for face, value in raw2.items()
    }
    return SymbolDatum.build(codim1, codim2)


# ---------------------------------------------------------------------------
# the coefficient mini-language "Z^r + Z/d1 + Z/d2"

_COEFF_TOKEN = re.compile(r"^(?:0|Z(?:\^(\d+))?|Z/(\d+))$")


def parse_coefficient(text: str) -> FGAbelianGroup:
    cyclics: list[int] = []
    for raw in text.split("+"):
        token = re.sub(r"\s+", "", raw)
        match = _COEFF_TOKEN.match(token)
        if not match:
            raise InputError(f"cannot parse coefficient term {raw.strip()!r}")
        if token == "0":
            continue
        if match.group(2) is not None:
            d = int(match.group(2))
            if d == 0:
                raise InputError("Z/0 is not a cyclic group; write Z instead")
            cyclics.append(d)
        else:
            cyclics.extend([0] * (int(match.group(1)) if match.group(1) else 1))
    return FGAbelianGroup.from_cyclics(cyclics)
