"""File formats: OBJ/STL meshes and JSON records with ``"inf"`` for infinity."""
from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from .mesh import TriangleMesh

FORMAT_VERSION = "rollscore/1"


def encode_floats(obj):
    """Recursively replace non-finite floats by the strings "inf", "-inf", "nan"."""
    if isinstance(obj, dict):
        return {k: encode_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_floats(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


_SPECIAL = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def decode_floats(obj):
    if isinstance(obj, dict):
        return {k: decode_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode_floats(v) for v in obj]
    if isinstance(obj, str) and obj in _SPECIAL:
        return _SPECIAL[obj]
    return obj


def dumps(record: dict) -> str:
    return json.dumps(encode_floats(record), indent=2, sort_keys=True, allow_nan=False)


def write_json(path, record: dict) -> Path:
    path = Path(path)
    path.write_text(dumps(record) + "\n")
    return path


def read_json(path) -> dict:
    return decode_floats(json.loads(Path(path).read_text()))


def write_obj(mesh: TriangleMesh, path) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# {mesh.name}: {mesh.n_vertices} vertices, {mesh.n_faces} faces\n")
        for v in mesh.vertices:
            fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*v))
        for f in mesh.faces + 1:
            fh.write("f {} {} {}\n".format(*f))
    return path


def read_obj(path, mass: float = 1.0) -> TriangleMesh:
    vertices, faces = [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            vertices.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) for p in parts[1:]]
            for k in range(1, len(idx) - 1):
                faces.append([idx[0] - 1, idx[k] - 1, idx[k + 1] - 1])
    return TriangleMesh(np.array(vertices), np.array(faces), mass, Path(path).stem)


def write_stl(mesh: TriangleMesh, path) -> Path:
    """Binary little-endian STL: 80-byte header, count, 50-byte records."""
    path = Path(path)
    normals = mesh.face_normals / (2.0 * mesh.face_areas[:, None])
    record = np.zeros(mesh.n_faces, dtype=np.dtype([("n", "<f4", 3), ("v", "<f4", (3, 3)),
                                                    ("attr", "<u2")]))
    record["n"] = normals
    record["v"] = mesh.triangles
    header = mesh.name.encode("ascii", "replace")[:80].ljust(80, b" ")
    with path.open("wb") as fh:
        fh.write(header)
        fh.write(struct.pack("<I", mesh.n_faces))
        fh.write(record.tobytes())
    return path


def read_stl(path, mass: float = 1.0) -> TriangleMesh:
    """Read a binary STL, merging bit-identical vertices."""
    data = Path(path).read_bytes()
    (count,) = struct.unpack_from("<I", data, 80)
    rec = np.frombuffer(data, dtype=np.dtype([("n", "<f4", 3), ("v", "<f4", (3, 3)),
                                              ("attr", "<u2")]), count=count, offset=84)
    tri = rec["v"].reshape(-1, 3).astype(float)
    vertices, inverse = np.unique(tri, axis=0, return_inverse=True)
    return TriangleMesh(vertices, inverse.reshape(-1, 3), mass, Path(path).stem)
