"""Instance files.

``.lag`` is a line-oriented text format::

    epwkit-lagrangian 1 rng=PCG64
    field prime 7
    seed 0
    lagrangian true
    ndv unknown
    scan {"levels": [...]}
    basis 10 20
    <20 field elements per row, 10 rows>
    end

The basis is the RREF basis, so two files describe the same subspace iff
their basis blocks agree. ``.gm`` is JSON embedding the ``.lag`` text plus
the hyperplane data and the six Gram matrices; on load the GM data is rebuilt
from A and the hyperplane and compared against what the file stores.
"""
from __future__ import annotations

import json
from pathlib import Path

from .fields import FieldSpec
from .gm import GMInstance, build_gm
from .lagrangian import NDV_STATUSES, LagrangianInstance, validate_lagrangian
from .linalg import Subspace

LAG_MAGIC = "epwkit-lagrangian"
LAG_VERSION = 1
GM_MAGIC = "epwkit-gm"
GM_VERSION = 1
RNG_NAME = "PCG64"


class FormatError(ValueError):
    pass


def dumps_lag(inst: LagrangianInstance) -> str:
    F = inst.field
    seed = inst.provenance.get("seed")
    lines = [
        f"{LAG_MAGIC} {LAG_VERSION} rng={RNG_NAME}",
        f"field {F.spec()}",
        f"seed {'none' if seed is None else seed}",
        f"lagrangian {'true' if inst.is_lagrangian else 'false'}",
        f"ndv {inst.ndv_status}",
        f"scan {json.dumps(inst.scan, sort_keys=True, separators=(',', ':'))}",
        "basis 10 20",
    ]
    lines += [" ".join(F.format(x) for x in row) for row in inst.rows()]
    lines.append("end")
    return "\n".join(lines) + "\n"


def _expect(line: str, key: str) -> str:
    head, _, rest = line.partition(" ")
    if head != key:
        raise FormatError(f"expected {key!r} line, got {line!r}")
    return rest.strip()


def loads_lag(text: str, source: str = "<string>") -> LagrangianInstance:
    lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip()]
    if len(lines) < 8:
        raise FormatError("truncated instance file")
    magic = lines[0].split()
    if len(magic) != 3 or magic[0] != LAG_MAGIC:
        raise FormatError("not an epwkit Lagrangian file")
    if magic[1] != str(LAG_VERSION) or magic[2] != f"rng={RNG_NAME}":
        raise FormatError(f"unsupported format version {magic[1]} ({magic[2]})")
    F = FieldSpec.parse(_expect(lines[1], "field")).field
    seed_s = _expect(lines[2], "seed")
    flag = _expect(lines[3], "lagrangian")
    ndv = _expect(lines[4], "ndv")
    if ndv not in NDV_STATUSES:
        raise FormatError(f"unknown ndv status {ndv!r}")
    scan = json.loads(_expect(lines[5], "scan"))
    if _expect(lines[6], "basis") != "10 20":
        raise FormatError("basis block must be 10 x 20")
    rows = [[F.parse(x) for x in ln.split()] for ln in lines[7:17]]
    if len(rows) != 10 or any(len(r) != 20 for r in rows) or lines[17:] != ["end"]:
        raise FormatError("malformed basis block")
    A = Subspace.span(F, rows, 20)
    if [list(b) for b in A.basis] != rows:
        raise FormatError("basis block is not in reduced row echelon form")
    is_lag = validate_lagrangian(A)
    if flag == "true" and not is_lag:
        raise FormatError("file claims a Lagrangian but the symplectic form does not vanish")
    prov = {"source": source}
    if seed_s != "none":
        prov["seed"] = int(seed_s)
    return LagrangianInstance(F, A, is_lag, ndv, prov, scan)


def write_lag(inst: LagrangianInstance, path) -> None:
    Path(path).write_text(dumps_lag(inst))


def read_lag(path) -> LagrangianInstance:
    return loads_lag(Path(path).read_text(), str(path))


def gm_to_json(gm: GMInstance) -> dict:
    F = gm.field
    fmt = lambda r: [F.format(x) for x in r]  # noqa: E731
    return {
        "format": GM_MAGIC,
        "version": GM_VERSION,
        "lagrangian": dumps_lag(gm.lag),
        "phi": fmt(gm.phi),
        "V5": [fmt(r) for r in gm.V5],
        "v0": fmt(gm.v0),
        "ell": gm.ell,
        "n": gm.n,
        "W": [fmt(r) for r in gm.W_rows()],
        "quadrics": [[fmt(r) for r in q.gram] for q in gm.family()],
    }


def dumps_gm(gm: GMInstance) -> str:
    return json.dumps(gm_to_json(gm), indent=1) + "\n"


def loads_gm(text: str, source: str = "<string>") -> GMInstance:
    data = json.loads(text)
    if data.get("format") != GM_MAGIC or data.get("version") != GM_VERSION:
        raise FormatError("not a version-1 epwkit GM file")
    lag = loads_lag(data["lagrangian"], source)
    F = lag.field
    gm = build_gm(lag, [F.parse(x) for x in data["phi"]])
    if gm_to_json(gm) != data:
        raise FormatError("stored GM data differs from the data rebuilt from A and the hyperplane")
    return gm


def write_gm(gm: GMInstance, path) -> None:
    Path(path).write_text(dumps_gm(gm))


def read_gm(path) -> GMInstance:
    return loads_gm(Path(path).read_text(), str(path))
