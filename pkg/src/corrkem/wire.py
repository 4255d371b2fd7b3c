"""File and wire formats.

Integers on the wire are big-endian.  Bit strings occupy the minimal
whole number of bytes with zero-padded high bits.

* source spec (JSON): ``{"type": "table", "alphabets": [...], "pmf":
  [{"x": i, "y": j, "z": k, "p": r}, ...]}`` with unlisted cells zero,
  or ``{"type": "satellite", "pa": r, "pb": r, "pe": r}``.  Unknown
  types are rejected.
* params (JSON): the seven operating-point numbers plus the source
  digest.
* kem ciphertext: magic ``IKM1`` | 8-byte params digest | t as u16 |
  tag, ceil(t/8) bytes | key-family seed | tag-family seed (each seed
  a then b, ceil(w/8) bytes apiece).
* key file: declared bit length as u16 | ceil(ell/8) raw bytes.
* dem ciphertext: scheme byte (0x01 OTP, 0x02 STREAM) | u32 body
  length | body.
* hybrid ciphertext: magic ``IHE1`` | kem block | dem block.
* sample file (JSON): one party's private vector bound to the session
  digest.
"""

import json

import numpy as np

from .dem import SCHEME_OTP, SCHEME_STREAM, DemCiphertext
from .errors import FormatError
from .hybrid import HybridCiphertext
from .ikem import IkemCiphertext, IkemKey, IkemParams, hash_width, params_digest
from .source import JointSource, SampleTriple, make_table_source, satellite_source
from .uhf import UhfSpec, seed_from_bytes, seed_to_bytes

KEM_MAGIC = b"IKM1"
HYBRID_MAGIC = b"IHE1"
_SCHEME_BYTE = {SCHEME_OTP: 0x01, SCHEME_STREAM: 0x02}
_SCHEME_NAME = {v: k for k, v in _SCHEME_BYTE.items()}


# ---------------------------------------------------------------------------
# JSON documents


def source_to_json(source: JointSource) -> dict:
    cells = []
    for (x, y, z), p in np.ndenumerate(source.pmf):
        if p != 0.0:
            cells.append({"x": int(x), "y": int(y), "z": int(z), "p": float(p)})
    return {"type": "table", "alphabets": list(source.alphabet_sizes), "pmf": cells}


def source_from_json(doc: dict) -> JointSource:
    kind = doc.get("type")
    if kind == "satellite":
        try:
            return satellite_source(doc["pa"], doc["pb"], doc["pe"])
        except KeyError as exc:
            raise FormatError(f"satellite source missing field {exc}") from exc
    if kind == "table":
        try:
            sizes = doc["alphabets"]
            entries = {(c["x"], c["y"], c["z"]): c["p"] for c in doc["pmf"]}
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed table source: {exc}") from exc
        return make_table_source(sizes, entries)
    raise FormatError(f"unknown source type {kind!r}")


def load_source(path) -> JointSource:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"source file is not valid JSON: {exc}") from exc
    return source_from_json(doc)


def params_to_json(params: IkemParams) -> dict:
    return {
        "n": params.n,
        "t": params.t,
        "ell": params.ell,
        "nu": params.nu,
        "eps": params.eps,
        "sigma": params.sigma,
        "q_e": params.q_e,
        "source_digest": params.source_digest,
    }


def params_from_json(doc: dict) -> IkemParams:
    try:
        return IkemParams(
            n=int(doc["n"]),
            t=int(doc["t"]),
            ell=int(doc["ell"]),
            nu=float(doc["nu"]),
            eps=float(doc["eps"]),
            sigma=float(doc["sigma"]),
            q_e=int(doc["q_e"]),
            source_digest=str(doc["source_digest"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed params document: {exc}") from exc


def load_params(path) -> IkemParams:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"params file is not valid JSON: {exc}") from exc
    return params_from_json(doc)


def save_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sample_to_json(role: str, params: IkemParams, symbols) -> dict:
    return {
        "role": role,
        "digest": params_digest(params).hex(),
        "n": int(len(symbols)),
        "symbols": [int(s) for s in symbols],
    }


def load_sample(path, params: IkemParams) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"sample file is not valid JSON: {exc}") from exc
    try:
        digest = doc["digest"]
        symbols = np.asarray(doc["symbols"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed sample file: {exc}") from exc
    if digest != params_digest(params).hex():
        raise FormatError("sample was generated under different params")
    return symbols


def triple_to_sample_docs(params: IkemParams, triple: SampleTriple) -> dict:
    return {
        "alice": sample_to_json("alice", params, triple.x),
        "bob": sample_to_json("bob", params, triple.y),
        "eve": sample_to_json("eve", params, triple.z),
    }


# ---------------------------------------------------------------------------
# binary blocks


def kem_ciphertext_to_bytes(params: IkemParams, source: JointSource, ctxt: IkemCiphertext) -> bytes:
    if params.t >= 1 << 16:
        raise FormatError("wire format carries t as u16; tag too wide")
    w = hash_width(source, params)
    tag_bytes = (params.t + 7) // 8
    out = bytearray()
    out += KEM_MAGIC
    out += params_digest(params)
    out += params.t.to_bytes(2, "big")
    out += ctxt.g.to_bytes(tag_bytes, "big")
    out += seed_to_bytes(UhfSpec(w, params.ell), ctxt.s_prime)
    out += seed_to_bytes(UhfSpec(w, params.t), ctxt.s)
    return bytes(out)


def kem_block_size(params: IkemParams, source: JointSource) -> int:
    w = hash_width(source, params)
    return 4 + 8 + 2 + (params.t + 7) // 8 + 4 * ((w + 7) // 8)


def kem_ciphertext_from_bytes(params: IkemParams, source: JointSource, raw: bytes) -> IkemCiphertext:
    expected = kem_block_size(params, source)
    if len(raw) != expected:
        raise FormatError(f"kem block must be {expected} bytes, got {len(raw)}")
    if raw[:4] != KEM_MAGIC:
        raise FormatError("bad kem magic")
    if raw[4:12] != params_digest(params):
        raise FormatError("params digest mismatch")
    t = int.from_bytes(raw[12:14], "big")
    if t != params.t:
        raise FormatError(f"ciphertext t={t} != params t={params.t}")
    w = hash_width(source, params)
    tag_bytes = (t + 7) // 8
    seed_len = 2 * ((w + 7) // 8)
    pos = 14
    g = int.from_bytes(raw[pos : pos + tag_bytes], "big")
    if g >= 1 << t:
        raise FormatError("tag wider than t bits")
    pos += tag_bytes
    s_prime = seed_from_bytes(UhfSpec(w, params.ell), raw[pos : pos + seed_len])
    pos += seed_len
    s = seed_from_bytes(UhfSpec(w, params.t), raw[pos : pos + seed_len])
    return IkemCiphertext(g, s_prime, s)


def key_to_bytes(key: IkemKey) -> bytes:
    nb = (key.length + 7) // 8
    return key.length.to_bytes(2, "big") + key.bits.to_bytes(nb, "big")


def key_from_bytes(raw: bytes) -> IkemKey:
    if len(raw) < 2:
        raise FormatError("key file too short")
    length = int.from_bytes(raw[:2], "big")
    nb = (length + 7) // 8
    if len(raw) != 2 + nb:
        raise FormatError(f"key file must be {2 + nb} bytes for {length} bits")
    bits = int.from_bytes(raw[2:], "big")
    if length < 1 or bits >= 1 << length:
        raise FormatError("key bits wider than declared length")
    return IkemKey(bits, length)


def dem_ciphertext_to_bytes(ctxt: DemCiphertext) -> bytes:
    return bytes([_SCHEME_BYTE[ctxt.scheme_tag]]) + len(ctxt.body).to_bytes(4, "big") + ctxt.body


def dem_ciphertext_from_bytes(raw: bytes) -> DemCiphertext:
    if len(raw) < 5:
        raise FormatError("dem block too short")
    scheme = _SCHEME_NAME.get(raw[0])
    if scheme is None:
        raise FormatError(f"unknown dem scheme byte {raw[0]:#x}")
    length = int.from_bytes(raw[1:5], "big")
    if len(raw) != 5 + length:
        raise FormatError(f"dem body must be {length} bytes, got {len(raw) - 5}")
    return DemCiphertext(raw[5:], scheme)


def hybrid_to_bytes(params: IkemParams, source: JointSource, ctxt: HybridCiphertext) -> bytes:
    return (
        HYBRID_MAGIC
        + kem_ciphertext_to_bytes(params, source, ctxt.c1)
        + dem_ciphertext_to_bytes(ctxt.c2)
    )


def hybrid_from_bytes(params: IkemParams, source: JointSource, raw: bytes) -> HybridCiphertext:
    if raw[:4] != HYBRID_MAGIC:
        raise FormatError("bad hybrid magic")
    ksize = kem_block_size(params, source)
    if len(raw) < 4 + ksize + 5:
        raise FormatError("hybrid block too short")
    c1 = kem_ciphertext_from_bytes(params, source, raw[4 : 4 + ksize])
    c2 = dem_ciphertext_from_bytes(raw[4 + ksize :])
    return HybridCiphertext(c1, c2)
