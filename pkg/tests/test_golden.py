"""Byte-level regression pins. Regenerate only for an intended format change."""

import hashlib
import json
from pathlib import Path

from conftest import z_field
from gapcert.genrel import gen_relations
from gapcert.lower_bound import prepare_lower
from gapcert.oracle import derive_constants
from gapcert.sdp import export_sdpa

GOLDEN = json.loads((Path(__file__).parent / "golden" / "hashes.json").read_text())


def _sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def test_sdpa_export_is_pinned(tmp_path):
    f = tmp_path / "p.dat-s"
    export_sdpa(prepare_lower(z_field(2), 1).sdp, f)
    assert _sha(f.read_bytes()) == GOLDEN["sdpa_z2_level1"]


def test_relation_set_is_pinned():
    blob = json.dumps([r.to_json() for r in gen_relations(2)], sort_keys=True).encode()
    assert _sha(blob) == GOLDEN["relations_n2"]


def test_constants_table_is_pinned():
    assert derive_constants()["hash"] == GOLDEN["constants"]
