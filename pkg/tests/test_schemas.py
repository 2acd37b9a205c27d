"""Every JSON the package writes validates against the schemas in docs/."""

import json
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from conftest import z_field
from gapcert.certifier import certify_gap
from gapcert.pauli import PauliPoly, hamiltonian_to_json
from gapcert.upper_bounds import lasserre_upper

DOCS = Path(__file__).resolve().parents[1] / "docs"


def _validator(name):
    docs = {p.name: json.loads(p.read_text()) for p in DOCS.glob("*.schema.json")}
    reg = Registry().with_resources(
        [(f"gapcert/{n}", Resource.from_contents(d)) for n, d in docs.items()]
    )
    return jsonschema.Draft202012Validator(docs[name], registry=reg)


def test_certificate_schema():
    cert = certify_gap(z_field(3), 2, "lasserre", 2).to_json()
    _validator("certificate.schema.json").validate(json.loads(json.dumps(cert)))
    bad = dict(cert, schema="gapcert-certificate/0")
    with pytest.raises(jsonschema.ValidationError):
        _validator("certificate.schema.json").validate(bad)


def test_closed_form_certificate_schema():
    cert = certify_gap(PauliPoly.parse(1, "X1")).to_json()
    _validator("certificate.schema.json").validate(cert)


def test_bound_report_schema():
    _validator("bound_report.schema.json").validate(lasserre_upper(z_field(2), 1).to_json())


def test_hamiltonian_schema():
    h = PauliPoly.parse(3, "1/2 X1 Y2 - Z3 + 2")
    _validator("hamiltonian.schema.json").validate(hamiltonian_to_json(h))
