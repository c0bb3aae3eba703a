"""Smoke test for the dforge extension module.

Build the module first, e.g. `maturin develop -m crates/python/Cargo.toml`,
or copy the built shared library next to this script as dforge.so.
"""

import json
import pathlib
import sys

import dforge

FIXTURE = pathlib.Path(__file__).resolve().parents[1] / "crates/core/tests/fixtures/quadratic.json"


def main() -> int:
    ws = dforge.Workspace(FIXTURE.read_text(), seed=0)
    assert set(ws.modules()) == {"phi", "conj"}
    assert ws.degree("mu") == "(T)"
    assert ws.dual("mu") == "(2 + x) + t"
    assert json.loads(ws.run("classify"))["n"] == "(T)"
    orbit = json.loads(ws.run("star-orbit", certify_bound=1, jobs=2))
    assert orbit["m_map"]["s"] == "(T)"
    assert json.loads(ws.document())["modules"].keys() == {"phi", "conj"}

    for q in (3, 5):
        report = json.loads(dforge.example35(q))
        assert report["all_pass"], report["checks"]

    doc = json.loads(FIXTURE.read_text())
    doc["modules"]["phi"] = "T + (2 + 2*T*x)*t + 2*t^^2"
    try:
        dforge.Workspace(json.dumps(doc))
    except dforge.ParseError as e:
        assert "modules.phi" in str(e)
    else:
        raise AssertionError("expected a parse error")
    try:
        dforge.example35(4)
    except dforge.DomainError:
        pass
    else:
        raise AssertionError("expected a domain error")
    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
