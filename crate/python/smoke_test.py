"""Smoke test for the superlax_py extension module."""

import json

import superlax_py as sl


def main():
    ids = [i for i, _ in sl.catalog()]
    assert "susy.closure" in ids and ids == sorted(ids)

    ts = sl.Model("ts", 3)
    q_plus, q_minus = ts.op("Qplus"), ts.op("Qminus")
    assert (q_plus * q_plus).is_zero()
    assert q_plus.adjoint() == q_minus

    h = ts.op("H")
    assert ts.parse(h.to_text()) == h
    assert (q_plus.anticommutator(q_minus) - h).is_zero()
    assert ts.e0() == "2*l^2"

    report = json.loads(ts.verify(filter="susy.*"))
    assert report and all(e["status"] == "pass" for e in report), report

    spectrum = json.loads(sl.spectrum_json(3, 2))
    assert len(spectrum["levels"]) == 3

    export = json.loads(sl.Model("calogero", 2).export())
    assert isinstance(export, dict)

    try:
        sl.Model("calogero", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("N=1 accepted")

    print(f"superlax_py {sl.__version__}: ok ({len(ids)} identities)")


if __name__ == "__main__":
    main()
