"""Smoke test for the gnlset Python extension.

Build and install first, e.g.
    pip install maturin
    maturin build --release -m crates/py/Cargo.toml && pip install target/wheels/gnlset-*.whl
"""

import json

import gnlset


def main() -> None:
    assert "type2-tripartite" in gnlset.families()

    w = gnlset.Cyclotomic.root_of_unity(3, 1)
    assert str(w * w * w) == "1"
    assert abs(complex(w + w.conj()) - (-1)) < 1e-12

    s = gnlset.construct("bipartite", [3, 5])
    assert len(s) == 9 and s.dims == [3, 5] and s.is_orthogonal()
    for p in range(2):
        report = s.party_report([p])
        assert report["solution_dim"] == 1 and report["trivial"]
        assert s.float_solution_dim([p]) == 1

    again = gnlset.StateSet.from_json(s.to_json())
    assert again.to_json() == s.to_json()

    t1 = gnlset.construct("type1-tripartite", [4, 4, 6])
    assert len(t1) == 18
    red = t1.find_reduction()
    assert red["party"] == 0 and red["index_subset"] == [3]
    c = t1.classify()
    assert c["gnl_type"] == "TypeI"
    for verdict in c["per_bipartition"]:
        cert = verdict["outcome"]["certificate"]
        t1.verify_certificate(cert)
        t1.verify_certificate(json.dumps(cert))

    bad = dict(cert, subset=["phi_0"] + cert["subset"][1:])
    try:
        t1.verify_certificate(bad)
    except ValueError:
        pass
    else:
        raise AssertionError("tampered certificate accepted")

    t2 = gnlset.construct("type2-tripartite", [3, 4, 5])
    assert t2.classify()["gnl_type"] == "TypeII"

    try:
        gnlset.construct("type1-tripartite", [3, 4, 5])
    except ValueError as e:
        assert "3 <= d1-1 <= d2 <= d3" in str(e)
    else:
        raise AssertionError("inadmissible dims accepted")

    print("gnlset smoke test passed")


if __name__ == "__main__":
    main()
