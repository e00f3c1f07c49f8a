"""Smoke test for the pohpath_py extension module.

Build and install first:

    pip install --no-build-isolation ./crates/py
"""

import json
import sys

import pohpath_py as ph


def check(cond, what):
    if not cond:
        print(f"FAIL {what}")
        sys.exit(1)
    print(f"ok   {what}")


def main():
    k3 = ph.read_instance(json.dumps({
        "n": 3,
        "edges": [[0, 1], [1, 2], [0, 2]],
        "constraints": [[0, 1], [1, 2]],
    }))
    check(k3.n == 3 and len(k3.edges) == 3, "read_instance")

    res = ph.solve(k3, algo="oracle")
    check(res["feasible"] and res["order"] == [0, 1, 2], "oracle on an ordered triangle")
    check(ph.validate(k3, res["order"])["valid"], "validate accepts the solution")

    p3 = ph.read_instance('{"n":3,"edges":[[0,1],[1,2]]}')
    report = ph.validate(p3, [1, 0, 2])
    check(not report["edges_present"] and not report["valid"], "validate flags a missing edge")

    stuck = ph.read_instance('{"n":3,"edges":[[0,1],[1,2]],"constraints":[[0,1],[2,1]]}')
    res = ph.solve(stuck)
    check(not res["feasible"] and res["order"] is None, "infeasible instance")

    c4 = ph.read_instance('{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}')
    try:
        ph.solve(c4, algo="block")
        check(False, "block solver rejects a four-cycle")
    except ValueError as e:
        check("not a block graph" in str(e), "block solver rejects a four-cycle")

    a = ph.gen_mcp_d2p(2, 1, seed=7).to_json()
    b = ph.gen_mcp_d2p(2, 1, seed=7).to_json()
    check(a == b, "generator output is deterministic")

    g = ph.gen_gnp(9, 0.5, d=3, seed=4, max_weight=5)
    via_oracle = ph.solve(g, algo="oracle")
    via_paths = ph.solve(g, algo="fes")
    check(via_oracle["cost"] == via_paths["cost"], "path enumeration matches the oracle")

    ecc = ph.gen_ecc(1, [])
    check(ecc.n == 5 and ph.solve(ecc)["feasible"], "three-clique gadget")

    again = ph.read_instance(g.to_json())
    check(again.to_json() == g.to_json(), "JSON round trip")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
