"""Quick end-to-end check of the Python bindings.

Run after `maturin develop` (or installing the wheel):

    python python/smoke_test.py
"""

import json
import math
import tempfile
from fractions import Fraction

import rmtlab


def main():
    assert rmtlab.catalan(5) == 42
    assert rmtlab.good_shape_count(6, 4) == 5
    assert rmtlab.count_good_walks(3, 4, 5) == 120
    assert rmtlab.enumerate_shapes(2, 2) == [[1, 2]]

    g2 = rmtlab.limit_gamma_walks([Fraction(4, 5), Fraction(1, 5)], Fraction(0), Fraction(1), 2)
    assert g2 == Fraction(2, 25), g2

    ens = rmtlab.Ensemble(400, rmtlab.Law.rademacher(), rmtlab.Law.rademacher(), seed=7)
    eigs = ens.eigenvalues()
    assert len(eigs) == 400
    assert ens.predicted_radius() == 1.0
    ks = rmtlab.ks_semicircle(eigs, 1.0)
    assert ks < 0.1, ks
    m2 = rmtlab.empirical_moment(eigs, 2)
    assert abs(m2 - 0.25) < 0.02, m2

    small = rmtlab.Ensemble(4, rmtlab.Law.rademacher(), rmtlab.Law.rademacher())
    assert small.exact_moment(2) == Fraction(1, 4), small.exact_moment(2)

    s = rmtlab.semicircle_stieltjes(1j, 1.0)
    assert abs(s - 2j * (math.sqrt(2) - 1)) < 1e-12, s

    witness = rmtlab.find_negativity_witness(math.sqrt(0.3), 1.0, 60.0)
    assert witness is not None and rmtlab.pseudo_char(witness, math.sqrt(0.3), 1.0) < -1

    e = rmtlab.graph_energy(300, 0.5, seed=1)
    pred = rmtlab.predicted_energy_gnp(300, 0.5)
    assert abs(e / pred - 1) < 0.1, (e, pred)

    try:
        rmtlab.Ensemble(10, rmtlab.Law.rademacher(), rmtlab.Law.rademacher(), fractions=[0.5, 0.6])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid fractions accepted")

    with tempfile.TemporaryDirectory() as out:
        report = json.loads(rmtlab.run_experiment("walks", '{"walks": {"k": 4}}', out))
        rows = report["results"]["catalan_identity"]
        assert all(r["equal"] for r in rows)

    print("rmtlab", rmtlab.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
