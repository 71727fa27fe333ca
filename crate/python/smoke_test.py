"""Smoke test for the kmsq_py extension.

Build and install first, e.g. `pip install maturin` then
`maturin develop -m crates/py/Cargo.toml` (or build a wheel and pip install it).
"""

import math

import kmsq_py as k


def main():
    # hypotheses are checked with a named clause
    try:
        k.check_hypotheses(5, 5)
    except ValueError as e:
        assert "distinct primes" in str(e), e
    else:
        raise AssertionError("p = k accepted")

    seed = k.Seed.build(5, 7, "sl")
    assert seed.k == 7 and seed.q == 5
    assert all(s == "pass" for _, s in seed.conditions()), seed.conditions()
    again = k.Seed.from_text(seed.to_text())
    assert again.mc == seed.mc

    report = k.verify(seed, trials=5)
    assert report.passed, report.to_text()
    ids = [r[0] for r in report.records("relators")]
    assert len([i for i in ids if i.startswith("rel[") or i.endswith("^p")]) == 11

    # SL_2(F_5) from two transvections
    assert k.closure_size([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 5, 1000) == (120, True)
    assert k.sl_order(2, 5) == 120
    assert k.sp_order(2, 5) == 9_360_000

    bound = k.spectral_bound(11)
    assert abs(bound - (math.sqrt(22) + 2) / 9) < 1e-15
    rows = k.link_spectra(11)
    assert len(rows) == 3 and all(lam <= bound for *_, lam in rows), rows
    print("kmsq_py smoke test ok:", [(r[0], round(r[3], 6)) for r in rows])


if __name__ == "__main__":
    main()
