#!/usr/bin/env python3
"""Smoke test for the fair_py extension module.

Builds nothing itself: run `cargo build -p fair-py --release` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib under
target/, exposes it as an importable module and exercises the main types and
operations end to end.
"""

import math
import os
import random
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)

checks = 0


def check(name, ok, detail=""):
    global checks
    checks += 1
    status = "ok" if ok else "FAIL"
    print(f"  [{status}] {name}" + (f" ({detail})" if detail else ""))
    if not ok:
        sys.exit(f"smoke test failed at: {name}")


def import_fair_py():
    candidates = [
        os.path.join(ROOT, "target", profile, lib)
        for profile in ("release", "debug")
        for lib in ("libfair_py.so", "libfair_py.dylib", "fair_py.dll")
    ]
    built = next((c for c in candidates if os.path.exists(c)), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p fair-py --release")
    stage = tempfile.mkdtemp(prefix="fair_py_")
    shutil.copy(built, os.path.join(stage, "fair_py.so"))
    sys.path.insert(0, stage)
    import fair_py

    return fair_py


def synthetic(n1, n2, p, signal, rng):
    rows, labels = [], []
    for i in range(n1 + n2):
        shift = signal if i < n1 else 0.0
        rows.append([rng.gauss(shift if j < 3 else 0.0, 1.0) for j in range(p)])
        labels.append(1 if i < n1 else 2)
    return rows, labels


def main():
    fair = import_fair_py()
    print(f"imported fair_py from {fair.__file__}")
    rng = random.Random(20240817)

    rows, labels = synthetic(20, 20, 12, 1.6, rng)
    ds = fair.Dataset(rows, labels)
    check("dataset shape", ds.n == 40 and ds.p == 12, repr(ds))

    std = ds.standardize_samples()
    r0 = std.row(0)
    mean = sum(r0) / len(r0)
    var = sum((v - mean) ** 2 for v in r0) / (len(r0) - 1)
    check("standardization", abs(mean) < 1e-12 and abs(var - 1.0) < 1e-12)

    train, test = ds.stratified_split(0.5, seed=7)
    check("stratified split", train.n == 20 and test.n == 20)
    train2, _ = ds.stratified_split(0.5, seed=7)
    check("split determinism", train2.row(0) == train.row(0))

    t = ds.t_statistics()
    order = ds.rank_by_abs_t()
    check("t-statistics length", len(t) == 12)
    check(
        "ranking sorts |t|",
        all(abs(t[order[k]]) >= abs(t[order[k + 1]]) for k in range(11)),
    )
    check("signal features rank first", sorted(order[:3]) == [0, 1, 2])

    ind = fair.fit_independence(ds)
    fair0 = fair.fit_fair_threshold(ds, 0.0)
    x = [rng.gauss(0.0, 1.0) for _ in range(12)]
    check(
        "fair(b=0) == independence",
        fair0.predict(x) == ind.predict(x)
        and abs(fair0.score(x) - ind.score(x)) < 1e-12,
    )

    top3 = fair.fit_fair_count(ds, 3)
    check("count selection", top3.n_features == 3, repr(top3))
    b = fair.m_to_threshold(ds, 3)
    check(
        "count/threshold round trip",
        fair.fit_fair_threshold(ds, b).active == top3.active,
    )

    err = top3.predict([5.0] * 12)
    check("prediction in {1,2}", err in (1, 2))
    check("error rate in range", 0.0 <= top3.error_rate(test) <= 1.0)

    nc = fair.fit_truncated_nc(ds, 12)
    proj = fair.fit_projection(ds, seed=42)
    nsc = fair.fit_shrunken_centroids(ds, 0.5)
    orc = fair.fit_oracle(ds, [1.6] * 3 + [0.0] * 9, 0.1)
    check(
        "other fits",
        nc.kind == "truncated_nc"
        and proj.kind == "projection"
        and nsc.kind == "shrunken_centroids"
        and orc.active == [0, 1, 2],
    )

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "model.tsv")
        top3.save(path)
        back = fair.Model.load(path)
        check(
            "model round trip",
            back.active == top3.active and back.score(x) == top3.score(x),
        )
        csv_path = os.path.join(d, "data.csv")
        ds.save(csv_path)
        reloaded = fair.Dataset.from_file(csv_path, orientation="rows", label="label")
        check("dataset file round trip", reloaded.row(5) == ds.row(5))

    m0, obj0 = fair.select_m0(ds)
    m1, obj1 = fair.select_m1(ds)
    check(
        "selection criteria",
        1 <= m0 <= 12 and 1 <= m1 <= 12 and len(obj0) == 12 and len(obj1) == 12,
        f"m0={m0} m1={m1}",
    )

    lam = ds.lambda_max_curve(6)
    check(
        "eigenvalue curve",
        lam[0] == 1.0 and all(b >= a for a, b in zip(lam, lam[1:])),
    )

    check("normal_cdf", abs(fair.normal_cdf(1.96) - 0.9750021048517796) < 1e-12)
    check(
        "closed forms",
        fair.theorem4_error(0.0, 10, 30, 30) == 0.5
        and fair.theorem5_bound(4.0, 10, 0.0, 30, 30)
        == fair.theorem4_error(4.0, 10, 30, 30)
        and abs(fair.theorem1_limit(2.0, 1.0) - (1 - fair.normal_cdf(1.0))) < 1e-15
        and fair.oracle_error(9.0, 5, 20, 20) < 0.08,
    )

    study = fair.simulate(p=90, reps=3, n1=12, n2=12, test_per_class=30, seed=8)
    check(
        "small synthetic study",
        study.replications == 3
        and len(study.mean_curve_t) == 90
        and 0.0 <= study.fair_error_mean <= 1.0
        and 0.3 <= study.projection_error_mean <= 0.7,
        f"fair_err={study.fair_error_mean:.3f} proj={study.projection_error_mean:.3f}",
    )

    print(f"smoke test passed: {checks} checks")


if __name__ == "__main__":
    main()
