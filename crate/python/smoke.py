#!/usr/bin/env python3
"""Smoke test for the specsim_rs bindings.

Loads the cdylib straight out of the cargo target directory (no wheel
build), then walks the whole surface: dataset construction and I/O,
similarity building, spectral clustering, evaluation, and the config
runner. Exits nonzero on the first broken expectation.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [ROOT / "target" / p / "libspecsim_rs.so" for p in ("debug", "release")]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("no libspecsim_rs.so under target/; run: cargo build -p specsim-py")
    staging = Path(tempfile.mkdtemp(prefix="specsim_rs_"))
    shutil.copy2(max(built, key=lambda p: p.stat().st_mtime), staging / "specsim_rs.so")
    sys.path.insert(0, str(staging))
    import specsim_rs

    return specsim_rs


def main():
    sr = load_module()

    methods = sr.list_methods()
    assert len(methods) == 27, methods
    assert methods[:3] == ["F1", "F2", "F3"]
    assert methods[3] == "E1_Kl" and methods[-1] == "M4_Ks"

    # Generated rings: two interlacing circles in 3-space.
    d = sr.Dataset.rings(200, dispersion=0.04, seed=7)
    assert len(d) == 200 and d.n == 200 and d.dim == 3 and d.k == 2
    assert sorted(set(d.labels)) == [1, 2]
    assert d.point(0) == d.points()[0]
    again = sr.Dataset.rings(200, dispersion=0.04, seed=7)
    assert d.points() == again.points()

    with tempfile.TemporaryDirectory() as tmp:
        csv = Path(tmp) / "rings.csv"
        d.write_csv(str(csv))
        back = sr.Dataset.load_csv(str(csv), label_column="last")
        assert back.n == d.n and back.labels == d.labels

    scaled = d.normalize_diameter()
    pts = scaled.points()
    diameter = max(
        math.dist(pts[a], pts[b]) for a in range(len(pts)) for b in range(a + 1, len(pts))
    )
    assert abs(diameter - 1.0) < 1e-12, diameter

    # The shipped UCI files load through the dedicated adapters.
    iris = sr.Dataset.load_uci_iris(str(ROOT / "data" / "uci" / "iris.data"))
    assert iris.n == 150 and iris.k == 3 and iris.dim == 4

    # Similarity construction and the diagnostics dict.
    w, diag = sr.build_similarity(d, "M4_Kl")
    assert w.n == 200
    assert diag["k_used"] == 8  # 1 + floor(log2 200)
    assert diag["epsilon"] is None
    assert diag["sigma"]["kind"] == "global"
    assert 0.0 < w.sparsity_level < 1.0
    assert w.stored_nonzeros == 2 * len(w.entries())
    i, j, wij = w.entries()[0]
    assert w.get(i, j) == wij and w.get(j, i) == wij and w.get(0, 0) == 0.0
    assert abs(sum(v for _, v in w.row(i)) - w.degrees()[i]) < 1e-12

    e, ediag = sr.build_similarity(d, "E2_Ks")
    assert ediag["epsilon"] > 0.0 and ediag["k_used"] == 15  # 1 + floor(sqrt 200)
    assert e.sparsity_level < w.sparsity_level  # epsilon graph is denser here

    # Spectral clustering nails low-dispersion rings with M4.
    res = sr.spectral_cluster(w, d.k, seed=7)
    assert not res.failed and res.nc == 2 and len(res.labels) == 200
    scores = sr.evaluate(res.labels, d.labels)
    assert scores["nmi"] == 1.0 and scores["ce"] == 0.0, scores

    kres = sr.spectral_cluster(w, d.k, seed=7, discretization="kmeans")
    assert not kres.failed and sr.evaluate(kres.labels, d.labels)["nmi"] == 1.0

    summary = sr.run_method(d, "M4_Ks", seed=7)
    assert summary["failed"] is False and summary["nmi"] == 1.0
    assert 0.9 < summary["theta"] < 1.0

    # Config runner writes the report files where the config says.
    with tempfile.TemporaryDirectory() as tmp:
        conf = Path(tmp) / "smoke.conf"
        conf.write_text(
            f"seed = 7\nmethods = F1,M4_Kl\nout_dir = {tmp}/out\n\n"
            "[dataset]\nkind = rings\nn = 120\ndispersion = 0.03\nseed = 7\nset = demo\n"
        )
        written = sr.run_config(str(conf))
        names = {Path(p).name for p in written}
        assert "runs.csv" in names and "timings.csv" in names, names
        lines = (Path(tmp) / "out" / "runs.csv").read_text().splitlines()
        assert len(lines) == 3 and lines[0].startswith("method,dataset,")

    # Error paths surface as ValueError, not panics.
    for bad in (lambda: sr.build_similarity(d, "Q9"), lambda: sr.spectral_cluster(w, 0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(f"smoke ok: {len(methods)} methods, rings NMI {scores['nmi']}")


if __name__ == "__main__":
    main()
