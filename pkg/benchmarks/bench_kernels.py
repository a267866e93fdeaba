"""Compare the compiled and pure arithmetic backends on the hot paths.

Backend choice happens at import, so the script re-runs itself in a worker
subprocess per backend (COMPATSPLIT_BACKEND=pure|compiled) and prints one
table.  Workloads cover the raw kernels (matrix product, row reduction) and
the library paths that lean on them: Ext groups, the splitting decision on a
generated corpus, and a full spectral window with collapse verdicts.
"""

import json
import os
import subprocess
import sys
import time


def _timed(fn, repeats: int = 3) -> float:
    best = None
    for r in range(repeats):
        t0 = time.perf_counter()
        fn(r)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def run_workloads() -> dict:
    import random

    from compatsplit.kernels import BACKEND, mat_mul, rref
    from compatsplit.algebras import make_truncated_poly
    from compatsplit.arrows import ArrowObject
    from compatsplit.contexts import ArrowContext
    from compatsplit.homology import ext_group
    from compatsplit.modules import ModuleMorphism, gen_corpus
    from compatsplit.spectral import e1_page, e2_page, verify_collapse
    from compatsplit.splitting import decide_compatible_split, gen_split_diagrams

    rng = random.Random(0)
    out = {"backend": BACKEND, "timings": {}}

    n = 80
    a2 = [rng.randrange(2) for _ in range(n * n)]
    b2 = [rng.randrange(2) for _ in range(n * n)]
    a5 = [rng.randrange(5) for _ in range(n * n)]
    b5 = [rng.randrange(5) for _ in range(n * n)]
    out["timings"][f"mat_mul {n}x{n} mod 2"] = _timed(
        lambda r: mat_mul(2, n, n, n, a2, b2))
    out["timings"][f"mat_mul {n}x{n} mod 5"] = _timed(
        lambda r: mat_mul(5, n, n, n, a5, b5))

    wide2 = [rng.randrange(2) for _ in range(n * 2 * n)]
    wide5 = [rng.randrange(5) for _ in range(n * 2 * n)]
    out["timings"][f"rref {n}x{2 * n} mod 2"] = _timed(
        lambda r: rref(2, n, 2 * n, wide2))
    out["timings"][f"rref {n}x{2 * n} mod 5"] = _timed(
        lambda r: rref(5, n, 2 * n, wide5))

    def take(stream, want_morphisms: bool, count: int):
        picked = []
        for item in stream:  # infinite generator: slice by hand
            if isinstance(item, ModuleMorphism) == want_morphisms:
                picked.append(item)
                if len(picked) == count:
                    return picked

    base = make_truncated_poly(2, 2)

    def ext_load(r):
        # fresh modules per repeat so the library's Ext memoization
        # cannot turn later repeats into cache hits
        mods = take(gen_corpus(base, 6, seed=100 * r + 5), False, 6)
        for y in mods[:3]:
            for x in mods[3:]:
                ext_group(y, x, 4)

    out["timings"]["ext_group deg 4, 9 corpus pairs"] = _timed(ext_load, repeats=2)

    def split_load(r):
        gen = gen_split_diagrams(base, 6, seed=100 * r + 9)
        for _ in range(20):
            decide_compatible_split(next(gen))

    out["timings"]["decide_compatible_split x20"] = _timed(split_load, repeats=2)

    ctx = ArrowContext(base)

    def ss_load(r):
        mors = take(gen_corpus(base, 6, seed=100 * r + 11), True, 4)
        for idx in range(0, 4, 2):
            y = ArrowObject(mors[idx]).t_module()
            x = ArrowObject(mors[idx + 1]).t_module()
            verify_collapse(e2_page(e1_page(ctx, y, x, 3, 2)))

    out["timings"]["spectral window (3,2) x2"] = _timed(ss_load, repeats=2)
    return out


def main() -> int:
    if "--worker" in sys.argv:
        print(json.dumps(run_workloads()))
        return 0

    results = {}
    for backend in ("pure", "compiled"):
        env = dict(os.environ, COMPATSPLIT_BACKEND=backend)
        proc = subprocess.run([sys.executable, os.path.abspath(__file__),
                               "--worker"],
                              capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(f"{backend} worker failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        results[backend] = json.loads(proc.stdout)

    names = list(results["pure"]["timings"])
    width = max(len(s) for s in names)
    print(f"{'workload':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    print("-" * (width + 34))
    for name in names:
        tp = results["pure"]["timings"][name]
        tc = results["compiled"]["timings"][name]
        ratio = tp / tc if tc > 0 else float("inf")
        print(f"{name:<{width}}  {tp * 1e3:>8.2f}ms  {tc * 1e3:>8.2f}ms  "
              f"{ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
