"""Compare the pure-python and compiled kernel backends.

Times each hot kernel on a 512x512 input and a full detection on the
synthetic scene, then prints one row per operation with the speedup.

Usage: python3 benchmarks/bench_backends.py [--size 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

import easdet
from easdet import kernels, testimages


def median_ms(fn, repeats):
    fn()  # warm-up
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1000.0)
    return float(np.median(samples))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"available backends: {', '.join(sorted(backends))}")
    if "compiled" not in backends:
        print("compiled backend missing; timing python only")

    rng = np.random.default_rng(0)
    n = args.size
    img = rng.uniform(0, 1, (n, n))
    ix = rng.uniform(-1, 1, (n, n))
    iy = rng.uniform(-1, 1, (n, n))
    taps = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
    score = rng.uniform(0, 1, (n, n))
    scene = testimages.synthetic_scene(n)

    ops = [
        ("sep_convolve 5tap", lambda: kernels.sep_convolve(img, taps, taps)),
        ("central_diff", lambda: kernels.central_diff(img)),
        ("moment_products", lambda: kernels.moment_products(ix, iy, 1.0, True)),
        ("box_mean k=9", lambda: kernels.box_mean(img, 9)),
        ("eas8", lambda: kernels.eas8(img)),
        ("edge_keep", lambda: kernels.edge_keep(img, img, ix, 5.0)),
        ("nms r=1", lambda: kernels.nms_strict(score, 1)),
        ("detect top500", lambda: easdet.detect(scene, top_n=500)),
    ]

    results = {}
    for backend in sorted(backends):
        prev = kernels.set_backend(backend)
        try:
            for name, fn in ops:
                results.setdefault(name, {})[backend] = median_ms(fn, args.repeats)
        finally:
            kernels.set_backend(prev)

    width = max(len(name) for name, _ in ops)
    header = f"{'operation':<{width}}  " + "".join(f"{b:>12}" for b in sorted(backends))
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for name, _ in ops:
        row = f"{name:<{width}}  "
        times = results[name]
        for b in sorted(backends):
            row += f"{times[b]:>10.3f}ms"
        if len(backends) > 1 and times["compiled"] > 0:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
