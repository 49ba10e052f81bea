"""Time the hot kernels with numba and with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py            # both backends, side by side
    python3 benchmarks/bench_kernels.py --quick    # smaller inputs

Each backend runs in its own interpreter because the switch is read at import.
"""
import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    fn()  # warm-up (includes JIT compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(quick):
    from flipcube import _kernels as K
    from flipcube.flipdist import enumerate_flip_graph, is_partial_cube
    from flipcube.generators import lattice, random_general_position, two_lines
    from flipcube.geom import PointSet
    from flipcube.quadgraph import build_qg_pentagon_free, find_empty_pentagon

    n_small = 40 if quick else 70
    n_big = 400 if quick else 1500
    rnd = random_general_position(n_small, 10 * n_small, seed=1)
    xs = [p[0] for p in rnd]
    ys = [p[1] for p in rnd]
    strip = PointSet(two_lines(n_big // 2, n_big - n_big // 2))
    G = enumerate_flip_graph(PointSet(lattice(3, 3) if quick else lattice(4, 3)))
    orient = K.orientation_tensor(xs, ys)

    return {
        f"orientation tensor n={n_small}": lambda: K.orientation_tensor(xs, ys),
        f"empty triangles n={n_small}": lambda: K.empty_triangles(orient),
        f"diagonal matrix n={n_small}": lambda: K.diagonal_matrix(xs, ys, orient),
        f"pentagon sweep n={n_big}": lambda: find_empty_pentagon(strip),
        f"quad graph n={n_big}": lambda: build_qg_pentagon_free(strip),
        f"partial cube check |V|={G.n_vertices}": lambda: is_partial_cube(G),
    }


def run_here(quick, repeat):
    from flipcube._accel import backend

    out = {name: _best(fn, repeat) for name, fn in workloads(quick).items()}
    return backend(), out


def run_child(disable, quick, repeat):
    env = dict(os.environ)
    env["FLIPCUBE_DISABLE_NUMBA"] = "1" if disable else "0"
    cmd = [sys.executable, __file__, "--child", "--repeat", str(repeat)]
    if quick:
        cmd.append("--quick")
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.child:
        name, times = run_here(args.quick, args.repeat)
        print(json.dumps({"backend": name, "times": times}))
        return

    fast = run_child(False, args.quick, args.repeat)
    slow = run_child(True, args.quick, args.repeat)
    width = max(map(len, fast["times"]))
    print(f"{'kernel':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for name, t in fast["times"].items():
        s = slow["times"][name]
        print(f"{name:<{width}}  {t:10.4f}  {s:10.4f}  {s / t:7.1f}x")


if __name__ == "__main__":
    main()
