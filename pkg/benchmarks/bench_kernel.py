"""Time the compiled and pure-Python event loops on the same network.

    python3 benchmarks/bench_kernel.py [--duration 20] [--repeat 3]
"""
import argparse
import time

from eponlab.analytic import stations_for
from eponlab.core import default_config
from eponlab.sim import SimConfig, kernel, run_queueing_sim
from eponlab.traffic import CLASSES, default_profile


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--duration", type=float, default=20.0, help="simulated seconds")
    ap.add_argument("--load", type=float, default=0.03)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    stations, stage_two = stations_for(default_config(), default_profile(args.load))
    net = [stations[c] for c in CLASSES] + [stage_two]
    sim = SimConfig(rng_seed=1, sim_duration=args.duration)

    t_py, rep_py = best_of(lambda: run_queueing_sim(net, sim, backend=kernel.run_network_py), args.repeat)
    n = rep_py.total_generated
    print(f"packets per run: {n}")
    print(f"python  {t_py:8.3f} s  {n / t_py:12.0f} pkt/s")
    if not kernel.COMPILED:
        print("cython  not built (pip install -e . --no-build-isolation with a C++ compiler)")
        return
    t_cy, rep_cy = best_of(lambda: run_queueing_sim(net, sim, backend=kernel.run_network), args.repeat)
    print(f"cython  {t_cy:8.3f} s  {n / t_cy:12.0f} pkt/s")
    print(f"speedup {t_py / t_cy:.1f}x, identical results: {rep_py == rep_cy}")


if __name__ == "__main__":
    main()
