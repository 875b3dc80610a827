"""Compare the numba and pure-numpy backends on typical workloads.

Each backend runs in its own interpreter because the backend is fixed at
import time by ``CASIMIR_TORQUE_BACKEND``.

    python benchmarks/bench_backends.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, math, sys, time
import numpy as np
from casimir_torque import (BACKEND, CavityConfig, LorentzResonance, PerfectPolarizer,
                            SemiInfiniteLorentz, scan_angle, scan_distance, torque)

repeat = int(sys.argv[1])
perfect = CavityConfig(1.0, math.pi / 4, PerfectPolarizer(), PerfectPolarizer())
m = SemiInfiniteLorentz(LorentzResonance(1.0, 1.0), LorentzResonance(math.sqrt(2.0), 1.0))
dichroic = CavityConfig(1.0, math.pi / 4, m, m)

t0 = time.perf_counter()
torque(perfect)
torque(dichroic)
warmup = time.perf_counter() - t0

def best(fn):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

results = {
    "backend": BACKEND,
    "warm-up": warmup,
    "angle scan, 97 points": best(lambda: scan_angle(perfect, np.linspace(-math.pi, math.pi, 97))),
    "distance scan, 60 points": best(lambda: scan_distance(dichroic, np.geomspace(0.01, 100, 60))),
    "1000 single torques": best(lambda: [torque(dichroic) for _ in range(1000)]),
}
print(json.dumps(results))
"""


def run_backend(name, repeat):
    env = dict(os.environ, CASIMIR_TORQUE_BACKEND=name)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)],
                          env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        return None, proc.stderr.strip().splitlines()[-1]
    return json.loads(proc.stdout), None


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    results = {}
    for name in ("numba", "numpy"):
        res, err = run_backend(name, args.repeat)
        if res is None:
            print(f"{name}: unavailable ({err})")
        else:
            results[name] = res
    if not results:
        return 1
    tasks = [k for k in next(iter(results.values())) if k != "backend"]
    names = list(results)
    print(f"{'task':<28}" + "".join(f"{n + ' [s]':>14}" for n in names)
          + ("     speed-up" if len(names) == 2 else ""))
    for task in tasks:
        line = f"{task:<28}" + "".join(f"{results[n][task]:>14.4f}" for n in names)
        if len(names) == 2 and task != "warm-up":
            line += f"{results['numpy'][task] / results['numba'][task]:>12.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
