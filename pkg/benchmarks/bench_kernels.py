"""Compare the compiled kernels with the pure-Python fallback.

Runs micro-benchmarks on both kernel modules in-process, then an end-to-end
workload once per backend in a subprocess (the backend is chosen at import).

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from framedcb import _kernels_py

try:
    from framedcb import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

END_TO_END = (
    "import time; t=time.perf_counter();"
    "from framedcb.framed import verify_cb_correspondence;"
    "from framedcb.crystal import check_eps_phi;"
    "assert verify_cb_correspondence(3, 3).passed; assert check_eps_phi(max_degree=4).passed;"
    "print(time.perf_counter()-t)"
)


def _inputs(seed: int) -> dict:
    rng = random.Random(seed)
    lp = lambda n: {rng.randrange(-40, 40): rng.randrange(-9, 10) or 1 for _ in range(n)}
    p = (1 << 61) - 1
    rows = [[rng.randrange(p) for _ in range(24)] for _ in range(24)]
    return {
        "lp_mul": ((lp(30), lp(30)), {}),
        "lp_add": ((lp(60), lp(60)), {}),
        "lp_eval_mod": ((lp(40), 123456789, pow(123456789, p - 2, p), p), {}),
        "echelon_mod_p": ((rows, p), {}),
        "poly_mul": ((tuple(rng.randrange(-50, 50) for _ in range(40)), tuple(rng.randrange(-50, 50) for _ in range(40))), {}),
    }


def micro(repeat: int, seed: int) -> dict:
    out = {}
    for name, (args, kw) in _inputs(seed).items():
        row = {}
        for label, mod in (("python", _kernels_py), ("compiled", _kernels_c)):
            if mod is None:
                continue
            fn = getattr(mod, name)
            number = 200 if name != "echelon_mod_p" else 20
            row[label] = min(timeit.repeat(lambda: fn(*args, **kw), number=number, repeat=repeat)) / number
        if "compiled" in row:
            row["speedup"] = row["python"] / row["compiled"]
            assert _kernels_py.__dict__[name](*args) == getattr(_kernels_c, name)(*args), name
        out[name] = row
    return out


def end_to_end() -> dict:
    out = {}
    for label, env_extra in (("python", {"FRAMEDCB_PURE_PYTHON": "1"}), ("compiled", {})):
        if label == "compiled" and _kernels_c is None:
            continue
        env = {**os.environ, **env_extra}
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        out[label] = float(res.stdout.strip().splitlines()[-1])
    if "compiled" in out:
        out["speedup"] = out["python"] / out["compiled"]
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-end-to-end", action="store_true")
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)
    result = {"micro_seconds_per_call": micro(args.repeat, args.seed)}
    if not args.skip_end_to_end:
        result["end_to_end_seconds"] = end_to_end()
    for name, row in result["micro_seconds_per_call"].items():
        cells = "  ".join(f"{k}={v:.3g}" for k, v in row.items())
        print(f"{name:15s} {cells}")
    if "end_to_end_seconds" in result:
        print("end-to-end     ", "  ".join(f"{k}={v:.3g}" for k, v in result["end_to_end_seconds"].items()))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
