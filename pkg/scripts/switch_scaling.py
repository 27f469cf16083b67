"""Time legal-switch enumeration on G(n, p) graphs regrouped by degree and fit a log-log slope.

    python scripts/switch_scaling.py --sizes 50 100 200 --p 0.1
"""

import argparse
import json
import math
import random
import statistics
import timeit
from dataclasses import asdict, dataclass, field
from itertools import combinations

from jdm import enumerate_legal_switches, regroup_by_degree


@dataclass(frozen=True)
class ScalingConfig:
    sizes: tuple[int, ...] = (50, 100, 200)
    p: float = 0.1
    seeds: int = 3
    repeats: int = 3


@dataclass
class SizeResult:
    n: int
    edges: list[int] = field(default_factory=list)
    switches: list[int] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)


def measure(cfg: ScalingConfig) -> list[SizeResult]:
    out = []
    for n in cfg.sizes:
        row = SizeResult(n)
        for seed in range(cfg.seeds):
            rng = random.Random(1000 * n + seed)
            _, g = regroup_by_degree(n, [e for e in combinations(range(n), 2) if rng.random() < cfg.p])
            # timeit disables the cycle collector while timing
            best = min(timeit.Timer(lambda: enumerate_legal_switches(g)).repeat(repeat=cfg.repeats, number=1))
            row.edges.append(g.num_edges())
            row.switches.append(len(enumerate_legal_switches(g)))
            row.seconds.append(best)
        out.append(row)
    return out


def slope(rows: list[SizeResult]) -> float:
    xs = [math.log(r.n) for r in rows]
    ys = [math.log(statistics.median(r.seconds)) for r in rows]
    return statistics.linear_regression(xs, ys).slope


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=list(ScalingConfig.sizes))
    parser.add_argument("--p", type=float, default=ScalingConfig.p)
    parser.add_argument("--seeds", type=int, default=ScalingConfig.seeds)
    parser.add_argument("--repeats", type=int, default=ScalingConfig.repeats)
    args = parser.parse_args()
    cfg = ScalingConfig(tuple(args.sizes), args.p, args.seeds, args.repeats)
    rows = measure(cfg)
    print(json.dumps({"config": asdict(cfg), "rows": [asdict(r) for r in rows], "slope": slope(rows)}, indent=2))


if __name__ == "__main__":
    main()
