"""Empirical uniformity of the edge-switch chain on small class-regular instances.

    python scripts/stationarity.py --size 6 --degree 2 --steps 500000 --seeds 3
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from jdm import JdmInstance, balanced_realize, enumerate_omega, run_chain
from jdm.sampler import total_variation


@dataclass(frozen=True)
class StationarityConfig:
    size: int = 6
    degree: int = 2
    steps: int = 500_000
    seeds: int = 3
    first_seed: int = 0


def run(cfg: StationarityConfig) -> dict:
    # single class, d-regular on `size` vertices
    inst = JdmInstance([cfg.size], [cfg.degree], [[cfg.size * cfg.degree // 2]])
    omega = enumerate_omega(inst, cap=max(cfg.size, 10))
    g0 = balanced_realize(inst)
    chains = []
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.seeds):
        t0 = time.perf_counter()
        result = run_chain(g0, cfg.steps, seed, histogram=True, inst=inst)
        chains.append(
            {
                "seed": seed,
                "tv": total_variation(result.histogram, len(omega)),
                "states_visited": len(result.histogram),
                "acceptance_rate": result.metadata["acceptance_rate"],
                "seconds": round(time.perf_counter() - t0, 2),
            }
        )
    return {"config": asdict(cfg), "omega": len(omega), "chains": chains}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(StationarityConfig()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = StationarityConfig(**vars(parser.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
