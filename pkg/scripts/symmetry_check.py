"""Seeded check that symmetries preserve truth and entailment on random inputs.

    python scripts/symmetry_check.py --cases 200 --seed 3
"""

import argparse
import random
import time
from dataclasses import dataclass

from modsym.detection import detect_layered_symmetries, detect_symmetries
from modsym.formula import modal_depth
from modsym.models import entails, find_sigma_simulation, permute_model, satisfies
from modsym.permutation import apply_formula, apply_layered
from modsym.sampling import (CnfShape, layered_symmetric_cnf, random_cnf,
                             random_consistent_permutation, random_model, symmetric_cnf)


@dataclass
class Config:
    cases: int = 100
    seed: int = 0
    atoms: tuple = ("p", "q", "r")
    max_depth: int = 2
    max_clauses: int = 6
    max_worlds: int = 3


def _weaken_or_random(rng, phi, shape):
    if rng.random() < 0.5:
        extra = random_cnf(rng, CnfShape(shape.atoms, max_clauses=1, max_depth=1)).clauses[0]
        c = rng.choice(phi.clauses)
        return type(phi).of([list(c.items()) + list(extra.items())])
    return random_cnf(rng, shape)


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    shape = CnfShape(cfg.atoms, max_depth=cfg.max_depth, max_clauses=cfg.max_clauses)
    tally = dict.fromkeys(["truth", "simulation", "plain", "layered"], 0)
    checked = dict(tally)
    for _ in range(cfg.cases):
        phi = random_cnf(rng, shape)
        m = random_model(rng, cfg.atoms, cfg.max_worlds)
        s = random_consistent_permutation(rng, cfg.atoms)
        m2 = permute_model(s, m)
        tally["truth"] += satisfies(m, phi) != satisfies(m2, apply_formula(s, phi))
        tally["simulation"] += find_sigma_simulation(s, m, m2) is None
        checked["truth"] += 1
        checked["simulation"] += 1

        phi, _ = symmetric_cnf(rng, shape)
        gens = detect_symmetries(phi).generators
        if gens:
            g = rng.choice(gens)
            psi = _weaken_or_random(rng, phi, shape)
            tally["plain"] += entails(phi, psi).entailed != entails(phi, apply_formula(g, psi)).entailed
            checked["plain"] += 1

        phi, _ = layered_symmetric_cnf(rng, shape)
        gens = detect_layered_symmetries(phi).generators
        if gens and modal_depth(phi) > 0:
            seq = rng.choice(gens)
            psi = _weaken_or_random(rng, phi, shape)
            tally["layered"] += entails(phi, psi).entailed != entails(phi, apply_layered(seq, psi)).entailed
            checked["layered"] += 1
    return {k: (checked[k], tally[k]) for k in tally}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=Config.cases)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--max-worlds", type=int, default=Config.max_worlds)
    ap.add_argument("--max-depth", type=int, default=Config.max_depth)
    args = ap.parse_args()
    cfg = Config(cases=args.cases, seed=args.seed, max_worlds=args.max_worlds, max_depth=args.max_depth)
    start = time.perf_counter()
    results = run(cfg)
    for name, (n, bad) in results.items():
        print(f"{name:<11} {n:>5} checked  {bad} violations")
    print(f"{time.perf_counter() - start:.1f} s")
    raise SystemExit(1 if any(bad for _, bad in results.values()) else 0)


if __name__ == "__main__":
    main()
