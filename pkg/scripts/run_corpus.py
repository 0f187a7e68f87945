"""Run the duality check over a random corpus and print one line per system.

Example:
    python scripts/run_corpus.py --count 30 --modulus 101 --seed 7 --json out.jsonl
"""

import argparse
import json
import logging
import random
import time
from collections import Counter
from dataclasses import dataclass

from morleyduality.corpus import random_corpus, random_system
from morleyduality.duality import VERIFIED, Duality, dual_report
from morleyduality.quotient import Quotient
from morleyduality.report import report_dict

log = logging.getLogger("run_corpus")


@dataclass
class CorpusConfig:
    count: int = 20
    seed: int = 2024
    modulus: int = 101
    max_degree: int = 4
    max_delta: int = 10
    coeff_bound: int = 3  # rational corpora draw coefficients from [-b, b]


def systems(cfg: CorpusConfig):
    if cfg.modulus:
        yield from random_corpus(cfg.count, seed=cfg.seed, modulus=cfg.modulus,
                                 max_degree=cfg.max_degree, max_delta=cfg.max_delta)
        return
    rng = random.Random(cfg.seed)
    made = 0
    while made < cfg.count:
        sys_ = random_system(rng, 0, max_degree=cfg.max_degree, max_delta=cfg.max_delta,
                             coeff_range=(-cfg.coeff_bound, cfg.coeff_bound))
        if Quotient(sys_).finiteness_certificate() is not None:
            made += 1
            yield sys_


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=CorpusConfig.count)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--modulus", type=int, default=CorpusConfig.modulus, help="0 for the rationals")
    ap.add_argument("--max-degree", type=int, default=CorpusConfig.max_degree)
    ap.add_argument("--max-delta", type=int, default=CorpusConfig.max_delta)
    ap.add_argument("--json", metavar="PATH", help="append one JSON report per line")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    cfg = CorpusConfig(args.count, args.seed, args.modulus, args.max_degree, args.max_delta)

    sink = open(args.json, "w") if args.json else None
    verdicts = Counter()
    total = time.perf_counter()
    print(f"{'#':>3}  {'n':>1} {'r':>1}  {'weights':<9} {'degrees':<14} {'delta':>5}  {'sec':>6}  verdict")
    for k, system in enumerate(systems(cfg)):
        start = time.perf_counter()
        rep = dual_report(Duality(system))
        sec = time.perf_counter() - start
        verdicts[rep.verdict] += 1
        print(f"{k:>3}  {system.n:>1} {system.r:>1}  {str(list(system.weights)):<9} "
              f"{str(list(system.degrees)):<14} {rep.delta:>5}  {sec:6.2f}  {rep.verdict}")
        if rep.verdict != VERIFIED:
            log.warning("system %d: %s", k, "; ".join(rep.notes))
        if sink:
            sink.write(json.dumps(report_dict(rep), ensure_ascii=False) + "\n")
    if sink:
        sink.close()
    print(f"total {time.perf_counter() - total:.1f}s  " + ", ".join(f"{v}: {c}" for v, c in sorted(verdicts.items())))
    raise SystemExit(0 if set(verdicts) <= {VERIFIED} else 3)


if __name__ == "__main__":
    main()
