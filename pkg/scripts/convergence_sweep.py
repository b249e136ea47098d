#!/usr/bin/env python3
"""Sweep of permuted-product deviations for the two-letter row E12/E21.

Writes one CSV + JSON sidecar and prints the per-n medians, showing the
contrast between the ordered product (stuck near v* ~ 0.129) and random
permutations (deviation shrinking with n).
"""

from trotter_shuffle import ExperimentConfig, emit, run

SEED = 2024
N_LIST = [500, 2000, 8000]
TRIALS = 101
OUT = "convergence_sweep.csv"


def main() -> None:
    cfg = ExperimentConfig(kind="converge", n_list=N_LIST, trials=TRIALS,
                           seed=SEED, out_path=OUT)
    report = run(cfg)
    emit(report, cfg.out_path)
    print(f"wrote {OUT}")
    for n in N_LIST:
        q = report.summary[str(n)]["sup_dev"]
        print(f"n = {n:5d}: median sup_dev {q['median']:.4f} "
              f"(p05 {q['p05']:.4f}, p95 {q['p95']:.4f})")

    ordered = ExperimentConfig(kind="converge", n_list=[2000], trials=1, seed=SEED,
                               sigma_mode="identity", out_path="ordered_path.csv")
    rep = run(ordered)
    emit(rep, ordered.out_path)
    print(f"ordered product final deviation: "
          f"{rep.summary['2000']['final_dev']['median']:.6f} (v* = 0.129394)")


if __name__ == "__main__":
    main()
