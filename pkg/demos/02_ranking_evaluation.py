"""Sentence-ranking baselines scored against highlight labels.

Builds a corpus where each opinion's highlight sentence is lexically central,
then compares the graph-based ranker against position and random baselines
using MAP, P@1 and ROUGE-1 F1.

Run with:  python3 demos/02_ranking_evaluation.py
"""

from quotegraph.evalkit import (
    evaluate,
    position_rank,
    random_rank,
    textrank_rank,
)
from quotegraph.minicorpus import generate_central_highlight_corpus


def run() -> None:
    opinions, gold = generate_central_highlight_corpus(n_opinions=25)
    print(f"{len(opinions)} opinions, one highlight sentence each\n")

    rankers = {
        "textrank": lambda op: textrank_rank(op),
        "position": lambda op: position_rank(op),
        "random": lambda op: random_rank(op, seed=0),
    }
    header = f"{'ranker':<10} {'MAP':>6} {'P@1':>6} {'R1-F1':>6}"
    print(header)
    print("-" * len(header))
    for name, fn in rankers.items():
        rankings = [fn(op) for op in opinions.values()]
        report = evaluate(rankings, gold, top_k=3)
        print(
            f"{name:<10} {report.macro['average_precision']:>6.3f} "
            f"{report.macro['p_at_1']:>6.3f} {report.macro['rouge1_f']:>6.3f}"
        )


if __name__ == "__main__":
    run()
