#!/usr/bin/env python3
"""Reference interpolated modified Kneser-Ney in exact rational arithmetic.

Computes probabilities recursively from raw counts (no backoff tables), so it
shares no code path with the C++ trainer. Used to freeze the perplexities in
tests/lm_reference_values.h and the ARPA file tests/data/lm/two_sentence.arpa.

    python3 tests/oracles/kn_reference.py tests/data/lm
"""

import sys
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

import mpmath

BOS, EOS, UNK = "<s>", "</s>", "<unk>"
FALLBACK = (Fraction(1, 2), Fraction(1), Fraction(3, 2))


def read(path):
    return [line.split() for line in Path(path).read_text().splitlines() if line.split()]


class KneserNey:
    def __init__(self, sentences, order):
        self.order = order
        self.vocab = sorted({w for s in sentences for w in s})
        raw = [defaultdict(int) for _ in range(order + 1)]
        for s in sentences:
            padded = [BOS] + s + [EOS]
            for i in range(len(padded)):
                for k in range(1, order + 1):
                    if i + k <= len(padded):
                        raw[k][tuple(padded[i:i + k])] += 1
        # a[k]: adjusted counts of k-grams
        self.a = [None] * (order + 1)
        self.a[order] = dict(raw[order])
        for k in range(order - 1, 0, -1):
            left = defaultdict(set)
            for gram in raw[k + 1]:
                left[gram[1:]].add(gram[0])
            self.a[k] = {g: (c if g[0] == BOS else len(left[g])) for g, c in raw[k].items()}
        self.d = [None] + [self.discounts(k) for k in range(1, order + 1)]
        # per-context totals and discount mass
        self.total = [None] + [defaultdict(Fraction) for _ in range(order)]
        self.mass = [None] + [defaultdict(Fraction) for _ in range(order)]
        for k in range(1, order + 1):
            for g, c in self.a[k].items():
                if k == 1 and g == (BOS,):
                    continue
                self.total[k][g[:-1]] += c
                self.mass[k][g[:-1]] += self.disc(k, c)
        self.events = len(self.vocab) + 2  # words, </s>, <unk>

    def discounts(self, k):
        n = defaultdict(int)
        for g, c in self.a[k].items():
            if k == 1 and g == (BOS,):
                continue
            n[c] += 1
        if n[1] == 0 or n[2] == 0 or n[3] == 0:
            return FALLBACK
        y = Fraction(n[1], n[1] + 2 * n[2])
        d = (1 - 2 * y * Fraction(n[2], n[1]),
             2 - 3 * y * Fraction(n[3], n[2]),
             3 - 4 * y * Fraction(n[4], n[3]))
        if all(0 < d[i] <= i + 1 for i in range(3)):
            return d
        return FALLBACK

    def disc(self, k, c):
        return self.d[k][min(c, 3) - 1] if c > 0 else Fraction(0)

    def prob(self, context, w):
        """P(w | context), context a tuple of at most order-1 words."""
        k = len(context) + 1
        if k == 1:
            c = self.a[1].get((w,), 0)
            tot = self.total[1][()]
            return (c - self.disc(1, c)) / tot + (self.mass[1][()] / tot) / self.events
        if context not in self.total[k]:
            return self.prob(context[1:], w)
        c = self.a[k].get(context + (w,), 0)
        tot = self.total[k][context]
        gamma = self.mass[k][context] / tot
        return (c - self.disc(k, c)) / tot + gamma * self.prob(context[1:], w)

    def word(self, w):
        return w if w in self.vocab else UNK

    def sentence(self, words):
        history = [BOS]
        out = []
        for w in [self.word(x) for x in words] + [EOS]:
            out.append(self.prob(tuple(history[-(self.order - 1):]) if self.order > 1 else (), w))
            history.append(w)
        return out

    def perplexity(self, sentences):
        mpmath.mp.dps = 40
        log_sum = mpmath.mpf(0)
        n = 0
        for s in sentences:
            for p in self.sentence(s):
                log_sum += mpmath.log10(mpmath.mpf(p.numerator) / p.denominator)
                n += 1
        return mpmath.power(10, -log_sum / n)


def arpa(model):
    """Backoff-form ARPA text for a model without pruning."""
    rows = []
    for k in range(1, model.order + 1):
        grams = []
        if k == 1:
            grams.append(((UNK,), model.prob((), UNK)))
        for g in sorted(model.a[k]):
            if g == (BOS,):
                grams.append((g, None))
            else:
                grams.append((g, model.prob(g[:-1], g[-1])))
        rows.append(grams)
    out = ["\\data\\"] + [f"ngram {k}={len(r)}" for k, r in enumerate(rows, 1)] + [""]
    for k, grams in enumerate(rows, 1):
        out.append(f"\\{k}-grams:")
        for g, p in grams:
            lp = -99.0 if p is None else float(mpmath.log10(mpmath.mpf(p.numerator) / p.denominator))
            line = f"{lp:.7g}\t{' '.join(g)}"
            if k < model.order and k + 1 <= model.order and g in model.total[k + 1]:
                gamma = model.mass[k + 1][g] / model.total[k + 1][g]
                line += f"\t{float(mpmath.log10(mpmath.mpf(gamma.numerator) / gamma.denominator)):.7g}"
            out.append(line)
        out.append("")
    out.append("\\end\\")
    return "\n".join(out) + "\n"


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data/lm")
    print("// corpus order perplexity")
    for name in ("pidgin", "english", "synthetic"):
        train = read(root / f"{name}_train.txt")
        test = read(root / f"{name}_test.txt")
        for order in (2, 3, 5):
            m = KneserNey(train, order)
            print(f'{{"{name}", {order}, {mpmath.nstr(m.perplexity(test), 17)}}},')
    two = KneserNey([["a", "b"], ["a", "b"]], 2)
    assert two.prob(("a",), "b") == Fraction(31, 48)
    assert two.prob((), "a") == Fraction(7, 24)
    (root / "two_sentence.arpa").write_text(arpa(two))
    print("// two-sentence training perplexity",
          mpmath.nstr(two.perplexity([["a", "b"], ["a", "b"]]), 17))


if __name__ == "__main__":
    main()
