"""Sequence families: paper-folding, seeded random, literals, reversal."""
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import EmbeddingIncomplete
from .ffield import parse_field

RNG_NAME = "numpy.PCG64"


@dataclass(frozen=True)
class Seq:
    field: object
    values: tuple
    meta: dict = dc_field(default_factory=dict, compare=False, hash=False)

    def __len__(self):
        return len(self.values)

    def s(self, i):
        """1-indexed access, s(1) is the first term."""
        if not 1 <= i <= len(self.values):
            raise IndexError(i)
        return self.values[i - 1]


def paper_folding(n, i):
    """Symbol of the level-n paper-folding sequence at index i >= 1."""
    if i < 1:
        raise ValueError("index starts at 1")
    odd = i >> ((i & -i).bit_length() - 1)
    res = odd % (1 << (n + 1))
    if res % 2 != 1:  # cannot happen: an odd number stays odd mod a power of two
        raise ArithmeticError(f"even residue {res} at i={i}")
    return (res - 1) // 2


@dataclass(frozen=True)
class SeqRecipe:
    kind: str                  # "paper_folding", "random" or "literal"
    length: int
    field: object
    level: int = 1
    seed: int = 0
    values: tuple = ()
    embedding: dict = None     # symbol -> code; default symbol mod p (prime) or symbol as code

    def describe(self):
        d = {"kind": self.kind, "length": self.length, "field": str(self.field)}
        if self.kind == "paper_folding":
            d["level"] = self.level
        if self.kind == "random":
            d["seed"] = self.seed
            d["rng"] = RNG_NAME
        return d


def _embed(F, symbols, embedding):
    out = []
    for v in symbols:
        if embedding is not None:
            if v not in embedding:
                raise EmbeddingIncomplete(f"symbol {v} has no image in the embedding")
            out.append(F(embedding[v]).code)
        elif F.prime:
            out.append(v % F.p)
        else:
            if not 0 <= v < F.q:
                raise EmbeddingIncomplete(f"symbol {v} is not an element code of GF({F})")
            out.append(v)
    return tuple(out)


def materialize(recipe):
    F = recipe.field
    if recipe.kind == "paper_folding":
        symbols = [paper_folding(recipe.level, i) for i in range(1, recipe.length + 1)]
        vals = _embed(F, symbols, recipe.embedding)
    elif recipe.kind == "random":
        rng = np.random.Generator(np.random.PCG64(recipe.seed))
        vals = tuple(int(x) for x in rng.integers(0, F.q, size=recipe.length))
    elif recipe.kind == "literal":
        vals = _embed(F, list(recipe.values)[: recipe.length], recipe.embedding)
    else:
        raise ValueError(f"unknown recipe kind {recipe.kind!r}")
    return Seq(F, vals, recipe.describe())


def reverse(S):
    return Seq(S.field, tuple(reversed(S.values)), dict(S.meta, reversed=True))


def parse_values(text):
    toks = [t for t in re.split(r"[\s,]+", text.strip()) if t]
    return [int(t) for t in toks]


def parse_seq_file(text):
    """Return (field or None, values) from a sequence file."""
    field = None
    body = []
    for line in text.splitlines():
        m = re.match(r"\s*#\s*field\s*:\s*(\S+)", line)
        if m:
            field = parse_field(m.group(1))
            continue
        body.append(line.split("#", 1)[0])
    return field, parse_values(" ".join(body))


def literal(field, values):
    vals = list(values)
    return materialize(SeqRecipe("literal", len(vals), field, values=tuple(vals)))


def pf_seq(field, level, length):
    return materialize(SeqRecipe("paper_folding", length, field, level=level))


def random_seq(field, length, seed):
    return materialize(SeqRecipe("random", length, field, seed=seed))
