"""Built-in test corpus: Gram matrices and directly presented forms."""

from __future__ import annotations

from fractions import Fraction

from .finquad import DiscForm

E8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, -1, 0],
    [0, 0, 0, 0, -1, 2, 0, 0],
    [0, 0, 0, 0, -1, 0, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]

HYPERBOLIC_GRAM = [[0, 1], [1, 0]]

#: name -> Gram matrix of an even lattice
GRAM_CORPUS: dict[str, list[list[int]]] = {
    "Z2": [[2]],
    "Zm2": [[-2]],
    "A2": [[2, 1], [1, 2]],
    "F5": [[2, 1], [1, -2]],
    "E8": E8_GRAM,
    "Z4": [[4]],
    "Z6": [[6]],
    "U": HYPERBOLIC_GRAM,
}

#: name -> (orders, qdiag) of a directly presented form (x -> -x^2/p on F_p)
DIRECT_CORPUS: dict[str, tuple[tuple[int, ...], tuple[Fraction, ...]]] = {
    "Fp5": ((5,), (Fraction(4, 5),)),
    "Fp13": ((13,), (Fraction(12, 13),)),
}

#: positive definite members, usable as theta series sources
POSITIVE_DEFINITE = ("Z2", "A2", "E8", "Z4", "Z6")


def corpus_forms() -> dict[str, DiscForm]:
    """All corpus discriminant forms, keyed by name."""
    out = {name: DiscForm.from_gram(g) for name, g in GRAM_CORPUS.items()}
    for name, (orders, qdiag) in DIRECT_CORPUS.items():
        out[name] = DiscForm.from_orders(orders, qdiag)
    return out


def lattice_signature(gram) -> tuple[int, int]:
    from .linalg import symmetric_signature

    return symmetric_signature(gram)
