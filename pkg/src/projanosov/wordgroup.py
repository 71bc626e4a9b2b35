"""Free-group words, Cayley balls, conjugacy classes and evaluation.

A word is a tuple of nonzero ints: ``k`` is the k-th generator and ``-k``
its inverse. As strings, generators are ``a, b, c, ...`` and inverses the
matching capitals, so ``(1, -2, 1, 2)`` is ``"aBab"``.

Letters are ordered ``a < A < b < B < ...``; balls are enumerated by length
then lexicographically in that order.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BadInput, BudgetExceeded
from .projlin import ProjMat, Spectrum, as_array, normalize, spectrum

Word = tuple[int, ...]

BALL_CAP = 10**7


def letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def word_key(w: Word) -> tuple:
    return tuple(letter_key(x) for x in w)


def parse_word(s: str, rank: int | None = None) -> Word:
    """Parse ``"aBab"`` into ``(1, -2, 1, 2)``; the result is freely reduced."""
    out = []
    for ch in s.strip():
        if ch in string.ascii_lowercase:
            x = ord(ch) - ord("a") + 1
        elif ch in string.ascii_uppercase:
            x = -(ord(ch) - ord("A") + 1)
        else:
            raise BadInput(f"bad letter {ch!r} in word {s!r}")
        if rank is not None and abs(x) > rank:
            raise BadInput(f"letter {ch!r} exceeds rank {rank}")
        out.append(x)
    return reduce_word(out)


def format_word(w: Sequence[int]) -> str:
    return "".join(
        chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w
    )


def reduce_word(letters: Sequence[int]) -> Word:
    stack: list[int] = []
    for x in letters:
        if x == 0:
            raise BadInput("letter index 0 is not a generator")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(u: Sequence[int], v: Sequence[int]) -> Word:
    return reduce_word(tuple(u) + tuple(v))


def _letters(rank: int) -> list[int]:
    return sorted([x for k in range(1, rank + 1) for x in (k, -k)], key=letter_key)


def sphere_size(rank: int, n: int) -> int:
    if n == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (n - 1)


def ball_size(rank: int, radius: int) -> int:
    return sum(sphere_size(rank, n) for n in range(radius + 1))


def _check_ball(rank: int, radius: int, cap: int) -> None:
    if rank < 1 or radius < 0:
        raise BadInput("need rank >= 1 and radius >= 0")
    size = ball_size(rank, radius)
    if size > cap:
        raise BudgetExceeded(f"ball of radius {radius} has {size} elements (cap {cap})")


def ball(rank: int, radius: int, *, cap: int = BALL_CAP) -> Iterator[Word]:
    """Every freely reduced word of length <= radius, once, in enumeration order."""
    _check_ball(rank, radius, cap)
    letters = _letters(rank)
    level: list[Word] = [()]
    yield ()
    for _ in range(radius):
        nxt = []
        for w in level:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        level = nxt


@dataclass(frozen=True)
class ConjClass:
    """Conjugacy class of a free-group element, stored by canonical word.

    The canonical word is cyclically reduced and is the least rotation (and,
    with ``symmetric``, the least over rotations of the inverse as well).
    """

    canonical: Word
    symmetric: bool = False

    @property
    def length(self) -> int:
        """Cyclic length, equal to the minimal translation distance in the word metric."""
        return len(self.canonical)

    def __str__(self):
        return format_word(self.canonical)


def cyclic_core(w: Sequence[int]) -> Word:
    w = tuple(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def _least_rotation(w: Word) -> Word:
    if not w:
        return w
    return min((w[i:] + w[:i] for i in range(len(w))), key=word_key)


def cyclic_reduce(w: Sequence[int], *, symmetric: bool = False) -> ConjClass:
    core = cyclic_core(reduce_word(w))
    best = _least_rotation(core)
    if symmetric:
        inv = _least_rotation(inverse_word(core))
        best = min(best, inv, key=word_key)
    return ConjClass(best, symmetric)


def is_canonical(w: Word, *, symmetric: bool = False) -> bool:
    if len(w) >= 2 and w[0] == -w[-1]:
        return False
    return cyclic_reduce(w, symmetric=symmetric).canonical == w


def conjugacy_classes(
    rank: int, radius: int, *, symmetric: bool = False, min_len: int = 0, cap: int = BALL_CAP
) -> Iterator[ConjClass]:
    """Classes with cyclic length in [min_len, radius], in ball order of their canonical words."""
    for w in ball(rank, radius, cap=cap):
        if len(w) >= min_len and is_canonical(w, symmetric=symmetric):
            yield ConjClass(w, symmetric)


class Representation:
    """Generators of a free group mapped to normalized d x d matrices.

    Generator ``k`` (1-based) maps to ``images[k-1]``.
    """

    def __init__(self, images: Sequence, label: str = ""):
        if not images:
            raise BadInput("a representation needs at least one generator")
        mats = [g if isinstance(g, ProjMat) else normalize(g) for g in images]
        dims = {m.dim for m in mats}
        if len(dims) != 1:
            raise BadInput(f"generator images have mixed dimensions {sorted(dims)}")
        self.images: tuple[ProjMat, ...] = tuple(mats)
        self._arrays = [as_array(m) for m in mats]
        self._inverses = [np.linalg.inv(m) for m in self._arrays]
        self.label = label

    @property
    def dim(self) -> int:
        return self.images[0].dim

    @property
    def rank(self) -> int:
        return len(self.images)

    def __repr__(self):
        return f"Representation(rank={self.rank}, dim={self.dim}, label={self.label!r})"

    def generator(self, x: int) -> np.ndarray:
        if x == 0 or abs(x) > self.rank:
            raise BadInput(f"letter {x} outside rank {self.rank}")
        return self._arrays[x - 1] if x > 0 else self._inverses[-x - 1]

    def map(self, functor, label: str | None = None) -> "Representation":
        """Post-compose with a matrix functor such as ``sym_square``."""
        return Representation([functor(g) for g in self.images], label or self.label)

    def conjugate(self, h) -> "Representation":
        h = as_array(h)
        hinv = np.linalg.inv(h)
        return Representation([h @ g @ hinv for g in self._arrays], self.label)

    def to_json(self) -> dict:
        return {
            "d": self.dim,
            "generators": {
                chr(ord("a") + i): as_array(g).tolist() for i, g in enumerate(self.images)
            },
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Representation":
        gens = data["generators"]
        names = sorted(gens)
        expected = [chr(ord("a") + i) for i in range(len(names))]
        if names != expected:
            raise BadInput(f"generator names must be {expected}, got {names}")
        rep = cls([np.array(gens[n], dtype=float) for n in names], data.get("label", ""))
        if "d" in data and int(data["d"]) != rep.dim:
            raise BadInput(f"declared d={data['d']} but matrices are {rep.dim}x{rep.dim}")
        return rep

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "Representation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def evaluate(rep: Representation, w: Sequence[int] | str) -> ProjMat:
    """Image of a word: product of generator matrices, inverses for negative letters."""
    if isinstance(w, str):
        w = parse_word(w, rep.rank)
    m = np.eye(rep.dim)
    sign = 1
    for x in w:
        m = m @ rep.generator(x)
        sign *= rep.images[abs(x) - 1].det_sign
    # generators have |det| = 1, so the product does too; recomputing the
    # determinant of a long, ill-conditioned product would only add noise
    return ProjMat(m, sign)


def evaluate_pair(rep: Representation, w: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Image of w and, computed independently, the image of w^{-1}."""
    m = np.eye(rep.dim)
    minv = np.eye(rep.dim)
    for x in w:
        m = m @ rep.generator(x)
        minv = rep.generator(-x) @ minv
    return m, minv


def evaluate_ball(
    rep: Representation, radius: int, *, cap: int = BALL_CAP
) -> Iterator[tuple[Word, np.ndarray, np.ndarray]]:
    """Yield ``(w, rho(w), rho(w)^{-1})`` over the ball, one multiply per element each.

    The prefix cache lives only for this pass.
    """
    _check_ball(rep.rank, radius, cap)
    letters = _letters(rep.rank)
    eye = np.eye(rep.dim)
    level = [((), eye, eye)]
    yield level[0]
    for _ in range(radius):
        nxt = []
        for w, m, minv in level:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append((w + (x,), m @ rep.generator(x), rep.generator(-x) @ minv))
        yield from nxt
        level = nxt


def _spectra_chunk(args):
    rep, words = args
    out = []
    for w in words:
        m, minv = evaluate_pair(rep, w)
        out.append(spectrum(m, minv))
    return out


def class_spectra(
    rep: Representation,
    radius: int,
    *,
    min_len: int = 1,
    symmetric: bool = False,
    workers: int = 1,
    cap: int = BALL_CAP,
) -> list[tuple[ConjClass, Spectrum]]:
    """Spectrum of the image of every conjugacy class with cyclic length in [min_len, radius].

    Output order is the enumeration order regardless of ``workers``.
    """
    if workers <= 1:
        out = []
        for w, m, minv in evaluate_ball(rep, radius, cap=cap):
            if len(w) >= min_len and is_canonical(w, symmetric=symmetric):
                out.append((ConjClass(w, symmetric), spectrum(m, minv)))
        return out

    from concurrent.futures import ProcessPoolExecutor

    classes = list(conjugacy_classes(rep.rank, radius, symmetric=symmetric, min_len=min_len, cap=cap))
    n = max(1, -(-len(classes) // (4 * workers)))
    chunks = [classes[i : i + n] for i in range(0, len(classes), n)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_spectra_chunk, [(rep, [c.canonical for c in ch]) for ch in chunks])
        spectra = [s for part in results for s in part]
    return list(zip(classes, spectra))
