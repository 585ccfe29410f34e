"""Free Lie algebra bookkeeping over an integer alphabet.

Lie elements are represented concretely inside the tensor algebra: a value of
"associative" type is a dict mapping words (tuples of letter ids) to
coefficients.  The Lyndon words index a basis of the free Lie algebra via
their standard bracketings, whose expansions are triangular with respect to
lexicographic order; lyndon_coordinates exploits that triangularity to
convert any Lie element back to Lyndon coordinates, failing loudly when the
input is not Lie.
"""

from __future__ import annotations

from functools import lru_cache


def is_lyndon(word: tuple[int, ...]) -> bool:
    """A nonempty word strictly smaller than all of its proper suffixes."""
    if not word:
        return False
    return all(word < word[i:] for i in range(1, len(word)))


def standard_factorization(word: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """w = u v with v the lexicographically least proper suffix (both Lyndon)."""
    assert len(word) >= 2 and is_lyndon(word)
    v = min(word[i:] for i in range(1, len(word)))
    return word[: len(word) - len(v)], v


@lru_cache(maxsize=None)
def bracketing(word: tuple[int, ...]) -> dict:
    """Expansion of the standard bracketing of a Lyndon word in the tensor algebra."""
    if len(word) == 1:
        return {word: 1}
    u, v = standard_factorization(word)
    bu, bv = bracketing(u), bracketing(v)
    out: dict = {}
    for wu, cu in bu.items():
        for wv, cv in bv.items():
            out[wu + wv] = out.get(wu + wv, 0) + cu * cv
            out[wv + wu] = out.get(wv + wu, 0) - cu * cv
    return {w: c for w, c in out.items() if c}


def lyndon_words(alphabet: int, length: int) -> list[tuple[int, ...]]:
    """All Lyndon words of exactly the given length (Duval's generator)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            out.append(tuple(w))
        while len(w) < length:
            w.append(w[-m])
        while w and w[-1] == alphabet - 1:
            w.pop()
    return [t for t in out if len(t) == length]


def lyndon_coordinates(poly: dict, is_zero=None):
    """Coordinates of a Lie element (given associatively) in the Lyndon basis.

    Coefficients may be any values supporting +, -, scale(int) and an
    emptiness test; rationals use the default test.  Raises ValueError if the
    element is not in the free Lie algebra.
    """
    if is_zero is None:
        is_zero = lambda c: not c
    work = {w: c for w, c in poly.items() if not is_zero(c)}
    coords = {}
    while work:
        w = min(work)
        if not is_lyndon(w):
            raise ValueError(f"associative element is not Lie: offending word {w}")
        c = work.pop(w)
        coords[w] = c
        for wv, k in bracketing(w).items():
            if wv == w:
                continue
            cur = work.get(wv)
            piece = c.scale(k) if hasattr(c, "scale") else c * k
            new = -piece if cur is None else cur - piece
            if is_zero(new):
                work.pop(wv, None)
            else:
                work[wv] = new
    return coords


def lyndon_to_associative(coords: dict) -> dict:
    """Inverse of lyndon_coordinates."""
    out: dict = {}
    for w, c in coords.items():
        for wv, k in bracketing(w).items():
            piece = c.scale(k) if hasattr(c, "scale") else c * k
            cur = out.get(wv)
            out[wv] = piece if cur is None else cur + piece
    return {w: c for w, c in out.items() if not (hasattr(c, "is_zero") and c.is_zero()) and c}
