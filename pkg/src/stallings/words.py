"""Free words over {a,b,c,d}, elements of F(a,b) x F(c,d), and the kernel generators.

Words are strings of signed letters: lowercase is a positive letter, uppercase
its inverse ("aB" is a*b^-1).  A word is *reduced* when no letter is adjacent
to its own inverse.  Group elements of the direct product are pairs of reduced
words, one over {a,b}, one over {c,d}.

Generators also have integer ids so that paths and relators can be stored
compactly: a=1, b=2, c=3, d=4, s=5 and the twenty-four two-letter kernel
generators are 6..29; negation is inversion.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

AB_LETTERS = "abAB"
CD_LETTERS = "cdCD"
GROUP_LETTERS = "abcdABCD"
S_WORD_LETTERS = GROUP_LETTERS + "sS"

FLIP = {c: c.swapcase() for c in S_WORD_LETTERS}

# integer ids for generators of the big presentation
A_ID, B_ID, C_ID, D_ID, S_ID = 1, 2, 3, 4, 5
LETTER_IDS = {"a": A_ID, "b": B_ID, "c": C_ID, "d": D_ID, "s": S_ID}
ID_LETTERS = {v: k for k, v in LETTER_IDS.items()}
EGEN_FIRST_ID = 6


def invert_word(word: str) -> str:
    """Inverse of a word: reverse it and flip every letter's case."""
    return word[::-1].swapcase()


def is_reduced(word: str) -> bool:
    return all(word[i] != FLIP[word[i + 1]] for i in range(len(word) - 1))


def reduce_word(word: str) -> str:
    """Freely reduce a word by cancelling adjacent inverse pairs."""
    out: list[str] = []
    for ch in word:
        if out and out[-1] == FLIP[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def reduce_mul(left: str, right: str) -> str:
    """Product of two already-reduced words, cancelling across the seam only."""
    i = 0
    nl, nr = len(left), len(right)
    while i < nl and i < nr and left[nl - 1 - i] == FLIP[right[i]]:
        i += 1
    return left[: nl - i] + right[i:]


def exponent_sum(word: str) -> int:
    """Sum of letter signs (lowercase +1, uppercase -1)."""
    return sum(1 if ch.islower() else -1 for ch in word)


def word_is_over(word: str, alphabet: str) -> bool:
    return all(ch in alphabet for ch in word)


class GElement(NamedTuple):
    """Element of F(a,b) x F(c,d) as a pair of reduced words."""

    ab: str
    cd: str

    def __mul__(self, other: "GElement") -> "GElement":  # type: ignore[override]
        return GElement(reduce_mul(self.ab, other.ab), reduce_mul(self.cd, other.cd))

    def inverse(self) -> "GElement":
        return GElement(invert_word(self.ab), invert_word(self.cd))

    def exponent_sum(self) -> int:
        return exponent_sum(self.ab) + exponent_sum(self.cd)

    def length(self) -> int:
        """Word length in the Cayley graph over {a,b,c,d}."""
        return len(self.ab) + len(self.cd)

    def is_identity(self) -> bool:
        return not self.ab and not self.cd


G_IDENTITY = GElement("", "")


def g_from_word(word: str) -> GElement:
    """Evaluate a word over {a,b,c,d}+- in the direct product."""
    ab: list[str] = []
    cd: list[str] = []
    for ch in word:
        part = ab if ch in "abAB" else cd
        if part and part[-1] == FLIP[ch]:
            part.pop()
        else:
            part.append(ch)
    return GElement("".join(ab), "".join(cd))


def in_kernel(g: GElement) -> bool:
    """Membership in the kernel of the exponent-sum map onto Z."""
    return g.exponent_sum() == 0


# ---------------------------------------------------------------------------
# the 24 two-letter kernel generators
# ---------------------------------------------------------------------------

def _build_egen_words() -> tuple[str, ...]:
    bases = "abcd"
    pairs = [(u, v) for u in bases for v in bases if u != v]
    words = [u + v.upper() for (u, v) in pairs]  # u * v^-1
    words += [u.upper() + v for (u, v) in pairs]  # u^-1 * v
    return tuple(words)


# EGEN_WORDS[i] is the defining two-letter word of generator i+1 (ids 6..29).
EGEN_WORDS: tuple[str, ...] = _build_egen_words()
EGEN_COUNT = len(EGEN_WORDS)
WORD_TO_EGEN = {w: i + 1 for i, w in enumerate(EGEN_WORDS)}
EGEN_VALUES: tuple[GElement, ...] = tuple(g_from_word(w) for w in EGEN_WORDS)

# The classical six-element generating set of the kernel, as table indices.
# These are the kernel generators that the stable letter commutes with in the
# short presentation; kept as a distinguished subset of the full table.
S_COMMUTATION_GENERATORS: tuple[int, ...] = tuple(
    WORD_TO_EGEN[w] for w in ("bA", "cA", "dA", "cB", "dB", "dC")
)


def egen_id(index: int) -> int:
    """Generator id (for paths/relators) of table entry `index` (1-based)."""
    if not 1 <= index <= EGEN_COUNT:
        raise ValueError(f"generator index out of range: {index}")
    return EGEN_FIRST_ID - 1 + index


def egen_index(gen_id: int) -> int:
    """Inverse of egen_id."""
    index = abs(gen_id) - EGEN_FIRST_ID + 1
    if not 1 <= index <= EGEN_COUNT:
        raise ValueError(f"not a kernel-generator id: {gen_id}")
    return index


def egen_table() -> list[dict[str, str | int]]:
    """The published table: index, two-letter word, normal form of its value."""
    rows: list[dict[str, str | int]] = []
    for i, word in enumerate(EGEN_WORDS, start=1):
        value = EGEN_VALUES[i - 1]
        rows.append({"index": i, "word": word, "ab": value.ab, "cd": value.cd})
    return rows


# ---------------------------------------------------------------------------
# kernel paths: pairing letters into generators and expanding back
# ---------------------------------------------------------------------------

def is_kernel_path(labels: str) -> bool:
    """Even-length word whose consecutive letter pairs have opposite signs.

    Each non-overlapping pair (2i, 2i+1) then spells either a two-letter
    kernel generator or a backtrack (x, x^-1).
    """
    if len(labels) % 2:
        return False
    if not word_is_over(labels, GROUP_LETTERS):
        return False
    for i in range(0, len(labels), 2):
        if labels[i].islower() == labels[i + 1].islower():
            return False
    return True


def k_pair(labels: str) -> tuple[int, ...]:
    """Pair the letters of a kernel path into generator table indices.

    The table is inverse-closed, so every opposite-sign pair over distinct
    bases is itself a table word.  Degenerate pairs (x, x^-1) are backtracks,
    not generators, and are rejected.
    """
    if not is_kernel_path(labels):
        raise ValueError(f"not a kernel path: {labels!r}")
    out: list[int] = []
    for i in range(0, len(labels), 2):
        pair = labels[i : i + 2]
        idx = WORD_TO_EGEN.get(pair)
        if idx is None:
            raise ValueError(f"letter pair is not a generator: {pair!r}")
        out.append(idx)
    return tuple(out)


def e_expand(indices: Iterable[int]) -> str:
    """Expand signed table indices back into their two-letter words."""
    out: list[str] = []
    for idx in indices:
        if idx == 0:
            raise ValueError("generator index 0 is not signed")
        word = EGEN_WORDS[abs(idx) - 1]
        out.append(word if idx > 0 else invert_word(word))
    return "".join(out)


# ---------------------------------------------------------------------------
# identity reports backing the kernel lemmas
# ---------------------------------------------------------------------------

def _check(name: str, lhs: GElement, rhs: GElement,
           failures: list[str]) -> None:
    if lhs != rhs:
        failures.append(f"{name}: {lhs} != {rhs}")


def kernel_identity_report() -> dict[str, object]:
    """Exact checks behind the normal-form lemma for the kernel.

    Verifies the listed rewriting identities and, exhaustively, that every
    single-letter conjugate of every table generator stays in the kernel.
    """
    failures: list[str] = []
    e = g_from_word

    _check("b^-1 a = (b^-1 c)(c^-1 a)", e("Ba"), e("Bc") * e("Ca"), failures)
    _check("a(ba^-1)a^-1 = aba^-2", e("a") * e("bA") * e("A"), e("abAA"), failures)
    _check(
        "aba^-2 = (ac^-1)(bc^-1)(ca^-1)(ca^-1)",
        e("abAA"),
        e("aC") * e("bC") * e("cA") * e("cA"),
        failures,
    )
    _check("a^-1(ba^-1)a = a^-1 b", e("A") * e("bA") * e("a"), e("Ab"), failures)
    _check("b^-1(ba^-1)b = a^-1 b", e("B") * e("bA") * e("b"), e("Ab"), failures)
    _check("b(ba^-1)b^-1 = b^2 a^-1 b^-1", e("b") * e("bA") * e("B"), e("bbAB"), failures)
    _check(
        "b^2 a^-1 b^-1 = (bc^-1)(bc^-1)(ca^-1)(cb^-1)",
        e("bbAB"),
        e("bC") * e("bC") * e("cA") * e("cB"),
        failures,
    )
    _check("a(ca^-1)a^-1 = ca^-1", e("a") * e("cA") * e("A"), e("cA"), failures)
    _check("b(ac^-1)b^-1 = (bc^-1)(ab^-1)", e("b") * e("aC") * e("B"), e("bC") * e("aB"), failures)

    conjugate_checks = 0
    for word in EGEN_WORDS:
        gen = g_from_word(word)
        for letter in GROUP_LETTERS:
            conj = g_from_word(letter) * gen * g_from_word(FLIP[letter])
            conjugate_checks += 1
            if not in_kernel(conj):
                failures.append(f"conjugate {letter}.{word}.{FLIP[letter]} left the kernel")

    return {
        "identities_checked": 9,
        "conjugate_checks": conjugate_checks,
        "failures": failures,
        "ok": not failures,
    }


def one_ended_reduction_report() -> dict[str, object]:
    """Exact checks behind the one-endedness reduction chain.

    The six-generator set reduces to {ba^-1, da^-1, db^-1, dc^-1} and then to
    {ba^-1, dc^-1, da^-1}; the dropped generators are recovered as products.
    """
    failures: list[str] = []
    e = g_from_word

    _check("(cb^-1)(ba^-1) = ca^-1", e("cB") * e("bA"), e("cA"), failures)
    _check("(dc^-1)^-1(db^-1) = cb^-1", e("dC").inverse() * e("dB"), e("cB"), failures)
    _check("(da^-1)(ba^-1)^-1 = db^-1", e("dA") * e("bA").inverse(), e("dB"), failures)
    _check(
        "[ba^-1, dc^-1] = 1",
        e("bA") * e("dC") * e("bA").inverse() * e("dC").inverse(),
        G_IDENTITY,
        failures,
    )
    _check(
        "ca^-1 = (dc^-1)^-1(db^-1)(ba^-1)",
        e("cA"),
        e("dC").inverse() * e("dB") * e("bA"),
        failures,
    )

    return {
        "identities_checked": 5,
        "reduction_chain": [
            ["bA", "cA", "dA", "cB", "dB", "dC"],
            ["bA", "dA", "dB", "dC"],
            ["bA", "dC", "dA"],
        ],
        "failures": failures,
        "ok": not failures,
    }
