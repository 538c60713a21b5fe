"""Normal forms in the ambient group generated by a, b, c, d and s.

The ambient group splits as K x| F(a,s): the kernel K is normal, the free
group on {a, s} is a complement, and conjugation by a tail word t in F(a,s)
acts on K through the a-exponent of t only (s centralizes K).  Every element
is therefore a unique pair (k, tail) with k in K stored as a reduced word
pair and tail a reduced word over {a, s}.

Generators are signed integer ids as in `words`: letters 1..4, the stable
letter 5, kernel generators 6..29.  `step` applies one signed generator to a
normal form and is the primitive that graph searches are built on.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .words import (
    EGEN_COUNT,
    EGEN_FIRST_ID,
    EGEN_VALUES,
    GElement,
    G_IDENTITY,
    ID_LETTERS,
    LETTER_IDS,
    S_ID,
    egen_index,
    exponent_sum,
    g_from_word,
    invert_word,
    is_reduced,
    reduce_mul,
    word_is_over,
)

TAIL_LETTERS = "asAS"


class SElement(NamedTuple):
    """Normal form (k, tail): k = (ab, cd) in the kernel, tail in F(a,s)."""

    ab: str
    cd: str
    tail: str

    @property
    def k(self) -> GElement:
        return GElement(self.ab, self.cd)

    def is_identity(self) -> bool:
        return not self.ab and not self.cd and not self.tail


S_IDENTITY = SElement("", "", "")


def validate_s(x: SElement) -> SElement:
    """Check the normal-form invariants; returns x for chaining."""
    if not (is_reduced(x.ab) and word_is_over(x.ab, "abAB")):
        raise ValueError(f"bad ab part: {x.ab!r}")
    if not (is_reduced(x.cd) and word_is_over(x.cd, "cdCD")):
        raise ValueError(f"bad cd part: {x.cd!r}")
    if exponent_sum(x.ab) + exponent_sum(x.cd) != 0:
        raise ValueError(f"k part is outside the kernel: {x.ab!r}, {x.cd!r}")
    if not (is_reduced(x.tail) and word_is_over(x.tail, TAIL_LETTERS)):
        raise ValueError(f"bad tail: {x.tail!r}")
    return x


def a_exponent(tail: str) -> int:
    """a-exponent of a tail word; the stable letter contributes nothing."""
    return tail.count("a") - tail.count("A")


def a_power(m: int) -> str:
    return "a" * m if m >= 0 else "A" * (-m)


def conjugate_ab(ab: str, m: int) -> str:
    """a^m * ab * a^-m as a reduced word."""
    if m == 0 or not ab:
        return ab
    return reduce_mul(reduce_mul(a_power(m), ab), a_power(-m))


def in_base_group(x: SElement) -> bool:
    """Whether x lies in the direct product of the two free groups."""
    return word_is_over(x.tail, "aA")


def in_kernel_subgroup(x: SElement) -> bool:
    return x.tail == ""


# ---------------------------------------------------------------------------
# group operations
# ---------------------------------------------------------------------------

def s_multiply(x: SElement, y: SElement) -> SElement:
    """(k1, t1)(k2, t2) = (k1 * t1 k2 t1^-1, t1 t2)."""
    m = a_exponent(x.tail)
    return SElement(
        reduce_mul(x.ab, conjugate_ab(y.ab, m)),
        reduce_mul(x.cd, y.cd),
        reduce_mul(x.tail, y.tail),
    )


def s_invert(x: SElement) -> SElement:
    """(k, t)^-1 = (t^-1 k^-1 t, t^-1)."""
    m = a_exponent(x.tail)
    return SElement(
        conjugate_ab(invert_word(x.ab), -m),
        invert_word(x.cd),
        invert_word(x.tail),
    )


def step(x: SElement, gen: int) -> SElement:
    """Right-multiply a normal form by one signed generator.

    A letter g in {a,b,c,d}^+- factors as (g a^-e) a^e with e its sign; the
    kernel half is pulled through the tail by conjugation and the a^e joins
    the tail.  The stable letter only extends the tail.  A kernel generator
    is pulled through the tail whole.
    """
    if gen == 0:
        raise ValueError("generator id 0 is not signed")
    base = abs(gen)
    if base == S_ID:
        return SElement(x.ab, x.cd, reduce_mul(x.tail, "s" if gen > 0 else "S"))
    if base < S_ID:
        letter = ID_LETTERS[base] if gen > 0 else ID_LETTERS[base].upper()
        if base == LETTER_IDS["a"]:
            # the kernel half (g a^-e) is trivial for the letter a
            return SElement(x.ab, x.cd, reduce_mul(x.tail, letter))
        offset = "A" if gen > 0 else "a"
        kernel_half = g_from_word(letter + offset)
        tail_letter = "a" if gen > 0 else "A"
    else:
        value = EGEN_VALUES[egen_index(base) - 1]
        kernel_half = value if gen > 0 else value.inverse()
        tail_letter = ""
    m = a_exponent(x.tail)
    return SElement(
        reduce_mul(x.ab, conjugate_ab(kernel_half.ab, m)),
        reduce_mul(x.cd, kernel_half.cd),
        reduce_mul(x.tail, tail_letter) if tail_letter else x.tail,
    )


# ---------------------------------------------------------------------------
# parsing and conversions
# ---------------------------------------------------------------------------

def token_to_gen(token: str) -> int:
    """Token -> signed generator id ("a"->1, "S"->-5, "e3"->8, "E3"->-8)."""
    if len(token) == 1 and token.lower() in LETTER_IDS:
        gid = LETTER_IDS[token.lower()]
        return gid if token.islower() else -gid
    if token[:1] in ("e", "E") and token[1:].isdigit():
        index = int(token[1:])
        if 1 <= index <= EGEN_COUNT:
            gid = EGEN_FIRST_ID - 1 + index
            return gid if token[0] == "e" else -gid
    raise ValueError(f"unknown generator token: {token!r}")


def gen_to_token(gen: int) -> str:
    base = abs(gen)
    if base == 0:
        raise ValueError("generator id 0 is not signed")
    if base <= S_ID:
        letter = ID_LETTERS[base]
        return letter if gen > 0 else letter.upper()
    index = egen_index(base)
    return f"e{index}" if gen > 0 else f"E{index}"


def parse_gens(text: str | Iterable[str]) -> tuple[int, ...]:
    """Parse generators from tokens, or from a plain letter word.

    A string is split on whitespace when it contains spaces or digits
    (indexed tokens like "e7" need separators); otherwise every character
    is a single-letter token.
    """
    if isinstance(text, str):
        if " " in text or any(ch.isdigit() for ch in text):
            tokens: Iterable[str] = text.split()
        else:
            tokens = list(text)
    else:
        tokens = text
    return tuple(token_to_gen(tok) for tok in tokens)


def scan(gens: Iterable[int], start: SElement = S_IDENTITY) -> SElement:
    """Normal form of start * g1 * g2 * ... for signed generator ids."""
    x = start
    for gen in gens:
        x = step(x, gen)
    return x


def s_from_word(word: str) -> SElement:
    """Normal form of a word over the letters a, b, c, d, s and inverses."""
    return scan(parse_gens(word))


def g_to_s(g: GElement) -> SElement:
    """Embed the direct product: split off the a-power carried by es(g)."""
    m = g.exponent_sum()
    k = g * GElement(a_power(-m), "")
    return SElement(k.ab, k.cd, a_power(m))


def s_to_g(x: SElement) -> GElement:
    if not in_base_group(x):
        raise ValueError(f"element is not in the base group: {x}")
    return GElement(x.ab, x.cd) * GElement(x.tail, "")


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def g_to_json(g: GElement) -> dict[str, str]:
    return {"ab": g.ab, "cd": g.cd}


def g_from_json(data: dict[str, str]) -> GElement:
    return GElement(data["ab"], data["cd"])


def s_to_json(x: SElement) -> dict[str, object]:
    return {"k": {"ab": x.ab, "cd": x.cd}, "tail": x.tail}


def s_from_json(data: dict[str, object]) -> SElement:
    k = data["k"]
    return validate_s(SElement(k["ab"], k["cd"], data["tail"]))  # type: ignore[index]
