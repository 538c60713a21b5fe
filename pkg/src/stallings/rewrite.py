"""Rewriting letter paths into kernel-generator form, away from a basepoint.

A letter path whose exponent sum is zero is homotopic, through commuting
cells and backtrack insertions, to a path whose consecutive letter pairs
have opposite signs; each pair then spells a kernel generator (or a
backtrack).  The rewriting never moves toward the identity: every vertex it
sweeps over lies at an original path vertex's distance plus a nonnegative
offset, because inserted blocks repeat a letter chosen not to cancel into
the relevant projection, and every interleaving pairs such an inserted
block with at most one block of the original path.

The case analysis works on the first two syllables (maximal same-factor,
same-sign runs) of the unprocessed remainder.  With F the first syllable's
factor and s its sign, the second syllable falls into one of:

    1    opposite factor, same sign: partner the first syllable and merge
    2    same factor, opposite sign, at least as long: partner and pair off
    3    same factor, opposite sign, shorter: extend it away, then as 2
    4    opposite factor, opposite sign: partner, cancel the seam, and
         bridge the leftovers through a partner in the other factor;
         4.1 a leftover is empty, 4.2 the path side is at least as long
         as the inserted side, 4.3 it is shorter and gets extended

Each case removes at least one syllable from the remainder, so the
rewriting terminates.  A remainder that is already in paired form is left
untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ForbiddenRegion, get_complex
from .elements import S_IDENTITY, SElement, s_from_word, s_to_g, scan, step
from .homotopy import Certificate, PathEditor, interleave_blocks, verify_certificate
from .words import reduce_mul

GAMMA_1 = get_complex("gamma_1")

AB_BASES = (1, 2)
CD_BASES = (3, 4)


def is_kernel_form(labels: tuple[int, ...]) -> bool:
    """Even length, every consecutive pair of opposite signs."""
    if len(labels) % 2:
        return False
    return all(
        (labels[i] > 0) != (labels[i + 1] > 0) for i in range(0, len(labels), 2)
    )


def split_syllables(labels: tuple[int, ...]) -> list[tuple[str, int, int]]:
    """Maximal runs of same-factor, same-sign letters as (factor, sign, length)."""
    out: list[tuple[str, int, int]] = []
    for gen in labels:
        factor = "ab" if abs(gen) in AB_BASES else "cd"
        sign = 1 if gen > 0 else -1
        if out and out[-1][0] == factor and out[-1][1] == sign:
            out[-1] = (factor, sign, out[-1][2] + 1)
        else:
            out.append((factor, sign, 1))
    return out


def distance_to_identity(v: SElement) -> int:
    """Word-metric distance of a base-group vertex from the identity."""
    return len(reduce_mul(v.ab, v.tail)) + len(v.cd)


def moves_geodesically_away(v: SElement, gen: int) -> bool:
    """Appending gen to v does not shorten the relevant factor projection."""
    g = s_to_g(v)
    proj = g.ab if abs(gen) in AB_BASES else g.cd
    if not proj:
        return True
    letter = "abcd"[abs(gen) - 1]
    if gen < 0:
        letter = letter.upper()
    return proj[-1] != letter.swapcase()


def _away_letter(v: SElement, factor: str, sign: int) -> tuple[int, bool]:
    """A letter of the factor and sign whose repetitions move away from v.

    Picks the base other than the one the projection ends in, so repeated
    appends never cancel; an empty projection falls back to the factor's
    second base, which is reported so callers can flag it.
    """
    g = s_to_g(v)
    bases = AB_BASES if factor == "ab" else CD_BASES
    proj = g.ab if factor == "ab" else g.cd
    if not proj:
        gen = sign * bases[1]
        assert moves_geodesically_away(v, gen)
        return gen, True
    last_base = 1 + "abcd".index(proj[-1].lower())
    gen = sign * (bases[0] if last_base != bases[0] else bases[1])
    assert moves_geodesically_away(v, gen)
    return gen, False


@dataclass
class RewriteReport:
    """Outcome of one rewriting run, with its checked certificate."""

    certificate: Certificate
    cases: dict[str, int]
    fallback_partner_used: bool
    pair_count: int
    min_original_distance: int
    min_swept_distance: int
    verified: bool = True
    syllable_counts: list[int] = field(default_factory=list)


class _Rewriter:
    def __init__(self, editor: PathEditor):
        self.ed = editor
        self.cases: dict[str, int] = {}
        self.fallback = False

    def _fire(self, case: str) -> None:
        self.cases[case] = self.cases.get(case, 0) + 1

    def _insert_partner(
        self, pos: int, length: int, factor: str, sign: int
    ) -> None:
        """Insert an away-moving round trip of `length` copies of one letter."""
        gen, fellback = _away_letter(self.ed.vertex(pos), factor, sign)
        self.fallback |= fellback
        self.ed.insert_round_trip(pos, (gen,) * length)

    def run(self, pos: int) -> list[int]:
        """Rewrite everything from pos; returns the syllable-count trace."""
        ed = self.ed
        trace: list[int] = []
        while pos < len(ed):
            rem = ed.labels[pos:]
            if is_kernel_form(rem):
                break
            syllables = split_syllables(rem)
            trace.append(len(syllables))
            if len(trace) >= 2:
                assert trace[-1] < trace[-2], "syllable count must decrease"
            assert len(syllables) >= 2, "a zero-sum remainder has two syllables"
            factor, sign, k1 = syllables[0]
            factor2, sign2, k2 = syllables[1]
            other = "cd" if factor == "ab" else "ab"
            # partner the first syllable and interleave it away
            self._insert_partner(pos + k1, k1, other, -sign)
            interleave_blocks(ed, pos, k1)
            pos += 2 * k1
            # the inverted partner block, k1 letters of `other` with sign,
            # now sits at pos, in front of the second syllable
            if factor2 == other and sign2 == sign:
                self._fire("1")  # merges with the partner block
                continue
            if factor2 == factor:
                if k2 >= k1:
                    self._fire("2")
                    interleave_blocks(ed, pos, k1)
                    pos += 2 * k1
                else:
                    self._fire("3")
                    self._insert_partner(pos + k1 + k2, k1 - k2, factor, -sign)
                    interleave_blocks(ed, pos, k1)
                    pos += 2 * k1
                continue
            # case 4: the second syllable has the partner's factor and sign;
            # cancel the seam between the inverted partner and the syllable
            q = 0
            while q < min(k1, k2) and ed.labels[pos + k1 - q] == -ed.labels[pos + k1 - q - 1]:
                ed.delete_backtrack(pos + k1 - q - 1)
                q += 1
            k_left, k_right = k1 - q, k2 - q
            if k_left == 0 or k_right == 0:
                self._fire("4.1")
                continue
            self._insert_partner(pos + k_left, k_left, factor, -sign)
            interleave_blocks(ed, pos, k_left)
            pos += 2 * k_left
            if k_right >= k_left:
                self._fire("4.2")
                interleave_blocks(ed, pos, k_left)
                pos += 2 * k_left
            else:
                self._fire("4.3")
                self._insert_partner(pos + k_left + k_right, k_left - k_right, other, -sign)
                interleave_blocks(ed, pos, k_left)
                pos += 2 * k_left
        return trace


def rewrite_to_kernel_path(
    start: SElement,
    labels: tuple[int, ...],
    description: str = "",
    check: bool = True,
    forbidden=None,
) -> RewriteReport:
    """Rewrite a zero-sum letter path into kernel-generator pair form.

    Returns a report whose certificate transforms the input path into one
    where every consecutive letter pair has opposite signs.  `check`
    re-verifies the certificate and the away-from-identity guarantee,
    against `forbidden` when given.
    """
    if any(abs(g) not in (1, 2, 3, 4) for g in labels):
        raise ValueError("rewriting applies to letter paths only")
    if sum(1 if g > 0 else -1 for g in labels) != 0:
        raise ValueError("path has nonzero exponent sum")
    editor = PathEditor(GAMMA_1, start, labels)
    rewriter = _Rewriter(editor)
    trace = rewriter.run(0)
    assert is_kernel_form(editor.labels)
    cert = editor.certificate(description)

    original = [start]
    for gen in labels:
        original.append(scan((gen,), start=original[-1]))
    min_original = min(distance_to_identity(v) for v in original)
    report = RewriteReport(
        certificate=cert,
        cases=rewriter.cases,
        fallback_partner_used=rewriter.fallback,
        pair_count=len(cert.result) // 2,
        min_original_distance=min_original,
        min_swept_distance=min_original,
        syllable_counts=trace,
    )
    if check:
        res = verify_certificate(cert, forbidden)
        report.verified = res.ok
        assert res.ok, res.reason
        report.min_swept_distance = min(
            distance_to_identity(v) for v in res.swept
        )
        assert report.min_swept_distance >= min_original, (
            "rewriting moved toward the identity"
        )
    return report


# ---------------------------------------------------------------------------
# exhaustive harness
# ---------------------------------------------------------------------------

def zero_sum_words(max_len: int):
    """All letter words of even length <= max_len with exponent sum zero."""
    yield ()
    letters = (1, -1, 2, -2, 3, -3, 4, -4)
    for n in range(2, max_len + 1, 2):
        stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
        while stack:
            word, es = stack.pop()
            remaining = n - len(word)
            if remaining == 0:
                if es == 0:
                    yield word
                continue
            if abs(es) > remaining:
                continue
            for g in letters:
                stack.append((word + (g,), es + (1 if g > 0 else -1)))


def transversal_bases() -> tuple[SElement, ...]:
    """One base vertex per factor-length split (i, n-i) for 3 <= n <= 5.

    The words mix letters and signs; the split shapes drive which partner
    and seam cases the rewriting can reach.
    """

    def _word(letters: str, length: int) -> str:
        pattern = []
        for j in range(length):
            ch = letters[j % 2]
            pattern.append(ch if j % 4 < 2 else ch.upper())
        return "".join(pattern)

    bases = []
    for n in (3, 4, 5):
        for i in range(n + 1):
            base = s_from_word(_word("ab", i) + _word("cd", n - i))
            g = s_to_g(base)
            assert (len(g.ab), len(g.cd)) == (i, n - i)
            bases.append(base)
    return tuple(bases)


def run_rewrite_suite(
    bases: tuple[SElement, ...] | None = None,
    max_len: int = 6,
    m: int | None = None,
) -> dict[str, object]:
    """Rewrite every zero-sum word of length <= max_len at every base.

    Verifies each certificate and the away-from-identity guarantee, and
    aggregates which cases fired.  With `m` set, words whose path dips
    into the radius-m ball around the identity are skipped (the rewriting
    guarantee applies to paths outside it) and every certificate is
    verified against that ball as a forbidden region.
    """
    if bases is None:
        bases = transversal_bases()
    region = None
    if m is not None:
        region = ForbiddenRegion(GAMMA_1, (S_IDENTITY,), m)
    words = list(zero_sum_words(max_len))
    cases: dict[str, int] = {}
    runs = 0
    verified = 0
    skipped = 0
    fallback_runs = 0
    max_moves = 0
    for base in bases:
        for word in words:
            if region is not None:
                v = base
                inside = v in region
                for gen in word:
                    if inside:
                        break
                    v = step(v, gen)
                    inside = v in region
                if inside:
                    skipped += 1
                    continue
            report = rewrite_to_kernel_path(base, word, forbidden=region)
            runs += 1
            verified += report.verified
            fallback_runs += report.fallback_partner_used
            max_moves = max(max_moves, len(report.certificate.moves))
            for case, count in report.cases.items():
                cases[case] = cases.get(case, 0) + count
    return {
        "bases": len(bases),
        "words": len(words),
        "ball_radius": m,
        "skipped": skipped,
        "runs": runs,
        "verified": verified,
        "all_verified": verified == runs,
        "cases": dict(sorted(cases.items())),
        "fallback_runs": fallback_runs,
        "max_moves": max_moves,
    }
