"""Edge-path homotopies as verifiable certificates.

A certificate records a starting vertex, an initial edge path (signed
generator labels), and a list of local moves that transform it into a final
path with the same endpoints.  Moves:

    ("ins", pos, gen)                insert the backtrack (gen, -gen) at pos
    ("del", pos)                     delete a backtrack at pos
    ("cell", pos, rid, inv, rot, split)
                                     push the path across 2-cell rid: with
                                     r the relator word (inverted if inv,
                                     rotated by rot), the segment r[:split]
                                     at pos is replaced by the inverse path
                                     of r[split:]

Every move fixes the path's endpoints, so a verified certificate is a
homotopy rel endpoints; with an empty final path it is a null-homotopy.
Verification walks the moves, checks each against the labels it claims to
act on, and tests every vertex the homotopy sweeps over against an optional
forbidden region.  Endpoint preservation inside a cell move follows from
the relator being trivial in the group, which is asserted, not assumed.

`PathEditor` applies moves against live state so that positions are always
correct, and turns the recorded history into a certificate.  The block
constructors below it build the standard homotopies (commuting two blocks,
interleaving, pair conversion, conjugation by the stable letter, loop
contraction) out of single moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .complexes import ComplexSpec, REL_WORDS, get_complex
from .elements import (
    SElement,
    gen_to_token,
    parse_gens,
    s_from_json,
    s_to_json,
    step,
    token_to_gen,
)
from .words import EGEN_WORDS, WORD_TO_EGEN, egen_id, egen_index, invert_word

Move = tuple
Labels = tuple[int, ...]

CERTIFICATE_SCHEMA = "homotopy-certificate/1"


class CertificateError(ValueError):
    """A move does not apply to the path it claims to act on."""


def inverse_path(labels: Sequence[int]) -> Labels:
    return tuple(-g for g in reversed(labels))


def relator_form(rid: int, inv: int, rot: int) -> Labels:
    """A relator word, optionally inverted, rotated by rot."""
    rel = REL_WORDS[rid]
    if inv:
        rel = inverse_path(rel)
    return rel[rot:] + rel[:rot]


def _build_relator_forms() -> dict[Labels, tuple[tuple[int, int, int], ...]]:
    forms: dict[Labels, list[tuple[int, int, int]]] = {}
    for rid in range(len(REL_WORDS)):
        for inv in (0, 1):
            for rot in range(len(REL_WORDS[rid])):
                word = relator_form(rid, inv, rot)
                forms.setdefault(word, []).append((rid, inv, rot))
    return {word: tuple(hits) for word, hits in forms.items()}


RELATOR_FORMS = _build_relator_forms()


def find_cell_move(
    spec: ComplexSpec, pos: int, segment: Sequence[int], replacement: Sequence[int]
) -> Move:
    """Cell move replacing `segment` by `replacement` at pos, if a 2-cell
    of the complex realizes it."""
    word = tuple(segment) + inverse_path(replacement)
    available = set(spec.relator_ids)
    for rid, inv, rot in RELATOR_FORMS.get(word, ()):
        if rid in available:
            return ("cell", pos, rid, inv, rot, len(segment))
    raise CertificateError(
        f"no 2-cell of {spec.name} replaces {tuple(segment)} by {tuple(replacement)}"
    )


@dataclass(frozen=True)
class Certificate:
    """A recorded homotopy between two edge paths with shared endpoints."""

    complex_name: str
    start: SElement
    path: Labels
    moves: tuple[Move, ...]
    result: Labels
    description: str = ""


@dataclass
class VerificationResult:
    ok: bool
    reason: str | None
    moves_checked: int
    swept: frozenset[SElement] = field(repr=False, default=frozenset())
    end: SElement | None = None

    def __bool__(self) -> bool:
        return self.ok


def _apply_move(
    spec: ComplexSpec, labels: list[int], verts: list[SElement], move: Move
) -> list[SElement]:
    """Apply one move in place; returns the vertices the move creates.

    Raises CertificateError when the move does not match the labels.  The
    endpoint identities inside cell moves hold for every relator form once
    the labels match, so those are asserted rather than reported.
    """
    kind = move[0]
    if kind == "ins":
        _, pos, gen = move
        if not 0 <= pos <= len(labels):
            raise CertificateError(f"insert position {pos} out of range")
        if abs(gen) not in set(spec.gens):
            raise CertificateError(f"generator {gen} is not in {spec.name}")
        new = step(verts[pos], gen)
        labels[pos:pos] = [gen, -gen]
        verts[pos + 1 : pos + 1] = [new, verts[pos]]
        return [new]
    if kind == "del":
        _, pos = move
        if not 0 <= pos < len(labels) - 1:
            raise CertificateError(f"delete position {pos} out of range")
        if labels[pos + 1] != -labels[pos]:
            raise CertificateError(f"labels at {pos} are not a backtrack")
        assert verts[pos + 2] == verts[pos]
        del labels[pos : pos + 2]
        del verts[pos + 1 : pos + 3]
        return []
    if kind == "cell":
        _, pos, rid, inv, rot, split = move
        if rid not in set(spec.relator_ids):
            raise CertificateError(f"2-cell {rid} is not in {spec.name}")
        relator = relator_form(rid, inv, rot)
        if not 0 <= split <= len(relator):
            raise CertificateError(f"split {split} out of range for 2-cell {rid}")
        if not 0 <= pos <= len(labels) - split:
            raise CertificateError(f"cell position {pos} out of range")
        if tuple(labels[pos : pos + split]) != relator[:split]:
            raise CertificateError(
                f"path at {pos} does not match 2-cell {rid} side {relator[:split]}"
            )
        replacement = inverse_path(relator[split:])
        created: list[SElement] = []
        v = verts[pos]
        for gen in replacement[:-1] if replacement else ():
            v = step(v, gen)
            created.append(v)
        # both sides of the cell read the same group element
        if replacement:
            last = created[-1] if created else verts[pos]
            assert step(last, replacement[-1]) == verts[pos + split]
        else:
            assert verts[pos + split] == verts[pos]
        labels[pos : pos + split] = replacement
        verts[pos + 1 : pos + split] = created
        return created
    raise CertificateError(f"unknown move kind {kind!r}")


def verify_certificate(
    cert: Certificate,
    forbidden: Callable[[SElement], bool] | object | None = None,
) -> VerificationResult:
    """Replay a certificate, checking every move and every swept vertex."""
    blocked = _as_predicate(forbidden)
    spec = get_complex(cert.complex_name)
    allowed = set(spec.gens)
    labels = list(cert.path)
    verts = [cert.start]
    for i, gen in enumerate(labels):
        if abs(gen) not in allowed:
            return VerificationResult(False, f"path label {i} is not a generator", 0)
        verts.append(step(verts[-1], gen))
    swept = set(verts)
    if blocked is not None:
        for v in verts:
            if blocked(v):
                return VerificationResult(False, "initial path enters forbidden region", 0)
    end = verts[-1]
    for mi, move in enumerate(cert.moves):
        try:
            created = _apply_move(spec, labels, verts, move)
        except CertificateError as exc:
            return VerificationResult(False, f"move {mi}: {exc}", mi)
        swept.update(created)
        if blocked is not None:
            for v in created:
                if blocked(v):
                    return VerificationResult(
                        False, f"move {mi} sweeps into forbidden region", mi
                    )
    if tuple(labels) != cert.result:
        return VerificationResult(
            False, "moves do not produce the claimed final path", len(cert.moves)
        )
    assert verts[-1] == end
    return VerificationResult(True, None, len(cert.moves), frozenset(swept), end)


def _as_predicate(forbidden) -> Callable[[SElement], bool] | None:
    if forbidden is None:
        return None
    if callable(forbidden):
        return forbidden
    return lambda v: v in forbidden


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def _move_to_json(move: Move) -> list:
    if move[0] == "ins":
        return ["ins", move[1], gen_to_token(move[2])]
    return list(move)


def _move_from_json(data: Sequence) -> Move:
    if data[0] == "ins":
        return ("ins", int(data[1]), token_to_gen(data[2]))
    if data[0] == "del":
        return ("del", int(data[1]))
    if data[0] == "cell":
        return ("cell",) + tuple(int(x) for x in data[1:])
    raise ValueError(f"unknown move kind {data[0]!r}")


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "schema": CERTIFICATE_SCHEMA,
        "complex": cert.complex_name,
        "start": s_to_json(cert.start),
        "path": [gen_to_token(g) for g in cert.path],
        "moves": [_move_to_json(m) for m in cert.moves],
        "result": [gen_to_token(g) for g in cert.result],
        "description": cert.description,
    }


def certificate_from_json(data: dict) -> Certificate:
    if data.get("schema") != CERTIFICATE_SCHEMA:
        raise ValueError(f"unsupported certificate schema {data.get('schema')!r}")
    return Certificate(
        complex_name=data["complex"],
        start=s_from_json(data["start"]),
        path=tuple(token_to_gen(t) for t in data["path"]),
        moves=tuple(_move_from_json(m) for m in data["moves"]),
        result=tuple(token_to_gen(t) for t in data["result"]),
        description=data.get("description", ""),
    )


# ---------------------------------------------------------------------------
# live editing
# ---------------------------------------------------------------------------

class PathEditor:
    """Builds a certificate by applying moves against live path state.

    Move positions refer to the current label list, so constructing and
    recording are the same act; `certificate()` freezes the history.
    """

    def __init__(self, spec: ComplexSpec, start: SElement, labels: Iterable[int] = ()):
        self.spec = spec
        self.start = start
        self._initial = tuple(labels)
        self._labels = list(self._initial)
        self._verts = [start]
        allowed = set(spec.gens)
        for gen in self._labels:
            if abs(gen) not in allowed:
                raise CertificateError(f"label {gen} is not a generator of {spec.name}")
            self._verts.append(step(self._verts[-1], gen))
        self._moves: list[Move] = []

    @property
    def labels(self) -> Labels:
        return tuple(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    def vertex(self, i: int) -> SElement:
        return self._verts[i]

    @property
    def end(self) -> SElement:
        return self._verts[-1]

    def _record(self, move: Move) -> None:
        _apply_move(self.spec, self._labels, self._verts, move)
        self._moves.append(move)

    def insert_backtrack(self, pos: int, gen: int) -> None:
        self._record(("ins", pos, gen))

    def delete_backtrack(self, pos: int) -> None:
        self._record(("del", pos))

    def apply_cell(self, pos: int, rid: int, inv: int, rot: int, split: int) -> None:
        self._record(("cell", pos, rid, inv, rot, split))

    def replace(self, pos: int, length: int, replacement: Sequence[int]) -> None:
        """Replace a segment across whichever 2-cell realizes the exchange."""
        segment = self._labels[pos : pos + length]
        self._record(find_cell_move(self.spec, pos, segment, replacement))

    def insert_round_trip(self, pos: int, seg: Sequence[int]) -> None:
        """Insert seg followed by its inverse path at pos."""
        for i, gen in enumerate(seg):
            self.insert_backtrack(pos + i, gen)

    def certificate(self, description: str = "") -> Certificate:
        return Certificate(
            complex_name=self.spec.name,
            start=self.start,
            path=self._initial,
            moves=tuple(self._moves),
            result=tuple(self._labels),
            description=description,
        )


# ---------------------------------------------------------------------------
# block constructors
# ---------------------------------------------------------------------------

def swap_adjacent(editor: PathEditor, pos: int) -> None:
    """Exchange two adjacent commuting labels through a commuting cell."""
    x, y = editor.labels[pos : pos + 2]
    editor.replace(pos, 2, (y, x))


def commute_block(editor: PathEditor, pos: int, left_len: int, right_len: int) -> None:
    """Move a block of length right_len leftward past one of length left_len.

    Every label of the right block must commute with every label of the
    left block through an available 2-cell; the sweep uses exactly
    left_len * right_len swaps and visits only grid vertices, products of a
    prefix of one block with a prefix of the other.
    """
    for j in range(right_len):
        # the j-th right label sits at pos+left_len+j and travels left
        for i in range(pos + left_len + j - 1, pos + j - 1, -1):
            swap_adjacent(editor, i)


def interleave_blocks(editor: PathEditor, pos: int, k: int) -> None:
    """Turn two commuting blocks of length k into their interleaving.

    (t1..tk, g1..gk) becomes (t1, g1, t2, g2, ..., tk, gk) using
    k(k-1)/2 swaps.
    """
    for i in range(k):
        for j in range(pos + k + i - 1, pos + 2 * i, -1):
            swap_adjacent(editor, j)


def convert_letter_pairs(editor: PathEditor, pos: int, pair_count: int) -> int:
    """Convert opposite-sign letter pairs to kernel-generator labels.

    Backtrack pairs vanish instead of converting.  Returns the length of
    the produced segment.
    """
    produced = 0
    cursor = pos
    for _ in range(pair_count):
        x, y = editor.labels[cursor : cursor + 2]
        if y == -x:
            editor.delete_backtrack(cursor)
            continue
        word = gen_to_token(x) + gen_to_token(y)
        index = WORD_TO_EGEN.get(word)
        if index is None:
            raise CertificateError(f"letter pair {word!r} is not a kernel generator")
        editor.replace(cursor, 2, (egen_id(index),))
        cursor += 1
        produced += 1
    return produced


def expand_kernel_generators(editor: PathEditor, pos: int, count: int) -> int:
    """Expand kernel-generator labels into their two-letter words.

    Returns the length of the produced segment (2 per label).
    """
    cursor = pos
    for _ in range(count):
        gen = editor.labels[cursor]
        index = egen_index(gen)
        word = EGEN_WORDS[index - 1]
        letters = parse_gens(word if gen > 0 else invert_word(word))
        editor.replace(cursor, 1, letters)
        cursor += 2
    return cursor - pos


def conjugate_by_stable(editor: PathEditor, pos: int, length: int, sign: int = 1) -> None:
    """Wrap the segment at pos in a stable-letter conjugate.

    The segment must consist of kernel-generator labels; one insertion and
    `length` square swaps slide the inverse stable letter across it, leaving
    (s^sign, segment, s^-sign).
    """
    gen = 5 if sign > 0 else -5
    editor.insert_backtrack(pos, gen)
    for i in range(pos + 1, pos + 1 + length):
        swap_adjacent(editor, i)


def stack_stable_conjugations(editor: PathEditor, pos: int, length: int, levels: int) -> None:
    """Conjugate a kernel-generator segment by a power of the stable letter."""
    for i in range(levels):
        conjugate_by_stable(editor, pos + i, length)


def contract_product_loop(editor: PathEditor, pos: int, length: int) -> None:
    """Contract a closed letter loop with trivial factor projections.

    Interleaves leftmost backtrack deletions with leftmost swaps that move
    {a,b} letters in front of {c,d} letters.  Deletions shrink the loop and
    swaps strictly reduce the number of out-of-order pairs, so the loop
    empties within length^2 moves; a sorted nonempty remainder would spell
    a nontrivial projection, contradicting closedness.
    """
    if editor.vertex(pos) != editor.vertex(pos + length):
        raise CertificateError("segment is not a closed loop")
    budget = max(1, length) ** 2
    n = length
    used = 0
    while n:
        seg = editor.labels[pos : pos + n]
        for i in range(n - 1):
            if seg[i + 1] == -seg[i]:
                editor.delete_backtrack(pos + i)
                n -= 2
                break
        else:
            for i in range(n - 1):
                if abs(seg[i]) in (3, 4) and abs(seg[i + 1]) in (1, 2):
                    swap_adjacent(editor, pos + i)
                    break
            else:
                raise CertificateError("loop is not null-homotopic in the product")
        used += 1
        if used > budget:
            raise AssertionError("loop contraction exceeded its move budget")


def contract_kernel_generator_loop(editor: PathEditor, pos: int, count: int) -> None:
    """Null-homotope a closed loop of kernel-generator labels in place."""
    produced = expand_kernel_generators(editor, pos, count)
    contract_product_loop(editor, pos, produced)


# ---------------------------------------------------------------------------
# relabelling along letter symmetries
# ---------------------------------------------------------------------------

def relabel_certificate(
    cert: Certificate, gen_map: Callable[[int], int], vertex_map: Callable[[SElement], SElement]
) -> Certificate:
    """Transport a letter-path certificate along a generator symmetry.

    gen_map must be induced by a group automorphism that permutes the
    signed letter generators and preserves the available 2-cells; cell
    moves are re-derived by searching for the mapped relator word.
    """
    spec = get_complex(cert.complex_name)
    new_moves: list[Move] = []
    for move in cert.moves:
        if move[0] == "ins":
            _, pos, gen = move
            new_moves.append(("ins", pos, gen_map(gen)))
        elif move[0] == "del":
            new_moves.append(move)
        else:
            _, pos, rid, inv, rot, split = move
            relator = relator_form(rid, inv, rot)
            seg = tuple(gen_map(g) for g in relator[:split])
            rep = tuple(gen_map(g) for g in inverse_path(relator[split:]))
            new_moves.append(find_cell_move(spec, pos, seg, rep))
    return Certificate(
        complex_name=cert.complex_name,
        start=vertex_map(cert.start),
        path=tuple(gen_map(g) for g in cert.path),
        moves=tuple(new_moves),
        result=tuple(gen_map(g) for g in cert.result),
        description=cert.description,
    )
