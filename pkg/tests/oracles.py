"""Reference reimplementations used as test oracles.

Deliberately slow and simple: certificates are replayed by slicing label
tuples, with every vertex recomputed from scratch after each move.
"""

from stallings.complexes import get_complex
from stallings.elements import step
from stallings.homotopy import inverse_path, relator_form


def replay_certificate(cert, forbidden=None):
    """Returns (ok, reason, swept) computed independently of the library."""
    spec = get_complex(cert.complex_name)
    gens = set(spec.gens)
    if callable(forbidden) or forbidden is None:
        blocked = forbidden
    else:
        blocked = lambda v: v in forbidden  # noqa: E731

    def vertices(labels):
        verts = [cert.start]
        for g in labels:
            verts.append(step(verts[-1], g))
        return verts

    labels = tuple(cert.path)
    if any(abs(g) not in gens for g in labels):
        return False, "bad path label", frozenset()
    swept = set(vertices(labels))
    end = vertices(labels)[-1]
    for mi, move in enumerate(cert.moves):
        kind = move[0]
        if kind == "ins":
            _, pos, gen = move
            if not (0 <= pos <= len(labels) and abs(gen) in gens):
                return False, f"move {mi} invalid", frozenset(swept)
            labels = labels[:pos] + (gen, -gen) + labels[pos:]
        elif kind == "del":
            _, pos = move
            if not (0 <= pos < len(labels) - 1 and labels[pos + 1] == -labels[pos]):
                return False, f"move {mi} invalid", frozenset(swept)
            labels = labels[:pos] + labels[pos + 2 :]
        elif kind == "cell":
            _, pos, rid, inv, rot, split = move
            if rid not in spec.relator_ids:
                return False, f"move {mi} invalid", frozenset(swept)
            r = relator_form(rid, inv, rot)
            if not (0 <= split <= len(r) and 0 <= pos <= len(labels) - split):
                return False, f"move {mi} invalid", frozenset(swept)
            if labels[pos : pos + split] != r[:split]:
                return False, f"move {mi} invalid", frozenset(swept)
            labels = labels[:pos] + inverse_path(r[split:]) + labels[pos + split :]
        else:
            return False, f"move {mi} invalid", frozenset(swept)
        verts = vertices(labels)
        assert verts[-1] == end, "a move changed the endpoint"
        swept.update(verts)
    if labels != tuple(cert.result):
        return False, "result mismatch", frozenset(swept)
    if blocked is not None and any(blocked(v) for v in swept):
        return False, "forbidden vertex swept", frozenset(swept)
    return True, None, frozenset(swept)
