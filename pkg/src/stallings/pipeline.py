"""Desk-scale drivers for the connectivity-at-infinity experiments.

Three entry points, each returning a report whose claims are backed by a
replayable certificate:

* `run_ends_experiment` tabulates essential components of sphere
  complements in the kernel graph, the base-group complex, the
  stable-kernel subgroup graph, and a free-group control.

* `run_main_pipeline` takes a trivial letter loop far from a forbidden
  ball, rewrites it into kernel-generator form, and contracts it after
  conjugating up by a power of the stable letter; the least power whose
  composed certificate verifies against the ball is reported, along with
  how far the whole homotopy strayed from the loop.

* `run_reduce_demo` builds a disk diagram for a product of conjugated
  relators and eliminates its stable-letter bands innermost first,
  rerouting each band interior through a kernel-generator detour found
  by breadth-first search outside a dilation of the forbidden ball.

Forbidden sets are balls in a named complex rather than arbitrary finite
complexes; that is the desk-scale substitute throughout.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .complexes import (
    DEFAULT_BUDGET,
    ForbiddenRegion,
    distance_gamma1,
    find_generator_path,
    get_complex,
    sphere_complement_components,
)
from .diagrams import ConjugateFactor, build_diagram, extract_bands, random_expression
from .elements import (
    S_IDENTITY,
    SElement,
    gen_to_token,
    in_base_group,
    in_kernel_subgroup,
    s_invert,
    s_multiply,
    s_to_json,
    scan,
    step,
)
from .homotopy import (
    Certificate,
    CertificateError,
    PathEditor,
    certificate_to_json,
    contract_kernel_generator_loop,
    contract_product_loop,
    convert_letter_pairs,
    expand_kernel_generators,
    stack_stable_conjugations,
    swap_adjacent,
    verify_certificate,
)
from .rewrite import rewrite_to_kernel_path
from .words import EGEN_FIRST_ID, S_ID, reduce_mul

X_COMPLEX = get_complex("x")
GAMMA_K = get_complex("gamma_k")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class PipelineReport:
    """Composed outcome of one run, with its stage certificates.

    `verified` is true only when the composed certificate replays cleanly
    against the declared forbidden region.
    """

    kind: str
    verified: bool
    summary: dict[str, object]
    stages: tuple[tuple[str, Certificate], ...]
    certificate: Certificate
    timing_seconds: float | None = None

    def to_json(self, include_certificates: bool = True) -> dict[str, object]:
        data: dict[str, object] = {
            "kind": self.kind,
            "verified": self.verified,
            "summary": self.summary,
            "timing_seconds": self.timing_seconds,
        }
        if include_certificates:
            data["stages"] = [
                {"stage": name, "certificate": certificate_to_json(cert)}
                for name, cert in self.stages
            ]
            data["certificate"] = certificate_to_json(self.certificate)
        return data


def emit(report, fmt: str = "json") -> str:
    """Serialize a report deterministically.

    JSON applies to dicts and pipeline reports; DOT strings produced by
    the graph exporters pass through unchanged.
    """
    if fmt == "json":
        data = report.to_json() if isinstance(report, PipelineReport) else report
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt == "dot":
        if isinstance(report, str):
            return report if report.endswith("\n") else report + "\n"
        raise ValueError("DOT output applies to graph exports only")
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# geometry helpers
# ---------------------------------------------------------------------------

def component_distance(u: SElement, v: SElement) -> int:
    """Sum of the normal-form component lengths of u^-1 v.

    The first-factor part and the tail share the letter a, so they merge
    before counting.  Agrees with the product metric on base-group
    vertices; elsewhere it is a word-length bound used only for reporting.
    """
    d = s_multiply(s_invert(u), v)
    return len(reduce_mul(d.ab, d.tail)) + len(d.cd)


def far_basepoint(distance: int) -> SElement:
    """A fixed base-group vertex at the given distance from the identity."""
    return scan(tuple((1, 2)[i % 2] for i in range(distance)))


def base_exclusion_radius(region: ForbiddenRegion) -> int:
    """Largest distance to the identity over base-group vertices of the region.

    A base-group loop staying strictly outside this radius cannot touch
    the region's trace in the base-group complex.
    """
    k = 0
    for v in region.vertices():
        if in_base_group(v):
            k = max(k, distance_gamma1(S_IDENTITY, v))
    return k


def _loop_vertices(start: SElement, labels: Sequence[int]) -> list[SElement]:
    verts = [start]
    for gen in labels:
        verts.append(step(verts[-1], gen))
    return verts


def combing_radius(swept: Iterable[SElement], loop_verts: Sequence[SElement]) -> int:
    """Farthest any swept vertex strays from the input loop's vertex set."""
    anchors = list(dict.fromkeys(loop_verts))
    return max(min(component_distance(w, v) for v in anchors) for w in swept)


def compose_certificates(
    stages: Sequence[tuple[str, Certificate]], complex_name: str = "x"
) -> Certificate:
    """Concatenate chained stage certificates over the named complex."""
    certs = [cert for _, cert in stages]
    for prev, nxt in zip(certs, certs[1:]):
        if prev.result != nxt.path or prev.start != nxt.start:
            raise CertificateError("stage certificates do not chain")
    return Certificate(
        complex_name=complex_name,
        start=certs[0].start,
        path=certs[0].path,
        moves=tuple(m for c in certs for m in c.moves),
        result=certs[-1].result,
        description="; ".join(c.description for c in certs if c.description),
    )


# ---------------------------------------------------------------------------
# mixed-segment surgery
# ---------------------------------------------------------------------------

def _expand_kernel_labels(editor: PathEditor, pos: int, count: int) -> int:
    """Expand each kernel-generator label in a mixed stable-free segment."""
    i = pos
    end = pos + count
    while i < end:
        if abs(editor.labels[i]) >= EGEN_FIRST_ID:
            expand_kernel_generators(editor, i, 1)
            i += 2
            end += 1
        else:
            i += 1
    return end - pos


def contract_trivial_loop(editor: PathEditor, pos: int, count: int) -> None:
    """Null-homotope a closed stable-free subpath of letters and kernel labels."""
    produced = _expand_kernel_labels(editor, pos, count)
    contract_product_loop(editor, pos, produced)


def _slide_stable_across(editor: PathEditor, pos: int, count: int) -> None:
    """Move the stable letter at pos rightward across kernel-generator labels."""
    for i in range(pos, pos + count):
        swap_adjacent(editor, i)


def _innermost_stable_pair(editor: PathEditor) -> tuple[int, int] | None:
    """An inverse pair of stable letters whose stable-free interior pinches.

    Adjacent sign changes in the stable subsequence are the candidates;
    among those only pairs whose interior spells a kernel element can be
    cancelled, and a trivial loop always contains one.
    """
    labels = editor.labels
    prev = None
    candidates = []
    for i, gen in enumerate(labels):
        if abs(gen) == S_ID:
            if prev is not None and labels[prev] == -gen:
                candidates.append((prev, i))
            prev = i
    for i, j in candidates:
        between = s_multiply(s_invert(editor.vertex(i + 1)), editor.vertex(j))
        if in_kernel_subgroup(between):
            return i, j
    if candidates:
        raise CertificateError("no adjacent stable pair pinches over the kernel")
    return None


# ---------------------------------------------------------------------------
# main pipeline
# ---------------------------------------------------------------------------

def run_main_pipeline(
    start: SElement,
    labels: Sequence[int],
    region: ForbiddenRegion | None = None,
    max_level: int = 8,
    with_timing: bool = False,
) -> PipelineReport:
    """Contract a far base-group loop while avoiding a forbidden ball.

    Stage 1 rewrites the letter loop into kernel-pair form, stage 2
    converts the pairs to kernel-generator edges through triangles, and
    stage 3 conjugates the resulting loop up by s^p and contracts it at
    that level before cancelling the pillar.  p runs upward from 0 with
    verification of the composed certificate as the oracle, so the
    reported level is minimal for this contraction scheme.
    """
    t0 = time.monotonic()
    labels = tuple(labels)
    if region is None:
        region = ForbiddenRegion(X_COMPLEX, (S_IDENTITY,), 1)
    verts = _loop_vertices(start, labels)
    if verts[-1] != start:
        raise ValueError("path is not a loop")
    k = base_exclusion_radius(region)
    min_dist = min(distance_gamma1(S_IDENTITY, v) for v in verts)
    if min_dist <= k:
        raise ValueError(
            f"loop reaches distance {min_dist} from the identity; the region"
            f" requires staying outside radius {k}"
        )

    rewrite = rewrite_to_kernel_path(start, labels, check=True)
    stage1 = rewrite.certificate
    editor = PathEditor(X_COMPLEX, start, stage1.result)
    produced = convert_letter_pairs(editor, 0, len(stage1.result) // 2)
    stage2 = editor.certificate("convert letter pairs to kernel generators")
    kernel_loop = stage2.result

    level = None
    reason = None
    levels_tried = 0
    stages: tuple[tuple[str, Certificate], ...] = ()
    composed = None
    res = None
    for p in range(max_level + 1):
        contractor = PathEditor(X_COMPLEX, start, kernel_loop)
        if produced:
            stack_stable_conjugations(contractor, 0, produced, p)
            contract_kernel_generator_loop(contractor, p, produced)
            for i in range(p - 1, -1, -1):
                contractor.delete_backtrack(i)
        stage3 = contractor.certificate(f"contract at stable level {p}")
        assert stage3.result == ()
        stages = (("rewrite", stage1), ("convert", stage2), ("contract", stage3))
        composed = compose_certificates(stages)
        levels_tried += 1
        res = verify_certificate(composed, region)
        if res.ok:
            level = p
            break
        reason = res.reason
        if not produced:
            break

    verified = level is not None
    summary = {
        "base": s_to_json(start),
        "loop": "".join(gen_to_token(g) for g in labels),
        "loop_length": len(labels),
        "min_loop_distance": min_dist,
        "region_radius": region.radius,
        "region_size": len(region),
        "base_exclusion_radius": k,
        "kernel_path_length": len(stage1.result),
        "kernel_generator_count": produced,
        "rewrite_cases": dict(sorted(rewrite.cases.items())),
        "fallback_partner_used": rewrite.fallback_partner_used,
        "stable_level": level,
        "levels_tried": levels_tried,
        "verified": verified,
        "move_count": len(composed.moves),
        "swept_vertices": len(res.swept) if verified else None,
        "combing_radius": combing_radius(res.swept, verts) if verified else None,
        "failure_reason": None if verified else reason,
    }
    return PipelineReport(
        kind="main",
        verified=verified,
        summary=summary,
        stages=stages,
        certificate=composed,
        timing_seconds=round(time.monotonic() - t0, 3) if with_timing else None,
    )


# ---------------------------------------------------------------------------
# band-elimination demonstration
# ---------------------------------------------------------------------------

def run_reduce_demo(
    factors: Sequence[ConjugateFactor | tuple],
    start: SElement | None = None,
    region: ForbiddenRegion | None = None,
    budget: int = 500_000,
    with_timing: bool = False,
) -> PipelineReport:
    """Null-homotope an expression-built loop by eliminating its bands.

    The expression guarantees a disk diagram; its boundary word realized
    at `start` is the loop.  Each round takes an innermost inverse pair
    of stable letters, reroutes the enclosed interior through a
    kernel-generator detour found outside the once-dilated region,
    slides the stable letter across the detour through commuting
    squares, and cancels the pair; the detour is what remains.  The
    final stable-free residue contracts inside the base-group complex.
    """
    t0 = time.monotonic()
    factors = tuple(
        f if isinstance(f, ConjugateFactor) else ConjugateFactor(*f) for f in factors
    )
    diagram = build_diagram(factors)
    decomposition = extract_bands(diagram)
    boundary = diagram.boundary_word()
    if region is None:
        region = ForbiddenRegion(X_COMPLEX, (S_IDENTITY,), 1)
    if start is None:
        start = far_basepoint(len(boundary) // 2 + region.radius + 2)
    dilated = ForbiddenRegion(region.spec, region.centers, region.radius + 1)

    editor = PathEditor(X_COMPLEX, start, boundary)
    detour_lengths: list[int] = []
    while True:
        pair = _innermost_stable_pair(editor)
        if pair is None:
            break
        i, j = pair
        if j == i + 1:
            editor.delete_backtrack(i)
            detour_lengths.append(0)
            continue
        x = editor.vertex(i + 1)
        y = editor.vertex(j)
        if x in dilated or y in dilated:
            raise CertificateError("a band endpoint lies inside the dilated region")
        delta = find_generator_path(GAMMA_K, x, y, forbidden=dilated, budget=budget)
        if delta is None:
            raise CertificateError("the dilated region separates the band endpoints")
        editor.insert_round_trip(i + 1, delta)
        contract_trivial_loop(editor, i + 1 + len(delta), len(delta) + (j - i - 1))
        _slide_stable_across(editor, i, len(delta))
        editor.delete_backtrack(i + len(delta))
        detour_lengths.append(len(delta))
    if editor.labels:
        contract_trivial_loop(editor, 0, len(editor))

    cert = editor.certificate("eliminate bands, then contract the residue")
    assert cert.result == ()
    assert len(detour_lengths) == len(decomposition.bands)
    res = verify_certificate(cert, region)
    loop_verts = _loop_vertices(start, boundary)
    summary = {
        "expression": [
            {
                "conjugator": "".join(gen_to_token(g) for g in f.conjugator),
                "relator": f.relator_id,
                "sign": f.sign,
            }
            for f in factors
        ],
        "base": s_to_json(start),
        "boundary": "".join(gen_to_token(g) for g in boundary),
        "boundary_length": len(boundary),
        "bands": len(decomposition.bands),
        "self_paired_bands": sum(1 for b in decomposition.bands if not b.faces),
        "band_depths": decomposition.depths(),
        "detour_lengths": detour_lengths,
        "basepoint_distance": distance_gamma1(S_IDENTITY, start),
        "region_radius": region.radius,
        "verified": res.ok,
        "move_count": len(cert.moves),
        "swept_vertices": len(res.swept) if res.ok else None,
        "combing_radius": combing_radius(res.swept, loop_verts) if res.ok else None,
        "failure_reason": res.reason,
    }
    return PipelineReport(
        kind="reduce",
        verified=res.ok,
        summary=summary,
        stages=(("bands", cert),),
        certificate=cert,
        timing_seconds=round(time.monotonic() - t0, 3) if with_timing else None,
    )


# ---------------------------------------------------------------------------
# ends experiment
# ---------------------------------------------------------------------------

def run_ends_experiment(
    r_values: Sequence[int] = (1, 2, 3),
    names: Sequence[str] = ("gamma_k", "gamma_1", "gamma_h", "free_ab"),
    gap: int = 2,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, object]:
    """Essential sphere-complement component counts per complex and radius."""
    rows = []
    essential: dict[str, list[int]] = {}
    for name in names:
        spec = get_complex(name)
        for r in r_values:
            row = sphere_complement_components(spec, r, r + gap, budget=budget)
            rows.append(row)
            essential.setdefault(name, []).append(row["essential_components"])
    return {
        "gap": gap,
        "r_values": list(r_values),
        "rows": rows,
        "essential_components": essential,
        "one_ended_evidence": sorted(
            name for name, counts in essential.items() if all(c == 1 for c in counts)
        ),
    }


# ---------------------------------------------------------------------------
# batch harnesses
# ---------------------------------------------------------------------------

def _random_free_word(
    rng: random.Random, bases: tuple[int, int], length: int
) -> tuple[int, ...]:
    word: list[int] = []
    for _ in range(length):
        choices = [g for b in bases for g in (b, -b) if not word or g != -word[-1]]
        word.append(rng.choice(choices))
    return tuple(word)


def random_far_loop(
    rng: random.Random,
    min_distance: int = 3,
    max_half: int = 2,
    max_tries: int = 200,
) -> tuple[SElement, tuple[int, ...]]:
    """A short trivial letter loop all of whose vertices stay far out.

    Commutators of cross-factor words, or out-and-back words, based at a
    random reduced vertex; resamples until every vertex clears the
    distance floor.
    """
    for _ in range(max_tries):
        extra = rng.randint(1, 3)
        n = min_distance + extra
        split = rng.randint(0, n)
        base = scan(
            _random_free_word(rng, (1, 2), split)
            + _random_free_word(rng, (3, 4), n - split)
        )
        if rng.random() < 0.25:
            out = _random_free_word(rng, rng.choice(((1, 2), (3, 4))), 2 * max_half)
            labels = out + tuple(-g for g in reversed(out))
        else:
            u = _random_free_word(rng, (1, 2), rng.randint(1, max_half))
            v = _random_free_word(rng, (3, 4), rng.randint(1, max_half))
            labels = (
                u + v + tuple(-g for g in reversed(u)) + tuple(-g for g in reversed(v))
            )
        verts = _loop_vertices(base, labels)
        if min(distance_gamma1(S_IDENTITY, w) for w in verts) > min_distance - 1:
            return base, labels
    raise RuntimeError("could not sample a loop clearing the distance floor")


def run_pipeline_batch(
    count: int,
    seed: int = 0,
    region: ForbiddenRegion | None = None,
    min_distance: int = 3,
) -> dict[str, object]:
    """Run the main pipeline on random far loops; merge summaries by index."""
    if region is None:
        region = ForbiddenRegion(X_COMPLEX, (S_IDENTITY,), 1)
    rng = random.Random(seed)
    runs = []
    levels: dict[str, int] = {}
    verified = 0
    max_combing = 0
    for index in range(count):
        start, labels = random_far_loop(rng, min_distance=min_distance)
        report = run_main_pipeline(start, labels, region=region)
        verified += report.verified
        level = report.summary["stable_level"]
        levels[str(level)] = levels.get(str(level), 0) + 1
        if report.verified:
            max_combing = max(max_combing, report.summary["combing_radius"])
        runs.append(
            {
                "index": index,
                "loop": report.summary["loop"],
                "base": report.summary["base"],
                "stable_level": level,
                "combing_radius": report.summary["combing_radius"],
                "verified": report.verified,
            }
        )
    return {
        "kind": "pipeline-batch",
        "count": count,
        "seed": seed,
        "region_radius": region.radius,
        "verified": verified,
        "all_verified": verified == count,
        "levels": dict(sorted(levels.items())),
        "max_combing_radius": max_combing,
        "runs": runs,
    }


def run_reduce_batch(
    count: int,
    seed: int = 0,
    region: ForbiddenRegion | None = None,
    max_factors: int = 4,
) -> dict[str, object]:
    """Run the band-elimination demo on random expressions; merge by index."""
    if region is None:
        region = ForbiddenRegion(X_COMPLEX, (S_IDENTITY,), 1)
    rng = random.Random(seed)
    runs = []
    verified = 0
    total_bands = 0
    for index in range(count):
        factors = random_expression(rng, max_factors=max_factors)
        report = run_reduce_demo(factors, region=region)
        verified += report.verified
        total_bands += report.summary["bands"]
        runs.append(
            {
                "index": index,
                "expression": report.summary["expression"],
                "bands": report.summary["bands"],
                "detour_lengths": report.summary["detour_lengths"],
                "verified": report.verified,
            }
        )
    return {
        "kind": "reduce-batch",
        "count": count,
        "seed": seed,
        "region_radius": region.radius,
        "verified": verified,
        "all_verified": verified == count,
        "total_bands": total_bands,
        "runs": runs,
    }
