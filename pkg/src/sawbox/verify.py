"""Self-check suites: oracle values, engine agreement, counting inequalities, moves.

``quick`` covers boxes up to side 2, ``full`` the inequalities and moves up to
side 3 and engine agreement up to side 4.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from . import oracle, transfer
from .lattice import Box, SpanVariant, WalkClass, classify
from .moves import antecedents, extend_spanning_walk, push_to_sides

TABLE1_HEAD = (12, 322, 14248, 1530196)
TABLE2_HEAD = (8, 176, 9172, 1151156)
WCAS_HEAD = (2, 12, 184, 8512)

LEVELS = {
    "quick": {"oracle": 2, "engines": 2, "chain": (2,), "moves": 2},
    "full": {"oracle": 4, "engines": 4, "chain": (2, 3), "moves": 3},
}


@dataclass
class ClaimResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _run(name: str, fn: Callable[[], tuple[bool, str]]) -> ClaimResult:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed claim, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ClaimResult(name, ok, detail, time.perf_counter() - t)


def check_oracle(L: int):
    got_a = [oracle.oracle_count(WalkClass.ANYWHERE, Box.square(k)) for k in range(1, L + 1)]
    got_d = [oracle.oracle_count(WalkClass.EXACT_BBOX, Box.square(k)) for k in range(1, L + 1)]
    got_r = [oracle.oracle_count(WalkClass.OPPOSITE_CORNERS, Box.square(k)) for k in range(1, L + 1)]
    ok = got_a == list(TABLE1_HEAD[:L]) and got_d == list(TABLE2_HEAD[:L]) and got_r == list(WCAS_HEAD[:L])
    return ok, f"A={got_a} Ahat={got_d} R={got_r}"


def check_engines(L: int, corrupt: bool = False):
    N_or, A_or = oracle.oracle_rect_counts(L)
    table = transfer.build_rect_table(L)
    if corrupt:
        table.a_exact[(1, 1)] += 1
    bad = []
    for l in range(L + 1):
        for h in range(l + 1):
            if table.inbox(h, l) != N_or[(h, l)]:
                bad.append(f"N[{h},{l}]")
            if table.exact(h, l) != A_or[(h, l)]:
                bad.append(f"Ahat[{h},{l}]")
            if transfer.reconstruct_inbox(table, h, l) != table.inbox(h, l):
                bad.append(f"reconstruction[{h},{l}]")
    return not bad, f"h <= l <= {L}" + (f"; mismatches: {', '.join(bad)}" if bad else "; all entries agree")


def check_combination(L: int):
    table = transfer.build_rect_table(L)
    got = [transfer.assemble_A(k, table) for k in range(1, L + 1)]
    return got == list(TABLE1_HEAD[:L]), f"assembled A={got}"


def chain_values(L: int, span: SpanVariant):
    t = oracle.oracle_class_table(L, span)
    ms, mhat = oracle.oracle_spanning_counts(L, span)
    return {
        "R": t[(WalkClass.OPPOSITE_CORNERS, L, L)],
        "S": t[(WalkClass.OPPOSITE_SIDES, L, L)],
        "M": t[(WalkClass.SPAN_SQUARE, L, L)],
        "Mhat": mhat,
        "A": t[(WalkClass.ANYWHERE, L, L)],
    }


def check_chain(L: int, span: SpanVariant):
    v = chain_values(L, span)
    ok = v["R"] <= v["S"] <= v["M"] <= v["Mhat"] <= v["A"] <= (L + 1) ** 2 * v["Mhat"]
    ok = ok and 2 * v["M"] <= (L + 1) * 3 ** (L + 1) * v["S"]
    return ok, f"L={L} {span.value}: " + " <= ".join(f"{k}={x}" for k, x in v.items())


def spanning_walks(L: int) -> list:
    box = Box.square(L)
    return [w for w in oracle.iter_walks(box) if classify(w, box, WalkClass.SPAN_SQUARE, SpanVariant.MAX_SIDE)]


def check_extension(ell: int):
    images = set()
    ws = spanning_walks(ell)
    big = Box.square(ell + 1)
    for w in ws:
        img = extend_spanning_walk(w, ell)
        if not classify(img, big, WalkClass.SPAN_SQUARE, SpanVariant.MAX_SIDE):
            return False, f"image of {w} does not span side {ell + 1}"
        images.add(img)
    return len(images) == len(ws), f"{len(ws)} walks of side {ell}, {len(images)} distinct images"


def check_push(L: int):
    box = Box.square(L)
    ws = spanning_walks(L)
    longest = 0
    for w in ws:
        out, trace = push_to_sides(w, box)
        if not classify(out, box, WalkClass.OPPOSITE_SIDES):
            return False, f"{w} maps to {out}, which is not opposite-sides"
        if len(trace) > L:
            return False, f"{w} needed {len(trace)} moves"
        longest = max(longest, len(trace))
    return True, f"{len(ws)} spanning walks land on opposite sides, at most {longest} moves"


def check_antecedents(L: int):
    box = Box.square(L)
    worst = 0
    for w in oracle.iter_walks(box):
        for e in set(w.endpoints):
            worst = max(worst, len(antecedents(w, e, box)))
    return worst <= 3, f"largest antecedent set at side {L}: {worst}"


def run_suite(level: str = "quick", corrupt: bool = False) -> list[ClaimResult]:
    cfg = LEVELS[level]
    out = [
        _run("oracle values", lambda: check_oracle(cfg["oracle"])),
        _run("engine equivalence", lambda: check_engines(cfg["engines"], corrupt)),
        _run("combination formula", lambda: check_combination(2)),
    ]
    for L in cfg["chain"]:
        for span in SpanVariant:
            out.append(_run(f"inequality chain L={L} ({span.value})", lambda L=L, span=span: check_chain(L, span)))
    for ell in range(1, cfg["moves"]):
        out.append(_run(f"extension injective on side {ell}", lambda ell=ell: check_extension(ell)))
    for L in range(1, cfg["moves"] + 1):
        out.append(_run(f"push to sides L={L}", lambda L=L: check_push(L)))
        out.append(_run(f"antecedents L={L}", lambda L=L: check_antecedents(L)))
    return out
