"""Worked examples shipped with the CLI.  Each returns a :class:`DemoReport`."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import QUBIT, TOY, multiply, parse_observable
from .circuit import dense_coding_source, parse, run
from .graph import build_graph_state, expected_after_z, measure_z_vertex, parse_edges
from .measurement import NotFound, find_observable_sequence, partition, validate_partition
from .oracle import support_of
from .stabilizer import state


@dataclass
class DemoReport:
    name: str
    lines: list[str] = field(default_factory=list)
    ok: bool = True
    data: dict = field(default_factory=dict)

    def check(self, cond: bool, what: str) -> None:
        self.lines.append(f"{'ok' if cond else 'FAIL'}: {what}")
        self.ok &= bool(cond)


def dense_coding() -> DemoReport:
    rep = DemoReport("dense-coding")
    for b1 in (0, 1):
        for b2 in (0, 1):
            tr = run(parse(dense_coding_source(b1, b2)), trace=True)
            # state once Alice's gates are done, before Bob reads anything
            sent = [r for r in tr.records if r.outcome is None][-1].generators
            xx, zz = tr.outcomes()
            decoded = (int(zz == -1), int(xx == -1))
            rep.data[(b1, b2)] = {"state": sent, "decoded": decoded}
            rep.lines.append(f"message {b1}{b2}: state <{', '.join(sent)}>, reads XX {xx:+d} ZZ {zz:+d}")
            rep.check(decoded == (b1, b2), f"decoded {decoded[0]}{decoded[1]}")
            deterministic = all(r.deterministic for r in tr.records if r.deterministic is not None)
            rep.check(deterministic, "both readings deterministic")
    return rep


MERMIN_PERES_SQUARE = (
    ("XI", "IX", "XX"),
    ("IY", "YI", "YY"),
    ("XY", "YX", "ZZ"),
)


def square_lines(square=MERMIN_PERES_SQUARE):
    for r, row in enumerate(square):
        yield f"row {r + 1}", row
    for c in range(3):
        yield f"column {c + 1}", tuple(square[r][c] for r in range(3))


def line_products(algebra: str, square=MERMIN_PERES_SQUARE) -> dict[str, object]:
    """Product of each row and column, entries multiplied left to right."""
    out = {}
    for name, cells in square_lines(square):
        acc = parse_observable("+II", 2, algebra)
        for cell in cells:
            acc = multiply(acc, parse_observable("+" + cell, 2, algebra))
        out[name] = acc
    return out


def mermin_peres() -> DemoReport:
    rep = DemoReport("mermin-peres")
    negative = {}
    for algebra in (TOY, QUBIT):
        prods = line_products(algebra)
        rep.data[algebra] = {k: str(v) for k, v in prods.items()}
        rep.lines.append(f"{algebra}: " + ", ".join(f"{k} {v}" for k, v in prods.items()))
        rep.check(all(p.is_trivial for p in prods.values()), f"{algebra}: every line multiplies to +-identity")
        negative[algebra] = [k for k, v in prods.items() if v.ipow != 0]
    rep.check(not negative[TOY], "toy: all six lines give +identity (values can be assigned)")
    qneg = negative[QUBIT]
    rep.check(len(qneg) % 2 == 1, f"qubit: an odd number of lines give -identity ({', '.join(qneg)})")
    rep.data["qubit_negative_lines"] = qneg
    return rep


NLWE_BLOCKS = (
    ("+ZII", "+IZI", "+IIX"),
    ("-ZII", "+IXI", "+IIZ"),
    ("+XII", "-IZI", "-IIZ"),
    ("+ZII", "+IZI", "-IIX"),
    ("-ZII", "-IXI", "+IIZ"),
    ("-XII", "-IZI", "-IIZ"),
    ("+ZII", "-IZI", "+IIZ"),
    ("-ZII", "+IZI", "-IIZ"),
)


def nlwe() -> DemoReport:
    rep = DemoReport("nlwe")
    blocks = [state(*b) for b in NLWE_BLOCKS]
    p = partition(*blocks)
    rep.check(len(blocks) == 8, "eight outcome blocks")
    rep.check(validate_partition(p) is None, "blocks are disjoint and cover the ontic space")
    product = all(g.cv.weight == 1 for b in blocks for g in b.gens)
    rep.check(product, "every block is a product state")
    union = set()
    for b in blocks:
        union |= support_of(b).members
    rep.check(len(union) == 64, f"union of supports has {len(union)} of 64 ontic states")
    result = find_observable_sequence(p)
    found = isinstance(result, NotFound)
    rep.check(found, "no sequence of toy observables realises the measurement")
    if found:
        cert = result.certificate
        rep.data["certificate"] = cert
        rep.lines.append(f"certificate: blocks {[i + 1 for i in cert] if cert else None} share no observable")
        rep.check(cert == (0, 1, 2), "first three blocks already have no common observable")
    return rep


def graph_demo(edges: str = "1-2,2-3", measure_z: int = 2, seed: int = 0, n: int | None = None) -> DemoReport:
    """``measure_z`` is 1-based."""
    rep = DemoReport("graph")
    g = parse_edges(edges, n)
    s = build_graph_state(g)
    rep.lines.append("before: " + " ".join(s.generator_strings()))
    value, rest, post = measure_z_vertex(g, s, measure_z - 1, np.random.default_rng(seed))
    rep.lines.append(f"measure Z{measure_z} -> {value:+d}")
    rep.lines.append("after:  " + " ".join(post.generator_strings()))
    rep.check(post == expected_after_z(g, measure_z - 1, value), "posterior is the vertex-deleted graph state")
    rep.data.update(value=value, before=s, after=post)
    return rep


DEMOS = {
    "dense-coding": dense_coding,
    "mermin-peres": mermin_peres,
    "nlwe": nlwe,
    "graph": graph_demo,
}
