"""Acceptance criteria as callable checks, shared by the test suite and ``pgo selftest``."""
from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pgo import quadratic_forms as qf
from pgo import realizations as R
from pgo.catalog import dim_vplus, realized_descriptor, row
from pgo.diagrams import OneType, WeightedSatakeDiagram, descent_classify
from pgo.orbits import (
    chi0_image,
    nonzero_orbit_count,
    open_orbit_count,
    p_open_orbit_count,
    rank_QX,
)
from pgo.padic import ALL_CLASSES, PadicContext, SquareClass, square_class

@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: Dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {mark} ({self.seconds:.2f}s) {self.title}: {self.detail}"


# fixtures

def fixture_params() -> Dict[str, List[Dict[str, int]]]:
    """Parameter choices shipped as diagram fixtures."""
    return {
        "1": [{"n": 2, "delta": 1}, {"n": 3, "delta": 2}],
        "2": [{"n": 3}],
        "3": [{"m": 4}],
        "4": [{"m": 4}],
        "5": [{}],
        "6": [{"n": 4}],
        "7": [{"n": 3}],
        "8": [{"m": 4}, {"m": 5}],
        "9": [{"m": 4}, {"m": 5}],
        "10": [{"m": 4}, {"m": 5}],
        "11": [{"n": 3}, {"n": 4}, {"n": 5}],
        "12": [{"n": 3}, {"n": 4}, {"n": 5}],
        "13": [{}],
    }


def fixture_name(case_id: str, params: Dict[str, int]) -> str:
    """The first parameter choice of a row gets the plain name."""
    if params == fixture_params()[case_id][0]:
        return f"table1_row{case_id}.json"
    suffix = "".join(f"_{k}{v}" for k, v in sorted(params.items()))
    return f"table1_row{case_id}{suffix}.json"


def fixture_payload(case_id: str, params: Dict[str, int]) -> dict:
    r = row(case_id)
    desc = r.descriptor(**params)
    return {
        "provenance": {
            "row": case_id,
            "algebra": r.algebra,
            "params": params,
            "source": r.source,
            "expected": {"rank": desc.rank, "one_type": desc.one_type.label()},
        },
        "diagram": r.diagram(**params).to_json(),
    }


def default_fixture_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "fixtures"


def write_fixtures(directory: Path) -> List[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for case_id, plist in fixture_params().items():
        for params in plist:
            path = directory / fixture_name(case_id, params)
            path.write_text(json.dumps(fixture_payload(case_id, params), indent=2) + "\n")
            paths.append(path)
    return paths


def load_fixtures(directory: Optional[Path] = None) -> List[dict]:
    directory = directory or default_fixture_dir()
    out = []
    for path in sorted(directory.glob("table1_row*.json")):
        out.append(json.loads(path.read_text()) | {"path": str(path)})
    return out


# criteria

def _timed(number: int, title: str, fn: Callable[[], tuple]) -> CriterionResult:
    start = time.perf_counter()
    passed, detail, data = fn()
    return CriterionResult(number, title, passed, detail, time.perf_counter() - start, data)


def criterion_1(ctx: PadicContext, fixture_dir: Optional[Path] = None) -> CriterionResult:
    def run():
        fixtures = load_fixtures(fixture_dir)
        wanted = {("8", 4), ("9", 4), ("10", 4), ("11", 3), ("11", 4), ("11", 5),
                  ("12", 3), ("12", 4), ("12", 5), ("13", None)}
        seen, bad = set(), []
        for fx in fixtures:
            prov = fx["provenance"]
            diagram = WeightedSatakeDiagram.from_json(fx["diagram"])
            rank, one = descent_classify(diagram)
            exp = prov["expected"]
            if (rank, one.label()) != (exp["rank"], exp["one_type"]):
                bad.append(f"row {prov['row']} {prov['params']}: got {rank},{one.label()}")
            size = next(iter(prov["params"].values()), None) if prov["row"] != "13" else None
            seen.add((prov["row"], size))
            if prov["row"] in ("8", "9", "10") and (rank, one) != (2, OneType("A", 1)):
                bad.append(f"row {prov['row']} not rank 2 (A,1)")
            if prov["row"] in ("11", "12") and rank != prov["params"]["n"]:
                bad.append(f"row {prov['row']} rank {rank} != n")
            if prov["row"] == "13" and rank != 3:
                bad.append("row 13 rank != 3")
        missing = sorted(str(w) for w in wanted - seen)
        ok = not bad and not missing and bool(fixtures)
        return ok, f"{len(fixtures)} fixtures" + (f"; {bad}" if bad else "") + (
            f"; missing {missing}" if missing else ""), {}

    return _timed(1, "descent reproduces the tabulated rank and 1-type", run)


def criterion_2(ctx: PadicContext) -> CriterionResult:
    formulas = {
        "sp": lambda n: n * (n + 1) // 2,
        "unitary": lambda n: n * n,
        "gl": lambda n: n * n,
        "type3": lambda k: (k + 1) * (2 * k + 3),
    }

    def run():
        bad, count = [], 0
        for tag, f in formulas.items():
            sizes = range(0, 6) if tag == "type3" else range(1, 7)
            for s in sizes:
                m = R.model(tag, s, ctx)
                values = {dim_vplus(m.descriptor()), f(s), m.dim_by_constraints(), len(m.vplus_basis())}
                count += 1
                if len(values) != 1:
                    bad.append(f"{tag}({s}): {sorted(values)}")
        return not bad, f"{count} models agree" if not bad else str(bad), {}

    return _timed(2, "dim V+ matches the model", run)


def _count_by_rank(classes: Sequence[R.OrbitInvariant]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for c in classes:
        out[c.rank] = out.get(c.rank, 0) + 1
    return out


def _orbit_count_check(tag: str, sizes: Sequence[int], expected: Sequence[int], ctx: PadicContext):
    got, bad = [], []
    for n, want in zip(sizes, expected):
        classes = R.enumerate_orbit_classes(tag, n, ctx)
        got.append(len(classes))
        desc = realized_descriptor(tag, n)
        by_rank = _count_by_rank(classes)
        open_sum = sum(open_orbit_count(realized_descriptor(tag, m)) for m in range(1, n + 1))
        per_rank = all(by_rank.get(m, 0) == open_orbit_count(realized_descriptor(tag, m))
                       for m in range(1, n + 1))
        if not (len(classes) == want == nonzero_orbit_count(desc) == open_sum and per_rank):
            bad.append(f"n={n}: enum {len(classes)}, want {want}, formula "
                       f"{nonzero_orbit_count(desc)}, open-sum {open_sum}, per-rank {per_rank}")
    return not bad, f"counts {got}" + (f"; {bad}" if bad else ""), {"counts": got}


def criterion_3(ctx: PadicContext) -> CriterionResult:
    return _timed(3, "symplectic orbit counts",
                  lambda: _orbit_count_check("sp", range(2, 7), (5, 7, 12, 14, 19), ctx))


def criterion_4(ctx: PadicContext) -> CriterionResult:
    return _timed(4, "unitary orbit counts",
                  lambda: _orbit_count_check("unitary", range(2, 7), (3, 4, 6, 7, 9), ctx))


def criterion_5(ctx: PadicContext) -> CriterionResult:
    """Type III counts read literally: 4(k+1) nonzero classes, 3 / 4 open classes."""

    def run():
        nonzero, opens, bad = [], [], []
        for k in range(4):
            classes = R.enumerate_orbit_classes("type3", k, ctx)
            if k == 0:
                ortho = R.enumerate_orbit_classes("ortho1", 0, ctx)
                if len(ortho) != len(classes):
                    bad.append(f"ortho1 gives {len(ortho)} classes, type3 k=0 gives {len(classes)}")
            n_open = _count_by_rank(classes).get(k + 1, 0)
            nonzero.append(len(classes))
            opens.append(n_open)
            if n_open != (3 if k == 0 else 4):
                bad.append(f"k={k}: {n_open} open classes")
            if len(classes) != 4 * (k + 1):
                bad.append(f"k={k}: {len(classes)} nonzero classes, want {4 * (k + 1)}")
        return not bad, f"nonzero {nonzero}, open {opens}" + (f"; {bad}" if bad else ""), {
            "nonzero": nonzero, "open": opens}

    return _timed(5, "type III orbit counts", run)


def criterion_6(ctx: PadicContext) -> CriterionResult:
    def run():
        bad, got = [], []
        for n in range(1, 7):
            classes = R.enumerate_orbit_classes("gl", n, ctx)
            ranks = sorted(c.rank for c in classes)
            got.append(len(classes))
            if ranks != list(range(1, n + 1)):
                bad.append(f"n={n}: ranks {ranks}")
        return not bad, f"counts {got}" + (f"; {bad}" if bad else ""), {}

    return _timed(6, "GL orbit counts", run)


def criterion_7(ctx: PadicContext) -> CriterionResult:
    def run():
        m = R.model("ortho1", 0, ctx)
        classes = m.enumerate_orbit_classes()
        got = {SquareClass.from_tag(c.payload[0]) for c in classes}
        q = qf.QForm(m.gram_q, 0, ctx)
        represented = set(qf.represented_classes(q))
        excluded = square_class(-1, ctx) * qf.discriminant(q)
        expected = set(ALL_CLASSES) - {excluded}
        ok = len(classes) == 3 and got == represented == expected
        return ok, f"classes {sorted(c.tag for c in got)}, excluded {excluded.tag}", {}

    return _timed(7, "rank-one orthogonal open classes", run)


def criterion_8(ctx: PadicContext, seed: int = 0) -> CriterionResult:
    def run():
        rng = random.Random(seed)
        bad, counts = [], {"sp": 0, "type3": 0}
        plan = [("sp", n, 20) for n in range(1, 7)] + [("type3", k, 34) for k in range(3)]
        for tag, size, reps in plan:
            m = R.model(tag, size, ctx)
            for _ in range(reps):
                x = m.random_generic(rng)
                d0 = m.delta(0, x)
                y = m.psi(x)
                if m.nabla(0, y) * d0 != 1:
                    bad.append(f"{tag}({size}) j=0")
                for j in range(1, m.k + 1):
                    if m.nabla(j, y) * d0 != m.delta(m.k + 1 - j, x):
                        bad.append(f"{tag}({size}) j={j}")
                counts[tag] += 1
        ok = not bad and min(counts.values()) >= 100
        return ok, f"samples {counts}" + (f"; failures {bad[:5]}" if bad else ""), {}

    return _timed(8, "nabla(psi X) Delta_0(X) identity", run)


def criterion_9(ctx: PadicContext) -> CriterionResult:
    def run():
        bad, checked = [], 0
        reps = [ctx.rep(c) for c in ALL_CLASSES]
        for tag in ("sp", "unitary", "gl", "type3"):
            for k in range(3):
                m = R.model(tag, k if tag == "type3" else k + 1, ctx)
                base = m.identity_element()
                for xs in itertools.product(reps, repeat=k + 1):
                    # xs[s] is the coefficient of X_s
                    x = m.diagonal_element([m.slot_unit(v) for v in xs])
                    for j in range(k + 1):
                        scale = Fraction(1)
                        for s in range(j, k + 1):
                            scale *= xs[s] ** m.kappa
                        checked += 1
                        if m.delta(j, x) != scale * m.delta(j, base):
                            bad.append(f"{tag} k={k} xs={xs} j={j}")
        return not bad, f"{checked} identities" + (f"; {bad[:3]}" if bad else ""), {}

    return _timed(9, "Delta_j homogeneity on diagonal elements", run)


def criterion_10(ctx: PadicContext) -> CriterionResult:
    def run():
        bad, checked = [], 0
        for tag, sizes in (("sp", range(1, 6)), ("type3", range(3))):
            for s in sizes:
                m = R.model(tag, s, ctx)
                d = m.descriptor()
                for vals in itertools.product(m.slot_grid(), repeat=m.k + 1):
                    x = m.diagonal_element(vals)
                    rank_m = m.orbit_invariants(x).rank
                    got = m.q_form_QX(x).rank
                    checked += 1
                    if got != rank_QX(rank_m, d.ell, d.d if rank_m > 1 else None):
                        bad.append(f"{tag}({s}) {vals}: rank {got}")
        return not bad, f"{checked} diagonal elements" + (f"; {bad[:3]}" if bad else ""), {}

    return _timed(10, "rank of Q_X", run)


def criterion_11(ctx: PadicContext) -> CriterionResult:
    def run():
        counts = {r: len(qf.anisotropic_classes(r, ctx)) for r in range(1, 6)}
        binaries = [qf.QForm.from_classes(c, ctx) for c in qf.anisotropic_classes(2, ctx)]
        sim2 = len({qf.similarity_class_id(q) for q in binaries})
        represented = sorted({len(qf.represented_classes(q)) for q in binaries})
        all5 = [qf.QForm.from_classes(c, ctx)
                for c in itertools.combinations_with_replacement(ALL_CLASSES, 5)]
        rank5 = all(qf.is_isotropic(q) for q in all5)
        ok = (counts[4], counts[3], counts[2], sim2, represented, rank5, counts[5]) == (1, 4, 6, 3, [2], True, 0)
        data = {"aniso": counts, "sim2": sim2, "represented": represented, "rank5": rank5}
        return ok, json.dumps(data), data

    return _timed(11, "quadratic form suite", run)


def criterion_12(ctx: PadicContext, seed: int = 0) -> CriterionResult:
    expected = {
        "gl": lambda k: 1,
        "sp": lambda k: 4 ** k,
        "unitary": lambda k: 2 ** k,
        "type3": lambda k: 3 ** (k + 1),
    }

    def run():
        rng = random.Random(seed)
        bad, got = [], {}
        for tag, f in expected.items():
            got[tag] = []
            for k in range(4):
                m = R.model(tag, k if tag == "type3" else k + 1, ctx)
                n_classes = len(m.enumerate_p_orbit_classes())
                got[tag].append(n_classes)
                if not n_classes == f(k) == p_open_orbit_count(m.descriptor()):
                    bad.append(f"{tag} k={k}: {n_classes}")
            for i in range(200):
                k = 1 + i % 3
                m = R.model(tag, k if tag == "type3" else k + 1, ctx)
                x = m.random_generic(rng, all_minors=True)
                nx = m.act(m.random_unipotent(rng), x)
                if any(m.delta(j, nx) != m.delta(j, x) for j in range(k + 1)):
                    bad.append(f"{tag}: Delta not N-invariant")
                if m.p_orbit_class(nx) != m.p_orbit_class(x):
                    bad.append(f"{tag}: P-orbit class moved under N")
        return not bad, f"classes {got}" + (f"; {bad[:3]}" if bad else ""), {"classes": got}

    return _timed(12, "open P-orbit counts and N-invariance", run)


def criterion_13(ctx: PadicContext, seed: int = 0) -> CriterionResult:
    def run():
        rng = random.Random(seed)
        bad, seen = [], {}
        plan = {"gl": (1, 2, 3), "sp": (1, 2, 3), "unitary": (1, 2, 3), "type3": (0, 1), "ortho1": (0,)}
        for tag, sizes in plan.items():
            images = set()
            for i in range(500):
                m = R.model(tag, sizes[i % len(sizes)], ctx)
                if tag == "ortho1":
                    x = m.vector((1, 1, 1))
                else:
                    x = m.identity_element()
                g = m.random_group(rng, length=m.size + 1)
                ratio = m.delta(0, m.act(g, x)) / m.delta(0, x)
                images.add((m.size, square_class(ratio, ctx).tag))
                if not m.chi0_member(ratio):
                    bad.append(f"{tag}: {ratio} outside {chi0_image(m.descriptor())}")
            seen[tag] = len(images)
        return not bad, f"distinct (size, class) pairs {seen}" + (f"; {bad[:3]}" if bad else ""), {}

    return _timed(13, "chi_0 image sampling", run)


def criterion_14(base: PadicContext, other: PadicContext) -> CriterionResult:
    def run():
        lines, same = [], True
        for fn in (criterion_3, criterion_4, criterion_5, criterion_11, criterion_12):
            a, b = fn(base), fn(other)
            agree = (a.passed, a.data) == (b.passed, b.data)
            same &= agree
            lines.append(f"{a.number}:{'same' if agree else 'differs'}"
                         f"({'pass' if a.passed else 'fail'}/{'pass' if b.passed else 'fail'})")
        return same, f"p={base.p} vs p={other.p}: " + ", ".join(lines), {}

    return _timed(14, "prime independence", run)


TITLES = {
    1: "descent", 2: "dimension", 3: "sp counts", 4: "unitary counts", 5: "type III counts",
    6: "GL counts", 7: "ortho1", 8: "psi identity", 9: "homogeneity", 10: "Q_X rank",
    11: "quadratic forms", 12: "P-orbits", 13: "chi_0", 14: "prime independence",
}


def run_criterion(number: int, ctx: PadicContext, seed: int = 0,
                  other_prime: int = 13, fixture_dir: Optional[Path] = None) -> CriterionResult:
    if number == 1:
        return criterion_1(ctx, fixture_dir)
    if number in (8, 12, 13):
        return {8: criterion_8, 12: criterion_12, 13: criterion_13}[number](ctx, seed)
    if number == 14:
        return criterion_14(ctx, PadicContext(other_prime))
    fns = {2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
           7: criterion_7, 9: criterion_9, 10: criterion_10, 11: criterion_11}
    return fns[number](ctx)


def run_all(ctx: PadicContext, seed: int = 0, only: Optional[Sequence[int]] = None,
            fixture_dir: Optional[Path] = None) -> List[CriterionResult]:
    numbers = only or sorted(TITLES)
    return [run_criterion(n, ctx, seed, fixture_dir=fixture_dir) for n in numbers]
