"""Registry of verifiable claims and the runner that executes them.

Each claim declares the outcomes it expects; a runner returns observed
witnesses and the claim is ``verified`` only when every expected key matches
exactly.  Expensive prerequisites live on a shared :class:`Context` and are
computed at most once per process (optionally snapshotted to disk).
"""
from __future__ import annotations

import pickle
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from . import algebras, lattices, matgroups, sic
from .exact import norm
from .groups import (
    SizeLimitError,
    class_sizes,
    derived_subgroup,
    is_cyclic,
    is_simple,
    isomorphic,
    pair_orbit_size,
    quotient,
    stabilizer,
    subgroup,
    transitivity,
)

STATUSES = ("verified", "identified-by-invariants", "failed", "inconclusive", "finding")
# wall-clock cap on the PSU(3,3) witness search before falling back to invariants
WITNESS_SEARCH_SECONDS = 600


@dataclass
class Claim:
    id: str
    name: str
    description: str
    paper_anchor: str
    expected: dict
    runner: Callable[["Context"], dict]
    finding: bool = False
    headline: tuple[str, ...] = ()


@dataclass
class ClaimReport:
    claim: str
    description: str
    paper_anchor: str
    status: str
    witnesses: dict
    runtime_ms: int = 0

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "description": self.description,
            "paper_anchor": self.paper_anchor,
            "status": self.status,
            "witnesses": self.witnesses,
            "runtime_ms": self.runtime_ms,
        }


class Context:
    """Shared, lazily computed prerequisites for one run."""

    def __init__(self, threads: int = 1, cache_dir: str | Path | None = None):
        self.threads = max(1, threads)
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._memo: dict = {}

    def memo(self, key: str, build: Callable, snapshot: bool = False):
        if key in self._memo:
            return self._memo[key]
        value = None
        path = self.cache_dir / f"{key}-v{__version__}.pkl" if (snapshot and self.cache_dir) else None
        if path is not None and path.exists():
            with path.open("rb") as fh:
                blob = pickle.load(fh)
            if blob.get("version") == __version__:
                value = blob["data"]
        if value is None:
            value = build()
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                with path.open("wb") as fh:
                    pickle.dump({"version": __version__, "data": value}, fh)
        self._memo[key] = value
        return value

    # --- prerequisites

    def hoggar_scan(self) -> tuple[list, list, int]:
        def build():
            st = sic.hoggar_stabilizer(threads=self.threads)
            return st.unitary_matrices, st.antiunitary_matrices, st.candidates_scanned
        return self.memo("hoggar_scan", build, snapshot=True)

    def hoggar_stab(self) -> sic.HoggarStabilizer:
        def build():
            unitary, anti, scanned = self.hoggar_scan()
            to_perm = lambda c: bytes(matgroups.apply_cols(c, v) for v in range(64))
            from .groups import FiniteGroupModel, PermCarrier
            grp = FiniteGroupModel.from_elements([to_perm(c) for c in unitary], PermCarrier(64), name="Hoggar stabilizer")
            return sic.HoggarStabilizer(grp, unitary, anti, [to_perm(c) for c in anti], scanned)
        return self.memo("hoggar_stab", build)

    def hoggar_full(self):
        return self.memo("hoggar_full", lambda: sic.hoggar_full_symmetry(self.hoggar_stab()))

    def psu33(self):
        return self.memo("psu33", matgroups.build_psu33_parts)

    def sl23(self):
        return self.memo("sl23", matgroups.build_sl23)

    def hesse_sym(self) -> sic.HesseSymmetries:
        return self.memo("hesse_sym", sic.hesse_symmetries)

    def units(self) -> algebras.UnitLoop:
        return self.memo("cayley_units", algebras.cayley_units)

    def aut_search(self) -> algebras.AutomorphismSearch:
        return self.memo("aut_search", lambda: algebras.cayley_automorphisms_search(self.units(), threads=self.threads),
                         snapshot=True)

    def aut_group(self):
        return self.memo("aut_group", lambda: algebras.cayley_automorphisms(self.aut_search()))

    def aut_derived(self):
        return self.memo("aut_derived", lambda: derived_subgroup(self.aut_group()))

    def hurwitz(self):
        return self.memo("hurwitz", algebras.hurwitz_units)

    def eisenstein(self):
        return self.memo("eisenstein", algebras.eisenstein_units)

    def qubit_stab(self):
        return self.memo("qubit_stab", sic.qubit_stabilizer)


# ----------------------------------------------------------------------------
# helpers


def _iso_witness(result) -> dict:
    def enc(x):
        if isinstance(x, bytes):
            return list(x)
        if isinstance(x, tuple):
            return [enc(y) for y in x]
        if isinstance(x, Fraction):
            return str(x)
        if hasattr(x, "coords"):
            return [str(c) for c in x.coords]
        if hasattr(x, "a") and hasattr(x, "b"):
            return [str(x.a), str(x.b)]
        return str(x)
    return {
        "status": result.status,
        "generators": [enc(g) for g in result.generators],
        "images": [enc(h) for h in result.images],
        "candidates_tried": result.candidates_tried,
    }


def _frac(x) -> str:
    return str(Fraction(x))


# ----------------------------------------------------------------------------
# runners


def run_c1(ctx: Context) -> dict:
    s = sic.hesse_system()
    chk = sic.check_sic(s)
    g = s.gram()
    n = len(s.labels)
    # (d+1)|<j|k>|^2 = norm_sq^2 off the diagonal, over all ordered pairs
    ordered_ok = all((s.d + 1) * norm(g[j][k]) == (s.norm_sq ** 2 if j != k else (s.d + 1) * s.norm_sq ** 2)
                     for j in range(n) for k in range(n))
    return {
        "ordered_identities_checked": n * n,
        "ordered_identities_hold": ordered_ok,
        "d": s.d,
        "vectors": len(s.labels),
        "sic": chk.ok,
        "norm_sq": _frac(s.norm_sq),
        "cross_overlap_sq": sorted(_frac(x) for x in chk.overlap_values),
        "unordered_pairs_checked": chk.pairs_checked,
        "fiducial": [repr(c) for c in s.vector(0)],
    }


def run_c2(ctx: Context) -> dict:
    s = sic.hoggar_system()
    chk = sic.check_sic(s)
    return {
        "d": s.d,
        "vectors": len(s.labels),
        "sic": chk.ok,
        "norm_sq": _frac(s.norm_sq),
        "cross_overlap_sq": sorted(_frac(x) for x in chk.overlap_values),
        "unordered_pairs_checked": chk.pairs_checked,
    }


def run_c3(ctx: Context) -> dict:
    rot = sic.bloch_symmetries()
    stab = stabilizer(rot, 0)
    refl = sic.qubit_stabilizer(admit_reflections=True)
    return {
        "rotation_group_order": rot.order,
        "rotation_transitivity": transitivity(rot),
        "stabilizer_order": stab.order,
        "stabilizer_cyclic": is_cyclic(stab),
        "stabilizer_with_reflections_order": refl.order,
    }


def run_c4(ctx: Context) -> dict:
    E = ctx.eisenstein()
    pm1 = subgroup(E, [-E.identity], name="{+-1}")
    Q = quotient(E, pm1)
    iso = isomorphic(Q, ctx.qubit_stab())
    return {
        "units": E.order,
        "unit_set": sorted([[str(z.a), str(z.b)] for z in E.elements]),
        "cyclic": is_cyclic(E),
        "quotient_order": Q.order,
        "quotient_cyclic": is_cyclic(Q),
        "quotient_vs_qubit_stabilizer": iso.status,
        "witness": _iso_witness(iso),
    }


def run_c5(ctx: Context) -> dict:
    Hu = ctx.hurwitz()
    closed = all(Hu.mul(a, b) in Hu for a in Hu for b in Hu)
    iso = isomorphic(Hu, ctx.sl23())
    return {
        "units": Hu.order,
        "closed": closed,
        "vs_SL23": iso.status,
        "witness": _iso_witness(iso),
    }


def run_c6(ctx: Context) -> dict:
    hs = ctx.hesse_sym()
    iso_sl = isomorphic(hs.stabilizer0, ctx.sl23())
    iso_hu = isomorphic(hs.stabilizer0, ctx.hurwitz())
    return {
        "symmetry_group_order": hs.full_group.order,
        "transitivity": transitivity(hs.full_group),
        "pair_orbit": pair_orbit_size(hs.full_group),
        "stabilizer_order": hs.stabilizer0.order,
        "stabilizer_vs_SL23": iso_sl.status,
        "stabilizer_vs_hurwitz_units": iso_hu.status,
        "antiunitary_count": len(hs.antiunitary),
        "witness": _iso_witness(iso_sl),
    }


def run_c7(ctx: Context) -> dict:
    ring = algebras.cayley_ring()
    loop = ctx.units()
    witness = algebras.associativity_witness(loop)
    u, v, w = (loop.elements[k] for k in witness)
    return {
        "closure_gate_pairs_checked": len(ring.basis2) ** 2,
        "closure_gate_failures": len(ring.closure_failures()),
        "rejected_candidates": [list(r) if r else "unswapped" for r in ring.rejected],
        "accepted_swap": list(ring.swap) if ring.swap else "unswapped",
        "units": len(loop),
        "loop_closed": loop.is_closed(),
        "moufang_exhaustive_violations": algebras.moufang_exhaustive(loop, threads=ctx.threads),
        "moufang_triples_checked": len(loop) ** 3,
        "moufang_sampled_violations": algebras.moufang_sampled(loop),
        "associativity_failure": [[str(c) for c in x.coords] for x in (u, v, w)],
        "associativity_failure_exact": (u * v) * w != u * (v * w),
    }


def run_c8(ctx: Context) -> dict:
    search = ctx.aut_search()
    A = ctx.aut_group()
    return {
        "order": A.order,
        "distinct_permutations": len(set(search.perms)),
        "candidate_triples": search.candidates,
        "source_triple": [[str(c) for c in ctx.units().elements[k].coords] for k in search.source],
    }


def run_c9(ctx: Context) -> dict:
    A = ctx.aut_group()
    D = ctx.aut_derived()
    psu = ctx.psu33()[3]
    iso = isomorphic(D, psu)
    invol = next((g for g in A.elements if g not in D and A.element_order(g) == 2), None)
    out = {
        "order": A.order,
        "derived_order": D.order,
        "derived_simple": is_simple(D),
        "derived_vs_PSU33": iso.status,
        "involution_outside_derived": invol is not None,
        "witness": _iso_witness(iso),
    }
    if invol is not None:
        m = algebras.automorphism_matrix(ctx.units(), invol)
        out["involution_matrix"] = [[str(x) for x in row] for row in m]
    return out


def run_c10(ctx: Context) -> dict:
    st = ctx.hoggar_stab()
    gu, z, pgu, psu = ctx.psu33()
    G = st.unitary_stab
    iso = isomorphic(G, psu, deadline=time.monotonic() + WITNESS_SEARCH_SECONDS)
    out = {
        "candidates_scanned": st.candidates_scanned,
        "unitary_stabilizer_order": G.order,
        "antiunitary_count": st.antiunitary_coset_size,
        "extended_order": G.order + st.antiunitary_coset_size,
        "fixes_label_0": all(g[0] == 0 for g in G.elements),
        "simple": is_simple(G),
        "GU33_order": gu.order,
        "GU33_center_order": z.order,
        "PSU33_order": pgu.order,
        "vs_PSU33": iso.status,
        "witness": _iso_witness(iso),
    }
    if iso.status == "inconclusive":
        out["class_sizes_match"] = class_sizes(G) == class_sizes(psu)
        if G.order == 6048 and out["simple"] and out["class_sizes_match"]:
            out["_status"] = "identified-by-invariants"
    return out


def run_c11(ctx: Context) -> dict:
    rot = sic.bloch_symmetries()
    hs = ctx.hesse_sym()
    full = ctx.hoggar_full()
    return {
        "qubit": {"order": rot.order, "transitivity": transitivity(rot), "pair_orbit": pair_orbit_size(rot)},
        "hesse": {"order": hs.full_group.order, "transitivity": transitivity(hs.full_group),
                  "pair_orbit": pair_orbit_size(hs.full_group)},
        "hoggar": {"order": full.order, "transitivity": transitivity(full), "pair_orbit": pair_orbit_size(full),
                   "point_stabilizer_order": sum(1 for g in full.elements if g[0] == 0)},
    }


def run_c12(ctx: Context) -> dict:
    out = {}
    for name, elements in (("eisenstein", ctx.eisenstein().elements),
                           ("hurwitz", ctx.hurwitz().elements),
                           ("cayley", ctx.units().elements)):
        ident = lattices.identify_root_system(lattices.family_from_elements(elements))
        ev = {k: v for k, v in ident.evidence.items() if k != "ip_profile"}
        ev["ip_multiset"] = {str(k): v for k, v in ev.get("ip_multiset", {}).items()}
        out[name] = {"label": ident.label, **ev}
    return {
        "labels": [out["eisenstein"]["label"], out["hurwitz"]["label"], out["cayley"]["label"]],
        "e8_determinant": out["cayley"].get("determinant"),
        "families": out,
    }


def run_c13(ctx: Context) -> dict:
    return {
        "hesse": sic.twin_check(sic.hesse_system()),
        "hoggar": sic.twin_check(sic.hoggar_system()),
        "qubit_bloch": sic.twin_check_bloch(sic.qubit_model()),
    }


def run_c14(ctx: Context) -> dict:
    st = ctx.hoggar_stab()
    ext = st.extended_group()
    iso = isomorphic(ext, ctx.aut_group())
    return {
        "extended_stabilizer_order": ext.order,
        "G2Z_order": ctx.aut_group().order,
        "isomorphism": iso.status,
        "witness": _iso_witness(iso),
    }


def registry() -> list[Claim]:
    C = Claim
    return [
        C("C1", "hesse-is-sic", "Hesse fiducial orbit under the qutrit Weyl-Heisenberg group is a SIC",
          "SIC overlap condition; qutrit shift/phase orbit of fiducial (0, 1, -1)",
          {"sic": True, "vectors": 9, "norm_sq": "2", "cross_overlap_sq": ["1"], "ordered_identities_checked": 81,
           "ordered_identities_hold": True}, run_c1,
          headline=("norm_sq", "cross_overlap_sq")),
        C("C2", "hoggar-is-sic", "Hoggar fiducial orbit under three-qubit Pauli group is a SIC",
          "SIC overlap condition; three-qubit Pauli orbit of fiducial (-1+2i, 1, ..., 1)",
          {"sic": True, "vectors": 64, "norm_sq": "12", "cross_overlap_sq": ["16"], "unordered_pairs_checked": 2016},
          run_c2, headline=("norm_sq", "cross_overlap_sq", "unordered_pairs_checked")),
        C("C3", "qubit-stabilizer-Z3", "Rotations fixing one vertex of the qubit SIC tetrahedron form Z3",
          "qubit SIC = Bloch tetrahedron; vertex stabilizer isomorphic to Z3",
          {"rotation_group_order": 12, "rotation_transitivity": "doubly_transitive", "stabilizer_order": 3,
           "stabilizer_cyclic": True}, run_c3, headline=("rotation_group_order", "stabilizer_order")),
        C("C4", "eisenstein-units-Z6-mod-pm1-Z3", "Eisenstein units are {+-1, +-w, +-w^2}; modulo +-1 they give Z3",
          "Eisenstein unit group {+-1, +-w, +-w^2}; quotient by {+-1}",
          {"units": 6, "cyclic": True, "quotient_order": 3, "quotient_cyclic": True,
           "quotient_vs_qubit_stabilizer": "isomorphic"}, run_c4, headline=("units", "quotient_order")),
        C("C5", "hurwitz-units-SL23", "Hurwitz units form the binary tetrahedral group, isomorphic to SL(2,3)",
          "Hurwitz unit group = binary tetrahedral group = SL(2,3)",
          {"units": 24, "closed": True, "vs_SL23": "isomorphic"}, run_c5, headline=("units", "vs_SL23")),
        C("C6", "hesse-stabilizer-SL23", "Projector stabilizer of the Hesse SIC is SL(2,3)",
          "Hesse SIC projector stabilizer = SL(2,3) = Hurwitz units",
          {"symmetry_group_order": 216, "transitivity": "doubly_transitive", "pair_orbit": 72,
           "stabilizer_order": 24, "stabilizer_vs_SL23": "isomorphic", "stabilizer_vs_hurwitz_units": "isomorphic"},
          run_c6, headline=("symmetry_group_order", "stabilizer_order", "stabilizer_vs_SL23")),
        C("C7", "cayley-units-240", "Cayley integers: closed order with exactly 240 units forming a Moufang loop",
          "Cayley integers = E8 / sqrt(2); 240 unit-norm elements; non-associative",
          {"closure_gate_pairs_checked": 64, "closure_gate_failures": 0, "units": 240, "loop_closed": True, "moufang_exhaustive_violations": 0,
           "moufang_sampled_violations": {"x(z(yz))=((xz)y)z": 0, "(zx)(yz)=(z(xy))z": 0},
           "associativity_failure_exact": True}, run_c7, headline=("units", "moufang_exhaustive_violations")),
        C("C8", "aut-order-12096", "Automorphism group of the Cayley integers has order 12096",
          "G2(Z) = Aut(Cayley integers), order 12096",
          {"order": 12096, "distinct_permutations": 12096}, run_c8, headline=("order",)),
        C("C9", "aut-structure-PSU33-semidirect-Z2", "G2(Z) is PSU(3,3) extended by an outer involution",
          "G2(Z) = PSU(3,3) : Z2",
          {"order": 12096, "derived_order": 6048, "derived_simple": True, "derived_vs_PSU33": "isomorphic",
           "involution_outside_derived": True}, run_c9, headline=("derived_order", "derived_vs_PSU33")),
        C("C10", "hoggar-stabilizer-PSU33", "Projector stabilizer of the Hoggar SIC is PSU(3,3)",
          "Hoggar SIC projector stabilizer = PSU(3,3)",
          {"candidates_scanned": 1451520, "unitary_stabilizer_order": 6048, "extended_order": 12096,
           "simple": True, "GU33_order": 24192, "GU33_center_order": 4, "PSU33_order": 6048,
           "vs_PSU33": "isomorphic"}, run_c10,
          headline=("unitary_stabilizer_order", "extended_order", "vs_PSU33")),
        C("C11", "double-transitivity", "Symmetry groups of the qubit, Hesse and Hoggar SICs act doubly transitively",
          "doubly transitive SIC symmetry groups",
          {"qubit": {"order": 12, "transitivity": "doubly_transitive", "pair_orbit": 12},
           "hesse": {"order": 216, "transitivity": "doubly_transitive", "pair_orbit": 72},
           "hoggar": {"order": 387072, "transitivity": "doubly_transitive", "pair_orbit": 4032,
                      "point_stabilizer_order": 6048}}, run_c11, headline=()),
        C("C12", "lattice-ADE", "Unit sets are the A2, D4 and E8 root systems",
          "A2 (Eisenstein), D4 (Hurwitz / 24-cell), E8 (Cayley) lattices",
          {"labels": ["A2", "D4", "E8"], "e8_determinant": "1"}, run_c12, headline=("labels",)),
        C("C13", "twin-conjugation", "Hesse SIC is invariant under complex conjugation; Hoggar SIC is not",
          "twin SICs under complex conjugation",
          {"hesse": "self_conjugate", "hoggar": "twinned"}, run_c13, headline=("hesse", "hoggar", "qubit_bloch")),
        C("C14", "extended-hoggar-vs-G2Z", "Extended (unitary + antiunitary) Hoggar stabilizer compared with G2(Z)",
          "extended Hoggar stabilizer of order 12096 versus G2(Z)",
          {}, run_c14, finding=True, headline=("extended_stabilizer_order", "isomorphism")),
    ]


def _matches(expected, observed) -> bool:
    if isinstance(expected, dict):
        return isinstance(observed, dict) and all(k in observed and _matches(v, observed[k]) for k, v in expected.items())
    return expected == observed


def run_claim(claim: Claim, ctx: Context, timings: bool = False) -> tuple[ClaimReport, bool]:
    """Run one claim; the bool flags an internal limit (closure bound / search budget)."""
    start = time.perf_counter()
    limit_hit = False
    try:
        witnesses = claim.runner(ctx)
        override = witnesses.pop("_status", None)
        if claim.finding:
            status = "finding"
        elif override:
            status = override
        elif _matches(claim.expected, witnesses):
            status = "verified"
        elif any(isinstance(v, str) and v == "inconclusive" for v in witnesses.values()):
            status = "inconclusive"
            limit_hit = True
        else:
            status = "failed"
    except SizeLimitError as exc:
        witnesses, status, limit_hit = {"error": str(exc)}, "inconclusive", True
    except Exception as exc:  # noqa: BLE001 - reported as a failed claim
        witnesses, status = {"error": f"{type(exc).__name__}: {exc}"}, "failed"
    ms = int((time.perf_counter() - start) * 1000) if timings else 0
    return ClaimReport(claim.id, claim.description, claim.paper_anchor, status, witnesses, ms), limit_hit


def run(ids: list[str] | None = None, threads: int = 1, cache_dir=None, timings: bool = False) -> tuple[list[ClaimReport], int]:
    """Run the selected claims (all if empty) in id order; returns reports and the exit status."""
    claims = {c.id: c for c in registry()}
    ids = list(ids or claims)
    unknown = [i for i in ids if i not in claims]
    if unknown:
        raise KeyError(", ".join(unknown))
    order = sorted(set(ids), key=lambda i: int(i[1:]))
    ctx = Context(threads=threads, cache_dir=cache_dir)
    reports = []
    exit_status = 0
    for cid in order:
        report, limit_hit = run_claim(claims[cid], ctx, timings)
        reports.append(report)
        if claims[cid].finding:
            continue
        if report.status == "failed":
            exit_status = 1
        elif limit_hit and exit_status == 0:
            exit_status = 3
    return reports, exit_status


def all_verified(reports: list[ClaimReport]) -> bool:
    return all(r.status in ("verified", "identified-by-invariants") for r in reports if r.status != "finding")


def headline(report: ClaimReport) -> str:
    claim = next((c for c in registry() if c.id == report.claim), None)
    keys = claim.headline if claim else ()
    w = report.witnesses
    if not keys:
        if "error" in w:
            return f"error={w['error']}"
        parts = []
        for k, v in w.items():
            if isinstance(v, dict) and "order" in v:
                parts.append(f"{k}:order={v['order']},pair_orbit={v.get('pair_orbit')}")
        return " ".join(parts)
    return " ".join(f"{k}={w.get(k)}" for k in keys)
