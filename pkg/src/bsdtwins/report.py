"""Assemble and compare the BSD data of a 2-isogenous pair and its quadratic twists."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .arith import factor, is_squarefree
from .descent import DescentResult, descend
from .errors import NotIsogenous, NotSquarefree
from .isogeny import TwoIsogeny, is_balanced, two_isogeny, twist_isogeny
from .localdata import GlobalData, global_data
from .model import WeierstrassModel, is_isomorphic, to_ab_forms
from .period import DEFAULT_DIGITS, period_equality_check, real_period
from .torsion import MordellWeilGroup, torsion_subgroup

EQUAL = "EQUAL"
NOT_EQUAL = "NOT-EQUAL"
CONDITIONAL = "CONDITIONAL"

SHA_TRANSFER = "transfer, unconditional for the group isomorphism, finiteness not asserted"
PARITY_NOTE = "even, by Monsky via Sha[2]=0 and rank 0"

PERIOD_DIGITS_SHOWN = 40


@dataclass(frozen=True)
class Entry:
    """One row of the comparison. Values are JSON-native so reports round-trip."""

    name: str
    first: object
    second: object
    verdict: str  # equal | not-equal | unknown
    provenance: str = ""


@dataclass(frozen=True)
class BsdReport:
    D: int
    curves: tuple  # ainvs of the twisted (A,B)-models
    ab: tuple  # ((A1,B1), (A2,B2)) after twisting
    balanced: bool
    entries: tuple  # of Entry, fixed order
    selmer: dict = field(default_factory=dict)
    non_isomorphic: bool = True
    parity: str = "unknown"
    overall: str = CONDITIONAL

    def entry(self, name: str) -> Entry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BsdReport":
        data = dict(data)
        data["curves"] = tuple(tuple(c) for c in data["curves"])
        data["ab"] = tuple(tuple(c) for c in data["ab"])
        data["entries"] = tuple(Entry(**e) for e in data["entries"])
        return cls(**data)


# --- pipeline ---------------------------------------------------------------------


def _find_isogeny(E1: WeierstrassModel, E2: WeierstrassModel) -> TwoIsogeny:
    for A, B in to_ab_forms(E1):
        iso = two_isogeny(A, B)
        if is_isomorphic(iso.codomain_model, E2):
            return iso
    raise NotIsogenous("no 2-isogeny from the first curve lands on the second")


def _jstr(j: Fraction) -> str:
    def fmt(n: int) -> str:
        return "1" if abs(n) == 1 else str(factor(abs(n)))

    sign = "-" if j < 0 else ""
    if j == 0:
        return "0"
    if j.denominator == 1:
        return sign + fmt(j.numerator)
    return f"{sign}{fmt(j.numerator)}/{fmt(j.denominator)}"


def _keyed(d: dict) -> dict:
    return {str(p): v for p, v in sorted(d.items())}


def _cmp(a, b) -> str:
    return "equal" if a == b else "not-equal"


def verify_pair(
    E1: WeierstrassModel,
    E2: WeierstrassModel,
    D: int = 1,
    digits: int = DEFAULT_DIGITS,
    depth_cap: int | None = None,
) -> BsdReport:
    if D == 0 or (D != 1 and not is_squarefree(D)):
        raise NotSquarefree(f"twist parameter {D} is not squarefree")
    iso = twist_isogeny(_find_isogeny(E1, E2), D)
    F1, F2 = iso.domain_model, iso.codomain_model
    g1, g2 = global_data(F1), global_data(F2)
    t1, t2 = torsion_subgroup(F1), torsion_subgroup(F2)
    res = descend(iso, t1, t2, depth_cap)
    v = res.verdict
    rank_proven = v.rank == (0, 0)

    entries = [Entry("L-function", "L(E1,s)", "L(E2,s)", "equal", "equal-by-isogeny")]

    prov = "proven-by-descent" if rank_proven else "unknown"
    mw1 = MordellWeilGroup(0 if rank_proven else None, prov, t1)
    mw2 = MordellWeilGroup(0 if rank_proven else None, prov, t2)
    if rank_proven:
        mw_verdict = _cmp(t1.structure, t2.structure)
    else:
        mw_verdict = "not-equal" if t1.structure != t2.structure else "unknown"
    entries.append(
        Entry(
            "Mordell-Weil",
            {"rank": list(v.rank), "provenance": prov, "torsion": list(t1.structure), "group": str(mw1)},
            {"rank": list(v.rank), "provenance": prov, "torsion": list(t2.structure), "group": str(mw2)},
            mw_verdict,
            "rank 0 by 2-isogeny descent" if rank_proven else "rank interval only",
        )
    )
    if rank_proven:
        entries.append(Entry("regulator", 1, 1, "equal", "rank 0"))
    else:
        entries.append(Entry("regulator", None, None, "unknown", "rank not determined"))

    parity = PARITY_NOTE if rank_proven and v.sha2_trivial else "unknown"
    c1, c2 = g1.tamagawa(), g2.tamagawa()
    p1, p2 = real_period(F1, digits, gd=g1), real_period(F2, digits, gd=g2)
    pverdict = period_equality_check(F1, F2, c1, c2, "even" if parity != "unknown" else "unknown", digits)
    entries.append(
        Entry(
            "real period",
            {"value": p1.display(PERIOD_DIGITS_SHOWN), "u": p1.u},
            {"value": p2.display(PERIOD_DIGITS_SHOWN), "u": p2.u},
            pverdict,
            "Tamagawa agreement and even rank parity, checked numerically to 1e-40",
        )
    )
    entries.append(Entry("Tamagawa numbers", _keyed(c1), _keyed(c2), _cmp(c1, c2), "Tate's algorithm"))

    sha_two = [iv[1] if iv[0] == iv[1] else None for iv in v.sha2_dims]
    two_primary_agree = t1.two_primary() == t2.two_primary()
    if v.sha2_trivial and two_primary_agree:
        sha = Entry("Sha", {"sha2_dim": 0}, {"sha2_dim": 0}, "equal", SHA_TRANSFER)
    else:
        sha = Entry(
            "Sha",
            {"sha2_dim": sha_two[0], "sha2_interval": list(v.sha2_dims[0])},
            {"sha2_dim": sha_two[1], "sha2_interval": list(v.sha2_dims[1])},
            "unknown",
            "2-part not determined" if not v.sha2_trivial else "2-primary torsion differs",
        )
    entries.append(sha)

    entries.append(_kodaira_entry(g1, g2))
    entries.append(
        Entry("minimal discriminant", str(g1.delta_min), str(g2.delta_min), _cmp(g1.delta_min, g2.delta_min), "Ogg")
    )
    entries.append(Entry("conductor", g1.conductor, g2.conductor, _cmp(g1.conductor, g2.conductor), "Ogg"))
    j1, j2 = F1.j, F2.j
    entries.append(Entry("j-invariant", _jstr(j1), _jstr(j2), "equal" if j1 == j2 else "differ", "informational"))

    compared = [e for e in entries if e.name != "j-invariant"]
    if any(e.verdict == "not-equal" for e in compared):
        overall = NOT_EQUAL
    elif all(e.verdict == "equal" for e in compared):
        overall = EQUAL
    else:
        overall = CONDITIONAL

    return BsdReport(
        D=D,
        curves=(F1.ainvs, F2.ainvs),
        ab=(iso.domain, iso.codomain),
        balanced=is_balanced(iso),
        entries=tuple(entries),
        selmer=_selmer_summary(res),
        non_isomorphic=j1 != j2,
        parity=parity,
        overall=overall,
    )


def _kodaira_entry(g1: GlobalData, g2: GlobalData) -> Entry:
    k1 = {p: str(k) for p, k in g1.kodaira().items()}
    k2 = {p: str(k) for p, k in g2.kodaira().items()}
    # with equal conductor exponents, Ogg ties equal component counts to equal v(Delta_min)
    for p in set(g1.bad_primes) & set(g2.bad_primes):
        a, b = g1.local[p], g2.local[p]
        if a.f == b.f:
            assert (a.m == b.m) == (a.v_delta_min == b.v_delta_min)
    return Entry("Kodaira symbols", _keyed(k1), _keyed(k2), _cmp(k1, k2), "Tate's algorithm, Ogg both directions")


def _selmer_summary(res: DescentResult) -> dict:
    v = res.verdict
    return {
        "phi": sorted(res.sel_phi.elements, key=lambda d: (abs(d), d < 0)),
        "phihat": sorted(res.sel_phihat.elements, key=lambda d: (abs(d), d < 0)),
        "sel2_bounds": list(v.sel2_bounds),
        "rank": list(v.rank),
        "sha2": [list(iv) for iv in v.sha2_dims],
        "tamagawa_ratio": str(v.tamagawa_ratio),
    }


# --- rendering ---------------------------------------------------------------------


def render(report: BsdReport, fmt: str = "table") -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), indent=2, sort_keys=True)
    if fmt == "table":
        return _render_table(report)
    if fmt == "markdown":
        return _render_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")


def from_json(text: str) -> BsdReport:
    return BsdReport.from_dict(json.loads(text))


def _cell(value) -> str:
    if isinstance(value, dict):
        if "group" in value:
            return value["group"]
        if "value" in value:
            return f"{value['value'][:14]} (u={value['u']})"
        if "sha2_dim" in value:
            return "Sha[2]=0" if value["sha2_dim"] == 0 else f"dim Sha[2] in {value.get('sha2_interval')}"
        return ", ".join(f"{v}(p={k})" for k, v in value.items())
    return "-" if value is None else str(value)


def _render_table(r: BsdReport) -> str:
    rows = [("invariant", "E1", "E2", "verdict")]
    for e in r.entries:
        if e.name == "Sha" and e.verdict == "equal":
            a = b = "0 (2-part proven), full group equal by transfer"
        else:
            a, b = _cell(e.first), _cell(e.second)
        rows.append((e.name, a, b, e.verdict))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = [f"D = {r.D}   E1 = {list(r.curves[0])}   E2 = {list(r.curves[1])}"]
    for k, row in enumerate(rows):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.append(f"Selmer: phi {r.selmer['phi']}  phihat {r.selmer['phihat']}  tau = {r.selmer['tamagawa_ratio']}")
    lines.append(f"rank parity: {r.parity}")
    if r.non_isomorphic:
        lines.append("curves are not isomorphic (j-invariants differ)")
    lines.append(f"overall: {r.overall}")
    return "\n".join(lines)


_LATEX = {"I0*": "I_0^*", "III*": "III^*", "II*": "II^*", "IV*": "IV^*"}


def _latex_kodaira(sym: str) -> str:
    if sym in _LATEX:
        return _LATEX[sym]
    if sym.startswith("I") and sym[1:].rstrip("*").isdigit():
        n = sym[1:].rstrip("*")
        return f"I_{{{n}}}" + ("^*" if sym.endswith("*") else "")
    return sym


def _split_by_D(values: dict, D: int, fmt) -> tuple[str, str]:
    main = [fmt(v, p) for p, v in values.items() if D % int(p)]
    extra = [fmt(v, p) for p, v in values.items() if D % int(p) == 0]
    return ", ".join(main), ", ".join(extra)


def _render_markdown(r: BsdReport) -> str:
    (A1, B1), (A2, B2) = r.ab
    head = f"| Elliptic curve | y^2 = x^3 + ({A1})x^2 + ({B1})x | y^2 = x^3 + ({A2})x^2 + ({B2})x |"
    lines = [head, "|---|---|---|"]

    def row(label, a, b):
        lines.append(f"| {label} | {a} | {b} |")

    e = r.entry
    row("j-invariant", e("j-invariant").first, e("j-invariant").second)
    g1, g2 = e("minimal discriminant").first, e("minimal discriminant").second
    row("Minimal discriminant", _factored(g1), _factored(g2))
    row("Mordell-Weil group", e("Mordell-Weil").first["group"], e("Mordell-Weil").second["group"])
    row("Regulator", _cell(e("regulator").first), _cell(e("regulator").second))
    row("Real period", e("real period").first["value"][:14], e("real period").second["value"][:14])
    tam = [_split_by_D(e("Tamagawa numbers").first, r.D, lambda v, p: f"{v}(p={p})"),
           _split_by_D(e("Tamagawa numbers").second, r.D, lambda v, p: f"{v}(p={p})")]
    kod = [_split_by_D(e("Kodaira symbols").first, r.D, lambda v, p: f"{_latex_kodaira(v)}(p={p})"),
           _split_by_D(e("Kodaira symbols").second, r.D, lambda v, p: f"{_latex_kodaira(v)}(p={p})")]
    row("Tamagawa number", tam[0][0], tam[1][0])
    if tam[0][1] or tam[1][1]:
        row("", f"‡ {tam[0][1]}", f"‡ {tam[1][1]}")
    row("Kodaira symbol", kod[0][0], kod[1][0])
    if kod[0][1] or kod[1][1]:
        row("", f"‡ {kod[0][1]}", f"‡ {kod[1][1]}")
    sha = e("Sha")
    if sha.verdict == "equal":
        row("Sha[2^inf]", "0", "0")
        row("Sha", "†", "†")
    else:
        row("Sha[2]", _cell(sha.first), _cell(sha.second))
    lines.append("")
    if sha.verdict == "equal":
        lines.append(f"† {SHA_TRANSFER}.")
    if any(t[1] for t in tam + kod):
        lines.append("‡ primes dividing the twist parameter D.")
    lines.append(f"Overall: {r.overall}")
    return "\n".join(lines)


def _factored(n: str) -> str:
    v = int(n)
    s = str(factor(abs(v))).replace("*", "·")
    return ("-" if v < 0 else "") + s
