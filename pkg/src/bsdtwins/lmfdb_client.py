"""Curve records keyed by LMFDB label, served from JSON fixtures with an optional live fetch."""

from __future__ import annotations

import json
import os
import re
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath

from .errors import NetworkUnavailable, UnknownLabel
from .localdata import GlobalData, KodairaSymbol, global_data
from .model import WeierstrassModel
from .period import RealPeriod, real_period
from .torsion import TorsionGroup, torsion_subgroup

SCHEMA_VERSION = "lmfdb-ec-api/1"
API_ROOT = "https://www.lmfdb.org/api"
CACHE_ENV = "BSDTWINS_CACHE"
LABEL_RE = re.compile(r"^\d+\.[a-z]+\d+$")


@dataclass(frozen=True)
class CurveRecord:
    label: str
    ainvs: tuple[int, ...]
    conductor: int
    delta_min: int
    torsion: tuple[int, ...]
    tamagawa: dict  # p -> c_p
    kodaira: dict  # p -> KodairaSymbol
    real_period: str
    j: Fraction

    def __post_init__(self):
        WeierstrassModel(*self.ainvs)  # raises on a singular model

    @property
    def model(self) -> WeierstrassModel:
        return WeierstrassModel(*self.ainvs)

    @classmethod
    def from_document(cls, doc: dict) -> "CurveRecord":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported fixture schema {doc.get('schema_version')!r}")
        cd = doc["ec_curvedata"]
        local = sorted(doc["ec_localdata"], key=lambda r: r["prime"])
        return cls(
            label=doc["label"],
            ainvs=tuple(cd["ainvs"]),
            conductor=cd["conductor"],
            delta_min=cd["signD"] * cd["absD"],
            torsion=tuple(cd["torsion_structure"]),
            tamagawa={r["prime"]: r["tamagawa_number"] for r in local},
            kodaira={r["prime"]: KodairaSymbol.from_pari_code(r["kodaira_symbol"]) for r in local},
            real_period=str(doc["ec_mwbsd"]["real_period"]),
            j=Fraction(*cd["jinv"]),
        )

    def to_document(self, source: str = "") -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "source": source,
            "label": self.label,
            "ec_curvedata": {
                "lmfdb_label": self.label,
                "ainvs": list(self.ainvs),
                "conductor": self.conductor,
                "absD": abs(self.delta_min),
                "signD": 1 if self.delta_min > 0 else -1,
                "jinv": [self.j.numerator, self.j.denominator],
                "torsion_structure": list(self.torsion),
                "bad_primes": sorted(self.tamagawa),
            },
            "ec_localdata": [
                {
                    "prime": p,
                    "kodaira_symbol": self.kodaira[p].pari_code(),
                    "tamagawa_number": self.tamagawa[p],
                }
                for p in sorted(self.tamagawa)
            ],
            "ec_mwbsd": {"real_period": self.real_period},
        }


def _check_label(label: str) -> None:
    if not LABEL_RE.match(label):
        raise ValueError(f"malformed LMFDB curve label {label!r}")


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _read_fixture(label: str, cache: Path | None) -> dict | None:
    if cache is not None:
        path = cache / f"{label}.json"
        if path.is_file():
            return json.loads(path.read_text())
    shipped = resources.files("bsdtwins") / "fixtures" / "lmfdb" / f"{label}.json"
    if shipped.is_file():
        return json.loads(shipped.read_text())
    return None


def _api_get(collection: str, label: str, opener) -> list[dict]:
    query = urllib.parse.urlencode({"lmfdb_label": label, "_format": "json"})
    url = f"{API_ROOT}/{collection}/?{query}"
    try:
        with opener(url, timeout=30) as resp:
            payload = json.load(resp)
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise NetworkUnavailable(f"GET {url} failed: {exc}") from exc
    return payload.get("data", [])


def _fetch_online(label: str, opener) -> dict:
    curvedata = _api_get("ec_curvedata", label, opener)
    if not curvedata:
        raise UnknownLabel(label)
    local = _api_get("ec_localdata", label, opener)
    mwbsd = _api_get("ec_mwbsd", label, opener)
    cd = curvedata[0]
    return {
        "schema_version": SCHEMA_VERSION,
        "source": f"{API_ROOT} (live)",
        "label": label,
        "ec_curvedata": {k: cd.get(k) for k in (
            "lmfdb_label", "ainvs", "conductor", "absD", "signD", "jinv", "torsion_structure", "bad_primes"
        )},
        "ec_localdata": [
            {k: r.get(k) for k in ("prime", "ord_cond", "ord_disc", "kodaira_symbol", "tamagawa_number")}
            for r in local
        ],
        "ec_mwbsd": {"real_period": str(mwbsd[0]["real_period"]) if mwbsd else ""},
    }


def fetch(label: str, cache_dir=None, online: bool = False, opener=None) -> CurveRecord:
    """Record for ``label``: cache directory first, then shipped fixtures, then the API if ``online``."""
    _check_label(label)
    cache = _cache_dir(cache_dir)
    doc = _read_fixture(label, cache)
    if doc is None:
        if not online:
            raise NetworkUnavailable(f"{label} is not cached and online fetching is off")
        doc = _fetch_online(label, opener or urllib.request.urlopen)
        if cache is not None:
            cache.mkdir(parents=True, exist_ok=True)
            (cache / f"{label}.json").write_text(json.dumps(doc, indent=2, sort_keys=True))
    return CurveRecord.from_document(doc)


@dataclass(frozen=True)
class ComputedData:
    global_data: GlobalData
    torsion: TorsionGroup
    period: RealPeriod
    j: Fraction


def compute(E: WeierstrassModel) -> ComputedData:
    gd = global_data(E)
    return ComputedData(gd, torsion_subgroup(E), real_period(E, gd=gd), E.j)


def crosscheck(record: CurveRecord, computed: ComputedData) -> list[str]:
    """Invariant-by-invariant comparison; an empty list means full agreement."""
    out = []
    gd = computed.global_data
    if gd.conductor != record.conductor:
        out.append(f"conductor: computed {gd.conductor}, record {record.conductor}")
    if gd.delta_min != record.delta_min:
        out.append(f"minimal discriminant: computed {gd.delta_min}, record {record.delta_min}")
    if computed.j != record.j:
        out.append(f"j-invariant: computed {computed.j}, record {record.j}")
    if sorted(computed.torsion.structure) != sorted(record.torsion):
        out.append(f"torsion: computed {list(computed.torsion.structure)}, record {list(record.torsion)}")
    if gd.tamagawa() != record.tamagawa:
        out.append(f"Tamagawa numbers: computed {gd.tamagawa()}, record {record.tamagawa}")
    kod = gd.kodaira()
    if kod != record.kodaira:
        out.append(
            "Kodaira symbols: computed {}, record {}".format(
                {p: str(k) for p, k in kod.items()}, {p: str(k) for p, k in record.kodaira.items()}
            )
        )
    if record.real_period:
        printed = record.real_period
        decimals = len(printed.split(".")[1]) if "." in printed else 0
        with mpmath.workdps(decimals + 10):
            tol = mpmath.mpf(10) ** -decimals
            if abs(computed.period.value - mpmath.mpf(printed)) > tol:
                out.append(f"real period: computed {computed.period.display(decimals)}, record {printed}")
    return out
