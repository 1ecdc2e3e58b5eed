"""Eigenvalue files (eiscong.hmf.v1), the remote-fetch translation layer and
the on-disk result cache."""
from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import urllib.error
import urllib.parse
import urllib.request
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .congruence import CuspFormData
from .cyclo import CycloNumber, parse_cyclo
from .errors import (
    DuplicatePrime,
    MalformedValue,
    NetworkError,
    SchemaMismatch,
    TranslationError,
)
from .quadfield import QuadField, make_field

HMF_SCHEMA = "eiscong.hmf.v1"
CACHE_SCHEMA = "eiscong.cache.v1"
FIXTURE = "qsqrt2-level25-k2.json"


# -- eigenvalue files ---------------------------------------------------------

def _prime_from_row(F: QuadField, row: dict):
    try:
        a, b = (int(x) for x in row["generator"])
        norm = int(row["norm"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedValue(f"bad prime label {row!r}") from exc
    g = F.element(a, b)
    if not g.is_totally_positive():
        raise MalformedValue(f"generator {g} is not totally positive")
    if g.norm() != norm:
        raise MalformedValue(f"generator {g} has norm {g.norm()}, row says {norm}")
    P = F.principal(g)
    fac = P.factor()
    if len(fac) != 1 or next(iter(fac.values())) != 1:
        raise MalformedValue(f"generator {g} does not generate a prime ideal")
    return P


def eigenvalue_data_from_dict(data: dict) -> CuspFormData:
    if data.get("schema") != HMF_SCHEMA:
        raise SchemaMismatch(f"expected schema {HMF_SCHEMA}, got {data.get('schema')!r}")
    try:
        F = make_field(int(data["field"]["d"]))
        level = F.parse_ideal(data["level"])
        weight = int(data["weight"])
        character = str(data["character"])
        rows = data["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedValue(f"missing or malformed header field: {exc}") from exc
    eig = {}
    for row in rows:
        P = _prime_from_row(F, row["prime"])
        if P in eig:
            raise DuplicatePrime(f"prime {P} listed twice")
        eig[P] = parse_cyclo(str(row["eigenvalue"]))
    bound = int(data.get("bound", max((int(P.norm()) for P in eig), default=0)))
    for P in eig:
        if P.norm() > bound:
            raise MalformedValue(f"prime of norm {P.norm()} above the declared bound {bound}")
    return CuspFormData(F.d, level, weight, character, eig, dict(data.get("provenance", {})), bound)


def parse_eigenvalue_file(path) -> CuspFormData:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedValue(f"{path}: not JSON ({exc})") from exc
    return eigenvalue_data_from_dict(data)


def eigenvalue_data_to_dict(f: CuspFormData) -> dict:
    F = make_field(f.d)
    rows = []
    for P in sorted(f.eigenvalues, key=lambda I: (I.norm(), I.key())):
        g = F.tp_generator(P)
        a, b = g.coords()
        rows.append({"prime": {"norm": int(P.norm()), "generator": [int(a), int(b)]},
                     "eigenvalue": str(f.eigenvalues[P])})
    return {
        "schema": HMF_SCHEMA,
        "field": {"d": f.d},
        "level": str(f.level),
        "weight": f.weight,
        "character": f.character,
        "bound": f.bound,
        "provenance": f.provenance,
        "rows": rows,
    }


def serialize_eigenvalue_data(f: CuspFormData) -> str:
    return json.dumps(eigenvalue_data_to_dict(f), indent=1, sort_keys=True) + "\n"


def fixture_path(name: str = FIXTURE) -> Path:
    return Path(str(resources.files("eiscong") / "data" / name))


def load_fixture(name: str = FIXTURE) -> CuspFormData:
    return parse_eigenvalue_file(fixture_path(name))


# -- remote fetch -------------------------------------------------------------
# Translation from a public HMF database row (LMFDB api conventions):
#   form row:  label, field_label "2.2.<disc>.1", level_ideal "[N,a,alpha]",
#              weight [k,k], hecke_polynomial "x" (rational field only),
#              hecke_eigenvalues list aligned with the field's prime list
#   field row: primes as "[N,a,alpha]" strings in the same order, where
#              the ideal is (a, alpha), alpha a polynomial c + e*w in the
#              integral basis generator w.

_IDEAL_RE = re.compile(r"\[\s*(\d+)\s*,\s*(-?\d+)\s*,\s*([^\]]+)\]")


def _lmfdb_ideal(F: QuadField, text: str):
    """Ideal from a label "[N, a, alpha]": generated by a and alpha = c + e*w."""
    from sympy import Integer, Poly, Symbol, SympifyError, sympify

    m = _IDEAL_RE.fullmatch(text.strip())
    if not m:
        raise TranslationError(f"cannot read ideal label {text!r}")
    N, a = int(m.group(1)), int(m.group(2))
    w = Symbol("w")
    try:
        poly = Poly(sympify(m.group(3), locals={"w": w}), w)
    except (SympifyError, TypeError, ValueError) as exc:
        raise TranslationError(f"cannot read generator in {text!r}") from exc
    coeffs = poly.all_coeffs()[::-1] + [Integer(0)] * 2
    if poly.degree() > 1 or not all(c.is_integer for c in coeffs[:2]):
        raise TranslationError(f"generator in {text!r} is not of the form c + e*w")
    I = F.ideal(F.element(a), F.element(int(coeffs[0]), int(coeffs[1])))
    if I.norm() != N:
        raise TranslationError(f"ideal {text!r} has norm {I.norm()}, label says {N}")
    return I


def _http_get_json(url: str, timeout: float = 20.0) -> dict:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, OSError, TimeoutError) as exc:
        raise NetworkError(f"cannot reach {url}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TranslationError(f"{url} did not return JSON") from exc


def translate_remote(form: dict, field_row: dict, character: str, url: str) -> dict:
    """Turn a database form row plus its field row into an eiscong.hmf.v1 dict."""
    try:
        disc = int(form["field_label"].split(".")[2])
        weights = form["weight"]
        eigen = form["hecke_eigenvalues"]
        poly = str(form.get("hecke_polynomial", "x")).replace(" ", "")
        primes = field_row["primes"]
        level_text = form["level_ideal"]
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise TranslationError(f"unexpected row format: {exc}") from exc
    if poly != "x":
        raise TranslationError("only forms with rational Hecke eigenvalues are translated")
    d = disc // 4 if disc % 4 == 0 else disc
    F = make_field(d)
    if F.disc != disc:
        raise TranslationError(f"field discriminant {disc} not recognised")
    if len(set(map(int, weights))) != 1:
        raise TranslationError("only parallel weight is supported")
    level = _lmfdb_ideal(F, level_text)
    rows = []
    seen = set()
    for lab, val in zip(primes, eigen):
        P = _lmfdb_ideal(F, lab)
        if P in seen:
            continue
        seen.add(P)
        try:
            v = CycloNumber.rational(int(str(val)))
        except ValueError as exc:
            raise TranslationError(f"eigenvalue {val!r} is not an integer") from exc
        g = F.tp_generator(P)
        a, b = g.coords()
        rows.append({"prime": {"norm": int(P.norm()), "generator": [int(a), int(b)]}, "eigenvalue": str(v)})
    return {
        "schema": HMF_SCHEMA,
        "field": {"d": d},
        "level": str(level),
        "weight": int(weights[0]),
        "character": character,
        "bound": max((r["prime"]["norm"] for r in rows), default=0),
        "provenance": {"source": url, "retrieved": datetime.now(timezone.utc).isoformat(timespec="seconds")},
        "rows": rows,
    }


def fetch_remote(label: str, endpoint: str = "https://www.lmfdb.org/api", character: str = "trivial",
                 getter=_http_get_json, cache: "CacheStore | None" = None) -> CuspFormData:
    """Fetch a form by database label, translate, cache, and return it."""
    q = urllib.parse.urlencode({"label": label, "_format": "json"})
    url = f"{endpoint}/hmf_forms/?{q}"
    form_resp = getter(url)
    data = form_resp.get("data") or []
    if not data:
        raise TranslationError(f"no form with label {label!r}")
    form = data[0]
    fq = urllib.parse.urlencode({"label": form.get("field_label", ""), "_format": "json"})
    field_resp = getter(f"{endpoint}/hmf_fields/?{fq}")
    fdata = field_resp.get("data") or []
    if not fdata:
        raise TranslationError(f"no field row for {form.get('field_label')!r}")
    doc = translate_remote(form, fdata[0], character, url)
    f = eigenvalue_data_from_dict(doc)
    (cache or CacheStore()).put(f"hmf:{label}", json.dumps(doc, sort_keys=True))
    return f


# -- cache ----------------------------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("EISCONG_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "eiscong"


class CacheStore:
    """Checksummed JSON entries, one file per key, written by atomic replace."""

    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _path(self, key: str) -> Path:
        h = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.root / h[:2] / f"{h}.json"

    @staticmethod
    def _checksum(payload: str) -> str:
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def put(self, key: str, payload: str) -> Path:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = json.dumps({"schema": CACHE_SCHEMA, "key": key, "sha256": self._checksum(payload), "payload": payload})
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(entry)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def get(self, key: str) -> str | None:
        """The stored payload, or None when absent or corrupt (corrupt entries are removed)."""
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            payload = entry["payload"]
            if entry.get("key") != key or entry.get("sha256") != self._checksum(payload):
                raise ValueError("checksum mismatch")
            return payload
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError):
            try:
                path.unlink()
            except FileNotFoundError:
                pass
            return None

    def get_or_compute(self, key: str, compute) -> str:
        hit = self.get(key)
        if hit is not None:
            return hit
        payload = compute()
        self.put(key, payload)
        return payload

    def keys(self) -> list[str]:
        out = []
        if not self.root.exists():
            return out
        for p in sorted(self.root.glob("*/*.json")):
            try:
                with open(p, encoding="utf-8") as fh:
                    out.append(json.load(fh)["key"])
            except (ValueError, KeyError, OSError):
                continue
        return sorted(out)

    def clear(self) -> int:
        n = 0
        if self.root.exists():
            for p in self.root.glob("*/*.json"):
                p.unlink()
                n += 1
        return n
