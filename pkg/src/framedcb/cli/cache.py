"""On-disk persistence of Gram tables (pairing matrix, rank, kernel relations).

Files live under ``<root>/v<CACHE_VERSION>/gram/<datum fingerprint>/``. A load
re-derives the word labels and recomputes one randomly chosen matrix entry;
any disagreement, a version mismatch or an unreadable file is reported as a
``CacheWarning`` and the table is recomputed and rewritten.
"""

from __future__ import annotations

import json
import logging
import os
import random
import tempfile
import warnings
from pathlib import Path
from typing import Sequence

from .. import falg
from ..cartan import CartanDatum
from ..coeff import coeff_from_json, simplify
from ..falg import FreeElement, GramTable

CACHE_VERSION = 1
ENV_VAR = "FRAMEDCB_CACHE_DIR"

log = logging.getLogger(__name__)


class CacheWarning(UserWarning):
    pass


def default_root() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "framedcb"


def _coeff_json(c) -> dict:
    return simplify(c).to_json()


class TableCache:
    def __init__(self, root: "str | Path | None" = None, rng: "random.Random | None" = None,
                 version: int = CACHE_VERSION):
        self.root = Path(root) if root is not None else default_root()
        self.rng = rng or random.Random(0)
        self.version = version
        self.hits = 0
        self.misses = 0
        self.rejected = 0

    # paths -------------------------------------------------------------------

    def _dir(self, datum: CartanDatum) -> Path:
        return self.root / f"v{self.version}" / "gram" / datum.fingerprint()

    def path_for(self, datum: CartanDatum, nu: Sequence[int], raw: bool) -> Path:
        tag = "raw" if raw else "merged"
        return self._dir(datum) / f"{'-'.join(str(x) for x in nu) or 'empty'}.{tag}.json"

    # store -------------------------------------------------------------------

    def store_gram(self, datum: CartanDatum, table: GramTable, raw: bool = True) -> Path:
        payload = {
            "format": "framedcb-gram",
            "cache_version": self.version,
            "fingerprint": datum.fingerprint(),
            "weight": list(table.weight),
            "raw": raw,
            "labels": [[list(letter) for letter in lab] for lab in table.labels],
            "matrix": [[_coeff_json(c) for c in row] for row in table.matrix],
            "rank": table.rank,
            "kernel": [{str(k): _coeff_json(c) for k, c in rel.items()} for rel in table.kernel],
        }
        path = self.path_for(datum, table.weight, raw)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
        return path

    # load --------------------------------------------------------------------

    def _reject(self, path: Path, why: str):
        self.rejected += 1
        msg = f"ignoring cached table {path}: {why}; recomputing"
        log.warning(msg)
        warnings.warn(msg, CacheWarning, stacklevel=3)

    def load_gram(self, datum: CartanDatum, nu: Sequence[int], raw: bool = True) -> "GramTable | None":
        nu = tuple(nu)
        path = self.path_for(datum, nu, raw)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
            if data.get("cache_version") != self.version or data.get("format") != "framedcb-gram":
                self._reject(path, "version mismatch")
                return None
            if data["fingerprint"] != datum.fingerprint() or tuple(data["weight"]) != nu or data["raw"] != raw:
                self._reject(path, "key mismatch")
                return None
            labels = tuple(tuple(tuple(letter) for letter in lab) for lab in data["labels"])
            matrix = tuple(tuple(coeff_from_json(c) for c in row) for row in data["matrix"])
            kernel = tuple({int(k): coeff_from_json(c) for k, c in rel.items()} for rel in data["kernel"])
            rank = int(data["rank"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            self._reject(path, f"unreadable ({exc.__class__.__name__})")
            return None
        if labels != tuple(falg.words_of_weight(datum, nu, raw=raw)):
            self._reject(path, "word labels differ from a fresh enumeration")
            return None
        n = len(labels)
        if len(matrix) != n or any(len(r) != n for r in matrix):
            self._reject(path, "matrix shape")
            return None
        elems = tuple(FreeElement.from_word(datum, lab) for lab in labels)
        if n:
            a, b = self.rng.randrange(n), self.rng.randrange(n)
            fresh = falg.bilinear_form(elems[a], elems[b])
            if simplify(fresh - matrix[a][b]):
                self._reject(path, f"entry ({a},{b}) does not match a recomputation")
                return None
        return GramTable(nu, labels, elems, matrix, rank, kernel)

    # combined ----------------------------------------------------------------

    def gram(self, datum: CartanDatum, nu: Sequence[int], raw: bool = True) -> GramTable:
        """Cached table if valid, else computed (and stored); installed in the datum memo."""
        nu = tuple(nu)
        memo = datum.memo.setdefault("gram", {})
        hit = memo.get((nu, raw))
        if hit is not None:
            return hit
        table = self.load_gram(datum, nu, raw)
        if table is None:
            self.misses += 1
            table = falg.gram(datum, nu, raw=raw)
            try:
                self.store_gram(datum, table, raw)
            except OSError as exc:
                log.warning("could not write cache entry: %s", exc)
        else:
            self.hits += 1
            memo[(nu, raw)] = table
        return table

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "rejected": self.rejected}
