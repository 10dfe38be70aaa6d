"""
Published reference values (f, g and the special-family degree sequences),
loaded from data/published_tables.json.
"""
import json
import logging
import os
from functools import lru_cache
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def load_reference_tables() -> dict:
    try:
        base = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
        path = os.path.join(base, "data", "published_tables.json")
        with open(path, "r", encoding="utf-8") as f:
            tables = json.load(f)
        logger.debug("Loaded reference tables from %s", path)
        return tables
    except Exception as ex:
        logger.exception("Failed to load published_tables.json: %s", ex)
        return {"f": {}, "g": {}, "sequences": {}, "polynomials": {}}


def published_value(kind: str, n: int) -> Optional[int]:
    """Published f(n) or g(n), None when the table has no entry"""
    return load_reference_tables().get(kind, {}).get(str(n))


def published_sequences(family: str) -> Dict[int, List[int]]:
    rows = load_reference_tables().get("sequences", {}).get(family, {})
    return {int(n): list(seq) for n, seq in rows.items()}


def published_polynomial(name: str) -> Optional[str]:
    return load_reference_tables().get("polynomials", {}).get(name)
