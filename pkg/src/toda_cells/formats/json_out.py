import json
from typing import Any

from pydantic import BaseModel

from toda_cells.models import HomologyReport

COMPACT = (",", ":")


def dumps(payload: Any) -> str:
    """Compact JSON with sorted keys."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    elif isinstance(payload, list):
        payload = [p.model_dump() if isinstance(p, BaseModel) else p for p in payload]
    return json.dumps(payload, separators=COMPACT, sort_keys=True, ensure_ascii=False) + "\n"


def homology_json(report: HomologyReport) -> str:
    """{"H": [...]} for homology, {"Hc": [...]} for cohomology, degree ascending."""
    key = "H" if report.kind == "homology" else "Hc"
    return dumps({key: [g.model_dump() for g in report.groups]})
