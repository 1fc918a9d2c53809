import hashlib
import json

import pandas as pd

REPORT_SCHEMA = "boundaryk.report/1"


def stringify(value):
    """Recursively turn ints into decimal strings; booleans and strings are kept."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [stringify(v) for v in value]
    return str(value)


def element_record(element):
    return [str(x) for x in element.free_coords + element.torsion_coords]


def frame_record(frame: pd.DataFrame) -> dict:
    return {str(index): {str(col): stringify(row[col]) for col in frame.columns} for index, row in frame.iterrows()}


def refusal_record(stage, error) -> dict:
    return {
        "stage": stage,
        "error": type(error).__name__,
        "precondition": getattr(error, "precondition", ""),
        "message": str(error),
    }


def digest(records) -> str:
    payload = json.dumps(stringify(records), sort_keys=True, ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def render(report: dict) -> str:
    document = {"schema": REPORT_SCHEMA, **stringify(report)}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
