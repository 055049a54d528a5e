import csv
import io
import json
import os
import tempfile
from typing import Any, Dict, Iterable, List, Optional, Sequence


def fmt17(x: Optional[float]) -> str:
    """Exact decimal round-trip formatting (17 significant digits); None -> ""."""
    if x is None:
        return ""
    return f"{float(x):.17g}"


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename over `path`."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_json(obj: Any, path: str) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def read_jsonl(path: str) -> List[Dict[str, Any]]:
    records: List[Dict[str, Any]] = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            records.append(json.loads(line))
    return records


def write_jsonl(records: Iterable[Dict[str, Any]], path: str) -> None:
    text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    atomic_write_text(path, text)


def write_csv(rows: Sequence[Dict[str, Any]], path: str, fieldnames: Optional[List[str]] = None) -> None:
    """
    Write dict rows with csv.DictWriter. With no rows and no fieldnames the file
    is still created (empty), so downstream steps can rely on its existence.
    """
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    if fieldnames:
        w = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    atomic_write_text(path, buf.getvalue())
