import csv
import json
from pathlib import Path
from typing import IO, Any, Iterable, Iterator, List, Sequence, Tuple, Union

PathLike = Union[str, Path]


def write_jsonl(rows: Iterable[dict], path: PathLike) -> int:
    """
    Write one JSON object per line (UTF-8, keys in insertion order).

    Returns:
    - int: number of rows written
    """
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def iter_jsonl(path: PathLike) -> Iterator[Tuple[int, Any]]:
    """Yield (line_number, object) for every non-blank line. Bad JSON raises ValueError naming the line."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"line {line_number}: {e.msg}") from e
            yield line_number, obj


def write_json(obj: Any, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def read_json(path: PathLike) -> Any:
    """Parse a JSON file. Bad UTF-8 or bad JSON raises ValueError naming the file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: line {e.lineno}: {e.msg}") from e
    except UnicodeDecodeError as e:
        raise ValueError(f"{path}: invalid UTF-8 ({e.reason})") from e


def write_tsv(rows: Iterable[Sequence[Any]], out: IO[str], header: Sequence[str] = ()) -> None:
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    if header:
        writer.writerow(header)
    writer.writerows(rows)


def read_tsv(path: PathLike) -> List[List[str]]:
    """Rows split on tabs only; quotes are ordinary characters. Bad UTF-8 raises ValueError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return [line.rstrip("\r\n").split("\t") for line in fh]
    except UnicodeDecodeError as e:
        raise ValueError(f"{path}: invalid UTF-8 ({e.reason})") from e


def write_csv(rows: Iterable[Sequence[Any]], path: PathLike, header: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
