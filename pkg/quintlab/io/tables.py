import csv
import json
from pathlib import Path
from typing import Any, Iterable, List, NamedTuple, Sequence, TextIO

from quintlab.io.json_encoder import NumpyJsonEncoder


class ArtifactHeader(NamedTuple):
    experiment: str
    config_hash: str
    seed: int
    anchor: str

    def lines(self) -> List[str]:
        return [f"# {key}: {value}" for key, value in self._asdict().items()]


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(format_cell(v) for v in value)
    return str(value)


def write_table(
    stream: TextIO, header: ArtifactHeader, columns: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """CSV with `#` header lines; floats are written with their shortest round-trip repr."""
    for line in header.lines():
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])


def write_table_file(
    path: Path, header: ArtifactHeader, columns: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as stream:
        write_table(stream, header, columns, rows)
    return path


def read_table(stream: TextIO) -> List[List[str]]:
    """Rows of a table written by `write_table`, column names first, header lines skipped."""
    return list(csv.reader(line for line in stream if not line.startswith("#")))


def write_json_file(path: Path, header: ArtifactHeader, payload: Any) -> Path:
    document = {"header": header._asdict(), "data": payload}
    with open(path, "w", encoding="utf-8") as stream:
        json.dump(document, stream, cls=NumpyJsonEncoder, sort_keys=True, indent=2)
        stream.write("\n")
    return path
