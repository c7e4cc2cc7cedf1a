from quintlab.io.field_dump import read_field, read_kernel, write_field, write_kernel
from quintlab.io.json_encoder import NumpyJsonEncoder
from quintlab.io.tables import (
    ArtifactHeader,
    read_table,
    write_json_file,
    write_table,
    write_table_file,
)

__all__ = [
    "NumpyJsonEncoder",
    "ArtifactHeader",
    "write_table",
    "write_table_file",
    "read_table",
    "write_json_file",
    "write_field",
    "read_field",
    "write_kernel",
    "read_kernel",
]
