# tests/conftest.py
import pytest

from completion.partition import MicroBatch
from logic.declarations import parse_declarations
from utils.stream_import import parse_line

DECLARATIONS = """\
# Movement domain used across the suite
type id.
type time.
type dist.
pred HappensAt(event, time).
pred HoldsAt(fluent, time).
pred Close(id, id, dist, time).
pred Person(id).
pred Noise(id).
pred Alarm.
func walking(id): event.
func exit(id): event.
func active(id): event.
func move(id, id): fluent.
mode 1 HappensAt(+event, +time).
mode 1 Close(+id, +id, #dist, +time).
mode 1 Person(+id).
mode 1 HoldsAt(move(+id, +id), +time).
query HoldsAt.
"""


@pytest.fixture(scope="session")
def declarations():
    return parse_declarations(DECLARATIONS, source="<tests>")


@pytest.fixture(scope="session")
def schema(declarations):
    return declarations.schema


@pytest.fixture(scope="session")
def modes(declarations):
    return declarations.modes


@pytest.fixture
def declarations_file(tmp_path):
    path = tmp_path / "declarations.txt"
    path.write_text(DECLARATIONS, encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def make_batch(declarations):
    """Build a MicroBatch from stream-file lines"""
    def build(lines, index=0):
        queries, evidence = [], []
        for line in lines:
            kind, atom, value = parse_line(line, declarations.schema, declarations.query_predicate)
            (queries if kind == "query" else evidence).append((atom, value))
        return MicroBatch(tuple(queries), tuple(evidence), index)
    return build


@pytest.fixture(scope="session")
def atom(schema):
    from logic.parser import parse_atom
    return lambda text: parse_atom(text, schema)
