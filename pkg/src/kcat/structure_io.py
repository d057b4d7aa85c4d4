"""
Reading and writing structure files.

A structure file declares the scalar field, the spaces, the named cells
with their sparse entries, and structures binding cells and other
structures to roles::

    field q
    space F 2
    cell k.mu : F,F -> F
      0 <- 0,0 = 1
      1 <- 0,1 = 1
    structure monad k
      carrier = legs [F]
      mu = cell k.mu

Emission is deterministic: spaces sorted by name, then cells sorted by
name with entries in lexicographic order, then structures children first.
"""

import logging
import re
from dataclasses import MISSING, fields, is_dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from sympy import QQ

from kcat.errors import KCatError, ParseError, ShapeMismatch, UnknownRole
from kcat.lincat import Space, TwoCell, field_label, make_field, scalar_str, to_scalar
from kcat.structures import (BimonadDesc, ComoduleDesc, ComoduleObject, ComonadDesc,
                             CoquasiBimonadDesc, DistKind, DistLaw, EMObject, HausserNillDatum,
                             ModuleDesc, MonadDesc, QBObject, QuasiBimonadDesc, RelativeModuleDesc,
                             Side, SweedlerDatum, TambaraModuleDesc, YDModuleDesc, validate_shapes)

logger = logging.getLogger(__name__)

KINDS = {
    'monad': MonadDesc,
    'comonad': ComonadDesc,
    'distlaw': DistLaw,
    'module': ModuleDesc,
    'comodule': ComoduleDesc,
    'tambara': TambaraModuleDesc,
    'quasi-bimonad': QuasiBimonadDesc,
    'coquasi-bimonad': CoquasiBimonadDesc,
    'bimonad': BimonadDesc,
    'sweedler': SweedlerDatum,
    'hausser-nill': HausserNillDatum,
    'yd': YDModuleDesc,
    'relative': RelativeModuleDesc,
    'qb-object': QBObject,
    'comodule-object': ComoduleObject,
    'em-object': EMObject,
}
_KIND_OF = {cls: kind for kind, cls in KINDS.items()}

UNIT_TYPE = "I"
EMPTY_INDEX = "-"

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.()+\-]*$")


class ParsedFile:
    """Everything a structure file declares."""

    def __init__(self, field, spaces: Dict[str, Space], cells: Dict[str, TwoCell],
                 structures: Dict[str, object], referenced: Iterable[str], comments: List[str]):
        self._field = field
        self._spaces = spaces
        self._cells = cells
        self._structures = structures
        self._referenced = set(referenced)
        self._comments = comments

    @property
    def field(self):
        """Get the scalar field the file declares."""
        return self._field

    @property
    def spaces(self) -> Dict[str, Space]:
        return self._spaces

    @property
    def cells(self) -> Dict[str, TwoCell]:
        return self._cells

    @property
    def structures(self) -> Dict[str, object]:
        """Get every structure by name, in declaration order."""
        return self._structures

    @property
    def top(self) -> Dict[str, object]:
        """Get the structures no other structure refers to."""
        return {k: v for k, v in self._structures.items() if k not in self._referenced}

    @property
    def comments(self) -> List[str]:
        return self._comments


# ---------------------------------------------------------------------------
# emit


def _fmt_index(idx: Tuple[int, ...]) -> str:
    return ",".join(str(i) for i in idx) if idx else EMPTY_INDEX


def _fmt_type(legs) -> str:
    return ",".join(s.name for s in legs) if legs else UNIT_TYPE


class _Emitter:
    def __init__(self):
        self.spaces: Dict[str, Space] = {}
        self.cells: Dict[str, TwoCell] = {}
        self.structures: List[Tuple[str, str, List[Tuple[str, str]]]] = []
        self.field = None

    def _space(self, s: Space) -> None:
        seen = self.spaces.get(s.name)
        if seen is not None and seen.dim != s.dim:
            raise ShapeMismatch(f"space {s.name} used with dims {seen.dim} and {s.dim}")
        self.spaces[s.name] = s

    def cell(self, name: str, cell: TwoCell) -> str:
        if self.field is None:
            self.field = cell.field
        elif cell.field != self.field:
            raise ShapeMismatch(f"cell {name} lives over {cell.field}, file over {self.field}")
        for s in cell.dom + cell.cod:
            self._space(s)
        self.cells[name] = cell
        return name

    def value(self, path: str, v) -> Optional[str]:
        if v is None:
            return None
        if isinstance(v, TwoCell):
            return f"cell {self.cell(path, v)}"
        if isinstance(v, Space):
            self._space(v)
            return f"space {v.name}"
        if isinstance(v, Side):
            return f"side {v.value}"
        if isinstance(v, frozenset):
            kinds = sorted(k.value for k in v)
            return f"kinds {','.join(kinds) if kinds else EMPTY_INDEX}"
        if isinstance(v, tuple) and all(isinstance(s, Space) for s in v):
            for s in v:
                self._space(s)
            return f"legs [{','.join(s.name for s in v)}]"
        if isinstance(v, str):
            return f"text {v}"
        if is_dataclass(v):
            return f"struct {self.structure(path, v)}"
        raise KCatError(f"cannot write a value of type {type(v).__name__} at {path}")

    def structure(self, name: str, desc) -> str:
        kind = _KIND_OF.get(type(desc))
        if kind is None:
            raise KCatError(f"cannot write a {type(desc).__name__}")
        roles = []
        for f in fields(desc):
            text = self.value(f"{name}.{f.name}", getattr(desc, f.name))
            if text is not None:
                roles.append((f.name, text))
        self.structures.append((kind, name, roles))
        return name


def emit_text(structures: Mapping[str, object], cells: Optional[Mapping[str, TwoCell]] = None,
              comments: Iterable[str] = ()) -> str:
    """Serialize named structures (and extra loose cells) into structure-file text."""
    em = _Emitter()
    for name in sorted(cells or {}):
        em.cell(name, cells[name])
    for name in sorted(structures):
        em.structure(name, structures[name])
    field = em.field if em.field is not None else QQ
    out = [f"# {c}" for c in comments]
    out.append(f"field {field_label(field)}")
    for name in sorted(em.spaces):
        out.append(f"space {name} {em.spaces[name].dim}")
    for name in sorted(em.cells):
        cell = em.cells[name]
        out.append(f"cell {name} : {_fmt_type(cell.dom)} -> {_fmt_type(cell.cod)}")
        for (row, col), v in cell.sorted_entries():
            out.append(f"  {_fmt_index(row)} <- {_fmt_index(col)} = {scalar_str(field, v)}")
    for kind, name, roles in em.structures:
        out.append(f"structure {kind} {name}")
        for role, text in roles:
            out.append(f"  {role} = {text}")
    return "\n".join(out) + "\n"


def emit(structures: Mapping[str, object], path: str, cells: Optional[Mapping[str, TwoCell]] = None,
         comments: Iterable[str] = ()) -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(emit_text(structures, cells, comments))
    logger.info(f"wrote {len(structures)} structure(s) to {path}")


# ---------------------------------------------------------------------------
# parse


class _Parser:
    def __init__(self, text: str, field=None):
        self.lines = text.splitlines()
        self.field = field if field is not None else QQ
        self.override = field is not None
        self.spaces: Dict[str, Space] = {}
        self.cells: Dict[str, TwoCell] = {}
        self.structures: Dict[str, object] = {}
        self.referenced: List[str] = []
        self.comments: List[str] = []
        self.pos = 0

    def error(self, message: str, column: int = 1) -> ParseError:
        return ParseError(message, self.pos + 1, column)

    def _column(self, line: str, token: str) -> int:
        i = line.find(token)
        return i + 1 if i >= 0 else 1

    def parse(self) -> ParsedFile:
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            stripped = line.strip()
            if not stripped:
                self.pos += 1
                continue
            if stripped.startswith("#"):
                self.comments.append(stripped[1:].strip())
                self.pos += 1
                continue
            if line[0].isspace():
                raise self.error("indented line outside a cell or structure block")
            keyword = stripped.split()[0]
            handler = {'field': self._field, 'space': self._space, 'cell': self._cell,
                       'structure': self._structure}.get(keyword)
            if handler is None:
                raise self.error(f"unknown declaration {keyword!r}")
            handler(line)
        return ParsedFile(self.field, self.spaces, self.cells, self.structures, self.referenced,
                          self.comments)

    def _block(self) -> List[Tuple[int, str]]:
        """Indented lines following the current header."""
        self.pos += 1
        block = []
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            if not line.strip():
                self.pos += 1
                continue
            if not line[0].isspace():
                break
            block.append((self.pos, line))
            self.pos += 1
        return block

    def _field(self, line: str) -> None:
        parts = line.split()
        if len(parts) != 2:
            raise self.error("expected 'field <q|fp:p>'")
        if self.spaces or self.cells:
            raise self.error("field must come before spaces and cells")
        try:
            declared = make_field(parts[1])
        except ValueError as exc:
            raise self.error(str(exc), self._column(line, parts[1]))
        if not self.override:
            self.field = declared
        self.pos += 1

    def _space(self, line: str) -> None:
        parts = line.split()
        if len(parts) != 3 or not _NAME.match(parts[1]):
            raise self.error("expected 'space <name> <dim>'")
        try:
            dim = int(parts[2])
        except ValueError:
            raise self.error(f"bad dimension {parts[2]!r}", self._column(line, parts[2]))
        if dim < 1:
            raise self.error("dimension must be positive", self._column(line, parts[2]))
        if parts[1] in self.spaces:
            raise self.error(f"space {parts[1]} declared twice", self._column(line, parts[1]))
        self.spaces[parts[1]] = Space(parts[1], dim)
        self.pos += 1

    def _legs(self, text: str, line: str) -> Tuple[Space, ...]:
        text = text.strip()
        if text in (UNIT_TYPE, ""):
            return ()
        legs = []
        for name in text.split(","):
            name = name.strip()
            if name not in self.spaces:
                raise UnknownRole(f"undeclared space {name!r} (line {self.pos + 1}, "
                                  f"column {self._column(line, name)})")
            legs.append(self.spaces[name])
        return tuple(legs)

    def _cell(self, line: str) -> None:
        m = re.match(r"^cell\s+(\S+)\s*:\s*(.*?)\s*->\s*(.*?)\s*$", line)
        if m is None:
            raise self.error("expected 'cell <name> : <dom> -> <cod>'")
        name = m.group(1)
        if name in self.cells:
            raise self.error(f"cell {name} declared twice", self._column(line, name))
        dom, cod = self._legs(m.group(2), line), self._legs(m.group(3), line)
        header = self.pos
        entries = {}
        for pos, text in self._block():
            self.pos = pos
            em = re.match(r"^\s*(\S+)\s*<-\s*(\S+)\s*=\s*(\S+)\s*$", text)
            if em is None:
                raise self.error("expected '<row> <- <col> = <value>'")
            row, col = self._index(em.group(1), text), self._index(em.group(2), text)
            try:
                value = to_scalar(self.field, em.group(3))
            except ParseError as exc:
                raise self.error(str(exc).split(" (line")[0], self._column(text, em.group(3)))
            except ZeroDivisionError as exc:
                raise self.error(str(exc), self._column(text, em.group(3)))
            entries[(row, col)] = value
        self.pos = header
        try:
            self.cells[name] = TwoCell(dom, cod, entries, self.field, name)
        except ShapeMismatch as exc:
            raise self.error(str(exc))
        self.pos = self._after_block(header)

    def _after_block(self, header: int) -> int:
        pos = header + 1
        while pos < len(self.lines) and (not self.lines[pos].strip() or self.lines[pos][0].isspace()):
            pos += 1
        return pos

    def _index(self, text: str, line: str) -> Tuple[int, ...]:
        if text == EMPTY_INDEX:
            return ()
        try:
            return tuple(int(t) for t in text.split(","))
        except ValueError:
            raise self.error(f"bad index {text!r}", self._column(line, text))

    def _ref(self, table: Mapping, name: str, what: str, line: str):
        if name not in table:
            raise UnknownRole(f"undeclared {what} {name!r} (line {self.pos + 1}, "
                              f"column {self._column(line, name)})")
        return table[name]

    def _value(self, text: str, line: str):
        tag, _, rest = text.strip().partition(" ")
        rest = rest.strip()
        if tag == 'cell':
            return self._ref(self.cells, rest, "cell", line)
        if tag == 'struct':
            self.referenced.append(rest)
            return self._ref(self.structures, rest, "structure", line)
        if tag == 'space':
            return self._ref(self.spaces, rest, "space", line)
        if tag == 'legs':
            if not (rest.startswith("[") and rest.endswith("]")):
                raise self.error("legs must be written [A,B,...]", self._column(line, rest))
            inner = rest[1:-1]
            return self._legs(inner, line) if inner else ()
        if tag == 'side':
            try:
                return Side(rest)
            except ValueError:
                raise self.error(f"bad side {rest!r}", self._column(line, rest))
        if tag == 'kinds':
            if rest == EMPTY_INDEX:
                return frozenset()
            try:
                return frozenset(DistKind.parse(k) for k in rest.split(","))
            except ValueError as exc:
                raise self.error(str(exc), self._column(line, rest))
        if tag == 'text':
            return rest
        raise self.error(f"unknown value tag {tag!r}", self._column(line, tag))

    def _structure(self, line: str) -> None:
        parts = line.split()
        if len(parts) != 3:
            raise self.error("expected 'structure <kind> <name>'")
        kind, name = parts[1], parts[2]
        cls = KINDS.get(kind)
        if cls is None:
            raise UnknownRole(f"unknown structure kind {kind!r} (line {self.pos + 1}, "
                              f"column {self._column(line, kind)})")
        if name in self.structures:
            raise self.error(f"structure {name} declared twice", self._column(line, name))
        header = self.pos
        known = {f.name: f for f in fields(cls)}
        values = {}
        for pos, text in self._block():
            self.pos = pos
            role, eq, value = text.strip().partition("=")
            role = role.strip()
            if not eq:
                raise self.error("expected '<role> = <tag> <value>'")
            if role not in known:
                raise UnknownRole(f"{kind} has no role {role!r} (line {pos + 1}, "
                                  f"column {self._column(text, role)})")
            values[role] = self._value(value, text)
        end = self._after_block(header)
        self.pos = header
        missing = [f.name for f in known.values()
                   if f.name not in values and f.default is MISSING and f.default_factory is MISSING]
        if missing:
            raise UnknownRole(f"{kind} {name} lacks role(s) {', '.join(missing)} (line {header + 1})")
        desc = cls(**values)
        if hasattr(desc, 'shape_table'):
            report = validate_shapes(desc)
            if not report.passed:
                w = report.witness
                raise ShapeMismatch(f"{kind} {name}: {w.lhs}, expected {w.rhs} (line {header + 1})")
        self.structures[name] = desc
        self.pos = end


def parse_text(text: str, field=None) -> ParsedFile:
    """
    Read structure-file text. A given ``field`` overrides the file's field line.

    Raises:
        ParseError: malformed text, with line and column
        UnknownRole: reference to an undeclared space, cell, structure or role
        ShapeMismatch: a structure whose cells do not fit their roles
    """
    return _Parser(text, field).parse()


def parse(path: str, field=None) -> ParsedFile:
    with open(path, 'r', encoding='utf-8') as fh:
        text = fh.read()
    parsed = parse_text(text, field)
    logger.debug(f"read {len(parsed.structures)} structure(s), {len(parsed.cells)} cell(s) from {path}")
    return parsed
