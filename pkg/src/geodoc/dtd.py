"""Minimal DTD validator for the shipped annotation schema.

Supports the subset the schema uses: EMPTY and (#PCDATA) content,
sequence models with ?/*/+ occurrence marks, CDATA and enumerated
attributes with #REQUIRED/#IMPLIED. No external/parameter entities.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path


class DtdError(Exception):
    pass


class ValidationError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.element_path = path


@dataclass
class AttDef:
    name: str
    allowed: tuple[str, ...] | None  # None = CDATA
    required: bool


@dataclass
class ElementDef:
    name: str
    kind: str  # "empty" | "pcdata" | "children"
    child_regex: re.Pattern | None = None
    attributes: dict[str, AttDef] = field(default_factory=dict)


_ELEMENT_RE = re.compile(r"<!ELEMENT\s+(\S+)\s+(.+?)>", re.DOTALL)
_ATTLIST_RE = re.compile(r"<!ATTLIST\s+(\S+)\s+(.+?)>", re.DOTALL)
_ATTDEF_RE = re.compile(
    r"(\S+)\s+(CDATA|\([^)]*\))\s+(#REQUIRED|#IMPLIED)", re.DOTALL
)


def _compile_content(model: str) -> tuple[str, re.Pattern | None]:
    model = model.strip()
    if model == "EMPTY":
        return "empty", None
    if model.replace(" ", "") == "(#PCDATA)":
        return "pcdata", None
    inner = model.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    parts = [p.strip() for p in inner.split(",")]
    rx = ""
    for p in parts:
        occ = ""
        if p[-1] in "?*+":
            occ = p[-1]
            p = p[:-1].strip()
        if "|" in p:
            names = "|".join(re.escape(n.strip()) for n in p.strip("()").split("|"))
            rx += f"(?:(?:{names});){_occ(occ)}"
        else:
            rx += f"(?:{re.escape(p)};){_occ(occ)}"
    return "children", re.compile(rx + r"\Z")


def _occ(occ: str) -> str:
    return {"": "{1}", "?": "?", "*": "*", "+": "+"}[occ]


def load_dtd(path: str | Path) -> dict[str, ElementDef]:
    text = Path(path).read_text(encoding="utf-8")
    text = re.sub(r"<!--.*?-->", "", text, flags=re.DOTALL)
    defs: dict[str, ElementDef] = {}
    for m in _ELEMENT_RE.finditer(text):
        name, model = m.group(1), m.group(2)
        if model.lstrip().startswith(("CDATA", "#")) and "PCDATA" not in model:
            raise DtdError(f"unsupported content model for {name}")
        kind, rx = _compile_content(model)
        defs[name] = ElementDef(name=name, kind=kind, child_regex=rx)
    for m in _ATTLIST_RE.finditer(text):
        name, body = m.group(1), m.group(2)
        if name not in defs:
            raise DtdError(f"ATTLIST for undeclared element {name}")
        for am in _ATTDEF_RE.finditer(body):
            attname, typ, presence = am.group(1), am.group(2), am.group(3)
            allowed = None
            if typ != "CDATA":
                allowed = tuple(v.strip() for v in typ.strip("()").split("|"))
            defs[name].attributes[attname] = AttDef(
                attname, allowed, presence == "#REQUIRED"
            )
    if not defs:
        raise DtdError("no element declarations found")
    return defs


def validate(root: ET.Element, defs: dict[str, ElementDef], path: str = "") -> None:
    """Raise ValidationError (with element path) on the first violation."""
    path = f"{path}/{root.tag}"
    edef = defs.get(root.tag)
    if edef is None:
        raise ValidationError(path, f"undeclared element {root.tag!r}")
    for attname, attdef in edef.attributes.items():
        value = root.get(attname)
        if value is None:
            if attdef.required:
                raise ValidationError(path, f"missing required attribute {attname!r}")
            continue
        if attdef.allowed is not None and value not in attdef.allowed:
            raise ValidationError(
                path, f"attribute {attname}={value!r} not in {attdef.allowed}"
            )
    for attname in root.attrib:
        if attname not in edef.attributes:
            raise ValidationError(path, f"undeclared attribute {attname!r}")
    children = list(root)
    if edef.kind == "empty":
        if children or (root.text and root.text.strip()):
            raise ValidationError(path, "EMPTY element has content")
    elif edef.kind == "pcdata":
        if children:
            raise ValidationError(path, "#PCDATA element has child elements")
    else:
        seq = "".join(f"{c.tag};" for c in children)
        assert edef.child_regex is not None
        if not edef.child_regex.match(seq):
            raise ValidationError(path, f"children {seq!r} violate content model")
        for c in children:
            validate(c, defs, path)


def validate_bytes(data: bytes, dtd_path: str | Path) -> None:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise ValidationError("/", f"not well-formed: {exc}") from exc
    validate(root, load_dtd(dtd_path))
