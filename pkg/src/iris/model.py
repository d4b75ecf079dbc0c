"""Domain model for one analyzed release: parsed declaration trees plus the
linked symbol/dependency view the metric counters consume.

The parser fills in the syntactic half (types, members, raw access and
invocation sites); the linker fills in ``resolved_owner`` / ``cross_class``
on every site and builds the release-wide indexes. Once linked, a
``VariantModel`` is treated as immutable.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

from .errors import Diagnostic

# Display value for the unnamed package; SourceFile.package_name stores ""
# so that qualified names never grow a fake prefix.
DEFAULT_PACKAGE = "(default)"

TYPE_KINDS = ("class", "interface", "enum", "record", "annotation")

# Kinds rolled up as "classes" vs "interfaces" by the declaration counters.
CLASS_LIKE_KINDS = frozenset(("class", "enum", "record"))
INTERFACE_LIKE_KINDS = frozenset(("interface", "annotation"))

# Receiver classification attached by the parser to each site.
#   none   bare call/name          this   `this.` prefix
#   super  `super.` prefix         var    single ident known local/param
#   name   single ident, not a local (field or type, linker decides)
#   chain  dotted prefix text      expr   anything else (call result, parens)
RECEIVER_KINDS = ("none", "this", "super", "var", "name", "chain", "expr")


@dataclass(slots=True)
class SourceFile:
    path: str  # relative to the release root, posix separators
    text: str
    package_name: str = ""  # "" = default package

    @property
    def package_display(self) -> str:
        return self.package_name or DEFAULT_PACKAGE


@dataclass(slots=True)
class ImportDecl:
    name: str  # qualified name as written, without trailing ".*"
    on_demand: bool = False
    is_static: bool = False


@dataclass(slots=True)
class AccessSite:
    """One counted (or candidate) field read/write occurrence."""

    name: str
    form: str  # "qualified" | "this-qualified" | "simple-name"
    receiver_kind: str
    receiver: str | None  # var/name: the ident; chain: dotted text
    receiver_type_text: str | None  # declared type when receiver_kind == "var"
    line: int
    resolved_owner: str | None = None  # qualified type name, None = unresolved
    cross_class: bool = True
    counted: bool = True  # simple-name sites drop to False when unresolvable


@dataclass(slots=True)
class InvocationSite:
    """One call expression (or, separately stored, one constructor call)."""

    name: str
    receiver_kind: str
    receiver: str | None
    receiver_type_text: str | None
    line: int
    is_constructor_call: bool = False
    receiver_form: str = "expression"  # "none" | "this" | "expression" | "type"
    resolved_owner: str | None = None
    cross_class: bool = True


@dataclass(slots=True)
class BodyStats:
    """Countable facts of one concrete body, anonymous bodies merged in."""

    local_var_decls: int = 0
    field_access_sites: list[AccessSite] = field(default_factory=list)
    invocation_sites: list[InvocationSite] = field(default_factory=list)
    constructor_calls: list[InvocationSite] = field(default_factory=list)

    def merge(self, other: BodyStats) -> None:
        self.local_var_decls += other.local_var_decls
        self.field_access_sites.extend(other.field_access_sites)
        self.invocation_sites.extend(other.invocation_sites)
        self.constructor_calls.extend(other.constructor_calls)


@dataclass(slots=True)
class FieldDecl:
    name: str
    owner: str  # qualified type name
    modifiers: frozenset[str]
    declared_type: str = ""  # dotted name without generics/dims, "" if unknown


@dataclass(slots=True)
class MethodDecl:
    name: str
    owner: str
    is_constructor: bool
    modifiers: frozenset[str]
    param_count: int
    body: BodyStats | None  # None for abstract/interface/annotation members


@dataclass(slots=True)
class Supertype:
    name: str  # as declared, dotted, generics stripped
    edge_kind: str  # "extends" | "implements"


@dataclass(slots=True)
class TypeDecl:
    simple_name: str
    qualified_name: str
    kind: str  # one of TYPE_KINDS
    modifiers: frozenset[str]
    supertypes: list[Supertype] = field(default_factory=list)
    fields: list[FieldDecl] = field(default_factory=list)
    methods: list[MethodDecl] = field(default_factory=list)
    nested: list[TypeDecl] = field(default_factory=list)
    # Anonymous class bodies never become TypeDecls: the count lives here and
    # their stats are merged into the enclosing method (or kept only here
    # when they occur outside any method body, e.g. field initializers).
    anonymous_bodies: list[BodyStats] = field(default_factory=list)

    def walk(self):
        """Yield this type and every nested type, depth-first."""
        yield self
        for nested in self.nested:
            yield from nested.walk()


@dataclass(slots=True)
class CompilationUnit:
    file: SourceFile
    imports: list[ImportDecl] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def package_name(self) -> str:
        return self.file.package_name

    def all_types(self):
        for top in self.types:
            yield from top.walk()


@dataclass(slots=True)
class InheritanceEdge:
    subtype: str  # qualified name
    supertype: str  # declared name (resolved to qualified when possible)
    edge_kind: str  # "extends" | "implements"
    resolved: str | None = None  # qualified name when the target is in-model


@dataclass(slots=True)
class VariantModel:
    release_name: str
    release_date: dt.date
    units: list[CompilationUnit]
    packages: set[str]
    type_index: dict[str, TypeDecl]
    inheritance_edges: list[InheritanceEdge]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def all_types(self):
        for unit in self.units:
            yield from unit.all_types()

    def all_methods(self):
        for type_decl in self.all_types():
            yield from type_decl.methods

    def iter_bodies(self):
        """Every countable BodyStats: concrete method bodies only (anonymous
        bodies are already merged into their enclosing method)."""
        for method in self.all_methods():
            if method.body is not None:
                yield method.body
