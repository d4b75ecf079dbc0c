"""Release-level linking: build the type index, inheritance edges, and
resolve every access/invocation site recorded by the parser.

Site resolution is deliberately lightweight. In order it consults: the
explicit receiver type (static-style receivers and declared types of
parameters/locals/fields), the enclosing class's own members including
supertype members declared within the model, lexically enclosing types,
same-package types, then imports. Anything else stays unresolved; an
unresolved owner is never the enclosing class, so such sites count as
cross-class. Simple-name access candidates that resolve to no field are
dropped entirely (they were locals the scanner could not prove, or
unrelated names).
"""

from __future__ import annotations

import datetime as dt

from .errors import Diagnostic
from .model import (
    AccessSite,
    BodyStats,
    CompilationUnit,
    InheritanceEdge,
    InvocationSite,
    TypeDecl,
    VariantModel,
)


def link_variant(
    units: list[CompilationUnit],
    name: str,
    date: dt.date,
) -> VariantModel:
    """Link parsed units into a resolved model for one release."""
    ordered = sorted(units, key=lambda u: u.file.path)
    linker = _Linker(ordered)
    model = VariantModel(
        release_name=name,
        release_date=date,
        units=ordered,
        packages={unit.package_name for unit in ordered},
        type_index=linker.index,
        inheritance_edges=linker.edges,
        diagnostics=linker.diagnostics,
    )
    for unit in ordered:
        model.diagnostics.extend(unit.diagnostics)
    return model


class _Linker:
    def __init__(self, units: list[CompilationUnit]):
        self.units = units
        self.index: dict[str, TypeDecl] = {}
        self.parent: dict[str, str | None] = {}
        self.unit_of: dict[str, CompilationUnit] = {}
        self.edges: list[InheritanceEdge] = []
        self.diagnostics: list[Diagnostic] = []
        self._supers: dict[str, list[str]] = {}  # resolved, model-internal
        self._field_owner_memo: dict[tuple[str, str], str | None] = {}
        self._method_owner_memo: dict[tuple[str, str], str | None] = {}

        self._build_index()
        self._build_edges()
        self._resolve_sites()

    # ------------------------------------------------------------------
    # indexes
    # ------------------------------------------------------------------

    def _build_index(self) -> None:
        for unit in self.units:
            for top in unit.types:
                self._register(top, None, unit)

    def _register(
        self, decl: TypeDecl, parent: str | None, unit: CompilationUnit
    ) -> None:
        qname = decl.qualified_name
        if qname in self.index:
            self.diagnostics.append(
                Diagnostic(
                    path=unit.file.path,
                    message=f"duplicate type name {qname}; later declaration shadows earlier",
                )
            )
        self.index[qname] = decl
        self.parent[qname] = parent
        self.unit_of[qname] = unit
        for nested in decl.nested:
            self._register(nested, qname, unit)

    def _build_edges(self) -> None:
        for unit in self.units:
            for decl in unit.all_types():
                for supertype in decl.supertypes:
                    resolved = self._resolve_type_name(
                        supertype.name, unit, decl.qualified_name
                    )
                    self.edges.append(
                        InheritanceEdge(
                            subtype=decl.qualified_name,
                            supertype=resolved or supertype.name,
                            edge_kind=supertype.edge_kind,
                            resolved=resolved if resolved in self.index else None,
                        )
                    )

    def _resolved_supers(self, qname: str) -> list[str]:
        supers = self._supers.get(qname)
        if supers is None:
            supers = [
                edge.resolved
                for edge in self.edges
                if edge.subtype == qname and edge.resolved is not None
            ]
            self._supers[qname] = supers
        return supers

    # ------------------------------------------------------------------
    # type-name resolution
    # ------------------------------------------------------------------

    def _resolve_type_name(
        self, name: str, unit: CompilationUnit, context: str | None
    ) -> str | None:
        """Resolve a (possibly dotted) type name to a qualified name.

        Returns an in-model qualified name when possible, an imported
        external qualified name otherwise, or None when unknown.
        """
        if "." in name:
            if name in self.index:
                return name
            head, _, rest = name.partition(".")
            base = self._resolve_type_name(head, unit, context)
            if base is not None:
                candidate = f"{base}.{rest}"
                if candidate in self.index:
                    return candidate
            return None

        # enclosing types, innermost first, and their nested members
        scope = context
        while scope is not None:
            decl = self.index.get(scope)
            if decl is not None:
                if decl.simple_name == name:
                    return scope
                for nested in decl.nested:
                    if nested.simple_name == name:
                        return nested.qualified_name
            scope = self.parent.get(scope)
        # top-level types of the same unit
        for top in unit.types:
            if top.simple_name == name:
                return top.qualified_name
        # same-package types
        package = unit.package_name
        candidate = f"{package}.{name}" if package else name
        if candidate in self.index:
            return candidate
        # single-type imports (may name external types)
        for imp in unit.imports:
            if imp.on_demand or imp.is_static:
                continue
            if imp.name.rsplit(".", 1)[-1] == name:
                return imp.name
        # on-demand imports, in-model packages only
        for imp in unit.imports:
            if not imp.on_demand or imp.is_static:
                continue
            candidate = f"{imp.name}.{name}"
            if candidate in self.index:
                return candidate
        return None

    # ------------------------------------------------------------------
    # member lookup
    # ------------------------------------------------------------------

    def _field_owner(self, qname: str | None, name: str) -> str | None:
        """Qualified name of the type declaring field ``name``, walking the
        in-model supertype closure breadth-first from ``qname``."""
        if qname is None or qname not in self.index:
            return None
        key = (qname, name)
        if key in self._field_owner_memo:
            return self._field_owner_memo[key]
        owner = self._member_owner(qname, name, "fields")
        self._field_owner_memo[key] = owner
        return owner

    def _method_owner(self, qname: str | None, name: str) -> str | None:
        if qname is None or qname not in self.index:
            return None
        key = (qname, name)
        if key in self._method_owner_memo:
            return self._method_owner_memo[key]
        owner = self._member_owner(qname, name, "methods")
        self._method_owner_memo[key] = owner
        return owner

    def _member_owner(self, start: str, name: str, attr: str) -> str | None:
        queue = [start]
        seen = {start}
        while queue:
            current = queue.pop(0)
            decl = self.index.get(current)
            if decl is None:
                continue
            members = decl.fields if attr == "fields" else decl.methods
            if any(member.name == name for member in members):
                return current
            for supertype in self._resolved_supers(current):
                if supertype not in seen:
                    seen.add(supertype)
                    queue.append(supertype)
        return None

    def _field_owner_with_outer(
        self, qname: str, name: str
    ) -> tuple[str | None, bool]:
        """Field lookup through supertypes, then lexically enclosing types.

        Returns (owner, via_outer)."""
        owner = self._field_owner(qname, name)
        if owner is not None:
            return owner, False
        scope = self.parent.get(qname)
        while scope is not None:
            owner = self._field_owner(scope, name)
            if owner is not None:
                return owner, True
            scope = self.parent.get(scope)
        return None, False

    def _method_owner_with_outer(self, qname: str, name: str) -> str | None:
        owner = self._method_owner(qname, name)
        if owner is not None:
            return owner
        scope = self.parent.get(qname)
        while scope is not None:
            owner = self._method_owner(scope, name)
            if owner is not None:
                return owner
            scope = self.parent.get(scope)
        return None

    def _super_member_owner(self, qname: str, name: str, attr: str) -> str | None:
        for supertype in self._resolved_supers(qname):
            owner = (
                self._field_owner(supertype, name)
                if attr == "fields"
                else self._method_owner(supertype, name)
            )
            if owner is not None:
                return owner
        return None

    # ------------------------------------------------------------------
    # site resolution
    # ------------------------------------------------------------------

    def _resolve_sites(self) -> None:
        for unit in self.units:
            for decl in unit.all_types():
                for method in decl.methods:
                    if method.body is not None:
                        self._resolve_body(method.body, decl, unit)

    def _resolve_body(
        self, body: BodyStats, decl: TypeDecl, unit: CompilationUnit
    ) -> None:
        here = decl.qualified_name
        keep: list[AccessSite] = []
        for site in body.field_access_sites:
            self._resolve_access(site, decl, unit)
            if site.counted:
                keep.append(site)
        body.field_access_sites[:] = keep
        for site in body.invocation_sites:
            self._resolve_invocation(site, decl, unit)
        for site in body.constructor_calls:
            self._resolve_constructor_call(site, decl, unit)
        for site in body.field_access_sites + body.invocation_sites:
            site.cross_class = site.resolved_owner != here
        for site in body.constructor_calls:
            site.cross_class = site.resolved_owner != here

    def _receiver_target(
        self, site: AccessSite | InvocationSite, decl: TypeDecl, unit: CompilationUnit
    ) -> tuple[str | None, bool]:
        """Resolve the receiver to a type for member lookup.

        Returns (type qualified name or None, receiver_is_type)."""
        here = decl.qualified_name
        kind = site.receiver_kind
        if kind == "var":
            if site.receiver_type_text:
                return (
                    self._resolve_type_name(site.receiver_type_text, unit, here),
                    False,
                )
            return None, False
        if kind == "name":
            assert site.receiver is not None
            field_owner, _ = self._field_owner_with_outer(here, site.receiver)
            if field_owner is not None:
                owner_decl = self.index[field_owner]
                for field in owner_decl.fields:
                    if field.name == site.receiver:
                        if field.declared_type:
                            return (
                                self._resolve_type_name(
                                    field.declared_type, unit, here
                                ),
                                False,
                            )
                        return None, False
                return None, False
            return self._resolve_type_name(site.receiver, unit, here), True
        if kind == "chain":
            assert site.receiver is not None
            return self._resolve_type_name(site.receiver, unit, here), True
        return None, False

    def _resolve_access(
        self, site: AccessSite, decl: TypeDecl, unit: CompilationUnit
    ) -> None:
        here = decl.qualified_name
        if site.form == "simple-name":
            owner, _ = self._field_owner_with_outer(here, site.name)
            site.resolved_owner = owner
            site.counted = owner is not None
            return
        if site.receiver_kind == "this":
            site.resolved_owner = self._field_owner(here, site.name)
            return
        if site.receiver_kind == "super":
            site.resolved_owner = self._super_member_owner(here, site.name, "fields")
            return
        target, _ = self._receiver_target(site, decl, unit)
        if target is None:
            site.resolved_owner = None
            return
        owner = self._field_owner(target, site.name)
        # attribute to the receiver type itself when the declaring type is
        # invisible (external supertype or external import target)
        site.resolved_owner = owner if owner is not None else target

    def _resolve_invocation(
        self, site: InvocationSite, decl: TypeDecl, unit: CompilationUnit
    ) -> None:
        here = decl.qualified_name
        kind = site.receiver_kind
        if kind == "none":
            site.receiver_form = "none"
            site.resolved_owner = self._method_owner_with_outer(here, site.name)
            return
        if kind == "this":
            site.receiver_form = "this"
            site.resolved_owner = self._method_owner(here, site.name)
            return
        if kind == "super":
            site.receiver_form = "this"  # self-referential receiver
            site.resolved_owner = self._super_member_owner(here, site.name, "methods")
            return
        target, is_type = self._receiver_target(site, decl, unit)
        site.receiver_form = "type" if (is_type and target is not None) else "expression"
        if target is None:
            site.resolved_owner = None
            return
        owner = self._method_owner(target, site.name)
        site.resolved_owner = owner if owner is not None else target

    def _resolve_constructor_call(
        self, site: InvocationSite, decl: TypeDecl, unit: CompilationUnit
    ) -> None:
        here = decl.qualified_name
        if site.receiver_kind == "this":  # this(...) delegation
            site.receiver_form = "this"
            site.resolved_owner = here
            return
        if site.receiver_kind == "super":  # super(...) delegation
            site.receiver_form = "this"
            for supertype in self._resolved_supers(here):
                site.resolved_owner = supertype
                return
            site.resolved_owner = None
            return
        # new T(...): receiver carries the dotted type text
        site.receiver_form = "type"
        site.resolved_owner = self._resolve_type_name(
            site.receiver or site.name, unit, here
        )
