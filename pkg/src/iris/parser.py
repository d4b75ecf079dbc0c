"""Structural parser for Java-syntax source files.

Builds the declaration tree (types, fields, methods) and scans concrete
method bodies for the countable occurrence sites: local variable
declarators, field accesses and method invocations. It is a counting
parser, not a compiler front end: expressions are scanned as token streams
with just enough structure (balanced delimiters, dotted chains, generics
disambiguation, lambdas, anonymous bodies) to classify identifier
occurrences deterministically.

Counting conventions (the counters inherit all of these):

* Simple-name occurrences are access *candidates*: recorded only when not
  shadowed by a parameter, local, catch/lambda/pattern binding in scope;
  the linker later drops candidates that do not resolve to a field of the
  enclosing type or one of its in-model supertypes.
* Qualified (``expr.name``) and ``this.``-qualified selections always count.
* Every call expression is one invocation site; ``new`` expressions and
  ``this(...)``/``super(...)`` delegations are constructor calls, stored
  separately and only counted as invocations when configured.
* Local-variable declarators in declaration statements and classic for-init
  count toward the local-variable metric; enhanced-for variables,
  try-resources, catch/lambda parameters and pattern bindings are scope
  bindings only.
* Field initializers, initializer blocks and enum-constant arguments/bodies
  are scanned (anonymous bodies are still discovered) but belong to no
  method body, so their stats are not counted.
* Anonymous class bodies are never types; their methods' stats merge into
  the enclosing method's stats and the enclosing named type records the
  body count. Method references (``x::run``) are values, not calls.
"""

from __future__ import annotations

from .errors import Diagnostic
from .lexer import MODIFIER_KEYWORDS, PRIMITIVES, Token, tokenize
from .model import (
    AccessSite,
    BodyStats,
    CompilationUnit,
    FieldDecl,
    ImportDecl,
    InvocationSite,
    MethodDecl,
    SourceFile,
    Supertype,
    TypeDecl,
)

_TYPE_KEYWORDS = {"class": "class", "interface": "interface", "enum": "enum"}

# Tokens permitted inside type arguments at a *usage* site (List<String>).
# '&' is deliberately absent so that `a < b && c > d` never parses as
# generics; intersection types only occur in declarations and casts.
_TYPE_ARG_TOKENS = frozenset(("extends", "super", "?", ",", ".", "[", "]", "@"))


class _ParseError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.message = message
        self.line = line


def parse_unit(file: SourceFile) -> CompilationUnit:
    """Parse one source file leniently.

    On a syntax problem the unit is returned with zero types and one
    diagnostic, so the file contributes only its line count downstream
    (plus its package declaration when that part parsed).
    """
    parser = _Parser(file)
    try:
        return parser.parse()
    except _ParseError as err:
        file.package_name = parser.package
        unit = CompilationUnit(file=file)
        unit.imports = parser.imports
        unit.diagnostics.append(
            Diagnostic(path=file.path, message=err.message, line=err.line)
        )
        return unit


def parse_source(text: str, path: str = "<memory>") -> CompilationUnit:
    """Convenience wrapper for parsing source text directly."""
    return parse_unit(SourceFile(path=path, text=text))


class _Parser:
    def __init__(self, file: SourceFile):
        self.file = file
        self.toks: list[Token] = tokenize(file.text)
        self.i = 0
        self.package = ""
        self.imports: list[ImportDecl] = []

    # ------------------------------------------------------------------
    # token helpers
    # ------------------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else self.toks[-1]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        return self.peek(offset).text == text

    def at_kind(self, kind: str, offset: int = 0) -> bool:
        return self.peek(offset).kind == kind

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            raise _ParseError(f"expected {text!r} but found {tok.text!r}", tok.line)
        return self.advance()

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "name":
            raise _ParseError(f"expected identifier but found {tok.text!r}", tok.line)
        return self.advance()

    def fail(self, message: str) -> _ParseError:
        return _ParseError(message, self.peek().line)

    # ------------------------------------------------------------------
    # compilation unit
    # ------------------------------------------------------------------

    def parse(self) -> CompilationUnit:
        unit = CompilationUnit(file=self.file)
        self._skip_annotations()  # package-info style annotations
        if self.at("package"):
            self.advance()
            self.package = self._parse_dotted_name()
            self.expect(";")
        self.file.package_name = self.package
        while self.at("import"):
            self.advance()
            is_static = False
            if self.at("static"):
                self.advance()
                is_static = True
            name = self._parse_dotted_name()
            on_demand = False
            if self.at(".") and self.at("*", 1):
                self.advance()
                self.advance()
                on_demand = True
            self.expect(";")
            self.imports.append(
                ImportDecl(name=name, on_demand=on_demand, is_static=is_static)
            )
        unit.imports = self.imports
        while not self.at_kind("eof"):
            if self.at(";"):
                self.advance()
                continue
            unit.types.append(self.parse_type_decl(enclosing=None))
        return unit

    def _parse_dotted_name(self) -> str:
        parts = [self.expect_name().text]
        while self.at(".") and self.at_kind("name", 1):
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def _skip_annotations(self) -> None:
        # '@interface' introduces an annotation declaration, not a use.
        while self.at("@") and not self.at("interface", 1):
            self.advance()
            self._parse_dotted_name()
            if self.at("("):
                self._skip_balanced("(", ")")

    def _skip_var_modifiers(self) -> None:
        while True:
            if self.at("final"):
                self.advance()
            elif self.at("@") and not self.at("interface", 1):
                self._skip_annotations()
            else:
                return

    def _skip_balanced(self, open_text: str, close_text: str) -> None:
        depth = 0
        line = self.peek().line
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise _ParseError(f"unbalanced {open_text!r}", line)
            self.advance()
            if tok.text == open_text:
                depth += 1
            elif tok.text == close_text:
                depth -= 1
                if depth == 0:
                    return

    # ------------------------------------------------------------------
    # type declarations
    # ------------------------------------------------------------------

    def _collect_modifiers(self) -> frozenset[str]:
        mods: set[str] = set()
        while True:
            tok = self.peek()
            if tok.text == "@" and not self.at("interface", 1):
                self._skip_annotations()
                continue
            if tok.text in MODIFIER_KEYWORDS:
                mods.add(tok.text)
                self.advance()
                continue
            if tok.kind == "name" and tok.text == "sealed":
                mods.add("sealed")
                self.advance()
                continue
            if (
                tok.kind == "name"
                and tok.text == "non"
                and self.at("-", 1)
                and self.peek(2).text == "sealed"
            ):
                self.advance()
                self.advance()
                self.advance()
                mods.add("non-sealed")
                continue
            return frozenset(mods)

    def _at_type_decl_start(self) -> bool:
        tok = self.peek()
        if tok.text in _TYPE_KEYWORDS:
            return True
        if tok.text == "@" and self.at("interface", 1):
            return True
        if (
            tok.kind == "name"
            and tok.text == "record"
            and self.at_kind("name", 1)
            and (self.at("(", 2) or self.at("<", 2))
        ):
            return True
        return False

    def parse_type_decl(self, enclosing: TypeDecl | None) -> TypeDecl:
        modifiers = self._collect_modifiers()
        tok = self.peek()
        if tok.text == "@" and self.at("interface", 1):
            self.advance()
            self.advance()
            kind = "annotation"
        elif tok.text in _TYPE_KEYWORDS:
            kind = _TYPE_KEYWORDS[self.advance().text]
        elif tok.kind == "name" and tok.text == "record":
            self.advance()
            kind = "record"
        else:
            raise self.fail(f"expected type declaration, found {tok.text!r}")

        name = self.expect_name().text
        if enclosing is not None:
            qualified = f"{enclosing.qualified_name}.{name}"
        elif self.package:
            qualified = f"{self.package}.{name}"
        else:
            qualified = name
        decl = TypeDecl(
            simple_name=name,
            qualified_name=qualified,
            kind=kind,
            modifiers=modifiers,
        )

        if self.at("<"):
            self._skip_type_params()
        if kind == "record":
            self._parse_record_components(decl)
        while True:
            if self.at("extends"):
                self.advance()
                for supertype in self._parse_type_name_list():
                    decl.supertypes.append(Supertype(supertype, "extends"))
            elif self.at("implements"):
                self.advance()
                for supertype in self._parse_type_name_list():
                    decl.supertypes.append(Supertype(supertype, "implements"))
            elif self.at("permits"):
                self.advance()
                self._parse_type_name_list()  # permitted subtypes: not edges
            else:
                break
        self._parse_class_body(decl, is_enum=(kind == "enum"))
        return decl

    def _parse_type_name_list(self) -> list[str]:
        names = [self._parse_type_name()]
        while self.at(","):
            self.advance()
            names.append(self._parse_type_name())
        return names

    def _parse_type_name(self) -> str:
        """Dotted type name with generics stripped (supertype clauses)."""
        self._skip_annotations()
        parts = [self.expect_name().text]
        if self.at("<") and not self._try_skip_type_args():
            raise self.fail("malformed type arguments")
        while self.at(".") and self.at_kind("name", 1):
            self.advance()
            parts.append(self.advance().text)
            if self.at("<") and not self._try_skip_type_args():
                raise self.fail("malformed type arguments")
        return ".".join(parts)

    def _skip_type_params(self) -> None:
        """Skip declaration-site type parameters ('&' bounds allowed)."""
        depth = 0
        line = self.peek().line
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise _ParseError("unbalanced type parameters", line)
            self.advance()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
                if depth == 0:
                    return

    def _try_skip_type_args(self) -> bool:
        """Tentatively skip usage-site type arguments starting at '<'.

        Returns False (position restored) when the bracketed run contains
        anything a type argument cannot, i.e. when '<' was a comparison.
        """
        start = self.i
        depth = 0
        while True:
            tok = self.peek()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1
                if depth == 0:
                    self.advance()
                    return True
            elif tok.kind == "name" or tok.text in PRIMITIVES:
                pass
            elif tok.text in _TYPE_ARG_TOKENS:
                pass
            else:
                self.i = start
                return False
            self.advance()

    def _parse_record_components(self, decl: TypeDecl) -> None:
        # Components are the record's per-instance state: one field each.
        self.expect("(")
        while not self.at(")"):
            self._skip_var_modifiers()
            declared = self._parse_type_ref()
            if declared is None:
                raise self.fail("expected record component type")
            self._skip_varargs_dots()
            name = self.expect_name().text
            decl.fields.append(
                FieldDecl(
                    name=name,
                    owner=decl.qualified_name,
                    modifiers=frozenset(("private", "final")),
                    declared_type=declared,
                )
            )
            if self.at(","):
                self.advance()
        self.expect(")")

    def _skip_varargs_dots(self) -> None:
        if self.at(".") and self.at(".", 1) and self.at(".", 2):
            self.advance()
            self.advance()
            self.advance()

    # ------------------------------------------------------------------
    # class bodies and members
    # ------------------------------------------------------------------

    def _parse_class_body(self, decl: TypeDecl, is_enum: bool) -> None:
        self.expect("{")
        if is_enum:
            self._parse_enum_constants(decl)
        while not self.at("}"):
            if self.at_kind("eof"):
                raise self.fail(f"unterminated body of {decl.simple_name}")
            self._parse_member(decl)
        self.expect("}")

    def _parse_enum_constants(self, decl: TypeDecl) -> None:
        while True:
            if self.at(";"):
                self.advance()
                return
            if self.at("}"):
                return
            self._skip_annotations()
            name = self.expect_name().text
            decl.fields.append(
                FieldDecl(
                    name=name,
                    owner=decl.qualified_name,
                    modifiers=frozenset(),
                    declared_type=decl.simple_name,
                )
            )
            if self.at("("):
                # Constant arguments run during static init: discovered but
                # attributable to no method body, so never counted.
                self.advance()
                self._scan_expression(BodyStats(), {}, decl, stops={")"})
                self.expect(")")
            if self.at("{"):
                self._parse_anonymous_body(decl, sink=None, outer_scope={})
            if self.at(","):
                self.advance()

    def _parse_member(self, decl: TypeDecl) -> None:
        if self.at(";"):
            self.advance()
            return
        if self.at("{"):  # instance initializer block: scanned, not counted
            self._scan_block(BodyStats(), {}, decl)
            return
        modifiers = self._collect_modifiers()
        if self.at("{"):  # static (or stray) initializer block
            self._scan_block(BodyStats(), {}, decl)
            return
        if self._at_type_decl_start():
            nested = self.parse_type_decl(enclosing=decl)
            if modifiers:
                nested.modifiers = frozenset(nested.modifiers | modifiers)
            decl.nested.append(nested)
            return
        if self.at("<"):
            self._skip_type_params()

        # Constructor: bare name equal to the enclosing simple name.
        if (
            self.at_kind("name")
            and self.peek().text == decl.simple_name
            and self.at("(", 1)
        ):
            self.advance()
            self._parse_method_rest(decl, decl.simple_name, modifiers, True)
            return
        # Compact record constructor: name then body, no parameter list.
        if (
            decl.kind == "record"
            and self.at_kind("name")
            and self.peek().text == decl.simple_name
            and self.at("{", 1)
        ):
            self.advance()
            body = BodyStats()
            scope = {f.name: f.declared_type for f in decl.fields}
            self._scan_block(body, scope, decl)
            decl.methods.append(
                MethodDecl(
                    name=decl.simple_name,
                    owner=decl.qualified_name,
                    is_constructor=True,
                    modifiers=modifiers,
                    param_count=len(decl.fields),
                    body=body,
                )
            )
            return

        declared = self._parse_type_ref()
        if declared is None:
            raise self.fail(f"unexpected token in body of {decl.simple_name}")
        name = self.expect_name().text
        if self.at("("):
            self._parse_method_rest(decl, name, modifiers, False)
        else:
            self._parse_field_declarators(decl, name, modifiers, declared)

    def _parse_field_declarators(
        self,
        decl: TypeDecl,
        first_name: str,
        modifiers: frozenset[str],
        declared: str,
    ) -> None:
        name = first_name
        while True:
            self._skip_dims()
            decl.fields.append(
                FieldDecl(
                    name=name,
                    owner=decl.qualified_name,
                    modifiers=modifiers,
                    declared_type=declared,
                )
            )
            if self.at("="):
                self.advance()
                # Initializers run outside any method body: discover
                # anonymous bodies but do not count the stats.
                self._scan_expression(BodyStats(), {}, decl, stops={",", ";"})
            if self.at(","):
                self.advance()
                name = self.expect_name().text
                continue
            self.expect(";")
            return

    def _parse_method_rest(
        self,
        decl: TypeDecl,
        name: str,
        modifiers: frozenset[str],
        is_constructor: bool,
    ) -> None:
        params = self._parse_params()
        self._skip_dims()  # archaic `int m()[]` arrays
        if self.at("throws"):
            self.advance()
            self._parse_type_name_list()
        body: BodyStats | None = None
        if self.at("default"):  # annotation element default value
            self.advance()
            self._scan_expression(BodyStats(), {}, decl, stops={";"})
            self.expect(";")
        elif self.at("{"):
            body = BodyStats()
            self._scan_block(body, dict(params), decl)
        else:
            self.expect(";")
        decl.methods.append(
            MethodDecl(
                name=name,
                owner=decl.qualified_name,
                is_constructor=is_constructor,
                modifiers=modifiers,
                param_count=len(params),
                body=body,
            )
        )

    def _parse_params(self) -> dict[str, str]:
        self.expect("(")
        params: dict[str, str] = {}
        while not self.at(")"):
            self._skip_var_modifiers()
            declared = self._parse_type_ref()
            if declared is None:
                raise self.fail("expected parameter type")
            self._skip_varargs_dots()
            if self.at("this"):  # receiver parameter: not a real parameter
                self.advance()
            else:
                name = self.expect_name().text
                self._skip_dims()
                params[name] = declared
            if self.at(","):
                self.advance()
        self.expect(")")
        return params

    def _parse_type_ref(self) -> str | None:
        """Parse a type reference, returning its dotted name with generics
        and dimensions stripped, or None (position restored) when the
        tokens cannot start a type."""
        tok = self.peek()
        if tok.text in PRIMITIVES or tok.text == "void":
            base = self.advance().text
        elif tok.kind == "name":
            parts = [self.advance().text]
            if self.at("<") and not self._try_skip_type_args():
                self._skip_dims()
                return parts[0]
            while self.at(".") and self.at_kind("name", 1):
                self.advance()
                parts.append(self.advance().text)
                if self.at("<") and not self._try_skip_type_args():
                    break
            base = ".".join(parts)
        else:
            return None
        self._skip_dims()
        return base

    def _skip_dims(self) -> None:
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()

    # ------------------------------------------------------------------
    # statements
    # ------------------------------------------------------------------

    def _scan_block(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        """Scan a '{...}' block; bindings declared inside stay inside."""
        self.expect("{")
        local = dict(scope)
        while not self.at("}"):
            if self.at_kind("eof"):
                raise self.fail("unterminated block")
            self._scan_statement(sink, local, decl)
        self.expect("}")

    def _scan_statement(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        tok = self.peek()
        text = tok.text

        if text == ";":
            self.advance()
            return
        if text == "{":
            self._scan_block(sink, scope, decl)
            return
        if text == "if":
            self.advance()
            self._scan_parens(sink, scope, decl)
            self._scan_statement(sink, dict(scope), decl)
            if self.at("else"):
                self.advance()
                self._scan_statement(sink, dict(scope), decl)
            return
        if text == "while":
            self.advance()
            self._scan_parens(sink, scope, decl)
            self._scan_statement(sink, dict(scope), decl)
            return
        if text == "do":
            self.advance()
            self._scan_statement(sink, dict(scope), decl)
            self.expect("while")
            self._scan_parens(sink, scope, decl)
            self.expect(";")
            return
        if text == "for":
            self._scan_for(sink, scope, decl)
            return
        if text == "switch":
            self.advance()
            self._scan_parens(sink, scope, decl)
            self._scan_switch_body(sink, dict(scope), decl)
            return
        if text == "try":
            self._scan_try(sink, scope, decl)
            return
        if text == "synchronized":
            self.advance()
            if self.at("("):
                self._scan_parens(sink, scope, decl)
            self._scan_statement(sink, dict(scope), decl)
            return
        if text in ("return", "throw"):
            self.advance()
            if not self.at(";"):
                self._scan_expression(sink, scope, decl, stops={";"})
            self.expect(";")
            return
        if text in ("break", "continue"):
            self.advance()
            if self.at_kind("name"):
                self.advance()  # label, not an access
            self.expect(";")
            return
        if text == "assert":
            self.advance()
            self._scan_expression(sink, scope, decl, stops={";"})
            self.expect(";")
            return
        if text in MODIFIER_KEYWORDS or text == "@" or self._at_type_decl_start():
            # possibly a local class declaration
            start = self.i
            self._collect_modifiers()
            is_type = self._at_type_decl_start()
            self.i = start
            if is_type:
                modifiers = self._collect_modifiers()
                nested = self.parse_type_decl(enclosing=decl)
                if modifiers:
                    nested.modifiers = frozenset(nested.modifiers | modifiers)
                decl.nested.append(nested)
                return
        if tok.kind == "name" and self.at(":", 1):
            self.advance()  # statement label, not an access
            self.advance()
            self._scan_statement(sink, scope, decl)
            return
        if self._try_scan_local_decl(sink, scope, decl, count=True):
            return
        self._scan_expression(sink, scope, decl, stops={";"})
        self.expect(";")

    def _scan_parens(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        self.expect("(")
        self._scan_expression(sink, scope, decl, stops={")"})
        self.expect(")")

    def _scan_for(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        self.expect("for")
        self.expect("(")
        local = dict(scope)
        # enhanced for: [final] Type name : expression
        start = self.i
        self._skip_var_modifiers()
        declared = self._parse_type_ref()
        if (
            declared is not None
            and self.at_kind("name")
            and self.at(":", 1)
        ):
            name = self.advance().text
            local[name] = declared  # loop variable: binding, not a declarator
            self.advance()
            self._scan_expression(sink, local, decl, stops={")"})
            self.expect(")")
            self._scan_statement(sink, local, decl)
            return
        self.i = start
        # classic for: init; condition; update
        if self.at(";"):
            self.advance()
        elif not self._try_scan_local_decl(sink, local, decl, count=True):
            self._scan_expression(sink, local, decl, stops={";"})
            self.expect(";")
        if not self.at(";"):
            self._scan_expression(sink, local, decl, stops={";"})
        self.expect(";")
        if not self.at(")"):
            self._scan_expression(sink, local, decl, stops={")"})
        self.expect(")")
        self._scan_statement(sink, local, decl)

    def _scan_try(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        self.expect("try")
        local = dict(scope)
        if self.at("("):
            self.advance()
            while not self.at(")"):
                if not self._try_scan_local_decl(
                    sink, local, decl, count=False, ends=(";", ")")
                ):
                    self._scan_expression(sink, local, decl, stops={")", ";"})
                if self.at(";"):
                    self.advance()
            self.expect(")")
        self._scan_block(sink, local, decl)
        while self.at("catch"):
            self.advance()
            self.expect("(")
            catch_scope = dict(scope)
            self._skip_var_modifiers()
            declared = self._parse_type_ref() or ""
            while self.at("|"):  # multi-catch
                self.advance()
                self._parse_type_ref()
            if self.at_kind("name"):
                catch_scope[self.advance().text] = declared
            self.expect(")")
            self._scan_block(sink, catch_scope, decl)
        if self.at("finally"):
            self.advance()
            self._scan_block(sink, dict(scope), decl)

    def _scan_switch_body(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        self.expect("{")
        local = dict(scope)
        while not self.at("}"):
            if self.at_kind("eof"):
                raise self.fail("unterminated switch body")
            if self.at("case"):
                self.advance()
                self._scan_case_label(sink, local, decl)
                continue
            if self.at("default"):
                self.advance()
                if self.at("->"):
                    self.advance()
                    self._scan_arrow_case_body(sink, local, decl)
                else:
                    self.expect(":")
                continue
            self._scan_statement(sink, local, decl)
        self.expect("}")

    def _scan_case_label(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        # Type-pattern label: bind the name, never count the type.
        start = self.i
        declared = self._parse_type_ref()
        if (
            declared is not None
            and self.at_kind("name")
            and (self.at(":", 1) or self.at("->", 1) or self.at("when", 1))
        ):
            scope[self.advance().text] = declared
        else:
            self.i = start
            self._scan_expression(sink, scope, decl, stops={":", "->"})
        if self.at("when"):
            self.advance()
            self._scan_expression(sink, scope, decl, stops={":", "->"})
        if self.at(":"):
            self.advance()
            return
        self.expect("->")
        self._scan_arrow_case_body(sink, scope, decl)

    def _scan_arrow_case_body(
        self, sink: BodyStats, scope: dict[str, str], decl: TypeDecl
    ) -> None:
        if self.at("{"):
            self._scan_block(sink, scope, decl)
        else:
            self._scan_expression(sink, scope, decl, stops={";"})
            self.expect(";")

    def _try_scan_local_decl(
        self,
        sink: BodyStats,
        scope: dict[str, str],
        decl: TypeDecl,
        count: bool,
        ends: tuple[str, ...] = (";",),
    ) -> bool:
        """Tentatively parse `Type a = ..., b;`; False restores position.

        ``count=False`` registers the bindings without incrementing the
        local-variable counter (try-with-resources). The declaration ends
        at the first token in ``ends``; ')' is left unconsumed so the
        caller's clause parsing still sees it.
        """
        start = self.i
        self._skip_var_modifiers()
        declared = self._parse_type_ref()
        if declared is None or not self.at_kind("name"):
            self.i = start
            return False
        nxt = self.peek(1).text
        if nxt not in ("=", ",", ";", "[") or (nxt == "[" and not self.at("]", 2)):
            self.i = start
            return False
        stops = set(ends) | {","}
        while True:
            name = self.expect_name().text
            self._skip_dims()
            scope[name] = declared
            if count:
                sink.local_var_decls += 1
            if self.at("="):
                self.advance()
                self._scan_expression(sink, scope, decl, stops=stops)
            if self.at(","):
                self.advance()
                continue
            tok = self.peek()
            if tok.text not in ends:
                raise self.fail(f"malformed declaration near {tok.text!r}")
            if tok.text != ")":
                self.advance()
            return True

    # ------------------------------------------------------------------
    # expressions
    # ------------------------------------------------------------------

    def _receiver_info(
        self, chain: tuple[str, list[str]] | None, scope: dict[str, str]
    ) -> tuple[str, str | None, str | None]:
        """Map the dotted-chain state left of a '.' to (receiver_kind,
        receiver, receiver_type_text) for the site being recorded."""
        if chain is None:
            return "expr", None, None
        base, segments = chain
        if base == "this" and not segments:
            return "this", None, None
        if base == "super" and not segments:
            return "super", None, None
        if base == "name":
            if len(segments) == 1:
                name = segments[0]
                if name in scope:
                    return "var", name, scope[name] or None
                return "name", name, None
            return "chain", ".".join(segments), None
        return "expr", None, None

    def _scan_expression(
        self,
        sink: BodyStats,
        scope: dict[str, str],
        decl: TypeDecl,
        stops: set[str] | frozenset[str],
    ) -> None:
        """Scan one expression region, recording occurrence sites.

        Stops (without consuming) at any token in ``stops`` at this nesting
        level; delimiters recurse, so interior commas or colons never
        terminate the region.
        """
        chain: tuple[str, list[str]] | None = None
        pending_dot = False
        while True:
            tok = self.peek()
            text = tok.text
            if tok.kind == "eof":
                raise self.fail("unterminated expression")
            if text in stops:
                return
            if text == "}":
                raise self.fail("unexpected '}' in expression")

            if tok.kind == "name":
                nxt = self.peek(1).text
                if nxt == "(":
                    if pending_dot:
                        kind, recv, recv_type = self._receiver_info(chain, scope)
                    else:
                        kind, recv, recv_type = "none", None, None
                    sink.invocation_sites.append(
                        InvocationSite(
                            name=text,
                            receiver_kind=kind,
                            receiver=recv,
                            receiver_type_text=recv_type,
                            line=tok.line,
                        )
                    )
                    self.advance()
                    self.advance()
                    if not self.at(")"):
                        self._scan_expression(sink, scope, decl, stops={")"})
                    self.expect(")")
                    chain = ("expr", [])
                    pending_dot = False
                    continue
                if nxt == "->":
                    # single-parameter lambda; stats stay in this sink
                    lambda_scope = dict(scope)
                    lambda_scope[text] = ""
                    self.advance()
                    self.advance()
                    self._scan_lambda_body(sink, lambda_scope, decl, stops)
                    chain = ("expr", [])
                    pending_dot = False
                    continue
                if pending_dot:
                    form = (
                        "this-qualified"
                        if chain is not None and chain[0] == "this" and not chain[1]
                        else "qualified"
                    )
                    kind, recv, recv_type = self._receiver_info(chain, scope)
                    sink.field_access_sites.append(
                        AccessSite(
                            name=text,
                            form=form,
                            receiver_kind=kind,
                            receiver=recv,
                            receiver_type_text=recv_type,
                            line=tok.line,
                        )
                    )
                    if chain is not None and chain[0] == "name":
                        chain[1].append(text)
                    else:
                        chain = ("expr", [])
                else:
                    if text not in scope:
                        sink.field_access_sites.append(
                            AccessSite(
                                name=text,
                                form="simple-name",
                                receiver_kind="none",
                                receiver=None,
                                receiver_type_text=None,
                                line=tok.line,
                            )
                        )
                    chain = ("name", [text])
                pending_dot = False
                self.advance()
                if self.at("::"):
                    self.advance()  # method reference: not an invocation
                    if self.at_kind("name") or self.at("new"):
                        self.advance()
                    chain = ("expr", [])
                continue

            if text == "this":
                if self.at("(", 1):
                    self._record_delegation(sink, decl.simple_name, "this", tok.line)
                    self.advance()
                    self.advance()
                    if not self.at(")"):
                        self._scan_expression(sink, scope, decl, stops={")"})
                    self.expect(")")
                    chain = ("expr", [])
                else:
                    self.advance()
                    chain = ("this", [])
                pending_dot = False
                continue

            if text == "super":
                if self.at("(", 1):
                    self._record_delegation(sink, "super", "super", tok.line)
                    self.advance()
                    self.advance()
                    if not self.at(")"):
                        self._scan_expression(sink, scope, decl, stops={")"})
                    self.expect(")")
                    chain = ("expr", [])
                elif self.at("::", 1):
                    self.advance()
                    self.advance()
                    if self.at_kind("name"):
                        self.advance()
                    chain = ("expr", [])
                else:
                    self.advance()
                    chain = ("super", [])
                pending_dot = False
                continue

            if text == "new":
                self.advance()
                self._scan_new(sink, scope, decl, tok.line)
                chain = ("expr", [])
                pending_dot = False
                continue

            if text == "(":
                lambda_scope = self._try_lambda_params(scope)
                if lambda_scope is not None:
                    self._scan_lambda_body(sink, lambda_scope, decl, stops)
                else:
                    self.advance()
                    if not self.at(")"):
                        self._scan_expression(sink, scope, decl, stops={")"})
                    self.expect(")")
                chain = ("expr", [])
                pending_dot = False
                continue

            if text == "[":
                self.advance()
                if not self.at("]"):
                    self._scan_expression(sink, scope, decl, stops={"]"})
                self.expect("]")
                chain = ("expr", [])
                pending_dot = False
                continue

            if text == "{":  # array initializer
                self.advance()
                if not self.at("}"):
                    self._scan_expression(sink, scope, decl, stops={"}"})
                self.expect("}")
                chain = ("expr", [])
                pending_dot = False
                continue

            if text == "instanceof":
                self.advance()
                self._skip_var_modifiers()
                self._parse_type_ref()
                if self.at_kind("name") and not self.at("(", 1):
                    scope[self.advance().text] = ""  # pattern binding
                chain = None
                pending_dot = False
                continue

            if text == "switch":  # switch expression
                self.advance()
                self._scan_parens(sink, scope, decl)
                self._scan_switch_body(sink, dict(scope), decl)
                chain = ("expr", [])
                pending_dot = False
                continue

            if text == ".":
                self.advance()
                pending_dot = True
                if self.at("<"):  # explicit type witness: x.<T>m()
                    self._try_skip_type_args()
                continue

            if text == "::":
                self.advance()  # expr::m — skip the method name
                if self.at_kind("name") or self.at("new"):
                    self.advance()
                chain = ("expr", [])
                pending_dot = False
                continue

            if tok.kind in ("str", "char"):
                self.advance()
                chain = ("expr", [])
                pending_dot = False
                continue

            # numbers, literal keywords (true/false/null), primitive
            # keywords (int.class), all remaining operators
            self.advance()
            chain = None
            pending_dot = False

    def _record_delegation(
        self, sink: BodyStats, name: str, kind: str, line: int
    ) -> None:
        sink.constructor_calls.append(
            InvocationSite(
                name=name,
                receiver_kind=kind,
                receiver=None,
                receiver_type_text=None,
                line=line,
                is_constructor_call=True,
            )
        )

    def _scan_lambda_body(
        self,
        sink: BodyStats,
        scope: dict[str, str],
        decl: TypeDecl,
        stops: set[str] | frozenset[str],
    ) -> None:
        """Lambda stats merge into the enclosing method's stats."""
        if self.at("{"):
            self._scan_block(sink, scope, decl)
        else:
            self._scan_expression(sink, scope, decl, stops=set(stops) | {","})

    def _try_lambda_params(self, scope: dict[str, str]) -> dict[str, str] | None:
        """At '(': when the parenthesized run is a lambda parameter list
        followed by '->', consume through '->' and return the extended
        scope; otherwise leave the position untouched."""
        depth = 0
        j = self.i
        while j < len(self.toks):
            tok = self.toks[j]
            if tok.kind == "eof":
                return None
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if j + 1 >= len(self.toks) or self.toks[j + 1].text != "->":
            return None
        params = dict(scope)
        self.expect("(")
        while not self.at(")"):
            self._skip_var_modifiers()
            if self.at_kind("name") and (self.at(",", 1) or self.at(")", 1)):
                params[self.advance().text] = ""
            else:
                declared = self._parse_type_ref() or ""
                self._skip_varargs_dots()
                if self.at_kind("name"):
                    name = self.advance().text
                    self._skip_dims()
                    params[name] = declared
            if self.at(","):
                self.advance()
        self.expect(")")
        self.expect("->")
        return params

    def _scan_new(
        self,
        sink: BodyStats,
        scope: dict[str, str],
        decl: TypeDecl,
        line: int,
    ) -> None:
        declared = self._parse_type_ref()
        if declared is None:
            return
        if self.at("["):
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    self._scan_expression(sink, scope, decl, stops={"]"})
                self.expect("]")
            if self.at("{"):
                self.advance()
                if not self.at("}"):
                    self._scan_expression(sink, scope, decl, stops={"}"})
                self.expect("}")
            return
        if self.at("("):
            sink.constructor_calls.append(
                InvocationSite(
                    name=declared.rsplit(".", 1)[-1],
                    receiver_kind="chain" if "." in declared else "name",
                    receiver=declared,
                    receiver_type_text=None,
                    line=line,
                    is_constructor_call=True,
                )
            )
            self.advance()
            if not self.at(")"):
                self._scan_expression(sink, scope, decl, stops={")"})
            self.expect(")")
            if self.at("{"):
                self._parse_anonymous_body(decl, sink=sink, outer_scope=scope)

    # ------------------------------------------------------------------
    # anonymous class bodies
    # ------------------------------------------------------------------

    def _parse_anonymous_body(
        self,
        decl: TypeDecl,
        sink: BodyStats | None,
        outer_scope: dict[str, str],
    ) -> None:
        """Parse `new T(...) { ... }` or an enum-constant body.

        The body is not a TypeDecl: its concrete method bodies are scanned
        into one combined BodyStats which merges into the enclosing method's
        sink (when there is one) and is recorded on the enclosing named type.
        """
        stats = BodyStats()
        self.expect("{")
        while not self.at("}"):
            if self.at_kind("eof"):
                raise self.fail("unterminated anonymous body")
            if self.at(";"):
                self.advance()
                continue
            if self.at("{"):  # instance initializer: scanned, never counted
                self._scan_block(BodyStats(), dict(outer_scope), decl)
                continue
            modifiers = self._collect_modifiers()
            if self.at("{"):
                self._scan_block(BodyStats(), dict(outer_scope), decl)
                continue
            if self._at_type_decl_start():
                nested = self.parse_type_decl(enclosing=decl)
                if modifiers:
                    nested.modifiers = frozenset(nested.modifiers | modifiers)
                decl.nested.append(nested)
                continue
            if self.at("<"):
                self._skip_type_params()
            declared = self._parse_type_ref()
            if declared is None:
                raise self.fail("unexpected token in anonymous body")
            name = self.expect_name().text
            if self.at("("):
                # method of the anonymous class: parameters extend a copy
                # of the enclosing bindings (lexical capture)
                params = self._parse_params()
                self._skip_dims()
                if self.at("throws"):
                    self.advance()
                    self._parse_type_name_list()
                if self.at("{"):
                    method_scope = dict(outer_scope)
                    method_scope.update(params)
                    self._scan_block(stats, method_scope, decl)
                else:
                    self.expect(";")
            else:
                # field of the anonymous class: initializer scanned only
                while True:
                    self._skip_dims()
                    if self.at("="):
                        self.advance()
                        self._scan_expression(
                            BodyStats(), dict(outer_scope), decl, stops={",", ";"}
                        )
                    if self.at(","):
                        self.advance()
                        self.expect_name()
                        continue
                    self.expect(";")
                    break
        self.expect("}")
        decl.anonymous_bodies.append(
            BodyStats(
                local_var_decls=stats.local_var_decls,
                field_access_sites=list(stats.field_access_sites),
                invocation_sites=list(stats.invocation_sites),
                constructor_calls=list(stats.constructor_calls),
            )
        )
        if sink is not None:
            sink.merge(stats)
