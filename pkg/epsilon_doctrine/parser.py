from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from epsilon_doctrine.exceptions import (
	ArityMismatchError,
	ParseError,
	TypeMismatchError,
	UnknownSymbolError,
)
from epsilon_doctrine.syntax import (
	BOT,
	EMPTY,
	TOP,
	UNIT,
	And,
	App,
	BaseType,
	Context,
	Epsilon,
	Eq,
	Exists,
	Forall,
	Fun,
	Imp,
	Not,
	Or,
	Prod,
	Rel,
	Sequent,
	Signature,
	Sum,
	Theory,
	Var,
	show,
	term_type,
	wellform_formula,
	wellform_sequent,
)
from epsilon_doctrine.utils import throw

THEORY_GRAMMAR = r"""
start: [item (";" item)*] ";"?

?item: "type" NAME -> type_decl
	| "fun" NAME ":" type -> fun_decl
	| "rel" NAME ["(" [type ("," type)*] ")"] -> rel_decl
	| "axiom" NAME ":" sequent -> axiom_decl
	| "goal" NAME ":" sequent -> goal_decl
	| "def" NAME [context] ":=" expr -> def_decl

sequent: context "|" [expr ("," expr)*] "|-" expr
context: "[" [binding ("," binding)*] "]"
binding: NAME ":" type

?type: sum_type "->" type -> arrow_t
	| sum_type
?sum_type: sum_type "+" prod_type -> sum_t
	| prod_type
?prod_type: prod_type "*" atom_type -> prod_t
	| atom_type
?atom_type: "Unit" -> unit_t
	| "Empty" -> empty_t
	| NAME -> base_t
	| "(" type ")" -> paren_t

?expr: or_expr "->" expr -> imp
	| or_expr
?or_expr: or_expr "\\/" and_expr -> or_
	| and_expr
?and_expr: and_expr "/\\" not_expr -> and_
	| not_expr
?not_expr: "~" not_expr -> not_
	| eq_expr
?eq_expr: atom "=" atom -> eq
	| atom
?atom: "exists" NAME ":" type "." expr -> exists_
	| "forall" NAME ":" type "." expr -> forall_
	| "eps" NAME ":" type "." expr -> eps_
	| NAME "(" [expr ("," expr)*] ")" -> call
	| NAME -> ident
	| "true" -> true
	| "false" -> false
	| "(" expr ")"

model: [model_item (";" model_item)*] ";"?

?model_item: "carrier" NAME "=" INT -> carrier_decl
	| "point" NAME "=" INT -> point_decl
	| "fun" NAME [":" type] "=" table -> fun_table
	| "rel" NAME [rel_args] "=" tuples -> rel_table

rel_args: "(" [type ("," type)*] ")"

table: "[" [INT ("," INT)*] "]"
tuples: "{" [row ("," row)*] "}"
row: "(" [INT ("," INT)*] ")"
	| INT

NAME: /[A-Za-z_][A-Za-z0-9_']*/
COMMENT: /#[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

# Binder bodies extend as far right as possible; the resulting shift/reduce conflicts resolve
# as shift.
_parser = Lark(
	THEORY_GRAMMAR,
	parser="lalr",
	start=["start", "sequent", "expr", "type", "binding", "context", "model"],
	propagate_positions=True,
	maybe_placeholders=False,
)


def parse_tree(text: str, start: str = "start") -> Tree:
	try:
		return _parser.parse(text, start=start)
	except UnexpectedInput as e:
		raise_parse_error(e)


def raise_parse_error(e: UnexpectedInput):
	if isinstance(e, UnexpectedToken):
		message = f"Unexpected token {e.token!r}"
	elif isinstance(e, UnexpectedCharacters):
		message = f"Unexpected character {e.char!r}"
	elif isinstance(e, UnexpectedEOF):
		message = "Unexpected end of input"
	else:
		message = "Syntax error"
	line = getattr(e, "line", None)
	column = getattr(e, "column", None)
	if line is not None and line < 0:
		line = column = None
	raise ParseError(message, line=line, column=column) from None


def _where(node) -> str:
	meta = getattr(node, "meta", None)
	if meta is not None and not meta.empty:
		return f" (line {meta.line}, column {meta.column})"
	if isinstance(node, Token) and node.line is not None:
		return f" (line {node.line}, column {node.column})"
	return ""


class Resolver:
	"""Turns parse trees into typed syntax, deciding identifiers by scope and position."""

	def __init__(self, signature: Signature):
		self.signature = signature

	# types

	def type(self, tree):
		kind = tree.data
		if kind == "base_t":
			name = str(tree.children[0])
			if not self.signature.has_type(name):
				throw(f"Unknown type {name}{_where(tree)}", UnknownSymbolError)
			return BaseType(name)
		if kind == "unit_t":
			return UNIT
		if kind == "empty_t":
			return EMPTY
		if kind == "paren_t":
			return self.type(tree.children[0])
		left, right = (self.type(c) for c in tree.children)
		return {"arrow_t": Fun, "sum_t": Sum, "prod_t": Prod}[kind](left, right)

	def function_type(self, tree):
		"""Split `T1 * ... * Tn -> T` into argument types and result; anything else is a constant."""
		if tree.data != "arrow_t":
			return (), self.type(tree)
		dom, cod = tree.children
		return tuple(self.type(t) for t in _product_factors(dom)), self.type(cod)

	def context(self, tree) -> Context:
		ctx = Context()
		for binding in tree.children:
			name, t = self.binding(binding)
			ctx = ctx.extend(name, t)
		return ctx

	def binding(self, tree):
		name, t = tree.children
		return str(name), self.type(t)

	# terms and formulas

	def is_term(self, tree, scope: dict) -> bool:
		if tree.data == "eps_":
			return True
		if tree.data == "ident":
			name = str(tree.children[0])
			return name in scope or self.signature.function(name) is not None
		if tree.data == "call":
			return self.signature.function(str(tree.children[0])) is not None
		return False

	def term(self, tree, scope: dict):
		kind = tree.data
		if kind == "ident":
			name = str(tree.children[0])
			if name in scope:
				return Var(name, scope[name])
			return self._application(tree, name, [], scope)
		if kind == "call":
			name = str(tree.children[0])
			return self._application(tree, name, tree.children[1:], scope)
		if kind == "eps_":
			name, t, body = tree.children
			var_type = self.type(t)
			return Epsilon(str(name), var_type, self.formula(body, {**scope, str(name): var_type}))
		throw(f"Expected a term, found a formula{_where(tree)}", TypeMismatchError)

	def _application(self, tree, name, arg_trees, scope):
		symbol = self.signature.function(name)
		if symbol is None:
			if self.signature.relation(name):
				throw(f"Relation {name} used as a term{_where(tree)}", TypeMismatchError)
			throw(f"Unknown symbol {name}{_where(tree)}", UnknownSymbolError)
		args = tuple(self.term(a, scope) for a in arg_trees)
		self._check_arguments(tree, name, symbol.args, args)
		return App(symbol, args)

	def _check_arguments(self, tree, name, expected, args):
		if len(args) != len(expected):
			throw(
				f"{name} expects {len(expected)} arguments, got {len(args)}{_where(tree)}",
				ArityMismatchError,
			)
		for i, (arg, t) in enumerate(zip(args, expected)):
			if term_type(arg) != t:
				throw(
					f"Argument {i + 1} of {name} has type {show(term_type(arg))}, expected "
					f"{show(t)}{_where(tree)}",
					TypeMismatchError,
				)

	def formula(self, tree, scope: dict):
		kind = tree.data
		if kind in ("imp", "or_", "and_"):
			left, right = (self.formula(c, scope) for c in tree.children)
			return {"imp": Imp, "or_": Or, "and_": And}[kind](left, right)
		if kind == "not_":
			return Not(self.formula(tree.children[0], scope))
		if kind == "true":
			return TOP
		if kind == "false":
			return BOT
		if kind == "eq":
			left, right = (self.term(c, scope) for c in tree.children)
			if term_type(left) != term_type(right):
				throw(
					f"Equation between terms of types {show(term_type(left))} and "
					f"{show(term_type(right))}{_where(tree)}",
					TypeMismatchError,
				)
			return Eq(left, right)
		if kind in ("exists_", "forall_"):
			name, t, body = tree.children
			var_type = self.type(t)
			body = self.formula(body, {**scope, str(name): var_type})
			return (Exists if kind == "exists_" else Forall)(str(name), var_type, body)
		if kind in ("ident", "call"):
			name = str(tree.children[0])
			symbol = self.signature.relation(name)
			if symbol is None or (kind == "ident" and name in scope):
				if kind == "ident" and name in scope or self.signature.function(name):
					throw(f"Term {name} used as a formula{_where(tree)}", TypeMismatchError)
				throw(f"Unknown symbol {name}{_where(tree)}", UnknownSymbolError)
			args = tuple(self.term(a, scope) for a in tree.children[1:])
			self._check_arguments(tree, name, symbol.args, args)
			return Rel(symbol, args)
		throw(f"Expected a formula, found a term{_where(tree)}", TypeMismatchError)

	def sequent(self, tree) -> Sequent:
		ctx_tree, *formulas = tree.children
		ctx = self.context(ctx_tree)
		scope = dict(ctx.entries)
		formulas = [self.formula(f, scope) for f in formulas]
		seq = Sequent(ctx, tuple(formulas[:-1]), formulas[-1])
		wellform_sequent(seq, self.signature)
		return seq


def _product_factors(tree) -> list:
	if tree.data == "prod_t":
		left, right = tree.children
		return _product_factors(left) + [right]
	return [tree]


def parse_theory(source: str, signature: Signature | None = None) -> Theory:
	"""Parse a theory file into its signature, axioms, goals and definitions.

	Declarations are processed in order, so every symbol must be declared before use.
	"""
	tree = parse_tree(source)
	sig = signature or Signature()
	axioms, goals, definitions = {}, {}, {}

	for item in tree.children:
		name = str(item.children[0])
		if item.data == "type_decl":
			sig = sig.declare_type(name)
		elif item.data == "fun_decl":
			args, result = Resolver(sig).function_type(item.children[1])
			sig = sig.declare_function(name, args, result)
		elif item.data == "rel_decl":
			resolver = Resolver(sig)
			sig = sig.declare_relation(name, [resolver.type(t) for t in item.children[1:]])
		elif item.data in ("axiom_decl", "goal_decl"):
			target = axioms if item.data == "axiom_decl" else goals
			if name in axioms or name in goals:
				throw(f"Sequent {name} is declared twice{_where(item)}")
			target[name] = Resolver(sig).sequent(item.children[1])
		elif item.data == "def_decl":
			resolver = Resolver(sig)
			rest = item.children[1:]
			ctx = Context()
			if len(rest) == 2:
				ctx = resolver.context(rest[0])
			body = rest[-1]
			scope = dict(ctx.entries)
			value = resolver.term(body, scope) if resolver.is_term(body, scope) else None
			if value is None:
				value = resolver.formula(body, scope)
				wellform_formula(ctx, value, sig)
			definitions[name] = (ctx, value)

	return Theory(sig, axioms, goals, definitions)


def parse_sequent(text: str, signature: Signature) -> Sequent:
	return Resolver(signature).sequent(parse_tree(text, "sequent"))


def parse_formula(text: str, signature: Signature, ctx: Context | None = None):
	ctx = ctx or Context()
	phi = Resolver(signature).formula(parse_tree(text, "expr"), dict(ctx.entries))
	wellform_formula(ctx, phi, signature)
	return phi


def parse_term(text: str, signature: Signature, ctx: Context | None = None):
	ctx = ctx or Context()
	return Resolver(signature).term(parse_tree(text, "expr"), dict(ctx.entries))


def parse_type(text: str, signature: Signature):
	return Resolver(signature).type(parse_tree(text, "type"))


def parse_binding(text: str, signature: Signature) -> tuple:
	return Resolver(signature).binding(parse_tree(text, "binding"))


def parse_context(text: str, signature: Signature) -> Context:
	return Resolver(signature).context(parse_tree(text, "context"))
