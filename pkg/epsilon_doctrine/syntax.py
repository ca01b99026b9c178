"""
Many-typed first-order syntax of the Epsilon calculus.

Terms, formulas, contexts and sequents are immutable dataclasses. Terms carry their type
intrinsically (variables are annotated, applications reach their symbol's result type, ε-terms
their bound type), so `term_type` never needs a context; `typecheck_term` and
`wellform_formula` additionally verify every annotation against a context and a signature.

Binders (∃, ∀, ε) use names on the surface. Alpha-equivalence is decided on de Bruijn keys and
substitution is simultaneous and capture-avoiding, renaming a binder to `x'`, `x''`, ... only
when an incoming term would otherwise be captured.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from epsilon_doctrine.exceptions import (
	ArityMismatchError,
	DuplicateVariableError,
	TypeMismatchError,
	UnboundVariableError,
	UnknownSymbolError,
	ValidationError,
)
from epsilon_doctrine.utils import throw


class _Printable:
	def __str__(self) -> str:
		return show(self)


# Types
# -----


@dataclass(frozen=True)
class BaseType(_Printable):
	name: str


@dataclass(frozen=True)
class Prod(_Printable):
	left: "TypeExpr"
	right: "TypeExpr"


@dataclass(frozen=True)
class Fun(_Printable):
	dom: "TypeExpr"
	cod: "TypeExpr"


@dataclass(frozen=True)
class Sum(_Printable):
	left: "TypeExpr"
	right: "TypeExpr"


@dataclass(frozen=True)
class UnitType(_Printable):
	pass


@dataclass(frozen=True)
class EmptyType(_Printable):
	pass


UNIT = UnitType()
EMPTY = EmptyType()

TypeExpr = Union[BaseType, Prod, Fun, Sum, UnitType, EmptyType]


def base_types_of(t: TypeExpr) -> list[str]:
	if isinstance(t, BaseType):
		return [t.name]
	if isinstance(t, (Prod, Sum)):
		return base_types_of(t.left) + base_types_of(t.right)
	if isinstance(t, Fun):
		return base_types_of(t.dom) + base_types_of(t.cod)
	return []


def contains_empty(t: TypeExpr) -> bool:
	if isinstance(t, EmptyType):
		return True
	if isinstance(t, (Prod, Sum)):
		return contains_empty(t.left) or contains_empty(t.right)
	if isinstance(t, Fun):
		return contains_empty(t.dom) or contains_empty(t.cod)
	return False


# Signature
# ---------


@dataclass(frozen=True)
class FunctionSymbol(_Printable):
	name: str
	args: tuple[TypeExpr, ...]
	result: TypeExpr


@dataclass(frozen=True)
class RelationSymbol(_Printable):
	name: str
	args: tuple[TypeExpr, ...]


@dataclass(frozen=True)
class Signature:
	base_types: tuple[str, ...] = ()
	functions: tuple[FunctionSymbol, ...] = ()
	relations: tuple[RelationSymbol, ...] = ()

	@cached_property
	def _functions(self) -> dict[str, FunctionSymbol]:
		return {f.name: f for f in self.functions}

	@cached_property
	def _relations(self) -> dict[str, RelationSymbol]:
		return {r.name: r for r in self.relations}

	def function(self, name: str) -> FunctionSymbol | None:
		return self._functions.get(name)

	def relation(self, name: str) -> RelationSymbol | None:
		return self._relations.get(name)

	def has_type(self, name: str) -> bool:
		return name in self.base_types

	def check_type(self, t: TypeExpr) -> TypeExpr:
		for name in base_types_of(t):
			if not self.has_type(name):
				throw(f"Unknown type {name}", UnknownSymbolError)
		return t

	def declare_type(self, name: str) -> "Signature":
		if self.has_type(name):
			throw(f"Type {name} is already declared")
		return Signature(self.base_types + (name,), self.functions, self.relations)

	def declare_function(
		self, name: str, args: Iterable[TypeExpr], result: TypeExpr
	) -> "Signature":
		self._validate_symbol_name(name)
		args = tuple(args)
		for t in (*args, result):
			self.check_type(t)
		symbol = FunctionSymbol(name, args, result)
		return Signature(self.base_types, self.functions + (symbol,), self.relations)

	def declare_relation(self, name: str, args: Iterable[TypeExpr] = ()) -> "Signature":
		self._validate_symbol_name(name)
		args = tuple(args)
		for t in args:
			self.check_type(t)
		symbol = RelationSymbol(name, args)
		return Signature(self.base_types, self.functions, self.relations + (symbol,))

	def _validate_symbol_name(self, name: str) -> None:
		if self.function(name) or self.relation(name):
			throw(f"Symbol {name} is already declared")

	def restrict(
		self,
		types: Iterable[str] = (),
		functions: Iterable[str] = (),
		relations: Iterable[str] = (),
	) -> "Signature":
		"""The sub-signature on the named symbols, keeping declaration order and every base type
		those symbols need."""
		functions, relations = set(functions), set(relations)
		kept_functions = tuple(f for f in self.functions if f.name in functions)
		kept_relations = tuple(r for r in self.relations if r.name in relations)
		needed = set(types)
		for f in kept_functions:
			for t in (*f.args, f.result):
				needed.update(base_types_of(t))
		for r in kept_relations:
			for t in r.args:
				needed.update(base_types_of(t))
		kept_types = tuple(t for t in self.base_types if t in needed)
		return Signature(kept_types, kept_functions, kept_relations)

	def mentions_empty(self) -> bool:
		return any(contains_empty(t) for f in self.functions for t in (*f.args, f.result)) or any(
			contains_empty(t) for r in self.relations for t in r.args
		)


# Terms and formulas
# ------------------


@dataclass(frozen=True)
class Var(_Printable):
	name: str
	type: TypeExpr


@dataclass(frozen=True)
class App(_Printable):
	symbol: FunctionSymbol
	args: tuple["Term", ...] = ()


@dataclass(frozen=True)
class Epsilon(_Printable):
	var: str
	type: TypeExpr
	body: "Formula"


Term = Union[Var, App, Epsilon]


@dataclass(frozen=True)
class Rel(_Printable):
	symbol: RelationSymbol
	args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq(_Printable):
	left: Term
	right: Term


@dataclass(frozen=True)
class Top(_Printable):
	pass


@dataclass(frozen=True)
class Bot(_Printable):
	pass


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class And(_Printable):
	left: "Formula"
	right: "Formula"


@dataclass(frozen=True)
class Or(_Printable):
	left: "Formula"
	right: "Formula"


@dataclass(frozen=True)
class Imp(_Printable):
	left: "Formula"
	right: "Formula"


@dataclass(frozen=True)
class Not(_Printable):
	body: "Formula"


@dataclass(frozen=True)
class Exists(_Printable):
	var: str
	type: TypeExpr
	body: "Formula"


@dataclass(frozen=True)
class Forall(_Printable):
	var: str
	type: TypeExpr
	body: "Formula"


Formula = Union[Rel, Eq, Top, Bot, And, Or, Imp, Not, Exists, Forall]

BINDERS = (Exists, Forall, Epsilon)
CONNECTIVES = (And, Or, Imp)


def term_type(t: Term) -> TypeExpr:
	if isinstance(t, Var):
		return t.type
	if isinstance(t, App):
		return t.symbol.result
	return t.type


def iff(a: "Formula", b: "Formula") -> And:
	return And(Imp(a, b), Imp(b, a))


# Contexts and sequents
# ---------------------


@dataclass(frozen=True)
class Context(_Printable):
	entries: tuple[tuple[str, TypeExpr], ...] = ()

	def __post_init__(self):
		object.__setattr__(self, "entries", tuple((n, t) for n, t in self.entries))
		seen = set()
		for name, _ in self.entries:
			if name in seen:
				throw(f"Variable {name} occurs twice in the context", DuplicateVariableError)
			seen.add(name)

	def __len__(self) -> int:
		return len(self.entries)

	def __iter__(self):
		return iter(self.entries)

	def __contains__(self, name: str) -> bool:
		return any(n == name for n, _ in self.entries)

	@property
	def names(self) -> tuple[str, ...]:
		return tuple(n for n, _ in self.entries)

	def lookup(self, name: str) -> TypeExpr | None:
		for n, t in self.entries:
			if n == name:
				return t
		return None

	def extend(self, name: str, t: TypeExpr) -> "Context":
		return Context(self.entries + ((name, t),))

	def concat(self, other: "Context") -> "Context":
		return Context(self.entries + other.entries)


@dataclass(frozen=True)
class Sequent(_Printable):
	context: Context
	hypotheses: tuple[Formula, ...]
	conclusion: Formula

	def __post_init__(self):
		object.__setattr__(self, "hypotheses", tuple(self.hypotheses))


@dataclass(frozen=True)
class Theory:
	signature: Signature
	axioms: dict[str, Sequent] = field(default_factory=dict)
	goals: dict[str, Sequent] = field(default_factory=dict)
	definitions: dict[str, tuple[Context, Union[Term, Formula]]] = field(default_factory=dict)

	def sequent(self, name: str) -> Sequent | None:
		return self.axioms.get(name) or self.goals.get(name)

	def mentions_empty(self) -> bool:
		if self.signature.mentions_empty():
			return True
		items = [*self.axioms.values(), *self.goals.values()]
		items += [value for _, value in self.definitions.values()]
		return any(contains_empty(t) for item in items for t in types_of(item)) or any(
			contains_empty(t) for ctx, _ in self.definitions.values() for _, t in ctx
		)


# Typing
# ------


def typecheck_term(ctx: Context, t: Term, sig: Signature) -> TypeExpr:
	for _, a in ctx:
		sig.check_type(a)
	return _check(t, ctx, {}, sig)


def wellform_formula(ctx: Context, phi: Formula, sig: Signature) -> None:
	for _, a in ctx:
		sig.check_type(a)
	_check(phi, ctx, {}, sig)


def wellform_sequent(seq: Sequent, sig: Signature) -> None:
	for phi in (*seq.hypotheses, seq.conclusion):
		wellform_formula(seq.context, phi, sig)


def _check(obj, ctx: Context, bound: dict, sig: Signature):
	if isinstance(obj, Var):
		expected = bound[obj.name] if obj.name in bound else ctx.lookup(obj.name)
		if expected is None:
			throw(f"Unbound variable {obj.name}", UnboundVariableError)
		if expected != obj.type:
			throw(
				f"Variable {obj.name} is used at type {show(obj.type)} but has type {show(expected)}",
				TypeMismatchError,
			)
		return expected

	if isinstance(obj, (App, Rel)):
		kind = "function" if isinstance(obj, App) else "relation"
		declared = sig.function(obj.symbol.name) if kind == "function" else sig.relation(obj.symbol.name)
		if declared is None:
			throw(f"Unknown {kind} symbol {obj.symbol.name}", UnknownSymbolError)
		if len(obj.args) != len(declared.args):
			throw(
				f"{obj.symbol.name} expects {len(declared.args)} arguments, got {len(obj.args)}",
				ArityMismatchError,
			)
		if declared != obj.symbol:
			throw(f"{obj.symbol.name} does not match its declaration", TypeMismatchError)
		for i, (arg, expected) in enumerate(zip(obj.args, declared.args)):
			actual = _check(arg, ctx, bound, sig)
			if actual != expected:
				throw(
					f"Argument {i + 1} of {obj.symbol.name} has type {show(actual)}, "
					f"expected {show(expected)}",
					TypeMismatchError,
				)
		return declared.result if kind == "function" else None

	if isinstance(obj, BINDERS):
		if obj.var in ctx:
			throw(f"Bound variable {obj.var} clashes with the context", DuplicateVariableError)
		sig.check_type(obj.type)
		_check(obj.body, ctx, {**bound, obj.var: obj.type}, sig)
		return obj.type if isinstance(obj, Epsilon) else None

	if isinstance(obj, Eq):
		left = _check(obj.left, ctx, bound, sig)
		right = _check(obj.right, ctx, bound, sig)
		if left != right:
			throw(
				f"Equation between terms of types {show(left)} and {show(right)}",
				TypeMismatchError,
			)
		return None

	if isinstance(obj, CONNECTIVES):
		_check(obj.left, ctx, bound, sig)
		_check(obj.right, ctx, bound, sig)
		return None

	if isinstance(obj, Not):
		_check(obj.body, ctx, bound, sig)
		return None

	if isinstance(obj, (Top, Bot)):
		return None

	throw(f"Not a term or formula: {obj!r}")


# Traversals
# ----------


def free_vars(obj) -> frozenset[tuple[str, TypeExpr]]:
	if isinstance(obj, Var):
		return frozenset({(obj.name, obj.type)})
	if isinstance(obj, (App, Rel)):
		return frozenset().union(*(free_vars(a) for a in obj.args))
	if isinstance(obj, BINDERS):
		return frozenset(v for v in free_vars(obj.body) if v[0] != obj.var)
	if isinstance(obj, Eq) or isinstance(obj, CONNECTIVES):
		return free_vars(obj.left) | free_vars(obj.right)
	if isinstance(obj, Not):
		return free_vars(obj.body)
	return frozenset()


def free_names(obj) -> frozenset[str]:
	return frozenset(name for name, _ in free_vars(obj))


def types_of(obj) -> list[TypeExpr]:
	"""Every type annotation occurring in a term, formula or sequent."""
	if isinstance(obj, Sequent):
		found = [t for _, t in obj.context]
		for phi in (*obj.hypotheses, obj.conclusion):
			found += types_of(phi)
		return found
	if isinstance(obj, Var):
		return [obj.type]
	if isinstance(obj, App):
		found = [*obj.symbol.args, obj.symbol.result]
		for a in obj.args:
			found += types_of(a)
		return found
	if isinstance(obj, Rel):
		found = list(obj.symbol.args)
		for a in obj.args:
			found += types_of(a)
		return found
	if isinstance(obj, BINDERS):
		return [obj.type] + types_of(obj.body)
	if isinstance(obj, Eq) or isinstance(obj, CONNECTIVES):
		return types_of(obj.left) + types_of(obj.right)
	if isinstance(obj, Not):
		return types_of(obj.body)
	return []


def symbols_of(*objs) -> tuple[set[str], set[str], set[str]]:
	"""Base types, function names and relation names mentioned by the given syntax."""
	types, functions, relations = set(), set(), set()

	def walk(obj):
		if isinstance(obj, Sequent):
			for _, t in obj.context:
				types.update(base_types_of(t))
			for phi in (*obj.hypotheses, obj.conclusion):
				walk(phi)
		elif isinstance(obj, Var):
			types.update(base_types_of(obj.type))
		elif isinstance(obj, App):
			functions.add(obj.symbol.name)
			for a in obj.args:
				walk(a)
		elif isinstance(obj, Rel):
			relations.add(obj.symbol.name)
			for a in obj.args:
				walk(a)
		elif isinstance(obj, BINDERS):
			types.update(base_types_of(obj.type))
			walk(obj.body)
		elif isinstance(obj, Eq) or isinstance(obj, CONNECTIVES):
			walk(obj.left)
			walk(obj.right)
		elif isinstance(obj, Not):
			walk(obj.body)

	for obj in objs:
		walk(obj)
	return types, functions, relations


def fresh_name(name: str, avoid: Iterable[str]) -> str:
	avoid = set(avoid)
	candidate = name + "'"
	while candidate in avoid:
		candidate += "'"
	return candidate


def substitute(obj, assignments: Mapping[str, Term], avoid: Iterable[str] = ()):
	"""Simultaneous capture-avoiding substitution of terms for free variables.

	`avoid` lists extra names a renamed binder must not take (typically the enclosing context).
	Raises TypeMismatchError when a replacement's type differs from the variable's.
	"""
	return _substitute(obj, dict(assignments), frozenset(avoid))


def _substitute(obj, sub: dict, avoid: frozenset):
	if not sub:
		return obj

	if isinstance(obj, Var):
		if obj.name not in sub:
			return obj
		replacement = sub[obj.name]
		if term_type(replacement) != obj.type:
			throw(
				f"Cannot substitute a term of type {show(term_type(replacement))} "
				f"for {obj.name} : {show(obj.type)}",
				TypeMismatchError,
			)
		return replacement

	if isinstance(obj, App):
		return App(obj.symbol, tuple(_substitute(a, sub, avoid) for a in obj.args))
	if isinstance(obj, Rel):
		return Rel(obj.symbol, tuple(_substitute(a, sub, avoid) for a in obj.args))
	if isinstance(obj, Eq):
		return Eq(_substitute(obj.left, sub, avoid), _substitute(obj.right, sub, avoid))
	if isinstance(obj, CONNECTIVES):
		return type(obj)(_substitute(obj.left, sub, avoid), _substitute(obj.right, sub, avoid))
	if isinstance(obj, Not):
		return Not(_substitute(obj.body, sub, avoid))

	if isinstance(obj, BINDERS):
		body_free = free_names(obj.body)
		inner = {k: v for k, v in sub.items() if k != obj.var and k in body_free}
		if not inner:
			return obj
		incoming = frozenset().union(*(free_names(v) for v in inner.values()))
		var = obj.var
		if var in incoming:
			var = fresh_name(obj.var, incoming | body_free | set(inner) | avoid)
			inner[obj.var] = Var(var, obj.type)
		return type(obj)(var, obj.type, _substitute(obj.body, inner, avoid))

	return obj


def alpha_key(obj, bound: tuple[str, ...] = ()):
	"""Nameless representation: bound variables become de Bruijn indices."""
	if isinstance(obj, Var):
		for index, name in enumerate(reversed(bound)):
			if name == obj.name:
				return ("bv", index, obj.type)
		return ("fv", obj.name, obj.type)
	if isinstance(obj, (App, Rel)):
		return (type(obj).__name__, obj.symbol, tuple(alpha_key(a, bound) for a in obj.args))
	if isinstance(obj, BINDERS):
		return (type(obj).__name__, obj.type, alpha_key(obj.body, bound + (obj.var,)))
	if isinstance(obj, Eq) or isinstance(obj, CONNECTIVES):
		return (type(obj).__name__, alpha_key(obj.left, bound), alpha_key(obj.right, bound))
	if isinstance(obj, Not):
		return ("Not", alpha_key(obj.body, bound))
	if isinstance(obj, Sequent):
		return (
			"Sequent",
			obj.context.entries,
			tuple(alpha_key(h) for h in obj.hypotheses),
			alpha_key(obj.conclusion),
		)
	return (type(obj).__name__,)


def alpha_eq(a, b) -> bool:
	return alpha_key(a) == alpha_key(b)


# Printing
# --------

_TYPE_PREC = {Fun: 1, Sum: 2, Prod: 3}
_FORMULA_PREC = {Imp: 1, Or: 2, And: 3, Not: 4}


def show(obj, prec: int = 0) -> str:
	if isinstance(obj, (BaseType, Prod, Fun, Sum, UnitType, EmptyType)):
		return _show_type(obj, prec)
	if isinstance(obj, Context):
		return "[" + ", ".join(f"{n}:{_show_type(t)}" for n, t in obj) + "]"
	if isinstance(obj, Sequent):
		hyps = ", ".join(show(h) for h in obj.hypotheses)
		middle = f" {hyps} " if hyps else " "
		return f"{show(obj.context)} |{middle}|- {show(obj.conclusion)}"
	if isinstance(obj, FunctionSymbol):
		return f"fun {obj.name} : {symbol_type_text(obj)}"
	if isinstance(obj, RelationSymbol):
		return f"rel {obj.name}{symbol_type_text(obj)}"

	if isinstance(obj, Var):
		return obj.name
	if isinstance(obj, (App, Rel)):
		if not obj.args:
			return obj.symbol.name
		return obj.symbol.name + "(" + ", ".join(show(a) for a in obj.args) + ")"
	if isinstance(obj, BINDERS):
		keyword = {Exists: "exists", Forall: "forall", Epsilon: "eps"}[type(obj)]
		text = f"{keyword} {obj.var}:{_show_type(obj.type)}. {show(obj.body)}"
		return f"({text})" if prec > 0 else text
	if isinstance(obj, Eq):
		return f"{show(obj.left, 5)} = {show(obj.right, 5)}"
	if isinstance(obj, Top):
		return "true"
	if isinstance(obj, Bot):
		return "false"
	if isinstance(obj, Not):
		return "~" + show(obj.body, 4)
	if isinstance(obj, CONNECTIVES):
		own = _FORMULA_PREC[type(obj)]
		op = {And: "/\\", Or: "\\/", Imp: "->"}[type(obj)]
		if isinstance(obj, Imp):
			text = f"{show(obj.left, own + 1)} {op} {show(obj.right, own)}"
		else:
			text = f"{show(obj.left, own)} {op} {show(obj.right, own + 1)}"
		return f"({text})" if prec > own else text
	raise ValidationError(f"Cannot print {obj!r}")


def _show_type(t: TypeExpr, prec: int = 0) -> str:
	if isinstance(t, BaseType):
		return t.name
	if isinstance(t, UnitType):
		return "Unit"
	if isinstance(t, EmptyType):
		return "Empty"
	own = _TYPE_PREC[type(t)]
	if isinstance(t, Fun):
		text = f"{_show_type(t.dom, own + 1)} -> {_show_type(t.cod, own)}"
	else:
		op = " * " if isinstance(t, Prod) else " + "
		text = _show_type(t.left, own) + op + _show_type(t.right, own + 1)
	return f"({text})" if prec > own else text


def show_theory(theory: Theory) -> str:
	lines = [f"type {name};" for name in theory.signature.base_types]
	lines += [f"{show(f)};" for f in theory.signature.functions]
	lines += [f"{show(r)};" for r in theory.signature.relations]
	lines += [f"axiom {name} : {show(seq)};" for name, seq in theory.axioms.items()]
	lines += [f"goal {name} : {show(seq)};" for name, seq in theory.goals.items()]
	for name, (ctx, value) in theory.definitions.items():
		ctx_text = f" {show(ctx)}" if len(ctx) else ""
		lines.append(f"def {name}{ctx_text} := {show(value)};")
	return "\n".join(lines) + "\n"


def symbol_type_text(symbol: FunctionSymbol | RelationSymbol) -> str:
	"""`A * B -> C` for functions, `(A, B)` for relations, as written in declarations."""
	if isinstance(symbol, RelationSymbol):
		return "(" + ", ".join(_show_type(a) for a in symbol.args) + ")" if symbol.args else ""
	if not symbol.args:
		return _show_type(symbol.result, 4 if isinstance(symbol.result, Fun) else 0)
	args = " * ".join(_show_type(a, 4) for a in symbol.args)
	return f"{args} -> {_show_type(symbol.result, 1)}"
