"""
Finite models as text files, with a JSON mirror.

	carrier A = 3;
	point A = 0;
	fun c : A = [1];
	fun f : A -> A = [1, 2, 0];
	rel P(A) = {(1), (2)};
	rel R(A, A) = {(0, 1)};

Tables and tuples use the frozen encodings: argument tuples are mixed-radix with the last
argument least significant, exactly like interpreted contexts. Annotations may be left out when
a theory signature is supplied, or when the model has a single carrier (arities are then read off
the table length and tuple width).
"""

import json
from dataclasses import dataclass, field

from epsilon_doctrine.doctrine import BASEPOINT
from epsilon_doctrine.exceptions import TypeMismatchError, UnknownSymbolError, ValidationError
from epsilon_doctrine.finset import FinMor, Subset
from epsilon_doctrine.parser import Resolver, parse_tree
from epsilon_doctrine.semantics import Interpretation, interpret_type
from epsilon_doctrine.syntax import BaseType, Signature, show, symbol_type_text
from epsilon_doctrine.utils import throw


@dataclass
class _ModelEntries:
	carriers: dict[str, int] = field(default_factory=dict)
	points: dict[str, int] = field(default_factory=dict)
	# name -> (argument types and result, or None when unannotated; table)
	functions: dict[str, tuple] = field(default_factory=dict)
	# name -> (argument types or None; rows)
	relations: dict[str, tuple] = field(default_factory=dict)


def load_model(text: str, signature: Signature | None = None) -> Interpretation:
	tree = parse_tree(text, "model")
	entries = _ModelEntries()

	for item in tree.children:
		if item.data == "carrier_decl":
			name, size = str(item.children[0]), int(item.children[1])
			if name in entries.carriers:
				throw(f"Carrier {name} is declared twice")
			entries.carriers[name] = size

	resolver = Resolver(Signature(tuple(entries.carriers)))
	for item in tree.children:
		name = str(item.children[0])
		if item.data == "point_decl":
			entries.points[name] = int(item.children[1])
		elif item.data == "fun_table":
			*annotation, table = item.children[1:]
			typed = resolver.function_type(annotation[0]) if annotation else None
			entries.functions[name] = (typed, [int(v) for v in table.children])
		elif item.data == "rel_table":
			*annotation, tuples = item.children[1:]
			typed = tuple(resolver.type(t) for t in annotation[0].children) if annotation else None
			rows = [tuple(int(v) for v in row.children) for row in tuples.children]
			entries.relations[name] = (typed, rows)

	return _build(entries, signature)


def load_model_json(data: str | dict, signature: Signature | None = None) -> Interpretation:
	if isinstance(data, str):
		try:
			data = json.loads(data)
		except json.JSONDecodeError as e:
			throw(f"Invalid model JSON: {e.msg}", ValidationError)

	entries = _ModelEntries(
		carriers={k: int(v) for k, v in data.get("carriers", {}).items()},
		points={k: int(v) for k, v in data.get("points", {}).items()},
	)
	resolver = Resolver(Signature(tuple(entries.carriers)))
	for name, entry in data.get("functions", {}).items():
		typed = None
		if entry.get("type"):
			typed = resolver.function_type(parse_tree(entry["type"], "type"))
		entries.functions[name] = (typed, [int(v) for v in entry.get("table", [])])
	for name, entry in data.get("relations", {}).items():
		typed = None
		if "type" in entry:
			text = entry["type"].strip()
			pieces = [p for p in text[1:-1].split(",") if p.strip()] if text else []
			typed = tuple(resolver.type(parse_tree(p, "type")) for p in pieces)
		rows = [tuple(int(v) for v in row) for row in entry.get("tuples", [])]
		entries.relations[name] = (typed, rows)

	return _build(entries, signature)


def _build(entries: _ModelEntries, signature: Signature | None) -> Interpretation:
	for name, point in entries.points.items():
		if name not in entries.carriers:
			throw(f"Point for undeclared carrier {name}", UnknownSymbolError)
		if point != BASEPOINT:
			throw(f"Basepoints are fixed at {BASEPOINT}; got point {name} = {point}")

	sig = Signature(tuple(entries.carriers))
	for name, (typed, table) in entries.functions.items():
		args, result = typed or _function_type(name, table, entries, signature)
		sig = sig.declare_function(name, args, result)
		_agree(signature, sig.function(name), signature.function(name) if signature else None)
	for name, (typed, rows) in entries.relations.items():
		args = typed if typed is not None else _relation_type(name, rows, entries, signature)
		sig = sig.declare_relation(name, args)
		_agree(signature, sig.relation(name), signature.relation(name) if signature else None)

	skeleton = Interpretation(Signature(sig.base_types), dict(entries.carriers))
	functions, relations = {}, {}
	for symbol in sig.functions:
		dom = skeleton.arguments(symbol.args).obj
		cod = interpret_type(symbol.result, skeleton)
		table = entries.functions[symbol.name][1]
		functions[symbol.name] = FinMor(dom, cod, table)
	for symbol in sig.relations:
		args = skeleton.arguments(symbol.args)
		members = []
		for row in entries.relations[symbol.name][1]:
			if len(row) != len(symbol.args):
				throw(f"Tuple {row} of {symbol.name} should have {len(symbol.args)} entries")
			for value, factor in zip(row, args.factors):
				if not 0 <= value < factor.size:
					throw(f"Tuple {row} of {symbol.name} leaves its carrier")
			members.append(args.encode(row))
		relations[symbol.name] = Subset(args.obj, members)

	return Interpretation(sig, dict(entries.carriers), functions, relations)


def _agree(signature, declared, expected) -> None:
	if signature is None or expected is None:
		return
	if declared != expected:
		throw(
			f"Model gives {show(declared)}, the theory declares {show(expected)}",
			TypeMismatchError,
		)


def _single_carrier(name: str, entries: _ModelEntries) -> tuple[str, int]:
	if len(entries.carriers) != 1:
		throw(f"Annotate {name} with its type: the model has several carriers")
	return next(iter(entries.carriers.items()))


def _function_type(name, table, entries, signature):
	if signature and signature.function(name):
		symbol = signature.function(name)
		return symbol.args, symbol.result
	carrier, size = _single_carrier(name, entries)
	arity, length = 0, 1
	while length < len(table) and size > 1:
		arity, length = arity + 1, length * size
	if length != len(table):
		throw(f"A table of length {len(table)} is no function on a carrier of size {size}")
	return (BaseType(carrier),) * arity, BaseType(carrier)


def _relation_type(name, rows, entries, signature):
	if signature and signature.relation(name):
		return signature.relation(name).args
	carrier, _ = _single_carrier(name, entries)
	widths = {len(row) for row in rows} or {1}
	if len(widths) != 1:
		throw(f"Tuples of {name} have different widths")
	return (BaseType(carrier),) * widths.pop()


def dump_model(interpretation: Interpretation) -> str:
	lines = []
	for name, size in interpretation.carriers.items():
		lines += [f"carrier {name} = {size};", f"point {name} = {BASEPOINT};"]
	for symbol in interpretation.signature.functions:
		table = ", ".join(str(v) for v in interpretation.functions[symbol.name].table)
		lines.append(f"fun {symbol.name} : {symbol_type_text(symbol)} = [{table}];")
	for symbol in interpretation.signature.relations:
		args = interpretation.arguments(symbol.args)
		rows = ", ".join(
			"(" + ", ".join(str(v) for v in args.decode(m)) + ")"
			for m in interpretation.relations[symbol.name]
		)
		declared = symbol_type_text(symbol) or "()"
		lines.append(f"rel {symbol.name}{declared} = {{{rows}}};")
	return "\n".join(lines) + "\n"


def dump_model_json(interpretation: Interpretation) -> str:
	return json.dumps(interpretation.as_dict(), sort_keys=True, indent=2, ensure_ascii=False)
