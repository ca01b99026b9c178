"""
Proof scripts: derivations written as S-expressions.

	(proof eps_intro
	  (eps-i
	    (axiom "[x:A] | P(x) |- P(x)")
	    "[] | exists x:A. P(x) |- P(eps x:A. P(x))"))

A node is `(rule-name :param "value" ... premise ... "sequent")`. Parameters are `:witness`
(a term in the node's context), `:target` (a formula in the node's context extended by `:var`)
and `:var` (`name:Type`). The `(proof NAME ...)` wrapper names the sequent being proved.
"""

from dataclasses import dataclass

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from epsilon_doctrine.exceptions import ParseError, ValidationError
from epsilon_doctrine.kernel import Derivation, rule
from epsilon_doctrine.parser import (
	parse_binding,
	parse_formula,
	parse_sequent,
	parse_term,
	raise_parse_error,
)
from epsilon_doctrine.syntax import Signature, show
from epsilon_doctrine.utils import throw

SEXP_GRAMMAR = r"""
start: _sexp*
_sexp: list | STRING | KEYWORD | SYMBOL
list: "(" _sexp* ")"

STRING: /"[^"]*"/
KEYWORD: /:[A-Za-z_][A-Za-z0-9_-]*/
SYMBOL: /[A-Za-z_][A-Za-z0-9_'-]*/
COMMENT: /[;#][^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_sexp_parser = Lark(SEXP_GRAMMAR, parser="lalr", propagate_positions=True)


@dataclass(frozen=True)
class Proof:
	name: str | None
	derivation: Derivation


def parse_sexp(text: str) -> list:
	try:
		return _sexp_parser.parse(text).children
	except UnexpectedInput as e:
		raise_parse_error(e)


def parse_proof_script(text: str, sig: Signature) -> list[Proof]:
	proofs = []
	for item in parse_sexp(text):
		if not isinstance(item, Tree):
			throw(f"Expected a proof tree, found {item!s}{_at(item)}", ParseError)
		head = item.children[0] if item.children else None
		if isinstance(head, Token) and head.type == "SYMBOL" and str(head) == "proof":
			name = item.children[1] if len(item.children) == 3 else None
			if not isinstance(name, Token) or name.type != "SYMBOL":
				throw(f"Malformed (proof NAME tree){_at(item)}", ParseError)
			proofs.append(Proof(str(name), to_derivation(item.children[2], sig)))
		else:
			proofs.append(Proof(None, to_derivation(item, sig)))
	return proofs


def to_derivation(node, sig: Signature) -> Derivation:
	if not isinstance(node, Tree) or not node.children:
		throw(f"Expected a rule application{_at(node)}", ParseError)
	head, *rest = node.children
	if not isinstance(head, Token) or head.type != "SYMBOL":
		throw(f"A rule application starts with the rule name{_at(node)}", ParseError)
	if not rest or not isinstance(rest[-1], Token) or rest[-1].type != "STRING":
		throw(f"{head} must end with its conclusion sequent{_at(node)}", ParseError)

	conclusion = _sequent(rest[-1], sig)
	params, premises = {}, []
	items = iter(rest[:-1])
	for item in items:
		if isinstance(item, Token) and item.type == "KEYWORD":
			value = next(items, None)
			if not isinstance(value, Token) or value.type != "STRING":
				throw(f"Parameter {item} needs a string value{_at(item)}", ParseError)
			params[str(item)[1:]] = value
		elif isinstance(item, Tree):
			premises.append(to_derivation(item, sig))
		else:
			throw(f"Unexpected {item!s} in {head}{_at(item)}", ParseError)

	return Derivation(
		rule(str(head), **_rule_params(params, conclusion, sig)), tuple(premises), conclusion
	)


def _rule_params(params: dict, conclusion, sig: Signature) -> dict:
	unknown = set(params) - {"witness", "target", "var"}
	if unknown:
		throw(f"Unknown rule parameters: {', '.join(sorted(unknown))}", ParseError)
	resolved = {}
	ctx = conclusion.context
	with _located(params.get("var")):
		if "var" in params:
			resolved["var"] = parse_binding(_text(params["var"]), sig)
	with _located(params.get("witness")):
		if "witness" in params:
			resolved["witness"] = parse_term(_text(params["witness"]), sig, ctx)
	with _located(params.get("target")):
		if "target" in params:
			scope = ctx
			if "var" in resolved and resolved["var"][0] not in ctx:
				scope = ctx.extend(*resolved["var"])
			resolved["target"] = parse_formula(_text(params["target"]), sig, scope)
	return resolved


def _sequent(token: Token, sig: Signature):
	with _located(token):
		return parse_sequent(_text(token), sig)


class _located:
	"""Re-raise errors from an embedded string at the string's position in the script."""

	def __init__(self, token: Token | None):
		self.token = token

	def __enter__(self):
		return self

	def __exit__(self, exc_type, exc, tb):
		if exc is None or self.token is None or not isinstance(exc, ValidationError):
			return False
		line, column = self.token.line, self.token.column
		if isinstance(exc, ParseError):
			raise ParseError(f"in {self.token}: {exc}", line=line, column=column) from exc
		raise type(exc)(f"line {line}, column {column}: {exc}") from exc


def _text(token: Token) -> str:
	return str(token)[1:-1]


def _at(node) -> str:
	if isinstance(node, Token) and node.line is not None:
		return f" (line {node.line}, column {node.column})"
	meta = getattr(node, "meta", None)
	if meta is not None and not meta.empty:
		return f" (line {meta.line}, column {meta.column})"
	return ""


def format_derivation(d: Derivation, indent: int = 0) -> str:
	pad = "  " * indent
	parts = [d.rule.name]
	if d.rule.var is not None:
		name, t = d.rule.var
		parts.append(f':var "{name}:{show(t)}"')
	if d.rule.witness is not None:
		parts.append(f':witness "{show(d.rule.witness)}"')
	if d.rule.target is not None:
		parts.append(f':target "{show(d.rule.target)}"')
	lines = [pad + "(" + " ".join(parts)]
	for premise in d.premises:
		lines.append(format_derivation(premise, indent + 1))
	lines.append(f'{pad}  "{show(d.conclusion)}")')
	return "\n".join(lines)


def format_proof(proof: Proof) -> str:
	body = format_derivation(proof.derivation, 1 if proof.name else 0)
	return f"(proof {proof.name}\n{body})" if proof.name else body
