"""
Natural deduction kernel for the Epsilon calculus.

Each node of a `Derivation` is checked in isolation against its rule and the conclusions of its
immediate premises, so a tree checks iff every node does. Hypotheses are ordered and shared
additively between premises; weakening and exchange are explicit rules.
"""

from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field

from epsilon_doctrine.exceptions import KernelRejection, ValidationError
from epsilon_doctrine.report import FAIL, PASS, NodeVerdict, Report
from epsilon_doctrine.syntax import (
	And,
	Bot,
	Context,
	Epsilon,
	Eq,
	Exists,
	Forall,
	Formula,
	Imp,
	Not,
	Or,
	Sequent,
	Signature,
	Term,
	Top,
	TypeExpr,
	alpha_eq,
	alpha_key,
	free_names,
	show,
	substitute,
	term_type,
	typecheck_term,
	wellform_formula,
	wellform_sequent,
)
from epsilon_doctrine.utils import RULES, get_rule, throw


@dataclass(frozen=True)
class Rule:
	tag: str
	witness: Term | None = None
	target: Formula | None = None
	var: tuple[str, TypeExpr] | None = None

	def __post_init__(self):
		if self.tag not in RULES:
			throw(f"Unknown rule {self.tag}")

	@property
	def name(self) -> str:
		return RULES[self.tag]["name"]

	@property
	def premise_count(self) -> int:
		return RULES[self.tag]["premises"]


@dataclass(frozen=True)
class Derivation:
	rule: Rule
	premises: tuple["Derivation", ...] = field(default_factory=tuple)
	conclusion: Sequent = None

	def __post_init__(self):
		object.__setattr__(self, "premises", tuple(self.premises))

	def nodes(self, path: str = "root") -> Iterator[tuple[str, "Derivation"]]:
		yield path, self
		for i, premise in enumerate(self.premises):
			yield from premise.nodes(f"{path}.{i}")

	def size(self) -> int:
		return sum(1 for _ in self.nodes())


def check_derivation(d: Derivation, sig: Signature) -> Report:
	report = Report()
	for path, node in d.nodes():
		messages = check_node(node, sig)
		report.append(NodeVerdict(path, node.rule.name, FAIL if messages else PASS, tuple(messages)))
	return report


def require_checked(d: Derivation, sig: Signature) -> Report:
	report = check_derivation(d, sig)
	if not report.ok:
		failure = report.failures[0]
		raise KernelRejection(
			f"Derivation rejected at {failure.node} ({failure.rule}): {'; '.join(failure.messages)}",
			verdicts=report.entries,
		)
	return report


def check_node(node: Derivation, sig: Signature) -> list[str]:
	"""Violations of a single rule application; empty when the node is a correct instance."""
	expected = node.rule.premise_count
	if len(node.premises) != expected:
		return [f"{node.rule.name} takes {expected} premises, got {len(node.premises)}"]
	if node.conclusion is None or any(p.conclusion is None for p in node.premises):
		return ["missing conclusion sequent"]

	messages = []
	try:
		wellform_sequent(node.conclusion, sig)
	except ValidationError as e:
		messages.append(f"conclusion is not well formed: {e}")

	checker = _CHECKERS[node.rule.tag]
	try:
		messages += checker(node, node.conclusion, [p.conclusion for p in node.premises], sig)
	except ValidationError as e:
		messages.append(str(e))
	return messages


# helpers


def _same(a, b) -> bool:
	return alpha_eq(a, b)


def _same_list(a, b) -> bool:
	return len(a) == len(b) and all(alpha_eq(x, y) for x, y in zip(a, b))


def _is_sublist(small, big, eq) -> bool:
	it = iter(big)
	return all(any(eq(x, y) for y in it) for x in small)


def _frame(c: Sequent, p: Sequent, hypotheses=None, what: str = "premise") -> list[str]:
	"""Context equality and (optionally) hypothesis equality between conclusion and premise."""
	messages = []
	if p.context != c.context:
		messages.append(f"{what} context {show(p.context)} differs from {show(c.context)}")
	hypotheses = c.hypotheses if hypotheses is None else hypotheses
	if not _same_list(p.hypotheses, hypotheses):
		messages.append(
			f"{what} hypotheses ({', '.join(show(h) for h in p.hypotheses)}) should be "
			f"({', '.join(show(h) for h in hypotheses)})"
		)
	return messages


def _expect(actual, expected, label: str) -> list[str]:
	if _same(actual, expected):
		return []
	return [f"{label} is {show(actual)}, expected {show(expected)}"]


def _shape(obj, kind, label: str) -> list[str]:
	if isinstance(obj, kind):
		return []
	return [f"{label} {show(obj)} is not of the form required by the rule"]


def _witness_type(rule: Rule, ctx: Context, sig: Signature, expected: TypeExpr) -> list[str]:
	if rule.witness is None:
		return ["witness term is missing"]
	actual = typecheck_term(ctx, rule.witness, sig)
	if actual != expected:
		return [f"witness has type {show(actual)}, expected {show(expected)}"]
	return []


# structural


def _axiom(node, c, ps, sig):
	if len(c.hypotheses) != 1:
		return ["axiom needs exactly one hypothesis"]
	return _expect(c.conclusion, c.hypotheses[0], "conclusion")


def _weaken(node, c, ps, sig):
	(p,) = ps
	messages = _expect(p.conclusion, c.conclusion, "premise conclusion")
	if not _is_sublist(p.context.entries, c.context.entries, lambda a, b: a == b):
		messages.append("premise context is not a sublist of the conclusion context")
	if not _is_sublist(p.hypotheses, c.hypotheses, alpha_eq):
		messages.append("premise hypotheses are not a sublist of the conclusion hypotheses")
	return messages


def _exchange(node, c, ps, sig):
	(p,) = ps
	messages = _expect(p.conclusion, c.conclusion, "premise conclusion")
	if Counter(p.context.entries) != Counter(c.context.entries):
		messages.append("conclusion context is not a permutation of the premise context")
	if Counter(map(alpha_key, p.hypotheses)) != Counter(map(alpha_key, c.hypotheses)):
		messages.append("conclusion hypotheses are not a permutation of the premise hypotheses")
	return messages


def _cut(node, c, ps, sig):
	left, right = ps
	messages = _frame(c, left, what="first premise")
	messages += _frame(c, right, c.hypotheses + (left.conclusion,), what="second premise")
	return messages + _expect(right.conclusion, c.conclusion, "second premise conclusion")


# propositional


def _and_i(node, c, ps, sig):
	if messages := _shape(c.conclusion, And, "conclusion"):
		return messages
	left, right = ps
	messages = _frame(c, left, what="first premise") + _frame(c, right, what="second premise")
	messages += _expect(left.conclusion, c.conclusion.left, "first premise conclusion")
	return messages + _expect(right.conclusion, c.conclusion.right, "second premise conclusion")


def _and_e(side):
	def check(node, c, ps, sig):
		(p,) = ps
		if messages := _shape(p.conclusion, And, "premise conclusion"):
			return messages
		component = getattr(p.conclusion, side)
		return _frame(c, p) + _expect(c.conclusion, component, "conclusion")

	return check


def _or_i(side):
	def check(node, c, ps, sig):
		if messages := _shape(c.conclusion, Or, "conclusion"):
			return messages
		(p,) = ps
		return _frame(c, p) + _expect(p.conclusion, getattr(c.conclusion, side), "premise conclusion")

	return check


def _or_e(node, c, ps, sig):
	if not c.hypotheses or not isinstance(c.hypotheses[-1], Or):
		return ["the last hypothesis of the conclusion must be a disjunction"]
	*delta, disjunction = c.hypotheses
	left, right = ps
	messages = _frame(c, left, (*delta, disjunction.left), what="first premise")
	messages += _frame(c, right, (*delta, disjunction.right), what="second premise")
	messages += _expect(left.conclusion, c.conclusion, "first premise conclusion")
	return messages + _expect(right.conclusion, c.conclusion, "second premise conclusion")


def _imp_i(node, c, ps, sig):
	if messages := _shape(c.conclusion, Imp, "conclusion"):
		return messages
	(p,) = ps
	messages = _frame(c, p, c.hypotheses + (c.conclusion.left,))
	return messages + _expect(p.conclusion, c.conclusion.right, "premise conclusion")


def _imp_e(node, c, ps, sig):
	major, minor = ps
	if messages := _shape(major.conclusion, Imp, "first premise conclusion"):
		return messages
	messages = _frame(c, major, what="first premise") + _frame(c, minor, what="second premise")
	messages += _expect(minor.conclusion, major.conclusion.left, "second premise conclusion")
	return messages + _expect(c.conclusion, major.conclusion.right, "conclusion")


def _not_i(node, c, ps, sig):
	if messages := _shape(c.conclusion, Not, "conclusion"):
		return messages
	(p,) = ps
	messages = _frame(c, p, c.hypotheses + (c.conclusion.body,))
	return messages + _shape(p.conclusion, Bot, "premise conclusion")


def _not_e(node, c, ps, sig):
	major, minor = ps
	messages = _shape(c.conclusion, Bot, "conclusion")
	messages += _shape(major.conclusion, Not, "first premise conclusion")
	if messages:
		return messages
	messages = _frame(c, major, what="first premise") + _frame(c, minor, what="second premise")
	return messages + _expect(minor.conclusion, major.conclusion.body, "second premise conclusion")


def _top_i(node, c, ps, sig):
	messages = _shape(c.conclusion, Top, "conclusion")
	if c.hypotheses:
		messages.append("truth is introduced without hypotheses")
	return messages


def _bot_e(node, c, ps, sig):
	(p,) = ps
	return _frame(c, p) + _shape(p.conclusion, Bot, "premise conclusion")


def _lem(node, c, ps, sig):
	messages = ["excluded middle is introduced without hypotheses"] if c.hypotheses else []
	phi = c.conclusion
	if not isinstance(phi, Or) or not isinstance(phi.right, Not):
		return messages + [f"conclusion {show(phi)} is not of the form φ \\/ ~φ"]
	return messages + _expect(phi.right.body, phi.left, "negated disjunct")


# quantifiers


def _exists_i(node, c, ps, sig):
	if messages := _shape(c.conclusion, Exists, "conclusion"):
		return messages
	(p,) = ps
	phi = c.conclusion
	if messages := _witness_type(node.rule, c.context, sig, phi.type):
		return messages
	instance = substitute(phi.body, {phi.var: node.rule.witness}, avoid=c.context.names)
	return _frame(c, p) + _expect(p.conclusion, instance, "premise conclusion")


def _exists_e(node, c, ps, sig):
	if not c.hypotheses or not isinstance(c.hypotheses[-1], Exists):
		return ["the last hypothesis of the conclusion must be existential"]
	*delta, exists = c.hypotheses
	(p,) = ps
	x = exists.var
	messages = _eigenvariable(x, delta, c.conclusion)
	if x in c.context:
		return messages + [f"eigenvariable {x} already occurs in the context"]
	extended = c.context.extend(x, exists.type)
	if p.context != extended:
		messages.append(f"premise context {show(p.context)} should be {show(extended)}")
	if not _same_list(p.hypotheses, (*delta, exists.body)):
		messages.append("premise hypotheses should extend the conclusion's with the existential body")
	return messages + _expect(p.conclusion, c.conclusion, "premise conclusion")


def _eigenvariable(x: str, hypotheses, conclusion=None) -> list[str]:
	messages = [
		f"eigenvariable {x} occurs free in hypothesis {show(h)}"
		for h in hypotheses
		if x in free_names(h)
	]
	if conclusion is not None and x in free_names(conclusion):
		messages.append(f"eigenvariable {x} occurs free in the conclusion")
	return messages


def _forall_i(node, c, ps, sig):
	if messages := _shape(c.conclusion, Forall, "conclusion"):
		return messages
	(p,) = ps
	phi = c.conclusion
	messages = _eigenvariable(phi.var, p.hypotheses)
	if phi.var in c.context:
		return messages + [f"eigenvariable {phi.var} already occurs in the context"]
	extended = c.context.extend(phi.var, phi.type)
	if p.context != extended:
		messages.append(f"premise context {show(p.context)} should be {show(extended)}")
	if not messages and not _same_list(p.hypotheses, c.hypotheses):
		messages.append("premise hypotheses differ from the conclusion's")
	return messages + _expect(p.conclusion, phi.body, "premise conclusion")


def _forall_e(node, c, ps, sig):
	(p,) = ps
	if messages := _shape(p.conclusion, Forall, "premise conclusion"):
		return messages
	phi = p.conclusion
	if messages := _witness_type(node.rule, c.context, sig, phi.type):
		return messages
	instance = substitute(phi.body, {phi.var: node.rule.witness}, avoid=c.context.names)
	return _frame(c, p) + _expect(c.conclusion, instance, "conclusion")


# equality


def _eq_refl(node, c, ps, sig):
	messages = ["reflexivity is introduced without hypotheses"] if c.hypotheses else []
	if not isinstance(c.conclusion, Eq):
		return messages + _shape(c.conclusion, Eq, "conclusion")
	return messages + _expect(c.conclusion.right, c.conclusion.left, "right-hand side")


def _eq_subst(node, c, ps, sig):
	rule = node.rule
	if rule.target is None or rule.var is None:
		return ["eq-subst needs a target formula and a variable"]
	z, z_type = rule.var
	equation, instance = ps
	if messages := _shape(equation.conclusion, Eq, "first premise conclusion"):
		return messages
	s, t = equation.conclusion.left, equation.conclusion.right
	if term_type(s) != z_type:
		return [
			f"equation is between terms of type {show(term_type(s))}, "
			f"variable {z} has {show(z_type)}"
		]

	if z in c.context:
		if c.context.lookup(z) != z_type:
			return [f"variable {z} has a different type in the context"]
		scope = c.context
	else:
		scope = c.context.extend(z, z_type)
	wellform_formula(scope, rule.target, sig)

	avoid = c.context.names
	messages = _frame(c, equation, what="first premise") + _frame(c, instance, what="second premise")
	messages += _expect(
		instance.conclusion, substitute(rule.target, {z: s}, avoid), "second premise conclusion"
	)
	return messages + _expect(c.conclusion, substitute(rule.target, {z: t}, avoid), "conclusion")


# epsilon


def _epsilon_premise(p: Sequent, label: str):
	if not len(p.context):
		return None, [f"{label} context must end with the bound variable"]
	(x, x_type) = p.context.entries[-1]
	return (x, x_type, Context(p.context.entries[:-1])), []


def _eps_i(node, c, ps, sig):
	(p,) = ps
	found, messages = _epsilon_premise(p, "premise")
	if messages:
		return messages
	x, x_type, gamma = found
	if x in c.context:
		return [f"bound variable {x} occurs in the conclusion context"]
	if c.context != gamma:
		messages.append(f"conclusion context {show(c.context)} should be {show(gamma)}")

	psi = p.conclusion
	if not _same_list(p.hypotheses, (psi,)):
		messages.append(
			f"premise hypotheses ({', '.join(show(h) for h in p.hypotheses)}) should be "
			f"({show(psi)})"
		)
	witness = Epsilon(x, x_type, psi)
	expected_hypothesis = Exists(x, x_type, psi)
	if len(c.hypotheses) != 1:
		messages.append(f"conclusion must have the single hypothesis {show(expected_hypothesis)}")
	else:
		messages += _expect(c.hypotheses[0], expected_hypothesis, "hypothesis")
	instance = substitute(psi, {x: witness}, avoid=gamma.names)
	return messages + _expect(c.conclusion, instance, "conclusion")


def _eps_ex(node, c, ps, sig):
	forward, backward = ps
	found, messages = _epsilon_premise(forward, "first premise")
	if messages:
		return messages
	x, x_type, gamma = found
	if backward.context != forward.context:
		messages.append("premises must share the context")
	if x in c.context:
		return messages + [f"bound variable {x} occurs in the conclusion context"]
	if c.context != gamma:
		messages.append(f"conclusion context {show(c.context)} should be {show(gamma)}")
	if c.hypotheses:
		messages.append("extensionality concludes without hypotheses")
	if len(forward.hypotheses) != 1 or len(backward.hypotheses) != 1:
		return messages + ["each premise must have exactly one hypothesis"]

	psi, phi = forward.hypotheses[0], forward.conclusion
	messages += _expect(backward.hypotheses[0], phi, "second premise hypothesis")
	messages += _expect(backward.conclusion, psi, "second premise conclusion")
	expected = Eq(Epsilon(x, x_type, psi), Epsilon(x, x_type, phi))
	return messages + _expect(c.conclusion, expected, "conclusion")


_CHECKERS = {
	"Axiom": _axiom,
	"Weaken": _weaken,
	"Exchange": _exchange,
	"Cut": _cut,
	"AndI": _and_i,
	"AndE1": _and_e("left"),
	"AndE2": _and_e("right"),
	"OrI1": _or_i("left"),
	"OrI2": _or_i("right"),
	"OrE": _or_e,
	"ImpI": _imp_i,
	"ImpE": _imp_e,
	"NotI": _not_i,
	"NotE": _not_e,
	"TopI": _top_i,
	"BotE": _bot_e,
	"LEM": _lem,
	"ExistsI": _exists_i,
	"ExistsE": _exists_e,
	"ForallI": _forall_i,
	"ForallE": _forall_e,
	"EqRefl": _eq_refl,
	"EqSubst": _eq_subst,
	"EpsI": _eps_i,
	"EpsEx": _eps_ex,
}


def rule(name: str, **params) -> Rule:
	"""Build a rule from its proof-script name (`and-e1`, `eps-i`, ...)."""
	data = get_rule(name=name)
	if not data:
		throw(f"Unknown rule {name}")
	return Rule(data["tag"], **params)


def derive_epsilon_exists_equiv(
	psi: Formula, x: str, x_type: TypeExpr, sig: Signature, ctx: Context | None = None
) -> tuple[Derivation, Derivation]:
	"""Derivations of `Γ | ψ[ε_ψ/x] ⊢ ∃x:A.ψ` and `Γ | ∃x:A.ψ ⊢ ψ[ε_ψ/x]`."""
	ctx = ctx or Context()
	wellform_formula(ctx.extend(x, x_type), psi, sig)

	epsilon = Epsilon(x, x_type, psi)
	exists = Exists(x, x_type, psi)
	instance = substitute(psi, {x: epsilon}, avoid=ctx.names)

	forward = Derivation(
		Rule("ExistsI", witness=epsilon),
		(Derivation(Rule("Axiom"), (), Sequent(ctx, (instance,), instance)),),
		Sequent(ctx, (instance,), exists),
	)
	backward = Derivation(
		Rule("EpsI"),
		(Derivation(Rule("Axiom"), (), Sequent(ctx.extend(x, x_type), (psi,), psi)),),
		Sequent(ctx, (exists,), instance),
	)
	require_checked(forward, sig)
	require_checked(backward, sig)
	return forward, backward
