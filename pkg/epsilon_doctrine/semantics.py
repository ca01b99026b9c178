"""
Interpretation of the Epsilon calculus in the subobject doctrine of pointed finite sets.

A context Γ = x1:A1, ..., xn:An is interpreted as the mixed-radix product ⟦A1⟧×...×⟦An⟧ with
the last variable least significant, so ⟦Γ, x:A⟧ is literally the row-major product ⟦Γ⟧×⟦A⟧.
Terms become maps out of ⟦Γ⟧, formulas subsets of ⟦Γ⟧, ε-terms the doctrine's ε-morphism.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from epsilon_doctrine.doctrine import BASEPOINT, FINSET, reindex, sigma
from epsilon_doctrine.exceptions import (
	EmptyTypeViolation,
	MorphismError,
	TypeMismatchError,
	UnboundVariableError,
	UnknownSymbolError,
	UnpointedObjectError,
	ValidationError,
)
from epsilon_doctrine.finset import (
	INITIAL,
	TERMINAL,
	FinMor,
	FinObj,
	FlatProduct,
	Product,
	Projection,
	Subset,
	all_morphisms,
	all_subsets,
	compose,
	coproduct,
	diagonal,
	exponential,
	flat_product,
	product,
	subset_of_mono,
)
from epsilon_doctrine.kernel import Derivation, require_checked
from epsilon_doctrine.report import FAIL, PASS, TRUNCATED, LawVerdict, Report
from epsilon_doctrine.syntax import (
	And,
	App,
	BaseType,
	Bot,
	Context,
	EmptyType,
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
	Top,
	UnitType,
	Var,
	contains_empty,
	substitute,
	symbol_type_text,
	symbols_of,
	types_of,
)
from epsilon_doctrine.utils import throw

logger = logging.getLogger(__name__)

DEFAULT_MAX_CARRIER = 3
DEFAULT_BUDGET = 10**6
MAX_DETAILED_VIOLATIONS = 10


@dataclass
class Interpretation:
	signature: Signature
	carriers: dict[str, int]
	functions: dict[str, FinMor] = field(default_factory=dict)
	relations: dict[str, Subset] = field(default_factory=dict)
	degenerate: bool = False

	def __post_init__(self):
		self.validate()

	def validate(self):
		self.validate_carriers()
		self.validate_functions()
		self.validate_relations()

	def validate_carriers(self):
		for name in self.signature.base_types:
			if name not in self.carriers:
				throw(f"No carrier for type {name}", UnknownSymbolError)
			if self.carriers[name] < 1:
				throw(f"Carrier of {name} must be pointed (size >= 1)", UnpointedObjectError)
		if self.degenerate and any(size != 1 for size in self.carriers.values()):
			throw("A degenerate interpretation has only singleton carriers", EmptyTypeViolation)

	def validate_functions(self):
		for symbol in self.signature.functions:
			table = self.functions.get(symbol.name)
			if table is None:
				throw(f"No table for function {symbol.name}", UnknownSymbolError)
			dom = self.arguments(symbol.args).obj
			cod = interpret_type(symbol.result, self)
			if table.dom != dom or table.cod != cod:
				throw(
					f"Table for {symbol.name} is {table.dom.size} -> {table.cod.size}, "
					f"expected {dom.size} -> {cod.size}",
					MorphismError,
				)

	def validate_relations(self):
		for symbol in self.signature.relations:
			subset = self.relations.get(symbol.name)
			if subset is None:
				throw(f"No subset for relation {symbol.name}", UnknownSymbolError)
			expected = self.arguments(symbol.args).obj
			if subset.carrier != expected:
				throw(
					f"Relation {symbol.name} lives in a carrier of size {subset.carrier.size}, "
					f"expected {expected.size}",
					MorphismError,
				)

	def arguments(self, args) -> FlatProduct:
		return flat_product(interpret_type(t, self) for t in args)

	def describe(self) -> str:
		parts = [f"|{name}|={size}" for name, size in self.carriers.items()]
		parts += [f"{name}={list(f.table)}" for name, f in self.functions.items()]
		parts += [f"{name}={list(s.members)}" for name, s in self.relations.items()]
		return ", ".join(parts)

	def as_dict(self) -> dict:
		"""The JSON mirror of the model-file format."""
		functions, relations = {}, {}
		for symbol in self.signature.functions:
			table = self.functions[symbol.name]
			functions[symbol.name] = {"type": symbol_type_text(symbol), "table": list(table.table)}
		for symbol in self.signature.relations:
			args = self.arguments(symbol.args)
			members = self.relations[symbol.name]
			relations[symbol.name] = {
				"type": symbol_type_text(symbol),
				"tuples": [list(args.decode(m)) for m in members],
			}
		return {
			"carriers": dict(self.carriers),
			"points": {name: BASEPOINT for name in self.carriers},
			"functions": functions,
			"relations": relations,
		}


def interpret_type(t, interpretation: Interpretation) -> FinObj:
	if isinstance(t, BaseType):
		if t.name not in interpretation.carriers:
			throw(f"No carrier for type {t.name}", UnknownSymbolError)
		return FinObj(interpretation.carriers[t.name])
	if isinstance(t, UnitType):
		return TERMINAL
	if isinstance(t, EmptyType):
		if interpretation.degenerate:
			return TERMINAL
		throw(
			"Empty has no pointed interpretation; only the degenerate model interprets it",
			EmptyTypeViolation,
		)
	if isinstance(t, Prod):
		left, right = interpret_type(t.left, interpretation), interpret_type(t.right, interpretation)
		return product(left, right).obj
	if isinstance(t, Sum):
		left, right = interpret_type(t.left, interpretation), interpret_type(t.right, interpretation)
		return coproduct(left, right).obj
	if isinstance(t, Fun):
		dom, cod = interpret_type(t.dom, interpretation), interpret_type(t.cod, interpretation)
		return exponential(dom, cod).obj
	throw(f"Not a type: {t!r}", TypeMismatchError)


@dataclass(frozen=True)
class ContextLayout:
	"""⟦Γ⟧ with one projection per variable; bound variables may shadow, the last one wins."""

	names: tuple[str, ...] = ()
	factors: tuple[FinObj, ...] = ()

	@cached_property
	def flat(self) -> FlatProduct:
		return FlatProduct(self.factors)

	@property
	def carrier(self) -> FinObj:
		return self.flat.obj

	def index(self, name: str) -> int:
		for k in range(len(self.names) - 1, -1, -1):
			if self.names[k] == name:
				return k
		throw(f"Unbound variable {name}", UnboundVariableError)

	def projection(self, name: str) -> FinMor:
		return self.flat.projection(self.index(name))

	def extend(self, name: str, obj: FinObj) -> tuple["ContextLayout", Product]:
		"""⟦Γ, x:A⟧ together with the product ⟦Γ⟧×⟦A⟧ it is equal to."""
		return ContextLayout(self.names + (name,), self.factors + (obj,)), product(self.carrier, obj)


def layout_of(ctx: Context, interpretation: Interpretation) -> ContextLayout:
	return ContextLayout(ctx.names, tuple(interpret_type(t, interpretation) for _, t in ctx))


def interpret_term(layout: ContextLayout, t, interpretation: Interpretation) -> FinMor:
	if isinstance(t, Var):
		projection = layout.projection(t.name)
		if projection.cod != interpret_type(t.type, interpretation):
			throw(f"Variable {t.name} does not match its layout factor", TypeMismatchError)
		return projection

	if isinstance(t, App):
		table = interpretation.functions.get(t.symbol.name)
		if table is None:
			throw(f"No table for function {t.symbol.name}", UnknownSymbolError)
		args = interpretation.arguments(t.symbol.args)
		tupled = args.tupling(
			[interpret_term(layout, a, interpretation) for a in t.args], dom=layout.carrier
		)
		return compose(table, tupled)

	if isinstance(t, Epsilon):
		extended, prod = layout.extend(t.var, interpret_type(t.type, interpretation))
		body = interpret_formula(extended, t.body, interpretation)
		return FINSET.epsilon(prod.pi, body)

	throw(f"Not a term: {t!r}", TypeMismatchError)


def interpret_formula(layout: ContextLayout, phi, interpretation: Interpretation) -> Subset:
	carrier = layout.carrier

	if isinstance(phi, Top):
		return Subset.full(carrier)
	if isinstance(phi, Bot):
		return Subset.empty(carrier)
	if isinstance(phi, And):
		return interpret_formula(layout, phi.left, interpretation).meet(
			interpret_formula(layout, phi.right, interpretation)
		)
	if isinstance(phi, Or):
		return interpret_formula(layout, phi.left, interpretation).join(
			interpret_formula(layout, phi.right, interpretation)
		)
	if isinstance(phi, Imp):
		return (
			interpret_formula(layout, phi.left, interpretation)
			.neg()
			.join(interpret_formula(layout, phi.right, interpretation))
		)
	if isinstance(phi, Not):
		return interpret_formula(layout, phi.body, interpretation).neg()

	if isinstance(phi, Eq):
		left = interpret_term(layout, phi.left, interpretation)
		right = interpret_term(layout, phi.right, interpretation)
		square = product(left.cod, left.cod)
		return reindex(square.pair(left, right), subset_of_mono(diagonal(left.cod)))

	if isinstance(phi, Rel):
		subset = interpretation.relations.get(phi.symbol.name)
		if subset is None:
			throw(f"No subset for relation {phi.symbol.name}", UnknownSymbolError)
		args = interpretation.arguments(phi.symbol.args)
		tupled = args.tupling(
			[interpret_term(layout, a, interpretation) for a in phi.args], dom=carrier
		)
		return reindex(tupled, subset)

	if isinstance(phi, (Exists, Forall)):
		extended, prod = layout.extend(phi.var, interpret_type(phi.type, interpretation))
		body = interpret_formula(extended, phi.body, interpretation)
		if isinstance(phi, Exists):
			return sigma(prod.pi, body)
		return sigma(prod.pi, body.neg()).neg()

	throw(f"Not a formula: {phi!r}", TypeMismatchError)


def holds(seq: Sequent, interpretation: Interpretation) -> bool:
	"""The meet of the hypotheses lies below the conclusion in P(⟦Γ⟧)."""
	layout = layout_of(seq.context, interpretation)
	hypotheses = Subset.full(layout.carrier)
	for h in seq.hypotheses:
		hypotheses = hypotheses.meet(interpret_formula(layout, h, interpretation))
	return hypotheses.leq(interpret_formula(layout, seq.conclusion, interpretation))


def substitution_lemma_check(
	ctx: Context,
	phi,
	assignments: Mapping[str, object],
	interpretation: Interpretation,
	target: Context | None = None,
) -> bool:
	"""⟦φ[t⃗/x⃗]⟧ = ⟨⟦t1⟧, ..., ⟦tn⟧⟩*⟦φ⟧ for φ in `ctx` and terms in `target` (default `ctx`)."""
	target = target or ctx
	source_layout = layout_of(ctx, interpretation)
	target_layout = layout_of(target, interpretation)

	substituted = substitute(phi, assignments, avoid=target.names)
	left = interpret_formula(target_layout, substituted, interpretation)

	terms = [assignments.get(name, Var(name, t)) for name, t in ctx]
	tupled = source_layout.flat.tupling(
		[interpret_term(target_layout, term, interpretation) for term in terms],
		dom=target_layout.carrier,
	)
	right = reindex(tupled, interpret_formula(source_layout, phi, interpretation))
	return left == right


# Enumeration
# -----------


def _carrier_assignments(
	sig: Signature, max_carrier: int, degenerate: bool = False
) -> Iterator[tuple[dict, bool]]:
	if degenerate or sig.mentions_empty():
		yield {name: 1 for name in sig.base_types}, True
		return
	for sizes in itertools.product(range(1, max_carrier + 1), repeat=len(sig.base_types)):
		yield dict(zip(sig.base_types, sizes)), False


def enumerate_interpretations(
	sig: Signature, max_carrier: int = DEFAULT_MAX_CARRIER, degenerate: bool = False
) -> Iterator[Interpretation]:
	"""Every interpretation with carriers in [1, max_carrier].

	Order: carrier sizes lexicographically, then function tables, then relation masks, earlier
	symbols most significant. A signature that mentions Empty, or `degenerate=True`, only has
	the degenerate model.
	"""
	for carriers, degenerate in _carrier_assignments(sig, max_carrier, degenerate):
		skeleton = Interpretation(Signature(sig.base_types), carriers, degenerate=degenerate)
		function_spaces = [
			list(all_morphisms(skeleton.arguments(f.args).obj, interpret_type(f.result, skeleton)))
			for f in sig.functions
		]
		relation_spaces = [list(all_subsets(skeleton.arguments(r.args).obj)) for r in sig.relations]
		for tables in itertools.product(*function_spaces):
			functions = {f.name: table for f, table in zip(sig.functions, tables)}
			for subsets in itertools.product(*relation_spaces):
				relations = {r.name: s for r, s in zip(sig.relations, subsets)}
				yield Interpretation(sig, dict(carriers), functions, relations, degenerate)


def count_interpretations(sig: Signature, max_carrier: int = DEFAULT_MAX_CARRIER) -> int:
	total = 0
	for carriers, forced in _carrier_assignments(sig, max_carrier):
		skeleton = Interpretation(Signature(sig.base_types), carriers, degenerate=forced)
		count = 1
		for f in sig.functions:
			count *= interpret_type(f.result, skeleton).size ** skeleton.arguments(f.args).obj.size
		for r in sig.relations:
			count *= 2 ** skeleton.arguments(r.args).obj.size
		total += count
	return total


def signature_for(sig: Signature, *items) -> Signature:
	"""The part of `sig` that the given syntax mentions."""
	return sig.restrict(*symbols_of(*items))


def mentions_empty(*items) -> bool:
	return any(contains_empty(t) for item in items for t in types_of(item))


def _signature(theory: Theory | Signature) -> Signature:
	return theory.signature if isinstance(theory, Theory) else theory


# Soundness
# ---------


def audit_soundness(
	d: Derivation,
	theory: Theory | Signature,
	max_carrier: int = DEFAULT_MAX_CARRIER,
	budget: int = DEFAULT_BUDGET,
) -> Report:
	"""Check every node's sequent in every interpretation of the symbols the derivation uses.

	One verdict per node; a node is never reported as passing when the enumeration was cut
	short by the budget.
	"""
	sig = _signature(theory)
	require_checked(d, sig)

	nodes = list(d.nodes())
	sequents = [node.conclusion for _, node in nodes]
	restricted = signature_for(sig, *sequents)

	violations = {path: 0 for path, _ in nodes}
	details = {path: [] for path, _ in nodes}
	detailed, checked, truncated = 0, 0, False

	degenerate = mentions_empty(*sequents)
	for interpretation in enumerate_interpretations(restricted, max_carrier, degenerate):
		if checked >= budget:
			truncated = True
			break
		checked += 1
		for path, node in nodes:
			if holds(node.conclusion, interpretation):
				continue
			violations[path] += 1
			if detailed < MAX_DETAILED_VIOLATIONS:
				details[path].append(interpretation.describe())
				detailed += 1
		if checked % 10000 == 0:
			logger.debug("audited %d interpretations", checked)

	report = Report()
	for path, node in nodes:
		instance = f"{path} {node.rule.name}"
		if violations[path]:
			detail = f"{violations[path]} violations; " + " | ".join(details[path])
			report.append(LawVerdict("soundness", instance, FAIL, checked, detail))
		elif truncated:
			detail = f"budget {budget} exhausted"
			report.append(LawVerdict("soundness", instance, TRUNCATED, checked, detail))
		else:
			report.append(LawVerdict("soundness", instance, PASS, checked))
	return report


@dataclass
class CountermodelResult:
	model: Interpretation | None
	checked: int
	truncated: bool = False

	@property
	def found(self) -> bool:
		return self.model is not None

	def as_verdict(self, instance: str) -> LawVerdict:
		if self.model is not None:
			return LawVerdict("countermodel", instance, FAIL, self.checked, self.model.describe())
		if self.truncated:
			return LawVerdict("countermodel", instance, TRUNCATED, self.checked)
		return LawVerdict("countermodel", instance, PASS, self.checked)


def countermodel_search(
	seq: Sequent,
	theory: Theory | Signature,
	max_carrier: int = DEFAULT_MAX_CARRIER,
	budget: int = DEFAULT_BUDGET,
) -> CountermodelResult:
	"""The first interpretation, in enumeration order, that refutes `seq`.

	Only models of the theory count: axioms whose symbols the sequent also uses are imposed.
	"""
	sig = _signature(theory)
	restricted = signature_for(sig, seq)
	axioms = []
	if isinstance(theory, Theory):
		for axiom in theory.axioms.values():
			types, functions, relations = symbols_of(axiom)
			if (
				types <= set(restricted.base_types)
				and all(restricted.function(f) for f in functions)
				and all(restricted.relation(r) for r in relations)
			):
				axioms.append(axiom)

	checked = 0
	degenerate = mentions_empty(seq, *axioms)
	for interpretation in enumerate_interpretations(restricted, max_carrier, degenerate):
		if checked >= budget:
			return CountermodelResult(None, checked, truncated=True)
		checked += 1
		if not all(holds(a, interpretation) for a in axioms):
			continue
		if not holds(seq, interpretation):
			return CountermodelResult(interpretation, checked)
	return CountermodelResult(None, checked)


# Empty type
# ----------


@dataclass(frozen=True)
class TrivialityReport:
	reason: str
	argument: tuple[str, ...]
	offending: dict = field(default_factory=dict)
	demonstration: str = ""

	def as_dict(self) -> dict:
		return {
			"reason": self.reason,
			"argument": list(self.argument),
			"offending": dict(self.offending),
			"demonstration": self.demonstration,
		}


TRIVIALITY_ARGUMENT = (
	"⊤ is well formed in the context x:Empty, so ε x:Empty. ⊤ is a closed term of type Empty",
	"its interpretation is an arrow ε_⊤ : 1 → 0",
	"composing with the unique 0 → 1 shows 1 ≅ 0, since any arrow into an initial object "
	"is an isomorphism",
	"every object A has an arrow A → 1 ≅ 0, hence A ≅ 0 ≅ 1: every object is terminal",
)


def empty_type_guard(
	theory: Theory | Signature,
	interpretation: Interpretation | None = None,
	extra: Iterable = (),
) -> TrivialityReport | None:
	"""None when the theory, together with `extra` sequents or formulas, can be interpreted;
	otherwise the refusal, with its argument."""
	if not (theory.mentions_empty() or mentions_empty(*extra)):
		return None

	if interpretation is not None:
		offending = {name: size for name, size in interpretation.carriers.items() if size >= 2}
		if not offending:
			return None
	else:
		offending = {}

	try:
		epsilon = FINSET.epsilon(Projection(TERMINAL, INITIAL, "first"), Subset.full(FinObj(0)))
		demonstration = f"ε on 1×0 unexpectedly produced {epsilon!r}"
	except ValidationError as e:
		demonstration = f"ε on 1×0 is refused: {e}"

	return TrivialityReport(
		reason="the theory mentions Empty, which forces every object to be terminal",
		argument=TRIVIALITY_ARGUMENT,
		offending=offending,
		demonstration=demonstration,
	)
