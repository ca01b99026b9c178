import unittest

from hypothesis import given

from epsilon_doctrine.exceptions import (
	ArityMismatchError,
	DuplicateVariableError,
	TypeMismatchError,
	UnboundVariableError,
	UnknownSymbolError,
	ValidationError,
)
from epsilon_doctrine.syntax import (
	BINDERS,
	CONNECTIVES,
	EMPTY,
	UNIT,
	App,
	BaseType,
	Context,
	Epsilon,
	Eq,
	Exists,
	Forall,
	Fun,
	Not,
	Prod,
	Rel,
	Sequent,
	Signature,
	Sum,
	Var,
	alpha_eq,
	contains_empty,
	free_names,
	free_vars,
	show,
	substitute,
	symbols_of,
	term_type,
	typecheck_term,
	wellform_formula,
	wellform_sequent,
)
from epsilon_doctrine.tests.strategies import A, C, F, P, R, SIGNATURE, formulas, terms

B = BaseType("B")
x, y, z = Var("x", A), Var("y", A), Var("z", A)


def rename_binders(obj, prefix: str):
	"""An alpha-variant of `obj` with binders v0, v1, ... renamed to `prefix`0, `prefix`1, ..."""
	if isinstance(obj, BINDERS):
		fresh = prefix + obj.var[1:]
		body = substitute(rename_binders(obj.body, prefix), {obj.var: Var(fresh, obj.type)})
		return type(obj)(fresh, obj.type, body)
	if isinstance(obj, (App, Rel)):
		return type(obj)(obj.symbol, tuple(rename_binders(a, prefix) for a in obj.args))
	if isinstance(obj, (Eq, *CONNECTIVES)):
		return type(obj)(rename_binders(obj.left, prefix), rename_binders(obj.right, prefix))
	if isinstance(obj, Not):
		return Not(rename_binders(obj.body, prefix))
	return obj


class TestSignature(unittest.TestCase):
	def test_declarations_are_ordered(self):
		self.assertEqual(SIGNATURE.base_types, ("A",))
		self.assertEqual([f.name for f in SIGNATURE.functions], ["c", "f"])
		self.assertEqual(F.args, (A,))
		self.assertEqual(C.result, A)

	def test_duplicate_symbols(self):
		with self.assertRaises(ValidationError):
			SIGNATURE.declare_type("A")
		with self.assertRaises(ValidationError):
			SIGNATURE.declare_relation("f", (A,))

	def test_unknown_type(self):
		with self.assertRaises(UnknownSymbolError):
			SIGNATURE.declare_function("g", (B,), A)

	def test_restrict_keeps_needed_types(self):
		sig = Signature(("A", "B")).declare_relation("Q", (B,))
		restricted = sig.restrict(relations=["Q"])
		self.assertEqual(restricted.base_types, ("B",))
		self.assertEqual([r.name for r in restricted.relations], ["Q"])

	def test_mentions_empty(self):
		self.assertFalse(SIGNATURE.mentions_empty())
		self.assertTrue(SIGNATURE.declare_function("absurd", (EMPTY,), A).mentions_empty())
		self.assertTrue(contains_empty(Fun(A, Sum(UNIT, EMPTY))))


class TestContext(unittest.TestCase):
	def test_duplicate_variable(self):
		with self.assertRaises(DuplicateVariableError):
			Context((("x", A), ("x", A)))

	def test_lookup_and_extend(self):
		ctx = Context((("x", A),)).extend("y", B)
		self.assertEqual(ctx.names, ("x", "y"))
		self.assertEqual(ctx.lookup("y"), B)
		self.assertIsNone(ctx.lookup("z"))
		self.assertIn("x", ctx)


class TestTyping(unittest.TestCase):
	def test_term_types(self):
		ctx = Context((("x", A),))
		self.assertEqual(typecheck_term(ctx, App(F, (x,)), SIGNATURE), A)
		self.assertEqual(term_type(Epsilon("y", A, Rel(P, (y,)))), A)

	def test_unbound_variable(self):
		with self.assertRaises(UnboundVariableError):
			typecheck_term(Context(), x, SIGNATURE)

	def test_variable_type_must_match_context(self):
		with self.assertRaises(TypeMismatchError):
			typecheck_term(Context((("x", UNIT),)), x, SIGNATURE)

	def test_arity(self):
		with self.assertRaises(ArityMismatchError):
			wellform_formula(Context((("x", A),)), Rel(R, (x,)), SIGNATURE)

	def test_binder_may_not_shadow_context(self):
		ctx = Context((("x", A),))
		with self.assertRaises(DuplicateVariableError):
			wellform_formula(ctx, Exists("x", A, Rel(P, (x,))), SIGNATURE)

	def test_sequent(self):
		seq = Sequent(Context((("x", A),)), (Rel(P, (x,)),), Eq(x, App(F, (x,))))
		wellform_sequent(seq, SIGNATURE)


class TestFreeVariables(unittest.TestCase):
	def test_binders_bind(self):
		phi = Forall("y", A, Rel(R, (x, y)))
		self.assertEqual(free_vars(phi), frozenset({("x", A)}))

	def test_epsilon_binds(self):
		self.assertEqual(free_names(Epsilon("y", A, Rel(R, (x, y)))), frozenset({"x"}))


class TestSubstitution(unittest.TestCase):
	def test_simple(self):
		self.assertEqual(substitute(Rel(P, (x,)), {"x": App(C)}), Rel(P, (App(C),)))

	def test_simultaneous(self):
		phi = Rel(R, (x, y))
		self.assertEqual(substitute(phi, {"x": y, "y": x}), Rel(R, (y, x)))

	def test_bound_occurrences_untouched(self):
		phi = Exists("x", A, Rel(P, (x,)))
		self.assertIs(substitute(phi, {"x": App(C)}), phi)

	def test_capture_renames_binder(self):
		phi = Exists("y", A, Rel(R, (x, y)))
		result = substitute(phi, {"x": y})
		self.assertEqual(result, Exists("y'", A, Rel(R, (y, Var("y'", A)))))
		self.assertTrue(alpha_eq(result, Exists("w", A, Rel(R, (y, Var("w", A))))))

	def test_renaming_avoids_context(self):
		phi = Forall("y", A, Rel(R, (x, y)))
		result = substitute(phi, {"x": y}, avoid=["y'"])
		self.assertEqual(result.var, "y''")

	def test_type_mismatch(self):
		with self.assertRaises(TypeMismatchError):
			substitute(Rel(P, (x,)), {"x": Var("b", B)})

	@given(formulas(scope=("x",)))
	def test_identity_substitution(self, phi):
		self.assertTrue(alpha_eq(substitute(phi, {"x": x}), phi))

	@given(formulas(scope=("x",)), terms(scope=("z",)))
	def test_substituted_free_variables(self, phi, t):
		result = substitute(phi, {"x": t})
		expected = (free_names(phi) - {"x"}) | (free_names(t) if "x" in free_names(phi) else set())
		self.assertEqual(free_names(result), expected)

	@given(formulas(scope=("x",)), terms(scope=("v0", "v1"), binder="u"))
	def test_capturing_terms_keep_their_free_variables(self, phi, t):
		result = substitute(phi, {"x": t})
		expected = (free_names(phi) - {"x"}) | (free_names(t) if "x" in free_names(phi) else set())
		self.assertEqual(free_names(result), expected)

	@given(formulas(scope=("x",)), terms(scope=("x", "v0", "v1"), binder="u"))
	def test_substitution_respects_alpha_equivalence(self, phi, t):
		renamed = rename_binders(phi, "w")
		self.assertTrue(alpha_eq(phi, renamed))
		self.assertTrue(alpha_eq(substitute(phi, {"x": t}), substitute(renamed, {"x": t})))

	@given(terms(scope=("y", "x")), terms(scope=("y",), binder="u"))
	def test_substitution_preserves_term_types(self, u, t):
		ctx = Context((("y", A),))
		result = substitute(u, {"x": t}, avoid=ctx.names)
		self.assertEqual(typecheck_term(ctx, result, SIGNATURE), A)

	@given(formulas(scope=("y", "x")), terms(scope=("y",), binder="u"))
	def test_substitution_preserves_well_formedness(self, phi, t):
		ctx = Context((("y", A),))
		wellform_formula(ctx, substitute(phi, {"x": t}, avoid=ctx.names), SIGNATURE)


class TestAlphaEquivalence(unittest.TestCase):
	def test_renamed_binders(self):
		self.assertTrue(alpha_eq(Epsilon("x", A, Rel(P, (x,))), Epsilon("y", A, Rel(P, (y,)))))

	def test_free_names_matter(self):
		self.assertFalse(alpha_eq(Rel(P, (x,)), Rel(P, (y,))))

	def test_binder_types_matter(self):
		b = Var("x", B)
		self.assertFalse(alpha_eq(Exists("x", A, Eq(x, x)), Exists("x", B, Eq(b, b))))


class TestShow(unittest.TestCase):
	def test_types(self):
		self.assertEqual(show(Fun(Prod(A, B), Sum(A, UNIT))), "A * B -> A + Unit")
		self.assertEqual(show(Fun(Fun(A, A), A)), "(A -> A) -> A")

	def test_formulas(self):
		phi = Not(Exists("y", A, Rel(R, (x, y))))
		self.assertEqual(show(phi), "~(exists y:A. R(x, y))")
		self.assertEqual(show(Eq(Epsilon("y", A, Rel(P, (y,))), App(C))), "(eps y:A. P(y)) = c")

	def test_symbols_of(self):
		seq = Sequent(Context((("x", A),)), (), Eq(App(F, (x,)), x))
		self.assertEqual(symbols_of(seq), ({"A"}, {"f"}, set()))
