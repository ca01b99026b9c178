import unittest

from epsilon_doctrine.exceptions import KernelRejection, ValidationError
from epsilon_doctrine.kernel import (
	Derivation,
	Rule,
	check_derivation,
	check_node,
	derive_epsilon_exists_equiv,
	require_checked,
	rule,
)
from epsilon_doctrine.parser import parse_formula, parse_sequent
from epsilon_doctrine.proofs import parse_proof_script
from epsilon_doctrine.report import FAIL, PASS
from epsilon_doctrine.syntax import BaseType, Context
from epsilon_doctrine.tests.setup import basic_signature
from epsilon_doctrine.utils import RULES

A, B = BaseType("A"), BaseType("B")


def verdicts(text: str):
	(proof,) = parse_proof_script(text, basic_signature())
	return check_derivation(proof.derivation, basic_signature())


class KernelTestCase(unittest.TestCase):
	def assertAccepted(self, text: str):
		report = verdicts(text)
		self.assertTrue(report.ok, [v.as_dict() for v in report.failures])

	def assertRejected(self, text: str, node: str = "root", message: str = ""):
		report = verdicts(text)
		failed = {v.node: v for v in report.failures}
		self.assertEqual(list(failed), [node])
		if message:
			self.assertIn(message, "; ".join(failed[node].messages))


class TestRules(unittest.TestCase):
	def test_every_rule_has_a_checker(self):
		for tag, data in RULES.items():
			self.assertEqual(rule(data["name"]).tag, tag)
			self.assertEqual(Rule(tag).premise_count, data["premises"])

	def test_unknown_rule(self):
		with self.assertRaises(ValidationError):
			rule("modus-tollens")
		with self.assertRaises(ValidationError):
			Rule("ModusTollens")


class TestStructural(KernelTestCase):
	def test_axiom(self):
		self.assertAccepted('(axiom "[x:A] | P(x) |- P(x)")')
		self.assertRejected('(axiom "[x:A] | P(x) |- Q(x)")', message="conclusion is Q(x)")
		self.assertRejected('(axiom "[x:A] | P(x), Q(x) |- P(x)")', message="exactly one")

	def test_weaken(self):
		self.assertAccepted(
			"""(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A, y:B] | Q(x), P(x) |- P(x)")"""
		)
		self.assertRejected(
			"""(weaken (axiom "[x:A] | P(x) |- P(x)") "[y:B] | P(c) |- P(c)")""",
			message="not a sublist",
		)

	def test_weaken_keeps_order(self):
		self.assertRejected(
			"""(weaken
				(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A] | P(x), Q(x) |- P(x)")
				"[x:A] | Q(x), S |- P(x)")""",
			message="hypotheses are not a sublist",
		)

	def test_exchange(self):
		self.assertAccepted(
			"""(exchange
				(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A, y:B] | P(x), Q(x) |- P(x)")
				"[y:B, x:A] | Q(x), P(x) |- P(x)")"""
		)
		self.assertRejected(
			"""(exchange
				(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A] | P(x), Q(x) |- P(x)")
				"[x:A] | Q(x), Q(x) |- P(x)")""",
			message="permutation",
		)

	def test_cut(self):
		self.assertAccepted(
			"""(cut
				(and-e1 (axiom "[x:A] | P(x) /\\ Q(x) |- P(x) /\\ Q(x)") "[x:A] | P(x) /\\ Q(x) |- P(x)")
				(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A] | P(x) /\\ Q(x), P(x) |- P(x)")
				"[x:A] | P(x) /\\ Q(x) |- P(x)")"""
		)

	def test_premise_count(self):
		derivation = Derivation(Rule("AndI"), (), parse_sequent("[] | |- S /\\ S", basic_signature()))
		(message,) = check_node(derivation, basic_signature())
		self.assertIn("takes 2 premises", message)


class TestPropositional(KernelTestCase):
	def test_conjunction(self):
		self.assertAccepted(
			"""(and-i
				(and-e2 (axiom "[x:A] | P(x) /\\ Q(x) |- P(x) /\\ Q(x)") "[x:A] | P(x) /\\ Q(x) |- Q(x)")
				(and-e1 (axiom "[x:A] | P(x) /\\ Q(x) |- P(x) /\\ Q(x)") "[x:A] | P(x) /\\ Q(x) |- P(x)")
				"[x:A] | P(x) /\\ Q(x) |- Q(x) /\\ P(x)")"""
		)

	def test_disjunction_needs_last_hypothesis(self):
		self.assertRejected(
			"""(or-e
				(axiom "[] | S |- S")
				(axiom "[] | S |- S")
				"[] | S |- S")""",
			message="must be a disjunction",
		)

	def test_implication(self):
		self.assertAccepted(
			"""(imp-i (axiom "[x:A] | P(x) |- P(x)") "[x:A] | |- P(x) -> P(x)")"""
		)
		self.assertRejected(
			"""(imp-i (axiom "[x:A] | Q(x) |- Q(x)") "[x:A] | |- P(x) -> Q(x)")""",
			message="premise hypotheses",
		)

	def test_modus_ponens(self):
		self.assertAccepted(
			"""(imp-e
				(weaken (imp-i (axiom "[] | S |- S") "[] | |- S -> S") "[] | S |- S -> S")
				(axiom "[] | S |- S")
				"[] | S |- S")"""
		)

	def test_negation_and_falsity(self):
		self.assertAccepted(
			"""(bot-e
				(not-e
					(and-e2 (axiom "[] | S /\\ ~S |- S /\\ ~S") "[] | S /\\ ~S |- ~S")
					(and-e1 (axiom "[] | S /\\ ~S |- S /\\ ~S") "[] | S /\\ ~S |- S")
					"[] | S /\\ ~S |- false")
				"[] | S /\\ ~S |- P(c)")"""
		)

	def test_bot_e_keeps_the_frame(self):
		self.assertRejected(
			"""(bot-e
				(not-e
					(and-e2 (axiom "[] | S /\\ ~S |- S /\\ ~S") "[] | S /\\ ~S |- ~S")
					(and-e1 (axiom "[] | S /\\ ~S |- S /\\ ~S") "[] | S /\\ ~S |- S")
					"[] | S /\\ ~S |- false")
				"[] | |- S")""",
			message="premise hypotheses",
		)

	def test_truth(self):
		self.assertAccepted('(top-i "[x:A] | |- true")')
		self.assertRejected('(top-i "[x:A] | P(x) |- true")', message="without hypotheses")

	def test_excluded_middle(self):
		self.assertAccepted('(lem "[x:A] | |- P(x) \\/ ~P(x)")')
		self.assertRejected('(lem "[x:A] | |- P(x) \\/ ~Q(x)")', message="negated disjunct")
		self.assertRejected('(lem "[x:A] | |- ~P(x) \\/ P(x)")', message="not of the form")


class TestQuantifiers(KernelTestCase):
	def test_exists_intro(self):
		self.assertAccepted(
			"""(exists-i :witness "f(c)"
				(axiom "[] | P(f(c)) |- P(f(c))")
				"[] | P(f(c)) |- exists x:A. P(x)")"""
		)
		self.assertRejected(
			"""(exists-i :witness "c"
				(axiom "[] | P(f(c)) |- P(f(c))")
				"[] | P(f(c)) |- exists x:A. P(x)")""",
			message="premise conclusion",
		)

	def test_exists_intro_needs_witness(self):
		self.assertRejected(
			"""(exists-i
				(axiom "[] | P(c) |- P(c)")
				"[] | P(c) |- exists x:A. P(x)")""",
			message="witness term is missing",
		)

	def test_exists_elim(self):
		self.assertAccepted(
			"""(exists-e
				(exists-i :witness "x"
					(or-i1 (axiom "[x:A] | P(x) |- P(x)") "[x:A] | P(x) |- P(x) \\/ Q(x)")
					"[x:A] | P(x) |- exists z:A. P(z) \\/ Q(z)")
				"[] | exists x:A. P(x) |- exists z:A. P(z) \\/ Q(z)")"""
		)

	def test_exists_elim_uses_the_bound_name(self):
		self.assertRejected(
			"""(exists-e
				(axiom "[z:A] | P(z) |- P(z)")
				"[] | exists x:A. P(x) |- P(c)")""",
			message="should be [x:A]",
		)

	def test_forall_intro(self):
		self.assertAccepted(
			"""(forall-i (lem "[x:A] | |- P(x) \\/ ~P(x)") "[] | |- forall x:A. P(x) \\/ ~P(x)")"""
		)

	def test_forall_intro_eigenvariable(self):
		self.assertRejected(
			"""(forall-i
				(axiom "[x:A] | P(x) |- P(x)")
				"[] | P(c) |- forall x:A. P(x)")""",
			message="eigenvariable x occurs free",
		)

	def test_forall_elim(self):
		self.assertAccepted(
			"""(forall-e :witness "c"
				(axiom "[] | forall x:A. P(x) |- forall x:A. P(x)")
				"[] | forall x:A. P(x) |- P(c)")"""
		)

	def test_witness_type(self):
		self.assertRejected(
			"""(forall-e :witness "y"
				(axiom "[y:B] | forall x:A. P(x) |- forall x:A. P(x)")
				"[y:B] | forall x:A. P(x) |- P(c)")""",
			message="witness has type B",
		)


class TestEquality(KernelTestCase):
	def test_reflexivity(self):
		self.assertAccepted('(eq-refl "[x:A] | |- f(x) = f(x)")')
		self.assertRejected('(eq-refl "[x:A] | |- f(x) = x")', message="right-hand side")

	def test_substitution_in_a_context(self):
		self.assertAccepted(
			"""(eq-subst :target "R(z, y)" :var "z:A"
				(weaken (axiom "[y:B] | c = f(c) |- c = f(c)") "[y:B] | c = f(c), R(c, y) |- c = f(c)")
				(weaken (axiom "[y:B] | R(c, y) |- R(c, y)") "[y:B] | c = f(c), R(c, y) |- R(c, y)")
				"[y:B] | c = f(c), R(c, y) |- R(f(c), y)")"""
		)

	def test_transport(self):
		self.assertAccepted(
			"""(eq-subst :target "P(z)" :var "z:A"
				(weaken (axiom "[x:A, y:A] | x = y |- x = y") "[x:A, y:A] | x = y, P(x) |- x = y")
				(weaken (axiom "[x:A, y:A] | P(x) |- P(x)") "[x:A, y:A] | x = y, P(x) |- P(x)")
				"[x:A, y:A] | x = y, P(x) |- P(y)")"""
		)

	def test_transport_checks_the_target(self):
		self.assertRejected(
			"""(eq-subst :target "Q(z)" :var "z:A"
				(weaken (axiom "[x:A, y:A] | x = y |- x = y") "[x:A, y:A] | x = y, P(x) |- x = y")
				(weaken (axiom "[x:A, y:A] | P(x) |- P(x)") "[x:A, y:A] | x = y, P(x) |- P(x)")
				"[x:A, y:A] | x = y, P(x) |- P(y)")""",
			message="second premise conclusion",
		)


class TestEpsilon(KernelTestCase):
	def test_intro(self):
		self.assertAccepted(
			"""(eps-i
				(axiom "[x:A] | P(x) |- P(x)")
				"[] | exists x:A. P(x) |- P(eps x:A. P(x))")"""
		)

	def test_intro_in_a_context(self):
		self.assertAccepted(
			"""(eps-i
				(axiom "[y:B, x:A] | R(x, y) |- R(x, y)")
				"[y:B] | exists x:A. R(x, y) |- R(eps x:A. R(x, y), y)")"""
		)

	def test_intro_is_alpha_invariant(self):
		self.assertAccepted(
			"""(eps-i
				(axiom "[x:A] | P(x) |- P(x)")
				"[] | exists z:A. P(z) |- P(eps w:A. P(w))")"""
		)

	def test_intro_rejects_wrong_instance(self):
		self.assertRejected(
			"""(eps-i
				(axiom "[x:A] | P(x) |- P(x)")
				"[] | exists x:A. P(x) |- Q(eps x:A. P(x))")""",
			message="conclusion",
		)

	def test_intro_premise_is_the_identity_on_its_formula(self):
		self.assertRejected(
			"""(eps-i
				(weaken (axiom "[x:A] | P(x) |- P(x)") "[x:A] | Q(x), P(x) |- P(x)")
				"[] | exists x:A. P(x) |- P(eps x:A. P(x))")""",
			message="premise hypotheses",
		)

	def test_intro_needs_the_bound_variable_last(self):
		self.assertRejected(
			"""(eps-i
				(axiom "[x:A, y:B] | R(x, y) |- R(x, y)")
				"[y:B] | exists x:A. R(x, y) |- R(eps x:A. R(x, y), y)")""",
			message="occurs in the conclusion context",
		)

	def test_extensionality(self):
		self.assertAccepted(
			"""(eps-ex
				(and-i
					(and-e2 (axiom "[x:A] | P(x) /\\ Q(x) |- P(x) /\\ Q(x)") "[x:A] | P(x) /\\ Q(x) |- Q(x)")
					(and-e1 (axiom "[x:A] | P(x) /\\ Q(x) |- P(x) /\\ Q(x)") "[x:A] | P(x) /\\ Q(x) |- P(x)")
					"[x:A] | P(x) /\\ Q(x) |- Q(x) /\\ P(x)")
				(and-i
					(and-e2 (axiom "[x:A] | Q(x) /\\ P(x) |- Q(x) /\\ P(x)") "[x:A] | Q(x) /\\ P(x) |- P(x)")
					(and-e1 (axiom "[x:A] | Q(x) /\\ P(x) |- Q(x) /\\ P(x)") "[x:A] | Q(x) /\\ P(x) |- Q(x)")
					"[x:A] | Q(x) /\\ P(x) |- P(x) /\\ Q(x)")
				"[] | |- (eps x:A. P(x) /\\ Q(x)) = (eps x:A. Q(x) /\\ P(x))")"""
		)

	def test_extensionality_needs_both_directions(self):
		self.assertRejected(
			"""(eps-ex
				(axiom "[x:A] | P(x) |- P(x)")
				(axiom "[x:A] | Q(x) |- Q(x)")
				"[] | |- (eps x:A. P(x)) = (eps x:A. Q(x))")""",
			message="second premise hypothesis",
		)

	def test_exists_equivalence(self):
		sig = basic_signature()
		ctx = Context((("y", B),))
		psi = parse_formula("R(x, y)", sig, ctx.extend("x", A))
		forward, backward = derive_epsilon_exists_equiv(psi, "x", A, sig, ctx)
		self.assertTrue(check_derivation(forward, sig).ok)
		self.assertTrue(check_derivation(backward, sig).ok)
		self.assertEqual(forward.conclusion.hypotheses, (backward.conclusion.conclusion,))
		self.assertEqual(backward.conclusion.hypotheses, (forward.conclusion.conclusion,))


class TestReports(unittest.TestCase):
	def test_verdict_per_node(self):
		report = verdicts(
			"""(and-i
				(axiom "[] | S |- S")
				(axiom "[] | S |- true")
				"[] | S |- S /\\ true")"""
		)
		self.assertEqual([v.node for v in report], ["root", "root.0", "root.1"])
		self.assertEqual([v.verdict for v in report], [PASS, PASS, FAIL])
		self.assertEqual(report.entries[2].rule, "axiom")

	def test_require_checked(self):
		(proof,) = parse_proof_script('(axiom "[] | S |- true")', basic_signature())
		with self.assertRaises(KernelRejection) as cm:
			require_checked(proof.derivation, basic_signature())
		self.assertEqual(len(cm.exception.verdicts), 1)
		self.assertEqual(cm.exception.verdicts[0].verdict, FAIL)

	def test_ill_formed_conclusion(self):
		sig = basic_signature()
		seq = parse_sequent("[x:A] | P(x) |- P(x)", sig)
		derivation = Derivation(Rule("Axiom"), (), seq)
		smaller = sig.restrict(types=["A"])
		messages = check_node(derivation, smaller)
		self.assertTrue(any("not well formed" in m for m in messages))
