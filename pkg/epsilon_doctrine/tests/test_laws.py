import unittest
from unittest.mock import patch

from epsilon_doctrine import laws
from epsilon_doctrine.laws import (
	_epsilon_instances,
	_shapes,
	_tally,
	run_laws,
	verify_choice,
	verify_epsilon_inequality,
	verify_fiber_boolean_algebra,
	verify_sigma_adjunction,
)
from epsilon_doctrine.report import FAIL, OBSERVATION, PASS, Report
from epsilon_doctrine.utils import get_hooks


class TestTally(unittest.TestCase):
	def test_pass(self):
		verdict = _tally("law", "A=1", [("a", True), ("b", True)])
		self.assertEqual(verdict.verdict, PASS)
		self.assertEqual(verdict.checked, 2)
		self.assertEqual(verdict.detail, "")

	def test_failures_are_listed(self):
		verdict = _tally("law", "A=1", [("a", False), ("b", True), ("c", False)])
		self.assertEqual(verdict.verdict, FAIL)
		self.assertEqual(verdict.checked, 3)
		self.assertEqual(verdict.detail, "2 counterexamples: a, c")

	def test_listing_is_capped(self):
		cases = [(str(n), False) for n in range(10)]
		self.assertEqual(_tally("law", "A=1", cases).detail, "10 counterexamples: 0, 1, 2")


class TestVerifiers(unittest.TestCase):
	def test_fiber_sizes(self):
		verdicts = list(verify_fiber_boolean_algebra(3))
		self.assertEqual([v.instance for v in verdicts], ["A=1", "A=2", "A=3"])
		self.assertTrue(all(v.verdict == PASS for v in verdicts))

	def test_adjunction_instances(self):
		verdicts = list(verify_sigma_adjunction(2))
		self.assertEqual(len(verdicts), 16)
		self.assertEqual(verdicts[0].instance, "X=1,Y=1,side=first")
		self.assertEqual(verdicts[1].instance, "X=1,Y=1,side=second")
		self.assertEqual(verdicts[-1].instance, "X=4,Y=1,side=second")

	def test_shapes_are_bounded_by_cardinality(self):
		self.assertEqual(list(_shapes(12, 1)), [(1, 1)])
		self.assertEqual(
			list(_shapes(12, 2)), [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1), (4, 1)]
		)
		self.assertEqual(len(list(_shapes(10, 4))), 27)

	def test_epsilon_instances_cover_every_small_product(self):
		shapes = {(pi.left.size, pi.right.size) for pi, _ in _epsilon_instances(4)}
		expected = {(n, m) for n in range(1, 13) for m in range(1, 13) if n * m <= 12}
		self.assertEqual(shapes, expected)
		self.assertIn((1, 12), shapes)
		self.assertIn((6, 2), shapes)

	def test_equality_is_an_observation(self):
		verdicts = list(verify_epsilon_inequality(1))
		self.assertEqual([v.law for v in verdicts], ["epsilon_inequality", "epsilon_equality"])
		observation = verdicts[1]
		self.assertEqual(observation.verdict, OBSERVATION)
		self.assertEqual(observation.detail, "both sides coincide for 2 of 2 subsets")

	def test_choice_needs_room_for_an_epi(self):
		instances = [v.instance for v in verify_choice(2)]
		self.assertEqual(instances, ["X=1,Y=1", "X=2,Y=1", "X=2,Y=2"])


class TestRunLaws(unittest.TestCase):
	def test_every_law_holds(self):
		report = Report().extend(run_laws(2))
		self.assertTrue(report.ok)
		self.assertEqual(
			list(dict.fromkeys(v.law for v in report)),
			[
				"fiber_boolean_algebra",
				"reindex_homomorphism",
				"reindex_functoriality",
				"adjunction",
				"beck_chevalley",
				"epsilon_oracle",
				"epsilon_inequality",
				"epsilon_equality",
				"image_factorization",
				"pullback_stability",
				"lem_coproduct",
				"choice",
			],
		)
		self.assertEqual(len(get_hooks("law_verifiers")), 11)

	def test_deterministic(self):
		self.assertEqual(list(run_laws(2, seed=3)), list(run_laws(2, seed=3)))

	def test_every_law_holds_at_the_default_size(self):
		report = Report().extend(run_laws(4))
		self.assertTrue(report.ok, [v for v in report if v.verdict == FAIL])
		instances = [v.instance for v in report if v.law == "adjunction"]
		self.assertEqual(len(instances), 2 * 35)
		self.assertIn("X=12,Y=1,side=first", instances)
		self.assertIn("X=2,Y=6,side=second", instances)

	def test_order_follows_hooks(self):
		first = next(run_laws(1))
		self.assertEqual(first.law, "fiber_boolean_algebra")

	def test_broken_verifier_is_reported(self):
		hooks = ["epsilon_doctrine.laws.verify_missing", "epsilon_doctrine.laws.verify_choice"]
		with patch.object(laws, "get_hooks", return_value=hooks):
			with self.assertLogs("epsilon_doctrine", level="ERROR"):
				verdicts = list(run_laws(1))
		self.assertEqual(verdicts[0].law, "missing")
		self.assertEqual(verdicts[0].verdict, FAIL)
		self.assertEqual(verdicts[0].instance, "error")
		self.assertEqual(verdicts[1].law, "choice")
		self.assertEqual(verdicts[1].verdict, PASS)
