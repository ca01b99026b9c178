import unittest

from hypothesis import given
from hypothesis import strategies as st

from epsilon_doctrine.exceptions import (
	MorphismError,
	NotAProjectionError,
	NotSurjectiveError,
	UnpointedObjectError,
)
from epsilon_doctrine.finset import (
	INITIAL,
	FinMor,
	FinObj,
	Projection,
	Subset,
	all_epis,
	all_morphisms,
	all_subsets,
	complement,
	compose,
	coproduct,
	copair,
	diagonal,
	exponential,
	flat_product,
	identity,
	image_factorize,
	inverse,
	product,
	product_map,
	pullback,
	section_of_epi,
	section_of_projection,
	subset_of_mono,
)


@st.composite
def morphisms(draw, max_size: int = 4, dom: FinObj | None = None, cod: FinObj | None = None):
	dom = dom or FinObj(draw(st.integers(0, max_size)))
	cod = cod or FinObj(draw(st.integers(1, max_size)))
	values = st.integers(0, cod.size - 1)
	return FinMor(dom, cod, draw(st.lists(values, min_size=dom.size, max_size=dom.size)))


class TestMorphisms(unittest.TestCase):
	def test_compose(self):
		f = FinMor(FinObj(2), FinObj(3), [0, 2])
		g = FinMor(FinObj(3), FinObj(2), [1, 0, 0])
		self.assertEqual(compose(g, f), FinMor(FinObj(2), FinObj(2), [1, 0]))

	def test_compose_mismatch(self):
		f = FinMor(FinObj(2), FinObj(3), [0, 2])
		with self.assertRaises(MorphismError):
			compose(f, f)

	def test_table_checks(self):
		with self.assertRaises(MorphismError):
			FinMor(FinObj(2), FinObj(2), [0])
		with self.assertRaises(MorphismError):
			FinMor(FinObj(1), FinObj(2), [2])
		with self.assertRaises(MorphismError):
			FinObj(-1)

	def test_epi_mono(self):
		f = FinMor(FinObj(3), FinObj(2), [0, 0, 1])
		self.assertTrue(f.is_epi())
		self.assertFalse(f.is_mono())
		self.assertTrue(identity(FinObj(3)).is_iso())

	def test_inverse(self):
		f = FinMor(FinObj(3), FinObj(3), [2, 0, 1])
		self.assertEqual(compose(inverse(f), f), identity(FinObj(3)))
		with self.assertRaises(MorphismError):
			inverse(FinMor(FinObj(2), FinObj(2), [0, 0]))

	@given(morphisms())
	def test_identity_laws(self, f):
		self.assertEqual(compose(f, identity(f.dom)), f)
		self.assertEqual(compose(identity(f.cod), f), f)

	@given(st.data())
	def test_associativity(self, data):
		f = data.draw(morphisms(max_size=3))
		g = data.draw(morphisms(max_size=3, dom=f.cod))
		h = data.draw(morphisms(max_size=3, dom=g.cod))
		self.assertEqual(compose(h, compose(g, f)), compose(compose(h, g), f))

	def test_enumeration_counts(self):
		self.assertEqual(len(list(all_morphisms(FinObj(2), FinObj(3)))), 9)
		self.assertEqual(len(list(all_morphisms(INITIAL, FinObj(3)))), 1)
		self.assertEqual(len(list(all_epis(FinObj(3), FinObj(2)))), 6)
		self.assertEqual([s.mask for s in all_subsets(FinObj(2))], [0, 1, 2, 3])


class TestProducts(unittest.TestCase):
	def test_row_major(self):
		prod = product(FinObj(2), FinObj(3))
		self.assertEqual(list(prod.pi.table), [0, 0, 0, 1, 1, 1])
		self.assertEqual(list(prod.pi_prime.table), [0, 1, 2, 0, 1, 2])
		self.assertEqual(prod.encode(1, 2), 5)
		self.assertEqual(prod.decode(4), (1, 1))

	def test_pair(self):
		prod = product(FinObj(2), FinObj(3))
		f = FinMor(FinObj(2), FinObj(2), [1, 0])
		g = FinMor(FinObj(2), FinObj(3), [2, 2])
		paired = prod.pair(f, g)
		self.assertEqual(compose(prod.pi, paired), f)
		self.assertEqual(compose(prod.pi_prime, paired), g)

	def test_product_map(self):
		f = FinMor(FinObj(2), FinObj(2), [1, 0])
		g = identity(FinObj(2))
		self.assertEqual(list(product_map(f, g).table), [2, 3, 0, 1])

	def test_diagonal(self):
		self.assertEqual(list(diagonal(FinObj(3)).table), [0, 4, 8])

	def test_flat_product_last_factor_least_significant(self):
		flat = flat_product([FinObj(2), FinObj(3), FinObj(2)])
		self.assertEqual(flat.obj.size, 12)
		self.assertEqual(flat.encode([1, 2, 1]), 11)
		self.assertEqual(flat.decode(7), (1, 0, 1))
		self.assertEqual(list(flat.projection(2).table), [0, 1] * 6)

	def test_flat_product_of_two_is_the_product(self):
		flat = flat_product([FinObj(2), FinObj(3)])
		prod = product(FinObj(2), FinObj(3))
		self.assertEqual(flat.projection(0), prod.pi)
		self.assertEqual(flat.projection(1), prod.pi_prime)

	def test_empty_flat_product(self):
		flat = flat_product([])
		self.assertEqual(flat.obj.size, 1)
		self.assertEqual(flat.tupling([], dom=FinObj(3)).table, (0, 0, 0))
		with self.assertRaises(MorphismError):
			flat.tupling([])

	def test_projection_side(self):
		with self.assertRaises(NotAProjectionError):
			Projection(FinObj(1), FinObj(1), "third")


class TestPullbacksAndImages(unittest.TestCase):
	def test_pullback_pairs_are_lexicographic(self):
		f = FinMor(FinObj(2), FinObj(2), [0, 1])
		g = FinMor(FinObj(3), FinObj(2), [1, 0, 1])
		square = pullback(f, g)
		self.assertEqual(square.pairs, ((0, 1), (1, 0), (1, 2)))
		self.assertEqual(compose(f, square.p1), compose(g, square.p2))

	def test_pullback_mediator(self):
		f = FinMor(FinObj(2), FinObj(2), [0, 1])
		g = FinMor(FinObj(3), FinObj(2), [1, 0, 1])
		square = pullback(f, g)
		h = FinMor(FinObj(1), FinObj(2), [1])
		k = FinMor(FinObj(1), FinObj(3), [2])
		self.assertEqual(list(square.mediator(h, k).table), [2])
		with self.assertRaises(MorphismError):
			square.mediator(h, FinMor(FinObj(1), FinObj(3), [1]))

	def test_image_factorization(self):
		f = FinMor(FinObj(2), FinObj(3), [1, 1])
		factorization = image_factorize(f)
		self.assertEqual(list(factorization.e.table), [0, 0])
		self.assertEqual(list(factorization.m.table), [1])

	@given(morphisms())
	def test_factorization_composes(self, f):
		factorization = image_factorize(f)
		self.assertTrue(factorization.e.is_epi())
		self.assertTrue(factorization.m.is_mono())
		self.assertEqual(compose(factorization.m, factorization.e), f)


class TestSubsets(unittest.TestCase):
	def test_canonical(self):
		a = FinObj(4)
		self.assertEqual(Subset(a, [3, 1, 1]), Subset.from_mask(a, 0b1010))
		self.assertEqual(Subset(a, [3, 1]).members, (1, 3))

	def test_out_of_range(self):
		with self.assertRaises(MorphismError):
			Subset(FinObj(2), [2])

	def test_lattice(self):
		a = FinObj(3)
		s, t = Subset(a, [0, 1]), Subset(a, [1, 2])
		self.assertEqual(s.meet(t), Subset(a, [1]))
		self.assertEqual(s.join(t), Subset.full(a))
		self.assertEqual(complement(s), Subset(a, [2]))
		self.assertTrue(Subset(a, [1]).leq(s))
		self.assertFalse(s.leq(t))

	def test_different_carriers(self):
		with self.assertRaises(MorphismError):
			Subset(FinObj(2)).meet(Subset(FinObj(3)))

	def test_subset_of_mono(self):
		m = FinMor(FinObj(2), FinObj(4), [3, 0])
		self.assertEqual(subset_of_mono(m), Subset(FinObj(4), [0, 3]))
		with self.assertRaises(MorphismError):
			subset_of_mono(FinMor(FinObj(2), FinObj(2), [0, 0]))

	def test_copair(self):
		y = FinObj(3)
		s = Subset(y, [1])
		m, nm = s.inclusion(), complement(s).inclusion()
		f = FinMor(m.dom, FinObj(2), [1])
		g = FinMor(nm.dom, FinObj(2), [0, 0])
		h = copair(f, g, m, nm)
		self.assertEqual(list(h.table), [0, 1, 0])
		self.assertEqual(compose(h, m), f)

	def test_copair_needs_a_partition(self):
		y = FinObj(3)
		m = Subset(y, [0, 1]).inclusion()
		nm = Subset(y, [1, 2]).inclusion()
		z = FinObj(1)
		with self.assertRaises(MorphismError):
			copair(FinMor(m.dom, z, [0, 0]), FinMor(nm.dom, z, [0, 0]), m, nm)


class TestChoice(unittest.TestCase):
	def test_least_preimage(self):
		e = FinMor(FinObj(3), FinObj(2), [0, 0, 1])
		self.assertEqual(list(section_of_epi(e).table), [0, 2])

	def test_not_surjective(self):
		with self.assertRaises(NotSurjectiveError):
			section_of_epi(FinMor(FinObj(2), FinObj(3), [0, 1]))

	def test_section_of_projection(self):
		pi = product(FinObj(2), FinObj(2)).pi
		section = section_of_projection(pi)
		self.assertEqual(list(section.table), [0, 2])
		self.assertEqual(compose(pi, section), identity(FinObj(2)))

	def test_section_of_projection_needs_a_basepoint(self):
		with self.assertRaises(UnpointedObjectError):
			section_of_projection(product(FinObj(2), INITIAL).pi)
		with self.assertRaises(NotAProjectionError):
			section_of_projection(product(FinObj(2), FinObj(2)).pi_prime)

	@given(st.integers(1, 4), st.data())
	def test_sections_split(self, n, data):
		f = data.draw(morphisms(dom=FinObj(n), cod=FinObj(data.draw(st.integers(1, n)))))
		if f.is_epi():
			self.assertEqual(compose(f, section_of_epi(f)), identity(f.cod))


class TestCoproductsAndExponentials(unittest.TestCase):
	def test_coproduct_blocks(self):
		sum_ = coproduct(FinObj(2), FinObj(3))
		self.assertEqual(list(sum_.i_left.table), [0, 1])
		self.assertEqual(list(sum_.i_right.table), [2, 3, 4])

	def test_coproduct_mediator(self):
		sum_ = coproduct(FinObj(2), FinObj(1))
		f = FinMor(FinObj(2), FinObj(2), [1, 1])
		g = FinMor(FinObj(1), FinObj(2), [0])
		h = sum_.mediator(f, g)
		self.assertEqual(compose(h, sum_.i_left), f)
		self.assertEqual(compose(h, sum_.i_right), g)

	def test_exponential_codes(self):
		exp = exponential(FinObj(2), FinObj(2))
		self.assertEqual(exp.obj.size, 4)
		self.assertEqual(exp.decode(2), (0, 1))
		self.assertEqual(exp.encode([0, 1]), 2)
		self.assertEqual(exp.point(), 0)

	def test_evaluation_and_transpose(self):
		a, b, c = FinObj(2), FinObj(3), FinObj(2)
		exp = exponential(a, b)
		f = FinMor(product(c, a).obj, b, [0, 1, 2, 2])
		curried = exp.transpose(f, c)
		ev_after = compose(exp.evaluation, product_map(curried, identity(a)))
		self.assertEqual(ev_after, f)

	def test_unpointed_exponential(self):
		with self.assertRaises(UnpointedObjectError):
			exponential(FinObj(1), INITIAL).point()
		self.assertEqual(exponential(INITIAL, INITIAL).obj.size, 1)
