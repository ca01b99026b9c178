"""
The subobject doctrine on pointed finite sets, with Σ along projections and ε-morphisms.

`epsilon_categorical` builds ε_ψ from a factorization, an AC section and the projection section
⟨id, 0!⟩, glued by the LEM copair; `epsilon_oracle` computes the same table by a direct scan.
"""

import logging
import random
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import lru_cache

from epsilon_doctrine.exceptions import (
	MorphismError,
	NotAProjectionError,
	NotSurjectiveError,
	UnpointedObjectError,
)
from epsilon_doctrine.finset import (
	FinMor,
	FinObj,
	Projection,
	Subset,
	all_subsets,
	complement,
	compose,
	copair,
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
from epsilon_doctrine.report import FAIL, PASS, LawVerdict
from epsilon_doctrine.utils import throw

logger = logging.getLogger(__name__)

BASEPOINT = 0
EXHAUSTIVE_ADJUNCTION_LIMIT = 12
EXHAUSTIVE_BECK_CHEVALLEY_LIMIT = 10
DEFAULT_SAMPLES = 256
MAX_REPORTED_COUNTEREXAMPLES = 3


@dataclass(frozen=True)
class Fiber:
	"""P(A): the boolean algebra of subsets of A."""

	carrier: FinObj

	def elements(self) -> Iterator[Subset]:
		return all_subsets(self.carrier)

	@property
	def top(self) -> Subset:
		return Subset.full(self.carrier)

	@property
	def bot(self) -> Subset:
		return Subset.empty(self.carrier)

	def meet(self, a: Subset, b: Subset) -> Subset:
		return a.meet(b)

	def join(self, a: Subset, b: Subset) -> Subset:
		return a.join(b)

	def neg(self, a: Subset) -> Subset:
		return a.neg()

	def leq(self, a: Subset, b: Subset) -> bool:
		return a.leq(b)


def require_pointed(obj: FinObj, what: str = "object") -> FinObj:
	if not obj.pointed:
		throw(f"The {what} is empty and has no basepoint", UnpointedObjectError)
	return obj


def require_projection(pi: FinMor, side: str | None = None) -> Projection:
	if not isinstance(pi, Projection):
		throw("Expected a product projection", NotAProjectionError)
	if side and pi.side != side:
		throw(f"Expected the {side} projection, got the {pi.side}", NotAProjectionError)
	return pi


# Reindexing and Σ
# ----------------


def reindex(f: FinMor, s: Subset) -> Subset:
	"""f*(s) = {a : f(a) ∈ s}."""
	if s.carrier != f.cod:
		throw("reindex needs a subset of the codomain", MorphismError)
	return Subset.from_predicate(f.dom, lambda a: f.table[a] in s)


def reindex_via_pullback(f: FinMor, s: Subset) -> Subset:
	return subset_of_mono(pullback(f, s.inclusion()).p1)


def sigma(pi: FinMor, s: Subset) -> Subset:
	"""Σ_π(s): the image of π restricted to s."""
	require_projection(pi)
	if s.carrier != pi.dom:
		throw("sigma needs a subset of the product", MorphismError)
	return subset_of_mono(image_factorize(compose(pi, s.inclusion())).m)


def _sampled_masks(size: int, samples: int, rng: random.Random) -> list[int]:
	return [rng.getrandbits(size) if size else 0 for _ in range(samples)]


def verify_adjunction(
	pi: Projection,
	samples: Iterable[tuple[Subset, Subset]] | None = None,
	seed: int = 0,
) -> LawVerdict:
	"""Σ_π s ≤ t ⇔ s ≤ π*t over every pair of subsets when |X×Y| is small enough."""
	require_projection(pi)
	dom, cod = pi.dom, pi.cod
	instance = f"X={pi.left.size},Y={pi.right.size},side={pi.side}"

	if samples is not None:
		pairs = [(s, t) for s, t in samples]
	elif dom.size <= EXHAUSTIVE_ADJUNCTION_LIMIT:
		pairs = None
	else:
		rng = random.Random(seed)
		pairs = [
			(Subset.from_mask(dom, s), Subset.from_mask(cod, t))
			for s, t in zip(
				_sampled_masks(dom.size, DEFAULT_SAMPLES, rng),
				_sampled_masks(cod.size, DEFAULT_SAMPLES, rng),
			)
		]

	failures, checked = [], 0
	if pairs is None:
		pulled = [(t.mask, reindex(pi, t).mask) for t in all_subsets(cod)]
		for s in all_subsets(dom):
			image = sigma(pi, s).mask
			for t, back in pulled:
				checked += 1
				if (image & ~t == 0) != (s.mask & ~back == 0):
					failures.append((s.mask, t))
	else:
		for s, t in pairs:
			checked += 1
			if sigma(pi, s).leq(t) != s.leq(reindex(pi, t)):
				failures.append((s.mask, t.mask))

	return _verdict("adjunction", instance, checked, failures, "s={},t={}")


def verify_beck_chevalley(
	f: FinMor,
	x: FinObj,
	samples: Iterable[Subset] | None = None,
	seed: int = 0,
) -> LawVerdict:
	"""Σ_π′ (id_X×f)* s = f* Σ_π s for the second projections of X×Y and X×Z."""
	xy, xz = product(x, f.cod), product(x, f.dom)
	id_times_f = product_map(identity(x), f)
	instance = f"X={x.size},Y={f.cod.size},Z={f.dom.size},f={list(f.table)}"

	if samples is not None:
		subsets = list(samples)
	elif xy.obj.size <= EXHAUSTIVE_BECK_CHEVALLEY_LIMIT:
		subsets = all_subsets(xy.obj)
	else:
		rng = random.Random(seed)
		masks = _sampled_masks(xy.obj.size, DEFAULT_SAMPLES, rng)
		subsets = [Subset.from_mask(xy.obj, m) for m in masks]

	failures, checked = [], 0
	for s in subsets:
		checked += 1
		left = sigma(xz.pi_prime, reindex(id_times_f, s))
		right = reindex(f, sigma(xy.pi_prime, s))
		if left != right:
			failures.append((s.mask,))
	return _verdict("beck_chevalley", instance, checked, failures, "s={}")


def _verdict(law: str, instance: str, checked: int, failures: list, pattern: str) -> LawVerdict:
	if not failures:
		return LawVerdict(law, instance, PASS, checked)
	shown = ", ".join(pattern.format(*f) for f in failures[:MAX_REPORTED_COUNTEREXAMPLES])
	logger.debug("%s failed on %s: %s", law, instance, shown)
	return LawVerdict(law, instance, FAIL, checked, f"{len(failures)} counterexamples: {shown}")


# ε-morphisms
# -----------


def _epsilon_factors(pi: FinMor) -> tuple[FinObj, FinObj]:
	require_projection(pi, "first")
	require_pointed(pi.left, "first factor")
	require_pointed(pi.right, "second factor")
	return pi.left, pi.right


def epsilon_categorical(pi: FinMor, psi: Subset) -> FinMor:
	"""ε_ψ = π′∘[ψ∘s_e, s_π∘¬m] : X → Y."""
	x, y = _epsilon_factors(pi)
	prod = product(x, y)
	if psi.carrier != prod.obj:
		throw("ψ must be a subset of X×Y", MorphismError)

	k = psi.inclusion()
	factorization = image_factorize(compose(pi, k))
	s_e = section_of_epi(factorization.e)
	s_pi = section_of_projection(pi, BASEPOINT)
	not_m = complement(subset_of_mono(factorization.m)).inclusion()

	mediator = copair(compose(k, s_e), compose(s_pi, not_m), factorization.m, not_m)
	return compose(prod.pi_prime, mediator)


def epsilon_oracle(pi: FinMor, psi: Subset) -> FinMor:
	"""ε(x) = least y with ⟨x, y⟩ ∈ ψ, else the basepoint."""
	x, y = _epsilon_factors(pi)
	prod = product(x, y)
	if psi.carrier != prod.obj:
		throw("ψ must be a subset of X×Y", MorphismError)
	table = [next((b for b in y if prod.encode(a, b) in psi), BASEPOINT) for a in x]
	return FinMor(x, y, table)


@lru_cache(maxsize=4096)
def _epsilon_table(x_size: int, y_size: int, members: tuple[int, ...]) -> tuple[int, ...]:
	x, y = FinObj(x_size), FinObj(y_size)
	psi = Subset(product(x, y).obj, members)
	return epsilon_categorical(Projection(x, y, "first"), psi).table


def epsilon_extensional(pi: FinMor, s: Subset) -> FinMor:
	"""ε on the canonical representative: equal subsets give identical tables."""
	x, y = _epsilon_factors(pi)
	if s.carrier != pi.dom:
		throw("ψ must be a subset of X×Y", MorphismError)
	return FinMor(x, y, _epsilon_table(x.size, y.size, s.members))


def _epsilon_sides(pi: FinMor, psi: Subset) -> tuple[Subset, Subset]:
	x, y = _epsilon_factors(pi)
	prod = product(x, y)
	graph = prod.pair(identity(x), epsilon_extensional(pi, psi))
	return sigma(pi, psi), reindex(graph, psi)


def check_epsilon_inequality(pi: FinMor, psi: Subset) -> bool:
	"""Σ_π ψ ≤ ⟨id, ε_ψ⟩*ψ."""
	lhs, rhs = _epsilon_sides(pi, psi)
	return lhs.leq(rhs)


def epsilon_equality_observation(pi: FinMor, psi: Subset) -> bool:
	"""Whether the two sides of the ε-inequality coincide (always so for finite sets)."""
	lhs, rhs = _epsilon_sides(pi, psi)
	return lhs == rhs


def section_from_epsilon(f: FinMor) -> FinMor:
	"""A section of the epi f : X → Y obtained from ε on the graph of f inside Y×X."""
	if not f.is_epi():
		throw("section_from_epsilon needs an epimorphism", NotSurjectiveError)
	x, y = require_pointed(f.dom, "domain"), require_pointed(f.cod, "codomain")
	prod = product(y, x)
	graph = prod.pair(f, identity(x))
	epsilon = epsilon_extensional(prod.pi, subset_of_mono(graph))

	square = pullback(prod.pair(identity(y), epsilon), graph)
	if not square.p1.is_iso():
		throw("ε does not pick a preimage for every element", MorphismError)
	return compose(square.p2, inverse(square.p1))


class EpsilonDoctrine:
	"""Subobjects of pointed finite sets, with Σ and ε along first projections."""

	basepoint = BASEPOINT

	def is_object(self, obj: FinObj) -> bool:
		return obj.pointed

	def fiber(self, obj: FinObj) -> Fiber:
		return Fiber(require_pointed(obj))

	def reindex(self, f: FinMor, s: Subset) -> Subset:
		return reindex(f, s)

	def sigma(self, pi: FinMor, s: Subset) -> Subset:
		return sigma(pi, s)

	def epsilon(self, pi: FinMor, s: Subset) -> FinMor:
		return epsilon_extensional(pi, s)


FINSET = EpsilonDoctrine()
