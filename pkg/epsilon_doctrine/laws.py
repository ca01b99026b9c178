"""
The law suite run by `epsilon-doctrine laws`.

Every verifier takes `(max_size, seed)` and yields one LawVerdict per instance, in a fixed
order. Sizes are capped both by `max_size` and by the per-law limits below, so the suite stays
exhaustive and deterministic. Product shapes `X * Y` are bounded by their cardinality instead:
every shape with `|X| * |Y|` up to the limit is visited once `max_size ** 2` reaches it.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator

from epsilon_doctrine import doctrine
from epsilon_doctrine.doctrine import (
	EXHAUSTIVE_ADJUNCTION_LIMIT,
	EXHAUSTIVE_BECK_CHEVALLEY_LIMIT,
	MAX_REPORTED_COUNTEREXAMPLES,
	Fiber,
	check_epsilon_inequality,
	epsilon_categorical,
	epsilon_equality_observation,
	epsilon_oracle,
	reindex,
	reindex_via_pullback,
	section_from_epsilon,
	verify_adjunction,
)
from epsilon_doctrine.exceptions import EpsilonDoctrineError
from epsilon_doctrine.finset import (
	FinObj,
	Projection,
	Subset,
	all_epis,
	all_morphisms,
	all_subsets,
	complement,
	compose,
	copair,
	identity,
	image_factorize,
	pullback,
	section_of_epi,
)
from epsilon_doctrine.report import FAIL, OBSERVATION, PASS, LawVerdict
from epsilon_doctrine.utils import get_attr, get_hooks, log_error

logger = logging.getLogger(__name__)

FIBER_LIMIT = 5
HOMOMORPHISM_LIMIT = 4
FUNCTORIALITY_LIMIT = 3
BECK_CHEVALLEY_Z_LIMIT = 3
LEM_LIMIT = 6
LEM_COCONE_LIMIT = 3
CHOICE_LIMIT = 5
PULLBACK_LIMIT = 3


def _sizes(limit: int, max_size: int) -> range:
	return range(1, min(limit, max_size) + 1)


def _shapes(limit: int, max_size: int) -> Iterator[tuple[int, int]]:
	"""Every `(n, m)` with `n * m` at most `min(limit, max_size ** 2)`, ordered by `n` then `m`."""
	bound = min(limit, max_size * max_size)
	for n in range(1, bound + 1):
		for m in range(1, bound // n + 1):
			yield n, m


def _tally(law: str, instance: str, cases: Iterable[tuple[str, bool]]) -> LawVerdict:
	checked, failures = 0, []
	for label, ok in cases:
		checked += 1
		if not ok:
			failures.append(label)
	if not failures:
		return LawVerdict(law, instance, PASS, checked)
	shown = ", ".join(failures[:MAX_REPORTED_COUNTEREXAMPLES])
	logger.debug("%s failed on %s: %s", law, instance, shown)
	return LawVerdict(law, instance, FAIL, checked, f"{len(failures)} counterexamples: {shown}")


def verify_fiber_boolean_algebra(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n in _sizes(FIBER_LIMIT, max_size):
		fiber = Fiber(FinObj(n))
		yield _tally("fiber_boolean_algebra", f"A={n}", _boolean_algebra_cases(fiber))


def _boolean_algebra_cases(fiber: Fiber) -> Iterator[tuple[str, bool]]:
	elements = list(fiber.elements())
	top, bot = fiber.top, fiber.bot
	for a in elements:
		label = f"a={a.mask}"
		yield f"complement {label}", fiber.join(a, fiber.neg(a)) == top
		yield f"contradiction {label}", fiber.meet(a, fiber.neg(a)) == bot
		yield f"involution {label}", fiber.neg(fiber.neg(a)) == a
		yield f"bounds {label}", fiber.leq(bot, a) and fiber.leq(a, top)
	for a, b in itertools.product(elements, repeat=2):
		label = f"a={a.mask},b={b.mask}"
		yield f"commutativity {label}", fiber.meet(a, b) == fiber.meet(b, a)
		yield f"absorption {label}", fiber.join(a, fiber.meet(a, b)) == a
		yield f"de morgan {label}", fiber.neg(fiber.meet(a, b)) == fiber.join(fiber.neg(a), fiber.neg(b))
		yield f"order {label}", fiber.leq(a, b) == (fiber.meet(a, b) == a)
	for a, b, c in itertools.product(elements, repeat=3):
		label = f"a={a.mask},b={b.mask},c={c.mask}"
		yield (
			f"associativity {label}",
			fiber.meet(a, fiber.meet(b, c)) == fiber.meet(fiber.meet(a, b), c),
		)
		yield (
			f"distributivity {label}",
			fiber.meet(a, fiber.join(b, c)) == fiber.join(fiber.meet(a, b), fiber.meet(a, c)),
		)


def verify_reindex_homomorphism(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n, m in itertools.product(_sizes(HOMOMORPHISM_LIMIT, max_size), repeat=2):
		yield _tally("reindex_homomorphism", f"A={n},B={m}", _homomorphism_cases(FinObj(n), FinObj(m)))


def _homomorphism_cases(a: FinObj, b: FinObj) -> Iterator[tuple[str, bool]]:
	subsets = list(all_subsets(b))
	for f in all_morphisms(a, b):
		label = f"f={list(f.table)}"
		yield f"top {label}", reindex(f, Subset.full(b)) == Subset.full(a)
		yield f"bot {label}", reindex(f, Subset.empty(b)) == Subset.empty(a)
		pulled = {s.mask: reindex(f, s) for s in subsets}
		for s in subsets:
			yield f"neg {label},s={s.mask}", reindex(f, s.neg()) == pulled[s.mask].neg()
		for s, t in itertools.product(subsets, repeat=2):
			yield (
				f"meet {label},s={s.mask},t={t.mask}",
				reindex(f, s.meet(t)) == pulled[s.mask].meet(pulled[t.mask]),
			)
			yield (
				f"join {label},s={s.mask},t={t.mask}",
				reindex(f, s.join(t)) == pulled[s.mask].join(pulled[t.mask]),
			)


def verify_reindex_functoriality(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n in _sizes(HOMOMORPHISM_LIMIT, max_size):
		a = FinObj(n)
		yield _tally(
			"reindex_functoriality",
			f"id A={n}",
			((f"s={s.mask}", reindex(identity(a), s) == s) for s in all_subsets(a)),
		)
	for sizes in itertools.product(_sizes(FUNCTORIALITY_LIMIT, max_size), repeat=3):
		a, b, c = (FinObj(n) for n in sizes)
		yield _tally(
			"reindex_functoriality",
			"A={},B={},C={}".format(*sizes),
			_composition_cases(a, b, c),
		)


def _composition_cases(a: FinObj, b: FinObj, c: FinObj) -> Iterator[tuple[str, bool]]:
	subsets = list(all_subsets(c))
	for f, g in itertools.product(list(all_morphisms(a, b)), list(all_morphisms(b, c))):
		gf = compose(g, f)
		for s in subsets:
			yield (
				f"f={list(f.table)},g={list(g.table)},s={s.mask}",
				reindex(gf, s) == reindex(f, reindex(g, s)),
			)


def verify_sigma_adjunction(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n, m in _shapes(EXHAUSTIVE_ADJUNCTION_LIMIT, max_size):
		x, y = FinObj(n), FinObj(m)
		for side in ("first", "second"):
			yield verify_adjunction(Projection(x, y, side), seed=seed)


def verify_beck_chevalley(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n, m in _shapes(EXHAUSTIVE_BECK_CHEVALLEY_LIMIT, max_size):
		x, y = FinObj(n), FinObj(m)
		for k in _sizes(BECK_CHEVALLEY_Z_LIMIT, max_size):
			for f in all_morphisms(FinObj(k), y):
				yield doctrine.verify_beck_chevalley(f, x, seed=seed)


def _epsilon_instances(max_size: int) -> Iterator[tuple[Projection, list[Subset]]]:
	for n, m in _shapes(EXHAUSTIVE_ADJUNCTION_LIMIT, max_size):
		pi = Projection(FinObj(n), FinObj(m), "first")
		yield pi, list(all_subsets(pi.dom))


def verify_epsilon_oracle(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for pi, subsets in _epsilon_instances(max_size):
		yield _tally(
			"epsilon_oracle",
			f"X={pi.left.size},Y={pi.right.size}",
			((f"psi={s.mask}", epsilon_categorical(pi, s) == epsilon_oracle(pi, s)) for s in subsets),
		)


def verify_epsilon_inequality(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for pi, subsets in _epsilon_instances(max_size):
		instance = f"X={pi.left.size},Y={pi.right.size}"
		yield _tally(
			"epsilon_inequality",
			instance,
			((f"psi={s.mask}", check_epsilon_inequality(pi, s)) for s in subsets),
		)
		equal = sum(epsilon_equality_observation(pi, s) for s in subsets)
		yield LawVerdict(
			"epsilon_equality",
			instance,
			OBSERVATION,
			len(subsets),
			f"both sides coincide for {equal} of {len(subsets)} subsets",
		)


def verify_image_factorization(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n, m in itertools.product(_sizes(HOMOMORPHISM_LIMIT, max_size), repeat=2):
		yield _tally("image_factorization", f"A={n},B={m}", _factorization_cases(FinObj(n), FinObj(m)))


def _factorization_cases(a: FinObj, b: FinObj) -> Iterator[tuple[str, bool]]:
	for f in all_morphisms(a, b):
		factorization = image_factorize(f)
		e, m = factorization.e, factorization.m
		label = f"f={list(f.table)}"
		yield f"epi {label}", e.is_epi()
		yield f"mono {label}", m.is_mono()
		yield f"commutes {label}", compose(m, e) == f
		yield f"sorted {label}", list(m.table) == sorted(set(f.table))


def verify_pullback_stability(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for sizes in itertools.product(_sizes(PULLBACK_LIMIT, max_size), repeat=3):
		a, b, c = (FinObj(n) for n in sizes)
		yield _tally("pullback_stability", "A={},B={},C={}".format(*sizes), _pullback_cases(a, b, c))


def _pullback_cases(a: FinObj, b: FinObj, c: FinObj) -> Iterator[tuple[str, bool]]:
	"""Squares commute, epis pull back to epis, and reindexing agrees with the pullback."""
	subsets = list(all_subsets(c))
	for f, g in itertools.product(list(all_morphisms(a, c)), list(all_morphisms(b, c))):
		square = pullback(f, g)
		label = f"f={list(f.table)},g={list(g.table)}"
		yield f"commutes {label}", compose(f, square.p1) == compose(g, square.p2)
		if g.is_epi():
			yield f"epi stable {label}", square.p1.is_epi()
	for f in all_morphisms(a, c):
		for s in subsets:
			yield f"reindex f={list(f.table)},s={s.mask}", reindex(f, s) == reindex_via_pullback(f, s)


def verify_lem_coproduct(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	for n in _sizes(LEM_LIMIT, max_size):
		yield _tally("lem_coproduct", f"A={n}", _lem_cases(FinObj(n), max_size))


def _lem_cases(a: FinObj, max_size: int) -> Iterator[tuple[str, bool]]:
	"""Every subobject and its complement form a coproduct diagram."""
	for s in all_subsets(a):
		ns = complement(s)
		m, nm = s.inclusion(), ns.inclusion()
		label = f"s={s.mask}"
		yield f"cover {label}", s.join(ns) == Subset.full(a)
		yield f"disjoint {label}", s.meet(ns) == Subset.empty(a)
		for k in _sizes(LEM_COCONE_LIMIT, max_size):
			target = FinObj(k)
			for f, g in itertools.product(
				list(all_morphisms(m.dom, target)), list(all_morphisms(nm.dom, target))
			):
				h = copair(f, g, m, nm)
				yield (
					f"mediator {label},f={list(f.table)},g={list(g.table)}",
					compose(h, m) == f and compose(h, nm) == g,
				)


def verify_choice(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	"""Every epi splits, by the least-preimage chooser and through ε, with the same section."""
	for n, m in itertools.product(_sizes(CHOICE_LIMIT, max_size), repeat=2):
		if m > n:
			continue
		yield _tally("choice", f"X={n},Y={m}", _choice_cases(FinObj(n), FinObj(m)))


def _choice_cases(x: FinObj, y: FinObj) -> Iterator[tuple[str, bool]]:
	for f in all_epis(x, y):
		label = f"f={list(f.table)}"
		direct = section_of_epi(f)
		via_epsilon = section_from_epsilon(f)
		yield f"section {label}", compose(f, direct) == identity(y)
		yield f"epsilon section {label}", compose(f, via_epsilon) == identity(y)
		yield f"agree {label}", direct == via_epsilon


def run_laws(max_size: int, seed: int = 0) -> Iterator[LawVerdict]:
	"""Run every registered verifier; one that raises is reported and the suite moves on."""
	for method_path in get_hooks("law_verifiers"):
		name = method_path.rpartition(".")[2].removeprefix("verify_")
		try:
			verifier = get_attr(method_path)
			yield from verifier(max_size, seed)
		except EpsilonDoctrineError as e:
			log_error(title=f"Law verifier {method_path}", message=e)
			yield LawVerdict(name, "error", FAIL, 0, str(e))
