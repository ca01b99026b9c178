"""
Finite sets and tabulated functions.

The object of size n is the carrier {0, ..., n-1}; a morphism is its table. Every construction
fixes a canonical element order, which makes the choices made below reproducible:

- X×Y is row-major, ⟨x, y⟩ ↦ x·|Y| + y
- n-ary products are mixed-radix with the last factor least significant
- pullbacks list matching pairs lexicographically
- images are sorted; sections of epis pick the least preimage
- X+Y puts the X block first
- B^A codes a function as base-|B| digits, little-endian in the argument
"""

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property, reduce

from epsilon_doctrine.exceptions import (
	MorphismError,
	NotAProjectionError,
	NotSurjectiveError,
	UnpointedObjectError,
)
from epsilon_doctrine.utils import throw


@dataclass(frozen=True)
class FinObj:
	size: int

	def __post_init__(self):
		if self.size < 0:
			throw(f"Carrier size must be non-negative, got {self.size}", MorphismError)

	def __iter__(self) -> Iterator[int]:
		return iter(range(self.size))

	@property
	def pointed(self) -> bool:
		return self.size >= 1


TERMINAL = FinObj(1)
INITIAL = FinObj(0)


class FinMor:
	__slots__ = ("dom", "cod", "table")

	def __init__(self, dom: FinObj, cod: FinObj, table: Sequence[int]):
		table = tuple(table)
		if len(table) != dom.size:
			throw(f"Table of length {len(table)} for a domain of size {dom.size}", MorphismError)
		for value in table:
			if not 0 <= value < cod.size:
				throw(f"Value {value} outside a codomain of size {cod.size}", MorphismError)
		self.dom = dom
		self.cod = cod
		self.table = table

	def __call__(self, i: int) -> int:
		return self.table[i]

	def __eq__(self, other) -> bool:
		if not isinstance(other, FinMor):
			return NotImplemented
		return (self.dom, self.cod, self.table) == (other.dom, other.cod, other.table)

	def __hash__(self) -> int:
		return hash((self.dom, self.cod, self.table))

	def __repr__(self) -> str:
		return f"FinMor({self.dom.size} -> {self.cod.size}, {list(self.table)})"

	def is_epi(self) -> bool:
		return len(set(self.table)) == self.cod.size

	def is_mono(self) -> bool:
		return len(set(self.table)) == len(self.table)

	def is_iso(self) -> bool:
		return self.is_epi() and self.is_mono()


class Projection(FinMor):
	"""A product projection that remembers its factors; `side` is "first" or "second"."""

	__slots__ = ("left", "right", "side")

	def __init__(self, left: FinObj, right: FinObj, side: str):
		n = right.size
		if side == "first":
			table, cod = [i // n for i in range(left.size * n)], left
		elif side == "second":
			table, cod = [i % n for i in range(left.size * n)], right
		else:
			throw(f"Unknown projection side {side}", NotAProjectionError)
		super().__init__(FinObj(left.size * n), cod, table)
		self.left = left
		self.right = right
		self.side = side


def identity(x: FinObj) -> FinMor:
	return FinMor(x, x, range(x.size))


def compose(g: FinMor, f: FinMor) -> FinMor:
	"""g∘f."""
	if f.cod != g.dom:
		throw(
			f"Cannot compose: codomain of size {f.cod.size} against domain of size {g.dom.size}",
			MorphismError,
		)
	return FinMor(f.dom, g.cod, (g.table[v] for v in f.table))


def compose_all(*morphisms: FinMor) -> FinMor:
	"""compose_all(h, g, f) = h∘g∘f."""
	return reduce(compose, morphisms)


def constant(dom: FinObj, cod: FinObj, value: int) -> FinMor:
	return FinMor(dom, cod, [value] * dom.size)


def terminal_map(x: FinObj) -> FinMor:
	return constant(x, TERMINAL, 0)


def inverse(f: FinMor) -> FinMor:
	if not f.is_iso():
		throw("Only isomorphisms have inverses", MorphismError)
	table = [0] * f.cod.size
	for i, v in enumerate(f.table):
		table[v] = i
	return FinMor(f.cod, f.dom, table)


# Products
# --------


@dataclass(frozen=True)
class Product:
	left: FinObj
	right: FinObj

	@cached_property
	def obj(self) -> FinObj:
		return FinObj(self.left.size * self.right.size)

	@cached_property
	def pi(self) -> Projection:
		return Projection(self.left, self.right, "first")

	@cached_property
	def pi_prime(self) -> Projection:
		return Projection(self.left, self.right, "second")

	def encode(self, x: int, y: int) -> int:
		return x * self.right.size + y

	def decode(self, i: int) -> tuple[int, int]:
		return divmod(i, self.right.size)

	def pair(self, f: FinMor, g: FinMor) -> FinMor:
		"""The mediator ⟨f, g⟩ into the product."""
		if f.dom != g.dom or f.cod != self.left or g.cod != self.right:
			throw("pair needs maps from a common domain into the two factors", MorphismError)
		return FinMor(f.dom, self.obj, (self.encode(a, b) for a, b in zip(f.table, g.table)))


def product(x: FinObj, y: FinObj) -> Product:
	return Product(x, y)


def product_map(f: FinMor, g: FinMor) -> FinMor:
	"""f×g : A×B → C×D."""
	source, target = product(f.dom, g.dom), product(f.cod, g.cod)
	return target.pair(compose(f, source.pi), compose(g, source.pi_prime))


def diagonal(x: FinObj) -> FinMor:
	return product(x, x).pair(identity(x), identity(x))


@dataclass(frozen=True)
class FlatProduct:
	"""Mixed-radix product A1×...×An; the empty product is 1."""

	factors: tuple[FinObj, ...]

	@cached_property
	def obj(self) -> FinObj:
		size = 1
		for f in self.factors:
			size *= f.size
		return FinObj(size)

	@cached_property
	def _weights(self) -> tuple[int, ...]:
		weights, w = [], 1
		for f in reversed(self.factors):
			weights.append(w)
			w *= f.size
		return tuple(reversed(weights))

	def encode(self, values: Sequence[int]) -> int:
		return sum(v * w for v, w in zip(values, self._weights))

	def decode(self, i: int) -> tuple[int, ...]:
		return tuple((i // w) % f.size for w, f in zip(self._weights, self.factors))

	def projection(self, k: int) -> FinMor:
		w, n = self._weights[k], self.factors[k].size
		return FinMor(self.obj, self.factors[k], ((i // w) % n for i in range(self.obj.size)))

	def tupling(self, maps: Sequence[FinMor], dom: FinObj | None = None) -> FinMor:
		"""⟨f1, ..., fn⟩ : C → A1×...×An; `dom` is needed only when n = 0."""
		maps = tuple(maps)
		if len(maps) != len(self.factors):
			throw("tupling needs one map per factor", MorphismError)
		if dom is None:
			if not maps:
				throw("tupling of no maps needs an explicit domain", MorphismError)
			dom = maps[0].dom
		for f, factor in zip(maps, self.factors):
			if f.dom != dom or f.cod != factor:
				throw("tupling maps must share the domain and land in the factors", MorphismError)
		return FinMor(dom, self.obj, (self.encode([f.table[i] for f in maps]) for i in range(dom.size)))


def flat_product(factors: Iterable[FinObj]) -> FlatProduct:
	return FlatProduct(tuple(factors))


# Pullbacks and images
# --------------------


@dataclass(frozen=True)
class Pullback:
	obj: FinObj
	p1: FinMor
	p2: FinMor
	pairs: tuple[tuple[int, int], ...]

	def mediator(self, h: FinMor, k: FinMor) -> FinMor:
		"""The unique u with p1∘u = h and p2∘u = k."""
		index = {pair: i for i, pair in enumerate(self.pairs)}
		table = []
		for a, b in zip(h.table, k.table):
			if (a, b) not in index:
				throw("The cone does not commute over the pullback", MorphismError)
			table.append(index[(a, b)])
		return FinMor(h.dom, self.obj, table)


def pullback(f: FinMor, g: FinMor) -> Pullback:
	if f.cod != g.cod:
		throw("Pullback needs maps with a common codomain", MorphismError)
	pairs = tuple((a, b) for a in f.dom for b in g.dom if f.table[a] == g.table[b])
	obj = FinObj(len(pairs))
	return Pullback(
		obj, FinMor(obj, f.dom, (a for a, _ in pairs)), FinMor(obj, g.dom, (b for _, b in pairs)), pairs
	)


@dataclass(frozen=True)
class Factorization:
	e: FinMor
	m: FinMor


def image_factorize(f: FinMor) -> Factorization:
	image = sorted(set(f.table))
	position = {v: i for i, v in enumerate(image)}
	obj = FinObj(len(image))
	e = FinMor(f.dom, obj, (position[v] for v in f.table))
	return Factorization(e, FinMor(obj, f.cod, image))


# Subsets
# -------


class Subset:
	"""Canonical subobject of a carrier: sorted, duplicate-free members."""

	__slots__ = ("carrier", "members", "_mask")

	def __init__(self, carrier: FinObj, members: Iterable[int] = ()):
		members = tuple(sorted(set(members)))
		for m in members:
			if not 0 <= m < carrier.size:
				throw(f"Element {m} outside a carrier of size {carrier.size}", MorphismError)
		self.carrier = carrier
		self.members = members
		self._mask = None

	@classmethod
	def full(cls, carrier: FinObj) -> "Subset":
		return cls(carrier, range(carrier.size))

	@classmethod
	def empty(cls, carrier: FinObj) -> "Subset":
		return cls(carrier)

	@classmethod
	def from_mask(cls, carrier: FinObj, mask: int) -> "Subset":
		subset = cls(carrier, (i for i in range(carrier.size) if mask >> i & 1))
		subset._mask = mask
		return subset

	@classmethod
	def from_predicate(cls, carrier: FinObj, predicate) -> "Subset":
		return cls(carrier, (i for i in carrier if predicate(i)))

	@property
	def mask(self) -> int:
		if self._mask is None:
			self._mask = sum(1 << m for m in self.members)
		return self._mask

	def __contains__(self, i: int) -> bool:
		return bool(self.mask >> i & 1)

	def __iter__(self) -> Iterator[int]:
		return iter(self.members)

	def __len__(self) -> int:
		return len(self.members)

	def __eq__(self, other) -> bool:
		if not isinstance(other, Subset):
			return NotImplemented
		return self.carrier == other.carrier and self.members == other.members

	def __hash__(self) -> int:
		return hash((self.carrier, self.members))

	def __repr__(self) -> str:
		return f"Subset({self.carrier.size}, {list(self.members)})"

	def _same_carrier(self, other: "Subset") -> None:
		if self.carrier != other.carrier:
			throw("Subsets of different carriers", MorphismError)

	def meet(self, other: "Subset") -> "Subset":
		self._same_carrier(other)
		return Subset.from_mask(self.carrier, self.mask & other.mask)

	def join(self, other: "Subset") -> "Subset":
		self._same_carrier(other)
		return Subset.from_mask(self.carrier, self.mask | other.mask)

	def neg(self) -> "Subset":
		return Subset.from_mask(self.carrier, ~self.mask & ((1 << self.carrier.size) - 1))

	def leq(self, other: "Subset") -> bool:
		self._same_carrier(other)
		return self.mask & ~other.mask == 0

	def inclusion(self) -> FinMor:
		return FinMor(FinObj(len(self.members)), self.carrier, self.members)


def complement(s: Subset) -> Subset:
	return s.neg()


def subset_of_mono(m: FinMor) -> Subset:
	"""The canonical representative of the subobject a mono stands for."""
	if not m.is_mono():
		throw("Only monomorphisms represent subobjects", MorphismError)
	return Subset(m.cod, m.table)


def copair(f: FinMor, g: FinMor, m: FinMor, nm: FinMor) -> FinMor:
	"""[f, g] : Y → Z with [f,g]∘m = f and [f,g]∘nm = g, for complementary monos m, nm."""
	if m.cod != nm.cod or f.dom != m.dom or g.dom != nm.dom or f.cod != g.cod:
		throw("copair needs monos into one object and maps out of their domains", MorphismError)
	if not m.is_mono() or not nm.is_mono():
		throw("copair needs monomorphisms", MorphismError)
	table = [None] * m.cod.size
	for source, mono in ((f, m), (g, nm)):
		for i, y in enumerate(mono.table):
			if table[y] is not None:
				throw(f"Element {y} is covered by both monos", MorphismError)
			table[y] = source.table[i]
	missing = [y for y, v in enumerate(table) if v is None]
	if missing:
		throw(f"Elements {missing} are covered by neither mono", MorphismError)
	return FinMor(m.cod, f.cod, table)


# Choice
# ------


def section_of_epi(e: FinMor) -> FinMor:
	"""Least-preimage section s with e∘s = id."""
	if not e.is_epi():
		throw("Only epimorphisms have sections", NotSurjectiveError)
	table = [None] * e.cod.size
	for i, y in enumerate(e.table):
		if table[y] is None:
			table[y] = i
	return FinMor(e.cod, e.dom, table)


def section_of_projection(pi: FinMor, basepoint: int = 0) -> FinMor:
	"""⟨id, b!⟩ : X → X×Y for the first projection π : X×Y → X."""
	if not isinstance(pi, Projection) or pi.side != "first":
		throw("section_of_projection needs a first projection", NotAProjectionError)
	if not pi.right.pointed:
		throw("The second factor is empty and has no basepoint", UnpointedObjectError)
	if not 0 <= basepoint < pi.right.size:
		throw(f"Basepoint {basepoint} outside the second factor", UnpointedObjectError)
	prod = product(pi.left, pi.right)
	return prod.pair(identity(pi.left), constant(pi.left, pi.right, basepoint))


# Coproducts and exponentials
# ---------------------------


@dataclass(frozen=True)
class Coproduct:
	left: FinObj
	right: FinObj

	@cached_property
	def obj(self) -> FinObj:
		return FinObj(self.left.size + self.right.size)

	@cached_property
	def i_left(self) -> FinMor:
		return FinMor(self.left, self.obj, range(self.left.size))

	@cached_property
	def i_right(self) -> FinMor:
		return FinMor(self.right, self.obj, range(self.left.size, self.obj.size))

	def mediator(self, f: FinMor, g: FinMor) -> FinMor:
		if f.dom != self.left or g.dom != self.right or f.cod != g.cod:
			throw("Coproduct mediator needs maps out of the summands into one object", MorphismError)
		return FinMor(self.obj, f.cod, f.table + g.table)


def coproduct(x: FinObj, y: FinObj) -> Coproduct:
	return Coproduct(x, y)


@dataclass(frozen=True)
class Exponential:
	base: FinObj
	exponent: FinObj

	@cached_property
	def obj(self) -> FinObj:
		return FinObj(self.base.size**self.exponent.size)

	def encode(self, values: Sequence[int]) -> int:
		return sum(v * self.base.size**a for a, v in enumerate(values))

	def decode(self, code: int) -> tuple[int, ...]:
		b = self.base.size
		return tuple((code // b**a) % b for a in range(self.exponent.size))

	@cached_property
	def evaluation(self) -> FinMor:
		"""ev : B^A × A → B."""
		prod = product(self.obj, self.exponent)
		table = [self.decode(code)[a] for code in self.obj for a in self.exponent]
		return FinMor(prod.obj, self.base, table)

	def transpose(self, f: FinMor, left: FinObj) -> FinMor:
		"""The curry λf : C → B^A of f : C×A → B."""
		prod = product(left, self.exponent)
		if f.dom != prod.obj or f.cod != self.base:
			throw("transpose needs a map C×A → B", MorphismError)
		return FinMor(
			left,
			self.obj,
			(self.encode([f.table[prod.encode(c, a)] for a in self.exponent]) for c in left),
		)

	def point(self) -> int:
		"""The transpose of b∘! for the basepoint b = 0: the constant function, code 0."""
		if not self.base.pointed and self.exponent.size:
			throw("B^A is pointed only when B is", UnpointedObjectError)
		return 0


def exponential(a: FinObj, b: FinObj) -> Exponential:
	return Exponential(b, a)


# Enumeration
# -----------


def all_morphisms(x: FinObj, y: FinObj) -> Iterator[FinMor]:
	"""Every map X → Y, tables in lexicographic order."""
	for table in itertools.product(range(y.size), repeat=x.size):
		yield FinMor(x, y, table)


def all_subsets(x: FinObj) -> Iterator[Subset]:
	"""Every subset of X, by ascending mask."""
	for mask in range(1 << x.size):
		yield Subset.from_mask(x, mask)


def all_epis(x: FinObj, y: FinObj) -> Iterator[FinMor]:
	return (f for f in all_morphisms(x, y) if f.is_epi())
