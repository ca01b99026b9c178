import json
from collections.abc import Iterable, Iterator
from dataclasses import asdict, dataclass, field

PASS = "pass"
FAIL = "fail"
OBSERVATION = "observation"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class LawVerdict:
	law: str
	instance: str
	verdict: str
	checked: int = 1
	detail: str = ""

	def as_dict(self) -> dict:
		return asdict(self)


@dataclass(frozen=True)
class NodeVerdict:
	node: str
	rule: str
	verdict: str
	messages: tuple[str, ...] = ()

	def as_dict(self) -> dict:
		data = asdict(self)
		data["messages"] = list(self.messages)
		return data


@dataclass
class Report:
	"""Ordered verdict stream; `extend` is associative so partial reports can be merged."""

	entries: list = field(default_factory=list)

	def __iter__(self) -> Iterator:
		return iter(self.entries)

	def __len__(self) -> int:
		return len(self.entries)

	def append(self, verdict) -> None:
		self.entries.append(verdict)

	def extend(self, other: Iterable) -> "Report":
		self.entries.extend(other)
		return self

	@property
	def failures(self) -> list:
		return [e for e in self.entries if e.verdict == FAIL]

	@property
	def truncated(self) -> bool:
		return any(e.verdict == TRUNCATED for e in self.entries)

	@property
	def ok(self) -> bool:
		return not self.failures and not self.truncated

	def as_dicts(self) -> list[dict]:
		return [e.as_dict() for e in self.entries]


def to_json_line(verdict) -> str:
	data = verdict.as_dict() if hasattr(verdict, "as_dict") else verdict
	return json.dumps(data, sort_keys=True, ensure_ascii=False)


def to_human_line(verdict) -> str:
	if isinstance(verdict, NodeVerdict):
		line = f"[{verdict.verdict}] {verdict.node} ({verdict.rule})"
		if verdict.messages:
			line += ": " + "; ".join(verdict.messages)
		return line
	line = f"[{verdict.verdict}] {verdict.law} {verdict.instance} ({verdict.checked} checked)"
	if verdict.detail:
		line += f": {verdict.detail}"
	return line
