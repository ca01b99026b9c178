import argparse
import json
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from pathlib import Path

from epsilon_doctrine.semantics import DEFAULT_BUDGET, DEFAULT_MAX_CARRIER
from epsilon_doctrine.utils import get_hooks, throw

PACKAGE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_MODES = ("human", "json")
DEFAULT_MAX_SIZE = 4


@lru_cache(maxsize=None)
def get_meta() -> dict:
	"""The field schema of RunConfig: labels, defaults and which subcommands take each field."""
	schema = get_hooks("run_config_schema")[0]
	return json.loads((PACKAGE_DIR / schema).read_text(encoding="utf-8"))


def get_field(fieldname: str) -> dict:
	for df in get_meta()["fields"]:
		if df["fieldname"] == fieldname:
			return df
	return {}


def subcommands() -> list[str]:
	return list(get_meta()["subcommands"])


def fields_for(subcommand: str) -> list[dict]:
	order = get_meta()["field_order"]
	return sorted(
		(df for df in get_meta()["fields"] if subcommand in df.get("subcommands", [subcommand])),
		key=lambda df: order.index(df["fieldname"]),
	)


@dataclass
class RunConfig:
	subcommand: str
	theory: str | None = None
	proof: str | None = None
	model: str | None = None
	formula: str | None = None
	sequent: str | None = None
	goal: str | None = None
	context: str | None = None
	max_carrier: int = DEFAULT_MAX_CARRIER
	max_size: int = DEFAULT_MAX_SIZE
	budget: int = DEFAULT_BUDGET
	output: str = "human"
	seed: int = 0
	verbose: bool = False

	@classmethod
	def from_dict(cls, data: dict) -> "RunConfig":
		known = {f.name for f in fields(cls)}
		return cls(**{k: v for k, v in data.items() if k in known and v is not None})

	@classmethod
	def from_namespace(cls, namespace: argparse.Namespace) -> "RunConfig":
		return cls.from_dict(vars(namespace))

	def as_dict(self) -> dict:
		return asdict(self)

	@property
	def is_json(self) -> bool:
		return self.output == "json"

	def validate(self):
		self.validate_subcommand()
		self.validate_bounds()
		self.validate_output()
		self.validate_inputs()

	def validate_subcommand(self):
		if self.subcommand not in subcommands():
			throw(f"Unknown subcommand {self.subcommand}; expected one of {', '.join(subcommands())}")

	def validate_bounds(self):
		if self.max_carrier < 1:
			throw(f"--max-carrier must be at least 1, got {self.max_carrier}")
		if self.max_size < 1:
			throw(f"--max-size must be at least 1, got {self.max_size}")
		if self.budget < 1:
			throw(f"--budget must be at least 1, got {self.budget}")

	def validate_output(self):
		if self.output not in OUTPUT_MODES:
			throw(f"Unknown output mode {self.output}; expected one of {', '.join(OUTPUT_MODES)}")

	def validate_inputs(self):
		for df in fields_for(self.subcommand):
			value = getattr(self, df["fieldname"])
			if self.subcommand in df.get("reqd_for", []) and not value:
				throw(f"{self.subcommand} needs --{_flag(df['fieldname'])}")
			if value and df.get("is_file") and not Path(value).is_file():
				throw(f"File not found: {value}")

		if self.subcommand == "holds" and not (self.sequent or self.formula):
			throw("holds needs --sequent or --formula")
		if self.sequent and self.formula:
			throw("Give either --sequent or --formula, not both")
		if self.context and not self.formula:
			throw("--context only applies to --formula")
		if self.subcommand == "countermodel" and self.goal and self.sequent:
			throw("Give either --goal or --sequent, not both")


def _flag(fieldname: str) -> str:
	return fieldname.replace("_", "-")


def add_arguments(parser: argparse.ArgumentParser, subcommand: str) -> None:
	"""Add the options the field schema lists for `subcommand`."""
	for df in fields_for(subcommand):
		names = [f"--{_flag(df['fieldname'])}", *df.get("aliases", [])]
		kwargs = {"dest": df["fieldname"], "help": df["label"]}
		if df["fieldtype"] == "Check":
			parser.add_argument(*names, action="store_true", **kwargs)
			continue
		if df["fieldtype"] == "Int":
			kwargs["type"] = int
		if df["fieldtype"] == "Select":
			kwargs["choices"] = df["options"].split("\n")
		if "metavar" in df:
			kwargs["metavar"] = df["metavar"]
		parser.add_argument(*names, default=df.get("default"), **kwargs)
		for flag, value in df.get("flags", {}).items():
			parser.add_argument(
				flag,
				dest=df["fieldname"],
				action="store_const",
				const=value,
				default=argparse.SUPPRESS,
				help=f"Same as {names[0]} {value}",
			)


def load_config(**kwargs) -> RunConfig:
	config = RunConfig.from_dict(kwargs)
	config.validate()
	return config
