import importlib
import logging
from typing import Any, NoReturn

from epsilon_doctrine.exceptions import ValidationError

logger = logging.getLogger("epsilon_doctrine")


def throw(msg: str, exc: type[Exception] = ValidationError) -> NoReturn:
	raise exc(msg)


def log_error(title: str, message: Any = None) -> None:
	logger.error("%s: %s", title, message)


def get_hooks(name: str) -> list:
	from epsilon_doctrine import hooks

	value = getattr(hooks, name, None)
	if value is None:
		return []
	return value if isinstance(value, list) else [value]


def get_attr(method_path: str) -> Any:
	module_name, _, attr = method_path.rpartition(".")
	module = importlib.import_module(module_name)
	try:
		return getattr(module, attr)
	except AttributeError:
		throw(f"Hook {method_path} could not be resolved")


def get_rule(name: str | None = None, tag: str | None = None) -> dict:
	if tag in RULES:
		return dict(RULES[tag])

	if name:
		for data in RULES.values():
			if data["name"] == name:
				return dict(data)

	return {}


# Premise counts and proof-script parameters of every kernel rule.
RULES = {
	"Axiom": {"name": "axiom", "tag": "Axiom", "premises": 0, "params": ()},
	"Weaken": {"name": "weaken", "tag": "Weaken", "premises": 1, "params": ()},
	"Exchange": {"name": "exchange", "tag": "Exchange", "premises": 1, "params": ()},
	"Cut": {"name": "cut", "tag": "Cut", "premises": 2, "params": ()},
	"AndI": {"name": "and-i", "tag": "AndI", "premises": 2, "params": ()},
	"AndE1": {"name": "and-e1", "tag": "AndE1", "premises": 1, "params": ()},
	"AndE2": {"name": "and-e2", "tag": "AndE2", "premises": 1, "params": ()},
	"OrI1": {"name": "or-i1", "tag": "OrI1", "premises": 1, "params": ()},
	"OrI2": {"name": "or-i2", "tag": "OrI2", "premises": 1, "params": ()},
	"OrE": {"name": "or-e", "tag": "OrE", "premises": 2, "params": ()},
	"ImpI": {"name": "imp-i", "tag": "ImpI", "premises": 1, "params": ()},
	"ImpE": {"name": "imp-e", "tag": "ImpE", "premises": 2, "params": ()},
	"NotI": {"name": "not-i", "tag": "NotI", "premises": 1, "params": ()},
	"NotE": {"name": "not-e", "tag": "NotE", "premises": 2, "params": ()},
	"TopI": {"name": "top-i", "tag": "TopI", "premises": 0, "params": ()},
	"BotE": {"name": "bot-e", "tag": "BotE", "premises": 1, "params": ()},
	"LEM": {"name": "lem", "tag": "LEM", "premises": 0, "params": ()},
	"ExistsI": {"name": "exists-i", "tag": "ExistsI", "premises": 1, "params": ("witness",)},
	"ExistsE": {"name": "exists-e", "tag": "ExistsE", "premises": 1, "params": ()},
	"ForallI": {"name": "forall-i", "tag": "ForallI", "premises": 1, "params": ()},
	"ForallE": {"name": "forall-e", "tag": "ForallE", "premises": 1, "params": ("witness",)},
	"EqRefl": {"name": "eq-refl", "tag": "EqRefl", "premises": 0, "params": ()},
	"EqSubst": {"name": "eq-subst", "tag": "EqSubst", "premises": 2, "params": ("target", "var")},
	"EpsI": {"name": "eps-i", "tag": "EpsI", "premises": 1, "params": ()},
	"EpsEx": {"name": "eps-ex", "tag": "EpsEx", "premises": 2, "params": ()},
}
