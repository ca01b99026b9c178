"""
Command-line entry point: `epsilon-doctrine <subcommand> [options]`.

Exit status: 0 when everything passed, 1 on a failed check, 2 when an enumeration ran out of
budget, 64 on usage errors and 65 on input that does not parse or type-check. Reports go to stdout
(one line per verdict, JSON objects with `--json`); logs go to stderr.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import TextIO

from epsilon_doctrine import __version__
from epsilon_doctrine.config.run_config import RunConfig, add_arguments, get_meta
from epsilon_doctrine.doctrine import epsilon_oracle
from epsilon_doctrine.exceptions import (
	EmptyTypeViolation,
	KernelRejection,
	ParseError,
	TypeMismatchError,
	UnknownSymbolError,
	ValidationError,
)
from epsilon_doctrine.kernel import check_derivation
from epsilon_doctrine.laws import run_laws
from epsilon_doctrine.models import dump_model, load_model, load_model_json
from epsilon_doctrine.parser import (
	parse_context,
	parse_formula,
	parse_sequent,
	parse_term,
	parse_theory,
)
from epsilon_doctrine.proofs import parse_proof_script
from epsilon_doctrine.report import (
	FAIL,
	OBSERVATION,
	PASS,
	LawVerdict,
	Report,
	to_human_line,
	to_json_line,
)
from epsilon_doctrine.semantics import (
	audit_soundness,
	countermodel_search,
	empty_type_guard,
	holds,
	interpret_formula,
	interpret_term,
	interpret_type,
	layout_of,
	mentions_empty,
)
from epsilon_doctrine.syntax import Context, Epsilon, Sequent, alpha_eq, show
from epsilon_doctrine.utils import log_error, throw

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_TRUNCATED = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class ArgumentParser(argparse.ArgumentParser):
	def error(self, message):
		self.print_usage(sys.stderr)
		self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class ReportWriter:
	"""Streams verdicts as they are produced and keeps them for the exit status."""

	def __init__(self, output: str = "human", stream: TextIO | None = None):
		self.output = output
		self.stream = stream or sys.stdout
		self.report = Report()

	def emit(self, verdict) -> None:
		self.report.append(verdict)
		line = to_json_line(verdict) if self.output == "json" else to_human_line(verdict)
		self._write(line)

	def note(self, data: dict, text: str) -> None:
		"""Output that is not a verdict, such as a countermodel or a refusal argument."""
		self._write(to_json_line(data) if self.output == "json" else text.rstrip("\n"))

	def _write(self, line: str) -> None:
		print(line, file=self.stream, flush=True)

	def exit_code(self) -> int:
		if self.report.failures:
			return EXIT_FAILED
		if self.report.truncated:
			return EXIT_TRUNCATED
		return EXIT_OK


def build_parser() -> ArgumentParser:
	parser = ArgumentParser(
		prog="epsilon-doctrine",
		description="Proof kernel and finite-set semantics for the typed Epsilon calculus",
	)
	parser.add_argument("--version", action="version", version=__version__)
	commands = parser.add_subparsers(
		dest="subcommand", metavar="SUBCOMMAND", required=True, parser_class=ArgumentParser
	)
	for name, description in get_meta()["subcommands"].items():
		add_arguments(commands.add_parser(name, help=description, description=description), name)
	return parser


def configure_logging(verbose: bool = False) -> None:
	logging.basicConfig(
		level=logging.DEBUG if verbose else logging.WARNING,
		stream=sys.stderr,
		format="%(levelname)s %(name)s: %(message)s",
	)


def main(argv: list[str] | None = None) -> int:
	config = RunConfig.from_namespace(build_parser().parse_args(argv))
	configure_logging(config.verbose)
	try:
		config.validate()
	except ValidationError as e:
		print(f"epsilon-doctrine: error: {e}", file=sys.stderr)
		return EXIT_USAGE
	return dispatch(config)


def dispatch(config: RunConfig, stream: TextIO | None = None) -> int:
	writer = ReportWriter(config.output, stream)
	try:
		SUBCOMMANDS[config.subcommand](config, writer)
	except OSError as e:
		log_error(title="Cannot read input", message=e)
		return EXIT_USAGE
	except ParseError as e:
		log_error(title="Parse error", message=e)
		return EXIT_DATA
	except EmptyTypeViolation as e:
		log_error(title="Empty type", message=e)
		return EXIT_FAILED
	except ValidationError as e:
		log_error(title="Invalid input", message=e)
		return EXIT_DATA
	return writer.exit_code()


# Loading
# -------


def _read(path: str) -> str:
	return Path(path).read_text(encoding="utf-8")


def _load_theory(path: str | None):
	return parse_theory(_read(path)) if path else None


def _load_model(path: str, signature=None):
	if Path(path).suffix == ".json":
		return load_model_json(_read(path), signature)
	return load_model(_read(path), signature)


def _context(config: RunConfig, signature) -> Context:
	return parse_context(config.context, signature) if config.context else Context()


def _triviality(writer: ReportWriter, report) -> None:
	steps = [f"  - {step}" for step in report.argument]
	text = "\n".join([f"refused: {report.reason}", *steps, f"  {report.demonstration}"])
	writer.note({"triviality": report.as_dict()}, text)


# Subcommands
# -----------


def check(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	sig = theory.signature
	for kind, sequents in (("axiom", theory.axioms), ("goal", theory.goals)):
		for name, seq in sequents.items():
			writer.emit(LawVerdict("well_formed", f"{kind} {name}", PASS, detail=show(seq)))
	for name, (_, value) in theory.definitions.items():
		writer.emit(LawVerdict("well_formed", f"def {name}", PASS, detail=show(value)))

	if config.sequent:
		seq = parse_sequent(config.sequent, sig)
		writer.emit(LawVerdict("well_formed", "sequent", PASS, detail=show(seq)))
	if config.formula:
		phi = parse_formula(config.formula, sig, _context(config, sig))
		writer.emit(LawVerdict("well_formed", "formula", PASS, detail=show(phi)))

	refusal = empty_type_guard(theory)
	if refusal:
		writer.emit(LawVerdict("empty_type", "theory", OBSERVATION, detail=refusal.reason))
		_triviality(writer, refusal)


def verify(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	proofs = parse_proof_script(_read(config.proof), theory.signature)
	for i, proof in enumerate(proofs):
		label = proof.name or f"proof{i}"
		for verdict in check_derivation(proof.derivation, theory.signature):
			writer.emit(dataclasses.replace(verdict, node=f"{label}:{verdict.node}"))
		if proof.name is None:
			continue
		expected = theory.sequent(proof.name)
		if expected is None:
			detail = f"the theory has no axiom or goal named {proof.name}"
			writer.emit(LawVerdict("statement", proof.name, FAIL, detail=detail))
		elif alpha_eq(expected, proof.derivation.conclusion):
			writer.emit(LawVerdict("statement", proof.name, PASS))
		else:
			detail = f"proves {show(proof.derivation.conclusion)}, expected {show(expected)}"
			writer.emit(LawVerdict("statement", proof.name, FAIL, detail=detail))


def holds_command(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	model = _load_model(config.model, theory.signature if theory else None)
	sig = theory.signature if theory else model.signature

	if config.sequent:
		seq = parse_sequent(config.sequent, sig)
	else:
		ctx = _context(config, sig)
		seq = Sequent(ctx, (), parse_formula(config.formula, sig, ctx))

	if (theory and theory.mentions_empty()) or mentions_empty(seq):
		refusal = empty_type_guard(theory or sig, model, extra=(seq,))
		if refusal:
			writer.emit(LawVerdict("holds", show(seq), FAIL, detail=refusal.reason))
			_triviality(writer, refusal)
			return
		model = dataclasses.replace(model, degenerate=True)

	verdict = PASS if holds(seq, model) else FAIL
	detail = "" if verdict == PASS else model.describe()
	writer.emit(LawVerdict("holds", show(seq), verdict, detail=detail))


def audit(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	proofs = parse_proof_script(_read(config.proof), theory.signature)
	refusal = empty_type_guard(theory)
	if refusal:
		detail = "only the degenerate model is audited"
		writer.emit(LawVerdict("empty_type", "theory", OBSERVATION, detail=detail))

	for i, proof in enumerate(proofs):
		label = proof.name or f"proof{i}"
		try:
			report = audit_soundness(proof.derivation, theory, config.max_carrier, config.budget)
		except KernelRejection as e:
			log_error(title=f"Audit of {label}", message=e)
			for verdict in e.verdicts:
				writer.emit(dataclasses.replace(verdict, node=f"{label}:{verdict.node}"))
			continue
		for verdict in report:
			writer.emit(dataclasses.replace(verdict, instance=f"{label}:{verdict.instance}"))


def epsilon(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	model = _load_model(config.model, theory.signature if theory else None)
	sig = theory.signature if theory else model.signature
	ctx = _context(config, sig)

	term = parse_term(config.formula, sig, ctx)
	if not isinstance(term, Epsilon):
		throw(f"{show(term)} is not an eps-term", TypeMismatchError)

	layout = layout_of(ctx, model)
	table = interpret_term(layout, term, model)
	extended, prod = layout.extend(term.var, interpret_type(term.type, model))
	oracle = epsilon_oracle(prod.pi, interpret_formula(extended, term.body, model))

	detail = f"table={list(table.table)}"
	if table != oracle:
		detail += f", oracle={list(oracle.table)}"
	verdict = PASS if table == oracle else FAIL
	writer.emit(LawVerdict("epsilon", show(term), verdict, layout.carrier.size, detail))


def laws(config: RunConfig, writer: ReportWriter) -> None:
	for verdict in run_laws(config.max_size, config.seed):
		writer.emit(verdict)


def countermodel(config: RunConfig, writer: ReportWriter) -> None:
	theory = _load_theory(config.theory)
	if config.goal:
		seq = theory.sequent(config.goal)
		if seq is None:
			throw(f"The theory has no axiom or goal named {config.goal}", UnknownSymbolError)
		targets = [(config.goal, seq)]
	elif config.sequent:
		targets = [("sequent", parse_sequent(config.sequent, theory.signature))]
	else:
		targets = list(theory.goals.items())
		if not targets:
			throw("The theory declares no goals; pass --goal or --sequent")

	for name, seq in targets:
		result = countermodel_search(seq, theory, config.max_carrier, config.budget)
		writer.emit(result.as_verdict(name))
		if result.found:
			writer.note({"countermodel": name, "model": result.model.as_dict()}, dump_model(result.model))


SUBCOMMANDS = {
	"check": check,
	"verify": verify,
	"holds": holds_command,
	"audit": audit,
	"epsilon": epsilon,
	"laws": laws,
	"countermodel": countermodel,
}


if __name__ == "__main__":
	sys.exit(main())
