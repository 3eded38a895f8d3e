# coding=utf-8

"""
The reproduction suite: one scenario per worked example and a case file
that says which command to run and what must come out of it.

Case files live in gpc/repro/cases and look like

    {"name": "semigroup-d2",
     "scenario": "semigroup_d2.json",
     "command": "propagate",
     "tolerance": {"value": 1e-5, "provenance": "DERIVED"},
     "exit_code": {"value": 0, "provenance": "DERIVED"},
     "lines": [{"text": "CPTP: YES", "provenance": "TRIVIAL"}],
     "oracle": {"kind": "model_lambda"}}

Every number carries a provenance tag: PUBLISHED for values quoted from the
published examples, TRIVIAL for values that follow by inspection and
DERIVED for values obtained by substituting parameters into closed forms.
Oracles are closed forms named by parameters, never stored tables.
"""

from __future__ import division, unicode_literals, print_function
import six

import contextlib
import glob
import io
import json
import logging
import os

import numpy as np

from gpc.base import Immutable, GpcError, ConfigurationError
from gpc.cli import Scenario, cmd_propagate, cmd_certify, cmd_classical, write_outputs
from gpc.models import ModelDescriptor, model_from_descriptor

logger = logging.getLogger(__name__)

Provenances = ("PUBLISHED", "TRIVIAL", "DERIVED")
Commands = ("propagate", "certify", "classical")
OracleKinds = ("none", "model_lambda", "isotropic_lambda", "wigner_uniform")
CaseDirectory = os.path.join(os.path.dirname(os.path.abspath(__file__)), "repro", "cases")
ScenarioDirectory = os.path.join(os.path.dirname(os.path.abspath(__file__)), "repro", "scenarios")
ResultsFile = "repro_results.json"


def _tagged(values, where):
    if not isinstance(values, dict) or sorted(values) != ["provenance", "value"]:
        raise ConfigurationError("%s must be an object with 'value' and 'provenance'." % where)
    if values["provenance"] not in Provenances:
        raise ConfigurationError("%s has provenance %r; expected one of %s."
                                 % (where, values["provenance"], ", ".join(Provenances)))
    return values["value"]


class ReproCase(Immutable):
    """
    One reproduction case: a scenario, the command to run on it, the exit
    code and report lines it must produce and an optional closed-form oracle
    for the exported numbers.
    """

    __slots__ = "frozen", "name", "scenario_path", "command", "tolerance", "exit_code", "lines", "oracle"

    def __init__(self, name, scenario_path, command, tolerance, exit_code, lines, oracle):
        self.name = name
        self.scenario_path = scenario_path
        self.command = command
        self.tolerance = tolerance
        self.exit_code = exit_code
        self.lines = tuple(lines)
        self.oracle = dict(oracle)
        self.frozen = True

    @classmethod
    def from_dict(cls, values, scenario_directory=ScenarioDirectory):
        """
        >>> case = ReproCase.from_dict({"name": "identity", "scenario": "identity_d2.json",
        ...                             "command": "certify",
        ...                             "tolerance": {"value": 0, "provenance": "TRIVIAL"},
        ...                             "exit_code": {"value": 0, "provenance": "TRIVIAL"},
        ...                             "lines": [], "oracle": {"kind": "none"}})
        >>> case.command, case.exit_code
        ('certify', 0)
        """
        expected = ["command", "exit_code", "lines", "name", "oracle", "scenario", "tolerance"]
        if not isinstance(values, dict) or sorted(values) != expected:
            raise ConfigurationError("A reproduction case needs exactly the keys %s." % ", ".join(expected))
        name = values["name"]
        if values["command"] not in Commands:
            raise ConfigurationError("Case %s has unknown command %r." % (name, values["command"]))
        lines = [_tagged({"value": line.get("text"), "provenance": line.get("provenance")},
                         "Line of case %s" % name) for line in values["lines"]]
        oracle = dict(values["oracle"])
        kind = oracle.get("kind")
        if kind not in OracleKinds:
            raise ConfigurationError("Case %s has unknown oracle %r." % (name, kind))
        for key in sorted(oracle):
            if key != "kind":
                oracle[key] = _tagged(oracle[key], "Oracle parameter '%s' of case %s" % (key, name))
        return cls(name, os.path.join(scenario_directory, values["scenario"]), values["command"],
                   float(_tagged(values["tolerance"], "Tolerance of case %s" % name)),
                   int(_tagged(values["exit_code"], "Exit code of case %s" % name)), lines, oracle)

    @classmethod
    def from_file(cls, path, scenario_directory=ScenarioDirectory):
        try:
            with io.open(path, encoding="utf-8") as handle:
                return cls.from_dict(json.load(handle), scenario_directory)
        except (IOError, OSError, ValueError) as e:
            raise ConfigurationError("Cannot read reproduction case %s: %s." % (path, e))

    def __repr__(self):
        return "<ReproCase %s>" % self.name

    def __unicode__(self):
        return "%s (%s)" % (self.name, self.command)

    __str__ = __unicode__


class ReproResult(Immutable):
    __slots__ = "frozen", "name", "max_error", "exit_code", "passed", "problems"

    def __init__(self, name, max_error, exit_code, passed, problems=()):
        self.name = name
        self.max_error = max_error
        self.exit_code = exit_code
        self.passed = passed
        self.problems = tuple(problems)
        self.frozen = True

    def __repr__(self):
        return "<ReproResult %s passed=%r>" % (self.name, self.passed)

    def to_dict(self):
        return {"case": self.name, "max_error": self.max_error, "exit_code": self.exit_code,
                "verdict": "pass" if self.passed else "FAIL", "problems": list(self.problems)}


class ReproResults(Immutable):
    __slots__ = "frozen", "results"

    def __init__(self, results):
        self.results = tuple(results)
        self.frozen = True

    @property
    def passed(self):
        return all(result.passed for result in self.results)

    def __repr__(self):
        return "<ReproResults %d cases passed=%r>" % (len(self.results), self.passed)

    def __unicode__(self):
        width = max(len("case"), max(len(result.name) for result in self.results))
        lines = ["%-*s  %-12s  %s" % (width, "case", "max error", "verdict")]
        for result in self.results:
            error = "-" if result.max_error is None else "%.3g" % result.max_error
            verdict = "pass" if result.passed else "FAIL: " + "; ".join(result.problems)
            lines.append("%-*s  %-12s  %s" % (width, result.name, error, verdict))
        return "\n".join(lines)

    __str__ = __unicode__

    def to_json(self):
        return json.dumps({"passed": self.passed, "cases": [result.to_dict() for result in self.results]},
                          indent=2, sort_keys=True)


def load_cases(directory=CaseDirectory, scenario_directory=ScenarioDirectory):
    paths = sorted(glob.glob(os.path.join(directory, "*.json")))
    if not paths:
        raise GpcError("Reproduction suite in %s has no cases." % directory)
    return [ReproCase.from_file(path, scenario_directory) for path in paths]


def _read_csv(path):
    with io.open(path, encoding="utf-8") as handle:
        columns = handle.readline().strip().split(",")
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return dict((name, rows[:, index]) for index, name in enumerate(columns))


def oracle_error(case, scenario, directory):
    "The largest deviation between the exported numbers and the case's oracle, or None."
    kind = case.oracle["kind"]
    if kind == "none":
        return None
    if kind == "wigner_uniform":
        table = _read_csv(os.path.join(directory, "wigner.csv"))
        node = int(np.argmin(np.abs(table["t"] - case.oracle["time"])))
        entries = np.array([table["S_%d%d" % (i, j)][node] for i in range(4) for j in range(4)])
        return float(np.max(np.abs(entries - case.oracle["value"])))
    table = _read_csv(os.path.join(directory, "trajectory.csv"))
    t = table["t"]
    if kind == "model_lambda":
        model = model_from_descriptor(ModelDescriptor.from_dict(scenario.d, scenario.params))
        expected = [l(t) for l in model.lambdas()]
    else:
        amplitude, rate = case.oracle["amplitude"], case.oracle["rate"]
        expected = [1 - amplitude * (1 - np.exp(-rate * t))] * (scenario.d + 1)
    return float(max(np.max(np.abs(table["lambda_%d" % alpha] - values))
                     for alpha, values in enumerate(expected, start=1)))


def run_case(case, out):
    "Runs one case into its own directory under out."
    directory = os.path.join(out, case.name)
    scenario = Scenario.from_file(case.scenario_path)
    report = io.StringIO()
    with contextlib.redirect_stdout(report):
        if case.command == "propagate":
            exit_code = cmd_propagate(scenario, directory)
        elif case.command == "certify":
            exit_code = cmd_certify(scenario, directory)
        else:
            exit_code = cmd_classical(scenario, directory)
    text = report.getvalue()
    problems = []
    if exit_code != case.exit_code:
        problems.append("exit code %d, expected %d" % (exit_code, case.exit_code))
    for line in case.lines:
        if line not in text:
            problems.append("missing %r" % line)
    error = oracle_error(case, scenario, directory)
    if error is not None and error > case.tolerance:
        problems.append("error %.3g above %.3g" % (error, case.tolerance))
    logger.info("Reproduction case %s: %s", case.name, "pass" if not problems else "; ".join(problems))
    return ReproResult(case.name, error, exit_code, not problems, problems)


def run_repro_suite(out, cases=None):
    """
    Runs every case, prints the summary table and writes repro_results.json
    into out.
    """
    cases = load_cases() if cases is None else list(cases)
    if not cases:
        raise GpcError("Reproduction suite has no cases.")
    results = ReproResults([run_case(case, out) for case in cases])
    write_outputs(out, {ResultsFile: results.to_json() + "\n"})
    print(six.text_type(results))
    return results
