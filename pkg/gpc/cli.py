# coding=utf-8

"""
The gpc command line: scenario files, trajectory export, certification
reports and the reproduction suite.

A scenario is a JSON object

    {"d": 2,
     "grid": {"t_max": 5.0, "n_steps": 5000},
     "source": {"type": "model", "params": {"family": "semigroup", "gamma": [1, 1, 1]}},
     "outputs": ["lambda", "p", "gamma"],
     "tol": 1e-9}

with exactly one dynamics source of type model, ell, kernel, semimarkov or
identity.  Exit codes are 0 when everything certifies, 1 for usage and
configuration errors and 2 for physics violations.
"""

from __future__ import division, unicode_literals, print_function
import six

import argparse
import io
import json
import logging
import os
import shutil
import sys
import tempfile

import numpy as np

from gpc import __version__
from gpc.base import (Immutable, GpcError, ConfigurationError, SingularGeneratorError, DefaultTolerance,
                      check_dimension)
from gpc.channel import Trajectory, eigen_to_rates
from gpc.classical import stochastic_map, wigner_evolution_qubit
from gpc.kernel import (EllRep, KernelSpec, ExpFamilyParams, build_exp_family, check_theorem1_conditions,
                        kernel_from_ell, propagate_kernel)
from gpc.models import ModelDescriptor, model_from_descriptor
from gpc.mub import build_mubs
from gpc.numerics import TimeGrid, ExponentialSum, SampledFunction
from gpc.semimarkov import SemiMarkovSpec, certify_semimarkov, lambda_via_dyson, lambda_via_laplace

logger = logging.getLogger(__name__)


ExitOk = 0
ExitUsage = 1
ExitViolation = 2

RequiredKeys = ("d", "grid", "source")
OptionalKeys = ("outputs", "tol", "name", "description")
SourceTypes = ("model", "ell", "kernel", "semimarkov", "identity")
Outputs = ("lambda", "p", "gamma", "stochastic", "wigner", "certificates")
DefaultOutputs = ("lambda", "p")
CsvFormat = "%.17g"


class Scenario(Immutable):
    """
    A validated scenario file.

    >>> scenario = Scenario.from_dict({"d": 2, "grid": {"t_max": 1.0, "n_steps": 10},
    ...                                "source": {"type": "identity"}})
    >>> scenario.source_type, scenario.outputs
    ('identity', ('lambda', 'p'))
    """

    __slots__ = "frozen", "d", "grid", "source_type", "params", "outputs", "tolerance", "name"

    def __init__(self, d, grid, source_type, params, outputs=DefaultOutputs, tolerance=DefaultTolerance, name=""):
        self.d = d
        self.grid = grid
        self.source_type = source_type
        self.params = dict(params)
        self.outputs = tuple(outputs)
        self.tolerance = tolerance
        self.name = name
        self.frozen = True

    @classmethod
    def from_file(cls, path):
        try:
            with io.open(path, encoding="utf-8") as handle:
                values = json.load(handle)
        except (IOError, OSError) as e:
            raise ConfigurationError("Cannot read scenario file %s: %s." % (path, e))
        except ValueError as e:
            raise ConfigurationError("Scenario file %s is not valid JSON: %s." % (path, e))
        scenario = cls.from_dict(values)
        logger.debug("Read %s from %s", scenario, path)
        return scenario

    @classmethod
    def from_dict(cls, values):
        if not isinstance(values, dict):
            raise ConfigurationError("A scenario must be a JSON object.")
        several = sorted(set(values) & set(SourceTypes))
        if several:
            raise ConfigurationError("Scenario has several dynamics sources; put '%s' under 'source'." % several[0])
        for key in RequiredKeys:
            if key not in values:
                raise ConfigurationError("Scenario is missing required key '%s'." % key)
        unknown = sorted(set(values) - set(RequiredKeys) - set(OptionalKeys))
        if unknown:
            raise ConfigurationError("Unknown scenario key '%s'." % unknown[0])
        try:
            d = check_dimension(values["d"])
        except GpcError as e:
            raise ConfigurationError("Scenario dimension is unsupported: %s" % e)
        grid = _grid(values["grid"])
        source_type, params = _source(values["source"])
        outputs = values.get("outputs", list(DefaultOutputs))
        if not isinstance(outputs, list) or any(output not in Outputs for output in outputs):
            raise ConfigurationError("Outputs must be a list drawn from %s, got %r." % (", ".join(Outputs), outputs))
        tolerance = values.get("tol", DefaultTolerance)
        if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool) or tolerance < 0:
            raise ConfigurationError("Tolerance must be a non-negative number, got %r." % (tolerance,))
        return cls(d, grid, source_type, params, outputs, float(tolerance), values.get("name", ""))

    def __repr__(self):
        return "<Scenario %s d=%d source=%s>" % (self.name or "unnamed", self.d, self.source_type)

    def __unicode__(self):
        return "scenario %s (%s source on C^%d, %s)" % (self.name or "unnamed", self.source_type, self.d,
                                                        six.text_type(self.grid))

    __str__ = __unicode__


def _grid(values):
    if not isinstance(values, dict) or sorted(values) != ["n_steps", "t_max"]:
        raise ConfigurationError("Scenario grid must have exactly the keys 't_max' and 'n_steps'.")
    t_max, n_steps = values["t_max"], values["n_steps"]
    if not isinstance(n_steps, int) or isinstance(n_steps, bool) or n_steps < 3:
        raise ConfigurationError("Grid n_steps must be an integer of at least 3, got %r." % (n_steps,))
    if not isinstance(t_max, (int, float)) or isinstance(t_max, bool) or not t_max > 0:
        raise ConfigurationError("Grid t_max must be a positive number, got %r." % (t_max,))
    return TimeGrid(float(t_max), n_steps)


def _source(values):
    if not isinstance(values, dict) or "type" not in values:
        raise ConfigurationError("Scenario source must be an object with a 'type'.")
    unknown = sorted(set(values) - {"type", "params"})
    if unknown:
        raise ConfigurationError("Unknown source key '%s'." % unknown[0])
    if values["type"] not in SourceTypes:
        raise ConfigurationError("Unknown source type %r; expected one of %s."
                                 % (values["type"], ", ".join(SourceTypes)))
    params = values.get("params", {})
    if not isinstance(params, dict):
        raise ConfigurationError("Source params must be an object.")
    return values["type"], params


def _number(value):
    if isinstance(value, list) and len(value) == 2:
        return complex(value[0], value[1])
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return value
    raise ConfigurationError("Expected a number or a [real, imaginary] pair, got %r." % (value,))


def exponential_sum_from_dict(values):
    """
    An ExponentialSum from {"coefficients": [...], "rates": [...]}; complex
    entries are written as [real, imaginary] pairs.

    >>> exponential_sum_from_dict({"coefficients": [1], "rates": [2]})(0.0)
    1.0
    """
    if not isinstance(values, dict) or sorted(values) != ["coefficients", "rates"]:
        raise ConfigurationError("Closed forms need exactly the keys 'coefficients' and 'rates'.")
    try:
        return ExponentialSum([_number(c) for c in values["coefficients"]], [_number(z) for z in values["rates"]])
    except (TypeError, ValueError) as e:
        raise ConfigurationError("Bad closed form %r: %s" % (values, e))


def _closed_forms(values, d, what):
    if not isinstance(values, list) or len(values) != d + 1:
        raise ConfigurationError("Expected %d %s for d = %d." % (d + 1, what, d))
    return [exponential_sum_from_dict(value) for value in values]


def _require_params(params, allowed, source_type):
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise ConfigurationError("Unknown parameter '%s' for a %s source." % (unknown[0], source_type))


class Dynamics(Immutable):
    """
    A scenario resolved into its eigenvalue trajectory plus whatever other
    representations the source has: the model, its ℓ, its waiting times, a
    parameter report and the rates.
    """

    __slots__ = "frozen", "scenario", "trajectory", "model", "ell", "waiting", "report", "rates"

    def __init__(self, scenario, trajectory, model=None, ell=None, waiting=None, report=None, rates=None):
        self.scenario = scenario
        self.trajectory = trajectory
        self.model = model
        self.ell = ell
        self.waiting = waiting
        self.report = report
        self.rates = rates
        self.frozen = True

    def __repr__(self):
        return "<Dynamics for %r>" % (self.scenario,)


def resolve_dynamics(scenario):
    "Runs the pipeline the scenario's source calls for."
    d, grid, params = scenario.d, scenario.grid, scenario.params
    source_type = scenario.source_type
    logger.info("Resolving %s", scenario)
    if source_type == "identity":
        _require_params(params, (), source_type)
        ones = SampledFunction(grid, np.ones(len(grid)))
        return Dynamics(scenario, Trajectory(d, [ones] * (d + 1)),
                        waiting=SemiMarkovSpec(d, [ExponentialSum.zero()] * (d + 1)))
    if source_type == "model":
        model = model_from_descriptor(ModelDescriptor.from_dict(d, params))
        try:
            waiting = model.waiting_times(grid)
        except GpcError:
            waiting = None
        try:
            rates = model.rate_vector(grid)
        except GpcError:
            rates = None
        return Dynamics(scenario, propagate_kernel(model.kernel_spec(grid)), model, model.ell(), waiting,
                        model.admissibility(scenario.tolerance), rates)
    if source_type == "ell":
        _require_params(params, ("eta", "xi", "functions"), source_type)
        if "functions" in params:
            ell = EllRep(d, _closed_forms(params["functions"], d, "ell functions"))
            spec = kernel_from_ell(ell, grid)
            report = None
        else:
            if "eta" not in params or "xi" not in params:
                raise ConfigurationError("An ell source needs 'functions' or both 'eta' and 'xi'.")
            family = ExpFamilyParams(d, params["eta"], params["xi"])
            ell, spec = build_exp_family(family, grid, strict=False)
            report = family.admissibility(scenario.tolerance)
        return Dynamics(scenario, propagate_kernel(spec), ell=ell, report=report)
    if source_type == "kernel":
        _require_params(params, ("delta_weights", "regulars"), source_type)
        weights = params.get("delta_weights", [0.0] * (d + 1))
        if not isinstance(weights, list) or len(weights) != d + 1:
            raise ConfigurationError("Expected %d delta weights for d = %d." % (d + 1, d))
        regulars = _closed_forms(params.get("regulars", [{"coefficients": [], "rates": []}] * (d + 1)), d,
                                 "regular parts")
        spec = KernelSpec.from_closed_forms(d, [float(_number(w).real) for w in weights], regulars, grid)
        return Dynamics(scenario, propagate_kernel(spec))
    _require_params(params, ("functions", "chi", "method", "stride"), source_type)
    if ("functions" in params) == ("chi" in params):
        raise ConfigurationError("A semimarkov source needs exactly one of 'functions' and 'chi'.")
    if "chi" in params:
        functions = [exponential_sum_from_dict(params["chi"])] * (d + 1)
    else:
        functions = _closed_forms(params["functions"], d, "waiting-time densities")
    waiting = SemiMarkovSpec(d, functions)
    method = params.get("method", "dyson")
    if method == "dyson":
        trajectory = lambda_via_dyson(waiting, build_mubs(d), grid)
    elif method == "laplace":
        trajectory = lambda_via_laplace(waiting, grid, int(params.get("stride", 1)))
    else:
        raise ConfigurationError("Unknown semi-Markov method %r; expected 'dyson' or 'laplace'." % (method,))
    return Dynamics(scenario, trajectory, waiting=waiting)


class Certification(Immutable):
    """
    Every verdict for one scenario, in report order, plus the exit code they
    imply.
    """

    __slots__ = "frozen", "lines", "exit_code"

    def __init__(self, lines, exit_code):
        self.lines = tuple(lines)
        self.exit_code = exit_code
        self.frozen = True

    def __repr__(self):
        return "<Certification exit_code=%d>" % self.exit_code

    def __unicode__(self):
        return "\n".join(self.lines)

    __str__ = __unicode__


def certify_dynamics(dynamics):
    """
    CPTP along the trajectory, the source's parameter inequalities, the ℓ
    conditions and the semi-Markov verdict.  The semi-Markov verdict only
    counts as a violation when the source is itself a semi-Markov map.
    """
    scenario = dynamics.scenario
    tolerance = scenario.tolerance
    violated = False
    cptp = dynamics.trajectory.certify(tolerance)
    lines = [six.text_type(cptp)]
    violated = violated or not cptp
    if dynamics.report is not None:
        lines.append("Parameter inequalities: %s" % ("YES" if dynamics.report else "NO"))
        lines.extend("  " + line for line in six.text_type(dynamics.report).splitlines())
        violated = violated or not dynamics.report
    if dynamics.ell is not None:
        conditions = check_theorem1_conditions(dynamics.ell, scenario.grid, tolerance)
        lines.append("Kernel conditions: %s" % conditions)
        violated = violated or not conditions
    if dynamics.waiting is not None:
        semimarkov = certify_semimarkov(dynamics.waiting, scenario.grid, tolerance)
        lines.append(six.text_type(semimarkov))
        if scenario.source_type == "semimarkov":
            violated = violated or not semimarkov
    if dynamics.rates is not None:
        negative = dynamics.rates.negative_rate_indices(tolerance)
        lines.append("Negative rates: %s" % (", ".join("gamma_%d" % alpha for alpha in negative) or "none"))
    return Certification(lines, ExitViolation if violated else ExitOk)


def trajectory_table(dynamics, outputs):
    "The propagate CSV columns and rows."
    trajectory = dynamics.trajectory
    d = trajectory.d
    columns = ["t"]
    blocks = [trajectory.grid.nodes[:, None]]
    if "lambda" in outputs:
        columns += ["lambda_%d" % alpha for alpha in range(1, d + 2)]
        blocks.append(trajectory.eigenvalues())
    if "p" in outputs:
        columns += ["p_%d" % index for index in range(d + 2)]
        blocks.append(trajectory.probabilities())
    if "gamma" in outputs:
        rates = dynamics.rates
        if rates is None or rates.grid != trajectory.grid:
            try:
                rates = eigen_to_rates(trajectory)
            except SingularGeneratorError as e:
                logger.warning("Leaving out the gamma columns: %s", e)
                rates = None
        if rates is not None:
            columns += ["gamma_%d" % alpha for alpha in range(1, d + 2)]
            blocks.append(np.column_stack([g.values for g in rates.gammas]))
    return columns, np.hstack(blocks)


def classical_tables(dynamics, outputs):
    "The stochastic-map and Wigner CSV tables, keyed by file name."
    trajectory = dynamics.trajectory
    d = trajectory.d
    nodes = trajectory.grid.nodes[:, None]
    tables = {}
    if "stochastic" in outputs:
        columns = ["t"]
        blocks = [nodes]
        for alpha in range(1, d + 2):
            maps = np.array([stochastic_map(trajectory.state(j), alpha).matrix for j in range(len(trajectory.grid))])
            columns += ["T_%d%d_%d" % (i, j, alpha) for j in range(d) for i in range(d)]
            blocks.append(maps.transpose(0, 2, 1).reshape(len(nodes), -1))
        tables["stochastic.csv"] = (columns, np.hstack(blocks))
    if "wigner" in outputs:
        if d != 2:
            raise ConfigurationError("Wigner output needs d = 2, got d = %d." % d)
        S = wigner_evolution_qubit(dynamics.ell if dynamics.ell is not None else trajectory, trajectory.grid)
        columns = ["t"] + ["S_%d%d" % (i, j) for j in range(4) for i in range(4)]
        tables["wigner.csv"] = (columns, np.hstack([nodes, S.transpose(0, 2, 1).reshape(len(nodes), -1)]))
    return tables


def _csv_text(columns, rows):
    buffer = io.StringIO()
    np.savetxt(buffer, rows, fmt=CsvFormat, delimiter=",", header=",".join(columns), comments="")
    return buffer.getvalue()


def write_outputs(directory, files):
    """
    Writes {file name: text} into directory through a temporary directory, so
    nothing is left behind if any file fails.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    staging = tempfile.mkdtemp(prefix=".gpc-", dir=directory)
    try:
        for name, text in files.items():
            with io.open(os.path.join(staging, name), "w", encoding="utf-8", newline="\n") as handle:
                handle.write(six.text_type(text))
        for name in files:
            os.replace(os.path.join(staging, name), os.path.join(directory, name))
            logger.info("Wrote %s", os.path.join(directory, name))
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return sorted(os.path.join(directory, name) for name in files)


def cmd_propagate(scenario, out):
    dynamics = resolve_dynamics(scenario)
    columns, rows = trajectory_table(dynamics, scenario.outputs)
    files = {"trajectory.csv": _csv_text(columns, rows)}
    certification = certify_dynamics(dynamics)
    if "certificates" in scenario.outputs:
        files["certificates.txt"] = six.text_type(certification) + "\n"
    write_outputs(out, files)
    print(six.text_type(certification))
    return certification.exit_code


def cmd_certify(scenario, out=None):
    certification = certify_dynamics(resolve_dynamics(scenario))
    if out is not None:
        write_outputs(out, {"certificates.txt": six.text_type(certification) + "\n"})
    print(six.text_type(certification))
    return certification.exit_code


def cmd_classical(scenario, out):
    outputs = [output for output in scenario.outputs if output in ("stochastic", "wigner")]
    if not outputs:
        outputs = ["stochastic", "wigner"] if scenario.d == 2 else ["stochastic"]
    dynamics = resolve_dynamics(scenario)
    tables = classical_tables(dynamics, outputs)
    write_outputs(out, dict((name, _csv_text(*table)) for name, table in tables.items()))
    certification = certify_dynamics(dynamics)
    print(six.text_type(certification))
    return certification.exit_code


def cmd_repro(out):
    from gpc.repro import run_repro_suite
    results = run_repro_suite(out)
    return ExitOk if results.passed else ExitViolation


class ScenarioArgumentParser(argparse.ArgumentParser):
    "Turns usage errors into ConfigurationError."

    def error(self, message):
        raise ConfigurationError(message)


def build_parser():
    parser = ScenarioArgumentParser(prog="gpc", description="Generalized Pauli channel dynamics.")
    parser.add_argument("--version", action="version", version="gpc " + __version__)
    parser.add_argument("--log-level", default=os.environ.get("GPC_LOG_LEVEL", "WARNING"),
                        help="logging level (default from GPC_LOG_LEVEL, else WARNING)")
    commands = parser.add_subparsers(dest="command", parser_class=ScenarioArgumentParser)
    commands.required = True
    for name, text in (("propagate", "propagate a scenario and export the trajectory"),
                       ("certify", "print every certificate for a scenario"),
                       ("classical", "export stochastic maps and qubit Wigner matrices")):
        command = commands.add_parser(name, help=text)
        command.add_argument("--config", required=True, help="scenario JSON file")
        command.add_argument("--out", required=(name != "certify"), help="output directory")
    repro = commands.add_parser("repro", help="run the reproduction suite")
    repro.add_argument("--out", default="repro-output", help="output directory")
    return parser


def configure_logging(level):
    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise ConfigurationError("Unknown log level %r." % (level,))
    logging.basicConfig(level=numeric, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    try:
        arguments = build_parser().parse_args(argv)
        configure_logging(arguments.log_level)
        if arguments.command == "repro":
            return cmd_repro(arguments.out)
        scenario = Scenario.from_file(arguments.config)
        if arguments.command == "propagate":
            return cmd_propagate(scenario, arguments.out)
        if arguments.command == "certify":
            return cmd_certify(scenario, arguments.out)
        return cmd_classical(scenario, arguments.out)
    except GpcError as e:
        logger.debug("Command failed", exc_info=True)
        print("gpc: error: %s" % e, file=sys.stderr)
        return ExitUsage
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitUsage
