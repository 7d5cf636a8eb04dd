"""
troptrans: transients of max-plus matrix powers.
Main application entry point.
"""

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from algebra.bounds import BoundsReport, Factorization, main1_for_node, main2_for_node, validate_factorization
from algebra.errors import CapExceededError, InvalidFactorizationError, TropicalError
from algebra.graph_analysis import Walk, cyclicity, cyclicity_classes, digraph_of, is_irreducible, parse_walk
from algebra.pumping import cycle_replace, window
from algebra.spectral import critical_graph
from algebra.transients import TransientReport, column_transient, matrix_transient, row_transient
from algebra.tropical_core import format_weight
from harness.generators import gen_irreducible, gen_low_rank
from harness.models import GenSpec, SuiteResult
from harness.runner import DEFAULT_TRIALS, SUITES, run_suite
from utils.config import LOG_LEVELS, Settings, load_config
from utils.data_manager import DataManager
from utils.instance_library import InstanceLibrary
from utils.matrix_io import (
    MatrixDocument,
    MatrixFormatError,
    dumps_document,
    format_text,
    from_matrix,
    load_document,
    load_factorization,
    save_document,
    to_matrix,
)

logger = logging.getLogger("troptrans")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE_ERROR = 2
EXIT_SEMANTIC_ERROR = 3


class ComponentSummary(BaseModel):
    nodes: List[int]
    cycle_mean: str
    girth: int
    size: int
    cyclicity: int


class NodeAnalysis(BaseModel):
    """Transients and bounds of one critical node; ``node`` is 1-based."""

    node: int
    row: TransientReport
    column: TransientReport
    bounds: BoundsReport
    rank_bounds: Optional[BoundsReport] = None


class AnalysisReport(BaseModel):
    name: Optional[str] = None
    n: int
    lam: str = Field(serialization_alias="lambda")
    irreducible: bool
    cyclicity: Optional[int] = None
    class_sizes: List[int] = Field(default_factory=list)
    components: List[ComponentSummary] = Field(default_factory=list)
    nodes: List[NodeAnalysis] = Field(default_factory=list)
    matrix_transient: Optional[TransientReport] = None
    factor_rank: Optional[int] = None


class PumpReport(BaseModel):
    walk: str
    walk_length: int
    replaced: str
    replaced_length: int
    window: List[int]
    in_window: bool
    congruent: bool
    endpoints_kept: bool


def _one_based(report: BaseModel) -> BaseModel:
    updates = {}
    for field in ("index", "column_index", "node"):
        value = getattr(report, field, None)
        if value is not None:
            updates[field] = value + 1
    return report.model_copy(update=updates)


class TransientWorkflow:
    """
    Orchestrates analysis, cycle replacement, verification runs and instance generation.
    """

    def __init__(self, config_path: str = None):
        """
        Args:
            config_path: Path to the configuration file. If None, will auto-detect.
        """
        self.config: Settings = load_config(config_path)
        self.library = InstanceLibrary()
        self._data_manager: Optional[DataManager] = None

    @property
    def data_manager(self) -> DataManager:
        if self._data_manager is None:
            self._data_manager = DataManager(self.config.data_dir)
        return self._data_manager

    def read_document(self, path: str) -> MatrixDocument:
        """A matrix file, or a bundled instance when no such file exists."""
        if not os.path.exists(path):
            bundled = self.library.find(path)
            if bundled is not None:
                logger.info("using bundled instance %s", path)
                return bundled
        return load_document(path)

    def analyze(
        self,
        doc: MatrixDocument,
        factorization: Optional[Factorization] = None,
        period: Optional[int] = None,
        cap: Optional[int] = None,
    ) -> AnalysisReport:
        """
        Full spectral, transient and bound report of one matrix.

        Raises:
            AcyclicMatrixError: if the matrix is nilpotent
            InvalidFactorizationError: if the factorization does not factor the matrix
            CapExceededError: if a row or column search runs past ``cap``
        """
        A = to_matrix(doc, self.config.float_tolerance)
        C = critical_graph(A)
        irreducible = is_irreducible(A)
        D = digraph_of(A)
        report = AnalysisReport(name=doc.name, n=A.n, lam=format_weight(C.lam), irreducible=irreducible)
        if irreducible:
            report.cyclicity = cyclicity(D)
            report.class_sizes = [len(c) for c in cyclicity_classes(D)]
        for comp in C.components:
            report.components.append(
                ComponentSummary(
                    nodes=sorted(v + 1 for v in comp.nodes),
                    cycle_mean=format_weight(C.lam),
                    girth=comp.girth,
                    size=comp.size,
                    cyclicity=comp.cyclicity,
                )
            )

        if factorization is not None:
            check = validate_factorization(A, factorization)
            if not check:
                raise InvalidFactorizationError(f"factorization does not factor the matrix ({check.reason})")
            report.factor_rank = factorization.r

        for k in sorted(C.nodes):
            entry = NodeAnalysis(
                node=k + 1,
                row=_one_based(row_transient(A, k, period, cap)),
                column=_one_based(column_transient(A, k, period, cap)),
                bounds=_one_based(main1_for_node(A, k)),
            )
            if factorization is not None:
                entry.rank_bounds = _one_based(main2_for_node(A, factorization, k))
            report.nodes.append(entry)

        if irreducible:
            try:
                report.matrix_transient = matrix_transient(A, cap or self.config.matrix_cap)
            except CapExceededError as e:
                logger.warning("matrix transient not found: %s", e)
        return report

    def pump(self, doc: MatrixDocument, hamiltonian: Walk, W: Walk) -> PumpReport:
        D = digraph_of(to_matrix(doc, self.config.float_tolerance))
        V = cycle_replace(D, hamiltonian, W)
        lo, hi = window(D.n)
        return PumpReport(
            walk=str(W),
            walk_length=W.length,
            replaced=str(V),
            replaced_length=V.length,
            window=[lo, hi],
            in_window=lo <= V.length <= hi,
            congruent=(V.length - W.length) % D.n == 0,
            endpoints_kept=V.start == W.start and V.end == W.end,
        )

    def verify(self, suite: str, trials: int, seed: int, nmax: Optional[int], threads: Optional[int]) -> SuiteResult:
        return run_suite(suite, trials, seed, nmax=nmax, threads=threads or self.config.threads)

    def store_result(self, result: SuiteResult) -> str:
        """Save a suite result under a new timestamped run and return the report path."""
        run_id = self.data_manager.new_run({"suite": result.suite, "trials": result.trials, "seed": result.seed})
        print(f"[Data] Started run: {run_id}")
        path = self.data_manager.save_suite_report(run_id, result.suite, _result_payload(result))
        self.data_manager.complete_run(run_id, [result.suite], passed=result.passed)
        print(f"[Data] Saved to: {self.data_manager.get_run_path(run_id)}")
        return str(path)

    def generate(self, spec: GenSpec) -> MatrixDocument:
        F = None
        if spec.structure == "low-rank":
            A, F = gen_low_rank(spec)
        else:
            A = gen_irreducible(spec)
        source = json.dumps(spec.model_dump(), sort_keys=True)
        return from_matrix(A, name=_instance_name(spec), source=f"gen {source}", factorization=F)


def _instance_name(spec: GenSpec) -> str:
    if spec.structure == "planted":
        return f"planted-{'-'.join(str(L) for L in spec.planted)}-n{spec.n}-s{spec.seed}"
    if spec.structure == "low-rank":
        return f"low-rank-{spec.rank}-n{spec.n}-s{spec.seed}"
    return f"{spec.structure}-n{spec.n}-s{spec.seed}"


def _result_payload(result: SuiteResult) -> Dict:
    payload = result.model_dump()
    payload["passed"] = result.passed
    return payload


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def _format_analysis(report: AnalysisReport) -> str:
    lines = [f"Matrix: {report.name or '(unnamed)'} (n = {report.n})"]
    lines.append(f"  lambda: {report.lam}")
    lines.append(f"  irreducible: {'yes' if report.irreducible else 'no'}")
    if report.cyclicity is not None:
        lines.append(f"  cyclicity: {report.cyclicity} (class sizes {report.class_sizes})")
    for comp in report.components:
        lines.append(
            f"  critical component {comp.nodes}: girth {comp.girth}, size {comp.size}, cyclicity {comp.cyclicity}"
        )
    for entry in report.nodes:
        bounds = ", ".join(f"{k}={v}" for k, v in entry.bounds.applicable().items())
        lines.append(
            f"  node {entry.node}: row T={entry.row.transient} p={entry.row.period}, "
            f"column T={entry.column.transient} p={entry.column.period}; bounds {bounds}"
        )
        if entry.rank_bounds is not None:
            rank = ", ".join(f"{k}={v}" for k, v in entry.rank_bounds.applicable().items())
            lines.append(f"    factor-rank bounds (r = {report.factor_rank}): {rank}")
    if report.matrix_transient is not None:
        lines.append(f"  matrix transient: {report.matrix_transient.transient} (period {report.matrix_transient.period})")
    return "\n".join(lines)


def cmd_analyze(args, workflow: TransientWorkflow) -> int:
    doc = workflow.read_document(args.input)
    F = load_factorization(args.factorization) if args.factorization else None
    report = workflow.analyze(doc, F, args.period, args.cap)
    if args.format == "json":
        print(_dumps(report.model_dump(by_alias=True)))
    else:
        print(_format_analysis(report))
    return EXIT_OK


def cmd_pump(args, workflow: TransientWorkflow) -> int:
    doc = workflow.read_document(args.input)
    report = workflow.pump(doc, parse_walk(args.hamiltonian), parse_walk(args.walk))
    if args.format == "json":
        print(_dumps(report.model_dump()))
    else:
        lo, hi = report.window
        print(f"W = {report.walk} (length {report.walk_length})")
        print(f"V = {report.replaced} (length {report.replaced_length})")
        print(f"[Check] window {lo}..{hi}: {'ok' if report.in_window else 'FAILED'}")
        print(f"[Check] congruence mod n: {'ok' if report.congruent else 'FAILED'}")
        print(f"[Check] endpoints: {'ok' if report.endpoints_kept else 'FAILED'}")
    return EXIT_OK


def cmd_verify(args, workflow: TransientWorkflow) -> int:
    trials = DEFAULT_TRIALS[args.suite] if args.trials is None else args.trials
    print(f"[Verify] Suite {args.suite}: {trials} trial(s), seed {args.seed}")
    result = workflow.verify(args.suite, trials, args.seed, args.nmax, args.threads)
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(_dumps(_result_payload(result)) + "\n")
        path = args.output
    else:
        path = workflow.store_result(result)
    print(f"[Verify] {result.instances_checked} instance(s) checked, {len(result.violations)} violation(s)")
    print(f"[Verify] Report: {path}")
    for violation in result.violations[:10]:
        print(
            f"[Violation] {violation.property} node={violation.node} "
            f"measured={violation.measured} bound={violation.bound} {violation.detail}",
            file=sys.stderr,
        )
    return EXIT_OK if result.passed else EXIT_VIOLATIONS


def cmd_gen(args, workflow: TransientWorkflow) -> int:
    structure = "free"
    chosen = [flag for flag in ("planted", "rank", "boolean") if getattr(args, flag)]
    if len(chosen) > 1:
        raise MatrixFormatError(f"choose at most one of --planted, --rank, --boolean (got {', '.join(chosen)})")
    fields = {"n": args.n, "density": args.density, "seed": args.seed}
    if args.planted:
        structure = "planted"
        try:
            fields["planted"] = [int(x) for x in args.planted.split(",") if x.strip()]
        except ValueError:
            raise MatrixFormatError(f"--planted expects comma-separated lengths, got {args.planted!r}")
    elif args.rank:
        structure = "low-rank"
        fields["rank"] = args.rank
    elif args.boolean:
        structure = "boolean"
    spec = GenSpec(structure=structure, **fields)
    doc = workflow.generate(spec)
    if args.output:
        save_document(doc, args.output)
        print(f"[Data] Wrote {doc.name} to {args.output}")
    elif args.format == "text":
        sys.stdout.write(format_text(doc))
    else:
        sys.stdout.write(dumps_document(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="troptrans", description="Transients of max-plus matrix powers")
    parser.add_argument("--config", help="configuration file (default: config.json at the project root)")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, help="override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="spectral, transient and bound report of a matrix")
    analyze.add_argument("input", nargs="?", help="matrix file or bundled instance name")
    analyze.add_argument("--input", dest="input_flag", help=argparse.SUPPRESS)
    analyze.add_argument("--factorization", help="JSON file with blocks V and W")
    analyze.add_argument("--period", type=int, help="period used for every row and column search")
    analyze.add_argument("--cap", type=int, help="largest exponent searched")
    analyze.add_argument("--format", choices=("json", "text"), default="text")
    analyze.set_defaults(handler=cmd_analyze)

    pump = sub.add_parser("pump", help="cycle replacement of a walk into the length window")
    pump.add_argument("input", nargs="?", help="matrix file whose digraph is used")
    pump.add_argument("--input", dest="input_flag", help=argparse.SUPPRESS)
    pump.add_argument("--hamiltonian", required=True, help="Hamiltonian cycle, e.g. 1,2,3,4,1")
    pump.add_argument("--walk", required=True, help="walk, e.g. 1,2,3")
    pump.add_argument("--format", choices=("json", "text"), default="text")
    pump.set_defaults(handler=cmd_pump)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--trials", type=int, help="random instances (suite default when omitted)")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--nmax", type=int, help="largest instance size")
    verify.add_argument("--threads", type=int, help="worker processes (default from configuration)")
    verify.add_argument("--output", help="write the report here instead of the run directory")
    verify.set_defaults(handler=cmd_verify)

    gen = sub.add_parser("gen", help="generate a reproducible instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--density", type=float, default=0.5)
    gen.add_argument("--planted", help="comma-separated planted cycle lengths")
    gen.add_argument("--rank", type=int, help="width of a planted factorization")
    gen.add_argument("--boolean", action="store_true", help="all edge weights 0")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", help="write the document here instead of stdout")
    gen.add_argument("--format", choices=("json", "text"), default="json")
    gen.set_defaults(handler=cmd_gen)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "input_flag"):
        args.input = args.input or args.input_flag
        if not args.input:
            parser.error(f"{args.command} needs an input matrix")

    try:
        workflow = TransientWorkflow(args.config)
    except (FileNotFoundError, ValueError) as e:
        print(f"[ERROR] Configuration error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    logging.basicConfig(
        level=(args.log_level or workflow.config.log_level).upper(),
        format="[%(levelname)s] %(name)s: %(message)s",
    )

    try:
        return args.handler(args, workflow)
    except TropicalError as e:
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_SEMANTIC_ERROR
    except (MatrixFormatError, ValidationError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
