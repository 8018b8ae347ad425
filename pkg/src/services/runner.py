"""Scenario runner and fuzz campaigns.

``run_scenario`` loads a scenario (file or builtin), applies settings in the
order environment < scenario config < command line, and executes the
verify directives. Every directive gets its own seed from
``SeedSequence(root).spawn(n)``; its first 32-bit state word seeds the
directive's generator and its spawn key is echoed in the report.
"""

import contextvars
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..config import Settings, activate_settings, current_settings, override_settings
from ..schemas.input import FuzzOptions, RunOptions
from ..schemas.output import ERROR, FAIL, CheckOutcome, FuzzReport, RunReport
from ..templates import TEMPLATES, get_template
from .certificates import Certificate
from .covariant import (
    STRICT,
    CovariantRep,
    HilbertRep,
    PairSemigroupResult,
    SemigroupAction,
    check_product_calculus,
    compare_semigroups,
    pair_semigroup_action,
    rotation_counterexample,
    validate_covrep_partial,
)
from .crossed_product import (
    CrossedProduct,
    LElement,
    collapse_quotient_dimension,
    l_algebra_residuals,
    l_star,
    realize_crossed_product,
    verify_main_theorem,
    verify_round_trip,
    verify_scalar_crossed_product,
    verify_semilattice_crossed_product,
    verify_semilattice_idempotent_decomposition,
)
from .cstar import random_unitary
from .errors import (
    AlgebraError,
    CompositionViolated,
    CovrepMismatch,
    ExpectationFailed,
    InputError,
    NotAssociative,
    NotPartialIsometry,
    NotStarHomomorphism,
    ParseError,
    PreconditionError,
    SpaceMismatch,
    VerificationError,
)
from .models import (
    RestrictedInstance,
    corrupt_maps,
    random_l_element,
    random_restricted_instance,
    random_semilattice_action,
    shift_example,
    two_point_action,
)
from .partial_action import (
    PartialAction,
    check_action_laws,
    embed_set_action,
    validate_partial_action,
    validate_reformulated,
    validate_set_action,
)
from .report import ReportService
from .scenario import Directive, parse_scenario, resolve_scenario
from .semigroup import FiniteInverseSemigroup, idempotents_and_order, min_group_congruence, verify_inverse_semigroup

logger = logging.getLogger(__name__)

# Norm inequalities of L hold exactly; allow float rounding only.
NORM_ROUNDING = 1e-12


@dataclass
class CheckContext:
    """What a check handler sees: the directive's parameters, settings and seeded generator."""

    directive: Directive
    params: Dict[str, Any]
    settings: Settings
    rng: np.random.Generator
    seed: int

    def require(self, key: str, expected: type) -> Any:
        if key not in self.params:
            raise PreconditionError(f"check '{self.directive.check}' needs '{key}'")
        value = self.params[key]
        if not isinstance(value, expected):
            raise PreconditionError(
                f"'{key}' of check '{self.directive.check}' must be {expected.__name__}, got {type(value).__name__}"
            )
        return value

    def option(self, key: str, default: Any) -> Any:
        return self.params.get(key, default)


@dataclass
class CheckResult:
    residuals: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    certificate: Optional[Certificate] = None


# ============================================================================
# CHECK HANDLERS
# ============================================================================


def _covrep(ctx: CheckContext) -> CovariantRep:
    """``covrep``, or the covariant representation behind a named ``crossed`` product."""
    if "covrep" not in ctx.params and "crossed" in ctx.params:
        return ctx.require("crossed", CrossedProduct).covrep
    return ctx.require("covrep", CovariantRep)


def _strict_covrep(ctx: CheckContext) -> CovariantRep:
    covrep = _covrep(ctx)
    covrep.certificate = validate_covrep_partial(covrep.action, covrep.rep, covrep.family, covrep.mode, ctx.settings.tol)
    if covrep.mode != STRICT:
        raise PreconditionError(f"check '{ctx.directive.check}' needs a strict covariant representation")
    return covrep


def _check_inverse_semigroup(ctx: CheckContext) -> CheckResult:
    if "mul" in ctx.params:
        labels = ctx.option("labels", None)
        S = verify_inverse_semigroup(ctx.params["mul"], [str(x) for x in labels] if labels else None)
    else:
        S = ctx.require("semigroup", FiniteInverseSemigroup)
    order = idempotents_and_order(S)
    sigma = min_group_congruence(S)
    return CheckResult(
        details={
            "size": S.n,
            "idempotents": len(order.idempotents),
            "is_semilattice": order.is_semilattice,
            "quotient_order": sigma.order,
            "zero": S.label(S.zero) if S.zero is not None else None,
        }
    )


def _check_partial_action_laws(ctx: CheckContext) -> CheckResult:
    action = ctx.require("action", PartialAction)
    max_length = int(ctx.option("max_word_length", ctx.settings.max_word_length))
    cert = validate_partial_action(action, ctx.settings.tol).certificate
    cert.merge(validate_reformulated(action, ctx.settings.tol))
    cert.merge(check_action_laws(action, max_length))
    return CheckResult(
        residuals=dict(cert.residuals),
        details={"support": len(action.support), "max_word_length": max_length, "checks": cert.checks},
        certificate=cert,
    )


def _check_covariant_rep(ctx: CheckContext) -> CheckResult:
    covrep = _covrep(ctx)
    mode = str(ctx.option("mode", covrep.mode))
    cert = validate_covrep_partial(covrep.action, covrep.rep, covrep.family, mode, ctx.settings.tol)
    return CheckResult(residuals=dict(cert.residuals), details={"mode": mode, "dimension": covrep.rep.dim}, certificate=cert)


_CALCULUS_ERRORS = {
    "partial_isometry": NotPartialIsometry,
    "final_projection": SpaceMismatch,
    "initial_projection": SpaceMismatch,
    "collapse": CompositionViolated,
}


def _check_covariant_calculus(ctx: CheckContext) -> CheckResult:
    covrep = _strict_covrep(ctx)
    report = check_product_calculus(covrep, int(ctx.option("max_length", 3)), ctx.settings.tol)
    if not report.passed:
        first = report.violations[0]
        raise _CALCULUS_ERRORS[first["law"]](
            f"{first['law']} fails for word {first['word']} (residual {first['residual']:.3e})",
            report.to_dict(),
        )
    return CheckResult(residuals=dict(report.residuals), details={"words": report.words_checked}, certificate=covrep.certificate)


def _check_rotation(ctx: CheckContext) -> CheckResult:
    angle = float(ctx.option("angle", math.pi / 4))
    gap = float(ctx.option("product_gap", 1e-3))
    report = rotation_counterexample(angle)
    tol = ctx.settings.tol
    for name, residual in report.residuals.items():
        if name != "(UV)^2" and residual > tol:
            raise NotPartialIsometry(f"{name} is not a partial isometry (residual {residual:.3e})", report.to_dict())
    if report.commutation_residual > tol:
        raise ExpectationFailed("initial and final projections do not commute", report.to_dict())
    if report.residuals["(UV)^2"] <= gap:
        raise ExpectationFailed(f"(UV)^2 residual {report.residuals['(UV)^2']:.3e} is not above {gap}", report.to_dict())
    residuals = dict(report.residuals)
    residuals["commutation"] = report.commutation_residual
    return CheckResult(residuals=residuals, details={"angle": angle, "product_residual": report.residuals["(UV)^2"]})


def _check_pair_semigroup(ctx: CheckContext) -> CheckResult:
    covrep = _strict_covrep(ctx)
    pair = pair_semigroup_action(covrep, ctx.settings.closure_bound, ctx.settings.tol)
    S = pair.semigroup
    order = idempotents_and_order(S)
    cert = pair.covrep.certificate
    return CheckResult(
        residuals=dict(cert.residuals),
        details={
            "size": S.n,
            "idempotents": len(order.idempotents),
            "is_semilattice": order.is_semilattice,
            "words": {S.label(s): [str(g) for g in word] for s, word in pair.words.items()},
            "quotient": collapse_quotient_dimension(pair.action).to_dict(),
        },
        certificate=cert,
    )


def _check_semigroup_comparison(ctx: CheckContext) -> CheckResult:
    covrep = _covrep(ctx)
    validate_covrep_partial(covrep.action, covrep.rep, covrep.family, covrep.mode, ctx.settings.tol)
    comparison = compare_semigroups(covrep, ctx.settings.closure_bound, ctx.settings.tol)
    return CheckResult(details=comparison.to_dict())


def _check_semilattice_crossed_product(ctx: CheckContext) -> CheckResult:
    instances: List[Tuple[str, Any, HilbertRep]] = []
    count = int(ctx.option("random", 0))
    for child in np.random.SeedSequence(ctx.seed).spawn(count):
        seed = int(child.generate_state(1)[0])
        action, rep = random_semilattice_action(seed)
        instances.append((f"seed {seed}", action, rep))
    if ctx.option("two_point", count == 0):
        action = two_point_action((2, 1), (1,))
        instances.append(("two-point", action, HilbertRep.canonical(action.algebra, [1, 2])))

    cert = Certificate(subject="semilattice crossed products")
    dimensions = []
    for name, action, rep in instances:
        report = verify_semilattice_crossed_product(action, rep, ctx.settings.tol)
        cert.merge(report.certificate)
        dimensions.append(report.details["image_dimension"])
        logger.debug(f"Semilattice crossed product {name}: {report.details['realization']}")
    return CheckResult(
        residuals=dict(cert.residuals),
        details={"instances": len(instances), "dimensions": dimensions},
        certificate=cert,
    )


def _check_scalar_crossed_product(ctx: CheckContext) -> CheckResult:
    S = ctx.require("semigroup", FiniteInverseSemigroup)
    report = verify_scalar_crossed_product(S, ctx.settings.tol)
    realization = report.details["realization"]
    return CheckResult(
        residuals=dict(report.certificate.residuals),
        details={
            "size": S.n,
            "quotient_order": report.details["quotient_order"],
            "blocks": realization["blocks"],
            "dimension": realization["dimension"],
        },
        certificate=report.certificate,
    )


def _check_idempotent_decomposition(ctx: CheckContext) -> CheckResult:
    S = ctx.require("semigroup", FiniteInverseSemigroup)
    report = verify_semilattice_idempotent_decomposition(S, ctx.settings.tol)
    realization = report.details["realization"]
    return CheckResult(
        residuals=dict(report.certificate.residuals),
        details={
            "size": S.n,
            "idempotents": report.details["idempotents"],
            "blocks": realization["blocks"],
            "dimension": realization["dimension"],
        },
        certificate=report.certificate,
    )


def _check_main_theorem(ctx: CheckContext) -> CheckResult:
    covrep = _strict_covrep(ctx)
    amplifications = [int(k) for k in ctx.option("amplifications", [1, 2])]
    report = verify_main_theorem(
        covrep, amplifications=amplifications, tol=ctx.settings.tol, bound=ctx.settings.closure_bound
    )
    realization = report.details["realization"]
    return CheckResult(
        residuals=dict(report.certificate.residuals),
        details={
            "size": report.details["pair_order"],
            "blocks": realization["blocks"],
            "dimension": realization["dimension"],
            "quotient": report.details["quotient"],
            "alternates": report.details["alternates"],
        },
        certificate=report.certificate,
    )


_L_LAW_ERRORS = {
    "associativity": NotAssociative,
    "double_star": NotStarHomomorphism,
    "star_antimultiplicative": NotStarHomomorphism,
    "multiplicative": NotStarHomomorphism,
    "star_preserving": NotStarHomomorphism,
}
_NORM_LAWS = ("norm_submultiplicative", "norm_star", "contractive")


def _check_l_algebra(ctx: CheckContext) -> CheckResult:
    covrep = _strict_covrep(ctx)
    pair = pair_semigroup_action(covrep, ctx.settings.closure_bound, ctx.settings.tol)
    count = int(ctx.option("count", 100))
    maxima: Dict[str, float] = {}
    for i in range(count):
        x, y, z = (random_l_element(pair.action, ctx.rng) for _ in range(3))
        for law, residual in l_algebra_residuals(x, y, z, pair.covrep).items():
            maxima[law] = max(maxima.get(law, 0.0), residual)
            limit = NORM_ROUNDING if law in _NORM_LAWS else ctx.settings.tol
            if residual > limit:
                raise _L_LAW_ERRORS.get(law, ExpectationFailed)(
                    f"{law} fails on sample {i} (residual {residual:.3e})",
                    {"law": law, "sample": i, "residual": residual, "x": x.to_dict(), "y": y.to_dict(), "z": z.to_dict()},
                )
    return CheckResult(residuals=maxima, details={"samples": count, "pair_order": pair.semigroup.n})


def _check_l_element(ctx: CheckContext) -> CheckResult:
    """π×v on one element of L: adjoints are preserved and the ℓ¹ norm bounds the operator norm."""
    crossed = ctx.require("crossed", CrossedProduct)
    x = ctx.require("element", LElement)
    if x.action is not crossed.action:
        raise CovrepMismatch("element belongs to another crossed product")
    image = crossed.evaluate(x)
    norm = float(np.linalg.norm(image, 2))
    residuals = {
        "star_preserving": float(np.linalg.norm(crossed.evaluate(l_star(x, ctx.settings.tol)) - image.conj().T)),
        "contractive": max(0.0, norm - x.norm1()) / max(1.0, x.norm1()),
    }
    if residuals["star_preserving"] > ctx.settings.tol:
        raise NotStarHomomorphism(f"(π×v)(x*) differs from (π×v)(x)* by {residuals['star_preserving']:.3e}", {"x": x.to_dict()})
    if residuals["contractive"] > NORM_ROUNDING:
        raise ExpectationFailed(f"operator norm {norm:.6g} exceeds the ℓ¹ norm {x.norm1():.6g}", {"x": x.to_dict()})
    S = x.action.semigroup
    return CheckResult(
        residuals=residuals,
        details={
            "support": [S.label(s) for s in x.support],
            "norm1": x.norm1(),
            "norm": norm,
            "faithful": crossed.faithful,
        },
    )


def _check_round_trip(ctx: CheckContext) -> CheckResult:
    covrep = _strict_covrep(ctx)
    pair = pair_semigroup_action(covrep, ctx.settings.closure_bound, ctx.settings.tol)
    cert = Certificate(subject="round trip")
    dimensions = []
    for k in [int(k) for k in ctx.option("amplifications", [1, 2])]:
        realization = realize_crossed_product(pair.covrep.amplify(k), ctx.settings.tol, ctx.rng)
        cert.merge(verify_round_trip(realization, tol=ctx.settings.tol))
        W = random_unitary(realization.covrep.rep.dim, ctx.rng)
        cert.merge(verify_round_trip(realization, lambda m, W=W: W @ m @ W.conj().T, tol=ctx.settings.tol))
        dimensions.append(realization.report.dimension)
    return CheckResult(residuals=dict(cert.residuals), details={"dimensions": dimensions}, certificate=cert)


CHECKS: Dict[str, Callable[[CheckContext], CheckResult]] = {
    "inverse_semigroup": _check_inverse_semigroup,
    "partial_action_laws": _check_partial_action_laws,
    "covariant_rep": _check_covariant_rep,
    "covariant_calculus": _check_covariant_calculus,
    "rotation": _check_rotation,
    "pair_semigroup": _check_pair_semigroup,
    "semigroup_comparison": _check_semigroup_comparison,
    "semilattice_crossed_product": _check_semilattice_crossed_product,
    "scalar_crossed_product": _check_scalar_crossed_product,
    "idempotent_decomposition": _check_idempotent_decomposition,
    "main_theorem": _check_main_theorem,
    "l_algebra": _check_l_algebra,
    "l_element": _check_l_element,
    "round_trip": _check_round_trip,
}


def get_supported_checks() -> List[str]:
    return sorted(CHECKS)


# ============================================================================
# DIRECTIVE EXECUTION
# ============================================================================


def plain(value: Any) -> Any:
    """numpy scalars and arrays as plain Python values, recursively."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def _matches(expected: Any, actual: Any) -> bool:
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(k in actual and _matches(v, actual[k]) for k, v in expected.items())
    if isinstance(expected, list):
        return isinstance(actual, list) and len(expected) == len(actual) and all(_matches(e, a) for e, a in zip(expected, actual))
    if isinstance(expected, float) or isinstance(actual, float):
        return isinstance(actual, (int, float)) and math.isclose(float(expected), float(actual), rel_tol=1e-9, abs_tol=1e-12)
    return expected == actual


def _compare_expectations(expectations: Dict[str, Any], details: Dict[str, Any]) -> None:
    """``expect_<key> = value`` must match ``details[<key>]``."""
    for key, expected in sorted(expectations.items()):
        name = key[len("expect_"):]
        if name not in details:
            raise PreconditionError(f"nothing to compare '{key}' with. Available: {', '.join(sorted(details))}")
        actual = plain(details[name])
        if not _matches(plain(expected), actual):
            raise ExpectationFailed(f"{name} is {actual}, expected {plain(expected)}", {"key": name, "expected": plain(expected), "actual": actual})


def execute_directive(directive: Directive, child: np.random.SeedSequence, settings: Settings) -> CheckOutcome:
    """Run one verify directive; errors become the outcome's status, never exceptions."""
    seed = int(child.generate_state(1)[0])
    outcome = CheckOutcome(name=directive.name, check=directive.check, seed=seed, spawn_key=list(child.spawn_key))
    params = dict(directive.params)
    expect_error = params.pop("expect_error", None)
    expectations = {k: params.pop(k) for k in list(params) if k.startswith("expect_")}
    start = time.perf_counter()
    logger.info(f"Running {directive.name} ({directive.check})")

    directive_settings = override_settings(seed=seed, base=settings)
    ctx = CheckContext(directive=directive, params=params, settings=directive_settings, rng=np.random.default_rng(seed), seed=seed)
    with activate_settings(directive_settings):
        try:
            result = CHECKS[directive.check](ctx)
            if expect_error:
                raise ExpectationFailed(f"expected {expect_error} but the check passed")
            _compare_expectations(expectations, plain(result.details))
            outcome.residuals = {k: float(v) for k, v in sorted(result.residuals.items())}
            outcome.details = plain(result.details)
            outcome.certificate = plain(result.certificate.to_dict()) if result.certificate else None
        except AlgebraError as exc:
            if expect_error and exc.kind == expect_error:
                outcome.message = f"raised {exc.kind} as expected: {exc}"
                outcome.certificate = plain(exc.to_dict())
            else:
                outcome.status = FAIL if isinstance(exc, VerificationError) else ERROR
                outcome.message = str(exc)
                outcome.certificate = plain(exc.to_dict())
                logger.warning(f"{directive.name}: {exc.kind}: {exc}")
        except Exception as exc:
            outcome.status = ERROR
            outcome.message = f"{type(exc).__name__}: {exc}"
            logger.error(f"{directive.name} crashed: {outcome.message}")

    outcome.wall_time = time.perf_counter() - start
    logger.info(f"Finished {directive.name}: {outcome.status} in {outcome.wall_time:.2f}s")
    return outcome


# ============================================================================
# SCENARIO RUNS
# ============================================================================


def list_builtins() -> List[str]:
    """Bundled scenario names in lexicographic order."""
    return sorted(TEMPLATES)


def load_scenario_text(target: str) -> Tuple[str, str]:
    """Scenario text for a builtin name or a file path.

    Raises:
        InputError: neither a builtin nor a readable file
    """
    if target in TEMPLATES:
        return get_template(target).text, target
    path = Path(target)
    if not path.is_file():
        raise InputError(
            f"no scenario file or builtin named '{target}'. Builtins: {', '.join(list_builtins())}",
            {"target": target},
        )
    return path.read_text(encoding="utf-8"), target


def scenario_settings(config_values: Dict[str, Any], options: RunOptions) -> Settings:
    """Environment defaults, then the scenario's config block, then command-line flags.

    Raises:
        InputError: the combined values fail validation
    """

    def pick(flag: Any, key: str) -> Any:
        return flag if flag is not None else config_values.get(key)

    try:
        return override_settings(
            tol=pick(options.tol, "tol"),
            closure_bound=pick(options.bound, "bound"),
            mode=pick(options.mode, "mode"),
            seed=pick(options.seed, "seed"),
            jobs=options.jobs,
            max_word_length=config_values.get("max_word_length"),
        )
    except ValidationError as exc:
        raise InputError(f"invalid settings: {exc.errors()[0]['msg']}")


def run_scenario(options: RunOptions) -> RunReport:
    """Parse, resolve and execute a scenario.

    Input problems (missing file, syntax, dangling references, bad settings,
    unknown checks) raise before any directive runs. Directive failures are
    recorded in the report.

    Raises:
        InputError
    """
    started = time.perf_counter()
    text, source = load_scenario_text(options.target)
    scenario = parse_scenario(text, source)
    settings = scenario_settings(scenario.config.model_dump(exclude_none=True), options)

    with activate_settings(settings):
        resolved = resolve_scenario(scenario)
        for directive in resolved.directives:
            if directive.check not in CHECKS:
                raise ParseError(
                    directive.line, f"Unsupported check: {directive.check}. Supported: {', '.join(get_supported_checks())}"
                )
        children = np.random.SeedSequence(settings.seed).spawn(len(resolved.directives))
        jobs = settings.jobs
        logger.info(f"Running {len(resolved.directives)} directives from {source} (seed {settings.seed}, jobs {jobs})")

        if jobs > 1 and len(resolved.directives) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = [
                    pool.submit(contextvars.copy_context().run, execute_directive, directive, child, settings)
                    for directive, child in zip(resolved.directives, children)
                ]
                outcomes = [f.result() for f in futures]
        else:
            outcomes = [execute_directive(d, c, settings) for d, c in zip(resolved.directives, children)]

    report = RunReport(
        scenario=source,
        seed=settings.seed,
        settings={
            "tol": settings.tol,
            "bound": settings.closure_bound,
            "mode": settings.mode,
            "max_word_length": settings.max_word_length,
        },
        outcomes=outcomes,
        wall_time=time.perf_counter() - started,
    )
    logger.info(f"Scenario {source}: {report.status} ({sum(o.passed for o in outcomes)}/{len(outcomes)} passed)")
    ReportService().write_all(report, options.report, options.machine_report)
    return report


# ============================================================================
# FUZZING
# ============================================================================


@dataclass
class FuzzFamily:
    """How one fuzz family builds an instance from a seed, checks it, and dumps it for replay."""

    build: Callable[[int], Any]
    check: Callable[[Any, FuzzReport, Settings], None]
    dump: Callable[[Any], Dict[str, Any]]


def _check_commutative_model(instance: RestrictedInstance, report: FuzzReport, settings: Settings) -> None:
    """Commutative-model laws, and agreement of the set-level and algebra-level validators."""
    action = instance.action
    ground = len(instance.points)
    validate_set_action(action.group, ground, instance.maps)
    validate_partial_action(action, settings.tol)
    validate_reformulated(action, settings.tol)
    cert = check_action_laws(action, settings.max_word_length)
    report.record("words_and_translations", 0.0)
    logger.debug(f"Commutative model seed {instance.seed}: {cert.checks} checks")

    corrupted = corrupt_maps(instance.maps, action.group, ground, np.random.default_rng(instance.seed))
    verdicts: List[Optional[str]] = []
    for check in (
        lambda: validate_set_action(action.group, ground, corrupted),
        lambda: validate_partial_action(embed_set_action(action.group, ground, corrupted), settings.tol),
    ):
        try:
            check()
            verdicts.append(None)
        except VerificationError as exc:
            verdicts.append(exc.kind)
    if (verdicts[0] is None) != (verdicts[1] is None):
        raise ExpectationFailed(
            f"set-level and algebra-level validators disagree: {verdicts[0]} vs {verdicts[1]}",
            {"set": verdicts[0], "algebra": verdicts[1]},
        )


def _check_strict_covrep(instance: RestrictedInstance, report: FuzzReport, settings: Settings) -> None:
    """Calculus, pair semigroup and, for small spaces, the main theorem."""
    covrep = instance.covrep
    cert = validate_covrep_partial(covrep.action, covrep.rep, covrep.family, STRICT, settings.tol)
    for name, residual in cert.residuals.items():
        report.record(name, residual)
    calculus = check_product_calculus(covrep, 3, settings.tol)
    for name, residual in calculus.residuals.items():
        report.record(name, residual)
    if not calculus.passed:
        first = calculus.violations[0]
        raise _CALCULUS_ERRORS[first["law"]](f"{first['law']} fails for word {first['word']}", calculus.to_dict())
    if covrep.rep.dim <= 8:
        theorem = verify_main_theorem(covrep, amplifications=(1,), tol=settings.tol, bound=settings.closure_bound)
        report.record("span_u_v", theorem.certificate.residuals.get("span_u_v", 0.0))
    else:
        pair_semigroup_action(covrep, settings.closure_bound, settings.tol)


@lru_cache(maxsize=8)
def _shift_pair_for(tol: float, closure_bound: int) -> PairSemigroupResult:
    return pair_semigroup_action(shift_example(), closure_bound, tol)


def _shift_pair() -> PairSemigroupResult:
    settings = current_settings()
    return _shift_pair_for(settings.tol, settings.closure_bound)


def _build_triple(seed: int) -> Tuple[LElement, LElement, LElement]:
    pair = _shift_pair()
    rng = np.random.default_rng(seed)
    return tuple(random_l_element(pair.action, rng) for _ in range(3))


def _check_triple(triple: Tuple[LElement, LElement, LElement], report: FuzzReport, settings: Settings) -> None:
    """Banach *-algebra laws of L over the shift example's pair action."""
    for law, residual in l_algebra_residuals(*triple, _shift_pair().covrep).items():
        report.record(law, residual)
        limit = NORM_ROUNDING if law in _NORM_LAWS else settings.tol
        if residual > limit:
            raise _L_LAW_ERRORS.get(law, ExpectationFailed)(f"{law} residual {residual:.3e}", {"law": law, "residual": residual})


def _check_semilattice(instance: Tuple[SemigroupAction, HilbertRep], report: FuzzReport, settings: Settings) -> None:
    theorem = verify_semilattice_crossed_product(*instance, settings.tol)
    report.record("span_equality", theorem.certificate.residuals.get("span_equality", 0.0))


FUZZ_FAMILIES: Dict[str, FuzzFamily] = {
    "partial-action": FuzzFamily(
        build=lambda seed: random_restricted_instance(seed, block_size=1, multiplicity=1),
        check=_check_commutative_model,
        dump=lambda instance: instance.to_dict(),
    ),
    "covariant": FuzzFamily(
        build=random_restricted_instance,
        check=_check_strict_covrep,
        dump=lambda instance: {**instance.to_dict(), "multiplicity": list(instance.covrep.rep.multiplicity)},
    ),
    "l-algebra": FuzzFamily(
        build=_build_triple,
        check=_check_triple,
        dump=lambda triple: {name: x.to_dict() for name, x in zip("xyz", triple)},
    ),
    "semilattice": FuzzFamily(
        build=random_semilattice_action,
        check=_check_semilattice,
        dump=lambda instance: {"action": instance[0].to_dict(), "multiplicity": list(instance[1].multiplicity)},
    ),
}

# Names of the families by the part of the theory they exercise
FUZZ_ALIASES: Dict[str, str] = {"section2": "partial-action", "section3": "covariant"}


def fuzz_suite(options: FuzzOptions) -> FuzzReport:
    """Run ``options.count`` seeded random instances of one family.

    Each violation is recorded with its instance seed, spawn key, the error
    certificate and an instance dump, so it can be replayed alone.
    """
    started = time.perf_counter()
    settings = override_settings(tol=options.tol, seed=options.seed)
    report = FuzzReport(family=options.family, count=options.count, seed=options.seed)
    family = FUZZ_FAMILIES[FUZZ_ALIASES.get(options.family, options.family)]
    with activate_settings(settings):
        for child in np.random.SeedSequence(options.seed).spawn(options.count):
            seed = int(child.generate_state(1)[0])
            instance = None
            try:
                instance = family.build(seed)
                family.check(instance, report, settings)
            except AlgebraError as exc:
                violation = {"seed": seed, "spawn_key": list(child.spawn_key), "error": plain(exc.to_dict())}
                if instance is not None:
                    violation["instance"] = plain(family.dump(instance))
                report.violations.append(violation)
                logger.warning(f"Fuzz {options.family} seed {seed}: {exc.kind}: {exc}")
            report.instances += 1
    if report.violations:
        report.notes.append(f"{len(report.violations)} violations; replay with the listed seeds")
    report.wall_time = time.perf_counter() - started
    logger.info(f"Fuzz {options.family}: {report.instances} instances, {len(report.violations)} violations")
    ReportService().write_all(report, options.report, options.machine_report)
    return report
