"""Report assembly: library results in, pydantic report models out."""

from __future__ import annotations

import random
from pathlib import Path
from typing import Any, Callable

import yaml
from pydantic import ValidationError
from sympy import eye

from motives.shared.biext import (
    canonical_nat_structure,
    deligne_pairing,
    expected_connection_form,
    is_perfect,
    pairing_adjointness,
    poincare,
    psi_inverse,
    psi_point,
    solution_dimension,
    solve_nat_structure,
    tautological_pairing_check,
    vector_part_restriction,
    verify_biextension_adjointness,
    weight_block_check,
)
from motives.shared.config import RuntimeConfig
from motives.shared.contracts import (
    CheckResult,
    DescribeReport,
    ExtGroupsReport,
    JunctionModel,
    MotiveDocument,
    MotiveSpec,
    MotiveVerification,
    PairingReport,
    PresentationModel,
    SequenceModel,
    WindowSpec,
)
from motives.shared.errors import DocumentError, DomainError, MotiveError
from motives.shared.extgroups import (
    ApproximationWindow,
    ExactSequenceReport,
    ext_gm,
    ext_maps_onto,
    hom_nabla,
    hom_to_gm,
    nat_ext_group,
    verify_cor_intersection,
    verify_corollary_sequence,
    verify_ext_sequence,
    verify_prop_extnatex,
    window_for,
)
from motives.shared.hashing import sha256_canonical
from motives.shared.logging_utils import log_event
from motives.shared.motive import ToricOneMotive, cartier_dual, dual_morphism, is_valid, weight_data
from motives.shared.ratmult import FACTOR_BOUND_BITS, factorize
from motives.shared.sampling import random_point
from motives.shared.universal import de_rham, is_universal, lie_dimension_check, universal_extension
from motives.shared.zlinalg import GroupPresentation


def _check_factorable(path: Path, field: str, spec: MotiveSpec, bound_bits: int) -> None:
    for k, row in enumerate(spec.u):
        for i, entry in enumerate(row):
            try:
                factorize(entry, bound_bits)
            except DomainError as exc:
                raise DocumentError(str(exc), location=f"{path}:{field}.{k}.{i}") from exc


def load_document(path: Path, bound_bits: int = FACTOR_BOUND_BITS) -> MotiveDocument:
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(str(exc), location=str(path)) from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        location = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark is not None else str(path)
        raise DocumentError(f"invalid YAML ({getattr(exc, 'problem', exc)})", location=location) from exc
    if not isinstance(raw, dict):
        raise DocumentError("document must be a mapping", location=str(path))
    try:
        document = MotiveDocument.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise DocumentError(first["msg"], location=f"{path}:{field}") from exc
    _check_factorable(path, "u", document, bound_bits)
    for j, block in enumerate(document.morphisms):
        _check_factorable(path, f"morphisms.{j}.target.u", block.target, bound_bits)
    return document.with_bound_bits(bound_bits)


def document_hash(document: MotiveDocument) -> str:
    return sha256_canonical(document.model_dump(mode="json"))


def resolve_window(
    document: MotiveDocument,
    motive: ToricOneMotive,
    config: RuntimeConfig,
    primes: tuple[int, ...] | None = None,
    denominator_bound: int | None = None,
) -> ApproximationWindow:
    extras = primes if primes is not None else tuple(document.window.primes) if document.window else config.extra_primes
    bound = denominator_bound or (document.window.denominator_bound if document.window else config.denominator_bound)
    window = window_for(motive, extras, bound)
    if document.window is not None and not set(motive.primes) <= set(document.window.primes):
        log_event(
            "warning",
            "window_extended",
            motive=motive.label(),
            window=window.describe(),
            requested=document.window.primes,
        )
    return window


def window_spec(window: ApproximationWindow) -> WindowSpec:
    return WindowSpec(primes=list(window.primes), denominator_bound=window.denominator_bound)


def presentation_model(group: GroupPresentation) -> PresentationModel:
    return PresentationModel(
        generators=list(group.labels) or [f"g{i}" for i in range(group.n_gens)],
        relations=[list(column) for column in group.relations.columns()],
        invariant_factors=list(group.invariant_factors),
        free_rank=group.free_rank,
        description=group.describe(),
    )


def sequence_model(report: ExactSequenceReport) -> SequenceModel:
    return SequenceModel(
        name=report.name,
        objects=[{"label": label, "group": group} for label, group in report.objects],
        arrows=list(report.arrows),
        junctions=[
            JunctionModel(
                position=j.position,
                kind=j.kind,
                exact=j.exact,
                witness=list(j.witness) if j.witness is not None else None,
                detail=j.detail,
            )
            for j in report.junctions
        ],
        window=window_spec(report.window),
        notes=list(report.notes),
        all_exact=report.all_exact,
    )


def build_describe(document: MotiveDocument) -> DescribeReport:
    motive = document.motive()
    universal = universal_extension(motive)
    space = de_rham(motive)
    weights = weight_data(motive)
    return DescribeReport(
        command="describe",
        input_sha256=document_hash(document),
        name=document.name,
        motive=MotiveSpec.from_motive(motive),
        dual=MotiveSpec.from_motive(cartier_dual(motive)),
        universal_vector_part=[[str(universal.v[i, j]) for j in range(motive.r)] for i in range(motive.r)],
        universal_torus_part=[[str(q) for q in row] for row in universal.w],
        de_rham_dim=space.dim,
        de_rham_labels=list(space.labels),
        weight_minus2_rank=space.weight_minus2_rank,
        weights={"gr0": weights.gr0_rank, "gr-1": weights.gr_minus1_rank, "gr-2": weights.gr_minus2_rank},
        lie_dimension_check=lie_dimension_check(motive),
    )


def build_pairing(document: MotiveDocument) -> PairingReport:
    motive = document.motive()
    biext = poincare(motive)
    structure = canonical_nat_structure(biext)
    pairing = deligne_pairing(biext)
    determinant = pairing.determinant
    return PairingReport(
        command="pairing",
        input_sha256=document_hash(document),
        name=document.name,
        connection_form=structure.connection_form.render(),
        curvature=structure.curvature.render(),
        matrix=[[str(pairing.matrix[i, j]) for j in range(pairing.matrix.cols)] for i in range(pairing.matrix.rows)],
        row_labels=list(pairing.row_labels),
        col_labels=list(pairing.col_labels),
        determinant=None if determinant is None else str(determinant),
        perfect=is_perfect(pairing),
        unimodular=pairing.is_unimodular,
        weight_blocks=weight_block_check(motive),
        solution_dimension=solution_dimension(solve_nat_structure(biext)),
    )


def build_extgroups(document: MotiveDocument, window: ApproximationWindow) -> ExtGroupsReport:
    motive = document.motive()
    ext = ext_gm(motive, window)
    return ExtGroupsReport(
        command="extgroups",
        input_sha256=document_hash(document),
        name=document.name,
        window=window_spec(window),
        hom_to_gm=[list(column) for column in hom_to_gm(motive).columns()],
        hom_nabla=[list(column) for column in hom_nabla(motive).columns()],
        ext=presentation_model(ext.presentation),
        ext_free_outside=ext.free_outside,
        ext_nat=presentation_model(nat_ext_group(motive, window)),
    )


def _run_check(name: str, check: Callable[[], Any]) -> CheckResult:
    try:
        outcome = check()
    except MotiveError as exc:
        log_event("warning", "check_raised", check=name, error=str(exc))
        return CheckResult(check=name, passed=False, detail=f"{type(exc).__name__}: {exc}")
    if isinstance(outcome, tuple):
        passed, detail = outcome
        return CheckResult(check=name, passed=bool(passed), detail=str(detail))
    return CheckResult(check=name, passed=bool(outcome))


def _psi_round_trip(motive: ToricOneMotive, samples: int = 5) -> tuple[bool, str]:
    rng = random.Random(0)
    for _ in range(samples):
        a, t = random_point(rng, motive)
        g, fiber = psi_point(motive, a, t)
        if psi_inverse(motive, g, fiber) != (tuple(a), tuple(t)):
            return False, f"round trip failed at a={[str(x) for x in a]}"
    return True, f"{samples} points"


def _uniqueness(motive: ToricOneMotive, degree: int) -> tuple[bool, str]:
    dimension = solution_dimension(solve_nat_structure(poincare(motive), degree))
    return dimension == 0, f"degree {degree}: solution dimension {dimension}"


def verify_document(document: MotiveDocument, window: ApproximationWindow, config: RuntimeConfig) -> MotiveVerification:
    motive = document.motive()
    biext = poincare(motive)
    checks = [
        _run_check("cartier_involution", lambda: cartier_dual(cartier_dual(motive)) == motive),
        _run_check("nat_structure_unique", lambda: _uniqueness(motive, config.ansatz_degree)),
        _run_check(
            "connection_closed_form",
            lambda: canonical_nat_structure(biext).connection_form == expected_connection_form(biext),
        ),
        _run_check("pairing_perfect", lambda: is_perfect(deligne_pairing(biext))),
        _run_check("pairing_unimodular", lambda: deligne_pairing(biext).is_unimodular),
        _run_check("weight_blocks", lambda: weight_block_check(motive)),
        _run_check("tautological_pairing", lambda: tautological_pairing_check(motive.d) == eye(motive.d)),
        _run_check("vector_part_restriction", lambda: vector_part_restriction(motive)),
        _run_check("universal_criterion", lambda: is_universal(motive, eye(motive.r), motive.u)),
        _run_check("lie_dimension", lambda: lie_dimension_check(motive)),
        _run_check("hom_nabla_trivial", lambda: hom_nabla(motive).cols == 0),
        _run_check("intersection", lambda: verify_cor_intersection(motive)),
        _run_check("points_round_trip", lambda: _psi_round_trip(motive)),
        _run_check("ext_nat_onto_ext", lambda: ext_maps_onto(motive, window)),
    ]
    for block in document.morphisms:
        try:
            phi = block.to_morphism(motive, document.bound_bits)
        except MotiveError as exc:
            raise DocumentError(str(exc), location=f"morphisms.{block.name}") from exc
        checks.append(_run_check(f"morphism_valid[{block.name}]", lambda: is_valid(phi)))
        checks.append(_run_check(f"dual_morphism_valid[{block.name}]", lambda: is_valid(dual_morphism(phi))))
        checks.append(_run_check(f"pairing_adjoint[{block.name}]", lambda: pairing_adjointness(phi)))
        checks.append(_run_check(f"biextension_adjoint[{block.name}]", lambda: verify_biextension_adjointness(phi)))

    sequences = []
    for builder in (verify_prop_extnatex, verify_corollary_sequence, verify_ext_sequence):
        try:
            sequences.append(sequence_model(builder(motive, window)))
        except MotiveError as exc:
            checks.append(CheckResult(check=builder.__name__, passed=False, detail=f"{type(exc).__name__}: {exc}"))
    passed = all(c.passed for c in checks) and all(s.all_exact for s in sequences)
    return MotiveVerification(
        name=document.name,
        input_sha256=document_hash(document),
        checks=checks,
        sequences=sequences,
        passed=passed,
    )


def render_text(report: Any) -> str:
    """Human-readable rendering of any report model."""
    if isinstance(report, PairingReport):
        lines = [
            f"motive: {report.name}",
            f"connection: {report.connection_form}",
            f"curvature: {report.curvature}",
            f"pairing ({', '.join(report.row_labels)} x {', '.join(report.col_labels)}):",
            *("  [" + ", ".join(row) + "]" for row in report.matrix),
            f"det: {report.determinant}  perfect: {report.perfect}  unimodular: {report.unimodular}",
            f"weight blocks: {report.weight_blocks}",
        ]
        return "\n".join(lines)
    if isinstance(report, ExtGroupsReport):
        return "\n".join(
            [
                f"motive: {report.name}",
                f"window: S={report.window.primes} N={report.window.denominator_bound}",
                f"H(M) basis: {report.hom_to_gm}",
                f"H_nabla(M) basis: {report.hom_nabla}",
                f"Ext(M, Gm): {report.ext.description} (+ {report.ext_free_outside})",
                f"Ext_nat(M, Gm): {report.ext_nat.description}",
            ]
        )
    if isinstance(report, DescribeReport):
        return "\n".join(
            [
                f"motive: {report.name} (r={report.motive.r}, d={report.motive.d})",
                f"u: {report.motive.u}",
                f"dual: r={report.dual.r}, d={report.dual.d}, u={report.dual.u}",
                f"universal extension: V={report.universal_vector_part} W={report.universal_torus_part}",
                f"de Rham: dim {report.de_rham_dim} {report.de_rham_labels}, W-2 rank {report.weight_minus2_rank}",
                f"weights: {report.weights}",
            ]
        )
    lines = []
    for item in report.motives:
        lines.append(f"{item.name}: {'ok' if item.passed else 'FAILED'}")
        for check in item.checks:
            if not check.passed:
                lines.append(f"  check {check.check}: {check.detail or 'failed'}")
        for sequence in item.sequences:
            for junction in sequence.junctions:
                if not junction.exact:
                    lines.append(f"  {sequence.name} at {junction.position}: {junction.detail} {junction.witness}")
    lines.append("passed" if report.passed else "FAILED")
    return "\n".join(lines)
