"""
Command-line front end: time sweeps of the closed-form observables.

Example::

    nlcascade --preset gp --tau-max 50 --tau-steps 2001 --out gp.csv --verify
"""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .coherent_state import FieldParams, coefficients
from .dynamics import CouplingParams
from .errors import ConvergenceError, DomainError, InvalidSpec, UnknownPreset
from .nonlinearity import Kind, NonlinearitySpec
from .observables import ObservableSample, sample_grid
from .presets import PRESETS, RunConfig, get_preset

log = logging.getLogger("nlcascade")

COLUMNS = ("tau", "mean_n", "s_z", "mandel_q", "s1", "s2", "norm_residual")
DEV_COLUMNS = tuple(f"dev_{c}" for c in COLUMNS[1:6])
VERIFY_POINTS = 16
VERIFY_TOL = 1e-6

EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, EXIT_VERIFY = 0, 1, 2, 3


@dataclass
class ScanResult:
    samples: list[ObservableSample]
    n_max: int
    tail_bound: float
    # grid row -> |closed form - oracle| for mean_n, s_z, mandel_q, s1, s2
    deviations: dict[int, tuple[float, ...]] = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        if not self.deviations:
            return 0.0
        # nan (one side undefined) propagates and fails verification
        return float(np.max(np.array(list(self.deviations.values()))))

    @property
    def verified(self) -> bool:
        return bool(self.max_deviation <= VERIFY_TOL)


def tau_grid(config: RunConfig) -> np.ndarray:
    return np.linspace(0.0, config.tau_max, int(config.tau_steps))


def _deviation(a: ObservableSample, b: ObservableSample) -> tuple[float, ...]:
    out = []
    for name in COLUMNS[1:6]:
        x, y = getattr(a, name), getattr(b, name)
        if math.isnan(x) and math.isnan(y):
            out.append(0.0)
        else:
            out.append(abs(x - y))  # nan on one side only propagates as nan
    return tuple(out)


def run_scan(config: RunConfig, workers: int | None = None, chunk: int = 256) -> ScanResult:
    """
    Evaluate all observables on the uniform grid ``0..tau_max``.

    Grid chunks are evaluated concurrently; rows are returned in grid order.
    With ``config.verify`` the oracle is run at 16 evenly spaced grid rows.
    """
    coeffs = coefficients(config.field, config.eps)
    taus = tau_grid(config)
    blocks = [taus[i:i + chunk] for i in range(0, len(taus), chunk)]

    def work(block):
        return sample_grid(coeffs, config.coupling, config.phi, block, chunk=chunk)

    if workers is not None and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    samples = [s for part in parts for s in part]

    result = ScanResult(samples, coeffs.n_max, coeffs.tail_bound)
    if config.verify:
        rows = np.unique(np.round(np.linspace(0, len(taus) - 1, VERIFY_POINTS)).astype(int))
        for row in rows:
            state = oracle.integrate(coeffs, config.coupling, float(taus[row]))
            ref = oracle.observables_from_state(state)
            result.deviations[int(row)] = _deviation(samples[row], ref)
    return result


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else repr(float(x))


def write_csv(result: ScanResult, stream, verify: bool = False) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    header = list(COLUMNS) + (list(DEV_COLUMNS) if verify else [])
    writer.writerow(header)
    for i, s in enumerate(result.samples):
        row = [_fmt(v) for v in s.as_row()]
        if verify:
            dev = result.deviations.get(i)
            row += [_fmt(d) for d in dev] if dev else [""] * len(DEV_COLUMNS)
        writer.writerow(row)


def _parse_spec(text: str, kappa: float | None, fallback: NonlinearitySpec) -> NonlinearitySpec:
    if text.startswith("table:"):
        return NonlinearitySpec.from_file(text[len("table:"):])
    if text == "unit":
        return NonlinearitySpec.unit()
    if text in ("gp", "bg"):
        kind = Kind(text)
        if kappa is None:
            kappa = fallback.kappa if fallback.kind is kind else 0.5
        if kind is Kind.GILMORE_PERELOMOV:
            return NonlinearitySpec.gilmore_perelomov(kappa)
        return NonlinearitySpec.barut_girardello(kappa)
    raise InvalidSpec(f"nonlinearity must be unit, gp, bg or table:PATH, got {text!r}")


def _rekappa(spec: NonlinearitySpec, kappa: float | None) -> NonlinearitySpec:
    if kappa is None:
        return spec
    if spec.kind is Kind.GILMORE_PERELOMOV:
        return NonlinearitySpec.gilmore_perelomov(kappa)
    if spec.kind is Kind.BARUT_GIRARDELLO:
        return NonlinearitySpec.barut_girardello(kappa)
    raise InvalidSpec(f"kappa given for a {spec.kind.value} nonlinearity")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nlcascade",
        description="Three-level cascade atom in a cavity prepared in a nonlinear "
                    "coherent state: time sweep of <n>, <S_z>, Mandel Q and squeezing.",
    )
    p.add_argument("--preset", default="canonical", help="base parameter set (default: canonical)")
    p.add_argument("--list-presets", action="store_true", help="print presets and exit")
    p.add_argument("--f", dest="f", metavar="{unit,gp,bg,table:PATH}",
                   help="nonlinearity of the initial field state")
    p.add_argument("--g", dest="g", metavar="{unit,gp,bg,table:PATH}",
                   help="intensity-dependent coupling function")
    p.add_argument("--kappa-f", type=float)
    p.add_argument("--kappa-g", type=float)
    p.add_argument("--alpha-mag", type=float)
    p.add_argument("--alpha-phase", type=float)
    p.add_argument("--beta", type=float, help="ratio lambda_2 / lambda_1")
    p.add_argument("--phi", type=float, help="phase used in S1/S2 (default: alpha phase)")
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-steps", type=int)
    p.add_argument("--eps", type=float, help="Fock tail tolerance (default 1e-12)")
    p.add_argument("--verify", action="store_true",
                   help="cross-check 16 grid points against the brute-force oracle")
    p.add_argument("--workers", type=int, default=None, help="threads over the tau grid")
    p.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    return p


def config_from_args(args) -> RunConfig:
    preset = get_preset(args.preset)
    base = preset.config

    f_spec = base.field.f_spec
    if args.f is not None:
        f_spec = _parse_spec(args.f, args.kappa_f, f_spec)
    else:
        f_spec = _rekappa(f_spec, args.kappa_f)
    g_spec = base.coupling.g_spec
    if args.g is not None:
        g_spec = _parse_spec(args.g, args.kappa_g, g_spec)
    else:
        g_spec = _rekappa(g_spec, args.kappa_g)

    alpha_phase, phi = args.alpha_phase, args.phi
    if alpha_phase is None and phi is not None:
        alpha_phase = phi
    if alpha_phase is None:
        alpha_phase = base.field.alpha_phase
    if phi is None:
        phi = alpha_phase
    elif phi != alpha_phase:
        log.warning("--phi differs from --alpha-phase; S1/S2 then refer to rotated quadratures")

    overridden = {
        "alpha_mag": args.alpha_mag is not None,
        "alpha_phase": args.alpha_phase is not None or args.phi is not None,
        "beta": args.beta is not None,
        "kappa_g": args.g is not None or args.kappa_g is not None,
    }
    for key, note in preset.assumptions.items():
        if not overridden.get(key, False):
            log.warning("preset %s: %s (override with --%s)", preset.name, note,
                        key.replace("_", "-"))

    return RunConfig(
        field=FieldParams(
            args.alpha_mag if args.alpha_mag is not None else base.field.alpha_mag,
            alpha_phase,
            f_spec,
        ),
        coupling=CouplingParams(g_spec, args.beta if args.beta is not None else base.coupling.beta),
        phi=phi,
        tau_max=args.tau_max if args.tau_max is not None else base.tau_max,
        tau_steps=args.tau_steps if args.tau_steps is not None else base.tau_steps,
        eps=args.eps if args.eps is not None else base.eps,
        verify=args.verify,
        output_path=args.out,
    )


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr,
                        level=logging.INFO)
    args = build_parser().parse_args(argv)
    if args.list_presets:
        for name, p in PRESETS.items():
            print(f"{name:16s} {p.figure_note}")
        return EXIT_OK

    try:
        config = config_from_args(args)
        result = run_scan(config, workers=args.workers)
    except (InvalidSpec, DomainError, UnknownPreset, ConvergenceError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return EXIT_RUNTIME

    log.info("N_max = %d, tail bound = %.3g", result.n_max, result.tail_bound)
    try:
        if config.output_path == "-":
            write_csv(result, sys.stdout, config.verify)
        else:
            with open(config.output_path, "w", newline="", encoding="utf-8") as fh:
                write_csv(result, fh, config.verify)
    except OSError as exc:
        log.error("cannot write %s: %s", config.output_path, exc)
        return EXIT_RUNTIME

    if config.verify:
        worst = result.max_deviation
        if not result.verified:
            log.error("oracle verification failed: max deviation %.3e > %.0e", worst, VERIFY_TOL)
            return EXIT_VERIFY
        log.info("oracle verification passed: max deviation %.3e", worst)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
