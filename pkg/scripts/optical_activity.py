"""
Command-line front door for the optical activity engine.

    python -m scripts.optical_activity classify --gamma 2 --mu1 0.1 --mu2 0.3
    python -m scripts.optical_activity transfer --gamma 2 --mu1 0.1 --mu2 0.3 --z 1 --n-steps 100000
    python -m scripts.optical_activity propagate --gamma 1 --mu1 0 --mu2 0 --z-max 3 --samples 7 --format csv
    python -m scripts.optical_activity sweep --gamma 1 --mu-from 0.9 --mu-to 1.1 --steps 21 --z 1
    python -m scripts.optical_activity littlegroup --kind massive --mass 1 --momentum 0.75 --theta 1

Reports go to stdout (JSON, or CSV where --format allows it); errors go to
stderr as JSON objects. Exit codes: 0 success, 2 invalid input, 1 numerical
failure.
"""
import argparse
import logging
import math
import sys
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional, TextIO

import numpy as np

from scripts.common.matrices import det2, frobenius_distance
from scripts.common.utils import (
    NumericalOverflowError,
    OpticalActivityError,
    OutputUtils,
    ValidationError,
    ValidationUtils,
    configure_logging,
)
from scripts.lorentz.little_group import (
    Lightlike,
    Massive,
    Spacelike,
    invariance_residual,
    little_group_element,
    reference_vector,
)
from scripts.optics.jones import jones_from_amp_phase, trajectory
from scripts.optics.medium import (
    MediumParams,
    classify,
    transfer_closed,
    transfer_first_order,
    transfer_naive,
    transfer_product,
)

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv')
KINDS = ('massive', 'spacelike', 'lightlike')

PROPAGATE_COLUMNS = [
    'z', 'ex_re', 'ex_im', 'ey_re', 'ey_im',
    'intensity_x', 'intensity_y', 'intensity_total', 'azimuth', 'ellipticity',
]
SWEEP_COLUMNS = ['mu', 'mu1', 'mu2', 'regime', 'm11', 'm12', 'm21', 'm22', 'det']
AXES = ('x', 'y', 'z', 't')
LITTLEGROUP_COLUMNS = (
    ['kind', 'param']
    + [f'ref_{axis}' for axis in AXES]
    + ['residual']
    + [f'l_{row}{col}' for row in AXES for col in AXES]
)


class JsonArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as a JSON object on stderr."""

    def error(self, message):
        OutputUtils.write_error('usage', f"{self.prog}: {message}")
        self.exit(2)


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str = 'json'
    gamma: Optional[float] = None
    mu1: Optional[float] = None
    mu2: Optional[float] = None
    z: Optional[float] = None
    n_steps: Optional[int] = None
    first_order: bool = False
    naive: bool = False
    z_max: Optional[float] = None
    samples: Optional[int] = None
    amplitude_x: float = 1.0
    amplitude_y: float = 0.0
    phase_x: float = 0.0
    phase_y: float = 0.0
    lam: float = 0.0
    mu_from: Optional[float] = None
    mu_to: Optional[float] = None
    steps: Optional[int] = None
    kind: Optional[str] = None
    mass: Optional[float] = None
    momentum: Optional[float] = None
    energy: Optional[float] = None
    theta: float = 0.0
    rapidity: float = 0.0
    gauge: float = 0.0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        values = vars(args)
        return cls(**{f.name: values[f.name] for f in fields(cls) if f.name in values})

    def medium(self) -> MediumParams:
        return MediumParams(gamma=self.gamma, mu1=self.mu1, mu2=self.mu2)

    def little_group_kind(self):
        if self.kind == 'massive':
            return Massive(mass=self._required('mass'), momentum=self._required('momentum'))
        if self.kind == 'spacelike':
            return Spacelike(momentum=self._required('momentum'), energy=self._required('energy'))
        return Lightlike(momentum=self._required('momentum'))

    def group_param(self) -> float:
        return {'massive': self.theta, 'spacelike': self.rapidity, 'lightlike': self.gauge}[self.kind]

    def _required(self, name: str) -> float:
        value = getattr(self, name)
        if value is None:
            raise ValidationError(f"--{name} is required for kind {self.kind}")
        return value

    def validate(self) -> None:
        """Check every physical parameter before any math runs."""
        numbers = {
            f.name: getattr(self, f.name) for f in fields(self)
            if isinstance(getattr(self, f.name), float)
        }
        ValidationUtils.require_finite(**numbers)

        if self.command in ('classify', 'transfer', 'propagate'):
            if self.medium().has_gain:
                logger.warning(f"Negative attenuation treated as gain: mu1={self.mu1}, mu2={self.mu2}")
        if self.command == 'transfer':
            ValidationUtils.require_non_negative(z=self.z)
            if self.n_steps is not None:
                ValidationUtils.require_count('n_steps', self.n_steps, 1)
        if self.command == 'propagate':
            ValidationUtils.require_positive(z_max=self.z_max)
            ValidationUtils.require_count('samples', self.samples, 2)
            ValidationUtils.require_non_negative(amplitude_x=self.amplitude_x, amplitude_y=self.amplitude_y)
        if self.command == 'sweep':
            ValidationUtils.require_non_negative(z=self.z)
            ValidationUtils.require_count('steps', self.steps, 2)
        if self.command == 'littlegroup':
            self.little_group_kind()


class OpticalActivityRunner:
    def __init__(self, config: RunConfig, stream: Optional[TextIO] = None):
        self.config = config
        self.stream = stream

    @property
    def out(self) -> TextIO:
        return sys.stdout if self.stream is None else self.stream

    def emit(self, report: Any, rows: Optional[List[Dict[str, Any]]] = None,
             columns: Optional[List[str]] = None) -> None:
        if self.config.fmt == 'csv' and rows is not None:
            OutputUtils.write_csv(rows, columns, self.out)
        else:
            OutputUtils.write_json(report, self.out)

    def cmd_classify(self) -> None:
        params = self.config.medium()
        regime = classify(params.gamma, params.mu)
        self.emit({
            'lambda': params.lam,
            'mu': params.mu,
            'regime': regime.name,
            'k': regime.k,
            'eta': regime.eta,
        })

    def cmd_transfer(self) -> None:
        cfg = self.config
        params = cfg.medium()
        result = transfer_closed(params, cfg.z)
        determinant = det2(result.matrix)
        ValidationUtils.require_finite_result('closed-form transfer matrix', [*result.matrix.ravel(), determinant])
        report = {
            'gamma': params.gamma,
            'mu1': params.mu1,
            'mu2': params.mu2,
            'z': cfg.z,
            'lambda': params.lam,
            'mu': params.mu,
            'regime': result.regime.name,
            'lambda_factor': result.lambda_factor,
            'determinant': determinant,
            'closed_form': OutputUtils.matrix_rows(result.matrix),
        }
        if cfg.n_steps is not None:
            product = transfer_product(params, cfg.z, cfg.n_steps)
            ValidationUtils.require_finite_result('slice product', product)
            report['n_steps'] = cfg.n_steps
            report['product'] = OutputUtils.matrix_rows(product)
            report['product_distance'] = frobenius_distance(product, result.matrix)
            if cfg.first_order:
                first_order = transfer_first_order(params, cfg.z, cfg.n_steps)
                ValidationUtils.require_finite_result('first-order product', first_order)
                report['first_order'] = OutputUtils.matrix_rows(first_order)
                report['first_order_distance'] = frobenius_distance(first_order, result.matrix)
        if cfg.naive:
            naive = transfer_naive(params, cfg.z)
            ValidationUtils.require_finite_result('naive transfer matrix', naive)
            report['naive'] = OutputUtils.matrix_rows(naive)
            report['naive_distance'] = frobenius_distance(naive, result.matrix)
        self.emit(report)

    def cmd_propagate(self) -> None:
        cfg = self.config
        initial = jones_from_amp_phase(cfg.amplitude_x, cfg.amplitude_y, cfg.phase_x, cfg.phase_y)
        rows = []
        for point in trajectory(cfg.medium(), initial, cfg.z_max, cfg.samples):
            rows.append({
                'z': point.z,
                'ex_re': point.state.ex.real,
                'ex_im': point.state.ex.imag,
                'ey_re': point.state.ey.real,
                'ey_im': point.state.ey.imag,
                'intensity_x': point.summary.intensity_x,
                'intensity_y': point.summary.intensity_y,
                'intensity_total': point.summary.intensity_total,
                'azimuth': point.summary.azimuth,
                'ellipticity': point.summary.ellipticity_angle,
            })
        ValidationUtils.require_finite_result('propagated field', [[row[c] for c in PROPAGATE_COLUMNS] for row in rows])
        self.emit(rows, rows, PROPAGATE_COLUMNS)

    def cmd_sweep(self) -> None:
        cfg = self.config
        rows = []
        for mu in np.linspace(cfg.mu_from, cfg.mu_to, cfg.steps):
            params = MediumParams.from_decomposed(cfg.gamma, cfg.lam, float(mu))
            result = transfer_closed(params, cfg.z)
            m = result.matrix
            rows.append({
                'mu': params.mu,
                'mu1': params.mu1,
                'mu2': params.mu2,
                'regime': result.regime.name,
                'm11': m[0, 0],
                'm12': m[0, 1],
                'm21': m[1, 0],
                'm22': m[1, 1],
                'det': det2(m),
            })
        non_finite = [row['mu'] for row in rows
                      if not all(math.isfinite(row[c]) for c in ('m11', 'm12', 'm21', 'm22', 'det'))]
        if non_finite:
            raise NumericalOverflowError(f"non-finite transfer matrix at mu={non_finite}")
        self.emit(rows, rows, SWEEP_COLUMNS)

    def cmd_littlegroup(self) -> None:
        cfg = self.config
        kind = cfg.little_group_kind()
        param = cfg.group_param()
        element = little_group_element(kind, param)
        ValidationUtils.require_finite_result('little-group element', element)
        reference = reference_vector(kind)
        residual = invariance_residual(element, reference)
        report = {
            'kind': kind.name,
            'param': param,
            'reference': list(reference),
            'matrix': OutputUtils.matrix_rows(element),
            'residual': residual,
        }
        row = {'kind': kind.name, 'param': param, 'residual': residual}
        row.update({f'ref_{axis}': value for axis, value in zip(AXES, reference)})
        row.update({
            f'l_{r}{c}': element[i, j]
            for i, r in enumerate(AXES) for j, c in enumerate(AXES)
        })
        self.emit(report, [row], LITTLEGROUP_COLUMNS)

    def run(self) -> None:
        self.config.validate()
        getattr(self, f'cmd_{self.config.command}')()


def _add_medium_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--gamma', type=float, required=True, help='Rotary power (rad per unit length)')
    parser.add_argument('--mu1', type=float, required=True, help='Attenuation coefficient along x')
    parser.add_argument('--mu2', type=float, required=True, help='Attenuation coefficient along y')


def build_parser() -> JsonArgumentParser:
    parser = JsonArgumentParser(
        prog='optical_activity',
        description='Optical activity with asymmetric attenuation, and its Lorentz-group counterpart',
    )
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Logging level on stderr')
    subparsers = parser.add_subparsers(dest='command', required=True)

    classify_parser = subparsers.add_parser('classify', help='Regime of the medium generator')
    _add_medium_arguments(classify_parser)

    transfer_parser = subparsers.add_parser('transfer', help='Macroscopic transfer matrix')
    _add_medium_arguments(transfer_parser)
    transfer_parser.add_argument('--z', type=float, required=True, help='Propagation length')
    transfer_parser.add_argument('--n-steps', type=int, default=None,
                                 help='Also report the product of this many thin slices')
    transfer_parser.add_argument('--first-order', action='store_true',
                                 help='With --n-steps, also report (I + Gz/N)^N')
    transfer_parser.add_argument('--naive', action='store_true',
                                 help='Also report the single macroscopic rotation-after-squeeze')

    propagate_parser = subparsers.add_parser('propagate', help='Polarization trajectory along z')
    _add_medium_arguments(propagate_parser)
    propagate_parser.add_argument('--z-max', type=float, required=True, help='Last sampled length')
    propagate_parser.add_argument('--samples', type=int, required=True, help='Number of samples (>= 2)')
    propagate_parser.add_argument('--amplitude-x', type=float, default=1.0, help='Initial amplitude A of E_x')
    propagate_parser.add_argument('--amplitude-y', type=float, default=0.0, help='Initial amplitude B of E_y')
    propagate_parser.add_argument('--phase-x', type=float, default=0.0, help='Initial phase of E_x (rad)')
    propagate_parser.add_argument('--phase-y', type=float, default=0.0, help='Initial phase of E_y (rad)')
    propagate_parser.add_argument('--format', dest='fmt', choices=FORMATS, default='csv')

    sweep_parser = subparsers.add_parser('sweep', help='Transfer matrices across a range of mu')
    sweep_parser.add_argument('--gamma', type=float, required=True, help='Rotary power (rad per unit length)')
    sweep_parser.add_argument('--lambda', dest='lam', type=float, default=0.0,
                              help='Isotropic attenuation (mu1 + mu2) / 2')
    sweep_parser.add_argument('--mu-from', type=float, required=True, help='First squeeze rate')
    sweep_parser.add_argument('--mu-to', type=float, required=True, help='Last squeeze rate')
    sweep_parser.add_argument('--steps', type=int, required=True, help='Number of mu values (>= 2)')
    sweep_parser.add_argument('--z', type=float, required=True, help='Propagation length')
    sweep_parser.add_argument('--format', dest='fmt', choices=FORMATS, default='csv')

    lg_parser = subparsers.add_parser('littlegroup', help="Wigner little-group element and its invariance")
    lg_parser.add_argument('--kind', choices=KINDS, required=True)
    lg_parser.add_argument('--mass', type=float, default=None)
    lg_parser.add_argument('--momentum', type=float, default=None)
    lg_parser.add_argument('--energy', type=float, default=None)
    lg_parser.add_argument('--theta', type=float, default=0.0, help='Rotation angle (massive)')
    lg_parser.add_argument('--rapidity', type=float, default=0.0, help='Boost parameter (spacelike)')
    lg_parser.add_argument('--gauge', type=float, default=0.0, help='Gauge parameter (lightlike)')
    lg_parser.add_argument('--format', dest='fmt', choices=FORMATS, default='json')

    return parser


def main(argv: Optional[List[str]] = None, stream: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        OpticalActivityRunner(RunConfig.from_args(args), stream).run()
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        OutputUtils.write_error('validation', str(e))
        return 2
    except (OpticalActivityError, ArithmeticError) as e:
        logger.error(f"Numerical failure: {e}")
        OutputUtils.write_error('numerical', str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
