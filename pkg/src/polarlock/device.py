"""Chip model: thermo-optic phase shifters, the four-stage retarder cascade,
the grating-coupler polarization splitter with a finite static extinction
ratio, insertion losses, and noisy detectors.

The electrical model of one heater is P = V^2 / R and theta = c P +
theta_bias, i.e. the phase is linear in dissipated power and quadratic in
drive voltage.  Linearizing the composition gives the voltage increment that
realizes a small phase increment at operating point V:

    dV = R dtheta / (2 c V)

which shrinks as V grows; its value at V_max is the safest (smallest)
quantization step for a drive updated in fixed voltage ticks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .jones import JonesMatrix, JonesVector, make_m0, make_m45

#: default full controllable span of one heater, radians
PHASE_SPAN = 3.0 * math.pi

# first-order step response: a 10-90% transition time t maps to the
# exponential time constant t / ln 9
_LN9 = math.log(9.0)


@dataclass(frozen=True, slots=True)
class TpsParams:
    """Electrical and dynamic constants of one thermal phase shifter.

    Defaults are the measured values of the fabricated heater: 1.97 kOhm
    resistance, 164.85 rad/W phase-per-power slope with a 0.93 rad zero-power
    offset, a 0-10 V drive producing roughly a 3*pi span, and 11 us / 5.9 us
    10-90% rise and fall times.
    """

    resistance: float = 1970.0      # ohm
    c_slope: float = 164.85         # rad per watt
    theta_bias: float = 0.93        # rad at zero power
    v_max: float = 10.0             # volt
    phase_max: float = PHASE_SPAN   # rad
    tau_rise: float = 11e-6         # s, 10-90% rise time
    tau_fall: float = 5.9e-6        # s, 10-90% fall time

    def __post_init__(self):
        if self.resistance <= 0:
            raise ValueError("resistance must be > 0")
        if self.c_slope <= 0:
            raise ValueError("c_slope must be > 0")
        if not 0.0 <= self.theta_bias < 2.0 * math.pi:
            raise ValueError("theta_bias must lie in [0, 2*pi)")
        if self.v_max <= 0:
            raise ValueError("v_max must be > 0")
        if self.phase_max <= 0:
            raise ValueError("phase_max must be > 0")
        if self.tau_rise <= 0 or self.tau_fall <= 0:
            raise ValueError("rise/fall times must be > 0")


@dataclass(frozen=True, slots=True)
class PhaseQuad:
    """The four controllable stage phases, the annealer's search point."""

    theta1: float
    theta2: float
    theta3: float
    theta4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.theta1, self.theta2, self.theta3, self.theta4)

    @classmethod
    def uniform(cls, theta: float) -> "PhaseQuad":
        return cls(theta, theta, theta, theta)


@dataclass(frozen=True, slots=True)
class DeviceParams:
    """Full simulated-device parameter block.

    ``static_er_db`` is the hardware extinction-ratio ceiling of the
    polarization splitter (None disables the floor entirely);
    ``noise_sigma`` lumps detector electronics and source power fluctuation
    into one additive Gaussian deviation per reading.  The loss budget (dB
    per grating coupler plus on-chip transmission loss) only enters the
    optional absolute-power reporting mode; the control loop always sees
    intensities normalized to unit input.
    """

    tps: TpsParams = TpsParams()
    static_er_db: float | None = 28.0
    noise_sigma: float = 5e-4
    coupling_loss_db: float = 7.0
    on_chip_loss_db: float = 3.0
    detector_saturation: float | None = None

    def __post_init__(self):
        if self.static_er_db is not None and self.static_er_db <= 0:
            raise ValueError("static_er_db must be > 0 (or None to disable)")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.coupling_loss_db < 0 or self.on_chip_loss_db < 0:
            raise ValueError("losses must be >= 0")
        if self.detector_saturation is not None and self.detector_saturation <= 0:
            raise ValueError("detector_saturation must be > 0 (or None)")

    @classmethod
    def ideal(cls, tps: TpsParams = TpsParams()) -> "DeviceParams":
        """Noise-free device with no extinction-ratio floor."""
        return cls(tps=tps, static_er_db=None, noise_sigma=0.0)

    @property
    def insertion_loss_db(self) -> float:
        """Fiber-to-fiber loss: two grating couplers plus on-chip loss."""
        return 2.0 * self.coupling_loss_db + self.on_chip_loss_db


@dataclass(frozen=True, slots=True)
class DetectorSample:
    """One pair of detector readings: i_px on the maximized port, i_py on
    the minimized port."""

    i_px: float
    i_py: float


def voltage_to_power(v: float, tps: TpsParams) -> float:
    """Heater power V^2 / R in watts; ``v`` must lie in [0, v_max]."""
    if not 0.0 <= v <= tps.v_max:
        raise ValueError(f"voltage {v} outside drive range [0, {tps.v_max}]")
    return v * v / tps.resistance


def power_to_phase(p: float, tps: TpsParams) -> float:
    """Linear heater calibration theta = c P + theta_bias (radians)."""
    if p < 0.0:
        raise ValueError(f"power must be >= 0, got {p}")
    return tps.c_slope * p + tps.theta_bias


def voltage_to_phase(v: float, tps: TpsParams) -> float:
    """Composition of the two calibrations above."""
    return power_to_phase(voltage_to_power(v, tps), tps)


def phase_to_voltage(theta: float, tps: TpsParams) -> float:
    """Best-effort inverse of ``voltage_to_phase``, clamped to the drive
    range (phases below theta_bias map to 0 V)."""
    if theta <= tps.theta_bias:
        return 0.0
    v = math.sqrt(tps.resistance * (theta - tps.theta_bias) / tps.c_slope)
    return min(v, tps.v_max)


def phase_step_to_voltage_step(dtheta: float, v: float, tps: TpsParams) -> float:
    """Voltage increment realizing phase increment ``dtheta`` at operating
    point ``v``: R dtheta / (2 c V).  Singular at v = 0 (use the minimum
    operating voltage instead)."""
    if v <= 0.0:
        raise ValueError("voltage step is singular at v = 0; "
                         "evaluate at the minimum operating voltage")
    return tps.resistance * dtheta / (2.0 * tps.c_slope * v)


def dpc_transform(phases: PhaseQuad) -> JonesMatrix:
    """Transfer matrix of the four-stage cascade.

    Stage order seen by the light is 0deg, 45deg, 0deg, 45deg, so the
    product is M45(t4) @ M0(t3) @ M45(t2) @ M0(t1).
    """
    return (make_m45(phases.theta4) @ make_m0(phases.theta3)
            @ make_m45(phases.theta2) @ make_m0(phases.theta1))


def measure(input_sop: JonesVector, phases: PhaseQuad, params: DeviceParams,
            rng, absolute: bool = False) -> DetectorSample:
    """Simulate one detector reading pair for a given input SOP and phase
    setting.

    The ideal port powers come from the cascade transform; the minimized
    port is then floored at i_px * 10^(-static_er_db/10) (finite splitter
    extinction), independent Gaussian noise of deviation ``noise_sigma`` is
    added per detector, and the readings are clamped at zero and, if
    configured, at ``detector_saturation``.  With ``absolute=True`` both
    ideal powers are scaled by the insertion loss before noise is applied.
    Deterministic per ``rng`` state.
    """
    out = dpc_transform(phases) @ input_sop
    e_x, e_y = out.ex, out.ey
    i_px = e_x.real * e_x.real + e_x.imag * e_x.imag
    i_py = e_y.real * e_y.real + e_y.imag * e_y.imag

    if params.static_er_db is not None:
        i_py = max(i_py, i_px * 10.0 ** (-params.static_er_db / 10.0))

    if absolute:
        scale = 10.0 ** (-params.insertion_loss_db / 10.0)
        i_px *= scale
        i_py *= scale

    if params.noise_sigma > 0.0:
        eta = rng.normal(0.0, params.noise_sigma, size=2)
        i_px += eta[0]
        i_py += eta[1]

    if i_px < 0.0:
        i_px = 0.0
    if i_py < 0.0:
        i_py = 0.0
    sat = params.detector_saturation
    if sat is not None:
        i_px = min(i_px, sat)
        i_py = min(i_py, sat)
    return DetectorSample(i_px, i_py)


def thermal_step_response(v_from: float, v_to: float, t: float,
                          tps: TpsParams) -> float:
    """Phase at time ``t`` after stepping the drive from ``v_from`` to
    ``v_to`` at t = 0.

    First-order settling between the two steady-state phases; the
    exponential time constant is the 10-90% transition time divided by
    ln 9, with the rise constant used when the phase increases and the fall
    constant when it decreases.
    """
    if t < 0.0:
        raise ValueError("time must be >= 0")
    phi0 = voltage_to_phase(v_from, tps)
    phi1 = voltage_to_phase(v_to, tps)
    t1090 = tps.tau_rise if phi1 >= phi0 else tps.tau_fall
    tau = t1090 / _LN9
    return phi1 + (phi0 - phi1) * math.exp(-t / tau)
