import numpy as np
import pytest

from pneumahand.constants import R_AIR, T_AMBIENT, P_ATMOSPHERE
from pneumahand.pneumatics import (
    ATMOSPHERE,
    SUPPLY,
    ChamberState,
    PneumaticPlant,
    PressureSensorModel,
    ValveBank,
    assert_switch_rate,
    atmospheric_mass,
    chamber_pressure,
    read_pressure,
    step_plant,
    valve_mass_flow,
)


class TestChamberPressure:
    def test_empty_chamber_is_vacuum(self):
        assert chamber_pressure(0.0, 1e-5, 293.15) == 0.0

    def test_doubling_mass_doubles_pressure(self):
        p1 = chamber_pressure(1e-5, 2e-5, 300.0)
        p2 = chamber_pressure(2e-5, 2e-5, 300.0)
        assert p2 == pytest.approx(2.0 * p1, rel=1e-12)

    def test_atmospheric_mass_oracle(self):
        # hand evaluation of p = m R T / V with R_air = 287.05
        V, T = 1.0e-5, 293.15
        m = V * 101325.0 / (R_AIR * T)
        assert chamber_pressure(m, V, T) == pytest.approx(101325.0, rel=1e-12)

    @pytest.mark.parametrize("mass,volume,temp", [
        (1e-5, 0.0, 300.0), (1e-5, -1e-6, 300.0), (1e-5, 1e-5, 0.0), (-1e-9, 1e-5, 300.0),
    ])
    def test_domain_errors(self, mass, volume, temp):
        with pytest.raises(ValueError):
            chamber_pressure(mass, volume, temp)

    def test_state_pressure_consistent_with_gas_law(self):
        s = ChamberState(mass=2.4e-5, volume=2.0e-5)
        assert s.pressure == pytest.approx(
            chamber_pressure(s.mass, s.volume, s.temperature), rel=1e-12)


class TestValveMassFlow:
    def test_no_gradient_no_flow(self):
        assert valve_mass_flow(2e5, 2e5, 1e-8) == 0.0

    def test_direct_product(self):
        assert valve_mass_flow(2e5, 1e5, 1e-8) == pytest.approx(1e-3, rel=1e-12)

    def test_odd_symmetry(self):
        forward = valve_mass_flow(3e5, 1e5, 2e-9)
        backward = valve_mass_flow(1e5, 3e5, 2e-9)
        assert backward == -forward

    def test_rejects_nonpositive_coefficient(self):
        with pytest.raises(ValueError):
            valve_mass_flow(2e5, 1e5, 0.0)


def _bank(n=2, open_inflate=None, open_vent=None):
    bank = ValveBank(n)
    if open_inflate is not None:
        bank.inflate_open[:] = open_inflate
    if open_vent is not None:
        bank.vent_open[:] = open_vent
    return bank


class TestStepPlant:
    def test_closed_valves_mass_bit_exact(self):
        chambers = (ChamberState(2.4e-5, 2e-5), ChamberState(1.1e-5, 1e-5))
        out = step_plant(chambers, _bank(), [2e-5, 1e-5], 1e-3, 5e-10, 5e-10)
        assert out[0].mass == chambers[0].mass
        assert out[1].mass == chambers[1].mass

    def test_inflating_raises_mass(self):
        chambers = (ChamberState(2.4e-5, 2e-5),)
        bank = _bank(1, open_inflate=[True])
        out = step_plant(chambers, bank, [2e-5], 1e-3, 5e-10, 5e-10)
        assert out[0].mass > chambers[0].mass

    def test_dt_must_be_positive(self):
        with pytest.raises(ValueError):
            step_plant((ChamberState(1e-5, 1e-5),), _bank(1), [1e-5], 0.0, 5e-10, 5e-10)

    def test_vent_converges_to_atmosphere(self):
        # closed form: m(t) = m_atm + (m0 - m_atm) exp(-t k R T / V)
        V, k = 2.0e-5, 5.0e-10
        m_atm = atmospheric_mass(V)
        plant = PneumaticPlant([V], k, k, initial_mass=[2.0 * m_atm])
        plant.bank.vent_open[:] = True
        tau = V / (k * R_AIR * T_AMBIENT)
        horizon = 8.0 * tau
        steps = int(horizon / 1e-3)
        for _ in range(steps):
            plant.step(1e-3)
        assert plant.pressures[0] == pytest.approx(P_ATMOSPHERE, rel=1e-3)
        expected = m_atm + (2.0 * m_atm - m_atm) * np.exp(-horizon / tau)
        assert plant.mass[0] == pytest.approx(expected, rel=1e-2)

    def test_compliance_contract_volume_change_keeps_mass(self):
        V = 2.0e-5
        plant = PneumaticPlant([V], 5e-10, 5e-10)
        m0 = plant.mass.copy()
        p0 = plant.pressures.copy()
        plant.set_volumes([0.5 * V])
        plant.step(1e-3)  # valves closed
        assert plant.mass[0] == m0[0]
        assert plant.pressures[0] == pytest.approx(2.0 * p0[0], rel=1e-12)

    def test_mass_never_negative(self):
        plant = PneumaticPlant([1e-6], 1e-7, 1e-7)  # aggressive venting
        plant.bank.vent_open[:] = True
        for _ in range(200):
            plant.step(1e-3)
            assert plant.mass[0] >= 0.0


class TestPressureSensor:
    def test_noiseless_sensor_exact(self):
        sensor = PressureSensorModel(accuracy_fraction=0.0)
        assert read_pressure(123456.0, sensor, tick=7) == 123456.0

    def test_determinism_same_seed_tick(self):
        sensor = PressureSensorModel(noise_seed=99)
        a = read_pressure(2e5, sensor, tick=1234, channel=3)
        b = read_pressure(2e5, sensor, tick=1234, channel=3)
        assert a == b

    def test_channels_and_ticks_decorrelate(self):
        sensor = PressureSensorModel(noise_seed=99)
        a = read_pressure(2e5, sensor, tick=1, channel=0)
        b = read_pressure(2e5, sensor, tick=1, channel=1)
        c = read_pressure(2e5, sensor, tick=2, channel=0)
        assert a != b and a != c

    def test_three_sigma_bound_monte_carlo(self):
        # 1e5 samples: |error| <= 3 sigma = 3500 Pa in at least 99.5%
        sensor = PressureSensorModel()  # 250 kPa, 1.4%
        ticks = np.arange(100_000)
        readings = read_pressure(np.zeros(ticks.size), sensor, ticks,
                                 np.zeros(ticks.size, dtype=int))
        within = np.abs(readings) <= 3500.0
        assert within.mean() >= 0.995
        assert abs(np.mean(readings)) < 50.0  # zero-mean

    def test_sigma_is_third_of_accuracy_band(self):
        sensor = PressureSensorModel(full_scale=250e3, accuracy_fraction=0.014)
        assert sensor.sigma == pytest.approx(0.014 * 250e3 / 3.0)


class TestValveBank:
    def test_rate_limit_defers_fast_toggle(self):
        bank = ValveBank(1, max_switch_rate=300.0)
        bank.command([True], [False], now=0.0)
        assert bank.inflate_open[0]
        # 1 ms later: toggling off must be deferred
        bank.command([False], [False], now=1e-3)
        assert bank.inflate_open[0]
        # after the full interval it applies
        bank.command([False], [False], now=1.0 / 300.0)
        assert not bank.inflate_open[0]

    def test_switching_exactly_at_rate_is_legal(self):
        bank = ValveBank(1, max_switch_rate=300.0)
        dt = 1.0 / 300.0
        state = False
        for k in range(20):
            state = not state
            bank.command([state], [False], now=k * dt)
        assert_switch_rate(bank.switch_log, 300.0)

    def test_trace_assertion_catches_violation(self):
        log = [(0.0, 0, "inflate", True), (1e-3, 0, "inflate", False)]
        with pytest.raises(AssertionError):
            assert_switch_rate(log, 300.0)

    def test_both_valves_open_cross_flow_sums(self):
        V = 2e-5
        m_atm = atmospheric_mass(V)
        plant = PneumaticPlant([V], 5e-10, 5e-10, initial_mass=[m_atm])
        plant.bank.inflate_open[:] = True
        plant.bank.vent_open[:] = True
        p = plant.pressures[0]
        flow_in = 5e-10 * (SUPPLY.pressure - p)
        flow_out = 5e-10 * (ATMOSPHERE.pressure - p)
        plant.step(1e-3, substep=1e-3)
        assert plant.mass[0] == pytest.approx(m_atm + (flow_in + flow_out) * 1e-3, rel=1e-9)
