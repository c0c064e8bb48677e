from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, optimize

from crnstab.config import SolverSettings
from crnstab.data_model.network import HistoryFunction
from crnstab.diagnostics import (
    ConservedFunctional,
    LyapunovSpec,
    conservation_report,
    dissipation_report,
    eval_c_a,
)
from crnstab.exceptions import PositivityLostError, StepLimitError
from crnstab.parser import parse_history, parse_network
from crnstab.simulation import Trajectory, aligned_step, simulate
from crnstab.simulation.batch import load_batch, run_batch
from crnstab.simulation.dde import fraction_gcd

F = Fraction


def limit_of_class(candidate, history) -> float:
    """e with (e, e) in the invariant class of `history` for the shrunk candidate."""
    target = eval_c_a(candidate, [1, 1], history)
    weight = sum(
        float(r.rate * r.delay) * float(sum(r.reactant.coefficients)) for r in candidate.reactions
    )
    return optimize.brentq(lambda e: 2 * e + weight * e**3 - target, 1e-6, 100.0, xtol=1e-15)


class TestAlignedStep:
    def test_fraction_gcd(self):
        assert fraction_gcd([F(1, 10), F(1)]) == F(1, 10)
        assert fraction_gcd([F(2), F(1, 2)]) == F(1, 2)
        assert fraction_gcd([F(1, 4), F(1, 6)]) == F(1, 12)

    @pytest.mark.parametrize(
        ("delays", "expected"),
        [([F(1, 10), F(1)], F(1, 1000)), ([F(2), F(1, 2)], F(1, 1000))],
    )
    def test_commensurate_delays(self, delays, expected):
        h, steps = aligned_step(delays, F(100), 1e-3)
        assert h == expected
        assert steps == 100_000

    def test_at_least_ten_steps_per_delay(self):
        h, steps = aligned_step([F(1, 3)], F(1), 0.1)
        assert h == F(1, 30)
        assert steps == 30

    def test_without_delays(self):
        h, steps = aligned_step([F(0), F(0)], F(10), 3e-3)
        assert h * steps == 10
        assert h <= F(3, 1000)

    def test_grid_overshoots_incommensurate_end(self):
        h, steps = aligned_step([F(1)], F(1_000_003, 1_000_000), 1e-3)
        assert h == F(1, 1000)
        assert steps == 1001

    def test_invalid_step(self):
        with pytest.raises(ValueError, match="positive"):
            aligned_step([F(1)], F(1), 0.0)

    def test_nearly_incommensurate_delays_hit_the_step_limit(self):
        # the common divisor of 0.1234567 and 1 is 1e-7, i.e. 1e9 steps to reach t = 100
        with pytest.raises(StepLimitError, match="max_steps"):
            aligned_step([F(1234567, 10**7), F(1)], F(100), 1e-3)

    def test_step_limit_counts_history_steps(self):
        delays = [F(1, 10), F(1)]
        with pytest.raises(StepLimitError):
            aligned_step(delays, F(100), 1e-3, SolverSettings(max_steps=100_000))
        h, steps = aligned_step(delays, F(100), 1e-3, SolverSettings(max_steps=101_000))
        assert (h, steps) == (F(1, 1000), 100_000)


class TestTrajectory:
    def test_hermite_reproduces_cubics(self):
        grid = np.linspace(0.0, 1.0, 11)
        states = (grid**3 + 1)[:, None]
        derivatives = (3 * grid**2)[:, None]
        history = HistoryFunction.constant([1.0])
        traj = Trajectory(("A",), grid, states, derivatives, history, F(1, 2), F(1, 10))

        t = np.linspace(0.0, 1.0, 97)
        np.testing.assert_allclose(traj.lookup(t)[:, 0], t**3 + 1, atol=1e-12)
        np.testing.assert_array_equal(traj.lookup(grid[3]), states[3])
        np.testing.assert_array_equal(traj.lookup(-0.25), [1.0])

    def test_lookup_out_of_range(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([2.0, 1.0]), 1.0, 0.01)
        with pytest.raises(ValueError, match="outside"):
            traj.lookup(1.5)
        with pytest.raises(ValueError, match="outside"):
            traj.lookup(-1.5)

    def test_arrays_are_read_only(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([2.0, 1.0]), 1.0, 0.01)
        with pytest.raises(ValueError, match="read-only"):
            traj.states[0, 0] = 1.0

    def test_sample_times(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([2.0, 1.0]), 1.0, 0.01)
        np.testing.assert_allclose(traj.sample_times(0.25), [0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(traj.sample_times(0.3), [0.0, 0.3, 0.6, 0.9, 1.0])

    def test_samples_stop_at_requested_horizon(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([2.0, 1.0]), 1.000003)
        assert traj.t_end == pytest.approx(1.001)
        assert traj.horizon == pytest.approx(1.000003)
        np.testing.assert_allclose(
            traj.sample_times(0.25), [0.0, 0.25, 0.5, 0.75, 1.0, 1.000003], rtol=1e-12
        )


class TestSimulate:
    def test_continuity_at_zero(self, shrunk_candidate):
        history = parse_history("expr:sin(s)+1,cos(s)+1")
        traj = simulate(shrunk_candidate, history, 2.0)
        np.testing.assert_array_equal(traj.states[0], history(0.0))
        np.testing.assert_allclose(traj.lookup(-1e-9), history(0.0), atol=1e-8)

    def test_grid_points_are_exact(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([2.0, 1.0]), 1.0)
        np.testing.assert_array_equal(traj.lookup(traj.grid[[0, 17, -1]]), traj.states[[0, 17, -1]])

    @pytest.mark.parametrize("net_name", ["triangle", "shrunk_candidate"])
    def test_equilibrium_history_is_a_fixed_point(self, request, net_name):
        net = request.getfixturevalue(net_name)
        traj = simulate(net, HistoryFunction.constant([1.0, 1.0]), 5.0)
        assert np.max(np.abs(traj.states - 1.0)) <= 1e-10

    def test_zero_horizon(self, shrunk_candidate):
        traj = simulate(shrunk_candidate, HistoryFunction.constant([5.0, 1.0]), 0)
        assert len(traj) == 1
        np.testing.assert_array_equal(traj.final_state, [5.0, 1.0])
        np.testing.assert_array_equal(traj.sample_times(0.1), [0.0])

    def test_zero_delays_match_ode_solver(self, shrunk_candidate):
        net = shrunk_candidate.with_delays([F(0), F(0)])
        traj = simulate(net, HistoryFunction.constant([2.0, 1.0]), 10.0)

        def rhs(_t, x):
            a, b = x
            flux = 2 * a**3 - 2 * a * b**2
            return [-flux, flux]

        times = traj.grid[::50]
        reference = integrate.solve_ivp(
            rhs, (0.0, 10.0), [2.0, 1.0], method="DOP853", t_eval=times, rtol=1e-13, atol=1e-13
        )
        assert np.max(np.abs(traj.lookup(times) - reference.y.T)) <= 1e-6

    def test_fourth_order_convergence(self, shrunk_candidate):
        history = HistoryFunction.constant([2.0, 1.0])
        coarse = simulate(shrunk_candidate, history, 2.0, 0.004)
        fine = simulate(shrunk_candidate, history, 2.0, 0.002)
        reference = simulate(shrunk_candidate, history, 2.0, 0.0005)

        times = coarse.grid
        coarse_error = np.max(np.abs(coarse.states - reference.lookup(times)))
        fine_error = np.max(np.abs(fine.lookup(times) - reference.lookup(times)))
        assert 8 <= coarse_error / fine_error <= 32

    def test_positivity_loss_aborts(self):
        net = parse_network("2A -> 0 : k=1\n0 -> A : k=1/100")
        with pytest.raises(PositivityLostError) as info:
            simulate(net, HistoryFunction.constant([100.0]), 1.0, 0.1)
        assert info.value.time == pytest.approx(0.1)
        assert min(info.value.state) <= 0

    def test_history_dimension_mismatch(self, triangle):
        with pytest.raises(ValueError, match="components"):
            simulate(triangle, HistoryFunction.constant([1.0, 1.0, 1.0]), 1.0)

    def test_negative_history_rejected(self, triangle):
        with pytest.raises(ValueError, match="negative"):
            simulate(triangle, parse_history("expr:s+1/2,1"), 1.0)

    def test_negative_horizon_rejected(self, triangle):
        with pytest.raises(ValueError, match="non-negative"):
            simulate(triangle, HistoryFunction.constant([1.0, 1.0]), -1.0)


class TestBatch:
    def test_runs_scenarios_and_writes_csv(self, tmp_path, networks_dir):
        batch_file = tmp_path / "batch.yaml"
        batch_file.write_text(
            f"network: {networks_dir / 'shrunk_candidate.crn'}\n"
            "t_end: 1\n"
            "sample_every: 0.5\n"
            "scenarios:\n"
            "  - name: constant\n"
            "    history: const:5,1\n"
            "    output: out/constant.csv\n"
            "  - name: trig\n"
            "    tau: ['2', '1/2']\n"
            "    history: expr:sin(s)+1,cos(s)+1\n"
            "    output: out/trig.csv\n"
        )
        batch = load_batch(batch_file)
        written = run_batch(batch, workers=2)

        assert written == {
            "constant": tmp_path / "out" / "constant.csv",
            "trig": tmp_path / "out" / "trig.csv",
        }
        lines = written["trig"].read_text().splitlines()
        assert lines[0] == "t,x_A,x_B"
        assert len(lines) == 4

    def test_duplicate_names_rejected(self, tmp_path):
        batch_file = tmp_path / "batch.yaml"
        batch_file.write_text(
            "network: net.crn\nscenarios:\n"
            "  - {name: a, history: 'const:1,1', output: a.csv}\n"
            "  - {name: a, history: 'const:1,1', output: b.csv}\n"
        )
        with pytest.raises(ValueError, match="unique"):
            load_batch(batch_file)

    def test_sample_batch_file_loads(self, networks_dir):
        batch = load_batch(networks_dir / "shrunk_scenarios.yaml")
        assert len(batch.scenarios) == 4
        assert batch.network == networks_dir / "shrunk_candidate.crn"
        assert batch.scenarios[0].tau == [F(1, 10), F(1)]


SCENARIOS = [
    ([F(1, 10), F(1)], "const:5,1"),
    ([F(1, 10), F(1)], "expr:sin(s)+1,cos(s)+1"),
    ([F(2), F(1, 2)], "const:5,1"),
    ([F(2), F(1, 2)], "expr:sin(s)+1,cos(s)+1"),
]


@pytest.mark.slow
@pytest.mark.parametrize(("delays", "history_text"), SCENARIOS)
def test_long_run_is_stable(shrunk_candidate, delays, history_text):
    net = shrunk_candidate.with_delays(delays)
    history = parse_history(history_text, 2)
    traj = simulate(net, history, 100.0)

    assert np.all(traj.states > 0)
    functional = ConservedFunctional.for_network(net, [1.0, 1.0])
    conservation = conservation_report(traj, functional, 1.0)
    assert conservation.passed, conservation.max_relative_drift

    spec = LyapunovSpec.from_network(net, [1.0, 1.0])
    dissipation = dissipation_report(traj, spec, 1.0)
    assert dissipation.passed, dissipation.max_forward_difference

    e = limit_of_class(net, history)
    assert np.max(np.abs(traj.final_state - e)) <= 1e-4
