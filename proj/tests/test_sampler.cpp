#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "wulffmc/sampler.hpp"

using namespace wulffmc;

namespace {

EnsembleParams gas_params(int dim, int n, double beta, double pressure) {
    EnsembleParams p;
    p.dimension = dim;
    p.particles = n;
    p.beta = beta;
    p.pressure = pressure;
    p.ideal_gas = true;
    return p;
}

RunSchedule quick_schedule() {
    RunSchedule s;
    s.burnin_sweeps = 1500;
    s.measurement_sweeps = 20000;
    s.thinning = 10;
    return s;
}

}  // namespace

TEST_CASE("parameter validation") {
    EnsembleParams p;
    CHECK_NOTHROW(p.validate());
    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.beta = 1.0;
    p.particles = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.particles = 4;
    p.pressure = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    // zero pressure needs a volume cap
    p.pressure = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.volume_cap = 100.0;
    CHECK_NOTHROW(p.validate());
    p.dimension = 4;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    RunSchedule s;
    CHECK_NOTHROW(s.validate());
    s.blocks = 4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.blocks = 16;
    s.thinning = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.thinning = 4000;                                // 20000/4000 = 5 < 16 blocks
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("bare acceptance rule: always at dU <= 0, e^-1 at log ratio -1") {
    Rng rng(123u);
    for (int i = 0; i < 100; ++i) CHECK(metropolis_accept(0.0, rng));
    for (int i = 0; i < 100; ++i) CHECK(metropolis_accept(2.5, rng));
    int accepted = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) accepted += metropolis_accept(-1.0, rng) ? 1 : 0;
    const double rate = static_cast<double>(accepted) / trials;
    const double expect = std::exp(-1.0);
    const double se = std::sqrt(expect * (1.0 - expect) / trials);
    CHECK(std::abs(rate - expect) < 4.0 * se);
}

TEST_CASE("insertion: dense start succeeds, zero retry budget at absurd density fails") {
    EnsembleParams p;
    p.dimension = 2;
    p.particles = 100;
    p.beta = 1.0;
    p.pressure = 1.0;
    const SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 42u, 4.0);
    CHECK(s.config.size() == 100);
    CHECK(s.config.all_inside());
    CHECK(s.config.total_energy().has_value());  // no hard-core violations
    CHECK(s.energy == doctest::Approx(s.config.total_energy().value()));

    // packing fraction > 1 cannot be inserted; budget 0 trips on the first clash
    p.particles = 50;
    CHECK_THROWS_WITH_AS(
        (void)initialize_state(Shape::ball(2), p, StepSizes{}, 42u, 0.7, 0),
        doctest::Contains("larger factor"), std::runtime_error);
}

TEST_CASE("single particle: zero potential, exact kinetic bookkeeping") {
    EnsembleParams p;
    p.dimension = 2;
    p.particles = 1;
    p.beta = 4.0;
    p.pressure = 1.0;
    SimulationState s = initialize_state(Shape::regular_polygon(6), p, StepSizes{}, 7u);
    const RunResult r = run(s, p, quick_schedule());
    CHECK(r.potential.mean == 0.0);
    CHECK(r.potential.std_error == 0.0);
    CHECK(r.total.mean == p.kinetic_mean());
    CHECK(r.total.mean == doctest::Approx(2.0 / 8.0));
    CHECK(r.total.std_error == r.potential.std_error);
    CHECK(r.counters.disp_proposed == 20000);
    // particle moved and volume fluctuated
    CHECK(r.counters.disp_accepted > 0);
    CHECK(r.counters.vol_accepted > 0);
}

TEST_CASE("ideal gas: mean volume matches the Gamma-distribution moment") {
    struct Case {
        int dim, n;
        double beta, pressure;
    };
    for (const Case& c : {Case{2, 1, 2.0, 1.0}, Case{2, 10, 2.0, 1.0}, Case{3, 10, 1.0, 0.5}}) {
        const EnsembleParams p = gas_params(c.dim, c.n, c.beta, c.pressure);
        SimulationState s = initialize_state(Shape::ball(c.dim), p, StepSizes{}, 1000u + c.n);
        const RunResult r = run(s, p, quick_schedule());
        const double expect = (c.n + 1.0) / (c.beta * c.pressure);
        INFO("N=", c.n, " d=", c.dim, " got ", r.volume.mean, " want ", expect, " se ",
             r.volume.std_error);
        CHECK(std::abs(r.volume.mean - expect) < 4.0 * r.volume.std_error);
        CHECK(r.volume.std_error > 0.0);
        CHECK(r.volume.samples == 2000);
        CHECK(r.volume.blocks == 16);
    }
}

TEST_CASE("zero pressure with a cap: volume density is V^N on (0, cap]") {
    EnsembleParams p = gas_params(2, 5, 1.0, 0.0);
    p.volume_cap = 50.0;
    SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 11u);
    const RunResult r = run(s, p, quick_schedule());
    for (double v : r.v_samples) CHECK(v <= 50.0);
    const double expect = 50.0 * 6.0 / 7.0;  // cap (N+1)/(N+2)
    CHECK(std::abs(r.volume.mean - expect) < 4.0 * r.volume.std_error);
}

TEST_CASE("same seed, same inputs: identical trajectories") {
    EnsembleParams p;
    p.dimension = 2;
    p.particles = 24;
    p.beta = 2.0;
    p.pressure = 2.0;
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 300;
    sched.measurement_sweeps = 3000;
    std::vector<double> u1, v1;
    {
        SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 99u);
        const RunResult r = run(s, p, sched);
        u1 = r.u_samples;
        v1 = r.v_samples;
    }
    SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 99u);
    const RunResult r = run(s, p, sched);
    CHECK(u1 == r.u_samples);  // bitwise
    CHECK(v1 == r.v_samples);
}

TEST_CASE("interacting run: cache stays on the recomputed energy") {
    EnsembleParams p;
    p.dimension = 2;
    p.particles = 32;
    p.beta = 2.0;
    p.pressure = 2.0;
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 500;
    sched.measurement_sweeps = 10000;
    SimulationState s = initialize_state(Shape::regular_polygon(6), p, StepSizes{}, 5u);
    const RunResult r = run(s, p, sched);
    const double recomputed = recompute_energy(s, p).value();
    CHECK(std::abs(s.energy - recomputed) < 1e-8);
    CHECK(s.config.all_inside(1e-9));
    CHECK(r.counters.displacement_rate() > 0.05);
    CHECK(r.counters.displacement_rate() < 0.95);
    CHECK(r.total.mean == r.potential.mean + p.kinetic_mean());
}

TEST_CASE("d=3 interacting smoke run inside the cuboctahedron") {
    EnsembleParams p;
    p.dimension = 3;
    p.particles = 20;
    p.beta = 1.5;
    p.pressure = 1.0;
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 300;
    sched.measurement_sweeps = 4000;
    SimulationState s = initialize_state(Shape::cuboctahedron(), p, StepSizes{}, 3u);
    const RunResult r = run(s, p, sched);
    CHECK(std::abs(s.energy - recompute_energy(s, p).value()) < 1e-8);
    CHECK(r.volume.mean > 0.0);
    CHECK(r.counters.vol_proposed == 4000);
}

TEST_CASE("burn-in tuning pulls an absurd step size down, then freezes") {
    EnsembleParams p;
    p.dimension = 2;
    p.particles = 16;
    p.beta = 2.0;
    p.pressure = 1.0;
    StepSizes wild;
    wild.displacement = 500.0;  // nearly every proposal exits the container
    wild.log_volume = 4.0;
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 2000;
    sched.measurement_sweeps = 2000;
    sched.thinning = 5;
    SimulationState s = initialize_state(Shape::ball(2), p, wild, 21u);
    const RunResult r = run(s, p, sched);
    CHECK(r.steps.displacement < 50.0);
    CHECK(r.steps.log_volume < 4.0);
    // frozen: the state's steps equal the reported measurement-phase steps
    CHECK(s.steps.displacement == r.steps.displacement);
    CHECK(s.steps.log_volume == r.steps.log_volume);
    CHECK(r.counters.displacement_rate() > 0.1);
}

TEST_CASE("observer sees every thinned sweep; zero volume fraction fixes V") {
    EnsembleParams p = gas_params(2, 4, 1.0, 1.0);
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 50;
    sched.measurement_sweeps = 1000;
    sched.thinning = 10;
    sched.volume_move_fraction = 0.0;
    SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 2u);
    const double v0 = s.volume();
    std::uint64_t calls = 0, last_sweep = 0;
    const RunResult r = run(s, p, sched, [&](const SimulationState& st, const TrajectorySample& t) {
        ++calls;
        CHECK(t.sweep > last_sweep);
        last_sweep = t.sweep;
        CHECK(t.volume == v0);
        CHECK(st.config.size() == 4);
    });
    CHECK(calls == 100);
    CHECK(r.counters.vol_proposed == 0);
    for (double v : r.v_samples) CHECK(v == v0);
}

TEST_CASE("fractional volume-move mix accumulates") {
    EnsembleParams p = gas_params(2, 4, 1.0, 1.0);
    RunSchedule sched = quick_schedule();
    sched.burnin_sweeps = 0;
    sched.measurement_sweeps = 1000;
    sched.thinning = 10;
    sched.volume_move_fraction = 0.25;
    SimulationState s = initialize_state(Shape::ball(2), p, StepSizes{}, 2u);
    const RunResult r = run(s, p, sched);
    CHECK(r.counters.vol_proposed == 250);
}
