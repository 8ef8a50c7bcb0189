// Geodesic flow: right-hand sides, the momentum integrator with its
// Lagrangian bookkeeping, the two alternative formulations, and the
// conservation-law accuracy gauge.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wunsch/geodesic.hpp"

using namespace wunsch;

namespace {
const GridSpec g128(128);

PeriodicField sinx(const GridSpec& g) {
    return PeriodicField::sample(g, [](double x) { return std::sin(x); });
}
PeriodicField cosx(const GridSpec& g) {
    return PeriodicField::sample(g, [](double x) { return std::cos(x); });
}
} // namespace

TEST_CASE("euler_rhs special values") {
    auto mu = MetricKind::mu_half();
    // steady rotation: ω ≡ 1 is a fixed point
    CHECK(euler_rhs(mu, PeriodicField::constant(g128, 1.0)).sup_norm() < 1e-14);
    CHECK(euler_rhs(mu, PeriodicField::zero(g128)).sup_norm() == 0.0);
    // Wunsch kind, ω = sin x (so u = sin x): rhs = −3 sin x cos x
    auto rhs = euler_rhs(MetricKind::homogeneous_half(), sinx(g128));
    auto expect = PeriodicField::sample(g128, [](double x) { return -1.5 * std::sin(2 * x); });
    CHECK((rhs - expect).sup_norm() < 1e-12);
    // degenerate kind refuses non-zero-mean momentum
    CHECK_THROWS_AS(euler_rhs(MetricKind::homogeneous_half(), PeriodicField::constant(g128, 1.0)),
                    DegenerateMeanError);
}

TEST_CASE("rotation geodesic is exact") {
    SolverConfig cfg;
    cfg.kind = MetricKind::mu_half();
    cfg.grid_n = g128.n;
    cfg.dt = 1e-2;
    cfg.horizon = pi;
    cfg.record_stride = 50;
    auto traj = integrate_euler(cfg, PeriodicField::constant(g128, 1.0));
    REQUIRE(traj.status == RunStatus::Completed);
    const Snapshot& last = traj.snapshots.back();
    CHECK(last.t == Catch::Approx(pi));
    // η(π) = x + π, η_x ≡ 1, u ≡ 1 throughout
    CHECK((last.eta.displacement() - PeriodicField::constant(g128, pi)).sup_norm() < 1e-10);
    CHECK((last.eta_x - PeriodicField::constant(g128, 1.0)).sup_norm() < 1e-10);
    for (const auto& s : traj.snapshots)
        CHECK((s.u - PeriodicField::constant(g128, 1.0)).sup_norm() < 1e-10);
    CHECK(conservation_residual(traj, traj.snapshots.size() - 1) < 1e-12);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.grid_n = g128.n;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(integrate_euler(cfg, PeriodicField::zero(g128)), std::invalid_argument);
    cfg.dt = 1e-2;
    cfg.record_stride = 0;
    CHECK_THROWS_AS(integrate_euler(cfg, PeriodicField::zero(g128)), std::invalid_argument);
    cfg.record_stride = 1;
    CHECK_THROWS_AS(integrate_euler(cfg, PeriodicField::zero(GridSpec(64))), GridMismatch);
}

TEST_CASE("zero data stays at the identity") {
    SolverConfig cfg;
    cfg.grid_n = g128.n;
    cfg.dt = 1e-2;
    cfg.horizon = 0.5;
    auto traj = integrate_euler(cfg, PeriodicField::zero(g128));
    REQUIRE(traj.status == RunStatus::Completed);
    CHECK(traj.snapshots.back().eta.displacement().sup_norm() < 1e-14);
}

TEST_CASE("trajectory invariants on a generic run") {
    SolverConfig cfg;
    cfg.kind = MetricKind::mu_half();
    cfg.grid_n = g128.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.3;
    cfg.record_stride = 50;
    auto traj = integrate_euler(cfg, cosx(g128));
    REQUIRE(traj.status == RunStatus::Completed);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& s = traj.snapshots[i];
        // ω = A u at every snapshot
        CHECK((s.omega - inertia_apply(cfg.kind, s.u)).sup_norm() < 1e-10);
        // mean momentum is conserved
        CHECK(std::abs(s.diag.mean_omega - traj.omega0.mean()) < 1e-10);
        // shrinking bound ‖ω‖_∞ ≤ ‖ω₀‖_∞ / (min η_x)²
        CHECK(s.diag.sup_omega <=
              traj.omega0.sup_norm() / (s.diag.min_eta_x * s.diag.min_eta_x) + 1e-8);
    }
    CHECK(conservation_residual(traj, 0) < 1e-14);
}

TEST_CASE("conservation residual converges at 4th order") {
    SolverConfig cfg;
    cfg.kind = MetricKind::mu_half();
    cfg.grid_n = g128.n;
    cfg.horizon = 0.2;
    cfg.record_stride = 1 << 20; // endpoints only
    double res[3];
    double dts[3] = {4e-3, 2e-3, 1e-3};
    for (int k = 0; k < 3; ++k) {
        cfg.dt = dts[k];
        auto traj = integrate_euler(cfg, cosx(g128));
        REQUIRE(traj.status == RunStatus::Completed);
        res[k] = conservation_residual(traj, traj.snapshots.size() - 1);
    }
    CHECK(res[0] / res[1] == Catch::Approx(16.0).epsilon(0.5));
    CHECK(res[1] / res[2] == Catch::Approx(16.0).epsilon(0.5));
}

TEST_CASE("zero-mean mu-half runs solve the Wunsch equation") {
    auto u0 = PeriodicField::sample(
        g128, [](double x) { return 0.2 * std::sin(x) + 0.1 * std::cos(2 * x); });
    SolverConfig cfg;
    cfg.grid_n = g128.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.3;
    cfg.record_stride = 100;
    cfg.kind = MetricKind::mu_half();
    auto murun = integrate_euler(cfg, u0);
    cfg.kind = MetricKind::homogeneous_half();
    auto homrun = integrate_euler(cfg, u0);
    REQUIRE(murun.status == RunStatus::Completed);
    REQUIRE(homrun.status == RunStatus::Completed);
    REQUIRE(murun.snapshots.size() == homrun.snapshots.size());
    for (std::size_t i = 0; i < murun.snapshots.size(); ++i) {
        CHECK(std::abs(mean(murun.snapshots[i].u)) < 1e-10);
        CHECK((murun.snapshots[i].u - homrun.snapshots[i].u).sup_norm() < 1e-8);
        CHECK((murun.snapshots[i].eta.displacement() -
               homrun.snapshots[i].eta.displacement()).sup_norm() < 1e-8);
    }
}

TEST_CASE("blowup is detected for u0 = -sin x") {
    const GridSpec g256(256);
    SolverConfig cfg;
    cfg.kind = MetricKind::homogeneous_half();
    cfg.grid_n = g256.n;
    cfg.dt = 2e-4;
    cfg.horizon = 1.2;
    cfg.record_stride = 100;
    auto traj = integrate_euler(cfg, -1.0 * sinx(g256));
    REQUIRE(traj.status == RunStatus::Blowup);
    // theorem bound: collapse before 1/|u0'(0)| = 1
    CHECK(traj.t_first_bad < 1.0);
    CHECK(traj.t_last_good < traj.t_first_bad);
    CHECK(traj.final_min_eta_x < 1e-3);
    // collapse happens at the momentum zero x = 0
    CHECK(traj.argmin_node == 0);
    // degenerate kinds require mean-zero data
    CHECK_THROWS_AS(integrate_euler(cfg, PeriodicField::constant(g256, 0.5)),
                    DegenerateMeanError);
}

TEST_CASE("omega cap triggers step halving before declaring blowup") {
    const GridSpec g256(256);
    SolverConfig cfg;
    cfg.kind = MetricKind::homogeneous_half();
    cfg.grid_n = g256.n;
    cfg.dt = 2e-4;
    cfg.horizon = 1.2;
    cfg.record_stride = 200;
    cfg.blowup_omega_cap = 5.0; // reached well before the η_x collapse
    cfg.max_halvings = 3;
    auto traj = integrate_euler(cfg, -1.0 * sinx(g256));
    REQUIRE(traj.status == RunStatus::Blowup);
    // the final accepted step ran at dt/2³, so the bracket is that wide
    CHECK(traj.t_first_bad - traj.t_last_good == Catch::Approx(cfg.dt / 8.0).epsilon(1e-6));
    // the cap fired before the stretching threshold
    CHECK(traj.final_min_eta_x > cfg.min_eta_x);
    CHECK(traj.snapshots.back().diag.sup_omega > cfg.blowup_omega_cap);
}

TEST_CASE("ebin rhs") {
    auto mu = MetricKind::mu_half();
    auto u0 = cosx(g128);
    // identity: A_id⁻¹ A u0 = u0
    CHECK((ebin_rhs(mu, Diffeo::identity(g128), u0) - u0).sup_norm() < 1e-11);
    // steady rotation: u0 ≡ 1 gives η_t ≡ 1 for any rotation η
    auto one = PeriodicField::constant(g128, 1.0);
    CHECK((ebin_rhs(mu, Diffeo::rotation(g128, 0.7), one) - one).sup_norm() < 1e-11);
    CHECK_THROWS_AS(ebin_rhs(MetricKind::homogeneous_half(), Diffeo::identity(g128), u0),
                    DegenerateKindError);
    // along the true geodesic η_t = u(t)∘η(t): cross-check against the
    // momentum integrator at t = 0.1
    SolverConfig cfg;
    cfg.kind = mu;
    cfg.grid_n = g128.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.1;
    cfg.record_stride = 1 << 20;
    auto traj = integrate_euler(cfg, u0);
    const Snapshot& s = traj.snapshots.back();
    auto lhs = ebin_rhs(mu, s.eta, u0);
    auto rhs = compose(s.u, s.eta);
    CHECK((lhs - rhs).sup_norm() < 1e-8);
}

TEST_CASE("spray rhs") {
    auto mu = MetricKind::mu_half();
    CHECK(spray_rhs(mu, Diffeo::identity(g128), PeriodicField::zero(g128)).sup_norm() < 1e-14);
    CHECK(spray_rhs(mu, Diffeo::identity(g128), PeriodicField::constant(g128, 1.0)).sup_norm() <
          1e-12);
    CHECK_THROWS_AS(spray_rhs(MetricKind::homogeneous_half(), Diffeo::identity(g128),
                              PeriodicField::zero(g128)),
                    DegenerateKindError);
    // at the identity the spray is u_t + u u_x
    auto v = cosx(g128);
    auto direct = spray_rhs(mu, Diffeo::identity(g128), v);
    auto viaeuler = eulerian_acceleration(mu, v) + product_dealiased(v, derivative(v));
    CHECK((direct - viaeuler).sup_norm() < 1e-8);
}

TEST_CASE("three formulations agree") {
    auto mu = MetricKind::mu_half();
    auto u0 = cosx(g128);
    SolverConfig cfg;
    cfg.kind = mu;
    cfg.grid_n = g128.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.record_stride = 1 << 20;
    auto traj = integrate_euler(cfg, u0);
    auto ebin = integrate_ebin(cfg, u0);
    auto sprayp = integrate_spray(cfg, u0);
    REQUIRE(traj.status == RunStatus::Completed);
    const auto& pe = traj.snapshots.back().eta.displacement();
    CHECK((ebin.etas.back().displacement() - pe).sup_norm() < 1e-6);
    CHECK((sprayp.etas.back().displacement() - pe).sup_norm() < 1e-6);
    CHECK(ebin.times.back() == Catch::Approx(0.2));
}

TEST_CASE("lagrangian flow") {
    // constant field: η = x + t
    std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<PeriodicField> ones(3, PeriodicField::constant(g128, 1.0));
    auto path = lagrangian_flow(times, ones, 1e-2);
    REQUIRE(path.status == RunStatus::Completed);
    CHECK((path.etas.back().displacement() - PeriodicField::constant(g128, 1.0)).sup_norm() <
          1e-12);
    CHECK((path.eta_x.back() - PeriodicField::constant(g128, 1.0)).sup_norm() < 1e-12);

    // zero field: identity
    std::vector<PeriodicField> zeros(3, PeriodicField::zero(g128));
    auto zpath = lagrangian_flow(times, zeros, 1e-2);
    CHECK(zpath.etas.back().displacement().sup_norm() < 1e-14);

    // frozen sin x: x = π is a fixed point with u_x(π) = −1, so η_x(t,π) = e^{−t}
    std::vector<PeriodicField> frozen(3, sinx(g128));
    auto fpath = lagrangian_flow(times, frozen, 1e-3);
    const int jpi = g128.n / 2; // node at x = π
    CHECK(std::abs(fpath.etas.back()(pi) - pi) < 1e-10);
    CHECK(fpath.eta_x.back().samples()[jpi] == Catch::Approx(std::exp(-1.0)).margin(1e-8));

    // reconstructs the integrator's flow from velocity snapshots
    SolverConfig cfg;
    cfg.kind = MetricKind::mu_half();
    cfg.grid_n = g128.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.record_stride = 10;
    auto traj = integrate_euler(cfg, cosx(g128));
    std::vector<double> ts;
    std::vector<PeriodicField> us;
    for (const auto& s : traj.snapshots) {
        ts.push_back(s.t);
        us.push_back(s.u);
    }
    auto rec = lagrangian_flow(ts, us, 1e-3);
    CHECK((rec.etas.back().displacement() - traj.snapshots.back().eta.displacement()).sup_norm() <
          1e-4);
}
