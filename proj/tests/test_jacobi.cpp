// Adjoint operators, Jacobi fields along the rotation geodesic against the
// closed form, index form, and the conjugate-point criterion.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wunsch/jacobi.hpp"

using namespace wunsch;

namespace {
const GridSpec g64(64);
const auto mu = MetricKind::mu_half();

GeodesicTrajectory rotation_traj(const GridSpec& g, double T, double dt, int stride) {
    SolverConfig cfg;
    cfg.kind = mu;
    cfg.grid_n = g.n;
    cfg.dt = dt;
    cfg.horizon = T;
    cfg.record_stride = stride;
    return integrate_euler(cfg, PeriodicField::constant(g, 1.0));
}
} // namespace

TEST_CASE("ad bracket") {
    auto sinx = PeriodicField::sample(g64, [](double x) { return std::sin(x); });
    auto cosx = PeriodicField::sample(g64, [](double x) { return std::cos(x); });
    // constant u: ad_1 v = −v_x
    CHECK((ad_bracket(PeriodicField::constant(g64, 1.0), sinx) + cosx).sup_norm() < 1e-13);
    CHECK(ad_bracket(sinx, sinx).sup_norm() < 1e-14);
    // ad_{sin}(cos) = cos²x + sin²x = 1
    CHECK((ad_bracket(sinx, cosx) - PeriodicField::constant(g64, 1.0)).sup_norm() < 1e-13);
}

TEST_CASE("ad_top values") {
    auto sinx = PeriodicField::sample(g64, [](double x) { return std::sin(x); });
    auto sin2x = PeriodicField::sample(g64, [](double x) { return std::sin(2 * x); });
    auto sin3x = PeriodicField::sample(g64, [](double x) { return std::sin(3 * x); });
    auto one = PeriodicField::constant(g64, 1.0);
    // ad^⊤ with constant argument: ad^⊤_w(1) = 2Λ⁻¹(w_x) since Λ1 = 1
    auto lhs = ad_top(mu, sin3x, one);
    auto expect = PeriodicField::sample(g64, [](double x) { return 2.0 * std::cos(3 * x); });
    CHECK((lhs - expect).sup_norm() < 1e-12);
    // constant subscript: ad^⊤_1 v = Λ⁻¹(Λ v_x) = v_x
    CHECK((ad_top(mu, one, sin3x) -
           PeriodicField::sample(g64, [](double x) { return 3.0 * std::cos(3 * x); })).sup_norm() <
          1e-12);
    // ad^⊤_{sin x}(sin 2x) = (4/3) sin 3x
    CHECK((ad_top(mu, sinx, sin2x) -
           PeriodicField::sample(g64, [](double x) { return 4.0 / 3.0 * std::sin(3 * x); }))
              .sup_norm() < 1e-12);
    CHECK(ad_top(mu, PeriodicField::zero(g64), sin2x).sup_norm() < 1e-14);
}

TEST_CASE("Ad push and pull") {
    auto v = random_field(g64, 5, {.max_mode = 10, .zero_mean = false});
    // rotation: Ad_{x+θ} v = v(x − θ)
    auto pushed = Ad_push(Diffeo::rotation(g64, 0.8), v);
    CHECK((pushed - translate(v, -0.8)).sup_norm() < 1e-11);
    // identity: Ad^⊤ = Id
    CHECK((Ad_top(mu, Diffeo::identity(g64), v) - v).sup_norm() < 1e-11);
    CHECK_THROWS_AS(Ad_top(MetricKind::homogeneous_half(), Diffeo::identity(g64), v),
                    DegenerateKindError);
}

TEST_CASE("duality pairings") {
    const GridSpec g256(256);
    auto eta = Diffeo::from_displacement(
        PeriodicField::sample(g256, [](double x) { return 0.1 * std::sin(x); }));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto u = random_field(g256, 100 + seed, {.max_mode = 20, .zero_mean = false});
        auto v = random_field(g256, 200 + seed, {.max_mode = 20, .zero_mean = false});
        auto w = random_field(g256, 300 + seed, {.max_mode = 20, .zero_mean = false});
        // ⟨ad^⊤_u v, w⟩ = ⟨v, ad_u w⟩
        CHECK(inner_product(mu, ad_top(mu, u, v), w) ==
              Catch::Approx(inner_product(mu, v, ad_bracket(u, w))).margin(1e-10));
        // ⟨Ad^⊤_η v, w⟩ = ⟨v, Ad_η w⟩
        CHECK(inner_product(mu, Ad_top(mu, eta, v), w) ==
              Catch::Approx(inner_product(mu, v, Ad_push(eta, w))).margin(1e-10));
    }
}

TEST_CASE("rotation closed form evaluations") {
    // n ≠ 0 modes return to zero at t = π
    auto [w3, v3] = rotation_closed_form(3, cplx(1.0, 0.0), pi);
    CHECK(std::abs(w3 - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(v3) < 1e-14);
    // the constant mode grows linearly
    auto [w0, v0] = rotation_closed_form(0, cplx(1.0, 0.0), pi);
    CHECK(std::abs(v0 - cplx(pi, 0.0)) < 1e-14);
    CHECK(std::abs(w0 - cplx(1.0, 0.0)) < 1e-14);
    // negative mode at quarter period
    auto [wm, vm] = rotation_closed_form(-2, cplx(1.0, 0.0), pi / 2);
    CHECK(std::abs(vm - cplx(0.0, 1.0)) < 1e-14);
    (void)wm;
}

TEST_CASE("jacobi fields along the rotation geodesic") {
    auto traj = rotation_traj(g64, pi, 1e-3, 1);
    REQUIRE(traj.status == RunStatus::Completed);

    // w0 = cos nx gives v(t,x) = sin t · cos(nx − t)
    for (int n : {1, 3}) {
        auto w0 = PeriodicField::sample(g64, [n](double x) { return std::cos(n * x); });
        auto sol = jacobi_integrate(mu, traj, w0);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.times.size(); i += 200) {
            const double t = sol.times[i];
            auto expect = PeriodicField::sample(
                g64, [n, t](double x) { return std::sin(t) * std::cos(n * x - t); });
            worst = std::max(worst, (sol.v[i] - expect).sup_norm());
        }
        CHECK(worst < 1e-6);
        CHECK(sol.v.back().sup_norm() < 1e-6); // conjugate at t = π
    }

    // w0 = sin nx gives v(t,x) = sin t · sin(nx − t)
    {
        auto w0 = PeriodicField::sample(g64, [](double x) { return std::sin(2 * x); });
        auto sol = jacobi_integrate(mu, traj, w0);
        const double t = sol.times[1500];
        auto expect = PeriodicField::sample(
            g64, [t](double x) { return std::sin(t) * std::sin(2 * x - t); });
        CHECK((sol.v[1500] - expect).sup_norm() < 1e-6);
    }

    // zero variation stays zero; constant mode grows linearly
    auto zero_sol = jacobi_integrate(mu, traj, PeriodicField::zero(g64));
    CHECK(zero_sol.v.back().sup_norm() < 1e-12);
    auto const_sol = jacobi_integrate(mu, traj, PeriodicField::constant(g64, 0.7));
    CHECK((const_sol.v.back() - PeriodicField::constant(g64, 0.7 * pi)).sup_norm() < 1e-6);

    CHECK_THROWS_AS(jacobi_integrate(MetricKind::homogeneous_half(), traj,
                                     PeriodicField::zero(g64)),
                    DegenerateKindError);
}

TEST_CASE("reparametrized time and conjugate criterion on the rotation geodesic") {
    auto traj = rotation_traj(g64, 4.5, 5e-3, 1);
    const auto jt = reparam_time(traj, 1.3);
    // η_x ≡ 1 gives j(t) = t exactly
    CHECK(std::abs(jt.back() - 4.5) < 1e-10);

    auto rep = conjugate_criterion(traj, 0.0, 0.0, 4.5);
    CHECK(rep.lhs == Catch::Approx(4.5).margin(1e-9));
    CHECK(rep.threshold == Catch::Approx(4.0 * pi / 3.0));
    CHECK(rep.satisfied);
    auto rep2 = conjugate_criterion(traj, 0.0, 0.0, 1.0);
    CHECK_FALSE(rep2.satisfied);
}

TEST_CASE("bump constants reproduce R = 4/3") {
    const auto bc = bump_constants();
    // closed forms: A = 5√3π/16, B = 3√3π/16, C = 5√3π/16
    const double s3 = std::sqrt(3.0);
    CHECK(bc.A == Catch::Approx(5.0 * s3 * pi / 16.0).margin(1e-10));
    CHECK(bc.B == Catch::Approx(3.0 * s3 * pi / 16.0).margin(1e-10));
    CHECK(bc.C == Catch::Approx(5.0 * s3 * pi / 16.0).margin(1e-10));
    CHECK(bc.R == Catch::Approx(4.0 / 3.0).margin(1e-10));
}

TEST_CASE("index form vanishes on true Jacobi fields with conjugate endpoints") {
    auto traj = rotation_traj(g64, pi, 1e-3, 2);
    VariationPath path;
    for (const auto& s : traj.snapshots) {
        const double t = s.t;
        path.times.push_back(t);
        path.v.push_back(PeriodicField::sample(
            g64, [t](double x) { return std::sin(t) * std::cos(x - t); }));
        path.vdot.push_back(PeriodicField::sample(g64, [t](double x) {
            return std::cos(t) * std::cos(x - t) + std::sin(t) * std::sin(x - t);
        }));
    }
    auto rep = index_form(mu, traj, path, 0.0, pi);
    CHECK(std::abs(rep.value) < 1e-5);

    // zero path: exactly zero
    VariationPath zpath;
    for (const auto& s : traj.snapshots) {
        zpath.times.push_back(s.t);
        zpath.v.push_back(PeriodicField::zero(g64));
        zpath.vdot.push_back(PeriodicField::zero(g64));
    }
    CHECK(index_form(mu, traj, zpath, 0.0, pi).value == 0.0);

    // endpoint violation is rejected
    VariationPath bad = path;
    bad.v.front() = PeriodicField::constant(g64, 1.0);
    CHECK_THROWS_AS(index_form(mu, traj, bad, 0.0, pi), EndpointNotZero);
}

TEST_CASE("localized test field drives the index form negative past the threshold") {
    const GridSpec g512(512);
    auto traj = rotation_traj(g512, 4.5, 0.01, 1);
    REQUIRE(traj.status == RunStatus::Completed);

    auto [tf, path] = build_test_field(traj, 0.0, 0.0, 4.5, 0.1);
    CHECK(tf.R == Catch::Approx(4.0 / 3.0).margin(1e-10));
    CHECK(tf.k == Catch::Approx(0.75).margin(1e-9)); // 2B/(B+C) · ω₀ = 3/4
    CHECK(tf.jb - tf.ja == Catch::Approx(4.5).margin(1e-9));
    auto rep = index_form(mu, traj, path, 0.0, 4.5, 0.0);
    CHECK(rep.value < 0.0);
    CHECK(rep.delta == Catch::Approx(pi / 4.5).margin(1e-9));

    // interval below the threshold: nonnegative index form
    auto [tf2, path2] = build_test_field(traj, 0.0, 0.0, 2.0, 0.1);
    auto rep2 = index_form(mu, traj, path2, 0.0, 2.0, 0.0);
    CHECK(rep2.value >= 0.0);
    (void)tf2;

    // huge eps violates the one-period support condition
    CHECK_THROWS_AS(build_test_field(traj, 0.0, 0.0, 4.5, 1.0), SupportOverflow);

    // k vanishes where the initial momentum vanishes
    SolverConfig cfg;
    cfg.kind = mu;
    cfg.grid_n = g64.n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.record_stride = 20;
    auto ctraj =
        integrate_euler(cfg, PeriodicField::sample(g64, [](double x) { return std::cos(x); }));
    auto [tf3, path3] = build_test_field(ctraj, pi / 2, 0.0, 0.2, 0.05);
    CHECK(std::abs(tf3.k) < 1e-9);
    (void)path3;
}

TEST_CASE("criterion soundness: comfortably past the threshold the index form is negative") {
    // lhs = 4.8 ≥ 1.1·(4π/3): every ε in the shrinking ladder certifies
    const GridSpec g512(512);
    auto traj = rotation_traj(g512, 4.8, 0.01, 1);
    auto crit = conjugate_criterion(traj, 0.0, 0.0, 4.8);
    REQUIRE(crit.lhs >= 1.1 * crit.threshold);
    double prev_eps_I = 0.0;
    for (double eps : {0.1, 0.05}) {
        auto [tf, path] = build_test_field(traj, 0.0, 0.0, 4.8, eps);
        auto rep = index_form(mu, traj, path, 0.0, 4.8, 0.0);
        CHECK(rep.value < 0.0);
        CHECK(rep.richardson_error < 0.05 * std::abs(rep.value));
        prev_eps_I = rep.value;
    }
    (void)prev_eps_I;
}

TEST_CASE("localized criterion diverges toward blowup") {
    // on the −sin x collapse, a probe carrying momentum near the collapse
    // point sees j(b) = ∫η_x⁻² grow without bound as b approaches T*
    const GridSpec g256(256);
    SolverConfig cfg;
    cfg.kind = mu; // mean-zero data solves the Wunsch equation too
    cfg.grid_n = g256.n;
    cfg.dt = 2e-4;
    cfg.horizon = 0.84; // stop while snapshots are storable
    cfg.record_stride = 25;
    auto traj = integrate_euler(
        cfg, PeriodicField::sample(g256, [](double x) { return -std::sin(x); }));
    const double x0 = 0.1;
    double prev = 0.0;
    bool increasing = true;
    for (double b : {0.3, 0.5, 0.7, 0.8}) {
        const double t = traj.snapshots[traj.index_at(b, 3e-3)].t;
        auto rep = conjugate_criterion(traj, x0, 0.0, t);
        increasing = increasing && rep.lhs > prev;
        prev = rep.lhs;
    }
    CHECK(increasing);
    CHECK(prev > 3.0 * std::abs(traj.omega0.evaluate(x0)) * 0.8); // far beyond linear growth
}
