#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqc/rng.hpp"
#include "sqc/simulation.hpp"

using namespace sqc;

namespace {

double max_field_diff(const Grid& a, const Grid& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.f.size(); ++i) {
        for (int k = 0; k < kDim; ++k) {
            m = std::max(m, std::abs(a.f[i][static_cast<size_t>(k)] -
                                     b.f[i][static_cast<size_t>(k)]));
        }
    }
    return m;
}

std::vector<double> sorted_values(const Grid& g) {
    std::vector<double> v;
    v.reserve(g.f.size() * kDim);
    for (const Field16& node : g.f) {
        for (double x : node) v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    return v;
}

/// Rotate/reflect the whole grid: node x maps to sigma(x) (mod extents) and
/// its populations are permuted accordingly.
Grid transform_grid(const Grid& g, const D8Element& sigma) {
    Grid out = g;
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            const int tx = ((sigma.matrix[0][0] * x + sigma.matrix[0][1] * y) % g.nx +
                            g.nx) % g.nx;
            const int ty = ((sigma.matrix[1][0] * x + sigma.matrix[1][1] * y) % g.ny +
                            g.ny) % g.ny;
            out.f[out.index(tx, ty)] = apply_d8_field16(sigma, g.f[g.index(x, y)]);
            out.kind[out.index(tx, ty)] = g.kind[g.index(x, y)];
        }
    }
    return out;
}

}  // namespace

TEST_CASE("taylor-green initialization") {
    SUBCASE("u0 = 0 rests at the uniform fixed point") {
        Grid g = init_taylor_green(16, 16, 0.0);
        const Grid before = g;
        BgkCollision bgk(1.0);
        for (int t = 0; t < 5; ++t) step(g, bgk);
        CHECK(max_field_diff(g, before) < 1e-14);
    }
    SUBCASE("moments reproduce the analytic field") {
        const int n = 64;
        const double u0 = 0.01;
        Grid g = init_taylor_green(n, n, u0);
        const double k = 2.0 * std::numbers::pi / n;
        double peak = 0.0;
        double sum_ux = 0.0, sum_uy = 0.0;
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const MacroFields m = moments16(g.at(x, y));
                const double ex_ux = u0 * std::sin(k * x) * std::cos(k * y);
                const double ex_uy = -u0 * std::cos(k * x) * std::sin(k * y);
                CHECK(std::abs(m.rho - 1.0) < 1e-14);
                CHECK(std::abs(m.u.x - ex_ux) < 1e-14);
                CHECK(std::abs(m.u.y - ex_uy) < 1e-14);
                peak = std::max(peak, std::hypot(m.u.x, m.u.y));
                sum_ux += m.u.x;
                sum_uy += m.u.y;
            }
        }
        CHECK(peak == doctest::Approx(u0).epsilon(1e-12));
        CHECK(std::abs(sum_ux) < 1e-12);
        CHECK(std::abs(sum_uy) < 1e-12);
    }
    CHECK_THROWS_AS(init_taylor_green(0, 4, 0.01), std::invalid_argument);
}

TEST_CASE("lid cavity initialization") {
    const int n = 16;
    Grid g = init_lid_cavity(n, n);
    int lid = 0, wall = 0, fluid = 0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            switch (g.kind_at(x, y)) {
                case NodeKind::MovingLid: ++lid; break;
                case NodeKind::Wall: ++wall; break;
                case NodeKind::Fluid: {
                    ++fluid;
                    const MacroFields m = moments16(g.at(x, y));
                    CHECK(m.rho == doctest::Approx(1.0).epsilon(1e-14));
                    CHECK(std::abs(m.u.x) < 1e-15);
                    CHECK(std::abs(m.u.y) < 1e-15);
                    break;
                }
            }
        }
    }
    CHECK(lid == n);
    CHECK(wall == 2 * (n - 1) + (n - 2));
    CHECK(fluid == (n - 2) * (n - 2));

    SUBCASE("no lid motion keeps the cavity at rest") {
        BgkCollision bgk(0.9);
        for (int t = 0; t < 20; ++t) step(g, bgk, /*u_lid=*/0.0);
        const FieldSnapshot s = snapshot(g, 20);
        for (size_t i = 0; i < s.ux.size(); ++i) {
            CHECK(std::abs(s.ux[i]) < 1e-13);
            CHECK(std::abs(s.uy[i]) < 1e-13);
        }
    }
    CHECK_THROWS_AS(init_lid_cavity(2, 2), std::invalid_argument);
}

TEST_CASE("pure streaming on a periodic grid") {
    const int n = 8;
    Grid g = init_taylor_green(n, n, 0.0);
    for (Field16& node : g.f) node = Field16{};
    Field16 blob{};
    for (int i = 0; i < Lattice::kQ; ++i) {
        blob[static_cast<size_t>(BasisMap::pop_to_basis[static_cast<size_t>(i)])] =
            0.1 + 0.01 * i;
    }
    blob[5] = 0.003;  // a surplus slot must stay at the node
    g.at(3, 4) = blob;
    const std::vector<double> before = sorted_values(g);

    stream(g);
    // Populations land on the eight neighbors, rest and surplus stay.
    CHECK(g.at(3, 4)[0] == blob[0]);
    CHECK(g.at(3, 4)[5] == blob[5]);
    for (int i = 1; i < Lattice::kQ; ++i) {
        const auto& e = Lattice::velocities[static_cast<size_t>(i)];
        const int slot = BasisMap::pop_to_basis[static_cast<size_t>(i)];
        CHECK(g.at(3 + e[0], 4 + e[1])[static_cast<size_t>(slot)] ==
              blob[static_cast<size_t>(slot)]);
    }
    // Streaming only permutes storage.
    CHECK(sorted_values(g) == before);

    // After nx steps the periodic field returns to the start bit-for-bit.
    Grid h = init_taylor_green(n, n, 0.01);
    const Grid start = h;
    for (int t = 0; t < n; ++t) stream(h);
    CHECK(max_field_diff(h, start) == 0.0);
}

TEST_CASE("bounce-back against a hand-worked stencil") {
    // 5x5 cavity: fluid interior is the 3x3 block (1..3)^2.
    Grid g = init_lid_cavity(5, 5);
    Rng rng(5);
    Field16 probe{};
    for (int i = 0; i < Lattice::kQ; ++i) {
        probe[static_cast<size_t>(BasisMap::pop_to_basis[static_cast<size_t>(i)])] =
            rng.uniform(0.01, 0.1);
    }
    // Clear the rest of the fluid so only the probe node scatters mass.
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) {
            g.at(x, y) = Field16{};
        }
    }
    const double u_lid = 0.2;
    g.at(3, 3) = probe;  // touches the right wall and the moving lid
    double rho_probe = 0.0;
    for (double v : probe) rho_probe += v;

    stream(g, u_lid);

    const auto slot = [](int i) {
        return static_cast<size_t>(BasisMap::pop_to_basis[static_cast<size_t>(i)]);
    };
    // e1=(1,0) hits the right wall: reflected into slot 3 at the node.
    CHECK(g.at(3, 3)[slot(3)] == probe[slot(1)]);
    // e2=(0,1) hits the lid head-on: no tangential momentum transfer.
    CHECK(g.at(3, 3)[slot(4)] == probe[slot(2)]);
    // e5=(1,1) hits the lid corner: reflected with the momentum correction.
    const double corr5 =
        2.0 * Lattice::weight(5) * rho_probe * (1.0 * u_lid) / Lattice::cs2;
    CHECK(g.at(3, 3)[slot(7)] ==
          doctest::Approx(probe[slot(5)] - corr5).epsilon(1e-14));
    // e6=(-1,1) hits the lid: opposite tangential sign.
    const double corr6 =
        2.0 * Lattice::weight(6) * rho_probe * (-1.0 * u_lid) / Lattice::cs2;
    CHECK(g.at(3, 3)[slot(8)] ==
          doctest::Approx(probe[slot(6)] - corr6).epsilon(1e-14));
    // e3=(-1,0) streams freely into the fluid neighbor.
    CHECK(g.at(2, 3)[slot(3)] == probe[slot(3)]);

    SUBCASE("closed box without lid motion conserves mass exactly") {
        Grid box = init_lid_cavity(6, 6);
        const double before = box.total_mass();
        BgkCollision bgk(0.8);
        for (int t = 0; t < 10; ++t) step(box, bgk, 0.0);
        CHECK(box.total_mass() == doctest::Approx(before).epsilon(1e-14));
    }
}

TEST_CASE("one bgk step equals a straight-loop reference") {
    const int n = 64;
    const double tau = 1.0;
    Grid g = init_taylor_green(n, n, 0.01);

    // Independent reference: naive per-node collide into a scratch array,
    // then periodic streaming.
    std::vector<Populations> collided(static_cast<size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const Populations f = extract_populations(g.at(x, y));
            double rho = 0.0, px = 0.0, py = 0.0;
            for (int i = 0; i < 9; ++i) {
                rho += f[static_cast<size_t>(i)];
                px += f[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][0];
                py += f[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][1];
            }
            const double ux = px / rho, uy = py / rho;
            Populations out{};
            for (int i = 0; i < 9; ++i) {
                const double ex = Lattice::velocities[static_cast<size_t>(i)][0];
                const double ey = Lattice::velocities[static_cast<size_t>(i)][1];
                const double eu = ex * ux + ey * uy;
                const double feq = Lattice::weight(i) * rho *
                                   (1.0 + 3.0 * eu + 4.5 * eu * eu -
                                    1.5 * (ux * ux + uy * uy));
                out[static_cast<size_t>(i)] =
                    f[static_cast<size_t>(i)] - (f[static_cast<size_t>(i)] - feq) / tau;
            }
            collided[static_cast<size_t>(y) * n + x] = out;
        }
    }
    std::vector<Populations> reference(static_cast<size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            for (int i = 0; i < 9; ++i) {
                const int tx = (x + Lattice::velocities[static_cast<size_t>(i)][0] + n) % n;
                const int ty = (y + Lattice::velocities[static_cast<size_t>(i)][1] + n) % n;
                reference[static_cast<size_t>(ty) * n + tx][static_cast<size_t>(i)] =
                    collided[static_cast<size_t>(y) * n + x][static_cast<size_t>(i)];
            }
        }
    }

    BgkCollision bgk(tau);
    step(g, bgk);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const Populations got = extract_populations(g.at(x, y));
            const Populations& want = reference[static_cast<size_t>(y) * n + x];
            for (int i = 0; i < 9; ++i) {
                CHECK(std::abs(got[static_cast<size_t>(i)] - want[static_cast<size_t>(i)]) <
                      1e-14);
            }
        }
    }
}

TEST_CASE("equilibrium data under tau=1 bgk evolves by streaming alone") {
    const int n = 16;
    Grid a = init_taylor_green(n, n, 0.008);
    Grid b = a;
    BgkCollision bgk(1.0);
    step(a, bgk);
    stream(b);
    CHECK(max_field_diff(a, b) < 1e-14);
}

TEST_CASE("sqc backend with zero angles reduces to streaming") {
    const int n = 12;
    SqcOperator op;
    op.arch = ArchitectureSpec::blocks(
        2, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    op.theta.assign(op.arch.n_params(), 0.0);
    SqcCollision sqc(op);

    Grid a = init_taylor_green(n, n, 0.01);
    Grid b = a;
    for (int t = 0; t < 3; ++t) {
        step(a, sqc);
        stream(b);
    }
    CHECK(max_field_diff(a, b) < 1e-12);
}

TEST_CASE("sqc collisions conserve mass per node") {
    Rng rng(17);
    SqcOperator op;
    op.arch = ArchitectureSpec::blocks(
        3, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    op.theta.resize(op.arch.n_params());
    for (double& t : op.theta) t = rng.uniform(-3.0, 3.0);
    SqcCollision sqc(op);

    Grid g = init_taylor_green(10, 10, 0.01);
    for (int t = 0; t < 5; ++t) {
        const StepStats stats = step(g, sqc);
        CHECK(stats.max_node_mass_error < 1e-12);
    }
}

TEST_CASE("collision workers do not change the result") {
    Rng rng(19);
    SqcOperator op;
    op.arch = ArchitectureSpec::blocks(
        2, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    op.theta.resize(op.arch.n_params());
    for (double& t : op.theta) t = rng.uniform(-3.0, 3.0);
    SqcCollision sqc(op);

    Grid a = init_taylor_green(20, 20, 0.01);
    Grid b = a;
    for (int t = 0; t < 3; ++t) {
        step(a, sqc, 0.0, 1);
        step(b, sqc, 0.0, 4);
    }
    CHECK(max_field_diff(a, b) == 0.0);
}

TEST_CASE("simulating commutes with rotating the domain") {
    const int n = 32;
    Grid g = init_taylor_green(n, n, 0.01);
    BgkCollision bgk(0.9);

    for (const D8Label label : {D8Label::R, D8Label::R2, D8Label::S, D8Label::RS}) {
        const D8Element& sigma = d8_element(label);
        Grid rotated_first = transform_grid(g, sigma);
        Grid plain = g;
        for (int t = 0; t < 50; ++t) {
            step(rotated_first, bgk);
            step(plain, bgk);
        }
        const Grid rotated_after = transform_grid(plain, sigma);
        CHECK(max_field_diff(rotated_first, rotated_after) < 1e-10);
    }
}

TEST_CASE("taylor-green decay follows the viscous rate") {
    SimConfig cfg;
    cfg.flow_case = SimCase::TaylorGreen;
    cfg.nx = cfg.ny = 32;
    cfg.tau = 0.8;
    cfg.u0 = 0.005;
    cfg.steps = 400;
    cfg.snapshot_every = 0;
    const RunResult result = run(cfg);

    const double k = 2.0 * std::numbers::pi / 32;
    const double expected = 2.0 * viscosity(0.8) * k * k;
    const double fitted = fit_decay_rate(result.metrics.peak_speed);
    CHECK(std::abs(fitted - expected) / expected < 0.025);

    for (const MassAuditRow& row : result.metrics.mass_audit) {
        CHECK(row.relative_drift < 1e-12);
    }
}

TEST_CASE("zero steps returns the initial snapshot") {
    SimConfig cfg;
    cfg.nx = cfg.ny = 8;
    cfg.steps = 0;
    const RunResult result = run(cfg);
    REQUIRE(!result.snapshots.empty());
    CHECK(result.snapshots.back().t == 0);
    const Grid g = init_taylor_green(8, 8, cfg.u0);
    const FieldSnapshot expect = snapshot(g, 0);
    for (size_t i = 0; i < expect.rho.size(); ++i) {
        CHECK(result.snapshots.back().rho[i] == expect.rho[i]);
        CHECK(result.snapshots.back().ux[i] == expect.ux[i]);
    }
}

TEST_CASE("cavity tau comes from the reynolds number") {
    SimConfig cfg;
    cfg.flow_case = SimCase::LidCavity;
    CHECK(cfg.resolved_tau() == doctest::Approx(0.9992).epsilon(1e-12));
    cfg.tau = 0.7;
    CHECK(cfg.resolved_tau() == 0.7);
    SimConfig tg;
    CHECK(tg.resolved_tau() == 1.0);
}

TEST_CASE("centerline profiles") {
    SUBCASE("rest field gives zeros") {
        Grid g = init_taylor_green(8, 8, 0.0);
        const CenterlineProfiles p = centerline_profiles(snapshot(g, 0), 0.01);
        for (double v : p.ux_vertical) CHECK(v == 0.0);
        for (double v : p.uy_horizontal) CHECK(v == 0.0);
    }
    SUBCASE("initial taylor-green matches the closed form") {
        const int n = 64;
        const double u0 = 0.01;
        Grid g = init_taylor_green(n, n, u0);
        const CenterlineProfiles p = centerline_profiles(snapshot(g, 0), u0);
        const double k = 2.0 * std::numbers::pi / n;
        for (int y = 0; y < n; ++y) {
            const double expect_ux = std::sin(k * (n / 2)) * std::cos(k * y);
            const double expect_uy = -std::cos(k * (n / 2)) * std::sin(k * y);
            CHECK(std::abs(p.ux_vertical[static_cast<size_t>(y)] - expect_ux) < 1e-12);
            CHECK(std::abs(p.uy_vertical[static_cast<size_t>(y)] - expect_uy) < 1e-12);
        }
        for (int x = 0; x < n; ++x) {
            const double expect_uy = -std::cos(k * x) * std::sin(k * (n / 2));
            CHECK(std::abs(p.uy_horizontal[static_cast<size_t>(x)] - expect_uy) < 1e-12);
        }
    }
}

TEST_CASE("error fields") {
    Grid g = init_taylor_green(16, 16, 0.01);
    const FieldSnapshot a = snapshot(g, 0);

    SUBCASE("identical snapshots give zero error") {
        const ErrorFields e = error_fields(a, a);
        CHECK(e.max_relative == 0.0);
        CHECK(e.max_absolute == 0.0);
        CHECK(e.mean_relative == 0.0);
    }
    SUBCASE("a uniform 5% magnitude offset") {
        FieldSnapshot b = a;
        for (size_t i = 0; i < b.ux.size(); ++i) {
            b.ux[i] *= 1.05;
            b.uy[i] *= 1.05;
        }
        const ErrorFields e = error_fields(b, a);
        for (size_t i = 0; i < e.relative.size(); ++i) {
            const double speed = std::hypot(a.ux[i], a.uy[i]);
            if (speed > 1e-9) {
                CHECK(e.relative[i] == doctest::Approx(0.05).epsilon(1e-9));
            }
        }
    }
    SUBCASE("shape mismatch is an error") {
        Grid h = init_taylor_green(8, 8, 0.01);
        CHECK_THROWS_AS(error_fields(a, snapshot(h, 0)), std::invalid_argument);
    }
}
