#include "sqc/simulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace sqc {

double Grid::total_mass() const {
    double sum = 0.0;
    for (const Field16& node : f) {
        for (double v : node) {
            sum += v;
        }
    }
    return sum;
}

double SimConfig::resolved_tau() const {
    if (tau) {
        return *tau;
    }
    if (flow_case == SimCase::TaylorGreen) {
        return 1.0;
    }
    // Cavity: nu = u_lid * nx / Re, tau = nu / cs2 + 1/2.
    const double nu = u_lid * nx / reynolds;
    return nu / Lattice::cs2 + 0.5;
}

double SimConfig::reference_velocity() const {
    return flow_case == SimCase::TaylorGreen ? u0 : u_lid;
}

Grid init_taylor_green(int nx, int ny, double u0) {
    if (nx <= 0 || ny <= 0) {
        throw std::invalid_argument("init_taylor_green: grid extents must be positive");
    }
    Grid grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.f.resize(static_cast<size_t>(nx) * static_cast<size_t>(ny));
    grid.kind.assign(grid.f.size(), NodeKind::Fluid);
    const double kx = 2.0 * std::numbers::pi / nx;
    const double ky = 2.0 * std::numbers::pi / ny;
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const Vec2 u{u0 * std::sin(kx * x) * std::cos(ky * y),
                         -u0 * std::cos(kx * x) * std::sin(ky * y)};
            grid.f[grid.index(x, y)] = embed_populations(equilibrium(1.0, u));
        }
    }
    grid.f_next = grid.f;
    return grid;
}

Grid init_lid_cavity(int nx, int ny) {
    if (nx <= 2 || ny <= 2) {
        throw std::invalid_argument("init_lid_cavity: grid must be larger than 2x2");
    }
    Grid grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.f.assign(static_cast<size_t>(nx) * static_cast<size_t>(ny), Field16{});
    grid.kind.assign(grid.f.size(), NodeKind::Fluid);
    const Field16 rest = embed_populations(equilibrium(1.0, {0.0, 0.0}));
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const size_t i = grid.index(x, y);
            if (y == ny - 1) {
                grid.kind[i] = NodeKind::MovingLid;
            } else if (x == 0 || x == nx - 1 || y == 0) {
                grid.kind[i] = NodeKind::Wall;
            } else {
                grid.f[i] = rest;
            }
        }
    }
    grid.f_next = grid.f;
    return grid;
}

BgkCollision::BgkCollision(double tau) : tau_(tau) {
    if (!(tau > 0.5)) {
        throw std::invalid_argument("BgkCollision: tau must exceed 1/2, got " +
                                    std::to_string(tau));
    }
}

double BgkCollision::collide(Field16& f) const {
    const Populations in = extract_populations(f);
    const Populations out = bgk_collide(in, tau_);
    double err = 0.0;
    for (size_t i = 0; i < in.size(); ++i) {
        err += out[i] - in[i];
        f[static_cast<size_t>(BasisMap::pop_to_basis[i])] = out[i];
    }
    return std::abs(err);
}

double SqcCollision::collide(Field16& f) const {
    double mass_in = 0.0;
    for (double v : f) {
        mass_in += v;
    }
    f = collide_sqc(op_.arch, op_.theta, f);
    double mass_out = 0.0;
    for (double v : f) {
        mass_out += v;
    }
    return std::abs(mass_out - mass_in);
}

void stream(Grid& grid, double u_lid) {
    const int nx = grid.nx;
    const int ny = grid.ny;
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const size_t src = grid.index(x, y);
            if (grid.kind[src] != NodeKind::Fluid) {
                continue;
            }
            const Field16& fs = grid.f[src];
            Field16& self = grid.f_next[src];
            // Rest population and surplus slots stay put.
            self[0] = fs[0];
            for (int sk : BasisMap::surplus) {
                self[static_cast<size_t>(sk)] = fs[static_cast<size_t>(sk)];
            }
            double rho_node = -1.0;
            for (int i = 1; i < Lattice::kQ; ++i) {
                const auto& e = Lattice::velocities[static_cast<size_t>(i)];
                const int tx = (x + e[0] + nx) % nx;
                const int ty = (y + e[1] + ny) % ny;
                const size_t dst = grid.index(tx, ty);
                const int slot = BasisMap::pop_to_basis[static_cast<size_t>(i)];
                const NodeKind target = grid.kind[dst];
                if (target == NodeKind::Fluid) {
                    grid.f_next[dst][static_cast<size_t>(slot)] =
                        fs[static_cast<size_t>(slot)];
                    continue;
                }
                // Halfway bounce-back into the opposite direction at the
                // source node; the lid adds the momentum correction
                // -2 w_i rho_w (e_i . u_wall) / cs2 using this node's density.
                const int ri = Lattice::opposite[static_cast<size_t>(i)];
                const int rslot = BasisMap::pop_to_basis[static_cast<size_t>(ri)];
                double value = fs[static_cast<size_t>(slot)];
                if (target == NodeKind::MovingLid && u_lid != 0.0) {
                    if (rho_node < 0.0) {
                        rho_node = 0.0;
                        for (double v : fs) {
                            rho_node += v;
                        }
                    }
                    value -= 2.0 * Lattice::weight(i) * rho_node * (e[0] * u_lid) /
                             Lattice::cs2;
                }
                self[static_cast<size_t>(rslot)] = value;
            }
        }
    }
    std::swap(grid.f, grid.f_next);
}

StepStats step(Grid& grid, const CollisionOperator& op, double u_lid, int threads) {
    const size_t n = grid.f.size();
    StepStats stats;
    const auto collide_range = [&](size_t begin, size_t end, double& max_err) {
        double local = 0.0;
        for (size_t i = begin; i < end; ++i) {
            if (grid.kind[i] == NodeKind::Fluid) {
                local = std::max(local, op.collide(grid.f[i]));
            }
        }
        max_err = local;
    };
    if (threads <= 1) {
        collide_range(0, n, stats.max_node_mass_error);
    } else {
        const size_t workers = std::min<size_t>(static_cast<size_t>(threads), n);
        std::vector<double> errs(workers, 0.0);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) {
            const size_t begin = n * w / workers;
            const size_t end = n * (w + 1) / workers;
            pool.emplace_back(collide_range, begin, end, std::ref(errs[w]));
        }
        for (auto& t : pool) {
            t.join();
        }
        for (double e : errs) {
            stats.max_node_mass_error = std::max(stats.max_node_mass_error, e);
        }
    }
    stream(grid, u_lid);
    return stats;
}

double FieldSnapshot::speed(int x, int y) const {
    const size_t i = index(x, y);
    return std::hypot(ux[i], uy[i]);
}

FieldSnapshot snapshot(const Grid& grid, int t) {
    FieldSnapshot s;
    s.t = t;
    s.nx = grid.nx;
    s.ny = grid.ny;
    const size_t n = grid.f.size();
    s.rho.resize(n);
    s.ux.resize(n);
    s.uy.resize(n);
    for (size_t i = 0; i < n; ++i) {
        // Momentum in population order (opposite pairs cancel exactly);
        // the surplus slots contribute mass only.
        double rho = 0.0;
        double px = 0.0;
        double py = 0.0;
        for (int q = 0; q < Lattice::kQ; ++q) {
            const double fq =
                grid.f[i][static_cast<size_t>(BasisMap::pop_to_basis[static_cast<size_t>(q)])];
            rho += fq;
            px += fq * Lattice::velocities[static_cast<size_t>(q)][0];
            py += fq * Lattice::velocities[static_cast<size_t>(q)][1];
        }
        for (int k : BasisMap::surplus) {
            rho += grid.f[i][static_cast<size_t>(k)];
        }
        s.rho[i] = rho;
        if (rho > 0.0) {
            s.ux[i] = px / rho;
            s.uy[i] = py / rho;
        } else {
            s.ux[i] = 0.0;
            s.uy[i] = 0.0;
        }
    }
    return s;
}

RunResult run(const SimConfig& cfg, const SqcOperator* sqc) {
    Grid grid = cfg.flow_case == SimCase::TaylorGreen
                    ? init_taylor_green(cfg.nx, cfg.ny, cfg.u0)
                    : init_lid_cavity(cfg.nx, cfg.ny);
    const double u_lid = cfg.flow_case == SimCase::LidCavity ? cfg.u_lid : 0.0;

    std::unique_ptr<CollisionOperator> op;
    if (cfg.backend == CollisionBackendKind::BGK) {
        op = std::make_unique<BgkCollision>(cfg.resolved_tau());
    } else {
        if (!sqc) {
            throw std::invalid_argument("run: SQC backend requires a trained operator");
        }
        op = std::make_unique<SqcCollision>(*sqc);
    }

    RunResult result;
    const double mass0 = grid.total_mass();
    const auto record = [&](int t, double max_node_err) {
        const FieldSnapshot snap = snapshot(grid, t);
        double peak = 0.0;
        for (size_t i = 0; i < snap.ux.size(); ++i) {
            peak = std::max(peak, std::hypot(snap.ux[i], snap.uy[i]));
        }
        result.metrics.peak_speed.emplace_back(t, peak);
        const double mass = grid.total_mass();
        result.metrics.mass_audit.push_back(
            {t, mass, std::abs(mass - mass0) / mass0, max_node_err});
        if (cfg.snapshot_every > 0 && (t % cfg.snapshot_every == 0 || t == cfg.steps)) {
            result.snapshots.push_back(snap);
        }
        return snap;
    };

    record(0, 0.0);
    for (int t = 1; t <= cfg.steps; ++t) {
        const StepStats stats = step(grid, *op, u_lid, cfg.threads);
        record(t, stats.max_node_mass_error);
    }
    if (result.snapshots.empty() || result.snapshots.back().t != cfg.steps) {
        result.snapshots.push_back(snapshot(grid, cfg.steps));
    }
    return result;
}

CenterlineProfiles centerline_profiles(const FieldSnapshot& s, double uref) {
    if (uref == 0.0) {
        uref = 1.0;
    }
    CenterlineProfiles p;
    p.uref = uref;
    const int xm = s.nx / 2;
    const int ym = s.ny / 2;
    p.y.reserve(static_cast<size_t>(s.ny));
    for (int y = 0; y < s.ny; ++y) {
        const size_t i = s.index(xm, y);
        p.y.push_back(y);
        p.ux_vertical.push_back(s.ux[i] / uref);
        p.uy_vertical.push_back(s.uy[i] / uref);
    }
    p.x.reserve(static_cast<size_t>(s.nx));
    for (int x = 0; x < s.nx; ++x) {
        const size_t i = s.index(x, ym);
        p.x.push_back(x);
        p.ux_horizontal.push_back(s.ux[i] / uref);
        p.uy_horizontal.push_back(s.uy[i] / uref);
    }
    return p;
}

ErrorFields error_fields(const FieldSnapshot& a, const FieldSnapshot& b, double floor) {
    if (a.nx != b.nx || a.ny != b.ny) {
        throw std::invalid_argument(
            "error_fields: snapshot shapes differ (" + std::to_string(a.nx) + "x" +
            std::to_string(a.ny) + " vs " + std::to_string(b.nx) + "x" +
            std::to_string(b.ny) + ")");
    }
    ErrorFields e;
    e.nx = a.nx;
    e.ny = a.ny;
    const size_t n = a.ux.size();
    e.relative.resize(n);
    e.absolute.resize(n);
    double sum_rel = 0.0;
    double sum_abs = 0.0;
    for (int y = 0; y < a.ny; ++y) {
        for (int x = 0; x < a.nx; ++x) {
            const size_t i = a.index(x, y);
            const double ua = std::hypot(a.ux[i], a.uy[i]);
            const double ub = std::hypot(b.ux[i], b.uy[i]);
            const double abs_err = std::abs(ua - ub);
            const double rel_err = abs_err / std::max(ub, floor);
            e.absolute[i] = abs_err;
            e.relative[i] = rel_err;
            sum_abs += abs_err;
            sum_rel += rel_err;
            if (abs_err > e.max_absolute) {
                e.max_absolute = abs_err;
                e.max_absolute_x = x;
                e.max_absolute_y = y;
            }
            if (rel_err > e.max_relative) {
                e.max_relative = rel_err;
                e.max_relative_x = x;
                e.max_relative_y = y;
            }
        }
    }
    e.mean_absolute = sum_abs / static_cast<double>(n);
    e.mean_relative = sum_rel / static_cast<double>(n);
    return e;
}

double fit_decay_rate(const std::vector<std::pair<int, double>>& series) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    size_t n = 0;
    for (const auto& [t, v] : series) {
        if (!(v > 0.0)) {
            continue;
        }
        const double x = static_cast<double>(t);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) {
        throw std::invalid_argument("fit_decay_rate: need at least two positive points");
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    return -slope;
}

}  // namespace sqc
