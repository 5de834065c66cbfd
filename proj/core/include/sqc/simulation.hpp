#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqc/circuit.hpp"

namespace sqc {

enum class NodeKind : uint8_t { Fluid, Wall, MovingLid };

/// 2D field of 16-slot populations, double buffered. Physical populations
/// live at their basis slots; the seven surplus slots carry mass with zero
/// discrete velocity and never stream.
struct Grid {
    int nx{};
    int ny{};
    std::vector<Field16> f;
    std::vector<Field16> f_next;
    std::vector<NodeKind> kind;

    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(nx) + static_cast<size_t>(x);
    }
    Field16& at(int x, int y) { return f[index(x, y)]; }
    const Field16& at(int x, int y) const { return f[index(x, y)]; }
    NodeKind kind_at(int x, int y) const { return kind[index(x, y)]; }

    /// Mass summed over every node and slot, fixed accumulation order.
    double total_mass() const;
};

enum class SimCase : uint8_t { TaylorGreen, LidCavity };
enum class CollisionBackendKind : uint8_t { BGK, SQC };

struct SimConfig {
    SimCase flow_case = SimCase::TaylorGreen;
    int nx = 64;
    int ny = 64;
    std::optional<double> tau;  // defaults: 1 for Taylor-Green, from Re for the cavity
    double u0 = 0.01;
    double u_lid = 0.026;
    double reynolds = 10.0;
    int steps = 1000;
    CollisionBackendKind backend = CollisionBackendKind::BGK;
    std::string checkpoint_path;
    int snapshot_every = 100;
    int threads = 1;

    double resolved_tau() const;
    double reference_velocity() const;
};

/// Fully periodic grid at rho = 1 with
///   u_x =  u0 sin(kx x) cos(ky y),  u_y = -u0 cos(kx x) sin(ky y),
/// kx = 2 pi / nx, ky = 2 pi / ny; every node starts at local equilibrium.
Grid init_taylor_green(int nx, int ny, double u0);

/// Closed box: solid ring with the top row marked as the moving lid,
/// interior fluid at rest equilibrium.
Grid init_lid_cavity(int nx, int ny);

/// Node-local collision rule applied to the 16 slots. Returns the absolute
/// change of the node's total mass (the per-node conservation audit).
class CollisionOperator {
  public:
    virtual ~CollisionOperator() = default;
    virtual double collide(Field16& f) const = 0;
};

class BgkCollision final : public CollisionOperator {
  public:
    explicit BgkCollision(double tau);
    double collide(Field16& f) const override;

  private:
    double tau_;
};

struct SqcOperator {
    ArchitectureSpec arch;
    std::vector<double> theta;
};

class SqcCollision final : public CollisionOperator {
  public:
    explicit SqcCollision(const SqcOperator& op) : op_(op) {}
    double collide(Field16& f) const override;

  private:
    const SqcOperator& op_;
};

/// Streaming with periodic wrap plus halfway bounce-back into solid
/// neighbors (with the momentum correction on moving-lid nodes). The rest
/// population and the surplus slots stay in place. Swaps the buffers.
void stream(Grid& grid, double u_lid = 0.0);

struct StepStats {
    double max_node_mass_error{};
};

/// Collision on every fluid node followed by stream(). Collision may be
/// split over `threads` workers; the result does not depend on the worker
/// count.
StepStats step(Grid& grid, const CollisionOperator& op, double u_lid = 0.0,
               int threads = 1);

struct FieldSnapshot {
    int t{};
    int nx{};
    int ny{};
    std::vector<double> rho;  // all 16 slots
    std::vector<double> ux;   // physical slots only
    std::vector<double> uy;

    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(nx) + static_cast<size_t>(x);
    }
    double speed(int x, int y) const;
};

FieldSnapshot snapshot(const Grid& grid, int t);

struct MassAuditRow {
    int t{};
    double total_mass{};
    double relative_drift{};
    double max_node_mass_error{};
};

struct RunMetrics {
    std::vector<std::pair<int, double>> peak_speed;  // (t, max |u|)
    std::vector<MassAuditRow> mass_audit;
};

struct RunResult {
    std::vector<FieldSnapshot> snapshots;  // cadence dumps plus the final state
    RunMetrics metrics;
};

/// Drive a configured case for cfg.steps steps. The SQC backend requires
/// the trained operator.
RunResult run(const SimConfig& cfg, const SqcOperator* sqc = nullptr);

struct CenterlineProfiles {
    std::vector<double> y;              // along the vertical mid-line x = nx/2
    std::vector<double> ux_vertical;    // normalized by uref
    std::vector<double> uy_vertical;
    std::vector<double> x;              // along the horizontal mid-line y = ny/2
    std::vector<double> ux_horizontal;
    std::vector<double> uy_horizontal;
    double uref{1.0};
};

CenterlineProfiles centerline_profiles(const FieldSnapshot& s, double uref);

struct ErrorFields {
    int nx{};
    int ny{};
    std::vector<double> relative;  // | |u_a| - |u_b| | / max(|u_b|, floor)
    std::vector<double> absolute;  // | |u_a| - |u_b| |
    double mean_relative{};
    double max_relative{};
    int max_relative_x{}, max_relative_y{};
    double mean_absolute{};
    double max_absolute{};
    int max_absolute_x{}, max_absolute_y{};
};

/// Velocity-magnitude error of a against reference b. The floor guards
/// stagnant regions. Throws if the shapes differ.
ErrorFields error_fields(const FieldSnapshot& a, const FieldSnapshot& b,
                         double floor = 1e-12);

/// Least-squares exponential decay rate of a positive series: fits
/// ln v = c - rate * t and returns rate.
double fit_decay_rate(const std::vector<std::pair<int, double>>& series);

}  // namespace sqc
