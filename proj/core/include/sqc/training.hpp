#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sqc/circuit.hpp"

namespace sqc {

/// One supervised pair: pre-collision populations and the BGK output.
struct Sample {
    Populations pre{};
    Populations post{};
};

struct Dataset {
    std::vector<Sample> samples;

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

struct DataGenConfig {
    uint64_t n_samples = 1'000'000;
    double rho_min = 0.95;
    double rho_max = 1.05;
    double speed_min = 0.0;
    double speed_max = 0.01;
    double sigma_neq_min = 0.0;
    double sigma_neq_max = 5e-4;
    double tau = 1.0;
    double test_split = 0.001;
    uint64_t seed = 1;
};

struct GeneratedData {
    Dataset train;
    Dataset test;
    uint64_t rejected = 0;  // redraws caused by a negative population
};

/// Synthetic BGK pairs: equilibrium at uniformly drawn (rho, |u|, angle)
/// plus Gaussian non-equilibrium noise, collided at cfg.tau. Samples with
/// any negative pre-collision population are redrawn. Deterministic for a
/// fixed config.
GeneratedData generate_dataset(const DataGenConfig& cfg);

/// Mean over all 16*B squared slot errors.
double mse_loss(std::span<const Field16> pred, std::span<const Field16> target);

/// Mean over the batch of the squared momentum mismatch, physical slots only.
double momentum_penalty(std::span<const Populations> pred,
                        std::span<const Populations> target);

LossTerms loss_terms(std::span<const Field16> pred, std::span<const Field16> target,
                     double alpha);

/// Per-population fraction of test predictions within epsilon of the BGK
/// output.
std::array<double, 9> accuracy(const Dataset& test, const ArchitectureSpec& arch,
                               std::span<const double> theta, double epsilon);

/// Mean of |p - p_hat| / |p| over the test set; samples with |p| below
/// 1e-12 are skipped.
double relative_momentum_loss(const Dataset& test, const ArchitectureSpec& arch,
                              std::span<const double> theta);

/// Momentum-penalty weight schedule: alpha0 at the start, stepped every
/// `step_every` iterations along a geometric ramp that reaches alpha_max in
/// the final stage. alpha_max = 0 disables the penalty entirely.
struct AlphaSchedule {
    double alpha0 = 1e-4;
    uint64_t step_every = 10'000;
    double alpha_max = 0.5;

    bool enabled() const { return alpha_max > 0.0; }
    double at(uint64_t iteration, uint64_t total_iterations) const;
};

struct TrainConfig {
    ArchitectureSpec arch;
    double learning_rate = 0.05;
    uint64_t iterations = 750'000;
    uint64_t batch_size = 5;
    AlphaSchedule alpha;
    double epsilon_acc = 1e-5;
    uint64_t seed = 1;
    uint64_t val_every = 1'000;
};

/// Trained parameters plus everything needed to reproduce the run.
struct Checkpoint {
    TrainConfig config;
    std::vector<double> theta;
    uint64_t iteration = 0;
};

struct LossCurvePoint {
    uint64_t iteration{};
    double train_loss{};
    double val_mse{};
    double alpha{};
};

struct TrainReport {
    std::vector<LossCurvePoint> curve;
    std::array<double, 9> accuracy{};
    double relative_momentum_loss{};
    double initial_val_mse{};
    double final_val_mse{};
    uint64_t val_samples{};
};

/// Mini-batch gradient descent, theta <- theta - lr * grad. A slice of the
/// dataset is held out for the validation curve and final metrics; batches
/// are drawn from the rest with per-epoch reshuffling. Deterministic for a
/// fixed (config, dataset). Aborts with a diagnostic if the loss or
/// gradient turns non-finite. Passing `resume` continues from its
/// parameters and iteration count for another cfg.iterations steps.
std::pair<Checkpoint, TrainReport> train(const TrainConfig& cfg, const Dataset& data,
                                         const Checkpoint* resume = nullptr);

/// 16-slot views of a dataset sample (physical slots per the basis map,
/// surplus slots zero).
Sample16 to_sample16(const Sample& s);

}  // namespace sqc
