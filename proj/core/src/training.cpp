#include "sqc/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sqc/rng.hpp"

namespace sqc {

GeneratedData generate_dataset(const DataGenConfig& cfg) {
    if (!(cfg.rho_min > 0.0) || cfg.rho_max < cfg.rho_min ||
        cfg.speed_min < 0.0 || cfg.speed_max < cfg.speed_min ||
        cfg.sigma_neq_min < 0.0 || cfg.sigma_neq_max < cfg.sigma_neq_min) {
        throw std::invalid_argument("generate_dataset: invalid sampling ranges");
    }
    if (!(cfg.tau > 0.5)) {
        throw std::invalid_argument("generate_dataset: tau must exceed 1/2, got " +
                                    std::to_string(cfg.tau));
    }
    if (cfg.test_split < 0.0 || cfg.test_split >= 1.0) {
        throw std::invalid_argument("generate_dataset: test_split must lie in [0, 1)");
    }

    Rng rng(cfg.seed);
    GeneratedData out;
    const uint64_t n_test =
        static_cast<uint64_t>(std::llround(static_cast<double>(cfg.n_samples) * cfg.test_split));
    out.test.samples.reserve(n_test);
    out.train.samples.reserve(cfg.n_samples - n_test);

    for (uint64_t n = 0; n < cfg.n_samples; ++n) {
        Sample s;
        for (;;) {
            const double rho = rng.uniform(cfg.rho_min, cfg.rho_max);
            const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double sigma = rng.uniform(cfg.sigma_neq_min, cfg.sigma_neq_max);
            const Vec2 u{speed * std::cos(angle), speed * std::sin(angle)};
            s.pre = equilibrium(rho, u);
            bool ok = true;
            for (double& fi : s.pre) {
                fi += sigma * rng.normal();
                ok = ok && fi >= 0.0;
            }
            if (ok) break;
            ++out.rejected;
        }
        s.post = bgk_collide(s.pre, cfg.tau);
        // Deterministic split: the tail of the stream is the test set.
        if (n < cfg.n_samples - n_test) {
            out.train.samples.push_back(s);
        } else {
            out.test.samples.push_back(s);
        }
    }
    return out;
}

double mse_loss(std::span<const Field16> pred, std::span<const Field16> target) {
    if (pred.size() != target.size() || pred.empty()) {
        throw std::invalid_argument("mse_loss: batch size mismatch or empty batch");
    }
    double sum = 0.0;
    for (size_t b = 0; b < pred.size(); ++b) {
        for (int k = 0; k < kDim; ++k) {
            const double d = target[b][static_cast<size_t>(k)] - pred[b][static_cast<size_t>(k)];
            sum += d * d;
        }
    }
    return sum / (static_cast<double>(pred.size()) * kDim);
}

double momentum_penalty(std::span<const Populations> pred,
                        std::span<const Populations> target) {
    if (pred.size() != target.size() || pred.empty()) {
        throw std::invalid_argument("momentum_penalty: batch size mismatch or empty batch");
    }
    double sum = 0.0;
    for (size_t b = 0; b < pred.size(); ++b) {
        double dpx = 0.0;
        double dpy = 0.0;
        for (int i = 0; i < Lattice::kQ; ++i) {
            const double d = target[b][static_cast<size_t>(i)] - pred[b][static_cast<size_t>(i)];
            dpx += d * Lattice::velocities[static_cast<size_t>(i)][0];
            dpy += d * Lattice::velocities[static_cast<size_t>(i)][1];
        }
        sum += dpx * dpx + dpy * dpy;
    }
    return sum / static_cast<double>(pred.size());
}

LossTerms loss_terms(std::span<const Field16> pred, std::span<const Field16> target,
                     double alpha) {
    LossTerms terms;
    terms.mse = mse_loss(pred, target);
    std::vector<Populations> p9(pred.size());
    std::vector<Populations> t9(target.size());
    for (size_t b = 0; b < pred.size(); ++b) {
        p9[b] = extract_populations(pred[b]);
        t9[b] = extract_populations(target[b]);
    }
    terms.momentum = momentum_penalty(p9, t9);
    terms.total = terms.mse + alpha * terms.momentum;
    return terms;
}

Sample16 to_sample16(const Sample& s) {
    return {embed_populations(s.pre), embed_populations(s.post)};
}

std::array<double, 9> accuracy(const Dataset& test, const ArchitectureSpec& arch,
                               std::span<const double> theta, double epsilon) {
    std::array<double, 9> acc{};
    if (test.empty()) {
        return acc;
    }
    std::array<uint64_t, 9> hits{};
    for (const Sample& s : test.samples) {
        const Field16 fhat = collide_sqc(arch, theta, embed_populations(s.pre));
        const Populations pred = extract_populations(fhat);
        for (size_t i = 0; i < 9; ++i) {
            if (std::abs(pred[i] - s.post[i]) < epsilon) {
                ++hits[i];
            }
        }
    }
    for (size_t i = 0; i < 9; ++i) {
        acc[i] = static_cast<double>(hits[i]) / static_cast<double>(test.size());
    }
    return acc;
}

double relative_momentum_loss(const Dataset& test, const ArchitectureSpec& arch,
                              std::span<const double> theta) {
    double sum = 0.0;
    uint64_t counted = 0;
    for (const Sample& s : test.samples) {
        const Field16 fhat = collide_sqc(arch, theta, embed_populations(s.pre));
        const Populations pred = extract_populations(fhat);
        double px = 0.0, py = 0.0, qx = 0.0, qy = 0.0;
        for (int i = 0; i < Lattice::kQ; ++i) {
            px += s.post[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][0];
            py += s.post[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][1];
            qx += pred[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][0];
            qy += pred[static_cast<size_t>(i)] * Lattice::velocities[static_cast<size_t>(i)][1];
        }
        const double pnorm = std::hypot(px, py);
        if (pnorm < 1e-12) {
            continue;
        }
        sum += std::hypot(px - qx, py - qy) / pnorm;
        ++counted;
    }
    return counted ? sum / static_cast<double>(counted) : 0.0;
}

double AlphaSchedule::at(uint64_t iteration, uint64_t total_iterations) const {
    if (!enabled()) {
        return 0.0;
    }
    if (alpha_max <= alpha0) {
        return alpha_max;
    }
    const uint64_t last_stage =
        total_iterations > 0 ? (total_iterations - 1) / step_every : 0;
    if (last_stage == 0) {
        return alpha0;
    }
    const uint64_t stage = std::min(iteration / step_every, last_stage);
    const double t = static_cast<double>(stage) / static_cast<double>(last_stage);
    return alpha0 * std::pow(alpha_max / alpha0, t);
}

namespace {

double validation_mse(const ArchitectureSpec& arch, std::span<const double> theta,
                      std::span<const Sample16> val) {
    double sum = 0.0;
    for (const Sample16& s : val) {
        const Field16 fhat = collide_sqc(arch, theta, s.pre);
        for (int k = 0; k < kDim; ++k) {
            const double d = s.post[static_cast<size_t>(k)] - fhat[static_cast<size_t>(k)];
            sum += d * d;
        }
    }
    return sum / (static_cast<double>(val.size()) * kDim);
}

}  // namespace

std::pair<Checkpoint, TrainReport> train(const TrainConfig& cfg, const Dataset& data,
                                         const Checkpoint* resume) {
    const size_t n_layers = cfg.arch.n_params();
    if (n_layers == 0) {
        throw std::invalid_argument("train: architecture has no layers");
    }
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("train: batch size must be positive");
    }

    // Fixed held-out slice at the end of the dataset for the validation
    // curve; batches come from the remainder.
    const size_t n = data.size();
    const size_t n_val = std::min<size_t>(1000, std::max<size_t>(1, n / 100));
    if (n < n_val + cfg.batch_size) {
        throw std::invalid_argument(
            "train: dataset too small for batch size plus validation slice");
    }
    const size_t n_pool = n - n_val;

    std::vector<Sample16> pool(n_pool);
    for (size_t i = 0; i < n_pool; ++i) {
        pool[i] = to_sample16(data.samples[i]);
    }
    std::vector<Sample16> val(n_val);
    for (size_t i = 0; i < n_val; ++i) {
        val[i] = to_sample16(data.samples[n_pool + i]);
    }

    Rng rng(cfg.seed);
    Checkpoint ckpt;
    ckpt.config = cfg;
    uint64_t start_iter = 0;
    if (resume) {
        if (resume->config.arch != cfg.arch) {
            throw std::invalid_argument("train: resume checkpoint architecture differs");
        }
        ckpt.theta = resume->theta;
        start_iter = resume->iteration;
    } else {
        ckpt.theta.resize(n_layers);
        for (double& t : ckpt.theta) {
            t = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
    }
    const uint64_t end_iter = start_iter + cfg.iterations;

    TrainReport report;
    report.val_samples = n_val;
    report.initial_val_mse = validation_mse(cfg.arch, ckpt.theta, val);

    std::vector<size_t> order(n_pool);
    std::iota(order.begin(), order.end(), size_t{0});
    size_t cursor = n_pool;  // forces a shuffle before the first batch

    std::vector<Sample16> batch(cfg.batch_size);
    std::vector<Field16> preds;
    std::vector<Field16> targets(cfg.batch_size);
    double last_loss = 0.0;

    for (uint64_t iter = start_iter; iter < end_iter; ++iter) {
        if (cursor + cfg.batch_size > n_pool) {
            for (size_t i = n_pool - 1; i > 0; --i) {
                std::swap(order[i], order[rng.below(i + 1)]);
            }
            cursor = 0;
        }
        for (size_t b = 0; b < cfg.batch_size; ++b) {
            batch[b] = pool[order[cursor + b]];
            targets[b] = batch[b].post;
        }
        cursor += cfg.batch_size;

        const double alpha = cfg.alpha.at(iter, end_iter);
        const std::vector<double> grad =
            loss_gradient(cfg.arch, ckpt.theta, batch, alpha, &preds);
        const LossTerms loss = loss_terms(preds, targets, alpha);
        last_loss = loss.total;

        bool finite = std::isfinite(loss.total);
        for (double g : grad) {
            finite = finite && std::isfinite(g);
        }
        if (!finite) {
            std::string diag = "train: non-finite loss or gradient at iteration " +
                               std::to_string(iter) + "; theta =";
            for (double t : ckpt.theta) {
                diag += ' ' + std::to_string(t);
            }
            throw std::runtime_error(diag);
        }

        if (iter % cfg.val_every == 0) {
            report.curve.push_back(
                {iter, loss.total, validation_mse(cfg.arch, ckpt.theta, val), alpha});
        }

        for (size_t l = 0; l < n_layers; ++l) {
            ckpt.theta[l] -= cfg.learning_rate * grad[l];
        }
    }

    ckpt.iteration = end_iter;
    report.final_val_mse = validation_mse(cfg.arch, ckpt.theta, val);
    report.curve.push_back({end_iter, last_loss, report.final_val_mse,
                            cfg.alpha.at(end_iter ? end_iter - 1 : 0, end_iter)});

    Dataset val9;
    val9.samples.reserve(n_val);
    for (size_t i = 0; i < n_val; ++i) {
        val9.samples.push_back(data.samples[n_pool + i]);
    }
    report.accuracy = accuracy(val9, cfg.arch, ckpt.theta, cfg.epsilon_acc);
    report.relative_momentum_loss = relative_momentum_loss(val9, cfg.arch, ckpt.theta);
    return {ckpt, report};
}

}  // namespace sqc
