#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "sqc/circuit.hpp"
#include "sqc/rng.hpp"
#include "sqc/training.hpp"

using namespace sqc;

namespace {

constexpr std::array<LayerKind, 6> kAllKinds{LayerKind::X,       LayerKind::Z,
                                             LayerKind::XXAxial, LayerKind::XXDiag,
                                             LayerKind::ZZAxial, LayerKind::ZZDiag};

Sample16 random_sample(Rng& rng) {
    const double rho = rng.uniform(0.95, 1.05);
    const double speed = rng.uniform(0.0, 0.01);
    const double angle = rng.uniform(0.0, 6.283185307179586);
    Populations pre = equilibrium(rho, {speed * std::cos(angle), speed * std::sin(angle)});
    for (double& v : pre) {
        v += 3e-4 * rng.normal();
        if (v < 0.0) v = 1e-6;
    }
    return {embed_populations(pre), embed_populations(bgk_collide(pre, 1.0))};
}

/// Loss evaluated through the public forward path only; this is the
/// function the finite-difference oracle probes.
double eval_loss(const ArchitectureSpec& arch, const std::vector<double>& theta,
                 const std::vector<Sample16>& batch, double alpha) {
    std::vector<Field16> preds;
    std::vector<Field16> targets;
    preds.reserve(batch.size());
    targets.reserve(batch.size());
    for (const Sample16& s : batch) {
        preds.push_back(collide_sqc(arch, theta, s.pre));
        targets.push_back(s.post);
    }
    return loss_terms(preds, targets, alpha).total;
}

}  // namespace

TEST_CASE("zero residual gives a zero gradient") {
    Rng rng(31);
    const ArchitectureSpec arch = ArchitectureSpec::parse("X,Z,XXA,ZZD");
    const std::vector<double> theta(arch.n_params(), 0.0);
    std::vector<Sample16> batch;
    for (int b = 0; b < 3; ++b) {
        Sample16 s = random_sample(rng);
        s.post = s.pre;  // identity circuit meets the target exactly
        batch.push_back(s);
    }
    const std::vector<double> grad = loss_gradient(arch, theta, batch, 0.0);
    for (double g : grad) {
        CHECK(std::abs(g) < 1e-12);
    }
}

TEST_CASE("phase-only layers on a basis state carry no gradient") {
    ArchitectureSpec arch;
    arch.layers = {LayerKind::Z};
    const std::vector<double> theta{0.83};
    Sample16 s{};
    s.pre[0] = 1.0;
    s.post[1] = 0.5;  // arbitrary non-matching target
    s.post[0] = 0.5;
    const std::vector<double> grad =
        loss_gradient(arch, theta, std::vector<Sample16>{s}, 0.0);
    CHECK(std::abs(grad[0]) < 1e-15);
}

TEST_CASE("adjoint gradient matches central finite differences") {
    Rng rng(33);
    const double h = 1e-6;
    for (int config = 0; config < 20; ++config) {
        ArchitectureSpec arch;
        const size_t depth = 1 + rng.below(8);
        for (size_t l = 0; l < depth; ++l) {
            arch.layers.push_back(kAllKinds[rng.below(6)]);
        }
        std::vector<double> theta(arch.n_params());
        for (double& t : theta) t = rng.uniform(-3.1, 3.1);
        std::vector<Sample16> batch;
        const size_t bsize = 1 + rng.below(5);
        for (size_t b = 0; b < bsize; ++b) {
            batch.push_back(random_sample(rng));
        }
        const double alpha = (config % 2 == 0) ? 0.0 : 0.5;

        const std::vector<double> grad = loss_gradient(arch, theta, batch, alpha);
        for (size_t l = 0; l < theta.size(); ++l) {
            std::vector<double> tp = theta;
            std::vector<double> tm = theta;
            tp[l] += h;
            tm[l] -= h;
            const double fd =
                (eval_loss(arch, tp, batch, alpha) - eval_loss(arch, tm, batch, alpha)) /
                (2.0 * h);
            const double tol = 1e-5 * std::max(std::abs(fd), std::abs(grad[l])) + 1e-10;
            CHECK(std::abs(grad[l] - fd) < tol);
        }
    }
}

TEST_CASE("reported predictions reproduce the loss decomposition") {
    Rng rng(35);
    const ArchitectureSpec arch = ArchitectureSpec::parse("X,Z,XXA,ZZD,X,Z");
    std::vector<double> theta(arch.n_params());
    for (double& t : theta) t = rng.uniform(-2.0, 2.0);
    std::vector<Sample16> batch;
    std::vector<Field16> targets;
    for (int b = 0; b < 5; ++b) {
        batch.push_back(random_sample(rng));
        targets.push_back(batch.back().post);
    }
    std::vector<Field16> preds;
    loss_gradient(arch, theta, batch, 0.5, &preds);
    REQUIRE(preds.size() == batch.size());
    for (size_t b = 0; b < batch.size(); ++b) {
        const Field16 direct = collide_sqc(arch, theta, batch[b].pre);
        for (int k = 0; k < kDim; ++k) {
            CHECK(preds[b][static_cast<size_t>(k)] ==
                  doctest::Approx(direct[static_cast<size_t>(k)]).epsilon(1e-14));
        }
    }
    const LossTerms terms = loss_terms(preds, targets, 0.5);
    CHECK(terms.total == terms.mse + 0.5 * terms.momentum);
}

TEST_CASE("a small step along the negative gradient lowers the loss") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        ArchitectureSpec arch;
        const size_t depth = 2 + rng.below(6);
        for (size_t l = 0; l < depth; ++l) {
            arch.layers.push_back(kAllKinds[rng.below(6)]);
        }
        std::vector<double> theta(arch.n_params());
        for (double& t : theta) t = rng.uniform(-3.0, 3.0);
        std::vector<Sample16> batch{random_sample(rng), random_sample(rng)};
        const double alpha = 0.25;

        const std::vector<double> grad = loss_gradient(arch, theta, batch, alpha);
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (gnorm2 < 1e-20) {
            continue;
        }
        const double before = eval_loss(arch, theta, batch, alpha);
        std::vector<double> stepped = theta;
        const double h = 1e-7;
        for (size_t l = 0; l < stepped.size(); ++l) {
            stepped[l] -= h * grad[l];
        }
        const double after = eval_loss(arch, stepped, batch, alpha);
        CHECK(after < before + 1e-18);
    }
}
