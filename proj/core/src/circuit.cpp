#include "sqc/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace sqc {

const char* to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::X: return "X";
        case LayerKind::Z: return "Z";
        case LayerKind::XXAxial: return "XXA";
        case LayerKind::XXDiag: return "XXD";
        case LayerKind::ZZAxial: return "ZZA";
        case LayerKind::ZZDiag: return "ZZD";
    }
    return "?";
}

LayerKind layer_kind_from_string(const std::string& token) {
    if (token == "X") return LayerKind::X;
    if (token == "Z") return LayerKind::Z;
    if (token == "XXA") return LayerKind::XXAxial;
    if (token == "XXD") return LayerKind::XXDiag;
    if (token == "ZZA") return LayerKind::ZZAxial;
    if (token == "ZZD") return LayerKind::ZZDiag;
    throw std::invalid_argument("unknown layer kind '" + token +
                                "' (expected X, Z, XXA, XXD, ZZA or ZZD)");
}

ArchitectureSpec ArchitectureSpec::blocks(int n, std::span<const LayerKind> block) {
    ArchitectureSpec arch;
    arch.layers.reserve(static_cast<size_t>(n) * block.size());
    for (int i = 0; i < n; ++i) {
        arch.layers.insert(arch.layers.end(), block.begin(), block.end());
    }
    return arch;
}

ArchitectureSpec ArchitectureSpec::blocks(int n, std::initializer_list<LayerKind> block) {
    return blocks(n, std::span<const LayerKind>(block.begin(), block.size()));
}

ArchitectureSpec ArchitectureSpec::parse(const std::string& text) {
    ArchitectureSpec arch;
    std::string token;
    for (size_t pos = 0; pos <= text.size(); ++pos) {
        if (pos == text.size() || text[pos] == ',') {
            if (!token.empty()) {
                arch.layers.push_back(layer_kind_from_string(token));
                token.clear();
            }
        } else if (!std::isspace(static_cast<unsigned char>(text[pos]))) {
            token.push_back(text[pos]);
        }
    }
    if (arch.layers.empty()) {
        throw std::invalid_argument("architecture '" + text + "' has no layers");
    }
    return arch;
}

std::string ArchitectureSpec::to_string() const {
    std::string out;
    for (size_t i = 0; i < layers.size(); ++i) {
        if (i) out += ',';
        out += sqc::to_string(layers[i]);
    }
    return out;
}

namespace {

// Rx(theta) on one qubit: two-level mixing of every |...0_q...>, |...1_q...>
// pair.
void apply_rx(StateVector& s, int qubit, double c, double ms) {
    const int bit = 1 << qubit;
    for (int k = 0; k < kDim; ++k) {
        if (k & bit) continue;
        const Amplitude a0 = s[static_cast<size_t>(k)];
        const Amplitude a1 = s[static_cast<size_t>(k | bit)];
        s[static_cast<size_t>(k)] = c * a0 + Amplitude(0.0, ms) * a1;
        s[static_cast<size_t>(k | bit)] = c * a1 + Amplitude(0.0, ms) * a0;
    }
}

// exp(-i theta/2 XX) on a pair: mixes |k> with |k ^ mask>.
void apply_xx(StateVector& s, int mask, double c, double ms) {
    for (int k = 0; k < kDim; ++k) {
        const int partner = k ^ mask;
        if (partner < k) continue;
        const Amplitude a0 = s[static_cast<size_t>(k)];
        const Amplitude a1 = s[static_cast<size_t>(partner)];
        s[static_cast<size_t>(k)] = c * a0 + Amplitude(0.0, ms) * a1;
        s[static_cast<size_t>(partner)] = c * a1 + Amplitude(0.0, ms) * a0;
    }
}

// Number of set bits among the four register bits.
inline int popcount4(int k) {
    return ((k >> 0) & 1) + ((k >> 1) & 1) + ((k >> 2) & 1) + ((k >> 3) & 1);
}

// sigma_z eigenvalue product over a pair.
inline int zz_sign(int k, int a, int b) {
    const int za = (k >> a) & 1 ? -1 : 1;
    const int zb = (k >> b) & 1 ? -1 : 1;
    return za * zb;
}

}  // namespace

void apply_layer(StateVector& state, LayerKind kind, double theta) {
    const double c = std::cos(theta / 2.0);
    const double ms = -std::sin(theta / 2.0);  // coefficient of i in -i sin
    switch (kind) {
        case LayerKind::X:
            for (int q = 0; q < kNumQubits; ++q) {
                apply_rx(state, q, c, ms);
            }
            return;
        case LayerKind::Z:
            // Each qubit contributes exp(-i theta/2 z_q); the product only
            // depends on sum(z_q) = 4 - 2 popcount(k).
            for (int k = 0; k < kDim; ++k) {
                const double z = 4.0 - 2.0 * popcount4(k);
                state[static_cast<size_t>(k)] *=
                    std::polar(1.0, -0.5 * theta * z);
            }
            return;
        case LayerKind::XXAxial:
            for (const auto& p : kAxialPairs) {
                apply_xx(state, (1 << p[0]) | (1 << p[1]), c, ms);
            }
            return;
        case LayerKind::XXDiag:
            for (const auto& p : kDiagPairs) {
                apply_xx(state, (1 << p[0]) | (1 << p[1]), c, ms);
            }
            return;
        case LayerKind::ZZAxial:
            for (int k = 0; k < kDim; ++k) {
                int zsum = 0;
                for (const auto& p : kAxialPairs) {
                    zsum += zz_sign(k, p[0], p[1]);
                }
                state[static_cast<size_t>(k)] *=
                    std::polar(1.0, -0.5 * theta * zsum);
            }
            return;
        case LayerKind::ZZDiag:
            for (int k = 0; k < kDim; ++k) {
                int zsum = 0;
                for (const auto& p : kDiagPairs) {
                    zsum += zz_sign(k, p[0], p[1]);
                }
                state[static_cast<size_t>(k)] *=
                    std::polar(1.0, -0.5 * theta * zsum);
            }
            return;
    }
    throw std::logic_error("apply_layer: unhandled layer kind");
}

StateVector apply_generator(const StateVector& state, LayerKind kind) {
    StateVector out{};
    switch (kind) {
        case LayerKind::X:
            for (int k = 0; k < kDim; ++k) {
                Amplitude sum{};
                for (int q = 0; q < kNumQubits; ++q) {
                    sum += state[static_cast<size_t>(k ^ (1 << q))];
                }
                out[static_cast<size_t>(k)] = sum;
            }
            return out;
        case LayerKind::Z:
            for (int k = 0; k < kDim; ++k) {
                out[static_cast<size_t>(k)] =
                    (4.0 - 2.0 * popcount4(k)) * state[static_cast<size_t>(k)];
            }
            return out;
        case LayerKind::XXAxial:
            for (int k = 0; k < kDim; ++k) {
                Amplitude sum{};
                for (const auto& p : kAxialPairs) {
                    sum += state[static_cast<size_t>(k ^ ((1 << p[0]) | (1 << p[1])))];
                }
                out[static_cast<size_t>(k)] = sum;
            }
            return out;
        case LayerKind::XXDiag:
            for (int k = 0; k < kDim; ++k) {
                Amplitude sum{};
                for (const auto& p : kDiagPairs) {
                    sum += state[static_cast<size_t>(k ^ ((1 << p[0]) | (1 << p[1])))];
                }
                out[static_cast<size_t>(k)] = sum;
            }
            return out;
        case LayerKind::ZZAxial:
            for (int k = 0; k < kDim; ++k) {
                int zsum = 0;
                for (const auto& p : kAxialPairs) {
                    zsum += zz_sign(k, p[0], p[1]);
                }
                out[static_cast<size_t>(k)] =
                    static_cast<double>(zsum) * state[static_cast<size_t>(k)];
            }
            return out;
        case LayerKind::ZZDiag:
            for (int k = 0; k < kDim; ++k) {
                int zsum = 0;
                for (const auto& p : kDiagPairs) {
                    zsum += zz_sign(k, p[0], p[1]);
                }
                out[static_cast<size_t>(k)] =
                    static_cast<double>(zsum) * state[static_cast<size_t>(k)];
            }
            return out;
    }
    throw std::logic_error("apply_generator: unhandled layer kind");
}

void forward(const ArchitectureSpec& arch, std::span<const double> theta,
             StateVector& state) {
    if (theta.size() != arch.n_params()) {
        throw std::invalid_argument("forward: expected " +
                                    std::to_string(arch.n_params()) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
    for (size_t l = 0; l < arch.layers.size(); ++l) {
        apply_layer(state, arch.layers[l], theta[l]);
    }
}

Field16 collide_sqc(const ArchitectureSpec& arch, std::span<const double> theta,
                    const Field16& f16) {
    EncodeResult enc = encode(f16);
    forward(arch, theta, enc.state);
    return decode(enc.state, enc.rho);
}

std::vector<double> loss_gradient(const ArchitectureSpec& arch,
                                  std::span<const double> theta,
                                  std::span<const Sample16> batch, double alpha,
                                  std::vector<Field16>* predictions) {
    if (batch.empty()) {
        throw std::invalid_argument("loss_gradient: empty batch");
    }
    if (theta.size() != arch.n_params()) {
        throw std::invalid_argument("loss_gradient: parameter count mismatch");
    }
    static constexpr auto basis_e = BasisMap::basis_velocities();
    const size_t n_layers = arch.layers.size();
    const double batch_size = static_cast<double>(batch.size());
    std::vector<double> grad(n_layers, 0.0);
    if (predictions) {
        predictions->clear();
        predictions->reserve(batch.size());
    }

    for (const Sample16& sample : batch) {
        EncodeResult enc = encode(sample.pre);
        const double rho = enc.rho;
        StateVector psi = enc.state;
        forward(arch, theta, psi);
        const Field16 fhat = decode(psi, rho);
        if (predictions) {
            predictions->push_back(fhat);
        }

        // d(loss)/d(fhat_k): MSE term over all 16 slots plus the momentum
        // penalty routed through the slot velocities.
        double dpx = 0.0;
        double dpy = 0.0;
        if (alpha != 0.0) {
            for (int k = 0; k < kDim; ++k) {
                const double diff =
                    fhat[static_cast<size_t>(k)] - sample.post[static_cast<size_t>(k)];
                dpx += diff * basis_e[static_cast<size_t>(k)][0];
                dpy += diff * basis_e[static_cast<size_t>(k)][1];
            }
        }
        Field16 g{};
        for (int k = 0; k < kDim; ++k) {
            double gk = 2.0 / (kDim * batch_size) *
                        (fhat[static_cast<size_t>(k)] - sample.post[static_cast<size_t>(k)]);
            if (alpha != 0.0) {
                gk += alpha * 2.0 / batch_size *
                      (dpx * basis_e[static_cast<size_t>(k)][0] +
                       dpy * basis_e[static_cast<size_t>(k)][1]);
            }
            g[static_cast<size_t>(k)] = gk;
        }

        // fhat_k = rho |psi_k|^2, so dL/dtheta_l = 2 rho Re <mu_l | -i/2 K_l | phi_l>
        // with mu_l the co-state (g .* psi pulled back through the tail of the
        // circuit) and phi_l the state after layer l.
        StateVector mu;
        for (int k = 0; k < kDim; ++k) {
            mu[static_cast<size_t>(k)] = g[static_cast<size_t>(k)] * psi[static_cast<size_t>(k)];
        }
        for (size_t l = n_layers; l-- > 0;) {
            const StateVector kpsi = apply_generator(psi, arch.layers[l]);
            Amplitude inner{};
            for (int k = 0; k < kDim; ++k) {
                inner += std::conj(mu[static_cast<size_t>(k)]) * kpsi[static_cast<size_t>(k)];
            }
            // Re[<mu | (-i/2) K | psi>] = Im(inner) / 2
            grad[l] += rho * inner.imag();
            apply_layer_adjoint(psi, arch.layers[l], theta[l]);
            apply_layer_adjoint(mu, arch.layers[l], theta[l]);
        }
    }
    return grad;
}

}  // namespace sqc
