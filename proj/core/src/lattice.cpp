#include "sqc/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqc {

Populations equilibrium(double rho, Vec2 u) {
    if (!(rho > 0.0)) {
        throw std::invalid_argument("equilibrium: density must be positive, got " +
                                    std::to_string(rho));
    }
    const double usq = u.x * u.x + u.y * u.y;
    Populations feq{};
    for (int i = 0; i < Lattice::kQ; ++i) {
        const auto& e = Lattice::velocities[static_cast<size_t>(i)];
        const double eu = e[0] * u.x + e[1] * u.y;
        feq[static_cast<size_t>(i)] =
            Lattice::weight(i) * rho *
            (1.0 + eu / Lattice::cs2 +
             (eu * eu - Lattice::cs2 * usq) / (2.0 * Lattice::cs2 * Lattice::cs2));
    }
    return feq;
}

MacroFields moments(const Populations& f) {
    double rho = 0.0;
    double px = 0.0;
    double py = 0.0;
    for (int i = 0; i < Lattice::kQ; ++i) {
        const double fi = f[static_cast<size_t>(i)];
        rho += fi;
        px += fi * Lattice::velocities[static_cast<size_t>(i)][0];
        py += fi * Lattice::velocities[static_cast<size_t>(i)][1];
    }
    if (!(rho > 0.0)) {
        throw std::domain_error("moments: degenerate state, non-positive density " +
                                std::to_string(rho));
    }
    return {rho, {px / rho, py / rho}};
}

Populations bgk_collide(const Populations& f, double tau) {
    if (!(tau > 0.5)) {
        throw std::invalid_argument(
            "bgk_collide: relaxation time must exceed 1/2 for positive "
            "viscosity, got " +
            std::to_string(tau));
    }
    const MacroFields m = moments(f);
    const Populations feq = equilibrium(m.rho, m.u);
    Populations out{};
    const double inv_tau = 1.0 / tau;
    for (size_t i = 0; i < f.size(); ++i) {
        out[i] = f[i] - inv_tau * (f[i] - feq[i]);
    }
    return out;
}

double viscosity(double tau) {
    if (!(tau > 0.5)) {
        throw std::invalid_argument("viscosity: relaxation time must exceed 1/2, got " +
                                    std::to_string(tau));
    }
    return Lattice::cs2 * (tau - 0.5);
}

const char* to_string(D8Label label) {
    switch (label) {
        case D8Label::I: return "I";
        case D8Label::R: return "r";
        case D8Label::R2: return "r2";
        case D8Label::R3: return "r3";
        case D8Label::S: return "s";
        case D8Label::RS: return "rs";
        case D8Label::R2S: return "r2s";
        case D8Label::R3S: return "r3s";
    }
    return "?";
}

namespace {

using IntMat = std::array<std::array<int, 2>, 2>;

constexpr IntMat kIdentity{{{1, 0}, {0, 1}}};
// 90-degree counter-clockwise rotation: (x, y) -> (-y, x).
constexpr IntMat kRotation{{{0, -1}, {1, 0}}};
// Reflection across the horizontal axis: (x, y) -> (x, -y).
constexpr IntMat kReflection{{{1, 0}, {0, -1}}};

IntMat multiply(const IntMat& a, const IntMat& b) {
    IntMat c{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    return c;
}

int velocity_index(int ex, int ey) {
    for (int i = 0; i < Lattice::kQ; ++i) {
        const auto& e = Lattice::velocities[static_cast<size_t>(i)];
        if (e[0] == ex && e[1] == ey) {
            return i;
        }
    }
    throw std::logic_error("d8_group: transformed velocity not on the stencil");
}

std::array<int, 9> permutation_from_matrix(const IntMat& m) {
    std::array<int, 9> perm{};
    for (int i = 0; i < Lattice::kQ; ++i) {
        const auto& e = Lattice::velocities[static_cast<size_t>(i)];
        const int ex = m[0][0] * e[0] + m[0][1] * e[1];
        const int ey = m[1][0] * e[0] + m[1][1] * e[1];
        perm[static_cast<size_t>(i)] = velocity_index(ex, ey);
    }
    return perm;
}

std::array<D8Element, 8> build_group() {
    std::array<D8Element, 8> group{};
    constexpr std::array<D8Label, 8> labels{D8Label::I,  D8Label::R,
                                            D8Label::R2, D8Label::R3,
                                            D8Label::S,  D8Label::RS,
                                            D8Label::R2S, D8Label::R3S};
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 2; ++j) {
            IntMat m = j ? kReflection : kIdentity;
            for (int n = 0; n < k; ++n) {
                m = multiply(kRotation, m);
            }
            D8Element elem;
            elem.label = labels[static_cast<size_t>(4 * j + k)];
            elem.rotations = k;
            elem.reflected = (j != 0);
            elem.matrix = m;
            elem.perm = permutation_from_matrix(m);
            group[static_cast<size_t>(4 * j + k)] = elem;
        }
    }
    return group;
}

}  // namespace

const std::array<D8Element, 8>& d8_group() {
    static const std::array<D8Element, 8> group = build_group();
    return group;
}

const D8Element& d8_element(D8Label label) {
    return d8_group()[static_cast<size_t>(label)];
}

Populations apply_d8(const D8Element& sigma, const Populations& f) {
    Populations out{};
    for (size_t i = 0; i < f.size(); ++i) {
        out[static_cast<size_t>(sigma.perm[i])] = f[i];
    }
    return out;
}

const D8Element& d8_compose(const D8Element& a, const D8Element& b) {
    const IntMat m = multiply(a.matrix, b.matrix);
    for (const D8Element& elem : d8_group()) {
        if (elem.matrix == m) {
            return elem;
        }
    }
    throw std::logic_error("d8_compose: product left the group");
}

}  // namespace sqc
