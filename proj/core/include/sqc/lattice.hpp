#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace sqc {

/// Node-local D2Q9 distribution functions, lattice units.
///
///   | 6   2   5 |
///   |   \ | /   |
///   | 3 - 0 - 1 |
///   |   / | \   |
///   | 7   4   8 |
using Populations = std::array<double, 9>;

struct Vec2 {
    double x{};
    double y{};
};

struct MacroFields {
    double rho{};
    Vec2 u{};
};

/// D2Q9 stencil constants. Velocities are exact integers and the weights
/// are stored as integer numerators over a common denominator of 36 so the
/// descriptor itself is exact; arithmetic happens in double precision.
struct Lattice {
    static constexpr int kQ = 9;
    static constexpr std::array<std::array<int, 2>, kQ> velocities{{
        {0, 0},
        {1, 0},
        {0, 1},
        {-1, 0},
        {0, -1},
        {1, 1},
        {-1, 1},
        {-1, -1},
        {1, -1},
    }};
    static constexpr std::array<int, kQ> weight_numerators{16, 4, 4, 4,
                                                           4,  1, 1, 1, 1};
    static constexpr int kWeightDenominator = 36;
    static constexpr double cs2 = 1.0 / 3.0;

    static constexpr double weight(int i) {
        return static_cast<double>(weight_numerators[static_cast<size_t>(i)]) /
               kWeightDenominator;
    }

    static constexpr std::array<double, kQ> weights() {
        std::array<double, kQ> w{};
        for (int i = 0; i < kQ; ++i) {
            w[static_cast<size_t>(i)] = weight(i);
        }
        return w;
    }

    /// Index of the velocity opposite to e_i, found by table lookup.
    static constexpr std::array<int, kQ> opposite{0, 3, 4, 1, 2, 7, 8, 5, 6};
};

/// Second-order equilibrium populations for (rho, u). Throws on rho <= 0.
Populations equilibrium(double rho, Vec2 u);

/// Zeroth and first moments. Throws if the density is non-positive.
MacroFields moments(const Populations& f);

/// Single-relaxation-time collision, f* = f - (f - f^eq)/tau.
/// Requires tau > 1/2 so the viscosity stays positive.
Populations bgk_collide(const Populations& f, double tau);

/// Kinematic viscosity nu = cs2 * (tau - 1/2). Requires tau > 1/2.
double viscosity(double tau);

// ---------------------------------------------------------------------------
// Dihedral symmetry group of the square acting on the populations.
// ---------------------------------------------------------------------------

/// Elements written as r^k s^j where r is the 90-degree counter-clockwise
/// rotation and s the reflection across the horizontal axis; "rs" applies
/// s first and then r.
enum class D8Label : uint8_t { I, R, R2, R3, S, RS, R2S, R3S };

const char* to_string(D8Label label);

struct D8Element {
    D8Label label{};
    int rotations{};   // k in r^k s^j
    bool reflected{};  // j in r^k s^j
    /// Integer 2x2 matrix of the point transform, row major.
    std::array<std::array<int, 2>, 2> matrix{};
    /// perm[i] is the population index of sigma(e_i).
    std::array<int, 9> perm{};
};

/// All eight elements, ordered I, r, r2, r3, s, rs, r2s, r3s. The
/// permutations are derived from the velocity table at first use, not
/// hard-coded.
const std::array<D8Element, 8>& d8_group();

const D8Element& d8_element(D8Label label);

/// out[perm[i]] = f[i], i.e. the population vector transported by sigma.
Populations apply_d8(const D8Element& sigma, const Populations& f);

/// Element whose action equals "apply b, then a".
const D8Element& d8_compose(const D8Element& a, const D8Element& b);

}  // namespace sqc
