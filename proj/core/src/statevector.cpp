#include "sqc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqc {

Field16 embed_populations(const Populations& f) {
    Field16 out{};
    for (size_t i = 0; i < f.size(); ++i) {
        out[static_cast<size_t>(BasisMap::pop_to_basis[i])] = f[i];
    }
    return out;
}

Populations extract_populations(const Field16& f16) {
    Populations out{};
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = f16[static_cast<size_t>(BasisMap::pop_to_basis[i])];
    }
    return out;
}

MacroFields moments16(const Field16& f16) {
    // Momentum in population order so that opposite velocities cancel
    // exactly for symmetric states; the surplus slots only carry mass.
    double rho = 0.0;
    double px = 0.0;
    double py = 0.0;
    for (int i = 0; i < Lattice::kQ; ++i) {
        const double fi = f16[static_cast<size_t>(BasisMap::pop_to_basis[static_cast<size_t>(i)])];
        rho += fi;
        px += fi * Lattice::velocities[static_cast<size_t>(i)][0];
        py += fi * Lattice::velocities[static_cast<size_t>(i)][1];
    }
    for (int k : BasisMap::surplus) {
        rho += f16[static_cast<size_t>(k)];
    }
    if (!(rho > 0.0)) {
        throw std::domain_error("moments16: degenerate state, non-positive density " +
                                std::to_string(rho));
    }
    return {rho, {px / rho, py / rho}};
}

EncodeResult encode(const Field16& f16) {
    // Accumulate the density in ascending value order so the result is
    // invariant under slot permutations; this makes the encoding commute
    // with the D8 qubit permutations bit-for-bit.
    Field16 sorted = f16;
    std::sort(sorted.begin(), sorted.end());
    double rho = 0.0;
    for (double v : sorted) {
        rho += v;
    }
    if (!(rho > 0.0)) {
        throw std::domain_error("encode: degenerate input, total mass " +
                                std::to_string(rho) + " is not positive");
    }
    EncodeResult result;
    result.rho = rho;
    const double inv_sqrt_rho = 1.0 / std::sqrt(rho);
    for (int k = 0; k < kDim; ++k) {
        result.state[static_cast<size_t>(k)] =
            Amplitude(std::sqrt(f16[static_cast<size_t>(k)]) * inv_sqrt_rho, 0.0);
    }
    return result;
}

Field16 decode(const StateVector& state, double rho) {
    if (!(rho > 0.0)) {
        throw std::domain_error("decode: density must be positive, got " +
                                std::to_string(rho));
    }
    Field16 out{};
    for (int k = 0; k < kDim; ++k) {
        out[static_cast<size_t>(k)] = rho * std::norm(state[static_cast<size_t>(k)]);
    }
    return out;
}

double norm_squared(const StateVector& state) {
    double n = 0.0;
    for (const Amplitude& a : state) {
        n += std::norm(a);
    }
    return n;
}

std::array<int, kNumQubits> qubit_permutation(const D8Element& sigma) {
    std::array<int, kNumQubits> perm{};
    for (int q = 0; q < kNumQubits; ++q) {
        int p = q;
        if (sigma.reflected && (p == 1 || p == 3)) {
            p = 4 - p;  // swap qubits 1 and 3
        }
        perm[static_cast<size_t>(q)] = (p + sigma.rotations) % kNumQubits;
    }
    return perm;
}

std::array<int, kDim> basis_permutation(const D8Element& sigma) {
    const auto qperm = qubit_permutation(sigma);
    std::array<int, kDim> bperm{};
    for (int k = 0; k < kDim; ++k) {
        int image = 0;
        for (int q = 0; q < kNumQubits; ++q) {
            if (k & (1 << q)) {
                image |= 1 << qperm[static_cast<size_t>(q)];
            }
        }
        bperm[static_cast<size_t>(k)] = image;
    }
    return bperm;
}

StateVector apply_qubit_permutation(const D8Element& sigma, const StateVector& state) {
    const auto bperm = basis_permutation(sigma);
    StateVector out{};
    for (int k = 0; k < kDim; ++k) {
        out[static_cast<size_t>(bperm[static_cast<size_t>(k)])] =
            state[static_cast<size_t>(k)];
    }
    return out;
}

Field16 apply_d8_field16(const D8Element& sigma, const Field16& f16) {
    const auto bperm = basis_permutation(sigma);
    Field16 out{};
    for (int k = 0; k < kDim; ++k) {
        out[static_cast<size_t>(bperm[static_cast<size_t>(k)])] =
            f16[static_cast<size_t>(k)];
    }
    return out;
}

}  // namespace sqc
