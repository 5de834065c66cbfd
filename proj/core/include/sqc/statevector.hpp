#pragma once

#include <array>
#include <complex>

#include "sqc/lattice.hpp"

namespace sqc {

inline constexpr int kNumQubits = 4;
inline constexpr int kDim = 16;

using Amplitude = std::complex<double>;

/// Amplitudes over the 4-qubit velocity register, basis |Q3 Q2 Q1 Q0>
/// read as an integer with Q0 the least-significant bit.
using StateVector = std::array<Amplitude, kDim>;

/// Mass per basis slot: the nine populations at their mapped basis indices
/// plus seven surplus slots that carry zero discrete velocity.
using Field16 = std::array<double, kDim>;

/// Mapping of populations onto basis states. Each qubit marks one half-axis
/// (Q0:+x, Q1:+y, Q2:-x, Q3:-y); diagonal velocities set the two adjacent
/// bits.
struct BasisMap {
    static constexpr std::array<int, 9> pop_to_basis{0, 1, 2, 4, 8, 3, 6, 12, 9};
    static constexpr std::array<int, 7> surplus{5, 7, 10, 11, 13, 14, 15};

    /// Population index for a basis slot, or -1 for surplus slots.
    static constexpr std::array<int, kDim> basis_to_pop() {
        std::array<int, kDim> inv{};
        for (auto& v : inv) v = -1;
        for (int i = 0; i < 9; ++i) {
            inv[static_cast<size_t>(pop_to_basis[static_cast<size_t>(i)])] = i;
        }
        return inv;
    }

    /// Discrete velocity carried by a basis slot (zero for surplus slots).
    static constexpr std::array<std::array<int, 2>, kDim> basis_velocities() {
        std::array<std::array<int, 2>, kDim> e{};
        const auto inv = basis_to_pop();
        for (int k = 0; k < kDim; ++k) {
            const int pop = inv[static_cast<size_t>(k)];
            if (pop >= 0) {
                e[static_cast<size_t>(k)] =
                    Lattice::velocities[static_cast<size_t>(pop)];
            }
        }
        return e;
    }
};

/// Place the nine populations at their basis slots, surplus slots zero.
Field16 embed_populations(const Populations& f);

/// Read the nine physical slots back out of a 16-slot field.
Populations extract_populations(const Field16& f16);

/// Density and momentum of a 16-slot field: the density sums all slots,
/// momentum only the nine that carry a discrete velocity.
MacroFields moments16(const Field16& f16);

struct EncodeResult {
    StateVector state{};
    double rho{};
};

/// Rooted-density encoding amp_k = sqrt(f_k / rho) with rho = sum(f).
/// Throws if the total mass is not positive.
EncodeResult encode(const Field16& f16);

/// Probability read-out f_k = rho * |amp_k|^2.
Field16 decode(const StateVector& state, double rho);

double norm_squared(const StateVector& state);

// ---------------------------------------------------------------------------
// D8 on the register: rotations cycle the qubits 0->1->2->3->0, the base
// reflection swaps qubits 1 and 3.
// ---------------------------------------------------------------------------

/// qubit_perm[q] = destination position of qubit q under sigma.
std::array<int, kNumQubits> qubit_permutation(const D8Element& sigma);

/// basis_perm[k] = image basis index once the qubits are permuted.
std::array<int, kDim> basis_permutation(const D8Element& sigma);

/// out[basis_perm(k)] = amp[k].
StateVector apply_qubit_permutation(const D8Element& sigma, const StateVector& state);

/// Same permutation acting on a 16-slot mass field (physical slots move as
/// apply_d8 moves the populations; surplus slots permute among themselves).
Field16 apply_d8_field16(const D8Element& sigma, const Field16& f16);

}  // namespace sqc
