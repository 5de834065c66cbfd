#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sqc/statevector.hpp"

namespace sqc {

/// The six layer families that commute with every D8 qubit permutation:
/// global single-qubit rotations (same angle on all four qubits) and
/// two-qubit Ising couplings on either the edge pairs of the qubit square,
/// {(0,1),(1,2),(2,3),(3,0)}, or the corner pairs {(0,2),(1,3)}.
enum class LayerKind : uint8_t { X, Z, XXAxial, XXDiag, ZZAxial, ZZDiag };

inline constexpr std::array<std::array<int, 2>, 4> kAxialPairs{{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
inline constexpr std::array<std::array<int, 2>, 2> kDiagPairs{{{0, 2}, {1, 3}}};

const char* to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& token);

/// Ordered layer list; one trainable angle per layer.
struct ArchitectureSpec {
    std::vector<LayerKind> layers;

    size_t n_params() const { return layers.size(); }

    /// n repetitions of a block, e.g. blocks(15, {X, Z, XXAxial, ZZDiag}).
    static ArchitectureSpec blocks(int n, std::initializer_list<LayerKind> block);
    static ArchitectureSpec blocks(int n, std::span<const LayerKind> block);

    /// Comma-separated layer tokens: "X,Z,XXA,ZZD".
    static ArchitectureSpec parse(const std::string& text);
    std::string to_string() const;

    bool operator==(const ArchitectureSpec&) const = default;
};

/// In-place application of one layer unitary exp(-i theta/2 K).
void apply_layer(StateVector& state, LayerKind kind, double theta);

/// Inverse layer, exp(+i theta/2 K).
inline void apply_layer_adjoint(StateVector& state, LayerKind kind, double theta) {
    apply_layer(state, kind, -theta);
}

/// out = K * state for the layer generator K (sum of Pauli terms).
StateVector apply_generator(const StateVector& state, LayerKind kind);

/// Apply all layers in order.
void forward(const ArchitectureSpec& arch, std::span<const double> theta,
             StateVector& state);

/// Surrogate collision: encode, run the circuit, read the masses back out.
/// The total mass of the output equals the input total by construction.
Field16 collide_sqc(const ArchitectureSpec& arch, std::span<const double> theta,
                    const Field16& f16);

/// One training sample in the 16-slot layout (surplus targets are zero for
/// generated data).
struct Sample16 {
    Field16 pre{};
    Field16 post{};
};

/// Mean squared error over all 16 slots and the batch, the momentum
/// mismatch penalty over the physical slots, and their weighted sum.
struct LossTerms {
    double mse{};
    double momentum{};
    double total{};
};

/// Gradient of mean[(f* - fhat)^2] + alpha * L_m over the batch with
/// respect to each layer angle, computed in reverse mode through the layer
/// sequence (dU/dtheta = -i/2 K U). Optionally returns the per-sample
/// predictions so callers can evaluate losses without a second pass.
std::vector<double> loss_gradient(const ArchitectureSpec& arch,
                                  std::span<const double> theta,
                                  std::span<const Sample16> batch, double alpha,
                                  std::vector<Field16>* predictions = nullptr);

}  // namespace sqc
