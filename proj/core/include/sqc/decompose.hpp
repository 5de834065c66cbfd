#pragma once

#include <iosfwd>
#include <vector>

#include "sqc/circuit.hpp"

namespace sqc {

/// One gate from the {RZ, SX, CZ} native set.
struct NativeGate {
    enum class Kind : uint8_t { RZ, SX, CZ };
    Kind kind{};
    int q0{};
    int q1{-1};       // second qubit for CZ, otherwise -1
    double angle{};   // RZ rotation angle, otherwise 0

    static NativeGate rz(int q, double angle) { return {Kind::RZ, q, -1, angle}; }
    static NativeGate sx(int q) { return {Kind::SX, q, -1, 0.0}; }
    static NativeGate cz(int a, int b) { return {Kind::CZ, a, b, 0.0}; }
};

struct NativeGateCount {
    long rz{};
    long sx{};
    long cz{};

    long total() const { return rz + sx + cz; }
    NativeGateCount& operator+=(const NativeGateCount& o) {
        rz += o.rz;
        sx += o.sx;
        cz += o.cz;
        return *this;
    }
    bool operator==(const NativeGateCount&) const = default;
};

/// Expand one layer into native gates. The emitted sequence, applied in
/// order, equals the layer unitary up to a global phase; the per-kind
/// counts are independent of the angle.
std::vector<NativeGate> decompose_layer(LayerKind kind, double theta);

NativeGateCount count_gates(const std::vector<NativeGate>& gates);

NativeGateCount layer_gate_count(LayerKind kind);

NativeGateCount total_gate_count(const ArchitectureSpec& arch);

/// Plain-text listing, one gate per line: name, qubit(s), angle for RZ.
void write_gate_listing(std::ostream& os, const std::vector<NativeGate>& gates);

}  // namespace sqc
