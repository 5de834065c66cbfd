#include "sqc/decompose.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace sqc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPi = std::numbers::pi;

// H = RZ(pi/2) SX RZ(pi/2) up to a global phase.
void emit_h(std::vector<NativeGate>& out, int q) {
    out.push_back(NativeGate::rz(q, kHalfPi));
    out.push_back(NativeGate::sx(q));
    out.push_back(NativeGate::rz(q, kHalfPi));
}

// Rx(theta) = RZ(pi/2) SX RZ(theta + pi) SX RZ(pi/2) up to a global phase.
void emit_rx(std::vector<NativeGate>& out, int q, double theta) {
    out.push_back(NativeGate::rz(q, kHalfPi));
    out.push_back(NativeGate::sx(q));
    out.push_back(NativeGate::rz(q, theta + kPi));
    out.push_back(NativeGate::sx(q));
    out.push_back(NativeGate::rz(q, kHalfPi));
}

// exp(-i theta/2 Z Z) via CZ conjugation: H(b) CZ H(b) RZ_b(theta) H(b) CZ H(b).
void emit_zz(std::vector<NativeGate>& out, int a, int b, double theta) {
    emit_h(out, b);
    out.push_back(NativeGate::cz(a, b));
    emit_h(out, b);
    out.push_back(NativeGate::rz(b, theta));
    emit_h(out, b);
    out.push_back(NativeGate::cz(a, b));
    emit_h(out, b);
}

// exp(-i theta/2 X X) = (H x H) exp(-i theta/2 Z Z) (H x H).
void emit_xx(std::vector<NativeGate>& out, int a, int b, double theta) {
    emit_h(out, a);
    emit_h(out, b);
    emit_zz(out, a, b, theta);
    emit_h(out, a);
    emit_h(out, b);
}

}  // namespace

std::vector<NativeGate> decompose_layer(LayerKind kind, double theta) {
    std::vector<NativeGate> gates;
    switch (kind) {
        case LayerKind::X:
            for (int q = 0; q < kNumQubits; ++q) {
                emit_rx(gates, q, theta);
            }
            break;
        case LayerKind::Z:
            for (int q = 0; q < kNumQubits; ++q) {
                gates.push_back(NativeGate::rz(q, theta));
            }
            break;
        case LayerKind::XXAxial:
            for (const auto& p : kAxialPairs) {
                emit_xx(gates, p[0], p[1], theta);
            }
            break;
        case LayerKind::XXDiag:
            for (const auto& p : kDiagPairs) {
                emit_xx(gates, p[0], p[1], theta);
            }
            break;
        case LayerKind::ZZAxial:
            for (const auto& p : kAxialPairs) {
                emit_zz(gates, p[0], p[1], theta);
            }
            break;
        case LayerKind::ZZDiag:
            for (const auto& p : kDiagPairs) {
                emit_zz(gates, p[0], p[1], theta);
            }
            break;
    }
    return gates;
}

NativeGateCount count_gates(const std::vector<NativeGate>& gates) {
    NativeGateCount count;
    for (const NativeGate& g : gates) {
        switch (g.kind) {
            case NativeGate::Kind::RZ: ++count.rz; break;
            case NativeGate::Kind::SX: ++count.sx; break;
            case NativeGate::Kind::CZ: ++count.cz; break;
        }
    }
    return count;
}

NativeGateCount layer_gate_count(LayerKind kind) {
    return count_gates(decompose_layer(kind, 0.0));
}

NativeGateCount total_gate_count(const ArchitectureSpec& arch) {
    NativeGateCount count;
    for (LayerKind kind : arch.layers) {
        count += layer_gate_count(kind);
    }
    return count;
}

void write_gate_listing(std::ostream& os, const std::vector<NativeGate>& gates) {
    char buf[64];
    for (const NativeGate& g : gates) {
        switch (g.kind) {
            case NativeGate::Kind::RZ:
                std::snprintf(buf, sizeof buf, "%.17g", g.angle);
                os << "rz q" << g.q0 << ' ' << buf << '\n';
                break;
            case NativeGate::Kind::SX:
                os << "sx q" << g.q0 << '\n';
                break;
            case NativeGate::Kind::CZ:
                os << "cz q" << g.q0 << " q" << g.q1 << '\n';
                break;
        }
    }
}

}  // namespace sqc
