#include <doctest.h>

#include <sstream>

#include "dense_oracle.hpp"
#include "sqc/decompose.hpp"
#include "sqc/rng.hpp"

using namespace sqc;
namespace oracle = sqc::testing;

TEST_CASE("native counts per layer") {
    CHECK(layer_gate_count(LayerKind::X) == NativeGateCount{12, 8, 0});
    CHECK(layer_gate_count(LayerKind::X).total() == 20);
    CHECK(layer_gate_count(LayerKind::Z) == NativeGateCount{4, 0, 0});
    CHECK(layer_gate_count(LayerKind::Z).total() == 4);
    CHECK(layer_gate_count(LayerKind::XXAxial) == NativeGateCount{68, 32, 8});
    CHECK(layer_gate_count(LayerKind::XXAxial).total() == 108);
    CHECK(layer_gate_count(LayerKind::ZZDiag) == NativeGateCount{18, 8, 4});
    CHECK(layer_gate_count(LayerKind::ZZDiag).total() == 30);
    // The remaining kinds follow from the same pair identities.
    CHECK(layer_gate_count(LayerKind::XXDiag) == NativeGateCount{34, 16, 4});
    CHECK(layer_gate_count(LayerKind::ZZAxial) == NativeGateCount{36, 16, 8});
}

TEST_CASE("block totals") {
    const ArchitectureSpec b15 = ArchitectureSpec::blocks(
        15, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    CHECK(total_gate_count(b15).total() == 2430);
    const ArchitectureSpec b25 = ArchitectureSpec::blocks(
        25, {LayerKind::X, LayerKind::Z, LayerKind::XXAxial, LayerKind::ZZDiag});
    CHECK(total_gate_count(b25).total() == 4050);
    CHECK(total_gate_count(ArchitectureSpec{}).total() == 0);
    CHECK(total_gate_count(ArchitectureSpec{}) == NativeGateCount{0, 0, 0});
}

TEST_CASE("gate products reconstruct the layer unitaries up to phase") {
    Rng rng(41);
    constexpr std::array<LayerKind, 6> kinds{LayerKind::X,       LayerKind::Z,
                                             LayerKind::XXAxial, LayerKind::XXDiag,
                                             LayerKind::ZZAxial, LayerKind::ZZDiag};
    for (LayerKind kind : kinds) {
        for (double theta : {0.0, 0.37, -1.9, 3.0, rng.uniform(-3.1, 3.1)}) {
            const std::vector<NativeGate> gates = decompose_layer(kind, theta);
            const oracle::Mat rebuilt = oracle::dense_gate_product(gates);
            const oracle::Mat expected = oracle::dense_layer_unitary(kind, theta);
            CHECK(oracle::distance_up_to_phase(rebuilt, expected) < 1e-10);
        }
    }
}

TEST_CASE("gate listing format") {
    const std::vector<NativeGate> gates = decompose_layer(LayerKind::ZZDiag, 0.5);
    std::ostringstream os;
    write_gate_listing(os, gates);
    const std::string text = os.str();
    size_t lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 30);
    CHECK(text.find("cz q0 q2") != std::string::npos);
    CHECK(text.find("rz q2 0.5") != std::string::npos);
    CHECK(text.find("sx q") != std::string::npos);
}
