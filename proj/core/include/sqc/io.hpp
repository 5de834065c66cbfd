#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sqc/simulation.hpp"
#include "sqc/training.hpp"

namespace sqc {

// ---------------------------------------------------------------------------
// Dataset files: "SQCD" magic, u32 format version, u64 sample count, u64
// generation-config digest, then per sample 18 little-endian float64
// (9 pre-collision, 9 post-collision populations).
// ---------------------------------------------------------------------------

inline constexpr uint32_t kDatasetFormatVersion = 1;

/// FNV-1a digest of the canonical key=value rendering of the config.
uint64_t config_digest(const DataGenConfig& cfg);

void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   uint64_t digest);

struct DatasetFile {
    Dataset data;
    uint32_t version{};
    uint64_t digest{};
};

/// Loads and validates a dataset file. Every record must conserve mass and
/// momentum between pre and post to 1e-12; corrupted magic, version, count
/// or truncation raise with a description of what was found.
DatasetFile read_dataset_file(const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Checkpoints: human-readable JSON. Angles are serialized as hex-float
// strings so a save/load round trip reproduces every bit.
// ---------------------------------------------------------------------------

inline constexpr uint32_t kCheckpointFormatVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run configuration: flat key=value text, '#' starts a comment. Unknown
// keys are rejected with their line number; omitted keys keep the
// defaults baked into the config structs.
// ---------------------------------------------------------------------------

struct RunConfig {
    DataGenConfig gen;
    TrainConfig train;
    SimConfig sim;
    int arch_blocks = 15;
    std::string arch_block = "X,Z,XXA,ZZD";
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Apply one key=value assignment (also used for CLI overrides).
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& origin, int line);

/// Canonical key=value rendering of every setting, suitable for manifests
/// and digests.
std::vector<std::pair<std::string, std::string>> render_config(const RunConfig& cfg);

/// Resolved config + tool version + command, written next to the outputs.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Field dumps: "SQCF" magic, u32 version, u32 nx, u32 ny, u32 t, then
// row-major float64 (rho, ux, uy) triples.
// ---------------------------------------------------------------------------

inline constexpr uint32_t kFieldFormatVersion = 1;

void write_field_dump(const std::filesystem::path& path, const FieldSnapshot& s);
FieldSnapshot read_field_dump(const std::filesystem::path& path);

void write_snapshot_csv(const std::filesystem::path& path, const FieldSnapshot& s);
void write_centerlines_csv(const std::filesystem::path& path, const CenterlineProfiles& p);
void write_loss_curve_csv(const std::filesystem::path& path,
                          const std::vector<LossCurvePoint>& curve);
void write_decay_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<int, double>>& series);
void write_mass_audit_csv(const std::filesystem::path& path,
                          const std::vector<MassAuditRow>& rows);
void write_error_field_csv(const std::filesystem::path& path, const ErrorFields& e);

/// Shortest decimal that round-trips a double (%.17g).
std::string format_double(double v);

}  // namespace sqc
