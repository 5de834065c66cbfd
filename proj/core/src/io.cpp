#include "sqc/io.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sqc/version.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

namespace sqc {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) {
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    }
    return is;
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return static_cast<bool>(is);
}

uint64_t fnv1a(const std::string& text) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hexfloat(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hexfloat(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw std::runtime_error("malformed float literal '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t config_digest(const DataGenConfig& cfg) {
    std::string canon;
    canon += "n_samples=" + std::to_string(cfg.n_samples);
    canon += ";rho_min=" + format_double(cfg.rho_min);
    canon += ";rho_max=" + format_double(cfg.rho_max);
    canon += ";speed_min=" + format_double(cfg.speed_min);
    canon += ";speed_max=" + format_double(cfg.speed_max);
    canon += ";sigma_neq_min=" + format_double(cfg.sigma_neq_min);
    canon += ";sigma_neq_max=" + format_double(cfg.sigma_neq_max);
    canon += ";tau=" + format_double(cfg.tau);
    canon += ";test_split=" + format_double(cfg.test_split);
    canon += ";seed=" + std::to_string(cfg.seed);
    return fnv1a(canon);
}

void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   uint64_t digest) {
    std::ofstream os = open_out(path, true);
    os.write("SQCD", 4);
    write_pod(os, kDatasetFormatVersion);
    const uint64_t count = data.size();
    write_pod(os, count);
    write_pod(os, digest);
    for (const Sample& s : data.samples) {
        os.write(reinterpret_cast<const char*>(s.pre.data()), sizeof s.pre);
        os.write(reinterpret_cast<const char*>(s.post.data()), sizeof s.post);
    }
    if (!os) {
        fail(path, "write failed");
    }
}

DatasetFile read_dataset_file(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, true);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SQCD", 4) != 0) {
        fail(path, "bad magic, not a dataset file");
    }
    DatasetFile file;
    if (!read_pod(is, file.version)) {
        fail(path, "truncated header");
    }
    if (file.version != kDatasetFormatVersion) {
        fail(path, "unsupported dataset format version " + std::to_string(file.version) +
                       " (expected " + std::to_string(kDatasetFormatVersion) + ")");
    }
    uint64_t count = 0;
    if (!read_pod(is, count) || !read_pod(is, file.digest)) {
        fail(path, "truncated header");
    }
    constexpr size_t kRecordBytes = 18 * sizeof(double);
    const uintmax_t body = std::filesystem::file_size(path) - (4 + 4 + 8 + 8);
    if (body != count * kRecordBytes) {
        fail(path, "declared " + std::to_string(count) + " samples (" +
                       std::to_string(count * kRecordBytes) + " body bytes) but found " +
                       std::to_string(body) + " bytes");
    }
    file.data.samples.resize(count);
    for (uint64_t n = 0; n < count; ++n) {
        Sample& s = file.data.samples[n];
        is.read(reinterpret_cast<char*>(s.pre.data()), sizeof s.pre);
        is.read(reinterpret_cast<char*>(s.post.data()), sizeof s.post);
        if (!is) {
            fail(path, "truncated at sample " + std::to_string(n));
        }
        double dm = 0.0, dpx = 0.0, dpy = 0.0;
        for (int i = 0; i < Lattice::kQ; ++i) {
            const double d = s.post[static_cast<size_t>(i)] - s.pre[static_cast<size_t>(i)];
            dm += d;
            dpx += d * Lattice::velocities[static_cast<size_t>(i)][0];
            dpy += d * Lattice::velocities[static_cast<size_t>(i)][1];
        }
        if (std::abs(dm) > 1e-12 || std::abs(dpx) > 1e-12 || std::abs(dpy) > 1e-12) {
            fail(path, "sample " + std::to_string(n) +
                           " violates collision conservation (mass drift " +
                           format_double(dm) + ", momentum drift " + format_double(dpx) +
                           ", " + format_double(dpy) + ")");
        }
    }
    return file;
}

Dataset read_dataset(const std::filesystem::path& path) {
    return read_dataset_file(path).data;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    if (ckpt.theta.size() != ckpt.config.arch.n_params()) {
        throw std::invalid_argument("save_checkpoint: theta length " +
                                    std::to_string(ckpt.theta.size()) +
                                    " does not match the " +
                                    std::to_string(ckpt.config.arch.n_params()) +
                                    "-layer architecture");
    }
    json doc;
    doc["format"] = "sqc-checkpoint";
    doc["format_version"] = kCheckpointFormatVersion;
    json layers = json::array();
    for (LayerKind k : ckpt.config.arch.layers) {
        layers.push_back(to_string(k));
    }
    doc["architecture"] = std::move(layers);
    json theta = json::array();
    for (double t : ckpt.theta) {
        theta.push_back(hexfloat(t));
    }
    doc["theta"] = std::move(theta);
    doc["iteration"] = ckpt.iteration;
    doc["seed"] = ckpt.config.seed;
    doc["training"] = {
        {"learning_rate", ckpt.config.learning_rate},
        {"iterations", ckpt.config.iterations},
        {"batch_size", ckpt.config.batch_size},
        {"alpha0", ckpt.config.alpha.alpha0},
        {"alpha_step_every", ckpt.config.alpha.step_every},
        {"alpha_max", ckpt.config.alpha.alpha_max},
        {"epsilon_acc", ckpt.config.epsilon_acc},
        {"val_every", ckpt.config.val_every},
    };
    std::ofstream os = open_out(path, false);
    os << doc.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, false);
    json doc;
    try {
        is >> doc;
    } catch (const json::parse_error& e) {
        fail(path, std::string("invalid JSON: ") + e.what());
    }
    if (doc.value("format", "") != "sqc-checkpoint") {
        fail(path, "not a checkpoint file");
    }
    const uint32_t version = doc.value("format_version", 0u);
    if (version != kCheckpointFormatVersion) {
        fail(path, "unsupported checkpoint format version " + std::to_string(version) +
                       " (expected " + std::to_string(kCheckpointFormatVersion) + ")");
    }
    Checkpoint ckpt;
    for (const auto& tok : doc.at("architecture")) {
        ckpt.config.arch.layers.push_back(
            layer_kind_from_string(tok.get<std::string>()));
    }
    for (const auto& tok : doc.at("theta")) {
        ckpt.theta.push_back(parse_hexfloat(tok.get<std::string>()));
    }
    if (ckpt.theta.size() != ckpt.config.arch.n_params()) {
        fail(path, "theta length " + std::to_string(ckpt.theta.size()) +
                       " does not match the " +
                       std::to_string(ckpt.config.arch.n_params()) +
                       "-layer architecture");
    }
    ckpt.iteration = doc.value("iteration", uint64_t{0});
    ckpt.config.seed = doc.value("seed", uint64_t{0});
    if (doc.contains("training")) {
        const json& t = doc["training"];
        ckpt.config.learning_rate = t.value("learning_rate", ckpt.config.learning_rate);
        ckpt.config.iterations = t.value("iterations", ckpt.config.iterations);
        ckpt.config.batch_size = t.value("batch_size", ckpt.config.batch_size);
        ckpt.config.alpha.alpha0 = t.value("alpha0", ckpt.config.alpha.alpha0);
        ckpt.config.alpha.step_every = t.value("alpha_step_every", ckpt.config.alpha.step_every);
        ckpt.config.alpha.alpha_max = t.value("alpha_max", ckpt.config.alpha.alpha_max);
        ckpt.config.epsilon_acc = t.value("epsilon_acc", ckpt.config.epsilon_acc);
        ckpt.config.val_every = t.value("val_every", ckpt.config.val_every);
    }
    return ckpt;
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void config_error(const std::string& origin, int line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_num(const std::string& origin, int line, const std::string& key,
                 const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        config_error(origin, line, "value '" + value + "' for key '" + key +
                                       "' is not a number");
    }
}

uint64_t parse_u64(const std::string& origin, int line, const std::string& key,
                   const std::string& value) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        config_error(origin, line, "value '" + value + "' for key '" + key +
                                       "' is not a non-negative integer");
    }
}

void check_tau(const std::string& origin, int line, double tau) {
    if (!(tau > 0.5)) {
        config_error(origin, line,
                     "tau = " + format_double(tau) +
                         " is out of range: the relaxation time must exceed 1/2 so "
                         "the viscosity cs2*(tau - 1/2) stays positive");
    }
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& origin, int line) {
    // Shared keys
    if (key == "tau") {
        const double tau = parse_num(origin, line, key, value);
        check_tau(origin, line, tau);
        cfg.gen.tau = tau;
        cfg.sim.tau = tau;
    } else if (key == "seed") {
        const uint64_t seed = parse_u64(origin, line, key, value);
        cfg.gen.seed = seed;
        cfg.train.seed = seed;
    }
    // Data generation
    else if (key == "n_samples") {
        cfg.gen.n_samples = parse_u64(origin, line, key, value);
    } else if (key == "rho_min") {
        cfg.gen.rho_min = parse_num(origin, line, key, value);
    } else if (key == "rho_max") {
        cfg.gen.rho_max = parse_num(origin, line, key, value);
    } else if (key == "speed_min") {
        cfg.gen.speed_min = parse_num(origin, line, key, value);
    } else if (key == "speed_max") {
        cfg.gen.speed_max = parse_num(origin, line, key, value);
    } else if (key == "sigma_neq_min") {
        cfg.gen.sigma_neq_min = parse_num(origin, line, key, value);
    } else if (key == "sigma_neq_max") {
        cfg.gen.sigma_neq_max = parse_num(origin, line, key, value);
    } else if (key == "test_split") {
        const double split = parse_num(origin, line, key, value);
        if (split < 0.0 || split >= 1.0) {
            config_error(origin, line, "test_split must lie in [0, 1)");
        }
        cfg.gen.test_split = split;
    }
    // Training
    else if (key == "arch") {
        try {
            ArchitectureSpec::parse(value);
        } catch (const std::exception& e) {
            config_error(origin, line, e.what());
        }
        cfg.arch_block = value;
    } else if (key == "blocks") {
        const uint64_t blocks = parse_u64(origin, line, key, value);
        if (blocks == 0) {
            config_error(origin, line, "blocks must be at least 1");
        }
        cfg.arch_blocks = static_cast<int>(blocks);
    } else if (key == "learning_rate") {
        const double lr = parse_num(origin, line, key, value);
        if (lr < 0.0) {
            config_error(origin, line, "learning_rate must be non-negative");
        }
        cfg.train.learning_rate = lr;
    } else if (key == "iterations") {
        cfg.train.iterations = parse_u64(origin, line, key, value);
    } else if (key == "batch_size") {
        const uint64_t b = parse_u64(origin, line, key, value);
        if (b == 0) {
            config_error(origin, line, "batch_size must be at least 1");
        }
        cfg.train.batch_size = b;
    } else if (key == "alpha0") {
        const double a = parse_num(origin, line, key, value);
        if (a <= 0.0) {
            config_error(origin, line, "alpha0 must be positive");
        }
        cfg.train.alpha.alpha0 = a;
    } else if (key == "alpha_step_every") {
        const uint64_t s = parse_u64(origin, line, key, value);
        if (s == 0) {
            config_error(origin, line, "alpha_step_every must be at least 1");
        }
        cfg.train.alpha.step_every = s;
    } else if (key == "alpha_max") {
        const double a = parse_num(origin, line, key, value);
        if (a < 0.0) {
            config_error(origin, line, "alpha_max must be zero (disabled) or positive");
        }
        cfg.train.alpha.alpha_max = a;
    } else if (key == "epsilon_acc") {
        const double e = parse_num(origin, line, key, value);
        if (e <= 0.0) {
            config_error(origin, line, "epsilon_acc must be positive");
        }
        cfg.train.epsilon_acc = e;
    } else if (key == "val_every") {
        const uint64_t v = parse_u64(origin, line, key, value);
        if (v == 0) {
            config_error(origin, line, "val_every must be at least 1");
        }
        cfg.train.val_every = v;
    }
    // Simulation
    else if (key == "case") {
        if (value == "taylor-green") {
            cfg.sim.flow_case = SimCase::TaylorGreen;
        } else if (value == "lid-cavity") {
            cfg.sim.flow_case = SimCase::LidCavity;
        } else {
            config_error(origin, line, "unknown case '" + value +
                                           "' (expected taylor-green or lid-cavity)");
        }
    } else if (key == "nx" || key == "ny") {
        const uint64_t n = parse_u64(origin, line, key, value);
        if (n == 0) {
            config_error(origin, line, key + " must be positive");
        }
        (key == "nx" ? cfg.sim.nx : cfg.sim.ny) = static_cast<int>(n);
    } else if (key == "u0") {
        cfg.sim.u0 = parse_num(origin, line, key, value);
    } else if (key == "u_lid") {
        cfg.sim.u_lid = parse_num(origin, line, key, value);
    } else if (key == "reynolds") {
        const double re = parse_num(origin, line, key, value);
        if (re <= 0.0) {
            config_error(origin, line, "reynolds must be positive");
        }
        cfg.sim.reynolds = re;
    } else if (key == "steps") {
        cfg.sim.steps = static_cast<int>(parse_u64(origin, line, key, value));
    } else if (key == "backend") {
        if (value == "bgk") {
            cfg.sim.backend = CollisionBackendKind::BGK;
        } else if (value == "sqc") {
            cfg.sim.backend = CollisionBackendKind::SQC;
        } else {
            config_error(origin, line,
                         "unknown backend '" + value + "' (expected bgk or sqc)");
        }
    } else if (key == "checkpoint") {
        cfg.sim.checkpoint_path = value;
    } else if (key == "snapshot_every") {
        cfg.sim.snapshot_every = static_cast<int>(parse_u64(origin, line, key, value));
    } else if (key == "threads") {
        const uint64_t t = parse_u64(origin, line, key, value);
        if (t == 0) {
            config_error(origin, line, "threads must be at least 1");
        }
        cfg.sim.threads = static_cast<int>(t);
    } else {
        config_error(origin, line, "unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        const auto first = body.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = body.find_last_not_of(" \t\r");
        body = body.substr(first, last - first + 1);
        const size_t eq = body.find('=');
        if (eq == std::string::npos) {
            config_error(origin, line, "expected key=value, got '" + body + "'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) {
                return std::string{};
            }
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            config_error(origin, line, "empty key");
        }
        apply_config_entry(cfg, key, value, origin, line);
    }
    cfg.train.arch = ArchitectureSpec::blocks(cfg.arch_blocks,
                                              ArchitectureSpec::parse(cfg.arch_block).layers);
    if (cfg.gen.rho_min <= 0.0 || cfg.gen.rho_max < cfg.gen.rho_min) {
        throw std::runtime_error(origin + ": invalid density range [" +
                                 format_double(cfg.gen.rho_min) + ", " +
                                 format_double(cfg.gen.rho_max) + "]");
    }
    if (cfg.gen.speed_min < 0.0 || cfg.gen.speed_max < cfg.gen.speed_min) {
        throw std::runtime_error(origin + ": invalid speed range");
    }
    if (cfg.gen.sigma_neq_min < 0.0 || cfg.gen.sigma_neq_max < cfg.gen.sigma_neq_min) {
        throw std::runtime_error(origin + ": invalid sigma_neq range");
    }
    if (cfg.train.alpha.enabled() && cfg.train.alpha.alpha_max < cfg.train.alpha.alpha0) {
        throw std::runtime_error(origin + ": alpha_max must be 0 or at least alpha0");
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, false);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> render_config(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("n_samples", std::to_string(cfg.gen.n_samples));
    kv.emplace_back("rho_min", format_double(cfg.gen.rho_min));
    kv.emplace_back("rho_max", format_double(cfg.gen.rho_max));
    kv.emplace_back("speed_min", format_double(cfg.gen.speed_min));
    kv.emplace_back("speed_max", format_double(cfg.gen.speed_max));
    kv.emplace_back("sigma_neq_min", format_double(cfg.gen.sigma_neq_min));
    kv.emplace_back("sigma_neq_max", format_double(cfg.gen.sigma_neq_max));
    kv.emplace_back("tau", format_double(cfg.gen.tau));
    kv.emplace_back("test_split", format_double(cfg.gen.test_split));
    kv.emplace_back("seed", std::to_string(cfg.gen.seed));
    kv.emplace_back("arch", cfg.arch_block);
    kv.emplace_back("blocks", std::to_string(cfg.arch_blocks));
    kv.emplace_back("learning_rate", format_double(cfg.train.learning_rate));
    kv.emplace_back("iterations", std::to_string(cfg.train.iterations));
    kv.emplace_back("batch_size", std::to_string(cfg.train.batch_size));
    kv.emplace_back("alpha0", format_double(cfg.train.alpha.alpha0));
    kv.emplace_back("alpha_step_every", std::to_string(cfg.train.alpha.step_every));
    kv.emplace_back("alpha_max", format_double(cfg.train.alpha.alpha_max));
    kv.emplace_back("epsilon_acc", format_double(cfg.train.epsilon_acc));
    kv.emplace_back("val_every", std::to_string(cfg.train.val_every));
    kv.emplace_back("case", cfg.sim.flow_case == SimCase::TaylorGreen ? "taylor-green"
                                                                      : "lid-cavity");
    kv.emplace_back("nx", std::to_string(cfg.sim.nx));
    kv.emplace_back("ny", std::to_string(cfg.sim.ny));
    kv.emplace_back("u0", format_double(cfg.sim.u0));
    kv.emplace_back("u_lid", format_double(cfg.sim.u_lid));
    kv.emplace_back("reynolds", format_double(cfg.sim.reynolds));
    kv.emplace_back("steps", std::to_string(cfg.sim.steps));
    kv.emplace_back("backend",
                    cfg.sim.backend == CollisionBackendKind::BGK ? "bgk" : "sqc");
    kv.emplace_back("checkpoint", cfg.sim.checkpoint_path);
    kv.emplace_back("snapshot_every", std::to_string(cfg.sim.snapshot_every));
    kv.emplace_back("threads", std::to_string(cfg.sim.threads));
    return kv;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& cfg) {
    std::filesystem::create_directories(dir);
    std::ofstream os = open_out(dir / "manifest.txt", false);
    os << "tool=sqc " << kVersion << '\n';
    os << "command=" << command << '\n';
    for (const auto& [key, value] : render_config(cfg)) {
        os << key << '=' << value << '\n';
    }
}

void write_field_dump(const std::filesystem::path& path, const FieldSnapshot& s) {
    std::ofstream os = open_out(path, true);
    os.write("SQCF", 4);
    write_pod(os, kFieldFormatVersion);
    write_pod(os, static_cast<uint32_t>(s.nx));
    write_pod(os, static_cast<uint32_t>(s.ny));
    write_pod(os, static_cast<uint32_t>(s.t));
    for (size_t i = 0; i < s.rho.size(); ++i) {
        write_pod(os, s.rho[i]);
        write_pod(os, s.ux[i]);
        write_pod(os, s.uy[i]);
    }
    if (!os) {
        fail(path, "write failed");
    }
}

FieldSnapshot read_field_dump(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, true);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SQCF", 4) != 0) {
        fail(path, "bad magic, not a field dump");
    }
    uint32_t version = 0, nx = 0, ny = 0, t = 0;
    if (!read_pod(is, version) || !read_pod(is, nx) || !read_pod(is, ny) ||
        !read_pod(is, t)) {
        fail(path, "truncated header");
    }
    if (version != kFieldFormatVersion) {
        fail(path, "unsupported field format version " + std::to_string(version));
    }
    FieldSnapshot s;
    s.nx = static_cast<int>(nx);
    s.ny = static_cast<int>(ny);
    s.t = static_cast<int>(t);
    const size_t n = static_cast<size_t>(nx) * ny;
    s.rho.resize(n);
    s.ux.resize(n);
    s.uy.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (!read_pod(is, s.rho[i]) || !read_pod(is, s.ux[i]) || !read_pod(is, s.uy[i])) {
            fail(path, "truncated at node " + std::to_string(i) + " of " +
                           std::to_string(n));
        }
    }
    return s;
}

void write_snapshot_csv(const std::filesystem::path& path, const FieldSnapshot& s) {
    std::ofstream os = open_out(path, false);
    os << "x,y,rho,ux,uy\n";
    for (int y = 0; y < s.ny; ++y) {
        for (int x = 0; x < s.nx; ++x) {
            const size_t i = s.index(x, y);
            os << x << ',' << y << ',' << format_double(s.rho[i]) << ','
               << format_double(s.ux[i]) << ',' << format_double(s.uy[i]) << '\n';
        }
    }
}

void write_centerlines_csv(const std::filesystem::path& path, const CenterlineProfiles& p) {
    std::ofstream os = open_out(path, false);
    os << "line,coord,ux_over_uref,uy_over_uref\n";
    for (size_t i = 0; i < p.y.size(); ++i) {
        os << "vertical," << format_double(p.y[i]) << ','
           << format_double(p.ux_vertical[i]) << ','
           << format_double(p.uy_vertical[i]) << '\n';
    }
    for (size_t i = 0; i < p.x.size(); ++i) {
        os << "horizontal," << format_double(p.x[i]) << ','
           << format_double(p.ux_horizontal[i]) << ','
           << format_double(p.uy_horizontal[i]) << '\n';
    }
}

void write_loss_curve_csv(const std::filesystem::path& path,
                          const std::vector<LossCurvePoint>& curve) {
    std::ofstream os = open_out(path, false);
    os << "iteration,train_loss,val_mse,alpha\n";
    for (const LossCurvePoint& p : curve) {
        os << p.iteration << ',' << format_double(p.train_loss) << ','
           << format_double(p.val_mse) << ',' << format_double(p.alpha) << '\n';
    }
}

void write_decay_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<int, double>>& series) {
    std::ofstream os = open_out(path, false);
    os << "t,peak_speed\n";
    for (const auto& [t, v] : series) {
        os << t << ',' << format_double(v) << '\n';
    }
}

void write_mass_audit_csv(const std::filesystem::path& path,
                          const std::vector<MassAuditRow>& rows) {
    std::ofstream os = open_out(path, false);
    os << "t,total_mass,relative_drift,max_node_mass_error\n";
    for (const MassAuditRow& r : rows) {
        os << r.t << ',' << format_double(r.total_mass) << ','
           << format_double(r.relative_drift) << ','
           << format_double(r.max_node_mass_error) << '\n';
    }
}

void write_error_field_csv(const std::filesystem::path& path, const ErrorFields& e) {
    std::ofstream os = open_out(path, false);
    os << "x,y,relative,absolute\n";
    for (int y = 0; y < e.ny; ++y) {
        for (int x = 0; x < e.nx; ++x) {
            const size_t i = static_cast<size_t>(y) * e.nx + x;
            os << x << ',' << y << ',' << format_double(e.relative[i]) << ','
               << format_double(e.absolute[i]) << '\n';
        }
    }
}

}  // namespace sqc
