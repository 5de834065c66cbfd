// Command-line driver wiring the library into the full workflow:
// generate data, train, evaluate, count gates, simulate, compare.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sqc/decompose.hpp"
#include "sqc/io.hpp"
#include "sqc/version.hpp"

namespace fs = std::filesystem;
using namespace sqc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int64_t seed = -1;  // -1: keep the config value
};

RunConfig load_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = parse_config(opts.config_path);
    }
    if (opts.seed >= 0) {
        cfg.gen.seed = static_cast<uint64_t>(opts.seed);
        cfg.train.seed = static_cast<uint64_t>(opts.seed);
    }
    return cfg;
}

fs::path require_out(const CommonOpts& opts, const char* command) {
    if (opts.out_dir.empty()) {
        throw std::runtime_error(std::string(command) + ": --out directory is required");
    }
    fs::create_directories(opts.out_dir);
    return opts.out_dir;
}

int resolve_threads(int flag_value, const RunConfig& cfg) {
    if (flag_value > 0) {
        return flag_value;
    }
    if (const char* env = std::getenv("SQC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return cfg.sim.threads;
}

std::string snapshot_name(int t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "field_%06d.sqcf", t);
    return buf;
}

void print_accuracy(const std::array<double, 9>& acc) {
    for (size_t i = 0; i < 9; ++i) {
        std::cout << "  accuracy f" << i << ": " << format_double(acc[i]) << '\n';
    }
}

int cmd_gen_data(const CommonOpts& common) {
    const RunConfig cfg = load_config(common);
    const fs::path out = require_out(common, "gen-data");
    const GeneratedData data = generate_dataset(cfg.gen);
    const uint64_t digest = config_digest(cfg.gen);
    write_dataset(out / "train.sqcd", data.train, digest);
    write_dataset(out / "test.sqcd", data.test, digest);
    write_manifest(out, "gen-data", cfg);
    std::cout << "wrote " << data.train.size() << " training and " << data.test.size()
              << " test samples to " << out.string() << '\n'
              << "rejected redraws: " << data.rejected << '\n';
    return 0;
}

int cmd_train(const CommonOpts& common, const std::string& data_path,
              const std::string& resume_path, int64_t iterations_override,
              double alpha_max_override) {
    RunConfig cfg = load_config(common);
    if (iterations_override >= 0) {
        cfg.train.iterations = static_cast<uint64_t>(iterations_override);
    }
    if (alpha_max_override >= 0.0) {
        cfg.train.alpha.alpha_max = alpha_max_override;
    }
    const fs::path out = require_out(common, "train");
    const Dataset data = read_dataset(data_path);

    Checkpoint resume;
    const Checkpoint* resume_ptr = nullptr;
    if (!resume_path.empty()) {
        resume = load_checkpoint(resume_path);
        cfg.train.arch = resume.config.arch;
        resume_ptr = &resume;
    }

    auto [ckpt, report] = train(cfg.train, data, resume_ptr);
    save_checkpoint(out / "checkpoint.json", ckpt);
    write_loss_curve_csv(out / "loss_curve.csv", report.curve);
    write_manifest(out, "train", cfg);

    std::ofstream metrics(out / "metrics.txt");
    metrics << "initial_val_mse=" << format_double(report.initial_val_mse) << '\n'
            << "final_val_mse=" << format_double(report.final_val_mse) << '\n'
            << "relative_momentum_loss=" << format_double(report.relative_momentum_loss)
            << '\n'
            << "val_samples=" << report.val_samples << '\n';
    for (size_t i = 0; i < 9; ++i) {
        metrics << "accuracy_f" << i << '=' << format_double(report.accuracy[i]) << '\n';
    }

    std::cout << "trained " << cfg.train.arch.n_params() << " parameters for "
              << cfg.train.iterations << " iterations\n"
              << "  validation mse: " << format_double(report.initial_val_mse) << " -> "
              << format_double(report.final_val_mse) << '\n'
              << "  relative momentum loss: "
              << format_double(report.relative_momentum_loss) << '\n';
    print_accuracy(report.accuracy);
    return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& checkpoint_path,
                 const std::string& data_path, double epsilon) {
    const RunConfig cfg = load_config(common);
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const Dataset data = read_dataset(data_path);
    const double eps = epsilon > 0.0 ? epsilon : cfg.train.epsilon_acc;

    std::vector<Field16> preds;
    std::vector<Field16> targets;
    preds.reserve(data.size());
    targets.reserve(data.size());
    for (const Sample& s : data.samples) {
        preds.push_back(collide_sqc(ckpt.config.arch, ckpt.theta, embed_populations(s.pre)));
        targets.push_back(embed_populations(s.post));
    }
    const double mse = mse_loss(preds, targets);
    const std::array<double, 9> acc = accuracy(data, ckpt.config.arch, ckpt.theta, eps);
    const double relmom = relative_momentum_loss(data, ckpt.config.arch, ckpt.theta);

    std::cout << "evaluated " << data.size() << " samples\n"
              << "  mse: " << format_double(mse) << '\n'
              << "  relative momentum loss: " << format_double(relmom) << '\n'
              << "  tolerance: " << format_double(eps) << '\n';
    print_accuracy(acc);

    if (!common.out_dir.empty()) {
        const fs::path out = require_out(common, "evaluate");
        std::ofstream metrics(out / "metrics.txt");
        metrics << "mse=" << format_double(mse) << '\n'
                << "relative_momentum_loss=" << format_double(relmom) << '\n'
                << "epsilon=" << format_double(eps) << '\n';
        for (size_t i = 0; i < 9; ++i) {
            metrics << "accuracy_f" << i << '=' << format_double(acc[i]) << '\n';
        }
        write_manifest(out, "evaluate", cfg);
    }
    return 0;
}

int cmd_gate_count(const std::string& arch_text, int blocks,
                   const std::string& checkpoint_path, const std::string& emit_path) {
    ArchitectureSpec arch;
    std::vector<double> theta;
    if (!checkpoint_path.empty()) {
        const Checkpoint ckpt = load_checkpoint(checkpoint_path);
        arch = ckpt.config.arch;
        theta = ckpt.theta;
    } else {
        arch = ArchitectureSpec::blocks(blocks, ArchitectureSpec::parse(arch_text).layers);
        theta.assign(arch.n_params(), 0.0);
    }

    // Per-kind table over the kinds that actually appear, in first-use order.
    std::vector<LayerKind> kinds;
    for (LayerKind k : arch.layers) {
        bool seen = false;
        for (LayerKind s : kinds) seen = seen || s == k;
        if (!seen) kinds.push_back(k);
    }
    std::cout << "Layer   RZ   SX   CZ   Total\n";
    for (LayerKind k : kinds) {
        const NativeGateCount c = layer_gate_count(k);
        std::printf("%-6s %4ld %4ld %4ld   %5ld\n", to_string(k), c.rz, c.sx, c.cz,
                    c.total());
    }
    const NativeGateCount total = total_gate_count(arch);
    std::printf("%-6s %4ld %4ld %4ld   %5ld\n", "all", total.rz, total.sx, total.cz,
                total.total());
    std::cout << arch.layers.size() << " layers, " << total.total()
              << " native gates\n";

    if (!emit_path.empty()) {
        std::ofstream os(emit_path);
        if (!os) {
            throw std::runtime_error("cannot open '" + emit_path + "' for writing");
        }
        for (size_t l = 0; l < arch.layers.size(); ++l) {
            write_gate_listing(os, decompose_layer(arch.layers[l], theta[l]));
        }
        std::cout << "gate listing written to " << emit_path << '\n';
    }
    return 0;
}

int cmd_simulate(const CommonOpts& common, const std::string& case_override,
                 const std::string& backend_override, const std::string& checkpoint_override,
                 int64_t steps_override, int threads_flag) {
    RunConfig cfg = load_config(common);
    if (!case_override.empty()) {
        apply_config_entry(cfg, "case", case_override, "<cli>", 0);
    }
    if (!backend_override.empty()) {
        apply_config_entry(cfg, "backend", backend_override, "<cli>", 0);
    }
    if (!checkpoint_override.empty()) {
        cfg.sim.checkpoint_path = checkpoint_override;
    }
    if (steps_override >= 0) {
        cfg.sim.steps = static_cast<int>(steps_override);
    }
    cfg.sim.threads = resolve_threads(threads_flag, cfg);
    const fs::path out = require_out(common, "simulate");

    SqcOperator op;
    const SqcOperator* op_ptr = nullptr;
    if (cfg.sim.backend == CollisionBackendKind::SQC) {
        if (cfg.sim.checkpoint_path.empty()) {
            throw std::runtime_error("simulate: the sqc backend needs --checkpoint");
        }
        const Checkpoint ckpt = load_checkpoint(cfg.sim.checkpoint_path);
        op.arch = ckpt.config.arch;
        op.theta = ckpt.theta;
        op_ptr = &op;
    }

    const RunResult result = run(cfg.sim, op_ptr);

    for (const FieldSnapshot& snap : result.snapshots) {
        write_field_dump(out / snapshot_name(snap.t), snap);
    }
    const FieldSnapshot& final_snap = result.snapshots.back();
    write_field_dump(out / "field_final.sqcf", final_snap);
    write_snapshot_csv(out / "field_final.csv", final_snap);
    write_centerlines_csv(out / "centerlines_final.csv",
                          centerline_profiles(final_snap, cfg.sim.reference_velocity()));
    write_mass_audit_csv(out / "mass_audit.csv", result.metrics.mass_audit);
    if (cfg.sim.flow_case == SimCase::TaylorGreen) {
        write_decay_csv(out / "decay.csv", result.metrics.peak_speed);
    }
    write_manifest(out, "simulate", cfg);

    const MassAuditRow& last = result.metrics.mass_audit.back();
    std::cout << "simulated " << cfg.sim.steps << " steps on " << cfg.sim.nx << 'x'
              << cfg.sim.ny << " (tau " << format_double(cfg.sim.resolved_tau())
              << ")\n"
              << "  relative mass drift: " << format_double(last.relative_drift) << '\n'
              << "  max per-node collision mass error: "
              << format_double(last.max_node_mass_error) << '\n';
    if (cfg.sim.flow_case == SimCase::TaylorGreen && cfg.sim.steps > 1) {
        const double fitted = fit_decay_rate(result.metrics.peak_speed);
        const double k = 2.0 * 3.14159265358979323846 / cfg.sim.nx;
        const double analytic = 2.0 * viscosity(cfg.sim.resolved_tau()) * k * k;
        std::cout << "  fitted decay rate: " << format_double(fitted)
                  << " (analytic " << format_double(analytic) << ", relative error "
                  << format_double(std::abs(fitted - analytic) / analytic) << ")\n";
    }
    return 0;
}

int cmd_compare(const std::string& run_a, const std::string& run_b,
                const std::string& out_dir) {
    const FieldSnapshot a = read_field_dump(fs::path(run_a) / "field_final.sqcf");
    const FieldSnapshot b = read_field_dump(fs::path(run_b) / "field_final.sqcf");
    const ErrorFields err = error_fields(a, b);

    fs::path out = out_dir;
    fs::create_directories(out);
    write_error_field_csv(out / "error_fields.csv", err);

    const CenterlineProfiles pa = centerline_profiles(a, 1.0);
    const CenterlineProfiles pb = centerline_profiles(b, 1.0);
    {
        std::ofstream os(out / "centerlines_overlay.csv");
        os << "line,coord,ux_a,uy_a,ux_b,uy_b\n";
        for (size_t i = 0; i < pa.y.size(); ++i) {
            os << "vertical," << format_double(pa.y[i]) << ','
               << format_double(pa.ux_vertical[i]) << ','
               << format_double(pa.uy_vertical[i]) << ','
               << format_double(pb.ux_vertical[i]) << ','
               << format_double(pb.uy_vertical[i]) << '\n';
        }
        for (size_t i = 0; i < pa.x.size(); ++i) {
            os << "horizontal," << format_double(pa.x[i]) << ','
               << format_double(pa.ux_horizontal[i]) << ','
               << format_double(pa.uy_horizontal[i]) << ','
               << format_double(pb.ux_horizontal[i]) << ','
               << format_double(pb.uy_horizontal[i]) << '\n';
        }
    }
    {
        std::ofstream os(out / "summary.txt");
        os << "mean_relative=" << format_double(err.mean_relative) << '\n'
           << "max_relative=" << format_double(err.max_relative) << '\n'
           << "max_relative_at=" << err.max_relative_x << ',' << err.max_relative_y << '\n'
           << "mean_absolute=" << format_double(err.mean_absolute) << '\n'
           << "max_absolute=" << format_double(err.max_absolute) << '\n'
           << "max_absolute_at=" << err.max_absolute_x << ',' << err.max_absolute_y << '\n';
    }

    std::cout << "compared " << run_a << " vs " << run_b << " at t=" << a.t << '\n'
              << "  mean relative |u| error: " << format_double(err.mean_relative) << '\n'
              << "  max relative |u| error: " << format_double(err.max_relative) << " at ("
              << err.max_relative_x << ", " << err.max_relative_y << ")\n"
              << "  mean absolute |u| error: " << format_double(err.mean_absolute) << '\n'
              << "  max absolute |u| error: " << format_double(err.max_absolute) << " at ("
              << err.max_absolute_x << ", " << err.max_absolute_y << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrogate quantum circuit collision for lattice Boltzmann"};
    app.set_version_flag("--version", std::string("sqc ") + kVersion);
    app.require_subcommand(1);

    CommonOpts gen_opts;
    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic collision dataset");
    gen->add_option("--config", gen_opts.config_path, "run configuration file");
    gen->add_option("--out", gen_opts.out_dir, "output directory")->required();
    gen->add_option("--seed", gen_opts.seed, "override the RNG seed");

    CommonOpts train_opts;
    std::string train_data, train_resume;
    int64_t train_iterations = -1;
    double train_alpha_max = -1.0;
    CLI::App* tr = app.add_subcommand("train", "train the surrogate collision circuit");
    tr->add_option("--config", train_opts.config_path, "run configuration file");
    tr->add_option("--data", train_data, "training dataset file")->required();
    tr->add_option("--out", train_opts.out_dir, "output directory")->required();
    tr->add_option("--seed", train_opts.seed, "override the RNG seed");
    tr->add_option("--iterations", train_iterations, "override the iteration count");
    tr->add_option("--alpha-max", train_alpha_max,
                   "override the momentum-penalty cap (0 disables)");
    tr->add_option("--resume", train_resume, "continue from a checkpoint");

    CommonOpts eval_opts;
    std::string eval_checkpoint, eval_data;
    double eval_epsilon = -1.0;
    CLI::App* ev = app.add_subcommand("evaluate", "score a checkpoint against a dataset");
    ev->add_option("--config", eval_opts.config_path, "run configuration file");
    ev->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
    ev->add_option("--data", eval_data, "dataset file")->required();
    ev->add_option("--epsilon", eval_epsilon, "accuracy tolerance");
    ev->add_option("--out", eval_opts.out_dir, "optional output directory");

    std::string gc_arch = "X,Z,XXA,ZZD";
    int gc_blocks = 15;
    std::string gc_checkpoint, gc_emit;
    CLI::App* gc = app.add_subcommand("gate-count", "native gate counts for an architecture");
    gc->add_option("--arch", gc_arch, "block layer list, e.g. X,Z,XXA,ZZD");
    gc->add_option("--blocks", gc_blocks, "number of block repetitions");
    gc->add_option("--checkpoint", gc_checkpoint, "read the architecture from a checkpoint");
    gc->add_option("--emit-gates", gc_emit, "write the full gate listing to a file");

    CommonOpts sim_opts;
    std::string sim_case, sim_backend, sim_checkpoint;
    int64_t sim_steps = -1;
    int sim_threads = 0;
    CLI::App* sim = app.add_subcommand("simulate", "run a benchmark flow");
    sim->add_option("--config", sim_opts.config_path, "run configuration file");
    sim->add_option("--out", sim_opts.out_dir, "output directory")->required();
    sim->add_option("--case", sim_case, "taylor-green or lid-cavity");
    sim->add_option("--backend", sim_backend, "bgk or sqc");
    sim->add_option("--checkpoint", sim_checkpoint, "checkpoint for the sqc backend");
    sim->add_option("--steps", sim_steps, "override the step count");
    sim->add_option("--threads", sim_threads,
                    "collision worker threads (SQC_THREADS as fallback)");

    std::string cmp_a, cmp_b, cmp_out;
    CLI::App* cmp = app.add_subcommand("compare", "velocity error between two runs");
    cmp->add_option("--run-a", cmp_a, "first simulation output directory")->required();
    cmp->add_option("--run-b", cmp_b, "reference simulation output directory")->required();
    cmp->add_option("--out", cmp_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_gen_data(gen_opts);
        }
        if (tr->parsed()) {
            return cmd_train(train_opts, train_data, train_resume, train_iterations,
                             train_alpha_max);
        }
        if (ev->parsed()) {
            return cmd_evaluate(eval_opts, eval_checkpoint, eval_data, eval_epsilon);
        }
        if (gc->parsed()) {
            return cmd_gate_count(gc_arch, gc_blocks, gc_checkpoint, gc_emit);
        }
        if (sim->parsed()) {
            return cmd_simulate(sim_opts, sim_case, sim_backend, sim_checkpoint, sim_steps,
                                sim_threads);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_a, cmp_b, cmp_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
