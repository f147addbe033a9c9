// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
//
// eksmor — balanced-truncation model order reduction for RLCk circuit
// models. Subcommands: reduce, compare, validate, freqresp.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "eksmor/dense_bt.hpp"
#include "eksmor/descriptor_system.hpp"
#include "eksmor/eks.hpp"
#include "eksmor/element_list.hpp"
#include "eksmor/errors.hpp"
#include "eksmor/freqresp.hpp"
#include "eksmor/lowrank_bt.hpp"
#include "eksmor/mna.hpp"
#include "eksmor/sparam_io.hpp"
#include "eksmor/system_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eksmor;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string out = ".";
    std::string mode = "eksm";
    double tol = 1e-10;
    int maxiter = 100;
    Eigen::Index order = 0;  // 0 = not given
    double eps = -1;         // < 0 = not given
    std::string grid = "1e6:100e9:201:log";
    double z0 = 50.0;
    double cmin = 1e-18;
    int threads = 1;
    bool verbose = false;
};

double peak_rss_gb() {
    std::ifstream f("/proc/self/status");
    std::string line;
    while (std::getline(f, line))
        if (line.rfind("VmHWM:", 0) == 0) {
            long kb = 0;
            std::sscanf(line.c_str(), "VmHWM: %ld", &kb);
            return static_cast<double>(kb) / (1024.0 * 1024.0);
        }
    return 0.0;
}

FrequencyGrid parse_grid(const std::string& spec) {
    double start = 0, stop = 0;
    long count = 0;
    char kind[8] = {0};
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld:%7s", &start, &stop, &count, kind) != 4)
        throw ValidationError("invalid_grid",
                              "grid must be start:stop:count:log|lin (Hz), got '" + spec + "'");
    const std::string k(kind);
    if (k == "log") return FrequencyGrid::log_hz(start, stop, count);
    if (k == "lin") return FrequencyGrid::linear_hz(start, stop, count);
    throw ValidationError("invalid_grid", "grid spacing must be 'log' or 'lin', got '" + k + "'");
}

DescriptorSystem load_input(const std::string& path, const Options& opt) {
    if (fs::path(path).extension() == ".json") return load_system(path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    AssemblyOptions aopts;
    aopts.grounding_capacitance = opt.cmin;
    return assemble_mna(parse_netlist(text), aopts);
}

ReductionTarget make_target(const Options& opt) {
    if (opt.order > 0) return ReductionTarget::order(opt.order);
    if (opt.eps >= 0) return ReductionTarget::tolerance(opt.eps);
    return ReductionTarget::automatic();
}

void emit_error(const std::string& type, const std::string& code, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"code", code}, {"message", message}};
    std::cerr << j.dump() << std::endl;
}

int run_reduce(const std::string& input, const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    DescriptorSystem sys = load_input(input, opt);
    const ReductionTarget target = make_target(opt);

    SquareRootBtResult result;
    if (opt.mode == "dense") {
        DenseBtResult dense = balance_truncate_dense(sys, target);
        result.rom = std::move(dense.rom);
        result.transform = std::move(dense.transform);
    } else if (opt.mode == "eksm") {
        EksOptions eopts;
        eopts.tol = opt.tol;
        eopts.max_iterations = opt.maxiter;
        auto solve_side = [&](GramianSide side, const char* tag) {
            EksOptions local = eopts;
            if (opt.verbose)
                local.progress = [tag](int j, Eigen::Index cols, double res) {
                    std::fprintf(stderr, "eksm[%s] iteration %d basis %ld residual %.3e\n", tag,
                                 j, static_cast<long>(cols), res);
                };
            return eksm_solve(sys, side, local);
        };
        LowRankFactor zp, zq;
        if (opt.threads > 1) {
            // the two sides share only the immutable system
            auto fp = std::async(std::launch::async, solve_side,
                                 GramianSide::controllability, "P");
            zq = solve_side(GramianSide::observability, "Q");
            zp = fp.get();
        } else {
            zp = solve_side(GramianSide::controllability, "P");
            zq = solve_side(GramianSide::observability, "Q");
        }
        if (!zp.converged || !zq.converged) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "EKSM did not reach tol %.3e within %d iterations "
                          "(residual P %.3e, Q %.3e)",
                          opt.tol, opt.maxiter, zp.residual, zq.residual);
            throw NumericalError("nonconvergence", buf);
        }
        result = square_root_bt(zp, zq, sys, target, opt.tol);
    } else {
        throw ValidationError("invalid_config", "mode must be 'eksm' or 'dense'");
    }

    export_rom(result.rom, opt.out);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const ReducedOrderModel& rom = result.rom;
    std::printf("input            : %s\n", input.c_str());
    std::printf("initial order    : %ld\n", static_cast<long>(sys.order()));
    std::printf("rom order        : %ld\n", static_cast<long>(rom.order()));
    if (rom.provenance.method == "eksm") {
        std::printf("eksm residual P  : %.3e (%d iterations)\n", rom.provenance.residual_p,
                    rom.provenance.iterations_p);
        std::printf("eksm residual Q  : %.3e (%d iterations)\n", rom.provenance.residual_q,
                    rom.provenance.iterations_q);
    } else {
        std::printf("gramian residuals: %.3e / %.3e\n", rom.provenance.residual_p,
                    rom.provenance.residual_q);
    }
    std::printf("error bound      : %.6e\n", rom.error_bound);
    std::printf("reduction time(s): %.3f\n", seconds);
    std::printf("memory (GB)      : %.3f\n", peak_rss_gb());
    for (const auto& w : rom.provenance.warnings) std::printf("warning          : %s\n", w.c_str());
    std::printf("wrote            : %s\n", (fs::path(opt.out) / "rom.json").string().c_str());
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path, const Options& opt) {
    DescriptorSystem a = load_input(a_path, opt);
    DescriptorSystem b = load_input(b_path, opt);
    if (a.inputs() != b.inputs() || a.outputs() != b.outputs())
        throw ValidationError("port_mismatch",
                              "models have different port counts (" +
                                  std::to_string(a.inputs()) + " vs " +
                                  std::to_string(b.inputs()) + ")");

    FrequencyGrid grid = parse_grid(opt.grid);
    TransferFunctionSamples ha = transfer_function(a, grid, opt.threads);
    TransferFunctionSamples hb = transfer_function(b, grid, opt.threads);

    fs::create_directories(opt.out);
    json metrics;
    const bool scattering = ha.kind == TransferFunctionSamples::Kind::admittance &&
                            hb.kind == TransferFunctionSamples::Kind::admittance &&
                            a.inputs() == a.outputs();
    ComparisonMetrics m;
    if (scattering) {
        SParamSet sa = y_to_s(ha, opt.z0);
        SParamSet sb = y_to_s(hb, opt.z0);
        const std::string ext = touchstone_extension(a.inputs());
        write_touchstone((fs::path(opt.out) / ("original" + ext)).string(), sa);
        write_touchstone((fs::path(opt.out) / ("rom" + ext)).string(), sb);
        write_sparams_csv((fs::path(opt.out) / "original.csv").string(), sa);
        write_sparams_csv((fs::path(opt.out) / "rom.csv").string(), sb);
        m = compare(sa, sb);
        metrics["domain"] = "s-parameters";
        metrics["z0"] = opt.z0;
    } else {
        m = compare(ha, hb);
        metrics["domain"] = "transfer-function";
    }
    metrics["max_error"] = m.max_error;
    metrics["max_error_freq_hz"] = m.max_freq_hz;
    metrics["rms_error"] = m.rms_error;
    metrics["max_entry_error"] = m.max_entry_error;
    std::ofstream mf(fs::path(opt.out) / "metrics.json");
    mf << metrics.dump(2) << '\n';

    std::printf("grid points      : %ld\n", static_cast<long>(grid.size()));
    std::printf("max error        : %.6e at %.6e Hz\n", m.max_error, m.max_freq_hz);
    std::printf("rms error        : %.6e\n", m.rms_error);
    return 0;
}

int run_validate(const std::string& input, const Options& opt) {
    std::vector<std::string> problems;
    std::optional<DescriptorSystem> sys;
    try {
        sys = load_input(input, opt);
    } catch (const Error& e) {
        problems.push_back(e.what());
    }
    if (sys) {
        auto structural = sys->check_structure();
        problems.insert(problems.end(), structural.begin(), structural.end());
        if (structural.empty()) {
            auto numeric = sys->check_numerics();
            problems.insert(problems.end(), numeric.begin(), numeric.end());
        }
    }

    if (sys) {
        std::printf("order   : %ld (%ld nodes, %ld branches)\n", static_cast<long>(sys->order()),
                    static_cast<long>(sys->nodes()), static_cast<long>(sys->branches()));
        std::printf("ports   : %ld\n", static_cast<long>(sys->inputs()));
    }
    if (problems.empty()) {
        std::printf("result  : ok\n");
        return 0;
    }
    for (const auto& p : problems) std::printf("FAIL    : %s\n", p.c_str());
    emit_error("ValidationError", "invalid_system", problems.front());
    return kExitInput;
}

int run_freqresp(const std::string& input, const Options& opt) {
    DescriptorSystem sys = load_input(input, opt);
    FrequencyGrid grid = parse_grid(opt.grid);
    TransferFunctionSamples h = transfer_function(sys, grid, opt.threads);

    fs::create_directories(opt.out);
    if (h.kind == TransferFunctionSamples::Kind::admittance && sys.inputs() == sys.outputs()) {
        SParamSet s = y_to_s(h, opt.z0);
        const std::string ext = touchstone_extension(sys.inputs());
        write_touchstone((fs::path(opt.out) / ("freqresp" + ext)).string(), s);
        write_sparams_csv((fs::path(opt.out) / "freqresp.csv").string(), s);
        std::printf("wrote   : %s\n",
                    (fs::path(opt.out) / ("freqresp" + ext)).string().c_str());
    } else {
        // raw transfer function samples, same CSV layout with H in place of S
        SParamSet raw;
        raw.grid = h.grid;
        raw.values = h.values;
        raw.z0 = opt.z0;
        write_sparams_csv((fs::path(opt.out) / "freqresp.csv").string(), raw);
    }
    std::printf("wrote   : %s\n", (fs::path(opt.out) / "freqresp.csv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"balanced-truncation model order reduction for RLCk circuit models"};
    app.fallthrough();
    app.set_config("--config", "", "options file (flat key=value lines)");

    Options opt;
    app.add_option("--out", opt.out, "output directory")->envname("EKSMOR_OUT");
    app.add_option("--mode", opt.mode, "reduction engine: eksm | dense")->envname("EKSMOR_MODE");
    app.add_option("--tol", opt.tol, "EKSM residual tolerance")
        ->envname("EKSMOR_TOL")
        ->check(CLI::PositiveNumber);
    app.add_option("--maxiter", opt.maxiter, "EKSM iteration cap")
        ->envname("EKSMOR_MAXITER")
        ->check(CLI::PositiveNumber);
    app.add_option("--order", opt.order, "reduced order (overrides --eps)")
        ->envname("EKSMOR_ORDER")
        ->check(CLI::PositiveNumber);
    app.add_option("--eps", opt.eps, "truncation bound tolerance")->envname("EKSMOR_EPS");
    app.add_option("--grid", opt.grid, "frequency grid start:stop:count:log|lin in Hz")
        ->envname("EKSMOR_GRID");
    app.add_option("--z0", opt.z0, "reference impedance (ohms)")
        ->envname("EKSMOR_Z0")
        ->check(CLI::PositiveNumber);
    app.add_option("--cmin", opt.cmin, "grounding capacitance, 0 disables")
        ->envname("EKSMOR_CMIN")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threads", opt.threads, "worker threads")
        ->envname("EKSMOR_THREADS")
        ->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", opt.verbose, "per-iteration progress on stderr");

    std::string input, rom_path;
    CLI::App* reduce = app.add_subcommand("reduce", "reduce a model and export the result");
    reduce->add_option("input", input, "netlist or matrix manifest")->required();
    CLI::App* cmp = app.add_subcommand("compare", "compare two models over a frequency grid");
    cmp->add_option("original", input, "netlist or matrix manifest")->required();
    cmp->add_option("rom", rom_path, "netlist or matrix manifest")->required();
    CLI::App* validate = app.add_subcommand("validate", "check model invariants");
    validate->add_option("input", input, "netlist or matrix manifest")->required();
    CLI::App* freq = app.add_subcommand("freqresp", "evaluate the frequency response");
    freq->add_option("input", input, "netlist or matrix manifest")->required();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("UsageError", "usage", e.what());
        std::cerr << e.what() << std::endl;
        return kExitUsage;
    }

    try {
        if (reduce->parsed()) return run_reduce(input, opt);
        if (cmp->parsed()) return run_compare(input, rom_path, opt);
        if (validate->parsed()) return run_validate(input, opt);
        if (freq->parsed()) return run_freqresp(input, opt);
        return kExitUsage;
    } catch (const NumericalError& e) {
        emit_error("NumericalError", e.code(), e.what());
        return kExitNumerical;
    } catch (const ParseError& e) {
        emit_error("ParseError", e.code(), e.what());
        return kExitInput;
    } catch (const Error& e) {  // ValidationError, IoError
        emit_error("InputError", e.code(), e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        emit_error("InternalError", "internal", e.what());
        return kExitNumerical;
    }
}
