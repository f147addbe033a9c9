// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/system_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "eksmor/errors.hpp"
#include "eksmor/matrix_market.hpp"

namespace eksmor {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON manifest '") + path + "': " + e.what(), 1);
    }
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string matrix_path(const json& manifest, const std::string& key, const fs::path& base) {
    if (!manifest.contains("files") || !manifest["files"].contains(key))
        throw ValidationError("invalid_manifest", "manifest is missing files." + key);
    fs::path p = manifest["files"][key].get<std::string>();
    if (p.is_relative()) p = base / p;
    return p.string();
}

std::vector<std::string> port_names(const json& manifest, Eigen::Index count) {
    std::vector<std::string> ports;
    if (manifest.contains("ports")) {
        for (const auto& p : manifest["ports"]) ports.push_back(p.get<std::string>());
        if (!ports.empty() && static_cast<Eigen::Index>(ports.size()) != count)
            throw ValidationError("invalid_manifest",
                                  "manifest port count does not match the input count");
    }
    if (ports.empty())
        for (Eigen::Index i = 0; i < count; ++i) ports.push_back("p" + std::to_string(i + 1));
    return ports;
}

}  // namespace

void save_system(const DescriptorSystem& sys, const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path base(dir);
    write_matrix_market((base / (name + "_G.mtx")).string(), sys.G);
    write_matrix_market((base / (name + "_C.mtx")).string(), sys.C());
    write_matrix_market((base / (name + "_B.mtx")).string(), sys.B);
    write_matrix_market((base / (name + "_L.mtx")).string(), sys.L);

    json manifest;
    manifest["files"] = {{"G", name + "_G.mtx"},
                         {"C", name + "_C.mtx"},
                         {"B", name + "_B.mtx"},
                         {"L", name + "_L.mtx"}};
    manifest["ports"] = sys.ports;
    manifest["nodes"] = sys.nodes();
    manifest["branches"] = sys.branches();
    manifest["port_kind"] = sys.admittance_ports ? "admittance" : "generic";
    write_json(manifest, (base / (name + ".json")).string());
}

DescriptorSystem load_system(const std::string& manifest_path) {
    const json manifest = read_manifest(manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    SpMat G = read_matrix_market(matrix_path(manifest, "G", base));
    SpMat C = read_matrix_market(matrix_path(manifest, "C", base));
    SpMat B = read_matrix_market(matrix_path(manifest, "B", base));
    SpMat L = read_matrix_market(matrix_path(manifest, "L", base));

    const Eigen::Index N = G.rows();
    if (G.cols() != N) throw ValidationError("dimension_mismatch", "G is not square");
    if (C.rows() != N || C.cols() != N)
        throw ValidationError("dimension_mismatch", "C dimensions do not match G");
    if (B.rows() != N) throw ValidationError("dimension_mismatch", "B row count does not match G");
    if (L.cols() != N)
        throw ValidationError("dimension_mismatch", "L column count does not match G");

    // Symmetry of C is an invariant of raw system ingest, not a warning.
    // Reduced-model manifests (marked by their "order" key) are exempt:
    // balanced coordinates do not preserve the symmetry.
    if (!manifest.contains("order")) {
        double c_scale = 0;
        for (Eigen::Index c = 0; c < C.outerSize(); ++c)
            for (SpMat::InnerIterator it(C, c); it; ++it)
                c_scale = std::max(c_scale, std::abs(it.value()));
        SpMat gap = (C - SpMat(C.transpose())).pruned();
        for (Eigen::Index c = 0; c < gap.outerSize(); ++c)
            for (SpMat::InnerIterator it(gap, c); it; ++it)
                if (std::abs(it.value()) > 1e-12 * c_scale)
                    throw ValidationError("asymmetric_c",
                                          "C is not symmetric within 1e-12 of its magnitude");
    }

    Eigen::Index n = N, m = 0;
    if (manifest.contains("nodes") || manifest.contains("branches")) {
        n = manifest.value("nodes", N);
        m = manifest.value("branches", Eigen::Index(0));
        if (n < 0 || m < 0 || n + m != N)
            throw ValidationError("invalid_manifest",
                                  "nodes + branches does not match the matrix order");
    }

    DescriptorSystem sys;
    sys.G = std::move(G);
    sys.Cn = C.topLeftCorner(n, n);
    sys.M = Eigen::MatrixXd(C.bottomRightCorner(m, m));
    if (m > 0) {
        SpMat off = C.topRightCorner(n, m);
        if (off.nonZeros() > 0 && Eigen::MatrixXd(off).cwiseAbs().maxCoeff() != 0)
            throw ValidationError("invalid_manifest",
                                  "C couples node and branch blocks; the declared split is wrong");
    }
    sys.B = std::move(B);
    sys.L = std::move(L);
    sys.ports = port_names(manifest, sys.B.cols());
    if (manifest.contains("port_kind"))
        sys.admittance_ports = manifest["port_kind"].get<std::string>() == "admittance";
    else
        sys.admittance_ports = sys.has_symmetric_ports();
    sys.validate();
    return sys;
}

void export_rom(const ReducedOrderModel& rom, const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path base(dir);
    write_matrix_market((base / (name + "_G.mtx")).string(), rom.G);
    write_matrix_market((base / (name + "_C.mtx")).string(), rom.C);
    write_matrix_market((base / (name + "_B.mtx")).string(), rom.B);
    write_matrix_market((base / (name + "_L.mtx")).string(), rom.L);

    json manifest;
    manifest["order"] = rom.order();
    manifest["ports"] = rom.ports;
    manifest["port_kind"] = rom.admittance_ports ? "admittance" : "generic";
    manifest["files"] = {{"G", name + "_G.mtx"},
                         {"C", name + "_C.mtx"},
                         {"B", name + "_B.mtx"},
                         {"L", name + "_L.mtx"}};
    manifest["hsv"] = std::vector<double>(rom.hsv.values().data(),
                                          rom.hsv.values().data() + rom.hsv.size());
    manifest["error_bound"] = rom.error_bound;
    const RomProvenance& prov = rom.provenance;
    manifest["method"] = prov.method;
    if (prov.method == "eksm")
        manifest["eksm"] = {{"tol", prov.tol},
                            {"iterations_P", prov.iterations_p},
                            {"iterations_Q", prov.iterations_q},
                            {"residual_P", prov.residual_p},
                            {"residual_Q", prov.residual_q},
                            {"converged_P", prov.converged_p},
                            {"converged_Q", prov.converged_q},
                            {"deflations_P", prov.deflations_p},
                            {"deflations_Q", prov.deflations_q}};
    if (!prov.warnings.empty()) manifest["warnings"] = prov.warnings;
    write_json(manifest, (base / (name + ".json")).string());
}

ReducedOrderModel load_rom(const std::string& manifest_path) {
    const json manifest = read_manifest(manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    ReducedOrderModel rom;
    rom.G = Eigen::MatrixXd(read_matrix_market(matrix_path(manifest, "G", base)));
    rom.C = Eigen::MatrixXd(read_matrix_market(matrix_path(manifest, "C", base)));
    rom.B = Eigen::MatrixXd(read_matrix_market(matrix_path(manifest, "B", base)));
    rom.L = Eigen::MatrixXd(read_matrix_market(matrix_path(manifest, "L", base)));
    rom.ports = port_names(manifest, rom.B.cols());
    rom.admittance_ports = manifest.value("port_kind", std::string("generic")) == "admittance";
    if (manifest.contains("hsv")) {
        const auto& values = manifest["hsv"];
        Eigen::VectorXd sigma(values.size());
        for (size_t i = 0; i < values.size(); ++i)
            sigma(static_cast<Eigen::Index>(i)) = values[i].get<double>();
        rom.hsv = HsvSpectrum(std::move(sigma));
    }
    rom.error_bound = manifest.value("error_bound", 0.0);
    rom.provenance.method = manifest.value("method", std::string());
    if (manifest.contains("eksm")) {
        const auto& e = manifest["eksm"];
        rom.provenance.tol = e.value("tol", 0.0);
        rom.provenance.iterations_p = e.value("iterations_P", 0);
        rom.provenance.iterations_q = e.value("iterations_Q", 0);
        rom.provenance.residual_p = e.value("residual_P", 0.0);
        rom.provenance.residual_q = e.value("residual_Q", 0.0);
        rom.provenance.converged_p = e.value("converged_P", true);
        rom.provenance.converged_q = e.value("converged_Q", true);
        rom.provenance.deflations_p = e.value("deflations_P", 0);
        rom.provenance.deflations_q = e.value("deflations_Q", 0);
    }
    if (manifest.contains("order") &&
        manifest["order"].get<Eigen::Index>() != rom.order())
        throw ValidationError("invalid_manifest",
                              "manifest order does not match the stored matrices");
    return rom;
}

}  // namespace eksmor
