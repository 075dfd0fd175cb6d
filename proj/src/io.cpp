#include "pauliflow/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace pauliflow {

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text.data(), text.size())));
    return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file for hashing: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return fnv1a64(bytes.data(), bytes.size());
}

namespace {

nlohmann::json grid_header(const UniformGrid& g, const char* dtype, int components,
                           double hbar) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["dtype"] = dtype;
    j["byte_order"] = "little_endian";
    j["axis_order"] = "row_major";
    j["components"] = components;
    j["hbar"] = hbar;
    std::vector<int> dims;
    std::vector<double> extents;
    for (int a = 0; a < g.dim(); ++a) {
        dims.push_back(g.n(a));
        extents.push_back(g.extent(a));
    }
    j["dims"] = dims;
    j["extents"] = extents;
    j["periodic"] = std::vector<bool>(g.dim(), true);
    return j;
}

void write_sidecar(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path + ".json");
    if (!out) throw ValidationError("cannot write sidecar for " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_sidecar(const std::string& path) {
    std::ifstream in(path + ".json");
    if (!in) throw ValidationError("missing sidecar for " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void write_raw(const std::string& path, const void* data, std::size_t bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

std::vector<char> read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
}

UniformGrid grid_from_header(const nlohmann::json& j) {
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    std::vector<double> extents = j.at("extents").get<std::vector<double>>();
    return UniformGrid(static_cast<int>(dims.size()), dims, extents);
}

}  // namespace

void write_real_field(const std::string& path, const RealField& f, double hbar) {
    write_sidecar(path, grid_header(f.grid(), "float64", 1, hbar));
    write_raw(path, f.values().data(), f.values().size() * sizeof(double));
}

RealField read_real_field(const std::string& path) {
    nlohmann::json j = read_sidecar(path);
    if (j.at("dtype") != "float64" || j.at("components") != 1)
        throw ValidationError("field header mismatch for " + path);
    UniformGrid g = grid_from_header(j);
    std::vector<char> raw = read_raw(path);
    if (raw.size() != static_cast<std::size_t>(g.size()) * sizeof(double))
        throw ValidationError("field payload size mismatch for " + path);
    std::vector<double> v(g.size());
    std::memcpy(v.data(), raw.data(), raw.size());
    return RealField(g, std::move(v));
}

void write_spinor_field(const std::string& path, const SpinorField& f, double hbar) {
    write_sidecar(path, grid_header(f.grid(), "complex128", 2, hbar));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    for (int c = 0; c < 2; ++c)
        out.write(reinterpret_cast<const char*>(f.comp(c).data()),
                  static_cast<std::streamsize>(f.comp(c).size() * sizeof(cdouble)));
}

SpinorField read_spinor_field(const std::string& path, double* hbar) {
    nlohmann::json j = read_sidecar(path);
    if (j.at("dtype") != "complex128" || j.at("components") != 2)
        throw ValidationError("spinor header mismatch for " + path);
    UniformGrid g = grid_from_header(j);
    if (hbar) *hbar = j.value("hbar", 0.0);
    std::vector<char> raw = read_raw(path);
    if (raw.size() != 2 * static_cast<std::size_t>(g.size()) * sizeof(cdouble))
        throw ValidationError("spinor payload size mismatch for " + path);
    SpinorField f(g);
    std::memcpy(f.comp(0).data(), raw.data(), g.size() * sizeof(cdouble));
    std::memcpy(f.comp(1).data(), raw.data() + g.size() * sizeof(cdouble),
                g.size() * sizeof(cdouble));
    return f;
}

void write_phase_space_field(const std::string& path, const PhaseSpaceField& f) {
    const PhaseSpaceGrid& ps = f.grid();
    nlohmann::json j = grid_header(ps.xfine(), "float64", 1, ps.hbar());
    std::vector<int> xi_dims;
    std::vector<double> xi_extents;
    for (int a = 0; a < ps.xgrid().dim(); ++a) {
        xi_dims.push_back(ps.nxi(a));
        xi_extents.push_back(2.0 * ps.xi_max(a));
    }
    j["xi_dims"] = xi_dims;
    j["xi_extents"] = xi_extents;
    write_sidecar(path, j);
    write_raw(path, f.values().data(), f.values().size() * sizeof(double));
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), cols_(columns.size()) {
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw ValidationError("cannot open csv " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::fprintf(f_, "%s%s", columns[i].c_str(),
                     i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != cols_)
        throw ValidationError("csv row width mismatch in " + path_);
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, "%.17g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

void Manifest::add_file(const std::string& dir, const std::string& name) {
    std::string full = dir + "/" + name;
    std::ifstream in(full, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("manifest: missing file " + full);
    std::uint64_t bytes = static_cast<std::uint64_t>(in.tellg());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(full)));
    files_[name] = {bytes, buf};
}

void Manifest::set_monitor(const std::string& name, bool passed) {
    monitors_[name] = passed;
}

bool Manifest::all_monitors_passed() const {
    for (const auto& [name, ok] : monitors_)
        if (!ok) return false;
    return true;
}

void Manifest::write(const std::string& dir, const std::string& name) const {
    nlohmann::json j;
    j["config_hash"] = config_hash_;
    nlohmann::json files = nlohmann::json::object();
    for (const auto& [fname, info] : files_) {
        files[fname] = {{"bytes", info.first}, {"fnv1a64", info.second}};
    }
    j["files"] = files;
    nlohmann::json mons = nlohmann::json::object();
    for (const auto& [mname, ok] : monitors_) mons[mname] = ok;
    j["monitors"] = mons;
    std::ofstream out(dir + "/" + name);
    if (!out) throw ValidationError("cannot write manifest in " + dir);
    out << j.dump(2) << "\n";
}

}  // namespace pauliflow
