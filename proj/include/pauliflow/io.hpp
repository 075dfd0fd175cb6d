#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "pauliflow/field.hpp"
#include "pauliflow/wigner.hpp"

namespace pauliflow {

// FNV-1a 64-bit hash; used for config hashes and manifest entries.
std::uint64_t fnv1a64(const void* data, std::size_t bytes);
std::string fnv1a64_hex(const std::string& text);
std::uint64_t fnv1a64_file(const std::string& path);

// Binary field format: raw little-endian contiguous array, components
// outermost, axes row-major (last axis fastest), with a JSON sidecar
// `<path>.json` carrying dims, extents, dtype, component count and hbar.
void write_real_field(const std::string& path, const RealField& f,
                      double hbar = 0.0);
RealField read_real_field(const std::string& path);

void write_spinor_field(const std::string& path, const SpinorField& f, double hbar);
SpinorField read_spinor_field(const std::string& path, double* hbar = nullptr);

// Phase-space fields carry an extra xi-axis block in the sidecar.
void write_phase_space_field(const std::string& path, const PhaseSpaceField& f);

// Fixed-column CSV stream; floats are written with %.17g so identical runs
// produce bitwise-identical files.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    FILE* f_ = nullptr;
    std::size_t cols_;
};

// Deterministic run manifest: config hash plus name -> (bytes, fnv64) of
// every emitted file.
class Manifest {
  public:
    explicit Manifest(std::string config_hash) : config_hash_(std::move(config_hash)) {}
    void add_file(const std::string& dir, const std::string& name);
    void set_monitor(const std::string& name, bool passed);
    void write(const std::string& dir, const std::string& name = "manifest.json") const;
    bool all_monitors_passed() const;

  private:
    std::string config_hash_;
    std::map<std::string, std::pair<std::uint64_t, std::string>> files_;
    std::map<std::string, bool> monitors_;
};

}  // namespace pauliflow
