#pragma once

// Run artifacts: trace CSV, amplitude checkpoints, density grids, metadata.

#include <filesystem>
#include <string>

#include "graylap/scenarios.hpp"

namespace graylap {

inline constexpr const char* kToolVersion = "0.1.0";

void write_text(const std::filesystem::path& path, const std::string& text);

// One width byte, then little-endian (re, im) double pairs.
void write_checkpoint(const std::filesystem::path& path, const StateVector& psi);
StateVector read_checkpoint(const std::filesystem::path& path);

// "ix,iy,p"
std::string density_grid_csv(std::span<const double> p, int n0, int n1);

std::string run_metadata_json(const ScenarioResult& r);

// Writes trace.csv, final.ckpt, metadata.json and config.toml (echo) into
// the config's output directory. Returns the directory.
std::filesystem::path write_run_outputs(const ScenarioResult& r);

}  // namespace graylap
