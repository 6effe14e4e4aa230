#pragma once

// Path batch serialisation.
//
// Binary "SDL1" layout, all fields little-endian:
//   bytes 0..3   magic "SDL1"
//   u64          n_paths
//   u64          n_steps
//   f64          T
//   u64          seed
//   f64[n_paths * (n_steps + 1)]  values, row-major (one row per path)
//
// CSV layout: header "path,step,t,x", one row per grid point.
// Sample lists: one value per line, optional non-numeric header line.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sdl/sde_sim.hpp"

namespace sdl {

void write_sdl1(std::ostream& out, const PathBatch& batch);
PathBatch read_sdl1(std::istream& in);

void write_sdl1_file(const std::filesystem::path& path, const PathBatch& batch);
PathBatch read_sdl1_file(const std::filesystem::path& path);

void write_csv(std::ostream& out, const PathBatch& batch);

/// Samples from either an SDL1 file (terminal values) or a CSV sample list.
std::vector<double> read_samples_file(const std::filesystem::path& path);

}  // namespace sdl
