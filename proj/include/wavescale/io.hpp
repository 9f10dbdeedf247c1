#pragma once

#include <map>
#include <string>
#include <vector>

#include "wavescale/anova.hpp"
#include "wavescale/patches.hpp"
#include "wavescale/spectrum.hpp"
#include "wavescale/transform.hpp"

namespace wavescale {

// Shortest round-trip representation of a double ("%.17g" trimmed); used for
// every CSV so outputs are byte-stable and lossless.
std::string format_double(double value);

// Binary PGM (P5), 8- or 16-bit. Reading keeps raw intensities as doubles.
Image read_pgm(const std::string& path);
// The grid is rescaled linearly onto [0, maxval]; lossy by construction.
void write_pgm(const std::string& path, const Grid2D& grid, int maxval = 65535);

void write_csv_matrix(const std::string& path, const std::vector<double>& values,
                      std::size_t rows, std::size_t cols);
std::vector<std::vector<double>> read_csv_matrix(const std::string& path);

void write_grid_csv(const std::string& path, const Grid2D& grid);
Grid2D read_grid_csv(const std::string& path);

// Decomposition directory layout: d_<dir>_<level>.csv per subband plus
// approx_<j0>.csv.
void write_decomposition_dir(const std::string& dir, const Decomposition2D& decomp);

// Spectrum CSV: a "# direction=<d> dimension=<m> bias=<mode>" comment, a
// header row, then level,count,mu,y rows.
void write_spectrum_csv(const std::string& path, const WaveletSpectrum& spectrum);
WaveletSpectrum read_spectrum_csv(const std::string& path);

// records.csv columns: subject_id,status,patch,hd,hh,hv (header required).
std::vector<SampleRecord> read_records_csv(const std::string& path);
void write_records_csv(const std::string& path, const std::vector<SampleRecord>& records);

// Plain key=value config; '#' starts a comment.
std::map<std::string, std::string> read_config_kv(const std::string& path);

// Patch layout file: a "side=<n>" line followed by one "row,col" offset per
// line. Comments and blanks allowed.
PatchLayout read_patch_layout(const std::string& path);

}  // namespace wavescale
