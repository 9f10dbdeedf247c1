#include "wavescale/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavescale/errors.hpp"

namespace wavescale {

std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& token, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError("cannot parse number '" + token + "' in " + context);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

int pgm_next_token(std::istream& in, std::string& token) {
  token.clear();
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token.empty() ? EOF : 0;
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string token;
  if (pgm_next_token(in, token) == EOF || token != "P5") {
    throw IoError("not a binary PGM (P5) file: " + path);
  }
  std::size_t dims[3];
  for (std::size_t& d : dims) {
    if (pgm_next_token(in, token) == EOF) throw IoError("truncated PGM header: " + path);
    try {
      d = static_cast<std::size_t>(std::stoull(token));
    } catch (const std::exception&) {
      throw IoError("bad PGM header token '" + token + "': " + path);
    }
  }
  const std::size_t width = dims[0], height = dims[1], maxval = dims[2];
  if (maxval == 0 || maxval > 65535) throw IoError("unsupported PGM maxval: " + path);
  const bool wide = maxval > 255;

  Image image(height, width);
  const std::size_t count = width * height;
  std::vector<unsigned char> raw(count * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw IoError("truncated PGM pixel data: " + path);
  }
  for (std::size_t i = 0; i < count; ++i) {
    image.pixels[i] = wide ? static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1])
                           : static_cast<double>(raw[i]);
  }
  return image;
}

void write_pgm(const std::string& path, const Grid2D& grid, int maxval) {
  if (maxval < 1 || maxval > 65535) {
    throw Error(Error::Kind::invalid_input, "PGM maxval must be in [1, 65535]");
  }
  double lo = grid.samples[0], hi = grid.samples[0];
  for (double v : grid.samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  std::ofstream out = open_out(path);
  out << "P5\n" << grid.side << " " << grid.side << "\n" << maxval << "\n";
  const bool wide = maxval > 255;
  for (double v : grid.samples) {
    const double scaled = (v - lo) / span * maxval;
    const unsigned value = static_cast<unsigned>(std::lround(scaled));
    if (wide) {
      out.put(static_cast<char>((value >> 8) & 0xFF));
      out.put(static_cast<char>(value & 0xFF));
    } else {
      out.put(static_cast<char>(value & 0xFF));
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_csv_matrix(const std::string& path, const std::vector<double>& values,
                      std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) {
    throw Error(Error::Kind::invalid_input, "matrix size mismatch");
  }
  std::ofstream out = open_out(path);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out << ',';
      out << format_double(values[r * cols + c]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    for (const auto& cell : split(t, ',')) row.push_back(parse_double(trim(cell), path));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged CSV matrix: " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV matrix: " + path);
  return rows;
}

void write_grid_csv(const std::string& path, const Grid2D& grid) {
  write_csv_matrix(path, grid.samples, grid.side, grid.side);
}

Grid2D read_grid_csv(const std::string& path) {
  const auto rows = read_csv_matrix(path);
  const std::size_t side = rows.size();
  if (rows.front().size() != side) throw InvalidShape("grid CSV is not square: " + path);
  Grid2D grid(side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) grid.at(r, c) = rows[r][c];
  }
  validate_grid(grid);
  return grid;
}

void write_decomposition_dir(const std::string& dir, const Decomposition2D& decomp) {
  for (int j = decomp.coarsest_level; j <= decomp.finest_level; ++j) {
    const Subband2D& sub = decomp.level(j);
    for (Direction d : {Direction::diagonal, Direction::horizontal, Direction::vertical}) {
      const std::string path =
          dir + "/d_" + direction_token(d) + "_" + std::to_string(j) + ".csv";
      write_csv_matrix(path, sub.band(d), sub.side, sub.side);
    }
  }
  write_csv_matrix(dir + "/approx_" + std::to_string(decomp.coarsest_level) + ".csv",
                   decomp.approx, decomp.approx_side, decomp.approx_side);
}

void write_spectrum_csv(const std::string& path, const WaveletSpectrum& spectrum) {
  std::ofstream out = open_out(path);
  out << "# direction=" << direction_token(spectrum.direction)
      << " dimension=" << spectrum.dimension
      << " bias=" << bias_mode_token(spectrum.bias_mode) << "\n";
  out << "level,count,mu,y\n";
  for (const auto& p : spectrum.points) {
    out << p.level << ',' << p.count << ',' << format_double(p.mean_energy) << ','
        << format_double(p.log_energy) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

WaveletSpectrum read_spectrum_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  WaveletSpectrum spectrum;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream meta(t.substr(1));
      std::string kv;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "direction") spectrum.direction = parse_direction(value);
        else if (key == "dimension") spectrum.dimension = static_cast<int>(parse_double(value, path));
        else if (key == "bias") spectrum.bias_mode = parse_bias_mode(value);
      }
      continue;
    }
    if (!saw_header && t.rfind("level,", 0) == 0) {
      saw_header = true;
      continue;
    }
    const auto cells = split(t, ',');
    if (cells.size() != 4) throw IoError("spectrum row needs 4 columns: " + path);
    SpectrumPoint p;
    p.level = static_cast<int>(parse_double(trim(cells[0]), path));
    p.count = static_cast<std::size_t>(parse_double(trim(cells[1]), path));
    p.mean_energy = parse_double(trim(cells[2]), path);
    p.log_energy = parse_double(trim(cells[3]), path);
    spectrum.points.push_back(p);
  }
  if (spectrum.points.empty()) throw IoError("no spectrum points in " + path);
  return spectrum;
}

std::vector<SampleRecord> read_records_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<SampleRecord> records;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!saw_header) {
      saw_header = true;
      if (t.rfind("subject_id,", 0) == 0) continue;  // header row
    }
    const auto cells = split(t, ',');
    if (cells.size() != 6) {
      throw IoError("records row needs subject_id,status,patch,hd,hh,hv: " + path);
    }
    SampleRecord r;
    r.subject_id = trim(cells[0]);
    r.status = parse_status(trim(cells[1]));
    r.patch_index = static_cast<int>(parse_double(trim(cells[2]), path));
    if (r.patch_index < 1 || r.patch_index > 5) {
      throw IoError("patch index must be 1..5: " + path);
    }
    r.h_d = parse_double(trim(cells[3]), path);
    r.h_h = parse_double(trim(cells[4]), path);
    r.h_v = parse_double(trim(cells[5]), path);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw IoError("no records in " + path);
  return records;
}

void write_records_csv(const std::string& path, const std::vector<SampleRecord>& records) {
  std::ofstream out = open_out(path);
  out << "subject_id,status,patch,hd,hh,hv\n";
  for (const auto& r : records) {
    out << r.subject_id << ',' << status_token(r.status) << ',' << r.patch_index << ','
        << format_double(r.h_d) << ',' << format_double(r.h_h) << ','
        << format_double(r.h_v) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

PatchLayout read_patch_layout(const std::string& path) {
  std::ifstream in = open_in(path);
  PatchLayout layout;
  layout.side = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    if (t.rfind("side=", 0) == 0) {
      layout.side = static_cast<std::size_t>(parse_double(trim(t.substr(5)), path));
      continue;
    }
    const auto cells = split(t, ',');
    if (cells.size() != 2) {
      throw IoError("patch layout line is not row,col: '" + t + "' in " + path);
    }
    layout.offsets.emplace_back(
        static_cast<std::size_t>(parse_double(trim(cells[0]), path)),
        static_cast<std::size_t>(parse_double(trim(cells[1]), path)));
  }
  if (layout.side == 0 || layout.offsets.empty()) {
    throw IoError("patch layout needs a side= line and at least one offset: " + path);
  }
  return layout;
}

std::map<std::string, std::string> read_config_kv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> config;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw IoError("config line is not key=value: '" + t + "' in " + path);
    }
    config[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return config;
}

}  // namespace wavescale
