#include "sdl/path_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "sdl/errors.hpp"

namespace sdl {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'D', 'L', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in, const char* field) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 8))
    throw FormatError(std::string("SDL1: truncated header field ") + field);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_sdl1(std::ostream& out, const PathBatch& batch) {
  batch.validate();
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, batch.n_paths);
  put_u64(out, batch.n_steps);
  put_f64(out, batch.T);
  put_u64(out, batch.seed);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(batch.values.data()),
              static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  } else {
    for (double v : batch.values) put_f64(out, v);
  }
  if (!out) throw Error("SDL1: write failed");
}

PathBatch read_sdl1(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw FormatError("SDL1: bad magic bytes (not a path batch file)");
  PathBatch batch;
  batch.n_paths = get_u64(in, "n_paths");
  batch.n_steps = get_u64(in, "n_steps");
  batch.T = std::bit_cast<double>(get_u64(in, "T"));
  batch.seed = get_u64(in, "seed");
  if (batch.n_paths == 0 || batch.n_steps == 0 || !(batch.T > 0.0))
    throw FormatError("SDL1: header describes an empty grid");
  const std::uint64_t count = batch.n_paths * (batch.n_steps + 1);
  if (count / batch.n_paths != batch.n_steps + 1) throw FormatError("SDL1: header size overflow");
  batch.values.resize(count);
  if constexpr (std::endian::native == std::endian::little) {
    if (!in.read(reinterpret_cast<char*>(batch.values.data()),
                 static_cast<std::streamsize>(count * sizeof(double))))
      throw FormatError("SDL1: truncated payload");
  } else {
    for (auto& v : batch.values) v = std::bit_cast<double>(get_u64(in, "payload"));
  }
  return batch;
}

void write_sdl1_file(const std::filesystem::path& path, const PathBatch& batch) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_sdl1(out, batch);
}

PathBatch read_sdl1_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot open " + path.string());
  return read_sdl1(in);
}

void write_csv(std::ostream& out, const PathBatch& batch) {
  batch.validate();
  out << "path,step,t,x\n";
  char buf[96];
  for (std::size_t p = 0; p < batch.n_paths; ++p) {
    const auto row = batch.path(p);
    for (std::size_t i = 0; i <= batch.n_steps; ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", p, i, batch.time(i), row[i]);
      out << buf;
    }
  }
}

std::vector<double> read_samples_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot open " + path.string());
  std::array<char, 64> head{};
  in.read(head.data(), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  const bool sdl1 = got >= 4 && std::equal(kMagic.begin(), kMagic.end(), head.begin());
  in.clear();
  in.seekg(0);
  if (sdl1) return read_sdl1(in).terminal_values();
  const auto head_end = head.begin() + static_cast<std::ptrdiff_t>(got);
  if (std::find(head.begin(), head_end, '\0') != head_end)
    throw FormatError(path.string() + ": bad magic bytes (binary file that is not an SDL1 path batch)");

  std::vector<double> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string field = line.substr(0, line.find(','));
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      if (line_no == 1) continue;  // header
      throw FormatError("sample list " + path.string() + ": cannot parse line " + std::to_string(line_no));
    }
    samples.push_back(v);
  }
  return samples;
}

}  // namespace sdl
