#include "fracns/field_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracns {

std::string fmt_num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::vector<Wavevector> lexicographic_modes(const Grid& grid) {
  std::vector<Wavevector> modes;
  modes.reserve(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) modes.push_back(grid.wavevector(idx));
  std::sort(modes.begin(), modes.end());
  return modes;
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const auto& f = snap.field;
  const auto& g = f.grid();
  os << "FRACNS d=" << g.dim() << " N=" << g.n() << " comps=" << f.comps() << " time=" << fmt_num(snap.time)
     << " alpha=" << fmt_num(snap.alpha) << '\n';
  const auto modes = lexicographic_modes(g);
  for (int c = 0; c < f.comps(); ++c) {
    for (const auto& k : modes) {
      const Complex v = f.at(c, k);
      os << c;
      for (int i = 0; i < g.dim(); ++i) os << ' ' << k[i];
      os << ' ' << fmt_num(v.real()) << ' ' << fmt_num(v.imag()) << '\n';
    }
  }
}

namespace {

std::string header_value(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw Error("snapshot header: expected key '" + key + "'");
  return token.substr(key.size() + 1);
}

}  // namespace

Snapshot read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("snapshot: empty input");
  std::istringstream hs(line);
  std::string magic, td, tn, tc, tt, ta;
  hs >> magic >> td >> tn >> tc >> tt >> ta;
  if (magic != "FRACNS") throw Error("snapshot: missing FRACNS header");
  const int d = std::stoi(header_value(td, "d"));
  const int n = std::stoi(header_value(tn, "N"));
  const int comps = std::stoi(header_value(tc, "comps"));
  Snapshot snap;
  snap.time = std::stod(header_value(tt, "time"));
  snap.alpha = std::stod(header_value(ta, "alpha"));
  snap.field = SpectralField(make_grid(d, n), comps);

  const std::size_t expected = static_cast<std::size_t>(comps) * snap.field.grid().size();
  std::size_t count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    int c = 0;
    Wavevector k{0, 0, 0};
    rs >> c;
    for (int i = 0; i < d; ++i) rs >> k[i];
    std::string re, im;
    rs >> re >> im;
    if (!rs) throw Error("snapshot: malformed record '" + line + "'");
    if (c < 0 || c >= comps) throw Error("snapshot: component out of range");
    snap.field.at(c, k) = Complex{std::stod(re), std::stod(im)};
    ++count;
  }
  if (count != expected) throw Error("snapshot: expected " + std::to_string(expected) + " records");
  return snap;
}

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_snapshot(os, snap);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  return read_snapshot(is);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), header_(std::move(header)) {
  std::ofstream os(path_);
  if (!os) throw Error("cannot open " + path_.string() + " for writing");
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw Error("csv row width does not match header of " + path_.string());
  std::ofstream os(path_, std::ios::app);
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

}  // namespace fracns
