#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracns/spectral.hpp"

namespace fracns {

struct Snapshot {
  SpectralField field;
  double time = 0.0;
  double alpha = 0.0;
};

/// Plain-text snapshot:
///
///   FRACNS d=<d> N=<N> comps=<c> time=<t> alpha=<alpha>
///   c kx ky [kz] re im
///
/// one record per (component, wavevector), sorted by component and then
/// lexicographically by signed wavevector. Values use 17 significant digits,
/// so write/read round-trips bit-exactly.
void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Wavevectors of grid in the file-format order.
std::vector<Wavevector> lexicographic_modes(const Grid& grid);

/// Minimal CSV writer: header once, then rows; numbers at full precision.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::vector<std::string>& header() const { return header_; }

private:
  std::filesystem::path path_;
  std::vector<std::string> header_;
};

std::string fmt_num(double v);

}  // namespace fracns
