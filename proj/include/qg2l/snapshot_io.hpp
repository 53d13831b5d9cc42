#pragma once

#include <string>

#include "qg2l/field.hpp"
#include "qg2l/lattice.hpp"

namespace qg2l {

// Raw little-endian doubles, (real, imag) pairs in row-major k-order
// (k1 outer from -K..K, k2 inner), plus a JSON sidecar describing the layout.
// write_snapshot emits <stem>.bin and <stem>.json; read_snapshot round-trips.

void write_snapshot(const std::string& stem, const SpectralField& u, const Lattice& lat, double t,
                    const std::string& field_name);

struct SnapshotMeta {
  double L = 0.0;
  int K = 0;
  int N = 0;
  double t = 0.0;
  std::string field_name;
};

SpectralField read_snapshot(const std::string& stem, SnapshotMeta* meta = nullptr);

}  // namespace qg2l
