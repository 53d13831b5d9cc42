#include "qg2l/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace qg2l {

namespace {

static_assert(sizeof(double) == 8, "snapshot format assumes 64-bit doubles");

std::uint64_t to_le_bits(double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    bits = r;
  }
  return bits;
}

double from_le_bits(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    bits = r;
  }
  double x;
  std::memcpy(&x, &bits, 8);
  return x;
}

}  // namespace

void write_snapshot(const std::string& stem, const SpectralField& u, const Lattice& lat, double t,
                    const std::string& field_name) {
  const std::size_t n = u.size();
  const cplx* c = u.data();
  std::vector<std::uint64_t> raw(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    raw[2 * i] = to_le_bits(c[i].real());
    raw[2 * i + 1] = to_le_bits(c[i].imag());
  }
  {
    std::ofstream out(stem + ".bin", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open " + stem + ".bin for writing");
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 8));
    if (!out) throw std::runtime_error("snapshot: write failed for " + stem + ".bin");
  }
  nlohmann::ordered_json side;
  side["L"] = lat.L;
  side["K"] = lat.K;
  side["N"] = lat.N;
  side["t"] = t;
  side["field_name"] = field_name;
  side["layout"] = "rowmajor-k";
  side["parseval_factor"] = lat.L * lat.L;
  std::ofstream js(stem + ".json", std::ios::trunc);
  if (!js) throw std::runtime_error("snapshot: cannot open " + stem + ".json for writing");
  js << side.dump(2) << "\n";
  if (!js) throw std::runtime_error("snapshot: write failed for " + stem + ".json");
}

SpectralField read_snapshot(const std::string& stem, SnapshotMeta* meta) {
  std::ifstream js(stem + ".json");
  if (!js) throw std::runtime_error("snapshot: cannot open " + stem + ".json");
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("snapshot: bad sidecar " + stem + ".json: " + e.what());
  }
  if (side.value("layout", "") != "rowmajor-k")
    throw std::runtime_error("snapshot: unsupported layout in " + stem + ".json");
  const int K = side.at("K").get<int>();
  const int N = side.at("N").get<int>();
  const double L = side.at("L").get<double>();
  if (K < 1) throw std::runtime_error("snapshot: bad K in " + stem + ".json");
  if (meta) {
    meta->L = L;
    meta->K = K;
    meta->N = N;
    meta->t = side.at("t").get<double>();
    meta->field_name = side.value("field_name", "");
  }

  SpectralField u(wavenumber_lattice(L, K, N));
  const std::size_t n = u.size();
  cplx* c = u.data();
  std::vector<std::uint64_t> raw(2 * n);
  std::ifstream in(stem + ".bin", std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + stem + ".bin");
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 8));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * 8))
    throw std::runtime_error("snapshot: truncated " + stem + ".bin");
  for (std::size_t i = 0; i < n; ++i)
    c[i] = {from_le_bits(raw[2 * i]), from_le_bits(raw[2 * i + 1])};
  return u;
}

}  // namespace qg2l
