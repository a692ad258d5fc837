#include "bll/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "bll/error.hpp"
#include "bll/potential.hpp"

namespace bll {

namespace {

constexpr char kMagic[4] = {'B', 'L', 'I', 'S'};
constexpr std::uint8_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    v = to_little(v);
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
  void put_doubles(const double* d, Index count) {
    for (Index i = 0; i < count; ++i) put(d[i]);
  }
  std::vector<unsigned char> bytes;
};

class Reader {
 public:
  explicit Reader(std::vector<unsigned char> b) : bytes(std::move(b)) {}
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return to_little(v);
  }
  void get_doubles(double* d, Index count) {
    need(static_cast<std::size_t>(count) * sizeof(double));
    for (Index i = 0; i < count; ++i) d[i] = get<double>();
  }
  void need(std::size_t n) const {
    if (bytes.size() - pos < n) throw Error(ErrorCode::Truncated, "cache file ends early");
  }
  bool done() const { return pos == bytes.size(); }
  std::vector<unsigned char> bytes;
  std::size_t pos = 0;
};

}  // namespace

void save_cache(const std::filesystem::path& path, const SpectralData& sd) {
  Writer w;
  for (char c : kMagic) w.put(static_cast<std::uint8_t>(c));
  w.put(kVersion);
  std::uint8_t mode = 0;
  if (sd.trace_mode) mode = *sd.trace_mode == TraceMode::onesided2 ? 1 : 2;
  w.put(mode);
  const Index K = sd.count();
  const Index dim = sd.vectors.rows();
  const Index nB = mode ? sd.traces.rows() : 0;
  if (sd.vectors.cols() != K || sd.residuals.size() != K || sd.potential.size() != dim ||
      (mode && sd.traces.cols() != K))
    throw Error(ErrorCode::ShapeMismatch, "inconsistent spectral data");
  w.put(static_cast<std::uint32_t>(sd.grid.dims()));
  w.put(static_cast<std::uint32_t>(sd.grid.points_per_axis()));
  w.put(static_cast<std::uint64_t>(K));
  w.put(static_cast<std::uint64_t>(dim));
  w.put(static_cast<std::uint64_t>(nB));
  w.put(static_cast<std::uint64_t>(sd.operator_id));
  w.put(sd.shift);
  w.put_doubles(sd.values.data(), K);
  w.put_doubles(sd.residuals.data(), K);
  w.put_doubles(sd.vectors.data(), dim * K);
  if (mode) w.put_doubles(sd.traces.data(), nB * K);
  w.put_doubles(sd.potential.data(), dim);

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(w.bytes.data()), static_cast<std::streamsize>(w.bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SpectralData load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Reader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));
  if (r.bytes.size() < 6) throw Error(ErrorCode::BadMagic, "file too short for a cache header");
  for (char c : kMagic)
    if (r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) throw Error(ErrorCode::BadMagic, path.string());
  const auto version = r.get<std::uint8_t>();
  if (version != kVersion) throw Error(ErrorCode::VersionMismatch, "cache version " + std::to_string(version));
  const auto mode = r.get<std::uint8_t>();
  if (mode > 2) throw Error(ErrorCode::BadMagic, "unknown trace mode byte");
  const int n = static_cast<int>(r.get<std::uint32_t>());
  const int N = static_cast<int>(r.get<std::uint32_t>());
  const Grid grid = Grid::build(n, N);
  const auto K = static_cast<Index>(r.get<std::uint64_t>());
  const auto dim = static_cast<Index>(r.get<std::uint64_t>());
  const auto nB = static_cast<Index>(r.get<std::uint64_t>());
  if (dim != grid.interior_count() || (mode && nB != grid.boundary_count()) || (!mode && nB != 0) || K > dim)
    throw Error(ErrorCode::ShapeMismatch, "cache header inconsistent with its grid");
  SpectralData sd{grid};
  sd.operator_id = r.get<std::uint64_t>();
  sd.shift = r.get<double>();
  r.need(static_cast<std::size_t>(2 * K + dim * K + nB * K + dim) * sizeof(double));
  sd.values.resize(K);
  sd.residuals.resize(K);
  sd.vectors.resize(dim, K);
  r.get_doubles(sd.values.data(), K);
  r.get_doubles(sd.residuals.data(), K);
  r.get_doubles(sd.vectors.data(), dim * K);
  if (mode) {
    sd.traces.resize(nB, K);
    r.get_doubles(sd.traces.data(), nB * K);
    sd.trace_mode = mode == 1 ? TraceMode::onesided2 : TraceMode::variational;
  }
  sd.potential.resize(dim);
  r.get_doubles(sd.potential.data(), dim);
  if (!r.done()) throw Error(ErrorCode::Truncated, "trailing bytes after cache payload");
  if (potential_hash(grid, sd.potential) != sd.operator_id)
    throw Error(ErrorCode::HashMismatch, "stored potential does not match its hash");
  return sd;
}

SpectralData load_cache(const std::filesystem::path& path, const DiscreteOperator& expected) {
  SpectralData sd = load_cache(path);
  if (sd.grid != expected.grid()) throw Error(ErrorCode::GridMismatch, "cache grid differs from the run");
  if (sd.operator_id != expected.id()) throw Error(ErrorCode::HashMismatch, "cache was built for another potential");
  return sd;
}

}  // namespace bll
