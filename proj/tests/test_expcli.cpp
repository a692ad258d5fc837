#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bll/cache.hpp"
#include "bll/config.hpp"
#include "bll/experiments.hpp"
#include "bll/spectrum.hpp"

using namespace bll;
using namespace testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bll_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 || std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

}  // namespace

TEST_CASE("cache round trip") {
  const DiscreteOperator A = make_op(3, 8, PotentialDescriptor::sine_bump(5.0));
  for (bool traces : {false, true}) {
    SpectralData sd = compute_spectrum(A, 7);
    if (traces) sd = neumann_traces(std::move(sd), TraceMode::onesided2);
    sd = shift_to_positive(std::move(sd));
    const fs::path p = scratch("rt.blis");
    save_cache(p, sd);
    const SpectralData back = load_cache(p, A);
    CHECK(back.grid == sd.grid);
    CHECK(back.operator_id == sd.operator_id);
    CHECK(back.trace_mode == sd.trace_mode);
    CHECK(std::memcmp(&back.shift, &sd.shift, sizeof(double)) == 0);
    CHECK(same_bits(back.values, sd.values));
    CHECK(same_bits(back.residuals, sd.residuals));
    CHECK(same_bits(back.vectors, sd.vectors));
    CHECK(same_bits(back.traces, sd.traces));
    CHECK(same_bits(back.potential, sd.potential));
    fs::remove(p);
  }
}

TEST_CASE("cache rejects damaged or foreign files") {
  const DiscreteOperator A = make_op(2, 8, PotentialDescriptor::sine_bump(5.0));
  const DiscreteOperator Z = make_op(2, 8);
  const SpectralData sd = compute_spectrum(A, 5);
  const fs::path p = scratch("bad.blis");
  save_cache(p, sd);
  const std::string bytes = slurp(p);

  CHECK_CODE(load_cache(p, Z), ErrorCode::HashMismatch);
  CHECK_CODE(load_cache(p, make_op(2, 9)), ErrorCode::GridMismatch);

  auto write = [&](const std::string& b) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << b;
  };
  std::string bad = bytes;
  bad[0] = 'X';
  write(bad);
  CHECK_CODE(load_cache(p), ErrorCode::BadMagic);
  bad = bytes;
  bad[4] = 2;
  write(bad);
  CHECK_CODE(load_cache(p), ErrorCode::VersionMismatch);
  for (std::size_t cut : {std::size_t(2), std::size_t(20), bytes.size() / 2, bytes.size() - 1}) {
    write(bytes.substr(0, cut));
    bool threw = false;
    try {
      (void)load_cache(p);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::BadMagic || e.code() == ErrorCode::Truncated;
    }
    CHECK(threw);
  }
  // flipping a potential value breaks the stored hash
  bad = bytes;
  bad[bad.size() - 3] ^= 0x10;
  write(bad);
  CHECK_CODE(load_cache(p), ErrorCode::HashMismatch);
  fs::remove(p);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"({"experiment": "born", "grid": {"n": 3, "N": 12},
    "q1": {"kind": "gaussian", "amplitude": 2, "center": [0.3, 0.4, 0.5], "width": 0.2},
    "m_values": [8, 16], "trace_mode": "onesided2", "seed": 9})");
  CHECK(c.experiment == "born");
  CHECK(c.N == 12);
  CHECK(c.q1.kind == PotentialDescriptor::Kind::gaussian);
  CHECK(c.q1.center[1] == 0.4);
  CHECK(c.m_values == std::vector<int>{8, 16});
  CHECK(c.trace_mode == TraceMode::onesided2);
  CHECK(c.seed == 9u);
  CHECK(c.wants("anything"));

  try {
    (void)parse_config(R"({"experiment": "dn-decay", "lamda": [-100]})");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("lamda") != std::string::npos);
  }
  CHECK_CODE(parse_config(R"({"experiment": "born", "grid": {"n": 3, "M": 4}})"), ErrorCode::ConfigError);
  CHECK_CODE(parse_config(R"({"experiment": "born", "q1": {"kind": "bump"}})"), ErrorCode::ConfigError);
  CHECK_CODE(parse_config(R"({"experiment": "nonsense"})"), ErrorCode::ConfigError);
  CHECK_CODE(parse_config(R"({"grid": {"n": 3}})"), ErrorCode::ConfigError);
  CHECK_CODE(parse_config("{not json"), ErrorCode::ConfigError);
}

TEST_CASE("dn-decay with identical potentials") {
  ExperimentConfig c = parse_config(R"({"experiment": "dn-decay", "grid": {"n": 3, "N": 6},
    "q1": {"kind": "sine_bump", "amplitude": 5}, "q2": {"kind": "sine_bump", "amplitude": 5},
    "parts": ["decay"]})");
  const ReportBundle r = run_experiment(c);
  CHECK(r.all_pass());
  const Table& t = r.tables.front();
  for (const auto& row : t.rows) CHECK(row[1] == "0");
}

TEST_CASE("experiment outputs are deterministic") {
  const ExperimentConfig c = parse_config(R"({"experiment": "low-mode", "grid": {"n": 3, "N": 8},
    "q1": {"kind": "sine_bump", "amplitude": 5}, "k0": 3})");
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_experiment(c).write(a);
  run_experiment(c).write(b);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++files;
  }
  CHECK(files >= 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("cache directory precedence") {
  ExperimentConfig c;
  c.cache_dir = "from_config";
  ::unsetenv("BLL_CACHE_DIR");
  CHECK(resolve_cache_dir("", c) == fs::path("from_config"));
  ::setenv("BLL_CACHE_DIR", "from_env", 1);
  CHECK(resolve_cache_dir("", c) == fs::path("from_env"));
  CHECK(resolve_cache_dir("from_flag", c) == fs::path("from_flag"));
  ::unsetenv("BLL_CACHE_DIR");
}

TEST_CASE("spectra are cached between runs") {
  const fs::path dir = scratch("cache_dir");
  const ExperimentConfig c = parse_config(R"({"experiment": "spectrum", "grid": {"n": 2, "N": 8}, "K": 5,
    "parts": ["residuals"]})");
  const ReportBundle a = run_experiment(c, {dir});
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".blis";
  CHECK(files == 1);
  const ReportBundle b = run_experiment(c, {dir});
  CHECK(a.tables.front().to_csv() == b.tables.front().to_csv());
  fs::remove_all(dir);
}
