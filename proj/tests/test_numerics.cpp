#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "tanglekit/hermitian_eigen.hpp"
#include "tanglekit/parallel.hpp"
#include "tanglekit/state_io.hpp"
#include "tanglekit/symmetric.hpp"

using namespace tanglekit;

namespace {

oracle::Mat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  oracle::Mat a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = oracle::C(g(rng), g(rng));
  return (a + a.adjoint()) / 2;
}

}  // namespace

TEST_CASE("property: Jacobi eigensolver agrees with a reference solver") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 16;
    const auto a = random_hermitian(d, rng);
    const auto e = hermitian_eigen(a);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> ref(a, Eigen::EigenvaluesOnly);
    for (int k = 0; k < d; ++k) CHECK(std::abs(e.values[k] - ref.eigenvalues()[d - 1 - k]) < 1e-12);
    CHECK((e.vectors.adjoint() * e.vectors - oracle::Mat::Identity(d, d)).norm() < 1e-12);
    CHECK((a * e.vectors - e.vectors * e.values.cast<Complex>().asDiagonal()).norm() < 1e-11);
    for (int k = 1; k < d; ++k) CHECK(e.values[k - 1] >= e.values[k]);
  }
}

TEST_CASE("Jacobi eigensolver handles degenerate and diagonal input") {
  const auto id = hermitian_eigen(MatrixXc::Identity(4, 4));
  for (int k = 0; k < 4; ++k) CHECK(id.values[k] == doctest::Approx(1.0));
  MatrixXc z = MatrixXc::Zero(3, 3);
  const auto ez = hermitian_eigen(z);
  CHECK(ez.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Jacobi eigensolver is generic over the scalar") {
  Eigen::Matrix2cf a;
  a << 2.0f, std::complex<float>(0, 1), std::complex<float>(0, -1), 2.0f;
  const auto e = hermitian_eigen(a);
  CHECK(e.values[0] == doctest::Approx(3.0f).epsilon(1e-5));
  CHECK(e.values[1] == doctest::Approx(1.0f).epsilon(1e-5));
}

TEST_CASE("elementary symmetric polynomials and Newton's identities agree") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 4> x{u(rng), u(rng), u(rng), u(rng)};
    std::array<double, 4> p{};
    for (int k = 0; k < 4; ++k)
      for (double xi : x) p[k] += std::pow(xi, k + 1);
    const auto e = elementary_symmetric(x);
    const auto n = newton_elementary(p);
    CHECK(e[0] == doctest::Approx(x[0] + x[1] + x[2] + x[3]));
    CHECK(e[3] == doctest::Approx(x[0] * x[1] * x[2] * x[3]));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(e[k] - n[k]) < 1e-12);
  }
}

TEST_CASE("derive_seed is a pure function with distinct outputs") {
  static_assert(derive_seed(1, 2) == derive_seed(1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(s, i));
  CHECK(seen.size() == 4000);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_AS(parallel_for(100,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("TANGLEKIT_THREADS caps the worker count") {
  ::setenv("TANGLEKIT_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  ::setenv("TANGLEKIT_THREADS", "3", 1);
  CHECK(worker_count() <= 3);
  CHECK(worker_count() >= 1);
  ::unsetenv("TANGLEKIT_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("state files round trip bitwise") {
  const auto dir = std::filesystem::temp_directory_path() / "tanglekit_io_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(23);
  for (const auto& s : {ghz_state(3), w_state(4), testing::random_pure(5, rng), haar_random(6, 9)}) {
    const auto path = dir / "state.json";
    write_state_file(s, path, {{"family", "test"}});
    const auto back = read_state_file(path);
    REQUIRE(back.state.n_qubits() == s.n_qubits());
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
      CHECK(back.state[i].real() == s[i].real());
      CHECK(back.state[i].imag() == s[i].imag());
    }
    CHECK(back.meta.at("family") == "test");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("state files are validated") {
  const double h = 1 / std::sqrt(2.0);
  auto amps = [](int count, double value) {
    std::string s = "[";
    for (int i = 0; i < count; ++i) {
      if (i) s += ",";
      s += i == 0 ? "[" + std::to_string(value) + ",0]" : "[0,0]";
    }
    return s + "]";
  };
  CHECK_NOTHROW(parse_state_json(R"({"n_qubits":1,"amplitudes":[[)" + std::to_string(h) +
                                 "," + "0],[0," + std::to_string(h) + "]]}"));
  CHECK_THROWS_AS(parse_state_json(R"({"n_qubits":3,"amplitudes":)" + amps(7, 1) + "}"),
                  SchemaError);
  CHECK_THROWS_AS(parse_state_json(R"({"n_qubits":3,"amplitudes":)" + amps(8, std::sqrt(0.5)) + "}"),
                  SchemaError);
  CHECK_THROWS_AS(parse_state_json("{not json"), SchemaError);
  CHECK_THROWS_AS(parse_state_json(R"({"amplitudes":[[1,0]]})"), SchemaError);
  CHECK_THROWS_AS(parse_state_json(R"({"n_qubits":1,"amplitudes":[[1,0],[0]]})"), SchemaError);
  CHECK_THROWS_AS(parse_state_json(R"({"n_qubits":1,"amplitudes":[[1,0],["a",0]]})"), SchemaError);
  CHECK_THROWS_AS(read_state_file("/nonexistent/tanglekit.json"), std::exception);

  // small deviations are renormalized, not rejected
  const auto near = parse_state_json(R"({"n_qubits":1,"amplitudes":[[1.0000001,0],[0,0]]})");
  CHECK(std::abs(near.state.amplitudes().squaredNorm() - 1) < 1e-15);
}
