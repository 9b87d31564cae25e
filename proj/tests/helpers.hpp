#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "idlp/domain_pair.hpp"
#include "idlp/model.hpp"
#include "idlp/triplet_store.hpp"
#include "oracles.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("idlp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Every ordered pair of distinct entities under each predicate.
inline idlp::Graph complete_graph(std::size_t entities, std::size_t predicates) {
  std::ostringstream text;
  for (std::size_t r = 0; r < predicates; ++r) {
    for (std::size_t h = 0; h < entities; ++h) {
      for (std::size_t t = 0; t < entities; ++t) {
        if (h != t) text << "n" << h << "\tp" << r << "\tn" << t << "\n";
      }
    }
  }
  std::istringstream in(text.str());
  return idlp::parse_triplets(in);
}

// Pair with n1 + n2 entities, `common` of them tied, `predicates` relations
// and no facts.
inline idlp::DomainPair empty_pair(std::size_t n1, std::size_t n2, std::size_t common, std::size_t predicates) {
  idlp::DomainPair p;
  for (std::size_t i = 0; i < n1; ++i) p.entities1.add("a" + std::to_string(i));
  for (std::size_t j = 0; j < n2; ++j) p.entities2.add(j < common ? "a" + std::to_string(j) : "b" + std::to_string(j));
  for (std::size_t c = 0; c < common; ++c) {
    p.common.push_back({static_cast<idlp::EntityId>(c), static_cast<idlp::EntityId>(c)});
  }
  for (std::size_t k = 0; k < predicates; ++k) p.predicates.add("r" + std::to_string(k));
  return p;
}

inline oracle::Vec row_of(const idlp::RowMatrix& m, Eigen::Index i) {
  oracle::Vec v(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) v[static_cast<std::size_t>(j)] = m(i, j);
  return v;
}

inline oracle::Mat to_mat(const idlp::RowMatrix& m) {
  oracle::Mat out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(row_of(m, i));
  return out;
}

inline idlp::RowMatrix random_rows(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  idlp::RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  }
  return m;
}

}  // namespace testing
