#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graylap/types.hpp"

namespace graylap {

enum class EncodingKind { binary, brgc, sequency, h2gc };

std::string_view to_string(EncodingKind k);
EncodingKind parse_encoding_kind(std::string_view s);

// Value assigned to prohibited codes when re-encoding a position vector.
enum class DontCareFill { zero, nearest_valid };

std::string_view to_string(DontCareFill f);
DontCareFill parse_dont_care_fill(std::string_view s);

int hamming(Code a, Code b);
Code bit_reverse(Code c, int width);

// n ^ (n >> 1); throws when n >= 2^width.
Code brgc_encode(std::uint64_t n, int width);
Code brgc_encode(std::uint64_t n);
std::uint64_t brgc_decode(Code code);

// Reflect-and-prefix construction, kept as an oracle for the closed form.
std::vector<Code> brgc_recursive(int width);

class EncodingTable {
 public:
  static EncodingTable binary(int width);
  static EncodingTable brgc(int width);
  static EncodingTable sequency(int width);
  // Maximal snake/coil for small widths, bundled table above the search limit.
  static EncodingTable h2gc(int width);
  // Validates distinctness and the Gray/H2GC distance rules for the kind.
  static EncodingTable from_path(EncodingKind kind, int width,
                                 std::vector<Code> path);

  EncodingKind kind() const { return kind_; }
  int width() const { return width_; }
  std::size_t positions() const { return path_.size(); }
  std::size_t code_space() const { return std::size_t{1} << width_; }
  Code code(std::size_t position) const { return path_.at(position); }
  std::span<const Code> codes() const { return path_; }
  std::optional<std::size_t> position_of(Code c) const;
  const std::vector<Code>& prohibited() const { return prohibited_; }
  // First and last codes one bit apart.
  bool closed() const { return closed_; }
  bool is_bijection() const { return prohibited_.empty(); }

 private:
  EncodingTable(EncodingKind kind, int width, std::vector<Code> path);

  EncodingKind kind_;
  int width_;
  std::vector<Code> path_;
  std::vector<Code> prohibited_;
  std::vector<std::int64_t> inverse_;
  bool closed_ = false;
};

EncodingTable sequency_table(int width);
EncodingTable h2gc_table(int width);
EncodingTable make_table(EncodingKind kind, int width);

// --- H2GC search and table files

struct CoilSearchOptions {
  bool require_closed = true;
  // Stop at the first path at least this long (0 searches for the maximum).
  std::size_t target_length = 0;
  // Abort after this many DFS nodes (0 = unlimited).
  std::uint64_t node_budget = 0;
};

struct CoilSearchResult {
  std::vector<Code> path;
  bool closed = false;
  bool exhaustive = false;  // search space fully explored
  std::uint64_t nodes = 0;
};

CoilSearchResult search_coil(int width, const CoilSearchOptions& opts = {});

// Widths whose table comes from the DFS rather than a bundled file.
inline constexpr int kH2gcSearchLimit = 6;
inline constexpr int kH2gcMaxWidth = 7;

// One binary code per line, prohibited codes after "#prohibited".
std::string serialize_h2gc(const EncodingTable& t);
EncodingTable parse_h2gc(std::string_view text);
std::filesystem::path bundled_h2gc_dir();
std::optional<EncodingTable> load_bundled_h2gc(int width);

// --- re-encoding

// v holds one value per position; the result is indexed by code. Tables with
// prohibited codes need an explicit fill policy.
std::vector<double> reencode_vector(std::span<const double> v,
                                    const EncodingTable& to,
                                    std::optional<DontCareFill> fill = {});

// out[G(k), G(m)] = M[k, m]; prohibited rows and columns stay zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
reencode_matrix(const Eigen::MatrixBase<Derived>& m, const EncodingTable& g) {
  const auto n = static_cast<Eigen::Index>(g.positions());
  if (m.rows() != n || m.cols() != n)
    throw ContractError("reencode_matrix: matrix is not positions x positions");
  const auto dim = static_cast<Eigen::Index>(g.code_space());
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                    Eigen::Dynamic>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      out(g.code(k), g.code(j)) = m(k, j);
  return out;
}

// Inverse of reencode_matrix: out[k, m] = M[G(k), G(m)].
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
decode_matrix(const Eigen::MatrixBase<Derived>& m, const EncodingTable& g) {
  const auto dim = static_cast<Eigen::Index>(g.code_space());
  if (m.rows() != dim || m.cols() != dim)
    throw ContractError("decode_matrix: matrix is not 2^A x 2^A");
  const auto n = static_cast<Eigen::Index>(g.positions());
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n,
                                                                             n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      out(k, j) = m(g.code(k), g.code(j));
  return out;
}

}  // namespace graylap
