#include <doctest.h>

#include <set>

#include "graylap/encodings.hpp"
#include "oracle.hpp"

using namespace graylap;

TEST_CASE("brgc closed form equals the reflect-and-prefix recursion") {
  for (int a = 1; a <= 12; ++a) {
    const auto rec = brgc_recursive(a);
    REQUIRE(rec.size() == (std::size_t{1} << a));
    for (std::uint64_t n = 0; n < rec.size(); ++n) {
      CHECK(brgc_encode(n, a) == rec[n]);
      CHECK(brgc_decode(rec[n]) == n);
    }
  }
  CHECK(brgc_recursive(2) == std::vector<Code>{0, 1, 3, 2});
  CHECK_THROWS_AS(brgc_encode(8, 3), ContractError);
}

TEST_CASE("brgc neighbours differ in one bit, cyclically") {
  for (int a = 1; a <= 10; ++a) {
    const auto t = EncodingTable::brgc(a);
    CHECK(t.is_bijection());
    CHECK(t.closed());
    for (std::size_t m = 0; m + 1 < t.positions(); ++m)
      CHECK(hamming(t.code(m), t.code(m + 1)) == 1);
    CHECK(hamming(t.code(0), t.code(t.positions() - 1)) == 1);
  }
}

TEST_CASE("sequency order is the bit reversal of brgc") {
  const auto s = sequency_table(3);
  for (std::size_t n = 0; n < 8; ++n) CHECK(s.code(n) == bit_reverse(brgc_encode(n), 3));
  CHECK(bit_reverse(0b110, 3) == 0b011);
  CHECK(s.is_bijection());
}

TEST_CASE("binary table is the identity") {
  const auto b = EncodingTable::binary(4);
  for (std::size_t n = 0; n < 16; ++n) {
    CHECK(b.code(n) == n);
    CHECK(b.position_of(n) == n);
  }
}

TEST_CASE("three-bit H2GC coil") {
  const auto t = h2gc_table(3);
  CHECK(std::vector<Code>(t.codes().begin(), t.codes().end()) ==
        std::vector<Code>{0b000, 0b001, 0b011, 0b111, 0b110, 0b100});
  CHECK(t.prohibited() == std::vector<Code>{0b010, 0b101});
  CHECK(t.closed());
  CHECK(!t.position_of(0b010));
}

TEST_CASE("H2GC tables obey the distance rules") {
  const std::size_t lengths[] = {0, 2, 4, 6, 8, 14, 26, 48};
  for (int a = 2; a <= kH2gcMaxWidth; ++a) {
    const auto t = h2gc_table(a);
    CHECK(t.positions() == lengths[a]);
    CHECK(t.closed());
    const auto n = t.positions();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent)
          CHECK(hamming(t.code(i), t.code(j)) == 1);
        else
          CHECK(hamming(t.code(i), t.code(j)) >= 2);
      }
    CHECK(t.prohibited().size() + n == t.code_space());
  }
  CHECK_THROWS_AS(h2gc_table(8), UnsupportedError);
}

TEST_CASE("bundled H2GC files equal the search output") {
  for (int a = 2; a <= kH2gcSearchLimit; ++a) {
    const auto search = search_coil(a);
    CHECK(search.exhaustive);
    const auto bundled = load_bundled_h2gc(a);
    REQUIRE(bundled.has_value());
    CHECK(std::vector<Code>(bundled->codes().begin(), bundled->codes().end()) == search.path);
  }
  const auto seven = load_bundled_h2gc(7);
  REQUIRE(seven.has_value());
  CHECK(seven->positions() == 48);
}

TEST_CASE("coil search honours a target length") {
  CoilSearchOptions o;
  o.target_length = 12;
  const auto r = search_coil(5, o);
  CHECK(r.path.size() >= 12);
  CHECK(!r.exhaustive);
  CHECK(r.closed);
}

TEST_CASE("H2GC serialization round trip") {
  const auto t = h2gc_table(5);
  const auto back = parse_h2gc(serialize_h2gc(t));
  CHECK(std::vector<Code>(back.codes().begin(), back.codes().end()) ==
        std::vector<Code>(t.codes().begin(), t.codes().end()));
  CHECK(back.prohibited() == t.prohibited());
  CHECK_THROWS(parse_h2gc("000\n011\n"));
}

TEST_CASE("from_path validates the rules of its kind") {
  CHECK_NOTHROW(EncodingTable::from_path(EncodingKind::h2gc, 3, {0, 1, 3, 7, 6, 4}));
  CHECK_THROWS_AS(EncodingTable::from_path(EncodingKind::h2gc, 3, {0, 1, 3, 7, 5}),
                  ContractError);
  CHECK_THROWS_AS(EncodingTable::from_path(EncodingKind::brgc, 2, {0, 1, 2, 3}),
                  ContractError);
  CHECK_THROWS_AS(EncodingTable::from_path(EncodingKind::brgc, 2, {0, 1, 1, 3}),
                  ContractError);
}

TEST_CASE("re-encoding vectors and matrices") {
  const auto g = EncodingTable::brgc(3);
  std::vector<double> v{0, 1, 2, 3, 4, 5, 6, 7};
  const auto e = reencode_vector(v, g);
  for (std::size_t n = 0; n < 8; ++n) CHECK(e[g.code(n)] == v[n]);

  const auto h = h2gc_table(3);
  std::vector<double> w{1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(reencode_vector(w, h), ContractError);
  const auto z = reencode_vector(w, h, DontCareFill::zero);
  CHECK(z[0b010] == 0.0);
  CHECK(z[0b111] == 4.0);
  const auto nv = reencode_vector(w, h, DontCareFill::nearest_valid);
  CHECK(nv[0b010] != 0.0);

  oracle::Rng rng(4);
  Eigen::MatrixXd m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m(i, j) = rng.uniform();
  const auto r = reencode_matrix(m, g);
  CHECK((decode_matrix(r, g) - m).norm() == 0.0);
  const Eigen::MatrixXd p = oracle::permutation(g);
  CHECK((r - p * m * p.transpose()).norm() == 0.0);
}

TEST_CASE("encoding names parse") {
  CHECK(parse_encoding_kind("brgc") == EncodingKind::brgc);
  CHECK(parse_encoding_kind("gray") == EncodingKind::brgc);
  CHECK(parse_encoding_kind("h2gc") == EncodingKind::h2gc);
  CHECK_THROWS(parse_encoding_kind("huffman"));
  CHECK(parse_dont_care_fill("nearest_valid") == DontCareFill::nearest_valid);
}
