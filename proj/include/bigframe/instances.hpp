#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bigframe/core.hpp"

namespace bigframe {

/// Recipe for a deterministic random system.
struct GeneratorSpec {
  enum class Kind { generic, diagonal, parseval, rank_deficient_k, tight };

  int ambient_dim = 4;
  int family_size = 4;
  Kind kind = Kind::generic;
  std::uint64_t seed = 0;

  void validate() const;
};

GeneratorSpec::Kind parse_kind(const std::string& name);
const char* kind_name(GeneratorSpec::Kind kind);

/// C^4 fixture with K = <.,e1> e2, rank-one operators with coefficients
/// (1, 1, 3, 4) against (1, 1, 1/3, 1/4) and subspace dims (1, 2, 3, 4).
/// A K-bi-g-frame with optimal bounds (1, 2).
BiGFrameSystem example_3_4();

/// C^4 fixture with K = I, coefficients (1, 2, 3, 4) against their
/// reciprocals, subspace dims (1, 1, 1, 1). A Parseval K-bi-g-frame.
BiGFrameSystem example_3_6();

/// Deterministic in the spec (seed included).
BiGFrameSystem random_system(const GeneratorSpec& spec);

enum class OperatorKind { positive, invertible, rank_r };

/// positive: Hermitian PSD (Gram construction); invertible: singular values
/// bounded below by 0.1; rank_r: exact numerical rank r.
Matrix random_operator(int dim, OperatorKind kind, std::uint64_t seed,
                       int rank = -1);

/// bigframe v1 text format: UTF-8, LF, '#' comment lines, entries printed
/// with 17 significant digits so the round trip is bit-exact.
std::string serialize(const BiGFrameSystem& sys);
BiGFrameSystem deserialize(const std::string& text);

std::string serialize_matrix(const Matrix& m);
Matrix deserialize_matrix(const std::string& text);

void save_system(const BiGFrameSystem& sys, const std::string& path);
BiGFrameSystem load_system(const std::string& path);
Matrix load_matrix(const std::string& path);

}  // namespace bigframe
