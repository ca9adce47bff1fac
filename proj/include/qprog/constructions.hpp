#ifndef QPROG_CONSTRUCTIONS_HPP
#define QPROG_CONSTRUCTIONS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qprog/element_set.hpp"
#include "qprog/field.hpp"

namespace qprog {

struct ProgressionCheck {
  bool free = true;
  // First (x, y), y != 0, in lexicographic code order with x, x+y, x+y^2 in A.
  std::optional<std::pair<FieldElement, FieldElement>> witness;
};

ProgressionCheck is_progression_free(const Field& F, const ElementSet& A);

/// Greedy progression-free set. Visits elements in ascending code order, or
/// in a seeded random order when `shuffle_seed` is given, and keeps each
/// element that closes no progression with the elements kept so far. The
/// result is re-certified before it is returned.
ElementSet greedy_construct(const Field& F, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

struct QuadraticLine {
  FieldElement omega;  // smallest code with omega^2 in F, omega not in F
  ElementSet line;     // omega * F inside the big field
};

/// The line omega F in a quadratic extension, certified progression-free.
QuadraticLine quadratic_line(const SubfieldEmbedding& emb);

/// F_{q^3} as a 3-dimensional F_q-space with basis {1, theta, theta^2},
/// theta the smallest code outside the subfield.
class CubicSpace {
 public:
  using Coords = std::array<FieldElement, 3>;  // small-field coordinates

  /// Throws PreconditionError unless emb is a cubic extension.
  explicit CubicSpace(SubfieldEmbedding emb);

  const SubfieldEmbedding& embedding() const { return emb_; }
  const Field& big() const { return emb_.big; }
  const Field& small() const { return emb_.small; }
  FieldElement theta() const { return theta_; }

  const Coords& coords(FieldElement x) const { return coords_[x.code]; }
  FieldElement combine(const Coords& c) const;
  /// Rank over F_q of the given elements of K.
  int rank(const std::vector<FieldElement>& xs) const;

 private:
  SubfieldEmbedding emb_;
  FieldElement theta_;
  std::vector<Coords> coords_;
};

/// A 2-dimensional F_q-subspace of F_{q^3}.
struct Plane {
  FieldElement b1, b2;  // canonical basis, see enumerate_planes
  ElementSet elements;
};

/// Every plane exactly once, ordered by canonical basis: b1 is the least
/// nonzero code in the plane and b2 the least code outside F_q b1.
std::vector<Plane> enumerate_planes(const CubicSpace& space);

/// Plane spanned by two independent elements, with its canonical basis.
Plane plane_from_span(const CubicSpace& space, FieldElement u, FieldElement v);

struct BadPlaneCheck {
  bool bad = false;
  std::optional<FieldElement> witness;  // least nonzero y in V with y^2 in V
  std::uint32_t witness_count = 0;
};

/// Throws PreconditionError if 1 is in the plane.
BadPlaneCheck is_bad_plane(const CubicSpace& space, const Plane& V);

struct PlaneCensus {
  std::uint32_t q = 0;
  std::uint64_t total_planes = 0;
  std::uint64_t planes_containing_one = 0;
  std::uint64_t planes_avoiding_one = 0;
  std::uint64_t bad_count = 0;
  std::uint64_t bad_bound = 0;           // q(q+1)/2
  std::uint64_t good_count = 0;          // observed, no bound claimed
  std::uint32_t min_bad_witnesses = 0;   // over bad planes; >= 2(q-1)
  std::uint64_t spans_of_y_and_y2 = 0;   // distinct planes span{y, y^2}, y outside F
  std::optional<Plane> good_example;     // least canonical basis among good planes
  bool good_example_certified = false;
};

/// Full census; every closed-form count mismatch raises ConsistencyError.
PlaneCensus plane_census(const CubicSpace& space, int jobs = 1);

}  // namespace qprog

#endif  // QPROG_CONSTRUCTIONS_HPP
