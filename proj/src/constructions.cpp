#include "qprog/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "qprog/parallel.hpp"
#include "qprog/random.hpp"

namespace qprog {

ProgressionCheck is_progression_free(const Field& F, const ElementSet& A) {
  if (A.universe() != F.q()) throw PreconditionError("set universe does not match the field");
  const std::uint32_t q = F.q();
  std::vector<FieldElement> sq(q);
  for (std::uint32_t y = 0; y < q; ++y) sq[y] = F.square(FieldElement(y));
  ProgressionCheck out;
  for (std::uint32_t xc = 0; xc < q; ++xc) {
    const FieldElement x(xc);
    if (!A.contains(x)) continue;
    for (std::uint32_t yc = 1; yc < q; ++yc) {
      if (A.contains(F.add(x, FieldElement(yc))) && A.contains(F.add(x, sq[yc]))) {
        out.free = false;
        out.witness = {{x, FieldElement(yc)}};
        return out;
      }
    }
  }
  return out;
}

ElementSet greedy_construct(const Field& F, std::optional<std::uint64_t> shuffle_seed) {
  const std::uint32_t q = F.q();
  std::vector<std::uint32_t> order(q);
  std::iota(order.begin(), order.end(), 0u);
  if (shuffle_seed) {
    auto rng = trial_rng(*shuffle_seed, 4, 0);
    // Fisher-Yates on raw draws keeps the order independent of the library.
    for (std::uint32_t i = q; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  }
  std::vector<FieldElement> sq(q);
  for (std::uint32_t y = 0; y < q; ++y) sq[y] = F.square(FieldElement(y));

  ElementSet A(q);
  for (std::uint32_t code : order) {
    const FieldElement c(code);
    auto in = [&](FieldElement x) { return x == c || A.contains(x); };
    bool closes = false;
    for (std::uint32_t yc = 1; yc < q && !closes; ++yc) {
      const FieldElement y(yc);
      // c in the first, second, or third slot of (x, x+y, x+y^2).
      closes = (in(F.add(c, y)) && in(F.add(c, sq[yc]))) ||
               (in(F.sub(c, y)) && in(F.add(F.sub(c, y), sq[yc]))) ||
               (in(F.sub(c, sq[yc])) && in(F.add(F.sub(c, sq[yc]), y)));
    }
    if (!closes) A.insert(c);
  }
  if (!is_progression_free(F, A).free) throw ConsistencyError("greedy set failed certification");
  return A;
}

QuadraticLine quadratic_line(const SubfieldEmbedding& emb) {
  if (emb.degree != 2) throw PreconditionError("quadratic_line needs a quadratic extension");
  const Field& K = emb.big;
  std::optional<FieldElement> omega;
  for (std::uint32_t c = 1; c < K.q() && !omega; ++c) {
    const FieldElement w(c);
    if (!emb.contains(w) && emb.contains(K.square(w))) omega = w;
  }
  // Any square root of a nonsquare of F qualifies, so this cannot happen
  // for odd q.
  if (!omega) throw ConsistencyError("no omega with omega^2 in F and omega outside F");
  QuadraticLine out{*omega, ElementSet(K.q())};
  for (std::uint32_t a = 0; a < emb.small.q(); ++a) out.line.insert(K.mul(*omega, emb(FieldElement(a))));
  if (out.line.size() != emb.small.q()) throw ConsistencyError("line has the wrong size");
  if (!is_progression_free(K, out.line).free) throw ConsistencyError("quadratic line failed certification");
  return out;
}

CubicSpace::CubicSpace(SubfieldEmbedding emb) : emb_(std::move(emb)) {
  if (emb_.degree != 3) throw PreconditionError("CubicSpace needs a cubic extension");
  const Field& K = emb_.big;
  const Field& Fs = emb_.small;
  for (std::uint32_t c = 0; c < K.q(); ++c) {
    if (!emb_.contains(FieldElement(c))) {
      theta_ = FieldElement(c);
      break;
    }
  }
  coords_.assign(K.q(), Coords{});
  std::vector<std::uint8_t> seen(K.q(), 0);
  const std::uint32_t q = Fs.q();
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      for (std::uint32_t c = 0; c < q; ++c) {
        const Coords v{FieldElement(a), FieldElement(b), FieldElement(c)};
        const FieldElement x = combine(v);
        if (seen[x.code]) throw ConsistencyError("{1, theta, theta^2} is not a basis");
        seen[x.code] = 1;
        coords_[x.code] = v;
      }
}

FieldElement CubicSpace::combine(const Coords& c) const {
  const Field& K = emb_.big;
  const FieldElement t2 = K.square(theta_);
  return K.add(K.add(emb_(c[0]), K.mul(emb_(c[1]), theta_)), K.mul(emb_(c[2]), t2));
}

int CubicSpace::rank(const std::vector<FieldElement>& xs) const {
  const Field& F = emb_.small;
  std::vector<Coords> rows;
  for (FieldElement x : xs) rows.push_back(coords(x));
  int r = 0;
  for (int col = 0; col < 3 && r < static_cast<int>(rows.size()); ++col) {
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (!rows[i][col].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    const FieldElement inv = F.inv(rows[r][col]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      const FieldElement f = F.mul(rows[i][col], inv);
      for (int k = 0; k < 3; ++k) rows[i][k] = F.sub(rows[i][k], F.mul(f, rows[r][k]));
    }
    ++r;
  }
  return r;
}

namespace {

using Coords = CubicSpace::Coords;

Coords cross(const Field& F, const Coords& u, const Coords& v) {
  return {F.sub(F.mul(u[1], v[2]), F.mul(u[2], v[1])), F.sub(F.mul(u[2], v[0]), F.mul(u[0], v[2])),
          F.sub(F.mul(u[0], v[1]), F.mul(u[1], v[0]))};
}

// Scale so the first nonzero entry is 1; all-zero stays zero.
Coords normalize(const Field& F, Coords n) {
  for (int i = 0; i < 3; ++i) {
    if (!n[i].is_zero()) {
      const FieldElement inv = F.inv(n[i]);
      for (auto& c : n) c = F.mul(c, inv);
      break;
    }
  }
  return n;
}

bool is_zero(const Coords& n) { return n[0].is_zero() && n[1].is_zero() && n[2].is_zero(); }

Plane plane_from_normal(const CubicSpace& space, const Coords& n) {
  const Field& Fs = space.small();
  const Field& K = space.big();
  Plane V{FieldElement(0), FieldElement(0), ElementSet(K.q())};
  for (std::uint32_t c = 0; c < K.q(); ++c) {
    const Coords& x = space.coords(FieldElement(c));
    const FieldElement dot = Fs.add(Fs.add(Fs.mul(n[0], x[0]), Fs.mul(n[1], x[1])), Fs.mul(n[2], x[2]));
    if (dot.is_zero()) V.elements.insert(FieldElement(c));
  }
  const auto codes = V.elements.codes();
  V.b1 = FieldElement(codes.at(1));  // codes[0] is 0
  std::vector<std::uint8_t> line(K.q(), 0);
  for (std::uint32_t a = 0; a < Fs.q(); ++a) line[K.mul(space.embedding()(FieldElement(a)), V.b1).code] = 1;
  for (std::uint32_t c : codes) {
    if (!line[c]) {
      V.b2 = FieldElement(c);
      break;
    }
  }
  return V;
}

}  // namespace

std::vector<Plane> enumerate_planes(const CubicSpace& space) {
  const std::uint32_t q = space.small().q();
  std::vector<Plane> planes;
  planes.reserve(static_cast<std::size_t>(q) * q + q + 1);
  // Normalized functionals (first nonzero coordinate 1), one per plane.
  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t b = 0; b < q; ++b)
      for (std::uint32_t c = 0; c < q; ++c) {
        const Coords n{FieldElement(a), FieldElement(b), FieldElement(c)};
        if (is_zero(n)) continue;
        if (a == 0 && b > 1) continue;
        if (a == 0 && b == 0 && c != 1) continue;
        planes.push_back(plane_from_normal(space, n));
      }
  std::sort(planes.begin(), planes.end(),
            [](const Plane& x, const Plane& y) { return std::pair(x.b1, x.b2) < std::pair(y.b1, y.b2); });
  for (std::size_t i = 1; i < planes.size(); ++i)
    if (planes[i].b1 == planes[i - 1].b1 && planes[i].b2 == planes[i - 1].b2)
      throw ConsistencyError("two enumerated planes share a canonical basis");
  for (const Plane& V : planes)
    if (V.elements.size() != q * q) throw ConsistencyError("plane with the wrong number of elements");
  return planes;
}

Plane plane_from_span(const CubicSpace& space, FieldElement u, FieldElement v) {
  const Coords n = cross(space.small(), space.coords(u), space.coords(v));
  if (is_zero(n)) throw PreconditionError("plane_from_span needs independent elements");
  return plane_from_normal(space, normalize(space.small(), n));
}

BadPlaneCheck is_bad_plane(const CubicSpace& space, const Plane& V) {
  if (V.elements.contains(Field::one())) throw PreconditionError("bad-plane test needs 1 outside the plane");
  const Field& K = space.big();
  BadPlaneCheck out;
  for (std::uint32_t c : V.elements.codes()) {
    if (c == 0) continue;
    const FieldElement y(c);
    if (V.elements.contains(K.square(y))) {
      if (!out.witness) out.witness = y;
      ++out.witness_count;
    }
  }
  out.bad = out.witness_count > 0;
  return out;
}

PlaneCensus plane_census(const CubicSpace& space, int jobs) {
  const std::uint64_t q = space.small().q();
  const auto planes = enumerate_planes(space);

  PlaneCensus c;
  c.q = static_cast<std::uint32_t>(q);
  c.total_planes = planes.size();
  c.bad_bound = q * (q + 1) / 2;

  std::vector<BadPlaneCheck> checks(planes.size());
  std::vector<std::uint8_t> has_one(planes.size(), 0);
  parallel_for(planes.size(), jobs, [&](std::size_t i) {
    has_one[i] = planes[i].elements.contains(Field::one());
    if (!has_one[i]) checks[i] = is_bad_plane(space, planes[i]);
  });

  bool first_bad = true;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (has_one[i]) {
      ++c.planes_containing_one;
      continue;
    }
    ++c.planes_avoiding_one;
    if (checks[i].bad) {
      ++c.bad_count;
      c.min_bad_witnesses = first_bad ? checks[i].witness_count : std::min(c.min_bad_witnesses, checks[i].witness_count);
      first_bad = false;
    } else {
      ++c.good_count;
      if (!c.good_example) c.good_example = planes[i];  // planes are sorted by canonical basis
    }
  }

  // Bad planes are exactly the spans of {y, y^2} with y outside F.
  const Field& K = space.big();
  const Field& Fs = space.small();
  std::vector<std::uint8_t> seen(q * q * q, 0);
  for (std::uint32_t code = 0; code < K.q(); ++code) {
    const FieldElement y(code);
    if (space.embedding().contains(y)) continue;
    const Coords n = normalize(Fs, cross(Fs, space.coords(y), space.coords(K.square(y))));
    const std::uint64_t key = n[0].code + q * (n[1].code + q * n[2].code);
    if (!seen[key]) {
      seen[key] = 1;
      ++c.spans_of_y_and_y2;
    }
  }

  auto fail = [&](const std::string& what) {
    throw ConsistencyError("plane census for q = " + std::to_string(q) + ": " + what);
  };
  if (c.total_planes != q * q + q + 1) fail("total is not q^2 + q + 1");
  if (c.planes_containing_one != q + 1) fail("planes containing 1 is not q + 1");
  if (c.planes_avoiding_one != q * q) fail("planes avoiding 1 is not q^2");
  if (c.bad_count > c.bad_bound) fail("more than q(q+1)/2 bad planes");
  if (c.spans_of_y_and_y2 != c.bad_count) fail("bad planes differ from spans of {y, y^2}");
  if (c.bad_count > 0 && c.min_bad_witnesses < 2 * (q - 1)) fail("a bad plane has fewer than 2(q-1) witnesses");
  if (!c.good_example) fail("no good plane");

  c.good_example_certified = is_progression_free(K, c.good_example->elements).free;
  if (!c.good_example_certified) fail("good plane failed certification");
  return c;
}

}  // namespace qprog
