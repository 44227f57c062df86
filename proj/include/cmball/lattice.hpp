#pragma once

// The arithmetic lattice SU(J, O_F): membership, torsion eigenvalue triples,
// exact trace certificates for pairs of torsion elements and a bounded
// torsion search.

#include <optional>
#include <string>
#include <vector>

#include "cmball/isometry.hpp"

namespace cmball {

class ArithmeticLattice {
 public:
  /// Throws MathError unless the form is admissible over the given field.
  ArithmeticLattice(const CMField& F, const ExactForm& form);

  const CMField& field() const { return F_; }
  const ExactForm& form() const { return form_; }

 private:
  CMField F_;
  ExactForm form_;
};

/// diag(1, 1, -sqrt D) over F.
ExactForm diagonal_sqrtD_form(const CMField& F);

struct MembershipResult {
  bool member = false;
  std::string reason;  // empty when member
};

MembershipResult is_member(const ArithmeticLattice& L, const ExactMat& M);

struct EigenTriple {
  std::string name;
  int order;
  long trace;
};

struct AllowedTriples {
  bool exceptional = false;
  long exceptional_alpha0 = 0;     // the alpha0 with alpha/alpha0 a square in K
  int max_order = 6;
  std::vector<EigenTriple> triples;  // the four generic triples
  std::vector<int> extra_orders;     // orders only possible in the exceptional field
};

/// Throws MathError for D <= 21.
AllowedTriples allowed_triples(const CMField& F);

/// True when x is the square of an element of K.
bool is_square_in_K(const KElement& x);

/// Name of the eigenvalue triple for an elliptic element of the given exact trace.
std::string triple_name(const FieldElement& trace);

struct ReflectionResult {
  ExactMat matrix;
  FieldElement det;
  bool integral = false;
  bool unitary = false;
  bool member = false;
  int order = 0;  // multiplicative order of the matrix, 0 if above 18
  std::vector<std::string> rejections;
};

/// x -> x - (1 - lambda) <x, v>/<v, v> v, computed exactly.
ReflectionResult reflection_about_vector(const ArithmeticLattice& L, const ExactVec& v,
                                         const FieldElement& lambda);

struct TorsionDatum {
  ExactMat element;
  FieldElement trace;
  int order = 0;
  IsometryLabel label = IsometryLabel::Identity;
  FixedLocus locus;  // unit-norm representatives after sigma1
  std::string triple;
};

/// Exact order (up to 18) and classification. Throws MathError for
/// non-members or elements of infinite or excessive order.
TorsionDatum make_torsion_datum(const ArithmeticLattice& L, const ExactMat& M);

struct TorsionSearchResult {
  int height_cap = 0;
  std::vector<TorsionDatum> elements;  // deduplicated, deterministic order
  std::size_t columns_examined = 0;
  std::size_t column_candidates = 0;
  std::size_t members_found = 0;  // before deduplication
};

inline constexpr int kMaxSearchCap = 3;

/// Entries range over a + b*omega + (c + d*omega)*rho with |a|,|b|,|c|,|d| <= cap.
/// Parallel over the first column; throws MathError above the enumeration budget.
TorsionSearchResult torsion_search(const ArithmeticLattice& L, int height_cap);
/// Serial reference with identical output.
TorsionSearchResult torsion_search_serial(const ArithmeticLattice& L, int height_cap);

enum class PairVerdict { Coincide, IntersectAtIsolatedPoint, Ultraparallel, Separated, Trivial };

const char* to_string(PairVerdict v);

/// Consequence of the trace bound for elliptic pairs: |tr|^2 is a rational
/// integer in [0, 9], or lies in O_K minus Z with sigma2-image in [0, 9].
struct TraceTrichotomy {
  KElement abs2;
  KElement two_re;
  bool rational_case = false;
  bool irrational_case = false;
  bool holds = false;
  bool two_re_integral = false;
};

TraceTrichotomy trace_trichotomy(const FieldElement& tr);

struct RepulsionCertificate {
  PairVerdict verdict = PairVerdict::Trivial;
  FieldElement trace_product;      // tr(M1 M2)
  FieldElement trace_inv_product;  // tr(M1^-1 M2)
  TraceTrichotomy trichotomy;
  std::optional<KElement> exact_tance;  // ta(n1, n2) or ta(u3, v3), from the trace
  double distance = 0;                  // realized distance when separated
  std::optional<Vec3> common_point;
  std::optional<IsometryLabel> product_label;
  std::optional<KElement> witness;  // 8 ta = 2 tr + 2 for disjoint lines
  bool witness_nonrational = false;
  bool witness_gap_ok = false;  // sigma1 - sigma2 >= sqrt D
  std::string note;
};

RepulsionCertificate pair_certificate(const ArithmeticLattice& L, const TorsionDatum& a,
                                      const TorsionDatum& b);

struct LoxodromicFloor {
  double value = 0;
  bool in_range = false;
};

/// acosh((D^{1/4} - 1)/2), or 0 flagged out of range.
LoxodromicFloor loxodromic_floor(long D);

struct LoxodromicWitness {
  KElement abs2;
  double gap = 0;  // sigma1 - sigma2 of |t|^2
  bool holds = false;  // gap >= sqrt D, decided exactly
};

LoxodromicWitness loxodromic_witness(const FieldElement& trace);

/// Order cap for stabilizers of isolated elliptic points.
inline constexpr int stabilizer_order_cap() { return 48; }
/// Order cap for the fiber group over an elliptic line.
inline constexpr int tube_fiber_cap() { return 24; }

}  // namespace cmball
