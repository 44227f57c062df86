#pragma once

// Exact arithmetic in K = Q(sqrt D) and in the CM extension F = K(sqrt alpha).
//
// K elements are stored as a + b*omega with omega = (1 + sqrt D)/2 when
// D = 1 mod 4 and omega = sqrt(D/4) when D = 0 mod 4, so O_K = Z + Z*omega.
// F elements are x + y*rho with rho = sqrt(alpha) and x, y in K. The order
// used for integrality is O_K + O_K*rho, which requires alpha in O_K.

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace cmball {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Embedding index in the order (sigma1, conj sigma1, sigma2, conj sigma2).
enum class Embedding { Sigma1 = 1, Sigma1Bar = 2, Sigma2 = 3, Sigma2Bar = 4 };

inline constexpr std::array<Embedding, 4> kAllEmbeddings = {
    Embedding::Sigma1, Embedding::Sigma1Bar, Embedding::Sigma2, Embedding::Sigma2Bar};

/// Which real embedding of K underlies a complex embedding of F.
inline bool is_first_pair(Embedding e) {
  return e == Embedding::Sigma1 || e == Embedding::Sigma1Bar;
}

/// Structure constants of O_K: omega^2 = omega_trace * omega + omega_sq_const.
struct QuadParams {
  long D = 0;  // 0 marks "no field attached yet" (pure rationals)
  long omega_trace = 0;
  long omega_sq_const = 0;

  bool operator==(const QuadParams&) const = default;
};

/// Validates that D is a positive fundamental discriminant and returns the
/// O_K structure constants. Throws MathError otherwise.
QuadParams make_quad_params(long D);

bool is_fundamental_discriminant(long D);

/// Element a + b*omega of K.
class KElement {
 public:
  KElement() = default;
  KElement(Rational a, Rational b, QuadParams q);
  static KElement rational(Rational a) { return KElement(std::move(a), 0, QuadParams{}); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const QuadParams& params() const { return q_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_integral() const;

  /// Galois conjugate sqrt D -> -sqrt D.
  KElement galois() const;
  Rational norm() const;
  Rational trace() const;
  KElement inverse() const;

  /// Exact sign of the real number obtained under the first (sigma1) or
  /// second (sigma2) real embedding.
  int sign(bool first) const;
  double embed(bool first) const;

  KElement operator-() const { return KElement(-a_, -b_, q_); }
  friend KElement operator+(const KElement& x, const KElement& y);
  friend KElement operator-(const KElement& x, const KElement& y);
  friend KElement operator*(const KElement& x, const KElement& y);
  friend KElement operator/(const KElement& x, const KElement& y);
  friend bool operator==(const KElement& x, const KElement& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

  std::string to_string() const;

 private:
  Rational a_{0};
  Rational b_{0};
  QuadParams q_{};
};

/// Shared immutable description of the CM field.
struct FieldContext {
  QuadParams quad;
  KElement alpha;
  std::array<Complex, 4> rho_embeddings;  // sigma(sqrt alpha) in embedding order
  mpz_class rel_disc_norm;                // norm of the relative discriminant of O_K[rho]
};

class FieldElement;

/// CM quartic field F = Q(sqrt D, sqrt alpha). Cheap to copy.
class CMField {
 public:
  /// alpha = a + b*omega must be totally negative and lie in O_K.
  CMField(long D, const Rational& alpha_a, const Rational& alpha_b);

  long D() const { return ctx_->quad.D; }
  const QuadParams& quad() const { return ctx_->quad; }
  const KElement& alpha() const { return ctx_->alpha; }
  const mpz_class& rel_disc_norm() const { return ctx_->rel_disc_norm; }
  const std::shared_ptr<const FieldContext>& context() const { return ctx_; }

  KElement k(const Rational& a, const Rational& b = 0) const;
  FieldElement element(const Rational& xa, const Rational& xb = 0, const Rational& ya = 0,
                       const Rational& yb = 0) const;
  FieldElement from_k(const KElement& x) const;
  FieldElement zero() const;
  FieldElement one() const;
  /// sqrt(alpha), the generator rho of the order.
  FieldElement rho() const;
  /// omega as an element of F.
  FieldElement omega() const;
  /// sqrt(D) as an element of F.
  FieldElement sqrt_D() const;

  bool same_as(const CMField& other) const;

 private:
  std::shared_ptr<const FieldContext> ctx_;
};

/// Element x + y*sqrt(alpha) of F.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(KElement x, KElement y, std::shared_ptr<const FieldContext> ctx);
  /// Integer constant with no field attached; adopts the field of the other
  /// operand in arithmetic.
  static FieldElement integer(long n);

  const KElement& x() const { return x_; }
  const KElement& y() const { return y_; }
  const std::shared_ptr<const FieldContext>& context() const { return ctx_; }

  bool is_zero() const { return x_.is_zero() && y_.is_zero(); }
  bool is_real() const { return y_.is_zero(); }
  bool is_integral() const { return x_.is_integral() && y_.is_integral(); }

  FieldElement cm_conjugate() const;
  /// a * cm_conjugate(a), an element of K.
  KElement abs2() const;
  /// Trace F/Q, computed symbolically.
  Rational trace_to_Q() const;
  Complex embed(Embedding e) const;
  Complex embed(int which) const { return embed(static_cast<Embedding>(which)); }

  /// Coordinates (xa, xb, ya, yb) in the Z-basis (1, omega, rho, omega*rho).
  std::array<Rational, 4> coordinates() const;

  FieldElement operator-() const { return FieldElement(-x_, -y_, ctx_); }
  friend FieldElement operator+(const FieldElement& p, const FieldElement& q);
  friend FieldElement operator-(const FieldElement& p, const FieldElement& q);
  friend FieldElement operator*(const FieldElement& p, const FieldElement& q);
  friend FieldElement operator/(const FieldElement& p, const FieldElement& q);
  friend bool operator==(const FieldElement& p, const FieldElement& q) {
    return p.x_ == q.x_ && p.y_ == q.y_;
  }
  FieldElement& operator+=(const FieldElement& q) { return *this = *this + q; }
  FieldElement& operator*=(const FieldElement& q) { return *this = *this * q; }

  std::string to_string() const;

 private:
  KElement x_;
  KElement y_;
  std::shared_ptr<const FieldContext> ctx_;
};

FieldElement pow(const FieldElement& a, int n);

struct SmallIntegerReport {
  bool found = false;
  std::vector<FieldElement> witnesses;  // at most a handful
  std::size_t examined = 0;
  double bound = 0;
  long height_cap = 0;
  /// Always describes a bounded search, never a proof.
  std::string note;
};

/// Searches order elements with coordinate heights <= height_cap for a
/// non-real element whose modulus is <= bound under every embedding.
SmallIntegerReport check_no_small_nonreal_integers(const CMField& F, double bound, long height_cap);

}  // namespace cmball
