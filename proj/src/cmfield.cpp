#include "cmball/cmfield.hpp"

#include <cmath>
#include <sstream>

#include "cmball/errors.hpp"

namespace cmball {

namespace {

bool is_squarefree(long n) {
  if (n < 1) return false;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

QuadParams merge(const QuadParams& p, const QuadParams& q) {
  if (p.D == 0) return q;
  if (q.D == 0 || p == q) return p;
  throw MathError("arithmetic between elements of different quadratic fields");
}

std::shared_ptr<const FieldContext> merge(const std::shared_ptr<const FieldContext>& p,
                                          const std::shared_ptr<const FieldContext>& q) {
  if (!p) return q;
  if (!q || p == q) return p;
  if (p->quad == q->quad && p->alpha == q->alpha) return p;
  throw MathError("arithmetic between elements of different CM fields");
}

// p + q*sqrt(r) representation of a + b*omega.
struct Surd {
  Rational p;
  Rational q;
  long r;
};

Surd to_surd(const KElement& x, bool first) {
  const auto& qp = x.params();
  Surd s;
  if (qp.omega_trace == 1) {
    s.p = x.a() + x.b() / 2;
    s.q = x.b() / 2;
    s.r = qp.D;
  } else {
    s.p = x.a();
    s.q = x.b();
    s.r = qp.D / 4;
  }
  if (!first) s.q = -s.q;
  return s;
}

}  // namespace

bool is_fundamental_discriminant(long D) {
  if (D <= 1) return false;
  long root = static_cast<long>(std::llround(std::sqrt(static_cast<double>(D))));
  if (root * root == D) return false;
  if (D % 4 == 1) return is_squarefree(D);
  if (D % 4 == 0) {
    long m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && is_squarefree(m);
  }
  return false;
}

QuadParams make_quad_params(long D) {
  if (!is_fundamental_discriminant(D)) {
    throw MathError("D = " + std::to_string(D) + " is not a positive fundamental discriminant");
  }
  if (D % 4 == 1) return QuadParams{D, 1, (D - 1) / 4};
  return QuadParams{D, 0, D / 4};
}

// ---------------------------------------------------------------- KElement

KElement::KElement(Rational a, Rational b, QuadParams q)
    : a_(std::move(a)), b_(std::move(b)), q_(q) {
  a_.canonicalize();
  b_.canonicalize();
  if (q_.D == 0 && sgn(b_) != 0) {
    throw MathError("irrational K element without a field");
  }
}

bool KElement::is_integral() const {
  return a_.get_den() == 1 && b_.get_den() == 1;
}

KElement KElement::galois() const {
  // omega -> omega_trace - omega
  return KElement(a_ + b_ * q_.omega_trace, -b_, q_);
}

Rational KElement::norm() const { return (*this * galois()).a(); }

Rational KElement::trace() const { return 2 * a_ + b_ * q_.omega_trace; }

KElement KElement::inverse() const {
  if (is_zero()) throw MathError("division by zero in K");
  Rational n = norm();
  KElement g = galois();
  return KElement(g.a() / n, g.b() / n, q_);
}

int KElement::sign(bool first) const {
  if (sgn(b_) == 0) return sgn(a_);
  Surd s = to_surd(*this, first);
  int sp = sgn(s.p);
  int sq = sgn(s.q);
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // Opposite signs: compare p^2 with q^2 r; equality is impossible for r non-square.
  Rational lhs = s.p * s.p;
  Rational rhs = s.q * s.q * s.r;
  return cmp(lhs, rhs) > 0 ? sp : sq;
}

double KElement::embed(bool first) const {
  if (sgn(b_) == 0) return a_.get_d();
  Surd s = to_surd(*this, first);
  return s.p.get_d() + s.q.get_d() * std::sqrt(static_cast<double>(s.r));
}

KElement operator+(const KElement& x, const KElement& y) {
  return KElement(x.a_ + y.a_, x.b_ + y.b_, merge(x.q_, y.q_));
}

KElement operator-(const KElement& x, const KElement& y) {
  return KElement(x.a_ - y.a_, x.b_ - y.b_, merge(x.q_, y.q_));
}

KElement operator*(const KElement& x, const KElement& y) {
  QuadParams q = merge(x.q_, y.q_);
  Rational bb = x.b_ * y.b_;
  return KElement(x.a_ * y.a_ + bb * q.omega_sq_const,
                  x.a_ * y.b_ + x.b_ * y.a_ + bb * q.omega_trace, q);
}

KElement operator/(const KElement& x, const KElement& y) { return x * y.inverse(); }

std::string KElement::to_string() const {
  std::ostringstream os;
  os << a_.get_str();
  if (sgn(b_) != 0) os << (sgn(b_) > 0 ? " + " : " - ") << Rational(abs(b_)).get_str() << "*w";
  return os.str();
}

// ----------------------------------------------------------------- CMField

CMField::CMField(long D, const Rational& alpha_a, const Rational& alpha_b) {
  auto ctx = std::make_shared<FieldContext>();
  ctx->quad = make_quad_params(D);
  ctx->alpha = KElement(alpha_a, alpha_b, ctx->quad);
  if (ctx->alpha.sign(true) >= 0 || ctx->alpha.sign(false) >= 0) {
    throw MathError("alpha = " + ctx->alpha.to_string() + " is not totally negative");
  }
  if (!ctx->alpha.is_integral()) {
    throw MathError("alpha must lie in O_K for the order O_K[sqrt(alpha)]");
  }
  double s1 = std::sqrt(-ctx->alpha.embed(true));
  double s2 = std::sqrt(-ctx->alpha.embed(false));
  ctx->rho_embeddings = {Complex(0, s1), Complex(0, -s1), Complex(0, s2), Complex(0, -s2)};
  Rational n = ctx->alpha.norm() * 16;
  ctx->rel_disc_norm = abs(n.get_num());
  ctx_ = std::move(ctx);
}

KElement CMField::k(const Rational& a, const Rational& b) const { return KElement(a, b, quad()); }

FieldElement CMField::element(const Rational& xa, const Rational& xb, const Rational& ya,
                              const Rational& yb) const {
  return FieldElement(k(xa, xb), k(ya, yb), ctx_);
}

FieldElement CMField::from_k(const KElement& x) const {
  return FieldElement(KElement(x.a(), x.b(), quad()), k(0), ctx_);
}

FieldElement CMField::zero() const { return element(0); }
FieldElement CMField::one() const { return element(1); }
FieldElement CMField::rho() const { return element(0, 0, 1, 0); }
FieldElement CMField::omega() const { return element(0, 1); }

FieldElement CMField::sqrt_D() const {
  // D = 1 mod 4: sqrt D = 2 omega - 1; D = 0 mod 4: sqrt D = 2 omega.
  return quad().omega_trace == 1 ? element(-1, 2) : element(0, 2);
}

bool CMField::same_as(const CMField& other) const {
  return ctx_ == other.ctx_ || (quad() == other.quad() && alpha() == other.alpha());
}

// ------------------------------------------------------------ FieldElement

FieldElement::FieldElement(KElement x, KElement y, std::shared_ptr<const FieldContext> ctx)
    : x_(std::move(x)), y_(std::move(y)), ctx_(std::move(ctx)) {
  if (!ctx_ && !y_.is_zero()) throw MathError("element with sqrt(alpha) part needs a field");
}

FieldElement FieldElement::integer(long n) {
  return FieldElement(KElement::rational(Rational(n)), KElement(), nullptr);
}

FieldElement FieldElement::cm_conjugate() const { return FieldElement(x_, -y_, ctx_); }

KElement FieldElement::abs2() const {
  if (y_.is_zero()) return x_ * x_;
  return x_ * x_ - ctx_->alpha * y_ * y_;
}

Rational FieldElement::trace_to_Q() const { return 2 * x_.trace(); }

Complex FieldElement::embed(Embedding e) const {
  bool first = is_first_pair(e);
  double xs = x_.embed(first);
  if (y_.is_zero()) return Complex(xs, 0.0);
  double ys = y_.embed(first);
  return Complex(xs, 0.0) + ys * ctx_->rho_embeddings[static_cast<int>(e) - 1];
}

std::array<Rational, 4> FieldElement::coordinates() const {
  return {x_.a(), x_.b(), y_.a(), y_.b()};
}

FieldElement operator+(const FieldElement& p, const FieldElement& q) {
  return FieldElement(p.x_ + q.x_, p.y_ + q.y_, merge(p.ctx_, q.ctx_));
}

FieldElement operator-(const FieldElement& p, const FieldElement& q) {
  return FieldElement(p.x_ - q.x_, p.y_ - q.y_, merge(p.ctx_, q.ctx_));
}

FieldElement operator*(const FieldElement& p, const FieldElement& q) {
  auto ctx = merge(p.ctx_, q.ctx_);
  KElement x = p.x_ * q.x_;
  if (!p.y_.is_zero() && !q.y_.is_zero()) x = x + ctx->alpha * p.y_ * q.y_;
  KElement y = p.x_ * q.y_ + p.y_ * q.x_;
  return FieldElement(std::move(x), std::move(y), ctx);
}

FieldElement operator/(const FieldElement& p, const FieldElement& q) {
  if (q.is_zero()) throw MathError("division by zero in F");
  KElement inv = q.abs2().inverse();
  FieldElement num = p * q.cm_conjugate();
  return FieldElement(num.x_ * inv, num.y_ * inv, num.ctx_);
}

std::string FieldElement::to_string() const {
  if (y_.is_zero()) return x_.to_string();
  return "(" + x_.to_string() + ") + (" + y_.to_string() + ")*r";
}

FieldElement pow(const FieldElement& a, int n) {
  if (n < 0) return pow(FieldElement::integer(1) / a, -n);
  FieldElement result = FieldElement::integer(1);
  FieldElement base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

// ------------------------------------------------------- bounded search

SmallIntegerReport check_no_small_nonreal_integers(const CMField& F, double bound,
                                                   long height_cap) {
  SmallIntegerReport report;
  report.bound = bound;
  report.height_cap = height_cap;
  const double w1 = F.omega().embed(Embedding::Sigma1).real();
  const double w2 = F.omega().embed(Embedding::Sigma2).real();
  const double a1 = -F.alpha().embed(true);
  const double a2 = -F.alpha().embed(false);
  const double limit = bound * bound * (1.0 + 1e-12);

  for (long xa = -height_cap; xa <= height_cap; ++xa)
    for (long xb = -height_cap; xb <= height_cap; ++xb)
      for (long ya = -height_cap; ya <= height_cap; ++ya)
        for (long yb = -height_cap; yb <= height_cap; ++yb) {
          if (ya == 0 && yb == 0) continue;
          ++report.examined;
          // |sigma(x + y rho)|^2 = sigma(x)^2 + sigma(y)^2 * |sigma(alpha)|
          double x1 = xa + xb * w1, y1 = ya + yb * w1;
          double x2 = xa + xb * w2, y2 = ya + yb * w2;
          if (x1 * x1 + y1 * y1 * a1 > limit) continue;
          if (x2 * x2 + y2 * y2 * a2 > limit) continue;
          report.found = true;
          if (report.witnesses.size() < 8) report.witnesses.push_back(F.element(xa, xb, ya, yb));
        }
  std::ostringstream os;
  if (report.found) {
    os << "found non-real order element(s) with modulus <= " << bound << " in all embeddings";
  } else {
    os << "none found up to cap " << height_cap << " (bounded search, not a proof)";
  }
  report.note = os.str();
  return report;
}

}  // namespace cmball
