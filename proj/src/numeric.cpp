#include "momentkit/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace momentkit {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InsufficientMoments: return "InsufficientMoments";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotAMomentSequence: return "NotAMomentSequence";
    case ErrorCode::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorCode::ConvergenceError: return "ConvergenceError";
    case ErrorCode::InfeasibleChoice: return "InfeasibleChoice";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroAtomError: return "ZeroAtomError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::PreconditionError: return "PreconditionError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Error";
}

Error::Error(ErrorCode c, const std::string& msg)
    : std::runtime_error(std::string(error_name(c)) + ": " + msg), code_(c) {}

Context::Context() : root_width(mpz_class(1), mpz_class("1000000000000")) {
  root_width.canonicalize();
  if (const char* env = std::getenv("MOMENTKIT_PRECISION")) {
    try {
      Scalar w = parse_scalar(env);
      if (w > 0) root_width = w;
    } catch (const Error&) {
    }
  }
}

const Context& default_context() {
  static const Context ctx;
  return ctx;
}

// ---- scalars ----

Scalar parse_scalar(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Scalar num = parse_scalar(text.substr(0, slash));
    Scalar den = parse_scalar(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + raw + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  std::string digits;
  long frac = 0;
  bool dot = false, any = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    char ch = text[i];
    if (ch == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
      any = true;
      if (dot) ++frac;
    } else {
      throw Error(ErrorCode::ParseError, "bad scalar '" + raw + "'");
    }
  }
  if (!any) throw Error(ErrorCode::ParseError, "bad scalar '" + raw + "'");
  long exp10 = 0;
  if (i < text.size()) {
    std::string e = text.substr(i + 1);
    char* end = nullptr;
    exp10 = std::strtol(e.c_str(), &end, 10);
    if (e.empty() || *end != '\0') throw Error(ErrorCode::ParseError, "bad exponent in '" + raw + "'");
  }
  mpz_class num(digits, 10);
  Scalar v(num);
  exp10 -= frac;
  v *= power(Scalar(10), exp10);
  if (neg) v = -v;
  v.canonicalize();
  return v;
}

std::string format_scalar(const Scalar& x) { return x.get_str(); }

std::string format_decimal(const Scalar& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x.get_d();
  return os.str();
}

double to_double(const Scalar& x) { return x.get_d(); }

Scalar from_double(double x) {
  Scalar v(x);
  v.canonicalize();
  return v;
}

Scalar power(const Scalar& x, long k) {
  if (k == 0) return Scalar(1);
  if (k < 0) {
    if (x == 0) throw Error(ErrorCode::DomainError, "zero to a negative power");
    return power(Scalar(1) / x, -k);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(k));
  Scalar r(n, d);
  r.canonicalize();
  return r;
}

int sign(const Scalar& x) { return sgn(x); }
Scalar abs(const Scalar& x) { return x < 0 ? Scalar(-x) : x; }
Scalar pow2(long q) { return power(Scalar(2), q); }

int sign_tol(const Scalar& x, const Scalar& scale, const Context& ctx) {
  if (ctx.exact()) return sgn(x);
  Scalar tol = from_double(ctx.eps) * abs(scale);
  if (abs(x) <= tol) return 0;
  return sgn(x);
}

bool equal_tol(const Scalar& x, const Scalar& y, const Context& ctx) {
  if (ctx.exact()) return x == y;
  Scalar scale = std::max(abs(x), abs(y));
  if (scale < 1) scale = 1;
  return sign_tol(x - y, scale, ctx) == 0;
}

const Scalar& MomentSequence::at(long k) const {
  if (!has(k))
    throw Error(ErrorCode::InsufficientMoments, "moment index " + std::to_string(k) + " outside window");
  return values[std::size_t(k - first_index)];
}

// ---- polynomials ----

Polynomial::Polynomial(std::vector<Scalar> coeffs) : c(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Scalar& v) { return Polynomial(std::vector<Scalar>{v}); }

Polynomial Polynomial::monomial(long k, const Scalar& v) {
  std::vector<Scalar> c(std::size_t(k) + 1);
  c[std::size_t(k)] = v;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::linear(const Scalar& c0, const Scalar& c1) {
  return Polynomial(std::vector<Scalar>{c0, c1});
}

void Polynomial::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Scalar Polynomial::coeff(int k) const {
  if (k < 0 || k >= int(c.size())) return Scalar(0);
  return c[std::size_t(k)];
}

Scalar Polynomial::operator()(const Scalar& x) const {
  Scalar v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::derivative() const {
  if (c.size() <= 1) return Polynomial();
  std::vector<Scalar> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * long(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Scalar lc = leading();
  std::vector<Scalar> d(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) d[k] = c[k] / lc;
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<Scalar> r(std::max(p.c.size(), q.c.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = p.coeff(int(k)) + q.coeff(int(k));
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& p) {
  std::vector<Scalar> r(p.c.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = -p.c[k];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return Polynomial();
  std::vector<Scalar> r(p.c.size() + q.c.size() - 1);
  for (std::size_t i = 0; i < p.c.size(); ++i)
    for (std::size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
  return Polynomial(std::move(r));
}

Polynomial operator*(const Scalar& a, const Polynomial& p) {
  std::vector<Scalar> r(p.c.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a * p.c[k];
  return Polynomial(std::move(r));
}

bool operator==(const Polynomial& p, const Polynomial& q) { return p.c == q.c; }

void divmod(const Polynomial& p, const Polynomial& d, Polynomial& quo, Polynomial& rem) {
  if (d.is_zero()) throw Error(ErrorCode::DegenerateInput, "polynomial division by zero");
  std::vector<Scalar> r = p.c;
  int dd = d.degree();
  std::vector<Scalar> q(p.degree() >= dd ? std::size_t(p.degree() - dd + 1) : 0);
  for (int k = p.degree(); k >= dd; --k) {
    Scalar f = r[std::size_t(k)] / d.leading();
    q[std::size_t(k - dd)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= dd; ++j) r[std::size_t(k - dd + j)] -= f * d.c[std::size_t(j)];
  }
  quo = Polynomial(std::move(q));
  rem = Polynomial(std::move(r));
}

Polynomial poly_gcd(Polynomial p, Polynomial q) {
  while (!q.is_zero()) {
    Polynomial quo, rem;
    divmod(p, q, quo, rem);
    p = std::move(q);
    q = rem.monic();
  }
  return p.monic();
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const Scalar& v = p.c[std::size_t(k)];
    if (v == 0) continue;
    std::string term = (v < 0 ? "-" : (out.empty() ? "" : "+"));
    Scalar a = abs(v);
    if (a != 1 || k == 0) term += a.get_str();
    if (k >= 1) term += (a != 1 ? "*t" : "t");
    if (k >= 2) term += "^" + std::to_string(k);
    out += term;
  }
  return out;
}

// ---- matrices ----

SymMatrix::SymMatrix(int order) : n_(order), a_(std::size_t(order) * (order + 1) / 2) {}

Matrix SymMatrix::dense() const {
  Matrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

const char* form_name(FormClass f) {
  switch (f) {
    case FormClass::PositiveDefinite: return "PositiveDefinite";
    case FormClass::PositiveSemidefiniteSingular: return "PositiveSemidefiniteSingular";
    case FormClass::Indefinite: return "Indefinite";
  }
  return "?";
}

SymMatrix hankel(const std::vector<Scalar>& s, long offset, int order) {
  if (order < 0) throw Error(ErrorCode::ShapeError, "negative Hankel order");
  if (order > 0 && (offset < 0 || offset + 2 * (order - 1) >= long(s.size())))
    throw Error(ErrorCode::InsufficientMoments,
                "Hankel of order " + std::to_string(order) + " at offset " + std::to_string(offset) +
                    " needs more moments");
  SymMatrix h(order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) h.set(i, j, s[std::size_t(offset + i + j)]);
  return h;
}

SymMatrix hankel(const MomentSequence& s, long offset, int order) {
  if (order > 0 && (!s.has(offset) || !s.has(offset + 2 * (order - 1))))
    throw Error(ErrorCode::InsufficientMoments,
                "Hankel of order " + std::to_string(order) + " at offset " + std::to_string(offset) +
                    " needs more moments");
  SymMatrix h(order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j <= i; ++j) h.set(i, j, s.at(offset + i + j));
  return h;
}

// Symmetric elimination with largest-diagonal pivoting. A negative pivot, or
// a zero diagonal block with a nonzero off-diagonal entry, means indefinite.
FormReport classify_form_detail(const SymMatrix& m, const Context& ctx) {
  int n = m.order();
  Matrix a = m.dense();
  Scalar scale = 0;
  for (const auto& v : a.a) scale = std::max(scale, abs(v));
  std::vector<int> live(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) live[std::size_t(i)] = i;
  int rank = 0;
  while (!live.empty()) {
    int best = live[0];
    for (int i : live)
      if (a(i, i) > a(best, best)) best = i;
    for (int i : live)
      if (sign_tol(a(i, i), scale, ctx) < 0) return {FormClass::Indefinite, rank};
    if (sign_tol(a(best, best), scale, ctx) == 0) {
      for (int i : live)
        for (int j : live)
          if (i != j && sign_tol(a(i, j), scale, ctx) != 0) return {FormClass::Indefinite, rank};
      return {FormClass::PositiveSemidefiniteSingular, rank};
    }
    const Scalar piv = a(best, best);
    live.erase(std::find(live.begin(), live.end(), best));
    for (int i : live) {
      if (a(i, best) == 0) continue;
      Scalar f = a(i, best) / piv;
      for (int j : live) a(i, j) -= f * a(best, j);
    }
    ++rank;
  }
  return {FormClass::PositiveDefinite, rank};
}

FormClass classify_form(const SymMatrix& m, const Context& ctx) { return classify_form_detail(m, ctx).form; }

// Bareiss fraction-free elimination; divisions are exact.
Scalar det(Matrix m) {
  int n = m.n;
  if (n == 0) return Scalar(1);
  Scalar prev = 1;
  int sgn_flip = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return Scalar(0);
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
      sgn_flip = -sgn_flip;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  Scalar d = m(n - 1, n - 1);
  return sgn_flip < 0 ? Scalar(-d) : d;
}

Scalar det(const SymMatrix& m) { return det(m.dense()); }

Polynomial det_poly(const std::vector<std::vector<Scalar>>& rows) {
  int m = int(rows.size()) - 1;
  if (m < 0) throw Error(ErrorCode::ShapeError, "det_poly needs at least one row");
  for (const auto& r : rows)
    if (int(r.size()) != m) throw Error(ErrorCode::ShapeError, "det_poly rows must have length rows-1");
  std::vector<Scalar> coeffs(std::size_t(m) + 1);
  for (int j = 0; j <= m; ++j) {
    Matrix minor(m);
    for (int i = 0, ii = 0; i <= m; ++i) {
      if (i == j) continue;
      for (int k = 0; k < m; ++k) minor(ii, k) = rows[std::size_t(i)][std::size_t(k)];
      ++ii;
    }
    Scalar d = det(minor);
    coeffs[std::size_t(j)] = ((j + m) % 2 == 0) ? d : Scalar(-d);
  }
  return Polynomial(std::move(coeffs));
}

Polynomial bordered(const std::vector<Scalar>& u, int m) {
  if (m < 0) throw Error(ErrorCode::ShapeError, "negative bordered order");
  if (m > 0 && int(u.size()) < 2 * m)
    throw Error(ErrorCode::InsufficientMoments, "bordered determinant of order " + std::to_string(m) +
                                                    " needs " + std::to_string(2 * m) + " moments");
  std::vector<std::vector<Scalar>> rows(std::size_t(m) + 1);
  for (int i = 0; i <= m; ++i)
    for (int k = 0; k < m; ++k) rows[std::size_t(i)].push_back(u[std::size_t(i + k)]);
  return det_poly(rows);
}

// ---- roots ----

Scalar cauchy_bound(const Polynomial& p) {
  Scalar m = 0;
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, abs(Scalar(p.c[std::size_t(k)] / p.leading())));
  return m + 1;
}

Scalar simplest_rational(Scalar a, Scalar b) {
  if (a > b) std::swap(a, b);
  if (a <= 0 && b >= 0) return Scalar(0);
  if (b < 0) return -simplest_rational(-b, -a);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  Scalar f(fl);
  if (f == a) return a;
  if (f + 1 <= b) return f + 1;
  Scalar inner = simplest_rational(Scalar(1) / (b - f), Scalar(1) / (a - f));
  Scalar r = f + Scalar(1) / inner;
  r.canonicalize();
  return r;
}

namespace {

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{p.monic(), p.derivative().monic()};
  while (chain.back().degree() > 0) {
    Polynomial quo, rem;
    divmod(chain[chain.size() - 2], chain.back(), quo, rem);
    if (rem.is_zero()) break;
    Polynomial next = -rem;
    // positive rescaling keeps the sign pattern
    Scalar lc = abs(next.leading());
    chain.push_back((Scalar(1) / lc) * next);
  }
  return chain;
}

int sign_changes(const std::vector<Polynomial>& chain, const Scalar& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sgn(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

struct Isolator {
  const Polynomial& p;
  std::vector<Polynomial> chain;
  Scalar width;
  std::vector<Root> out;

  int count(const Scalar& a, const Scalar& b) const { return sign_changes(chain, a) - sign_changes(chain, b); }

  // exactly one root in (a, b]
  void refine(Scalar a, Scalar b) {
    if (p(b) == 0) {
      out.push_back({b, true});
      return;
    }
    auto narrow = [&](const Scalar& w) {
      while (b - a > w) {
        Scalar mid = (a + b) / 2;
        if (p(mid) == 0) {
          a = b = mid;
          return true;
        }
        if (count(a, mid) == 1)
          b = mid;
        else
          a = mid;
      }
      return false;
    };
    auto snap = [&]() -> bool {
      Scalar lo = a == b ? a : Scalar(a + (b - a) / 1024);  // stay inside (a, b]
      Scalar q = simplest_rational(lo, b);
      if (p(q) == 0) {
        out.push_back({q, true});
        return true;
      }
      return false;
    };
    if (narrow(width)) {
      out.push_back({a, true});
      return;
    }
    if (snap()) return;
    if (narrow(width * width)) {
      out.push_back({a, true});
      return;
    }
    if (snap()) return;
    out.push_back({(a + b) / 2, false});
  }

  void isolate(const Scalar& a, const Scalar& b) {
    int n = count(a, b);
    if (n == 0) return;
    if (n == 1) {
      refine(a, b);
      return;
    }
    Scalar mid = (a + b) / 2;
    isolate(a, mid);
    isolate(mid, b);
  }
};

}  // namespace

std::vector<Root> isolate_roots(const Polynomial& p, const Scalar& lo, const Scalar& hi, const Context& ctx) {
  if (p.is_zero()) throw Error(ErrorCode::DegenerateInput, "zero polynomial has no isolated roots");
  if (lo > hi) throw Error(ErrorCode::DomainError, "empty root interval");
  std::vector<Root> roots;
  if (p.degree() == 0) return roots;
  Polynomial g = poly_gcd(p, p.derivative());
  if (g.degree() > 0 && !isolate_roots(g, lo, hi, ctx).empty())
    throw Error(ErrorCode::DegenerateInput, "repeated root of " + format_polynomial(p));
  if (p.degree() <= 2) {
    // closed form when the roots are rational
    const auto& c = p.c;
    std::vector<Scalar> cand;
    if (p.degree() == 1) {
      cand.push_back(-c[0] / c[1]);
    } else {
      Scalar disc = c[1] * c[1] - 4 * c[0] * c[2];
      mpz_class num = disc.get_num(), den = disc.get_den();
      if (disc > 0 && mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        Scalar root{mpz_class(sqrt(num)), mpz_class(sqrt(den))};
        root.canonicalize();
        for (const Scalar& sg : {Scalar(-1), Scalar(1)}) cand.push_back((-c[1] + sg * root) / (2 * c[2]));
      }
    }
    if (!cand.empty()) {
      std::sort(cand.begin(), cand.end());
      for (const auto& x : cand)
        if (x >= lo && x <= hi) roots.push_back({x, true});
      return roots;
    }
  }
  Isolator iso{p, sturm_chain(p), ctx.root_width, {}};
  if (p(lo) == 0) iso.out.push_back({lo, true});
  if (lo < hi) iso.isolate(lo, hi);
  std::sort(iso.out.begin(), iso.out.end(), [](const Root& x, const Root& y) { return x.value < y.value; });
  return iso.out;
}

std::vector<Scalar> real_roots(const Polynomial& p, const Scalar& lo, const Scalar& hi, const Context& ctx) {
  std::vector<Scalar> r;
  for (const auto& root : isolate_roots(p, lo, hi, ctx)) r.push_back(root.value);
  return r;
}

std::vector<Scalar> solve_linear(Matrix a, std::vector<Scalar> y) {
  int n = a.n;
  if (int(y.size()) != n) throw Error(ErrorCode::ShapeError, "linear system size mismatch");
  for (int k = 0; k < n; ++k) {
    int r = k;
    while (r < n && a(r, k) == 0) ++r;
    if (r == n) throw Error(ErrorCode::DegenerateInput, "singular linear system");
    if (r != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      std::swap(y[std::size_t(k)], y[std::size_t(r)]);
    }
    for (int i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Scalar f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      y[std::size_t(i)] -= f * y[std::size_t(k)];
    }
  }
  std::vector<Scalar> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    Scalar v = y[std::size_t(i)];
    for (int j = i + 1; j < n; ++j) v -= a(i, j) * x[std::size_t(j)];
    x[std::size_t(i)] = v / a(i, i);
  }
  return x;
}

}  // namespace momentkit
