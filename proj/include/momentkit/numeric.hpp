#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentkit {

using Scalar = mpq_class;

enum class ErrorCode {
  InsufficientMoments,
  ShapeError,
  DegenerateInput,
  DomainError,
  NotAMomentSequence,
  NotStrictlyPositive,
  ConvergenceError,
  InfeasibleChoice,
  ArityError,
  OutOfRange,
  ZeroAtomError,
  Unsupported,
  CertificateInvalid,
  BadIndex,
  PreconditionError,
  ParseError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Arith { Exact, Float };

// Arithmetic policy. Values are always rationals; Float mode only changes
// how signs and equalities are decided.
struct Context {
  Arith mode = Arith::Exact;
  double eps = 1e-9;
  Scalar root_width;  // target enclosure width for real roots
  int grid_q = 12;
  int depth = 12;
  Context();
  bool exact() const { return mode == Arith::Exact; }
};

const Context& default_context();

Scalar parse_scalar(const std::string& text);
std::string format_scalar(const Scalar& x);
std::string format_decimal(const Scalar& x, int digits = 17);
double to_double(const Scalar& x);
Scalar from_double(double x);
Scalar power(const Scalar& x, long k);
int sign(const Scalar& x);
Scalar abs(const Scalar& x);
Scalar pow2(long q);

// Sign of x; in Float mode values within eps*|scale| count as zero.
int sign_tol(const Scalar& x, const Scalar& scale, const Context& ctx);
bool equal_tol(const Scalar& x, const Scalar& y, const Context& ctx);

// Moment sequence window: values[j] is s_{first_index + j}.
struct MomentSequence {
  long first_index = 0;
  std::vector<Scalar> values;

  long last_index() const { return first_index + long(values.size()) - 1; }
  bool has(long k) const { return k >= first_index && k <= last_index(); }
  const Scalar& at(long k) const;
  std::size_t size() const { return values.size(); }
};

// Polynomial with coefficients c[0] + c[1] t + ..., trailing zeros trimmed.
struct Polynomial {
  std::vector<Scalar> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs);
  static Polynomial constant(const Scalar& v);
  static Polynomial monomial(long k, const Scalar& v = 1);
  static Polynomial linear(const Scalar& c0, const Scalar& c1);  // c0 + c1 t

  int degree() const { return int(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  Scalar coeff(int k) const;
  const Scalar& leading() const { return c.back(); }
  Scalar operator()(const Scalar& x) const;
  Polynomial derivative() const;
  Polynomial monic() const;
  void trim();
};

Polynomial operator+(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p);
Polynomial operator*(const Polynomial& p, const Polynomial& q);
Polynomial operator*(const Scalar& a, const Polynomial& p);
bool operator==(const Polynomial& p, const Polynomial& q);
void divmod(const Polynomial& p, const Polynomial& d, Polynomial& quo, Polynomial& rem);
Polynomial poly_gcd(Polynomial p, Polynomial q);
std::string format_polynomial(const Polynomial& p);

// Dense square matrix, row-major.
struct Matrix {
  int n = 0;
  std::vector<Scalar> a;
  Matrix() = default;
  explicit Matrix(int order) : n(order), a(std::size_t(order) * order) {}
  Scalar& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
  const Scalar& operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }
};

// Symmetric matrix in packed lower-triangular storage.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order);
  int order() const { return n_; }
  const Scalar& operator()(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, const Scalar& v) { a_[idx(i, j)] = v; }
  Matrix dense() const;

 private:
  std::size_t idx(int i, int j) const {
    if (i < j) std::swap(i, j);
    return std::size_t(i) * (i + 1) / 2 + j;
  }
  int n_ = 0;
  std::vector<Scalar> a_;
};

enum class FormClass { PositiveDefinite, PositiveSemidefiniteSingular, Indefinite };
const char* form_name(FormClass f);

struct FormReport {
  FormClass form;
  int rank;
};

// Entry (i,j) = s_{offset+i+j}, absolute indices of the window.
SymMatrix hankel(const MomentSequence& s, long offset, int order);
SymMatrix hankel(const std::vector<Scalar>& s, long offset, int order);

FormReport classify_form_detail(const SymMatrix& m, const Context& ctx = default_context());
FormClass classify_form(const SymMatrix& m, const Context& ctx = default_context());

Scalar det(Matrix m);
Scalar det(const SymMatrix& m);

// Determinant of the (m+1)x(m+1) matrix whose row i is rows[i] followed by
// t^i, expanded along the last column.
Polynomial det_poly(const std::vector<std::vector<Scalar>>& rows);

// Rows i = 0..m of [u_i ... u_{i+m-1} | t^i].
Polynomial bordered(const std::vector<Scalar>& u, int m);

struct Root {
  Scalar value;
  bool exact;  // value is a root, not just inside the enclosure
};

// Distinct real roots of p in [lo, hi], ascending.
std::vector<Root> isolate_roots(const Polynomial& p, const Scalar& lo, const Scalar& hi,
                                const Context& ctx = default_context());
std::vector<Scalar> real_roots(const Polynomial& p, const Scalar& lo, const Scalar& hi,
                               const Context& ctx = default_context());
Scalar cauchy_bound(const Polynomial& p);

// Simplest rational (smallest denominator) in [a, b].
Scalar simplest_rational(Scalar a, Scalar b);

// Solve A x = y exactly; throws DegenerateInput if singular.
std::vector<Scalar> solve_linear(Matrix a, std::vector<Scalar> y);

}  // namespace momentkit
