#include "doctest.h"
#include "support.hpp"

using namespace momentkit;
using mktest::q;
using mktest::seq;

namespace {

PartialWeights flat_p1(long kappa, const Scalar& trunk0_sq, const Scalar& l1_sum) {
  PartialWeights pw;
  pw.kappa = kappa;
  pw.p = 1;
  for (long i = 0; i < kappa; ++i) pw.trunk_sq.push_back(trunk0_sq);
  pw.branches = {BranchClass{l1_sum, 1, {}}};
  return pw;
}

void check_certificate(const SolveOutcome& o) {
  REQUIRE(o.certificate);
  const auto& cert = *o.certificate;
  CHECK(verify_certificate(cert, 12).valid);
  CHECK(cert.norm_sq);
  for (std::size_t c = 0; c < cert.branches.size(); ++c) {
    const auto& b = cert.branches[c];
    if (cert.kind == CompletionCertificate::Kind::Subnormal) {
      CHECK(HalfInt::of(long(b.measure.size())) == b.K);
      CHECK(index(b.sequence.values, Domain::ray()) == b.K);
    } else {
      CHECK(index(b.sequence.values, Domain::half_open()) == b.K);
    }
  }
}

}  // namespace

TEST_CASE("solve_subnormal: two branches of weight 1/2 over the root") {
  PartialWeights pw;
  pw.kappa = 0;
  pw.p = 1;
  pw.branches = {BranchClass{q("1/2"), 2, {}}};
  auto o = solve_subnormal(pw, {HalfInt::of(1)});
  REQUIRE(o.status == SolveStatus::Feasible);
  CHECK(o.certificate->branches[0].measure == AtomicMeasure::make({{Scalar(1), Scalar(1)}}));
  check_certificate(o);
  pw.branches[0].l1_sq_total = 2;
  CHECK(solve_subnormal(pw, {HalfInt::of(1)}).status == SolveStatus::Feasible);
  CHECK_THROWS_AS(solve_subnormal(pw, {HalfInt::of(5)}), Error);
}

TEST_CASE("solve_subnormal on a classical shift follows the scale-invariant Stampfli bound") {
  auto run = [](const Scalar& l4) {
    PartialWeights pw;
    pw.kappa = 0;
    pw.p = 4;
    pw.branches = {BranchClass{Scalar(1), 1, {Scalar(4), Scalar(9), l4}}};
    return solve_subnormal(pw).status;
  };
  // (1, 2, 3, lambda_4): cutoff lambda_4^2 = 9 + 25/27
  CHECK(run(Scalar(268, 27) + q("1/100")) == SolveStatus::Feasible);
  CHECK(run(Scalar(268, 27) - q("1/100")) == SolveStatus::Infeasible);
  CHECK(stampfli_hankel_check({1, 2, 3, 4}).holds);
  CHECK(run(16) == SolveStatus::Feasible);
}

TEST_CASE("stampfli_check arithmetic") {
  auto a = stampfli_check({1, 2, 3, 4});
  CHECK_FALSE(a.holds);
  CHECK(a.rhs == Scalar(52, 3));
  CHECK(stampfli_check({1, 2, 3, 5}).holds);
  auto near = stampfli_check({1, 2, q("2.000001"), 3});
  CHECK(near.holds);
  CHECK(near.rhs - q("2.000001") * q("2.000001") < q("1e-10"));
  CHECK_THROWS_AS(stampfli_check({1, 3, 2, 4}), Error);
  CHECK_THROWS_AS(stampfli_hankel_check({1, 1, 2, 4}), Error);
}

TEST_CASE("solve_che examples with one generation") {
  auto o = solve_che(flat_p1(1, 2, q("5/4")));
  REQUIRE(o.status == SolveStatus::Feasible);
  REQUIRE(o.certificate->root_rho);
  CHECK(o.certificate->root_rho->positive == AtomicMeasure::make({{q("1/2"), Scalar(1)}}));
  CHECK(o.certificate->root_rho->zero_mass == 0);
  check_certificate(o);
  CHECK(solve_che(flat_p1(1, 2, q("8/5"))).status == SolveStatus::Infeasible);
  CHECK(solve_che(flat_p1(1, 2, q("3/2"))).status == SolveStatus::Feasible);

  PartialWeights iso = flat_p1(0, 1, 1);
  iso.kappa = std::nullopt;
  CHECK(solve_che(iso).status == SolveStatus::Feasible);
  iso.branches[0].l1_sq_total = q("3/2");
  CHECK(solve_che(iso).status == SolveStatus::Infeasible);
}

TEST_CASE("flat_che_completion examples") {
  auto o = flat_che_completion(flat_p1(0, 1, 1));
  REQUIRE(o.status == SolveStatus::Feasible);
  CHECK(o.certificate->branches[0].measure.size() == 0);
  CHECK(flat_che_completion(flat_p1(1, 2, q("5/4"))).status == SolveStatus::Feasible);
  CHECK(flat_che_completion(flat_p1(1, 2, q("8/5"))).status == SolveStatus::Infeasible);
  PartialWeights two;
  two.kappa = 0;
  two.p = 2;
  two.branches = {BranchClass{Scalar(1), 1, {Scalar(2)}}, BranchClass{Scalar(1), 1, {Scalar(3)}}};
  CHECK_THROWS_AS(flat_che_completion(two), Error);
}

TEST_CASE("closed-form one-generation CHE region") {
  // feasible iff lambda_0 >= 1 and 1 <= sum <= 2 - 1/lambda_0^2
  for (const char* t : {"1", "3/2", "2", "4"})
    for (const char* sigma : {"1", "9/8", "5/4", "3/2", "7/4", "15/8", "2"}) {
      Scalar a = q(t), b = q(sigma);
      bool want = a >= 1 && b >= 1 && b <= 2 - 1 / a;
      INFO(t, " ", sigma);
      CHECK((solve_che(flat_p1(1, a, b)).status == SolveStatus::Feasible) == want);
    }
}

TEST_CASE("constructed subnormal data are feasible and certificates verify") {
  mktest::Gen g(101);
  int feasible = 0;
  for (int trial = 0; trial < 12; ++trial) {
    long eta = g.integer(1, 2), kappa = g.integer(0, 2), p = g.integer(1, 3);
    auto c = mktest::constructed_subnormal(g, eta, kappa, p, q("9/10"));
    auto o = solve_subnormal(c.pw);
    INFO("eta=", eta, " kappa=", kappa, " p=", p, " ", o.reason);
    CHECK(o.status == SolveStatus::Feasible);
    if (o.status != SolveStatus::Feasible) continue;
    ++feasible;
    check_certificate(o);
    // the norm is the largest of the first-generation sum, the trunk weights and the top atoms
    Scalar want = c.pw.l1_sum();
    for (const auto& w : c.pw.trunk_sq) want = std::max(want, w);
    for (const auto& b : o.certificate->branches) want = std::max(want, max_atom(b.measure));
    CHECK(*o.certificate->norm_sq == want);
  }
  CHECK(feasible >= 10);
}

TEST_CASE("constructed CHE data are feasible and certificates verify") {
  mktest::Gen g(102);
  int feasible = 0;
  for (int trial = 0; trial < 12; ++trial) {
    long eta = g.integer(1, 2), kappa = g.integer(0, 2), p = g.integer(2, 3);
    auto c = mktest::constructed_che(g, eta, kappa, p, q("11/10"));
    auto o = solve_che(c.pw);
    INFO("eta=", eta, " kappa=", kappa, " p=", p, " ", o.reason);
    CHECK(o.status == SolveStatus::Feasible);
    if (o.status != SolveStatus::Feasible) continue;
    ++feasible;
    check_certificate(o);
  }
  CHECK(feasible >= 10);
}

TEST_CASE("level equality violated beyond repair is Infeasible") {
  mktest::Gen g(103);
  for (int trial = 0; trial < 6; ++trial) {
    auto c = mktest::constructed_subnormal(g, 1, 1, 2, Scalar(1));
    // a much larger trunk weight pushes the deepest slot below its threshold
    c.pw.trunk_sq[0] *= 20;
    auto o = solve_subnormal(c.pw);
    CHECK(o.status != SolveStatus::Feasible);
  }
}

TEST_CASE("kappa_infinite_probe") {
  auto iso = kappa_infinite_probe({1, 1, 1, 1}, {BranchClass{Scalar(1), 1, {Scalar(1), Scalar(1)}}}, 3, 3);
  CHECK(iso.verdict == "FeasibleTowardInfinity");
  REQUIRE(iso.bound_sq);
  CHECK(*iso.bound_sq == 1);
  for (const auto& s : iso.steps) CHECK(*s.norm_sq == 1);

  // one generation, L = 2: kappa = 2 needs int t^-3 <= 1/6 against an infimum of 2/9
  auto cut = kappa_infinite_probe({q("3/2"), 2, 1, 1}, {BranchClass{Scalar(2), 1, {}}}, 1, 3);
  CHECK(cut.verdict == "InfeasibleAt");
  REQUIRE(cut.infeasible_kappa);
  CHECK(*cut.infeasible_kappa == 2);
  CHECK(cut.steps.size() == 3);
  CHECK(cut.steps[0].status == SolveStatus::Feasible);
  CHECK(cut.steps[1].status == SolveStatus::Feasible);
}

TEST_CASE("flatness_verifier") {
  auto o = flat_che_completion(flat_p1(1, 2, q("5/4")));
  REQUIRE(o.certificate);
  FullWeights w = full_weights(*o.certificate);
  std::vector<CAMeasure> taus;
  for (const auto& b : o.certificate->branches) taus.push_back(CAMeasure::make(0, b.measure));
  CHECK(flatness_verifier(w, taus, 3).two_flat);
  CHECK(flatness_verifier(w, taus, 2).two_flat);

  // two classes sharing tau are flat from the second generation on
  FullWeights two = w;
  two.branches.push_back(two.branches[0]);
  two.branches[0].l1_sq_total /= 2;
  two.branches[1].l1_sq_total /= 2;
  CHECK(flatness_verifier(two, {taus[0], taus[0]}, 3).two_flat);

  FullWeights iso;
  iso.kappa = 0;
  FullBranch b;
  b.l1_sq_total = 1;
  b.gen.kind = BranchGenerator::Kind::Explicit;
  b.gen.tail_sq = Scalar(1);
  iso.branches = {b};
  CHECK_THROWS_AS(flatness_verifier(iso, {CAMeasure{}}, 3), Error);
}

TEST_CASE("second-generation scaling of a CHE branch needs an atom at 0") {
  // branch 2 copies branch 1 from generation 3 on with lambda_{2,2}^2 = c lambda_{1,2}^2,
  // so its sequence is (1, c gamma_1, c gamma_2, ...)
  mktest::Gen g(104);
  for (int trial = 0; trial < 40; ++trial) {
    CAMeasure tau = CAMeasure::make(0, g.measure(int(g.integer(1, 2)), Scalar(1, 4), Scalar(1)));
    auto gam = ca_reconstruct(1, tau, 7);
    Scalar c = g.coin() ? g.rational(Scalar(1, 2), q("0.95"), 20) : g.rational(q("1.05"), Scalar(2), 20);
    auto other = gam;
    for (std::size_t n = 1; n < other.size(); ++n) other[n] *= c;
    auto v = has_ca_extension(other);
    if (c < 1) {
      CHECK_FALSE(v.extendable);
    } else {
      REQUIRE(v.extendable);
      CHECK(v.tau.zero_mass == c - 1);
    }
  }
}
