#include "momentkit/cli.hpp"

#include "momentkit/oracle.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace momentkit::cli {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Scalar sc(const json& v) {
  if (v.is_string()) return parse_scalar(v.get<std::string>());
  if (v.is_number_integer()) return Scalar(mpz_class(std::to_string(v.get<long long>())));
  bad("scalars must be strings (decimal or p/q) or integers, got " + v.dump());
}

std::vector<Scalar> scv(const json& v) {
  if (!v.is_array()) bad("expected an array of scalars, got " + v.dump());
  std::vector<Scalar> out;
  for (const auto& x : v) out.push_back(sc(x));
  return out;
}

std::vector<Scalar> squares(const std::vector<Scalar>& v) {
  std::vector<Scalar> out;
  for (const auto& x : v) out.push_back(x * x);
  return out;
}

long integer(const json& v, const char* what) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    try {
      return std::stol(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  bad(std::string(what) + " must be an integer");
}

json js(const Scalar& x) { return format_scalar(x); }

json jsv(const std::vector<Scalar>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(js(x));
  return a;
}

json measure_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms)
    atoms.push_back({{"x", js(a.x)}, {"m", js(a.m)}, {"x_decimal", format_decimal(a.x)}, {"m_decimal", format_decimal(a.m)}});
  return {{"atoms", atoms}, {"exact", mu.exact}};
}

AtomicMeasure measure_from(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : field(j, "atoms")) atoms.push_back({sc(field(a, "x")), sc(field(a, "m"))});
  bool exact = j.contains("exact") ? j.at("exact").get<bool>() : true;
  return AtomicMeasure::make(std::move(atoms), exact);
}

json ca_json(const CAMeasure& tau) {
  json j = measure_json(tau.positive);
  j["zero_mass"] = js(tau.zero_mass);
  return j;
}

json verdict_json(const PositivityVerdict& v) {
  json forms = json::array();
  for (const auto& f : v.forms)
    forms.push_back({{"name", f.name}, {"order", f.order}, {"form", form_name(f.form)}, {"rank", f.rank}});
  json j = {{"verdict", positivity_name(v.cls)}, {"method", v.method}, {"forms", forms}};
  if (v.grid_a) j["grid"] = {js(*v.grid_a), js(*v.grid_b)};
  return j;
}

json threshold_json(const Threshold& t) {
  json j = {{"value", js(t.value)}, {"decimal", format_decimal(t.value)}, {"exact", t.exact}, {"method", t.method}};
  if (t.last_q) j["last_q"] = t.last_q;
  return j;
}

Domain domain_from(const json& p) {
  const json& d = field(p, "domain");
  if (d.is_array()) {
    if (d.size() != 2) bad("compact domain needs [a, b]");
    return Domain::compact(sc(d[0]), sc(d[1]));
  }
  std::string name = d.get<std::string>();
  if (name == "ray" || name == "(0,inf)") return Domain::ray();
  if (name == "half-open" || name == "halfopen" || name == "(0,1]") return Domain::half_open();
  if (name == "compact") {
    auto iv = scv(field(p, "interval"));
    if (iv.size() != 2) bad("interval needs [a, b]");
    return Domain::compact(iv[0], iv[1]);
  }
  bad("unknown domain \"" + name + "\"");
}

// Tree problems -------------------------------------------------------------

// Each branch lists lambda_{i,1..p}, or lambda_{i,2..p} when the class total
// of lambda_{i,1}^2 is given separately as l1_sq_total.
std::vector<BranchClass> branches_from(const json& p, long& width) {
  std::vector<BranchClass> out;
  width = -1;
  for (const auto& b : field(p, "branches")) {
    std::vector<Scalar> w;
    if (b.contains("weights_sq"))
      w = scv(b.at("weights_sq"));
    else
      w = squares(scv(field(b, "weights")));
    BranchClass c;
    if (b.contains("count")) {
      const json& n = b.at("count");
      if (n.is_string() && (n.get<std::string>() == "inf" || n.get<std::string>() == "infinite"))
        c.count = std::nullopt;
      else
        c.count = integer(n, "count");
    }
    if (b.contains("l1_sq_total")) {
      c.l1_sq_total = sc(b.at("l1_sq_total"));
      c.higher_sq = w;
    } else {
      if (!c.count) bad("a class with infinitely many branches needs l1_sq_total");
      if (w.empty()) bad("branch weights are empty");
      c.l1_sq_total = w[0] * *c.count;
      c.higher_sq.assign(w.begin() + 1, w.end());
    }
    long p_here = long(c.higher_sq.size()) + 1;
    if (width >= 0 && p_here != width) bad("all branches need the same number of weights");
    width = p_here;
    out.push_back(std::move(c));
  }
  if (out.empty()) bad("no branches given");
  return out;
}

std::optional<long> kappa_from(const json& p) {
  const json& k = field(p, "kappa");
  if (k.is_string() && (k.get<std::string>() == "inf" || k.get<std::string>() == "infinite")) return std::nullopt;
  return integer(k, "kappa");
}

std::vector<Scalar> trunk_from(const json& p, const char* plain, const char* squared) {
  if (p.contains(squared)) return scv(p.at(squared));
  if (p.contains(plain)) return squares(scv(p.at(plain)));
  return {};
}

PartialWeights partial_from(const json& p) {
  PartialWeights pw;
  pw.kappa = kappa_from(p);
  pw.trunk_sq = trunk_from(p, "trunk", "trunk_sq");
  if (p.contains("branch_l1_sq_sum")) {
    pw.p = p.contains("p") ? integer(p.at("p"), "p") : 1;
    if (pw.p != 1) bad("branch_l1_sq_sum is only meaningful for p = 1");
    pw.branches = {BranchClass{sc(p.at("branch_l1_sq_sum")), 1, {}}};
  } else {
    long width;
    pw.branches = branches_from(p, width);
    pw.p = width;
    if (p.contains("p") && integer(p.at("p"), "p") != width) bad("p disagrees with the branch weight count");
  }
  if (!pw.kappa && pw.trunk_sq.empty()) pw.trunk_sq = {};
  return pw;
}

std::vector<HalfInt> K_from(const json& p) {
  if (!p.contains("K")) return {};
  const json& k = p.at("K");
  if (k.is_string()) {
    if (k.get<std::string>() == "auto") return {};
    bad("K must be \"auto\" or a list");
  }
  std::vector<HalfInt> out;
  for (const auto& v : k) out.push_back(v.is_string() ? parse_half_int(v.get<std::string>()) : HalfInt::of(v.get<long>()));
  return out;
}

const char* kind_name(CompletionCertificate::Kind k) {
  return k == CompletionCertificate::Kind::Subnormal ? "subnormal" : "che";
}

json levels_json(const std::vector<LevelRecord>& levels) {
  json a = json::array();
  for (const auto& l : levels) {
    json forced = json::array();
    for (bool f : l.forced) forced.push_back(f);
    a.push_back({{"level", l.level},
                 {"equality", l.equality},
                 {"target", js(l.target)},
                 {"residual", js(l.residual)},
                 {"thresholds", jsv(l.thresholds)},
                 {"values", jsv(l.values)},
                 {"forced", forced},
                 {"exact", l.exact}});
  }
  return a;
}

json outcome_json(const SolveOutcome& o) {
  json j = {{"verdict", status_name(o.status)}, {"numeric", o.numeric}};
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (!o.K.empty()) {
    json k = json::array();
    for (const auto& h : o.K) k.push_back(h.str());
    j["K"] = k;
  }
  if (o.certificate) {
    j["certificate"] = certificate_to_json(*o.certificate);
    j["thresholds"] = levels_json(o.certificate->levels);
  }
  return j;
}

int status_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return 0;
    case SolveStatus::Infeasible: return 1;
    case SolveStatus::Unknown: return 2;
  }
  return 2;
}

Context context_from(const json& p, const CliOptions& opt) {
  Context ctx;
  if (p.contains("arithmetic")) {
    std::string a = p.at("arithmetic").get<std::string>();
    if (a == "float") ctx.mode = Arith::Float;
    else if (a != "exact") bad("arithmetic must be \"exact\" or \"float\"");
  }
  if (p.contains("options")) {
    const json& o = p.at("options");
    if (o.contains("depth")) ctx.depth = int(integer(o.at("depth"), "depth"));
    if (o.contains("grid_q")) ctx.grid_q = int(integer(o.at("grid_q"), "grid_q"));
    if (o.contains("tolerance")) ctx.eps = to_double(sc(o.at("tolerance")));
  }
  if (opt.mode) ctx.mode = *opt.mode;
  if (opt.tolerance) ctx.eps = *opt.tolerance;
  if (opt.depth) ctx.depth = *opt.depth;
  if (opt.grid_q) ctx.grid_q = *opt.grid_q;
  return ctx;
}

// Handlers ------------------------------------------------------------------

CliResult do_classify(const json& p, const Context& ctx) {
  auto s = scv(field(p, "sequence"));
  Domain d = domain_from(p);
  PositivityVerdict v = classify(s, d, ctx);
  json j = verdict_json(v);
  if (v.positive()) {
    try {
      j["index"] = index(s, d, ctx).str();
    } catch (const Error& e) {
      j["index_error"] = e.what();
    }
  }
  return {v.positive() ? 0 : 1, j};
}

CliResult do_principal(const json& p, const Context& ctx) {
  auto s = scv(field(p, "sequence"));
  Domain d = domain_from(p);
  json j;
  switch (d.kind) {
    case Domain::Kind::Compact:
      j["lower"] = measure_json(principal_compact(s, d.a, d.b, PrincipalKind::Lower, ctx));
      j["upper"] = measure_json(principal_compact(s, d.a, d.b, PrincipalKind::Upper, ctx));
      break;
    case Domain::Kind::Ray: {
      auto m = minimal_measure_ray(s, ctx);
      if (auto* mu = std::get_if<AtomicMeasure>(&m)) {
        j["minimal"] = measure_json(*mu);
      } else {
        j["minimal_family"] = "psi";
        j["parameter"] = "x = int 1/t dmu, any x above t_inf";
        j["t_inf"] = threshold_json(t_inf(s, ctx));
      }
      break;
    }
    case Domain::Kind::HalfOpen: j["minimal"] = measure_json(minimal_measure_half_open(s, ctx)); break;
  }
  return {0, j};
}

CliResult do_t_value(const json& p, const Context& ctx) {
  auto s = scv(field(p, "sequence"));
  Domain d = domain_from(p);
  json j;
  switch (d.kind) {
    case Domain::Kind::Ray: {
      Threshold t = t_inf(s, ctx);
      j["t_inf"] = js(t.value);
      j["threshold"] = threshold_json(t);
      break;
    }
    case Domain::Kind::HalfOpen: {
      Threshold t = t_one(s, ctx);
      j["t_one"] = js(t.value);
      j["threshold"] = threshold_json(t);
      break;
    }
    case Domain::Kind::Compact: {
      ExtremalBounds b = t_T_compact(s, d.a, d.b, ctx);
      j["t_lo"] = js(b.t_lo);
      j["t_hi"] = js(b.t_hi);
      j["lo_measure"] = measure_json(b.lo_measure);
      j["hi_measure"] = measure_json(b.hi_measure);
      break;
    }
  }
  return {0, j};
}

CliResult do_backward(const json& p, const Context& ctx) {
  auto s = scv(field(p, "sequence"));
  Domain d = domain_from(p);
  json j;
  int code = 0;
  if (p.contains("x")) {
    ExtensionVerdict v = classify_backward(s, sc(p.at("x")), d, ctx);
    j["verdict"] = ext_name(v.cls);
    j["threshold"] = threshold_json(v.threshold);
    if (v.measure) j["measure"] = measure_json(*v.measure);
    code = v.cls == ExtClass::NotExtension ? 1 : 0;
  }
  if (p.contains("extend")) {
    const json& e = p.at("extend");
    long r = integer(field(e, "r"), "r");
    const json& kj = field(e, "K");
    HalfInt K = kj.is_string() ? parse_half_int(kj.get<std::string>()) : HalfInt::of(kj.get<long>());
    std::vector<Scalar> free = e.contains("free") ? scv(e.at("free")) : std::vector<Scalar>{};
    ExtensionResult res = extend_with_index(s, r, K, free, d, ctx);
    json slots = json::array();
    for (const auto& sl : res.slots)
      slots.push_back({{"k", sl.k},
                       {"kind", sl.kind == SlotKind::Strict ? "strict" : "forced"},
                       {"threshold", threshold_json(sl.threshold)},
                       {"value", js(sl.value)}});
    j["extension"] = {{"first_index", res.sequence.first_index}, {"values", jsv(res.sequence.values)}, {"slots", slots}};
    if (res.measure) j["extension"]["measure"] = measure_json(*res.measure);
    auto range = index_range(s.size(), r, d);
    j["extension"]["index_range"] = {range.first.str(), range.second.str()};
  }
  if (!p.contains("x") && !p.contains("extend")) bad("backward needs \"x\" or \"extend\"");
  return {code, j};
}

CliResult do_ca(const json& p, const Context& ctx) {
  auto c = scv(field(p, "sequence"));
  json j;
  if (p.contains("prefix")) {
    std::optional<CAMeasure> tau;
    if (p.contains("tau")) {
      const json& t = p.at("tau");
      tau = CAMeasure::make(t.contains("zero_mass") ? sc(t.at("zero_mass")) : Scalar(0), measure_from(t));
    }
    CABackwardResult r = ca_backward_extend(c, scv(p.at("prefix")), tau, ctx);
    j["extendable"] = r.extendable;
    if (r.extendable) {
      j["rho"] = ca_json(r.rho);
      j["slack"] = js(r.slack);
      j["equality_case"] = r.rho.zero_mass == 0;
    } else {
      j["violation"] = r.violation;
    }
    return {r.extendable ? 0 : 1, j};
  }
  CAVerdict v = has_ca_extension(c, ctx);
  j["extendable"] = v.extendable;
  j["increments"] = verdict_json(v.increments);
  if (v.extendable) j["tau"] = ca_json(v.tau);
  return {v.extendable ? 0 : 1, j};
}

CliResult do_solve(const json& p, const Context& ctx, const std::string& kind) {
  PartialWeights pw = partial_from(p);
  std::vector<HalfInt> K = K_from(p);
  SolveOutcome o;
  if (kind == "subnormal")
    o = solve_subnormal(pw, K, ctx);
  else if (kind == "che")
    o = solve_che(pw, K, ctx);
  else
    o = flat_che_completion(pw, ctx);
  json j = outcome_json(o);
  if (o.certificate && o.certificate->root_rho) j["root_rho"] = ca_json(*o.certificate->root_rho);
  return {status_code(o.status), j};
}

CliResult do_probe(const json& p, const Context& ctx) {
  auto stream = trunk_from(p, "trunk_stream", "trunk_stream_sq");
  long width;
  auto branches = branches_from(p, width);
  long kappa_max = integer(field(p, "kappa_max"), "kappa_max");
  ProbeReport r = kappa_infinite_probe(stream, branches, width, kappa_max, ctx);
  json steps = json::array();
  for (const auto& s : r.steps) {
    json st = {{"kappa", s.kappa}, {"verdict", status_name(s.status)}};
    if (s.norm_sq) st["norm_sq"] = js(*s.norm_sq);
    if (!s.reason.empty()) st["reason"] = s.reason;
    steps.push_back(st);
  }
  json j = {{"verdict", r.verdict}, {"steps", steps}};
  if (r.infeasible_kappa) j["infeasible_kappa"] = *r.infeasible_kappa;
  if (r.bound_sq) j["bound_sq"] = js(*r.bound_sq);
  int code = r.verdict == "FeasibleTowardInfinity" ? 0 : r.verdict == "InfeasibleAt" ? 1 : 2;
  return {code, j};
}

CliResult do_stampfli(const json& p) {
  auto l = scv(field(p, "lambda"));
  StampfliResult a = stampfli_check(l);
  StampfliResult b = stampfli_hankel_check(l);
  json j = {{"holds", a.holds},
            {"lhs", js(a.lhs)},
            {"rhs", js(a.rhs)},
            {"hankel_form", {{"holds", b.holds}, {"lhs", js(b.lhs)}, {"rhs", js(b.rhs)}}}};
  return {a.holds ? 0 : 1, j};
}

CliResult do_verify(const json& p, const Context& ctx, const CliOptions& opt) {
  if (p.contains("certificate")) {
    CompletionCertificate cert = certificate_from_json(p.at("certificate"));
    CertificateReport rep = verify_certificate(cert, ctx.depth, ctx);
    json j = {{"valid", rep.valid}, {"depth", ctx.depth}};
    if (!rep.valid) j["violation"] = rep.violation;
    if (rep.valid && cert.norm_sq) {
      Boundedness b = is_bounded(full_weights(cert));
      if (!b.norm_sq || *b.norm_sq != *cert.norm_sq) {
        j["valid"] = false;
        j["violation"] = "stated norm bound does not match the weights";
      }
    }
    return {j["valid"].get<bool>() ? 0 : 1, j};
  }
  std::string check = field(p, "check").get<std::string>();
  oracle::OracleConfig cfg;
  cfg.seed = opt.seed;
  cfg.grid_q = ctx.grid_q;
  if (check == "classify") {
    auto s = scv(field(p, "sequence"));
    Domain d = domain_from(p);
    PositivityVerdict lib = classify(s, d, ctx);
    PositivityVerdict grid = oracle::grid_classify(s, d, cfg);
    bool agree = lib.cls == grid.cls;
    bool coarse = !agree && lib.cls == Positivity::SingularlyPositive && grid.cls == Positivity::NotPositive;
    json j = {{"library", verdict_json(lib)}, {"oracle", verdict_json(grid)}, {"agree", agree}, {"coarse_grid", coarse}};
    return {agree ? 0 : 1, j};
  }
  if (check == "t-value") {
    auto s = scv(field(p, "sequence"));
    Domain d = domain_from(p);
    Threshold t = threshold(s, d, ctx);
    oracle::SweepResult sw = oracle::sweep_reciprocal(s, d, cfg);
    double tv = to_double(t.value);
    double tol = p.contains("tolerance") ? to_double(sc(p.at("tolerance"))) : 1e-4;
    bool agree = sw.samples > 0 && tv <= sw.min + tol * std::max(1.0, std::fabs(tv)) &&
                 sw.min - tv <= tol * std::max(1.0, std::fabs(tv));
    json j = {{"library", threshold_json(t)},
              {"oracle", {{"min", sw.min}, {"max", sw.max}, {"samples", sw.samples}}},
              {"agree", agree}};
    return {agree ? 0 : 1, j};
  }
  if (check == "roundtrip") {
    int trials = p.contains("trials") ? int(integer(p.at("trials"), "trials")) : 50;
    int failures = 0;
    json bad_cases = json::array();
    for (int i = 0; i < trials; ++i) {
      oracle::OracleConfig c = cfg;
      c.seed = oracle::trial_seed(opt.seed, std::uint64_t(i));
      AtomicMeasure mu = oracle::random_measure(c);
      long K = long(mu.size());
      auto s = moments(mu, 0, 2 * K - 1).values;
      bool ok = classify(s, Domain::ray(), ctx).strict() && index(s, Domain::ray(), ctx) == HalfInt::of(K);
      if (ok) {
        auto m = minimal_measure_ray(s, ctx);
        ok = std::holds_alternative<AtomicMeasure>(m) && std::get<AtomicMeasure>(m) == mu;
      }
      if (!ok) {
        ++failures;
        if (bad_cases.size() < 5) bad_cases.push_back(format_measure(mu));
      }
    }
    json j = {{"trials", trials}, {"failures", failures}, {"failed_measures", bad_cases}};
    return {failures == 0 ? 0 : 1, j};
  }
  bad("unknown verify check \"" + check + "\"");
}

}  // namespace

json certificate_to_json(const CompletionCertificate& cert) {
  const PartialWeights& pw = cert.data;
  json branches = json::array();
  for (std::size_t c = 0; c < cert.branches.size(); ++c) {
    const auto& b = cert.branches[c];
    const auto& d = pw.branches[c];
    json completed = json::array();
    for (const auto& v : b.completed_sq) completed.push_back(format_decimal(v));
    json completed_sq = json::array();
    for (const auto& v : b.completed_sq) completed_sq.push_back(b.measure.exact ? js(v) : json(format_decimal(v)));
    json completed_w = json::array();
    for (const auto& v : b.completed_sq) completed_w.push_back(format_decimal(from_double(std::sqrt(to_double(v)))));
    branches.push_back({{"count", d.count ? json(*d.count) : json("inf")},
                        {"l1_sq_total", js(d.l1_sq_total)},
                        {"weights_sq", jsv(d.higher_sq)},
                        {"K", b.K.str()},
                        {"sequence", {{"first_index", b.sequence.first_index}, {"values", jsv(b.sequence.values)}}},
                        {"measure", measure_json(b.measure)},
                        {"completed_weights_sq", completed_sq},
                        {"completed_weights", completed_w}});
  }
  json j = {{"kind", kind_name(cert.kind)},
            {"kappa", pw.kappa ? json(*pw.kappa) : json("inf")},
            {"p", pw.p},
            {"trunk_sq", jsv(pw.trunk_sq)},
            {"branches", branches}};
  if (cert.norm_sq) {
    j["norm_sq_bound"] = js(*cert.norm_sq);
    j["norm_bound"] = format_decimal(from_double(std::sqrt(to_double(*cert.norm_sq))));
  }
  if (cert.root_rho) j["root_rho"] = ca_json(*cert.root_rho);
  return j;
}

CompletionCertificate certificate_from_json(const json& j) {
  CompletionCertificate cert;
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "subnormal") cert.kind = CompletionCertificate::Kind::Subnormal;
  else if (kind == "che") cert.kind = CompletionCertificate::Kind::CHE;
  else bad("certificate kind must be subnormal or che");
  PartialWeights& pw = cert.data;
  pw.kappa = kappa_from(j);
  pw.p = integer(field(j, "p"), "p");
  pw.trunk_sq = scv(field(j, "trunk_sq"));
  for (const auto& b : field(j, "branches")) {
    BranchClass c;
    const json& n = field(b, "count");
    if (n.is_string() && n.get<std::string>() == "inf") c.count = std::nullopt;
    else c.count = integer(n, "count");
    c.l1_sq_total = sc(field(b, "l1_sq_total"));
    c.higher_sq = scv(field(b, "weights_sq"));
    pw.branches.push_back(c);
    BranchCertificate bc;
    bc.K = parse_half_int(field(b, "K").get<std::string>());
    if (b.contains("sequence")) {
      bc.sequence.first_index = integer(field(b.at("sequence"), "first_index"), "first_index");
      bc.sequence.values = scv(field(b.at("sequence"), "values"));
    }
    bc.measure = measure_from(field(b, "measure"));
    cert.branches.push_back(std::move(bc));
  }
  pw.validate();
  if (j.contains("norm_sq_bound")) cert.norm_sq = sc(j.at("norm_sq_bound"));
  return cert;
}

CliResult run_problem(const json& problem, const CliOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  CliResult r;
  try {
    std::string kind = field(problem, "kind").get<std::string>();
    Context ctx = context_from(problem, opt);
    if (kind == "classify") r = do_classify(problem, ctx);
    else if (kind == "principal") r = do_principal(problem, ctx);
    else if (kind == "t-value") r = do_t_value(problem, ctx);
    else if (kind == "backward") r = do_backward(problem, ctx);
    else if (kind == "ca") r = do_ca(problem, ctx);
    else if (kind == "subnormal" || kind == "che" || kind == "flat-che") r = do_solve(problem, ctx, kind);
    else if (kind == "probe-kappa-inf") r = do_probe(problem, ctx);
    else if (kind == "stampfli") r = do_stampfli(problem);
    else if (kind == "verify") r = do_verify(problem, ctx, opt);
    else bad("unknown kind \"" + kind + "\"");
    r.body["kind"] = kind;
    r.body["arithmetic"] = ctx.exact() ? "exact" : "float";
  } catch (const Error& e) {
    r.exit_code = 3;
    r.body = {{"error", {{"code", error_name(e.code())}, {"message", e.what()}}}};
  } catch (const json::exception& e) {
    r.exit_code = 3;
    r.body = {{"error", {{"code", "ParseError"}, {"message", e.what()}}}};
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.body["elapsed_ms"] = ms;
  return r;
}

CliResult run_text(const std::string& text, const CliOptions& opt) {
  json problem;
  try {
    problem = json::parse(text);
  } catch (const json::exception& e) {
    return {3, {{"error", {{"code", "ParseError"}, {"message", e.what()}}}}};
  }
  return run_problem(problem, opt);
}

namespace {

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

}  // namespace

int run_batch(const std::string& dir, const CliOptions& opt, unsigned threads, std::ostream& log) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && e.path().extension() == ".json" && name.find(".result.json") == std::string::npos)
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<int> codes(files.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      std::ifstream in(files[i]);
      CliResult r = run_text(read_all(in), opt);
      r.body["exit_code"] = r.exit_code;
      fs::path out = files[i];
      out.replace_extension(".result.json");
      std::ofstream(out) << dump(r.body, opt.pretty) << "\n";
      codes[i] = r.exit_code;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(1, files.size()))));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  json summary = json::array();
  int worst = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    summary.push_back({{"file", files[i].filename().string()}, {"exit_code", codes[i]}});
    worst = std::max(worst, codes[i]);
  }
  log << dump(json{{"batch", summary}}, opt.pretty) << "\n";
  return worst;
}

int main(int argc, char** argv) {
  CLI::App app{"momentkit: truncated moment problems and weighted shift completions"};
  std::string file, batch;
  bool exact = false, flt = false, as_json = false, pretty = false;
  double tolerance = 0;
  int depth = 0, grid_q = 0;
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("file", file, "problem file, or - for stdin");
  app.add_flag("--exact", exact, "rational arithmetic (default)");
  app.add_flag("--float", flt, "tolerance-based sign decisions");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "relative tolerance in float mode");
  auto* depth_opt = app.add_option("--depth", depth, "certificate verification depth");
  auto* grid_opt = app.add_option("--grid-q", grid_q, "dyadic grid depth for positivity fallbacks");
  app.add_option("--seed", seed, "seed for oracle checks");
  app.add_flag("--json", as_json, "compact JSON output (default)");
  app.add_flag("--pretty", pretty, "indented JSON output");
  auto* batch_opt = app.add_option("--batch", batch, "process every .json file in a directory");
  app.add_option("--threads", threads, "batch worker threads");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  CliOptions opt;
  if (exact && flt) {
    std::cout << json{{"error", {{"code", "ParseError"}, {"message", "--exact and --float are exclusive"}}}}.dump()
              << "\n";
    return 3;
  }
  if (exact) opt.mode = Arith::Exact;
  if (flt) opt.mode = Arith::Float;
  if (*tol_opt) opt.tolerance = tolerance;
  if (*depth_opt) opt.depth = depth;
  if (*grid_opt) opt.grid_q = grid_q;
  opt.seed = seed;
  opt.pretty = pretty && !as_json;
  if (*batch_opt) return run_batch(batch, opt, threads, std::cout);
  if (file.empty()) {
    std::cout << app.help() << "\n";
    return 3;
  }
  std::string text;
  if (file == "-") {
    text = read_all(std::cin);
  } else {
    std::ifstream in(file);
    if (!in) {
      std::cout << dump(json{{"error", {{"code", "ParseError"}, {"message", "cannot open " + file}}}}, opt.pretty)
                << "\n";
      return 3;
    }
    text = read_all(in);
  }
  CliResult r = run_text(text, opt);
  std::cout << dump(r.body, opt.pretty) << "\n";
  return r.exit_code;
}

}  // namespace momentkit::cli
