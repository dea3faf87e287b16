#include "ffmu/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ffmu/arith.hpp"
#include "ffmu/duality.hpp"
#include "ffmu/error.hpp"
#include "ffmu/prime_store.hpp"
#include "ffmu/prime_subset.hpp"
#include "ffmu/summatory.hpp"

namespace ffmu::cli {
namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::uint32_t q = 2;
  std::string ext_modulus;
  std::string table_path;
  std::string subset = "all";
  std::string format = "csv";
  std::string out_path;
  int workers = 0;
  std::uint64_t seed = 0;
  unsigned ceiling = 0;
  bool force = false;
  bool serial = false;
};

struct Params {
  unsigned degree = 1;
  unsigned n = 1;
  std::optional<unsigned> n_min;
  std::optional<unsigned> m;
  unsigned x = 1;
  std::optional<unsigned> x_min;
  unsigned max_degree = 1;
  std::vector<std::string> polys;
  std::string profile;
  std::string f_expr = "x";
  std::optional<unsigned> k_max;
  unsigned random = 0;
  std::string weight = "mu";
  std::string restriction = "none";
  std::string constant = "auto";
  std::vector<unsigned> ks{1, 2};
  std::string method = "both";
  std::optional<double> epsilon;
};

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

class Csv {
 public:
  explicit Csv(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << csv_field(fields[i]);
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

std::string num(const Rational& r) { return to_string(BigInt(r.get_num())); }
std::string den(const Rational& r) { return to_string(BigInt(r.get_den())); }

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err), field_(&resolve_field(cfg)) {
    options_.mode = cfg.serial ? Execution::kSerial : Execution::kParallel;
    options_.workers = cfg.workers;
    options_.ceiling = cfg.ceiling;
    options_.force = cfg.force;
  }

  const Field& field() const { return *field_; }
  const RunOptions& options() const { return options_; }
  bool json() const { return cfg_.format == "json"; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  /// Refuses degrees above the enumeration ceiling unless --force.
  void guard(unsigned degree) const { check_ceiling(*field_, degree, options_); }

  std::filesystem::path table_location() const {
    if (!cfg_.table_path.empty()) return cfg_.table_path;
    if (const char* dir = std::getenv("FFMU_TABLE_DIR"); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / ("ffmu-q" + std::to_string(field_->q()) + ".tbl");
    }
    return {};
  }

  const PrimeTable& table(unsigned degree) {
    degree = std::max(degree, 1U);
    guard(degree);
    if (table_ && table_->max_degree() >= degree) return *table_;
    const auto path = table_location();
    if (!cfg_.table_path.empty() && !std::filesystem::exists(path)) {
      throw Error(ErrorKind::kInvalidArgument, "table file " + path.string() + " not found");
    }
    if (!path.empty() && std::filesystem::exists(path)) {
      auto loaded = load_table(path, cfg_.ext_modulus);
      if (&loaded.field() != field_) {
        throw Error(ErrorKind::kFieldMismatch, "table " + path.string() + " is for another field");
      }
      if (loaded.max_degree() >= degree) {
        table_.emplace(std::move(loaded));
        return *table_;
      }
      err_ << "ffmu: table " << path.string() << " stops at degree " << loaded.max_degree()
           << ", building degree " << degree << " in memory\n";
    } else {
      err_ << "ffmu: building prime table q=" << field_->q() << " up to degree " << degree << "\n";
    }
    table_.emplace(*field_, degree, options_.mode);
    return *table_;
  }

  PrimeSubset subset() const { return PrimeSubset::parse(cfg_.subset, *field_); }

 private:
  static const Field& resolve_field(const RunConfig& cfg) {
    if (!cfg.ext_modulus.empty()) return Field::get(FieldSpec::with_modulus(cfg.q, cfg.ext_modulus));
    return Field::get(FieldSpec::builtin(cfg.q));
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  const Field* field_;
  RunOptions options_;
  std::optional<PrimeTable> table_;
};

Json doc(const char* schema, const char* ref) {
  Json j;
  j["schema"] = schema;
  j["paper_ref"] = ref;
  return j;
}

void finish(Session& s, const Json& j) { s.out() << j.dump(2) << '\n'; }

std::vector<unsigned> span_of(std::optional<unsigned> lo, unsigned hi, unsigned floor) {
  std::vector<unsigned> v;
  for (unsigned i = std::max(lo.value_or(hi), floor); i <= hi; ++i) v.push_back(i);
  return v;
}

// ---- subcommands -------------------------------------------------------

int run_primes(Session& s, const Params& p) {
  const auto& table = s.table(p.degree);
  const auto subset = s.subset();
  const BoundSubset bound(subset, table);
  const auto& list = table.primes(p.degree);
  const BigInt expected = prime_count_exact(s.field(), p.degree);
  if (s.json()) {
    Json j = doc("prime_list", "prime counting formula");
    j["q"] = s.field().q();
    j["degree"] = p.degree;
    j["subset"] = subset.text();
    j["count_all"] = list.size();
    j["count_formula"] = to_string(expected);
    j["count_subset"] = pi_S(bound, p.degree, table);
    Json arr = Json::array();
    for (const auto& rec : list) {
      if (!bound.contains(rec)) continue;
      arr.push_back({{"ordinal", rec.ordinal},
                     {"poly", rec.poly.to_string()},
                     {"symbolic", rec.poly.to_symbolic()}});
    }
    j["primes"] = arr;
    finish(s, j);
  } else {
    Csv csv(s.out());
    csv.row({"degree", "ordinal", "poly", "symbolic"});
    for (const auto& rec : list) {
      if (!bound.contains(rec)) continue;
      csv.row({std::to_string(rec.degree), std::to_string(rec.ordinal), rec.poly.to_string(),
               rec.poly.to_symbolic()});
    }
  }
  return kExitOk;
}

std::vector<MonicPoly> parse_polys(const Session& s, const Params& p) {
  if (p.polys.empty()) throw Error(ErrorKind::kInvalidArgument, "--poly is required");
  std::vector<MonicPoly> out;
  for (const auto& text : p.polys) out.push_back(parse_poly(text, s.field()));
  return out;
}

unsigned max_degree_of(const std::vector<MonicPoly>& polys) {
  unsigned d = 1;
  for (const auto& a : polys) d = std::max(d, a.degree());
  return d;
}

std::string join_degrees(const std::vector<unsigned>& v) {
  std::string out;
  for (unsigned d : v) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(d);
  }
  return out;
}

int run_factor(Session& s, const Params& p) {
  const auto polys = parse_polys(s, p);
  const auto& table = s.table(max_degree_of(polys));
  Json all = doc("factorization", "unique factorization in GF(q)[T]");
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"input", "prime", "degree", "multiplicity"});
  for (const auto& a : polys) {
    const auto f = factor(a, table);
    Json factors = Json::array();
    for (const auto& pp : f.factors) {
      if (s.json()) {
        factors.push_back({{"prime", pp.prime->poly.to_string()},
                           {"symbolic", pp.prime->poly.to_symbolic()},
                           {"degree", pp.prime->degree},
                           {"multiplicity", pp.multiplicity}});
      } else {
        csv.row({a.to_string(), pp.prime->poly.to_string(), std::to_string(pp.prime->degree),
                 std::to_string(pp.multiplicity)});
      }
    }
    rows.push_back({{"input", a.to_string()}, {"factors", factors}});
  }
  if (s.json()) {
    all["results"] = rows;
    finish(s, all);
  }
  return kExitOk;
}

int run_mu(Session& s, const Params& p) {
  const auto polys = parse_polys(s, p);
  const auto& table = s.table(max_degree_of(polys));
  const auto subset = s.subset();
  const BoundSubset bound(subset, table);
  Json all = doc("arithmetic_functions", "Moebius function and prime degree statistics");
  all["subset"] = subset.text();
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) {
    csv.row({"poly", "mu", "omega", "prime_factors_with_multiplicity", "degree_set", "delta_1",
             "Delta_1", "in_D_S"});
  }
  for (const auto& a : polys) {
    const auto f = factor(a, table);
    const DegreeData dd(f);
    const bool constant = a.degree() == 0;
    const bool ds = !constant && in_D_S(f, bound);
    if (s.json()) {
      Json q = Json::array();
      for (unsigned k = 1; k <= dd.omega(); ++k) q.push_back(q_S_k(f, bound, k));
      rows.push_back({{"poly", a.to_string()},
                      {"mu", mobius(f)},
                      {"omega", dd.omega()},
                      {"prime_factors_with_multiplicity", count_with_multiplicity(f)},
                      {"degree_set", dd.degree_set()},
                      {"delta_1", dd.smallest(1)},
                      {"Delta_1", dd.largest(1)},
                      {"in_D_S", ds},
                      {"Q_S", q}});
    } else {
      csv.row({a.to_string(), std::to_string(mobius(f)), std::to_string(dd.omega()),
               std::to_string(count_with_multiplicity(f)), join_degrees(dd.degree_set()),
               std::to_string(dd.smallest(1)), std::to_string(dd.largest(1)),
               ds ? "true" : "false"});
    }
  }
  if (s.json()) {
    all["results"] = rows;
    finish(s, all);
  }
  return kExitOk;
}

int run_duality(Session& s, const Params& p, std::uint64_t seed) {
  std::vector<DivisorProfile> profiles;
  if (!p.profile.empty()) profiles.push_back(DivisorProfile::parse(p.profile));
  if (!p.polys.empty()) {
    const auto polys = parse_polys(s, p);
    const auto& table = s.table(max_degree_of(polys));
    const auto subset = s.subset();
    const BoundSubset bound(subset, table);
    for (const auto& a : polys) {
      if (a.degree() == 0) throw Error(ErrorKind::kDomain, "duality needs a nonconstant monic");
      profiles.push_back(DivisorProfile::from_factorization(factor(a, table), bound));
    }
  }
  if (p.random > 0) {
    std::mt19937_64 rng(seed);
    for (unsigned i = 0; i < p.random; ++i) profiles.push_back(DivisorProfile::random(rng));
  }
  if (profiles.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "give --profile, --poly or --random");
  }

  bool passed = true;
  Json reports = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"profile", "k", "lhs", "rhs", "equal"});
  for (const auto& prof : profiles) {
    const auto f = FWeight::parse(p.f_expr, std::max(prof.max_degree(), 1U));
    const unsigned k_max = p.k_max.value_or(prof.omega() + 2);
    const auto report = verify_duality(prof, f, k_max);
    passed = passed && report.passed;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
      if (s.json()) {
        rows.push_back({{"k", row.k},
                        {"lhs", to_string(row.lhs)},
                        {"rhs", to_string(row.rhs)},
                        {"equal", row.equal}});
      } else {
        csv.row({report.profile, std::to_string(row.k), to_string(row.lhs), to_string(row.rhs),
                 row.equal ? "true" : "false"});
      }
    }
    reports.push_back({{"profile", report.profile}, {"rows", rows}, {"passed", report.passed}});
  }
  if (s.json()) {
    Json j = doc("duality_report", "higher-order duality identity");
    j["f"] = p.f_expr;
    j["reports"] = reports;
    j["passed"] = passed;
    finish(s, j);
  }
  return passed ? kExitOk : kExitMismatch;
}

Restriction parse_restriction(const std::string& text) {
  if (text == "none") return Restriction::none();
  if (text == "D_S" || text == "ds") return Restriction::d_s();
  for (const auto& [prefix, ge] : {std::pair{"delta1_eq", false}, std::pair{"delta1_ge", true}}) {
    const std::string pre = prefix;
    if (text.rfind(pre, 0) != 0 || text.size() < pre.size() + 2) continue;
    const char sep = text[pre.size()];
    if (sep != '_' && sep != ':') continue;
    const std::string digits = text.substr(pre.size() + 1);
    if (digits.find_first_not_of("0123456789") != std::string::npos) break;
    const unsigned n = static_cast<unsigned>(std::stoul(digits));
    return ge ? Restriction::delta1_ge(n) : Restriction::delta1_eq(n);
  }
  throw Error(ErrorKind::kParse, "unknown restriction '" + text +
                                     "' (none | D_S | delta1_eq_<n> | delta1_ge_<n>)");
}

int run_series(Session& s, const Params& p) {
  SeriesWeight weight;
  if (p.weight == "mu") {
    weight = SeriesWeight::kMu;
  } else if (p.weight == "mu_omega") {
    weight = SeriesWeight::kMuOmega;
  } else {
    throw Error(ErrorKind::kParse, "unknown weight '" + p.weight + "' (mu | mu_omega)");
  }
  std::optional<bool> constant;
  if (p.constant == "yes") constant = true;
  if (p.constant == "no") constant = false;
  const auto restriction = parse_restriction(p.restriction);
  const auto& table = s.table(p.x);
  const auto subset = s.subset();
  const auto ledger = partial_sum(weight, restriction, subset, table, p.x, s.options(), constant);
  const auto xs = span_of(p.x_min.has_value() ? p.x_min : std::optional<unsigned>(1), p.x, 1);
  if (s.json()) {
    Json j = doc("series_ledger", "weighted Moebius partial sums");
    j["q"] = ledger.q;
    j["subset"] = ledger.subset;
    j["weight"] = to_string(ledger.weight);
    j["restriction"] = to_string(ledger.restriction);
    j["include_constant"] = ledger.include_constant;
    Json rows = Json::array();
    for (unsigned x : xs) {
      const auto& v = ledger.at(x);
      rows.push_back({{"x", x},
                      {"numerator", num(v)},
                      {"denominator", den(v)},
                      {"float_value", v.get_d()},
                      {"layer_sum", ledger.layer_sums[x]}});
    }
    j["rows"] = rows;
    finish(s, j);
  } else {
    Csv csv(s.out());
    csv.row({"x", "numerator", "denominator", "float_value"});
    for (unsigned x : xs) {
      const auto& v = ledger.at(x);
      csv.row({std::to_string(x), num(v), den(v), fmt_double(v.get_d())});
    }
  }
  return kExitOk;
}

int run_qsum(Session& s, const Params& p) {
  if (p.ks.empty()) throw Error(ErrorKind::kInvalidArgument, "--k needs at least one value");
  const unsigned k_max = *std::max_element(p.ks.begin(), p.ks.end());
  const auto& table = s.table(p.n);
  const auto subset = s.subset();
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"n", "k", "subset", "sum", "q_to_n", "ratio"});
  for (unsigned n : span_of(p.n_min, p.n, 1)) {
    const auto sums = q_sums(table, subset, n, k_max, s.options());
    const BigInt qn = big_pow(s.field().q(), n);
    for (unsigned k : p.ks) {
      if (k == 0) throw Error(ErrorKind::kDomain, "k must be >= 1");
      const BigInt& sum = sums[k - 1];
      const double ratio = Rational(sum, qn).get_d();
      if (s.json()) {
        rows.push_back({{"n", n},
                        {"k", k},
                        {"subset", subset.text()},
                        {"sum", to_string(sum)},
                        {"q_to_n", to_string(qn)},
                        {"ratio", ratio}});
      } else {
        csv.row({std::to_string(n), std::to_string(k), subset.text(), to_string(sum),
                 to_string(qn), fmt_double(ratio)});
      }
    }
  }
  if (s.json()) {
    Json j = doc("q_sums", "averages of Q_S^(k) over degree-n monics");
    j["q"] = s.field().q();
    if (const auto& d = subset.declared_density()) j["density"] = to_string(*d);
    j["rows"] = rows;
    finish(s, j);
  }
  return kExitOk;
}

int run_smooth(Session& s, const Params& p) {
  const bool want_enum = p.method == "enum" || p.method == "both";
  const bool want_rec = p.method == "recurrence" || p.method == "both";
  if (!want_enum && !want_rec) {
    throw Error(ErrorKind::kParse, "unknown method '" + p.method + "' (enum | recurrence | both)");
  }
  if (p.epsilon && !(*p.epsilon > 0.0 && *p.epsilon < 1.0)) {
    throw Error(ErrorKind::kDomain, "--epsilon must lie in (0, 1)");
  }
  const std::uint32_t q = s.field().q();
  if (want_enum) s.table(p.n);
  bool agree = true;
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) {
    std::vector<std::string> head{"n", "m", "psi1", "psi2", "method"};
    if (want_enum && want_rec) head.push_back("agree");
    if (p.epsilon) {
      for (const char* h : {"psi2_bound", "psi2_ratio", "psi1_bound", "psi1_ratio"}) {
        head.push_back(h);
      }
    }
    csv.row(head);
  }
  for (unsigned n : span_of(p.n_min, p.n, 0)) {
    std::optional<SmoothTable> en;
    std::optional<SmoothTable> rec;
    if (want_enum) en = smooth_table_enum(s.table(n), n, s.options());
    if (want_rec) rec = smooth_table_recurrence(q, n);
    const SmoothTable& shown = rec ? *rec : *en;
    const unsigned m_lo = p.m ? std::min(*p.m, n) : 0;
    const unsigned m_hi = p.m ? std::min(*p.m, n) : n;
    for (unsigned m = m_lo; m <= m_hi; ++m) {
      const bool same = !(en && rec) || (en->psi1[m] == rec->psi1[m] && en->psi2[m] == rec->psi2[m]);
      agree = agree && same;
      const char* method = en && rec ? "both" : (rec ? "recurrence" : "enumeration");
      std::optional<Psi2BoundReport> bound;
      if (p.epsilon && n >= 1) bound = psi2_bound_diagnostic(q, n, m, *p.epsilon);
      if (s.json()) {
        Json row{{"n", n},
                 {"m", m},
                 {"psi1", to_string(shown.psi1[m])},
                 {"psi2", to_string(shown.psi2[m])},
                 {"method", method}};
        if (en && rec) row["agree"] = same;
        if (bound) {
          row["advisory"] = {{"epsilon", bound->epsilon},
                             {"psi2_bound", bound->psi2_bound},
                             {"psi2_ratio", bound->psi2_ratio},
                             {"psi1_bound", bound->psi1_bound},
                             {"psi1_ratio", bound->psi1_ratio}};
        }
        rows.push_back(row);
      } else {
        std::vector<std::string> r{std::to_string(n), std::to_string(m), to_string(shown.psi1[m]),
                                   to_string(shown.psi2[m]), method};
        if (en && rec) r.push_back(same ? "true" : "false");
        if (p.epsilon) {
          if (bound) {
            for (double v : {bound->psi2_bound, bound->psi2_ratio, bound->psi1_bound,
                             bound->psi1_ratio}) {
              r.push_back(fmt_double(v));
            }
          } else {
            r.insert(r.end(), 4, "");
          }
        }
        csv.row(r);
      }
    }
  }
  if (s.json()) {
    Json j = doc("smooth_counts", "smooth and second-largest-degree smooth counts");
    j["q"] = q;
    j["rows"] = rows;
    if (p.epsilon) j["advisory_only"] = true;
    finish(s, j);
  }
  return agree ? kExitOk : kExitMismatch;
}

int run_wcount(Session& s, const Params& p) {
  const bool want_enum = p.method == "enum" || p.method == "both";
  const bool want_formula = p.method == "formula" || p.method == "both";
  if (!want_enum && !want_formula) {
    throw Error(ErrorKind::kParse, "unknown method '" + p.method + "' (enum | formula | both)");
  }
  const std::uint32_t q = s.field().q();
  if (want_enum) s.table(p.x);
  bool agree = true;
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"x", "w_enum", "w_formula", "q_to_x", "decay"});
  for (unsigned x : span_of(p.x_min, p.x, 1)) {
    std::optional<BigInt> en;
    std::optional<BigInt> formula;
    if (want_enum) en = w_count_enum(s.table(x), x, s.options());
    if (want_formula) formula = w_count_formula(q, x);
    if (en && formula) agree = agree && *en == *formula;
    const BigInt& w = formula ? *formula : *en;
    const BigInt qx = big_pow(q, x);
    Rational scaled(w * x, qx);
    scaled.canonicalize();
    const double decay = std::abs(scaled.get_d() - 1.0);
    const std::string e = en ? to_string(*en) : "";
    const std::string fo = formula ? to_string(*formula) : "";
    if (s.json()) {
      Json row{{"x", x}, {"q_to_x", to_string(qx)}, {"decay", decay}};
      if (en) row["w_enum"] = e;
      if (formula) row["w_formula"] = fo;
      rows.push_back(row);
    } else {
      csv.row({std::to_string(x), e, fo, to_string(qx), fmt_double(decay)});
    }
  }
  if (s.json()) {
    Json j = doc("w_counts", "count of monics with one prime degree");
    j["q"] = q;
    j["rows"] = rows;
    j["agree"] = agree;
    finish(s, j);
  }
  return agree ? kExitOk : kExitMismatch;
}

int emit_identity_rows(Session& s, const char* schema, const char* ref, const char* index_name,
                       const std::vector<std::pair<unsigned, IdentityCheck>>& checks,
                       const std::string& subset) {
  bool passed = true;
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) {
    std::vector<std::string> head{index_name};
    if (!subset.empty()) head.push_back("subset");
    for (const char* h : {"lhs", "rhs", "equal"}) head.push_back(h);
    csv.row(head);
  }
  for (const auto& [i, c] : checks) {
    passed = passed && c.equal;
    if (s.json()) {
      rows.push_back({{index_name, i},
                      {"lhs", to_string(c.lhs)},
                      {"rhs", to_string(c.rhs)},
                      {"equal", c.equal}});
    } else {
      std::vector<std::string> r{std::to_string(i)};
      if (!subset.empty()) r.push_back(subset);
      r.push_back(to_string(c.lhs));
      r.push_back(to_string(c.rhs));
      r.push_back(c.equal ? "true" : "false");
      csv.row(r);
    }
  }
  if (s.json()) {
    Json j = doc(schema, ref);
    j["q"] = s.field().q();
    if (!subset.empty()) j["subset"] = subset;
    j["rows"] = rows;
    j["passed"] = passed;
    finish(s, j);
  }
  return passed ? kExitOk : kExitMismatch;
}

int run_landau2(Session& s, const Params& p) {
  s.table(p.x);
  std::vector<std::pair<unsigned, IdentityCheck>> checks;
  for (unsigned x : span_of(p.x_min, p.x, 1)) {
    checks.emplace_back(x, finite_landau2_identity(s.table(x), x, s.options()));
  }
  return emit_identity_rows(s, "landau2_identity", "finite mu*Omega partial sum against -W(x)/q^x",
                            "x", checks, "");
}

int run_equivalence(Session& s, const Params& p) {
  const auto subset = s.subset();
  s.table(p.n);
  std::vector<std::pair<unsigned, IdentityCheck>> checks;
  for (unsigned n : span_of(p.n_min, p.n, 1)) {
    checks.emplace_back(n, equivalence_identity(s.table(n), subset, n, s.options()));
  }
  return emit_identity_rows(s, "equivalence_identity",
                            "D(S) partial sum against Q_S^(2) - Q_S^(1) average", "n", checks,
                            subset.text());
}

int run_mertens(Session& s, const Params& p) {
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"n", "product", "product_float", "reference", "ratio"});
  for (unsigned n : span_of(p.n_min, p.n, 0)) {
    const auto r = mertens(s.field().q(), n);
    if (s.json()) {
      rows.push_back({{"n", n},
                      {"product", to_string(r.product)},
                      {"product_float", r.product.get_d()},
                      {"reference", r.reference},
                      {"ratio", r.ratio}});
    } else {
      csv.row({std::to_string(n), to_string(r.product), fmt_double(r.product.get_d()),
               fmt_double(r.reference), fmt_double(r.ratio)});
    }
  }
  if (s.json()) {
    Json j = doc("mertens", "Mertens product against n e^gamma");
    j["q"] = s.field().q();
    j["gamma"] = kEulerGamma;
    j["rows"] = rows;
    finish(s, j);
  }
  return kExitOk;
}

int run_density(Session& s, const Params& p) {
  const auto& table = s.table(p.max_degree);
  const auto subset = s.subset();
  const auto stats = density_error_stats(subset, table);
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"d", "pi_s", "pi_p", "ratio", "e_s", "v_s", "truncated_at"});
  for (const auto& r : stats) {
    if (r.d > p.max_degree) break;
    const double ratio = r.pi_p == 0 ? 0.0 : static_cast<double>(r.pi_s) / r.pi_p;
    if (s.json()) {
      rows.push_back({{"d", r.d},
                      {"pi_s", r.pi_s},
                      {"pi_p", r.pi_p},
                      {"ratio", ratio},
                      {"e_s", to_string(r.e_s)},
                      {"v_s", to_string(r.v_s)},
                      {"truncated_at", r.truncated_at}});
    } else {
      csv.row({std::to_string(r.d), std::to_string(r.pi_s), std::to_string(r.pi_p),
               fmt_double(ratio), to_string(r.e_s), to_string(r.v_s),
               std::to_string(r.truncated_at)});
    }
  }
  if (s.json()) {
    Json j = doc("density_error_stats", "density error sup statistics");
    j["q"] = s.field().q();
    j["subset"] = subset.text();
    j["density"] = to_string(subset.require_density());
    j["rows"] = rows;
    finish(s, j);
  }
  return kExitOk;
}

int run_table_build(Session& s, const Params& p) {
  const auto path = s.table_location();
  if (path.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "table build needs --table or FFMU_TABLE_DIR");
  }
  s.guard(p.max_degree);
  s.err() << "ffmu: building prime table q=" << s.field().q() << " up to degree " << p.max_degree
          << "\n";
  const PrimeTable table(s.field(), p.max_degree, s.options().mode);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  save_table(table, path);
  Csv csv(s.out());
  Json rows = Json::array();
  if (!s.json()) csv.row({"d", "count"});
  for (unsigned d = 1; d <= table.max_degree(); ++d) {
    if (s.json()) {
      rows.push_back({{"d", d}, {"count", table.count(d)}});
    } else {
      csv.row({std::to_string(d), std::to_string(table.count(d))});
    }
  }
  if (s.json()) {
    Json j = doc("prime_table", "prime counting formula");
    j["q"] = s.field().q();
    j["max_degree"] = table.max_degree();
    j["rows"] = rows;
    finish(s, j);
  }
  return kExitOk;
}

int run_table_verify(Session& s) {
  const auto path = s.table_location();
  if (path.empty() || !std::filesystem::exists(path)) {
    throw Error(ErrorKind::kInvalidArgument, "table file '" + path.string() + "' not found");
  }
  const auto table = load_table(path, [&] {
    const auto& spec = s.field().spec();
    if (spec.modulus.empty()) return std::string();
    std::string digits;
    for (auto c : spec.modulus) digits += std::to_string(c);
    return digits;
  }());
  bool ok = true;
  Json rows = Json::array();
  Csv csv(s.out());
  if (!s.json()) csv.row({"d", "count", "expected", "irreducible"});
  for (unsigned d = 1; d <= table.max_degree(); ++d) {
    const BigInt expected = prime_count_exact(table.field(), d);
    bool irreducible = true;
    for (const auto& rec : table.primes(d)) irreducible = irreducible && is_irreducible(rec.poly);
    const bool row_ok = irreducible && to_big(table.count(d)) == expected;
    ok = ok && row_ok;
    if (s.json()) {
      rows.push_back({{"d", d},
                      {"count", table.count(d)},
                      {"expected", to_string(expected)},
                      {"irreducible", irreducible}});
    } else {
      csv.row({std::to_string(d), std::to_string(table.count(d)), to_string(expected),
               irreducible ? "true" : "false"});
    }
  }
  if (s.json()) {
    Json j = doc("prime_table_check", "prime counting formula");
    j["q"] = table.field().q();
    j["max_degree"] = table.max_degree();
    j["rows"] = rows;
    j["passed"] = ok;
    finish(s, j);
  }
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Params p;

  CLI::App app{"Exact Moebius summatory experiments over GF(q)[T]", "ffmu"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--q", cfg.q, "Field size (prime or prime power)")->capture_default_str();
  app.add_option("--ext-modulus", cfg.ext_modulus,
                 "Irreducible modulus over GF(p) for q = p^e, leading digit first");
  app.add_option("--table", cfg.table_path, "Prime table cache file");
  app.add_option("--subset", cfg.subset, "Prime subset spec")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "Write results here instead of stdout");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized inputs")->capture_default_str();
  app.add_option("--ceiling", cfg.ceiling, "Enumeration degree ceiling")
      ->check(CLI::PositiveNumber);
  app.add_flag("--force", cfg.force, "Ignore the enumeration ceiling");
  app.add_flag("--serial", cfg.serial, "Use the single-threaded reference kernels");

  std::map<std::string, std::function<int(Session&)>> handlers;
  const auto sub = [&](const char* name, const char* help, std::function<int(Session&)> fn) {
    handlers[name] = std::move(fn);
    return app.add_subcommand(name, help);
  };

  auto* primes = sub("primes", "List monic irreducibles of one degree",
                     [&](Session& s) { return run_primes(s, p); });
  primes->add_option("--degree", p.degree)->required();

  auto* fac = sub("factor", "Factor monic polynomials", [&](Session& s) { return run_factor(s, p); });
  fac->add_option("--poly", p.polys)->required();

  auto* mu = sub("mu", "Moebius function and degree statistics",
                 [&](Session& s) { return run_mu(s, p); });
  mu->add_option("--poly", p.polys)->required();

  auto* dual = sub("duality", "Check the duality identity on divisor profiles",
                   [&](Session& s) { return run_duality(s, p, cfg.seed); });
  dual->add_option("--profile", p.profile, "e.g. \"d:1,S d:2,N*3\"");
  dual->add_option("--poly", p.polys);
  dual->add_option("--random", p.random, "Number of seeded random profiles");
  dual->add_option("--f", p.f_expr, "Weight f with f(0)=0: x, x^2, 3x^2-x, ind, zero")
      ->capture_default_str();
  dual->add_option("--kmax", p.k_max);

  auto* series = sub("series", "Exact partial sums of weighted Moebius series",
                     [&](Session& s) { return run_series(s, p); });
  series->add_option("--x", p.x)->required();
  series->add_option("--x-min", p.x_min);
  series->add_option("--weight", p.weight, "mu | mu_omega")->capture_default_str();
  series->add_option("--restriction", p.restriction,
                     "none | D_S | delta1_eq_<n> | delta1_ge_<n>")
      ->capture_default_str();
  series->add_option("--constant", p.constant, "Include A = 1")
      ->check(CLI::IsMember({"auto", "yes", "no"}))
      ->capture_default_str();

  auto* qsum = sub("qsum", "Sums of Q_S^(k) over degree-n monics",
                   [&](Session& s) { return run_qsum(s, p); });
  qsum->add_option("--n", p.n)->required();
  qsum->add_option("--n-min", p.n_min);
  qsum->add_option("--k", p.ks)->capture_default_str();

  auto* smooth = sub("smooth", "Smooth counts Psi_1 and Psi_2",
                     [&](Session& s) { return run_smooth(s, p); });
  smooth->add_option("--n", p.n)->required();
  smooth->add_option("--n-min", p.n_min);
  smooth->add_option("--m", p.m);
  smooth->add_option("--method", p.method, "enum | recurrence | both")->capture_default_str();
  smooth->add_option("--epsilon", p.epsilon, "Add the advisory bound comparison");

  auto* wcount = sub("wcount", "Monics whose prime factors share one degree",
                     [&](Session& s) { return run_wcount(s, p); });
  wcount->add_option("--x", p.x)->required();
  wcount->add_option("--x-min", p.x_min);
  wcount->add_option("--method", p.method, "enum | formula | both")->capture_default_str();

  auto* landau = sub("landau2-identity", "mu*Omega partial sum against -W(x)/q^x",
                     [&](Session& s) { return run_landau2(s, p); });
  landau->add_option("--x", p.x)->required();
  landau->add_option("--x-min", p.x_min);

  auto* equiv = sub("equivalence", "D(S) partial sum against the Q_S difference",
                    [&](Session& s) { return run_equivalence(s, p); });
  equiv->add_option("--n", p.n)->required();
  equiv->add_option("--n-min", p.n_min);

  auto* mert = sub("mertens", "Mertens product", [&](Session& s) { return run_mertens(s, p); });
  mert->add_option("--n", p.n)->required();
  mert->add_option("--n-min", p.n_min);

  auto* density = sub("density-stats", "Density error statistics of a subset",
                      [&](Session& s) { return run_density(s, p); });
  density->add_option("--max-degree", p.max_degree)->required();

  auto* table = app.add_subcommand("table", "Prime table cache");
  table->require_subcommand(1);
  auto* build = table->add_subcommand("build", "Build and save a prime table");
  build->add_option("--max-degree", p.max_degree)->required();
  auto* verify = table->add_subcommand("verify", "Check a saved prime table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ffmu: " << e.what() << "\n";
    return kExitUsage;
  }

  std::function<int(Session&)> handler;
  for (auto* s : app.get_subcommands()) {
    if (s == table) {
      if (build->parsed()) handler = [&](Session& ss) { return run_table_build(ss, p); };
      if (verify->parsed()) handler = [&](Session& ss) { return run_table_verify(ss); };
    } else {
      handler = handlers.at(s->get_name());
    }
  }

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    Session session(cfg, buffer, err);
    code = handler(session);
  } catch (const Error& e) {
    err << "ffmu: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ffmu: " << e.what() << "\n";
    return kExitUsage;
  }

  if (cfg.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      err << "ffmu: cannot write " << cfg.out_path << "\n";
      return kExitUsage;
    }
    file << buffer.str();
  }
  return code;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace ffmu::cli
