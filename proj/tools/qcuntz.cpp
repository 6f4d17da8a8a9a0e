// qcuntz: build, verify, decompose and classify truncated representations.
//
// Exit status: 0 when every check passes, 1 on a failed or inconclusive
// check (or a rejected wold input), 2 on invalid input.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcuntz/analysis.hpp"
#include "qcuntz/classify.hpp"
#include "qcuntz/error.hpp"
#include "qcuntz/io.hpp"
#include "qcuntz/wick.hpp"
#include "qcuntz/wold.hpp"

using namespace qcuntz;
using io::Json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct Config {
  std::string subcommand;
  std::string family = "fock1";
  double q = 0.5;
  int n = 1;
  int j = 1;
  double x = 0.0;
  double phi = 0.0;
  int L = 0;
  int s_min = 0;
  int s_max = 0;
  double tol = 1e-10;
  double grouping_tol = 1e-8;
  double x0 = 0.0;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  bool timing = false;

  // verify
  double corrupt = 0.0;
  int intervals = 20;
  int series_terms = 20;
  // wold
  std::string input;
  // classify / normalize / wick
  std::string spec1, spec2;
  double y = 0.0;
  std::string expr;
  std::optional<double> q_value;
};

struct Output {
  Json doc;
  std::vector<std::vector<std::string>> csv;  // first row is the header
  int exit_code = kExitPass;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

double resolved_x0(const Config& c) { return c.x0 > 0.0 ? c.x0 : classify::default_x0(c.q); }

RepSpec spec_from(const Config& c) {
  const auto fam = family_from_name(c.family);
  if (!fam) throw Error(ErrorCode::InvalidSpec, "unknown family '" + c.family + "'");
  RepSpec s;
  switch (*fam) {
    case Family::FockQ1: s = RepSpec::fock_q1(c.q); break;
    case Family::Circle: s = RepSpec::circle(c.q, c.phi); break;
    case Family::LineZ: s = RepSpec::line_z(c.q, c.x); break;
    case Family::FockQn: s = RepSpec::fock_qn(c.q, c.n); break;
    case Family::UnboundedXJ: s = RepSpec::unbounded_xj(c.q, c.n, c.j, c.x); break;
    case Family::BoundedPhiJ: s = RepSpec::bounded_phi_j(c.q, c.n, c.j, c.phi); break;
  }
  s.validate();
  return s;
}

Json config_json(const Config& c) {
  Json j{{"subcommand", c.subcommand}};
  const bool family_cmd = c.subcommand == "build" || c.subcommand == "verify";
  if (family_cmd) {
    const RepSpec s = spec_from(c);
    j["spec"] = io::to_json(s);
    j["truncation"] = io::to_json(TruncationParams{c.L, c.s_min, c.s_max});
  }
  if (c.subcommand == "verify") {
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["intervals"] = c.intervals;
    j["series_terms"] = c.series_terms;
    j["corrupt"] = c.corrupt;
  }
  if (c.subcommand == "wold") {
    j["input"] = c.input;
    j["tol"] = c.tol;
    j["grouping_tol"] = c.grouping_tol;
    j["x0"] = c.x0 > 0.0 ? Json(c.x0) : Json("default 2/(1-q)");
  }
  if (c.subcommand == "classify") {
    j["q"] = c.q;
    j["n"] = c.n;
    j["spec1"] = c.spec1;
    j["spec2"] = c.spec2;
    j["x0"] = resolved_x0(c);
  }
  if (c.subcommand == "normalize") {
    j["q"] = c.q;
    j["x0"] = resolved_x0(c);
    j["y"] = c.y;
  }
  if (c.subcommand == "wick") {
    j["n"] = c.n;
    j["expr"] = c.expr;
    j["q"] = c.q_value ? Json(*c.q_value) : Json(nullptr);
  }
  j["format"] = c.format;
  j["out"] = c.out.empty() ? Json("-") : Json(c.out);
  return j;
}

Output cmd_build(const Config& c) {
  const OperatorFamily f = build_generators(spec_from(c), {c.L, c.s_min, c.s_max});
  Output o;
  o.doc = io::family_document(f);
  o.csv.push_back({"generator", "row", "col", "re", "im"});
  for (int k = 1; k <= f.n(); ++k) {
    for (std::size_t col = 0; col < f.dim(); ++col) {
      for (const Entry& e : f.A(k).column(col)) {
        o.csv.push_back({std::to_string(k), std::to_string(e.row), std::to_string(col),
                         num(e.value.real()), num(e.value.imag())});
      }
    }
  }
  return o;
}

std::vector<analysis::ResidualReport> run_checks(const Config& c, const OperatorFamily& f,
                                                 Json& skipped, Json& extras) {
  using namespace analysis;
  std::vector<ResidualReport> reports;
  reports.push_back(relation_residuals(f, c.tol));
  std::mt19937_64 rng(c.seed);
  for (int k = 1; k <= f.n(); ++k) {
    reports.push_back(check_shift_identity(f, k, sample_intervals(f, k, c.intervals, rng), c.tol));
  }
  reports.push_back(check_structure_bc(f, c.tol));
  const Family fam = f.spec().family;
  if (fam == Family::FockQn || fam == Family::UnboundedXJ || fam == Family::BoundedPhiJ) {
    reports.push_back(check_eigenvalue_laws(f, c.tol));
  } else {
    skipped.push_back(Json{{"check", "eigenvalue_laws"}, {"reason", "family has no word labels"}});
  }
  Json spectra = Json::array();
  for (int k = 1; k <= f.n(); ++k) {
    SpectrumReport s = spectrum_check(f, k, c.tol);
    spectra.push_back(Json{{"k", k}, {"computed", s.computed}, {"predicted", s.predicted}});
    reports.push_back(std::move(s.report));
  }
  extras["spectra"] = std::move(spectra);

  int max_depth = 0;
  for (std::size_t v = 0; v < f.dim(); ++v) max_depth = std::max(max_depth, f.basis().depth(v));
  const int K = std::max(1, std::min(c.series_terms, max_depth - 1));
  Json series = Json::array();
  for (int k = 1; k <= f.n(); ++k) {
    if (!is_bounded_direction(f.spec(), k)) {
      skipped.push_back(Json{{"check", "series k=" + std::to_string(k)},
                             {"reason", "unbounded direction"}});
      continue;
    }
    SeriesReport s = series_number_operator(f, k, K, c.tol);
    series.push_back(Json{{"k", k},
                          {"terms", K},
                          {"tail_bound", s.tail_bound},
                          {"linear_form_deviation", s.linear_form_deviation},
                          {"linear_form_discrepancy", s.linear_form_discrepancy}});
    reports.push_back(std::move(s.against_c_sq));
    reports.push_back(std::move(s.sqrt_form));
  }
  extras["series"] = std::move(series);
  return reports;
}

Output cmd_verify(const Config& c) {
  const RepSpec spec = spec_from(c);
  const TruncationParams trunc{c.L, c.s_min, c.s_max};
  std::optional<Perturbation> perturb;
  if (c.corrupt != 0.0) {
    const Basis b = build_basis(spec, trunc);
    const auto inner = b.interior(2);
    perturb = Perturbation{1, inner.empty() ? 0 : inner[inner.size() / 2], c.corrupt};
  }
  const OperatorFamily f = build_generators(spec, trunc, perturb);
  Json skipped = Json::array(), extras = Json::object();
  const auto reports = run_checks(c, f, skipped, extras);

  bool any_fail = false, any_inconclusive = false;
  Json checks = Json::array();
  Output o;
  o.csv.push_back({"check", "status", "max_residual", "tolerance", "vectors_checked", "note"});
  for (const auto& r : reports) {
    any_fail = any_fail || r.status == analysis::Status::Fail;
    any_inconclusive = any_inconclusive || r.status == analysis::Status::Inconclusive;
    checks.push_back(io::to_json(r));
    o.csv.push_back({r.check, analysis::to_string(r.status), num(r.max_residual), num(r.tolerance),
                     std::to_string(r.vectors_checked), r.note});
  }
  const char* status = any_fail ? "fail" : any_inconclusive ? "inconclusive" : "pass";
  o.doc = Json{{"status", status},
               {"pass", !any_fail && !any_inconclusive},
               {"basis_size", f.dim()},
               {"checks", std::move(checks)},
               {"skipped", std::move(skipped)}};
  if (perturb) {
    o.doc["corrupted"] = Json{{"generator", perturb->generator},
                              {"ordinal", perturb->ordinal},
                              {"delta", perturb->delta}};
  }
  for (auto& [key, value] : extras.items()) o.doc[key] = value;
  o.exit_code = (any_fail || any_inconclusive) ? kExitFail : kExitPass;
  return o;
}

Output cmd_wold(const Config& c) {
  std::ifstream in(c.input);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + c.input);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  const analysis::MatrixSystem sys = io::system_from_json(doc);
  analysis::WoldOptions opt{c.tol, c.grouping_tol, c.x0};
  Output o;
  o.csv.push_back({"generator", "block", "size", "x", "shift"});
  Json per = Json::array();
  try {
    for (int k = 1; k <= sys.n; ++k) {
      const auto w = analysis::q_wold(sys.A[static_cast<std::size_t>(k - 1)], sys.q, sys.interior, opt);
      per.push_back(io::to_json(w));
      const std::string g = std::to_string(k);
      for (const auto& b : w.fock_blocks) o.csv.push_back({g, "fock", std::to_string(b.labels.size()), "", ""});
      if (w.unitary_block.present) {
        o.csv.push_back({g, "unitary", std::to_string(w.unitary_block.labels.size()), "", ""});
      }
      for (const auto& b : w.unbounded_blocks) {
        o.csv.push_back({g, "unbounded", std::to_string(b.labels.size()), num(b.x), std::to_string(b.shift)});
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RejectInput && e.code() != ErrorCode::UnclassifiedRemainder) throw;
    o.doc = Json{{"status", e.code() == ErrorCode::RejectInput ? "reject-input" : "unclassified-remainder"},
                 {"pass", false},
                 {"message", e.what()}};
    o.csv = {{"status", "message"}, {o.doc["status"].get<std::string>(), e.what()}};
    o.exit_code = kExitFail;
    return o;
  }
  o.doc = Json{{"status", "pass"}, {"pass", true}, {"q", sys.q}, {"n", sys.n}, {"generators", per}};
  try {
    o.doc["recovered"] = io::to_json(classify::detect_parameters(sys, opt).spec);
  } catch (const Error& e) {
    o.doc["recovered"] = nullptr;
    o.doc["recovered_note"] = e.what();
  }
  return o;
}

Output cmd_classify(const Config& c) {
  const RepSpec a = classify::parse_spec_string(c.spec1, c.q, c.n);
  const RepSpec b = classify::parse_spec_string(c.spec2, c.q, c.n);
  const auto d = classify::same_rep(a, b, resolved_x0(c));
  Output o;
  o.doc = io::to_json(d);
  o.csv = {{"equivalent", "kind", "detail"},
           {d.equivalent ? "true" : "false", d.certificate.kind, d.certificate.detail}};
  return o;
}

Output cmd_normalize(const Config& c) {
  const auto p = classify::normalize_x(c.y, c.q, resolved_x0(c));
  Output o;
  o.doc = io::to_json(p);
  o.csv = {{"x", "shift", "input"}, {num(p.x), std::to_string(p.shift), num(p.input)}};
  return o;
}

Output cmd_wick(const Config& c) {
  const wick::WickExpr nf = wick::normal_form(wick::parse_expr(c.expr, c.n));
  Output o;
  Json terms = Json::array();
  o.csv.push_back({"creators", "annihilators", "coefficient", "value"});
  for (const auto& m : nf.monomials) {
    Json t{{"creators", to_string(m.creators)},
           {"annihilators", to_string(m.annihilators)},
           {"coefficient", wick::to_string(m.coeff)}};
    std::string value;
    if (c.q_value) {
      t["value"] = m.coeff.evaluate(*c.q_value);
      value = num(m.coeff.evaluate(*c.q_value));
    }
    terms.push_back(std::move(t));
    o.csv.push_back({to_string(m.creators), to_string(m.annihilators), wick::to_string(m.coeff), value});
  }
  o.doc = Json{{"normal_form", wick::to_string(nf)}, {"monomials", std::move(terms)}};
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void emit(const Config& c, Output& o, double seconds) {
  std::ostringstream text;
  if (c.format == "csv") {
    for (const auto& row : o.csv) {
      for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << csv_field(row[i]);
      text << '\n';
    }
  } else {
    Json report{{"schema_version", io::kSchemaVersion}, {"config", config_json(c)}};
    for (auto& [key, value] : o.doc.items()) report[key] = value;
    if (c.timing) report["wall_time_seconds"] = seconds;
    text << report.dump(2) << '\n';
  }
  if (c.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + c.out);
    f << text.str();
  }
}

void add_family_options(CLI::App* sub, Config& c) {
  sub->add_option("--family", c.family, "fock1, circle, linez, fockn, unbounded or bounded")
      ->required();
  sub->add_option("--q", c.q, "Deformation parameter in [0, 1)")->required();
  sub->add_option("--n", c.n, "Number of generators");
  sub->add_option("--j", c.j, "Distinguished direction (unbounded, bounded)");
  sub->add_option("--x", c.x, "Orbit parameter, above 1/(1-q)");
  sub->add_option("--phi", c.phi, "Phase: radians for circle, turns in [0, 1) for bounded");
  sub->add_option("--L", c.L, "Maximum word length");
  sub->add_option("--smin", c.s_min, "Lowest level");
  sub->add_option("--smax", c.s_max, "Highest level (Fock depth for fock1)");
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Truncated representations of the q-deformed Cuntz-Toeplitz relations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", c.out, "Output file (default stdout)");
  app.add_option("--seed", c.seed, "Seed for sampled intervals");
  app.add_option("--tol", c.tol, "Residual tolerance");
  app.add_option("--grouping-tol", c.grouping_tol, "Orbit grouping tolerance for wold");
  app.add_option("--x0", c.x0, "Fundamental domain anchor (default 2/(1-q))");
  app.add_flag("--timing", c.timing, "Add wall time to the JSON report");

  auto* build = app.add_subcommand("build", "Write basis and generator matrices");
  add_family_options(build, c);
  auto* verify = app.add_subcommand("verify", "Check the operator identities on a truncation");
  add_family_options(verify, c);
  verify->add_option("--corrupt", c.corrupt, "Perturb one weight of A_1 by this amount");
  verify->add_option("--intervals", c.intervals, "Sampled intervals per generator");
  verify->add_option("--series-terms", c.series_terms, "Terms of the number operator series");
  auto* wold = app.add_subcommand("wold", "q-Wold decomposition of matrices from a JSON file");
  wold->add_option("--input", c.input, "JSON file with generators and interior")->required();
  auto* cls = app.add_subcommand("classify", "Decide equivalence of two parameter sets");
  cls->add_option("--spec1", c.spec1, "e.g. unbounded:1:2.2")->required();
  cls->add_option("--spec2", c.spec2, "e.g. unbounded:1:2.8")->required();
  cls->add_option("--q", c.q, "Deformation parameter")->required();
  cls->add_option("--n", c.n, "Number of generators")->default_val(2);
  auto* norm = app.add_subcommand("normalize", "Map x into the fundamental domain");
  norm->add_option("--q", c.q, "Deformation parameter")->required();
  norm->add_option("--y", c.y, "Value above 1/(1-q)")->required();
  auto* wk = app.add_subcommand("wick", "Wick normal form of an expression");
  wk->add_option("--n", c.n, "Number of generators")->required();
  wk->add_option("--expr", c.expr, "e.g. \"a1* a1* a1 a1\"")->required();
  wk->add_option("--q", c.q_value, "Evaluate coefficients at this q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitInvalid;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Output o;
    if (c.subcommand == "build") o = cmd_build(c);
    else if (c.subcommand == "verify") o = cmd_verify(c);
    else if (c.subcommand == "wold") o = cmd_wold(c);
    else if (c.subcommand == "classify") o = cmd_classify(c);
    else if (c.subcommand == "normalize") o = cmd_normalize(c);
    else o = cmd_wick(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(c, o, secs);
    return o.exit_code;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
