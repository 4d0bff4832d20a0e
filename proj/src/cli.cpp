#include "loopoid/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "loopoid/discrete_mechanics.hpp"
#include "loopoid/finite_structures.hpp"
#include "loopoid/io.hpp"
#include "loopoid/lie_functor.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/octonion.hpp"
#include "loopoid/random.hpp"
#include "loopoid/skew_algebroid.hpp"
#include "loopoid/smooth_loop.hpp"
#include "loopoid/tangent_cotangent.hpp"

namespace loopoid {

namespace {

using io::json;

struct Options {
  std::string spec_path;
  std::string out_path;
  std::string report_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<int> steps;
};

// Collects checks and the report body of one command.
class Report {
 public:
  Report(std::string command, const io::StructureSpec& spec, std::uint64_t seed, std::optional<double> tol_override)
      : tol_override_(tol_override) {
    j_["command"] = std::move(command);
    j_["kind"] = spec.kind;
    j_["seed"] = seed;
    j_["checks"] = json::array();
    j_["data"] = json::object();
  }

  // value < tol passes.
  void below(const std::string& name, const std::string& ref, double value, double tol) {
    if (tol_override_) tol = *tol_override_;
    add(name, ref, value, tol, value < tol);
  }

  void flag(const std::string& name, const std::string& ref, bool value, bool expected = true) {
    json c;
    c["name"] = name;
    c["ref"] = ref;
    c["value"] = value;
    c["expected"] = expected;
    c["pass"] = value == expected;
    j_["checks"].push_back(c);
  }

  json& data() { return j_["data"]; }

  bool ok() const {
    for (const auto& c : j_["checks"])
      if (!c["pass"].get<bool>()) return false;
    return true;
  }

  json finish() {
    j_["ok"] = ok();
    return j_;
  }

 private:
  void add(const std::string& name, const std::string& ref, double value, double tol, bool pass) {
    json c;
    c["name"] = name;
    c["ref"] = ref;
    c["value"] = value;
    c["tol"] = tol;
    c["pass"] = pass;
    j_["checks"].push_back(c);
  }

  json j_;
  std::optional<double> tol_override_;
};

struct Outputs {
  std::optional<std::string> csv;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UsageError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UsageError, "cannot write " + path);
  out << text;
}

std::uint64_t resolve_seed(const Options& o, const io::StructureSpec& spec) {
  if (o.seed) return *o.seed;
  if (spec.seed_given) return spec.seed;
  if (const char* env = std::getenv("LOOPOID_LAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
    throw Error(ErrorCode::UsageError, "LOOPOID_LAB_SEED is not a non-negative integer");
  }
  return 0;
}

void require_kind(const io::StructureSpec& spec, std::initializer_list<const char*> kinds, const std::string& cmd) {
  for (const char* k : kinds)
    if (spec.kind == k) return;
  throw Error(ErrorCode::UsageError, cmd + " does not accept specs of kind '" + spec.kind + "'");
}

std::string flag_name(const std::string& key, const IdentityReport& r, bool& known) {
  static const std::map<std::string, bool IdentityReport::*> flags = {
      {"is_latin_square", &IdentityReport::is_latin_square},
      {"left_division", &IdentityReport::left_division},
      {"right_division", &IdentityReport::right_division},
      {"has_two_sided_inverses", &IdentityReport::has_two_sided_inverses},
      {"inverse_property", &IdentityReport::inverse_property},
      {"left_inverse_property", &IdentityReport::left_inverse_property},
      {"right_inverse_property", &IdentityReport::right_inverse_property},
      {"moufang", &IdentityReport::moufang},
      {"left_bol", &IdentityReport::left_bol},
      {"right_bol", &IdentityReport::right_bol},
      {"associative", &IdentityReport::associative},
  };
  auto it = flags.find(key);
  known = it != flags.end();
  return known ? (r.*(it->second) ? "true" : "false") : "";
}

json identity_json(const IdentityReport& r) {
  json j;
  j["is_latin_square"] = r.is_latin_square;
  j["left_division"] = r.left_division;
  j["right_division"] = r.right_division;
  j["unit"] = r.unit ? json(*r.unit) : json(nullptr);
  j["has_two_sided_inverses"] = r.has_two_sided_inverses;
  j["inverse_property"] = r.inverse_property;
  j["left_inverse_property"] = r.left_inverse_property;
  j["right_inverse_property"] = r.right_inverse_property;
  j["moufang"] = r.moufang;
  j["left_bol"] = r.left_bol;
  j["right_bol"] = r.right_bol;
  j["associative"] = r.associative;
  j["exhaustive"] = r.exhaustive;
  return j;
}

void cmd_verify_finite(const io::StructureSpec& spec, Report& rep) {
  const json& b = spec.body;
  CayleyTable t;
  std::string ref = "latin-square-classification";
  if (b.contains("table")) {
    t = io::table_from_json(b["table"], "$.body.table");
  } else if (b.contains("transversal")) {
    const json& x = b["transversal"];
    t = transversal_loop(io::table_from_json(x["group"], "$.body.transversal.group"),
                         x["subgroup"].get<std::vector<int>>(), x["transversal"].get<std::vector<int>>());
    ref = "transversal-loop";
  } else {
    const json& x = b["semidirect"];
    t = semidirect_loop(io::table_from_json(x["loop"], "$.body.semidirect.loop"),
                        x["autos"].get<std::vector<std::vector<int>>>());
    ref = "semidirect-loop";
  }
  const IdentityReport r = validate_latin_square(t);
  rep.data()["table"] = t.rows();
  rep.data()["identities"] = identity_json(r);
  if (b.contains("expect")) {
    for (auto it = b["expect"].begin(); it != b["expect"].end(); ++it) {
      bool known = false;
      const std::string v = flag_name(it.key(), r, known);
      if (!known) throw Error(ErrorCode::SchemaError, "$.body.expect." + it.key() + ": unknown identity flag");
      rep.flag(it.key(), ref, v == "true", it->get<bool>());
    }
  } else {
    rep.flag("left_division", ref, r.left_division);
  }
}

void cmd_octonion(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep) {
  const int pairs = o.samples ? *o.samples : spec.body.value("pairs", 10000);
  const int triples = o.samples ? std::max(1, *o.samples / 10) : spec.body.value("triples", 1000);
  CounterRng rng(seed);
  json table = json::array();
  for (int i = 0; i < 8; ++i) {
    json row = json::array();
    for (int j = 0; j < 8; ++j) {
      const auto p = octonion_basis_product(i, j);
      row.push_back((p.sign < 0 ? "-e" : "e") + std::to_string(p.index));
    }
    table.push_back(row);
  }
  rep.data()["basis_table"] = table;
  const IdentityReport basis = validate_latin_square(octonion_basis_loop());
  rep.flag("basis_loop_moufang", "octonion-moufang-loop", basis.moufang);
  rep.flag("basis_loop_associative", "octonion-nonassociative", basis.associative, false);

  double norm_err = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Octoniond g = Octoniond::from(rng.normal_vec(8));
    const Octoniond h = Octoniond::from(rng.normal_vec(8));
    norm_err = std::max(norm_err, std::abs((g * h).norm() - g.norm() * h.norm()) / (g.norm() * h.norm()));
  }
  double moufang = 0.0;
  for (int k = 0; k < triples; ++k) {
    Vec v[3];
    for (auto& x : v) x = rng.normal_vec(8).normalized();
    const Octoniond a = Octoniond::from(v[0]), x = Octoniond::from(v[1]), y = Octoniond::from(v[2]);
    moufang = std::max(moufang, (((a * x) * a) * y - a * (x * (a * y))).norm());
  }
  rep.data()["pairs"] = pairs;
  rep.data()["triples"] = triples;
  rep.below("norm_multiplicativity", "octonion-composition-algebra", norm_err, 1e-12);
  rep.below("moufang_residual", "moufang-identity", moufang, 1e-9);
}

void cmd_loop_algebra(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep,
                      Outputs& outs) {
  const SmoothLoopChart L = io::loop_from_json(spec.body, "$.body");
  const StructureConstants sc = extract_structure_constants(L);
  CounterRng rng(seed);
  const int samples = o.samples.value_or(100);
  const int n = L.dim();
  rep.data()["dim"] = n;
  rep.data()["structure_constants"] = io::to_json(sc.c);
  rep.data()["bracket"] = io::to_json(sc.algebra.s);
  rep.data()["jacobi_residual"] = jacobi_residual(sc.algebra, samples, rng);
  rep.data()["malcev_residual"] = malcev_residual(sc.algebra, samples, rng);
  rep.below("extraction_noise", "structure-constants-from-taylor-expansion", sc.noise, 1e-4);
  if (spec.body.contains("expect_bracket")) {
    const StructureTensor want = io::tensor_from_json(spec.body["expect_bracket"], n, "$.body.expect_bracket");
    double err = 0.0;
    for (int k = 0; k < n; ++k)
      err = std::max(err, (sc.algebra.s[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)])
                              .cwiseAbs()
                              .maxCoeff());
    rep.below("bracket_matches_expected", "skew-algebra-of-loop", err, 1e-6);
  }
  io::CsvWriter csv({"k", "i", "j", "value"});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        csv.row({std::to_string(k + 1), std::to_string(i + 1), std::to_string(j + 1),
                 io::format_double(sc.algebra.s[static_cast<std::size_t>(k)](i, j))});
  outs.csv = csv.str();
}

void cmd_loopoid_check(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep) {
  const ChartedQuasiloopoid Q = io::loopoid_from_json(spec.body, "$.body");
  CounterRng rng(seed);
  const AxiomReport a = check_axioms(Q, o.samples.value_or(64), rng, o.tol.value_or(1e-8));
  json& d = rep.data();
  d["name"] = Q.name;
  d["dim_g"] = Q.dim_g;
  d["dim_m"] = Q.dim_m;
  d["samples"] = a.samples;
  d["unit_section_residual"] = a.unit_section_residual;
  d["unit_law_residual"] = a.unit_law_residual;
  d["min_alpha_rank"] = a.min_alpha_rank;
  d["min_beta_rank"] = a.min_beta_rank;
  d["unities_assoc_residual"] = a.unities_assoc_residual;
  d["anchor_alpha_residual"] = a.anchor_alpha_residual;
  d["anchor_beta_residual"] = a.anchor_beta_residual;
  d["min_left_translation_sv"] = a.min_left_translation_sv;
  d["min_right_translation_sv"] = a.min_right_translation_sv;
  if (a.ip_residual) d["ip_residual"] = *a.ip_residual;
  if (a.ip_identities_residual) d["ip_identities_residual"] = *a.ip_identities_residual;
  if (a.left_ip_residual) d["left_ip_residual"] = *a.left_ip_residual;
  d["global_injectivity"] = a.global_injectivity;
  d["unities_associative"] = a.unities_associative;
  d["anchor_morphism"] = a.anchor_morphism;
  rep.flag("quasiloopoid", "quasiloopoid-axioms", a.quasiloopoid);
  if (Q.claims_loopoid) rep.flag("loopoid", "loopoid-axioms", a.loopoid);
  if (Q.claims_ip) rep.flag("inverse_property", "inverse-loopoid", a.inverse_property);
}

json structure_json(const StructureTensor& c) { return io::to_json(c); }

void cmd_lie_functor(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep,
                     Outputs& outs) {
  CounterRng rng(seed);
  const int samples = o.samples.value_or(8);
  if (spec.kind == "algebroid") {
    const SkewAlgebroidChart A = io::algebroid_from_json(spec.body, "$.body");
    const AlmostLieReport al = check_almost_lie(A, samples, rng);
    rep.data()["name"] = A.name;
    rep.data()["jacobi_residual"] = algebroid_jacobi_residual(A, samples, rng);
    rep.below("almost_lie", "almost-lie-condition", al.residual, 1e-6);
    if (spec.body.contains("prolong")) {
      const json& p = spec.body["prolong"];
      const FibrationChart P = p["kind"].get<std::string>() == "sheared"
                                   ? sheared_fibration(A.base_dim, p["fiber_dim"].get<int>())
                                   : trivial_fibration(A.base_dim, p["fiber_dim"].get<int>());
      const SkewAlgebroidChart B = prolong_algebroid(A, P, 8, seed);
      const AlmostLieReport bl = check_almost_lie(B, samples, rng);
      rep.data()["prolongation"] = {{"name", B.name}, {"base_dim", B.base_dim}, {"rank", B.rank}};
      rep.below("prolongation_almost_lie", "prolongation-of-skew-algebroids", bl.residual, 1e-6);
    }
    return;
  }
  const ChartedQuasiloopoid Q = io::loopoid_from_json(spec.body, "$.body");
  const Vec u = spec.body.contains("u") ? io::vec_from_json(spec.body["u"], "$.body.u") : Vec(Vec::Zero(Q.dim_m));
  const FrameField F(Q, u);
  const AlgebroidFrame fr = F.at(u);
  const StructureTensor Cl = bracket_table(F, Side::Left, u);
  const StructureTensor Cr = bracket_table(F, Side::Right, u);
  json& d = rep.data();
  d["name"] = Q.name;
  d["u"] = io::to_json(u);
  d["rank"] = Q.rank();
  d["left_bracket"] = structure_json(Cl);
  d["right_bracket"] = structure_json(Cr);
  d["anchor_left"] = io::to_json(fr.anchor_left);
  d["anchor_right"] = io::to_json(fr.anchor_right);
  d["alpha_vertical"] = io::to_json(fr.alpha_vertical);
  d["beta_vertical"] = io::to_json(fr.beta_vertical);
  const SignReport s = bracket_sign_residuals(Q, u, samples, rng, 0.2);
  d["bracket_sum"] = s.bracket_sum;
  d["anchor_opposition"] = s.anchor_opposition;
  if (Q.dim_m > 0) {
    const AlmostLieReport left = check_almost_lie(Q, Side::Left, u, samples, rng);
    const AlmostLieReport right = check_almost_lie(Q, Side::Right, u, samples, rng);
    d["almost_lie_left"] = left.residual;
    d["almost_lie_right"] = right.residual;
    if (Q.claims_loopoid) {
      rep.below("almost_lie_left", "loopoid-algebroid-almost-lie", left.residual, 1e-6);
      rep.below("almost_lie_right", "loopoid-algebroid-almost-lie", right.residual, 1e-6);
    }
  }
  rep.below("anchor_opposition", "left-right-anchor-opposition", s.anchor_opposition, 1e-7);
  if (s.has_inverse) {
    d["inverse_tangent"] = s.inverse_tangent;
    rep.below("bracket_sign", "left-bracket-is-minus-right-bracket", s.bracket_sum, 1e-6);
    rep.below("inverse_tangent", "inverse-maps-alpha-to-minus-beta-vertical", s.inverse_tangent, 1e-7);
  }
  io::CsvWriter csv({"side", "k", "i", "j", "value"});
  for (const auto& [name, C] : {std::pair<const char*, const StructureTensor&>{"left", Cl}, {"right", Cr}})
    for (int k = 0; k < Q.rank(); ++k)
      for (int i = 0; i < Q.rank(); ++i)
        for (int j = 0; j < Q.rank(); ++j)
          csv.row({name, std::to_string(k + 1), std::to_string(i + 1), std::to_string(j + 1),
                   io::format_double(C[static_cast<std::size_t>(k)](i, j))});
  outs.csv = csv.str();
}

void cmd_tangent_check(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep) {
  const ChartedQuasiloopoid Q = io::loopoid_from_json(spec.body, "$.body");
  CounterRng rng(seed);
  const TangentLoopoidReport t = check_tangent_loopoid(Q, o.samples.value_or(16), rng);
  json& d = rep.data();
  d["name"] = Q.name;
  d["samples"] = t.samples;
  d["min_left_rank"] = t.min_left_rank;
  d["expected_rank"] = t.expected_rank;
  rep.below("anchor_residual", "tangent-loopoid-anchors", t.anchor_residual, 1e-6);
  rep.below("unit_residual", "tangent-loopoid-units", t.unit_residual, 1e-6);
  rep.below("section_independence", "tangent-multiplication-formula", t.section_independence, 1e-6);
  rep.below("curve_agreement", "tangent-multiplication-formula", t.curve_agreement, 1e-6);
  rep.flag("left_translation_rank", "tangent-loopoid-translations", t.min_left_rank == t.expected_rank);
  if (t.inverse_residual) rep.below("inverse_residual", "tangent-inverse-loopoid", *t.inverse_residual, 1e-6);
}

Vec initial_point(const io::StructureSpec& spec, const DiscreteLagrangianSystem& S) {
  if (!spec.body.contains("initial"))
    throw Error(ErrorCode::SchemaError, "$.body.initial: missing required field");
  return io::vec_from_json(spec.body["initial"], "$.body.initial", S.loopoid.dim_g);
}

void cmd_simulate(const io::StructureSpec& spec, const Options& o, Report& rep, Outputs& outs) {
  const DiscreteLagrangianSystem S = io::system_from_json(spec.body, "$.body");
  const Vec g0 = initial_point(spec, S);
  const int steps = o.steps ? *o.steps : spec.body.value("steps", 1);
  std::optional<Vec> seed;
  if (spec.body.contains("branch_seed")) seed = io::vec_from_json(spec.body["branch_seed"], "$.body.branch_seed");
  const Trajectory t = trajectory(S, g0, steps, seed);
  double gap = 0.0, res = 0.0;
  for (double x : t.composable_gaps) gap = std::max(gap, x);
  for (double x : t.residuals) res = std::max(res, x);
  json pts = json::array();
  for (const Vec& p : t.points) pts.push_back(io::to_json(p));
  rep.data()["points"] = pts;
  rep.data()["steps"] = steps;
  rep.below("composable_gaps", "composable-sequence", gap, S.loopoid.composable_tol);
  rep.below("el_residuals", "discrete-euler-lagrange-equations", res, 10 * S.newton.tol);
  rep.below("flow_matching_residual", "legendre-transforms-intertwine-flow", flow_matching_residual(S, t), 1e-7);

  std::vector<std::string> header{"step"};
  for (int i = 0; i < S.loopoid.dim_g; ++i) header.push_back("x" + std::to_string(i + 1));
  header.push_back("residual");
  header.push_back("gap");
  io::CsvWriter csv(header);
  for (std::size_t s = 0; s < t.points.size(); ++s) {
    std::vector<std::string> row{std::to_string(s)};
    for (Eigen::Index i = 0; i < t.points[s].size(); ++i) row.push_back(io::format_double(t.points[s][i]));
    row.push_back(s == 0 ? "" : io::format_double(t.residuals[s - 1]));
    row.push_back(s == 0 ? "" : io::format_double(t.composable_gaps[s - 1]));
    csv.row(row);
  }
  outs.csv = csv.str();
}

void cmd_legendre(const io::StructureSpec& spec, const Options& o, std::uint64_t seed, Report& rep, Outputs& outs) {
  const DiscreteLagrangianSystem S = io::system_from_json(spec.body, "$.body");
  const Vec g = initial_point(spec, S);
  const Vec plus = legendre(S, LegendreSide::Plus, g);
  const Vec minus = legendre(S, LegendreSide::Minus, g);
  const Vec u = S.loopoid.dim_m == 0 ? Vec(0) : S.loopoid.alpha(g);
  const RegularityReport r = regularity_check(S, u, 0.1, o.samples.value_or(4), seed);
  json& d = rep.data();
  d["point"] = io::to_json(g);
  d["plus"] = io::to_json(plus);
  d["minus"] = io::to_json(minus);
  d["regularity"] = {{"u", io::to_json(r.u)},
                     {"min_fiber_sv_plus", r.min_fiber_sv_plus},
                     {"min_fiber_sv_minus", r.min_fiber_sv_minus},
                     {"full_chart_sv", r.full_chart_sv},
                     {"plus_directional", io::to_json(r.plus_directional)},
                     {"minus_directional", io::to_json(r.minus_directional)},
                     {"flow_matching_residual", r.flow_matching_residual},
                     {"flow_matching_failures", r.flow_matching_failures},
                     {"regular", r.regular},
                     {"minus_regular", r.minus_regular}};
  rep.below("plus_cotangent_agreement", "legendre-plus-is-beta-tilde-of-dL",
            legendre_cross_check(S, LegendreSide::Plus, g), 1e-7);
  rep.below("minus_cotangent_agreement", "legendre-minus-is-alpha-tilde-of-dL",
            legendre_cross_check(S, LegendreSide::Minus, g), 1e-7);
  rep.flag("regular", "regular-lagrangian", r.regular);
  io::CsvWriter csv({"i", "plus", "minus"});
  for (Eigen::Index i = 0; i < plus.size(); ++i)
    csv.row({std::to_string(i + 1), io::format_double(plus[i]), io::format_double(minus[i])});
  outs.csv = csv.str();
}

json error_json(const std::string& code, const std::string& message) {
  json j;
  j["error"] = {{"code", code}, {"message", message}};
  j["ok"] = false;
  return j;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for smooth loops, loopoids and their algebroids"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<std::string, std::string>> names = {
      {"verify-finite", "Classify a finite table or construction"},
      {"octonion", "Octonion table, norm and Moufang checks"},
      {"loop-algebra", "Skew algebra of a smooth loop"},
      {"loopoid-check", "Quasiloopoid and loopoid axioms"},
      {"lie-functor", "Brackets and anchors of the associated skew algebroid"},
      {"tangent-check", "Tangent loopoid checks"},
      {"simulate", "Discrete Euler-Lagrange trajectory"},
      {"legendre", "Discrete Legendre transforms and regularity"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--spec", o.spec_path, "Structure spec (JSON)")->required();
    s->add_option("--out", o.out_path, "Output file; .csv writes the table, anything else the JSON report");
    s->add_option("--report", o.report_path, "JSON report file when --out is a CSV");
    s->add_option("--seed", o.seed, "Seed; falls back to the spec, then LOOPOID_LAB_SEED, then 0");
    s->add_option("--samples", o.samples, "Sample count")->check(CLI::PositiveNumber);
    s->add_option("--tol", o.tol, "Tolerance applied to every numeric check")->check(CLI::PositiveNumber);
    if (name == "simulate") s->add_option("--steps", o.steps, "Number of steps")->check(CLI::NonNegativeNumber);
    subs[name] = s;
  }

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string cmd;
  for (const auto& [name, s] : subs)
    if (s->parsed()) cmd = name;

  try {
    const io::StructureSpec spec = io::parse_spec(read_file(o.spec_path));
    const std::uint64_t seed = resolve_seed(o, spec);
    Report rep(cmd, spec, seed, o.tol);
    Outputs outs;
    if (cmd == "verify-finite") {
      require_kind(spec, {"finite"}, cmd);
      cmd_verify_finite(spec, rep);
    } else if (cmd == "octonion") {
      require_kind(spec, {"octonion"}, cmd);
      cmd_octonion(spec, o, seed, rep);
    } else if (cmd == "loop-algebra") {
      require_kind(spec, {"loop"}, cmd);
      cmd_loop_algebra(spec, o, seed, rep, outs);
    } else if (cmd == "loopoid-check") {
      require_kind(spec, {"loopoid"}, cmd);
      cmd_loopoid_check(spec, o, seed, rep);
    } else if (cmd == "lie-functor") {
      require_kind(spec, {"loopoid", "algebroid"}, cmd);
      cmd_lie_functor(spec, o, seed, rep, outs);
    } else if (cmd == "tangent-check") {
      require_kind(spec, {"loopoid"}, cmd);
      cmd_tangent_check(spec, o, seed, rep);
    } else if (cmd == "simulate") {
      require_kind(spec, {"system"}, cmd);
      cmd_simulate(spec, o, rep, outs);
    } else if (cmd == "legendre") {
      require_kind(spec, {"system"}, cmd);
      cmd_legendre(spec, o, seed, rep, outs);
    }
    const bool ok = rep.ok();
    const std::string report = io::canonical_dump(rep.finish());
    if (!o.out_path.empty() && ends_with(o.out_path, ".csv")) {
      if (!outs.csv) throw Error(ErrorCode::UsageError, cmd + " has no CSV output");
      write_file(o.out_path, *outs.csv);
      if (!o.report_path.empty()) write_file(o.report_path, report);
    } else if (!o.out_path.empty()) {
      write_file(o.out_path, report);
    } else {
      out << report;
    }
    return ok ? 0 : 1;
  } catch (const Error& e) {
    out << io::canonical_dump(error_json(to_string(e.code()), e.what()));
    return 2;
  } catch (const std::exception& e) {
    out << io::canonical_dump(error_json("InternalError", e.what()));
    return 2;
  }
}

}  // namespace loopoid
