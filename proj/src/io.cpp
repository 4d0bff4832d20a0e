#include "loopoid/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace loopoid::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  require_object(j, path);
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

void allow_keys(const json& j, const std::set<std::string>& keys, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

int get_int(const json& j, const std::string& path, int lo = std::numeric_limits<int>::min()) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  return static_cast<int>(v);
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

int opt_int(const json& j, const std::string& key, const std::string& path, int def, int lo) {
  auto it = j.find(key);
  return it == j.end() ? def : get_int(*it, path + "." + key, lo);
}

double opt_double(const json& j, const std::string& key, const std::string& path, double def) {
  auto it = j.find(key);
  return it == j.end() ? def : get_double(*it, path + "." + key);
}

std::vector<int> int_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> exponents(const json& j, int n, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of exponents");
  if (static_cast<int>(j.size()) != n) fail(path, "expected " + std::to_string(n) + " exponents");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0) fail(p, "exponent must be a non-negative integer");
    out.push_back(get_int(j[i], p, 0));
  }
  return out;
}

void dump(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += std::isfinite(j.get<double>()) ? format_double(j.get<double>()) : "null";
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

StructureSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  require_object(j, "$");
  allow_keys(j, {"kind", "body", "seed", "description"}, "$");
  StructureSpec s;
  s.kind = get_string(field(j, "kind", "$"), "$.kind");
  s.body = field(j, "body", "$");
  require_object(s.body, "$.body");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      fail("$.seed", "seed must be a non-negative integer");
    s.seed = it->get<std::uint64_t>();
    s.seed_given = true;
  }
  const std::string p = "$.body";
  if (s.kind == "finite") {
    allow_keys(s.body, {"table", "transversal", "semidirect", "expect"}, p);
    int present = 0;
    for (const char* k : {"table", "transversal", "semidirect"}) present += s.body.contains(k) ? 1 : 0;
    if (present != 1) fail(p, "exactly one of table, transversal, semidirect is required");
    if (s.body.contains("table")) table_from_json(s.body["table"], p + ".table");
    if (s.body.contains("transversal")) {
      const json& t = s.body["transversal"];
      const std::string tp = p + ".transversal";
      table_from_json(field(t, "group", tp), tp + ".group");
      int_list(field(t, "subgroup", tp), tp + ".subgroup");
      int_list(field(t, "transversal", tp), tp + ".transversal");
    }
    if (s.body.contains("semidirect")) {
      const json& t = s.body["semidirect"];
      const std::string tp = p + ".semidirect";
      table_from_json(field(t, "loop", tp), tp + ".loop");
      const json& a = field(t, "autos", tp);
      if (!a.is_array()) fail(tp + ".autos", "expected an array of permutations");
      for (std::size_t i = 0; i < a.size(); ++i) int_list(a[i], tp + ".autos[" + std::to_string(i) + "]");
    }
    if (s.body.contains("expect")) {
      require_object(s.body["expect"], p + ".expect");
      for (auto it = s.body["expect"].begin(); it != s.body["expect"].end(); ++it)
        if (!it->is_boolean()) fail(p + ".expect." + it.key(), "expected a boolean");
    }
  } else if (s.kind == "octonion") {
    allow_keys(s.body, {"pairs", "triples"}, p);
    opt_int(s.body, "pairs", p, 0, 1);
    opt_int(s.body, "triples", p, 0, 1);
  } else if (s.kind == "loop") {
    loop_from_json(s.body, p);
  } else if (s.kind == "loopoid") {
    loopoid_from_json(s.body, p);
  } else if (s.kind == "algebroid") {
    algebroid_from_json(s.body, p);
  } else if (s.kind == "system") {
    system_from_json(s.body, p);
  } else {
    fail("$.kind", "unknown kind '" + s.kind + "'");
  }
  return s;
}

json to_json(const StructureSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  j["body"] = spec.body;
  j["seed"] = spec.seed;
  return j;
}

CayleyTable table_from_json(const json& j, const std::string& path) {
  if (j.is_object()) {
    allow_keys(j, {"cyclic", "symmetric", "octonion_basis"}, path);
    if (j.contains("cyclic")) return cyclic_group(get_int(j["cyclic"], path + ".cyclic", 1));
    if (j.contains("symmetric")) {
      if (get_int(j["symmetric"], path + ".symmetric") != 3) fail(path + ".symmetric", "only S3 is built in");
      return symmetric_group_s3();
    }
    if (j.contains("octonion_basis")) return octonion_basis_loop();
    fail(path, "expected a table or a named group");
  }
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<std::vector<int>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(int_list(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return CayleyTable(rows);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Polynomial polynomial_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"nvars", "terms"}, path);
  const int n = get_int(field(j, "nvars", path), path + ".nvars", 0);
  const json& terms = field(j, "terms", path);
  if (!terms.is_array()) fail(path + ".terms", "expected an array of terms");
  Polynomial p(n);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + ".terms[" + std::to_string(i) + "]";
    require_object(terms[i], tp);
    allow_keys(terms[i], {"coef", "exps"}, tp);
    p.add_term(get_double(field(terms[i], "coef", tp), tp + ".coef"), exponents(field(terms[i], "exps", tp), n, tp + ".exps"));
  }
  return p;
}

BiPolynomialMap bipolynomial_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"dim", "components"}, path);
  BiPolynomialMap m;
  m.dim = get_int(field(j, "dim", path), path + ".dim", 0);
  const json& comps = field(j, "components", path);
  if (!comps.is_array() || static_cast<int>(comps.size()) != m.dim)
    fail(path + ".components", "expected one term list per dimension");
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const std::string cp = path + ".components[" + std::to_string(k) + "]";
    if (!comps[k].is_array()) fail(cp, "expected an array of terms");
    std::vector<BiMonomial> terms;
    for (std::size_t i = 0; i < comps[k].size(); ++i) {
      const std::string tp = cp + "[" + std::to_string(i) + "]";
      const json& t = comps[k][i];
      require_object(t, tp);
      allow_keys(t, {"coef", "x", "y"}, tp);
      terms.push_back({get_double(field(t, "coef", tp), tp + ".coef"), exponents(field(t, "x", tp), m.dim, tp + ".x"),
                       exponents(field(t, "y", tp), m.dim, tp + ".y")});
    }
    m.components.push_back(std::move(terms));
  }
  return m;
}

StructureTensor tensor_from_json(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail(path, "expected dim matrices c[k][i][j]");
  StructureTensor c = zero_structure(dim);
  for (int k = 0; k < dim; ++k) {
    const std::string kp = path + "[" + std::to_string(k) + "]";
    const json& m = j[static_cast<std::size_t>(k)];
    if (!m.is_array() || static_cast<int>(m.size()) != dim) fail(kp, "expected a dim x dim matrix");
    for (int a = 0; a < dim; ++a) {
      const std::string rp = kp + "[" + std::to_string(a) + "]";
      const json& row = m[static_cast<std::size_t>(a)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) fail(rp, "expected dim entries");
      for (int b = 0; b < dim; ++b)
        c[static_cast<std::size_t>(k)](a, b) = get_double(row[static_cast<std::size_t>(b)], rp + "[" + std::to_string(b) + "]");
    }
  }
  return c;
}

Vec vec_from_json(const json& j, const std::string& path, int expected_size) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (expected_size >= 0 && static_cast<int>(j.size()) != expected_size)
    fail(path, "expected " + std::to_string(expected_size) + " entries");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = get_double(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

SmoothLoopChart loop_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"builtin", "dim", "bracket", "mul", "unit", "radius", "expect_bracket"}, path);
  const std::string b = get_string(field(j, "builtin", path), path + ".builtin");
  SmoothLoopChart L;
  if (b == "H") {
    L = h_loop();
  } else if (b == "octonion") {
    L = octonion_loop();
  } else if (b == "abelian") {
    L = abelian_loop(get_int(field(j, "dim", path), path + ".dim", 0));
  } else if (b == "bracket") {
    const int dim = get_int(field(j, "dim", path), path + ".dim", 0);
    try {
      L = bracket_loop(dim, tensor_from_json(field(j, "bracket", path), dim, path + ".bracket"));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAntisymmetric) throw;
      fail(path + ".bracket", e.what());
    }
  } else if (b == "polynomial") {
    const BiPolynomialMap m = bipolynomial_from_json(field(j, "mul", path), path + ".mul");
    const Vec e = j.contains("unit") ? vec_from_json(j["unit"], path + ".unit", m.dim) : Vec(Vec::Zero(m.dim));
    L = polynomial_loop(m, e);
  } else {
    fail(path + ".builtin", "unknown loop '" + b + "'");
  }
  if (j.contains("radius")) L.validity_radius = get_double(j["radius"], path + ".radius");
  if (j.contains("expect_bracket")) tensor_from_json(j["expect_bracket"], L.dim(), path + ".expect_bracket");
  return L;
}

FibrationChart fibration_from_json(const json& j, int dim_m, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"kind", "fiber_dim"}, path);
  const std::string k = get_string(field(j, "kind", path), path + ".kind");
  const int f = get_int(field(j, "fiber_dim", path), path + ".fiber_dim", 0);
  if (k == "trivial") return trivial_fibration(dim_m, f);
  if (k == "sheared") return sheared_fibration(dim_m, f);
  fail(path + ".kind", "unknown fibration '" + k + "'");
}

FibrationChart fibration_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  return fibration_from_json(j, get_int(field(j, "dim_m", path), path + ".dim_m", 0), path);
}

ChartedQuasiloopoid loopoid_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"builtin", "loop", "dim", "phi", "base", "fibration", "fd_step", "composable_tol", "sample_radius", "u"},
             path);
  const std::string b = get_string(field(j, "builtin", path), path + ".builtin");
  ChartedQuasiloopoid Q;
  if (b == "product") {
    Q = product_loopoid(loop_from_json(field(j, "loop", path), path + ".loop"),
                        get_int(field(j, "dim", path), path + ".dim", 0));
  } else if (b == "pair") {
    Q = pair_groupoid(get_int(field(j, "dim", path), path + ".dim", 1));
  } else if (b == "loop") {
    Q = loop_as_loopoid(loop_from_json(field(j, "loop", path), path + ".loop"));
  } else if (b == "phi") {
    const Polynomial p = polynomial_from_json(field(j, "phi", path), path + ".phi");
    if (p.nvars() != 1) fail(path + ".phi.nvars", "phi is a function of one variable");
    try {
      Q = phi_quasiloopoid(phi_from_polynomial(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotOdd && e.code() != ErrorCode::NotMonotone) throw;
      fail(path + ".phi", std::string(to_string(e.code())) + ": " + e.what());
    }
  } else if (b == "prolongation") {
    const ChartedQuasiloopoid base = loopoid_from_json(field(j, "base", path), path + ".base");
    Q = prolongation_loopoid(base, fibration_from_json(field(j, "fibration", path), base.dim_m, path + ".fibration"));
  } else {
    fail(path + ".builtin", "unknown loopoid '" + b + "'");
  }
  Q.fd_step = opt_double(j, "fd_step", path, Q.fd_step);
  Q.composable_tol = opt_double(j, "composable_tol", path, Q.composable_tol);
  Q.sample_radius = opt_double(j, "sample_radius", path, Q.sample_radius);
  if (j.contains("u")) vec_from_json(j["u"], path + ".u", Q.dim_m);
  return Q;
}

SkewAlgebroidChart algebroid_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"builtin", "dim", "bracket", "s", "base_dim", "rank", "structure", "anchor", "prolong"}, path);
  const std::string b = get_string(field(j, "builtin", path), path + ".builtin");
  const auto algebra = [&]() {
    SkewAlgebra g;
    g.dim = get_int(field(j, "dim", path), path + ".dim", 0);
    g.s = tensor_from_json(field(j, "bracket", path), g.dim, path + ".bracket");
    for (int k = 0; k < g.dim; ++k)
      if ((g.s[static_cast<std::size_t>(k)] + g.s[static_cast<std::size_t>(k)].transpose()).cwiseAbs().maxCoeff() > 1e-12)
        fail(path + ".bracket", "bracket is not antisymmetric");
    return g;
  };
  SkewAlgebroidChart A;
  if (b == "tangent") {
    A = tangent_bundle_chart(get_int(field(j, "dim", path), path + ".dim", 0));
  } else if (b == "algebra") {
    A = skew_algebra_chart(algebra());
  } else if (b == "tangent_plus_algebra") {
    A = tangent_plus_algebra_chart(get_int(field(j, "base_dim", path), path + ".base_dim", 0), algebra());
  } else if (b == "affine_line") {
    A = affine_line_chart(opt_double(j, "s", path, 1.0));
  } else if (b == "polynomial") {
    const int m = get_int(field(j, "base_dim", path), path + ".base_dim", 0);
    const int r = get_int(field(j, "rank", path), path + ".rank", 0);
    const json& cs = field(j, "structure", path);
    const json& rs = field(j, "anchor", path);
    std::vector<std::vector<std::vector<Polynomial>>> c;
    std::vector<std::vector<Polynomial>> rho;
    if (!cs.is_array() || static_cast<int>(cs.size()) != r) fail(path + ".structure", "expected rank entries");
    for (int k = 0; k < r; ++k) {
      const std::string kp = path + ".structure[" + std::to_string(k) + "]";
      const json& mk = cs[static_cast<std::size_t>(k)];
      if (!mk.is_array() || static_cast<int>(mk.size()) != r) fail(kp, "expected rank rows");
      c.emplace_back();
      for (int a = 0; a < r; ++a) {
        const std::string rp = kp + "[" + std::to_string(a) + "]";
        const json& row = mk[static_cast<std::size_t>(a)];
        if (!row.is_array() || static_cast<int>(row.size()) != r) fail(rp, "expected rank entries");
        c.back().emplace_back();
        for (int bb = 0; bb < r; ++bb)
          c.back().back().push_back(
              polynomial_from_json(row[static_cast<std::size_t>(bb)], rp + "[" + std::to_string(bb) + "]"));
      }
    }
    if (!rs.is_array() || static_cast<int>(rs.size()) != m) fail(path + ".anchor", "expected base_dim rows");
    for (int a = 0; a < m; ++a) {
      const std::string rp = path + ".anchor[" + std::to_string(a) + "]";
      const json& row = rs[static_cast<std::size_t>(a)];
      if (!row.is_array() || static_cast<int>(row.size()) != r) fail(rp, "expected rank entries");
      rho.emplace_back();
      for (int i = 0; i < r; ++i)
        rho.back().push_back(polynomial_from_json(row[static_cast<std::size_t>(i)], rp + "[" + std::to_string(i) + "]"));
    }
    try {
      A = polynomial_chart(m, r, c, rho);
    } catch (const Error& e) {
      fail(path, std::string(to_string(e.code())) + ": " + e.what());
    }
  } else {
    fail(path + ".builtin", "unknown algebroid '" + b + "'");
  }
  if (j.contains("prolong")) fibration_from_json(j["prolong"], A.base_dim, path + ".prolong");
  return A;
}

DiscreteLagrangianSystem system_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"builtin", "dim", "loopoid", "lagrangian", "initial", "steps", "branch_seed", "newton", "fd_step"}, path);
  DiscreteLagrangianSystem S;
  if (j.contains("builtin")) {
    const std::string b = get_string(j["builtin"], path + ".builtin");
    if (b == "h_kinetic") {
      S = h_kinetic_system();
    } else if (b == "free_particle") {
      S = free_particle_system(get_int(field(j, "dim", path), path + ".dim", 1));
    } else {
      fail(path + ".builtin", "unknown system '" + b + "'");
    }
  } else {
    S.loopoid = loopoid_from_json(field(j, "loopoid", path), path + ".loopoid");
    const Polynomial L = polynomial_from_json(field(j, "lagrangian", path), path + ".lagrangian");
    if (L.nvars() != S.loopoid.dim_g) fail(path + ".lagrangian.nvars", "must equal the loopoid dimension");
    S.L = ScalarField(L);
    S.name = S.loopoid.name;
  }
  if (j.contains("newton")) {
    const json& n = j["newton"];
    const std::string np = path + ".newton";
    require_object(n, np);
    allow_keys(n, {"max_iter", "tol", "damping"}, np);
    S.newton.max_iter = opt_int(n, "max_iter", np, S.newton.max_iter, 1);
    S.newton.tol = opt_double(n, "tol", np, S.newton.tol);
    if (n.contains("damping")) {
      if (!n["damping"].is_boolean()) fail(np + ".damping", "expected a boolean");
      S.newton.damping = n["damping"].get<bool>();
    }
  }
  S.fd_step = opt_double(j, "fd_step", path, S.fd_step);
  if (j.contains("initial")) vec_from_json(j["initial"], path + ".initial", S.loopoid.dim_g);
  if (j.contains("branch_seed")) vec_from_json(j["branch_seed"], path + ".branch_seed", S.loopoid.dim_g);
  opt_int(j, "steps", path, 0, 0);
  return S;
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

json to_json(const StructureTensor& c) {
  json a = json::array();
  for (const Mat& m : c) a.push_back(to_json(m));
  return a;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error(ErrorCode::UsageError, "CSV row width differs from the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

}  // namespace loopoid::io
