// Acceptance gate. `acceptance --criterion N` prints one PASS/FAIL line for
// criterion N followed by its sub-checks and exits 0 iff every sub-check
// passed. Without arguments all criteria run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "loopoid/cli.hpp"
#include "loopoid/discrete_mechanics.hpp"
#include "loopoid/finite_structures.hpp"
#include "loopoid/lie_functor.hpp"
#include "loopoid/loopoid.hpp"
#include "loopoid/octonion.hpp"
#include "loopoid/random.hpp"
#include "loopoid/skew_algebroid.hpp"
#include "loopoid/smooth_loop.hpp"
#include "loopoid/tangent_cotangent.hpp"

using namespace loopoid;

namespace {

struct Sub {
  std::string name;
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<Sub>()> run;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Sub below(const std::string& name, double value, double tol) {
  return {name, value < tol, num(value) + " < " + num(tol)};
}

Sub flag(const std::string& name, bool value, const std::string& detail = "") { return {name, value, detail}; }

using Clock = std::chrono::steady_clock;

Sub runtime(Clock::time_point start, double limit_s) {
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  return {"runtime", s < limit_s, num(s) + " s < " + num(limit_s) + " s"};
}

Vec v(std::initializer_list<double> xs) {
  Vec r(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) r[i++] = x;
  return r;
}

// Rows of e_i e_j, j = 0..7, as printed with the octonion table.
const char* kPrinted[8] = {
    "e0 e1 e2 e3 e4 e5 e6 e7",     "e1 -e0 e3 -e2 e5 -e4 -e7 e6", "e2 -e3 -e0 e1 e6 e7 -e4 -e5",
    "e3 e2 -e1 -e0 e7 -e6 e5 -e4", "e4 -e5 -e6 -e7 -e0 e1 e2 e3", "e5 e4 -e7 e6 -e1 -e0 -e3 e2",
    "e6 e7 e4 -e5 -e2 e3 -e0 -e1", "e7 -e6 e5 e4 -e3 -e2 e1 -e0",
};

std::vector<Sub> criterion1() {
  const auto t0 = Clock::now();
  std::vector<Sub> out;
  int matches = 0;
  for (int i = 0; i < 8; ++i) {
    std::istringstream row(kPrinted[i]);
    for (int j = 0; j < 8; ++j) {
      std::string cell;
      row >> cell;
      if (Octoniond::basis(i) * Octoniond::basis(j) == parse_octonion(cell)) ++matches;
    }
  }
  out.push_back({"basis products equal the printed table", matches == 64, std::to_string(matches) + "/64"});

  CounterRng rng(1);
  double rel = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Octoniond g = Octoniond::from(rng.normal_vec(8)), h = Octoniond::from(rng.normal_vec(8));
    rel = std::max(rel, std::abs((g * h).norm() - g.norm() * h.norm()) / (g.norm() * h.norm()));
  }
  out.push_back(below("|gh| = |g||h| on 1e4 pairs (relative)", rel, 1e-12));

  double mou = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Octoniond a = Octoniond::from(rng.normal_vec(8).normalized());
    const Octoniond x = Octoniond::from(rng.normal_vec(8).normalized());
    const Octoniond y = Octoniond::from(rng.normal_vec(8).normalized());
    mou = std::max({mou, (((a * x) * a) * y - a * (x * (a * y))).norm(),
                    (((x * a) * y) * a - x * (a * (y * a))).norm(), ((a * x) * (y * a) - (a * (x * y)) * a).norm()});
  }
  out.push_back(below("Moufang identities on 1e3 unit triples", mou, 1e-9));
  out.push_back(runtime(t0, 1.0));
  return out;
}

std::vector<Sub> criterion2() {
  const auto t0 = Clock::now();
  std::vector<Sub> out;
  const StructureConstants sc = extract_structure_constants(h_loop());
  // s^1_12 = 1, s^2_12 = -1: [X1, X2] = X1 - X2.
  StructureTensor expect = zero_structure(2);
  expect[0](0, 1) = 1;
  expect[0](1, 0) = -1;
  expect[1](0, 1) = -1;
  expect[1](1, 0) = 1;
  double err = 0.0;
  for (int k = 0; k < 2; ++k) err = std::max(err, (sc.algebra.s[k] - expect[k]).cwiseAbs().maxCoeff());
  out.push_back(below("H bracket entries vs {+1,-1,0}", err, 1e-6));

  CounterRng rng(2);
  double rt = 0.0;
  int count = 0;
  for (int dim = 2; dim <= 5; ++dim)
    for (int rep = 0; rep < 25; ++rep, ++count) {
      const StructureTensor C = random_antisymmetric(dim, rng);
      const StructureConstants r = extract_structure_constants(bracket_loop(dim, C));
      for (int k = 0; k < dim; ++k) rt = std::max(rt, (r.algebra.s[k] - C[k]).cwiseAbs().maxCoeff());
    }
  out.push_back(below("bracket_loop round trip, " + std::to_string(count) + " tensors, dims 2-5", rt, 1e-6));
  out.push_back(runtime(t0, 5.0));
  return out;
}

std::vector<Sub> criterion3() {
  std::vector<Sub> out;
  const ChartedQuasiloopoid Q = product_loopoid(h_loop(), 2);
  const FrameField F(Q, v({0, 0}));
  CounterRng rng(3);
  double left = 0.0, right = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vec g = sample_element(Q, rng);
    const double x1 = g[0], x2 = g[1];
    const Vec expect[4] = {v({1, x2, 0, 0, 0, 0}), v({x1, 1, 0, 0, 0, 0}), v({0, 0, 0, 0, 1, 0}), v({0, 0, 0, 0, 0, 1})};
    for (int i = 0; i < 4; ++i)
      left = std::max(left, (prolong(F, Vec::Unit(4, i), Side::Left, g) - expect[i]).norm());
    right = std::max({right, (prolong(F, Vec::Unit(4, 0), Side::Right, g) - v({1 + x2, 0, 0, 0, 0, 0})).norm(),
                      (prolong(F, Vec::Unit(4, 1), Side::Right, g) - v({0, 1 + x1, 0, 0, 0, 0})).norm()});
  }
  out.push_back(below("left prolongations X1..X4 at 100 sampled g", left, 1e-7));
  out.push_back(below("right prolongations X1, X2 at 100 sampled g", right, 1e-7));

  StructureTensor expect = zero_structure(4);
  expect[0](0, 1) = 1;
  expect[0](1, 0) = -1;
  expect[1](0, 1) = -1;
  expect[1](1, 0) = 1;
  double bl = 0.0, br = 0.0, other = 0.0;
  for (const Vec& u : {v({0, 0}), v({0.3, -0.2}), v({-0.4, 0.1})}) {
    const StructureTensor l = bracket_table(F, Side::Left, u);
    const StructureTensor r = bracket_table(F, Side::Right, u);
    for (int k = 0; k < 4; ++k) {
      bl = std::max(bl, std::abs(l[k](0, 1) - expect[k](0, 1)));
      br = std::max(br, std::abs(r[k](0, 1) + expect[k](0, 1)));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if ((i == 0 && j == 1) || (i == 1 && j == 0)) continue;
          other = std::max({other, std::abs(l[k](i, j)), std::abs(r[k](i, j))});
        }
    }
  }
  out.push_back(below("[X1,X2]_l = X1 - X2", bl, 1e-6));
  out.push_back(below("[X1,X2]_r = X2 - X1", br, 1e-6));
  out.push_back(below("all other basis brackets", other, 1e-6));
  return out;
}

std::vector<Sub> criterion4() {
  std::vector<Sub> out;
  CounterRng rng(4);
  const ChartedQuasiloopoid P = product_loopoid(octonion_loop(), 1);
  const ChartedQuasiloopoid R = prolongation_loopoid(P, sheared_fibration(1, 1));
  const std::vector<std::pair<std::string, ChartedQuasiloopoid>> cases = {{"product over octonions", P},
                                                                         {"prolongation loopoid", R}};
  for (const auto& [label, Q] : cases) {
    const SignReport s = bracket_sign_residuals(Q, Vec::Constant(Q.dim_m, 0.1), 4, rng);
    out.push_back(flag(label + ": has two-sided inverse", s.has_inverse));
    out.push_back(below(label + ": |[X,Y]_l + [X,Y]_r|", s.bracket_sum, 1e-6));
    out.push_back(below(label + ": |T iota(X^alpha) + X^beta|", s.inverse_tangent, 1e-7));
  }
  return out;
}

std::vector<Sub> criterion5() {
  std::vector<Sub> out;
  CounterRng rng(5);
  const std::vector<std::pair<std::string, ChartedQuasiloopoid>> loopoids = {
      {"product over H", product_loopoid(h_loop(), 2)},
      {"product over octonions", product_loopoid(octonion_loop(), 1)},
      {"pair groupoid", pair_groupoid(2)},
      {"prolongation loopoid", prolongation_loopoid(product_loopoid(h_loop(), 1), sheared_fibration(1, 1))},
  };
  for (const auto& [label, Q] : loopoids)
    for (Side side : {Side::Left, Side::Right}) {
      const AlmostLieReport r = check_almost_lie(Q, side, Vec::Constant(Q.dim_m, 0.1), 3, rng);
      out.push_back(below(label + (side == Side::Left ? " (left)" : " (right)"), r.residual, 1e-6));
    }

  CounterRng arng(55);
  const SkewAlgebra g{3, random_antisymmetric(3, arng)};
  const SkewAlgebroidChart nonjacobi = tangent_plus_algebra_chart(1, g);
  out.push_back({"seeded input violates Jacobi", algebroid_jacobi_residual(nonjacobi, 10, rng) > 1e-3,
                 "residual " + num(algebroid_jacobi_residual(nonjacobi, 10, rng))});
  const std::vector<std::pair<std::string, SkewAlgebroidChart>> prolonged = {
      {"prolongation of non-Jacobi TM x g over sheared fibration", prolong_algebroid(nonjacobi, sheared_fibration(1, 2))},
      {"prolongation of affine line over sheared fibration", prolong_algebroid(affine_line_chart(1.0), sheared_fibration(1, 1))},
      {"prolongation of TR^2 over trivial fibration", prolong_algebroid(tangent_bundle_chart(2), trivial_fibration(2, 1))},
      {"prolongation of a skew algebra over R^2", prolong_algebroid(skew_algebra_chart(g), trivial_fibration(0, 2))},
  };
  for (const auto& [label, A] : prolonged) out.push_back(below(label, check_almost_lie(A, 10, rng).residual, 1e-6));
  return out;
}

std::vector<Sub> criterion6() {
  std::vector<Sub> out;
  const ChartedQuasiloopoid Q = loop_as_loopoid(SmoothLoopChart(1, Vec::Zero(1), [](const Vec& x, const Vec& y) -> Vec {
    return Vec::Constant(1, x[0] + y[0] + x[0] * x[0] * y[0]);
  }));
  CounterRng rng(6);
  double tm = 0.0, bt = 0.0, at = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-0.5, 0.5), y = rng.uniform(-0.5, 0.5);
    const double xd = rng.uniform(-1, 1), yd = rng.uniform(-1, 1);
    const TangentElement p = tangent_multiply(Q, {v({x}), v({xd})}, {v({y}), v({yd})});
    tm = std::max(tm, std::abs(p.vector[0] - (xd * (1 + 2 * x * y) + yd * (1 + x * x))));
    const double mu = rng.uniform(-2, 2);
    bt = std::max(bt, std::abs(cotangent_fibration(Q, Anchor::Beta, {v({x}), v({mu})})[0] - mu * (1 + x * x)));
    at = std::max(at, std::abs(cotangent_fibration(Q, Anchor::Alpha, {v({y}), v({mu})})[0] - mu));
  }
  out.push_back(below("tangent product on x+y+x^2y, 100 samples", tm, 1e-8));
  out.push_back(below("beta-tilde(x,p) = p(1+x^2)", bt, 1e-7));
  out.push_back(below("alpha-tilde(y,q) = q", at, 1e-7));
  const TangentLoopoidReport r = check_tangent_loopoid(product_loopoid(h_loop(), 2), 10, rng);
  out.push_back(below("bisection formula vs curves on product loopoid", r.curve_agreement, 1e-6));
  return out;
}

std::vector<Sub> criterion7() {
  const auto t0 = Clock::now();
  std::vector<Sub> out;
  const DiscreteLagrangianSystem S = h_kinetic_system();
  const double s21 = std::sqrt(21.0);
  const Vec first = v({0.5 * (1 + s21), 0.5 * (s21 - 3)});
  const double third1 = 1.5 - s21 + 0.5 * std::sqrt(125 - 16 * s21);

  auto step_from = [&](const Vec& g, const std::string& label) {
    try {
      const Vec h = step_solve(S, g);
      out.push_back(below("step_solve from " + label, (h.head(2) - first).cwiseAbs().maxCoeff(), 1e-8));
    } catch (const Error& e) {
      out.push_back({"step_solve from " + label, false, std::string(to_string(e.code())) + ": " + e.what()});
    }
  };
  step_from(v({1, 2, 0.3, -0.4, 0, 0}), "(1,2,a,b,0,0)");
  step_from(v({1, 2, 0.3, -0.4, 0.5, 0.2}), "(1,2,a,b,c,d) with c,d != 0");

  Trajectory t;
  try {
    t = trajectory(S, v({1, 2, 0.3, -0.4, 0, 0}), 2);
    out.push_back(below("third element, component 1 vs 3/2-sqrt21+sqrt(125-16sqrt21)/2", std::abs(t.points[2][0] - third1), 1e-7));
    out.push_back(below("F-L(g_i+1) = F+L(g_i) along the trajectory", flow_matching_residual(S, t), 1e-7));
  } catch (const Error& e) {
    out.push_back({"two-step trajectory", false, e.what()});
  }

  CounterRng rng(7);
  double fp = 0.0, fm12 = 0.0, fm34 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vec g = rng.uniform_vec(6, -1, 1);
    const Vec p = legendre(S, LegendreSide::Plus, g);
    const Vec m = legendre(S, LegendreSide::Minus, g);
    fp = std::max(fp, (p - v({g[0] + g[1] * g[1], g[0] * g[0] + g[1], g[4], g[5]})).cwiseAbs().maxCoeff());
    fm12 = std::max(fm12, (m.head(2) - v({g[0] + g[1] * g[0], g[1] + g[0] * g[1]})).cwiseAbs().maxCoeff());
    fm34 = std::max(fm34, (m.tail(2) - g.segment(2, 2)).cwiseAbs().maxCoeff());
  }
  out.push_back(below("F+L = (x1+x2^2, x1^2+x2, x5, x6)", fp, 1e-7));
  out.push_back(below("F-L components 1-2 = (x1+x2x1, x2+x1x2)", fm12, 1e-7));
  out.push_back(below("F-L components 3-4 = (x3, x4) as printed", fm34, 1e-7));

  double unit_plus = 0.0, unit_pm = 0.0;
  for (const Vec& u : {v({0.3, -0.4}), v({-1.0, 0.5})}) {
    const Vec e = S.loopoid.unit(u);
    const Vec p = legendre(S, LegendreSide::Plus, e), m = legendre(S, LegendreSide::Minus, e);
    unit_plus = std::max(unit_plus, (p - v({0, 0, u[0], u[1]})).cwiseAbs().maxCoeff());
    unit_pm = std::max(unit_pm, (p - m).cwiseAbs().maxCoeff());
  }
  out.push_back(below("F+L(alpha(g)) = x3 X^3 + x4 X^4 at units", unit_plus, 1e-7));
  out.push_back(below("F-L(alpha(g)) = F+L(alpha(g)) at units off the origin", unit_pm, 1e-7));

  const RegularityReport r = regularity_check(S, v({0.3, -0.4}), 0.2, 4);
  out.push_back(flag("regular = true at units", r.regular, "min fiber sv " + num(r.min_fiber_sv_plus)));
  Mat plus_table = Mat::Zero(4, 6), minus_table = Mat::Zero(4, 6);
  plus_table(0, 0) = plus_table(1, 1) = plus_table(2, 4) = plus_table(3, 5) = 1;
  for (int i = 0; i < 4; ++i) minus_table(i, i) = 1;
  out.push_back(below("T F+L table (d1->X1, d2->X2, d3,d4->0, d5->X3, d6->X4)",
                      (r.plus_directional - plus_table).cwiseAbs().maxCoeff(), 1e-6));
  out.push_back(below("T F-L table d1,d2 (->X1, X2), d5,d6 (->0)",
                      std::max((r.minus_directional.leftCols(2) - minus_table.leftCols(2)).cwiseAbs().maxCoeff(),
                               r.minus_directional.rightCols(2).cwiseAbs().maxCoeff()),
                      1e-6));
  out.push_back(below("T F-L table d3,d4 (->X3, X4) as printed",
                      (r.minus_directional.middleCols(2, 2) - minus_table.middleCols(2, 2)).cwiseAbs().maxCoeff(), 1e-6));
  out.push_back(runtime(t0, 10.0));
  return out;
}

std::vector<Sub> criterion8() {
  const auto t0 = Clock::now();
  std::vector<Sub> out;
  const CayleyTable z2 = transversal_loop(cyclic_group(4), {0, 2}, {0, 1});
  out.push_back(flag("Z4 / {0,2} with S = {0,1} gives the Z2 table",
                     z2.rows() == std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  const IdentityReport s3 = validate_latin_square(transversal_loop(symmetric_group_s3(), {0, 1}, {0, 3, 4}));
  out.push_back(flag("S3 / {0,1} with S = {0,3,4}: exhaustive", s3.exhaustive));
  out.push_back(flag("S3 / {0,1} with S = {0,3,4}: Latin square with unit", s3.is_latin_square && s3.unit.has_value()));
  out.push_back(flag("S3 / {0,1} with S = {0,3,4}: left inverse property", s3.left_inverse_property));

  std::vector<int> id(16), flip(16);
  for (int i = 0; i < 16; ++i) {
    id[static_cast<std::size_t>(i)] = i;
    flip[static_cast<std::size_t>(i)] = i % 8 < 4 ? i : (i + 8) % 16;
  }
  const IdentityReport base = validate_latin_square(octonion_basis_loop());
  const IdentityReport sd = validate_latin_square(semidirect_loop(octonion_basis_loop(), {id, flip}));
  out.push_back(flag("octonion basis loop is I.P.", base.inverse_property && base.exhaustive));
  out.push_back(flag("semidirect product (order 32) is I.P., exhaustively", sd.inverse_property && sd.exhaustive));
  out.push_back(runtime(t0, 1.0));
  return out;
}

std::vector<Sub> criterion9() {
  std::vector<Sub> out;
  const std::string d = LOOPOID_DATA_DIR;
  const std::vector<std::vector<std::string>> cmds = {
      {"verify-finite", "--spec", d + "/z4_transversal.json"},
      {"octonion", "--spec", d + "/octonion.json"},
      {"loop-algebra", "--spec", d + "/exloopoid_H.json"},
      {"loopoid-check", "--spec", d + "/product_H.json"},
      {"loopoid-check", "--spec", d + "/phi_cubic.json"},
      {"lie-functor", "--spec", d + "/product_octonion.json"},
      {"lie-functor", "--spec", d + "/affine_prolong.json"},
      {"tangent-check", "--spec", d + "/product_H.json"},
      {"simulate", "--spec", d + "/h_kinetic.json", "--steps", "2"},
      {"legendre", "--spec", d + "/h_kinetic.json"},
      {"simulate", "--spec", d + "/free_particle.json"},
  };
  for (auto c : cmds) {
    c.insert(c.begin(), "loopoid_lab");
    c.insert(c.end(), {"--seed", "11"});
    std::string outs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      std::ostringstream o, e;
      codes[k] = run_command(c, o, e);
      outs[k] = o.str();
    }
    const std::string label = c[1] + " " + c[3].substr(c[3].find_last_of('/') + 1);
    out.push_back({label + " byte-identical", outs[0] == outs[1] && codes[0] == codes[1] && codes[0] != 2,
                   std::to_string(outs[0].size()) + " bytes, exit " + std::to_string(codes[0])});
  }
  return out;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "octonion table, norm and Moufang", criterion1},
      {2, "structure-constant extraction", criterion2},
      {3, "Lie functor on the product loopoid over H", criterion3},
      {4, "opposite brackets on I.P. loopoids", criterion4},
      {5, "almost-Lie residuals", criterion5},
      {6, "tangent and cotangent", criterion6},
      {7, "discrete mechanics example", criterion7},
      {8, "finite loops", criterion8},
      {9, "determinism", criterion9},
  };
  return all;
}

bool run(const Criterion& c) {
  std::vector<Sub> subs;
  try {
    subs = c.run();
  } catch (const std::exception& e) {
    subs.push_back({"uncaught error", false, e.what()});
  }
  bool ok = true;
  for (const Sub& s : subs) ok = ok && s.pass;
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str());
  for (const Sub& s : subs)
    std::printf("    [%s] %s%s%s\n", s.pass ? "PASS" : "FAIL", s.name.c_str(), s.detail.empty() ? "" : ": ",
                s.detail.c_str());
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  bool ok = true;
  bool found = false;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    found = true;
    ok = run(c) && ok;
  }
  if (!found) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return ok ? 0 : 1;
}
