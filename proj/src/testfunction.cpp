#include "nsfd/testfunction.hpp"

#include <cmath>

#include "nsfd/errors.hpp"

namespace nsfd {

double TestFunction::d1(int comp, int axis, const Point& x) const {
  std::array<int, 3> order{0, 0, 0};
  order[static_cast<std::size_t>(axis)] = 1;
  return phi[comp].eval_partial(order, x);
}

double TestFunction::d2_same(int comp, int axis, const Point& x) const {
  std::array<int, 3> order{0, 0, 0};
  order[static_cast<std::size_t>(axis)] = 2;
  return phi[comp].eval_partial(order, x);
}

namespace {

// max over a tensor sample grid of |sum_terms coef * Pa Pb Pc|, evaluated
// axis-wise so the scan stays cheap for high derivative counts.
double scan_max_abs(const SepScalar& s, const Box& box, int n) {
  std::vector<double> xs[3];
  for (int i = 0; i < 3; ++i) {
    xs[i].resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      xs[i][static_cast<std::size_t>(k)] =
          box.lo[i] + (box.hi[i] - box.lo[i]) * (static_cast<double>(k) / (n - 1));
  }
  std::size_t nt = s.terms.size();
  std::vector<std::vector<double>> pa(nt), pb(nt), pc(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pa[t].resize(xs[0].size());
    pb[t].resize(xs[1].size());
    pc[t].resize(xs[2].size());
    for (std::size_t k = 0; k < xs[0].size(); ++k) pa[t][k] = s.terms[t].p[0](xs[0][k]);
    for (std::size_t k = 0; k < xs[1].size(); ++k) pb[t][k] = s.terms[t].p[1](xs[1][k]);
    for (std::size_t k = 0; k < xs[2].size(); ++k) pc[t][k] = s.terms[t].p[2](xs[2][k]);
  }
  double m = 0;
  for (std::size_t a = 0; a < xs[0].size(); ++a)
    for (std::size_t b = 0; b < xs[1].size(); ++b)
      for (std::size_t c = 0; c < xs[2].size(); ++c) {
        double v = 0;
        for (std::size_t t = 0; t < nt; ++t) v += s.terms[t].coef * pa[t][a] * pb[t][b] * pc[t][c];
        m = std::max(m, std::abs(v));
      }
  return m;
}

SepScalar partial_of(const SepScalar& s, const std::array<int, 3>& order) {
  SepScalar out = s;
  for (int axis = 0; axis < 3; ++axis)
    for (int k = 0; k < order[static_cast<std::size_t>(axis)]; ++k) out = out.partial(axis);
  return out;
}

}  // namespace

double w4inf_norm(const SepVector& phi, const Box& support, int samples_per_axis) {
  double m = 0;
  for (int a1 = 0; a1 <= 4; ++a1)
    for (int a2 = 0; a2 + a1 <= 4; ++a2)
      for (int a3 = 0; a3 + a2 + a1 <= 4; ++a3)
        for (int comp = 0; comp < 3; ++comp) {
          SepScalar d = partial_of(phi[static_cast<std::size_t>(comp)], {a1, a2, a3});
          m = std::max(m, scan_max_abs(d, support, samples_per_axis));
        }
  return m;
}

double TestFunction::max_grad(int samples_per_axis) const {
  double m2 = 0;
  // scan |grad phi|^2 componentwise via sup bounds per entry; exactness is
  // not required, the scan is a measured constant.
  std::vector<double> entry(9, 0.0);
  for (int comp = 0; comp < 3; ++comp)
    for (int axis = 0; axis < 3; ++axis) {
      std::array<int, 3> order{0, 0, 0};
      order[static_cast<std::size_t>(axis)] = 1;
      SepScalar d = partial_of(phi[static_cast<std::size_t>(comp)], order);
      entry[static_cast<std::size_t>(3 * comp + axis)] = scan_max_abs(d, support, samples_per_axis);
    }
  for (double e : entry) m2 += e * e;
  return std::sqrt(m2);
}

double ScalarTestFunction::d1(int axis, const Point& x) const {
  std::array<int, 3> order{0, 0, 0};
  order[static_cast<std::size_t>(axis)] = 1;
  return f.eval_partial(order, x);
}

double ScalarTestFunction::max_grad(int samples_per_axis) const {
  double m2 = 0;
  for (int axis = 0; axis < 3; ++axis) {
    std::array<int, 3> order{0, 0, 0};
    order[static_cast<std::size_t>(axis)] = 1;
    double e = scan_max_abs(partial_of(f, order), support, samples_per_axis);
    m2 += e * e;
  }
  return std::sqrt(m2);
}

namespace {

TestFunction make_member(const std::string& name, const Point& center, const Point& halfwidth,
                         const std::array<double, 3>& amp) {
  TestFunction tf;
  tf.name = name;
  SepVector psi = bump_potential(center, halfwidth, amp);
  tf.phi = curl(psi);
  tf.support = psi[0].support;
  double n = w4inf_norm(tf.phi, tf.support);
  for (auto& c : tf.phi) c.scale(1.0 / n);
  tf.w4inf = 1.0;
  return tf;
}

}  // namespace

const std::vector<TestFunction>& dictionary() {
  static const std::vector<TestFunction> dict = [] {
    std::vector<TestFunction> d;
    d.push_back(make_member("d0", {0.50, 0.50, 0.50}, {0.22, 0.22, 0.22}, {0, 0, 1}));
    d.push_back(make_member("d1", {0.46, 0.50, 0.54}, {0.18, 0.20, 0.18}, {1, 0, 0}));
    d.push_back(make_member("d2", {0.54, 0.46, 0.50}, {0.20, 0.18, 0.18}, {0, 1, 0}));
    d.push_back(make_member("d3", {0.50, 0.54, 0.46}, {0.16, 0.16, 0.20}, {1, 1, 1}));
    d.push_back(make_member("d4", {0.42, 0.42, 0.42}, {0.15, 0.15, 0.15}, {1, -1, 0}));
    d.push_back(make_member("d5", {0.58, 0.58, 0.58}, {0.15, 0.15, 0.15}, {0, 1, -1}));
    d.push_back(make_member("d6", {0.50, 0.42, 0.58}, {0.15, 0.16, 0.15}, {1, 0, -1}));
    d.push_back(make_member("d7", {0.45, 0.55, 0.50}, {0.18, 0.14, 0.16}, {0.5, -1, 0.7}));
    return d;
  }();
  return dict;
}

const TestFunction& dictionary_member(const std::string& name) {
  for (const TestFunction& tf : dictionary())
    if (tf.name == name) return tf;
  throw ConfigError("unknown dictionary member '" + name + "'");
}

std::vector<ScalarTestFunction> scalar_components(const TestFunction& tf) {
  std::vector<ScalarTestFunction> out;
  for (int comp = 0; comp < 3; ++comp) {
    const SepScalar& s = tf.phi[static_cast<std::size_t>(comp)];
    bool zero = true;
    for (const SepTerm& t : s.terms)
      if (t.coef != 0) zero = false;
    if (zero) continue;
    ScalarTestFunction stf;
    stf.name = tf.name + "." + std::to_string(comp);
    stf.f = s;
    stf.support = tf.support;
    out.push_back(std::move(stf));
  }
  return out;
}

TestFunction with_time_cutoff(const TestFunction& tf, double T) {
  TestFunction out = tf;
  out.theta = Envelope::poly_bump(0.2 * T, 0.7 * T);  // support [-T/2, 9T/10]
  return out;
}

VectorField sample_on_grid(const TestFunction& tf, std::shared_ptr<const GridDomain> g) {
  VectorField out(std::move(g));
  for (std::size_t i = 0; i < out.dom().size(); ++i) {
    Point x = out.dom().position(i);
    for (int c = 0; c < 3; ++c) out.comp(c)[i] = tf.value(c, x);
  }
  return out;
}

ScalarField sample_on_grid(const ScalarTestFunction& tf, std::shared_ptr<const GridDomain> g) {
  ScalarField out(std::move(g));
  for (std::size_t i = 0; i < out.dom().size(); ++i) out[i] = tf.value(out.dom().position(i));
  return out;
}

bool support_clear_of_collar(const Box& support, const GridDomain& g) {
  const double h = g.h();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_boundary(i)) continue;
    Point y = g.position(i);
    Box collar;
    for (int a = 0; a < 3; ++a) {
      collar.lo[a] = y[a] - h;
      collar.hi[a] = y[a] + h;
    }
    if (collar.intersects_closed(support)) return false;
  }
  return true;
}

}  // namespace nsfd
