// SPDX-License-Identifier: MIT
#include "kls/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kls {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Refines every row (along ξ) or column (along η) of a homogeneous control net.
void refine_direction(KnotVector& kv, std::vector<Eigen::MatrixXd>& curves, const std::vector<double>& knots) {
  for (double k : knots) {
    KnotVector tmp;
    for (auto& c : curves) {
      tmp = kv;
      insert_knot(tmp, c, k);
    }
    kv = tmp;
  }
}

void expect(std::istream& is, const std::string& word) {
  std::string got;
  if (!(is >> got) || got != word) throw Error(ErrorKind::IoError, "mesh file: expected '" + word + "', got '" + got + "'");
}

template <typename T> T read_value(std::istream& is, const char* what) {
  T v;
  if (!(is >> v)) throw Error(ErrorKind::IoError, std::string("mesh file: could not read ") + what);
  return v;
}

}  // namespace

const char* to_string(Side side) {
  switch (side) {
    case Side::XiMin: return "xi_min";
    case Side::XiMax: return "xi_max";
    case Side::EtaMin: return "eta_min";
    case Side::EtaMax: return "eta_max";
  }
  return "unknown";
}

Side side_from_string(const std::string& name) {
  for (auto s : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax})
    if (name == to_string(s)) return s;
  throw Error(ErrorKind::SchemaError, "unknown boundary side '" + name + "'");
}

std::vector<int> Mesh::boundary_nodes(Side side) const {
  std::vector<int> out;
  switch (side) {
    case Side::XiMin:
      for (int j = 0; j < nv(); ++j) out.push_back(node(0, j));
      break;
    case Side::XiMax:
      for (int j = 0; j < nv(); ++j) out.push_back(node(nu() - 1, j));
      break;
    case Side::EtaMin:
      for (int i = 0; i < nu(); ++i) out.push_back(node(i, 0));
      break;
    case Side::EtaMax:
      for (int i = 0; i < nu(); ++i) out.push_back(node(i, nv() - 1));
      break;
  }
  return out;
}

std::vector<int> Mesh::second_row_nodes(Side side) const {
  std::vector<int> out;
  switch (side) {
    case Side::XiMin:
      for (int j = 0; j < nv(); ++j) out.push_back(node(1, j));
      break;
    case Side::XiMax:
      for (int j = 0; j < nv(); ++j) out.push_back(node(nu() - 2, j));
      break;
    case Side::EtaMin:
      for (int i = 0; i < nu(); ++i) out.push_back(node(i, 1));
      break;
    case Side::EtaMax:
      for (int i = 0; i < nu(); ++i) out.push_back(node(i, nv() - 2));
      break;
  }
  return out;
}

std::vector<int> Mesh::boundary_elements(Side side) const {
  std::vector<int> out;
  const int eu = elements_u(), ev = elements_v();
  for (const auto& e : elements) {
    const bool on = (side == Side::XiMin && e.iu == 0) || (side == Side::XiMax && e.iu == eu - 1) ||
                    (side == Side::EtaMin && e.iv == 0) || (side == Side::EtaMax && e.iv == ev - 1);
    if (on) out.push_back(e.id);
  }
  return out;
}

Eigen::VectorXd Mesh::element_weights(const Element& e) const {
  Eigen::VectorXd w(e.nodes.size());
  for (std::size_t a = 0; a < e.nodes.size(); ++a) w(a) = weights(e.nodes[a]);
  return w;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> Mesh::element_controls(const Element& e,
                                                                const Eigen::Matrix<double, Eigen::Dynamic, 3>& x) const {
  Eigen::Matrix<double, Eigen::Dynamic, 3> out(e.nodes.size(), 3);
  for (std::size_t a = 0; a < e.nodes.size(); ++a) out.row(a) = x.row(e.nodes[a]);
  return out;
}

Mesh make_mesh(const KnotVector& ku, const KnotVector& kv, const Eigen::Matrix<double, Eigen::Dynamic, 3>& X,
               const Eigen::VectorXd& weights) {
  validate(ku);
  validate(kv);
  Mesh m;
  m.ku = ku;
  m.kv = kv;
  if (X.rows() != m.num_nodes() || weights.size() != m.num_nodes())
    throw Error(ErrorKind::ParameterError, "control net size does not match the knot vectors");
  for (int i = 0; i < weights.size(); ++i)
    if (!(weights(i) > 0.0)) throw Error(ErrorKind::InvalidWeight, "control weight must be positive");
  m.X = X;
  m.weights = weights;
  const auto su = spans(ku), sv = spans(kv);
  const auto cu = build_extraction(ku), cv = build_extraction(kv);
  const int p = ku.degree, q = kv.degree;
  for (std::size_t jv = 0; jv < sv.size(); ++jv)
    for (std::size_t iu = 0; iu < su.size(); ++iu) {
      Element e;
      e.id = static_cast<int>(m.elements.size());
      e.iu = static_cast<int>(iu);
      e.iv = static_cast<int>(jv);
      e.su = su[iu];
      e.sv = sv[jv];
      e.cu = cu[iu];
      e.cv = cv[jv];
      for (int j = 0; j <= q; ++j)
        for (int i = 0; i <= p; ++i) e.nodes.push_back(m.node(su[iu].first_basis + i, sv[jv].first_basis + j));
      m.elements.push_back(std::move(e));
    }
  return m;
}

Mesh flat_patch(double lx, double ly, int p, int q, int mx, int my) {
  if (!(lx > 0.0) || !(ly > 0.0) || mx < 1 || my < 1)
    throw Error(ErrorKind::ParameterError, "flat patch needs positive dimensions and element counts");
  const KnotVector ku = uniform_knots(p, mx, 0.0, lx), kv = uniform_knots(q, my, 0.0, ly);
  auto greville = [](const KnotVector& k, int i) {
    double s = 0.0;
    for (int r = 1; r <= k.degree; ++r) s += k.knots[i + r];
    return s / k.degree;
  };
  const int nu = ku.num_basis(), nv = kv.num_basis();
  Eigen::Matrix<double, Eigen::Dynamic, 3> X(nu * nv, 3);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) X.row(j * nu + i) << greville(ku, i), greville(kv, j), 0.0;
  return make_mesh(ku, kv, X, Eigen::VectorXd::Ones(nu * nv));
}

Mesh cylinder_patch(double r, double l, double half_angle, int mx, int my) {
  if (!(r > 0.0) || !(l > 0.0) || !(half_angle > 0.0) || !(half_angle < M_PI / 2) || mx < 1 || my < 1)
    throw Error(ErrorKind::ParameterError, "cylinder patch parameters out of range");
  // Quadratic along the axis and exact quadratic arc in η, both with one span.
  KnotVector ku{{0, 0, 0, 1, 1, 1}, 2}, kv{{0, 0, 0, 1, 1, 1}, 2};
  const double c = std::cos(half_angle), s = std::sin(half_angle);
  const Eigen::Vector3d arc[3] = {{0.0, -r * s, r * c}, {0.0, 0.0, r / c}, {0.0, r * s, r * c}};
  const double arc_w[3] = {1.0, c, 1.0};

  std::vector<double> ins_u, ins_v;
  for (int k = 1; k < mx; ++k) ins_u.push_back(static_cast<double>(k) / mx);
  for (int k = 1; k < my; ++k) ins_v.push_back(static_cast<double>(k) / my);

  // Refine the arc along η once, then sweep it along the axis and refine along ξ.
  std::vector<Eigen::MatrixXd> arc_curve(1, Eigen::MatrixXd(3, 4));
  for (int j = 0; j < 3; ++j) arc_curve[0].row(j) << arc[j].transpose() * arc_w[j], arc_w[j];
  refine_direction(kv, arc_curve, ins_v);
  const int nv = kv.num_basis();

  std::vector<Eigen::MatrixXd> axis_curves(nv, Eigen::MatrixXd(3, 4));
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < 3; ++i) {
      Eigen::RowVector4d h = arc_curve[0].row(j);
      h(0) = 0.5 * l * i * h(3);
      axis_curves[j].row(i) = h;
    }
  refine_direction(ku, axis_curves, ins_u);
  const int nu = ku.num_basis();

  Eigen::Matrix<double, Eigen::Dynamic, 3> X(nu * nv, 3);
  Eigen::VectorXd w(nu * nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const Eigen::RowVector4d h = axis_curves[j].row(i);
      X.row(j * nu + i) = h.head<3>() / h(3);
      w(j * nu + i) = h(3);
    }
  return make_mesh(ku, kv, X, w);
}

void write_mesh(std::ostream& os, const Mesh& m) {
  os << "kls-mesh 1\n";
  os << "degrees " << m.ku.degree << ' ' << m.kv.degree << '\n';
  for (const auto* k : {&m.ku, &m.kv}) {
    os << (k == &m.ku ? "knots_u " : "knots_v ") << k->knots.size();
    for (double v : k->knots) os << ' ' << fmt(v);
    os << '\n';
  }
  os << "controls " << m.num_nodes() << '\n';
  for (int a = 0; a < m.num_nodes(); ++a)
    os << fmt(m.X(a, 0)) << ' ' << fmt(m.X(a, 1)) << ' ' << fmt(m.X(a, 2)) << ' ' << fmt(m.weights(a)) << '\n';
  os << "elements " << m.elements.size() << '\n';
  for (const auto& e : m.elements) {
    os << e.id << ' ' << e.iu << ' ' << e.iv << ' ' << e.nodes.size();
    for (int n : e.nodes) os << ' ' << n;
    os << '\n';
  }
  for (auto s : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax}) {
    const auto ids = m.boundary_elements(s);
    os << "boundary " << to_string(s) << ' ' << ids.size();
    for (int id : ids) os << ' ' << id;
    os << '\n';
  }
}

Mesh read_mesh(std::istream& is) {
  expect(is, "kls-mesh");
  if (read_value<int>(is, "version") != 1) throw Error(ErrorKind::IoError, "mesh file: unsupported version");
  expect(is, "degrees");
  KnotVector ku, kv;
  ku.degree = read_value<int>(is, "degree");
  kv.degree = read_value<int>(is, "degree");
  for (auto* k : {&ku, &kv}) {
    expect(is, k == &ku ? "knots_u" : "knots_v");
    const auto n = read_value<std::size_t>(is, "knot count");
    k->knots.resize(n);
    for (auto& v : k->knots) v = read_value<double>(is, "knot");
  }
  expect(is, "controls");
  const int nc = read_value<int>(is, "control count");
  Eigen::Matrix<double, Eigen::Dynamic, 3> X(nc, 3);
  Eigen::VectorXd w(nc);
  for (int a = 0; a < nc; ++a) {
    for (int d = 0; d < 3; ++d) X(a, d) = read_value<double>(is, "coordinate");
    w(a) = read_value<double>(is, "weight");
  }
  Mesh m = make_mesh(ku, kv, X, w);
  expect(is, "elements");
  const auto ne = read_value<std::size_t>(is, "element count");
  if (ne != m.elements.size()) throw Error(ErrorKind::IoError, "mesh file: element count does not match the knots");
  for (auto& e : m.elements) {
    const int id = read_value<int>(is, "element id"), iu = read_value<int>(is, "span"), iv = read_value<int>(is, "span");
    const auto nn = read_value<std::size_t>(is, "node count");
    std::vector<int> nodes(nn);
    for (auto& n : nodes) n = read_value<int>(is, "node");
    if (id != e.id || iu != e.iu || iv != e.iv || nodes != e.nodes)
      throw Error(ErrorKind::IoError, "mesh file: connectivity of element " + std::to_string(id) + " is inconsistent");
  }
  for (auto s : {Side::XiMin, Side::XiMax, Side::EtaMin, Side::EtaMax}) {
    expect(is, "boundary");
    if (side_from_string(read_value<std::string>(is, "side")) != s)
      throw Error(ErrorKind::IoError, "mesh file: boundary sides out of order");
    std::vector<int> ids(read_value<std::size_t>(is, "boundary count"));
    for (auto& id : ids) id = read_value<int>(is, "boundary element");
    if (ids != m.boundary_elements(s))
      throw Error(ErrorKind::IoError, std::string("mesh file: boundary tag ") + to_string(s) + " is inconsistent");
  }
  return m;
}

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  write_mesh(os, mesh);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return read_mesh(is);
}

}  // namespace kls
