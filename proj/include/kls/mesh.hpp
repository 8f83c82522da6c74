// SPDX-License-Identifier: MIT
// Single-patch NURBS surface meshes: element connectivity, boundary tags,
// builders for the flat strip and the cylindrical roof, and a text format.
#pragma once

#include "kls/spline.hpp"
#include "kls/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kls {

enum class Side { XiMin, XiMax, EtaMin, EtaMax };

const char* to_string(Side side);
Side side_from_string(const std::string& name);

struct Element {
  int id = 0;
  int iu = 0, iv = 0;  // span indices along ξ and η
  Span su, sv;
  Eigen::MatrixXd cu, cv;  // extraction operators
  std::vector<int> nodes;  // global control ids in local order a = j (p+1) + i
};

struct Mesh {
  KnotVector ku, kv;
  Eigen::Matrix<double, Eigen::Dynamic, 3> X;  // reference control positions
  Eigen::VectorXd weights;
  std::vector<Element> elements;

  int nu() const { return ku.num_basis(); }
  int nv() const { return kv.num_basis(); }
  int num_nodes() const { return nu() * nv(); }
  int node(int i, int j) const { return j * nu() + i; }
  int elements_u() const { return static_cast<int>(spans(ku).size()); }
  int elements_v() const { return static_cast<int>(spans(kv).size()); }

  // Control points on the first/last row or column of the net.
  std::vector<int> boundary_nodes(Side side) const;
  // Control points one row inside the boundary row.
  std::vector<int> second_row_nodes(Side side) const;
  std::vector<int> boundary_elements(Side side) const;

  Eigen::VectorXd element_weights(const Element& e) const;
  Eigen::Matrix<double, Eigen::Dynamic, 3> element_controls(const Element& e,
                                                            const Eigen::Matrix<double, Eigen::Dynamic, 3>& x) const;
};

// Builds elements and connectivity from knot vectors, controls and weights.
Mesh make_mesh(const KnotVector& ku, const KnotVector& kv, const Eigen::Matrix<double, Eigen::Dynamic, 3>& X,
               const Eigen::VectorXd& weights);

// Flat rectangle [0, lx] x [0, ly] in the z = 0 plane with the parameter
// domain equal to the physical one, so that A_αβ = δ_αβ.
Mesh flat_patch(double lx, double ly, int p, int q, int mx, int my);

// Cylindrical roof of radius r and length l with its axis along x; the
// circumferential direction spans ±half_angle about the +z axis. ξ runs along
// the axis and η along the arc; the arc is exact through rational weights.
Mesh cylinder_patch(double r, double l, double half_angle, int mx, int my);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);
void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace kls
