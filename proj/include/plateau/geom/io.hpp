#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plateau/geom/curve.hpp"
#include "plateau/geom/mesh.hpp"

namespace plateau::geom {

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt17(r[i]);
    os << '\n';
  }
}

inline void write_curve_csv(std::ostream& os, const ArcCurve& c) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : c.samples)
    rows.push_back({p.s, p.position.x(), p.position.y(), p.position.z(), p.T.x(), p.T.y(), p.T.z(),
                    p.N.x(), p.N.y(), p.N.z(), p.B.x(), p.B.y(), p.B.z(), p.kappa, p.tau});
  write_csv(os, {"s", "x", "y", "z", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau"},
            rows);
}

inline void write_darboux_csv(std::ostream& os, const DarbouxField& d) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : d.samples) rows.push_back({p.s, p.kappa_g, p.kappa_n, p.tau_g, p.theta});
  write_csv(os, {"s", "kg", "kn", "tg", "theta"}, rows);
}

inline void write_obj(std::ostream& os, const TriMesh& m) {
  for (const auto& v : m.vertices)
    os << "v " << fmt17(v.x()) << ' ' << fmt17(v.y()) << ' ' << fmt17(v.z()) << '\n';
  for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

/// Reads v/f records (polygons are fan-triangulated; texture and normal
/// indices after '/' are ignored). Negative indices are relative.
inline TriMesh read_obj(std::istream& is) {
  TriMesh m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw Error(ErrorKind::precondition, "OBJ line " + std::to_string(lineno) + ": bad vertex");
      m.vertices.push_back({x, y, z});
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const int k = std::stoi(tok.substr(0, tok.find('/')));
        idx.push_back(k > 0 ? k - 1 : int(m.vertices.size()) + k);
      }
      if (idx.size() < 3)
        throw Error(ErrorKind::precondition, "OBJ line " + std::to_string(lineno) + ": face needs 3 indices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) m.faces.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  build_topology(m);
  return m;
}

inline TriMesh read_obj_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::precondition, "cannot open " + path);
  return read_obj(f);
}

}  // namespace plateau::geom
