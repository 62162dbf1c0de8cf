/**
 * @brief CSV output and far-field CSV input.
 *
 * Every file starts with "# elscat <version> config=<hash>", then a column
 * line. Reals are printed with 17 significant digits so files are stable
 * bit for bit.
 *
 *     grid.csv            k, j, x1, x2, inside
 *     boundary.csv        j, t, x1, x2, n1, n2, weight
 *     basis.csv           c, k, j, z1, z2, width
 *     farfield*.csv       incident_index, mode, angle, re_u1, im_u1, re_u2, im_u2
 *     interior_field.csv  incident_index, k, j, x1, x2, re_u1, im_u1, re_u2, im_u2
 *     iterations.csv      n, residual, coeff_error
 *     lambda files        x1, x2, lambda_star
 *     eigenstrain.csv     i, j, x1, x2, h11, h22, h12
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "elscat/config.hpp"

namespace elscat {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& hash, const std::string& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write " + path.string());
    out_ << "# elscat " << kToolVersion << " config=" << hash << '\n' << columns << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt17(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <typename I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  std::ofstream out_;
};

inline void write_grid(const std::filesystem::path& p, const std::string& hash, const ScatterGrid& g) {
  CsvWriter w(p, hash, "k,j,x1,x2,inside");
  for (int j = 0; j < g.N; ++j)
    for (int k = 0; k < g.N; ++k) {
      const auto idx = g.index(k, j);
      const Vec2 x = g.point(idx);
      w.row(k, j, x.x(), x.y(), g.is_inside(idx) ? 1 : 0);
    }
}

inline void write_boundary(const std::filesystem::path& p, const std::string& hash, const BoundaryGeometry& b) {
  CsvWriter w(p, hash, "j,t,x1,x2,n1,n2,weight");
  for (std::size_t j = 0; j < b.size(); ++j)
    w.row(j, b.params[j], b.points[j].x(), b.points[j].y(), b.normals[j].x(), b.normals[j].y(), b.weight(j));
}

inline void write_basis(const std::filesystem::path& p, const std::string& hash, const GaussianBasis& b) {
  CsvWriter w(p, hash, "c,k,j,z1,z2,width");
  for (int c = 0; c < b.size(); ++c) w.row(c, c / b.K(), c % b.K(), b.center(c / b.K()), b.center(c % b.K()), b.width());
}

inline void write_far_field(const std::filesystem::path& p, const std::string& hash, const FarFieldSet& f) {
  CsvWriter w(p, hash, "incident_index,mode,angle,re_u1,im_u1,re_u2,im_u2");
  for (std::size_t i = 0; i < f.patterns.size(); ++i)
    for (int mode = 0; mode < 2; ++mode) {
      const Eigen::VectorXcd& v = mode == 0 ? f.patterns[i].p : f.patterns[i].s;
      for (std::size_t m = 0; m < f.angles.size(); ++m) {
        const auto a = static_cast<Eigen::Index>(2 * m);
        w.row(i, mode == 0 ? "p" : "s", f.angles[m], v(a).real(), v(a).imag(), v(a + 1).real(), v(a + 1).imag());
      }
    }
}

/// Reads a far-field CSV written by write_far_field.
inline FarFieldSet read_far_field(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ShapeMismatch("cannot open far-field file " + p.string());
  std::string line;
  struct Row {
    std::size_t inc;
    int mode;
    double angle;
    Complex u1, u2;
  };
  std::vector<Row> rows;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "incident_index,mode,angle,re_u1,im_u1,re_u2,im_u2")
        throw ShapeMismatch(p.string() + ": unexpected far-field columns");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string f[7];
    for (auto& s : f)
      if (!std::getline(ss, s, ',')) throw ShapeMismatch(p.string() + ": short row");
    if (f[1] != "p" && f[1] != "s") throw ShapeMismatch(p.string() + ": mode must be p or s");
    try {
      rows.push_back({std::stoul(f[0]), f[1] == "p" ? 0 : 1, std::stod(f[2]), Complex(std::stod(f[3]), std::stod(f[4])),
                      Complex(std::stod(f[5]), std::stod(f[6]))});
    } catch (const std::exception&) {
      throw ShapeMismatch(p.string() + ": malformed number in row '" + line + "'");
    }
  }
  if (rows.empty()) throw ShapeMismatch(p.string() + ": no data rows");
  std::size_t M = 0;
  while (M < rows.size() && rows[M].inc == 0 && rows[M].mode == 0) ++M;
  if (rows.size() % (2 * M) != 0) throw ShapeMismatch(p.string() + ": row count is not incidents x 2 x M");
  FarFieldSet out;
  for (std::size_t m = 0; m < M; ++m) out.angles.push_back(rows[m].angle);
  const std::size_t ni = rows.size() / (2 * M);
  out.patterns.resize(ni);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = r / (2 * M), mode = (r / M) % 2, m = r % M;
    if (rows[r].inc != i || static_cast<std::size_t>(rows[r].mode) != mode || rows[r].angle != out.angles[m])
      throw ShapeMismatch(p.string() + ": rows are not ordered by incident, mode, direction");
    auto& v = mode == 0 ? out.patterns[i].p : out.patterns[i].s;
    if (v.size() == 0) v.resize(static_cast<Eigen::Index>(2 * M));
    v(static_cast<Eigen::Index>(2 * m)) = rows[r].u1;
    v(static_cast<Eigen::Index>(2 * m + 1)) = rows[r].u2;
  }
  return out;
}

/// Interior fields, one column of `u` per incident wave.
inline void write_interior_field(const std::filesystem::path& p, const std::string& hash, const ScatterGrid& g,
                                 const Eigen::MatrixXcd& u) {
  CsvWriter w(p, hash, "incident_index,k,j,x1,x2,re_u1,im_u1,re_u2,im_u2");
  const Eigen::Index n = g.inside_count();
  for (Eigen::Index i = 0; i < u.cols(); ++i)
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto idx = g.inside_nodes[static_cast<std::size_t>(s)];
      const Vec2 x = g.point(idx);
      w.row(i, g.k_of(idx), g.j_of(idx), x.x(), x.y(), u(s, i).real(), u(s, i).imag(), u(n + s, i).real(),
            u(n + s, i).imag());
    }
}

inline void write_iterations(const std::filesystem::path& p, const std::string& hash,
                             const std::vector<IterationRecord>& recs) {
  CsvWriter w(p, hash, "n,residual,coeff_error");
  for (const auto& r : recs) w.row(r.n, r.residual, r.coeff_error);
}

/// lambda*(x) at the inside nodes.
inline void write_lambda(const std::filesystem::path& p, const std::string& hash, const ScatterGrid& g,
                         const std::function<double(const Vec2&)>& f) {
  CsvWriter w(p, hash, "x1,x2,lambda_star");
  for (Eigen::Index s = 0; s < g.inside_count(); ++s) {
    const Vec2 x = g.inside_point(s);
    w.row(x.x(), x.y(), f(x));
  }
}

/// Cells of the inclusion support only.
inline void write_eigenstrain(const std::filesystem::path& p, const std::string& hash, const EshelbyResult& r,
                              std::size_t R, const std::vector<std::optional<ContrastModuli>>& support) {
  CsvWriter w(p, hash, "i,j,x1,x2,h11,h22,h12");
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < R; ++j) {
      const std::size_t cell = i * R + j;
      if (!support[cell]) continue;
      const Tensor2 h = r.at(cell);
      w.row(i, j, (static_cast<double>(i) + 0.5) / static_cast<double>(R) - 0.5,
            (static_cast<double>(j) + 0.5) / static_cast<double>(R) - 0.5, h(0, 0), h(1, 1), h(0, 1));
    }
}

/// JSON summary with the same stamp as the CSV files.
inline void write_json(const std::filesystem::path& p, const std::string& hash, Json body) {
  nlohmann::ordered_json o;
  o["tool"] = std::string("elscat ") + kToolVersion;
  o["config"] = hash;
  for (auto& [k, v] : body.items()) o[k] = v;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << o.dump(2) << '\n';
}

}  // namespace elscat
