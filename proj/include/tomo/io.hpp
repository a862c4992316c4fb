#pragma once
// JSON manifests and CSV export.
//
// Manifest layout: {"type", "grids", "values" (row-major), "meta", "schema": 1}.
// Complex values are stored as [re, im] pairs. Grids are {"min", "max", "n"}.

#include "tomo/core.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace tomo {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Malformed or mismatched input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline json grid_json(const Grid1D& g) { return {{"min", g.min()}, {"max", g.max()}, {"n", g.size()}}; }

inline Grid1D grid_from(const json& j) {
  return Grid1D(j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<std::size_t>());
}

inline json real_values(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  return a;
}

inline json complex_values(const Eigen::MatrixXcd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back({m(r, c).real(), m(r, c).imag()});
  return a;
}

inline Eigen::MatrixXd real_matrix(const json& a, std::size_t rows, std::size_t cols) {
  if (!a.is_array() || a.size() != rows * cols) throw FormatError("values array has the wrong length");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[k++].get<double>();
  return m;
}

inline Eigen::MatrixXcd complex_matrix(const json& a, std::size_t rows, std::size_t cols) {
  if (!a.is_array() || a.size() != rows * cols) throw FormatError("values array has the wrong length");
  Eigen::MatrixXcd m(rows, cols);
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const json& v = a[k++];
      if (!v.is_array() || v.size() != 2) throw FormatError("complex entries must be [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cplx(v[0].get<double>(), v[1].get<double>());
    }
  return m;
}

inline json envelope(const char* type, json grids, json values, json meta) {
  json j;
  j["type"] = type;
  j["grids"] = std::move(grids);
  j["values"] = std::move(values);
  meta["units"] = "hbar=1";
  j["meta"] = std::move(meta);
  j["schema"] = schema_version;
  return j;
}

inline void expect_type(const json& j, const char* type) {
  if (!j.is_object()) throw FormatError("manifest must be a JSON object");
  if (j.value("schema", 0) != schema_version) throw FormatError("unsupported manifest schema");
  if (j.value("type", std::string()) != type) throw FormatError(std::string("expected a manifest of type ") + type);
}

}  // namespace io_detail

/// Optical samples; values are row-major over (X, phi).
inline json to_json(const Tomogram& t, json meta = json::object()) {
  if (t.is_analytic()) fail(ErrorKind::InvalidArgument, "sample an analytic tomogram before serializing");
  const auto& s = t.samples();
  meta["label"] = t.label();
  return io_detail::envelope("Tomogram",
                             {{"x", io_detail::grid_json(s.x)}, {"phi", io_detail::grid_json(s.phi)}},
                             io_detail::real_values(s.values), std::move(meta));
}

inline json to_json(const WignerGrid& w, json meta = json::object()) {
  return io_detail::envelope("WignerGrid", {{"q", io_detail::grid_json(w.q)}, {"p", io_detail::grid_json(w.p)}},
                             io_detail::real_values(w.values), std::move(meta));
}

inline json to_json(const PhaseDensity& f, json meta = json::object()) {
  return io_detail::envelope("PhaseDensity", {{"q", io_detail::grid_json(f.q)}, {"p", io_detail::grid_json(f.p)}},
                             io_detail::real_values(f.values), std::move(meta));
}

inline json to_json(const DensityKernel& r, json meta = json::object()) {
  return io_detail::envelope("DensityKernel", {{"x", io_detail::grid_json(r.x)}},
                             io_detail::complex_values(r.values), std::move(meta));
}

inline json to_json(const WaveFunction& psi, json meta = json::object()) {
  return io_detail::envelope("WaveFunction", {{"x", io_detail::grid_json(psi.x)}},
                             io_detail::complex_values(psi.values), std::move(meta));
}

inline json to_json(const SpinState& s, json meta = json::object()) {
  meta["j"] = s.j;
  return io_detail::envelope("SpinState", {{"m", {{"max", s.j}, {"n", spin_dim(s.j)}}}},
                             io_detail::complex_values(s.rho), std::move(meta));
}

/// values are row-major over (m, alpha, beta).
inline json to_json(const SpinTomogram& t, json meta = json::object()) {
  meta["j"] = t.j;
  json values = json::array();
  for (const auto& v : t.values)
    for (const auto& x : io_detail::real_values(v)) values.push_back(x);
  json grids{{"m", {{"max", t.j}, {"n", spin_dim(t.j)}}},
             {"alpha", io_detail::grid_json(t.alpha)},
             {"beta", {{"nodes", t.beta}, {"rule", t.beta_rule == BetaRule::GaussLegendre ? "gauss-legendre" : "uniform"}}}};
  return io_detail::envelope("SpinTomogram", std::move(grids), std::move(values), std::move(meta));
}

inline Tomogram tomogram_from_json(const json& j) {
  io_detail::expect_type(j, "Tomogram");
  const Grid1D x = io_detail::grid_from(j.at("grids").at("x"));
  const Grid1D phi = io_detail::grid_from(j.at("grids").at("phi"));
  return Tomogram(OpticalSamples{x, phi, io_detail::real_matrix(j.at("values"), x.size(), phi.size())});
}

inline WignerGrid wigner_from_json(const json& j) {
  io_detail::expect_type(j, "WignerGrid");
  const Grid1D q = io_detail::grid_from(j.at("grids").at("q"));
  const Grid1D p = io_detail::grid_from(j.at("grids").at("p"));
  return {q, p, io_detail::real_matrix(j.at("values"), q.size(), p.size())};
}

inline SpinState spin_state_from_json(const json& j) {
  io_detail::expect_type(j, "SpinState");
  const double jj = j.at("meta").at("j").get<double>();
  const std::size_t n = spin_dim(jj);
  return {jj, io_detail::complex_matrix(j.at("values"), n, n)};
}

inline SpinTomogram spin_tomogram_from_json(const json& j) {
  io_detail::expect_type(j, "SpinTomogram");
  SpinTomogram t{j.at("meta").at("j").get<double>(), io_detail::grid_from(j.at("grids").at("alpha")), {},
                 BetaRule::Uniform, {}};
  const json& beta = j.at("grids").at("beta");
  t.beta = beta.at("nodes").get<std::vector<double>>();
  t.beta_rule = beta.at("rule").get<std::string>() == "gauss-legendre" ? BetaRule::GaussLegendre : BetaRule::Uniform;
  const std::size_t n = spin_dim(t.j), na = t.alpha.size(), nb = t.beta.size();
  const json& v = j.at("values");
  if (!v.is_array() || v.size() != n * na * nb) throw FormatError("values array has the wrong length");
  for (std::size_t m = 0; m < n; ++m) {
    json slice(v.begin() + static_cast<long>(m * na * nb), v.begin() + static_cast<long>((m + 1) * na * nb));
    t.values.push_back(io_detail::real_matrix(slice, na, nb));
  }
  return t;
}

/// Parses a file; empty or malformed content raises FormatError.
inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw FormatError(path + " is empty");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(1) << '\n';
}

/// `# columns: a,b,value` followed by one row per grid node, a outer. Values
/// carry 10 significant digits; manifests keep full precision.
inline void write_csv(std::ostream& out, const std::string& a_name, const Grid1D& a, const std::string& b_name,
                      const std::vector<double>& b, const Eigen::MatrixXd& values) {
  out << "# columns: " << a_name << ',' << b_name << ",value\n";
  char buf[96];
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.10g\n", a[i], b[k],
                    values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
      out << buf;
    }
}

inline void write_csv(std::ostream& out, const std::string& a_name, const Grid1D& a, const std::string& b_name,
                      const Grid1D& b, const Eigen::MatrixXd& values) {
  write_csv(out, a_name, a, b_name, b.points(), values);
}

inline void write_csv_file(const std::string& path, const std::string& a_name, const Grid1D& a,
                           const std::string& b_name, const Grid1D& b, const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_csv(out, a_name, a, b_name, b, values);
}

}  // namespace tomo
