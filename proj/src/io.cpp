#include "wwl/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wwl/common.hpp"
#include "wwl/instances.hpp"

namespace wwl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
  return doc;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << doc.dump(1) << "\n";
}

Eigen::VectorXd measure_from(const json& doc, const std::string& path) {
  if (!doc.contains("measure") || !doc["measure"].is_array())
    throw ValidationError(path + ": missing `measure` array");
  const auto& arr = doc["measure"];
  Eigen::VectorXd mu(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    mu[static_cast<int>(i)] = arr[i].get<double>();
    if (!(mu[static_cast<int>(i)] > 0.0))
      throw ValidationError(path + ": measure[" + std::to_string(i) +
                            "] is not positive");
  }
  return mu;
}

std::shared_ptr<const MetricMeasureSpace> space_from_coordinates(
    const json& doc, Eigen::VectorXd mu, const std::string& label,
    const std::string& path) {
  const std::string metric = doc.at("metric").get<std::string>();
  const auto& coords = doc.at("coordinates");
  const int n = static_cast<int>(coords.size());
  if (n != mu.size())
    throw ValidationError(path + ": coordinates/measure length mismatch");

  if (metric == "circle_geodesic") {
    if (!doc.contains("circumference"))
      throw ValidationError(path + ": circle_geodesic needs `circumference`");
    const double c = doc["circumference"].get<double>();
    if (!(c > 0.0)) throw ValidationError(path + ": circumference must be > 0");
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& row = coords[static_cast<std::size_t>(i)];
      s[static_cast<std::size_t>(i)] =
          row.is_array() ? row[0].get<double>() : row.get<double>();
    }
    auto dist = [s, c](int i, int j) {
      const double a = std::abs(s[static_cast<std::size_t>(i)] -
                                s[static_cast<std::size_t>(j)]);
      const double m = std::fmod(a, c);
      return std::min(m, c - m);
    };
    return std::make_shared<const MetricMeasureSpace>(
        MetricMeasureSpace::from_oracle(n, dist, std::move(mu), label));
  }

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n));
  int dim = -1;
  for (int i = 0; i < n; ++i) {
    const auto& row = coords[static_cast<std::size_t>(i)];
    if (!row.is_array())
      throw ValidationError(path + ": coordinates rows must be arrays");
    if (dim < 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      throw ValidationError(path + ": ragged coordinates");
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v[d] = row[static_cast<std::size_t>(d)];
    pts[static_cast<std::size_t>(i)] = std::move(v);
  }

  if (metric == "euclidean") {
    auto dist = [pts](int i, int j) {
      return (pts[static_cast<std::size_t>(i)] -
              pts[static_cast<std::size_t>(j)])
          .norm();
    };
    return std::make_shared<const MetricMeasureSpace>(
        MetricMeasureSpace::from_oracle(n, dist, std::move(mu), label));
  }
  if (metric == "sphere_geodesic" || metric == "cc_ball_box") {
    if (dim != 3)
      throw ValidationError(path + ": " + metric + " needs 3-d coordinates");
    Eigen::MatrixX3d m3(n, 3);
    for (int i = 0; i < n; ++i) m3.row(i) = pts[static_cast<std::size_t>(i)];
    if (metric == "sphere_geodesic") {
      auto dist = [m3](int i, int j) {
        const double dot = std::clamp(m3.row(i).dot(m3.row(j)), -1.0, 1.0);
        return std::acos(dot);
      };
      return std::make_shared<const MetricMeasureSpace>(
          MetricMeasureSpace::from_oracle(n, dist, std::move(mu), label));
    }
    Eigen::MatrixXd cc = cc_ball_box_distances(m3);
    return std::make_shared<const MetricMeasureSpace>(
        MetricMeasureSpace::from_matrix(std::move(cc), std::move(mu), label));
  }
  throw ValidationError(path + ": unknown metric tag `" + metric + "`");
}

}  // namespace

std::shared_ptr<const MetricMeasureSpace> load_space(const std::string& path) {
  const json doc = read_json(path);
  const std::string label = doc.value("label", std::string("space"));
  Eigen::VectorXd mu = measure_from(doc, path);
  const bool has_matrix = doc.contains("distance_matrix");
  const bool has_coords = doc.contains("coordinates");
  if (has_matrix == has_coords)
    throw ValidationError(
        path + ": need exactly one of `distance_matrix` or `coordinates`");

  std::shared_ptr<const MetricMeasureSpace> space;
  if (has_matrix) {
    const auto& tri = doc["distance_matrix"];
    std::vector<double> values;
    values.reserve(tri.size());
    for (const auto& v : tri) values.push_back(v.get<double>());
    try {
      space = std::make_shared<const MetricMeasureSpace>(
          MetricMeasureSpace::from_lower_triangle(values, std::move(mu),
                                                  label));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  } else {
    space = space_from_coordinates(doc, std::move(mu), label, path);
  }

  const TriangleCheck tri = check_triangle_inequality(*space, 100000, 7);
  if (tri.violations > 0)
    throw ValidationError(
        path + ": triangle inequality fails at points (" +
        std::to_string(tri.witness[0]) + "," + std::to_string(tri.witness[1]) +
        "," + std::to_string(tri.witness[2]) + "), excess " +
        std::to_string(tri.worst_excess));
  return space;
}

void save_space(const MetricMeasureSpace& space, const std::string& path) {
  json doc;
  doc["label"] = space.label();
  doc["ball_convention"] = "open: membership uses d(x,y) < r";
  const int n = space.point_count();
  json mu = json::array();
  for (int i = 0; i < n; ++i) mu.push_back(space.mu(i));
  doc["measure"] = std::move(mu);
  json tri = json::array();
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) tri.push_back(space.distance(i, j));
  doc["distance_matrix"] = std::move(tri);
  write_json(doc, path);
}

void save_space_coordinates(const CoordinateSpace& cs,
                            const std::string& path) {
  json doc;
  doc["label"] = cs.label;
  doc["ball_convention"] = "open: membership uses d(x,y) < r";
  doc["measure"] = cs.measure;
  doc["metric"] = cs.metric;
  if (cs.metric == "circle_geodesic") doc["circumference"] = cs.circumference;
  doc["coordinates"] = cs.coordinates;
  write_json(doc, path);
}

void save_operator(const DirichletOperator& op, const std::string& space_path,
                   const std::string& path) {
  json doc;
  doc["space_file"] = space_path;
  json triples = json::array();
  for (const auto& e : op.edges())
    triples.push_back(json::array({e.i, e.j, e.w}));
  doc["triples"] = std::move(triples);
  write_json(doc, path);
}

DirichletOperator load_operator(const std::string& path) {
  const json doc = read_json(path);
  if (!doc.contains("space_file"))
    throw ValidationError(path + ": missing `space_file` reference");
  fs::path ref = doc["space_file"].get<std::string>();
  if (ref.is_relative()) ref = fs::path(path).parent_path() / ref;
  auto space = load_space(ref.string());
  std::vector<DirichletOperator::Edge> edges;
  for (const auto& t : doc.at("triples")) {
    if (!t.is_array() || t.size() != 3)
      throw ValidationError(path + ": triples must be [i, j, w]");
    edges.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
  }
  return DirichletOperator::from_edges(std::move(space), edges,
                                       /*require_nonnegative=*/false);
}

void save_lattice(const Lattice& lattice, const std::string& path) {
  json doc;
  doc["rho"] = lattice.rho;
  doc["centers"] = lattice.centers;
  doc["multiplicity"] = lattice.multiplicity;
  doc["strategy_seed"] = lattice.strategy_seed;
  write_json(doc, path);
}

Lattice load_lattice(const MetricMeasureSpace& space,
                     const std::string& path) {
  const json doc = read_json(path);
  Lattice lat;
  lat.rho = doc.at("rho").get<double>();
  lat.centers = doc.at("centers").get<std::vector<int>>();
  lat.multiplicity = doc.at("multiplicity").get<int>();
  lat.strategy_seed = doc.value("strategy_seed", 0ULL);
  for (int c : lat.centers)
    if (c < 0 || c >= space.point_count())
      throw ValidationError(path + ": center index out of range");
  return lat;
}

std::string operator_content_hash(const DirichletOperator& op) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the raw bytes
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t n = op.space().point_count();
  mix(&n, sizeof n);
  for (int i = 0; i < n; ++i) {
    const double m = op.space().mu(i);
    mix(&m, sizeof m);
  }
  for (const auto& e : op.edges()) {
    mix(&e.i, sizeof e.i);
    mix(&e.j, sizeof e.j);
    mix(&e.w, sizeof e.w);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

void save_spectrum(const SpectralDecomposition& dec, const std::string& dir,
                   const std::string& key, bool with_eigenvectors) {
  fs::create_directories(dir);
  const fs::path eigs = fs::path(dir) / (key + ".eigs.txt");
  std::ofstream out(eigs);
  if (!out) throw ValidationError("cannot write " + eigs.string());
  char buf[40];
  for (int l = 0; l < dec.size(); ++l) {
    std::snprintf(buf, sizeof buf, "%.17g\n", dec.eigenvalues[l]);
    out << buf;
  }
  out.close();
  if (!with_eigenvectors) return;
  const fs::path evec = fs::path(dir) / (key + ".evec.bin");
  std::ofstream bin(evec, std::ios::binary);
  if (!bin) throw ValidationError("cannot write " + evec.string());
  const char magic[8] = {'W', 'W', 'L', 'E', 'V', 'E', 'C', '1'};
  bin.write(magic, 8);
  const std::int64_t n = dec.size();
  bin.write(reinterpret_cast<const char*>(&n), sizeof n);
  bin.write(reinterpret_cast<const char*>(&dec.residual_tol),
            sizeof dec.residual_tol);
  bin.write(reinterpret_cast<const char*>(dec.eigenvectors.data()),
            static_cast<std::streamsize>(sizeof(double) * n * n));
}

std::optional<SpectralDecomposition> load_spectrum(
    std::shared_ptr<const MetricMeasureSpace> space, const std::string& dir,
    const std::string& key) {
  const fs::path eigs = fs::path(dir) / (key + ".eigs.txt");
  if (!fs::exists(eigs)) return std::nullopt;
  SpectralDecomposition dec;
  dec.space = std::move(space);
  std::ifstream in(eigs);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  const int n = dec.space->point_count();
  if (static_cast<int>(values.size()) != n)
    throw ValidationError(eigs.string() + ": eigenvalue count mismatch");
  dec.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), n);

  const fs::path evec = fs::path(dir) / (key + ".evec.bin");
  if (!fs::exists(evec)) return std::nullopt;
  std::ifstream bin(evec, std::ios::binary);
  char magic[8];
  bin.read(magic, 8);
  if (std::string(magic, 8) != "WWLEVEC1")
    throw ValidationError(evec.string() + ": bad magic");
  std::int64_t stored = 0;
  bin.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (stored != n)
    throw ValidationError(evec.string() + ": eigenvector block size mismatch");
  bin.read(reinterpret_cast<char*>(&dec.residual_tol),
           sizeof dec.residual_tol);
  dec.eigenvectors.resize(n, n);
  bin.read(reinterpret_cast<char*>(dec.eigenvectors.data()),
           static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!bin) throw ValidationError(evec.string() + ": truncated block");
  return dec;
}

void write_table(const std::string& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write table: " + path);
  for (std::size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? '\t' : '\n');
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.12g", row[c]);
      out << buf << (c + 1 < row.size() ? '\t' : '\n');
    }
  }
}

}  // namespace wwl
